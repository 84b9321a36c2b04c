//! Discrete structures with Poisson–Dirichlet / scale-invariant limits:
//! random permutation cycle counts, prime factorizations of uniform
//! integers, smooth/rough counting, random mappings, and divisor measures.

mod integers;
mod mappings;
mod permutations;

pub use integers::{
    divisor_measure, divisors, factor_uniform_integer, factorize, levy_distance,
    smooth_rough_counts, FactorMultiset,
};
pub use mappings::random_mapping_components;
pub use permutations::{
    cycle_type_law_brute_force, exact_cycle_law_check, exact_prefix_tv, ewens_cycle_counts,
    CycleCounts, CycleLawReport,
};
