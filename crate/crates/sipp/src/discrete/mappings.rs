//! Component sizes of uniform random mappings [n] → [n], whose rescaled
//! ordered sizes converge to Poisson–Dirichlet with θ = 1/2.

use crate::error::{Error, Result};
use crate::stream::RngStream;
use rand::Rng;

/// Weakly-connected component sizes of a uniform mapping, descending.
///
/// Iterative pointer-chasing: walk each unvisited node's forward orbit with
/// an in-progress marker until it hits either a marked node of the current
/// walk (a new cycle, hence a new component) or an already-labelled node.
pub fn random_mapping_components(n: usize, stream: RngStream) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::invalid("need n >= 1"));
    }
    let mut rng = stream.rng();
    let f: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();

    const UNSEEN: usize = usize::MAX;
    const IN_PROGRESS: usize = usize::MAX - 1;
    let mut label = vec![UNSEEN; n];
    let mut sizes: Vec<u64> = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    for start in 0..n {
        if label[start] != UNSEEN {
            continue;
        }
        path.clear();
        let mut x = start;
        while label[x] == UNSEEN {
            label[x] = IN_PROGRESS;
            path.push(x);
            x = f[x];
        }
        let comp = if label[x] == IN_PROGRESS {
            sizes.push(0);
            sizes.len() - 1
        } else {
            label[x]
        };
        sizes[comp] += path.len() as u64;
        for &node in &path {
            label[node] = comp;
        }
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    Ok(sizes)
}
