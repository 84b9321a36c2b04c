//! Uniform-grid export of a tabulated special function as CSV or JSON.

use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "function")]
pub enum TableKind {
    Rho,
    Omega,
    GTheta { theta: f64 },
    JBeta { theta: f64, beta: f64 },
}

impl std::fmt::Display for TableKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TableKind::Rho => write!(f, "rho"),
            TableKind::Omega => write!(f, "omega"),
            TableKind::GTheta { theta } => write!(f, "g[theta={theta}]"),
            TableKind::JBeta { theta, beta } => write!(f, "j[theta={theta},beta={beta}]"),
        }
    }
}

/// A special function tabulated on a uniform grid with a certified uniform
/// error bound.
#[derive(Debug, Clone, Serialize)]
pub struct FunctionTable {
    pub kind: TableKind,
    pub grid_start: f64,
    pub grid_step: f64,
    pub error_bound: f64,
    pub values: Vec<f64>,
}

impl FunctionTable {
    pub fn new(
        kind: TableKind,
        grid_start: f64,
        grid_step: f64,
        values: Vec<f64>,
        error_bound: f64,
    ) -> Result<Self> {
        if !(grid_step > 0.0) || !error_bound.is_finite() || error_bound < 0.0 {
            return Err(Error::invalid("grid_step must be positive, error_bound finite"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("table values must be finite"));
        }
        let slack = 2.0 * error_bound + 1e-12;
        match kind {
            TableKind::Rho => {
                for (i, w) in values.windows(2).enumerate() {
                    let u = grid_start + i as f64 * grid_step;
                    if u >= 1.0 && w[1] > w[0] + slack {
                        return Err(Error::Structural(format!(
                            "rho must be nonincreasing past 1, violated at u={u}"
                        )));
                    }
                }
            }
            TableKind::GTheta { .. } => {
                if values.iter().any(|&v| v < -slack) {
                    return Err(Error::Structural("g must be nonnegative".into()));
                }
            }
            _ => {}
        }
        Ok(Self { kind, grid_start, grid_step, error_bound, values })
    }

    /// CSV with header `u,value,error_bound`, full round-trip precision.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,value,error_bound\n");
        for (i, v) in self.values.iter().enumerate() {
            let u = self.grid_start + i as f64 * self.grid_step;
            out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", u, v, self.error_bound));
        }
        out
    }

    /// JSON with grid metadata echoed.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("FunctionTable serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_shape_and_precision() {
        let t = FunctionTable::new(
            TableKind::Rho,
            0.0,
            0.5,
            vec![1.0, 1.0, 1.0, 1.0 - std::f64::consts::LN_2],
            1e-12,
        )
        .unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "u,value,error_bound");
        assert_eq!(lines.len(), 5);
        // value round-trips through the printed representation
        let last: Vec<&str> = lines[4].split(',').collect();
        assert_eq!(last[1].parse::<f64>().unwrap(), 1.0 - std::f64::consts::LN_2);
    }

    #[test]
    fn rho_must_be_nonincreasing() {
        assert!(FunctionTable::new(TableKind::Rho, 1.0, 0.5, vec![1.0, 0.5, 0.7], 1e-12).is_err());
        assert!(FunctionTable::new(
            TableKind::GTheta { theta: 1.0 },
            0.0,
            0.5,
            vec![0.3, -0.2],
            1e-12
        )
        .is_err());
    }

    #[test]
    fn json_contains_metadata() {
        let t = FunctionTable::new(
            TableKind::JBeta { theta: 1.0, beta: 0.25 },
            0.25,
            0.25,
            vec![1.0, 0.5],
            1e-10,
        )
        .unwrap();
        let j = t.to_json();
        assert!(j.contains("\"beta\": 0.25"));
        assert!(j.contains("\"grid_step\": 0.25"));
    }
}
