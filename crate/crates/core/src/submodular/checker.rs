//! Exhaustive verification that a set function is normalized, monotone and
//! submodular, with an explicit counterexample when it is not.

use super::SetFunction;
use crate::error::{Error, Result};

/// Largest ground set the exhaustive checker accepts (2^n table).
pub const CHECKER_GROUND_LIMIT: usize = 20;

/// Outcome of [`check_set_function`].
#[derive(Debug, Clone)]
pub struct SetFunctionReport {
    /// `f(empty) = 0` up to tolerance.
    pub normalized: bool,
    pub monotone: bool,
    pub submodular: bool,
    /// Human-readable witness of the first failed property, if any.
    pub counterexample: Option<String>,
}

impl SetFunctionReport {
    pub fn all_hold(&self) -> bool {
        self.normalized && self.monotone && self.submodular
    }
}

fn bits_to_set(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&e| mask & (1 << e) != 0).collect()
}

/// Tabulate `f` on all subsets and check, exhaustively:
/// normalization, monotonicity (`f(S + e) >= f(S)`), and submodularity via
/// the pairwise characterization
/// `f(S + x) + f(S + y) >= f(S + x + y) + f(S)` for all `S` and `x != y`
/// outside `S`. Comparisons use an absolute tolerance scaled by the largest
/// magnitude of `f`.
pub fn check_set_function(f: &dyn SetFunction, tolerance: f64) -> Result<SetFunctionReport> {
    let n = f.ground_size();
    if n > CHECKER_GROUND_LIMIT {
        return Err(Error::VerifyTooLarge(format!(
            "exhaustive set-function check supports ground sets up to {CHECKER_GROUND_LIMIT}, got {n}"
        )));
    }
    let size = 1usize << n;
    let mut table = vec![0.0; size];
    for mask in 0..size {
        table[mask] = f.eval(&bits_to_set(mask as u32, n));
    }
    let scale = table.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = tolerance * scale;

    let mut report = SetFunctionReport {
        normalized: true,
        monotone: true,
        submodular: true,
        counterexample: None,
    };
    if table[0].abs() > tol {
        report.normalized = false;
        report.counterexample = Some(format!("f(empty set) = {}, expected 0", table[0]));
        return Ok(report);
    }
    for mask in 0..size {
        for e in 0..n {
            if mask & (1 << e) != 0 {
                continue;
            }
            let grown = mask | (1 << e);
            if table[grown] < table[mask] - tol {
                report.monotone = false;
                report.counterexample = Some(format!(
                    "monotonicity fails: f({:?} + {e}) = {} < {} = f({:?})",
                    bits_to_set(mask as u32, n),
                    table[grown],
                    table[mask],
                    bits_to_set(mask as u32, n),
                ));
                return Ok(report);
            }
        }
    }
    for mask in 0..size {
        for x in 0..n {
            if mask & (1 << x) != 0 {
                continue;
            }
            for y in (x + 1)..n {
                if mask & (1 << y) != 0 {
                    continue;
                }
                let sx = table[mask | (1 << x)];
                let sy = table[mask | (1 << y)];
                let sxy = table[mask | (1 << x) | (1 << y)];
                if sx + sy < sxy + table[mask] - tol {
                    report.submodular = false;
                    report.counterexample = Some(format!(
                        "submodularity fails at S = {:?}, x = {x}, y = {y}: \
                         f(S+x) + f(S+y) = {} < {} = f(S+x+y) + f(S)",
                        bits_to_set(mask as u32, n),
                        sx + sy,
                        sxy + table[mask],
                    ));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}
