//! Restart wrapper: run a randomized maximizer several times with derived
//! seeds and keep the best outcome.

use crate::error::{Error, Result};
use crate::rng::derive_seed;

/// Run `run` once per round with a seed derived from `base_seed` and the
/// round index, and return the highest-value result. Ties keep the earliest
/// round, so a deterministic `run` yields exactly its single-run output.
pub fn boost_best_of<R>(tau: usize, base_seed: u64, mut run: R) -> Result<(Vec<usize>, f64)>
where
    R: FnMut(u64) -> Result<(Vec<usize>, f64)>,
{
    if tau == 0 {
        return Err(Error::InvalidParameter("boosting needs at least one round".into()));
    }
    let mut best: Option<(Vec<usize>, f64)> = None;
    for round in 0..tau {
        let (set, value) = run(derive_seed(base_seed, round as u64))?;
        if best.as_ref().is_none_or(|(_, bv)| value > *bv) {
            best = Some((set, value));
        }
    }
    Ok(best.expect("tau >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_runner_is_unchanged_by_boosting() {
        let run = |_seed: u64| Ok((vec![1, 2], 7.0));
        let single = boost_best_of(1, 99, run).unwrap();
        let many = boost_best_of(10, 99, run).unwrap();
        assert_eq!(single, many);
        assert_eq!(single.1, 7.0);
    }

    #[test]
    fn more_rounds_never_hurt() {
        let run = |seed: u64| {
            let v = (seed % 101) as f64;
            Ok((vec![seed as usize % 5], v))
        };
        let one = boost_best_of(1, 7, run).unwrap().1;
        let ten = boost_best_of(10, 7, run).unwrap().1;
        assert!(ten >= one);
    }

    #[test]
    fn zero_rounds_is_rejected() {
        assert!(boost_best_of(0, 0, |_| Ok((vec![], 0.0))).is_err());
    }

    #[test]
    fn errors_from_the_runner_propagate() {
        let r: Result<(Vec<usize>, f64)> = boost_best_of(3, 0, |_| {
            Err(Error::InvalidParameter("boom".into()))
        });
        assert!(r.is_err());
    }
}
