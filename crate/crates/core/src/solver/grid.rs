//! Geometric radius levels and the stream of (leader multiset, radius tuple)
//! guesses the solver enumerates.

use crate::error::{Error, Result};
use crate::metric::ceil_log_exponent;

/// The discrete radius values a guess may assign to a leader: an optional
/// zero level (present when some client sits exactly on a facility) followed
/// by the powers `(1+eps)^0 .. (1+eps)^max_exp` covering the rescaled
/// diameter.
#[derive(Debug, Clone)]
pub struct RadiusGrid {
    epsilon: f64,
    has_zero: bool,
    max_exp: i64,
}

impl RadiusGrid {
    /// `delta` is the largest distance the grid must reach (at least 1, as in
    /// a rescaled instance); `include_zero` adds the dedicated zero-radius
    /// level.
    pub fn new(epsilon: f64, delta: f64, include_zero: bool) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive and finite, got {epsilon}"
            )));
        }
        if !(delta >= 1.0) || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "radius grid needs a diameter of at least 1, got {delta}"
            )));
        }
        let max_exp = ceil_log_exponent(delta, epsilon).max(0);
        Ok(RadiusGrid { epsilon, has_zero: include_zero, max_exp })
    }

    pub fn num_levels(&self) -> usize {
        (self.max_exp as usize + 1) + usize::from(self.has_zero)
    }

    pub fn has_zero_level(&self) -> bool {
        self.has_zero
    }

    /// Radius value of a level index.
    pub fn value(&self, level: usize) -> f64 {
        match self.exponent(level) {
            None => 0.0,
            Some(m) => (1.0 + self.epsilon).powi(m as i32),
        }
    }

    /// `None` for the zero level, otherwise the power.
    pub fn exponent(&self, level: usize) -> Option<i64> {
        debug_assert!(level < self.num_levels());
        if self.has_zero {
            if level == 0 {
                None
            } else {
                Some(level as i64 - 1)
            }
        } else {
            Some(level as i64)
        }
    }

    /// Level whose rounded radius equals the rounded value of `d`, i.e. the
    /// level a facility at distance `d` from a leader belongs to. `None` only
    /// for `d = 0` on a grid without a zero level.
    pub fn level_of(&self, d: f64) -> Option<usize> {
        if d == 0.0 {
            return if self.has_zero { Some(0) } else { None };
        }
        let e = ceil_log_exponent(d, self.epsilon).clamp(0, self.max_exp);
        Some(e as usize + usize::from(self.has_zero))
    }
}

/// One enumerated guess: `leaders[i]` is a client index (non-decreasing
/// across slots) and `levels[i]` indexes the radius grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuessContext {
    pub leaders: Vec<usize>,
    pub levels: Vec<usize>,
}

/// Number of guesses the stream yields: multisets of `k` leaders out of
/// `num_clients` times `num_levels^k` radius tuples, saturating at `u128::MAX`.
pub fn guess_count(num_clients: usize, k: usize, num_levels: usize) -> u128 {
    if num_clients == 0 {
        return 0;
    }
    // C(num_clients + k - 1, k), computed incrementally; each prefix product
    // is itself a binomial coefficient, so the division is exact.
    let mut multisets: u128 = 1;
    for i in 0..k {
        let numer = (num_clients + i) as u128;
        multisets = match multisets.checked_mul(numer) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    let mut radii: u128 = 1;
    for _ in 0..k {
        radii = match radii.checked_mul(num_levels as u128) {
            Some(v) => v,
            None => return u128::MAX,
        };
    }
    multisets.checked_mul(radii).unwrap_or(u128::MAX)
}

/// Streams every guess in lexicographic order: leader multisets ascending,
/// and for each multiset all radius tuples as an odometer.
pub struct GuessStream {
    num_clients: usize,
    num_levels: usize,
    leaders: Vec<usize>,
    levels: Vec<usize>,
    started: bool,
    done: bool,
}

impl GuessStream {
    pub fn new(num_clients: usize, k: usize, num_levels: usize) -> Self {
        GuessStream {
            num_clients,
            num_levels,
            leaders: vec![0; k],
            levels: vec![0; k],
            started: false,
            done: num_clients == 0 || num_levels == 0 || k == 0,
        }
    }

    fn advance(&mut self) -> bool {
        // Innermost: radius odometer.
        for i in (0..self.levels.len()).rev() {
            self.levels[i] += 1;
            if self.levels[i] < self.num_levels {
                return true;
            }
            self.levels[i] = 0;
        }
        // Outer: next non-decreasing leader multiset.
        for i in (0..self.leaders.len()).rev() {
            if self.leaders[i] + 1 < self.num_clients {
                let v = self.leaders[i] + 1;
                for slot in &mut self.leaders[i..] {
                    *slot = v;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for GuessStream {
    type Item = GuessContext;

    fn next(&mut self) -> Option<GuessContext> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(GuessContext { leaders: self.leaders.clone(), levels: self.levels.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_levels_cover_powers_up_to_the_diameter() {
        let g = RadiusGrid::new(1.0, 8.0, false).unwrap();
        assert_eq!(g.num_levels(), 4);
        assert_eq!(
            (0..4).map(|l| g.value(l)).collect::<Vec<_>>(),
            vec![1.0, 2.0, 4.0, 8.0]
        );
    }

    #[test]
    fn zero_level_sits_at_index_zero() {
        let g = RadiusGrid::new(1.0, 4.0, true).unwrap();
        assert_eq!(g.num_levels(), 4);
        assert_eq!(g.value(0), 0.0);
        assert_eq!(g.exponent(0), None);
        assert_eq!(g.value(1), 1.0);
        assert_eq!(g.level_of(0.0), Some(0));
        assert_eq!(g.level_of(1.0), Some(1));
        assert_eq!(g.level_of(3.0), Some(3));
    }

    #[test]
    fn level_of_rounds_up_to_the_next_power() {
        let g = RadiusGrid::new(1.0, 8.0, false).unwrap();
        assert_eq!(g.level_of(1.0), Some(0));
        assert_eq!(g.level_of(1.5), Some(1));
        assert_eq!(g.level_of(2.0), Some(1));
        assert_eq!(g.level_of(5.0), Some(3));
        assert_eq!(g.level_of(8.0), Some(3));
        assert_eq!(g.level_of(0.0), None);
    }

    #[test]
    fn count_matches_the_closed_form_on_small_cases() {
        // C(2 + 2 - 1, 2) * 4^2 = 3 * 16.
        assert_eq!(guess_count(2, 2, 4), 48);
        // C(5, 3) * 2^3 = 10 * 8.
        assert_eq!(guess_count(3, 3, 2), 80);
        assert_eq!(guess_count(1, 1, 1), 1);
        assert_eq!(guess_count(0, 2, 3), 0);
    }

    #[test]
    fn count_saturates_instead_of_overflowing() {
        assert_eq!(guess_count(usize::MAX / 2, 40, usize::MAX / 2), u128::MAX);
    }

    #[test]
    fn stream_yields_exactly_count_guesses_with_sorted_leaders() {
        for (c, k, l) in [(2, 2, 4), (3, 3, 2), (4, 1, 3), (1, 2, 2)] {
            let expected = guess_count(c, k, l);
            let mut seen = std::collections::HashSet::new();
            let mut total: u128 = 0;
            for g in GuessStream::new(c, k, l) {
                assert!(g.leaders.windows(2).all(|w| w[0] <= w[1]));
                assert!(g.leaders.iter().all(|&x| x < c));
                assert!(g.levels.iter().all(|&x| x < l));
                assert!(seen.insert((g.leaders.clone(), g.levels.clone())));
                total += 1;
            }
            assert_eq!(total, expected, "c={c} k={k} l={l}");
        }
    }

    #[test]
    fn stream_order_is_lexicographic() {
        let all: Vec<GuessContext> = GuessStream::new(2, 2, 2).collect();
        assert_eq!(all[0], GuessContext { leaders: vec![0, 0], levels: vec![0, 0] });
        assert_eq!(all[1], GuessContext { leaders: vec![0, 0], levels: vec![0, 1] });
        assert_eq!(all[4], GuessContext { leaders: vec![0, 1], levels: vec![0, 0] });
        assert_eq!(all.last().unwrap(), &GuessContext {
            leaders: vec![1, 1],
            levels: vec![1, 1]
        });
    }
}
