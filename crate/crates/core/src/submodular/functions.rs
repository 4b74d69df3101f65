//! Concrete set functions: weighted coverage and modular (additive) values.

use super::SetFunction;
use crate::error::{Error, Result};

/// Weighted coverage: element `i` of the ground set covers `sets[i]`, a list
/// of universe items, and `f(S)` is the total weight of the union of the
/// covered items. Monotone and submodular.
#[derive(Debug, Clone)]
pub struct CoverageFunction {
    weights: Vec<f64>,
    sets: Vec<Vec<usize>>,
}

impl CoverageFunction {
    pub fn new(weights: Vec<f64>, sets: Vec<Vec<usize>>) -> Result<Self> {
        for w in &weights {
            if !w.is_finite() || *w < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "coverage weights must be finite and nonnegative, got {w}"
                )));
            }
        }
        for (i, s) in sets.iter().enumerate() {
            if let Some(&item) = s.iter().find(|&&item| item >= weights.len()) {
                return Err(Error::InvalidInstance(format!(
                    "set {i} covers item {item}, but the universe has {} items",
                    weights.len()
                )));
            }
        }
        Ok(CoverageFunction { weights, sets })
    }

    pub fn universe_size(&self) -> usize {
        self.weights.len()
    }

    pub fn universe_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn covered_items(&self, set: &[usize]) -> Vec<usize> {
        let mut hit = vec![false; self.weights.len()];
        for &g in set {
            for &item in &self.sets[g] {
                hit[item] = true;
            }
        }
        (0..self.weights.len()).filter(|&i| hit[i]).collect()
    }
}

impl SetFunction for CoverageFunction {
    fn ground_size(&self) -> usize {
        self.sets.len()
    }

    fn eval(&self, set: &[usize]) -> f64 {
        let mut hit = vec![false; self.weights.len()];
        let mut total = 0.0;
        for &g in set {
            for &item in &self.sets[g] {
                if !hit[item] {
                    hit[item] = true;
                    total += self.weights[item];
                }
            }
        }
        total
    }
}

/// Additive function `f(S) = sum of values over S`. Monotone and submodular
/// when all values are nonnegative.
#[derive(Debug, Clone)]
pub struct ModularFunction {
    values: Vec<f64>,
}

impl ModularFunction {
    pub fn new(values: Vec<f64>) -> Self {
        ModularFunction { values }
    }
}

impl SetFunction for ModularFunction {
    fn ground_size(&self) -> usize {
        self.values.len()
    }

    fn eval(&self, set: &[usize]) -> f64 {
        set.iter().map(|&e| self.values[e]).sum()
    }
}
