//! 3-CNF formulas in signed-literal form, with seeded random and
//! planted-satisfiable generators.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// A 3-CNF formula. Literals are DIMACS-style signed integers: `v + 1`
/// stands for variable `v`, negation flips the sign, and a clause may
/// mention the same variable more than once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeSatFormula {
    pub num_vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl ThreeSatFormula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        let f = ThreeSatFormula { num_vars, clauses };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_vars == 0 {
            return Err(Error::InvalidInstance("formula declares no variables".into()));
        }
        for (ci, clause) in self.clauses.iter().enumerate() {
            for &lit in clause {
                if lit == 0 {
                    return Err(Error::InvalidInstance(format!(
                        "clause {ci} contains the literal 0"
                    )));
                }
                let var = lit.unsigned_abs() as usize - 1;
                if var >= self.num_vars {
                    return Err(Error::InvalidInstance(format!(
                        "clause {ci} mentions undeclared variable {}",
                        var + 1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Variable index and polarity (`true` = positive) of a literal.
    pub fn literal(lit: i32) -> (usize, bool) {
        (lit.unsigned_abs() as usize - 1, lit > 0)
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        debug_assert_eq!(assignment.len(), self.num_vars);
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let (var, positive) = Self::literal(lit);
                assignment[var] == positive
            })
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("formula serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: ThreeSatFormula = serde_json::from_str(text)?;
        f.validate()?;
        Ok(f)
    }
}

/// A uniformly random formula: each clause draws three distinct variables
/// (when at least three exist) and independent polarities.
pub fn random_three_sat(num_vars: usize, num_clauses: usize, seed: u64) -> Result<ThreeSatFormula> {
    let mut rng = rng_from_seed(seed);
    let clauses = (0..num_clauses)
        .map(|_| random_clause(&mut rng, num_vars))
        .collect();
    ThreeSatFormula::new(num_vars, clauses)
}

/// A random formula guaranteed satisfiable by a hidden assignment, which is
/// returned alongside it: any all-false clause gets one literal flipped to
/// agree with the assignment.
pub fn planted_three_sat(
    num_vars: usize,
    num_clauses: usize,
    seed: u64,
) -> Result<(ThreeSatFormula, Vec<bool>)> {
    if num_vars == 0 {
        return Err(Error::InvalidInstance("formula declares no variables".into()));
    }
    let mut rng = rng_from_seed(seed);
    let hidden: Vec<bool> = (0..num_vars).map(|_| rng.random()).collect();
    let clauses: Vec<[i32; 3]> = (0..num_clauses)
        .map(|_| {
            let mut clause = random_clause(&mut rng, num_vars);
            let satisfied = clause.iter().any(|&lit| {
                let (var, positive) = ThreeSatFormula::literal(lit);
                hidden[var] == positive
            });
            if !satisfied {
                let slot = rng.random_range(0..3);
                let (var, _) = ThreeSatFormula::literal(clause[slot]);
                clause[slot] = if hidden[var] { var as i32 + 1 } else { -(var as i32 + 1) };
            }
            clause
        })
        .collect();
    let formula = ThreeSatFormula::new(num_vars, clauses)?;
    debug_assert!(formula.is_satisfied_by(&hidden));
    Ok((formula, hidden))
}

fn random_clause(rng: &mut impl Rng, num_vars: usize) -> [i32; 3] {
    let mut vars = [0usize; 3];
    if num_vars >= 3 {
        let mut pool: Vec<usize> = (0..num_vars).collect();
        for (slot, v) in vars.iter_mut().enumerate() {
            let j = rng.random_range(slot..num_vars);
            pool.swap(slot, j);
            *v = pool[slot];
        }
    } else {
        for v in vars.iter_mut() {
            *v = rng.random_range(0..num_vars);
        }
    }
    vars.map(|v| {
        let lit = v as i32 + 1;
        if rng.random::<bool>() {
            lit
        } else {
            -lit
        }
    })
}
