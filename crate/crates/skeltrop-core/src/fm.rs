//! Exact Fourier-Motzkin elimination over the rationals, with strict
//! inequalities. Internal workhorse for emptiness, containment, implicit
//! equality detection, linear extrema, and cover checking.
//!
//! A constraint is `coeffs . x + constant REL 0` with REL one of >=, >.
//! Equalities are fed in as two opposite >= constraints. Sizes here are
//! desk scale (a handful of variables, tens of constraints), so the
//! quadratic pair combination with per-step deduplication is fine.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::rat::{clear_denominators, Rat};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Rel {
    Ge,
    Gt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Constraint {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
    pub rel: Rel,
}

impl Constraint {
    pub fn ge(coeffs: Vec<Rat>, constant: Rat) -> Self {
        Constraint {
            coeffs,
            constant,
            rel: Rel::Ge,
        }
    }

    pub fn gt(coeffs: Vec<Rat>, constant: Rat) -> Self {
        Constraint {
            coeffs,
            constant,
            rel: Rel::Gt,
        }
    }

    fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    fn holds_trivially(&self) -> bool {
        match self.rel {
            Rel::Ge => !self.constant.is_negative(),
            Rel::Gt => self.constant.is_positive(),
        }
    }

    /// Canonical key: primitive integer form of (coeffs, constant) scaled by
    /// a positive rational, plus the relation. Used for deduplication.
    fn key(&self) -> (Vec<BigInt>, Rel) {
        let mut all = self.coeffs.clone();
        all.push(self.constant.clone());
        let (ints, _) = clear_denominators(&all);
        let mut g = BigInt::zero();
        for x in &ints {
            g = g.gcd(x);
        }
        if g.is_zero() {
            return (ints, self.rel.clone());
        }
        (ints.iter().map(|x| x / &g).collect(), self.rel.clone())
    }
}

/// Eliminates variable `var`, combining positive and negative coefficient
/// pairs. The result involves every variable except `var` (its column is
/// kept, always zero, to preserve indexing).
fn eliminate(constraints: &[Constraint], var: usize) -> Vec<Constraint> {
    let mut zeros: Vec<Constraint> = Vec::new();
    let mut pos: Vec<&Constraint> = Vec::new();
    let mut neg: Vec<&Constraint> = Vec::new();
    for c in constraints {
        if c.coeffs[var].is_zero() {
            zeros.push(c.clone());
        } else if c.coeffs[var].is_positive() {
            pos.push(c);
        } else {
            neg.push(c);
        }
    }
    let mut out = zeros;
    for p in &pos {
        for n in &neg {
            // p: a x_var + (...) >= 0 with a > 0; n: -b x_var + (...) >= 0
            // with b > 0. Combine b*p + a*n to cancel x_var.
            let a = p.coeffs[var].clone();
            let b = -n.coeffs[var].clone();
            let mut coeffs = Vec::with_capacity(p.coeffs.len());
            for (pc, nc) in p.coeffs.iter().zip(&n.coeffs) {
                coeffs.push(&(&b * pc) + &(&a * nc));
            }
            let constant = &(&b * &p.constant) + &(&a * &n.constant);
            let rel = if p.rel == Rel::Gt || n.rel == Rel::Gt {
                Rel::Gt
            } else {
                Rel::Ge
            };
            out.push(Constraint {
                coeffs,
                constant,
                rel,
            });
        }
    }
    dedup(out)
}

fn dedup(constraints: Vec<Constraint>) -> Vec<Constraint> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c in constraints {
        if c.is_trivial() && c.holds_trivially() {
            continue;
        }
        if seen.insert(c.key()) {
            out.push(c);
        }
    }
    out
}

/// True iff the system has a solution over the rationals. (Rational and
/// real feasibility agree for rational data.)
pub(crate) fn feasible(constraints: &[Constraint], vars: usize) -> bool {
    let mut cs = dedup(constraints.to_vec());
    for v in 0..vars {
        for c in &cs {
            if c.is_trivial() && !c.holds_trivially() {
                return false;
            }
        }
        cs = eliminate(&cs, v);
    }
    cs.iter().all(Constraint::holds_trivially)
}

/// The supremum or infimum of a linear functional over a closed system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Extremum {
    Empty,
    Unbounded,
    /// Attained finite optimum (the system is closed).
    Finite(Rat),
}

/// Supremum of `objective . x + constant` subject to the constraints
/// (which must all be non-strict).
pub(crate) fn supremum(
    constraints: &[Constraint],
    vars: usize,
    objective: &[Rat],
    constant: &Rat,
) -> Extremum {
    debug_assert!(constraints.iter().all(|c| c.rel == Rel::Ge));
    if !feasible(constraints, vars) {
        return Extremum::Empty;
    }
    // Add variable t with constraint objective.x + constant - t >= 0 and
    // eliminate all x variables; read off the upper bounds on t.
    let mut cs: Vec<Constraint> = constraints
        .iter()
        .map(|c| {
            let mut coeffs = c.coeffs.clone();
            coeffs.push(Rat::zero());
            Constraint {
                coeffs,
                constant: c.constant.clone(),
                rel: c.rel.clone(),
            }
        })
        .collect();
    let mut obj = objective.to_vec();
    obj.push(-Rat::one());
    cs.push(Constraint::ge(obj, constant.clone()));
    for v in 0..vars {
        cs = eliminate(&cs, v);
    }
    // Remaining constraints involve only t (index `vars`).
    let mut best: Option<Rat> = None;
    for c in &cs {
        let a = &c.coeffs[vars];
        if a.is_negative() {
            let bound = &c.constant / &(-a);
            best = Some(match best {
                None => bound,
                Some(b) => b.min(bound),
            });
        }
    }
    match best {
        None => Extremum::Unbounded,
        Some(b) => Extremum::Finite(b),
    }
}

/// Infimum via `sup` of the negated functional.
pub(crate) fn infimum(
    constraints: &[Constraint],
    vars: usize,
    objective: &[Rat],
    constant: &Rat,
) -> Extremum {
    let neg_obj: Vec<Rat> = objective.iter().map(|x| -x).collect();
    match supremum(constraints, vars, &neg_obj, &(-constant)) {
        Extremum::Empty => Extremum::Empty,
        Extremum::Unbounded => Extremum::Unbounded,
        Extremum::Finite(x) => Extremum::Finite(-x),
    }
}

/// Renders a constraint for diagnostics.
#[allow(dead_code)]
pub(crate) fn describe(c: &Constraint) -> String {
    use alloc::format;
    let rel = match c.rel {
        Rel::Ge => ">=",
        Rel::Gt => ">",
    };
    format!("{:?}.x + {} {} 0", c.coeffs, c.constant, rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use alloc::vec;

    fn c(coeffs: &[i64], constant: i64) -> Constraint {
        Constraint::ge(
            coeffs.iter().map(|&x| Rat::from_int(x)).collect(),
            Rat::from_int(constant),
        )
    }

    #[test]
    fn feasibility() {
        // x >= 0, -x + 1 >= 0 : feasible
        assert!(feasible(&[c(&[1], 0), c(&[-1], 1)], 1));
        // x >= 0, -x + 1 >= 0, x - 2 >= 0 : empty
        assert!(!feasible(&[c(&[1], 0), c(&[-1], 1), c(&[1], -2)], 1));
        // strict: x > 0, -x > 0 : empty
        assert!(!feasible(
            &[
                Constraint::gt(vec![rat(1, 1)], Rat::zero()),
                Constraint::gt(vec![rat(-1, 1)], Rat::zero()),
            ],
            1
        ));
        // x >= 0, x <= 0, strict x > -1 : feasible (x = 0)
        assert!(feasible(
            &[
                c(&[1], 0),
                c(&[-1], 0),
                Constraint::gt(vec![rat(1, 1)], rat(1, 1)),
            ],
            1
        ));
    }

    #[test]
    fn extremum_on_square() {
        // unit square
        let cs = [c(&[1, 0], 0), c(&[-1, 0], 1), c(&[0, 1], 0), c(&[0, -1], 1)];
        assert_eq!(
            supremum(&cs, 2, &[rat(1, 1), rat(1, 1)], &Rat::zero()),
            Extremum::Finite(rat(2, 1))
        );
        assert_eq!(
            infimum(&cs, 2, &[rat(1, 1), rat(1, 1)], &Rat::zero()),
            Extremum::Finite(Rat::zero())
        );
    }

    #[test]
    fn extremum_unbounded_and_empty() {
        let half = [c(&[1], 0)];
        assert_eq!(
            supremum(&half, 1, &[rat(1, 1)], &Rat::zero()),
            Extremum::Unbounded
        );
        let empty = [c(&[1], 0), c(&[-1], -1)];
        assert_eq!(
            supremum(&empty, 1, &[rat(1, 1)], &Rat::zero()),
            Extremum::Empty
        );
    }
}
