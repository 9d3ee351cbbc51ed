//! Decomposition of a finite set of rational covectors into the positively
//! dependent part, its complement, and the diverging part, together with the
//! lineality subspace they cut out.
//!
//! A functional belongs to the degenerate class exactly when it participates
//! in a strictly positive zero-sum with other bounded functionals. That is a
//! scale-invariant algebraic fact, so membership is decided by exact
//! rational LPs: floating arithmetic could misclassify boundary cases.

use crate::error::{Error, Result};
use crate::rat::{dot, kernel_basis, zeros, Rat};
use crate::simplex::{LinearProgram, LpOutcome, Rel};
use num::{One, Zero};
use std::collections::BTreeSet;

/// A finite set of rational covectors on Q^dim. Duplicates are rejected:
/// the decomposition is about the set, not a multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalSet {
    dim: usize,
    functionals: Vec<Vec<Rat>>,
}

impl FunctionalSet {
    pub fn new(dim: usize, functionals: Vec<Vec<Rat>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for f in &functionals {
            if f.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: f.len(),
                });
            }
        }
        for i in 0..functionals.len() {
            for j in (i + 1)..functionals.len() {
                if functionals[i] == functionals[j] {
                    return Err(Error::InvalidInput(format!(
                        "duplicate functionals at indices {i} and {j}"
                    )));
                }
            }
        }
        Ok(FunctionalSet { dim, functionals })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.functionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functionals.is_empty()
    }

    pub fn functional(&self, i: usize) -> &[Rat] {
        &self.functionals[i]
    }

    pub fn functionals(&self) -> &[Vec<Rat>] {
        &self.functionals
    }
}

/// Per-index behaviour of the offset sequence.
#[derive(Debug, Clone, PartialEq)]
pub enum OffsetTag {
    Diverges,
    Constant(Rat),
}

/// Index partition plus exact bases for the lineality subspace W and its
/// orthogonal complement U.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub phi0: BTreeSet<usize>,
    pub phi1: BTreeSet<usize>,
    pub phi_inf: BTreeSet<usize>,
    pub w_basis: Vec<Vec<Rat>>,
    pub u_basis: Vec<Vec<Rat>>,
}

/// Indices of bounded functionals that admit a strictly positive zero-sum
/// within the bounded set.
///
/// For each candidate a, maximize its coefficient subject to a nonnegative
/// zero-sum with coefficient at most 1. The feasible cone is invariant under
/// positive scaling, so the optimum is 0 or 1, and 1 means a positive
/// combination through a exists (its support is the witness subset).
pub fn compute_phi0(phi: &FunctionalSet, bounded: &BTreeSet<usize>) -> BTreeSet<usize> {
    for &i in bounded {
        assert!(i < phi.len(), "bounded index {i} out of range");
    }
    let idx: Vec<usize> = bounded.iter().copied().collect();
    let mut result = BTreeSet::new();
    for (slot, &alpha) in idx.iter().enumerate() {
        let mut lp = LinearProgram::new(idx.len());
        lp.mark_all_nonneg();
        let mut obj = zeros(idx.len());
        obj[slot] = Rat::one();
        lp.set_objective(obj.clone());
        for coord in 0..phi.dim() {
            let row: Vec<Rat> = idx
                .iter()
                .map(|&i| phi.functional(i)[coord].clone())
                .collect();
            lp.add_constraint(row, Rel::Eq, Rat::zero());
        }
        lp.add_constraint(obj, Rel::Le, Rat::one());
        if let LpOutcome::Optimal { value, .. } = lp.solve() {
            debug_assert!(value.is_zero() || value.is_one());
            if value.is_one() {
                result.insert(alpha);
            }
        }
    }
    result
}

/// Exact basis of the common kernel of the given covectors; the empty list
/// of covectors yields the whole space.
pub fn compute_w(functionals: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    kernel_basis(functionals, dim)
}

/// A vector vanishing on every degenerate functional and strictly positive
/// on all the others, certifying the decomposition. With no strict
/// constraints the zero vector qualifies.
pub fn interior_vector(phi: &FunctionalSet, phi0: &BTreeSet<usize>) -> Result<Vec<Rat>> {
    let strict: Vec<usize> = (0..phi.len()).filter(|i| !phi0.contains(i)).collect();
    if strict.is_empty() {
        return Ok(zeros(phi.dim()));
    }
    // Variables: v (free), slack s >= 0; maximize s with s <= 1. Positive
    // scale invariance again forces the optimum to 0 or 1.
    let n = phi.dim();
    let mut lp = LinearProgram::new(n + 1);
    lp.mark_nonneg(n);
    let mut obj = zeros(n + 1);
    obj[n] = Rat::one();
    lp.set_objective(obj.clone());
    for &i in phi0 {
        let mut row = phi.functional(i).to_vec();
        row.push(Rat::zero());
        lp.add_constraint(row, Rel::Eq, Rat::zero());
    }
    for &i in &strict {
        let mut row = phi.functional(i).to_vec();
        row.push(-Rat::one());
        lp.add_constraint(row, Rel::Ge, Rat::zero());
    }
    lp.add_constraint(obj, Rel::Le, Rat::one());
    match lp.solve() {
        LpOutcome::Optimal { value, point } if value.is_one() => Ok(point[..n].to_vec()),
        _ => Err(Error::Infeasible(
            "no interior vector: decomposition input is inconsistent",
        )),
    }
}

/// Classify every functional by its offset tag and derive the subspace
/// split. `metric` is an optional positive diagonal replacing the standard
/// inner product that defines the complement U.
pub fn classify_sequence(
    phi: &FunctionalSet,
    schedule: &[OffsetTag],
    metric: Option<&[Rat]>,
) -> Result<Decomposition> {
    if schedule.len() != phi.len() {
        return Err(Error::DimensionMismatch {
            expected: phi.len(),
            got: schedule.len(),
        });
    }
    if let Some(m) = metric {
        if m.len() != phi.dim() {
            return Err(Error::DimensionMismatch {
                expected: phi.dim(),
                got: m.len(),
            });
        }
        if m.iter().any(|x| !num::Signed::is_positive(x)) {
            return Err(Error::InvalidInput(
                "metric entries must be positive".into(),
            ));
        }
    }

    let phi_inf: BTreeSet<usize> = schedule
        .iter()
        .enumerate()
        .filter(|(_, t)| matches!(t, OffsetTag::Diverges))
        .map(|(i, _)| i)
        .collect();
    let bounded: BTreeSet<usize> = (0..phi.len()).filter(|i| !phi_inf.contains(i)).collect();
    let phi0 = compute_phi0(phi, &bounded);
    let phi1: BTreeSet<usize> = bounded.difference(&phi0).copied().collect();

    let phi0_rows: Vec<Vec<Rat>> = phi0.iter().map(|&i| phi.functional(i).to_vec()).collect();
    let w_basis = compute_w(&phi0_rows, phi.dim());
    debug_assert!(w_basis
        .iter()
        .all(|w| phi0_rows.iter().all(|a| dot(a, w).is_zero())));

    // U = { u : <w, u>_M = 0 for every w in W }.
    let w_metric_rows: Vec<Vec<Rat>> = w_basis
        .iter()
        .map(|w| {
            w.iter()
                .enumerate()
                .map(|(j, x)| match metric {
                    Some(m) => x * &m[j],
                    None => x.clone(),
                })
                .collect()
        })
        .collect();
    let u_basis = kernel_basis(&w_metric_rows, phi.dim());

    Ok(Decomposition {
        phi0,
        phi1,
        phi_inf,
        w_basis,
        u_basis,
    })
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::rat::rat;
    use proptest::prelude::*;

    fn arb_functional_set() -> impl Strategy<Value = FunctionalSet> {
        prop::collection::btree_set(prop::collection::vec(-3i64..=3, 3..=3), 1..=6).prop_filter_map(
            "nonzero distinct",
            |rows| {
                let rows: Vec<Vec<Rat>> = rows
                    .into_iter()
                    .filter(|r| r.iter().any(|&x| x != 0))
                    .map(|r| r.into_iter().map(|x| rat(x, 1)).collect())
                    .collect();
                if rows.is_empty() {
                    return None;
                }
                FunctionalSet::new(3, rows).ok()
            },
        )
    }

    proptest! {
        /// Positive rescaling of any functional leaves the classification
        /// unchanged.
        #[test]
        fn rescaling_invariance(
            phi in arb_functional_set(),
            scale_num in 1i64..=5,
            scale_den in 1i64..=5,
            which in 0usize..6,
            div_mask in 0u32..64,
        ) {
            let n = phi.len();
            let schedule: Vec<OffsetTag> = (0..n)
                .map(|i| {
                    if div_mask & (1 << i) != 0 {
                        OffsetTag::Diverges
                    } else {
                        OffsetTag::Constant(rat(1, 1))
                    }
                })
                .collect();
            let base = classify_sequence(&phi, &schedule, None).unwrap();

            let which = which % n;
            let s = rat(scale_num, scale_den);
            let mut rows = phi.functionals().to_vec();
            rows[which] = rows[which].iter().map(|x| x * &s).collect();
            // Rescaling may collide with another functional; skip that case.
            let Ok(scaled) = FunctionalSet::new(3, rows) else {
                return Ok(());
            };
            let dec = classify_sequence(&scaled, &schedule, None).unwrap();
            prop_assert_eq!(dec.phi0, base.phi0);
            prop_assert_eq!(dec.phi1, base.phi1);
            prop_assert_eq!(dec.phi_inf, base.phi_inf);
            prop_assert_eq!(dec.w_basis, base.w_basis);
        }
    }
}
