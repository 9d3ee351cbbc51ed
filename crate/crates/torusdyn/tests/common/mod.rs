//! Independent oracles shared by the integration and acceptance suites.
//! These deliberately avoid the code paths they are used to check: the
//! degenerate-set oracle enumerates subsets instead of solving one LP per
//! functional, the lattice oracle scans an integer box, and the volume
//! oracle is rejection sampling.

#![allow(clippy::needless_range_loop)]

use num::bigint::BigInt;
use num::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeSet;
use torusdyn::cones::FunctionalSet;
use torusdyn::polytopes::HPolytope;
use torusdyn::rat::{dot, rat, rat_from_f64, rat_to_f64, Rat};
use torusdyn::simplex::{LinearProgram, Rel};

/// Subset-enumeration oracle for the positive-zero-sum classification.
/// A functional participates in a strictly positive zero-sum iff it does so
/// on a subset of size at most dim + 1 (a basic feasible solution of the
/// dependence LP has support that small), so the enumeration is complete.
pub fn phi0_subset_oracle(phi: &FunctionalSet, bounded: &BTreeSet<usize>) -> BTreeSet<usize> {
    let idx: Vec<usize> = bounded.iter().copied().collect();
    let max_size = (phi.dim() + 1).min(idx.len());
    let mut result = BTreeSet::new();
    for &alpha in &idx {
        'subsets: for size in 1..=max_size {
            let others: Vec<usize> = idx.iter().copied().filter(|&i| i != alpha).collect();
            let mut chooser = SubsetIter::new(others.len(), size - 1);
            while let Some(choice) = chooser.next() {
                let mut subset = vec![alpha];
                subset.extend(choice.iter().map(|&c| others[c]));
                if positive_zero_sum_exists(phi, &subset) {
                    result.insert(alpha);
                    break 'subsets;
                }
            }
        }
    }
    result
}

/// Feasibility of sum a_beta beta = 0 with every a_beta >= 1 (positive up
/// to scaling).
fn positive_zero_sum_exists(phi: &FunctionalSet, subset: &[usize]) -> bool {
    let mut lp = LinearProgram::new(subset.len());
    lp.mark_all_nonneg();
    for coord in 0..phi.dim() {
        let row: Vec<Rat> = subset
            .iter()
            .map(|&i| phi.functional(i)[coord].clone())
            .collect();
        lp.add_constraint(row, Rel::Eq, Rat::zero());
    }
    for v in 0..subset.len() {
        let mut row = vec![Rat::zero(); subset.len()];
        row[v] = Rat::from(BigInt::from(1));
        lp.add_constraint(row, Rel::Ge, Rat::from(BigInt::from(1)));
    }
    lp.is_feasible()
}

/// k-subsets of {0..n-1} in lexicographic order.
struct SubsetIter {
    n: usize,
    k: usize,
    state: Option<Vec<usize>>,
}

impl SubsetIter {
    fn new(n: usize, k: usize) -> Self {
        let state = if k <= n { Some((0..k).collect()) } else { None };
        SubsetIter { n, k, state }
    }

    #[allow(clippy::should_implement_trait)]
    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.state.clone()?;
        // advance
        let mut next = current.clone();
        let mut i = self.k;
        loop {
            if i == 0 {
                self.state = None;
                break;
            }
            i -= 1;
            if next[i] != i + self.n - self.k {
                next[i] += 1;
                for j in (i + 1)..self.k {
                    next[j] = next[j - 1] + 1;
                }
                self.state = Some(next);
                break;
            }
        }
        Some(current)
    }
}

/// Exact minimum of ||B z||^2 over nonzero integer z with |z_i| <= bound.
/// The Gram matrix is cleared of denominators once so the box scan runs on
/// integers; exactness is preserved since the entries are dyadic.
pub fn svp_box_oracle(matrix: &[Vec<f64>], bound: i64) -> Rat {
    let m = matrix.len();
    let cols: Vec<Vec<Rat>> = (0..m)
        .map(|j| {
            (0..m)
                .map(|i| rat_from_f64(matrix[i][j]).expect("finite"))
                .collect()
        })
        .collect();
    let gram: Vec<Vec<Rat>> = (0..m)
        .map(|i| (0..m).map(|j| dot(&cols[i], &cols[j])).collect())
        .collect();
    let mut denom = BigInt::from(1);
    for row in &gram {
        for x in row {
            denom = num::integer::lcm(denom, x.denom().clone());
        }
    }
    let scaled: Vec<Vec<i128>> = gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let v = x.numer() * (&denom / x.denom());
                    i128::try_from(v).expect("grid-sized Gram entries")
                })
                .collect()
        })
        .collect();
    let mut best: Option<i128> = None;
    let width = (2 * bound + 1) as u64;
    let total = width.pow(m as u32);
    for code in 0..total {
        let mut z = [0i128; 8];
        let mut c = code;
        let mut all_zero = true;
        for slot in z.iter_mut().take(m) {
            *slot = (c % width) as i128 - bound as i128;
            all_zero &= *slot == 0;
            c /= width;
        }
        if all_zero {
            continue;
        }
        let mut q: i128 = 0;
        for i in 0..m {
            for j in 0..m {
                q += scaled[i][j] * z[i] * z[j];
            }
        }
        if best.is_none_or(|b| q < b) {
            best = Some(q);
        }
    }
    Rat::new(BigInt::from(best.expect("nonempty box")), denom)
}

/// Certified containment of the box-oracle search: a Gershgorin lower
/// bound on the Gram spectrum shows every candidate shorter than the
/// shortest column fits in |z_i| <= bound.
pub fn box_oracle_is_complete(matrix: &[Vec<f64>], bound: i64) -> bool {
    let m = matrix.len();
    let cols: Vec<Vec<Rat>> = (0..m)
        .map(|j| {
            (0..m)
                .map(|i| rat_from_f64(matrix[i][j]).expect("finite"))
                .collect()
        })
        .collect();
    let gram: Vec<Vec<Rat>> = (0..m)
        .map(|i| (0..m).map(|j| dot(&cols[i], &cols[j])).collect())
        .collect();
    // lambda_min(G) >= min_i (G_ii - sum_{j != i} |G_ij|)
    let mut lambda_lb: Option<Rat> = None;
    for i in 0..m {
        let mut row_bound = gram[i][i].clone();
        for j in 0..m {
            if j != i {
                row_bound -= gram[i][j].abs();
            }
        }
        if lambda_lb.as_ref().is_none_or(|l| row_bound < *l) {
            lambda_lb = Some(row_bound);
        }
    }
    let lambda_lb = lambda_lb.expect("nonempty");
    if !lambda_lb.is_positive() {
        return false;
    }
    let min_col_sq = (0..m).map(|i| gram[i][i].clone()).min().expect("nonempty");
    // ||z*||^2 <= min_col_sq / lambda_min <= bound^2
    min_col_sq <= &lambda_lb * Rat::from(BigInt::from(bound * bound))
}

/// Near-orthogonal random matrix with entries on the 1/64 grid, suitable
/// for the certified box oracle.
pub fn random_well_conditioned(m: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    loop {
        // random matrix, Gram-Schmidt, scale rows, snap to grid
        let mut a: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..m).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect())
            .collect();
        let mut ok = true;
        for i in 0..m {
            for j in 0..i {
                let d: f64 = (0..m).map(|k| a[i][k] * a[j][k]).sum();
                for k in 0..m {
                    let t = d * a[j][k];
                    a[i][k] -= t;
                }
            }
            let norm: f64 = a[i].iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-3 {
                ok = false;
                break;
            }
            let scale = (0.75 + 0.75 * rng.random::<f64>()) / norm;
            for x in a[i].iter_mut() {
                *x = (*x * scale * 64.0).round() / 64.0;
            }
        }
        if !ok {
            continue;
        }
        if box_oracle_is_complete(&a, 10) {
            return a;
        }
    }
}

/// Random bounded full-dimensional polytope: the unit box plus extra
/// half-spaces through a margin around the origin.
pub fn random_bounded_polytope(dim: usize, rng: &mut ChaCha8Rng) -> HPolytope {
    let mut constraints: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for j in 0..dim {
        let mut pos = vec![Rat::zero(); dim];
        pos[j] = rat(1, 1);
        constraints.push((pos, rat(-1, 1)));
        let mut neg = vec![Rat::zero(); dim];
        neg[j] = rat(-1, 1);
        constraints.push((neg, rat(-1, 1)));
    }
    let extra = rng.random_range(3..=8);
    for _ in 0..extra {
        let mut alpha = vec![Rat::zero(); dim];
        loop {
            for slot in alpha.iter_mut() {
                *slot = rat(rng.random_range(-8i64..=8), 8);
            }
            if alpha.iter().any(|x| !x.is_zero()) {
                break;
            }
        }
        let b = rat(-(rng.random_range(1i64..=8)), 8);
        constraints.push((alpha, b));
    }
    HPolytope::new(dim, constraints).expect("consistent dims")
}

/// Deterministic rejection-sampling estimate of the volume of a polytope
/// contained in [-1, 1]^dim. Returns (estimate, standard error).
pub fn mc_volume_in_unit_box(p: &HPolytope, samples: u64, seed: u64) -> (f64, f64) {
    let dim = p.dim();
    let cons: Vec<(Vec<f64>, f64)> = p
        .constraints()
        .iter()
        .map(|(a, b)| (a.iter().map(rat_to_f64).collect(), rat_to_f64(b)))
        .collect();
    const BATCH: u64 = 1 << 16;
    let batches = samples.div_ceil(BATCH);
    let hits: u64 = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let take = if (b + 1) * BATCH <= samples {
                BATCH
            } else {
                samples - b * BATCH
            };
            let mut count = 0u64;
            let mut x = vec![0.0f64; dim];
            for _ in 0..take {
                for slot in x.iter_mut() {
                    *slot = rng.random::<f64>() * 2.0 - 1.0;
                }
                let inside = cons
                    .iter()
                    .all(|(a, b)| a.iter().zip(&x).map(|(c, v)| c * v).sum::<f64>() >= *b);
                if inside {
                    count += 1;
                }
            }
            count
        })
        .sum();
    let box_vol = 2f64.powi(dim as i32);
    let frac = hits as f64 / samples as f64;
    let est = frac * box_vol;
    let sigma = box_vol * (frac * (1.0 - frac) / samples as f64).sqrt();
    (est, sigma)
}

/// Random functional set on the /4 grid with distinct nonzero rows.
pub fn random_functional_set(dim: usize, max_count: usize, rng: &mut ChaCha8Rng) -> FunctionalSet {
    loop {
        let count = rng.random_range(1..=max_count);
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for _ in 0..count {
            let row: Vec<Rat> = (0..dim)
                .map(|_| rat(rng.random_range(-8i64..=8), 4))
                .collect();
            if row.iter().any(|x| !x.is_zero()) && !rows.contains(&row) {
                rows.push(row);
            }
        }
        if rows.is_empty() {
            continue;
        }
        if let Ok(fs) = FunctionalSet::new(dim, rows) {
            return fs;
        }
    }
}
