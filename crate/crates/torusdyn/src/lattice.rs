//! Certified shortest lattice vectors and the non-divergence polytopes
//! built from them.
//!
//! The input matrices carry f64 entries, but every finite f64 is a dyadic
//! rational, so the lattice geometry is treated exactly: basis reduction
//! runs over `BigRational`, and the reduction gives a radius that bounds a
//! complete enumeration. The minimum that comes out is the true minimum of
//! the encoded lattice, not a float approximation. Only at the very end,
//! when a minimum enters a polytope offset through a logarithm, does the
//! value drop back to f64.

use crate::error::{Error, Result};
use crate::polytopes::HPolytope;
use crate::rat::{
    dot, rat_ceil, rat_floor, rat_from_f64, rat_to_f64, sqrt_upper_bound, zeros, Rat,
};
use crate::weights::Character;
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use rayon::prelude::*;
use std::collections::BTreeSet;

/// Exact squared minimum and a witness coefficient vector in the original
/// basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SvpResult {
    pub min_sq: Rat,
    pub witness: Vec<i64>,
}

impl SvpResult {
    pub fn norm(&self) -> f64 {
        rat_to_f64(&self.min_sq).sqrt()
    }
}

fn columns_to_rat(matrix: &[Vec<f64>]) -> Result<Vec<Vec<Rat>>> {
    let m = matrix.len();
    for row in matrix {
        if row.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: row.len(),
            });
        }
    }
    let mut cols = Vec::with_capacity(m);
    for j in 0..m {
        let mut col = Vec::with_capacity(m);
        for row in matrix.iter() {
            col.push(
                rat_from_f64(row[j])
                    .ok_or_else(|| Error::InvalidInput("non-finite matrix entry".into()))?,
            );
        }
        cols.push(col);
    }
    Ok(cols)
}

struct GramSchmidt {
    ortho_sq: Vec<Rat>,
    mu: Vec<Vec<Rat>>,
}

fn gram_schmidt(basis: &[Vec<Rat>]) -> GramSchmidt {
    let n = basis.len();
    let mut ortho: Vec<Vec<Rat>> = Vec::with_capacity(n);
    let mut mu = vec![zeros(n); n];
    let mut ortho_sq = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = basis[i].clone();
        for j in 0..i {
            let m = if ortho_sq[j] == Rat::zero() {
                Rat::zero()
            } else {
                &dot(&basis[i], &ortho[j]) / &ortho_sq[j]
            };
            for (slot, x) in v.iter_mut().zip(&ortho[j]) {
                *slot -= &m * x;
            }
            mu[i][j] = m;
        }
        ortho_sq.push(dot(&v, &v));
        ortho.push(v);
    }
    GramSchmidt { ortho_sq, mu }
}

fn round_rat(x: &Rat) -> BigInt {
    rat_floor(&(x + Rat::new(BigInt::from(1), BigInt::from(2))))
}

/// Exact LLL (delta = 3/4) on the column basis, tracking the unimodular
/// transform so witnesses map back to original coordinates.
fn lll_reduce(basis: &mut [Vec<Rat>], transform: &mut [Vec<BigInt>]) {
    let n = basis.len();
    if n <= 1 {
        return;
    }
    let delta = Rat::new(BigInt::from(3), BigInt::from(4));
    let mut gs = gram_schmidt(basis);
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let r = round_rat(&gs.mu[k][j]);
            if !r.is_zero() {
                let rr = Rat::from(r.clone());
                for i in 0..basis[k].len() {
                    let t = &rr * &basis[j][i];
                    basis[k][i] -= t;
                }
                for i in 0..n {
                    let t = &r * &transform[i][j];
                    transform[i][k] -= t;
                }
                gs = gram_schmidt(basis);
            }
        }
        let lhs = gs.ortho_sq[k].clone();
        let rhs = &(&delta - &(&gs.mu[k][k - 1] * &gs.mu[k][k - 1])) * &gs.ortho_sq[k - 1];
        if lhs >= rhs {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            for row in transform.iter_mut() {
                row.swap(k, k - 1);
            }
            gs = gram_schmidt(basis);
            k = k.max(2) - 1;
        }
    }
}

/// Depth-first enumeration of all coefficient vectors with squared
/// Euclidean norm at most `radius_sq`, returning the minimizer of `score`
/// (which receives the exact squared Euclidean norm and the image vector).
/// `basis` must be linearly independent.
fn enumerate_min<F>(basis: &[Vec<Rat>], radius_sq: &Rat, score: F) -> (Rat, Vec<BigInt>)
where
    F: Fn(Rat, &[Rat]) -> Rat + Sync,
{
    let n = basis.len();
    let gs = gram_schmidt(basis);

    // The top-level coefficient splits into independent subtrees, which
    // keeps the reduction deterministic: every range yields its own
    // minimum and the fold below is associative.
    let top = n - 1;
    let span = radius_sq / &gs.ortho_sq[top];
    let s = sqrt_upper_bound(&span);
    let lo = rat_ceil(&(-&s));
    let hi = rat_floor(&s);
    let mut tops = Vec::new();
    let mut z = lo;
    while z <= hi {
        tops.push(z.clone());
        z += 1;
    }

    let best = tops
        .par_iter()
        .map(|z_top| {
            let mut z = vec![BigInt::zero(); n];
            z[top] = z_top.clone();
            let zr = Rat::from(z_top.clone());
            let step = &(&zr * &zr) * &gs.ortho_sq[top];
            let mut best: Option<(Rat, Vec<BigInt>)> = None;
            if step <= *radius_sq {
                enumerate_level(basis, &gs, radius_sq, top, step, &mut z, &mut best, &score);
            }
            best
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, x) => x,
                (x, None) => x,
                (Some(x), Some(y)) => {
                    Some(if (y.0.clone(), y.1.clone()) < (x.0.clone(), x.1.clone()) {
                        y
                    } else {
                        x
                    })
                }
            },
        );
    best.expect("radius comes from an actual lattice vector")
}

#[allow(clippy::too_many_arguments)]
fn enumerate_level<F>(
    basis: &[Vec<Rat>],
    gs: &GramSchmidt,
    radius_sq: &Rat,
    level: usize,
    acc: Rat,
    z: &mut Vec<BigInt>,
    best: &mut Option<(Rat, Vec<BigInt>)>,
    score: &F,
) where
    F: Fn(Rat, &[Rat]) -> Rat + Sync,
{
    if level == 0 {
        if z.iter().all(|x| x.is_zero()) {
            return;
        }
        let dim = basis[0].len();
        let mut image = crate::rat::zeros(dim);
        for (zi, col) in z.iter().zip(basis) {
            if zi.is_zero() {
                continue;
            }
            let zr = Rat::from(zi.clone());
            for (slot, x) in image.iter_mut().zip(col) {
                *slot += &zr * x;
            }
        }
        let value = score(acc, &image);
        let mut canonical = z.clone();
        if let Some(first) = canonical.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                canonical = canonical.iter().map(|x| -x).collect();
            }
        }
        let candidate = (value, canonical);
        match best {
            None => *best = Some(candidate),
            Some(b) => {
                if (candidate.0.clone(), candidate.1.clone()) < (b.0.clone(), b.1.clone()) {
                    *best = Some(candidate);
                }
            }
        }
        return;
    }
    let next = level - 1;
    let center: Rat = -(next + 1..basis.len())
        .map(|l| &Rat::from(z[l].clone()) * &gs.mu[l][next])
        .sum::<Rat>();
    let span = &(radius_sq - &acc) / &gs.ortho_sq[next];
    let s = sqrt_upper_bound(&span);
    let lo = rat_ceil(&(&center - &s));
    let hi = rat_floor(&(&center + &s));
    let mut t = lo;
    while t <= hi {
        let tr = Rat::from(t.clone());
        let diff = &tr - &center;
        let step = &(&diff * &diff) * &gs.ortho_sq[next];
        let new_acc = &acc + &step;
        if new_acc <= *radius_sq {
            z[next] = t.clone();
            enumerate_level(basis, gs, radius_sq, next, new_acc, z, best, score);
        }
        t += 1;
    }
    z[next] = BigInt::zero();
}

/// Which norm the minimum is taken in. The Euclidean enumeration radius
/// also certifies the sup-norm search: any sup-minimizer w satisfies
/// ||Bw||_2 <= sqrt(m) ||Bw||_inf <= sqrt(m) r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LatticeNorm {
    #[default]
    Euclidean,
    Sup,
}

/// Exact shortest nonzero vector of the lattice spanned by the columns of
/// `matrix`. Reduction supplies the search radius; the enumeration below it
/// is complete, so the result is certified.
pub fn shortest_vector(matrix: &[Vec<f64>]) -> Result<SvpResult> {
    shortest_vector_with(matrix, LatticeNorm::Euclidean)
}

pub fn shortest_vector_with(matrix: &[Vec<f64>], norm: LatticeNorm) -> Result<SvpResult> {
    let m = matrix.len();
    if m == 0 || m > 8 {
        return Err(Error::OutOfRange("lattice dimension", format!("{m}")));
    }
    let cols = columns_to_rat(matrix)?;
    if crate::rat::det(&row_major(&cols)).is_zero() {
        return Err(Error::SingularMatrix);
    }
    let mut reduced = cols.clone();
    let mut transform: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    lll_reduce(&mut reduced, &mut transform);
    let col_min_sq = reduced
        .iter()
        .map(|c| dot(c, c))
        .min()
        .expect("nonempty basis");
    let (min_sq, z_reduced) = match norm {
        LatticeNorm::Euclidean => enumerate_min(&reduced, &col_min_sq, |v_sq, _| v_sq),
        LatticeNorm::Sup => {
            let radius_sq = &col_min_sq * Rat::from(BigInt::from(m as i64));
            enumerate_min(&reduced, &radius_sq, |_, image| {
                let worst = image.iter().map(|x| x.abs()).max().expect("nonempty image");
                &worst * &worst
            })
        }
    };
    // map back: original coefficients = transform * z
    let witness: Vec<i64> = (0..m)
        .map(|i| {
            let v: BigInt = (0..m).map(|j| &transform[i][j] * &z_reduced[j]).sum();
            i64::try_from(v).expect("desk-scale witness")
        })
        .collect();
    Ok(SvpResult { min_sq, witness })
}

fn row_major(cols: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let m = cols.len();
    (0..m)
        .map(|i| (0..m).map(|j| cols[j][i].clone()).collect())
        .collect()
}

/// The minimum of ||Bz|| over nonzero integer z, as a float.
pub fn shortest_vector_norm(matrix: &[Vec<f64>]) -> Result<f64> {
    Ok(shortest_vector(matrix)?.norm())
}

/// Mahler compactness test: is the shortest vector at least eta? Compared
/// exactly through squared norms.
pub fn mahler_membership(matrix: &[Vec<f64>], eta: f64) -> Result<bool> {
    if !(eta > 0.0) {
        return Err(Error::InvalidInput("eta must be positive".into()));
    }
    let min_sq = shortest_vector(matrix)?.min_sq;
    let eta_rat = rat_from_f64(eta).ok_or_else(|| Error::InvalidInput("non-finite eta".into()))?;
    Ok(min_sq >= &eta_rat * &eta_rat)
}

/// The action of a group element on each weight space, encoded per block
/// with the standard integer lattice.
#[derive(Debug, Clone)]
pub struct LatticeBlock {
    pub character: Character,
    pub matrix: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct WeightLatticeAction {
    rank: usize,
    blocks: Vec<LatticeBlock>,
}

impl WeightLatticeAction {
    pub fn new(rank: usize, blocks: Vec<LatticeBlock>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for b in &blocks {
            if b.character.rank() != rank {
                return Err(Error::RankMismatch(rank, b.character.rank()));
            }
            if !seen.insert(b.character.clone()) {
                return Err(Error::InvalidInput(
                    "duplicate character across blocks".into(),
                ));
            }
        }
        Ok(WeightLatticeAction { rank, blocks })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn blocks(&self) -> &[LatticeBlock] {
        &self.blocks
    }
}

/// Offset for a constraint d(alpha)(t) >= ln(eps) - ln(norm), computed as a
/// single logarithm of the f64 quotient so that exact rescalings of
/// (eps, norm) by the same power of two produce bit-identical polytopes.
fn log_offset(epsilon: f64, norm: f64) -> Result<Rat> {
    let v = (epsilon / norm).ln();
    rat_from_f64(v).ok_or_else(|| Error::InvalidInput("non-finite log offset".into()))
}

/// The non-divergence polytope in the torus Lie algebra: one constraint per
/// selected character, with the offset driven by that block's exact
/// shortest-vector norm. Euclidean by default; pass `LatticeNorm::Sup` for
/// the sup-norm variant.
pub fn omega_polytope(
    act: &WeightLatticeAction,
    epsilon: f64,
    phi_subset: &BTreeSet<Character>,
) -> Result<HPolytope> {
    omega_polytope_with(act, epsilon, phi_subset, LatticeNorm::Euclidean)
}

pub fn omega_polytope_with(
    act: &WeightLatticeAction,
    epsilon: f64,
    phi_subset: &BTreeSet<Character>,
    norm: LatticeNorm,
) -> Result<HPolytope> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let known: BTreeSet<&Character> = act.blocks.iter().map(|b| &b.character).collect();
    for ch in phi_subset {
        if !known.contains(ch) {
            return Err(Error::InvalidInput(format!(
                "character {:?} has no block",
                ch.coords()
            )));
        }
    }
    let mut constraints = Vec::new();
    for block in &act.blocks {
        if !phi_subset.contains(&block.character) {
            continue;
        }
        let block_min = shortest_vector_with(&block.matrix, norm)?.norm();
        let row: Vec<Rat> = block
            .character
            .coords()
            .iter()
            .map(|&c| Rat::from(BigInt::from(c)))
            .collect();
        constraints.push((row, log_offset(epsilon, block_min)?));
    }
    HPolytope::new(act.rank, constraints)
}

/// One maximal parabolic seen through its character and current distance
/// value.
#[derive(Debug, Clone)]
pub struct ParabolicEntry {
    pub label: String,
    pub character: Character,
    pub d_value: f64,
}

#[derive(Debug, Clone)]
pub struct ParabolicData {
    pub entries: Vec<ParabolicEntry>,
}

impl ParabolicData {
    pub fn new(entries: Vec<ParabolicEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("no parabolic entries".into()));
        }
        let rank = entries[0].character.rank();
        for e in &entries {
            if e.character.rank() != rank {
                return Err(Error::RankMismatch(rank, e.character.rank()));
            }
            if !(e.d_value > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "d value for {} must be positive",
                    e.label
                )));
            }
        }
        Ok(ParabolicData { entries })
    }

    pub fn rank(&self) -> usize {
        self.entries[0].character.rank()
    }
}

/// Maximal-split-torus variant: constraints d(alpha_P)(t) >= ln(eps / d_P).
pub fn parabolic_omega(data: &ParabolicData, epsilon: f64) -> Result<HPolytope> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let mut constraints = Vec::new();
    for e in &data.entries {
        let row: Vec<Rat> = e
            .character
            .coords()
            .iter()
            .map(|&c| Rat::from(BigInt::from(c)))
            .collect();
        constraints.push((row, log_offset(epsilon, e.d_value)?));
    }
    HPolytope::new(data.rank(), constraints)
}
