//! Exact rational H-polytope geometry.
//!
//! Polytopes are intersections of half-spaces a.v >= b with rational data.
//! Emptiness and boundedness are LP questions, vertices come from exhaustive
//! d-subset constraint intersection, and volumes from a signed pyramid
//! recursion over facets (substituting each facet's hyperplane equation
//! yields the facet as a polytope one dimension down, so the recursion
//! bottoms out in interval lengths; every quantity stays rational).
//!
//! The split construction realizes a direct sum of a projected polytope and
//! a subspace slice as a single H-polytope in the original coordinates, so
//! containment and volume-ratio claims can be checked exactly.

use crate::cones::{Decomposition, FunctionalSet};
use crate::error::{Error, Result};
use crate::rat::{dot, rat_to_f64, solve_square, zeros, Rat};
use crate::simplex::{LinearProgram, LpOutcome, Rel};
use num::bigint::BigInt;
use num::{One, Signed, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

/// Intersection of half-spaces { v : a.v >= b }. The representation may be
/// redundant or contradictory; contradictions surface as runtime emptiness,
/// not construction errors.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    dim: usize,
    constraints: Vec<(Vec<Rat>, Rat)>,
}

impl HPolytope {
    pub fn new(dim: usize, constraints: Vec<(Vec<Rat>, Rat)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        for (a, _) in &constraints {
            if a.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: a.len(),
                });
            }
        }
        Ok(HPolytope { dim, constraints })
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_i64(dim: usize, constraints: &[(&[i64], i64)]) -> Self {
        HPolytope::new(
            dim,
            constraints
                .iter()
                .map(|(a, b)| {
                    (
                        a.iter().map(|&x| Rat::from(BigInt::from(x))).collect(),
                        Rat::from(BigInt::from(*b)),
                    )
                })
                .collect(),
        )
        .expect("consistent dimensions")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[(Vec<Rat>, Rat)] {
        &self.constraints
    }

    pub fn add_constraint(&mut self, a: Vec<Rat>, b: Rat) -> Result<()> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: a.len(),
            });
        }
        self.constraints.push((a, b));
        Ok(())
    }

    pub fn contains(&self, point: &[Rat]) -> bool {
        self.constraints.iter().all(|(a, b)| dot(a, point) >= *b)
    }

    fn feasibility_lp(&self) -> LinearProgram {
        let mut lp = LinearProgram::new(self.dim);
        for (a, b) in &self.constraints {
            lp.add_constraint(a.clone(), Rel::Ge, b.clone());
        }
        lp
    }

    /// Exact LP feasibility.
    pub fn is_empty(&self) -> bool {
        !self.feasibility_lp().is_feasible()
    }

    /// A polytope is bounded iff every coordinate is bounded above and
    /// below over it. Empty polytopes count as bounded.
    pub fn is_bounded(&self) -> bool {
        for j in 0..self.dim {
            for sign in [1i64, -1] {
                let mut lp = self.feasibility_lp();
                let mut obj = zeros(self.dim);
                obj[j] = Rat::from(BigInt::from(sign));
                lp.set_objective(obj);
                match lp.solve() {
                    LpOutcome::Unbounded => return false,
                    LpOutcome::Infeasible => return true,
                    LpOutcome::Optimal { .. } => {}
                }
            }
        }
        true
    }

    /// Exact vertex set of a bounded nonempty polytope, sorted. Each vertex
    /// solves `dim` linearly independent active constraints.
    pub fn vertices(&self) -> Result<Vec<Vec<Rat>>> {
        if self.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        if !self.is_bounded() {
            return Err(Error::UnboundedPolytope);
        }
        let n = self.constraints.len();
        let d = self.dim;
        let mut found: BTreeSet<Vec<Rat>> = BTreeSet::new();
        let mut subset: Vec<usize> = (0..d).collect();
        if n < d {
            return Err(Error::EmptyPolytope);
        }
        loop {
            let a: Vec<Vec<Rat>> = subset
                .iter()
                .map(|&i| self.constraints[i].0.clone())
                .collect();
            let b: Vec<Rat> = subset
                .iter()
                .map(|&i| self.constraints[i].1.clone())
                .collect();
            if let Some(x) = solve_square(&a, &b) {
                if self.contains(&x) {
                    found.insert(x);
                }
            }
            // next d-subset in lexicographic order
            let mut i = d;
            loop {
                if i == 0 {
                    return Ok(found.into_iter().collect());
                }
                i -= 1;
                if subset[i] != i + n - d {
                    subset[i] += 1;
                    for k in (i + 1)..d {
                        subset[k] = subset[k - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Exact Lebesgue volume. Zero for empty or lower-dimensional input,
    /// an error for unbounded input.
    pub fn volume(&self) -> Result<Rat> {
        if self.is_empty() {
            return Ok(Rat::zero());
        }
        if !self.is_bounded() {
            return Err(Error::UnboundedPolytope);
        }
        Ok(volume_rec(self.dim, &self.constraints))
    }
}

/// Canonicalize half-spaces: scale so the first nonzero coefficient is +-1,
/// merge parallel same-direction constraints to the tightest bound, and
/// separate trivially-true / trivially-false zero rows.
fn canonicalize(constraints: &[(Vec<Rat>, Rat)]) -> Option<Vec<(Vec<Rat>, Rat)>> {
    let mut merged: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
    for (a, b) in constraints {
        match a.iter().find(|x| !x.is_zero()) {
            None => {
                if b.is_positive() {
                    return None; // 0 >= b > 0: empty
                }
            }
            Some(lead) => {
                let scale = lead.abs().recip();
                let key: Vec<Rat> = a.iter().map(|x| x * &scale).collect();
                let val = b * &scale;
                merged
                    .entry(key)
                    .and_modify(|v| {
                        if val > *v {
                            *v = val.clone();
                        }
                    })
                    .or_insert(val);
            }
        }
    }
    Some(merged.into_iter().collect())
}

/// Signed pyramid recursion from the origin. Assumes the feasible set is
/// bounded; returns its exact volume (zero if empty or degenerate).
fn volume_rec(dim: usize, constraints: &[(Vec<Rat>, Rat)]) -> Rat {
    let Some(cons) = canonicalize(constraints) else {
        return Rat::zero();
    };
    if dim == 1 {
        let mut lower: Option<Rat> = None;
        let mut upper: Option<Rat> = None;
        for (a, b) in &cons {
            let bound = b / &a[0];
            if a[0].is_positive() {
                if lower.as_ref().is_none_or(|l| bound > *l) {
                    lower = Some(bound);
                }
            } else if upper.as_ref().is_none_or(|u| bound < *u) {
                upper = Some(bound);
            }
        }
        return match (lower, upper) {
            (Some(l), Some(u)) if u > l => u - l,
            // missing side only happens for unbounded input, which the
            // public wrapper has excluded; treat as degenerate
            _ => Rat::zero(),
        };
    }

    let mut total = Rat::zero();
    for (facet_idx, (a, b)) in cons.iter().enumerate() {
        // pivot on the largest coefficient for stability of the recursion
        let j = (0..dim)
            .max_by(|&p, &q| a[p].abs().cmp(&a[q].abs()))
            .expect("nonzero covector");
        let aj = a[j].clone();
        // substitute x_j = (b - sum_{k != j} a_k x_k) / a_j into the others
        let mut sub: Vec<(Vec<Rat>, Rat)> = Vec::with_capacity(cons.len() - 1);
        for (i, (c, g)) in cons.iter().enumerate() {
            if i == facet_idx {
                continue;
            }
            let f = &c[j] / &aj;
            let mut row = Vec::with_capacity(dim - 1);
            for k in 0..dim {
                if k == j {
                    continue;
                }
                row.push(&c[k] - &(&f * &a[k]));
            }
            let rhs = g - &(&f * b);
            sub.push((row, rhs));
        }
        let facet_vol = volume_rec(dim - 1, &sub);
        if facet_vol.is_zero() {
            continue;
        }
        // signed height of the origin over this facet's hyperplane, with the
        // norm factor cancelling against the coordinate projection
        total += &(-b / aj.abs()) * &facet_vol;
    }
    debug_assert!(!total.is_negative());
    &total / Rat::from(BigInt::from(dim as i64))
}

/// A polytope given by its vertices in the coordinates of some subspace
/// basis.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexHull {
    pub dim: usize,
    pub points: Vec<Vec<Rat>>,
}

impl VertexHull {
    /// Volume of the convex hull. Supported up to dimension 2 (interval
    /// length, polygon area), which covers the projection experiments.
    pub fn volume(&self) -> Result<Rat> {
        match self.dim {
            1 => {
                let xs: Vec<&Rat> = self.points.iter().map(|p| &p[0]).collect();
                let min = xs.iter().min().ok_or(Error::EmptyPolytope)?;
                let max = xs.iter().max().ok_or(Error::EmptyPolytope)?;
                Ok(*max - *min)
            }
            2 => {
                if self.points.is_empty() {
                    return Err(Error::EmptyPolytope);
                }
                let hull = convex_hull_2d(&self.points);
                if hull.len() < 3 {
                    return Ok(Rat::zero());
                }
                let mut twice_area = Rat::zero();
                for i in 0..hull.len() {
                    let p = &hull[i];
                    let q = &hull[(i + 1) % hull.len()];
                    twice_area += &(&p[0] * &q[1]) - &(&p[1] * &q[0]);
                }
                Ok(twice_area.abs() / Rat::from(BigInt::from(2)))
            }
            d => Err(Error::OutOfRange(
                "hull volume dimension",
                format!("{d} > 2"),
            )),
        }
    }
}

/// Andrew's monotone chain with exact orientation tests.
fn convex_hull_2d(points: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut pts: Vec<Vec<Rat>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let cross = |o: &Vec<Rat>, a: &Vec<Rat>, b: &Vec<Rat>| -> Rat {
        &(&(&a[0] - &o[0]) * &(&b[1] - &o[1])) - &(&(&a[1] - &o[1]) * &(&b[0] - &o[0]))
    };
    let mut hull: Vec<Vec<Rat>> = Vec::new();
    for p in pts.iter().chain(pts.iter().rev().skip(1)) {
        while hull.len() >= 2
            && !cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p).is_positive()
        {
            hull.pop();
        }
        hull.push(p.clone());
    }
    hull.pop();
    hull
}

/// Orthogonal projection of a bounded polytope onto the span of `basis`
/// (with respect to an optional positive diagonal metric), returned as the
/// hull of projected vertices in basis coordinates.
pub fn project(p: &HPolytope, basis: &[Vec<Rat>], metric: Option<&[Rat]>) -> Result<VertexHull> {
    let k = basis.len();
    for v in basis {
        if v.len() != p.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                got: v.len(),
            });
        }
    }
    let apply_metric = |v: &[Rat]| -> Vec<Rat> {
        v.iter()
            .enumerate()
            .map(|(j, x)| match metric {
                Some(m) => x * &m[j],
                None => x.clone(),
            })
            .collect()
    };
    // Gram matrix of the basis under the metric.
    let gram: Vec<Vec<Rat>> = basis
        .iter()
        .map(|u| {
            let mu = apply_metric(u);
            basis.iter().map(|v| dot(&mu, v)).collect()
        })
        .collect();
    let vertices = p.vertices()?;
    let mut out: BTreeSet<Vec<Rat>> = BTreeSet::new();
    for x in &vertices {
        let rhs: Vec<Rat> = basis.iter().map(|u| dot(&apply_metric(u), x)).collect();
        let coeffs = solve_square(&gram, &rhs)
            .ok_or_else(|| Error::InvalidInput("projection basis is linearly dependent".into()))?;
        out.insert(coeffs);
    }
    Ok(VertexHull {
        dim: k,
        points: out.into_iter().collect(),
    })
}

/// d x d matrix of the metric-orthogonal projection onto span(basis).
fn projection_matrix(
    dim: usize,
    basis: &[Vec<Rat>],
    metric: Option<&[Rat]>,
) -> Result<Vec<Vec<Rat>>> {
    if basis.is_empty() {
        return Ok(vec![zeros(dim); dim]);
    }
    let apply_metric = |v: &[Rat]| -> Vec<Rat> {
        v.iter()
            .enumerate()
            .map(|(j, x)| match metric {
                Some(m) => x * &m[j],
                None => x.clone(),
            })
            .collect()
    };
    let gram: Vec<Vec<Rat>> = basis
        .iter()
        .map(|u| {
            let mu = apply_metric(u);
            basis.iter().map(|v| dot(&mu, v)).collect()
        })
        .collect();
    // columns of P: P e_j = B G^{-1} B^T M e_j
    let mut cols: Vec<Vec<Rat>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut ej = zeros(dim);
        ej[j] = Rat::one();
        let rhs: Vec<Rat> = basis.iter().map(|u| dot(&apply_metric(u), &ej)).collect();
        let c = solve_square(&gram, &rhs)
            .ok_or_else(|| Error::InvalidInput("subspace basis is linearly dependent".into()))?;
        let mut col = zeros(dim);
        for (ci, u) in c.iter().zip(basis) {
            for (slot, x) in col.iter_mut().zip(u) {
                *slot += ci * x;
            }
        }
        cols.push(col);
    }
    // transpose columns into rows
    Ok((0..dim)
        .map(|i| (0..dim).map(|j| cols[j][i].clone()).collect())
        .collect())
}

/// Eliminate the variable at `col` from a system of >= constraints by
/// pairing positive and negative coefficients (Fourier-Motzkin).
fn fm_eliminate(constraints: &[(Vec<Rat>, Rat)], col: usize) -> Vec<(Vec<Rat>, Rat)> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out: Vec<(Vec<Rat>, Rat)> = Vec::new();
    let drop_col = |v: &[Rat]| -> Vec<Rat> {
        v.iter()
            .enumerate()
            .filter(|(i, _)| *i != col)
            .map(|(_, x)| x.clone())
            .collect()
    };
    for (a, b) in constraints {
        if a[col].is_positive() {
            pos.push((a, b));
        } else if a[col].is_negative() {
            neg.push((a, b));
        } else {
            out.push((drop_col(a), b.clone()));
        }
    }
    for (ap, bp) in &pos {
        for (an, bn) in &neg {
            // positive combination cancelling the pivot column
            let cp = -an[col].clone();
            let cn = ap[col].clone();
            let row: Vec<Rat> = ap
                .iter()
                .zip(an.iter())
                .enumerate()
                .filter(|(i, _)| *i != col)
                .map(|(_, (x, y))| &(&cp * x) + &(&cn * y))
                .collect();
            let rhs = &(&cp * *bp) + &(&cn * *bn);
            out.push((row, rhs));
        }
    }
    // light dedup keeps the constraint count in check
    let mut seen: BTreeMap<Vec<Rat>, Rat> = BTreeMap::new();
    for (a, b) in out {
        match a.iter().find(|x| !x.is_zero()) {
            None => {
                seen.entry(a)
                    .and_modify(|v| {
                        if b > *v {
                            *v = b.clone();
                        }
                    })
                    .or_insert(b);
            }
            Some(lead) => {
                let s = lead.abs().recip();
                let key: Vec<Rat> = a.iter().map(|x| x * &s).collect();
                let val = &b * &s;
                seen.entry(key)
                    .and_modify(|v| {
                        if val > *v {
                            *v = val.clone();
                        }
                    })
                    .or_insert(val);
            }
        }
    }
    seen.into_iter().collect()
}

/// Right-hand sides for the direct-sum construction: entries are the b of
/// a.v >= b, indexed like the functional set.
pub type Offsets = BTreeMap<usize, Rat>;

/// Realize the direct sum of the U-projection of the degenerate-part
/// polytope and the omega-raised subspace slice as an H-polytope in the
/// original coordinates.
///
/// A point x belongs to the sum iff its U-component satisfies the projected
/// constraints and its W-component satisfies the raised ones, so composing
/// both systems with the two projection maps gives an exact realization.
pub fn split_polytope(
    phi: &FunctionalSet,
    dec: &Decomposition,
    b_bounded: &Offsets,
    b_inf: &Offsets,
    omega: &Rat,
    metric: Option<&[Rat]>,
) -> Result<HPolytope> {
    let dim = phi.dim();
    for &i in dec.phi0.iter().chain(dec.phi1.iter()) {
        if !b_bounded.contains_key(&i) {
            return Err(Error::InvalidInput(format!(
                "missing bounded offset for index {i}"
            )));
        }
    }
    for &i in &dec.phi_inf {
        if !b_inf.contains_key(&i) {
            return Err(Error::InvalidInput(format!(
                "missing diverging offset for index {i}"
            )));
        }
    }

    let mut constraints: Vec<(Vec<Rat>, Rat)> = Vec::new();

    // U part: Fourier-Motzkin eliminate the W coordinates from the
    // degenerate-part polytope expressed in (u, w) coordinates, then compose
    // with the U-coordinate map x -> G^{-1} B^T M x.
    let ku = dec.u_basis.len();
    let kw = dec.w_basis.len();
    if ku == 0 && !dec.phi0.is_empty() {
        // W is everything, so the degenerate functionals vanish identically
        // and their polytope is all of V or empty; record emptiness.
        for &i in &dec.phi0 {
            if b_bounded[&i].is_positive() {
                constraints.push((zeros(dim), b_bounded[&i].clone()));
            }
        }
    }
    if ku > 0 && !dec.phi0.is_empty() {
        let apply_metric = |v: &[Rat]| -> Vec<Rat> {
            v.iter()
                .enumerate()
                .map(|(j, x)| match metric {
                    Some(m) => x * &m[j],
                    None => x.clone(),
                })
                .collect()
        };
        let mut uw: Vec<(Vec<Rat>, Rat)> = Vec::new();
        for &i in &dec.phi0 {
            let alpha = phi.functional(i);
            let mut row: Vec<Rat> = dec.u_basis.iter().map(|u| dot(alpha, u)).collect();
            row.extend(dec.w_basis.iter().map(|w| dot(alpha, w)));
            uw.push((row, b_bounded[&i].clone()));
        }
        let mut projected = uw;
        for _ in 0..kw {
            let col = projected.first().map(|(a, _)| a.len() - 1).unwrap_or(0);
            projected = fm_eliminate(&projected, col);
        }
        // coordinate map K with rows k: K[k] . x = coefficient of u_k in
        // the U-projection of x
        let gram: Vec<Vec<Rat>> = dec
            .u_basis
            .iter()
            .map(|u| {
                let mu = apply_metric(u);
                dec.u_basis.iter().map(|v| dot(&mu, v)).collect()
            })
            .collect();
        let mut kmap: Vec<Vec<Rat>> = Vec::with_capacity(ku);
        for _ in 0..ku {
            kmap.push(zeros(dim));
        }
        for j in 0..dim {
            let mut ej = zeros(dim);
            ej[j] = Rat::one();
            let rhs: Vec<Rat> = dec
                .u_basis
                .iter()
                .map(|u| dot(&apply_metric(u), &ej))
                .collect();
            let c = solve_square(&gram, &rhs)
                .ok_or_else(|| Error::InvalidInput("U basis is linearly dependent".into()))?;
            for (k, ck) in c.into_iter().enumerate() {
                kmap[k][j] = ck;
            }
        }
        for (gamma, g) in projected {
            let mut row = zeros(dim);
            for (gk, krow) in gamma.iter().zip(&kmap) {
                for (slot, x) in row.iter_mut().zip(krow) {
                    *slot += gk * x;
                }
            }
            constraints.push((row, g));
        }
    }

    // W slice: raised constraints composed with the W projection.
    let pw = projection_matrix(dim, &dec.w_basis, metric)?;
    for &i in dec.phi_inf.iter().chain(dec.phi1.iter()) {
        let alpha = phi.functional(i);
        let row: Vec<Rat> = (0..dim)
            .map(|j| (0..dim).map(|r| &alpha[r] * &pw[r][j]).sum())
            .collect();
        let base = if dec.phi_inf.contains(&i) {
            &b_inf[&i]
        } else {
            &b_bounded[&i]
        };
        constraints.push((row, base + omega));
    }

    HPolytope::new(dim, constraints)
}

/// Offset schedule on a diverging index: b(n) = base - slope * n.
#[derive(Debug, Clone, PartialEq)]
pub struct InfSchedule {
    pub base: Rat,
    pub slope: Rat,
}

impl InfSchedule {
    pub fn at(&self, n: i64) -> Rat {
        &self.base - &(&self.slope * Rat::from(BigInt::from(n)))
    }
}

/// Rule producing the raise amount omega'_n.
#[derive(Debug, Clone, PartialEq)]
pub enum OmegaRule {
    /// Nearest rational to sqrt(n) with the given denominator; rational so
    /// every downstream volume stays exact.
    SqrtRounded {
        denom: u64,
    },
    /// omega = n * num / den.
    LinearFraction {
        num: i64,
        den: i64,
    },
    Constant(Rat),
}

impl OmegaRule {
    pub fn at(&self, n: i64) -> Rat {
        match self {
            OmegaRule::SqrtRounded { denom } => {
                let d = BigInt::from(*denom);
                let target = BigInt::from(n) * &d * &d;
                let s = target.sqrt();
                let lo = &s * &s;
                let hi = (&s + 1u32) * (&s + 1u32);
                let rounded = if &target - lo <= hi - &target {
                    s
                } else {
                    s + 1u32
                };
                Rat::new(rounded, d)
            }
            OmegaRule::LinearFraction { num, den } => {
                Rat::new(BigInt::from(n) * BigInt::from(*num), BigInt::from(*den))
            }
            OmegaRule::Constant(c) => c.clone(),
        }
    }
}

/// Exact volume-ratio series for the split construction.
#[derive(Debug, Clone)]
pub struct RatioReport {
    pub n_values: Vec<i64>,
    pub omega_values: Vec<Rat>,
    pub vol_split: Vec<Rat>,
    pub vol_full: Vec<Rat>,
    pub ratios: Vec<Rat>,
    pub limit_estimate: f64,
    pub converges_to_one: bool,
}

/// Run the ratio experiment over `n_list`. For each n the split polytope is
/// built, its containment in the full polytope is verified exactly via
/// vertices, and the exact volume ratio is recorded.
pub fn ratio_experiment(
    phi: &FunctionalSet,
    dec: &Decomposition,
    b_bounded: &Offsets,
    schedule_inf: &BTreeMap<usize, InfSchedule>,
    omega_rule: &OmegaRule,
    n_list: &[i64],
    metric: Option<&[Rat]>,
) -> Result<RatioReport> {
    for &i in &dec.phi_inf {
        if !schedule_inf.contains_key(&i) {
            return Err(Error::InvalidInput(format!(
                "missing schedule for diverging index {i}"
            )));
        }
    }
    let rows: Vec<Result<(Rat, Rat, Rat, Rat)>> = n_list
        .par_iter()
        .map(|&n| {
            let omega = omega_rule.at(n);
            let b_inf: Offsets = schedule_inf.iter().map(|(&i, s)| (i, s.at(n))).collect();

            let mut full_constraints = Vec::new();
            for i in 0..phi.len() {
                let b = if dec.phi_inf.contains(&i) {
                    b_inf[&i].clone()
                } else {
                    b_bounded[&i].clone()
                };
                full_constraints.push((phi.functional(i).to_vec(), b));
            }
            let full = HPolytope::new(phi.dim(), full_constraints)?;
            let split = split_polytope(phi, dec, b_bounded, &b_inf, &omega, metric)?;

            if !split.is_empty() {
                for v in split.vertices()? {
                    if !full.contains(&v) {
                        return Err(Error::ContainmentViolation(n));
                    }
                }
            }
            let vol_split = split.volume()?;
            let vol_full = full.volume()?;
            if vol_full.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "full polytope has zero volume at n = {n}"
                )));
            }
            let ratio = &vol_split / &vol_full;
            Ok((omega, vol_split, vol_full, ratio))
        })
        .collect();

    let mut report = RatioReport {
        n_values: n_list.to_vec(),
        omega_values: Vec::new(),
        vol_split: Vec::new(),
        vol_full: Vec::new(),
        ratios: Vec::new(),
        limit_estimate: f64::NAN,
        converges_to_one: false,
    };
    for row in rows {
        let (omega, vs, vf, ratio) = row?;
        report.omega_values.push(omega);
        report.vol_split.push(vs);
        report.vol_full.push(vf);
        report.ratios.push(ratio);
    }
    if let Some(last) = report.ratios.last() {
        report.limit_estimate = rat_to_f64(last);
        report.converges_to_one = (report.limit_estimate - 1.0).abs() <= 0.05;
    }
    Ok(report)
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::rat::rat;
    use proptest::prelude::*;

    fn arb_bounded_polytope() -> impl Strategy<Value = HPolytope> {
        (
            2usize..=3,
            prop::collection::vec((prop::collection::vec(-4i64..=4, 3), 1i64..=4), 0..=5),
        )
            .prop_map(|(dim, extra)| {
                let mut constraints: Vec<(Vec<Rat>, Rat)> = Vec::new();
                for j in 0..dim {
                    let mut pos = zeros(dim);
                    pos[j] = rat(1, 1);
                    constraints.push((pos, rat(-1, 1)));
                    let mut neg = zeros(dim);
                    neg[j] = rat(-1, 1);
                    constraints.push((neg, rat(-1, 1)));
                }
                for (alpha, b) in extra {
                    let row: Vec<Rat> = alpha[..dim].iter().map(|&x| rat(x, 4)).collect();
                    if row.iter().all(|x| x.is_zero()) {
                        continue;
                    }
                    constraints.push((row, rat(-b, 4)));
                }
                HPolytope::new(dim, constraints).expect("consistent")
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        /// Lebesgue volume is invariant under translation of the polytope.
        #[test]
        fn volume_is_translation_invariant(
            p in arb_bounded_polytope(),
            shift in prop::collection::vec(-6i64..=6, 3),
        ) {
            let vol = p.volume().unwrap();
            let t: Vec<Rat> = shift[..p.dim()].iter().map(|&x| rat(x, 4)).collect();
            let moved = HPolytope::new(
                p.dim(),
                p.constraints()
                    .iter()
                    .map(|(a, b)| (a.clone(), b + &dot(a, &t)))
                    .collect(),
            )
            .unwrap();
            prop_assert_eq!(moved.volume().unwrap(), vol);
        }

        /// Every enumerated vertex satisfies every constraint.
        #[test]
        fn vertices_lie_in_the_polytope(p in arb_bounded_polytope()) {
            if p.is_empty() {
                return Ok(());
            }
            for v in p.vertices().unwrap() {
                prop_assert!(p.contains(&v));
            }
        }
    }
}
