//! Counting pipeline for integer points on the symplectic characteristic
//! variety: the Lie-algebra membership tests, isotropic index sets with
//! their combinatorial constants, the Haar normalization constants, exact
//! counts in the rank-one case, and Monte-Carlo checks of the ball-volume
//! and wedge-growth estimates.

use crate::error::{Error, Result};
use crate::mc;
use crate::polytopes::HPolytope;
use crate::rat::{rat_to_f64, Rat};
use crate::special::{unit_ball_volume, xi};
use crate::weights::Character;
use num::bigint::BigInt;
use num::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Dimension parameter N and the distinct positive integers defining the
/// target characteristic polynomial prod (t^2 - d_i^2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticSpec {
    n: usize,
    d: Vec<u64>,
}

impl SymplecticSpec {
    pub fn new(n: usize, d: Vec<u64>) -> Result<Self> {
        if n == 0 || d.len() != n {
            return Err(Error::InvalidInput(format!(
                "need {n} diagonal values, got {}",
                d.len()
            )));
        }
        for (i, &x) in d.iter().enumerate() {
            if x == 0 {
                return Err(Error::InvalidInput("d values must be positive".into()));
            }
            for &y in &d[i + 1..] {
                if x == y {
                    return Err(Error::InvalidInput("d values must be distinct".into()));
                }
            }
        }
        Ok(SymplecticSpec { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> &[u64] {
        &self.d
    }

    /// diag(d_1, ..., d_N, -d_N, ..., -d_1), the base point of the variety.
    pub fn base_point(&self) -> Vec<Vec<i64>> {
        let two_n = 2 * self.n;
        let mut x = vec![vec![0i64; two_n]; two_n];
        for i in 0..self.n {
            x[i][i] = self.d[i] as i64;
            x[two_n - 1 - i][two_n - 1 - i] = -(self.d[i] as i64);
        }
        x
    }

    fn sum_d_sq(&self) -> f64 {
        self.d.iter().map(|&x| (x * x) as f64).sum()
    }
}

/// The 2N x 2N form [[0, J_N], [-J_N, 0]] with J_N antidiagonal ones.
pub fn symplectic_form(n: usize) -> Vec<Vec<i64>> {
    let two_n = 2 * n;
    let mut j = vec![vec![0i64; two_n]; two_n];
    for k in 0..n {
        j[k][2 * n - 1 - k] = 1;
        j[n + k][n - 1 - k] = -1;
    }
    j
}

fn mat_mul_i128(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i128>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] as i128 * b[k][j] as i128).sum())
                .collect()
        })
        .collect()
}

/// Membership in the symplectic Lie algebra: X^T J + J X = 0.
pub fn in_lie_algebra(x: &[Vec<i64>], n: usize) -> Result<bool> {
    let two_n = 2 * n;
    if x.len() != two_n || x.iter().any(|row| row.len() != two_n) {
        return Err(Error::DimensionMismatch {
            expected: two_n,
            got: x.len(),
        });
    }
    let j = symplectic_form(n);
    let xt: Vec<Vec<i64>> = (0..two_n)
        .map(|i| (0..two_n).map(|k| x[k][i]).collect())
        .collect();
    let left = mat_mul_i128(&xt, &j);
    let right = mat_mul_i128(&j, x);
    Ok(left
        .iter()
        .zip(&right)
        .all(|(l, r)| l.iter().zip(r).all(|(a, b)| a + b == 0)))
}

/// Coefficients [1, c_1, ..., c_m] of det(tI - X) = t^m + c_1 t^{m-1} + ...
/// by the trace recursion, exact over rationals (integral for integer X).
pub fn char_poly(x: &[Vec<i64>]) -> Vec<BigInt> {
    let m = x.len();
    let xr: Vec<Vec<Rat>> = x
        .iter()
        .map(|row| row.iter().map(|&v| Rat::from(BigInt::from(v))).collect())
        .collect();
    let mut mat: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    let mut coeffs = vec![BigInt::one()];
    for k in 1..=m {
        // mat <- X * mat
        let prod: Vec<Vec<Rat>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| (0..m).map(|l| &xr[i][l] * &mat[l][j]).sum())
                    .collect()
            })
            .collect();
        let trace: Rat = (0..m).map(|i| prod[i][i].clone()).sum();
        let ck = -(&trace / Rat::from(BigInt::from(k as i64)));
        for (i, row) in prod.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                mat[i][j] = if i == j { v + &ck } else { v.clone() };
            }
        }
        debug_assert!(ck.is_integer());
        coeffs.push(ck.to_integer());
    }
    coeffs
}

/// Coefficients of prod_i (t^2 - d_i^2) in the same layout as `char_poly`.
pub fn target_poly(spec: &SymplecticSpec) -> Vec<BigInt> {
    let mut poly = vec![BigInt::one()];
    for &d in &spec.d {
        let dsq = BigInt::from(d * d);
        // multiply by t^2 - d^2
        let mut next = vec![BigInt::zero(); poly.len() + 2];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 2] -= c * &dsq;
        }
        poly = next;
    }
    poly
}

/// Integral point of the variety: Lie-algebra member with the prescribed
/// characteristic polynomial, compared coefficientwise.
pub fn in_variety(x: &[Vec<i64>], spec: &SymplecticSpec) -> Result<bool> {
    if !in_lie_algebra(x, spec.n)? {
        return Ok(false);
    }
    Ok(char_poly(x) == target_poly(spec))
}

/// An isotropic index set I = J u (2N+1 - J') for disjoint J, J' in
/// {1..N}; these parametrize the maximal parabolic subgroups containing
/// the diagonal torus. Indices are 1-based and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropicSet {
    indices: Vec<usize>,
    j: Vec<usize>,
    jprime: Vec<usize>,
}

impl IsotropicSet {
    pub fn from_parts(n: usize, j: Vec<usize>, jprime: Vec<usize>) -> Result<Self> {
        for &v in j.iter().chain(&jprime) {
            if v == 0 || v > n {
                return Err(Error::OutOfRange("isotropic part", format!("{v}")));
            }
        }
        if j.iter().any(|v| jprime.contains(v)) {
            return Err(Error::InvalidInput("J and J' must be disjoint".into()));
        }
        if j.is_empty() && jprime.is_empty() {
            return Err(Error::InvalidInput("isotropic set must be nonempty".into()));
        }
        let mut indices: Vec<usize> = j
            .iter()
            .copied()
            .chain(jprime.iter().map(|&v| 2 * n + 1 - v))
            .collect();
        indices.sort_unstable();
        Ok(IsotropicSet { indices, j, jprime })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.indices.iter().map(|i| i.to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// All 3^N - 1 nonempty isotropic index sets.
pub fn isotropic_subsets(n: usize) -> Vec<IsotropicSet> {
    let mut out = Vec::new();
    let total = 3usize.pow(n as u32);
    for code in 1..total {
        let mut c = code;
        let mut j = Vec::new();
        let mut jprime = Vec::new();
        for v in 1..=n {
            match c % 3 {
                1 => j.push(v),
                2 => jprime.push(v),
                _ => {}
            }
            c /= 3;
        }
        out.push(IsotropicSet::from_parts(n, j, jprime).expect("valid by construction"));
    }
    out.sort_by(|a, b| a.indices.cmp(&b.indices));
    out
}

/// c_I = sum over the sorted indices of (i_lambda - lambda).
pub fn c_of(set: &IsotropicSet) -> u64 {
    set.indices
        .iter()
        .enumerate()
        .map(|(k, &i)| (i - (k + 1)) as u64)
        .sum()
}

/// Torus weight of the wedge basis vector e_I: +1 on J, -1 on J'.
pub fn weight_of(set: &IsotropicSet, n: usize) -> Character {
    let mut coords = vec![0i64; n];
    for &v in &set.j {
        coords[v - 1] = 1;
    }
    for &v in &set.jprime {
        coords[v - 1] = -1;
    }
    Character::new(coords)
}

/// The bounded polytope { t : <weight_I, t> >= -c_I for all isotropic I }
/// whose volume feeds the first counting constant.
pub fn c1_polytope(n: usize) -> HPolytope {
    let constraints: Vec<(Vec<Rat>, Rat)> = isotropic_subsets(n)
        .iter()
        .map(|set| {
            let w = weight_of(set, n);
            let row: Vec<Rat> = w
                .coords()
                .iter()
                .map(|&c| Rat::from(BigInt::from(c)))
                .collect();
            (row, -Rat::from(BigInt::from(c_of(set) as i64)))
        })
        .collect();
    HPolytope::new(n, constraints).expect("consistent dimension")
}

/// Exact absolute value of prod_{i<j} (d_j - d_i) * prod_{i<=j} (d_j + d_i),
/// the Jacobian of the coordinate change on the unipotent orbit slice.
pub fn jacobian_divisor(spec: &SymplecticSpec) -> i128 {
    let d = &spec.d;
    let mut p: i128 = 1;
    for i in 0..d.len() {
        for j in (i + 1)..d.len() {
            p *= d[j] as i128 - d[i] as i128;
        }
        for j in i..d.len() {
            p *= d[j] as i128 + d[i] as i128;
        }
    }
    p.abs()
}

/// Everything the constants pipeline produces: C1 with its exact polytope
/// volume, C2 with the Jacobian divisor, and the completed-zeta values
/// entering the Haar normalization.
#[derive(Debug, Clone)]
pub struct ConstantsReport {
    pub c1: f64,
    pub c2: f64,
    pub jacobian: i128,
    pub xi_values: Vec<f64>,
    pub c1_polytope_volume: Rat,
}

/// C1 = 2^((N^2+N)/2 - 1) / prod_k xi(2k) times the exact volume of the
/// isotropic-constraint polytope. Exact volume is desk-scale for N <= 3.
pub fn constants_report(spec: &SymplecticSpec) -> Result<ConstantsReport> {
    let n = spec.n;
    if n > 3 {
        return Err(Error::OutOfRange("constants", format!("N = {n} > 3")));
    }
    let volume = c1_polytope(n).volume()?;
    let xi_values: Vec<f64> = (1..=n).map(|k| xi(2.0 * k as f64)).collect();
    let xi_prod: f64 = xi_values.iter().product();
    let exponent = (n * n + n) as i32 / 2 - 1;
    let c1 = 2f64.powi(exponent) / xi_prod * rat_to_f64(&volume);

    let jacobian = jacobian_divisor(spec);
    let nn = n * n;
    let c2 = unit_ball_volume(nn) * 2f64.powi(-((nn as i32 - n as i32) / 2)) / jacobian as f64;

    Ok(ConstantsReport {
        c1,
        c2,
        jacobian,
        xi_values,
        c1_polytope_volume: volume,
    })
}

pub fn constant_c1(spec: &SymplecticSpec) -> Result<f64> {
    Ok(constants_report(spec)?.c1)
}

pub fn constant_c2(spec: &SymplecticSpec) -> Result<f64> {
    Ok(constants_report(spec)?.c2)
}

/// The predicted main term N_R = C1 C2 R^(N^2) (ln R)^N.
pub fn asymptotic_n_r(spec: &SymplecticSpec, r: f64) -> Result<f64> {
    if !(r > 1.0) {
        return Err(Error::OutOfRange("R", format!("{r} <= 1")));
    }
    let rep = constants_report(spec)?;
    let nn = (spec.n * spec.n) as i32;
    Ok(rep.c1 * rep.c2 * r.powi(nn) * r.ln().powi(spec.n as i32))
}

/// Monte-Carlo volume of the quadric region defining C2, divided by the
/// Jacobian: an independent numerical check of the closed form.
pub fn c2_quadric_mc(spec: &SymplecticSpec, samples: u64, seed: u64) -> f64 {
    let n = spec.n;
    let lay = Layout::new(n);
    let half: Vec<f64> = lay
        .coefficients()
        .iter()
        .map(|&c| (1.0 / c).sqrt())
        .collect();
    let box_vol: f64 = half.iter().map(|h| 2.0 * h).product();
    let frac = mc::fraction(samples, seed, &half, |p| lay.form(p) <= 1.0);
    frac * box_vol / jacobian_divisor(spec) as f64
}

/// Coordinate layout of the unipotent orbit slice: free y entries above the
/// diagonal, then the doubled z entries, then the antidiagonal z entries.
struct Layout {
    /// quadratic-form coefficient per coordinate (2 or 1)
    coefs: Vec<f64>,
    /// positions of the superdiagonal y entries within the coordinate vector
    superdiag: Vec<usize>,
    /// position of the z entry at (N, 1)
    z_corner: usize,
}

impl Layout {
    fn new(n: usize) -> Layout {
        let mut coefs = Vec::new();
        let mut superdiag = Vec::new();
        // y_{ij}, i < j
        for i in 1..=n {
            for j in (i + 1)..=n {
                if j == i + 1 {
                    superdiag.push(coefs.len());
                }
                coefs.push(2.0);
            }
        }
        // z_{ij}, i + j > N + 1 (each appears twice in the matrix)
        for i in 1..=n {
            for j in 1..=n {
                if i + j > n + 1 {
                    coefs.push(2.0);
                }
            }
        }
        // z_{ij}, i + j = N + 1 (each appears once)
        let mut z_corner = 0;
        for i in 1..=n {
            if i == n {
                z_corner = coefs.len();
            }
            coefs.push(1.0);
        }
        Layout {
            coefs,
            superdiag,
            z_corner,
        }
    }

    fn coefficients(&self) -> &[f64] {
        &self.coefs
    }

    fn form(&self, p: &[f64]) -> f64 {
        p.iter().zip(&self.coefs).map(|(x, c)| c * x * x).sum()
    }

    fn in_floor(&self, p: &[f64], floor: f64) -> bool {
        self.superdiag.iter().all(|&i| p[i].abs() >= floor) && p[self.z_corner].abs() >= floor
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BallRatioReport {
    /// mu_U(B_{R,eps}) / mu_U(B_R)
    pub ratio_floor: f64,
    /// mu_U(B_R) / (C2 R^(N^2))
    pub ratio_main: f64,
}

/// Monte-Carlo ball-volume check in the orbit-slice coordinates. Both
/// ratios are deterministic given the seed.
pub fn ball_ratio_mc(
    spec: &SymplecticSpec,
    r: f64,
    epsilon: f64,
    samples: u64,
    seed: u64,
) -> Result<BallRatioReport> {
    if samples < 100_000 {
        return Err(Error::OutOfRange("samples", format!("{samples} < 1e5")));
    }
    let l_sq = r * r - 2.0 * spec.sum_d_sq();
    if l_sq <= 0.0 {
        return Err(Error::OutOfRange("R", format!("{r} too small for d")));
    }
    let lay = Layout::new(spec.n);
    let l = l_sq.sqrt();
    let half: Vec<f64> = lay.coefficients().iter().map(|&c| l / c.sqrt()).collect();
    let floor = epsilon * r;
    let counts = mc::multi_count(samples, seed, &half, 2, |p| {
        if lay.form(p) <= l_sq {
            if lay.in_floor(p, floor) {
                3
            } else {
                1
            }
        } else {
            0
        }
    });
    if counts[0] == 0 {
        return Err(Error::InvalidInput("no samples landed in the ball".into()));
    }
    let box_vol: f64 = half.iter().map(|h| 2.0 * h).product();
    let leb = counts[0] as f64 / samples as f64 * box_vol;
    let mu = leb / jacobian_divisor(spec) as f64;
    let c2 = constant_c2(spec)?;
    let nn = (spec.n * spec.n) as i32;
    Ok(BallRatioReport {
        ratio_floor: counts[1] as f64 / counts[0] as f64,
        ratio_main: mu / (c2 * r.powi(nn)),
    })
}

/// Statistics of ln||u e_I|| against c_I ln R for one radius.
#[derive(Debug, Clone)]
pub struct GrowthRow {
    pub r: f64,
    /// max over samples and I of |ln||u e_I|| / ln R - c_I|
    pub max_rel_dev: f64,
    /// max over samples and I of |ln||u e_I|| - c_I ln R|
    pub max_abs_dev: f64,
    /// per-set maxima of the relative deviation, labelled
    pub per_set: Vec<(String, f64)>,
}

#[derive(Debug, Clone)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
}

/// Sample unipotent group elements through the triangular slice of the
/// variety with superdiagonal floors, and record how far the wedge norms
/// ln||u e_I|| sit from c_I ln R.
pub fn growth_estimate_check(
    spec: &SymplecticSpec,
    samples: u64,
    r_list: &[f64],
    epsilon_prime: f64,
    seed: u64,
) -> Result<GrowthReport> {
    let n = spec.n;
    if n > 2 {
        return Err(Error::OutOfRange("growth check", format!("N = {n} > 2")));
    }
    let sets = isotropic_subsets(n);
    let mut rows = Vec::new();
    for (ri, &r) in r_list.iter().enumerate() {
        let l_sq = r * r - 2.0 * spec.sum_d_sq();
        if l_sq <= 0.0 {
            return Err(Error::OutOfRange("R", format!("{r} too small for d")));
        }
        let l = l_sq.sqrt();
        let floor = epsilon_prime * r;
        if floor >= l {
            return Err(Error::InvalidInput("floor excludes the whole ball".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(ri as u64);
        let two_n = 2 * n;
        let k_coords = two_n * (two_n - 1) / 2;
        let mut accepted = 0u64;
        let mut max_rel = 0.0f64;
        let mut max_abs = 0.0f64;
        let mut per_set = vec![0.0f64; sets.len()];
        let mut coords = vec![0.0f64; k_coords];
        while accepted < samples {
            for c in coords.iter_mut() {
                let u: f64 = rng.random();
                *c = (2.0 * u - 1.0) * l;
            }
            let norm_sq: f64 = coords.iter().map(|x| x * x).sum();
            if norm_sq > l_sq {
                continue;
            }
            // superdiagonal entries are the first of each row's coordinate
            // run: positions 0, 2N-1, 2N-1 + 2N-2, ...
            let mut pos = 0;
            let mut ok = true;
            for i in 0..(two_n - 1) {
                if coords[pos].abs() < floor {
                    ok = false;
                    break;
                }
                pos += two_n - 1 - i;
            }
            if !ok {
                continue;
            }
            accepted += 1;
            let u = solve_unipotent(&coords, spec);
            for (si, set) in sets.iter().enumerate() {
                let nrm = wedge_norm(&u, set.indices());
                let rel = (nrm.ln() / r.ln() - c_of(set) as f64).abs();
                let abs = (nrm.ln() - c_of(set) as f64 * r.ln()).abs();
                max_rel = max_rel.max(rel);
                max_abs = max_abs.max(abs);
                per_set[si] = per_set[si].max(rel);
            }
        }
        rows.push(GrowthRow {
            r,
            max_rel_dev: max_rel,
            max_abs_dev: max_abs,
            per_set: sets
                .iter()
                .zip(&per_set)
                .map(|(s, &d)| (s.label(), d))
                .collect(),
        });
    }
    Ok(GrowthReport { rows })
}

/// The floor is necessary: with the first superdiagonal entry forced to
/// zero the absolute deviation grows like ln R. Returns (R, max abs dev)
/// for a crafted element at each radius.
pub fn growth_floor_necessity(spec: &SymplecticSpec, r_list: &[f64]) -> Result<Vec<(f64, f64)>> {
    let n = spec.n;
    if n > 2 {
        return Err(Error::OutOfRange("growth check", format!("N = {n} > 2")));
    }
    let sets = isotropic_subsets(n);
    let two_n = 2 * n;
    let k_coords = two_n * (two_n - 1) / 2;
    let mut out = Vec::new();
    for &r in r_list {
        let mut coords = vec![0.0f64; k_coords];
        // zero out the (1,2) entry, put the other superdiagonals at R/2
        let mut pos = 0;
        for i in 0..(two_n - 1) {
            coords[pos] = if i == 0 { 0.0 } else { r / 2.0 };
            pos += two_n - 1 - i;
        }
        let norm_sq: f64 = coords.iter().map(|x| x * x).sum::<f64>() + 2.0 * spec.sum_d_sq();
        if norm_sq > r * r {
            return Err(Error::OutOfRange("R", format!("{r} too small")));
        }
        let u = solve_unipotent(&coords, spec);
        let mut max_abs = 0.0f64;
        for set in &sets {
            let nrm = wedge_norm(&u, set.indices());
            max_abs = max_abs.max((nrm.ln() - c_of(set) as f64 * r.ln()).abs());
        }
        out.push((r, max_abs));
    }
    Ok(out)
}

/// Recover the unipotent upper-triangular u with u x0 u^{-1} = X from the
/// strictly-upper coordinates of X (row-major runs). The diagonal gaps
/// delta_j - delta_i are nonzero because the d values are distinct.
fn solve_unipotent(coords: &[f64], spec: &SymplecticSpec) -> Vec<Vec<f64>> {
    let n = spec.n;
    let two_n = 2 * n;
    let mut delta = vec![0.0f64; two_n];
    for i in 0..n {
        delta[i] = spec.d[i] as f64;
        delta[two_n - 1 - i] = -(spec.d[i] as f64);
    }
    // unpack X
    let mut x = vec![vec![0.0f64; two_n]; two_n];
    let mut pos = 0;
    for i in 0..two_n {
        x[i][i] = delta[i];
        for j in (i + 1)..two_n {
            x[i][j] = coords[pos];
            pos += 1;
        }
    }
    let mut u = vec![vec![0.0f64; two_n]; two_n];
    for (i, row) in u.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for gap in 1..two_n {
        for i in 0..(two_n - gap) {
            let j = i + gap;
            let mut s = 0.0;
            for k in (i + 1)..=j {
                s += x[i][k] * u[k][j];
            }
            u[i][j] = s / (delta[j] - delta[i]);
        }
    }
    u
}

fn det_f64(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let mut piv = c;
        for r in (c + 1)..n {
            if m[r][c].abs() > m[piv][c].abs() {
                piv = r;
            }
        }
        if m[piv][c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        det *= m[c][c];
        for r in (c + 1)..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

/// Euclidean norm of the wedge of the selected (1-based) columns of u:
/// the square root of the sum of squared k x k minors.
fn wedge_norm(u: &[Vec<f64>], indices_1based: &[usize]) -> f64 {
    let k = indices_1based.len();
    let m = u.len();
    let cols: Vec<usize> = indices_1based.iter().map(|&i| i - 1).collect();
    let mut sum = 0.0;
    let mut rows: Vec<usize> = (0..k).collect();
    loop {
        let mut minor: Vec<Vec<f64>> = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| u[r][c]).collect())
            .collect();
        let d = det_f64(&mut minor);
        sum += d * d;
        // next k-subset of rows
        let mut i = k;
        loop {
            if i == 0 {
                return sum.sqrt();
            }
            i -= 1;
            if rows[i] != i + m - k {
                rows[i] += 1;
                for l in (i + 1)..k {
                    rows[l] = rows[l - 1] + 1;
                }
                break;
            }
        }
    }
}

fn isqrt_i64(x: i64) -> i64 {
    if x < 0 {
        return -1;
    }
    let mut r = (x as f64).sqrt() as i64;
    while r > 0 && r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// Exact count of integral variety points of Frobenius norm at most R in
/// the rank-one case: (a, b, c) with a^2 + bc = d^2 and 2a^2 + b^2 + c^2
/// <= R^2, enumerated through divisor pairs of d^2 - a^2.
pub fn count_points_n1(spec: &SymplecticSpec, r: f64) -> Result<u64> {
    if spec.n != 1 {
        return Err(Error::OutOfRange("count", format!("N = {} != 1", spec.n)));
    }
    if !(r >= 1.0) || r > 10_000.0 {
        return Err(Error::OutOfRange("R", format!("{r} outside [1, 1e4]")));
    }
    let d = spec.d[0] as i64;
    let limit = (r * r).floor() as i64;
    let a_max = isqrt_i64(limit / 2);
    let count: u64 = (-a_max..=a_max)
        .into_par_iter()
        .map(|a| {
            let lim2 = limit - 2 * a * a;
            let m = d * d - a * a;
            if m == 0 {
                let l = isqrt_i64(lim2);
                (4 * l + 1) as u64
            } else {
                let b_max = isqrt_i64(lim2);
                let mut c = 0u64;
                for b in 1..=b_max {
                    if m % b == 0 {
                        let q = m / b;
                        if b * b + q * q <= lim2 {
                            c += 2;
                        }
                    }
                }
                c
            }
        })
        .sum();
    Ok(count)
}

#[derive(Debug, Clone, Copy)]
pub struct CountEntry {
    pub r: f64,
    pub count: u64,
    pub n_r: f64,
    pub count_over_n_r: f64,
}

/// Counts across a radius ladder with the predicted main term attached.
pub fn count_series_n1(spec: &SymplecticSpec, r_list: &[f64]) -> Result<Vec<CountEntry>> {
    let mut entries = Vec::new();
    let mut prev = 0u64;
    let mut prev_r = 0.0f64;
    for &r in r_list {
        let count = count_points_n1(spec, r)?;
        if r >= prev_r && count < prev {
            return Err(Error::InvariantViolation(
                "count series must be nondecreasing in R".into(),
            ));
        }
        prev = count;
        prev_r = r;
        let n_r = asymptotic_n_r(spec, r)?;
        entries.push(CountEntry {
            r,
            count,
            n_r,
            count_over_n_r: count as f64 / n_r,
        });
    }
    Ok(entries)
}

/// Certify that the isotropic-constraint polytope is bounded and nonempty;
/// an unbounded one would mean the constraint generation itself is wrong.
pub fn c1_polytope_is_valid(n: usize) -> bool {
    let p = c1_polytope(n);
    !p.is_empty() && p.is_bounded()
}

/// Test-support: pseudo-random integral symplectic matrices as short words
/// in elementary generators, returned with their exact inverses.
pub fn random_symplectic(n: usize, rng: &mut impl Rng) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let two_n = 2 * n;
    let id: Vec<Vec<i64>> = (0..two_n)
        .map(|i| (0..two_n).map(|j| i64::from(i == j)).collect())
        .collect();
    let mul = |a: &[Vec<i64>], b: &[Vec<i64>]| -> Vec<Vec<i64>> {
        mat_mul_i128(a, b)
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| i64::try_from(v).expect("entries stay desk-scale"))
                    .collect()
            })
            .collect()
    };
    let mut g = id.clone();
    let mut g_inv = id.clone();
    for _ in 0..4 {
        let (gen, gen_inv) = random_generator(n, rng);
        g = mul(&g, &gen);
        g_inv = mul(&gen_inv, &g_inv);
    }
    (g, g_inv)
}

fn random_generator(n: usize, rng: &mut impl Rng) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let two_n = 2 * n;
    let id: Vec<Vec<i64>> = (0..two_n)
        .map(|i| (0..two_n).map(|j| i64::from(i == j)).collect())
        .collect();
    match rng.random_range(0..3u32) {
        0 if n >= 2 => {
            // block diag(A, J_N (A^T)^{-1} J_N) with A = I + c E_{pq}
            let p = rng.random_range(0..n);
            let mut q = rng.random_range(0..n);
            while q == p {
                q = rng.random_range(0..n);
            }
            let c: i64 = rng.random_range(-2..=2);
            let build = |c: i64| -> Vec<Vec<i64>> {
                let mut m = id.clone();
                m[p][q] = c;
                // (A^{-T}) has -c at (q, p); conjugating by the antidiagonal
                // maps (i, j) -> (N-1-i, N-1-j) within the lower block
                m[n + (n - 1 - q)][n + (n - 1 - p)] = -c;
                m
            };
            (build(c), build(-c))
        }
        1 => {
            // upper unipotent [[I, B], [0, I]] with J_N B symmetric:
            // B = b E_{p, N-1-p} works for any p
            let p = rng.random_range(0..n);
            let b: i64 = rng.random_range(-2..=2);
            let build = |b: i64| -> Vec<Vec<i64>> {
                let mut m = id.clone();
                m[p][n + (n - 1 - p)] = b;
                m
            };
            (build(b), build(-b))
        }
        _ => {
            // the form itself: J is symplectic with inverse -J
            let j = symplectic_form(n);
            let jinv: Vec<Vec<i64>> = j.iter().map(|r| r.iter().map(|&v| -v).collect()).collect();
            (j, jinv)
        }
    }
}

/// The origin satisfies every constraint since the c_I are nonnegative.
pub fn c1_polytope_contains_origin(n: usize) -> bool {
    c1_polytope(n).contains(&vec![Rat::zero(); n])
}
