//! Numerical dynamics: decay of oscillatory integrals against wrapping
//! phases, empirical equidistribution of the wrapped curve, and the closed
//! hyperbolic shearing identities with their conjugation limit.

use crate::error::{Error, Result};
use crate::quad::integrate_complex;
use crate::rat::{rat_from_f64, rat_to_f64, Rat};
use num::bigint::BigInt;
use num::{Signed, Zero};
use std::f64::consts::PI;

/// A nonnegative piecewise-polynomial bump (x - x0)^p (x1 - x)^q on its
/// support, zero outside.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpFunction {
    x0: f64,
    x1: f64,
    p: u32,
    q: u32,
}

impl BumpFunction {
    pub fn new(x0: f64, x1: f64, p: u32, q: u32) -> Result<Self> {
        if !(x1 > x0) {
            return Err(Error::InvalidInput("empty support".into()));
        }
        Ok(BumpFunction { x0, x1, p, q })
    }

    /// The fixed cubic fixture x^2 (1 - x) on [0, 1].
    pub fn cubic_unit() -> Self {
        BumpFunction {
            x0: 0.0,
            x1: 1.0,
            p: 2,
            q: 1,
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.x0, self.x1)
    }

    /// Continuity order at the support boundary.
    pub fn smoothness(&self) -> u32 {
        self.p.min(self.q).saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.x0 || x >= self.x1 {
            return 0.0;
        }
        (x - self.x0).powi(self.p as i32) * (self.x1 - x).powi(self.q as i32)
    }

    /// Closed form: (x1 - x0)^(p+q+1) * p! q! / (p+q+1)!.
    pub fn integral(&self) -> f64 {
        let (p, q) = (self.p as u64, self.q as u64);
        let mut beta = 1.0f64;
        // p! q! / (p+q+1)! computed as a product of small ratios
        for k in 1..=q {
            beta *= k as f64 / (p + k) as f64;
        }
        beta /= (p + q + 1) as f64;
        (self.x1 - self.x0).powi((p + q + 1) as i32) * beta
    }
}

/// Integral of f(x) exp(2 pi i m n e^{-2x}) over the support of f, to
/// absolute accuracy 1e-8. Panels are pre-split so each spans at most a
/// quarter period of the phase.
pub fn oscillatory_integral(f: &BumpFunction, m: i64, n: i64) -> Result<(f64, f64)> {
    let (x0, x1) = f.support();
    let mn = (m * n) as f64;
    let tol = 1e-8;
    let mut points = vec![x0];
    if mn != 0.0 {
        // phase magnitude 2 pi |mn| e^{-2x} decreases in x; split at equal
        // phase decrements of pi/2
        let p_hi = 2.0 * PI * mn.abs() * (-2.0 * x0).exp();
        let p_lo = 2.0 * PI * mn.abs() * (-2.0 * x1).exp();
        let panels = ((p_hi - p_lo) / (PI / 2.0)).ceil() as u64;
        if panels > 4_000_000 {
            return Err(Error::QuadratureFailure(tol));
        }
        for j in 1..panels {
            let phase = p_hi - j as f64 * (PI / 2.0);
            if phase <= p_lo {
                break;
            }
            let x = -0.5 * (phase / (2.0 * PI * mn.abs())).ln();
            if x > *points.last().unwrap() && x < x1 {
                points.push(x);
            }
        }
    }
    points.push(x1);
    integrate_complex(
        |x| {
            let fx = f.eval(x);
            let phase = 2.0 * PI * mn * (-2.0 * x).exp();
            (fx * phase.cos(), fx * phase.sin())
        },
        &points,
        tol,
    )
}

/// Maximum, over the test modes, of the distance between the sampled
/// average of g(x) e^{2 pi i m y} along the wrapped curve y = frac(n
/// e^{-2x}) and its equidistribution limit.
pub fn wrap_curve_discrepancy(
    n: u64,
    window: (f64, f64),
    num_points: usize,
    modes: &[(i64, BumpFunction)],
) -> Result<f64> {
    if num_points < 1_000 {
        return Err(Error::OutOfRange(
            "num_points",
            format!("{num_points} < 1000"),
        ));
    }
    let (lo, hi) = window;
    if !(hi > lo) {
        return Err(Error::InvalidInput("empty window".into()));
    }
    let h = (hi - lo) / num_points as f64;
    let mut worst = 0.0f64;
    for (m, g) in modes {
        let mut acc = (0.0f64, 0.0f64);
        for i in 0..num_points {
            let x = lo + (i as f64 + 0.5) * h;
            let t = n as f64 * (-2.0 * x).exp();
            let y = t - t.floor();
            let phase = 2.0 * PI * *m as f64 * y;
            let gx = g.eval(x);
            acc.0 += gx * phase.cos();
            acc.1 += gx * phase.sin();
        }
        let empirical = (acc.0 * h, acc.1 * h);
        let reference = if *m == 0 {
            // integral of g over the window by composite Simpson
            let steps = 20_000;
            let hh = (hi - lo) / steps as f64;
            let mut s = g.eval(lo) + g.eval(hi);
            for i in 1..steps {
                let x = lo + i as f64 * hh;
                s += g.eval(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * hh / 3.0
        } else {
            0.0
        };
        let d = (empirical.0 - reference).hypot(empirical.1);
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Quadratic form x_1^2 + ... + x_n^2 - y^2 on R^(n+1).
pub fn lorentz_form(p: &[f64]) -> f64 {
    let n = p.len() - 1;
    p[..n].iter().map(|x| x * x).sum::<f64>() - p[n] * p[n]
}

/// Hyperbolic translation along the last axis: identity block with a
/// cosh/sinh block on the last two coordinates.
pub fn a_t_matrix(t: f64, n: usize) -> Vec<Vec<f64>> {
    let size = n + 1;
    let mut m = identity(size);
    m[n - 1][n - 1] = t.cosh();
    m[n - 1][n] = t.sinh();
    m[n][n - 1] = t.sinh();
    m[n][n] = t.cosh();
    m
}

/// Horospherical shear by v in R^(n-1).
pub fn u_v_matrix(v: &[f64]) -> Vec<Vec<f64>> {
    let n = v.len() + 1;
    let size = n + 1;
    let s = v.iter().map(|x| x * x).sum::<f64>();
    let mut m = identity(size);
    for (i, &vi) in v.iter().enumerate() {
        m[i][n - 1] = -vi;
        m[i][n] = vi;
        m[n - 1][i] = vi;
        m[n][i] = vi;
    }
    m[n - 1][n - 1] = 1.0 - s / 2.0;
    m[n - 1][n] = s / 2.0;
    m[n][n - 1] = -s / 2.0;
    m[n][n] = 1.0 + s / 2.0;
    m
}

pub fn identity(size: usize) -> Vec<Vec<f64>> {
    (0..size)
        .map(|i| (0..size).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_apply(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(m, v)| m * v).sum())
        .collect()
}

pub fn frobenius_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y) * (x - y)))
        .sum::<f64>()
        .sqrt()
}

/// Largest violation of g^T diag(1,..,1,-1) g = diag(1,..,1,-1); zero for
/// exact Lorentz isometries.
pub fn lorentz_deviation(g: &[Vec<f64>]) -> f64 {
    let size = g.len();
    let n = size - 1;
    let mut worst = 0.0f64;
    for i in 0..size {
        for j in 0..size {
            let mut s = 0.0;
            for k in 0..size {
                let sign = if k == n { -1.0 } else { 1.0 };
                s += g[k][i] * sign * g[k][j];
            }
            let expect = if i != j {
                0.0
            } else if i == n {
                -1.0
            } else {
                1.0
            };
            worst = worst.max((s - expect).abs());
        }
    }
    worst
}

/// Map a point of the two-sheeted hyperboloid (upper sheet) to the upper
/// half-space model: central projection to the ball followed by inversion.
pub fn hyperboloid_to_halfspace(p: &[f64]) -> Result<Vec<f64>> {
    let n = p.len() - 1;
    let q = lorentz_form(p);
    if (q + 1.0).abs() > 1e-12 {
        return Err(Error::OffHyperboloid((q + 1.0).abs()));
    }
    let y = p[n];
    if !(y > 0.0) {
        return Err(Error::InvalidInput("need the upper sheet (y > 0)".into()));
    }
    let ball: Vec<f64> = p[..n].iter().map(|x| x / (1.0 + y)).collect();
    // inversion sending the ball to the upper half-space with e_n at the
    // origin's image
    let mut shifted = ball.clone();
    shifted[n - 1] += 1.0;
    let norm_sq: f64 = shifted.iter().map(|x| x * x).sum();
    let mut w: Vec<f64> = shifted.iter().map(|x| 2.0 * x / norm_sq).collect();
    w[n - 1] -= 1.0;
    Ok(w)
}

/// Closed form for the half-space image of a_t u_v applied to the base
/// point.
pub fn sheared_orbit_point(t: f64, v: &[f64]) -> Vec<f64> {
    let s = v.iter().map(|x| x * x).sum::<f64>();
    let et = t.exp();
    let num = 2.0 + 2.0 * t.cosh() + s * et;
    let den = s + (et + 1.0 + s * et).powi(2);
    let factor = num / den;
    let mut out: Vec<f64> = v.iter().map(|x| factor * x).collect();
    out.push(factor);
    out
}

/// The base point of the hyperboloid as a vector in R^(n+1).
pub fn hyperboloid_base_point(n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    p[n] = 1.0;
    p
}

#[derive(Debug, Clone)]
pub struct ShearConfig {
    /// dimension of the hyperbolic space, at least 2
    pub n: usize,
    /// shear direction in R^(n-1); normalized internally
    pub v: Vec<f64>,
    pub lambda: f64,
    pub k_list: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct ShearReport {
    pub rows: Vec<(u64, f64)>,
}

/// Element of Q(sqrt(m)) written as a + b sqrt(m). The conjugated products
/// below cancel entries of size ||v||^2 down to order 1/||v||, far beyond
/// f64, so the whole computation runs in this field exactly; only the final
/// Frobenius distance is rounded.
#[derive(Debug, Clone, PartialEq)]
struct Quad {
    a: Rat,
    b: Rat,
}

impl Quad {
    fn rational(a: Rat) -> Quad {
        Quad { a, b: Rat::zero() }
    }

    fn root_multiple(b: Rat) -> Quad {
        Quad { a: Rat::zero(), b }
    }

    fn zero() -> Quad {
        Quad::rational(Rat::zero())
    }

    fn add(&self, o: &Quad) -> Quad {
        Quad {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }

    fn sub(&self, o: &Quad) -> Quad {
        Quad {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }

    fn mul(&self, o: &Quad, m: &Rat) -> Quad {
        Quad {
            a: &(&self.a * &o.a) + &(&(&self.b * &o.b) * m),
            b: &(&self.a * &o.b) + &(&self.b * &o.a),
        }
    }

    fn recip(&self, m: &Rat) -> Result<Quad> {
        let den = &(&self.a * &self.a) - &(&(&self.b * &self.b) * m);
        if den.is_zero() {
            return Err(Error::InvalidInput(
                "degenerate quadratic-field inverse".into(),
            ));
        }
        Ok(Quad {
            a: &self.a / &den,
            b: -&self.b / &den,
        })
    }

    fn half(&self) -> Quad {
        let two = Rat::from(BigInt::from(2));
        Quad {
            a: &self.a / &two,
            b: &self.b / &two,
        }
    }

    fn to_f64(&self, m: &Rat) -> f64 {
        rat_to_f64(&self.a) + rat_to_f64(&self.b) * rat_to_f64(m).sqrt()
    }
}

fn quad_identity(size: usize) -> Vec<Vec<Quad>> {
    (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    if i == j {
                        Quad::rational(Rat::from(BigInt::from(1)))
                    } else {
                        Quad::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn quad_mat_mul(a: &[Vec<Quad>], b: &[Vec<Quad>], m: &Rat) -> Vec<Vec<Quad>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = Quad::zero();
                    for k in 0..n {
                        s = s.add(&a[i][k].mul(&b[k][j], m));
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// The shear matrix with entries in Q(sqrt(m)).
fn quad_u_matrix(v: &[Quad], m: &Rat) -> Vec<Vec<Quad>> {
    let n = v.len() + 1;
    let mut g = quad_identity(n + 1);
    let mut s = Quad::zero();
    for vi in v {
        s = s.add(&vi.mul(vi, m));
    }
    for (i, vi) in v.iter().enumerate() {
        g[i][n - 1] = Quad::zero().sub(vi);
        g[i][n] = vi.clone();
        g[n - 1][i] = vi.clone();
        g[n][i] = vi.clone();
    }
    let one = Quad::rational(Rat::from(BigInt::from(1)));
    let half_s = s.half();
    g[n - 1][n - 1] = one.sub(&half_s);
    g[n - 1][n] = half_s.clone();
    g[n][n - 1] = Quad::zero().sub(&half_s);
    g[n][n] = one.add(&half_s);
    g
}

/// Conjugate the geodesic flow by integer-rounded shears and measure the
/// Frobenius distance to the limiting shear. The time step solves
/// (e^t - 1) ||v_k|| = lambda exactly in Q(||v_k||) via e^t = 1 +
/// lambda/||v_k||, so cosh and sinh are field elements and no cancellation
/// is lost to rounding.
pub fn conjugation_limit_check(cfg: &ShearConfig) -> Result<ShearReport> {
    if cfg.n < 2 {
        return Err(Error::OutOfRange("dimension", format!("{} < 2", cfg.n)));
    }
    if cfg.v.len() != cfg.n - 1 {
        return Err(Error::DimensionMismatch {
            expected: cfg.n - 1,
            got: cfg.v.len(),
        });
    }
    let norm = cfg.v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidInput(
            "shear direction must be nonzero".into(),
        ));
    }
    let lambda =
        rat_from_f64(cfg.lambda).ok_or_else(|| Error::InvalidInput("bad lambda".into()))?;
    let unit: Vec<f64> = cfg.v.iter().map(|x| x / norm).collect();
    let size = cfg.n + 1;
    let mut rows = Vec::new();
    for &k in &cfg.k_list {
        // nearest even-integer vector to k * unit, exact from here on
        let vk: Vec<Rat> = unit
            .iter()
            .map(|x| {
                let r = 2.0 * (k as f64 * x / 2.0).round();
                rat_from_f64(r).expect("rounded integer is finite")
            })
            .collect();
        // m = ||v_k||^2
        let m: Rat = vk.iter().map(|x| x * x).sum();
        if m.is_zero() {
            return Err(Error::DegenerateRounding);
        }
        if lambda.is_negative() && &lambda * &lambda >= m {
            return Err(Error::InvalidInput(
                "lambda must exceed -||v_k|| for a real time step".into(),
            ));
        }

        let vk_quad: Vec<Quad> = vk.iter().map(|x| Quad::rational(x.clone())).collect();
        let neg_vk: Vec<Quad> = vk.iter().map(|x| Quad::rational(-x)).collect();

        // e^{t_k} = 1 + lambda / sqrt(m) = 1 + (lambda/m) sqrt(m)
        let e = Quad {
            a: Rat::from(BigInt::from(1)),
            b: &lambda / &m,
        };
        let e_inv = e.recip(&m)?;
        let cosh = e.add(&e_inv).half();
        let sinh = e.sub(&e_inv).half();
        let mut a_mat = quad_identity(size);
        a_mat[cfg.n - 1][cfg.n - 1] = cosh.clone();
        a_mat[cfg.n - 1][cfg.n] = sinh.clone();
        a_mat[cfg.n][cfg.n - 1] = sinh;
        a_mat[cfg.n][cfg.n] = cosh;

        let m_k = quad_mat_mul(
            &quad_mat_mul(&quad_u_matrix(&neg_vk, &m), &a_mat, &m),
            &quad_u_matrix(&vk_quad, &m),
            &m,
        );
        // target shear direction lambda v_k / sqrt(m) = (lambda/m) v_k sqrt(m)
        let target_dir: Vec<Quad> = vk
            .iter()
            .map(|x| Quad::root_multiple(&(&lambda / &m) * x))
            .collect();
        let target = quad_u_matrix(&target_dir, &m);

        let mut dev_sq = Quad::zero();
        for (row_m, row_t) in m_k.iter().zip(&target) {
            for (x, y) in row_m.iter().zip(row_t) {
                let d = x.sub(y);
                dev_sq = dev_sq.add(&d.mul(&d, &m));
            }
        }
        rows.push((k, dev_sq.to_f64(&m).max(0.0).sqrt()));
    }
    Ok(ShearReport { rows })
}
