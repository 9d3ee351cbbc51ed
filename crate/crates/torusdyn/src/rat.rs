//! Exact rational scalars and small dense linear algebra.
//!
//! Everything geometric in this crate (cones, polytopes, lattice offsets)
//! runs on `BigRational` so that yes/no questions such as "is this vertex on
//! that hyperplane" have exact answers. Matrices are tiny (desk scale), so
//! the dense O(n^3) routines below are all we need.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

/// Shorthand for a rational from an integer pair.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_i(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Exact conversion; every finite f64 is a dyadic rational.
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    use num::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Canonical `p/q` form with positive denominator, used by every serializer.
pub fn fmt_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rat::new(p, q))
            }
        }
        None => {
            let p: BigInt = s.parse().ok()?;
            Some(Rat::from(p))
        }
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Rat], s: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * s).collect()
}

pub fn zeros(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

pub fn is_zero_vec(a: &[Rat]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Reduced row echelon form in place. Returns the pivot column of each
/// pivot row, in order.
pub fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of { v in Q^dim : row . v = 0 for every row }.
pub fn kernel_basis(rows: &[Vec<Rat>], dim: usize) -> Vec<Vec<Rat>> {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let pivots = rref(&mut m);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..dim {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = zeros(dim);
        v[free] = Rat::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve a square system `a * x = b` exactly; `None` when singular.
pub fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    let mut x = zeros(n);
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = m[row][n].clone();
    }
    Some(x)
}

pub fn det(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let mut result = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(c, p);
            result = -result;
        }
        result *= &m[c][c];
        let inv = m[c][c].recip();
        for i in (c + 1)..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let t = &m[c][j] * &f;
                m[i][j] -= t;
            }
        }
    }
    result
}

/// Largest integer t with t <= x.
pub fn rat_floor(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

pub fn rat_ceil(x: &Rat) -> BigInt {
    x.ceil().to_integer()
}

/// A rational upper bound on sqrt(x) that is tight to within 1/denom(x),
/// used to derive integer enumeration ranges without floating point.
pub fn sqrt_upper_bound(x: &Rat) -> Rat {
    assert!(!x.is_negative(), "sqrt of negative rational");
    let n = x.numer() * x.denom();
    let d = x.denom().clone();
    Rat::new(n.sqrt() + 1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_kernel() {
        // ker { -f1-f2, f1-f2, f2 } in Q^3 is span{e3}
        let rows = vec![
            vec![rat_i(-1), rat_i(-1), rat_i(0)],
            vec![rat_i(1), rat_i(-1), rat_i(0)],
            vec![rat_i(0), rat_i(1), rat_i(0)],
        ];
        let k = kernel_basis(&rows, 3);
        assert_eq!(k, vec![vec![rat_i(0), rat_i(0), rat_i(1)]]);
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn kernel_of_nothing_is_everything() {
        let k = kernel_basis(&[], 2);
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn solve_and_det() {
        let a = vec![vec![rat_i(2), rat_i(1)], vec![rat_i(1), rat_i(3)]];
        let x = solve_square(&a, &[rat_i(5), rat_i(10)]).unwrap();
        assert_eq!(x, vec![rat_i(1), rat_i(3)]);
        assert_eq!(det(&a), rat_i(5));
        let sing = vec![vec![rat_i(1), rat_i(2)], vec![rat_i(2), rat_i(4)]];
        assert!(solve_square(&sing, &[rat_i(0), rat_i(0)]).is_none());
        assert_eq!(det(&sing), rat_i(0));
    }

    #[test]
    fn parse_roundtrip() {
        let x = rat(-22, 8);
        assert_eq!(fmt_rat(&x), "-11/4");
        assert_eq!(parse_rat("-11/4").unwrap(), x);
        assert_eq!(parse_rat("7").unwrap(), rat_i(7));
        assert!(parse_rat("1/0").is_none());
    }

    #[test]
    fn sqrt_bound_is_upper_and_tight() {
        let x = rat(1000, 1);
        let s = sqrt_upper_bound(&x);
        assert!(&s * &s >= x);
        let lo = &s - rat_i(1);
        assert!(&lo * &lo < rat(1000, 1));
    }

    #[test]
    fn f64_conversion_is_exact() {
        let x = rat_from_f64(0.265625).unwrap();
        assert_eq!(x, rat(17, 64));
    }
}
