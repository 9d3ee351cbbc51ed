//! Exact rational linear programming.
//!
//! A dense two-phase simplex over `BigRational` with Bland's anti-cycling
//! rule. Membership questions downstream (which functionals admit a positive
//! zero-sum, is a polytope empty, is it bounded) are algebraic yes/no facts,
//! so the solver never touches floating point. Problem sizes are tens of
//! variables at most.

use crate::rat::{zeros, Rat};
use num::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    /// Optimal objective value and one optimal point in the original
    /// variables.
    Optimal {
        value: Rat,
        point: Vec<Rat>,
    },
}

impl LpOutcome {
    pub fn optimal_value(&self) -> Option<&Rat> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn optimal_point(&self) -> Option<&[Rat]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

/// maximize c.x subject to rows of (coeffs rel rhs); variables are free
/// unless marked non-negative.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rat>,
    nonneg: Vec<bool>,
    constraints: Vec<(Vec<Rat>, Rel, Rat)>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: zeros(num_vars),
            nonneg: vec![false; num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn set_objective(&mut self, c: Vec<Rat>) {
        assert_eq!(c.len(), self.num_vars);
        self.objective = c;
    }

    pub fn mark_nonneg(&mut self, var: usize) {
        self.nonneg[var] = true;
    }

    pub fn mark_all_nonneg(&mut self) {
        self.nonneg.iter_mut().for_each(|b| *b = true);
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rat>, rel: Rel, rhs: Rat) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push((coeffs, rel, rhs));
    }

    /// Feasibility only: phase 1 with a zero objective.
    pub fn is_feasible(&self) -> bool {
        let mut lp = self.clone();
        lp.objective = zeros(self.num_vars);
        !matches!(lp.solve(), LpOutcome::Infeasible)
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).solve(self)
    }
}

/// Column roles after conversion to equality standard form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Col {
    /// Positive part of original variable `v` (or the whole of it when
    /// non-negative).
    Pos(usize),
    /// Negative part of a free original variable `v`.
    Neg(usize),
    Slack,
    Artificial,
}

struct Tableau {
    cols: Vec<Col>,
    /// rows[i] has one entry per column plus the rhs in the last slot.
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let mut cols = Vec::new();
        // var -> (pos col, optional neg col)
        let mut var_cols = Vec::with_capacity(lp.num_vars);
        for v in 0..lp.num_vars {
            let pos = cols.len();
            cols.push(Col::Pos(v));
            let neg = if lp.nonneg[v] {
                None
            } else {
                cols.push(Col::Neg(v));
                Some(pos + 1)
            };
            var_cols.push((pos, neg));
        }

        let m = lp.constraints.len();
        let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(m);
        let mut rels = Vec::with_capacity(m);
        for (coeffs, rel, rhs) in &lp.constraints {
            let mut flip = false;
            let mut rel = *rel;
            if rhs.is_negative() {
                flip = true;
                rel = match rel {
                    Rel::Le => Rel::Ge,
                    Rel::Ge => Rel::Le,
                    Rel::Eq => Rel::Eq,
                };
            }
            let mut row = zeros(cols.len());
            for (v, c) in coeffs.iter().enumerate() {
                let c = if flip { -c } else { c.clone() };
                let (pos, neg) = var_cols[v];
                row[pos] = c.clone();
                if let Some(neg) = neg {
                    row[neg] = -c;
                }
            }
            row.push(if flip { -rhs } else { rhs.clone() });
            rows.push(row);
            rels.push(rel);
        }

        // Slack / surplus columns, then artificials where no natural basic
        // column exists.
        let mut basis = vec![usize::MAX; m];
        for (i, rel) in rels.iter().enumerate() {
            match rel {
                Rel::Le => {
                    let c = push_col(&mut rows, &mut cols, Col::Slack, i, Rat::one());
                    basis[i] = c;
                }
                Rel::Ge => {
                    push_col(&mut rows, &mut cols, Col::Slack, i, -Rat::one());
                }
                Rel::Eq => {}
            }
        }
        for i in 0..m {
            if basis[i] == usize::MAX {
                let c = push_col(&mut rows, &mut cols, Col::Artificial, i, Rat::one());
                basis[i] = c;
            }
        }

        Tableau { cols, rows, basis }
    }

    fn ncols(&self) -> usize {
        self.cols.len()
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for x in self.rows[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for j in 0..=self.ncols() {
                let t = &self.rows[row][j] * &f;
                self.rows[i][j] -= t;
            }
        }
        self.basis[row] = col;
    }

    /// Reduced costs for a maximization objective given per-column costs.
    fn reduced_costs(&self, cost: &[Rat]) -> Vec<Rat> {
        let mut red = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            let cb = cost[b].clone();
            for j in 0..self.ncols() {
                let t = &self.rows[i][j] * &cb;
                red[j] -= t;
            }
        }
        red
    }

    /// Bland's rule simplex on the current basis. Returns false when the
    /// objective is unbounded above.
    fn optimize(&mut self, cost: &[Rat], forbid: impl Fn(usize) -> bool) -> bool {
        loop {
            let red = self.reduced_costs(cost);
            let entering = (0..self.ncols())
                .find(|&j| !forbid(j) && !self.basis.contains(&j) && red[j].is_positive());
            let Some(col) = entering else {
                return true;
            };
            // min ratio over rows with positive pivot column entry; Bland
            // tie-break on the smallest basis column index.
            let mut best: Option<(Rat, usize, usize)> = None;
            let rhs_idx = self.ncols();
            for i in 0..self.rows.len() {
                if !self.rows[i][col].is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][rhs_idx] / &self.rows[i][col];
                let key = (ratio, self.basis[i], i);
                best = match best {
                    None => Some(key),
                    Some(b) => {
                        if (key.0.clone(), key.1) < (b.0.clone(), b.1) {
                            Some(key)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            match best {
                Some((_, _, row)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn solve(&mut self, lp: &LinearProgram) -> LpOutcome {
        let rhs_idx = self.ncols();
        let has_artificial = self.cols.contains(&Col::Artificial);
        if has_artificial {
            // Phase 1: maximize -(sum of artificials).
            let cost: Vec<Rat> = self
                .cols
                .iter()
                .map(|c| {
                    if *c == Col::Artificial {
                        -Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            let bounded = self.optimize(&cost, |_| false);
            debug_assert!(bounded, "phase 1 objective is bounded by zero");
            let value: Rat = self
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| self.cols[b] == Col::Artificial)
                .map(|(i, _)| self.rows[i][rhs_idx].clone())
                .sum();
            if !value.is_zero() {
                return LpOutcome::Infeasible;
            }
            // Pivot residual zero-valued artificials out of the basis where
            // possible; rows with no eligible pivot are redundant and inert.
            for i in 0..self.rows.len() {
                if self.cols[self.basis[i]] != Col::Artificial {
                    continue;
                }
                if let Some(c) = (0..self.ncols())
                    .find(|&j| self.cols[j] != Col::Artificial && !self.rows[i][j].is_zero())
                {
                    self.pivot(i, c);
                }
            }
        }

        // Phase 2 on the real objective, artificials locked out.
        let cost: Vec<Rat> = self
            .cols
            .iter()
            .map(|c| match c {
                Col::Pos(v) => lp.objective[*v].clone(),
                Col::Neg(v) => -lp.objective[*v].clone(),
                _ => Rat::zero(),
            })
            .collect();
        let cols = self.cols.clone();
        if !self.optimize(&cost, |j| cols[j] == Col::Artificial) {
            return LpOutcome::Unbounded;
        }

        let mut point = zeros(lp.num_vars);
        for (i, &b) in self.basis.iter().enumerate() {
            match self.cols[b] {
                Col::Pos(v) => point[v] += &self.rows[i][rhs_idx],
                Col::Neg(v) => point[v] -= &self.rows[i][rhs_idx],
                _ => {}
            }
        }
        let value = lp.objective.iter().zip(&point).map(|(c, x)| c * x).sum();
        LpOutcome::Optimal { value, point }
    }
}

fn push_col(
    rows: &mut [Vec<Rat>],
    cols: &mut Vec<Col>,
    kind: Col,
    row: usize,
    coeff: Rat,
) -> usize {
    let idx = cols.len();
    cols.push(kind);
    for (i, r) in rows.iter_mut().enumerate() {
        let rhs = r.pop().expect("row has rhs");
        r.push(if i == row { coeff.clone() } else { Rat::zero() });
        r.push(rhs);
    }
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_i};

    #[test]
    fn basic_maximization() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x,y >= 0 -> (8/5, 6/5)
        let mut lp = LinearProgram::new(2);
        lp.mark_all_nonneg();
        lp.set_objective(vec![rat_i(1), rat_i(1)]);
        lp.add_constraint(vec![rat_i(1), rat_i(2)], Rel::Le, rat_i(4));
        lp.add_constraint(vec![rat_i(3), rat_i(1)], Rel::Le, rat_i(6));
        match lp.solve() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat(14, 5));
                assert_eq!(point, vec![rat(8, 5), rat(6, 5)]);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_detected() {
        let mut lp = LinearProgram::new(1);
        lp.add_constraint(vec![rat_i(1)], Rel::Ge, rat_i(1));
        lp.add_constraint(vec![rat_i(1)], Rel::Le, rat_i(0));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
        assert!(!lp.is_feasible());
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new(1);
        lp.set_objective(vec![rat_i(1)]);
        lp.add_constraint(vec![rat_i(1)], Rel::Ge, rat_i(0));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables_and_equalities() {
        // max -x s.t. x + y = 2, y <= 1, y >= 0, x free -> x = 1 at y = 1
        let mut lp = LinearProgram::new(2);
        lp.mark_nonneg(1);
        lp.set_objective(vec![rat_i(-1), rat_i(0)]);
        lp.add_constraint(vec![rat_i(1), rat_i(1)], Rel::Eq, rat_i(2));
        lp.add_constraint(vec![rat_i(0), rat_i(1)], Rel::Le, rat_i(1));
        match lp.solve() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat_i(-1));
                assert_eq!(point, vec![rat_i(1), rat_i(1)]);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        // x >= -3 written with rhs -3, plus a duplicated equality.
        let mut lp = LinearProgram::new(1);
        lp.set_objective(vec![rat_i(-1)]);
        lp.add_constraint(vec![rat_i(1)], Rel::Ge, rat_i(-3));
        lp.add_constraint(vec![rat_i(2)], Rel::Eq, rat_i(-2));
        lp.add_constraint(vec![rat_i(4)], Rel::Eq, rat_i(-4));
        match lp.solve() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, rat_i(1));
                assert_eq!(point, vec![rat_i(-1)]);
            }
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_guard() {
        // Beale's classic cycling example; Bland's rule must terminate.
        let mut lp = LinearProgram::new(4);
        lp.mark_all_nonneg();
        lp.set_objective(vec![rat(3, 4), rat_i(-150), rat(1, 50), rat_i(-6)]);
        lp.add_constraint(
            vec![rat(1, 4), rat_i(-60), rat(-1, 25), rat_i(9)],
            Rel::Le,
            rat_i(0),
        );
        lp.add_constraint(
            vec![rat(1, 2), rat_i(-90), rat(-1, 50), rat_i(3)],
            Rel::Le,
            rat_i(0),
        );
        lp.add_constraint(
            vec![rat_i(0), rat_i(0), rat_i(1), rat_i(0)],
            Rel::Le,
            rat_i(1),
        );
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rat(1, 20)),
            other => panic!("expected optimum, got {other:?}"),
        }
    }
}
