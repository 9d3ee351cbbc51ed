//! Weight systems of split-torus representations.
//!
//! A representation of a rank-r split torus is, up to isomorphism, a finite
//! multiset of integer characters. Direct sums merge multiplicities, tensor
//! products add characters pairwise, and exterior powers sum over
//! sub-multisets. The support map recovers the character set that drives
//! every polytope construction downstream.

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Neg};

/// An integer covector on the Lie algebra of a split torus; the differential
/// of a character.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    coords: Vec<i64>,
}

impl Character {
    pub fn new(coords: Vec<i64>) -> Self {
        Character { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Character {
            coords: vec![0; rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    /// Pairing with a point of the Lie algebra.
    pub fn eval_f64(&self, t: &[f64]) -> f64 {
        self.coords.iter().zip(t).map(|(&c, &x)| c as f64 * x).sum()
    }
}

impl Add<&Character> for &Character {
    type Output = Character;
    fn add(self, other: &Character) -> Character {
        assert_eq!(self.rank(), other.rank());
        Character {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Neg for &Character {
    type Output = Character;
    fn neg(self) -> Character {
        Character {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

/// A finite multiset of characters with multiplicities, canonicalized:
/// characters sorted lexicographically, equal characters merged, no zero
/// multiplicities. Total dimension must be positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    rank: usize,
    weights: BTreeMap<Character, u64>,
}

impl WeightSystem {
    pub fn new(rank: usize, entries: impl IntoIterator<Item = (Character, u64)>) -> Result<Self> {
        let mut weights: BTreeMap<Character, u64> = BTreeMap::new();
        for (ch, mult) in entries {
            if ch.rank() != rank {
                return Err(Error::RankMismatch(rank, ch.rank()));
            }
            if mult == 0 {
                continue;
            }
            let slot = weights.entry(ch).or_insert(0);
            *slot = slot.checked_add(mult).expect("multiplicity overflow");
        }
        if weights.is_empty() {
            return Err(Error::InvalidInput(
                "weight system must have positive dimension".into(),
            ));
        }
        Ok(WeightSystem { rank, weights })
    }

    /// Convenience constructor from plain coordinate lists, multiplicity 1
    /// each (repeats allowed and merged).
    pub fn from_coords(rank: usize, coords: &[&[i64]]) -> Result<Self> {
        WeightSystem::new(rank, coords.iter().map(|c| (Character::new(c.to_vec()), 1)))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Total dimension of the representation.
    pub fn dim(&self) -> u64 {
        self.weights.values().sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Character, u64)> {
        self.weights.iter().map(|(c, &m)| (c, m))
    }

    pub fn multiplicity(&self, ch: &Character) -> u64 {
        self.weights.get(ch).copied().unwrap_or(0)
    }

    /// Sum of all weights counted with multiplicity; the weight of the top
    /// exterior power.
    pub fn total_weight(&self) -> Character {
        let mut coords = vec![0i64; self.rank];
        for (ch, m) in self.entries() {
            for (i, &c) in ch.coords().iter().enumerate() {
                coords[i] += c * m as i64;
            }
        }
        Character::new(coords)
    }
}

/// Characterwise sum of multiplicities.
pub fn direct_sum(a: &WeightSystem, b: &WeightSystem) -> Result<WeightSystem> {
    if a.rank != b.rank {
        return Err(Error::RankMismatch(a.rank, b.rank));
    }
    WeightSystem::new(
        a.rank,
        a.entries().chain(b.entries()).map(|(c, m)| (c.clone(), m)),
    )
}

/// Pairwise character sums with multiplied multiplicities.
pub fn tensor(a: &WeightSystem, b: &WeightSystem) -> Result<WeightSystem> {
    if a.rank != b.rank {
        return Err(Error::RankMismatch(a.rank, b.rank));
    }
    let mut entries = Vec::new();
    for (ca, ma) in a.entries() {
        for (cb, mb) in b.entries() {
            entries.push((ca + cb, ma.checked_mul(mb).expect("multiplicity overflow")));
        }
    }
    WeightSystem::new(a.rank, entries)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128).expect("binomial overflow") / (i as u128 + 1);
    }
    u64::try_from(acc).expect("binomial overflow")
}

/// Weights of the k-th exterior power: sums over k-element sub-multisets.
///
/// Computed as the degree-k coefficient of the product over distinct
/// characters of sum_j C(m, j) x^{j a} t^j, which avoids enumerating the
/// C(dim, k) subsets.
pub fn exterior_power(a: &WeightSystem, k: u64) -> Result<WeightSystem> {
    let dim = a.dim();
    if k > dim {
        return Err(Error::OutOfRange(
            "exterior power",
            format!("k = {k} > dim = {dim}"),
        ));
    }
    let k = k as usize;
    // dp[j] maps a character sum reachable with j chosen vectors to its count.
    let mut dp: Vec<BTreeMap<Character, u64>> = vec![BTreeMap::new(); k + 1];
    dp[0].insert(Character::zero(a.rank), 1);
    for (ch, mult) in a.entries() {
        let mut next = dp.clone();
        for take in 1..=mult.min(k as u64) {
            let ways = binomial(mult, take);
            let mut shift = Character::zero(a.rank);
            for _ in 0..take {
                shift = &shift + ch;
            }
            for j in 0..=(k - take as usize) {
                for (sum, count) in &dp[j] {
                    let slot = next[j + take as usize].entry(sum + &shift).or_insert(0);
                    *slot = slot
                        .checked_add(count.checked_mul(ways).expect("multiplicity overflow"))
                        .expect("multiplicity overflow");
                }
            }
        }
        dp = next;
    }
    if k == 0 {
        return WeightSystem::new(a.rank, [(Character::zero(a.rank), 1)]);
    }
    WeightSystem::new(a.rank, std::mem::take(&mut dp[k]))
}

/// The direct sum of all exterior powers, degree 0 through dim.
pub fn wedge_closure(a: &WeightSystem) -> WeightSystem {
    let mut acc = exterior_power(a, 0).expect("degree 0 always valid");
    for k in 1..=a.dim() {
        let layer = exterior_power(a, k).expect("k <= dim");
        acc = direct_sum(&acc, &layer).expect("equal ranks");
    }
    acc
}

/// The support of the multiset: the set of characters with nonzero weight
/// space.
pub fn phi_of(a: &WeightSystem) -> BTreeSet<Character> {
    a.entries().map(|(c, _)| c.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(rank: usize, entries: &[(&[i64], u64)]) -> WeightSystem {
        WeightSystem::new(
            rank,
            entries
                .iter()
                .map(|(c, m)| (Character::new(c.to_vec()), *m)),
        )
        .unwrap()
    }

    fn sl2_standard() -> WeightSystem {
        ws(1, &[(&[1], 1), (&[-1], 1)])
    }

    fn sp4_standard() -> WeightSystem {
        ws(
            2,
            &[(&[1, 0], 1), (&[0, 1], 1), (&[0, -1], 1), (&[-1, 0], 1)],
        )
    }

    /// Brute-force oracle: enumerate every k-subset of the expanded weight
    /// list and collect the sums. Independent of the dp path.
    fn exterior_oracle(a: &WeightSystem, k: usize) -> WeightSystem {
        let expanded: Vec<Character> = a
            .entries()
            .flat_map(|(c, m)| std::iter::repeat_n(c.clone(), m as usize))
            .collect();
        let n = expanded.len();
        assert!(n <= 20, "oracle is for desk-scale inputs");
        let mut entries: Vec<(Character, u64)> = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let mut sum = Character::zero(a.rank());
            for (i, c) in expanded.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    sum = &sum + c;
                }
            }
            entries.push((sum, 1));
        }
        WeightSystem::new(a.rank(), entries).unwrap()
    }

    #[test]
    fn direct_sum_examples() {
        let a = ws(1, &[(&[1], 1)]);
        let b = ws(1, &[(&[-1], 1)]);
        assert_eq!(direct_sum(&a, &b).unwrap(), sl2_standard());

        let z2 = ws(1, &[(&[0], 2)]);
        let z3 = ws(1, &[(&[0], 3)]);
        assert_eq!(direct_sum(&z2, &z3).unwrap(), ws(1, &[(&[0], 5)]));

        let adjoint = ws(1, &[(&[2], 1), (&[0], 1), (&[-2], 1)]);
        let s = direct_sum(&adjoint, &sl2_standard()).unwrap();
        assert_eq!(s.dim(), 5);

        let bad = ws(2, &[(&[0, 0], 1)]);
        assert!(direct_sum(&a, &bad).is_err());
    }

    #[test]
    fn tensor_examples() {
        let std = sl2_standard();
        let sq = tensor(&std, &std).unwrap();
        assert_eq!(sq, ws(1, &[(&[2], 1), (&[0], 2), (&[-2], 1)]));

        let unit = ws(1, &[(&[0], 1)]);
        assert_eq!(tensor(&std, &unit).unwrap(), std);

        let e1 = ws(2, &[(&[1, 0], 1)]);
        let e2 = ws(2, &[(&[0, 1], 1)]);
        assert_eq!(tensor(&e1, &e2).unwrap(), ws(2, &[(&[1, 1], 1)]));
    }

    #[test]
    fn exterior_examples() {
        let std = sl2_standard();
        assert_eq!(exterior_power(&std, 2).unwrap(), ws(1, &[(&[0], 1)]));
        assert_eq!(exterior_power(&std, 1).unwrap(), std);
        assert_eq!(exterior_power(&std, 0).unwrap(), ws(1, &[(&[0], 1)]));
        assert!(exterior_power(&std, 3).is_err());

        let sp4 = sp4_standard();
        let l2 = exterior_power(&sp4, 2).unwrap();
        assert_eq!(
            l2,
            ws(
                2,
                &[
                    (&[1, 1], 1),
                    (&[1, -1], 1),
                    (&[0, 0], 2),
                    (&[-1, 1], 1),
                    (&[-1, -1], 1),
                ]
            )
        );
    }

    #[test]
    fn exterior_matches_subset_oracle_up_to_dim_8() {
        let systems = [
            ws(1, &[(&[2], 1), (&[0], 2), (&[-2], 1)]),
            ws(2, &[(&[1, 0], 2), (&[0, 1], 1), (&[-1, -1], 3)]),
            sp4_standard(),
            ws(
                2,
                &[(&[1, 2], 3), (&[-1, 0], 2), (&[0, 0], 2), (&[2, -1], 1)],
            ),
        ];
        for sys in &systems {
            assert!(sys.dim() <= 8);
            for k in 0..=sys.dim() {
                assert_eq!(
                    exterior_power(sys, k).unwrap(),
                    exterior_oracle(sys, k as usize),
                    "system {sys:?} at k = {k}"
                );
            }
        }
    }

    #[test]
    fn top_exterior_power_carries_total_weight() {
        let sys = ws(2, &[(&[1, 0], 2), (&[0, 1], 1), (&[-1, 2], 3)]);
        let top = exterior_power(&sys, sys.dim()).unwrap();
        assert_eq!(top.dim(), 1);
        let (ch, m) = top.entries().next().unwrap();
        assert_eq!(m, 1);
        assert_eq!(*ch, sys.total_weight());
    }

    #[test]
    fn wedge_closure_examples() {
        let std = sl2_standard();
        assert_eq!(
            wedge_closure(&std),
            ws(1, &[(&[0], 2), (&[1], 1), (&[-1], 1)])
        );

        let unit = ws(1, &[(&[0], 1)]);
        assert_eq!(wedge_closure(&unit), ws(1, &[(&[0], 2)]));

        let three = ws(1, &[(&[1], 1), (&[0], 1), (&[-1], 1)]);
        assert_eq!(wedge_closure(&three).dim(), 8);
    }

    #[test]
    fn wedge_closure_beyond_the_enumeration_scale() {
        // dimension 13 forces the generating-function path well past any
        // subset enumeration; multiplicities are binomials
        let sys = ws(1, &[(&[1], 13)]);
        let closure = wedge_closure(&sys);
        assert_eq!(closure.dim(), 1 << 13);
        assert_eq!(closure.multiplicity(&Character::new(vec![6])), 1716); // C(13,6)
        assert_eq!(closure.multiplicity(&Character::new(vec![13])), 1);
    }

    #[test]
    fn phi_of_examples() {
        let adjoint = ws(1, &[(&[2], 1), (&[0], 2), (&[-2], 1)]);
        let support = phi_of(&adjoint);
        assert_eq!(support.len(), 3);
        assert!(support.contains(&Character::new(vec![0])));

        let closure = wedge_closure(&sl2_standard());
        let support = phi_of(&closure);
        assert_eq!(support.len(), 3);

        assert_eq!(phi_of(&sp4_standard()).len(), 4);
    }

    #[test]
    fn character_group_laws() {
        let a = Character::new(vec![1, -2]);
        let b = Character::new(vec![3, 5]);
        let z = Character::zero(2);
        assert_eq!(&a + &b, &b + &a);
        assert_eq!(&a + &z, a);
        assert_eq!(&a + &(-&a), z);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_system(rank: usize, max_dim: u64) -> impl Strategy<Value = WeightSystem> {
        prop::collection::vec(
            (prop::collection::vec(-3i64..=3, rank..=rank), 1u64..=2),
            1..=4,
        )
        .prop_filter_map("dimension cap", move |entries| {
            let total: u64 = entries.iter().map(|(_, m)| m).sum();
            if total > max_dim {
                return None;
            }
            WeightSystem::new(
                rank,
                entries.into_iter().map(|(c, m)| (Character::new(c), m)),
            )
            .ok()
        })
    }

    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let k = k.min(n - k);
        (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
    }

    proptest! {
        #[test]
        fn exterior_dimension_is_binomial(sys in arb_system(2, 8), k in 0u64..=8) {
            prop_assume!(k <= sys.dim());
            let ext = exterior_power(&sys, k).unwrap();
            prop_assert_eq!(ext.dim(), binom(sys.dim(), k));
        }

        #[test]
        fn tensor_commutes(a in arb_system(2, 6), b in arb_system(2, 6)) {
            prop_assert_eq!(tensor(&a, &b).unwrap(), tensor(&b, &a).unwrap());
        }

        #[test]
        fn tensor_associates(
            a in arb_system(1, 4),
            b in arb_system(1, 4),
            c in arb_system(1, 4),
        ) {
            let left = tensor(&tensor(&a, &b).unwrap(), &c).unwrap();
            let right = tensor(&a, &tensor(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn direct_sum_distributes_over_support(a in arb_system(2, 6), b in arb_system(2, 6)) {
            let sum = direct_sum(&a, &b).unwrap();
            let union: std::collections::BTreeSet<_> =
                phi_of(&a).union(&phi_of(&b)).cloned().collect();
            prop_assert_eq!(phi_of(&sum), union);
        }
    }
}
