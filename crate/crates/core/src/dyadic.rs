//! Dyadic rationals, dyadic sets, their martingale trees and square functions.
//!
//! A [`DyadicSet`] of depth `n` is a union of level-`n` dyadic intervals, stored
//! as one membership flag per leaf `[j/2^n, (j+1)/2^n)`. Its martingale tree is
//! kept as integer counts: the node for interval `I` of level `j` stores the
//! number of member leaves below it, so `<1_A>_I = count / 2^(n-j)` exactly.
//!
//! For the node `I` of level `j >= 1` with parent `J`, the martingale difference
//! on `I` is `(2·count(I) - count(J)) / 2^(n-j+1)`. Summing `|d_j|` over all
//! nodes weighted by `|I| = 2^-j` gives
//!
//! ```text
//! ∫ S_1(1_A) = Σ_{non-root I} |2·count(I) - count(parent(I))| / 2^(n+1)
//! ```
//!
//! which is what the integer fast paths below compute.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, LabError, Result};
use crate::numeric::{dyadic_ratio, pow2, rational_from_f64, rational_to_f64, small_positive_integer, Number};

/// Largest depth for which leaf vectors are materialised.
pub const MAX_SET_DEPTH: u32 = 24;

/// Largest depth handled by the `u64` mask fast paths.
pub const MAX_MASK_DEPTH: u32 = 6;

/// The number `num / 2^level` in `[0, 1]`, always stored in canonical form
/// (`num` odd, or `level == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    num: BigUint,
    level: u32,
}

impl DyadicRational {
    /// Builds `num / 2^level`, reducing to the minimal level.
    pub fn new(num: impl Into<BigUint>, level: u32) -> Result<Self> {
        let num = num.into();
        if num > pow2(level) {
            return Err(LabError::OutOfUnitInterval { num: num.to_string(), level });
        }
        Ok(Self::canonical(num, level))
    }

    fn canonical(num: BigUint, level: u32) -> Self {
        if num.is_zero() {
            return Self { num, level: 0 };
        }
        let tz = num.trailing_zeros().unwrap_or(0).min(level as u64) as u32;
        Self { num: num >> tz as usize, level: level - tz }
    }

    pub fn zero() -> Self {
        Self { num: BigUint::zero(), level: 0 }
    }

    pub fn one() -> Self {
        Self { num: BigUint::one(), level: 0 }
    }

    /// `2^-k`.
    pub fn inverse_power_of_two(k: u32) -> Self {
        Self { num: BigUint::one(), level: k }
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    /// Canonical (minimal) level.
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Numerator when written over `2^level`; `None` if `level` is too coarse.
    pub fn numerator_at(&self, level: u32) -> Option<BigUint> {
        (level >= self.level).then(|| &self.num << (level - self.level) as usize)
    }

    /// Same as [`numerator_at`](Self::numerator_at) for grids small enough to index.
    pub fn grid_index(&self, level: u32) -> Option<usize> {
        self.numerator_at(level).and_then(|k| k.to_usize())
    }

    pub fn to_rational(&self) -> BigRational {
        dyadic_ratio(BigInt::from(self.num.clone()), self.level)
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.to_rational())
    }

    /// `1 - x`.
    pub fn complement(&self) -> Self {
        Self::canonical(pow2(self.level) - &self.num, self.level)
    }

    /// `x / 2`.
    pub fn half(&self) -> Self {
        Self::canonical(self.num.clone(), self.level + 1)
    }

    /// `x* = min(x, 1 - x)`.
    pub fn star(&self) -> Self {
        let c = self.complement();
        if c < *self {
            c
        } else {
            self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let level = self.level.max(other.level);
        let a = &self.num << (level - self.level) as usize;
        let b = &other.num << (level - other.level) as usize;
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, pow2(self.level))
    }
}

impl Serialize for DyadicRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A set `A ∈ 𝒟` given by its level-`depth` leaves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DyadicSet {
    depth: u32,
    leaves: Vec<bool>,
}

impl DyadicSet {
    pub fn new(depth: u32, leaves: Vec<bool>) -> Result<Self> {
        check_depth(depth)?;
        let expected = 1usize << depth;
        if leaves.len() != expected {
            return Err(LabError::LengthMismatch { expected, got: leaves.len() });
        }
        Ok(Self { depth, leaves })
    }

    pub fn empty(depth: u32) -> Result<Self> {
        check_depth(depth)?;
        Ok(Self { depth, leaves: vec![false; 1 << depth] })
    }

    pub fn full(depth: u32) -> Result<Self> {
        check_depth(depth)?;
        Ok(Self { depth, leaves: vec![true; 1 << depth] })
    }

    /// Leaf `j` is a member iff bit `j` of `mask` is set.
    pub fn from_mask(depth: u32, mask: u64) -> Result<Self> {
        if depth > MAX_MASK_DEPTH {
            return Err(invalid(format!("mask sets need depth <= {MAX_MASK_DEPTH}, got {depth}")));
        }
        let n = 1usize << depth;
        if n < 64 && mask >> n != 0 {
            return Err(invalid(format!("mask {mask:#x} has bits beyond leaf {}", n - 1)));
        }
        Ok(Self { depth, leaves: (0..n).map(|j| mask >> j & 1 == 1).collect() })
    }

    pub fn from_indices(depth: u32, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = Self::empty(depth)?;
        for j in indices {
            let len = set.leaves.len();
            *set
                .leaves
                .get_mut(j)
                .ok_or_else(|| invalid(format!("leaf {j} out of range for {len} leaves")))? = true;
        }
        Ok(set)
    }

    pub fn to_mask(&self) -> Option<u64> {
        (self.depth <= MAX_MASK_DEPTH)
            .then(|| self.leaves.iter().enumerate().fold(0u64, |m, (j, &b)| m | (b as u64) << j))
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn leaves(&self) -> &[bool] {
        &self.leaves
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.leaves.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j)
    }

    pub fn count(&self) -> u64 {
        self.leaves.iter().filter(|&&b| b).count() as u64
    }

    pub fn measure(&self) -> DyadicRational {
        DyadicRational::canonical(BigUint::from(self.count()), self.depth)
    }

    pub fn complement(&self) -> Self {
        Self { depth: self.depth, leaves: self.leaves.iter().map(|b| !b).collect() }
    }

    /// Re-expresses the set at a finer depth by duplicating leaves.
    pub fn refine(&self, depth: u32) -> Result<Self> {
        if depth < self.depth {
            return Err(invalid(format!("cannot refine depth {} down to {depth}", self.depth)));
        }
        check_depth(depth)?;
        let rep = 1usize << (depth - self.depth);
        let leaves = self.leaves.iter().flat_map(|&b| std::iter::repeat_n(b, rep)).collect();
        Ok(Self { depth, leaves })
    }

    /// The same set at its minimal depth.
    pub fn canonical(&self) -> Self {
        let mut set = self.clone();
        while set.depth > 0 && set.leaves.chunks(2).all(|p| p[0] == p[1]) {
            set.leaves = set.leaves.chunks(2).map(|p| p[0]).collect();
            set.depth -= 1;
        }
        set
    }

    /// Exchanges `[0, 1/2)` and `[1/2, 1)`.
    pub fn swap_halves(&self) -> Self {
        if self.depth == 0 {
            return self.clone();
        }
        let half = self.leaves.len() / 2;
        let mut leaves = self.leaves[half..].to_vec();
        leaves.extend_from_slice(&self.leaves[..half]);
        Self { depth: self.depth, leaves }
    }
}

fn check_depth(depth: u32) -> Result<()> {
    if depth > MAX_SET_DEPTH {
        Err(invalid(format!("depth {depth} exceeds the supported maximum {MAX_SET_DEPTH}")))
    } else {
        Ok(())
    }
}

/// Conditional averages `<1_A>_I` on all dyadic intervals of levels `0..=depth`.
///
/// Stored heap-style: node `h` (root `h = 1`) has children `2h` and `2h + 1`,
/// level-`j` nodes occupy `2^j..2^(j+1)`, and `counts[h]` is the number of member
/// leaves below `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MartingaleTree {
    depth: u32,
    counts: Vec<u64>,
}

impl MartingaleTree {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Member-leaf count of interval `index` at `level`.
    pub fn count(&self, level: u32, index: usize) -> u64 {
        self.counts[(1usize << level) + index]
    }

    /// `<1_A>_I` for `I = [index/2^level, (index+1)/2^level)`.
    pub fn average(&self, level: u32, index: usize) -> DyadicRational {
        DyadicRational::canonical(BigUint::from(self.count(level, index)), self.depth - level)
    }

    pub fn level_averages(&self, level: u32) -> Vec<DyadicRational> {
        (0..1usize << level).map(|i| self.average(level, i)).collect()
    }

    pub fn root_average(&self) -> DyadicRational {
        self.average(0, 0)
    }

    /// Parent average equals the mean of its children everywhere, and leaves
    /// are 0 or 1.
    pub fn is_consistent(&self) -> bool {
        let leaves = 1usize << self.depth;
        (1..leaves).all(|h| self.counts[h] == self.counts[2 * h] + self.counts[2 * h + 1])
            && self.counts[leaves..].iter().all(|&c| c <= 1)
    }

    /// `|2·count(h) - count(parent(h))|` for a non-root node.
    fn difference_numerator(&self, h: usize) -> u64 {
        (2 * self.counts[h]).abs_diff(self.counts[h / 2])
    }
}

pub fn build_martingale(set: &DyadicSet) -> MartingaleTree {
    let leaves = set.leaves.len();
    let mut counts = vec![0u64; 2 * leaves];
    for (j, &b) in set.leaves.iter().enumerate() {
        counts[leaves + j] = b as u64;
    }
    for h in (1..leaves).rev() {
        counts[h] = counts[2 * h] + counts[2 * h + 1];
    }
    MartingaleTree { depth: set.depth, counts }
}

/// What a [`LeafValues`] vector carries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Quantity {
    /// `|d_level|`.
    Difference { level: u32 },
    /// `S_β^β = Σ_n |d_n|^β`.
    SBetaPower { beta: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum LeafData {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// One non-negative value per leaf of a depth-`depth` partition.
#[derive(Clone, Debug, PartialEq)]
pub struct LeafValues {
    pub depth: u32,
    pub data: LeafData,
    pub quantity: Quantity,
}

impl LeafValues {
    pub fn len(&self) -> usize {
        match &self.data {
            LeafData::Exact(v) => v.len(),
            LeafData::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.data, LeafData::Exact(_))
    }

    pub fn get(&self, leaf: usize) -> Number {
        match &self.data {
            LeafData::Exact(v) => Number::Exact(v[leaf].clone()),
            LeafData::Float(v) => Number::Float(v[leaf]),
        }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        match &self.data {
            LeafData::Exact(v) => v.iter().map(rational_to_f64).collect(),
            LeafData::Float(v) => v.clone(),
        }
    }
}

/// `|d_j|` on every leaf for `j = 1..=depth` (entry `j - 1` of the result).
pub fn martingale_differences(tree: &MartingaleTree) -> Vec<LeafValues> {
    let n = tree.depth;
    (1..=n)
        .map(|j| {
            let values = (0..1usize << n)
                .map(|leaf| {
                    let h = (1usize << j) + (leaf >> (n - j));
                    dyadic_ratio(BigInt::from(tree.difference_numerator(h)), n - j + 1)
                })
                .collect();
            LeafValues { depth: n, data: LeafData::Exact(values), quantity: Quantity::Difference { level: j } }
        })
        .collect()
}

/// Per-leaf `S_β^β(1_A)`; exact when `beta` is a positive integer.
pub fn s_beta_powers(set: &DyadicSet, beta: f64) -> Result<LeafValues> {
    if beta.is_nan() || beta < 1.0 {
        return Err(invalid(format!("beta must be >= 1, got {beta}")));
    }
    let tree = build_martingale(set);
    let n = tree.depth;
    let leaves = 1usize << n;
    let data = match small_positive_integer(beta) {
        Some(b) => {
            // |d_j|^b = m^b / 2^((n-j+1)b); over the common denominator 2^(nb)
            // the level-j term is m^b · 2^((j-1)b).
            let denom = BigInt::from(pow2(n * b));
            LeafData::Exact(
                (0..leaves)
                    .map(|leaf| {
                        let mut acc = BigUint::zero();
                        for j in 1..=n {
                            let h = (1usize << j) + (leaf >> (n - j));
                            let m = BigUint::from(tree.difference_numerator(h));
                            if !m.is_zero() {
                                acc += m.pow(b) << ((j - 1) * b) as usize;
                            }
                        }
                        BigRational::new(BigInt::from(acc), denom.clone())
                    })
                    .collect(),
            )
        }
        None => LeafData::Float(
            (0..leaves)
                .map(|leaf| {
                    (1..=n)
                        .map(|j| {
                            let h = (1usize << j) + (leaf >> (n - j));
                            let d = tree.difference_numerator(h) as f64 / (1u64 << (n - j + 1)) as f64;
                            d.powf(beta)
                        })
                        .sum()
                })
                .collect(),
        ),
    };
    Ok(LeafValues { depth: n, data, quantity: Quantity::SBetaPower { beta } })
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("alpha must lie in (0, 1], got {alpha}")))
    }
}

/// `2^-n Σ_leaves (v + q^β)^(α/β)` for leaf values `v = S_β^β`.
///
/// Exact when `α = β = 1` and the leaf values are exact (any finite `q` is a
/// dyadic rational and is converted exactly).
pub fn integral_alpha(values: &LeafValues, alpha: f64, beta: f64, q: f64) -> Result<Number> {
    check_alpha(alpha)?;
    if beta.is_nan() || beta < 1.0 {
        return Err(invalid(format!("beta must be >= 1, got {beta}")));
    }
    if !(q >= 0.0 && q.is_finite()) {
        return Err(invalid(format!("q must be a finite non-negative number, got {q}")));
    }
    match values.quantity {
        Quantity::SBetaPower { beta: b } if b == beta => {}
        other => return Err(invalid(format!("leaf values carry {other:?}, expected S_beta^beta with beta = {beta}"))),
    }
    let len = values.len();
    if let (LeafData::Exact(v), true) = (&values.data, alpha == 1.0 && beta == 1.0) {
        let q = rational_from_f64(q).expect("finite q");
        let sum = v.iter().fold(BigRational::zero(), |acc, x| acc + x);
        return Ok(Number::Exact(sum / BigInt::from(len) + q));
    }
    let qb = q.powf(beta);
    let e = alpha / beta;
    let sum: f64 = values.to_f64_vec().iter().map(|v| (v + qb).powf(e)).sum();
    Ok(Number::Float(sum / len as f64))
}

/// `(∫ S_β^α)^(1/α)`, the α-quasi-norm of `S_β`.
pub fn norm_alpha(values: &LeafValues, alpha: f64, beta: f64) -> Result<Number> {
    let integral = integral_alpha(values, alpha, beta, 0.0)?;
    Ok(match integral {
        Number::Exact(_) => integral,
        Number::Float(x) if alpha == 1.0 => Number::Float(x),
        Number::Float(x) => Number::Float(x.powf(1.0 / alpha)),
    })
}

/// `A` rescaled into `[0, 1/2)` followed by `B` rescaled into `[1/2, 1)`.
pub fn concat(a: &DyadicSet, b: &DyadicSet) -> Result<DyadicSet> {
    let depth = a.depth.max(b.depth);
    check_depth(depth + 1)?;
    let mut leaves = a.refine(depth)?.leaves;
    leaves.extend(b.refine(depth)?.leaves);
    DyadicSet::new(depth + 1, leaves)
}

/// `[0, x)` at the canonical level of `x`.
pub fn initial_interval_set(x: &DyadicRational) -> Result<DyadicSet> {
    let depth = x.level();
    check_depth(depth)?;
    let k = x.numerator().to_usize().expect("numerator bounded by 2^depth");
    DyadicSet::from_indices(depth, 0..k)
}

/// `∫ S_1(1_A) · 2^(depth+1)`, an integer.
pub fn s1_integral_numerator(set: &DyadicSet) -> u64 {
    let tree = build_martingale(set);
    (2..tree.counts.len()).map(|h| tree.difference_numerator(h)).sum()
}

/// `∫ S_1(1_A)` exactly, via the node-sum identity.
pub fn s1_integral(set: &DyadicSet) -> BigRational {
    dyadic_ratio(BigInt::from(s1_integral_numerator(set)), set.depth + 1)
}

/// Heap-layout counts for a mask set of depth `<= 6`.
#[inline]
pub(crate) fn mask_counts(depth: u32, mask: u64, counts: &mut [u32; 128]) {
    let leaves = 1usize << depth;
    for j in 0..leaves {
        counts[leaves + j] = (mask >> j & 1) as u32;
    }
    for h in (1..leaves).rev() {
        counts[h] = counts[2 * h] + counts[2 * h + 1];
    }
}

/// Integer fast path for [`s1_integral_numerator`] on mask sets.
#[inline]
pub fn mask_s1_numerator(depth: u32, mask: u64) -> u64 {
    let mut counts = [0u32; 128];
    mask_counts(depth, mask, &mut counts);
    (2..2usize << depth).map(|h| (2 * counts[h]).abs_diff(counts[h / 2]) as u64).sum()
}

/// Per-level tables of `(m / 2^(n-j+1))^β` for `m = 0..=2^(n-j+1)`.
pub(crate) struct DifferencePowers {
    depth: u32,
    tables: Vec<Vec<f64>>,
}

impl DifferencePowers {
    pub(crate) fn new(depth: u32, beta: f64) -> Self {
        let tables = (0..=depth)
            .map(|j| {
                if j == 0 {
                    return Vec::new();
                }
                let scale = (1u64 << (depth - j + 1)) as f64;
                (0..=(1u64 << (depth - j + 1))).map(|m| (m as f64 / scale).powf(beta)).collect()
            })
            .collect();
        Self { depth, tables }
    }

    /// Per-leaf `S_β^β` for a mask set, written into `out[..2^depth]`.
    pub(crate) fn leaf_powers(&self, mask: u64, out: &mut [f64]) {
        let n = self.depth;
        let mut counts = [0u32; 128];
        mask_counts(n, mask, &mut counts);
        for (leaf, slot) in out.iter_mut().enumerate().take(1usize << n) {
            let mut acc = 0.0;
            for j in 1..=n {
                let h = (1usize << j) + (leaf >> (n - j));
                let m = (2 * counts[h]).abs_diff(counts[h / 2]) as usize;
                acc += self.tables[j as usize][m];
            }
            *slot = acc;
        }
    }
}

/// `∫ (S_β^β + q^β)^(α/β)` for a mask set, in floating point.
pub(crate) fn mask_integral_alpha(powers: &DifferencePowers, mask: u64, alpha: f64, beta: f64, buf: &mut [f64; 64]) -> f64 {
    let n = 1usize << powers.depth;
    powers.leaf_powers(mask, buf);
    let e = alpha / beta;
    let sum: f64 = if e == 1.0 { buf[..n].iter().sum() } else { buf[..n].iter().map(|v| v.powf(e)).sum() };
    sum / n as f64
}

/// `true` if `r` has a power-of-two denominator.
pub fn is_dyadic(r: &BigRational) -> bool {
    let d = r.denom();
    d.is_positive_power_of_two()
}

trait PowerOfTwo {
    fn is_positive_power_of_two(&self) -> bool;
}

impl PowerOfTwo for BigInt {
    fn is_positive_power_of_two(&self) -> bool {
        match self.to_biguint() {
            Some(u) if !u.is_zero() => u.count_ones() == 1,
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn exact(values: &LeafValues) -> Vec<BigRational> {
        match &values.data {
            LeafData::Exact(v) => v.clone(),
            LeafData::Float(_) => panic!("expected exact values"),
        }
    }

    #[test]
    fn canonical_form() {
        let half = DyadicRational::new(2u32, 2).unwrap();
        assert_eq!((half.numerator().clone(), half.level()), (BigUint::from(1u32), 1));
        let zero = DyadicRational::new(0u32, 3).unwrap();
        assert_eq!((zero.numerator().clone(), zero.level()), (BigUint::zero(), 0));
        let three_eighths = DyadicRational::new(3u32, 3).unwrap();
        assert_eq!(three_eighths.level(), 3);
        assert_eq!(DyadicRational::new(8u32, 3).unwrap(), DyadicRational::one());
        assert!(DyadicRational::new(9u32, 3).is_err());
    }

    #[test]
    fn ordering_matches_value() {
        let a = DyadicRational::new(3u32, 3).unwrap();
        let b = DyadicRational::new(1u32, 1).unwrap();
        assert!(a < b);
        assert_eq!(a.complement(), DyadicRational::new(5u32, 3).unwrap());
        assert_eq!(a.complement().star(), a);
        assert_eq!(b.half(), DyadicRational::new(1u32, 2).unwrap());
        assert_eq!(a.to_string(), "3/8");
    }

    #[test]
    fn martingale_of_quarter_interval() {
        let a = DyadicSet::from_indices(2, [0]).unwrap();
        let t = build_martingale(&a);
        assert!(t.is_consistent());
        assert_eq!(t.root_average(), DyadicRational::new(1u32, 2).unwrap());
        assert_eq!(t.level_averages(1), vec![DyadicRational::new(1u32, 1).unwrap(), DyadicRational::zero()]);
        let leaves: Vec<u64> = (0..4).map(|i| t.count(2, i)).collect();
        assert_eq!(leaves, vec![1, 0, 0, 0]);
        assert_eq!(t.level_averages(1)[0], DyadicRational::new(1u32, 1).unwrap());
    }

    #[test]
    fn empty_and_half_martingales() {
        let t = build_martingale(&DyadicSet::empty(3).unwrap());
        assert!((0..=3).all(|j| t.level_averages(j).iter().all(|a| a.is_zero())));
        let t = build_martingale(&DyadicSet::from_indices(1, [0]).unwrap());
        assert_eq!(t.root_average(), DyadicRational::new(1u32, 1).unwrap());
        assert_eq!(t.count(1, 0), 1);
        assert_eq!(t.count(1, 1), 0);
    }

    #[test]
    fn differences() {
        let d = martingale_differences(&build_martingale(&DyadicSet::from_indices(1, [0]).unwrap()));
        assert_eq!(exact(&d[0]), vec![q(1, 2), q(1, 2)]);

        let d = martingale_differences(&build_martingale(&DyadicSet::from_indices(2, [0]).unwrap()));
        assert_eq!(exact(&d[0]), vec![q(1, 4); 4]);
        assert_eq!(exact(&d[1]), vec![q(1, 2), q(1, 2), q(0, 1), q(0, 1)]);

        let d = martingale_differences(&build_martingale(&DyadicSet::full(3).unwrap()));
        assert!(d.iter().all(|lv| exact(lv).iter().all(Zero::is_zero)));
    }

    #[test]
    fn square_function_powers() {
        let a = DyadicSet::from_indices(2, [0]).unwrap();
        assert_eq!(exact(&s_beta_powers(&a, 1.0).unwrap()), vec![q(3, 4), q(3, 4), q(1, 4), q(1, 4)]);
        assert_eq!(exact(&s_beta_powers(&a, 2.0).unwrap()), vec![q(5, 16), q(5, 16), q(1, 16), q(1, 16)]);
        let f = s_beta_powers(&a, 1.5).unwrap();
        assert!(!f.is_exact());
        let expect = 0.25f64.powf(1.5) + 0.5f64.powf(1.5);
        assert!((f.to_f64_vec()[0] - expect).abs() < 1e-15);
        assert!(s_beta_powers(&a, 0.5).is_err());
        let e = DyadicSet::empty(3).unwrap();
        assert!(s_beta_powers(&e, 2.5).unwrap().to_f64_vec().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn integrals_and_norms() {
        let a = DyadicSet::from_indices(2, [0]).unwrap();
        let s1 = s_beta_powers(&a, 1.0).unwrap();
        assert_eq!(integral_alpha(&s1, 1.0, 1.0, 0.0).unwrap(), Number::Exact(q(1, 2)));
        let half = integral_alpha(&s1, 0.5, 1.0, 0.0).unwrap().to_f64();
        assert!((half - (0.5 * 0.75f64.sqrt() + 0.25)).abs() < 1e-15);
        assert!((half - 0.68301).abs() < 1e-5);
        // q shifts the α = β = 1 integral exactly.
        assert_eq!(integral_alpha(&s1, 1.0, 1.0, 0.25).unwrap(), Number::Exact(q(3, 4)));

        let s2 = s_beta_powers(&a, 2.0).unwrap();
        let n2 = norm_alpha(&s2, 1.0, 2.0).unwrap().to_f64();
        assert!((n2 - (5f64.sqrt() + 1.0) / 8.0).abs() < 1e-15);
        let s2h = s_beta_powers(&DyadicSet::from_indices(1, [0]).unwrap(), 2.0).unwrap();
        assert!((norm_alpha(&s2h, 1.0, 2.0).unwrap().to_f64() - 0.5).abs() < 1e-15);

        assert!(integral_alpha(&s1, 1.0, 2.0, 0.0).is_err(), "beta mismatch");
        assert!(integral_alpha(&s1, 0.0, 1.0, 0.0).is_err());
        assert!(integral_alpha(&s1, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn concat_examples() {
        let full = DyadicSet::full(0).unwrap();
        let empty = DyadicSet::empty(0).unwrap();
        assert_eq!(concat(&full, &empty).unwrap(), DyadicSet::from_indices(1, [0]).unwrap());
        assert_eq!(concat(&empty, &empty).unwrap(), DyadicSet::empty(1).unwrap());

        let h = DyadicSet::from_indices(1, [0]).unwrap();
        let c = concat(&h, &h).unwrap();
        assert_eq!(c.measure(), DyadicRational::new(1u32, 1).unwrap());
        assert_eq!(s1_integral(&c), q(1, 2));

        // depth padding duplicates leaves
        let c = concat(&h, &DyadicSet::from_indices(2, [3]).unwrap()).unwrap();
        assert_eq!(c.leaves(), &[true, true, false, false, false, false, false, true]);
    }

    #[test]
    fn initial_intervals() {
        let x = DyadicRational::new(3u32, 3).unwrap();
        let a = initial_interval_set(&x).unwrap();
        assert_eq!(a.leaves(), &[true, true, true, false, false, false, false, false]);
        assert_eq!(s1_integral(&a), q(5, 8));
        assert_eq!(initial_interval_set(&DyadicRational::zero()).unwrap(), DyadicSet::empty(0).unwrap());
        let quarter = initial_interval_set(&DyadicRational::new(1u32, 2).unwrap()).unwrap();
        assert_eq!(s1_integral(&quarter), q(1, 2));
    }

    #[test]
    fn canonical_depth_and_refinement() {
        let a = DyadicSet::from_indices(1, [0]).unwrap().refine(4).unwrap();
        assert_eq!(a.count(), 8);
        assert_eq!(a.canonical(), DyadicSet::from_indices(1, [0]).unwrap());
        assert_eq!(s1_integral(&a), q(1, 2));
        assert!(a.refine(2).is_err());
    }

    #[test]
    fn mask_paths_agree_with_trees() {
        for depth in 0..=3u32 {
            for mask in 0..1u64 << (1 << depth) {
                let set = DyadicSet::from_mask(depth, mask).unwrap();
                assert_eq!(set.to_mask(), Some(mask));
                assert_eq!(mask_s1_numerator(depth, mask), s1_integral_numerator(&set));
            }
        }
        assert!(DyadicSet::from_mask(1, 0b100).is_err());
    }

    #[test]
    fn dyadic_denominators() {
        assert!(is_dyadic(&q(3, 8)));
        assert!(!is_dyadic(&q(1, 3)));
    }
}
