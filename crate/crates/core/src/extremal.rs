//! Exhaustive and constructive extremal computations: minimal square-function
//! integrals over dyadic sets of fixed measure, edge isoperimetry on the
//! hypercube, discrete gradients, and the initial-interval sharpness family.
//!
//! A leaf index `j` of a depth-`n` dyadic set is identified with the vertex of
//! `{0,1}^n` carrying the same binary digits.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::{mask_integral_alpha, mask_s1_numerator, DifferencePowers, DyadicRational, MAX_MASK_DEPTH};
use crate::error::{invalid, LabError, Result};
use crate::inequality::{validate_exponents, CheckReport, RowTally, Violation};
use crate::numeric::{dyadic_ratio, Number};

/// Default cap on the number of sets an enumeration may evaluate.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Float objectives within this distance of the minimum count as ties.
pub const TIE_TOL: f64 = 1e-12;

/// At most this many argmin masks are kept in an [`ExtremalResult`].
pub const MAX_RECORDED_ARGMINS: usize = 64;

pub const MAX_CUBE_DIMENSION: u32 = 24;

/// A subset of `{0,1}^n`; vertex `v` has coordinate `i` equal to bit `i` of `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HypercubeSet {
    n: u32,
    members: Vec<bool>,
}

fn check_dimension(n: u32) -> Result<()> {
    if n > MAX_CUBE_DIMENSION {
        return Err(invalid(format!("cube dimension must be <= {MAX_CUBE_DIMENSION}, got {n}")));
    }
    Ok(())
}

impl HypercubeSet {
    pub fn new(n: u32, members: Vec<bool>) -> Result<Self> {
        check_dimension(n)?;
        let expected = 1usize << n;
        if members.len() != expected {
            return Err(LabError::LengthMismatch { expected, got: members.len() });
        }
        Ok(Self { n, members })
    }

    pub fn empty(n: u32) -> Result<Self> {
        check_dimension(n)?;
        Ok(Self { n, members: vec![false; 1 << n] })
    }

    pub fn from_vertices(n: u32, vertices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set = Self::empty(n)?;
        for v in vertices {
            *set.members.get_mut(v).ok_or_else(|| invalid(format!("vertex {v} is not in {{0,1}}^{n}")))? = true;
        }
        Ok(set)
    }

    /// Vertex `v` is a member iff bit `v` of `mask` is set; needs `n <= 6`.
    pub fn from_mask(n: u32, mask: u64) -> Result<Self> {
        if n > MAX_MASK_DEPTH {
            return Err(invalid(format!("mask sets need n <= {MAX_MASK_DEPTH}, got {n}")));
        }
        let size = 1usize << n;
        if size < 64 && mask >> size != 0 {
            return Err(invalid(format!("mask {mask:#x} has bits beyond vertex {}", size - 1)));
        }
        Ok(Self { n, members: (0..size).map(|v| mask >> v & 1 == 1).collect() })
    }

    pub fn to_mask(&self) -> Option<u64> {
        (self.n <= MAX_MASK_DEPTH).then(|| self.members.iter().enumerate().fold(0, |m, (v, &b)| m | (b as u64) << v))
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v)
    }

    pub fn count(&self) -> u64 {
        self.members.iter().filter(|&&b| b).count() as u64
    }

    pub fn measure(&self) -> DyadicRational {
        DyadicRational::new(self.count(), self.n).expect("cardinality is at most 2^n")
    }

    pub fn complement(&self) -> Self {
        Self { n: self.n, members: self.members.iter().map(|b| !b).collect() }
    }

    /// Number of neighbours of `v` on the other side of the set.
    pub fn boundary_degree(&self, v: usize) -> u32 {
        (0..self.n).filter(|i| self.members[v] != self.members[v ^ (1 << i)]).count() as u32
    }
}

/// The initial segment `{0, …, k-1}`.
pub fn harper_set(n: u32, k: u64) -> Result<HypercubeSet> {
    check_dimension(n)?;
    if k > 1u64 << n {
        return Err(invalid(format!("k = {k} exceeds 2^{n}")));
    }
    HypercubeSet::from_vertices(n, 0..k as usize)
}

/// `|∇A|`: edges joining `A` to its complement.
pub fn edge_boundary_count(a: &HypercubeSet) -> u64 {
    a.vertices().map(|v| a.boundary_degree(v) as u64).sum()
}

/// `|∇A| / 2^n`, exactly.
pub fn edge_boundary_density(a: &HypercubeSet) -> BigRational {
    dyadic_ratio(BigInt::from(edge_boundary_count(a)), a.n)
}

/// `‖ |∇1_A|_β ‖_p` with `D_j f(x) = (f(x) - f(x^j)) / 2` and the uniform
/// measure on `{0,1}^n`.
pub fn discrete_gradient_norm(a: &HypercubeSet, beta: f64, p: f64) -> Result<f64> {
    if !(beta >= 1.0 && beta.is_finite()) || !(p > 0.0 && p.is_finite()) {
        return Err(invalid(format!("need beta >= 1 and p > 0, got beta = {beta}, p = {p}")));
    }
    let f = |v: usize| if a.members[v] { 1.0f64 } else { 0.0 };
    let size = a.members.len();
    let sum: f64 = (0..size)
        .map(|x| {
            let s: f64 = (0..a.n).map(|j| ((f(x) - f(x ^ (1 << j))) / 2.0).abs().powf(beta)).sum();
            s.powf(1.0 / beta).powf(p)
        })
        .sum();
    Ok((sum / size as f64).powf(1.0 / p))
}

/// Mask of the vertices whose bit `i` is zero, for `n <= 6`.
fn zero_bit_pattern(n: u32, i: u32) -> u64 {
    (0..1u64 << n).filter(|v| v >> i & 1 == 0).fold(0, |m, v| m | 1 << v)
}

/// `|∇A|` for mask sets, one coordinate at a time.
struct MaskBoundary {
    patterns: Vec<(u64, u32)>,
}

impl MaskBoundary {
    fn new(n: u32) -> Self {
        Self { patterns: (0..n).map(|i| (zero_bit_pattern(n, i), 1u32 << i)).collect() }
    }

    /// Mask of the vertices whose `i`-th neighbour lies on the other side.
    #[inline]
    fn flipped(&self, mask: u64, i: usize) -> u64 {
        let (low, shift) = self.patterns[i];
        let swapped = ((mask & low) << shift) | ((mask >> shift) & low);
        mask ^ swapped
    }

    #[inline]
    fn count(&self, mask: u64) -> u64 {
        (0..self.patterns.len()).map(|i| (mask & self.flipped(mask, i)).count_ones() as u64).sum()
    }
}

/// Minimum of an objective over the sets of one cardinality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtremalResult {
    pub n: u32,
    pub k: u64,
    pub minimum: Number,
    /// Argmin masks in ascending order; bit `j` is leaf (or vertex) `j`.
    pub argmins: Vec<u64>,
    pub argmin_count: u64,
    pub sets_scanned: u64,
}

impl ExtremalResult {
    pub fn argmin_members(&self) -> Vec<Vec<usize>> {
        self.argmins.iter().map(|&m| (0..64).filter(|j| m >> j & 1 == 1).collect()).collect()
    }

    /// Whether the initial interval `{0, …, k-1}` attains the minimum.
    pub fn initial_segment_attains(&self) -> bool {
        self.argmins.contains(&low_bits(self.k as u32))
    }
}

fn low_bits(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn check_enumeration(n: u32, k: u64, budget: u128) -> Result<()> {
    if n > MAX_MASK_DEPTH {
        return Err(invalid(format!("enumeration needs depth <= {MAX_MASK_DEPTH}, got {n}")));
    }
    if k > 1u64 << n {
        return Err(invalid(format!("k = {k} exceeds 2^{n}")));
    }
    let required = binomial(1 << n, k);
    if required > budget {
        return Err(LabError::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// Ascending masks of popcount `k` whose top bit is `top` (Gosper's hack).
fn for_each_with_top(k: u32, top: u32, mut f: impl FnMut(u64)) {
    let mut x = low_bits(k - 1) | 1 << top;
    let last = low_bits(k) << (top + 1 - k);
    loop {
        f(x);
        if x == last {
            return;
        }
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
}

/// Two passes over all `k`-subsets of `2^n` bits: the minimum, then every
/// mask that ties with it. Chunks are keyed by the top bit so the merge is
/// ordered and the output does not depend on scheduling.
fn scan_subsets<V>(n: u32, k: u64, eval: impl Fn(u64) -> V + Sync, ties: impl Fn(V, V) -> bool + Sync) -> (V, Vec<u64>, u64, u64)
where
    V: Copy + PartialOrd + Send + Sync,
{
    if k == 0 {
        let v = eval(0);
        return (v, vec![0], 1, 1);
    }
    let k = k as u32;
    let tops: Vec<u32> = (k - 1..1 << n).collect();
    let minimum = tops
        .par_iter()
        .map(|&t| {
            let mut best: Option<V> = None;
            for_each_with_top(k, t, |m| {
                let v = eval(m);
                if best.is_none_or(|b| v < b) {
                    best = Some(v);
                }
            });
            best.expect("every chunk is non-empty")
        })
        .collect::<Vec<_>>()
        .into_iter()
        .reduce(|a, b| if b < a { b } else { a })
        .expect("at least one chunk");
    let parts: Vec<(Vec<u64>, u64, u64)> = tops
        .par_iter()
        .map(|&t| {
            let (mut hits, mut count, mut seen) = (Vec::new(), 0, 0);
            for_each_with_top(k, t, |m| {
                seen += 1;
                if ties(eval(m), minimum) {
                    count += 1;
                    if hits.len() < MAX_RECORDED_ARGMINS {
                        hits.push(m);
                    }
                }
            });
            (hits, count, seen)
        })
        .collect();
    let mut argmins = Vec::new();
    let (mut count, mut scanned) = (0, 0);
    for (hits, c, s) in parts {
        count += c;
        scanned += s;
        argmins.extend(hits.into_iter().take(MAX_RECORDED_ARGMINS - argmins.len()));
    }
    (minimum, argmins, count, scanned)
}

/// Minimum of `∫ S_β(1_A)^α` over depth-`n` sets with `k` leaves.
///
/// Exact (a rational with denominator `2^(n+1)`) when `α = β = 1`.
pub fn enumerate_min_s_norm(n: u32, k: u64, alpha: f64, beta: f64, budget: u128) -> Result<ExtremalResult> {
    validate_exponents(alpha, beta)?;
    check_enumeration(n, k, budget)?;
    if alpha == 1.0 && beta == 1.0 {
        let (min, argmins, argmin_count, sets_scanned) = scan_subsets(n, k, |m| mask_s1_numerator(n, m), |a, b| a == b);
        return Ok(ExtremalResult {
            n,
            k,
            minimum: Number::Exact(dyadic_ratio(BigInt::from(min), n + 1)),
            argmins,
            argmin_count,
            sets_scanned,
        });
    }
    let powers = DifferencePowers::new(n, beta);
    let eval = |m| mask_integral_alpha(&powers, m, alpha, beta, &mut [0.0; 64]);
    let (min, argmins, argmin_count, sets_scanned) = scan_subsets(n, k, eval, |a: f64, b: f64| a <= b + TIE_TOL);
    Ok(ExtremalResult { n, k, minimum: Number::Float(min), argmins, argmin_count, sets_scanned })
}

/// Minimum of `|∇A| / 2^n` over `A ⊂ {0,1}^n` with `|A| = k`, exactly.
pub fn enumerate_min_edge_boundary(n: u32, k: u64, budget: u128) -> Result<ExtremalResult> {
    check_enumeration(n, k, budget)?;
    let boundary = MaskBoundary::new(n);
    let (min, argmins, argmin_count, sets_scanned) = scan_subsets(n, k, |m| boundary.count(m), |a, b| a == b);
    Ok(ExtremalResult {
        n,
        k,
        minimum: Number::Exact(dyadic_ratio(BigInt::from(min), n)),
        argmins,
        argmin_count,
        sets_scanned,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TalagrandRow {
    pub k: u64,
    pub min_ratio: f64,
    pub argmin: u64,
}

/// `‖ |∇1_A|_1 ‖_q / ((|A|*)^(1/q) ln(1/|A|*))` minimised per cardinality.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TalagrandScan {
    pub n: u32,
    pub q: f64,
    pub rows: Vec<TalagrandRow>,
    pub min_ratio: f64,
    pub argmin: u64,
    pub sets_scanned: u64,
}

/// The Talagrand-type ratio over every non-trivial `A ⊂ {0,1}^n`.
pub fn talagrand_ratio_scan(n: u32, q: f64, budget: u128) -> Result<TalagrandScan> {
    if !(q >= 0.5 && q.is_finite()) {
        return Err(invalid(format!("q must be >= 1/2, got {q}")));
    }
    if n == 0 || n > MAX_MASK_DEPTH {
        return Err(invalid(format!("talagrand scan needs 1 <= n <= {MAX_MASK_DEPTH}, got {n}")));
    }
    let size = 1u64 << n;
    let required = (1u128 << size) - 2;
    if required > budget {
        return Err(LabError::BudgetExceeded { required, budget });
    }
    let boundary = MaskBoundary::new(n);
    let rows: Vec<(TalagrandRow, u64)> = (1..size)
        .into_par_iter()
        .map(|k| {
            let x = k as f64 / size as f64;
            let star = x.min(1.0 - x);
            let denom = star.powf(1.0 / q) * (1.0 / star).ln();
            let mut best = (f64::INFINITY, 0);
            let mut seen = 0;
            let eval = |m: u64| {
                let flips: Vec<u64> = (0..n as usize).map(|i| boundary.flipped(m, i)).collect();
                let sum: f64 = (0..size)
                    .map(|v| {
                        let c = flips.iter().filter(|f| *f >> v & 1 == 1).count();
                        (c as f64 / 2.0).powf(q)
                    })
                    .sum();
                (sum / size as f64).powf(1.0 / q) / denom
            };
            for t in k as u32 - 1..size as u32 {
                for_each_with_top(k as u32, t, |m| {
                    seen += 1;
                    let r = eval(m);
                    if r < best.0 {
                        best = (r, m);
                    }
                });
            }
            (TalagrandRow { k, min_ratio: best.0, argmin: best.1 }, seen)
        })
        .collect();
    let sets_scanned = rows.iter().map(|r| r.1).sum();
    let rows: Vec<TalagrandRow> = rows.into_iter().map(|r| r.0).collect();
    let best = rows.iter().fold(&rows[0], |a, b| if b.min_ratio < a.min_ratio { b } else { a });
    Ok(TalagrandScan { n, q, min_ratio: best.min_ratio, argmin: best.argmin, rows: rows.clone(), sets_scanned })
}

/// `∫ S_1(1_[0, 2^-k))^α`.
///
/// `S_1` is `(2^j - 1) / 2^k` on `[2^-j, 2^(1-j))` for `1 <= j <= k` and
/// `(2^k - 1) / 2^k` on `[0, 2^-k)`.
pub fn sharpness_integral(alpha: f64, k: u32) -> f64 {
    let scale = (k as f64).exp2();
    let tail: f64 = (1..=k).map(|j| (-(j as f64)).exp2() * (((j as f64).exp2() - 1.0) / scale).powf(alpha)).sum();
    tail + ((scale - 1.0) / scale).powf(alpha) / scale
}

/// `(1/(1 - 2^(α-1)) + 2) · 2^(-kα)`.
pub fn sharpness_bound(alpha: f64, k: u32) -> f64 {
    (1.0 / (1.0 - (alpha - 1.0).exp2()) + 2.0) * (-(k as f64) * alpha).exp2()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SharpnessRow {
    pub k: u32,
    pub integral: f64,
    pub bound: f64,
    pub within_bound: bool,
    /// `‖S_1‖_α / 2^-k`.
    pub norm_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SharpnessTable {
    pub alpha: f64,
    pub rows: Vec<SharpnessRow>,
    /// Largest `norm_ratio` over `k >= 1`.
    pub constant: f64,
}

impl SharpnessTable {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.within_bound)
    }
}

pub fn sharpness_table(alpha: f64, k_max: u32) -> Result<SharpnessTable> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if k_max > 24 {
        return Err(invalid(format!("k_max must be <= 24, got {k_max}")));
    }
    let rows: Vec<SharpnessRow> = (0..=k_max)
        .map(|k| {
            let integral = sharpness_integral(alpha, k);
            let bound = sharpness_bound(alpha, k);
            SharpnessRow {
                k,
                integral,
                bound,
                within_bound: integral <= bound,
                norm_ratio: integral.powf(1.0 / alpha) * (k as f64).exp2(),
            }
        })
        .collect();
    let constant = rows.iter().skip(1).map(|r| r.norm_ratio).fold(0.0, f64::max);
    Ok(SharpnessTable { alpha, rows, constant })
}

/// `‖ |∇1_A|_1 ‖_1 >= ∫ S_1(1_A)` over every `A` at depth `n <= 4`, exactly.
///
/// Both sides have denominator `2^(n+1)`: the left is `2|∇A|`, the right the
/// node-sum numerator.
pub fn compare_s1_gradient(n: u32) -> Result<CheckReport> {
    if n > 4 {
        return Err(invalid(format!("gradient comparison needs n <= 4, got {n}")));
    }
    let size = 1u64 << n;
    let boundary = MaskBoundary::new(n);
    let total = 1u64 << size;
    let chunk = 1u64 << size.saturating_sub(4).min(12);
    let parts = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut tally = RowTally::default();
            for m in c * chunk..((c + 1) * chunk).min(total) {
                let grad = 2 * boundary.count(m);
                let s1 = mask_s1_numerator(n, m);
                tally.push(grad < s1, || {
                    let scale = (2 * size) as f64;
                    Violation {
                        witness: format!("mask {m:#x}"),
                        points: vec![m as f64],
                        lhs: grad as f64 / scale,
                        rhs: s1 as f64 / scale,
                        gap: (s1 - grad) as f64 / scale,
                    }
                });
            }
            tally.into_parts()
        })
        .collect();
    Ok(CheckReport::from_parts(parts, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::{initial_interval_set, integral_alpha, s_beta_powers, DyadicSet};
    use crate::staircase::bn_scaled;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Ascending masks with popcount k, by brute force.
    fn naive_subsets(n: u32, k: u32) -> Vec<u64> {
        (0..1u64 << (1 << n)).filter(|m| m.count_ones() == k).collect()
    }

    #[test]
    fn gosper_chunks_cover_all_subsets() {
        for n in 0..=3 {
            for k in 1..=1u32 << n {
                let mut got = Vec::new();
                for t in k - 1..1 << n {
                    for_each_with_top(k, t, |m| got.push(m));
                }
                assert_eq!(got, naive_subsets(n, k), "n = {n}, k = {k}");
            }
        }
        let mut count = 0u128;
        for t in 63..64 {
            for_each_with_top(64, t, |m| {
                assert_eq!(m, u64::MAX);
                count += 1;
            });
        }
        assert_eq!(count, 1);
        assert_eq!(binomial(8, 3), 56);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }

    #[test]
    fn min_s_norm_examples() {
        let r = enumerate_min_s_norm(3, 3, 1.0, 1.0, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.minimum, Number::Exact(q(5, 8)));
        assert!(r.argmins.contains(&0b111));
        assert!(r.initial_segment_attains());
        assert_eq!(r.sets_scanned, 56);
        let r = enumerate_min_s_norm(2, 1, 1.0, 1.0, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.minimum, Number::Exact(q(1, 2)));
        assert_eq!(r.argmins, vec![1, 2, 4, 8]);
        let r = enumerate_min_s_norm(4, 0, 0.5, 2.0, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.minimum.to_f64(), 0.0);
        assert_eq!(r.argmin_members(), vec![Vec::<usize>::new()]);
        assert!(matches!(enumerate_min_s_norm(6, 32, 1.0, 1.0, DEFAULT_BUDGET), Err(LabError::BudgetExceeded { .. })));
        assert!(enumerate_min_s_norm(7, 1, 1.0, 1.0, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn min_s_norm_float_agrees_with_leaf_values() {
        let r = enumerate_min_s_norm(3, 3, 0.5, 2.0, DEFAULT_BUDGET).unwrap();
        for &m in &r.argmins {
            let set = DyadicSet::from_mask(3, m).unwrap();
            let v = integral_alpha(&s_beta_powers(&set, 2.0).unwrap(), 0.5, 2.0, 0.0).unwrap().to_f64();
            assert!((v - r.minimum.to_f64()).abs() <= TIE_TOL);
        }
    }

    #[test]
    fn edge_boundary_examples() {
        assert_eq!(edge_boundary_density(&HypercubeSet::from_vertices(1, [1]).unwrap()), q(1, 2));
        assert_eq!(edge_boundary_density(&HypercubeSet::empty(3).unwrap()), q(0, 1));
        assert_eq!(edge_boundary_density(&HypercubeSet::from_vertices(2, [0, 1]).unwrap()), q(1, 2));
        let r = enumerate_min_edge_boundary(3, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.minimum, Number::Exact(q(5, 8)));
        assert!(r.argmins.contains(&0b111));
        assert_eq!(enumerate_min_edge_boundary(3, 8, DEFAULT_BUDGET).unwrap().minimum, Number::Exact(q(0, 1)));
        assert_eq!(enumerate_min_edge_boundary(2, 2, DEFAULT_BUDGET).unwrap().minimum, Number::Exact(q(1, 2)));
    }

    #[test]
    fn harper_sets() {
        let h = harper_set(3, 3).unwrap();
        assert_eq!(h.vertices().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(edge_boundary_density(&h), q(5, 8));
        assert_eq!(edge_boundary_density(&harper_set(5, 0).unwrap()), q(0, 1));
        assert_eq!(edge_boundary_density(&harper_set(4, 6).unwrap()), q(5, 8));
        for n in 0..=8 {
            for k in 0..=1u64 << n {
                let density = edge_boundary_density(&harper_set(n, k).unwrap());
                assert_eq!(density, dyadic_ratio(BigInt::from(bn_scaled(k, n)), n));
            }
        }
        assert!(harper_set(3, 9).is_err());
    }

    #[test]
    fn mask_boundary_matches_direct_count() {
        let boundary = MaskBoundary::new(3);
        for m in 0..256u64 {
            let set = HypercubeSet::from_mask(3, m).unwrap();
            assert_eq!(boundary.count(m), edge_boundary_count(&set));
            assert_eq!(set.to_mask(), Some(m));
        }
    }

    #[test]
    fn gradient_examples() {
        let a = HypercubeSet::from_vertices(1, [1]).unwrap();
        assert!((discrete_gradient_norm(&a, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(discrete_gradient_norm(&HypercubeSet::empty(3).unwrap(), 2.0, 0.5).unwrap(), 0.0);
        assert!(discrete_gradient_norm(&a, 0.5, 1.0).is_err());
        // The L^1 norm of |∇1_A|_1 is the edge-boundary density.
        let h = harper_set(4, 6).unwrap();
        assert!((discrete_gradient_norm(&h, 1.0, 1.0).unwrap() - 0.625).abs() < 1e-15);
    }

    #[test]
    fn talagrand_scans() {
        let s = talagrand_ratio_scan(3, 1.0, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.sets_scanned, 254);
        assert!(s.min_ratio > 0.0 && s.min_ratio.is_finite());
        // Half-measure row: the best set is a coordinate half-cube, ratio 1/(2·(1/2)·ln 2).
        let half = &s.rows[3];
        assert_eq!(half.k, 4);
        assert!((half.min_ratio - 1.0 / 2f64.ln()).abs() < 1e-12);
        assert!(talagrand_ratio_scan(3, 0.5, DEFAULT_BUDGET).unwrap().min_ratio > 0.0);
        assert!(talagrand_ratio_scan(3, 0.4, DEFAULT_BUDGET).is_err());
        assert!(matches!(talagrand_ratio_scan(5, 1.0, DEFAULT_BUDGET), Err(LabError::BudgetExceeded { .. })));
    }

    #[test]
    fn sharpness_matches_tree_computation() {
        for alpha in [0.25, 0.5, 0.75] {
            for k in 0..=12 {
                let set = initial_interval_set(&DyadicRational::inverse_power_of_two(k)).unwrap();
                let tree = integral_alpha(&s_beta_powers(&set, 1.0).unwrap(), alpha, 1.0, 0.0).unwrap().to_f64();
                let closed = sharpness_integral(alpha, k);
                assert!((tree - closed).abs() < 1e-13 * closed.max(1e-300), "alpha = {alpha}, k = {k}");
            }
        }
        assert!((sharpness_integral(0.5, 2) - 0.683_012_701_892_219).abs() < 1e-14);
        assert_eq!(sharpness_integral(0.5, 0), 0.0);
        let t = sharpness_table(0.75, 24).unwrap();
        assert!(t.passed());
        assert!(t.rows.iter().all(|r| r.norm_ratio <= t.constant));
        assert!(sharpness_table(1.0, 4).is_err());
        assert!(sharpness_table(0.5, 25).is_err());
    }

    #[test]
    fn gradient_dominates_s1() {
        for n in 0..=3 {
            let r = compare_s1_gradient(n).unwrap();
            assert!(r.passed, "n = {n}");
            assert_eq!(r.scanned, 1 << (1 << n));
        }
        let h = harper_set(3, 3).unwrap().to_mask().unwrap();
        assert_eq!(2 * MaskBoundary::new(3).count(h), mask_s1_numerator(3, h));
        assert!(compare_s1_gradient(5).is_err());
    }

    proptest! {
        #[test]
        fn boundary_is_complement_symmetric(m in any::<u64>(), n in 1u32..=6) {
            let m = m & low_bits(1 << n);
            let a = HypercubeSet::from_mask(n, m).unwrap();
            prop_assert_eq!(edge_boundary_density(&a), edge_boundary_density(&a.complement()));
        }

        #[test]
        fn boolean_gradient_identity(
            m in any::<u64>(),
            n in 1u32..=6,
            beta in prop_oneof![Just(1.0), Just(2.0), Just(3.0)],
            p in prop_oneof![Just(0.5), Just(1.0), Just(2.0)],
        ) {
            let a = HypercubeSet::from_mask(n, m & low_bits(1 << n)).unwrap();
            let lhs = discrete_gradient_norm(&a, beta, p).unwrap();
            let rhs = (1.0 / beta - 1.0).exp2() * discrete_gradient_norm(&a, 1.0, p / beta).unwrap().powf(1.0 / beta);
            prop_assert!((lhs - rhs).abs() <= 1e-12, "{} vs {}", lhs, rhs);
        }

        #[test]
        fn min_edge_boundary_is_harper(n in 1u32..=3, k in 0u64..=8) {
            let k = k.min(1 << n);
            let r = enumerate_min_edge_boundary(n, k, DEFAULT_BUDGET).unwrap();
            prop_assert_eq!(r.minimum.as_exact().unwrap().clone(), edge_boundary_density(&harper_set(n, k).unwrap()));
            prop_assert_eq!(r.minimum.as_exact().unwrap().to_f64().unwrap(), bn_scaled(k, n) as f64 / (1u64 << n) as f64);
        }
    }
}
