//! Binary digit sums, their partial sums `F`, the staircase functions `B_n`,
//! and the fractal Bellman function `P = B_{1,1}` on dyadic points.
//!
//! `F(k) = Σ_{j<k} s(j)` where `s(j)` counts the ones in the binary expansion
//! of `j`. On the grid `D_n`,
//!
//! ```text
//! B_n(k / 2^n) = (n·k - 2·F(k)) / 2^n
//! ```
//!
//! and `B_{n+1}` restricted to `D_n` equals `B_n`, so `P(x)` is `B_n(x)` at the
//! canonical level of `x`. Most routines here work with the scaled numerator
//! `2^n · B_n(k/2^n) = n·k - 2F(k)`, which is an integer.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::DyadicRational;
use crate::error::{invalid, Result};
use crate::numeric::{dyadic_ratio, pow2, DEFAULT_INEQ_TOL};

/// Number of ones in the binary representation of `n`.
pub fn digit_sum(n: u64) -> u32 {
    n.count_ones()
}

/// `Σ_{j<k} s(j)` by direct summation.
pub fn f_direct(k: u64) -> u128 {
    (0..k).map(|j| digit_sum(j) as u128).sum()
}

/// Closed form `F(k) = Σ_j (k_j + 2(j-1)) 2^(k_j - 1)` over the set bits
/// `k_1 > k_2 > …` of `k`.
pub fn f_fast(k: &BigUint) -> BigUint {
    // Accumulate 2F so that the k_j = 0 term stays integral.
    let mut twice = BigUint::zero();
    let bits = k.bits();
    let mut rank = 0u64;
    for pos in (0..bits).rev() {
        if k.bit(pos) {
            twice += BigUint::from(pos + 2 * rank) << pos as usize;
            rank += 1;
        }
    }
    twice >> 1
}

/// Closed form on machine integers; exact for every `u64` argument.
pub fn f_fast_u64(k: u64) -> u128 {
    let mut twice = 0u128;
    let mut rank = 0u128;
    let mut rest = k;
    while rest != 0 {
        let pos = 63 - rest.leading_zeros();
        twice += (pos as u128 + 2 * rank) << pos;
        rank += 1;
        rest &= !(1u64 << pos);
    }
    twice >> 1
}

/// `F` via `F(2^t + p) = t·2^(t-1) + p + F(p)` for `0 <= p < 2^t`.
pub fn f_recursive(k: u64) -> u128 {
    if k <= 1 {
        return 0;
    }
    let t = 63 - k.leading_zeros();
    let p = k - (1u64 << t);
    let head = if t == 0 { 0 } else { (t as u128) << (t - 1) };
    head + p as u128 + f_recursive(p)
}

/// `F(2^k) = k·2^(k-1)` for any `k`.
pub fn f_power_of_two(k: u32) -> BigUint {
    if k == 0 {
        BigUint::zero()
    } else {
        BigUint::from(k) << (k - 1) as usize
    }
}

/// Cached prefix sums of digit sums: `cumulative[k] = F(k)` for `k <= limit`.
#[derive(Clone, Debug, Default)]
pub struct DigitSumTable {
    cumulative: Vec<u64>,
}

impl DigitSumTable {
    pub fn new(limit: u64) -> Self {
        let mut table = Self { cumulative: vec![0] };
        table.ensure(limit);
        table
    }

    /// Extends the table so that `F(limit)` is available.
    pub fn ensure(&mut self, limit: u64) {
        let limit = usize::try_from(limit).expect("table limit fits in memory");
        let mut last = *self.cumulative.last().unwrap();
        let start = self.cumulative.len() - 1;
        self.cumulative.reserve(limit.saturating_sub(start));
        for j in start..limit {
            last += digit_sum(j as u64) as u64;
            self.cumulative.push(last);
        }
    }

    pub fn limit(&self) -> u64 {
        (self.cumulative.len() - 1) as u64
    }

    pub fn f(&self, k: u64) -> Option<u64> {
        self.cumulative.get(k as usize).copied()
    }

    /// `F(k)`, from the table when cached, from the closed form otherwise.
    pub fn f_or_compute(&self, k: u64) -> u128 {
        self.f(k).map(u128::from).unwrap_or_else(|| f_fast_u64(k))
    }

    pub fn values(&self) -> &[u64] {
        &self.cumulative
    }
}

/// Outcome of one exhaustively checked identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityOutcome {
    pub name: String,
    pub checked: u64,
    pub counterexample: Option<String>,
}

impl IdentityOutcome {
    fn new(name: &str) -> Self {
        Self { name: name.to_string(), checked: 0, counterexample: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub limit: u64,
    pub outcomes: Vec<IdentityOutcome>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(IdentityOutcome::passed)
    }

    /// First failing identity's counterexample, in report order.
    pub fn first_counterexample(&self) -> Option<String> {
        self.outcomes
            .iter()
            .find_map(|o| o.counterexample.as_ref().map(|c| format!("{}: {c}", o.name)))
    }
}

/// Exhaustively checks, for all arguments up to `limit`:
/// the doubling rule `F(2k) = 2F(k) + k`, superadditivity
/// `F(a+b) - min(a,b) >= F(a) + F(b)`, the max formula
/// `F(l) = max_{0<=m<=l/2} F(m) + F(l-m) + m` with the max attained at `⌊l/2⌋`,
/// and `Σ_{j=1}^M j 2^-j = 2 - 2^-M (M+2)` in exact arithmetic.
pub fn check_f_identities(limit: u64) -> Result<IdentityReport> {
    if limit < 2 {
        return Err(invalid(format!("identity checks need a limit >= 2, got {limit}")));
    }
    let table = DigitSumTable::new(limit);
    let f = |k: u64| table.f(k).unwrap();

    let mut doubling = IdentityOutcome::new("F(2k) = 2F(k) + k");
    for k in 0..=limit / 2 {
        doubling.record(f(2 * k) == 2 * f(k) + k, || format!("k = {k}"));
    }

    let mut superadditive = IdentityOutcome::new("F(a+b) - min(a,b) >= F(a) + F(b)");
    for l in 0..=limit {
        for b in 0..=l / 2 {
            let a = l - b;
            superadditive.record(f(l) >= f(a) + f(b) + b, || format!("a = {a}, b = {b}"));
        }
    }

    let mut max_formula = IdentityOutcome::new("F(l) = max_m F(m) + F(l-m) + m, attained at floor(l/2)");
    for l in 0..=limit {
        let (best, arg) = (0..=l / 2)
            .map(|m| (f(m) + f(l - m) + m, m))
            .fold((0, 0), |acc, (v, m)| if v > acc.0 { (v, m) } else { acc });
        let at_half = f(l / 2) + f(l - l / 2) + l / 2;
        max_formula.record(best == f(l) && at_half == best, || {
            format!("l = {l}: F(l) = {}, max {best} at m = {arg}, value at floor(l/2) = {at_half}", f(l))
        });
    }

    // 2^M · Σ_{j<=M} j 2^-j, updated as N_M = 2 N_{M-1} + M.
    let mut summation = IdentityOutcome::new("sum_{j=1}^M j 2^-j = 2 - 2^-M (M+2)");
    let mut scaled = BigUint::zero();
    for m in 1..=limit {
        scaled = (scaled << 1usize) + BigUint::from(m);
        let closed = (pow2(m as u32 + 1)) - BigUint::from(m + 2);
        summation.record(scaled == closed, || format!("M = {m}"));
    }

    Ok(IdentityReport { limit, outcomes: vec![doubling, superadditive, max_formula, summation] })
}

/// `2^n · B_n(k/2^n) = n·k - 2F(k)`.
pub fn bn_scaled(k: u64, n: u32) -> i128 {
    n as i128 * k as i128 - 2 * f_fast_u64(k) as i128
}

/// `B_n(k / 2^n)` exactly.
pub fn bn_value(k: &BigUint, n: u32) -> Result<BigRational> {
    if *k > pow2(n) {
        return Err(invalid(format!("k = {k} exceeds 2^{n}")));
    }
    let scaled = BigInt::from(k * n) - BigInt::from(f_fast(k) << 1usize);
    Ok(dyadic_ratio(scaled, n))
}

/// `P(x) = B_n(x)` at the canonical level `n` of `x`.
pub fn p_value(x: &DyadicRational) -> BigRational {
    bn_value(x.numerator(), x.level()).expect("canonical dyadic lies in [0, 1]")
}

/// `P(k / 2^n)` for `k` in `0..=2^n` as a float.
pub fn p_grid_f64(n: u32) -> Vec<f64> {
    let scale = (n as f64).exp2();
    (0..=1u64 << n).map(|k| bn_scaled(k, n) as f64 / scale).collect()
}

/// Table-backed evaluation of `P` on grids up to a fixed level.
#[derive(Clone, Debug)]
pub struct Staircase {
    table: DigitSumTable,
}

impl Staircase {
    /// Caches `F` on `0..=2^max_level`.
    pub fn new(max_level: u32) -> Self {
        Self { table: DigitSumTable::new(1u64 << max_level) }
    }

    pub fn table(&self) -> &DigitSumTable {
        &self.table
    }

    pub fn scaled(&self, k: u64, n: u32) -> i128 {
        n as i128 * k as i128 - 2 * self.table.f_or_compute(k) as i128
    }

    pub fn p_value(&self, x: &DyadicRational) -> BigRational {
        match x.numerator().to_u64() {
            Some(k) if x.level() < 64 => dyadic_ratio(BigInt::from(self.scaled(k, x.level())), x.level()),
            _ => p_value(x),
        }
    }

    /// Exact `P` on every point of `D_n`.
    pub fn p_grid(&self, n: u32) -> Vec<BigRational> {
        (0..=1u64 << n).map(|k| dyadic_ratio(BigInt::from(self.scaled(k, n)), n)).collect()
    }
}

/// `x* log2(1/x*)`, zero at the endpoints.
pub fn entropy_comparator(x: f64) -> f64 {
    let s = x.min(1.0 - x);
    if s <= 0.0 {
        0.0
    } else {
        -s * s.log2()
    }
}

/// Verifies on `D_n`: `P(x) = P(1-x)`, `P(x) + x = 2P(x/2)`,
/// `B_{n+1}|_{D_n} = B_n`, `P(x) >= x* log2(1/x*)` (float, within `tol`), and the
/// exact equality cases `P(2^-j) = P(1 - 2^-j) = j 2^-j` for `j <= n`.
pub fn check_p_identities(n: u32, tol: f64) -> Result<IdentityReport> {
    if n == 0 || n > 40 {
        return Err(invalid(format!("level must lie in 1..=40, got {n}")));
    }
    let stairs = Staircase::new(n.min(26) + 1);
    let size = 1u64 << n;
    let p = |k: u64, level: u32| stairs.scaled(k, level);

    let mut symmetry = IdentityOutcome::new("P(x) = P(1-x)");
    let mut functional = IdentityOutcome::new("P(x) + x = 2P(x/2)");
    let mut consistency = IdentityOutcome::new("B_{n+1}|D_n = B_n");
    let mut lower = IdentityOutcome::new("P(x) >= x* log2(1/x*)");
    let mut equality = IdentityOutcome::new("P(2^-j) = P(1-2^-j) = j 2^-j");
    let scale = (n as f64).exp2();
    for k in 0..=size {
        symmetry.record(p(k, n) == p(size - k, n), || format!("k = {k}"));
        functional.record(p(k, n) + k as i128 == p(k, n + 1), || format!("k = {k}"));
        consistency.record(p(2 * k, n + 1) == 2 * p(k, n), || format!("k = {k}"));
        let x = k as f64 / scale;
        let value = p(k, n) as f64 / scale;
        lower.record(value + tol >= entropy_comparator(x), || format!("x = {k}/2^{n}: P = {value}"));
    }
    for j in 0..=n {
        let k = 1u64 << (n - j);
        let expect = j as i128 * k as i128;
        equality.record(p(k, n) == expect && p(size - k, n) == expect, || format!("j = {j}"));
    }
    Ok(IdentityReport { limit: n as u64, outcomes: vec![symmetry, functional, consistency, lower, equality] })
}

/// Default tolerance for [`check_p_identities`].
pub const P_BOUND_TOL: f64 = DEFAULT_INEQ_TOL;

/// Largest level scanned over all pairs by [`modulus_scan`].
pub const EXHAUSTIVE_MODULUS_LEVEL: u32 = 12;

#[derive(Clone, Debug, Serialize)]
pub struct ModulusRow {
    /// Pairs with `0 < |x - y| <= 2^-m`.
    pub m: u32,
    pub max_ratio: f64,
    /// Grid indices `(k, l)` at level `n` attaining `max_ratio`.
    pub witness: (u64, u64),
}

#[derive(Clone, Debug, Serialize)]
pub struct ModulusScan {
    pub n: u32,
    pub exhaustive: bool,
    pub rows: Vec<ModulusRow>,
    /// Max over all rows; the empirical constant in
    /// `|P(x) - P(y)| <= C |x-y| log2(1/|x-y|)`.
    pub constant: f64,
}

/// Ratios `|P(x) - P(y)| / (|x-y| log2(1/|x-y|))` on `D_n`.
///
/// For `n <= 12` every pair is scanned; above that only pairs at distance
/// exactly `2^-j` for `m <= j <= n`.
pub fn modulus_scan(n: u32, m_max: u32) -> Result<ModulusScan> {
    if !(2..=30).contains(&n) {
        return Err(invalid(format!("level must lie in 2..=30, got {n}")));
    }
    if m_max == 0 || m_max >= n {
        return Err(invalid(format!("m_max must lie in 1..{n}, got {m_max}")));
    }
    let stairs = Staircase::new(n);
    let size = 1u64 << n;
    let scaled: Vec<i128> = (0..=size).map(|k| stairs.scaled(k, n)).collect();
    let exhaustive = n <= EXHAUSTIVE_MODULUS_LEVEL;

    // Best (ratio, k) for each distance dk.
    let best_at = |dk: u64| -> (f64, u64) {
        let denom = dk as f64 * (n as f64 - (dk as f64).log2());
        (0..=size - dk)
            .map(|k| ((scaled[(k + dk) as usize] - scaled[k as usize]).unsigned_abs() as f64 / denom, k))
            .fold((0.0, 0), |acc, cur| if cur.0 > acc.0 { cur } else { acc })
    };
    let distances: Vec<u64> = if exhaustive {
        (1..=size / 2).collect()
    } else {
        (1..=n - 1).map(|j| 1u64 << (n - j)).collect()
    };
    let per_distance: Vec<(u64, f64, u64)> = distances
        .par_iter()
        .map(|&dk| {
            let (r, k) = best_at(dk);
            (dk, r, k)
        })
        .collect();

    let rows: Vec<ModulusRow> = (1..=m_max)
        .map(|m| {
            let reach = size >> m;
            let (dk, ratio, k) = per_distance
                .iter()
                .filter(|(dk, _, _)| *dk <= reach)
                .fold((0, 0.0, 0), |acc, &(dk, r, k)| if r > acc.1 { (dk, r, k) } else { acc });
            ModulusRow { m, max_ratio: ratio, witness: (k, k + dk) }
        })
        .collect();
    let constant = rows.iter().map(|r| r.max_ratio).fold(0.0, f64::max);
    Ok(ModulusScan { n, exhaustive, rows, constant })
}

/// Ratio for a single pair of grid indices at level `n`; `None` when `k == l`.
pub fn modulus_ratio(k: u64, l: u64, n: u32) -> Option<f64> {
    if k == l {
        return None;
    }
    let dk = k.abs_diff(l);
    let num = (bn_scaled(k, n) - bn_scaled(l, n)).unsigned_abs() as f64;
    Some(num / (dk as f64 * (n as f64 - (dk as f64).log2())))
}
