//! Checkers for the two- and three-point inequalities, the obstacle
//! condition, and a monotone value-iteration solver for the grid-maximal
//! Bellman function.
//!
//! Everything lives on the grid `D_n = {k / 2^n}`. A pair `x, y ∈ D_n` is
//! admissible when its midpoint is in `D_n` too, i.e. when the indices have the
//! same parity. No interpolation is done between grid points.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::dyadic::{norm_alpha, s_beta_powers, DyadicRational, DyadicSet};
use crate::error::{invalid, LabError, Result};
use crate::gaussian::iso_profile;
use crate::numeric::{format_rational, rational_to_f64, Number, DEFAULT_CONV_TOL, DEFAULT_INEQ_TOL};
use crate::staircase::Staircase;

/// At most this many violations are kept in a [`CheckReport`].
pub const MAX_RECORDED_VIOLATIONS: usize = 16;

/// Interior starting value of [`bellman_solve`].
pub const DEFAULT_CAP: f64 = 2.0;

pub const DEFAULT_MAX_ITERS: usize = 5_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum GridValues {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// Values of a candidate Bellman function on `D_level`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    level: u32,
    values: GridValues,
}

fn check_grid_len(level: u32, len: usize) -> Result<()> {
    if level > 24 {
        return Err(invalid(format!("grid level must be <= 24, got {level}")));
    }
    let expected = (1usize << level) + 1;
    if len != expected {
        return Err(LabError::LengthMismatch { expected, got: len });
    }
    Ok(())
}

impl GridFunction {
    pub fn exact(level: u32, values: Vec<BigRational>) -> Result<Self> {
        check_grid_len(level, values.len())?;
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return Err(invalid(format!("grid values must be non-negative, found {}", format_rational(v))));
        }
        Ok(Self { level, values: GridValues::Exact(values) })
    }

    pub fn float(level: u32, values: Vec<f64>) -> Result<Self> {
        check_grid_len(level, values.len())?;
        if let Some(v) = values.iter().find(|v| v.is_nan() || **v < 0.0 || v.is_infinite()) {
            return Err(invalid(format!("grid values must be finite and non-negative, found {v}")));
        }
        Ok(Self { level, values: GridValues::Float(values) })
    }

    /// Samples `f` at `k / 2^level`.
    pub fn from_fn(level: u32, f: impl Fn(f64) -> f64 + Sync) -> Result<Self> {
        check_grid_len(level, (1usize << level.min(24)) + 1)?;
        let scale = (level as f64).exp2();
        Self::float(level, (0..=1u64 << level).into_par_iter().map(|k| f(k as f64 / scale)).collect())
    }

    /// `P = B_{1,1}`, exactly.
    pub fn staircase(level: u32) -> Result<Self> {
        check_grid_len(level, (1usize << level.min(24)) + 1)?;
        Self::exact(level, Staircase::new(level).p_grid(level))
    }

    /// `x* = min(x, 1-x)`, exactly.
    pub fn x_star(level: u32) -> Result<Self> {
        let size = 1u64 << level.min(24);
        Self::exact_from_numerators(level, |k| BigInt::from(k.min(size - k)), BigInt::from(size))
    }

    /// `2x(1-x)`, exactly.
    pub fn quadratic(level: u32) -> Result<Self> {
        let size = 1u64 << level.min(24);
        let denom = BigInt::from(size) * BigInt::from(size);
        Self::exact_from_numerators(level, |k| BigInt::from(2 * k) * BigInt::from(size - k), denom)
    }

    /// The Gaussian isoperimetric profile, sampled.
    pub fn gaussian_profile(level: u32) -> Result<Self> {
        Self::from_fn(level, iso_profile)
    }

    pub fn constant(level: u32, c: f64) -> Result<Self> {
        Self::from_fn(level, |_| c)
    }

    fn exact_from_numerators(level: u32, num: impl Fn(u64) -> BigInt, denom: BigInt) -> Result<Self> {
        check_grid_len(level, (1usize << level.min(24)) + 1)?;
        Self::exact(level, (0..=1u64 << level).map(|k| BigRational::new(num(k), denom.clone())).collect())
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        (1usize << self.level) + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, GridValues::Exact(_))
    }

    pub fn values(&self) -> &GridValues {
        &self.values
    }

    pub fn value(&self, k: usize) -> Number {
        match &self.values {
            GridValues::Exact(v) => Number::Exact(v[k].clone()),
            GridValues::Float(v) => Number::Float(v[k]),
        }
    }

    pub fn value_f64(&self, k: usize) -> f64 {
        match &self.values {
            GridValues::Exact(v) => rational_to_f64(&v[k]),
            GridValues::Float(v) => v[k],
        }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.value_f64(k)).collect()
    }

    pub fn max_value(&self) -> f64 {
        self.to_f64_vec().into_iter().fold(0.0, f64::max)
    }

    /// Grid index of a dyadic point, if it lies on this grid.
    pub fn index_of(&self, x: &DyadicRational) -> Result<usize> {
        x.grid_index(self.level).ok_or_else(|| LabError::OffGrid { point: x.to_string(), level: self.level })
    }

    /// Values at the points of a coarser grid `D_level`.
    pub fn restrict(&self, level: u32) -> Result<Self> {
        if level > self.level {
            return Err(invalid(format!("cannot restrict D_{} to the finer D_{level}", self.level)));
        }
        let step = 1usize << (self.level - level);
        let values = match &self.values {
            GridValues::Exact(v) => GridValues::Exact(v.iter().step_by(step).cloned().collect()),
            GridValues::Float(v) => GridValues::Float(v.iter().step_by(step).copied().collect()),
        };
        Ok(Self { level, values })
    }

    /// Multiplies every value by `c >= 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::float(self.level, self.to_f64_vec().into_iter().map(|v| v * c).collect())
    }

    fn point_label(&self, k: usize) -> String {
        format!("{k}/{}", 1u64 << self.level)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub witness: String,
    pub points: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs` for `lhs <= rhs`-type constraints; positive means violated.
    pub gap: f64,
}

/// Result of a scan; `passed` iff no violation was found.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    /// The first [`MAX_RECORDED_VIOLATIONS`] violations in scan order.
    pub violations: Vec<Violation>,
    pub violation_count: u64,
    pub scanned: u64,
    pub exact: bool,
}

impl CheckReport {
    pub(crate) fn from_parts(parts: Vec<(Vec<Violation>, u64, u64)>, exact: bool) -> Self {
        let mut violations = Vec::new();
        let mut violation_count = 0;
        let mut scanned = 0;
        for (v, count, seen) in parts {
            violation_count += count;
            scanned += seen;
            let room = MAX_RECORDED_VIOLATIONS - violations.len();
            violations.extend(v.into_iter().take(room));
        }
        Self { passed: violation_count == 0, violations, violation_count, scanned, exact }
    }
}

/// Per-row collector used by the parallel scans.
#[derive(Default)]
pub(crate) struct RowTally {
    violations: Vec<Violation>,
    count: u64,
    scanned: u64,
}

impl RowTally {
    pub(crate) fn push(&mut self, violated: bool, make: impl FnOnce() -> Violation) {
        self.scanned += 1;
        if violated {
            self.count += 1;
            if self.violations.len() < MAX_RECORDED_VIOLATIONS {
                self.violations.push(make());
            }
        }
    }

    pub(crate) fn into_parts(self) -> (Vec<Violation>, u64, u64) {
        (self.violations, self.count, self.scanned)
    }
}

pub fn validate_exponents(alpha: f64, beta: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 && beta >= 1.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("need beta >= 1 >= alpha > 0, got alpha = {alpha}, beta = {beta}")))
    }
}

/// `g(0) = g(1) = 0`, exactly for exact grids and within [`DEFAULT_INEQ_TOL`]
/// otherwise.
pub fn check_obstacle(g: &GridFunction) -> CheckReport {
    let last = g.len() - 1;
    let mut tally = RowTally::default();
    for k in [0, last] {
        let (bad, v) = match &g.values {
            GridValues::Exact(v) => (!v[k].is_zero(), rational_to_f64(&v[k])),
            GridValues::Float(v) => (v[k].abs() > DEFAULT_INEQ_TOL, v[k]),
        };
        tally.push(bad, || Violation {
            witness: format!("B({}) = {v}", g.point_label(k)),
            points: vec![k as f64 / last as f64],
            lhs: v,
            rhs: 0.0,
            gap: v,
        });
    }
    CheckReport::from_parts(vec![tally.into_parts()], g.is_exact())
}

/// The two-point inequality
///
/// ```text
/// B^α((x+y)/2) <= ½ (B^β(x) + |(x-y)/2|^β)^(α/β) + ½ (B^β(y) + |(x-y)/2|^β)^(α/β)
/// ```
///
/// over every admissible pair of `D_n`. Exact when `α = β = 1` and `g` is
/// exact; otherwise `tol` is added to the right-hand side.
pub fn check_two_point(g: &GridFunction, alpha: f64, beta: f64, tol: f64) -> Result<CheckReport> {
    validate_exponents(alpha, beta)?;
    match &g.values {
        GridValues::Exact(v) if alpha == 1.0 && beta == 1.0 => Ok(two_point_exact(g, v)),
        _ => Ok(two_point_float(g, alpha, beta, tol)),
    }
}

fn two_point_exact(g: &GridFunction, values: &[BigRational]) -> CheckReport {
    let size = 1u64 << g.level;
    // Clear denominators: L is a common multiple of all value denominators and 2^n.
    let scale = values.iter().fold(BigInt::from(size), |acc, v| acc.lcm(v.denom()));
    let scaled: Vec<BigInt> = values.iter().map(|v| (v * &scale).to_integer()).collect();
    let unit = &scale / BigInt::from(size);
    let last = size as usize;
    let parts = (0..=last)
        .into_par_iter()
        .map(|i| {
            let mut tally = RowTally::default();
            for j in (i + 2..=last).step_by(2) {
                let m = (i + j) / 2;
                // 2 B(m) <= B(x) + B(y) + |x - y|, all times L.
                let lhs = &scaled[m] * 2;
                let rhs = &scaled[i] + &scaled[j] + &unit * BigInt::from(j - i);
                tally.push(lhs > rhs, || {
                    let l = rational_to_f64(&values[m]);
                    let r = (rational_to_f64(&values[i]) + rational_to_f64(&values[j])) / 2.0
                        + (j - i) as f64 / (2 * size) as f64;
                    Violation {
                        witness: format!("x = {}, y = {}", g.point_label(i), g.point_label(j)),
                        points: vec![i as f64 / size as f64, j as f64 / size as f64],
                        lhs: l,
                        rhs: r,
                        gap: l - r,
                    }
                });
            }
            tally.into_parts()
        })
        .collect();
    CheckReport::from_parts(parts, true)
}

fn two_point_float(g: &GridFunction, alpha: f64, beta: f64, tol: f64) -> CheckReport {
    let size = 1usize << g.level;
    let v = g.to_f64_vec();
    let vb: Vec<f64> = v.iter().map(|x| x.powf(beta)).collect();
    let e = alpha / beta;
    let parts = (0..=size)
        .into_par_iter()
        .map(|i| {
            let mut tally = RowTally::default();
            for j in (i + 2..=size).step_by(2) {
                let m = (i + j) / 2;
                let half_gap = (j - i) as f64 / (2 * size) as f64;
                let pen = half_gap.powf(beta);
                let lhs = v[m].powf(alpha);
                let rhs = 0.5 * (vb[i] + pen).powf(e) + 0.5 * (vb[j] + pen).powf(e);
                tally.push(lhs > rhs + tol, || Violation {
                    witness: format!("x = {}, y = {}", g.point_label(i), g.point_label(j)),
                    points: vec![i as f64 / size as f64, j as f64 / size as f64],
                    lhs,
                    rhs,
                    gap: lhs - rhs,
                });
            }
            tally.into_parts()
        })
        .collect();
    CheckReport::from_parts(parts, false)
}

/// Two-point inequality with `(α, β) = (1, 2)`, the form satisfied by the
/// Gaussian isoperimetric profile.
pub fn check_bobkov(g: &GridFunction, tol: f64) -> Result<CheckReport> {
    check_two_point(g, 1.0, 2.0, tol)
}

/// A function `U(p, q)` of a grid point `p ∈ D_n` and `q >= 0`.
pub trait GridBivariate: Sync {
    fn level(&self) -> u32;
    fn eval_index(&self, k: usize, q: f64) -> f64;
}

/// `Ũ(p, q) = (B(p)^β + q^β)^(α/β)` built from a grid function `B`.
#[derive(Clone, Debug)]
pub struct BivariateLift {
    level: u32,
    powered: Vec<f64>,
    alpha: f64,
    beta: f64,
}

impl BivariateLift {
    pub fn eval(&self, p: &DyadicRational, q: f64) -> Result<f64> {
        let k = p
            .grid_index(self.level)
            .ok_or_else(|| LabError::OffGrid { point: p.to_string(), level: self.level })?;
        Ok(self.eval_index(k, q))
    }
}

impl GridBivariate for BivariateLift {
    fn level(&self) -> u32 {
        self.level
    }

    fn eval_index(&self, k: usize, q: f64) -> f64 {
        (self.powered[k] + q.powf(self.beta)).powf(self.alpha / self.beta)
    }
}

pub fn lift_to_bivariate(g: &GridFunction, alpha: f64, beta: f64) -> Result<BivariateLift> {
    validate_exponents(alpha, beta)?;
    Ok(BivariateLift {
        level: g.level,
        powered: g.to_f64_vec().iter().map(|v| v.powf(beta)).collect(),
        alpha,
        beta,
    })
}

/// `{0, 2^-6, 2^-5, …, 1/2, 1, 2}`.
pub fn default_q_grid() -> Vec<f64> {
    let mut grid = vec![0.0];
    grid.extend((0..=6).rev().map(|j| (-(j as f64)).exp2()));
    grid.push(2.0);
    grid
}

/// The three-point inequality
///
/// ```text
/// U(p+a, (a^β+q^β)^(1/β)) + U(p-a, (a^β+q^β)^(1/β)) >= 2 U(p, q)
/// ```
///
/// for every grid `p`, every `a > 0` with `p ± a ∈ D_n`, and every `q` in `q_grid`.
pub fn check_three_point(u: &impl GridBivariate, alpha: f64, beta: f64, q_grid: &[f64], tol: f64) -> Result<CheckReport> {
    validate_exponents(alpha, beta)?;
    if let Some(q) = q_grid.iter().find(|q| !(**q >= 0.0 && q.is_finite())) {
        return Err(invalid(format!("q grid entries must be finite and non-negative, found {q}")));
    }
    if q_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(invalid("q grid must be strictly ascending"));
    }
    let size = 1usize << u.level();
    let parts = (0..=size)
        .into_par_iter()
        .map(|k| {
            let mut tally = RowTally::default();
            for j in 1..=k.min(size - k) {
                let a = j as f64 / size as f64;
                let ab = a.powf(beta);
                for &q in q_grid {
                    let t = (ab + q.powf(beta)).powf(1.0 / beta);
                    let lhs = u.eval_index(k + j, t) + u.eval_index(k - j, t);
                    let rhs = 2.0 * u.eval_index(k, q);
                    tally.push(lhs + tol < rhs, || Violation {
                        witness: format!("p = {k}/{size}, a = {j}/{size}, q = {q}"),
                        points: vec![k as f64 / size as f64, a, q],
                        lhs,
                        rhs,
                        gap: rhs - lhs,
                    });
                }
            }
            tally.into_parts()
        })
        .collect();
    Ok(CheckReport::from_parts(parts, false))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverParams {
    pub level: u32,
    pub alpha: f64,
    pub beta: f64,
    pub cap: f64,
    pub tol: f64,
    pub max_iters: usize,
}

impl SolverParams {
    pub fn new(level: u32, alpha: f64, beta: f64) -> Self {
        Self { level, alpha, beta, cap: DEFAULT_CAP, tol: DEFAULT_CONV_TOL, max_iters: DEFAULT_MAX_ITERS }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub grid: GridFunction,
    pub iterations: usize,
    pub converged: bool,
    /// Max pointwise change in the last sweep.
    pub last_change: f64,
}

/// Combines `up = g(x+a)^β + a^β` and `down = g(x-a)^β + a^β` into the
/// right-hand side of the two-point inequality.
#[derive(Clone, Copy)]
struct Kernel {
    alpha: f64,
    beta: f64,
    mode: KernelMode,
}

#[derive(Clone, Copy, PartialEq)]
enum KernelMode {
    Linear,
    Quadratic,
    General,
}

impl Kernel {
    fn new(alpha: f64, beta: f64) -> Self {
        let mode = match (alpha, beta) {
            (a, b) if a == 1.0 && b == 1.0 => KernelMode::Linear,
            (a, b) if a == 1.0 && b == 2.0 => KernelMode::Quadratic,
            _ => KernelMode::General,
        };
        Self { alpha, beta, mode }
    }

    #[inline]
    fn power(&self, v: f64) -> f64 {
        match self.mode {
            KernelMode::Linear => v,
            KernelMode::Quadratic => v * v,
            KernelMode::General => v.powf(self.beta),
        }
    }

    #[inline]
    fn combine(&self, up: f64, down: f64) -> f64 {
        match self.mode {
            KernelMode::Linear => 0.5 * (up + down),
            KernelMode::Quadratic => 0.5 * (up.sqrt() + down.sqrt()),
            KernelMode::General => {
                let e = self.alpha / self.beta;
                (0.5 * up.powf(e) + 0.5 * down.powf(e)).powf(1.0 / self.alpha)
            }
        }
    }

    /// `a^β` for `a = j / size`, `j = 0..=size/2`.
    fn penalties(&self, size: usize) -> Vec<f64> {
        (0..=size / 2).map(|j| self.power(j as f64 / size as f64)).collect()
    }
}

/// Full Jacobi sweep; also returns the minimising step for every point.
fn full_sweep(values: &[f64], kernel: Kernel) -> (Vec<f64>, Vec<u32>) {
    let size = values.len() - 1;
    let powered: Vec<f64> = values.iter().map(|&v| kernel.power(v)).collect();
    let pens = kernel.penalties(size);
    (0..=size)
        .into_par_iter()
        .map(|k| {
            if k == 0 || k == size {
                return (values[k], 0);
            }
            let (mut best, mut arg) = (f64::INFINITY, 0);
            for j in 1..=k.min(size - k) {
                let cand = kernel.combine(powered[k + j] + pens[j], powered[k - j] + pens[j]);
                if cand < best {
                    best = cand;
                    arg = j as u32;
                }
            }
            (values[k].min(best), arg)
        })
        .unzip()
}

/// Gauss-Seidel sweep that only tries the cached step at each point.
/// Returns the largest decrease.
fn policy_sweep(values: &mut [f64], policy: &[u32], pens: &[f64], kernel: Kernel, forward: bool) -> f64 {
    let size = values.len() - 1;
    let mut change = 0.0f64;
    let mut update = |k: usize| {
        let j = policy[k] as usize;
        let cand = kernel.combine(kernel.power(values[k + j]) + pens[j], kernel.power(values[k - j]) + pens[j]);
        if cand < values[k] {
            change = change.max(values[k] - cand);
            values[k] = cand;
        }
    };
    if forward {
        (1..size).for_each(&mut update);
    } else {
        (1..size).rev().for_each(&mut update);
    }
    change
}

/// Cheap sweeps run between two full sweeps.
const POLICY_SWEEPS: usize = 64;

/// One Jacobi sweep of the iteration operator
///
/// ```text
/// (T g)(x) = min( g(x), min_{a>0} [½(g(x+a)^β + a^β)^(α/β) + ½(g(x-a)^β + a^β)^(α/β)]^(1/α) )
/// ```
///
/// with the boundary values left untouched.
pub fn bellman_step(values: &[f64], alpha: f64, beta: f64) -> Vec<f64> {
    full_sweep(values, Kernel::new(alpha, beta)).0
}

/// Monotone value iteration for the grid-maximal Bellman function on `D_level`.
///
/// Level 1 starts from `cap`; each finer level starts from the previous
/// result, with `½(g(x-h) + g(x+h)) + h` (capped) at the new points. That start
/// is an upper bound for the finer solution, so iterates stay above it, and the
/// result restricted to a coarser grid never exceeds the coarser result.
///
/// Between full sweeps of [`bellman_step`], Gauss-Seidel sweeps reuse each
/// point's last minimising step; every such update is one instance of the
/// two-point inequality, so monotonicity is kept. A level is done when a full
/// sweep moves no value by `tol` or more; for slowly contracting cases such as
/// `β = 2` the distance to the fixed point can be several orders larger. Hitting `max_iters` total sweeps is
/// not an error: the partial result comes back with `converged = false`.
pub fn bellman_solve(params: &SolverParams) -> Result<SolveOutcome> {
    validate_exponents(params.alpha, params.beta)?;
    if !(params.cap >= 0.0 && params.cap.is_finite()) {
        return Err(invalid(format!("cap must be finite and non-negative, got {}", params.cap)));
    }
    if params.level == 0 || params.level > 16 {
        return Err(invalid(format!("solver level must lie in 1..=16, got {}", params.level)));
    }
    let kernel = Kernel::new(params.alpha, params.beta);
    let mut values = vec![0.0, params.cap, 0.0];
    let mut iterations = 0;
    let mut last_change = f64::INFINITY;
    let mut converged = false;
    for level in 1..=params.level {
        if level > 1 {
            let h = (-(level as f64)).exp2();
            let coarse = values;
            values = vec![0.0; 2 * (coarse.len() - 1) + 1];
            for (k, &v) in coarse.iter().enumerate() {
                values[2 * k] = v;
            }
            for k in (1..values.len()).step_by(2) {
                values[k] = params.cap.min(0.5 * (values[k - 1] + values[k + 1]) + h);
            }
        }
        let pens = kernel.penalties(values.len() - 1);
        converged = false;
        let mut forward = true;
        while iterations < params.max_iters {
            let (next, policy) = full_sweep(&values, kernel);
            last_change = next.iter().zip(&values).map(|(a, b)| b - a).fold(0.0, f64::max);
            values = next;
            iterations += 1;
            if last_change < params.tol {
                converged = true;
                break;
            }
            for _ in 0..POLICY_SWEEPS {
                if iterations >= params.max_iters {
                    break;
                }
                let change = policy_sweep(&mut values, &policy, &pens, kernel, forward);
                forward = !forward;
                iterations += 1;
                if change < params.tol {
                    break;
                }
            }
        }
        if !converged {
            break;
        }
    }
    let values = if converged { values } else { values_at_level(values, params.level) };
    Ok(SolveOutcome { grid: GridFunction::float(params.level, values)?, iterations, converged, last_change })
}

/// Pads an unfinished coarse iterate up to `D_level` with the same upper
/// bound used between levels.
fn values_at_level(mut values: Vec<f64>, level: u32) -> Vec<f64> {
    while values.len() < (1usize << level) + 1 {
        let h = 1.0 / (2 * (values.len() - 1)) as f64;
        let mut finer = vec![0.0; 2 * (values.len() - 1) + 1];
        for (k, &v) in values.iter().enumerate() {
            finer[2 * k] = v;
        }
        for k in (1..finer.len()).step_by(2) {
            finer[k] = 0.5 * (finer[k - 1] + finer[k + 1]) + h;
        }
        values = finer;
    }
    values
}

/// The `α = β = 1` Bellman operator in exact arithmetic, without the
/// `min` against `g(x)`: `(T g)(x) = min_a ½(g(x+a) + g(x-a)) + a` inside,
/// `g` at the endpoints.
pub fn bellman_operator_exact(g: &GridFunction) -> Result<GridFunction> {
    let GridValues::Exact(values) = &g.values else {
        return Err(invalid("exact sweep needs an exact grid function"));
    };
    let size = values.len() - 1;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let next = (0..=size)
        .into_par_iter()
        .map(|k| {
            if k == 0 || k == size {
                return values[k].clone();
            }
            (1..=k.min(size - k))
                .map(|j| {
                    let a = BigRational::new(BigInt::from(j), BigInt::from(size));
                    (&values[k + j] + &values[k - j]) * &half + a
                })
                .min()
                .expect("interior point has a neighbour pair")
        })
        .collect();
    GridFunction::exact(g.level, next)
}

/// `true` iff `g` solves the `α = β = 1` Bellman equation exactly, i.e. the
/// two-point inequality holds everywhere and is attained at every interior point.
pub fn is_exact_fixed_point(g: &GridFunction) -> Result<bool> {
    Ok(bellman_operator_exact(g)? == *g)
}

/// A grid function known to satisfy the obstacle condition and the
/// two-point inequality for its `(α, β)`.
#[derive(Clone, Debug)]
pub struct Supersolution {
    grid: GridFunction,
    alpha: f64,
    beta: f64,
    tol: f64,
}

impl Supersolution {
    pub fn certify(grid: GridFunction, alpha: f64, beta: f64, tol: f64) -> Result<Self> {
        let obstacle = check_obstacle(&grid);
        if !obstacle.passed {
            return Err(LabError::NotCertified(format!("obstacle fails: {}", obstacle.violations[0].witness)));
        }
        let two = check_two_point(&grid, alpha, beta, tol)?;
        if !two.passed {
            return Err(LabError::NotCertified(format!(
                "two-point inequality fails at {} ({} violations)",
                two.violations[0].witness, two.violation_count
            )));
        }
        Ok(Self { grid, alpha, beta, tol })
    }

    pub fn grid(&self) -> &GridFunction {
        &self.grid
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// `‖S_β(1_A)‖_α >= g(|A|)` for a certified `g`, exactly when possible.
pub fn certify_lower_bound(g: &Supersolution, set: &DyadicSet) -> Result<CheckReport> {
    let k = g.grid.index_of(&set.measure())?;
    let norm = norm_alpha(&s_beta_powers(set, g.beta)?, g.alpha, g.beta)?;
    let bound = g.grid.value(k);
    let (ok, exact) = match (&norm, &bound) {
        (Number::Exact(a), Number::Exact(b)) => (a >= b, true),
        _ => (norm.to_f64() >= bound.to_f64() - g.tol, false),
    };
    let mut tally = RowTally::default();
    tally.push(!ok, || Violation {
        witness: format!("|A| = {}", set.measure()),
        points: vec![set.measure().to_f64()],
        lhs: norm.to_f64(),
        rhs: bound.to_f64(),
        gap: bound.to_f64() - norm.to_f64(),
    });
    Ok(CheckReport::from_parts(vec![tally.into_parts()], exact))
}
