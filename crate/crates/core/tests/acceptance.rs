//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any failed.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use dyadic_lab::dyadic::{initial_interval_set, integral_alpha, norm_alpha, s1_integral, s_beta_powers, DyadicRational, DyadicSet};
use dyadic_lab::extremal::{
    edge_boundary_density, enumerate_min_edge_boundary, enumerate_min_s_norm, harper_set, sharpness_integral,
    sharpness_table, DEFAULT_BUDGET,
};
use dyadic_lab::gaussian::{iso_profile, std_normal_cdf, std_normal_quantile};
use dyadic_lab::inequality::{
    bellman_solve, check_bobkov, check_two_point, is_exact_fixed_point, GridFunction, SolverParams,
};
use dyadic_lab::staircase::{bn_value, check_f_identities, f_fast, f_fast_u64, modulus_ratio, modulus_scan, p_value};
use dyadic_lab::Number;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(n: i128, d: i128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `F(k) = Σ_{j<k} popcount(j)` for all `k <= limit`, by running sum.
fn f_table(limit: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(limit as usize + 1);
    let mut acc = 0u64;
    for j in 0..=limit {
        out.push(acc);
        acc += j.count_ones() as u64;
    }
    out
}

/// `P(k / 2^n)` from the running-sum table: `(n k - 2F(k)) / 2^n`.
fn p_oracle(table: &[u64], k: u64, n: u32) -> BigRational {
    q(n as i128 * k as i128 - 2 * table[k as usize] as i128, 1i128 << n)
}

fn dy(k: u64, n: u32) -> DyadicRational {
    DyadicRational::new(k, n).unwrap()
}

fn f_consistency() -> Outcome {
    let table = f_table(1_000_000);
    for k in 0..=1_000_000u64 {
        ensure(f_fast_u64(k) == table[k as usize] as u128, || format!("F({k}) mismatch"))?;
    }
    for k in (0..=1_000_000u64).step_by(997) {
        ensure(f_fast(&BigUint::from(k)) == BigUint::from(table[k as usize]), || format!("big F({k}) mismatch"))?;
    }
    let report = check_f_identities(2048).map_err(|e| e.to_string())?;
    ensure(report.passed(), || report.first_counterexample().unwrap_or_default())?;
    Ok(format!("{} identities over arguments <= 2048", report.outcomes.len()))
}

fn staircase_exactness() -> Outcome {
    let table = f_table(1 << 13);
    for n in 0..=12u32 {
        for k in 0..=1u64 << n {
            let coarse = bn_value(&BigUint::from(k), n).unwrap();
            let fine = bn_value(&BigUint::from(2 * k), n + 1).unwrap();
            ensure(coarse == fine, || format!("B_{} != B_{n} at {k}/2^{n}", n + 1))?;
            ensure(coarse == p_oracle(&table, k, n), || format!("B_{n}({k}/2^{n}) disagrees with oracle"))?;
        }
    }
    for k in 0..=20u32 {
        let expect = q(k as i128, 1i128 << k);
        let x = DyadicRational::inverse_power_of_two(k);
        ensure(p_value(&x) == expect, || format!("P(2^-{k})"))?;
        ensure(p_value(&x.complement()) == expect, || format!("P(1 - 2^-{k})"))?;
    }
    for k in 0..=1u64 << 12 {
        let x = dy(k, 12);
        ensure(p_value(&x) == p_value(&x.complement()), || format!("symmetry at {x}"))?;
        ensure(p_value(&x) + x.to_rational() == p_value(&x.half()) * q(2, 1), || format!("P(x) + x = 2P(x/2) at {x}"))?;
    }
    Ok("n <= 12 consistency, k <= 20 equality cases, D_12 symmetry and doubling".into())
}

fn two_point_exactness() -> Outcome {
    let report = check_two_point(&GridFunction::staircase(10).unwrap(), 1.0, 1.0, 0.0).map_err(|e| e.to_string())?;
    ensure(report.exact, || "check was not run exactly".into())?;
    ensure(report.passed, || format!("{} violations, first {:?}", report.violation_count, report.violations.first()))?;
    Ok(format!("{} admissible pairs in D_10", report.scanned))
}

fn brute_force_extremality() -> Outcome {
    let table = f_table(64);
    let mut cases = vec![];
    for n in 0..=4u32 {
        cases.extend((0..=1u64 << n).map(|k| (n, k)));
    }
    cases.extend((0..=6).map(|k| (5, k)));
    let mut scanned = 0;
    for (n, k) in cases {
        let r = enumerate_min_s_norm(n, k, 1.0, 1.0, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        scanned += r.sets_scanned;
        let expect = p_oracle(&table, k, n);
        ensure(r.minimum == Number::Exact(expect.clone()), || format!("n = {n}, k = {k}: {} != {expect}", r.minimum))?;
        ensure(r.initial_segment_attains(), || format!("n = {n}, k = {k}: initial interval not an argmin"))?;
        for &m in &r.argmins {
            let set = DyadicSet::from_mask(n, m).unwrap();
            ensure(s1_integral(&set) == expect, || format!("argmin {m:#x} at n = {n} does not attain the minimum"))?;
        }
    }
    Ok(format!("{scanned} sets enumerated"))
}

fn hypercube_equivalence() -> Outcome {
    let table = f_table(1 << 12);
    for n in 0..=4u32 {
        for k in 0..=1u64 << n {
            let r = enumerate_min_edge_boundary(n, k, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            let expect = p_oracle(&table, k, n);
            ensure(r.minimum == Number::Exact(expect.clone()), || format!("n = {n}, k = {k}: {} != {expect}", r.minimum))?;
            ensure(r.initial_segment_attains(), || format!("n = {n}, k = {k}: harper set not an argmin"))?;
        }
    }
    for n in 0..=12u32 {
        for k in 0..=1u64 << n {
            let density = edge_boundary_density(&harper_set(n, k).unwrap());
            ensure(density == bn_value(&BigUint::from(k), n).unwrap(), || format!("harper({n}, {k})"))?;
        }
    }
    Ok("edge minima for n <= 4, harper densities for n <= 12".into())
}

fn bellman_solver() -> Outcome {
    let table = f_table(1 << 8);
    for n in 1..=8u32 {
        let out = bellman_solve(&SolverParams::new(n, 1.0, 1.0)).map_err(|e| e.to_string())?;
        ensure(out.converged, || format!("(1,1) n = {n} did not converge"))?;
        for k in 0..=1u64 << n {
            let expect = p_oracle(&table, k, n);
            let got = out.grid.value_f64(k as usize);
            let err = (got - dyadic_lab::numeric::rational_to_f64(&expect)).abs();
            ensure(err <= 1e-12, || format!("(1,1) n = {n}, k = {k}: error {err}"))?;
        }
        ensure(is_exact_fixed_point(&GridFunction::staircase(n).unwrap()).unwrap(), || format!("B_{n} not a fixed point"))?;
    }
    let mut previous: Option<Vec<f64>> = None;
    let mut gaps = Vec::new();
    for n in 4..=10u32 {
        let out = bellman_solve(&SolverParams::new(n, 1.0, 2.0)).map_err(|e| e.to_string())?;
        let values = out.grid.to_f64_vec();
        let size = values.len() - 1;
        let mut gap = 0.0f64;
        for (k, v) in values.iter().enumerate() {
            let i = iso_profile(k as f64 / size as f64);
            ensure(*v >= i - 1e-9, || format!("(1,2) n = {n}, k = {k}: {v} < I = {i}"))?;
            gap = gap.max(v - i);
        }
        if let Some(prev) = &previous {
            for (k, p) in prev.iter().enumerate() {
                ensure(values[2 * k] <= *p, || format!("(1,2) not monotone in n at n = {n}, coarse k = {k}"))?;
            }
        }
        gaps.push(format!("n={n}: {gap:.3e}"));
        previous = Some(values);
    }
    Ok(format!("(1,1) exact for n <= 8; (1,2) max gap to I {}", gaps.join(", ")))
}

/// Every leaf set up to depth 4, as masks.
fn all_sets() -> impl Iterator<Item = DyadicSet> {
    (0..=4u32).flat_map(|n| (0..1u64 << (1 << n)).map(move |m| DyadicSet::from_mask(n, m).unwrap()))
}

fn theorem_gaussian() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for set in all_sets() {
        let norm = norm_alpha(&s_beta_powers(&set, 2.0).unwrap(), 1.0, 2.0).unwrap().to_f64();
        let i = iso_profile(set.measure().to_f64());
        ensure(norm >= i - 1e-9, || format!("{set:?}: {norm} < {i}"))?;
        worst = worst.min(norm - i);
        count += 1;
    }
    for n in 1..=4u32 {
        for k in 0..=1u64 << n {
            let r = enumerate_min_s_norm(n, k, 1.0, 2.0, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            let i = iso_profile(k as f64 / (1u64 << n) as f64);
            ensure(r.minimum.to_f64() >= i - 1e-9, || format!("enumerated minimum below I at n = {n}, k = {k}"))?;
        }
    }
    Ok(format!("{count} sets, smallest margin {worst:.3e}"))
}

fn theorem_quasi_norm() -> Outcome {
    let mut count = 0;
    for alpha in [0.25, 0.5, 0.75] {
        for set in all_sets() {
            let norm = norm_alpha(&s_beta_powers(&set, 1.0).unwrap(), alpha, 1.0).unwrap().to_f64();
            let star = set.measure().star().to_f64();
            ensure(norm >= star - 1e-9, || format!("alpha = {alpha}, {set:?}: {norm} < {star}"))?;
            count += 1;
        }
        let report = check_two_point(&GridFunction::quadratic(8).unwrap(), alpha, 1.0, 1e-9).map_err(|e| e.to_string())?;
        ensure(report.passed, || format!("2x(1-x) fails the two-point inequality for alpha = {alpha}"))?;
    }
    Ok(format!("{count} (alpha, set) pairs; 2x(1-x) passes on D_8"))
}

fn sharpness() -> Outcome {
    let mut constants = Vec::new();
    for alpha in [0.25, 0.5, 0.75] {
        for k in 0..=12u32 {
            let set = initial_interval_set(&DyadicRational::inverse_power_of_two(k)).unwrap();
            let tree = integral_alpha(&s_beta_powers(&set, 1.0).unwrap(), alpha, 1.0, 0.0).unwrap().to_f64();
            let closed = sharpness_integral(alpha, k);
            ensure((tree - closed).abs() <= 1e-13, || format!("alpha = {alpha}, k = {k}: {tree} vs {closed}"))?;
        }
        let t = sharpness_table(alpha, 24).map_err(|e| e.to_string())?;
        for r in &t.rows {
            ensure(r.within_bound, || format!("alpha = {alpha}, k = {}: {} > {}", r.k, r.integral, r.bound))?;
        }
        // The integral bound gives ‖S_1‖_α / 2^-k <= (1/(1 - 2^(α-1)) + 2)^(1/α) for every k.
        let uniform = (1.0 / (1.0 - (alpha - 1.0f64).exp2()) + 2.0).powf(1.0 / alpha);
        ensure(t.constant.is_finite() && t.constant <= uniform, || format!("alpha = {alpha}: {} > {uniform}", t.constant))?;
        constants.push(format!("C({alpha}) = {:.6} <= {uniform:.3}", t.constant));
    }
    Ok(constants.join(", "))
}

fn modulus() -> Outcome {
    let scan12 = modulus_scan(12, 10).map_err(|e| e.to_string())?;
    let scan11 = modulus_scan(11, 10).map_err(|e| e.to_string())?;
    ensure(scan12.constant.is_finite() && scan12.constant > 0.0, || "constant not finite".into())?;
    for k in 1..=12u32 {
        let r = modulus_ratio(0, 1 << (12 - k), 12).unwrap();
        ensure(r == 1.0, || format!("pair (0, 2^-{k}) has ratio {r}"))?;
    }
    let drift = (scan12.constant - scan11.constant).abs() / scan12.constant;
    ensure(drift <= 0.01, || format!("constants {} and {} differ by {drift}", scan11.constant, scan12.constant))?;
    Ok(format!("C = {:.6} at n = 12, {:.6} at n = 11", scan12.constant, scan11.constant))
}

fn figure_data() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_dyadic-lab"))
        .args(["p-table", "--depth", "12", "--format", "csv"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || format!("exit status {}", out.status))?;
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name).ok_or(format!("missing column {name}"));
    let (xi, pi, ci) = (col("x")?, col("p_float")?, col("comparator")?);
    let mut rows = 0;
    let mut equalities = 0;
    for record in reader.records() {
        let record = record.map_err(|e| e.to_string())?;
        let x = &record[xi];
        let p: f64 = record[pi].parse().map_err(|_| format!("bad P in row {x}"))?;
        let c: f64 = record[ci].parse().map_err(|_| format!("bad comparator in row {x}"))?;
        let (num, den) = x.split_once('/').ok_or(format!("x = {x} is not p/q"))?;
        let (num, den): (u64, u64) = (num.parse().unwrap(), den.parse().unwrap());
        let special = num == 0 || num == den || den - num == 1 || num == 1;
        ensure(p >= c, || format!("P < comparator at {x}"))?;
        ensure((p == c) == special, || format!("equality pattern broken at {x}: P = {p}, comparator = {c}"))?;
        rows += 1;
        equalities += special as u32;
    }
    ensure(rows == 4097, || format!("{rows} rows"))?;
    Ok(format!("{rows} rows, equality at exactly {equalities} points"))
}

fn gaussian() -> Outcome {
    let points = 1_000_000;
    let mut worst = 0.0f64;
    for i in 0..points {
        let p = (i as f64 + 0.5) / points as f64;
        let t = std_normal_quantile(p).map_err(|e| e.to_string())?;
        worst = worst.max((std_normal_cdf(t) - p).abs());
    }
    ensure(worst <= 1e-12, || format!("roundtrip error {worst}"))?;
    let report = check_bobkov(&GridFunction::gaussian_profile(9).unwrap(), 1e-9).map_err(|e| e.to_string())?;
    ensure(report.passed, || format!("{} violations, first {:?}", report.violation_count, report.violations.first()))?;
    Ok(format!("roundtrip error {worst:.2e}; {} pairs on D_9", report.scanned))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("F consistency and digit-sum identities", f_consistency),
        ("staircase exactness", staircase_exactness),
        ("two-point inequality for P on D_10", two_point_exactness),
        ("brute-force extremality", brute_force_extremality),
        ("hypercube equivalence", hypercube_equivalence),
        ("Bellman solver", bellman_solver),
        ("S_2 lower bound by the Gaussian profile", theorem_gaussian),
        ("S_1 quasi-norm lower bound", theorem_quasi_norm),
        ("initial-interval sharpness", sharpness),
        ("modulus of continuity", modulus),
        ("P versus x* log2(1/x*) table", figure_data),
        ("Gaussian functions", gaussian),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{secs:.2}s]: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} [{secs:.2}s]: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
