//! Acceptance criteria. Each test prints one PASS/FAIL line; run with
//! `cargo test -p zigzag-core --test acceptance -- --nocapture --test-threads=1`.

use std::time::{Duration, Instant};

use zigzag_core::closed_form::{delta_identity_check, ClosedForm, Region};
use zigzag_core::montecarlo::zscores;
use zigzag_core::{
    absorption_map, simulate, solve_exact, solve_oracle, LatticeSpec, Site, SourceSpec, WalkConfig,
};

fn verdict(id: u32, name: &str, failures: &[String], detail: &str) {
    let tag = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {name} ({detail})");
    for f in failures {
        println!("       - {f}");
    }
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

fn spec(m: usize, n: usize) -> LatticeSpec {
    LatticeSpec::new(m, n).unwrap()
}

const GEOMETRIES: [(usize, usize, i64, i64); 6] = [
    (3, 3, 2, 2),
    (5, 4, 2, 3),
    (7, 7, 4, 4),
    (7, 7, 3, 5),
    (7, 5, 1, 2),
    (9, 6, 5, 2),
];

/// Published absorption probabilities for m = n = 7, source (4,4).
const REFERENCE: [((i64, i64), f64); 16] = [
    ((0, 1), 0.012247),
    ((0, 2), 0.035646),
    ((0, 3), 0.054827),
    ((0, 4), 0.063296),
    ((0, 5), 0.056686),
    ((0, 6), 0.039811),
    ((0, 7), 0.020737),
    ((0, 8), 0.005743),
    ((1, 0), 0.026040),
    ((2, 0), 0.013797),
    ((3, 0), 0.069523),
    ((4, 0), 0.021476),
    ((1, 8), 0.005743),
    ((2, 8), 0.040253),
    ((3, 8), 0.015039),
    ((4, 8), 0.059725),
];

#[test]
fn criterion_1_reference_table() {
    let start = Instant::now();
    let sol = solve_exact(spec(7, 7), SourceSpec::new(4, 4)).unwrap();
    let abs = absorption_map(&sol);
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    let mut worst = 0.0_f64;
    for ((p, q), published) in REFERENCE {
        let got = abs.get(Site::new(p, q)).unwrap();
        let dev = (got - published).abs();
        worst = worst.max(dev);
        if dev > 1e-6 {
            failures.push(format!(
                "P({p},{q}) = {got:.9}, reference {published:.6}, |dev| = {dev:.3e}"
            ));
        }
    }
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("runtime {elapsed:?} >= 1 s"));
    }
    verdict(
        1,
        "16 reference absorption probabilities within 1e-6",
        &failures,
        &format!("max |dev| {worst:.3e}, {elapsed:?}"),
    );
}

#[test]
fn criterion_2_oracle_equivalence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (mut field_worst, mut abs_worst) = (0.0_f64, 0.0_f64);
    for (m, n, a, b) in GEOMETRIES {
        let (sp, src) = (spec(m, n), SourceSpec::new(a, b));
        let exact = solve_exact(sp, src).unwrap();
        let oracle = solve_oracle(sp, src).unwrap();
        let fd = exact.max_abs_diff(&oracle);
        let ad = absorption_map(&exact).max_abs_diff(&absorption_map(&oracle));
        field_worst = field_worst.max(fd);
        abs_worst = abs_worst.max(ad);
        if fd > 1e-9 || ad > 1e-10 {
            failures.push(format!(
                "({m},{n},{a},{b}): field {fd:.3e}, absorption {ad:.3e}"
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(5) {
        failures.push(format!("runtime {elapsed:?} >= 5 s"));
    }
    verdict(
        2,
        "exact vs oracle field <= 1e-9, absorption <= 1e-10",
        &failures,
        &format!("field {field_worst:.3e}, absorption {abs_worst:.3e}, {elapsed:?}"),
    );
}

#[test]
fn criterion_3_conservation() {
    let mut failures = Vec::new();
    let mut worst = 0.0_f64;
    for (m, n, a, b) in GEOMETRIES {
        let (sp, src) = (spec(m, n), SourceSpec::new(a, b));
        for (name, sol) in [
            ("exact", solve_exact(sp, src).unwrap()),
            ("oracle", solve_oracle(sp, src).unwrap()),
        ] {
            let dev = (absorption_map(&sol).total() - 1.0).abs();
            worst = worst.max(dev);
            if dev > 1e-10 {
                failures.push(format!("{name} ({m},{n},{a},{b}): |sum - 1| = {dev:.3e}"));
            }
        }
    }
    verdict(
        3,
        "sum of absorption = 1 +- 1e-10",
        &failures,
        &format!("max |sum - 1| {worst:.3e}"),
    );
}

#[test]
fn criterion_4_residual_suite() {
    let mut failures = Vec::new();
    let mut worst = 0.0_f64;
    for (m, n, a, b) in GEOMETRIES {
        let cf = ClosedForm::new(spec(m, n), SourceSpec::new(a, b)).unwrap();
        let field = cf.field();
        let scale = field.max_abs();
        let tag = format!("({m},{n},{a},{b})");

        let residual = field.max_residual() / scale;
        worst = worst.max(residual);
        if residual > 1e-9 {
            failures.push(format!("{tag}: field-equation residual {residual:.3e}"));
        }

        let (mi, ni) = (m as i64, n as i64);
        let mut edge = 0.0_f64;
        let mut seam = 0.0_f64;
        for p in 0..=mi + 1 {
            edge = edge.max(cf.evaluate(Region::I, Site::new(p, 0)).abs());
            edge = edge.max(cf.evaluate(Region::II, Site::new(p, ni + 1)).abs());
            let lo = cf.evaluate(Region::I, Site::new(p, b));
            let hi = cf.evaluate(Region::II, Site::new(p, b));
            seam = seam.max((lo - hi).abs());
        }
        for q in 0..=ni + 1 {
            for region in [Region::I, Region::II] {
                edge = edge.max(cf.evaluate(region, Site::new(0, q)).abs());
                edge = edge.max(cf.evaluate(region, Site::new(mi + 1, q)).abs());
            }
        }
        worst = worst.max(edge / scale).max(seam / scale);
        if edge > 1e-9 * scale {
            failures.push(format!("{tag}: boundary value {:.3e}", edge / scale));
        }
        if seam > 1e-9 * scale {
            failures.push(format!(
                "{tag}: region mismatch at q=b {:.3e}",
                seam / scale
            ));
        }
    }
    verdict(
        4,
        "field equations, boundary values and seam match <= 1e-9 max|F|",
        &failures,
        &format!("worst scaled {worst:.3e}"),
    );
}

#[test]
fn criterion_5_structural_identities() {
    let mut failures = Vec::new();
    for (m, n, a, b) in GEOMETRIES {
        let sp = spec(m, n);
        let abs = absorption_map(&solve_exact(sp, SourceSpec::new(a, b)).unwrap());
        let (mi, ni) = (m as i64, n as i64);
        let p = |x, y| abs.get(Site::new(x, y)).unwrap();
        let tag = format!("({m},{n},{a},{b})");
        if p(0, 0) != 0.0 || p(mi + 1, 0) != 0.0 {
            failures.push(format!("{tag}: empty corners not exactly zero"));
        }
        if (p(0, ni + 1) - p(1, ni + 1)).abs() > 1e-12 {
            failures.push(format!("{tag}: P(0,n+1) != P(1,n+1)"));
        }
        if (p(mi + 1, ni + 1) - p(mi, ni + 1)).abs() > 1e-12 {
            failures.push(format!("{tag}: P(m+1,n+1) != P(m,n+1)"));
        }
        if 2 * a == mi + 1 {
            for (s, v) in abs.iter() {
                let t = sp.mirror_p(s).unwrap();
                if (v - abs.get(t).unwrap()).abs() > 1e-10 {
                    failures.push(format!("{tag}: mirror mismatch at {s}"));
                }
            }
        }
    }
    verdict(
        5,
        "corner, top-corner and mirror identities",
        &failures,
        "6 geometries",
    );
}

#[test]
fn criterion_6_degenerate_mode_limit() {
    let (sp, src) = (spec(7, 7), SourceSpec::new(3, 5));
    let exact = solve_exact(sp, src).unwrap();
    let oracle = solve_oracle(sp, src).unwrap();
    let diff = absorption_map(&exact).max_abs_diff(&absorption_map(&oracle));
    let mut failures = Vec::new();
    if !exact.limit_evaluated() {
        failures.push("degenerate mode was not limit-evaluated".to_string());
    }
    if diff > 1e-6 {
        failures.push(format!("absorption difference {diff:.3e}"));
    }
    verdict(
        6,
        "limit-evaluated degenerate mode vs oracle <= 1e-6",
        &failures,
        &format!("max |dP| {diff:.3e}"),
    );
}

#[test]
fn criterion_7_monte_carlo() {
    let (sp, src) = (spec(7, 7), SourceSpec::new(4, 4));
    let cfg = WalkConfig::new(1_000_000, 0x5eed_2002);
    let start = Instant::now();
    let est = simulate(sp, src, cfg).unwrap();
    let elapsed = start.elapsed();
    let exact = absorption_map(&solve_exact(sp, src).unwrap());
    let z = zscores(&est, &exact).unwrap();
    let worst = z.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
    let mut failures: Vec<String> = z
        .iter()
        .filter(|(_, v)| v.abs() > 4.0)
        .map(|(s, v)| format!("{s}: z = {v:.2}"))
        .collect();
    if est.hit_counts().iter().sum::<u64>() != cfg.walks {
        failures.push("absorption counts do not sum to the walk count".to_string());
    }
    if simulate(sp, src, cfg).unwrap() != est {
        failures.push("repeat run differs".to_string());
    }
    if elapsed >= Duration::from_secs(60) {
        failures.push(format!("runtime {elapsed:?} >= 60 s"));
    }
    verdict(
        7,
        "10^6 walks within 4 standard errors, exact sum, reproducible",
        &failures,
        &format!("max |z| {worst:.2}, {elapsed:?}"),
    );
}

#[test]
fn criterion_8_delta_identity() {
    let mut failures = Vec::new();
    let mut worst = 0.0_f64;
    for m in [3, 7, 9, 15] {
        for a in 1..=m as i64 {
            let dev = delta_identity_check(m, a);
            worst = worst.max(dev);
            if dev > 1e-12 {
                failures.push(format!("m={m}, a={a}: {dev:.3e}"));
            }
        }
    }
    verdict(
        8,
        "sine reconstruction of delta <= 1e-12",
        &failures,
        &format!("max {worst:.3e}"),
    );
}
