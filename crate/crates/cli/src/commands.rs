use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use zigzag_core::montecarlo::zscore;
use zigzag_core::{
    absorption_map, simulate, solve_exact, solve_oracle, LatticeSpec, Method, Site, SourceSpec,
    WalkConfig,
};

use crate::args::{
    CompareArgs, Format, Geometry, McArgs, MethodArg, OutputArgs, SolveArgs, WalkArgs, What,
};
use crate::error::CliError;
use crate::report::{Report, SourceRecord, SpecRecord};

/// Largest tolerated |z| of a Monte Carlo column in `compare`.
pub const Z_LIMIT: f64 = 4.0;
/// Largest tolerated deviation from the reference table.
pub const TABLE_TOL: f64 = 1e-6;

/// Absorption probabilities for m = n = 7 with the source at (4, 4).
pub const TABLE: [((i64, i64), f64); 16] = [
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

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// A tolerance check failed; exit code 3.
    Fail,
}

fn resolve(g: &Geometry) -> Result<(LatticeSpec, SourceSpec), CliError> {
    let spec = LatticeSpec::new(g.m, g.n)?;
    let src = SourceSpec::new(g.a, g.b);
    spec.check_source(src)?;
    Ok((spec, src))
}

fn run_method(
    method: MethodArg,
    spec: LatticeSpec,
    src: SourceSpec,
    walk: &WalkArgs,
    what: What,
) -> Result<Report, CliError> {
    Ok(match method {
        MethodArg::Exact => Report::from_solution(&solve_exact(spec, src)?, what),
        MethodArg::Oracle => Report::from_solution(&solve_oracle(spec, src)?, what),
        MethodArg::Mc => {
            let est = simulate(spec, src, WalkConfig::new(walk.walks, walk.seed))?;
            Report::from_estimate(&est, what)
        }
    })
}

fn emit(out: &OutputArgs, body: &str) -> Result<(), CliError> {
    if out.out.as_os_str() == "-" {
        let mut stdout = std::io::stdout().lock();
        stdout
            .write_all(body.as_bytes())
            .and_then(|_| stdout.flush())
            .map_err(|source| CliError::Io {
                path: out.out.clone(),
                source,
            })
    } else {
        std::fs::write(&out.out, body).map_err(|source| CliError::Io {
            path: out.out.clone(),
            source,
        })
    }
}

fn emit_report(report: &Report, out: &OutputArgs) -> Result<(), CliError> {
    match out.format {
        Format::Csv => {
            emit(out, &report.to_csv())?;
            eprintln!("sum_absorption={:?}", report.sum_absorption);
        }
        Format::Json => emit(out, &report.to_json())?,
    }
    Ok(())
}

pub fn solve(args: &SolveArgs) -> Result<Outcome, CliError> {
    let (spec, src) = resolve(&args.geometry)?;
    let report = run_method(args.method, spec, src, &args.walk, args.what)?;
    emit_report(&report, &args.output)?;
    Ok(Outcome::Pass)
}

pub fn mc(args: &McArgs) -> Result<Outcome, CliError> {
    let (spec, src) = resolve(&args.geometry)?;
    let report = run_method(MethodArg::Mc, spec, src, &args.walk, args.what)?;
    emit_report(&report, &args.output)?;
    Ok(Outcome::Pass)
}

/// Loads a report written by `solve --format json`.
pub fn load_report(path: &Path) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Report {
        path: path.to_path_buf(),
        source,
    })
}

struct Column {
    label: String,
    report: Report,
    field: HashMap<(i64, i64), f64>,
    absorption: HashMap<(i64, i64), (f64, Option<f64>)>,
}

impl Column {
    fn new(label: String, report: Report) -> Self {
        let field = report.field.iter().map(|r| ((r.p, r.q), r.value)).collect();
        let absorption = report
            .absorption
            .iter()
            .map(|r| ((r.p, r.q), (r.value, r.stderr)))
            .collect();
        Column {
            label,
            report,
            field,
            absorption,
        }
    }

    fn deterministic(&self) -> bool {
        self.report.method != Method::Mc
    }
}

#[derive(Debug, Clone, Serialize)]
struct CompareRow {
    kind: &'static str,
    p: i64,
    q: i64,
    values: Vec<f64>,
    abs_diff: f64,
    z: Vec<Option<f64>>,
}

#[derive(Debug, Serialize)]
struct CompareReport<'a> {
    spec: SpecRecord,
    source: SourceRecord,
    columns: Vec<&'a str>,
    z_columns: Vec<&'a str>,
    rows: Vec<CompareRow>,
    max_abs_diff: f64,
    max_abs_z: f64,
    tol: f64,
    z_limit: f64,
    pass: bool,
}

fn unique_label(base: &str, taken: &[Column]) -> String {
    let count = taken
        .iter()
        .filter(|c| c.label == base || c.label.starts_with(&format!("{base}_")))
        .count();
    if count == 0 {
        base.to_string()
    } else {
        format!("{base}_{}", count + 1)
    }
}

fn compare_geometry(args: &CompareArgs) -> Result<Option<(LatticeSpec, SourceSpec)>, CliError> {
    let g = &args.geometry;
    match (g.m, g.n, g.a, g.b) {
        (Some(m), Some(n), Some(a), Some(b)) => resolve(&Geometry { m, n, a, b }).map(Some),
        (None, None, None, None) => Ok(None),
        _ => Err(CliError::Usage(
            "--m, --n, --a and --b must be given together".into(),
        )),
    }
}

fn check_geometry(
    path: &Path,
    r: &Report,
    spec: SpecRecord,
    src: SourceRecord,
) -> Result<(), CliError> {
    if r.spec != spec || r.source != src {
        return Err(CliError::Usage(format!(
            "{}: report is m={} n={} source ({},{}), expected m={} n={} source ({},{})",
            path.display(),
            r.spec.m,
            r.spec.n,
            r.source.a,
            r.source.b,
            spec.m,
            spec.n,
            src.a,
            src.b
        )));
    }
    Ok(())
}

pub fn compare(args: &CompareArgs) -> Result<Outcome, CliError> {
    let geometry = compare_geometry(args)?;
    if !args.methods.is_empty() && geometry.is_none() {
        return Err(CliError::Usage(
            "--m, --n, --a and --b are required when --method is given".into(),
        ));
    }
    if args.methods.len() + args.reports.len() < 2 {
        return Err(CliError::Usage(
            "compare needs at least two columns (--method and/or --report)".into(),
        ));
    }
    if args.tol.is_nan() || args.tol < 0.0 {
        return Err(CliError::Usage(
            "--tol must be a non-negative number".into(),
        ));
    }

    let mut reports = Vec::with_capacity(args.reports.len());
    for path in &args.reports {
        reports.push((path, load_report(path)?));
    }
    let (spec_rec, src_rec) = match geometry {
        Some((spec, src)) => (
            SpecRecord {
                m: spec.m(),
                n: spec.n(),
            },
            SourceRecord { a: src.a, b: src.b },
        ),
        None => (reports[0].1.spec, reports[0].1.source),
    };
    for (path, r) in &reports {
        check_geometry(path, r, spec_rec, src_rec)?;
    }
    let spec = LatticeSpec::new(spec_rec.m, spec_rec.n)?;
    let src = SourceSpec::new(src_rec.a, src_rec.b);
    spec.check_source(src)?;

    let mut columns: Vec<Column> = Vec::new();
    for &method in &args.methods {
        let report = run_method(method, spec, src, &args.walk, What::Both)?;
        let label = unique_label(report.method.as_str(), &columns);
        columns.push(Column::new(label, report));
    }
    for (_, report) in reports {
        let label = unique_label(report.method.as_str(), &columns);
        columns.push(Column::new(label, report));
    }
    let Some(reference) = columns.iter().position(Column::deterministic) else {
        return Err(CliError::Usage(
            "compare needs at least one exact or oracle column".into(),
        ));
    };

    let mut rows = Vec::new();
    if args.what.field() {
        for s in spec.interior_sites() {
            rows.push(field_row(&columns, s)?);
        }
    }
    if args.what.absorption() {
        for s in spec.boundary_sites() {
            rows.push(absorption_row(&columns, reference, s)?);
        }
    }

    let max_abs_diff = rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max);
    let max_abs_z = rows
        .iter()
        .flat_map(|r| r.z.iter().flatten())
        .map(|z| z.abs())
        .fold(0.0, f64::max);
    let pass = max_abs_diff <= args.tol && max_abs_z <= Z_LIMIT;

    let labels: Vec<&str> = columns.iter().map(|c| c.label.as_str()).collect();
    let z_labels: Vec<&str> = columns
        .iter()
        .filter(|c| !c.deterministic())
        .map(|c| c.label.as_str())
        .collect();
    let body = match args.output.format {
        Format::Csv => compare_csv(&labels, &z_labels, &rows),
        Format::Json => {
            let report = CompareReport {
                spec: spec_rec,
                source: src_rec,
                columns: labels,
                z_columns: z_labels,
                rows,
                max_abs_diff,
                max_abs_z,
                tol: args.tol,
                z_limit: Z_LIMIT,
                pass,
            };
            serde_json::to_string_pretty(&report).expect("report serialises") + "\n"
        }
    };
    emit(&args.output, &body)?;
    eprintln!(
        "max_abs_diff={max_abs_diff:e} max_abs_z={max_abs_z:.3} {}",
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { Outcome::Pass } else { Outcome::Fail })
}

fn missing(col: &Column, kind: &str, s: Site) -> CliError {
    CliError::Usage(format!("column {} has no {kind} value at {s}", col.label))
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if lo.is_finite() || hi.is_finite() {
        hi - lo
    } else {
        0.0
    }
}

fn field_row(columns: &[Column], s: Site) -> Result<CompareRow, CliError> {
    let values = columns
        .iter()
        .map(|c| {
            c.field
                .get(&(s.p, s.q))
                .copied()
                .ok_or_else(|| missing(c, "field", s))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let abs_diff = spread(
        columns
            .iter()
            .zip(&values)
            .filter(|(c, _)| c.deterministic())
            .map(|(_, &v)| v),
    );
    let z = columns
        .iter()
        .filter(|c| !c.deterministic())
        .map(|_| None)
        .collect();
    Ok(CompareRow {
        kind: "field",
        p: s.p,
        q: s.q,
        values,
        abs_diff,
        z,
    })
}

fn absorption_row(columns: &[Column], reference: usize, s: Site) -> Result<CompareRow, CliError> {
    let entries = columns
        .iter()
        .map(|c| {
            c.absorption
                .get(&(s.p, s.q))
                .copied()
                .ok_or_else(|| missing(c, "absorption", s))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let exact = entries[reference].0;
    let abs_diff = spread(
        columns
            .iter()
            .zip(&entries)
            .filter(|(c, _)| c.deterministic())
            .map(|(_, e)| e.0),
    );
    let z = columns
        .iter()
        .zip(&entries)
        .filter(|(c, _)| !c.deterministic())
        .map(|(c, &(freq, stderr))| {
            let walks = c.report.walks.unwrap_or(0);
            Some(zscore(freq, stderr.unwrap_or(0.0), exact, walks))
        })
        .collect();
    Ok(CompareRow {
        kind: "absorption",
        p: s.p,
        q: s.q,
        values: entries.iter().map(|e| e.0).collect(),
        abs_diff,
        z,
    })
}

fn compare_csv(labels: &[&str], z_labels: &[&str], rows: &[CompareRow]) -> String {
    let mut out = String::from("kind,p,q");
    for l in labels {
        let _ = write!(out, ",{l}");
    }
    out.push_str(",abs_diff");
    for l in z_labels {
        let _ = write!(out, ",z_{l}");
    }
    out.push('\n');
    for r in rows {
        let _ = write!(out, "{},{},{}", r.kind, r.p, r.q);
        for v in &r.values {
            let _ = write!(out, ",{v:?}");
        }
        let _ = write!(out, ",{:?}", r.abs_diff);
        for z in &r.z {
            match z {
                Some(z) => {
                    let _ = write!(out, ",{z:?}");
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
struct TableRow {
    p: i64,
    q: i64,
    observed: f64,
    published: f64,
    deviation: f64,
    flag: bool,
}

pub fn table1(out: &OutputArgs) -> Result<Outcome, CliError> {
    let spec = LatticeSpec::new(7, 7)?;
    let src = SourceSpec::new(4, 4);
    let abs = absorption_map(&solve_exact(spec, src)?);
    let rows: Vec<TableRow> = TABLE
        .iter()
        .map(|&((p, q), published)| {
            let observed = abs
                .get(Site::new(p, q))
                .expect("reference sites lie on the boundary");
            let deviation = (observed - published).abs();
            TableRow {
                p,
                q,
                observed,
                published,
                deviation,
                flag: deviation > TABLE_TOL,
            }
        })
        .collect();
    let body = match out.format {
        Format::Csv => {
            let mut s = String::from("p,q,observed,published,deviation,flag\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{:.6},{:.6},{:.3e},{}",
                    r.p,
                    r.q,
                    r.observed,
                    r.published,
                    r.deviation,
                    if r.flag { "DEVIATES" } else { "ok" }
                );
            }
            s
        }
        Format::Json => serde_json::to_string_pretty(&rows).expect("table serialises") + "\n",
    };
    emit(out, &body)?;
    let flagged = rows.iter().filter(|r| r.flag).count();
    eprintln!(
        "{flagged} of {} entries deviate by more than {TABLE_TOL:e}",
        rows.len()
    );
    Ok(if flagged == 0 {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}
