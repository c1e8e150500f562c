use anyhow::Result;
use serde_json::{json, Value};
use sun_einstein::catalog::{configurations, enumerate_with, solve_configuration};
use sun_einstein::solver::closed_forms;
use sun_einstein::{
    validate_basis, Ansatz, CatalogEntry, EinsteinRecord, Scheme, SearchConfig, Tolerances,
};

use crate::cache;
use crate::config::{CommandKind, Format, RunConfig};
use crate::output::{self, key_values, short, short_list, Document, SCHEMA_VERSION};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    Failure = 1,
    Usage = 2,
}

/// Everything a command produced, rendered lazily in the requested format.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub document: Document,
    pub table: String,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub status: Status,
}

impl Outcome {
    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Table => self.table.clone(),
            Format::Json => output::to_canonical_json(&self.document)?,
            Format::Csv => output::csv(&self.csv_header, &self.csv_rows)?,
        })
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        CommandKind::Basis => cmd_basis(cfg),
        CommandKind::Check => cmd_check(cfg),
        CommandKind::Solve => cmd_solve(cfg),
        CommandKind::Catalog => cmd_catalog(cfg),
    }
}

fn tolerances(cfg: &RunConfig) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(t) = cfg.tol {
        tol.einstein = t;
    }
    tol
}

fn search_config(cfg: &RunConfig) -> SearchConfig {
    SearchConfig {
        starts: cfg.starts,
        seed: cfg.seed,
        tolerances: tolerances(cfg),
        ..SearchConfig::default()
    }
}

fn document(cfg: &RunConfig, results: Vec<Value>, diagnostics: Value) -> Document {
    Document {
        schema_version: SCHEMA_VERSION,
        command: cfg.command.name().to_string(),
        params: serde_json::to_value(cfg).expect("config serializes"),
        results,
        diagnostics,
    }
}

fn scheme_of(cfg: &RunConfig) -> Scheme {
    cfg.scheme.expect("validated: command needs a scheme")
}

fn opt_f64(v: Option<f64>) -> Value {
    v.map_or(Value::Null, |v| json!(v))
}

/// The stable per-record JSON shape.
pub fn record_json(rec: &EinsteinRecord) -> Value {
    json!({
        "scheme": rec.scheme.number(),
        "n": rec.n,
        "p": rec.p,
        "x": rec.x,
        "lambda": rec.lambda,
        "I1": opt_f64(rec.i1),
        "provenance": rec.provenance,
        "residual": if rec.residual.is_finite() { json!(rec.residual) } else { Value::Null },
    })
}

const RECORD_HEADER: [&str; 8] = ["scheme", "n", "p", "x", "lambda", "I1", "provenance", "residual"];

fn provenance_name(rec: &EinsteinRecord) -> String {
    serde_json::to_value(rec.provenance)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn record_row(rec: &EinsteinRecord, x_sep: &str) -> Vec<String> {
    vec![
        rec.scheme.number().to_string(),
        rec.n.to_string(),
        rec.p.map_or(String::new(), |p| p.to_string()),
        short_list(&rec.x, x_sep),
        short(rec.lambda),
        rec.i1.map_or(String::new(), short),
        provenance_name(rec),
        short(rec.residual),
    ]
}

fn run_length(values: &[f64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let mut j = i;
        while j < values.len() && (values[j] - values[i]).abs() <= 1e-12 * values[i].abs() {
            j += 1;
        }
        parts.push(format!("{} x{}", short(values[i]), j - i));
        i = j;
    }
    parts.join(", ")
}

fn heading(cfg: &RunConfig) -> String {
    match (cfg.scheme, cfg.p) {
        (Some(s), Some(p)) => format!("scheme {}  n {}  p {}  q {}", s.number(), cfg.n, p, cfg.n - p),
        (Some(s), None) => format!("scheme {}  n {}", s.number(), cfg.n),
        (None, _) => format!("n {}", cfg.n),
    }
}

pub fn cmd_basis(cfg: &RunConfig) -> Result<Outcome> {
    let scheme = scheme_of(cfg);
    let basis = cache::build_basis(scheme, cfg.n, cfg.p)?;
    let report = validate_basis(&basis);
    let (sc, cache_path) = cache::load_or_compute(cfg.cache_dir.as_deref(), &basis)?;
    let d = sc.dim();
    let nnz = sc.nonzero_count();
    let density = nnz as f64 / (d * d * d) as f64;
    let max_pair = (0..d)
        .flat_map(|a| (0..d).map(move |b| (a, b)))
        .map(|(a, b)| sc.bracket(a, b).len())
        .max()
        .unwrap_or(0);
    let identities = json!({
        "antisymmetry": sc.antisymmetry_defect(),
        "jacobi": sc.jacobi_defect(),
        "lowered_antisymmetry": sc.lowered_antisymmetry_defect(),
    });
    let passed = report.passed();
    let result = json!({
        "scheme": scheme.number(),
        "n": cfg.n,
        "p": cfg.p,
        "dim": d,
        "class_sizes": report.class_sizes,
        "gram_diagonal": report.gram_diagonal,
        "nonzero_structure_constants": nnz,
        "density": density,
        "max_terms_per_bracket": max_pair,
        "passed": passed,
    });
    let diagnostics = json!({
        "report": report,
        "identity_defects": identities,
        "cache_file": cache_path.as_ref().map(|p| p.display().to_string()),
    });

    let sizes: Vec<String> = report.class_sizes.iter().map(usize::to_string).collect();
    let mut table = heading(cfg) + "\n";
    table += &key_values(&[
        ("dim", d.to_string()),
        ("class sizes", sizes.join("/")),
        ("gram diagonal", run_length(&report.gram_diagonal)),
        ("nonzero f", format!("{nnz} of {} ({})", d * d * d, short(density))),
        ("max per bracket", max_pair.to_string()),
        ("hermiticity", short(report.max_hermiticity_defect)),
        ("max |trace|", short(report.max_trace)),
        ("antisymmetry", short(sc.antisymmetry_defect())),
        ("jacobi", short(sc.jacobi_defect())),
        ("validation", if passed { "PASS".into() } else { format!("FAIL {:?}", report.flagged) }),
    ]);
    let rows = vec![vec![
        scheme.number().to_string(),
        cfg.n.to_string(),
        cfg.p.map_or(String::new(), |p| p.to_string()),
        d.to_string(),
        sizes.join("/"),
        short_list(&report.gram_diagonal, ";"),
        nnz.to_string(),
        passed.to_string(),
    ]];
    Ok(Outcome {
        document: document(cfg, vec![result], diagnostics),
        table,
        csv_header: vec!["scheme", "n", "p", "dim", "class_sizes", "gram_diagonal", "nonzero", "passed"],
        csv_rows: rows,
        status: if passed { Status::Success } else { Status::Failure },
    })
}

pub fn cmd_check(cfg: &RunConfig) -> Result<Outcome> {
    let scheme = scheme_of(cfg);
    let ans = cache::ansatz(cfg.cache_dir.as_deref(), scheme, cfg.n, cfg.p)?;
    let tol = tolerances(cfg);
    let x = cfg.x.clone().expect("validated: check has --x");
    let summary = ans.summary(&x)?;
    let einstein = summary.is_einstein(tol.einstein);
    let i1 = summary.invariant_i1(tol.einstein).ok();
    let verdict = if einstein { "EINSTEIN" } else { "NOT-EINSTEIN" };
    let class_ricci: Vec<Option<f64>> = ans.class_ricci(&summary);
    let result = json!({
        "scheme": scheme.number(),
        "n": cfg.n,
        "p": cfg.p,
        "x": x,
        "lambda": summary.lambda_best,
        "I1": opt_f64(i1),
        "residual": summary.residual,
        "verdict": verdict,
        "class_ricci": class_ricci,
    });
    let diagnostics = json!({
        "tolerance": tol.einstein,
        "scalar_curvature": summary.scalar,
        "riem_norm_sq": summary.riem_norm_sq,
        "block_scalar_defect": ans.block_scalar_defect(&summary),
    });
    let mut table = heading(cfg) + "\n";
    table += &key_values(&[
        ("x", short_list(&x, " ")),
        ("lambda", short(summary.lambda_best)),
        ("I1", i1.map_or("-".into(), short)),
        ("residual", short(summary.residual)),
        ("verdict", verdict.into()),
    ]);
    let row = vec![
        scheme.number().to_string(),
        cfg.n.to_string(),
        cfg.p.map_or(String::new(), |p| p.to_string()),
        short_list(&x, ";"),
        short(summary.lambda_best),
        i1.map_or(String::new(), short),
        short(summary.residual),
        verdict.into(),
    ];
    Ok(Outcome {
        document: document(cfg, vec![result], diagnostics),
        table,
        csv_header: vec!["scheme", "n", "p", "x", "lambda", "I1", "residual", "verdict"],
        csv_rows: vec![row],
        status: if einstein { Status::Success } else { Status::Failure },
    })
}

fn audit_json(records: &[EinsteinRecord]) -> Vec<Value> {
    records
        .iter()
        .filter_map(|r| {
            r.audit.as_ref().map(|a| {
                json!({
                    "provenance": r.provenance,
                    "printed_x": a.printed_x,
                    "printed_lambda": a.printed_lambda,
                    "printed_system_residual": a.printed_system_residual,
                    "printed_engine_residual":
                        if a.printed_engine_residual.is_finite() { json!(a.printed_engine_residual) } else { Value::Null },
                    "agrees": a.agrees,
                    "reported_x": r.x,
                    "reported_lambda": r.lambda,
                    "reported_valid": r.valid,
                })
            })
        })
        .collect()
}

fn records_table(records: &[EinsteinRecord]) -> String {
    let rows: Vec<Vec<String>> = records.iter().map(|r| record_row(r, " ")).collect();
    output::table(&RECORD_HEADER, &rows)
}

pub fn cmd_solve(cfg: &RunConfig) -> Result<Outcome> {
    let scheme = scheme_of(cfg);
    let ans = cache::ansatz(cfg.cache_dir.as_deref(), scheme, cfg.n, cfg.p)?;
    let search = search_config(cfg);
    let conf = solve_configuration(&ans, &search)?;
    let results: Vec<Value> = conf.records.iter().map(record_json).collect();
    let diagnostics = json!({
        "case": conf.case,
        "search": conf.search,
        "missed_closed_forms": conf.missed_closed_forms,
        "closed_form_audit": audit_json(&closed_forms(&ans, &search.tolerances)?),
    });
    let mut table = format!("{}  ({} records)\n", heading(cfg), conf.records.len());
    table += &records_table(&conf.records);
    table += &format!(
        "starts {}  converged {}  nonpositive {}  distinct {}\n",
        conf.search.starts, conf.search.converged, conf.search.nonpositive, conf.search.distinct
    );
    let audited = closed_forms(&ans, &search.tolerances)?;
    for r in audited.iter().filter(|r| r.audit.as_ref().is_some_and(|a| !a.agrees)) {
        table += &format!(
            "note: printed {} values fail; reported x4/lambda are recomputed from x1, x2\n",
            provenance_name(r)
        );
    }
    Ok(Outcome {
        document: document(cfg, results, diagnostics),
        table,
        csv_header: RECORD_HEADER.to_vec(),
        csv_rows: conf.records.iter().map(|r| record_row(r, ";")).collect(),
        status: Status::Success,
    })
}

pub fn catalog_entry(cfg: &RunConfig) -> Result<CatalogEntry> {
    let ansatze = configurations(cfg.n)
        .into_iter()
        .map(|(s, p)| cache::ansatz(cfg.cache_dir.as_deref(), s, cfg.n, p))
        .collect::<Result<Vec<Ansatz>>>()?;
    Ok(enumerate_with(cfg.n, &ansatze, &search_config(cfg))?)
}

pub fn cmd_catalog(cfg: &RunConfig) -> Result<Outcome> {
    let entry = catalog_entry(cfg)?;
    let all: Vec<&EinsteinRecord> =
        entry.configurations.iter().flat_map(|c| c.records.iter()).collect();
    let results: Vec<Value> = all
        .iter()
        .map(|r| {
            let mut v = record_json(r);
            v["class_id"] = json!(r.class_id);
            v
        })
        .collect();
    let classes: Vec<Value> = entry
        .classes
        .iter()
        .map(|c| json!({"id": c.id, "I1": c.i1, "bi_invariant": c.bi_invariant, "size": c.members.len()}))
        .collect();
    let configs: Vec<Value> = entry
        .configurations
        .iter()
        .map(|c| {
            json!({
                "scheme": c.scheme.number(),
                "p": c.p,
                "case": c.case,
                "records": c.records.len(),
                "missed_closed_forms": c.missed_closed_forms,
                "search": c.search,
            })
        })
        .collect();
    let diagnostics = json!({
        "count_inequivalent": entry.count_inequivalent,
        "paper_count": entry.paper_count,
        "agreement": entry.agreement,
        "under_resolved": entry.under_resolved,
        "classes": classes,
        "configurations": configs,
        "equivalence": "equal I1 within 1e-6 relative; necessary, not sufficient, for isometry",
    });

    let mut table = format!("{}  ({} configurations)\n", heading(cfg), entry.configurations.len());
    let rows: Vec<Vec<String>> = entry
        .classes
        .iter()
        .map(|c| {
            let origins: Vec<String> = c
                .members
                .iter()
                .map(|&(ci, ri)| {
                    let conf = &entry.configurations[ci];
                    let rec = &conf.records[ri];
                    match conf.p {
                        Some(p) => format!("s2 p={p} {}", provenance_name(rec)),
                        None => format!("s1 {}", provenance_name(rec)),
                    }
                })
                .collect();
            vec![
                c.id.to_string(),
                short(c.i1),
                if c.bi_invariant { "yes".into() } else { String::new() },
                origins.join("; "),
            ]
        })
        .collect();
    table += &output::table(&["class", "I1", "bi-invariant", "members"], &rows);
    table += &key_values(&[
        ("enumerated", entry.count_inequivalent.to_string()),
        ("formula", entry.paper_count.to_string()),
        ("agreement", entry.agreement.to_string()),
        ("under-resolved", entry.under_resolved.to_string()),
    ]);
    table += "classes are I1 classes: equal I1 is necessary, not sufficient, for equivalence\n";

    let mut header = RECORD_HEADER.to_vec();
    header.push("class_id");
    let csv_rows = all
        .iter()
        .map(|r| {
            let mut row = record_row(r, ";");
            row.push(r.class_id.map_or(String::new(), |c| c.to_string()));
            row
        })
        .collect();
    Ok(Outcome {
        document: document(cfg, results, diagnostics),
        table,
        csv_header: header,
        csv_rows,
        status: Status::Success,
    })
}
