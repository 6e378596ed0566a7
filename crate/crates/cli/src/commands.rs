//! Subcommand implementations; each returns a populated report.

use crate::report::Report;
use k3n_core::classifier::{self, AdmissibleTriple, TableRow};
use k3n_core::existence::{even_lattice_exists, unique_in_genus, Genus};
use k3n_core::glue::{enumerate_glue_cases, q_l_of, q_s_of, split_exponent};
use k3n_core::golden::{self, GoldenTable};
use k3n_core::isometry::LatticeIsometry;
use k3n_core::{parse_lenient, Error, GramLattice};
use serde_json::{json, Value};
use std::ops::Range;
use std::path::Path;

/// A failure carrying its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotIsometry { .. } | Error::Data(_) | Error::Undecided => 1,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

pub type CliResult = std::result::Result<Report, CliError>;

fn genus_value(g: &Genus) -> Value {
    serde_json::to_value(g).expect("genera serialize")
}

fn opt_genus(g: Option<&Genus>) -> Value {
    g.map(genus_value).unwrap_or(Value::Null)
}

fn triple_value(t: &AdmissibleTriple) -> Value {
    json!({
        "p": t.p,
        "m": t.m,
        "a": t.a,
        "admissible": t.admissible,
        "alpha": t.alpha,
        "beta": t.beta,
        "k": t.k,
        "glue": t.glue.map(|g| g.to_string()),
        "glue_subcase": t.glue_subcase.map(|c| c.to_string()),
        "s_genus": opt_genus(t.s_genus.as_ref()),
        "t_genus": opt_genus(t.t_genus()),
        "failed": t.failed_conditions().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "reasons": t.reasons,
        "assumptions": t.assumptions,
        "convention": t.convention,
    })
}

fn table_row_value(row: &TableRow, natural_split: Option<bool>) -> Value {
    let mut v = triple_value(&row.triple);
    let m = v.as_object_mut().expect("rows are objects");
    m.insert("s_expr".into(), json!(row.s_expr));
    m.insert("t_expr".into(), json!(row.t_expr));
    m.insert("marker".into(), json!(row.marker.map(|k| k.as_str())));
    m.insert("label".into(), json!(row.label));
    m.insert("natural_split".into(), json!(natural_split));
    v
}

pub fn read_table(path: &Path) -> std::result::Result<GoldenTable, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    GoldenTable::from_json(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

pub fn classify(n: i64, p: Option<i64>, check_golden: bool, golden_file: Option<&Path>, k3_data: Option<&Path>) -> CliResult {
    let mut report = Report::new("classify", &["p", "m", "a", "glue", "glue_subcase", "s_expr", "t_expr", "marker", "label"]);
    if n < 2 {
        return Err(CliError::usage(format!("n must be at least 2, got {n}")));
    }
    let reference = if let Some(path) = golden_file {
        let table = read_table(path)?;
        if table.n != n || p.is_some_and(|q| q != table.p) {
            return Err(CliError::usage(format!("{} is a table for n = {}, p = {}", path.display(), table.n, table.p)));
        }
        Some(table)
    } else if check_golden {
        let q = p.unwrap_or(3);
        Some(golden::bundled(n, q).ok_or_else(|| CliError::usage(format!("no bundled reference table for n = {n}, p = {q}")))?)
    } else {
        None
    };
    let pairs = match k3_data {
        Some(path) => Some(classifier::k3_pairs(&read_table(path)?)?),
        None => None,
    };
    let table = classifier::enumerate(n, p)?;
    for row in &table.rows {
        let split = match &pairs {
            Some(pairs) => Some(classifier::has_natural_split(&row.triple, pairs)?),
            None => None,
        };
        let mut v = table_row_value(row, split);
        if row.s_expr.is_none() {
            let m = v.as_object_mut().expect("rows are objects");
            m.insert("s_expr".into(), json!(row.triple.s_genus.as_ref().map(|g| g.to_string())));
            m.insert("t_expr".into(), json!(row.triple.t_genus().map(|g| g.to_string())));
        }
        report.rows.push(v);
    }
    report.summary.insert("n".into(), json!(n));
    report.summary.insert("p".into(), json!(p));
    report.summary.insert("rows".into(), json!(table.rows.len()));
    report.summary.insert("undecided".into(), json!(table.undecided));
    report.summary.insert("skipped_primes".into(), json!(table.skipped_primes));
    if let Some(split) = &pairs {
        let count = report.rows.iter().filter(|r| r["natural_split"] == json!(true)).count();
        report.summary.insert("k3_pairs".into(), json!(split.len()));
        report.summary.insert("natural_split_rows".into(), json!(count));
    }
    if let Some(reference) = reference {
        let diff = classifier::compare_golden(&table, &reference)?;
        report.summary.insert(
            "golden".into(),
            json!({
                "n": reference.n,
                "p": reference.p,
                "reference_rows": reference.rows.len(),
                "missing": diff.missing,
                "extra": diff.extra,
                "representative_failures": diff.representative_failures,
                "clean": diff.is_clean(),
            }),
        );
        for t in &diff.missing {
            report.fail(format!("missing reference row {t:?}"));
        }
        for t in &diff.extra {
            report.fail(format!("row {t:?} not in the reference table"));
        }
        for f in &diff.representative_failures {
            report.fail(f.clone());
        }
    }
    Ok(report)
}

pub fn triple(n: i64, p: i64, m: i64, a: i64) -> CliResult {
    let mut report = Report::new("triple", &["p", "m", "a", "admissible", "glue", "failed", "reasons"]);
    let t = classifier::is_admissible(n, p, m, a)?;
    report.rows.push(triple_value(&t));
    report.summary.insert("n".into(), json!(n));
    Ok(report)
}

/// A matrix literal, a lattice expression, or a file holding either.
fn read_input(arg: &str) -> std::result::Result<String, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_matrix(text: &str) -> std::result::Result<Vec<Vec<i64>>, CliError> {
    serde_json::from_str(text.trim()).map_err(|e| CliError::usage(format!("expected an integer matrix such as [[0,1],[1,0]]: {e}")))
}

pub fn lattice_arg(arg: &str) -> std::result::Result<GramLattice, CliError> {
    let text = read_input(arg)?;
    if text.trim_start().starts_with('[') {
        Ok(GramLattice::new(parse_matrix(&text)?)?)
    } else {
        Ok(parse_lenient(text.trim())?.evaluate()?)
    }
}

pub fn genus(expr: &str) -> CliResult {
    let mut report = Report::new(
        "genus",
        &["canonical", "rank", "signature", "determinant", "elementary_divisors", "discriminant_form", "milgram_signature"],
    );
    let text = read_input(expr)?;
    let (canonical, lattice) = if text.trim_start().starts_with('[') {
        (Value::Null, GramLattice::new(parse_matrix(&text)?)?)
    } else {
        let e = parse_lenient(text.trim())?;
        (json!(e.to_string()), e.evaluate()?)
    };
    let signature = lattice.signature()?;
    let divisors: Vec<i64> = lattice
        .discriminant_group()?
        .iter()
        .map(|d| i64::try_from(d).map_err(|_| Error::Overflow))
        .collect::<Result<_, _>>()?;
    let det = i64::try_from(&lattice.determinant()).map_err(|_| Error::Overflow)?;
    let g = Genus::of_lattice(&lattice)?;
    let milgram = g.form.milgram_signature()?;
    let verdict = even_lattice_exists(&g)?;
    report.rows.push(json!({
        "input": text.trim(),
        "canonical": canonical,
        "rank": lattice.rank(),
        "signature": signature,
        "determinant": det,
        "unimodular": divisors.is_empty(),
        "elementary_divisors": divisors,
        "discriminant_form": g.form.to_string(),
        "milgram_signature": milgram,
        "index_mod_8": signature.index().rem_euclid(8),
        "exists": verdict.exists,
        "unique_in_genus": unique_in_genus(&g),
    }));
    if milgram != signature.index().rem_euclid(8) {
        report.fail("Milgram signature differs from the signature index mod 8");
    }
    Ok(report)
}

pub fn glue(n: i64, p: i64, m: i64, a: i64) -> CliResult {
    let mut report = Report::new("glue", &["tag", "subcase", "a", "requested", "x_order", "q_t_target", "q_t_quotient", "agree"]);
    let (alpha, beta) = split_exponent(n, p);
    let l = q_l_of(n, p)?;
    let s = q_s_of(p, m, a, alpha)?;
    let cases = enumerate_glue_cases(&s, &l)?;
    for case in &cases {
        let agree = case.computations_agree()?;
        let t_genus = Genus::new(case.t_signature, case.q_t_target.clone());
        report.rows.push(json!({
            "tag": case.tag.to_string(),
            "subcase": case.subcase.map(|c| c.to_string()),
            "a": case.a,
            "requested": case.a == a,
            "x_order": case.x_order,
            "x": case.x,
            "q_t_target": case.q_t_target.to_string(),
            "q_t_quotient": case.q_t_quotient.to_string(),
            "agree": agree,
            "t_signature": case.t_signature,
            "t_exists": even_lattice_exists(&t_genus)?.exists,
        }));
        if !agree {
            report.fail(format!("{} case: closed form {} differs from quotient {}", case.tag, case.q_t_target, case.q_t_quotient));
        }
    }
    let s_form = s.form.as_ref().map(|f| f.to_string());
    report.summary.insert("n".into(), json!(n));
    report.summary.insert("triple".into(), json!([p, m, a]));
    report.summary.insert("alpha".into(), json!(alpha));
    report.summary.insert("beta".into(), json!(beta));
    report.summary.insert("k".into(), json!(s.k));
    report.summary.insert("q_s_pattern".into(), json!(s.pattern));
    report.summary.insert("q_s".into(), json!(s_form));
    report.summary.insert("q_l".into(), json!(l.cyclic.to_string()));
    report.summary.insert("cases".into(), json!(cases.len()));
    Ok(report)
}

fn genus_or_trivial(l: &GramLattice) -> std::result::Result<Value, CliError> {
    if l.rank() == 0 {
        return Ok(json!({"signature": {"plus": 0, "minus": 0}, "form": "0"}));
    }
    Ok(genus_value(&Genus::of_lattice(l)?))
}

pub fn verify_isometry(lattice: &str, matrix: &str) -> CliResult {
    let mut report = Report::new(
        "verify-isometry",
        &["order", "invariant_rank", "coinvariant_rank", "discriminant_action", "spinor_norm"],
    );
    let l = lattice_arg(lattice)?;
    let text = read_input(matrix)?;
    let m = match text.trim() {
        "rho0" | "ρ₀" | "ρ0" => vec![vec![0, -1], vec![1, -1]],
        "id" => (0..l.rank()).map(|i| (0..l.rank()).map(|j| i64::from(i == j)).collect()).collect(),
        "-id" => (0..l.rank()).map(|i| (0..l.rank()).map(|j| -i64::from(i == j)).collect()).collect(),
        t => parse_matrix(t)?,
    };
    let f = LatticeIsometry::new(l, m)?;
    let invariant = f.invariant_lattice()?;
    let coinvariant = f.coinvariant_lattice()?;
    let action = f.discriminant_action()?;
    let reflections = f.reflection_factorization()?;
    report.rows.push(json!({
        "rank": f.rank(),
        "order": f.order_of(60),
        "order_cap": 60,
        "invariant_rank": invariant.rank(),
        "invariant_genus": genus_or_trivial(&invariant)?,
        "coinvariant_rank": coinvariant.rank(),
        "coinvariant_genus": genus_or_trivial(&coinvariant)?,
        "discriminant_orders": action.orders,
        "discriminant_images": action.images,
        "discriminant_action": action.kind,
        "spinor_norm": f.spinor_norm()?,
        "reflections": reflections.len(),
    }));
    Ok(report)
}

pub fn parse_range(s: &str) -> std::result::Result<Range<usize>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected START..END, got {s}"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if a >= b {
        return Err(format!("empty range {s}"));
    }
    Ok(a..b)
}

pub fn induced(ambient: &str, square: i64, target: &str, coords: Option<Range<usize>>, bound: i64) -> CliResult {
    let mut report = Report::new("induced", &["found", "vector", "complement_genus"]);
    let l = lattice_arg(ambient)?;
    let t = Genus::of_lattice(&lattice_arg(target)?)?;
    let coords = coords.unwrap_or(0..l.rank());
    let found = classifier::find_embedding_vector(&l, coords.clone(), square, &t, bound)?;
    let (vector, complement) = match &found {
        Some(v) => (json!(v.coords()), genus_value(&Genus::of_lattice(&l.orthogonal_complement(v)?)?)),
        None => (Value::Null, Value::Null),
    };
    report.rows.push(json!({
        "found": found.is_some(),
        "vector": vector,
        "square": square,
        "complement_genus": complement,
        "target_genus": genus_value(&t),
        "coords": [coords.start, coords.end],
        "bound": bound,
    }));
    if found.is_none() {
        report.fail(format!("no primitive vector of square {square} with the target complement in the box of radius {bound}"));
    }
    Ok(report)
}
