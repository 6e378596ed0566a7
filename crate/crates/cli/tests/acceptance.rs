//! Acceptance criteria: one PASS/FAIL line each, non-zero exit on any failure.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use k3n_core::classifier::{find_embedding_vector, is_admissible, verify_representative};
use k3n_core::existence::{unique_in_genus, Condition, Genus, Tri};
use k3n_core::glue::{enumerate_glue_cases, q_l_of, q_s_of, rank_one_cases, GlueTag};
use k3n_core::golden::{self, Marker};
use k3n_core::isometry::{coxeter_element, direct_sum_isometry, ActionKind, LatticeIsometry};
use k3n_core::{parse, FiniteQuadraticForm, PrimitiveVector, Subgroup};
use serde_json::Value;
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

const N3_TABLE_LIMIT: Duration = Duration::from_secs(10);
const N4_TABLE_LIMIT: Duration = Duration::from_secs(20);
const MILGRAM_LIMIT: Duration = Duration::from_secs(5);
const INDUCED_LIMIT: Duration = Duration::from_secs(30);
const INDUCED_BOUND: i64 = 5;
const MILGRAM_RANDOM_SUMS: usize = 60;
const ISOMETRY_BLOCK_FIXTURES: usize = 20;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn k3n_json(args: &[&str]) -> Result<(i32, Value, Duration), String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_k3n"))
        .args(args)
        .args(["--format", "json"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let report: Value = serde_json::from_slice(&out.stdout).map_err(|e| format!("invalid json: {e}"))?;
    Ok((out.status.code().unwrap_or(-1), report, elapsed))
}

fn genus(expr: &str) -> Genus {
    Genus::of_lattice(&support::lattice(expr)).unwrap()
}

fn row_triples(report: &Value) -> BTreeSet<(i64, i64, i64)> {
    report["rows"]
        .as_array()
        .map(|rows| {
            rows.iter()
                .map(|r| (r["p"].as_i64().unwrap(), r["m"].as_i64().unwrap(), r["a"].as_i64().unwrap()))
                .collect()
        })
        .unwrap_or_default()
}

fn table_reproduction(n: i64, expected_rows: usize, limit: Duration) -> Check {
    let (code, report, elapsed) = k3n_json(&["classify", "--n", &n.to_string(), "--p", "3", "--golden"])?;
    ensure(code == 0, || format!("exit status {code}: {:?}", report["errors"]))?;
    ensure(report["summary"]["golden"]["clean"] == true, || format!("diff {}", report["summary"]["golden"]))?;
    let reference = golden::bundled(n, 3).ok_or("no bundled table")?;
    let expected: BTreeSet<_> = reference.rows.iter().map(|r| r.triple()).collect();
    let computed = row_triples(&report);
    ensure(computed == expected && computed.len() == expected_rows, || {
        format!("{} computed rows, {} reference rows", computed.len(), expected.len())
    })?;
    for r in &reference.rows {
        let t = is_admissible(n, 3, r.m, r.a).map_err(|e| e.to_string())?;
        let s_ok = verify_representative(&parse(&r.s).unwrap(), t.s_genus.as_ref().unwrap()).unwrap();
        let t_expr = parse(&r.t).unwrap();
        let t_ok = t.t_genus_options.iter().any(|g| verify_representative(&t_expr, g).unwrap());
        ensure(s_ok && t_ok, || format!("representatives of {:?} do not match", r.triple()))?;
    }
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))?;
    Ok(format!("{} rows, representatives verified, {:.2?}", computed.len(), elapsed))
}

fn criterion_1() -> Check {
    table_reproduction(3, 26, N3_TABLE_LIMIT)
}

fn criterion_2() -> Check {
    let summary = table_reproduction(4, 46, N4_TABLE_LIMIT)?;
    let cyclic = is_admissible(4, 3, 10, 1).unwrap();
    let trivial = is_admissible(4, 3, 10, 2).unwrap();
    ensure(cyclic.glue == Some(GlueTag::CyclicGlue) && trivial.glue == Some(GlueTag::TrivialGlue), || {
        format!("glue of (3,10,1) / (3,10,2): {:?} / {:?}", cyclic.glue, trivial.glue)
    })?;
    ensure(cyclic.s_genus.as_ref().unwrap().matches(trivial.s_genus.as_ref().unwrap()).unwrap(), || {
        "(3,10,1) and (3,10,2) do not share S".into()
    })?;
    let star = is_admissible(4, 3, 11, 0).unwrap();
    let row = golden::bundled(4, 3).unwrap().row(11, 0).cloned().ok_or("(3,11,0) missing from the table")?;
    ensure(row.marker == Marker::Star, || format!("(3,11,0) marker {:?}", row.marker))?;
    ensure(star.t_genus().unwrap().matches(&genus("<2>")).unwrap(), || "(3,11,0) has T not in the genus of <2>".into())?;
    Ok(format!("{summary}; (3,10,1) cyclic / (3,10,2) trivial share S; (3,11,0) T = <2>"))
}

fn criterion_3() -> Check {
    for n in 2..=4 {
        ensure(is_admissible(n, 23, 1, 1).unwrap().admissible == Tri::Yes, || format!("(23,1,1) not admissible for n = {n}"))?;
    }
    for n in 2..24 {
        ensure(is_admissible(n, 23, 1, 0).unwrap().admissible == Tri::No, || format!("(23,1,0) admissible for n = {n}"))?;
    }
    ensure(is_admissible(24, 23, 1, 0).unwrap().admissible == Tri::Yes, || "(23,1,0) not admissible for n = 24".into())?;
    Ok("(23,1,1) for n = 2..4; (23,1,0) first at n = 24".into())
}

fn criterion_4() -> Check {
    let t = is_admissible(3, 5, 5, 3).unwrap();
    ensure(t.admissible == Tri::No, || "(5,5,3) admissible for n = 3".into())?;
    ensure(t.failed_conditions() == vec![Condition::PAdicBoundary(5)], || format!("failed {:?}", t.failed_conditions()))?;
    let check = t
        .t_verdict
        .as_ref()
        .and_then(|v| v.checks.iter().find(|c| c.condition == Condition::PAdicBoundary(5)))
        .ok_or("no 5-adic check")?;
    let ratio: i64 = check
        .detail
        .split("|A|/discr(K) = ")
        .nth(1)
        .and_then(|r| r.split(' ').next())
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| format!("unreadable detail: {}", check.detail))?;
    let reference = 4 * 5i64.pow(3) * 8i64.pow(3) / 5i64.pow(3);
    ensure(reference == 2048, || format!("reference ratio {reference}"))?;
    ensure(euler_symbol(reference, 5) == -1 && euler_symbol(ratio * reference, 5) == 1, || {
        format!("ratio {ratio} not in the square class of 2^11 mod 5")
    })?;
    for n in [2, 3] {
        ensure(is_admissible(n, 13, 1, 0).unwrap().admissible == Tri::No, || format!("(13,1,0) admissible for n = {n}"))?;
    }
    Ok(format!("(5,5,3) fails p-adic-boundary(5), ratio {ratio} ~ 2^11 non-square mod 5; (13,1,0) excluded for n = 2, 3"))
}

fn euler_symbol(x: i64, p: i64) -> i64 {
    let r = (0..(p - 1) / 2).fold(1, |acc, _| acc * x.rem_euclid(p) % p);
    if r == p - 1 {
        -1
    } else {
        r
    }
}

fn criterion_5() -> Check {
    let s3 = genus("2*U + 2*E8 + A2");
    let s23 = genus("2*U + 2*E8 + K23");
    let cases = [(2, 3, 11, 1, 6, &s3), (4, 3, 11, 0, 2, &s3), (2, 23, 1, 1, 46, &s23), (24, 23, 1, 0, 2, &s23)];
    for (n, p, m, a, t_square, s) in cases {
        let found = rank_one_cases(n, p).unwrap();
        ensure(found.len() == 1, || format!("n = {n}, p = {p}: {} cases", found.len()))?;
        let c = &found[0];
        ensure((c.m, c.a, c.t_square) == (m, a, t_square), || format!("n = {n}, p = {p}: ({}, {}, <{}>)", c.m, c.a, c.t_square))?;
        ensure(Genus::of_lattice(&c.s).unwrap().matches(s).unwrap(), || format!("n = {n}, p = {p}: wrong S"))?;
    }
    ensure(rank_one_cases(3, 3).unwrap().is_empty(), || "p = 3 has a rank-one case at n = 3".into())?;
    Ok("four rank-one rows; none for p = 3 at n = 3".into())
}

fn criterion_6() -> Check {
    let reference = golden::bundled(4, 3).unwrap();
    let l = q_l_of(4, 3).unwrap();
    let mut compared = 0;
    for r in &reference.rows {
        let s = match q_s_of(3, r.m, r.a, l.alpha) {
            Ok(s) => s,
            Err(e) => return Err(format!("{:?}: {e}", r.triple())),
        };
        let cases = enumerate_glue_cases(&s, &l).map_err(|e| e.to_string())?;
        ensure(cases.iter().any(|c| c.a == r.a), || format!("{:?}: no case realizes a", r.triple()))?;
        for c in &cases {
            ensure(c.computations_agree().unwrap(), || format!("{:?}: {} closed form differs", r.triple(), c.tag))?;
            if c.tag == GlueTag::CyclicGlue {
                compared += 1;
            }
        }
    }
    let q6 = genus("<6>").form.negate();
    let t_hat = genus("2*U + 2*A2").form;
    let ambient = q6.orthogonal_sum(&t_hat);
    let quotient = ambient.isotropic_quotient(&Subgroup::new(vec![vec![2, 1, 1]])).map_err(|e| e.to_string())?;
    let target: FiniteQuadraticForm = "6:7/6".parse().unwrap();
    ensure(quotient.form.is_isometric(&target).unwrap(), || format!("quotient {}", quotient.form))?;
    Ok(format!("{compared} cyclic cases agree on {} rows; quotient Z/6(7/6)", reference.rows.len()))
}

fn criterion_7() -> Check {
    for (a, b) in [("U + E6 + A2", "U(3) + E8"), ("U + 3*A2", "U(3) + E6"), ("U(3) + 3*A2", "U + E6dual3")] {
        let (ga, gb) = (genus(a), genus(b));
        ensure(ga.matches(&gb).unwrap(), || format!("{a} and {b} differ"))?;
        ensure(unique_in_genus(&ga) == Tri::Yes && unique_in_genus(&gb) == Tri::Yes, || format!("{a} not unique in genus"))?;
    }
    Ok("three identities, unique in genus".into())
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let mut all: Vec<(String, _)> = support::CATALOGUE.iter().map(|e| (e.to_string(), support::lattice(e))).collect();
    all.extend(support::random_sums(0x9e3779b97f4a7c15, MILGRAM_RANDOM_SUMS));
    for (expr, l) in &all {
        let index = l.signature().unwrap().index().rem_euclid(8);
        let milgram = l.discriminant_form().unwrap().form.milgram_signature().unwrap();
        ensure(milgram == index, || format!("{expr}: Milgram {milgram}, index {index}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < MILGRAM_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{} lattices, {:.2?}", all.len(), elapsed))
}

fn criterion_9() -> Check {
    let lattices = support::small_lattices(0xd1b54a32d192ed03);
    for l in &lattices {
        let form = l.discriminant_form().unwrap().form;
        ensure(support::form_profile(&form) == support::coset_profile(l), || format!("{l}: form differs from cosets"))?;
    }
    Ok(format!("{} lattices", lattices.len()))
}

fn criterion_10() -> Check {
    let rho = LatticeIsometry::rho_zero();
    ensure(rho.order_of(60) == Some(3), || format!("order {:?}", rho.order_of(60)))?;
    ensure(rho.invariant_lattice().unwrap().rank() == 0, || "nonzero invariant lattice".into())?;
    ensure(rho.discriminant_action().unwrap().kind == ActionKind::Identity, || "discriminant action is not the identity".into())?;
    ensure(rho.spinor_norm().unwrap() == 1, || "spinor norm -1".into())?;
    let u = support::lattice("U");
    let h5 = support::lattice("H5");
    let pool = [
        LatticeIsometry::identity(u.clone()),
        LatticeIsometry::minus_identity(u.clone()),
        LatticeIsometry::reflection(u.clone(), &[1, 1]).unwrap(),
        LatticeIsometry::reflection(u, &[1, -1]).unwrap(),
        rho.clone(),
        LatticeIsometry::reflection(h5.clone(), &[1, 0]).unwrap(),
        LatticeIsometry::minus_identity(h5),
        coxeter_element(4).unwrap(),
        LatticeIsometry::reflection(support::lattice("<6>"), &[1]).unwrap(),
    ];
    let mut rng = support::XorShift(0x2545f4914f6cdd1d);
    let mut negative = 0;
    for _ in 0..ISOMETRY_BLOCK_FIXTURES {
        let f = &pool[rng.below(pool.len())];
        let g = &pool[rng.below(pool.len())];
        let h = direct_sum_isometry(f, g);
        let (sf, sg, sh) = (f.spinor_norm().unwrap(), g.spinor_norm().unwrap(), h.spinor_norm().unwrap());
        ensure(sh == sf * sg, || format!("sn(f + g) = {sh}, sn(f) sn(g) = {}", sf * sg))?;
        negative += usize::from(sh == -1);
    }
    Ok(format!("rho_0 checks hold; multiplicative on {ISOMETRY_BLOCK_FIXTURES} fixtures ({negative} with norm -1)"))
}

fn criterion_11() -> Check {
    let start = Instant::now();
    let searches = [
        ("2*U + 2*A2", None, "<2> + E6"),
        ("U + U(3) + 2*E8", Some("2..4"), "U + 2*E8 + <-6>"),
    ];
    let mut found = Vec::new();
    for (ambient, coords, target) in searches {
        let bound = INDUCED_BOUND.to_string();
        let mut args = vec!["induced", "--ambient", ambient, "--square", "6", "--target", target, "--bound", &bound];
        if let Some(c) = coords {
            args.extend(["--coords", c]);
        }
        let (code, report, _) = k3n_json(&args)?;
        ensure(code == 0, || format!("{ambient}: exit status {code}"))?;
        let v: Vec<i64> = serde_json::from_value(report["rows"][0]["vector"].clone()).map_err(|e| e.to_string())?;
        let l = support::lattice(ambient);
        ensure(l.square(&v) == 6, || format!("{v:?} has square {}", l.square(&v)))?;
        let pv = PrimitiveVector::new(v.clone()).map_err(|e| e.to_string())?;
        let complement = Genus::of_lattice(&l.orthogonal_complement(&pv).unwrap()).unwrap();
        ensure(complement.matches(&genus(target)).unwrap(), || format!("complement of {v:?} is {complement}"))?;
        let range = coords.map(coord_range).unwrap_or(0..l.rank());
        let library = find_embedding_vector(&l, range, 6, &genus(target), INDUCED_BOUND).unwrap();
        ensure(library.is_some(), || format!("{ambient}: library search failed"))?;
        found.push(format!("{v:?}"));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < INDUCED_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("vectors {}, {:.2?}", found.join(" and "), elapsed))
}

fn coord_range(text: &str) -> std::ops::Range<usize> {
    let (a, b) = text.split_once("..").unwrap();
    a.parse().unwrap()..b.parse().unwrap()
}

fn main() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("table reproduction n=3", criterion_1),
        ("table reproduction n=4", criterion_2),
        ("p=23 verdicts", criterion_3),
        ("worked exclusions", criterion_4),
        ("rank-one criterion", criterion_5),
        ("glue cross-validation", criterion_6),
        ("genus identities", criterion_7),
        ("Milgram sweep", criterion_8),
        ("coset oracle equivalence", criterion_9),
        ("isometry lab", criterion_10),
        ("induced-embedding checks", criterion_11),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
