//! Admissibility of triples `(p, m, a)` and classification tables.

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::existence::{even_lattice_exists, Check, Condition, ExistenceVerdict, Genus, SignConvention, Tri, DEFAULT_CONVENTION};
use crate::expr::LatticeExpr;
use crate::fqf::FiniteQuadraticForm;
use crate::glue::{enumerate_glue_cases, q_l_of, q_s_of, rank_one_cases, split_exponent, CyclicCase, GlueTag};
use crate::golden::{self, GoldenTable, Marker};
use crate::lattice::{GramLattice, PrimitiveVector, Signature};
use rayon::prelude::*;
use serde::Serialize;
use std::ops::Range;

pub const SUPPORTED_PRIMES: [i64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

/// Label for rows at primes without bundled reference data.
pub const UNCORROBORATED: &str = "computed, externally uncorroborated";

/// Assumption recorded for cyclic gluing.
pub const SURJECTIVITY_ASSUMPTION: &str = "O(S) -> O(q_S) surjective";

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibleTriple {
    pub n: i64,
    pub p: i64,
    pub m: i64,
    pub a: i64,
    pub alpha: u32,
    pub beta: i64,
    pub admissible: Tri,
    /// Length of `A_S`.
    pub k: Option<usize>,
    pub s_genus: Option<Genus>,
    pub t_genus_options: Vec<Genus>,
    pub glue: Option<GlueTag>,
    pub glue_subcase: Option<CyclicCase>,
    pub s_verdict: Option<ExistenceVerdict>,
    pub t_verdict: Option<ExistenceVerdict>,
    pub reasons: Vec<String>,
    pub assumptions: Vec<String>,
    pub convention: SignConvention,
}

impl AdmissibleTriple {
    pub fn triple(&self) -> (i64, i64, i64) {
        (self.p, self.m, self.a)
    }

    pub fn is_admissible(&self) -> bool {
        self.admissible == Tri::Yes
    }

    /// Failed existence conditions of `S` and `T`.
    pub fn failed_conditions(&self) -> Vec<Condition> {
        self.s_verdict.iter().chain(&self.t_verdict).flat_map(|v| v.failed()).collect()
    }

    pub fn t_genus(&self) -> Option<&Genus> {
        self.t_genus_options.first()
    }

    fn screened(n: i64, p: i64, m: i64, a: i64, alpha: u32, beta: i64, reason: String) -> Self {
        AdmissibleTriple {
            n,
            p,
            m,
            a,
            alpha,
            beta,
            admissible: Tri::No,
            k: None,
            s_genus: None,
            t_genus_options: Vec::new(),
            glue: None,
            glue_subcase: None,
            s_verdict: None,
            t_verdict: None,
            reasons: vec![reason],
            assumptions: Vec::new(),
            convention: DEFAULT_CONVENTION,
        }
    }
}

fn check_scope(n: i64, p: i64) -> Result<(u32, i64)> {
    if p == 2 {
        return Err(Error::PrimeTwo);
    }
    if !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if p > 23 {
        return Err(Error::InvalidArgument(format!("p = {p} exceeds 23")));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    let (alpha, beta) = split_exponent(n, p);
    if alpha >= 2 {
        return Err(Error::AlphaScope { n, p, alpha });
    }
    Ok((alpha, beta))
}

fn tagged<'a>(prefix: &str, checks: &'a [Check]) -> impl Iterator<Item = String> + 'a {
    let prefix = prefix.to_string();
    checks
        .iter()
        .filter(|c| c.outcome != crate::existence::Outcome::Pass)
        .map(move |c| {
            let outcome = if c.outcome == crate::existence::Outcome::Fail { "failed" } else { "inconclusive" };
            format!("{prefix}: {} {outcome}", c.condition)
        })
}

/// Range screen: `m ≥ 1`, `(p−1)m ≤ 22`, `0 ≤ a ≤ min(m, 23 − (p−1)m)`.
pub fn in_range(p: i64, m: i64, a: i64) -> bool {
    m >= 1 && (p - 1) * m <= 22 && a >= 0 && a <= m.min(23 - (p - 1) * m)
}

pub fn is_admissible(n: i64, p: i64, m: i64, a: i64) -> Result<AdmissibleTriple> {
    let (alpha, beta) = check_scope(n, p)?;
    if !in_range(p, m, a) {
        return Ok(AdmissibleTriple::screened(n, p, m, a, alpha, beta, "range".into()));
    }
    if alpha == 0 && (m - a) % 2 != 0 {
        return Ok(AdmissibleTriple::screened(n, p, m, a, alpha, beta, "parity: m and a differ mod 2".into()));
    }
    let rank_s = ((p - 1) * m) as usize;
    if rank_s == 22 {
        return rank_one_triple(n, p, m, a, alpha, beta);
    }
    let s = q_s_of(p, m, a, alpha)?;
    let q_s = s.form.clone().unwrap_or_else(FiniteQuadraticForm::trivial);
    let s_genus = Genus::new(s.signature, q_s);
    let s_verdict = even_lattice_exists(&s_genus)?;
    let mut out = AdmissibleTriple::screened(n, p, m, a, alpha, beta, String::new());
    out.reasons.clear();
    out.k = Some(s.k);
    out.reasons.extend(tagged("S", &s_verdict.checks));
    out.admissible = s_verdict.exists;
    out.s_genus = Some(s_genus);
    out.s_verdict = Some(s_verdict);
    if out.admissible == Tri::No {
        return Ok(out);
    }
    let l = q_l_of(n, p)?;
    let case = enumerate_glue_cases(&s, &l)?.into_iter().find(|c| c.a == a);
    let Some(case) = case else {
        out.admissible = Tri::No;
        out.reasons.push("glue: no element of A_S matches the generator of A_L".into());
        return Ok(out);
    };
    if !case.computations_agree()? {
        return Err(Error::Data(format!("glue computations disagree for ({p}, {m}, {a}) at n = {n}")));
    }
    let t_genus = Genus::new(Signature::new(1, 22 - rank_s), case.q_t_target.clone());
    let t_verdict = even_lattice_exists(&t_genus)?;
    out.reasons.extend(tagged("T", &t_verdict.checks));
    out.admissible = out.admissible.and(t_verdict.exists);
    if case.tag == GlueTag::CyclicGlue {
        out.assumptions.push(SURJECTIVITY_ASSUMPTION.into());
    }
    out.glue = Some(case.tag);
    out.glue_subcase = case.subcase;
    out.t_genus_options.push(t_genus);
    out.t_verdict = Some(t_verdict);
    Ok(out)
}

fn rank_one_triple(n: i64, p: i64, m: i64, a: i64, alpha: u32, beta: i64) -> Result<AdmissibleTriple> {
    let cases = rank_one_cases(n, p)?;
    let mut out = AdmissibleTriple::screened(n, p, m, a, alpha, beta, String::new());
    out.reasons.clear();
    match cases.into_iter().find(|c| c.m == m && c.a == a) {
        Some(c) => {
            out.admissible = Tri::Yes;
            out.k = Some(c.s.discriminant_form()?.form.length());
            out.s_genus = Some(Genus::of_lattice(&c.s)?);
            out.t_genus_options.push(Genus::of_lattice(&c.t)?);
            out.glue = Some(if alpha == 0 { GlueTag::TrivialGlue } else { GlueTag::CyclicGlue });
            out.reasons.push(format!("rank-one: T = <{}>", c.t_square));
        }
        None => {
            out.admissible = Tri::No;
            out.reasons.push("rank-one: criterion not met".into());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    #[serde(flatten)]
    pub triple: AdmissibleTriple,
    pub s_expr: Option<String>,
    pub t_expr: Option<String>,
    pub marker: Option<Marker>,
    pub label: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationTable {
    pub n: i64,
    pub rows: Vec<TableRow>,
    /// Triples whose admissibility could not be decided.
    pub undecided: Vec<(i64, i64, i64)>,
    /// Primes skipped because `p² | 2(n−1)`.
    pub skipped_primes: Vec<i64>,
}

impl ClassificationTable {
    pub fn triples(&self) -> Vec<(i64, i64, i64)> {
        self.rows.iter().map(|r| r.triple.triple()).collect()
    }
}

/// All triples in range for `p`.
pub fn candidate_triples(p: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for m in 1..=22 / (p - 1) {
        for a in 0..=m.min(23 - (p - 1) * m) {
            out.push((m, a));
        }
    }
    out
}

pub fn enumerate(n: i64, p: Option<i64>) -> Result<ClassificationTable> {
    let primes: Vec<i64> = match p {
        Some(p) => {
            check_scope(n, p)?;
            vec![p]
        }
        None => SUPPORTED_PRIMES.to_vec(),
    };
    let mut skipped = Vec::new();
    let mut jobs = Vec::new();
    for &q in &primes {
        match check_scope(n, q) {
            Ok(_) => jobs.extend(candidate_triples(q).into_iter().map(|(m, a)| (q, m, a))),
            Err(Error::AlphaScope { .. }) => skipped.push(q),
            Err(e) => return Err(e),
        }
    }
    let results: Vec<AdmissibleTriple> =
        jobs.par_iter().map(|&(q, m, a)| is_admissible(n, q, m, a)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut undecided = Vec::new();
    for t in results {
        match t.admissible {
            Tri::Yes => {
                let reference = golden::bundled(n, t.p);
                let g = reference.as_ref().and_then(|g| g.row(t.m, t.a));
                rows.push(TableRow {
                    s_expr: g.map(|r| r.s.clone()),
                    t_expr: g.map(|r| r.t.clone()),
                    marker: g.map(|r| r.marker),
                    label: (5..=19).contains(&t.p).then_some(UNCORROBORATED),
                    triple: t,
                });
            }
            Tri::Unknown => undecided.push(t.triple()),
            Tri::No => {}
        }
    }
    rows.sort_by_key(|r| (-r.triple.p, -r.triple.m, r.triple.a));
    undecided.sort_by_key(|&(p, m, a)| (-p, -m, a));
    Ok(ClassificationTable { n, rows, undecided, skipped_primes: skipped })
}

/// Whether the lattice of `expr` has genus `g`.
pub fn verify_representative(expr: &LatticeExpr, g: &Genus) -> Result<bool> {
    let l = expr.evaluate()?;
    if l.rank() != g.rank() || l.determinant() == 0.into() {
        return Ok(false);
    }
    Genus::of_lattice(&l)?.matches(g)
}

/// Comparison of a computed table with reference data.
#[derive(Debug, Clone, Serialize)]
pub struct GoldenDiff {
    pub missing: Vec<(i64, i64, i64)>,
    pub extra: Vec<(i64, i64, i64)>,
    pub representative_failures: Vec<String>,
}

impl GoldenDiff {
    pub fn is_clean(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.representative_failures.is_empty()
    }
}

pub fn compare_golden(table: &ClassificationTable, golden: &GoldenTable) -> Result<GoldenDiff> {
    let computed: Vec<_> = table.rows.iter().filter(|r| r.triple.p == golden.p).map(|r| r.triple.triple()).collect();
    let reference: Vec<_> = golden.rows.iter().map(|r| r.triple()).collect();
    let missing = reference.iter().filter(|t| !computed.contains(t)).copied().collect();
    let extra = computed.iter().filter(|t| !reference.contains(t)).copied().collect();
    let mut failures = Vec::new();
    for row in table.rows.iter().filter(|r| r.triple.p == golden.p) {
        let Some(g) = golden.row(row.triple.m, row.triple.a) else { continue };
        let (p, m, a) = row.triple.triple();
        let s_genus = row.triple.s_genus.as_ref().expect("admissible rows carry S");
        if !verify_representative(&crate::expr::parse(&g.s)?, s_genus)? {
            failures.push(format!("({p},{m},{a}) S = {} does not have the computed genus {s_genus}", g.s));
        }
        let t_expr = crate::expr::parse(&g.t)?;
        let mut ok = false;
        for t in &row.triple.t_genus_options {
            ok |= verify_representative(&t_expr, t)?;
        }
        if !ok {
            failures.push(format!("({p},{m},{a}) T = {} does not have a computed genus", g.t));
        }
    }
    Ok(GoldenDiff { missing, extra, representative_failures: failures })
}

/// Whether `T ≅ T_K3 ⊕ ⟨−2(n−1)⟩` and `S ≅ S_K3` at the level of genera.
pub fn natural_split_check(t_genus: &Genus, s_genus: &Genus, n: i64, k3_pair: (&Genus, &Genus)) -> Result<bool> {
    let delta = Genus::of_lattice(&GramLattice::new(vec![vec![-2 * (n - 1)]])?)?;
    let (t_k3, s_k3) = k3_pair;
    if t_k3.rank() + 1 != t_genus.rank() || s_k3.rank() != s_genus.rank() {
        return Ok(false);
    }
    Ok(t_k3.orthogonal_sum(&delta).matches(t_genus)? && s_k3.matches(s_genus)?)
}

/// Genera of the `(T_K3, S_K3)` pairs of a K3 data table.
pub fn k3_pairs(data: &GoldenTable) -> Result<Vec<(Genus, Genus)>> {
    data.rows
        .iter()
        .map(|r| {
            let t = crate::expr::parse(&r.t)?.evaluate()?;
            let s = crate::expr::parse(&r.s)?.evaluate()?;
            Ok((Genus::of_lattice(&t)?, Genus::of_lattice(&s)?))
        })
        .collect()
}

/// Whether some pair of the K3 data splits off the row naturally.
pub fn has_natural_split(row: &AdmissibleTriple, pairs: &[(Genus, Genus)]) -> Result<bool> {
    let (Some(s), Some(t)) = (&row.s_genus, row.t_genus()) else { return Ok(false) };
    for (tk, sk) in pairs {
        if natural_split_check(t, s, row.n, (tk, sk))? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A primitive vector of `ambient`, supported on `coords` with entries in
/// `[−bound, bound]`, of the given square and whose orthogonal complement has
/// genus `target`.
pub fn find_embedding_vector(
    ambient: &GramLattice,
    coords: Range<usize>,
    square: i64,
    target: &Genus,
    bound: i64,
) -> Result<Option<PrimitiveVector>> {
    if coords.end > ambient.rank() || coords.is_empty() {
        return Err(Error::InvalidArgument(format!("coordinate range {coords:?} outside rank {}", ambient.rank())));
    }
    let summand = ambient.sublattice(
        &coords
            .clone()
            .map(|i| (0..ambient.rank()).map(|j| i64::from(i == j)).collect())
            .collect::<Vec<_>>(),
    )?;
    let det = ambient.determinant();
    let target_det = target.form.order();
    for v in summand.primitive_vectors(square, bound) {
        let mut full = vec![0i64; ambient.rank()];
        full[coords.clone()].copy_from_slice(v.coords());
        // |det v^⊥| = v² · |det| / div(v)², with div(v) the gcd of v·ambient.
        let div = (0..ambient.rank())
            .map(|j| ambient.inner(&full, &(0..ambient.rank()).map(|i| i64::from(i == j)).collect::<Vec<_>>()))
            .fold(0i128, |g, x| num_integer::Integer::gcd(&g, &x));
        let expected = num_bigint::BigInt::from(square.abs() as i128) * num_traits::Signed::abs(&det) / num_bigint::BigInt::from(div * div);
        if expected != num_bigint::BigInt::from(target_det) {
            continue;
        }
        let v = PrimitiveVector::new(full)?;
        let complement = ambient.orthogonal_complement(&v)?;
        if Genus::of_lattice(&complement)?.matches(target)? {
            return Ok(Some(v));
        }
    }
    Ok(None)
}
