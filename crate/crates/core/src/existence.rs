//! Existence and uniqueness of even lattices in a genus.
//!
//! The existence test follows Nikulin's criterion: signature bounds, the
//! mod-8 signature condition and, for each prime `p` whose Sylow part has
//! length equal to the rank, a `p`-adic discriminant condition. The odd-`p`
//! condition is decided exactly from the normal form. The 2-adic condition is
//! decided for ranks at most two by explicit lattice search and reported as
//! unknown otherwise.

use crate::arith::{legendre, valuation};
use crate::error::{Error, Result};
use crate::fqf::{w_numerator, FiniteQuadraticForm};
use crate::lattice::{GramLattice, Signature};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::Serialize;
use std::fmt;

/// Signature together with a discriminant form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Genus {
    pub signature: Signature,
    pub form: FiniteQuadraticForm,
}

impl Genus {
    pub fn new(signature: Signature, form: FiniteQuadraticForm) -> Self {
        Genus { signature, form }
    }

    pub fn of_lattice(lattice: &GramLattice) -> Result<Genus> {
        Ok(Genus { signature: lattice.signature()?, form: lattice.discriminant_form()?.form })
    }

    pub fn rank(&self) -> usize {
        self.signature.rank()
    }

    pub fn orthogonal_sum(&self, other: &Genus) -> Genus {
        Genus { signature: self.signature + other.signature, form: self.form.orthogonal_sum(&other.form) }
    }

    /// Equality of genera: same signature and isometric forms.
    pub fn matches(&self, other: &Genus) -> Result<bool> {
        Ok(self.signature == other.signature && self.form.is_isometric(&other.form)?)
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.signature, self.form)
    }
}

/// Three-valued answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            _ => Tri::Unknown,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Condition tags of the existence certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    SignMod8,
    RankVsLength,
    PAdicBoundary(i64),
    SpecialCase,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::SignMod8 => f.write_str("sign-mod-8"),
            Condition::RankVsLength => f.write_str("rank-vs-length"),
            Condition::PAdicBoundary(p) => write!(f, "p-adic-boundary({p})"),
            Condition::SpecialCase => f.write_str("special-case"),
        }
    }
}

impl Serialize for Condition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub condition: Condition,
    pub outcome: Outcome,
    pub detail: String,
}

/// Sign factor multiplying `|A|` in the odd `p`-adic boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SignConvention {
    /// `(-1)^{t₋} |A| ≡ discr K`.
    Standard,
    /// `|A| ≡ discr K`.
    Unsigned,
}

impl SignConvention {
    fn factor(&self, signature: Signature) -> i64 {
        match self {
            SignConvention::Standard if signature.minus % 2 == 1 => -1,
            _ => 1,
        }
    }
}

/// The convention used by [`even_lattice_exists`].
pub const DEFAULT_CONVENTION: SignConvention = SignConvention::Standard;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExistenceVerdict {
    pub exists: Tri,
    pub checks: Vec<Check>,
    pub unique_in_genus: Tri,
    pub convention: SignConvention,
}

impl ExistenceVerdict {
    /// Tags of failed conditions.
    pub fn failed(&self) -> Vec<Condition> {
        self.checks.iter().filter(|c| c.outcome == Outcome::Fail).map(|c| c.condition).collect()
    }

    pub fn has_check(&self, condition: Condition) -> bool {
        self.checks.iter().any(|c| c.condition == condition)
    }
}

pub fn even_lattice_exists(g: &Genus) -> Result<ExistenceVerdict> {
    even_lattice_exists_with(g, DEFAULT_CONVENTION)
}

pub fn even_lattice_exists_with(g: &Genus, convention: SignConvention) -> Result<ExistenceVerdict> {
    if !g.form.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    let rank = g.rank();
    let mut checks = Vec::new();
    let mut exists = Tri::Yes;
    let mut record = |checks: &mut Vec<Check>, condition, outcome, detail: String| {
        exists = exists.and(match outcome {
            Outcome::Pass => Tri::Yes,
            Outcome::Fail => Tri::No,
            Outcome::Inconclusive => Tri::Unknown,
        });
        checks.push(Check { condition, outcome, detail });
    };

    let length = g.form.length();
    record(
        &mut checks,
        Condition::RankVsLength,
        if rank >= length { Outcome::Pass } else { Outcome::Fail },
        format!("rank {rank}, length {length}"),
    );
    let residue = g.form.milgram_signature()?;
    let index = g.signature.index().rem_euclid(8);
    record(
        &mut checks,
        Condition::SignMod8,
        if residue == index { Outcome::Pass } else { Outcome::Fail },
        format!("form signature {residue}, lattice signature {index} mod 8"),
    );
    let order = BigInt::from(g.form.order());
    for p in g.form.primes() {
        if g.form.p_length(p) != rank {
            continue;
        }
        if p != 2 {
            let (outcome, detail) = odd_boundary(g, p, &order, convention)?;
            record(&mut checks, Condition::PAdicBoundary(p), outcome, detail);
        } else if has_theta_summand(&g.form.p_part(2)) {
            record(
                &mut checks,
                Condition::PAdicBoundary(2),
                Outcome::Pass,
                "2-part has a summand of order 2 with odd value; condition void".into(),
            );
        } else if rank <= 1 || (rank == 2 && g.signature.is_definite()) {
            let found = small_rank_search(g)?;
            record(
                &mut checks,
                Condition::SpecialCase,
                if found.is_some() { Outcome::Pass } else { Outcome::Fail },
                match found {
                    Some(l) => format!("realized by {l}"),
                    None => format!("no even lattice of rank {rank} and determinant {} has this form", g.form.order()),
                },
            );
        } else {
            record(
                &mut checks,
                Condition::PAdicBoundary(2),
                Outcome::Inconclusive,
                "2-adic boundary condition not implemented".into(),
            );
        }
    }
    Ok(ExistenceVerdict { exists, checks, unique_in_genus: unique_in_genus(g), convention })
}

/// Odd `p` with `l(A_p) = rank`: `K = ⊕ ⟨p^α/xᵢ⟩` where `xᵢ/p^α` are the
/// normal-form block values, and the test is whether `±|A|/discr K` is a
/// square unit in `Z_p`.
fn odd_boundary(g: &Genus, p: i64, order: &BigInt, convention: SignConvention) -> Result<(Outcome, String)> {
    let blocks = g.form.odd_normal_form(p)?;
    let v = blocks.iter().map(|b| b.alpha).sum::<u32>();
    debug_assert_eq!(valuation(g.form.order(), p), v);
    let cofactor = order / BigInt::from(p).pow(v);
    let mut ratio = cofactor * convention.factor(g.signature);
    for b in &blocks {
        ratio *= w_numerator(p, b.epsilon);
    }
    let residue = ratio.mod_floor(&BigInt::from(p)).to_i64().unwrap();
    let symbol = legendre(residue, p)?;
    let k: Vec<String> = blocks
        .iter()
        .map(|b| format!("<{}/{}>", p.pow(b.alpha), w_numerator(p, b.epsilon)))
        .collect();
    let detail = format!("K = {}, |A|/discr(K) = {} has symbol {}", k.join(" + "), ratio, symbol);
    Ok((if symbol == 1 { Outcome::Pass } else { Outcome::Fail }, detail))
}

fn has_theta_summand(two_part: &FiniteQuadraticForm) -> bool {
    two_part.elements().any(|x| {
        let q = two_part.q(&x);
        two_part.element_order(&x) == 2 && *q.denom() == 2
    })
}

/// For rank at most two, an even lattice with the given signature and form,
/// found by exhaustive search over reduced Gram matrices.
fn small_rank_search(g: &Genus) -> Result<Option<GramLattice>> {
    let det = g.form.order();
    let sign = if g.signature.minus % 2 == 1 { -1 } else { 1 };
    let candidates: Vec<GramLattice> = match g.rank() {
        0 => vec![GramLattice::zero()],
        1 => GramLattice::new(vec![vec![sign * det]]).into_iter().collect(),
        2 => {
            let forms = reduced_binary_forms(det);
            if g.signature.minus == 2 {
                forms.iter().map(|l| l.negated()).collect()
            } else {
                forms
            }
        }
        _ => return Err(Error::InvalidArgument("small-rank search needs rank <= 2".into())),
    };
    for l in candidates {
        if l.signature()? == g.signature && l.discriminant_form()?.form.is_isometric(&g.form)? {
            return Ok(Some(l));
        }
    }
    Ok(None)
}

/// Reduced positive definite even binary forms `[[2a, b], [b, 2c]]` of
/// determinant `det`: `0 ≤ b ≤ a ≤ c`. Every positive definite even binary
/// lattice is isometric to exactly one of them.
pub fn reduced_binary_forms(det: i64) -> Vec<GramLattice> {
    let mut out = Vec::new();
    let mut a = 1;
    while 3 * a * a <= det {
        for b in 0..=a {
            let num = det + b * b;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            out.push(GramLattice::new(vec![vec![2 * a, b], vec![b, 2 * c]]).unwrap());
        }
        a += 1;
    }
    out
}

/// Uniqueness of the isometry class in the genus: yes for rank at most one,
/// for indefinite lattices with `l(A) ≤ rank − 2`, and for the definite
/// binary genera of `A2` and `A2(−1)`; unknown otherwise.
pub fn unique_in_genus(g: &Genus) -> Tri {
    let rank = g.rank();
    if rank <= 1 {
        return Tri::Yes;
    }
    if !g.signature.is_definite() && g.form.length() + 2 <= rank {
        return Tri::Yes;
    }
    if rank == 2 && g.signature.is_definite() && g.form.orders() == [3] {
        let value = g.form.q_gen(0);
        let a2 = Rational64::new(4, 3);
        let target = if g.signature.minus == 2 { a2 } else { Rational64::from_integer(2) - a2 };
        let f = FiniteQuadraticForm::cyclic(3, target).unwrap();
        if g.form.is_isometric(&f).unwrap_or(false) && value.denom() == &3 {
            return Tri::Yes;
        }
    }
    Tri::Unknown
}

/// Sufficient existence test: `rank > l(A)` together with the mod-8
/// condition and nonnegative signature entries.
pub fn strict_inequality_exists(g: &Genus) -> Result<Option<bool>> {
    if g.rank() > g.form.length() {
        Ok(Some(g.form.milgram_signature()? == g.signature.index().rem_euclid(8)))
    } else {
        Ok(None)
    }
}

/// Whether the two conventions can disagree on this genus.
pub fn conventions_differ(g: &Genus) -> Result<bool> {
    let a = even_lattice_exists_with(g, SignConvention::Standard)?;
    let b = even_lattice_exists_with(g, SignConvention::Unsigned)?;
    Ok(a.exists != b.exists)
}
