//! Gluing data for primitive embeddings `S ↪ L` with
//! `L = U³ ⊕ E8² ⊕ ⟨−2(n−1)⟩`, and the resulting forms on `A_T`.

use crate::arith::{is_prime, legendre, qr_mod, valuation};
use crate::error::{Error, Result};
use crate::fqf::{Element, FiniteQuadraticForm, Subgroup};
use crate::lattice::{named_lattice, GramLattice, Named, Signature};
use num_rational::Rational64;
use serde::Serialize;
use std::fmt;

/// `2(n−1) = p^α β` with `p ∤ β`.
pub fn split_exponent(n: i64, p: i64) -> (u32, i64) {
    let d = 2 * (n - 1);
    let alpha = valuation(d, p);
    (alpha, d / p.pow(alpha))
}

fn check_prime(p: i64) -> Result<()> {
    if p == 2 {
        return Err(Error::PrimeTwo);
    }
    if !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    Ok(())
}

/// The discriminant form of `L`, split as `Z/p^α(−β/p^α) ⊕ Z/β(−p^α/β)`.
#[derive(Debug, Clone)]
pub struct LForm {
    pub n: i64,
    pub p: i64,
    pub alpha: u32,
    pub beta: i64,
    /// The cyclic form `Z/2(n−1)(−1/(2(n−1)))`.
    pub cyclic: FiniteQuadraticForm,
    /// The orthogonal splitting; generator 0 is `e` when `α = 1`.
    pub split: FiniteQuadraticForm,
    pub p_part: FiniteQuadraticForm,
    /// `q_{α,β}`.
    pub beta_part: FiniteQuadraticForm,
}

impl LForm {
    /// `(−β | p)` when `α = 1`.
    pub fn epsilon(&self) -> Option<i8> {
        (self.alpha == 1).then(|| legendre(-self.beta, self.p).unwrap())
    }

    /// The generator `e` of the `p`-part inside `split`.
    pub fn e(&self) -> Option<Element> {
        (self.alpha >= 1).then(|| {
            let mut e = self.split.zero();
            e[0] = 1;
            e
        })
    }
}

pub fn q_l_of(n: i64, p: i64) -> Result<LForm> {
    check_prime(p)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    let (alpha, beta) = split_exponent(n, p);
    if alpha >= 2 {
        return Err(Error::AlphaScope { n, p, alpha });
    }
    let d = 2 * (n - 1);
    let cyclic = FiniteQuadraticForm::cyclic(d, Rational64::new(-1, d))?;
    let pa = p.pow(alpha);
    let p_part = FiniteQuadraticForm::cyclic(pa, Rational64::new(-beta, pa))?;
    let beta_part = FiniteQuadraticForm::cyclic(beta, Rational64::new(-pa, beta))?;
    let split = p_part.orthogonal_sum(&beta_part);
    Ok(LForm { n, p, alpha, beta, cyclic, split, p_part, beta_part })
}

/// Which of the two forms on `(Z/p)^k` with the given signature occurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SPattern {
    /// `(w⁺)^k`.
    Plus,
    /// `(w⁺)^{k−1} ⊕ w⁻`.
    Minus,
}

#[derive(Debug, Clone)]
pub struct SForm {
    pub p: i64,
    pub k: usize,
    pub pattern: SPattern,
    /// `None` when the pattern requires a `w⁻` block but `k = 0`.
    pub form: Option<FiniteQuadraticForm>,
    pub signature: Signature,
}

/// The form of the `p`-elementary lattice `S` of signature `(2, (p−1)m − 2)`
/// and length `k`, where `k = a` if `m ≡ a (mod 2)` and `k = a + 1` otherwise.
pub fn q_s_of(p: i64, m: i64, a: i64, alpha: u32) -> Result<SForm> {
    check_prime(p)?;
    let rank = (p - 1) * m;
    if m < 1 || rank > 22 || a < 0 || a > m {
        return Err(Error::InvalidArgument(format!("(p, m, a) = ({p}, {m}, {a}) out of range")));
    }
    if rank < 2 {
        return Err(Error::InvalidArgument("S must have rank at least 2".into()));
    }
    let k = if (m - a) % 2 == 0 {
        a
    } else if alpha == 1 {
        a + 1
    } else {
        return Err(Error::Parity { m, a });
    };
    let signature = Signature::new(2, (rank - 2) as usize);
    let index = signature.index();
    let pattern = if (index - k * (1 - p)).rem_euclid(8) == 0 {
        SPattern::Plus
    } else {
        debug_assert_eq!((index - k * (1 - p) - 4).rem_euclid(8), 0);
        SPattern::Minus
    };
    let form = match (pattern, k) {
        (SPattern::Minus, 0) => None,
        (SPattern::Plus, _) => Some(power(p, 1, k as usize)),
        (SPattern::Minus, _) => Some(power(p, 1, k as usize - 1).orthogonal_sum(&w(p, -1))),
    };
    Ok(SForm { p, k: k as usize, pattern, form, signature })
}

fn w(p: i64, epsilon: i64) -> FiniteQuadraticForm {
    FiniteQuadraticForm::w_block(p, 1, epsilon).unwrap()
}

fn power(p: i64, epsilon: i64, k: usize) -> FiniteQuadraticForm {
    (0..k).fold(FiniteQuadraticForm::trivial(), |acc, _| acc.orthogonal_sum(&w(p, epsilon)))
}

/// Subcases of the cyclic gluing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CyclicCase {
    /// `(−β|p) = +1`, `q_S = (w⁺)^{a+1}`.
    IIa,
    /// `(−β|p) = +1`, `q_S = (w⁺)^a ⊕ w⁻`.
    IIb,
    /// `(−β|p) = −1`, `q_S = (w⁺)^{a+1}`.
    IIIa,
    /// `(−β|p) = −1`, `q_S = (w⁺)^a ⊕ w⁻`.
    IIIb,
}

impl fmt::Display for CyclicCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CyclicCase::IIa => "ii.a",
            CyclicCase::IIb => "ii.b",
            CyclicCase::IIIa => "iii.a",
            CyclicCase::IIIb => "iii.b",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GlueTag {
    TrivialGlue,
    CyclicGlue,
}

impl fmt::Display for GlueTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GlueTag::TrivialGlue => "trivial-glue",
            GlueTag::CyclicGlue => "cyclic-glue",
        })
    }
}

#[derive(Debug, Clone)]
pub struct GlueCase {
    pub tag: GlueTag,
    /// Order of `x`: 1 for trivial glue, `p` for cyclic glue.
    pub x_order: i64,
    /// The glue length `a` of the triple this case realizes.
    pub a: i64,
    pub subcase: Option<CyclicCase>,
    /// `q_T` from the closed-form case table.
    pub q_t_target: FiniteQuadraticForm,
    /// `q_T` computed as `Γ^⊥/Γ` inside `(−q_S) ⊕ q_L`.
    pub q_t_quotient: FiniteQuadraticForm,
    /// The element `x ∈ A_S` glued to `e`.
    pub x: Option<Element>,
    pub t_signature: Signature,
}

impl GlueCase {
    /// Whether the two computations of `q_T` are isometric.
    pub fn computations_agree(&self) -> Result<bool> {
        self.q_t_target.is_isometric(&self.q_t_quotient)
    }
}

/// The first element of order `p` with `q(x) = target`: scaled generators
/// first, then sums of two scaled generators.
fn find_glue_element(q_s: &FiniteQuadraticForm, p: i64, target: Rational64) -> Option<Element> {
    let r = q_s.num_generators();
    let unit = |i: usize, c: i64| -> Element { (0..r).map(|j| if i == j { c } else { 0 }).collect() };
    for i in 0..r {
        for c in 1..p {
            let x = unit(i, c);
            if q_s.q(&x) == target {
                return Some(x);
            }
        }
    }
    for i in 0..r {
        for j in i + 1..r {
            for c in 1..p {
                for d in 1..p {
                    let x = q_s.add(&unit(i, c), &unit(j, d));
                    if q_s.q(&x) == target {
                        return Some(x);
                    }
                }
            }
        }
    }
    None
}

/// All gluing cases for `S` with form `q_s` (of length `k`, pattern as in
/// [`q_s_of`]) into `L`. The trivial case realizes the triple with `a = k`;
/// the cyclic case, when `α = 1` and a suitable `x` exists, realizes `a = k − 1`.
pub fn enumerate_glue_cases(s: &SForm, l: &LForm) -> Result<Vec<GlueCase>> {
    let q_s = match &s.form {
        Some(f) => f,
        None => return Ok(Vec::new()),
    };
    let p = l.p;
    let rank_t = 23 - s.signature.rank();
    let t_signature = Signature::new(1, rank_t - 1);
    let ambient = q_s.negate().orthogonal_sum(&l.split);
    let mut out = vec![GlueCase {
        tag: GlueTag::TrivialGlue,
        x_order: 1,
        a: s.k as i64,
        subcase: None,
        q_t_target: q_s.negate().orthogonal_sum(&l.cyclic),
        q_t_quotient: ambient.isotropic_quotient(&Subgroup::trivial())?.form,
        x: None,
        t_signature,
    }];
    if l.alpha != 1 || s.k == 0 {
        return Ok(out);
    }
    let e = l.e().unwrap();
    let target = l.split.q(&e);
    let x = find_glue_element(q_s, p, target);
    let eps = l.epsilon().unwrap();
    let a = s.k as i64 - 1;
    let subcase = match (eps, s.pattern) {
        (1, SPattern::Plus) => Some(CyclicCase::IIa),
        (1, SPattern::Minus) if a >= 1 => Some(CyclicCase::IIb),
        (-1, SPattern::Plus) if a >= 1 => Some(CyclicCase::IIIa),
        (-1, SPattern::Minus) => Some(CyclicCase::IIIb),
        _ => None,
    };
    match (x, subcase) {
        (None, None) => Ok(out),
        (Some(x), Some(subcase)) => {
            let mut g = x.clone();
            g.extend(e.iter().copied());
            let quotient = ambient.isotropic_quotient(&Subgroup::new(vec![g]))?.form;
            let au = a as usize;
            let target = match subcase {
                CyclicCase::IIa | CyclicCase::IIIb => power(p, 1, au).negate(),
                CyclicCase::IIb | CyclicCase::IIIa => power(p, 1, au - 1).orthogonal_sum(&w(p, -1)).negate(),
            }
            .orthogonal_sum(&l.beta_part);
            out.push(GlueCase {
                tag: GlueTag::CyclicGlue,
                x_order: p,
                a,
                subcase: Some(subcase),
                q_t_target: target,
                q_t_quotient: quotient,
                x: Some(x),
                t_signature,
            });
            Ok(out)
        }
        (x, c) => Err(Error::Data(format!(
            "glue element search ({}) disagrees with the case table ({})",
            if x.is_some() { "found" } else { "none" },
            c.map(|c| c.to_string()).unwrap_or_else(|| "excluded".into())
        ))),
    }
}

/// A rank-one invariant lattice case.
#[derive(Debug, Clone)]
pub struct RankOneCase {
    pub p: i64,
    pub m: i64,
    pub a: i64,
    pub alpha: u32,
    /// `T = ⟨t_square⟩`.
    pub t_square: i64,
    pub t: GramLattice,
    pub s: GramLattice,
    /// Canonical expression of `S`.
    pub s_expr: &'static str,
}

/// Admissible triples with `(p−1)m = 22`: those with `α ∈ {0,1}`, `a = 1 − α`
/// and `−p` a square modulo `4(n−1)/p^α`.
pub fn rank_one_cases(n: i64, p: i64) -> Result<Vec<RankOneCase>> {
    check_prime(p)?;
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {n}")));
    }
    if 22 % (p - 1) != 0 {
        return Ok(Vec::new());
    }
    let m = 22 / (p - 1);
    let (alpha, beta) = split_exponent(n, p);
    if alpha >= 2 {
        return Err(Error::AlphaScope { n, p, alpha });
    }
    let modulus = 4 * (n - 1) / p.pow(alpha);
    if !qr_mod(-p, modulus) {
        return Ok(Vec::new());
    }
    let t_square = if alpha == 0 { 2 * p * (n - 1) } else { beta };
    let (glue, s_expr) = if p == 3 {
        (named_lattice(Named::A(2), None)?, "2*U + 2*E8 + A2")
    } else {
        (named_lattice(Named::K23, None)?, "2*U + 2*E8 + K23")
    };
    let u = named_lattice(Named::U, None)?;
    let e8 = named_lattice(Named::E8, None)?;
    let s = u.direct_sum(&u).direct_sum(&e8).direct_sum(&e8).direct_sum(&glue);
    Ok(vec![RankOneCase {
        p,
        m,
        a: 1 - alpha as i64,
        alpha,
        t_square,
        t: GramLattice::new(vec![vec![t_square]])?,
        s,
        s_expr,
    }])
}
