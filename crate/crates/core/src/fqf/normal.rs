//! Orthogonal decompositions, odd-prime normal forms and isometry testing.

use super::{mod1, mod2, Element, FiniteQuadraticForm, Subgroup};
use crate::arith::{legendre, valuation};
use crate::error::{Error, Result};
use num_rational::Rational64;
use num_traits::Zero;
use std::collections::HashMap;

/// Largest group order for which the generator-mapping isometry search runs.
pub const BRUTE_FORCE_CAP: i64 = 10_000;

/// An orthogonal summand of a non-degenerate form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    /// `Z/order` with the given generator value.
    Cyclic { order: i64, value: Rational64 },
    /// The even 2-adic plane `(Z/2^k)²` with `b(x,y) = 1/2^k`: `u` when
    /// `q(x) = q(y) = 0`, otherwise `v` with `q(x) = q(y) = 2/2^k`.
    Plane { order: i64, odd_type: bool },
}

/// A block `w^ε_{p,α}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JordanBlock {
    pub alpha: u32,
    pub epsilon: i8,
}

impl Component {
    pub fn to_form(&self) -> Result<FiniteQuadraticForm> {
        match *self {
            Component::Cyclic { order, value } => FiniteQuadraticForm::cyclic(order, value),
            Component::Plane { order, odd_type } => {
                let q = if odd_type { Rational64::new(2, order) } else { Rational64::zero() };
                let b = Rational64::new(1, order);
                FiniteQuadraticForm::new(vec![order, order], vec![vec![q, b], vec![b, q]])
            }
        }
    }

    pub fn order(&self) -> i64 {
        match *self {
            Component::Cyclic { order, .. } => order,
            Component::Plane { order, .. } => order * order,
        }
    }
}

fn bilinear_order(r: Rational64) -> i64 {
    *mod1(r).denom()
}

impl FiniteQuadraticForm {
    /// Splits a non-degenerate form into orthogonal cyclic summands and, at the
    /// prime 2, planes of type `u`/`v`. Each summand comes with ambient
    /// generators. Primes are taken in increasing order.
    pub fn orthogonal_decomposition(&self) -> Result<Vec<(Component, Vec<Element>)>> {
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        let mut out = Vec::new();
        for p in self.primes() {
            let sylow = self.p_part_with_lifts(p);
            let mut current = sylow.form.clone();
            let mut lifts = sylow.lifts.clone();
            while !current.is_trivial() {
                let top = *current.orders().iter().max().unwrap();
                let gens = split_candidate(&current, p, top)
                    .ok_or_else(|| Error::IllDefinedForm("no orthogonal splitting found".into()))?;
                let ambient: Vec<Element> = gens.iter().map(|g| self.combine(g, &lifts)).collect();
                let component = if gens.len() == 1 {
                    Component::Cyclic { order: top, value: current.q(&gens[0]) }
                } else {
                    let (x, y) = (&gens[0], &gens[1]);
                    let (a, b) = (current.q(x) * top / 2, current.q(y) * top / 2);
                    let odd_type = (a.to_integer() * b.to_integer()) % 2 != 0;
                    Component::Plane { order: top, odd_type }
                };
                out.push((component, ambient));
                let perp = current.subgroup_orthogonal(&Subgroup::new(gens));
                let next = current.subquotient(&perp.generators, &[])?;
                lifts = next.lifts.iter().map(|g| current.combine(g, &lifts)).collect();
                current = next.form;
            }
        }
        Ok(out)
    }

    /// Canonical multiset of blocks `w^ε_{p,α}` of the Sylow `p`-subgroup for odd `p`:
    /// sorted by `α`, with at most one `ε = -1` per `α`, placed last.
    pub fn odd_normal_form(&self, p: i64) -> Result<Vec<JordanBlock>> {
        if p == 2 {
            return Err(Error::PrimeTwo);
        }
        let part = self.p_part(p);
        let mut blocks = Vec::new();
        for (component, _) in part.orthogonal_decomposition()? {
            match component {
                Component::Cyclic { order, value } => {
                    let alpha = valuation(order, p);
                    let num = (value * order).to_integer();
                    blocks.push(JordanBlock { alpha, epsilon: legendre(num, p)? });
                }
                Component::Plane { .. } => unreachable!("planes occur only at p = 2"),
            }
        }
        Ok(canonical_blocks(blocks))
    }

    /// Whether the two forms are isometric. Odd Sylow parts are compared by
    /// normal forms; 2-parts by a generator-mapping search up to
    /// [`BRUTE_FORCE_CAP`] elements, beyond which `Error::Undecided` is returned
    /// when the cheap invariants agree.
    pub fn is_isometric(&self, other: &Self) -> Result<bool> {
        if !self.is_nondegenerate() || !other.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        if self.invariant_factors() != other.invariant_factors() {
            return Ok(false);
        }
        for p in self.primes() {
            let a = self.p_part(p);
            let b = other.p_part(p);
            if p != 2 {
                if a.odd_normal_form(p)? != b.odd_normal_form(p)? {
                    return Ok(false);
                }
                continue;
            }
            if a.milgram_signature()? != b.milgram_signature()? || value_census(&a) != value_census(&b) {
                return Ok(false);
            }
            if a.order() > BRUTE_FORCE_CAP {
                return Err(Error::Undecided);
            }
            if find_isometry(&a, &b).is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn split_candidate(f: &FiniteQuadraticForm, p: i64, top: i64) -> Option<Vec<Element>> {
    let r = f.num_generators();
    let unit = |i: usize| -> Element { (0..r).map(|j| i64::from(i == j)).collect() };
    let maximal: Vec<usize> = (0..r).filter(|&i| f.orders()[i] == top).collect();
    for &i in &maximal {
        if bilinear_order(f.q_gen(i)) == top {
            return Some(vec![unit(i)]);
        }
    }
    for (k, &i) in maximal.iter().enumerate() {
        for &j in &maximal[k + 1..] {
            if p != 2 {
                let x = f.add(&unit(i), &unit(j));
                if bilinear_order(f.q(&x)) == top {
                    return Some(vec![x]);
                }
            } else if bilinear_order(f.b_gen(i, j)) == top {
                return Some(vec![unit(i), unit(j)]);
            }
        }
    }
    None
}

fn canonical_blocks(blocks: Vec<JordanBlock>) -> Vec<JordanBlock> {
    let mut by_alpha: std::collections::BTreeMap<u32, (usize, i8)> = Default::default();
    for b in blocks {
        let e = by_alpha.entry(b.alpha).or_insert((0, 1));
        e.0 += 1;
        e.1 *= b.epsilon;
    }
    let mut out = Vec::new();
    for (alpha, (count, eps)) in by_alpha {
        for _ in 1..count {
            out.push(JordanBlock { alpha, epsilon: 1 });
        }
        out.push(JordanBlock { alpha, epsilon: eps });
    }
    out
}

/// Orthogonal sum of `w^ε_{p,α}` blocks.
pub fn assemble_blocks(p: i64, blocks: &[JordanBlock]) -> Result<FiniteQuadraticForm> {
    let mut acc = FiniteQuadraticForm::trivial();
    for b in blocks {
        acc = acc.orthogonal_sum(&FiniteQuadraticForm::w_block(p, b.alpha, b.epsilon as i64)?);
    }
    Ok(acc)
}

fn value_census(f: &FiniteQuadraticForm) -> Vec<((i64, Rational64), usize)> {
    let mut map: HashMap<(i64, Rational64), usize> = HashMap::new();
    if f.order() <= BRUTE_FORCE_CAP {
        for x in f.elements() {
            *map.entry((f.element_order(&x), f.q(&x))).or_default() += 1;
        }
    }
    let mut v: Vec<_> = map.into_iter().collect();
    v.sort();
    v
}

/// Searches for an isometry `a → b`, returning the images of `a`'s generators.
pub fn find_isometry(a: &FiniteQuadraticForm, b: &FiniteQuadraticForm) -> Option<Vec<Element>> {
    if a.order() != b.order() {
        return None;
    }
    let mut buckets: HashMap<(i64, Rational64), Vec<Element>> = HashMap::new();
    for y in b.elements() {
        buckets.entry((b.element_order(&y), b.q(&y))).or_default().push(y);
    }
    let r = a.num_generators();
    let unit = |i: usize| -> Element { (0..r).map(|j| i64::from(i == j)).collect() };
    let candidates: Vec<Vec<Element>> = (0..r)
        .map(|i| buckets.get(&(a.orders()[i], mod2(a.q_gen(i)))).cloned().unwrap_or_default())
        .collect();
    let targets: Vec<Vec<Rational64>> =
        (0..r).map(|i| (0..i).map(|j| a.b(&unit(i), &unit(j))).collect()).collect();
    // The generators of `a` are independent, so every partial choice must
    // generate a subgroup of order equal to the product of their orders.
    let partial_orders: Vec<i64> = a.orders().iter().scan(1, |acc, &d| {
        *acc *= d;
        Some(*acc)
    }).collect();
    let mut chosen: Vec<Element> = Vec::with_capacity(r);
    fn search(
        i: usize,
        b: &FiniteQuadraticForm,
        candidates: &[Vec<Element>],
        targets: &[Vec<Rational64>],
        partial_orders: &[i64],
        chosen: &mut Vec<Element>,
    ) -> bool {
        if i == candidates.len() {
            return true;
        }
        for y in &candidates[i] {
            if (0..i).all(|j| b.b(y, &chosen[j]) == targets[i][j]) {
                chosen.push(y.clone());
                if b.subgroup_order(&Subgroup::new(chosen.clone())) == partial_orders[i]
                    && search(i + 1, b, candidates, targets, partial_orders, chosen)
                {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if search(0, b, &candidates, &targets, &partial_orders, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}
