//! Finite quadratic forms: a finite abelian group `⊕ Z/dᵢ` with a `Q/2Z`-valued
//! quadratic form `q` and its `Q/Z`-valued bilinear form `b`.
//!
//! A form is stored by its generator orders and a symmetric matrix whose
//! diagonal holds `q(gᵢ) mod 2` and whose off-diagonal entries hold
//! `b(gᵢ, gⱼ) mod 1`. Elements are coordinate vectors in the generators.

mod gauss;
mod normal;
mod notation;

pub use gauss::{gauss_sum, GAUSS_TOLERANCE};
pub use normal::{assemble_blocks, find_isometry, Component, JordanBlock, BRUTE_FORCE_CAP};

use crate::arith::{is_prime, lcm_all, prime_divisors, valuation};
use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;

pub type Element = Vec<i64>;

pub(crate) fn mod1(r: Rational64) -> Rational64 {
    r - r.floor()
}

pub(crate) fn mod2(r: Rational64) -> Rational64 {
    let h = r / 2;
    (h - h.floor()) * 2
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteQuadraticForm {
    orders: Vec<i64>,
    gram: Vec<Vec<Rational64>>,
    denom: i64,
    scaled: Vec<Vec<i64>>,
}

impl fmt::Debug for FiniteQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteQuadraticForm")
            .field("orders", &self.orders)
            .field("gram", &self.gram.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
            .finish()
    }
}

/// A subgroup given by generators in the ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub generators: Vec<Element>,
}

impl Subgroup {
    pub fn new(generators: Vec<Element>) -> Self {
        Subgroup { generators }
    }

    pub fn trivial() -> Self {
        Subgroup { generators: Vec::new() }
    }

    pub fn whole(form: &FiniteQuadraticForm) -> Self {
        let r = form.num_generators();
        Subgroup {
            generators: (0..r)
                .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }
}

/// A subquotient `H / K` of an ambient form, presented on cyclic generators.
#[derive(Debug, Clone)]
pub struct Subquotient {
    pub form: FiniteQuadraticForm,
    /// Ambient representatives of the generators of `form`.
    pub lifts: Vec<Element>,
    top_basis: IntMatrix,
    right: IntMatrix,
    diagonal: Vec<i64>,
    kept: Vec<usize>,
}

impl Subquotient {
    /// Coordinates in `form` of the class of an ambient element of the top subgroup.
    pub fn project(&self, ambient_orders: &[i64], x: &[i64]) -> Option<Element> {
        let r = ambient_orders.len();
        let mut v: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
        v.resize(r, BigInt::zero());
        for (c, &d) in v.iter_mut().zip(ambient_orders) {
            *c = c.mod_floor(&BigInt::from(d));
        }
        let y = matrix::solve_in_basis(&self.top_basis, &v)?;
        let z: Vec<BigInt> = (0..r)
            .map(|j| y.iter().zip(self.right.iter()).map(|(a, row)| a * &row[j]).sum())
            .collect();
        Some(
            self.kept
                .iter()
                .map(|&i| z[i].mod_floor(&BigInt::from(self.diagonal[i])).to_i64().unwrap())
                .collect(),
        )
    }
}

impl FiniteQuadraticForm {
    /// Builds a form from generator orders and a symmetric value matrix
    /// (diagonal: `q` values, off-diagonal: `b` values). Generators of order 1
    /// are dropped. Fails if `q` does not descend to the group.
    pub fn new(orders: Vec<i64>, gram: Vec<Vec<Rational64>>) -> Result<Self> {
        let r = orders.len();
        if gram.len() != r {
            return Err(Error::Dimension { expected: r, got: gram.len() });
        }
        if let Some(row) = gram.iter().find(|row| row.len() != r) {
            return Err(Error::Dimension { expected: r, got: row.len() });
        }
        if let Some(&d) = orders.iter().find(|&&d| d < 1) {
            return Err(Error::InvalidArgument(format!("generator order {d}")));
        }
        let mut norm = vec![vec![Rational64::zero(); r]; r];
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    norm[i][i] = mod2(gram[i][i]);
                } else {
                    if mod1(gram[i][j]) != mod1(gram[j][i]) {
                        return Err(Error::IllDefinedForm(format!("b({i},{j}) != b({j},{i})")));
                    }
                    norm[i][j] = mod1(gram[i][j]);
                }
            }
        }
        for i in 0..r {
            let d = Rational64::from_integer(orders[i]);
            let q = norm[i][i];
            if !(q * d).is_integer() || !(q * d * d / 2).is_integer() {
                return Err(Error::IllDefinedForm(format!(
                    "q = {q} on a generator of order {}",
                    orders[i]
                )));
            }
            for j in 0..r {
                if j != i && !(norm[i][j] * d).is_integer() {
                    return Err(Error::IllDefinedForm(format!(
                        "b = {} against a generator of order {}",
                        norm[i][j], orders[i]
                    )));
                }
            }
        }
        let keep: Vec<usize> = (0..r).filter(|&i| orders[i] > 1).collect();
        let orders: Vec<i64> = keep.iter().map(|&i| orders[i]).collect();
        let gram: Vec<Vec<Rational64>> = keep
            .iter()
            .map(|&i| keep.iter().map(|&j| norm[i][j]).collect())
            .collect();
        Ok(Self::from_normalized(orders, gram))
    }

    fn from_normalized(orders: Vec<i64>, gram: Vec<Vec<Rational64>>) -> Self {
        let denom = lcm_all(gram.iter().flatten().map(|x| *x.denom()));
        let scaled = gram
            .iter()
            .map(|row| row.iter().map(|x| (x * denom).to_integer()).collect())
            .collect();
        FiniteQuadraticForm { orders, gram, denom, scaled }
    }

    pub fn trivial() -> Self {
        Self::from_normalized(Vec::new(), Vec::new())
    }

    /// Cyclic group of order `d` whose generator has `q = value`.
    pub fn cyclic(d: i64, value: Rational64) -> Result<Self> {
        Self::new(vec![d], vec![vec![value]])
    }

    /// The block `w^ε_{p,α}`: cyclic of order `p^α` with `q(1) = a/p^α`, where
    /// `a` is the smallest positive even integer with `(a|p) = ε`.
    pub fn w_block(p: i64, alpha: u32, epsilon: i64) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        if epsilon != 1 && epsilon != -1 {
            return Err(Error::InvalidEpsilon(epsilon));
        }
        if alpha == 0 {
            return Err(Error::InvalidArgument("alpha must be positive".into()));
        }
        let a = w_numerator(p, epsilon as i8);
        let d = p.pow(alpha);
        Self::cyclic(d, Rational64::new(a, d))
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn num_generators(&self) -> usize {
        self.orders.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }

    /// `q(gᵢ)` in `[0, 2)`.
    pub fn q_gen(&self, i: usize) -> Rational64 {
        self.gram[i][i]
    }

    /// `b(gᵢ, gⱼ)` in `[0, 1)`.
    pub fn b_gen(&self, i: usize, j: usize) -> Rational64 {
        if i == j {
            mod1(self.gram[i][i])
        } else {
            self.gram[i][j]
        }
    }

    pub fn gram(&self) -> &[Vec<Rational64>] {
        &self.gram
    }

    /// Group order `|A|`.
    pub fn order(&self) -> i64 {
        self.orders.iter().product()
    }

    pub fn exponent(&self) -> i64 {
        lcm_all(self.orders.iter().copied())
    }

    pub(crate) fn denominator(&self) -> i64 {
        self.denom
    }

    /// `denominator · q(x)` reduced into `[0, 2·denominator)`.
    pub(crate) fn q_scaled(&self, x: &[i64]) -> i64 {
        let r = self.orders.len();
        let mut s: i128 = 0;
        for i in 0..r {
            if x[i] == 0 {
                continue;
            }
            let xi = x[i] as i128;
            s += xi * xi * self.scaled[i][i] as i128;
            for j in i + 1..r {
                if x[j] != 0 {
                    s += 2 * xi * x[j] as i128 * self.scaled[i][j] as i128;
                }
            }
        }
        s.rem_euclid(2 * self.denom as i128) as i64
    }

    pub fn q(&self, x: &[i64]) -> Rational64 {
        Rational64::new(self.q_scaled(x), self.denom)
    }

    pub fn b(&self, x: &[i64], y: &[i64]) -> Rational64 {
        let r = self.orders.len();
        let mut s: i128 = 0;
        for i in 0..r {
            if x[i] == 0 {
                continue;
            }
            for j in 0..r {
                if y[j] != 0 {
                    s += x[i] as i128 * y[j] as i128 * self.scaled[i][j] as i128;
                }
            }
        }
        Rational64::new(s.rem_euclid(self.denom as i128) as i64, self.denom)
    }

    pub fn zero(&self) -> Element {
        vec![0; self.orders.len()]
    }

    pub fn reduce(&self, x: &[i64]) -> Element {
        x.iter().zip(&self.orders).map(|(c, d)| c.rem_euclid(*d)).collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Element {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((a, b), d)| (a + b).rem_euclid(*d))
            .collect()
    }

    pub fn scale(&self, c: i64, x: &[i64]) -> Element {
        x.iter()
            .zip(&self.orders)
            .map(|(a, d)| ((c as i128 * *a as i128).rem_euclid(*d as i128)) as i64)
            .collect()
    }

    pub fn element_order(&self, x: &[i64]) -> i64 {
        lcm_all(x.iter().zip(&self.orders).map(|(c, d)| d / c.gcd(d)))
    }

    /// All group elements in lexicographic order of coordinates.
    pub fn elements(&self) -> Elements {
        Elements { orders: self.orders.clone(), current: Some(self.zero()) }
    }

    pub fn orthogonal_sum(&self, other: &Self) -> Self {
        let r = self.orders.len();
        let s = other.orders.len();
        let mut gram = vec![vec![Rational64::zero(); r + s]; r + s];
        for i in 0..r {
            for j in 0..r {
                gram[i][j] = self.gram[i][j];
            }
        }
        for i in 0..s {
            for j in 0..s {
                gram[r + i][r + j] = other.gram[i][j];
            }
        }
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        Self::from_normalized(orders, gram)
    }

    pub fn negate(&self) -> Self {
        let gram = self
            .gram
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &x)| if i == j { mod2(-x) } else { mod1(-x) })
                    .collect()
            })
            .collect();
        Self::from_normalized(self.orders.clone(), gram)
    }

    /// Invariant factors `d₁ | d₂ | …`, all greater than 1.
    pub fn invariant_factors(&self) -> Vec<i64> {
        let r = self.orders.len();
        let diag: IntMatrix = (0..r)
            .map(|i| (0..r).map(|j| if i == j { BigInt::from(self.orders[i]) } else { BigInt::zero() }).collect())
            .collect();
        matrix::smith_normal_form(&diag, r, r)
            .diagonal
            .into_iter()
            .map(|d| d.to_i64().unwrap())
            .filter(|&d| d > 1)
            .collect()
    }

    /// Minimal number of generators `l(A)`.
    pub fn length(&self) -> usize {
        self.primes()
            .into_iter()
            .map(|p| self.orders.iter().filter(|&&d| d % p == 0).count())
            .max()
            .unwrap_or(0)
    }

    /// Length of the Sylow `p`-subgroup.
    pub fn p_length(&self, p: i64) -> usize {
        self.orders.iter().filter(|&&d| d % p == 0).count()
    }

    /// Primes dividing `|A|`, increasing.
    pub fn primes(&self) -> Vec<i64> {
        let mut ps: Vec<i64> = self.orders.iter().flat_map(|&d| prime_divisors(d)).collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }

    fn lattice_basis(&self, gens: &[Element]) -> IntMatrix {
        let r = self.orders.len();
        let mut rows: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| self.reduce(g).into_iter().map(BigInt::from).collect())
            .collect();
        for i in 0..r {
            rows.push((0..r).map(|j| if i == j { BigInt::from(self.orders[i]) } else { BigInt::zero() }).collect());
        }
        matrix::row_hermite(&rows, r)
    }

    /// Order of the subgroup generated by `h`.
    pub fn subgroup_order(&self, h: &Subgroup) -> i64 {
        let basis = self.lattice_basis(&h.generators);
        let det = matrix::determinant(&basis).abs();
        (BigInt::from(self.order()) / det).to_i64().unwrap()
    }

    pub fn subgroup_contains(&self, h: &Subgroup, x: &[i64]) -> bool {
        let basis = self.lattice_basis(&h.generators);
        let v: Vec<BigInt> = self.reduce(x).into_iter().map(BigInt::from).collect();
        matrix::solve_in_basis(&basis, &v).is_some()
    }

    /// All elements of the subgroup generated by `h`.
    pub fn subgroup_elements(&self, h: &Subgroup) -> Vec<Element> {
        let sq = self.subquotient(&h.generators, &[]).expect("restriction is always defined");
        sq.form
            .elements()
            .map(|c| {
                let mut x = self.zero();
                for (ci, lift) in c.iter().zip(&sq.lifts) {
                    x = self.add(&x, &self.scale(*ci, lift));
                }
                x
            })
            .collect()
    }

    /// Presents `top / bottom` on cyclic generators. `bottom` must lie in `top`
    /// and in its orthogonal complement, with `q` vanishing on it; otherwise the
    /// induced form is ill-defined and an error is returned.
    pub fn subquotient(&self, top: &[Element], bottom: &[Element]) -> Result<Subquotient> {
        let r = self.orders.len();
        let top_basis = self.lattice_basis(top);
        let bottom_basis = self.lattice_basis(bottom);
        let mut rel = Vec::with_capacity(r);
        for row in &bottom_basis {
            let y = matrix::solve_in_basis(&top_basis, row)
                .ok_or_else(|| Error::InvalidArgument("bottom subgroup is not contained in top".into()))?;
            rel.push(y);
        }
        let smith = matrix::smith_normal_form(&rel, rel.len(), r);
        let right_inv = matrix::inverse_rational(&matrix::to_rational(&smith.right)).unwrap();
        let diagonal: Vec<i64> = smith.diagonal.iter().map(|d| d.to_i64().unwrap()).collect();
        let kept: Vec<usize> = (0..r).filter(|&i| diagonal[i] > 1).collect();
        let lifts: Vec<Element> = kept
            .iter()
            .map(|&i| {
                let coeffs: Vec<BigInt> = right_inv[i].iter().map(|x| x.to_integer()).collect();
                let v: Vec<i64> = (0..r)
                    .map(|j| {
                        let s: BigInt = coeffs.iter().zip(&top_basis).map(|(c, row)| c * &row[j]).sum();
                        s.mod_floor(&BigInt::from(self.orders[j])).to_i64().unwrap()
                    })
                    .collect();
                v
            })
            .collect();
        let orders: Vec<i64> = kept.iter().map(|&i| diagonal[i]).collect();
        let gram: Vec<Vec<Rational64>> = (0..lifts.len())
            .map(|i| {
                (0..lifts.len())
                    .map(|j| if i == j { self.q(&lifts[i]) } else { self.b(&lifts[i], &lifts[j]) })
                    .collect()
            })
            .collect();
        let form = Self::new(orders, gram)?;
        Ok(Subquotient { form, lifts, top_basis, right: smith.right, diagonal, kept })
    }

    /// The form restricted to the subgroup generated by `gens`.
    pub fn restrict(&self, gens: &[Element]) -> Result<Subquotient> {
        self.subquotient(gens, &[])
    }

    /// Restriction to the Sylow `p`-subgroup, with lifts into `self`.
    pub fn p_part_with_lifts(&self, p: i64) -> Subquotient {
        let r = self.orders.len();
        let gens: Vec<Element> = (0..r)
            .map(|i| {
                let d = self.orders[i];
                let cofactor = d / p.pow(valuation(d, p));
                (0..r).map(|j| if i == j { cofactor } else { 0 }).collect()
            })
            .collect();
        self.subquotient(&gens, &[]).expect("sylow restriction is always defined")
    }

    pub fn p_part(&self, p: i64) -> Self {
        self.p_part_with_lifts(p).form
    }

    /// `H^⊥ = {x : b(x, h) = 0 for all h ∈ H}`, by solving linear congruences
    /// modulo the exponent.
    pub fn subgroup_orthogonal(&self, h: &Subgroup) -> Subgroup {
        let r = self.orders.len();
        let s = h.generators.len();
        if s == 0 {
            return Subgroup::whole(self);
        }
        let e = self.exponent();
        let mut m: IntMatrix = Vec::with_capacity(s);
        for (k, g) in h.generators.iter().enumerate() {
            let mut row = Vec::with_capacity(r + s);
            for i in 0..r {
                let mut unit = self.zero();
                unit[i] = 1;
                let v = self.b(&unit, g) * e;
                row.push(BigInt::from(v.to_integer()));
            }
            for l in 0..s {
                row.push(if l == k { BigInt::from(e) } else { BigInt::zero() });
            }
            m.push(row);
        }
        let kernel = matrix::integer_kernel(&m, s, r + s);
        let mut gens: Vec<Element> = kernel
            .iter()
            .map(|v| {
                let x: Vec<i64> = v[..r]
                    .iter()
                    .zip(&self.orders)
                    .map(|(c, d)| c.mod_floor(&BigInt::from(*d)).to_i64().unwrap())
                    .collect();
                x
            })
            .filter(|x| x.iter().any(|&c| c != 0))
            .collect();
        gens.dedup();
        Subgroup::new(gens)
    }

    pub fn radical(&self) -> Subgroup {
        self.subgroup_orthogonal(&Subgroup::whole(self))
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.subgroup_order(&self.radical()) == 1
    }

    pub fn is_isotropic(&self, h: &Subgroup) -> bool {
        let g = &h.generators;
        (0..g.len()).all(|i| {
            self.q(&g[i]).is_zero() && (i + 1..g.len()).all(|j| self.b(&g[i], &g[j]).is_zero())
        })
    }

    /// The induced form on `Γ^⊥ / Γ` for an isotropic subgroup `Γ`.
    pub fn isotropic_quotient(&self, gamma: &Subgroup) -> Result<Subquotient> {
        if !self.is_isotropic(gamma) {
            return Err(Error::NotIsotropic);
        }
        let perp = self.subgroup_orthogonal(gamma);
        self.subquotient(&perp.generators, &gamma.generators)
    }

    /// Re-presents an element of `self` through a new generating list: the
    /// homomorphism `Z^k → A`, `c ↦ Σ cᵢ·gensᵢ`.
    pub fn combine(&self, coeffs: &[i64], gens: &[Element]) -> Element {
        let mut x = self.zero();
        for (c, g) in coeffs.iter().zip(gens) {
            x = self.add(&x, &self.scale(*c, g));
        }
        x
    }
}

/// Numerator `a` of `w^ε_{p,1}`: the smallest positive even integer with `(a|p) = ε`.
pub fn w_numerator(p: i64, epsilon: i8) -> i64 {
    let mut a = 2;
    loop {
        if crate::arith::legendre(a, p).unwrap() == epsilon {
            return a;
        }
        a += 2;
    }
}

/// Mixed-radix enumeration of group elements.
pub struct Elements {
    orders: Vec<i64>,
    current: Option<Vec<i64>>,
}

impl Iterator for Elements {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < self.orders[i] {
                self.current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

impl Subgroup {
    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn w_blocks() {
        assert_eq!(FiniteQuadraticForm::w_block(3, 1, 1).unwrap().q_gen(0), r(4, 3));
        assert_eq!(FiniteQuadraticForm::w_block(3, 1, -1).unwrap().q_gen(0), r(2, 3));
        assert_eq!(FiniteQuadraticForm::w_block(5, 1, 1).unwrap().q_gen(0), r(4, 5));
        assert_eq!(FiniteQuadraticForm::w_block(5, 1, -1).unwrap().q_gen(0), r(2, 5));
        assert_eq!(FiniteQuadraticForm::w_block(3, 2, 1).unwrap().q_gen(0), r(4, 9));
        assert!(FiniteQuadraticForm::w_block(2, 1, 1).is_err());
        assert!(FiniteQuadraticForm::w_block(3, 1, 0).is_err());
    }

    #[test]
    fn cyclic_forms() {
        let z4 = FiniteQuadraticForm::cyclic(4, r(-1, 4)).unwrap();
        assert_eq!(z4.q_gen(0), r(7, 4));
        let z6 = FiniteQuadraticForm::cyclic(6, r(7, 6)).unwrap();
        assert_eq!(z6.order(), 6);
        assert!(FiniteQuadraticForm::cyclic(1, r(0, 1)).unwrap().is_trivial());
        assert!(FiniteQuadraticForm::cyclic(3, r(1, 3)).is_err());
        assert!(FiniteQuadraticForm::cyclic(4, r(1, 8)).is_err());
    }

    #[test]
    fn negation() {
        assert_eq!(FiniteQuadraticForm::trivial().negate(), FiniteQuadraticForm::trivial());
        let a = FiniteQuadraticForm::cyclic(3, r(4, 3)).unwrap().negate();
        assert_eq!(a, FiniteQuadraticForm::cyclic(3, r(2, 3)).unwrap());
    }

    #[test]
    fn p_parts_of_cyclic_twelve() {
        let q = FiniteQuadraticForm::cyclic(12, r(-1, 12)).unwrap();
        let q3 = q.p_part(3);
        assert_eq!(q3.orders(), &[3]);
        let q2 = q.p_part(2);
        assert_eq!(q2.orders(), &[4]);
        let w = FiniteQuadraticForm::w_block(3, 1, 1).unwrap();
        assert!(w.p_part(5).is_trivial());
    }

    #[test]
    fn glue_quotient_example() {
        // (-q<6>) + (Z/3(4/3))^2 with Gamma = <(2s, t1 + t2)>.
        let amb = FiniteQuadraticForm::cyclic(6, r(-1, 6))
            .unwrap()
            .orthogonal_sum(&FiniteQuadraticForm::cyclic(3, r(4, 3)).unwrap())
            .orthogonal_sum(&FiniteQuadraticForm::cyclic(3, r(4, 3)).unwrap());
        let gamma = Subgroup::new(vec![vec![2, 1, 1]]);
        let perp = amb.subgroup_orthogonal(&gamma);
        let expected = Subgroup::new(vec![vec![1, 1, 0], vec![1, 0, 1]]);
        assert_eq!(amb.subgroup_order(&perp), 18);
        for g in &expected.generators {
            assert!(amb.subgroup_contains(&perp, g));
        }
        assert_eq!(amb.subgroup_order(&expected), 18);
        let quotient = amb.isotropic_quotient(&gamma).unwrap();
        assert_eq!(quotient.form.order(), 6);
        let target = FiniteQuadraticForm::cyclic(6, r(7, 6)).unwrap();
        assert!(quotient.form.is_isometric(&target).unwrap());
        let cls = quotient.project(amb.orders(), &[1, 1, 0]).unwrap();
        assert_eq!(quotient.form.element_order(&cls), 6);
        assert_eq!(quotient.form.q(&cls), r(7, 6));
    }

    #[test]
    fn orthogonal_edge_cases() {
        let q = FiniteQuadraticForm::cyclic(3, r(4, 3))
            .unwrap()
            .orthogonal_sum(&FiniteQuadraticForm::cyclic(4, r(1, 4)).unwrap());
        assert_eq!(q.subgroup_order(&q.subgroup_orthogonal(&Subgroup::whole(&q))), 1);
        assert_eq!(q.subgroup_order(&q.subgroup_orthogonal(&Subgroup::trivial())), 12);
        let id = q.isotropic_quotient(&Subgroup::trivial()).unwrap();
        assert!(id.form.is_isometric(&q).unwrap());
        assert!(q.isotropic_quotient(&Subgroup::new(vec![vec![1, 0]])).is_err());
    }

    #[test]
    fn degenerate_detection() {
        let q = FiniteQuadraticForm::cyclic(2, r(0, 1)).unwrap();
        assert!(!q.is_nondegenerate());
        let u = FiniteQuadraticForm::new(vec![2, 2], vec![vec![r(0, 1), r(1, 2)], vec![r(1, 2), r(0, 1)]]).unwrap();
        assert!(u.is_nondegenerate());
    }

    fn random_form() -> impl Strategy<Value = FiniteQuadraticForm> {
        proptest::collection::vec(prop_oneof![Just(2i64), Just(3), Just(4), Just(5), Just(6), Just(9)], 1..=3)
            .prop_flat_map(|orders| {
                let r = orders.len();
                (Just(orders), proptest::collection::vec(0i64..1000, r * r))
            })
            .prop_map(|(orders, raw)| {
                let r = orders.len();
                let mut gram = vec![vec![Rational64::zero(); r]; r];
                for i in 0..r {
                    let d = orders[i];
                    gram[i][i] = if d % 2 == 0 {
                        Rational64::new(raw[i * r + i] % (2 * d), d)
                    } else {
                        Rational64::new(2 * (raw[i * r + i] % d), d)
                    };
                    for j in i + 1..r {
                        let g = orders[i].gcd(&orders[j]);
                        let v = Rational64::new(raw[i * r + j] % g, g);
                        gram[i][j] = v;
                        gram[j][i] = v;
                    }
                }
                FiniteQuadraticForm::new(orders, gram).unwrap()
            })
    }

    proptest! {
        #[test]
        fn q_descends_to_cosets(f in random_form()) {
            for x in f.elements() {
                for i in 0..f.num_generators() {
                    let mut y = x.clone();
                    y[i] += f.orders()[i];
                    prop_assert_eq!(f.q(&x), f.q(&y));
                    let z = f.scale(3, &x);
                    let mut w = x.clone();
                    w[i] += f.orders()[i] * 2;
                    prop_assert_eq!(f.b(&z, &x), f.b(&z, &w));
                }
            }
        }

        #[test]
        fn polarization(f in random_form()) {
            let els: Vec<Element> = f.elements().collect();
            for x in els.iter().take(12) {
                for y in els.iter().rev().take(12) {
                    let lhs = mod1((f.q(&f.add(x, y)) - f.q(x) - f.q(y)) / 2);
                    prop_assert_eq!(lhs, f.b(x, y));
                }
            }
        }

        #[test]
        fn orthogonal_matches_enumeration(f in random_form(), pick in 0usize..50) {
            let els: Vec<Element> = f.elements().collect();
            let h = Subgroup::new(vec![els[pick % els.len()].clone()]);
            let perp = f.subgroup_orthogonal(&h);
            let members: Vec<&Element> = els.iter().filter(|x| f.b(x, &h.generators[0]).is_zero()).collect();
            prop_assert_eq!(f.subgroup_order(&perp) as usize, members.len());
            for x in members {
                prop_assert!(f.subgroup_contains(&perp, x));
            }
        }

        #[test]
        fn nondegeneracy_matches_brute_force(f in random_form()) {
            let els: Vec<Element> = f.elements().collect();
            let brute = els.iter().filter(|x| els.iter().all(|y| f.b(x, y).is_zero())).count() == 1;
            prop_assert_eq!(f.is_nondegenerate(), brute);
        }

        #[test]
        fn p_parts_reassemble(f in random_form()) {
            prop_assume!(f.is_nondegenerate());
            let mut acc = FiniteQuadraticForm::trivial();
            for p in f.primes() {
                acc = acc.orthogonal_sum(&f.p_part(p));
            }
            prop_assert!(acc.is_isometric(&f).unwrap());
        }

        #[test]
        fn isotropic_quotient_order(f in random_form(), pick in 0usize..50) {
            prop_assume!(f.is_nondegenerate());
            let iso: Vec<Element> = f.elements().filter(|x| f.q(x).is_zero()).collect();
            let g = &iso[pick % iso.len()];
            let gamma = Subgroup::new(vec![g.clone()]);
            let quotient = f.isotropic_quotient(&gamma).unwrap();
            let n = f.element_order(g);
            prop_assert_eq!(quotient.form.order() * n * n, f.order());
            prop_assert!(quotient.form.is_nondegenerate());
        }

        #[test]
        fn subgroup_enumeration_has_right_size(f in random_form(), a in 0usize..50, b in 0usize..50) {
            let els: Vec<Element> = f.elements().collect();
            let h = Subgroup::new(vec![els[a % els.len()].clone(), els[b % els.len()].clone()]);
            let mut members = f.subgroup_elements(&h);
            members.sort();
            members.dedup();
            prop_assert_eq!(members.len() as i64, f.subgroup_order(&h));
        }
    }
}
