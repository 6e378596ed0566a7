//! Even integer lattices presented by Gram matrices.

use crate::error::{Error, Result};
use crate::fqf::{Element, FiniteQuadraticForm};
use crate::matrix::{self, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
}

impl Signature {
    pub fn new(plus: usize, minus: usize) -> Self {
        Signature { plus, minus }
    }

    pub fn rank(&self) -> usize {
        self.plus + self.minus
    }

    /// `plus − minus`.
    pub fn index(&self) -> i64 {
        self.plus as i64 - self.minus as i64
    }

    pub fn is_definite(&self) -> bool {
        self.plus == 0 || self.minus == 0
    }
}

impl std::ops::Add for Signature {
    type Output = Signature;

    fn add(self, o: Signature) -> Signature {
        Signature::new(self.plus + o.plus, self.minus + o.minus)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.plus, self.minus)
    }
}

/// A lattice vector with coprime coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimitiveVector(Vec<i64>);

impl PrimitiveVector {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        let g = coords.iter().fold(0i64, |g, x| g.gcd(x));
        match g {
            0 => Err(Error::ZeroVector),
            1 => Ok(PrimitiveVector(coords)),
            g => Err(Error::NotPrimitive(g)),
        }
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

/// An even integer lattice: symmetric Gram matrix with even diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GramLattice {
    gram: Vec<Vec<i64>>,
}

/// Named lattices of the catalogue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Named {
    U,
    A(usize),
    E6,
    E8,
    H5,
    K23,
    Omega,
    E6Dual3,
    /// The rank-one lattice `<d>`.
    Diagonal(i64),
}

impl Named {
    pub fn from_token(s: &str) -> Result<Named> {
        Ok(match s {
            "U" => Named::U,
            "E6" => Named::E6,
            "E8" => Named::E8,
            "H5" => Named::H5,
            "K23" => Named::K23,
            "Omega" => Named::Omega,
            "E6dual3" => Named::E6Dual3,
            _ => match s.strip_prefix('A').and_then(|h| h.parse::<usize>().ok()) {
                Some(h) if h >= 1 && !s[1..].starts_with('0') => Named::A(h),
                _ => return Err(Error::UnknownName(s.to_string())),
            },
        })
    }

    pub fn token(&self) -> String {
        match self {
            Named::U => "U".into(),
            Named::A(h) => format!("A{h}"),
            Named::E6 => "E6".into(),
            Named::E8 => "E8".into(),
            Named::H5 => "H5".into(),
            Named::K23 => "K23".into(),
            Named::Omega => "Omega".into(),
            Named::E6Dual3 => "E6dual3".into(),
            Named::Diagonal(d) => format!("<{d}>"),
        }
    }
}

fn cartan_negative(edges: &[(usize, usize)], n: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for &(a, b) in edges {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    g
}

fn e6_gram() -> Vec<Vec<i64>> {
    cartan_negative(&[(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)], 6)
}

fn e8_gram() -> Vec<Vec<i64>> {
    cartan_negative(&[(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)], 8)
}

/// The Gram matrix of a named lattice, optionally rescaled by `scale ≥ 1`.
pub fn named_lattice(name: Named, scale: Option<i64>) -> Result<GramLattice> {
    let gram = match name {
        Named::U => vec![vec![0, 1], vec![1, 0]],
        Named::A(h) => {
            if h == 0 {
                return Err(Error::UnknownName("A0".into()));
            }
            let edges: Vec<(usize, usize)> = (1..h).map(|i| (i - 1, i)).collect();
            cartan_negative(&edges, h)
        }
        Named::E6 => e6_gram(),
        Named::E8 => e8_gram(),
        Named::H5 => vec![vec![2, 1], vec![1, -2]],
        Named::K23 => vec![vec![-12, 1], vec![1, -2]],
        Named::Omega => vec![vec![-6, 0, -3], vec![0, -6, 9], vec![-3, 9, -18]],
        Named::E6Dual3 => {
            let inv = matrix::inverse_rational(&matrix::to_rational(&matrix::from_i64(&e6_gram()))).unwrap();
            inv.iter()
                .map(|row| {
                    row.iter()
                        .map(|x| {
                            let v = x * BigRational::from_integer(BigInt::from(3));
                            v.to_integer().to_i64().unwrap()
                        })
                        .collect()
                })
                .collect()
        }
        Named::Diagonal(d) => {
            if d == 0 || d % 2 != 0 {
                return Err(Error::InvalidDiagonal(d));
            }
            vec![vec![d]]
        }
    };
    let lattice = GramLattice::new(gram)?;
    match scale {
        None => Ok(lattice),
        Some(t) => lattice.rescale(t),
    }
}

impl GramLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        for i in 0..n {
            if gram[i][i] % 2 != 0 {
                return Err(Error::OddDiagonal(i));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        Ok(GramLattice { gram })
    }

    pub fn zero() -> Self {
        GramLattice { gram: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub(crate) fn gram_big(&self) -> IntMatrix {
        matrix::from_i64(&self.gram)
    }

    pub fn inner(&self, x: &[i64], y: &[i64]) -> i128 {
        let mut s: i128 = 0;
        for (i, row) in self.gram.iter().enumerate() {
            if x[i] == 0 {
                continue;
            }
            let t: i128 = row.iter().zip(y).map(|(g, c)| *g as i128 * *c as i128).sum();
            s += x[i] as i128 * t;
        }
        s
    }

    pub fn square(&self, x: &[i64]) -> i128 {
        self.inner(x, x)
    }

    pub fn direct_sum(&self, other: &GramLattice) -> GramLattice {
        let (r, s) = (self.rank(), other.rank());
        let mut g = vec![vec![0i64; r + s]; r + s];
        for i in 0..r {
            g[i][..r].copy_from_slice(&self.gram[i]);
        }
        for i in 0..s {
            g[r + i][r..].copy_from_slice(&other.gram[i]);
        }
        GramLattice { gram: g }
    }

    /// The lattice `L(t)`.
    pub fn rescale(&self, t: i64) -> Result<GramLattice> {
        if t <= 0 {
            return Err(Error::InvalidScale(t));
        }
        self.map_entries(|x| x.checked_mul(t))
    }

    /// The lattice `L(−1)`.
    pub fn negated(&self) -> GramLattice {
        GramLattice { gram: self.gram.iter().map(|r| r.iter().map(|x| -x).collect()).collect() }
    }

    fn map_entries(&self, f: impl Fn(i64) -> Option<i64>) -> Result<GramLattice> {
        let gram = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| f(x).ok_or(Error::Overflow)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(GramLattice { gram })
    }

    pub fn determinant(&self) -> BigInt {
        matrix::determinant(&self.gram_big())
    }

    /// Counts `(positive, negative, zero)` pivots of an exact symmetric elimination.
    pub fn inertia(&self) -> (usize, usize, usize) {
        let mut a: Vec<Vec<BigRational>> = matrix::to_rational(&self.gram_big());
        let mut active: Vec<usize> = (0..self.rank()).collect();
        let (mut pos, mut neg) = (0, 0);
        while !active.is_empty() {
            if let Some(k) = active.iter().position(|&i| !a[i][i].is_zero()) {
                let i = active.remove(k);
                let piv = a[i][i].clone();
                if piv.is_positive() {
                    pos += 1;
                } else {
                    neg += 1;
                }
                for &r in &active {
                    for &c in &active {
                        let t = &a[r][i] * &a[i][c] / &piv;
                        a[r][c] -= t;
                    }
                }
                continue;
            }
            let pair = active
                .iter()
                .enumerate()
                .find_map(|(k, &i)| active[k + 1..].iter().find(|&&j| !a[i][j].is_zero()).map(|&j| (i, j)));
            let Some((i, j)) = pair else { break };
            active.retain(|&x| x != i && x != j);
            pos += 1;
            neg += 1;
            let b = a[i][j].clone();
            for &r in &active {
                for &c in &active {
                    let t = (&a[r][i] * &a[j][c] + &a[r][j] * &a[i][c]) / &b;
                    a[r][c] -= t;
                }
            }
        }
        (pos, neg, self.rank() - pos - neg)
    }

    pub fn signature(&self) -> Result<Signature> {
        match self.inertia() {
            (p, n, 0) => Ok(Signature::new(p, n)),
            _ => Err(Error::Degenerate),
        }
    }

    fn smith(&self) -> Result<matrix::Smith> {
        if self.determinant().is_zero() {
            return Err(Error::Degenerate);
        }
        let n = self.rank();
        Ok(matrix::smith_normal_form(&self.gram_big(), n, n))
    }

    /// Elementary divisors of `A_L = L^∨ / L` greater than 1.
    pub fn discriminant_group(&self) -> Result<Vec<BigInt>> {
        Ok(self.smith()?.diagonal.into_iter().filter(|d| !d.is_one()).collect())
    }

    pub fn discriminant_form(&self) -> Result<DiscriminantForm> {
        let n = self.rank();
        let smith = self.smith()?;
        let g = self.gram_big();
        let projection = matrix::mul(&smith.left, &g, n, n);
        let mut orders = Vec::new();
        let mut lifts = Vec::new();
        let mut rows = Vec::new();
        for (i, d) in smith.diagonal.iter().enumerate() {
            if d.is_one() {
                continue;
            }
            let d64 = d.to_i64().ok_or(Error::Overflow)?;
            orders.push(d64);
            let lift: Vec<BigRational> = (0..n)
                .map(|k| BigRational::new(smith.right[k][i].clone(), d.clone()))
                .collect();
            lifts.push(lift);
            rows.push((projection[i].clone(), d.clone()));
        }
        let gram_q = matrix::to_rational(&g);
        let pair = |x: &[BigRational], y: &[BigRational]| -> BigRational {
            let mut s = BigRational::zero();
            for i in 0..n {
                if x[i].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !y[j].is_zero() {
                        s += &x[i] * &gram_q[i][j] * &y[j];
                    }
                }
            }
            s
        };
        let reduce = |v: BigRational, m: i64| -> Result<Rational64> {
            let m = BigRational::from_integer(BigInt::from(m));
            let t = &v / &m;
            let r = (&t - t.floor()) * m;
            Ok(Rational64::new(
                r.numer().to_i64().ok_or(Error::Overflow)?,
                r.denom().to_i64().ok_or(Error::Overflow)?,
            ))
        };
        let k = lifts.len();
        let mut gram = vec![vec![Rational64::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                let v = pair(&lifts[i], &lifts[j]);
                gram[i][j] = if i == j { reduce(v, 2)? } else { reduce(v, 1)? };
            }
        }
        let form = FiniteQuadraticForm::new(orders, gram)?;
        Ok(DiscriminantForm { form, lifts, rows })
    }

    /// Gram matrix `B G Bᵀ` of the sublattice with basis rows `basis`.
    pub fn sublattice(&self, basis: &[Vec<i64>]) -> Result<GramLattice> {
        for b in basis {
            if b.len() != self.rank() {
                return Err(Error::Dimension { expected: self.rank(), got: b.len() });
            }
        }
        let gram = basis
            .iter()
            .map(|x| {
                basis
                    .iter()
                    .map(|y| i64::try_from(self.inner(x, y)).map_err(|_| Error::Overflow))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GramLattice::new(gram)
    }

    /// Basis of the saturated sublattice `{x : (x, v) = 0 for all v in vectors}`.
    pub fn orthogonal_basis(&self, vectors: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
        let n = self.rank();
        let g = self.gram_big();
        let rows: IntMatrix = vectors
            .iter()
            .map(|v| {
                if v.len() != n {
                    return Err(Error::Dimension { expected: n, got: v.len() });
                }
                let vb: Vec<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
                Ok(matrix::mat_vec(&g, &vb))
            })
            .collect::<Result<_>>()?;
        if rows.is_empty() {
            return Ok((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect());
        }
        matrix::integer_kernel(&rows, rows.len(), n)
            .iter()
            .map(|v| matrix::vec_to_i64(v).ok_or(Error::Overflow))
            .collect()
    }

    /// The orthogonal complement of a primitive vector of nonzero square.
    pub fn orthogonal_complement(&self, v: &PrimitiveVector) -> Result<GramLattice> {
        Ok(self.orthogonal_complement_with_basis(v)?.0)
    }

    pub fn orthogonal_complement_with_basis(&self, v: &PrimitiveVector) -> Result<(GramLattice, Vec<Vec<i64>>)> {
        let c = v.coords();
        if c.len() != self.rank() {
            return Err(Error::Dimension { expected: self.rank(), got: c.len() });
        }
        if self.square(c) == 0 {
            return Err(Error::IsotropicVector);
        }
        let basis = self.orthogonal_basis(&[c.to_vec()])?;
        Ok((self.sublattice(&basis)?, basis))
    }

    /// Primitive vectors of the given square with coordinates in `[-bound, bound]`,
    /// in lexicographic order with coordinate values ordered `0, 1, −1, 2, −2, …`.
    pub fn primitive_vectors(&self, square: i64, bound: i64) -> PrimitiveVectors<'_> {
        let mut values = vec![0i64];
        for k in 1..=bound.max(0) {
            values.push(k);
            values.push(-k);
        }
        PrimitiveVectors { lattice: self, square: square as i128, values, index: Some(vec![0; self.rank()]) }
    }

    /// The first primitive vector of the given square within the box, if any.
    pub fn search_primitive_vector(&self, square: i64, bound: i64) -> Option<PrimitiveVector> {
        self.primitive_vectors(square, bound).next()
    }
}

impl fmt::Display for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .gram
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

pub struct PrimitiveVectors<'a> {
    lattice: &'a GramLattice,
    square: i128,
    values: Vec<i64>,
    index: Option<Vec<usize>>,
}

impl Iterator for PrimitiveVectors<'_> {
    type Item = PrimitiveVector;

    fn next(&mut self) -> Option<PrimitiveVector> {
        let n = self.lattice.rank();
        loop {
            let idx = self.index.as_mut()?;
            let v: Vec<i64> = idx.iter().map(|&i| self.values[i]).collect();
            let mut k = n;
            loop {
                if k == 0 {
                    self.index = None;
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < self.values.len() {
                    break;
                }
                idx[k] = 0;
            }
            if n > 0 && self.lattice.square(&v) == self.square {
                if let Ok(p) = PrimitiveVector::new(v) {
                    return Some(p);
                }
            }
        }
    }
}

/// The discriminant form of a lattice together with the dual-basis lifts of
/// its generators and the projection `L^∨ → A_L`.
#[derive(Debug, Clone)]
pub struct DiscriminantForm {
    pub form: FiniteQuadraticForm,
    /// Lifts of the generators to `L^∨ ⊂ L ⊗ Q`, in lattice coordinates.
    pub lifts: Vec<Vec<BigRational>>,
    rows: Vec<(Vec<BigInt>, BigInt)>,
}

impl DiscriminantForm {
    /// The class in `A_L` of a dual vector; `None` if `x ∉ L^∨`.
    pub fn class_of(&self, lattice: &GramLattice, x: &[BigRational]) -> Option<Element> {
        let g = matrix::to_rational(&lattice.gram_big());
        for row in &g {
            let s: BigRational = row.iter().zip(x).map(|(a, b)| a * b).sum();
            if !s.is_integer() {
                return None;
            }
        }
        let mut out = Vec::with_capacity(self.rows.len());
        for (row, d) in &self.rows {
            let s: BigRational = row
                .iter()
                .zip(x)
                .map(|(a, b)| BigRational::from_integer(a.clone()) * b)
                .sum();
            debug_assert!(s.is_integer());
            out.push(s.to_integer().mod_floor(d).to_i64()?);
        }
        Some(out)
    }
}
