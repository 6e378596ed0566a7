//! Explicit integer isometries of even lattices: order, invariant and
//! co-invariant sublattices, induced action on the discriminant form and the
//! real spinor norm.
//!
//! A matrix `M` acts on coordinate columns; column `j` is the image of the
//! `j`-th basis vector, and `M` is an isometry exactly when `MᵀGM = G`.

use crate::error::{Error, Result};
use crate::fqf::Element;
use crate::lattice::{named_lattice, GramLattice, Named};
use crate::matrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeIsometry {
    lattice: GramLattice,
    matrix: Vec<Vec<i64>>,
}

/// How an isometry acts on the discriminant group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionKind {
    Identity,
    MinusIdentity,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscriminantAction {
    /// Orders of the discriminant generators.
    pub orders: Vec<i64>,
    /// Image of each generator, in generator coordinates.
    pub images: Vec<Element>,
    pub kind: ActionKind,
}

type RatVec = Vec<BigRational>;

fn checked(v: i128) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::Overflow)
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = a.len();
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![0i64; cols]; n];
    for i in 0..n {
        for j in 0..cols {
            let s: i128 = (0..b.len()).map(|k| a[i][k] as i128 * b[k][j] as i128).sum();
            out[i][j] = checked(s)?;
        }
    }
    Ok(out)
}

fn eye(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

impl LatticeIsometry {
    pub fn new(lattice: GramLattice, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = lattice.rank();
        if matrix.len() != n {
            return Err(Error::Dimension { expected: n, got: matrix.len() });
        }
        if let Some(r) = matrix.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension { expected: n, got: r.len() });
        }
        let g = lattice.gram();
        for row in 0..n {
            for col in 0..n {
                let mut s: i128 = 0;
                for i in 0..n {
                    if matrix[i][row] == 0 {
                        continue;
                    }
                    let t: i128 = (0..n).map(|j| g[i][j] as i128 * matrix[j][col] as i128).sum();
                    s += matrix[i][row] as i128 * t;
                }
                if s != g[row][col] as i128 {
                    return Err(Error::NotIsometry {
                        row,
                        col,
                        got: s.to_string(),
                        expected: g[row][col].to_string(),
                    });
                }
            }
        }
        Ok(LatticeIsometry { lattice, matrix })
    }

    pub fn identity(lattice: GramLattice) -> Self {
        let n = lattice.rank();
        LatticeIsometry { lattice, matrix: eye(n) }
    }

    pub fn minus_identity(lattice: GramLattice) -> Self {
        let n = lattice.rank();
        let matrix = (0..n).map(|i| (0..n).map(|j| if i == j { -1 } else { 0 }).collect()).collect();
        LatticeIsometry { lattice, matrix }
    }

    /// The reflection `x ↦ x − 2(x, v)/(v, v) · v`; it must preserve the lattice.
    pub fn reflection(lattice: GramLattice, v: &[i64]) -> Result<Self> {
        let n = lattice.rank();
        if v.len() != n {
            return Err(Error::Dimension { expected: n, got: v.len() });
        }
        let q = lattice.square(v);
        if q == 0 {
            return Err(Error::IsotropicVector);
        }
        let mut matrix = eye(n);
        for j in 0..n {
            let mut e = vec![0i64; n];
            e[j] = 1;
            let num = 2 * lattice.inner(&e, v);
            if num % q != 0 {
                return Err(Error::InvalidArgument(format!("reflection in {v:?} does not preserve the lattice")));
            }
            let c = num / q;
            for i in 0..n {
                matrix[i][j] = checked(matrix[i][j] as i128 - c * v[i] as i128)?;
            }
        }
        LatticeIsometry::new(lattice, matrix)
    }

    /// The order-3 isometry `ρ₀` of `A2` without nonzero fixed vectors.
    pub fn rho_zero() -> Self {
        let a2 = named_lattice(Named::A(2), None).expect("A2 is a named lattice");
        LatticeIsometry::new(a2, vec![vec![0, -1], vec![1, -1]]).expect("rho_0 preserves A2")
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == eye(self.rank())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LatticeIsometry) -> Result<Self> {
        if self.lattice != other.lattice {
            return Err(Error::InvalidArgument("isometries act on different lattices".into()));
        }
        Ok(LatticeIsometry { lattice: self.lattice.clone(), matrix: mat_mul(&self.matrix, &other.matrix)? })
    }

    pub fn power(&self, k: u32) -> Result<Self> {
        let mut out = LatticeIsometry::identity(self.lattice.clone());
        for _ in 0..k {
            out = self.compose(&out)?;
        }
        Ok(out)
    }

    /// The smallest `k ≤ cap` with `f^k = id`, or `None` if the cap is exceeded.
    pub fn order_of(&self, cap: u32) -> Option<u32> {
        let id = eye(self.rank());
        let mut current = self.matrix.clone();
        for k in 1..=cap {
            if current == id {
                return Some(k);
            }
            current = mat_mul(&self.matrix, &current).ok()?;
        }
        None
    }

    pub fn order(&self) -> Option<u32> {
        self.order_of(60)
    }

    /// Basis (rows) of the saturated kernel of `M − I`.
    pub fn invariant_basis(&self) -> Result<Vec<Vec<i64>>> {
        let n = self.rank();
        let diff: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| self.matrix[i][j] - i64::from(i == j)).collect()).collect();
        matrix::integer_kernel(&matrix::from_i64(&diff), n, n)
            .iter()
            .map(|v| matrix::vec_to_i64(v).ok_or(Error::Overflow))
            .collect()
    }

    pub fn coinvariant_basis(&self) -> Result<Vec<Vec<i64>>> {
        let inv = self.invariant_basis()?;
        if inv.is_empty() {
            return Ok(eye(self.rank()));
        }
        self.lattice.orthogonal_basis(&inv)
    }

    pub fn invariant_lattice(&self) -> Result<GramLattice> {
        self.lattice.sublattice(&self.invariant_basis()?)
    }

    pub fn coinvariant_lattice(&self) -> Result<GramLattice> {
        self.lattice.sublattice(&self.coinvariant_basis()?)
    }

    fn apply_rational(&self, x: &[BigRational]) -> RatVec {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).map(|(m, c)| BigRational::from_integer(BigInt::from(*m)) * c).sum())
            .collect()
    }

    /// The induced isometry of `(A_L, q_L)`, computed on dual-basis lifts.
    pub fn discriminant_action(&self) -> Result<DiscriminantAction> {
        let df = self.lattice.discriminant_form()?;
        let form = &df.form;
        let k = form.num_generators();
        let mut images = Vec::with_capacity(k);
        for lift in &df.lifts {
            let image = self.apply_rational(lift);
            let class = df
                .class_of(&self.lattice, &image)
                .ok_or_else(|| Error::Data("image of a dual vector left the dual lattice".into()))?;
            images.push(class);
        }
        let unit = |i: usize, c: i64| {
            let mut e = vec![0i64; k];
            e[i] = c;
            form.reduce(&e)
        };
        let kind = if (0..k).all(|i| images[i] == unit(i, 1)) {
            ActionKind::Identity
        } else if (0..k).all(|i| images[i] == unit(i, -1)) {
            ActionKind::MinusIdentity
        } else {
            ActionKind::Other
        };
        Ok(DiscriminantAction { orders: form.orders().to_vec(), images, kind })
    }

    fn bilinear(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let g = self.lattice.gram();
        let mut s = BigRational::zero();
        for (i, row) in g.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            let t: BigRational = row.iter().zip(y).map(|(a, b)| BigRational::from_integer(BigInt::from(*a)) * b).sum();
            s += &x[i] * t;
        }
        s
    }

    fn reflect(&self, v: &[BigRational], x: &[BigRational]) -> RatVec {
        let c = BigRational::from_integer(BigInt::from(2)) * self.bilinear(x, v) / self.bilinear(v, v);
        x.iter().zip(v).map(|(a, b)| a - &c * b).collect()
    }

    /// An orthogonal basis of `L ⊗ Q` with nonzero squares, built by
    /// symmetric pivoting on the standard basis.
    fn orthogonal_rational_basis(&self) -> Result<Vec<RatVec>> {
        let n = self.rank();
        let mut pool: Vec<RatVec> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        let mut out = Vec::with_capacity(n);
        while !pool.is_empty() {
            let pivot = match pool.iter().position(|w| !self.bilinear(w, w).is_zero()) {
                Some(i) => pool.remove(i),
                None => {
                    let (i, j) = (0..pool.len())
                        .flat_map(|i| (i + 1..pool.len()).map(move |j| (i, j)))
                        .find(|&(i, j)| !self.bilinear(&pool[i], &pool[j]).is_zero())
                        .ok_or(Error::Degenerate)?;
                    let sum: RatVec = pool[i].iter().zip(&pool[j]).map(|(a, b)| a + b).collect();
                    pool.remove(i);
                    sum
                }
            };
            let q = self.bilinear(&pivot, &pivot);
            for w in pool.iter_mut() {
                let c = self.bilinear(w, &pivot) / &q;
                for (a, b) in w.iter_mut().zip(&pivot) {
                    *a -= &c * b;
                }
            }
            pool.retain(|w| w.iter().any(|c| !c.is_zero()));
            out.push(pivot);
        }
        if out.len() != n {
            return Err(Error::Degenerate);
        }
        Ok(out)
    }

    fn factor_along(&self, basis: &[RatVec]) -> Vec<RatVec> {
        let mut images: Vec<RatVec> = basis.iter().map(|e| self.apply_rational(e)).collect();
        let mut reflections: Vec<RatVec> = Vec::new();
        for i in 0..basis.len() {
            let e = &basis[i];
            if images[i] == *e {
                continue;
            }
            let diff: RatVec = e.iter().zip(&images[i]).map(|(a, b)| a - b).collect();
            let mut step = Vec::new();
            if !self.bilinear(&diff, &diff).is_zero() {
                step.push(diff);
            } else {
                step.push(e.iter().zip(&images[i]).map(|(a, b)| a + b).collect());
                step.push(e.clone());
            }
            for v in step {
                for y in images.iter_mut() {
                    *y = self.reflect(&v, y);
                }
                reflections.push(v);
            }
        }
        reflections
    }

    /// Reflection vectors `v₁, …, v_r` with `f = s_{v₁} ∘ ⋯ ∘ s_{v_r}` over `Q`.
    pub fn reflection_factorization(&self) -> Result<Vec<RatVec>> {
        let basis = self.orthogonal_rational_basis()?;
        let reflections = self.factor_along(&basis);
        self.check_reconstruction(&reflections)?;
        Ok(reflections)
    }

    fn check_reconstruction(&self, reflections: &[RatVec]) -> Result<()> {
        let n = self.rank();
        for j in 0..n {
            let mut x: RatVec = (0..n).map(|i| if i == j { BigRational::one() } else { BigRational::zero() }).collect();
            for v in reflections.iter().rev() {
                x = self.reflect(v, &x);
            }
            for i in 0..n {
                if x[i] != BigRational::from_integer(BigInt::from(self.matrix[i][j])) {
                    return Err(Error::Data(format!("reflection product differs from the isometry at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    fn norm_of(&self, reflections: &[RatVec]) -> i8 {
        let negatives = reflections.iter().filter(|v| self.bilinear(v, v).is_positive()).count();
        if negatives % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Real spinor norm `∏ sign(−vᵢ²/2)` over a reflection factorization.
    pub fn spinor_norm(&self) -> Result<i8> {
        let basis = self.orthogonal_rational_basis()?;
        let forward = self.factor_along(&basis);
        self.check_reconstruction(&forward)?;
        let reversed: Vec<RatVec> = basis.iter().rev().cloned().collect();
        let backward = self.factor_along(&reversed);
        self.check_reconstruction(&backward)?;
        let sn = self.norm_of(&forward);
        if sn != self.norm_of(&backward) {
            return Err(Error::Data("spinor norm depends on the factorization".into()));
        }
        Ok(sn)
    }

    /// Conjugate by a change of basis: `P` has the new basis as columns and
    /// `p_inv` is its integer inverse.
    pub fn change_basis(&self, p: &[Vec<i64>], p_inv: &[Vec<i64>]) -> Result<Self> {
        let n = self.rank();
        if mat_mul(p, p_inv)? != eye(n) {
            return Err(Error::InvalidArgument("change of basis is not invertible over Z".into()));
        }
        let pt: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| p[j][i]).collect()).collect();
        let gram = mat_mul(&pt, &mat_mul(self.lattice.gram(), p)?)?;
        let matrix = mat_mul(p_inv, &mat_mul(&self.matrix, p)?)?;
        LatticeIsometry::new(GramLattice::new(gram)?, matrix)
    }
}

/// The block isometry `f ⊕ g` of the orthogonal sum.
pub fn direct_sum_isometry(f: &LatticeIsometry, g: &LatticeIsometry) -> LatticeIsometry {
    let (r, s) = (f.rank(), g.rank());
    let mut m = vec![vec![0i64; r + s]; r + s];
    for i in 0..r {
        m[i][..r].copy_from_slice(&f.matrix[i]);
    }
    for i in 0..s {
        m[r + i][r..].copy_from_slice(&g.matrix[i]);
    }
    LatticeIsometry { lattice: f.lattice.direct_sum(&g.lattice), matrix: m }
}

/// The Coxeter element `s₁ ⋯ s_h` of `A_h`, of order `h + 1` without fixed vectors.
pub fn coxeter_element(h: usize) -> Result<LatticeIsometry> {
    let lattice = named_lattice(Named::A(h), None)?;
    let mut out = LatticeIsometry::identity(lattice.clone());
    for i in 0..h {
        let mut v = vec![0i64; h];
        v[i] = 1;
        out = out.compose(&LatticeIsometry::reflection(lattice.clone(), &v)?)?;
    }
    Ok(out)
}
