//! Dense integer and rational matrices over arbitrary-precision integers.
//!
//! Matrices are row-major `Vec<Vec<_>>`. Dimensions are passed explicitly where
//! a matrix may have zero rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn from_i64(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn to_i64(m: &IntMatrix) -> Option<Vec<Vec<i64>>> {
    m.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect()
}

pub fn vec_to_i64(v: &[BigInt]) -> Option<Vec<i64>> {
    v.iter().map(|x| x.to_i64()).collect()
}

pub fn transpose(a: &IntMatrix, rows: usize, cols: usize) -> IntMatrix {
    (0..cols).map(|j| (0..rows).map(|i| a[i][j].clone()).collect()).collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn to_rational(a: &IntMatrix) -> RatMatrix {
    a.iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect()
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = t / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Inverse over Q by Gauss-Jordan elimination; `None` when singular.
pub fn inverse_rational(a: &RatMatrix) -> Option<RatMatrix> {
    let n = a.len();
    let mut m: RatMatrix = a.clone();
    let mut inv: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        inv.swap(p, c);
        let piv = m[c][c].clone();
        for j in 0..n {
            m[c][j] = &m[c][j] / &piv;
            inv[c][j] = &inv[c][j] / &piv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..n {
                    let t = &f * &m[c][j];
                    m[r][j] -= t;
                    let t = &f * &inv[c][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Smith normal form `left · a · right = diag(diagonal)` with unimodular transforms.
#[derive(Debug, Clone)]
pub struct Smith {
    pub left: IntMatrix,
    pub right: IntMatrix,
    /// Non-negative invariant factors, each dividing the next; length `min(rows, cols)`.
    pub diagonal: Vec<BigInt>,
}

fn swap_cols(m: &mut IntMatrix, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
}

fn row_axpy(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    let s = m[src].clone();
    for (x, y) in m[dst].iter_mut().zip(s.iter()) {
        *x += f * y;
    }
}

fn col_axpy(m: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        let t = f * &row[src];
        row[dst] += t;
    }
}

/// Replaces rows `(i, j)` by `(s·rᵢ + t·rⱼ, c·rᵢ + d·rⱼ)`.
fn row_mix(m: &mut IntMatrix, i: usize, j: usize, k: [&BigInt; 4]) {
    let (ri, rj) = (m[i].clone(), m[j].clone());
    for c in 0..ri.len() {
        m[i][c] = k[0] * &ri[c] + k[1] * &rj[c];
        m[j][c] = k[2] * &ri[c] + k[3] * &rj[c];
    }
}

/// Replaces columns `(i, j)` by `(s·cᵢ + t·cⱼ, c·cᵢ + d·cⱼ)`.
fn col_mix(m: &mut IntMatrix, i: usize, j: usize, k: [&BigInt; 4]) {
    for row in m.iter_mut() {
        let (x, y) = (row[i].clone(), row[j].clone());
        row[i] = k[0] * &x + k[1] * &y;
        row[j] = k[2] * &x + k[3] * &y;
    }
}

/// Unimodular `[[s, t], [−b/g, a/g]]` with `s·a + t·b = g = gcd(a, b)`.
fn gcd_step(a: &BigInt, b: &BigInt) -> [BigInt; 4] {
    let e = a.extended_gcd(b);
    [e.x, e.y, -(b / &e.gcd), a / &e.gcd]
}

pub fn smith_normal_form(a: &IntMatrix, rows: usize, cols: usize) -> Smith {
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let r = rows.min(cols);
    let mut rank = 0;
    for t in 0..r {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero() && best.map_or(true, |(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        rank = t + 1;
        d.swap(t, pi);
        u.swap(t, pi);
        swap_cols(&mut d, t, pj);
        swap_cols(&mut v, t, pj);
        loop {
            for i in t + 1..rows {
                if d[i][t].is_zero() {
                    continue;
                }
                if (&d[i][t] % &d[t][t]).is_zero() {
                    let q = -(&d[i][t] / &d[t][t]);
                    row_axpy(&mut d, i, t, &q);
                    row_axpy(&mut u, i, t, &q);
                } else {
                    let k = gcd_step(&d[t][t], &d[i][t]);
                    let k = [&k[0], &k[1], &k[2], &k[3]];
                    row_mix(&mut d, t, i, k);
                    row_mix(&mut u, t, i, k);
                }
            }
            let mut dirty = false;
            for j in t + 1..cols {
                if d[t][j].is_zero() {
                    continue;
                }
                if (&d[t][j] % &d[t][t]).is_zero() {
                    let q = -(&d[t][j] / &d[t][t]);
                    col_axpy(&mut d, j, t, &q);
                    col_axpy(&mut v, j, t, &q);
                } else {
                    let k = gcd_step(&d[t][t], &d[t][j]);
                    let k = [&k[0], &k[1], &k[2], &k[3]];
                    col_mix(&mut d, t, j, k);
                    col_mix(&mut v, t, j, k);
                    dirty = true;
                }
            }
            if !dirty || (t + 1..rows).all(|i| d[i][t].is_zero()) {
                break;
            }
        }
    }
    // diag(a, b) ↦ diag(g, ab/g) with L = [[s, t], [−b/g, a/g]], R = [[1, −tb/g], [1, sa/g]].
    for i in 0..rank {
        for j in i + 1..rank {
            if (&d[j][j] % &d[i][i]).is_zero() {
                continue;
            }
            let (a, b) = (d[i][i].clone(), d[j][j].clone());
            let e = a.extended_gcd(&b);
            let (s, t, g) = (e.x, e.y, e.gcd);
            let left = [s.clone(), t.clone(), -(&b / &g), &a / &g];
            row_mix(&mut u, i, j, [&left[0], &left[1], &left[2], &left[3]]);
            let one = BigInt::one();
            let right = [-(&t * &b / &g), &s * &a / &g];
            col_mix(&mut v, i, j, [&one, &one, &right[0], &right[1]]);
            d[i][i] = g.clone();
            d[j][j] = &a / &g * &b;
        }
    }
    for t in 0..rank {
        if d[t][t].is_negative() {
            d[t][t] = -d[t][t].clone();
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    let diagonal = (0..r).map(|i| d[i][i].clone()).collect();
    Smith { left: u, right: v, diagonal }
}

/// Row echelon form with a unimodular transform: `transform · m = echelon`.
/// Returns `(echelon, transform, rank)`; rows `rank..` of `echelon` vanish.
pub fn echelon_with_transform(m: &IntMatrix, rows: usize, cols: usize) -> (IntMatrix, IntMatrix, usize) {
    let mut e = m.clone();
    let mut t = identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let piv = (r..rows)
                .filter(|&i| !e[i][c].is_zero())
                .min_by(|&a, &b| e[a][c].abs().cmp(&e[b][c].abs()));
            let Some(p) = piv else { break };
            e.swap(r, p);
            t.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if e[i][c].is_zero() {
                    continue;
                }
                let q = -e[i][c].div_floor(&e[r][c]);
                row_axpy(&mut e, i, r, &q);
                row_axpy(&mut t, i, r, &q);
                if !e[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if (r..rows).all(|i| e[i][c].is_zero()) {
            continue;
        }
        if e[r][c].is_negative() {
            for x in e[r].iter_mut() {
                *x = -x.clone();
            }
            for x in t[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = -e[i][c].div_floor(&e[r][c]);
            row_axpy(&mut e, i, r, &q);
            row_axpy(&mut t, i, r, &q);
        }
        r += 1;
    }
    (e, t, r)
}

/// Hermite basis of the row lattice spanned by `gens` (each of length `dim`).
pub fn row_hermite(gens: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let (e, _, r) = echelon_with_transform(&gens.to_vec(), gens.len(), dim);
    e.into_iter().take(r).collect()
}

/// Basis of the saturated integer kernel `{x ∈ Z^cols : a·x = 0}`.
pub fn integer_kernel(a: &IntMatrix, rows: usize, cols: usize) -> Vec<Vec<BigInt>> {
    let at = transpose(a, rows, cols);
    let (_, t, r) = echelon_with_transform(&at, cols, rows);
    let kernel: Vec<Vec<BigInt>> = t.into_iter().skip(r).collect();
    if kernel.is_empty() {
        return kernel;
    }
    row_hermite(&kernel, cols)
}

/// Solves `y · basis = v` for integer `y` with `basis` square and invertible.
pub fn solve_in_basis(basis: &IntMatrix, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let n = basis.len();
    let bt = to_rational(&transpose(basis, n, n));
    let inv = inverse_rational(&bt)?;
    let mut y = Vec::with_capacity(n);
    for row in inv.iter() {
        let s: BigRational = row
            .iter()
            .zip(v)
            .map(|(x, c)| x * BigRational::from_integer(c.clone()))
            .sum();
        if !s.is_integer() {
            return None;
        }
        y.push(s.to_integer());
    }
    Some(y)
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}
