//! Gauss sums `Σ exp(πi·q(x))` and the Milgram signature mod 8.

use super::FiniteQuadraticForm;
use crate::error::{Error, Result};
use num_integer::Integer;
use std::f64::consts::PI;

/// Allowed distance between the normalized Gauss sum and the nearest eighth root of unity.
pub const GAUSS_TOLERANCE: f64 = 1e-6;

const DIRECT_CAP: i64 = 1_000_000;
const EXACT_CAP: i64 = 1_000;

/// Numerical Gauss sum over the whole group, as `(re, im)`.
pub fn gauss_sum(form: &FiniteQuadraticForm) -> (f64, f64) {
    let den = form.denominator() as f64;
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for x in form.elements() {
        let k = form.q_scaled(&x) as f64;
        let (s, c) = (PI * k / den).sin_cos();
        re += c;
        im += s;
    }
    (re, im)
}

fn phase_of(form: &FiniteQuadraticForm) -> Result<i64> {
    let (re, im) = gauss_sum(form);
    let n = (form.order() as f64).sqrt();
    let (re, im) = (re / n, im / n);
    let s = (im.atan2(re) / (PI / 4.0)).round() as i64;
    let (ts, tc) = (PI / 4.0 * s as f64).sin_cos();
    if ((re - tc).powi(2) + (im - ts).powi(2)).sqrt() > GAUSS_TOLERANCE {
        return Err(Error::DegenerateForm);
    }
    Ok(s.rem_euclid(8))
}

impl FiniteQuadraticForm {
    /// Signature residue mod 8 from the Gauss sum, computed per Sylow subgroup
    /// (directly for parts up to 10⁶ elements, block by block beyond).
    pub fn milgram_signature(&self) -> Result<i64> {
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        let mut total = 0;
        for p in self.primes() {
            let part = self.p_part(p);
            if part.order() <= DIRECT_CAP {
                total += phase_of(&part)?;
            } else {
                for (component, _) in part.orthogonal_decomposition()? {
                    let block = component.to_form()?;
                    if block.order() > DIRECT_CAP {
                        return Err(Error::TooLarge("Gauss sum"));
                    }
                    total += phase_of(&block)?;
                }
            }
        }
        Ok(total.rem_euclid(8))
    }

    /// Exact Milgram signature in the cyclotomic ring `Z[ζ_L]`, for `|A| ≤ 10³`.
    ///
    /// The Gauss sum `G` satisfies `G² = |A|·ζ₄^s`; the residue of `s` mod 4 is
    /// found by an exact identity modulo `Φ_L`, the reality of `G·ζ₈^{-s}` is
    /// checked exactly, and its sign (a real number of modulus `√|A| ≥ 1`) fixes
    /// `s` mod 8.
    pub fn milgram_signature_exact(&self) -> Result<i64> {
        if self.order() > EXACT_CAP {
            return Err(Error::TooLarge("exact Gauss sum"));
        }
        if !self.is_nondegenerate() {
            return Err(Error::DegenerateForm);
        }
        let two_d = 2 * self.denominator();
        let l = two_d.lcm(&8) as usize;
        let step = l / two_d as usize;
        let mut g = vec![0i128; l];
        for x in self.elements() {
            g[self.q_scaled(&x) as usize * step] += 1;
        }
        let cyclo = cyclotomic(l);
        let sq = mul_mod_xl(&g, &g);
        let n = self.order() as i128;
        let quarter = l / 4;
        let t = (0..4)
            .find(|&t| {
                let mut d = sq.clone();
                d[(t * quarter) % l] -= n;
                reduce_mod(&d, &cyclo).iter().all(|&c| c == 0)
            })
            .ok_or(Error::DegenerateForm)?;
        let eighth = l / 8;
        let rotated = rotate(&g, (l - (t * eighth) % l) % l);
        let conj = conjugate(&rotated);
        let diff: Vec<i128> = rotated.iter().zip(&conj).map(|(a, b)| a - b).collect();
        if !reduce_mod(&diff, &cyclo).iter().all(|&c| c == 0) {
            return Err(Error::DegenerateForm);
        }
        let real: f64 = rotated
            .iter()
            .enumerate()
            .map(|(j, &c)| c as f64 * (2.0 * PI * j as f64 / l as f64).cos())
            .sum();
        let s = if real > 0.0 { t as i64 } else { t as i64 + 4 };
        Ok(s.rem_euclid(8))
    }
}

fn mul_mod_xl(a: &[i128], b: &[i128]) -> Vec<i128> {
    let l = a.len();
    let mut out = vec![0i128; l];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                out[(i + j) % l] += x * y;
            }
        }
    }
    out
}

fn rotate(a: &[i128], k: usize) -> Vec<i128> {
    let l = a.len();
    let mut out = vec![0i128; l];
    for (i, &x) in a.iter().enumerate() {
        out[(i + k) % l] = x;
    }
    out
}

fn conjugate(a: &[i128]) -> Vec<i128> {
    let l = a.len();
    let mut out = vec![0i128; l];
    for (i, &x) in a.iter().enumerate() {
        out[(l - i) % l] = x;
    }
    out
}

fn mobius(mut n: usize) -> i32 {
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial.
pub(crate) fn cyclotomic(n: usize) -> Vec<i128> {
    let divisors: Vec<usize> = (1..=n).filter(|d| n % d == 0).collect();
    let mut poly = vec![1i128];
    for &d in &divisors {
        if mobius(n / d) == 1 {
            let mut next = vec![0i128; poly.len() + d];
            for (i, &c) in poly.iter().enumerate() {
                next[i + d] += c;
                next[i] -= c;
            }
            poly = next;
        }
    }
    for &d in &divisors {
        if mobius(n / d) == -1 {
            let mut rem = poly.clone();
            let deg = rem.len() - 1;
            let mut quot = vec![0i128; deg + 1 - d];
            for i in (0..quot.len()).rev() {
                let c = rem[i + d];
                quot[i] = c;
                rem[i + d] -= c;
                rem[i] += c;
            }
            debug_assert!(rem.iter().all(|&c| c == 0));
            poly = quot;
        }
    }
    poly
}

fn reduce_mod(a: &[i128], modulus: &[i128]) -> Vec<i128> {
    let deg = modulus.len() - 1;
    let mut r = a.to_vec();
    for i in (deg..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        for (k, &m) in modulus.iter().enumerate() {
            r[i - deg + k] -= c * m;
        }
    }
    r.truncate(deg);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic(105).len() - 1, 48);
    }

    #[test]
    fn w_block_signatures() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23] {
            let plus = FiniteQuadraticForm::w_block(p, 1, 1).unwrap();
            let minus = FiniteQuadraticForm::w_block(p, 1, -1).unwrap();
            assert_eq!(plus.milgram_signature().unwrap(), (1 - p).rem_euclid(8), "p={p}");
            assert_eq!(minus.milgram_signature().unwrap(), (5 - p).rem_euclid(8), "p={p}");
            assert_eq!(plus.milgram_signature_exact().unwrap(), (1 - p).rem_euclid(8));
            assert_eq!(minus.milgram_signature_exact().unwrap(), (5 - p).rem_euclid(8));
        }
        assert_eq!(FiniteQuadraticForm::trivial().milgram_signature().unwrap(), 0);
    }

    #[test]
    fn two_adic_cyclic_signatures() {
        // q of <2k> on Z/2k is 1/(2k); <2k> has signature 1.
        for k in 1..=12 {
            let f = FiniteQuadraticForm::cyclic(2 * k, Rational64::new(1, 2 * k)).unwrap();
            assert_eq!(f.milgram_signature().unwrap(), 1);
            assert_eq!(f.milgram_signature_exact().unwrap(), 1);
            assert_eq!(f.negate().milgram_signature().unwrap(), 7);
        }
    }

    #[test]
    fn degenerate_forms_rejected() {
        let f = FiniteQuadraticForm::cyclic(2, Rational64::new(0, 1)).unwrap();
        assert!(f.milgram_signature().is_err());
    }
}
