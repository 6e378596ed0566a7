//! Shared fixtures and brute-force oracles for lattice tests.
#![allow(dead_code)]

use k3n_core::{parse, FiniteQuadraticForm, GramLattice};
use std::collections::BTreeMap;

pub const CATALOGUE: &[&str] = &[
    "U", "U(2)", "U(3)", "A1", "A2", "A3", "A4", "A5", "A2(2)", "E6", "E8", "H5", "K23", "Omega", "E6dual3",
    "<2>", "<-4>", "<6>", "<-6>", "<10>", "U + A2", "U(3) + E6", "E8(2)", "A7",
];

pub fn lattice(expr: &str) -> GramLattice {
    parse(expr).unwrap().evaluate().unwrap()
}

pub struct XorShift(pub u64);

impl XorShift {
    pub fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

/// Random direct sums of catalogue lattices with rank ≤ 12 and |det| ≤ 10⁴.
pub fn random_sums(seed: u64, count: usize) -> Vec<(String, GramLattice)> {
    let mut rng = XorShift(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let k = 2 + rng.below(3);
        let parts: Vec<&str> = (0..k).map(|_| CATALOGUE[rng.below(CATALOGUE.len())]).collect();
        let expr = parts.join(" + ");
        let l = lattice(&expr);
        let det = l.determinant();
        if l.rank() <= 12 && det.magnitude() <= &10_000u32.into() {
            out.push((expr, l));
        }
    }
    out
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let mut adj = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != i)
                .map(|(_, r)| [&r[..j], &r[j + 1..]].concat())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * det(&minor);
        }
    }
    adj
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Counts of `(element order, q numerator, q denominator)` with `q ∈ [0, 2)`.
pub type Profile = BTreeMap<(i64, i64, i64), usize>;

fn reduced(num: i64, den: i64) -> (i64, i64) {
    let num = num.rem_euclid(2 * den);
    let g = gcd(num, den).max(1);
    (num / g, den / g)
}

/// Enumerates `L^∨/L` by closing the dual generators `adj(G) e_i / det` under
/// addition modulo `L`, and tabulates element orders and values of `q`.
pub fn coset_profile(l: &GramLattice) -> Profile {
    let g = l.gram();
    let n = g.len();
    let d = det(g).abs();
    assert!(d > 0);
    let adj = adjugate(g);
    let gens: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| adj[i][j].rem_euclid(d)).collect()).collect();
    let zero = vec![0i64; n];
    let mut seen = vec![zero.clone()];
    let mut frontier = vec![zero];
    while let Some(z) = frontier.pop() {
        for gen in &gens {
            let w: Vec<i64> = z.iter().zip(gen).map(|(a, b)| (a + b).rem_euclid(d)).collect();
            if !seen.contains(&w) {
                seen.push(w.clone());
                frontier.push(w);
            }
        }
    }
    let mut profile = Profile::new();
    for z in &seen {
        let gz: Vec<i64> = (0..n).map(|i| (0..n).map(|j| g[i][j] * z[j]).sum()).collect();
        assert!(gz.iter().all(|c| c % d == 0), "not a dual vector");
        let square: i64 = (0..n).map(|i| z[i] * gz[i]).sum();
        let order = (1..=d).find(|k| z.iter().all(|c| (k * c) % d == 0)).unwrap();
        let (num, den) = reduced(square, d * d);
        *profile.entry((order, num, den)).or_default() += 1;
    }
    profile
}

pub fn form_profile(f: &FiniteQuadraticForm) -> Profile {
    let mut profile = Profile::new();
    for x in f.elements() {
        let q = f.q(&x);
        let (num, den) = reduced(*q.numer(), *q.denom());
        *profile.entry((f.element_order(&x), num, den)).or_default() += 1;
    }
    profile
}

/// Even lattices of rank ≤ 4 with `0 < |det| ≤ 50`: all binary forms with
/// small entries, the catalogue members in range, and a random sample in
/// ranks 3 and 4.
pub fn small_lattices(seed: u64) -> Vec<GramLattice> {
    let mut out = Vec::new();
    for d in (-50..=50).filter(|d| d % 2 == 0 && *d != 0) {
        out.push(GramLattice::new(vec![vec![d]]).unwrap());
    }
    for a in (-8i64..=8).step_by(2) {
        for c in (-8..=8).step_by(2) {
            for b in -4..=4 {
                let dt = a * c - b * b;
                if dt != 0 && dt.abs() <= 50 {
                    out.push(GramLattice::new(vec![vec![a, b], vec![b, c]]).unwrap());
                }
            }
        }
    }
    for e in CATALOGUE {
        let l = lattice(e);
        if l.rank() <= 4 && det(l.gram()).abs() <= 50 {
            out.push(l);
        }
    }
    let mut rng = XorShift(seed);
    let mut sampled = 0;
    while sampled < 200 {
        let n = 3 + rng.below(2);
        let mut g = vec![vec![0i64; n]; n];
        for i in 0..n {
            g[i][i] = 2 * rng.range(-3, 3);
            for j in 0..i {
                let v = rng.range(-2, 2);
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        let dt = det(&g);
        if dt != 0 && dt.abs() <= 50 {
            out.push(GramLattice::new(g).unwrap());
            sampled += 1;
        }
    }
    out
}
