//! Modular arithmetic for r-Fubini residues.
//!
//! Nothing here divides modulo `s`. The r-Fubini sum is evaluated through
//! the weighted values `m! · {n, m}_r`, which are integers given directly by
//! a signed sum, so `m!` never has to be inverted.

use std::fmt;
use std::num::NonZeroU64;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A positive modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus(NonZeroU64);

impl Modulus {
    pub fn new(s: u64) -> Result<Self> {
        NonZeroU64::new(s).map(Self).ok_or(Error::ZeroModulus)
    }

    pub fn get(self) -> u64 {
        self.0.get()
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.get() as u128) as u64
    }

    fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.get() as u128) as u64
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        let s = self.get();
        if a >= b {
            a - b
        } else {
            s - (b - a)
        }
    }

    fn reduce(self, v: u64) -> u64 {
        v % self.get()
    }
}

impl TryFrom<u64> for Modulus {
    type Error = Error;

    fn try_from(s: u64) -> Result<Self> {
        Self::new(s)
    }
}

impl From<Modulus> for u64 {
    fn from(s: Modulus) -> u64 {
        s.get()
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.get())
    }
}

/// A value in `[0, s)` tagged with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: u64, modulus: Modulus) -> Self {
        Self {
            value: modulus.reduce(value),
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    pub p: u64,
    pub m: u32,
}

impl PrimePower {
    pub fn value(&self) -> u64 {
        self.p.pow(self.m)
    }
}

/// Canonical factorization: primes strictly increasing, product equal to
/// the modulus, empty exactly when the modulus is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerFactorization {
    modulus: Modulus,
    factors: Vec<PrimePower>,
}

impl PrimePowerFactorization {
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    /// Exponent of 2 in the modulus (0 for odd moduli).
    pub fn two_exponent(&self) -> u32 {
        self.factors.iter().find(|f| f.p == 2).map_or(0, |f| f.m)
    }

    pub fn pairs(&self) -> Vec<(u64, u32)> {
        self.factors.iter().map(|f| (f.p, f.m)).collect()
    }
}

/// Trial division.
pub fn factorize(s: Modulus) -> PrimePowerFactorization {
    let mut rest = s.get();
    let mut factors = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        if rest.is_multiple_of(p) {
            let mut m = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                m += 1;
            }
            factors.push(PrimePower { p, m });
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push(PrimePower { p: rest, m: 1 });
    }
    PrimePowerFactorization {
        modulus: s,
        factors,
    }
}

/// `φ(s) = Π p^(m-1) (p-1)`.
pub fn totient(s: Modulus) -> u64 {
    factorize(s)
        .factors()
        .iter()
        .map(|f| f.p.pow(f.m - 1) * (f.p - 1))
        .product()
}

/// `base^exp mod s` with `0^0 = 1`. Negative bases are reduced first.
pub fn mod_pow(base: i64, exp: u64, s: Modulus) -> Residue {
    let modulus = s.get() as i128;
    let b = (base as i128).rem_euclid(modulus) as u64;
    Residue::new(pow_mod_u64(b, exp, s), s)
}

fn pow_mod_u64(mut base: u64, mut exp: u64, s: Modulus) -> u64 {
    let mut acc = s.reduce(1);
    base = s.reduce(base);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = s.mul(acc, base);
        }
        base = s.mul(base, base);
        exp >>= 1;
    }
    acc
}

/// `(j-1)(j-2)...(j-r+1) mod s`.
fn falling_product_mod(j: usize, r: usize, s: Modulus) -> u64 {
    ((j + 1 - r)..j).fold(s.reduce(1), |acc, f| s.mul(acc, f as u64))
}

/// Row `row` of Pascal's triangle modulo `s`.
fn pascal_row_mod(row: usize, s: Modulus) -> Vec<u64> {
    let mut cur = vec![s.reduce(1)];
    for _ in 0..row {
        cur = next_pascal_row(&cur, s);
    }
    cur
}

fn next_pascal_row(prev: &[u64], s: Modulus) -> Vec<u64> {
    let mut next = Vec::with_capacity(prev.len() + 1);
    next.push(prev[0]);
    for w in prev.windows(2) {
        next.push(s.add(w[0], w[1]));
    }
    next.push(*prev.last().expect("rows are nonempty"));
    next
}

/// `m! · {n, m}_r mod s`, evaluated as
/// `Σ_{j=r}^{m} (-1)^{m-j} C(m,j) j^{n-(r-1)} (j-1)!/(j-r)!` without
/// dividing. Zero when `m > n`.
pub fn weighted_r_stirling_mod(n: usize, m: usize, r: usize, s: Modulus) -> Result<Residue> {
    if r == 0 {
        return Err(Error::ZeroR);
    }
    if m < r {
        return Err(Error::LowerBelowR { m, r });
    }
    if m > n {
        return Ok(Residue::new(0, s));
    }
    let exp = (n - (r - 1)) as u64;
    let row = pascal_row_mod(m, s);
    let mut acc = 0;
    for (j, &c) in row.iter().enumerate().skip(r) {
        let term = s.mul(
            s.mul(c, pow_mod_u64(j as u64, exp, s)),
            falling_product_mod(j, r, s),
        );
        acc = if (m - j).is_multiple_of(2) {
            s.add(acc, term)
        } else {
            s.sub(acc, term)
        };
    }
    Ok(Residue::new(acc, s))
}

/// Smallest `k` with `(k + r)! ≡ 0 (mod s)`.
pub fn truncation_bound(r: usize, s: Modulus) -> usize {
    let mut fact = (1..=r as u64).fold(s.reduce(1), |acc, f| s.mul(acc, f));
    let mut k = 0;
    while fact != 0 {
        k += 1;
        fact = s.mul(fact, (k + r) as u64);
    }
    k
}

/// `F_{n,r} mod s` as `Σ_k weighted_r_stirling_mod(n+r, k+r, r, s)`,
/// stopping at the first `k` where `(k + r)! ≡ 0 (mod s)`. Every later
/// weighted term is a multiple of `(k + r)!` and vanishes.
pub fn r_fubini_mod(n: usize, r: usize, s: Modulus) -> Result<Residue> {
    if r == 0 {
        return Err(Error::ZeroR);
    }
    let bound = truncation_bound(r, s);
    let mut acc = 0;
    for k in (0..=n).take_while(|&k| k < bound) {
        let term = weighted_r_stirling_mod(n + r, k + r, r, s)?;
        acc = s.add(acc, term.value());
    }
    Ok(Residue::new(acc, s))
}

/// Incremental generator of `F_{0,r}, F_{1,r}, ... mod s`.
///
/// Term `n` is `Σ_j c_j · w_j · j^(n+1)` over `r <= j <= K + r - 1`, where
/// `w_j = (j-1)!/(j-r)!`, `K` is the truncation bound, and
/// `c_j = Σ_k (-1)^(k+r-j) C(k+r, j)` over the `k <= n` absorbed so far.
/// Once `k` reaches `K` the coefficients freeze and each further term costs
/// one multiply-accumulate per `j`.
#[derive(Debug, Clone)]
pub struct ResidueStream {
    r: usize,
    s: Modulus,
    cursor: usize,
    truncation_bound: Option<usize>,
    factorial: u64,
    pascal: Vec<u64>,
    coeff: Vec<u64>,
    weight: Vec<u64>,
    power: Vec<u64>,
}

pub fn residue_stream(r: usize, s: Modulus) -> Result<ResidueStream> {
    if r == 0 {
        return Err(Error::ZeroR);
    }
    Ok(ResidueStream {
        r,
        s,
        cursor: 0,
        truncation_bound: None,
        factorial: 0,
        pascal: pascal_row_mod(r, s),
        coeff: vec![0; r],
        weight: vec![0; r],
        power: vec![0; r],
    })
}

impl ResidueStream {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn modulus(&self) -> Modulus {
        self.s
    }

    /// Index of the next term to be produced.
    pub fn cursor(&self) -> usize {
        self.cursor
    }

    /// `Some(k)` once the smallest `k` with `(k + r)! ≡ 0` has been reached.
    pub fn truncation_bound(&self) -> Option<usize> {
        self.truncation_bound
    }

    /// Collects the next `count` residue values.
    pub fn take_values(&mut self, count: usize) -> Vec<u64> {
        self.by_ref().take(count).map(|x| x.value()).collect()
    }

    fn absorb(&mut self, k: usize) {
        let s = self.s;
        let r = self.r;
        let top = k + r;
        self.factorial = if k == 0 {
            (1..=r as u64).fold(s.reduce(1), |acc, f| s.mul(acc, f))
        } else {
            s.mul(self.factorial, top as u64)
        };
        if self.factorial == 0 {
            self.truncation_bound = Some(k);
            return;
        }
        if k > 0 {
            self.pascal = next_pascal_row(&self.pascal, s);
        }
        debug_assert_eq!(self.pascal.len(), top + 1);

        // New index j = k + r enters with weight and power j^(n+1), n = k.
        self.coeff.push(0);
        self.weight.push(falling_product_mod(top, r, s));
        self.power.push(pow_mod_u64(top as u64, k as u64 + 1, s));

        for j in r..=top {
            let c = self.pascal[j];
            self.coeff[j] = if (top - j).is_multiple_of(2) {
                s.add(self.coeff[j], c)
            } else {
                s.sub(self.coeff[j], c)
            };
        }
    }
}

impl Iterator for ResidueStream {
    type Item = Residue;

    fn next(&mut self) -> Option<Residue> {
        let s = self.s;
        let n = self.cursor;
        if self.truncation_bound.is_none() {
            self.absorb(n);
        }
        let mut acc = 0;
        for j in self.r..self.coeff.len() {
            let t = s.mul(s.mul(self.coeff[j], self.weight[j]), self.power[j]);
            acc = s.add(acc, t);
        }
        for j in self.r..self.power.len() {
            self.power[j] = s.mul(self.power[j], j as u64);
        }
        self.cursor += 1;
        Some(Residue::new(acc, s))
    }
}
