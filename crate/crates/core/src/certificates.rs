//! Finite claims behind the period formulas, checked exhaustively.
//!
//! Each certificate evaluates an exact integer expression over a fixed
//! parameter range and records every point where the expected congruence
//! fails. Reductions modulo 4, 8, 16 or 32 happen only at the very end.
//!
//! Several certificates share the shape
//!
//! ```text
//! Σ_{k=0}^{K} (-1)^{k+r-1} Σ_{l=⌊r/2⌋}^{⌊(k+r-1)/2⌋} C(k+r, 2l+1) g(l)
//! ```
//!
//! which [`OddColumnWeights`] evaluates with the two sums swapped: the
//! per-`l` coefficient `Σ_k (-1)^{k+r-1} C(k+r, 2l+1)` is computed once and
//! reused for every `n`. The value is identical; only the order of exact
//! additions changes.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};

use crate::combinatorics::{binomial, factorial};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub params: String,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateResult {
    pub id: String,
    pub ranges: String,
    /// Number of parameter points evaluated.
    pub checked: usize,
    pub passed: bool,
    pub counterexamples: Vec<Counterexample>,
}

impl CertificateResult {
    fn new(id: impl Into<String>, ranges: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            ranges: ranges.into(),
            checked: 0,
            passed: true,
            counterexamples: Vec::new(),
        }
    }

    fn check(
        &mut self,
        ok: bool,
        params: impl FnOnce() -> String,
        observed: impl FnOnce() -> String,
    ) {
        self.checked += 1;
        if !ok {
            self.passed = false;
            self.counterexamples.push(Counterexample {
                params: params(),
                observed: observed(),
            });
        }
    }
}

impl fmt::Display for CertificateResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            write!(f, "{} passed ({} entries)", self.id, self.checked)
        } else {
            write!(
                f,
                "{} FAILED ({} of {} entries)",
                self.id,
                self.counterexamples.len(),
                self.checked
            )
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CertificateId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
}

impl CertificateId {
    pub const ALL: [CertificateId; 8] = [
        CertificateId::C1,
        CertificateId::C2,
        CertificateId::C3,
        CertificateId::C4,
        CertificateId::C5,
        CertificateId::C6,
        CertificateId::C7,
        CertificateId::C8,
    ];
}

impl fmt::Display for CertificateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for CertificateId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CertificateId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownCertificate(s.to_string()))
    }
}

/// Tunable sweep sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateConfig {
    /// Exponents `m >= 10` at which C7 is evaluated.
    pub c7_exponents: Vec<u32>,
    /// Exponents for the C7 extension run.
    pub c7_extension_exponents: Vec<u32>,
    /// How many extra `n` values the C5/C8 extensions add past the stated window.
    pub extension_width: u32,
}

impl Default for CertificateConfig {
    fn default() -> Self {
        Self {
            c7_exponents: vec![10],
            c7_extension_exponents: vec![11],
            extension_width: 16,
        }
    }
}

pub fn run_certificate(id: CertificateId) -> CertificateResult {
    run_certificate_with(id, &CertificateConfig::default())
}

pub fn run_certificate_with(id: CertificateId, config: &CertificateConfig) -> CertificateResult {
    match id {
        CertificateId::C1 => certificate_c1(2..=33),
        CertificateId::C2 => certificate_c2(-64..=64, 0..=40),
        CertificateId::C3 => certificate_c3(1..=32, 9..=24),
        CertificateId::C4 => certificate_c4("C4", 1..=32, 9..=24),
        CertificateId::C5 => certificate_c5("C5", |m| (m - 1)..=(m + 14)),
        CertificateId::C6 => certificate_c6(2..=33),
        CertificateId::C7 => certificate_c7("C7", &config.c7_exponents, 9..=16),
        CertificateId::C8 => certificate_c8("C8", |m| (m - 1)..=(m + 6)),
    }
}

/// Supplementary runs beyond the stated ranges, reported on their own.
///
/// C4 is re-run on its `r = 1` slice; C5 and C8 on the next
/// `extension_width` values of `n`; C7 at the extension exponents.
pub fn run_extension(id: CertificateId, config: &CertificateConfig) -> Option<CertificateResult> {
    let w = config.extension_width;
    match id {
        CertificateId::C4 => Some(certificate_c4("C4[r=1]", 1..=1, 9..=24)),
        CertificateId::C5 => Some(certificate_c5("C5[ext]", move |m| (m + 15)..=(m + 14 + w))),
        CertificateId::C7 => Some(certificate_c7(
            "C7[ext]",
            &config.c7_extension_exponents,
            9..=16,
        )),
        CertificateId::C8 => Some(certificate_c8("C8[ext]", move |m| (m + 7)..=(m + 6 + w))),
        _ => None,
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn rem_euclid(v: &BigInt, modulus: u32) -> u32 {
    v.mod_floor(&BigInt::from(modulus))
        .to_u32()
        .expect("remainder fits")
}

fn odd_power(l: i64, n: u32) -> BigInt {
    Pow::pow(big(2 * l + 1), n + 1)
}

/// `a! / b!` for `a >= b >= 0`.
fn factorial_ratio(a: i64, b: i64) -> BigInt {
    assert!(a >= b && b >= 0, "factorial ratio {a}!/{b}! out of range");
    ((b + 1)..=a).fold(BigInt::one(), |acc, f| acc * f)
}

/// `P(l) = [½ (2l+1)^(n+1) l(l+1) (-2l²-2l+1) l] mod 8`.
pub fn p_value(l: i64, n: u32) -> u8 {
    let full = odd_power(l, n) * big(l * (l + 1)) * big(-2 * l * l - 2 * l + 1) * big(l);
    let (half, rem) = full.div_rem(&big(2));
    debug_assert!(rem.is_zero(), "l(l+1) is even");
    rem_euclid(&half, 8) as u8
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PTable {
    pub n: u32,
    pub values: BTreeMap<i64, u8>,
}

impl PTable {
    pub fn get(&self, l: i64) -> Option<u8> {
        self.values.get(&l).copied()
    }
}

pub fn build_p_table(n: u32, l_range: RangeInclusive<i64>) -> PTable {
    PTable {
        n,
        values: l_range.map(|l| (l, p_value(l, n))).collect(),
    }
}

/// `A(k, r, n) = [Σ_l C(k+2, 2l+r) P(l)] mod 8`, summed over the finitely
/// many `l` with `0 <= 2l + r <= k + 2`.
pub fn a_value(k: usize, r: i64, n: u32) -> u8 {
    let top = k as i64 + 2;
    let lo = Integer::div_ceil(&-r, &2);
    let hi = Integer::div_floor(&(top - r), &2);
    let mut acc = BigUint::zero();
    for l in lo..=hi {
        acc += binomial(k + 2, 2 * l + r) * p_value(l, n);
    }
    (acc % 8u32).to_u8().expect("reduced mod 8")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ATable {
    pub n: u32,
    pub k_max: usize,
    pub r_max: usize,
    entries: Vec<u8>,
}

impl ATable {
    /// `A(k, r, n)` for `1 <= k <= k_max`, `1 <= r <= r_max`.
    pub fn get(&self, k: usize, r: usize) -> Option<u8> {
        if !(1..=self.k_max).contains(&k) || !(1..=self.r_max).contains(&r) {
            return None;
        }
        Some(self.entries[(k - 1) * self.r_max + (r - 1)])
    }

    /// Entries violating `A(k,r) = A(k-1,r) + A(k-1,r-1) mod 8`, for
    /// `2 <= k` and `2 <= r` inside the table.
    pub fn pascal_violations(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for k in 2..=self.k_max {
            for r in 2..=self.r_max {
                let lhs = self.get(k, r).unwrap();
                let rhs = (self.get(k - 1, r).unwrap() + self.get(k - 1, r - 1).unwrap()) % 8;
                if lhs != rhs {
                    bad.push((k, r));
                }
            }
        }
        bad
    }

    /// Entries violating `A(k, r + 32) = A(k, r)` inside the table.
    pub fn shift_violations(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for k in 1..=self.k_max {
            for r in 1..=self.r_max.saturating_sub(32) {
                if self.get(k, r + 32) != self.get(k, r) {
                    bad.push((k, r));
                }
            }
        }
        bad
    }
}

pub fn build_a_table(n: u32, k_max: usize, r_max: usize) -> ATable {
    let mut entries = Vec::with_capacity(k_max * r_max);
    for k in 1..=k_max {
        for r in 1..=r_max {
            entries.push(a_value(k, r as i64, n));
        }
    }
    ATable {
        n,
        k_max,
        r_max,
        entries,
    }
}

/// Per-`l` coefficients `Σ_{k} (-1)^{k+r-1} C(k+r, 2l+1)` of the double sum
/// `Σ_{k=0}^{k_max} (-1)^{k+r-1} Σ_{l=⌊r/2⌋}^{⌊(k+r-1)/2⌋} C(k+r, 2l+1) g(l)`.
#[derive(Debug, Clone)]
pub struct OddColumnWeights {
    l_lo: usize,
    coeffs: Vec<BigInt>,
}

impl OddColumnWeights {
    pub fn new(r: usize, k_max: usize) -> Self {
        assert!(r >= 1, "column sums need r >= 1");
        let l_lo = r / 2;
        let l_hi = (k_max + r).saturating_sub(1) / 2;
        let mut coeffs = vec![BigInt::zero(); (l_hi + 1).saturating_sub(l_lo)];
        let mut row: Vec<BigInt> = vec![BigInt::one()];
        for t in 1..=(k_max + r) {
            let mut next = Vec::with_capacity(t + 1);
            next.push(BigInt::one());
            for w in row.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigInt::one());
            row = next;
            if t < r {
                continue;
            }
            let k = t - r;
            let positive = (k + r - 1).is_multiple_of(2);
            for l in l_lo..=((k + r - 1) / 2) {
                let c = &row[2 * l + 1];
                let slot = &mut coeffs[l - l_lo];
                if positive {
                    *slot += c;
                } else {
                    *slot -= c;
                }
            }
        }
        Self { l_lo, coeffs }
    }

    /// `Σ_l coeff(l) · g(l)`.
    pub fn apply(&self, mut g: impl FnMut(usize) -> BigInt) -> BigInt {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| c * g(self.l_lo + i))
            .sum()
    }
}

/// The double sum evaluated in its written order; used to cross-check
/// [`OddColumnWeights`].
pub fn odd_column_sum_direct(r: usize, k_max: usize, mut g: impl FnMut(usize) -> BigInt) -> BigInt {
    let mut total = BigInt::zero();
    assert!(r >= 1, "column sums need r >= 1");
    for k in 0..=k_max {
        let mut inner = BigInt::zero();
        for l in (r / 2)..=((k + r - 1) / 2) {
            inner += BigInt::from(binomial(k + r, (2 * l + 1) as i64)) * g(l);
        }
        if (k + r - 1).is_multiple_of(2) {
            total += inner;
        } else {
            total -= inner;
        }
    }
    total
}

/// `2^(i-1) C(N, i) / N` for `N = 2^(m-6)`; zero for `i > N`. Always an
/// integer because `v2(C(N, i)) = v2(N) - v2(i)`.
fn lifting_coefficient(big_n: u64, i: u32) -> BigInt {
    if u64::from(i) > big_n {
        return BigInt::zero();
    }
    let num = BigInt::from(binomial(big_n as usize, i64::from(i))) << (i - 1);
    let (q, rem) = num.div_rem(&BigInt::from(big_n));
    assert!(rem.is_zero(), "2^(i-1) C(N,i) not divisible by N");
    q
}

/// `Σ_{i=1}^{i_max} l^i 2^(i-1) (N-1)! / (i! (N-i)!)`.
fn lifting_sum(l: usize, big_n: u64, i_max: u32) -> BigInt {
    (1..=i_max)
        .map(|i| Pow::pow(BigInt::from(l), i) * lifting_coefficient(big_n, i))
        .sum()
}

fn half_pronic(l: usize) -> BigInt {
    BigInt::from(l * (l + 1) / 2)
}

/// C1: `Σ_{k=0}^{5} (-1)^{k+1} Σ_{l=1}^{⌊(k+1)/2⌋} C(k+2, 2l+1) (2l+1)^{n+1} (l(l+1)/2) l ≡ 0 (mod 4)`.
///
/// The full difference `F_{n+2,2} - F_{n,2}` is 16 times this sum modulo 64.
fn certificate_c1(ns: RangeInclusive<u32>) -> CertificateResult {
    let mut res = CertificateResult::new("C1", format!("n in {}..={}", ns.start(), ns.end()));
    let weights = OddColumnWeights::new(2, 5);
    for n in ns {
        let v = weights.apply(|l| odd_power(l as i64, n) * half_pronic(l) * BigInt::from(l));
        res.check(
            rem_euclid(&v, 4) == 0,
            || format!("n={n}"),
            || format!("{} mod 4", rem_euclid(&v, 4)),
        );
    }
    res
}

/// C2: `P(l + 16) = P(l)`.
fn certificate_c2(ls: RangeInclusive<i64>, ns: RangeInclusive<u32>) -> CertificateResult {
    let mut res = CertificateResult::new(
        "C2",
        format!(
            "l in {}..={}, n in {}..={}",
            ls.start(),
            ls.end(),
            ns.start(),
            ns.end()
        ),
    );
    for n in ns {
        for l in ls.clone() {
            let (a, b) = (p_value(l, n), p_value(l + 16, n));
            res.check(
                a == b,
                || format!("l={l} n={n}"),
                || format!("P(l)={a} P(l+16)={b}"),
            );
        }
    }
    res
}

/// C3: `A(6, r, n) ≡ 0 (mod 8)`.
fn certificate_c3(rs: RangeInclusive<i64>, ns: RangeInclusive<u32>) -> CertificateResult {
    let mut res = CertificateResult::new(
        "C3",
        format!(
            "r in {}..={}, n in {}..={}",
            rs.start(),
            rs.end(),
            ns.start(),
            ns.end()
        ),
    );
    for n in ns {
        for r in rs.clone() {
            let v = a_value(6, r, n);
            res.check(
                v == 0,
                || format!("r={r} n={n}"),
                || format!("A(6,r,n)={v}"),
            );
        }
    }
    res
}

/// C4: `Σ_{k=1}^{5} (-1)^{k+1} A(k, r, n) ≡ 0 (mod 8)`.
fn certificate_c4(id: &str, rs: RangeInclusive<i64>, ns: RangeInclusive<u32>) -> CertificateResult {
    let mut res = CertificateResult::new(
        id,
        format!(
            "r in {}..={}, n in {}..={}",
            rs.start(),
            rs.end(),
            ns.start(),
            ns.end()
        ),
    );
    for n in ns {
        for r in rs.clone() {
            let v: i64 = (1..=5)
                .map(|k| {
                    let a = i64::from(a_value(k, r, n));
                    if k % 2 == 1 {
                        a
                    } else {
                        -a
                    }
                })
                .sum();
            let v = v.rem_euclid(8);
            res.check(v == 0, || format!("r={r} n={n}"), || format!("{v} mod 8"));
        }
    }
    res
}

/// C5 (2-Fubini, `7 <= m <= 9`):
/// `Σ_{k=0}^{2^m-3} (-1)^{k+1} Σ_{l=1}^{⌊(k+1)/2⌋} C(k+2, 2l+1) (2l+1)^{n+1}
///  (Σ_{i=1}^{4} l^i 2^{i-1} (2^{m-6}-1)!/(i!(2^{m-6}-i)!)) l ≡ 0 (mod 16)`.
fn certificate_c5(id: &str, window: impl Fn(u32) -> RangeInclusive<u32>) -> CertificateResult {
    let desc = (7..=9)
        .map(|m| {
            let w = window(m);
            format!("m={m}: n in {}..={}", w.start(), w.end())
        })
        .collect::<Vec<_>>()
        .join("; ");
    let mut res = CertificateResult::new(id, desc);
    for m in 7..=9u32 {
        let big_n = 1u64 << (m - 6);
        let weights = OddColumnWeights::new(2, (1usize << m) - 3);
        let lift: Vec<BigInt> = (0..(1usize << m))
            .map(|l| lifting_sum(l, big_n, 4))
            .collect();
        for n in window(m) {
            let v = weights.apply(|l| odd_power(l as i64, n) * &lift[l] * BigInt::from(l));
            let rem = rem_euclid(&v, 16);
            res.check(
                rem == 0,
                || format!("m={m} n={n}"),
                || format!("{rem} mod 16"),
            );
        }
    }
    res
}

/// C6 (r-Fubini, `m = 6`, `3 <= r <= 7`):
/// `Σ_{k=0}^{7-r} (-1)^{k+r-1} Σ_{l=⌊r/2⌋}^{⌊(k+r-1)/2⌋} C(k+r, 2l+1) (2l+1)^{n+1}
///  (l(l+1)/2) l (2l-1)!/(2l+1-r)! ≡ 0 (mod 4)`.
fn certificate_c6(ns: RangeInclusive<u32>) -> CertificateResult {
    let mut res = CertificateResult::new(
        "C6",
        format!("r in 3..=7, n in {}..={}", ns.start(), ns.end()),
    );
    for r in 3..=7usize {
        let weights = OddColumnWeights::new(r, 7 - r);
        for n in ns.clone() {
            let v = weights.apply(|l| {
                let l_i = l as i64;
                odd_power(l_i, n)
                    * half_pronic(l)
                    * BigInt::from(l)
                    * factorial_ratio(2 * l_i - 1, 2 * l_i + 1 - r as i64)
            });
            let rem = rem_euclid(&v, 4);
            res.check(
                rem == 0,
                || format!("r={r} n={n}"),
                || format!("{rem} mod 4"),
            );
        }
    }
    res
}

/// C7 (r-Fubini, `m >= 10`, `3 <= r <= 7`):
/// `Σ_{k=0}^{2^m-r-1} (-1)^{k+r-1} Σ_{l=⌊r/2⌋}^{⌊(k+r-1)/2⌋} C(k+r, 2l+1) (2l+1)^{n+1}
///  (l(l+1)/2) (-2l²-2l+1) (2l)!/(2l-r+1)! ≡ 0 (mod 16)`.
fn certificate_c7(id: &str, exponents: &[u32], ns: RangeInclusive<u32>) -> CertificateResult {
    let mut res = CertificateResult::new(
        id,
        format!(
            "m in {exponents:?}, r in 3..=7, n in {}..={}",
            ns.start(),
            ns.end()
        ),
    );
    for &m in exponents {
        assert!(m >= 10, "C7 covers m >= 10");
        for r in 3..=7usize {
            let weights = OddColumnWeights::new(r, (1usize << m) - r - 1);
            for n in ns.clone() {
                let v = weights.apply(|l| {
                    let l_i = l as i64;
                    odd_power(l_i, n)
                        * half_pronic(l)
                        * big(-2 * l_i * l_i - 2 * l_i + 1)
                        * factorial_ratio(2 * l_i, 2 * l_i - r as i64 + 1)
                });
                let rem = rem_euclid(&v, 16);
                res.check(
                    rem == 0,
                    || format!("m={m} r={r} n={n}"),
                    || format!("{rem} mod 16"),
                );
            }
        }
    }
    res
}

/// C8 (r-Fubini, `7 <= m <= 9`, `3 <= r <= 7`):
/// `Σ_{k=0}^{2^m-r-1} (-1)^{k+r-1} Σ_{l=⌊r/2⌋}^{⌊(k+r-1)/2⌋} C(k+r, 2l+1) (2l+1)^{n+1}
///  (Σ_{i=1}^{2^{m-6}} l^i 2^{i-1} (2^{m-6}-1)!/(i!(2^{m-6}-i)!)) (2l)!/(2l-r+1)! ≡ 0 (mod 32)`.
fn certificate_c8(id: &str, window: impl Fn(u32) -> RangeInclusive<u32>) -> CertificateResult {
    let desc = (7..=9)
        .map(|m| {
            let w = window(m);
            format!("m={m}: r in 3..=7, n in {}..={}", w.start(), w.end())
        })
        .collect::<Vec<_>>()
        .join("; ");
    let mut res = CertificateResult::new(id, desc);
    for m in 7..=9u32 {
        let big_n = 1u64 << (m - 6);
        let lift: Vec<BigInt> = (0..(1usize << m))
            .map(|l| lifting_sum(l, big_n, big_n as u32))
            .collect();
        for r in 3..=7usize {
            let weights = OddColumnWeights::new(r, (1usize << m) - r - 1);
            for n in window(m) {
                let v = weights.apply(|l| {
                    let l_i = l as i64;
                    odd_power(l_i, n) * &lift[l] * factorial_ratio(2 * l_i, 2 * l_i - r as i64 + 1)
                });
                let rem = rem_euclid(&v, 32);
                res.check(
                    rem == 0,
                    || format!("m={m} r={r} n={n}"),
                    || format!("{rem} mod 32"),
                );
            }
        }
    }
    res
}

/// `2^(m-6) - i | 2^(i-5) C(2^(m-6) - 1, i)` for `5 <= i <= 2^(m-6)`.
///
/// At `i = 2^(m-6)` both sides are zero and `0 | 0` counts as holding.
pub fn check_appendix_lemma(m: u32) -> Result<CertificateResult> {
    if m < 7 {
        return Err(Error::AppendixRange(m));
    }
    let big_n = 1u64 << (m - 6);
    let mut res = CertificateResult::new(format!("appendix[m={m}]"), format!("i in 5..={big_n}"));
    for i in 5..=big_n {
        let value = binomial((big_n - 1) as usize, i as i64) << (i - 5);
        let divisor = big_n - i;
        let ok = if divisor == 0 {
            value.is_zero()
        } else {
            (&value % divisor).is_zero()
        };
        res.check(
            ok,
            || format!("i={i}"),
            || format!("{divisor} does not divide {value}"),
        );
    }
    Ok(res)
}

/// Floor sums `A = Σ_{k=1}^{e} ⌊(i-1)/2^k⌋` and `B = Σ_{k=1}^{e} ⌊i/2^k⌋`
/// with `2^e <= i < 2^(e+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValuationSums {
    pub e: u32,
    pub a: u64,
    pub b: u64,
}

/// Panics if `i < 2`.
pub fn two_adic_valuation_sums(i: u64) -> ValuationSums {
    assert!(i >= 2, "valuation sums need i >= 2 (got {i})");
    let e = i.ilog2();
    let a = (1..=e).map(|k| (i - 1) >> k).sum();
    let b = (1..=e).map(|k| i >> k).sum();
    ValuationSums { e, a, b }
}

/// The floor-sum table rows for `i = 5, 6, 7`, and `B = v2(i!)` for
/// `2 <= i <= i_max` against the exact factorial, with `B - A <= e`.
pub fn check_valuation_table(i_max: u64) -> CertificateResult {
    let mut res = CertificateResult::new("valuations", format!("i in 2..={i_max}"));
    for (i, a, b) in [(5, 3, 3), (6, 3, 4), (7, 4, 4)] {
        let v = two_adic_valuation_sums(i);
        res.check(
            (v.a, v.b) == (a, b),
            || format!("table row i={i}"),
            || format!("A={} B={}", v.a, v.b),
        );
    }
    let mut fact = BigUint::one();
    for i in 2..=i_max {
        fact *= i;
        let exact = fact.trailing_zeros().unwrap_or(0);
        let v = two_adic_valuation_sums(i);
        res.check(
            v.b == exact && v.b - v.a <= u64::from(v.e),
            || format!("i={i}"),
            || format!("A={} B={} e={} v2(i!)={exact}", v.a, v.b, v.e),
        );
    }
    res
}

/// Exponent of 2 in `n!`, read off the exact factorial.
pub fn two_adic_valuation_of_factorial(n: usize) -> u64 {
    factorial(n).trailing_zeros().unwrap_or(0)
}

/// Inequalities used by the lemmas:
/// (i) `p^m - r >= m` for odd primes `p <= max_p`, `1 <= r < p`, `1 <= m <= max_m`;
/// (ii) `2^m - 2 >= m` for `2 <= m <= max_m`;
/// (iii) `2^e >= e + 5` for `3 <= e <= max_m`;
/// (iv) `B - A <= e` for `4 <= i < 2^max_m`, `i <= 4096`;
/// (v) `i + A >= B + 5` for `5 <= i` on the same range.
pub fn check_inequality_lemmas(max_m: u32, max_p: u64) -> CertificateResult {
    let i_max = (1u64 << max_m.min(62)).saturating_sub(1).min(4096);
    let mut res = CertificateResult::new(
        "inequalities",
        format!("m <= {max_m}, odd p <= {max_p}, i in 4..={i_max}"),
    );
    for p in (3..=max_p).step_by(2).filter(|&p| is_prime(p)) {
        for r in 1..p {
            for m in 1..=max_m {
                // p^m overflowing u128 is certainly large enough.
                let ok = (p as u128)
                    .checked_pow(m)
                    .is_none_or(|q| q >= u128::from(r) + u128::from(m));
                res.check(
                    ok,
                    || format!("(i) p={p} r={r} m={m}"),
                    || "p^m - r < m".into(),
                );
            }
        }
    }
    for m in 2..=max_m {
        let ok = 2u128.checked_pow(m).is_none_or(|q| q >= u128::from(m) + 2);
        res.check(ok, || format!("(ii) m={m}"), || "2^m - 2 < m".into());
    }
    for e in 3..=max_m {
        let ok = 2u128.checked_pow(e).is_none_or(|q| q >= u128::from(e) + 5);
        res.check(ok, || format!("(iii) e={e}"), || "2^e < e + 5".into());
    }
    for i in 4..=i_max {
        let v = two_adic_valuation_sums(i);
        res.check(
            v.b - v.a <= u64::from(v.e),
            || format!("(iv) i={i}"),
            || format!("B-A={} > e={}", v.b - v.a, v.e),
        );
        if i >= 5 {
            res.check(
                i + v.a >= v.b + 5,
                || format!("(v) i={i}"),
                || format!("i+A={} < B+5={}", i + v.a, v.b + 5),
            );
        }
    }
    res
}

fn is_prime(p: u64) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}
