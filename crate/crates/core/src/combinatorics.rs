//! Exact big-integer combinatorics.
//!
//! Every value here is a [`Natural`]; no operation overflows. Signed sums
//! are carried in [`BigInt`] and converted back only after an exact
//! division.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::{Error, Result};

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

/// Parameters `(n, m, r)` of an r-Stirling number of the second kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StirlingQuery {
    pub n: usize,
    pub m: usize,
    pub r: usize,
}

impl StirlingQuery {
    pub fn new(n: usize, m: usize, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::ZeroR);
        }
        Ok(Self { n, m, r })
    }

    /// `n >= m >= r`; outside of it the count is zero.
    pub fn in_triangle(&self) -> bool {
        self.n >= self.m && self.m >= self.r
    }
}

pub fn factorial(n: usize) -> Natural {
    (2..=n as u64).fold(Natural::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero for `k < 0` or `k > n`.
pub fn binomial(n: usize, k: i64) -> Natural {
    if k < 0 || k as u64 > n as u64 {
        return Natural::zero();
    }
    let k = (k as usize).min(n - k as usize);
    let mut acc = Natural::one();
    for i in 0..k {
        // acc = C(n, i) here, so the division is exact.
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `(j-1)(j-2)...(j-r+1)`, i.e. `(j-1)! / (j-r)!`.
pub fn falling_product(j: usize, r: usize) -> Result<Natural> {
    if r == 0 || j < r {
        return Err(Error::FallingProductRange { j, r });
    }
    Ok(((j - r + 1)..j).fold(Natural::one(), |acc, f| acc * f))
}

fn signed(v: Natural) -> BigInt {
    BigInt::from_biguint(Sign::Plus, v)
}

fn pow_usize(base: usize, exp: usize) -> Natural {
    // num-traits defines 0^0 = 1, which is the convention the closed forms need.
    Pow::pow(Natural::from(base), exp)
}

/// Divides a signed sum by `m!`, panicking if the division is not exact or
/// the quotient is negative. Either would mean an arithmetic bug upstream.
fn exact_quotient_by_factorial(sum: BigInt, m: usize) -> Natural {
    let denom = signed(factorial(m));
    let (q, rem) = sum.div_rem(&denom);
    assert!(
        rem.is_zero(),
        "signed sum {sum} is not divisible by {m}! (contract violation)"
    );
    q.to_biguint()
        .expect("explicit Stirling sum produced a negative quotient")
}

/// Stirling number of the second kind via the alternating sum
/// `(1/m!) Σ_{j=1}^{m} (-1)^{m-j} C(m,j) j^n`.
pub fn stirling2(n: usize, m: usize) -> Natural {
    if m > n {
        return Natural::zero();
    }
    if m == 0 {
        return if n == 0 {
            Natural::one()
        } else {
            Natural::zero()
        };
    }
    let mut sum = BigInt::zero();
    for j in 1..=m {
        let term = signed(binomial(m, j as i64) * pow_usize(j, n));
        if (m - j).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    exact_quotient_by_factorial(sum, m)
}

/// r-Stirling number from the closed form
/// `(1/m!) Σ_{j=r}^{m} (-1)^{m-j} C(m,j) j^{n-(r-1)} (j-1)!/(j-r)!`.
///
/// Returns zero outside the triangle `n >= m >= r`.
pub fn r_stirling_explicit(q: &StirlingQuery) -> Natural {
    if !q.in_triangle() {
        return Natural::zero();
    }
    exact_quotient_by_factorial(weighted_r_stirling_sum(q.n, q.m, q.r), q.m)
}

/// The signed sum inside [`r_stirling_explicit`], i.e. `m! · {n, m}_r`
/// before any division. Requires `n >= m >= r >= 1`.
pub(crate) fn weighted_r_stirling_sum(n: usize, m: usize, r: usize) -> BigInt {
    debug_assert!(n >= m && m >= r && r >= 1);
    let exp = n - (r - 1);
    let mut sum = BigInt::zero();
    for j in r..=m {
        let w = falling_product(j, r).expect("j >= r in range");
        let term = signed(binomial(m, j as i64) * pow_usize(j, exp) * w);
        if (m - j).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// r-Stirling number by descending `r` with
/// `{n,m}_r = {n,m}_{r-1} - (r-1) {n-1,m}_{r-1}` down to the classical
/// numbers, which are taken from the triangle recurrence
/// `S(i,k) = k S(i-1,k) + S(i-1,k-1)` rather than the alternating sum.
pub fn r_stirling_recurrence(q: &StirlingQuery) -> Natural {
    if !q.in_triangle() {
        return Natural::zero();
    }
    let StirlingQuery { n, m, r } = *q;

    // level[t] holds {lo + t, m}_level for the current level.
    let lo = n + 1 - r;
    let triangle = classical_triangle(n, m);
    let mut level: Vec<BigInt> = (lo..=n).map(|i| signed(triangle[i][m].clone())).collect();

    for lvl in 2..=r {
        let factor = BigInt::from(lvl - 1);
        // Entry t depends on t and t - 1, so update from the top down.
        for t in (1..level.len()).rev() {
            let below = &level[t - 1] * &factor;
            level[t] -= below;
        }
        level.remove(0);
    }
    debug_assert_eq!(level.len(), 1);
    level
        .pop()
        .and_then(|v| v.to_biguint())
        .expect("r-Stirling recurrence produced a negative value")
}

/// Rows `0..=n` of the Stirling triangle, truncated at column `m`.
fn classical_triangle(n: usize, m: usize) -> Vec<Vec<Natural>> {
    let mut rows = vec![vec![Natural::zero(); m + 1]; n + 1];
    rows[0][0] = Natural::one();
    for i in 1..=n {
        for k in 1..=m.min(i) {
            let v = &rows[i - 1][k] * k + &rows[i - 1][k - 1];
            rows[i][k] = v;
        }
    }
    rows
}

/// `F_n = Σ_{k=0}^{n} k! S(n, k)`.
pub fn fubini(n: usize) -> Natural {
    let mut fact = Natural::one();
    let mut total = Natural::zero();
    for k in 0..=n {
        if k > 0 {
            fact *= k;
        }
        total += &fact * stirling2(n, k);
    }
    total
}

/// `F_{n,r} = Σ_{k=0}^{n} (k+r)! {n+r, k+r}_r`.
pub fn r_fubini(n: usize, r: usize) -> Result<Natural> {
    if r == 0 {
        return Err(Error::ZeroR);
    }
    let mut fact = factorial(r);
    let mut total = Natural::zero();
    for k in 0..=n {
        if k > 0 {
            fact *= k + r;
        }
        let q = StirlingQuery::new(n + r, k + r, r)?;
        total += &fact * r_stirling_explicit(&q);
    }
    Ok(total)
}
