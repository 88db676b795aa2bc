//! Brute-force enumerators. Slow on purpose; they exist to be trusted.
//!
//! Inputs are capped so that a typo cannot start an exponential run.

use crate::combinatorics::Natural;
use crate::periodicity::PeriodObservation;
use crate::{Error, Result};

/// Largest total element count `n + r` accepted by [`enumerate_weak_orders`].
pub const WEAK_ORDER_CAP: usize = 9;
/// Largest `n` accepted by [`enumerate_partitions`].
pub const PARTITION_CAP: usize = 12;

/// A ranking with ties: `ranks[e]` is the rank of element `e`, and the
/// occupied ranks are exactly `1..=t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakOrder {
    pub ranks: Vec<usize>,
}

impl WeakOrder {
    pub fn rank_count(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }

    /// Every rank in `1..=t` is occupied.
    pub fn is_valid(&self) -> bool {
        let t = self.rank_count();
        let mut seen = vec![false; t + 1];
        for &x in &self.ranks {
            if x == 0 {
                return false;
            }
            seen[x] = true;
        }
        seen[1..].iter().all(|&b| b)
    }

    /// The first `r` elements sit in pairwise distinct ranks.
    pub fn separates_first(&self, r: usize) -> bool {
        let head = &self.ranks[..r.min(self.ranks.len())];
        head.iter().enumerate().all(|(i, x)| !head[..i].contains(x))
    }
}

/// Calls `f` with every set partition of `0..n`, given as a block label per
/// element (restricted growth string), and the number of blocks.
fn for_each_partition(n: usize, f: &mut impl FnMut(&[usize], usize)) {
    fn go(labels: &mut Vec<usize>, blocks: usize, n: usize, f: &mut impl FnMut(&[usize], usize)) {
        if labels.len() == n {
            f(labels, blocks);
            return;
        }
        for b in 0..=blocks {
            labels.push(b);
            go(labels, blocks.max(b + 1), n, f);
            labels.pop();
        }
    }
    go(&mut Vec::with_capacity(n), 0, n, f);
}

/// Calls `f` with every permutation of `0..t`.
fn for_each_permutation(t: usize, f: &mut impl FnMut(&[usize])) {
    fn go(perm: &mut Vec<usize>, used: &mut [bool], f: &mut impl FnMut(&[usize])) {
        if perm.len() == used.len() {
            f(perm);
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                perm.push(i);
                go(perm, used, f);
                perm.pop();
                used[i] = false;
            }
        }
    }
    go(&mut Vec::with_capacity(t), &mut vec![false; t], f);
}

/// Counts weak orders of `n + r` elements whose first `r` elements have
/// distinct ranks, by listing every weak order: each set partition
/// combined with each ordering of its blocks.
pub fn enumerate_weak_orders(n: usize, r: usize) -> Result<Natural> {
    if r == 0 {
        return Err(Error::ZeroR);
    }
    let total = n + r;
    if total > WEAK_ORDER_CAP {
        return Err(Error::OracleCap(format!(
            "n + r = {total} exceeds {WEAK_ORDER_CAP}"
        )));
    }
    let mut count: u64 = 0;
    let mut order = WeakOrder {
        ranks: vec![0; total],
    };
    for_each_partition(total, &mut |labels, blocks| {
        for_each_permutation(blocks, &mut |perm| {
            for (e, &b) in labels.iter().enumerate() {
                order.ranks[e] = perm[b] + 1;
            }
            debug_assert!(order.is_valid());
            if order.separates_first(r) {
                count += 1;
            }
        });
    });
    Ok(Natural::from(count))
}

/// Counts partitions of `{1..n}` into `m` nonempty blocks with `1..r` in
/// distinct blocks.
pub fn enumerate_partitions(n: usize, m: usize, r: usize) -> Result<Natural> {
    if r == 0 {
        return Err(Error::ZeroR);
    }
    if !(r <= m && m <= n) {
        return Err(Error::OracleCap(format!(
            "need r <= m <= n (got n = {n}, m = {m}, r = {r})"
        )));
    }
    if n > PARTITION_CAP {
        return Err(Error::OracleCap(format!("n = {n} exceeds {PARTITION_CAP}")));
    }
    let mut count: u64 = 0;
    for_each_partition(n, &mut |labels, blocks| {
        let head = &labels[..r];
        let distinct = head.iter().enumerate().all(|(i, x)| !head[..i].contains(x));
        if blocks == m && distinct {
            count += 1;
        }
    });
    Ok(Natural::from(count))
}

/// Lexicographically smallest `(period, preperiod)` such that
/// `seq[i + period] == seq[i]` for every `i >= preperiod` and the periodic
/// tail covers at least two periods and at least half the sequence. Tries
/// every pair.
pub fn naive_min_period(seq: &[u64]) -> PeriodObservation {
    let len = seq.len();
    for period in 1..=len / 2 {
        for preperiod in 0..=(len - 2 * period).min(len / 2) {
            let holds = (preperiod..len - period).all(|i| seq[i + period] == seq[i]);
            if holds {
                return PeriodObservation {
                    preperiod: Some(preperiod as u64),
                    period: Some(period as u64),
                    window: len as u64,
                    conclusive: true,
                };
            }
        }
    }
    PeriodObservation {
        preperiod: None,
        period: None,
        window: len as u64,
        conclusive: false,
    }
}
