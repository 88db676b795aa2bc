//! Eventual period and preperiod of `F_{n,r} mod s`.
//!
//! [`predict_period`] combines one rule per prime-power factor of `s`:
//!
//! | factor            | condition       | preperiod | period       |
//! |-------------------|-----------------|-----------|--------------|
//! | odd `p^m`         | `p^m <= r`      | 0         | 1            |
//! | odd `p^m`         | `p^m > r`       | `m - 1`   | `φ(p^m)`     |
//! | `2^m`             | `m <= 2` or `2^m <= r` | `m - 1` | 1       |
//! | `2^m`, `3..=6`    | `2^m > r`       | `m - 1`   | 2            |
//! | `2^m`, `m >= 7`   | `2^m > r`       | `m - 1`   | `2^(m-6)`    |
//!
//! The combined period is the LCM of the factor periods and the combined
//! preperiod their maximum. Detection and verification work on streamed
//! residues and report the observed minimal period next to the prediction.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::modular::{factorize, residue_stream, Modulus, ResidueStream};
use crate::{Error, Result};

/// Slack added on top of `a + 2ω` when sizing detection windows.
pub const WINDOW_SLACK: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "trivial_leq_r")]
    TrivialLeqR,
    #[serde(rename = "odd_prime_power")]
    OddPrimePower,
    #[serde(rename = "two_m_leq_2")]
    TwoMLeq2,
    #[serde(rename = "two_m_3_to_6")]
    TwoM3To6,
    #[serde(rename = "two_m_geq_7")]
    TwoMGeq7,
}

impl CaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::TrivialLeqR => "trivial_leq_r",
            CaseLabel::OddPrimePower => "odd_prime_power",
            CaseLabel::TwoMLeq2 => "two_m_leq_2",
            CaseLabel::TwoM3To6 => "two_m_3_to_6",
            CaseLabel::TwoMGeq7 => "two_m_geq_7",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorPrediction {
    pub p: u64,
    pub m: u32,
    #[serde(rename = "case")]
    pub case: CaseLabel,
    pub omega_factor: u64,
    pub preperiod_factor: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodPrediction {
    /// Predicted preperiod: the sequence is periodic from index `a` on.
    pub a: u64,
    /// Predicted period.
    pub omega: u64,
    /// LCM of `φ(p^m)` over the odd factors with `p^m > r`.
    pub b: u64,
    pub factors: Vec<FactorPrediction>,
    pub r: usize,
    pub s: u64,
}

/// A claimed `(preperiod, period)` pair used to steer detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodBound {
    pub preperiod: u64,
    pub period: u64,
}

impl PeriodBound {
    /// `a + 2ω + 16`.
    pub fn required_window(&self) -> usize {
        self.preperiod as usize + 2 * self.period as usize + WINDOW_SLACK
    }
}

impl PeriodPrediction {
    pub fn bound(&self) -> PeriodBound {
        PeriodBound {
            preperiod: self.a,
            period: self.omega,
        }
    }
}

/// Rule for a single prime power `p^m` dividing the modulus.
pub fn predict_prime_power(p: u64, m: u32, r: usize) -> FactorPrediction {
    let q = p.checked_pow(m);
    // A prime power too large for u64 certainly exceeds r.
    let leq_r = q.is_some_and(|q| q <= r as u64);
    let (case, preperiod_factor, omega_factor) = if p != 2 {
        if leq_r {
            (CaseLabel::TrivialLeqR, 0, 1)
        } else {
            let phi = p.pow(m - 1) * (p - 1);
            (CaseLabel::OddPrimePower, u64::from(m - 1), phi)
        }
    } else if m <= 2 || leq_r {
        (CaseLabel::TwoMLeq2, u64::from(m - 1), 1)
    } else if m <= 6 {
        (CaseLabel::TwoM3To6, u64::from(m - 1), 2)
    } else {
        (CaseLabel::TwoMGeq7, u64::from(m - 1), 1u64 << (m - 6))
    };
    FactorPrediction {
        p,
        m,
        case,
        omega_factor,
        preperiod_factor,
    }
}

/// Preperiod and period of `F_{n,r} mod s` from the factorization of `s`.
pub fn predict_period(r: usize, s: Modulus) -> Result<PeriodPrediction> {
    if r == 0 {
        return Err(Error::ZeroR);
    }
    let factors: Vec<FactorPrediction> = factorize(s)
        .factors()
        .iter()
        .map(|f| predict_prime_power(f.p, f.m, r))
        .collect();
    let omega = factors.iter().fold(1u64, |acc, f| acc.lcm(&f.omega_factor));
    let a = factors
        .iter()
        .map(|f| f.preperiod_factor)
        .max()
        .unwrap_or(0);
    let b = factors
        .iter()
        .filter(|f| f.case == CaseLabel::OddPrimePower)
        .fold(1u64, |acc, f| acc.lcm(&f.omega_factor));
    Ok(PeriodPrediction {
        a,
        omega,
        b,
        factors,
        r,
        s: s.get(),
    })
}

/// Empirically detected eventual period over a finite window.
///
/// `period` and `preperiod` are `None` when nothing fit the window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodObservation {
    pub preperiod: Option<u64>,
    pub period: Option<u64>,
    pub window: u64,
    pub conclusive: bool,
}

impl PeriodObservation {
    fn found(preperiod: usize, period: usize, window: usize) -> Self {
        Self {
            preperiod: Some(preperiod as u64),
            period: Some(period as u64),
            window: window as u64,
            conclusive: true,
        }
    }

    fn none(window: usize) -> Self {
        Self {
            preperiod: None,
            period: None,
            window: window as u64,
            conclusive: false,
        }
    }
}

/// Pulls `window` terms from `stream` and runs [`detect_in_sequence`].
pub fn detect_period(
    stream: &mut ResidueStream,
    window: usize,
    bound: Option<PeriodBound>,
) -> Result<PeriodObservation> {
    check_window(window, bound)?;
    let seq = stream.take_values(window);
    detect_in_sequence(&seq, bound)
}

fn check_window(window: usize, bound: Option<PeriodBound>) -> Result<()> {
    let required = bound.map_or(2, |b| b.required_window().max(2));
    if window < required {
        return Err(Error::WindowTooSmall { window, required });
    }
    Ok(())
}

/// Minimal eventual period of `seq`.
///
/// With a bound, only divisors of the bound's period are tried, in
/// increasing order, and a candidate fits when it holds from the bound's
/// preperiod to the end of the window. Without one, every candidate up to
/// half the window is tried and fits when its periodic tail spans at least
/// two periods and at least half the window, so that a few equal trailing
/// terms are not mistaken for a period. The preperiod reported is the
/// smallest one for the chosen period.
pub fn detect_in_sequence(seq: &[u64], bound: Option<PeriodBound>) -> Result<PeriodObservation> {
    let window = seq.len();
    check_window(window, bound)?;
    match bound {
        Some(b) => {
            let start = b.preperiod as usize;
            for w in divisors(b.period) {
                let w = w as usize;
                if (start..window - w).all(|n| seq[n] == seq[n + w]) {
                    let pre = shrink_preperiod(seq, w, start);
                    return Ok(PeriodObservation::found(pre, w, window));
                }
            }
            Ok(PeriodObservation::none(window))
        }
        None => {
            for w in 1..=window / 2 {
                let pre = shrink_preperiod(seq, w, window - w);
                if window - pre >= 2 * w && pre <= window / 2 {
                    return Ok(PeriodObservation::found(pre, w, window));
                }
            }
            Ok(PeriodObservation::none(window))
        }
    }
}

/// Lowers `from` while `seq[p - 1] == seq[p - 1 + w]`.
fn shrink_preperiod(seq: &[u64], w: usize, from: usize) -> usize {
    let mut p = from;
    while p > 0 && seq[p - 1] == seq[p - 1 + w] {
        p -= 1;
    }
    p
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prediction, observation and the checks that relate them for one `(r, s)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ReportRecord", from = "ReportRecord")]
pub struct VerificationReport {
    pub r: usize,
    pub s: u64,
    pub prediction: PeriodPrediction,
    pub observation: PeriodObservation,
    /// `seq[n + ω] == seq[n]` for every `a <= n` in the window.
    pub prediction_valid: bool,
    /// The observed minimal period divides ω.
    pub minimal_divides: bool,
    pub observed_preperiod_leq_a: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.prediction_valid && self.minimal_divides && self.observed_preperiod_leq_a
    }

    /// The observed minimal period is a proper divisor of the predicted one.
    pub fn strict_divisor_observed(&self) -> bool {
        self.observation
            .period
            .is_some_and(|p| p < self.prediction.omega && self.prediction.omega.is_multiple_of(p))
    }
}

/// Signature shared by [`predict_period`] and any stand-in predictor.
pub type Predictor = fn(usize, Modulus) -> Result<PeriodPrediction>;

/// Streams `a + 2ω + 16 + margin` terms and checks the prediction on them.
pub fn verify_prediction(r: usize, s: Modulus, margin: usize) -> Result<VerificationReport> {
    verify_with(r, s, margin, predict_period)
}

/// [`verify_prediction`] with a caller-supplied predictor.
pub fn verify_with(
    r: usize,
    s: Modulus,
    margin: usize,
    predictor: Predictor,
) -> Result<VerificationReport> {
    let prediction = predictor(r, s)?;
    let bound = prediction.bound();
    let window = bound.required_window() + margin;
    let seq = residue_stream(r, s)?.take_values(window);

    let a = prediction.a as usize;
    let omega = prediction.omega as usize;
    let prediction_valid = omega >= 1 && (a..window - omega).all(|n| seq[n] == seq[n + omega]);

    let mut observation = detect_in_sequence(&seq, Some(bound))?;
    if !observation.conclusive {
        // Report what the sequence actually does when the prediction misses.
        observation = detect_in_sequence(&seq, None)?;
    }
    let minimal_divides = observation
        .period
        .is_some_and(|p| prediction.omega % p == 0);
    let observed_preperiod_leq_a = observation.preperiod.is_some_and(|p| p <= prediction.a);

    Ok(VerificationReport {
        r,
        s: s.get(),
        prediction,
        observation,
        prediction_valid,
        minimal_divides,
        observed_preperiod_leq_a,
    })
}

#[derive(Serialize, Deserialize)]
struct ReportRecord {
    r: usize,
    s: u64,
    prediction: PredictionRecord,
    observation: PeriodObservation,
    flags: FlagsRecord,
}

#[derive(Serialize, Deserialize)]
struct PredictionRecord {
    a: u64,
    omega: u64,
    b: u64,
    factors: Vec<FactorPrediction>,
}

#[derive(Serialize, Deserialize)]
struct FlagsRecord {
    prediction_valid: bool,
    minimal_divides: bool,
    observed_preperiod_leq_a: bool,
}

impl From<VerificationReport> for ReportRecord {
    fn from(v: VerificationReport) -> Self {
        ReportRecord {
            r: v.r,
            s: v.s,
            prediction: PredictionRecord {
                a: v.prediction.a,
                omega: v.prediction.omega,
                b: v.prediction.b,
                factors: v.prediction.factors,
            },
            observation: v.observation,
            flags: FlagsRecord {
                prediction_valid: v.prediction_valid,
                minimal_divides: v.minimal_divides,
                observed_preperiod_leq_a: v.observed_preperiod_leq_a,
            },
        }
    }
}

impl From<ReportRecord> for VerificationReport {
    fn from(w: ReportRecord) -> Self {
        VerificationReport {
            r: w.r,
            s: w.s,
            prediction: PeriodPrediction {
                a: w.prediction.a,
                omega: w.prediction.omega,
                b: w.prediction.b,
                factors: w.prediction.factors,
                r: w.r,
                s: w.s,
            },
            observation: w.observation,
            prediction_valid: w.flags.prediction_valid,
            minimal_divides: w.flags.minimal_divides,
            observed_preperiod_leq_a: w.flags.observed_preperiod_leq_a,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(s: u64) -> Modulus {
        Modulus::new(s).unwrap()
    }

    #[test]
    fn prime_power_examples() {
        let f = predict_prime_power(3, 3, 2);
        assert_eq!(
            (f.preperiod_factor, f.omega_factor, f.case),
            (2, 18, CaseLabel::OddPrimePower)
        );
        let f = predict_prime_power(2, 7, 2);
        assert_eq!(
            (f.preperiod_factor, f.omega_factor, f.case),
            (6, 2, CaseLabel::TwoMGeq7)
        );
        let f = predict_prime_power(5, 1, 9);
        assert_eq!(
            (f.preperiod_factor, f.omega_factor, f.case),
            (0, 1, CaseLabel::TrivialLeqR)
        );
    }

    #[test]
    fn prime_power_two_cases() {
        assert_eq!(predict_prime_power(2, 1, 1).case, CaseLabel::TwoMLeq2);
        assert_eq!(predict_prime_power(2, 2, 1).omega_factor, 1);
        let f = predict_prime_power(2, 3, 8);
        assert_eq!(
            (f.case, f.omega_factor, f.preperiod_factor),
            (CaseLabel::TwoMLeq2, 1, 2)
        );
        let f = predict_prime_power(2, 6, 63);
        assert_eq!((f.case, f.omega_factor), (CaseLabel::TwoM3To6, 2));
        let f = predict_prime_power(2, 9, 3);
        assert_eq!((f.case, f.omega_factor), (CaseLabel::TwoMGeq7, 8));
        let f = predict_prime_power(2, 7, 128);
        assert_eq!((f.case, f.omega_factor), (CaseLabel::TwoMLeq2, 1));
    }

    #[test]
    fn predict_period_examples() {
        let p = predict_period(2, md(27)).unwrap();
        assert_eq!((p.a, p.omega), (2, 18));
        let p = predict_period(2, md(10)).unwrap();
        assert_eq!((p.a, p.omega, p.b), (0, 4, 4));
        let p = predict_period(5, md(4)).unwrap();
        assert_eq!((p.a, p.omega, p.b), (1, 1, 1));
        let p = predict_period(2, md(128)).unwrap();
        assert_eq!((p.a, p.omega), (6, 2));
        let p = predict_period(3, md(1)).unwrap();
        assert_eq!((p.a, p.omega, p.b), (0, 1, 1));
        assert!(p.factors.is_empty());
        assert_eq!(predict_period(0, md(5)), Err(Error::ZeroR));
    }

    #[test]
    fn odd_modulus_preperiod_clamps_at_zero() {
        let p = predict_period(3, md(5 * 7)).unwrap();
        assert_eq!((p.a, p.omega, p.b), (0, 12, 12));
        let p = predict_period(7, md(3 * 5 * 7)).unwrap();
        assert_eq!((p.a, p.omega, p.b), (0, 1, 1));
    }

    #[test]
    fn detect_examples() {
        let obs = detect_in_sequence(&[1, 2, 1, 2, 1, 2, 1, 2], None).unwrap();
        assert_eq!((obs.preperiod, obs.period), (Some(0), Some(2)));
        let obs = detect_in_sequence(&[5, 1, 2, 1, 2, 1, 2, 1], None).unwrap();
        assert_eq!((obs.preperiod, obs.period), (Some(1), Some(2)));
        assert!(obs.conclusive);
    }

    #[test]
    fn detect_inconclusive_without_repetition() {
        let obs = detect_in_sequence(&[1, 2, 3, 4, 5], None).unwrap();
        assert!(!obs.conclusive);
        assert_eq!(obs.period, None);
    }

    #[test]
    fn detect_rejects_short_window() {
        let bound = PeriodBound {
            preperiod: 2,
            period: 3,
        };
        assert_eq!(
            detect_in_sequence(&[0; 10], Some(bound)),
            Err(Error::WindowTooSmall {
                window: 10,
                required: 24
            })
        );
        assert!(detect_in_sequence(&[0], None).is_err());
    }

    #[test]
    fn detect_stream_with_bound() {
        let pred = predict_period(2, md(10)).unwrap();
        let mut st = residue_stream(2, md(10)).unwrap();
        let obs = detect_period(&mut st, 64, Some(pred.bound())).unwrap();
        assert_eq!((obs.preperiod, obs.period), (Some(0), Some(4)));
    }

    #[test]
    fn divisors_sorted() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(18), vec![1, 2, 3, 6, 9, 18]);
        assert_eq!(divisors(16), vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn verify_examples() {
        let rep = verify_prediction(2, md(27), 32).unwrap();
        assert!(rep.prediction_valid && rep.minimal_divides);
        let rep = verify_prediction(1, md(2), 8).unwrap();
        assert!(rep.prediction_valid);
        assert_eq!(rep.observation.period, Some(1));
        let rep = verify_prediction(3, md(8), 16).unwrap();
        assert!(rep.prediction_valid);
        assert_eq!((rep.prediction.a, rep.prediction.omega), (2, 2));
    }

    #[test]
    fn report_json_shape() {
        let rep = verify_prediction(2, md(10), 0).unwrap();
        let v: serde_json::Value = serde_json::to_value(&rep).unwrap();
        for key in ["r", "s", "prediction", "observation", "flags"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["prediction"]["omega"], 4);
        assert_eq!(v["prediction"]["factors"][0]["case"], "two_m_leq_2");
        assert_eq!(v["flags"]["prediction_valid"], true);
        let back: VerificationReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, rep);
    }
}
