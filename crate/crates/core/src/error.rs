use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("r must be a positive integer")]
    ZeroR,

    #[error("modulus must be a positive integer")]
    ZeroModulus,

    #[error("falling product needs j >= r >= 1 (got j = {j}, r = {r})")]
    FallingProductRange { j: usize, r: usize },

    #[error("lower parameter m = {m} is below r = {r}")]
    LowerBelowR { m: usize, r: usize },

    #[error("window of {window} terms is too small (need at least {required})")]
    WindowTooSmall { window: usize, required: usize },

    #[error("oracle input out of range: {0}")]
    OracleCap(String),

    #[error("appendix lemma needs m >= 7 (got {0})")]
    AppendixRange(u32),

    #[error("unknown certificate id `{0}`")]
    UnknownCertificate(String),
}
