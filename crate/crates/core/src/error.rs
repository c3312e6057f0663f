use thiserror::Error;

/// Errors raised by the series, residue and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A coefficient (or scalar) is not p-integral, so it has no residue mod p^l.
    #[error("p = {p} divides a denominator{}", exponent_suffix(*.exponent))]
    PDividesDenominator { p: u64, exponent: Option<u64> },

    #[error("residue series have different moduli ({left} vs {right})")]
    ModulusMismatch { left: String, right: String },

    #[error("weight {twice_k}/2 is out of range: {reason}")]
    WeightOutOfRange { twice_k: u64, reason: &'static str },

    /// An argument outside the domain of the operation (non-prime p, p = 3 for
    /// the proof checks, n = 1, 2 mod 4 for a decomposition, ...).
    #[error("{0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn exponent_suffix(exponent: Option<u64>) -> String {
    match exponent {
        Some(e) => format!(" at exponent {e}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
