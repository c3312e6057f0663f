//! The p-adic completion of the weight 3/2 mock Eisenstein series.
//!
//! Adding `sum a_m q^m` to `E_{3/2}` gives a series congruent mod `p^l` to
//! `(1-p)/2 * E_{3/2 + p^(l-1)(p-1)}` for every `l`, hence a p-adic modular
//! form. The corrections live on exponents `m = -n^2 mod p`.
//!
//! Two rules for `a_m` are provided. [`CorrectionRule::Limit`] is read off the
//! limit of the scaled Cohen coefficients:
//!
//! ```text
//! a_0 = -(1+p)/2
//! a_m = 12 H(m) - 6 (1 - chi_{-D0}(p)) H(m / p^(2v)),   m = D0 f^2, v = v_p(f)
//! ```
//!
//! which is `6H(m)` when `p | D0`, `12H(m)` when `chi_{-D0}(p) = 1` and zero
//! when `chi_{-D0}(p) = -1` (for `p` not dividing `f`). [`CorrectionRule::Remark`]
//! uses `(p-1)H(m)` and `2(p-1)H(m)` instead; the two agree at `p = 7` but the
//! second one does not produce a congruent series for other primes.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::CongruenceCertificate;
use crate::eisenstein::{cohen_series, hurwitz_l, zagier_series};
use crate::error::{Error, Result};
use crate::numtheory::{fundamental_decomposition, is_prime, rational, rational_int, Rational};
use crate::padic::{verifier_weight, Modulus};
use crate::qseries::{QExpansion, ResidueSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrectionRule {
    #[default]
    Limit,
    Remark,
}

impl fmt::Display for CorrectionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorrectionRule::Limit => "limit",
            CorrectionRule::Remark => "remark",
        })
    }
}

impl FromStr for CorrectionRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "limit" => Ok(CorrectionRule::Limit),
            "remark" => Ok(CorrectionRule::Remark),
            _ => Err(Error::Parse(format!("unknown correction rule {s:?}"))),
        }
    }
}

fn require_completion_prime(p: u64) -> Result<()> {
    if p < 5 || !is_prime(p) {
        return Err(Error::Domain(format!(
            "the completion is only defined for primes p >= 5, got {p}"
        )));
    }
    Ok(())
}

/// True iff `m = -n^2 mod p` for some integer `n`.
pub fn is_neg_square_mod(m: u64, p: u64) -> bool {
    (0..=p / 2).any(|n| (m + n * n).is_multiple_of(p))
}

/// `a_m` under the default [`CorrectionRule::Limit`].
pub fn correction_coefficient(m: u64, p: u64) -> Result<Rational> {
    correction_coefficient_with(m, p, CorrectionRule::Limit)
}

pub fn correction_coefficient_with(m: u64, p: u64, rule: CorrectionRule) -> Result<Rational> {
    require_completion_prime(p)?;
    if m == 0 {
        return Ok(rational(-(1 + p as i64), 2));
    }
    let h = hurwitz_l(m);
    if h.value().is_zero() {
        return Ok(Rational::zero());
    }
    Ok(match rule {
        CorrectionRule::Remark => {
            let p_minus_1 = rational_int(p as i64 - 1);
            if m.is_multiple_of(p) {
                p_minus_1 * h.value()
            } else if is_neg_square_mod(m, p) {
                rational_int(2) * p_minus_1 * h.value()
            } else {
                Rational::zero()
            }
        }
        CorrectionRule::Limit => {
            let dec = fundamental_decomposition(m)?;
            let mut f = dec.f;
            while f % p == 0 {
                f /= p;
            }
            let depleted = hurwitz_l(dec.d0 * f * f);
            let chi_p = dec.character().eval(p as i64) as i64;
            rational_int(12) * h.value() - rational_int(6 * (1 - chi_p)) * depleted.value()
        }
    })
}

/// The numbers `a_0, ..., a_N` for one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionSeries {
    p: u64,
    rule: CorrectionRule,
    values: QExpansion,
}

impl CorrectionSeries {
    pub fn new(p: u64, precision: u64, rule: CorrectionRule) -> Result<Self> {
        require_completion_prime(p)?;
        let values = (0..=precision)
            .into_par_iter()
            .map(|m| correction_coefficient_with(m, p, rule).map(|a| (m, a)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            p,
            rule,
            values: QExpansion::from_terms(precision, values),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rule(&self) -> CorrectionRule {
        self.rule
    }

    pub fn value(&self, m: u64) -> Rational {
        self.values.coefficient(m)
    }

    /// Exponents with `a_m != 0`.
    pub fn support(&self) -> Vec<u64> {
        self.values.terms().map(|(m, _)| m).collect()
    }

    pub fn as_series(&self) -> &QExpansion {
        &self.values
    }
}

/// `E_{3/2} + sum_{m <= N} a_m q^m` with the default rule.
pub fn completed_series(p: u64, precision: u64) -> Result<QExpansion> {
    completed_series_with(p, precision, CorrectionRule::Limit)
}

pub fn completed_series_with(p: u64, precision: u64, rule: CorrectionRule) -> Result<QExpansion> {
    let correction = CorrectionSeries::new(p, precision, rule)?;
    Ok(zagier_series(precision).add(correction.as_series()))
}

/// `(1-p)/2 * E_{k_l}` reduced mod `p^l`, the right-hand side of every comparison.
pub fn scaled_cohen_residues(p: u64, l: u32, precision: u64) -> Result<ResidueSeries> {
    require_completion_prime(p)?;
    Modulus::new(p, l)?;
    let k = verifier_weight(p, l);
    cohen_series(k, precision)?
        .scale(&rational(1 - p as i64, 2))
        .reduce_mod(p, l)
}

/// Compares the completed series with `(1-p)/2 * E_{3/2 + p^(l-1)(p-1)}` mod `p^l`.
pub fn verify_completion(p: u64, l: u32, precision: u64) -> Result<CongruenceCertificate> {
    verify_completion_with(p, l, precision, Some(CorrectionRule::Limit))
}

/// As [`verify_completion`]; `None` compares the uncorrected `E_{3/2}`.
pub fn verify_completion_with(
    p: u64,
    l: u32,
    precision: u64,
    rule: Option<CorrectionRule>,
) -> Result<CongruenceCertificate> {
    let rhs = scaled_cohen_residues(p, l, precision)?;
    let (lhs, corrected) = match rule {
        Some(rule) => {
            let correction = CorrectionSeries::new(p, precision, rule)?;
            let lhs = zagier_series(precision).add(correction.as_series());
            (lhs, correction.support())
        }
        None => (zagier_series(precision), Vec::new()),
    };
    let lhs = lhs.reduce_mod(p, l)?;
    let rule_note = match rule {
        Some(r) => format!("correction rule: {r}"),
        None => "uncorrected".to_string(),
    };
    let mut cert = CongruenceCertificate::new("verify_completion", p, l, lhs.diffs(&rhs)?)
        .with_precision(precision)
        .with_weight(verifier_weight(p, l).twice_k())
        .with_corrected(corrected)
        .with_note(rule_note);
    if p != 7 && rule == Some(CorrectionRule::Limit) {
        cert = cert.with_note("limit-rule a_m differ from (p-1)H(m), 2(p-1)H(m) for p != 7");
    }
    Ok(cert)
}

/// Exponents where the uncorrected `E_{3/2}` and the scaled Cohen series differ mod `p^l`.
pub fn difference_support(p: u64, l: u32, precision: u64) -> Result<Vec<u64>> {
    let rhs = scaled_cohen_residues(p, l, precision)?;
    zagier_series(precision).reduce_mod(p, l)?.compare(&rhs)
}

/// Residue table of both sides of the comparison at the given exponents.
pub fn residue_tables(p: u64, l: u32, exponents: &[u64]) -> Result<(Vec<u64>, Vec<u64>)> {
    let precision = exponents.iter().copied().max().unwrap_or(0);
    let lhs = completed_series(p, precision)?.reduce_mod(p, l)?;
    let rhs = scaled_cohen_residues(p, l, precision)?;
    Ok((lhs.table(exponents), rhs.table(exponents)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::reduce_rational;

    #[test]
    fn neg_square_examples() {
        assert!(is_neg_square_mod(3, 7));
        assert!(!is_neg_square_mod(4, 7));
        assert!(is_neg_square_mod(0, 11));
        let classes: Vec<u64> = (0..7).filter(|&m| is_neg_square_mod(m, 7)).collect();
        assert_eq!(classes, vec![0, 3, 5, 6]);
    }

    #[test]
    fn correction_examples_at_seven() {
        assert_eq!(correction_coefficient(0, 7).unwrap(), rational_int(-4));
        assert_eq!(correction_coefficient(3, 7).unwrap(), rational_int(4));
        assert_eq!(correction_coefficient(7, 7).unwrap(), rational_int(6));
        assert_eq!(correction_coefficient(4, 7).unwrap(), rational_int(0));
        assert_eq!(correction_coefficient(12, 7).unwrap(), rational_int(16));
        assert!(correction_coefficient(3, 3).is_err());
    }

    #[test]
    fn rules_agree_at_seven_away_from_p_squared() {
        for m in 0..=146 {
            assert_eq!(
                correction_coefficient_with(m, 7, CorrectionRule::Limit).unwrap(),
                correction_coefficient_with(m, 7, CorrectionRule::Remark).unwrap(),
                "m={m}"
            );
        }
    }

    #[test]
    fn remark_rule_can_be_non_integral() {
        // 75 = 3 * 5^2: (p-1) H(75) = 4 * 7/3
        let a = correction_coefficient_with(75, 5, CorrectionRule::Remark).unwrap();
        assert_eq!(a, rational(28, 3));
        assert!(reduce_rational(&a, 5, 3).is_ok());
        assert_eq!(correction_coefficient(75, 5).unwrap(), rational_int(24));
    }

    #[test]
    fn completed_series_examples() {
        let s = completed_series(7, 12).unwrap();
        assert_eq!(s.coefficient(0), rational_int(-3));
        assert_eq!(s.coefficient(3), rational_int(0));
        assert_eq!(s.coefficient(12), rational_int(0));
        assert_eq!(s.coefficient(8), rational_int(-12));
        let r = s.reduce_mod(7, 2).unwrap();
        assert_eq!(r.residue(0), 46);
        assert_eq!(r.residue(7), 43);
        assert_eq!(r.residue(8), 37);
    }

    #[test]
    fn verify_small_cases() {
        let c = verify_completion(7, 1, 16).unwrap();
        assert!(c.passed(), "{c:?}");
        assert_eq!(c.weight_twice_k, Some(15));
        assert_eq!(c.corrected_exponents, vec![0, 3, 7, 12]);
        assert!(verify_completion(5, 1, 50).unwrap().passed());
        let unc = verify_completion_with(7, 1, 16, None).unwrap();
        assert_eq!(unc.diff_indices(), vec![0, 3, 7, 12]);
        assert!(verify_completion(3, 1, 10).is_err());
    }

    #[test]
    fn remark_rule_fails_away_from_seven() {
        let c = verify_completion_with(5, 1, 20, Some(CorrectionRule::Remark)).unwrap();
        assert!(!c.passed());
        assert!(c.diff_indices().contains(&4));
    }

    #[test]
    fn difference_support_examples() {
        assert_eq!(difference_support(7, 1, 12).unwrap(), vec![0, 3, 7, 12]);
        assert_eq!(difference_support(7, 1, 16).unwrap(), vec![0, 3, 7, 12]);
        for p in [5, 7, 11] {
            for m in difference_support(p, 1, 60).unwrap() {
                assert!(is_neg_square_mod(m, p));
            }
        }
    }
}
