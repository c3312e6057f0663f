//! Cohen Eisenstein series of half-integral weight, Hurwitz class numbers
//! (by counting reduced forms and through L-values), the weight 3/2 mock
//! Eisenstein series, and Koblitz-type congruences between Cohen series.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::certificate::CongruenceCertificate;
use crate::error::{Error, Result};
use crate::numtheory::{
    dirichlet_l_nonpositive, divisors, fundamental_decomposition, is_prime, moebius, rational,
    rational_int, sigma, zeta_nonpositive, Rational,
};
use crate::qseries::QExpansion;

/// A weight `k = twice_k / 2` with `twice_k` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfIntWeight {
    twice_k: u64,
}

impl HalfIntWeight {
    pub fn new(twice_k: u64) -> Result<Self> {
        if twice_k.is_multiple_of(2) {
            return Err(Error::WeightOutOfRange {
                twice_k,
                reason: "numerator must be odd",
            });
        }
        Ok(Self { twice_k })
    }

    pub fn twice_k(&self) -> u64 {
        self.twice_k
    }

    /// `k + j` for an integer shift `j`.
    pub fn shifted(&self, j: u64) -> Self {
        Self {
            twice_k: self.twice_k + 2 * j,
        }
    }

    /// Cohen series are defined for `k >= 7/2` with `k` in `3/2 + 2Z`.
    pub fn check_cohen(&self) -> Result<()> {
        if self.twice_k < 7 {
            return Err(Error::WeightOutOfRange {
                twice_k: self.twice_k,
                reason: "Cohen series need k >= 7/2",
            });
        }
        if self.twice_k % 4 != 3 {
            return Err(Error::WeightOutOfRange {
                twice_k: self.twice_k,
                reason: "Cohen series need k in 3/2 + 2Z",
            });
        }
        Ok(())
    }
}

impl fmt::Display for HalfIntWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2", self.twice_k)
    }
}

impl FromStr for HalfIntWeight {
    type Err = Error;

    /// Parses `"t/2"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("weight must look like t/2, got {s:?}"));
        let (num, den) = s.split_once('/').ok_or_else(bad)?;
        if den.trim() != "2" {
            return Err(bad());
        }
        HalfIntWeight::new(num.trim().parse().map_err(|_| bad())?)
    }
}

fn in_plus_space(n: u64) -> bool {
    n.is_multiple_of(4) || n % 4 == 3
}

/// Per-weight constants of the coefficient formula.
struct CohenWeight {
    zeta_inv: Rational,
    /// `k - 3/2`
    d_exponent: u32,
    /// `2k - 2`
    sigma_exponent: u32,
}

impl CohenWeight {
    fn new(k: HalfIntWeight) -> Result<Self> {
        k.check_cohen()?;
        let zeta = zeta_nonpositive(2 - k.twice_k as i64)?;
        Ok(Self {
            zeta_inv: Rational::one() / zeta,
            d_exponent: ((k.twice_k - 3) / 2) as u32,
            sigma_exponent: (k.twice_k - 2) as u32,
        })
    }

    fn coefficient(&self, n: u64) -> Result<Rational> {
        if n == 0 {
            return Ok(Rational::one());
        }
        if !in_plus_space(n) {
            return Ok(Rational::zero());
        }
        let dec = fundamental_decomposition(n)?;
        let chi = dec.character();
        let l_value = dirichlet_l_nonpositive(-(self.d_exponent as i64), chi)?;
        let mut twisted = BigInt::zero();
        for d in divisors(dec.f) {
            let sign = moebius(d) as i64 * chi.eval(d as i64) as i64;
            if sign == 0 {
                continue;
            }
            let term = BigInt::from(d).pow(self.d_exponent)
                * BigInt::from(sigma(self.sigma_exponent, dec.f / d));
            if sign > 0 {
                twisted += term;
            } else {
                twisted -= term;
            }
        }
        Ok(&self.zeta_inv * l_value * Rational::from_integer(twisted))
    }
}

/// The coefficient `c_{n,k}` of the Cohen Eisenstein series `E_k`.
pub fn cohen_coefficient(n: u64, k: HalfIntWeight) -> Result<Rational> {
    CohenWeight::new(k)?.coefficient(n)
}

/// `E_k` through `q^N`, evaluated in parallel over exponents.
pub fn cohen_series(k: HalfIntWeight, precision: u64) -> Result<QExpansion> {
    let weight = CohenWeight::new(k)?;
    let exponents: Vec<u64> = (0..=precision).filter(|&n| n == 0 || in_plus_space(n)).collect();
    let coeffs = exponents
        .into_par_iter()
        .map(|n| weight.coefficient(n).map(|c| (n, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(QExpansion::from_terms(precision, coeffs))
}

/// A Hurwitz class number `H(n)`; `12 H(n)` is always an integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzValue(Rational);

impl HurwitzValue {
    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn twelve_h(&self) -> BigInt {
        let v = &self.0 * rational_int(12);
        debug_assert!(v.is_integer());
        v.to_integer()
    }
}

/// `H(n)` by enumerating reduced forms `(a, b, c)` of discriminant `-n`.
///
/// Forms proportional to `x^2 + xy + y^2` count `1/3`, forms proportional to
/// `x^2 + y^2` count `1/2`.
pub fn hurwitz_forms(n: u64) -> HurwitzValue {
    if n == 0 {
        return HurwitzValue(rational(-1, 12));
    }
    if !in_plus_space(n) {
        return HurwitzValue(Rational::zero());
    }
    let n = n as i64;
    let mut sixths = 0i64;
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a..=a {
            if (b - n).rem_euclid(2) != 0 || (b * b + n) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b + n) / (4 * a);
            if c < a || (b < 0 && (-b == a || a == c)) {
                continue;
            }
            sixths += if a == b && b == c {
                2
            } else if b == 0 && a == c {
                3
            } else {
                6
            };
        }
        a += 1;
    }
    HurwitzValue(rational(sixths, 6))
}

/// `H(n) = L(0, chi_{-D0}) sum_{d | f} mu(d) chi_{-D0}(d) sigma_1(f/d)`.
pub fn hurwitz_l(n: u64) -> HurwitzValue {
    if n == 0 {
        return HurwitzValue(rational(-1, 12));
    }
    if !in_plus_space(n) {
        return HurwitzValue(Rational::zero());
    }
    let dec = fundamental_decomposition(n).expect("plus-space index");
    let chi = dec.character();
    let l0 = dirichlet_l_nonpositive(0, chi).expect("s = 0");
    let twisted: BigInt = divisors(dec.f)
        .into_iter()
        .map(|d| {
            BigInt::from(moebius(d) as i64 * chi.eval(d as i64) as i64)
                * BigInt::from(sigma(1, dec.f / d))
        })
        .sum();
    HurwitzValue(l0 * Rational::from_integer(twisted))
}

/// The weight 3/2 series `1 - 12 sum H(m) q^m` through `q^N`.
pub fn zagier_series(precision: u64) -> QExpansion {
    let coeffs: Vec<(u64, Rational)> = (0..=precision)
        .into_par_iter()
        .filter(|&m| m == 0 || in_plus_space(m))
        .map(|m| (m, hurwitz_l(m).value() * rational_int(-12)))
        .collect();
    QExpansion::from_terms(precision, coeffs)
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// Compares `E_k` and `E_{k+p-1}` mod `p` through `q^N`.
pub fn koblitz_congruence_check(k: HalfIntWeight, p: u64, precision: u64) -> Result<CongruenceCertificate> {
    require_odd_prime(p)?;
    k.check_cohen()?;
    let higher = k.shifted(p - 1);
    let lhs = cohen_series(k, precision)?.reduce_mod(p, 1)?;
    let rhs = cohen_series(higher, precision)?.reduce_mod(p, 1)?;
    Ok(CongruenceCertificate::new("koblitz", p, 1, lhs.diffs(&rhs)?)
        .with_precision(precision)
        .with_weight(k.twice_k())
        .with_note(format!("E_{k} vs E_{higher}")))
}

/// The same comparison started from the weight 3/2 series, where it fails.
pub fn koblitz_negative_control(p: u64, precision: u64) -> Result<CongruenceCertificate> {
    require_odd_prime(p)?;
    let higher = HalfIntWeight::new(3)?.shifted(p - 1);
    let lhs = zagier_series(precision).reduce_mod(p, 1)?;
    let rhs = cohen_series(higher, precision)?.reduce_mod(p, 1)?;
    Ok(CongruenceCertificate::new("koblitz_negative", p, 1, lhs.diffs(&rhs)?)
        .with_precision(precision)
        .with_weight(3)
        .with_note(format!("E_3/2 vs E_{higher}")))
}
