//! Truncated q-expansions with exact rational coefficients and their
//! reductions mod `p^l`.
//!
//! Both series types are sparse (`BTreeMap`, absent = 0) and carry an explicit
//! precision `N`: coefficients are known for exponents `0..=N`. Binary
//! operations keep the smaller precision.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::certificate::Diff;
use crate::error::{Error, Result};
use crate::numtheory::Rational;
use crate::padic::{reduce_rational, Modulus};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExpansion {
    precision: u64,
    coeffs: BTreeMap<u64, Rational>,
}

impl QExpansion {
    pub fn zero(precision: u64) -> Self {
        Self {
            precision,
            coeffs: BTreeMap::new(),
        }
    }

    /// Builds a series from `(exponent, coefficient)` pairs, dropping zeros
    /// and anything beyond `precision`.
    pub fn from_terms(precision: u64, terms: impl IntoIterator<Item = (u64, Rational)>) -> Self {
        let mut s = Self::zero(precision);
        for (e, c) in terms {
            s.set(e, c);
        }
        s
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub fn coefficient(&self, exponent: u64) -> Rational {
        self.coeffs.get(&exponent).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    fn set(&mut self, exponent: u64, value: Rational) {
        if exponent > self.precision {
            return;
        }
        if value.is_zero() {
            self.coeffs.remove(&exponent);
        } else {
            self.coeffs.insert(exponent, value);
        }
    }

    pub fn add(&self, other: &QExpansion) -> QExpansion {
        let precision = self.precision.min(other.precision);
        let mut out = QExpansion::from_terms(
            precision,
            self.terms().map(|(e, c)| (e, c.clone())),
        );
        for (e, c) in other.terms().take_while(|(e, _)| *e <= precision) {
            let sum = out.coefficient(e) + c;
            out.set(e, sum);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> QExpansion {
        QExpansion::from_terms(self.precision, self.terms().map(|(e, v)| (e, v * c)))
    }

    pub fn truncate(&self, precision: u64) -> QExpansion {
        QExpansion::from_terms(
            precision.min(self.precision),
            self.terms().map(|(e, c)| (e, c.clone())),
        )
    }

    /// Coefficientwise reduction mod `p^l`.
    pub fn reduce_mod(&self, p: u64, l: u32) -> Result<ResidueSeries> {
        let modulus = Modulus::new(p, l)?;
        let mut residues = BTreeMap::new();
        for (e, c) in self.terms() {
            let r = reduce_rational(c, p, l).map_err(|err| match err {
                Error::PDividesDenominator { p, .. } => Error::PDividesDenominator {
                    p,
                    exponent: Some(e),
                },
                other => other,
            })?;
            if r.value() != 0 {
                residues.insert(e, r.value());
            }
        }
        Ok(ResidueSeries {
            modulus,
            precision: self.precision,
            residues,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("q-expansion serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// `exponent,value` rows for every exponent in `0..=N` (values as `num/den`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("exponent,value\n");
        for e in 0..=self.precision {
            out.push_str(&format!("{e},{}\n", format_rational(&self.coefficient(e))));
        }
        out
    }
}

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})q")?,
                _ => write!(f, "({c})q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.precision + 1)
    }
}

/// `num/den`, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num = num.trim().parse().map_err(|_| bad())?;
    let den: num_bigint::BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

#[derive(Serialize, Deserialize)]
struct QExpansionRepr {
    precision: u64,
    coeffs: Vec<(u64, String)>,
}

impl Serialize for QExpansion {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        QExpansionRepr {
            precision: self.precision,
            coeffs: self.terms().map(|(e, c)| (e, format_rational(c))).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = QExpansionRepr::deserialize(deserializer)?;
        let mut coeffs = BTreeMap::new();
        let mut last = None;
        for (e, text) in repr.coeffs {
            if e > repr.precision {
                return Err(D::Error::custom(format!("exponent {e} exceeds precision")));
            }
            if last.is_some_and(|l| l >= e) {
                return Err(D::Error::custom("exponents must be strictly ascending"));
            }
            last = Some(e);
            let c = parse_rational(&text).map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom(format!("explicit zero at exponent {e}")));
            }
            coeffs.insert(e, c);
        }
        Ok(QExpansion {
            precision: repr.precision,
            coeffs,
        })
    }
}

/// A q-expansion reduced mod `p^l`; residues are canonical in `[0, p^l)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSeries {
    modulus: Modulus,
    precision: u64,
    residues: BTreeMap<u64, u64>,
}

impl ResidueSeries {
    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn precision(&self) -> u64 {
        self.precision
    }

    pub fn residue(&self, exponent: u64) -> u64 {
        self.residues.get(&exponent).copied().unwrap_or(0)
    }

    /// Nonzero residues in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.residues.iter().map(|(e, r)| (*e, *r))
    }

    /// Residues at the given exponents, zeros included.
    pub fn table(&self, exponents: &[u64]) -> Vec<u64> {
        exponents.iter().map(|&e| self.residue(e)).collect()
    }

    fn check_modulus(&self, other: &ResidueSeries) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch {
                left: self.modulus.to_string(),
                right: other.modulus.to_string(),
            });
        }
        Ok(())
    }

    /// Sorted exponents `<= min(N_a, N_b)` where the residues differ.
    pub fn compare(&self, other: &ResidueSeries) -> Result<Vec<u64>> {
        self.check_modulus(other)?;
        let precision = self.precision.min(other.precision);
        let mut exps: Vec<u64> = self
            .residues
            .keys()
            .chain(other.residues.keys())
            .copied()
            .filter(|&e| e <= precision && self.residue(e) != other.residue(e))
            .collect();
        exps.sort_unstable();
        exps.dedup();
        Ok(exps)
    }

    /// Like [`compare`](Self::compare) but keeps both residues of every mismatch.
    pub fn diffs(&self, other: &ResidueSeries) -> Result<Vec<Diff>> {
        Ok(self
            .compare(other)?
            .into_iter()
            .map(|e| Diff(e, self.residue(e), other.residue(e)))
            .collect())
    }

    pub fn add(&self, other: &ResidueSeries) -> Result<ResidueSeries> {
        self.check_modulus(other)?;
        let precision = self.precision.min(other.precision);
        let m = self.modulus.value();
        let residues = self
            .residues
            .keys()
            .chain(other.residues.keys())
            .copied()
            .filter(|&e| e <= precision)
            .map(|e| (e, (self.residue(e) + other.residue(e)) % m))
            .filter(|&(_, r)| r != 0)
            .collect();
        Ok(ResidueSeries {
            modulus: self.modulus,
            precision,
            residues,
        })
    }

    pub fn scale(&self, c: u64) -> ResidueSeries {
        let m = self.modulus.value() as u128;
        let residues = self
            .terms()
            .map(|(e, r)| (e, ((r as u128 * c as u128) % m) as u64))
            .filter(|&(_, r)| r != 0)
            .collect();
        ResidueSeries {
            modulus: self.modulus,
            precision: self.precision,
            residues,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ResidueRepr {
            p: self.modulus.p(),
            l: self.modulus.l(),
            precision: self.precision,
            residues: self.terms().collect(),
        })
        .expect("residue series serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: ResidueRepr =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let modulus = Modulus::new(repr.p, repr.l)?;
        let mut residues = BTreeMap::new();
        let mut last = None;
        for (e, r) in repr.residues {
            if e > repr.precision || r == 0 || r >= modulus.value() || last.is_some_and(|l| l >= e) {
                return Err(Error::Parse(format!("invalid residue entry [{e}, {r}]")));
            }
            last = Some(e);
            residues.insert(e, r);
        }
        Ok(ResidueSeries {
            modulus,
            precision: repr.precision,
            residues,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ResidueRepr {
    p: u64,
    l: u32,
    precision: u64,
    residues: Vec<(u64, u64)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{rational, rational_int};
    use proptest::prelude::*;

    fn series(precision: u64, terms: &[(u64, i64)]) -> QExpansion {
        QExpansion::from_terms(precision, terms.iter().map(|&(e, c)| (e, rational_int(c))))
    }

    fn zagier_prefix() -> QExpansion {
        series(
            16,
            &[(0, 1), (3, -4), (4, -6), (7, -12), (8, -12), (11, -12), (12, -16), (15, -24), (16, -18)],
        )
    }

    const TABLE_EXPONENTS: [u64; 9] = [0, 3, 4, 7, 8, 11, 12, 15, 16];

    #[test]
    fn add_identity_and_inverse() {
        let a = series(12, &[(0, 1), (3, -4)]);
        assert_eq!(a.add(&QExpansion::zero(12)), a);
        let neg = series(12, &[(0, -1), (3, 4)]);
        assert_eq!(a.add(&neg), QExpansion::zero(12));
        let short = series(5, &[(0, 2)]);
        assert_eq!(a.add(&short).precision(), 5);
    }

    #[test]
    fn scale_examples() {
        let a = zagier_prefix();
        assert_eq!(a.scale(&rational_int(0)), QExpansion::zero(16));
        assert_eq!(a.scale(&rational_int(1)), a);
        assert_eq!(a.scale(&rational_int(-3)).coefficient(0), rational_int(-3));
    }

    #[test]
    fn reduce_zagier_prefix() {
        let r7 = zagier_prefix().reduce_mod(7, 1).unwrap();
        assert_eq!(r7.table(&TABLE_EXPONENTS), vec![1, 3, 1, 2, 2, 2, 5, 4, 3]);
        let r49 = zagier_prefix().reduce_mod(7, 2).unwrap();
        assert_eq!(r49.table(&TABLE_EXPONENTS), vec![1, 45, 43, 37, 37, 37, 33, 25, 31]);
    }

    #[test]
    fn reduce_rejects_p_in_denominator() {
        let a = QExpansion::from_terms(5, [(0, rational_int(1)), (2, rational(1, 7))]);
        assert_eq!(
            a.reduce_mod(7, 1),
            Err(Error::PDividesDenominator {
                p: 7,
                exponent: Some(2)
            })
        );
    }

    #[test]
    fn compare_modulus_and_precision() {
        let a = zagier_prefix().reduce_mod(7, 1).unwrap();
        assert!(a.compare(&a).unwrap().is_empty());
        let b = zagier_prefix().reduce_mod(7, 2).unwrap();
        assert!(matches!(a.compare(&b), Err(Error::ModulusMismatch { .. })));
        let short = zagier_prefix().truncate(8).scale(&rational_int(2)).reduce_mod(7, 1).unwrap();
        assert_eq!(a.compare(&short).unwrap(), vec![0, 3, 4, 7, 8]);
    }

    #[test]
    fn json_layout() {
        let a = QExpansion::from_terms(4, [(0, rational_int(1)), (3, rational(-4, 3))]);
        assert_eq!(a.to_json(), r#"{"precision":4,"coeffs":[[0,"1/1"],[3,"-4/3"]]}"#);
        assert_eq!(QExpansion::from_json(&a.to_json()).unwrap(), a);
        assert!(QExpansion::from_json(r#"{"precision":2,"coeffs":[[3,"1/1"]]}"#).is_err());
        assert!(QExpansion::from_json(r#"{"precision":5,"coeffs":[[3,"0/1"]]}"#).is_err());
        let r = a.reduce_mod(5, 1).unwrap();
        assert_eq!(r.to_json(), r#"{"p":5,"l":1,"precision":4,"residues":[[0,1],[3,2]]}"#);
        assert_eq!(ResidueSeries::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn csv_lists_every_exponent() {
        let a = series(3, &[(0, 1), (3, -4)]);
        assert_eq!(a.to_csv(), "exponent,value\n0,1/1\n1,0/1\n2,0/1\n3,-4/1\n");
    }

    fn arb_series() -> impl Strategy<Value = QExpansion> {
        (
            0u64..30,
            prop::collection::vec((0u64..30, -500i64..500, 1i64..40), 0..12),
        )
            .prop_map(|(n, terms)| {
                QExpansion::from_terms(
                    n,
                    terms.into_iter().map(|(e, a, b)| (e, rational(a, b))),
                )
            })
    }

    fn p_integral(a: &QExpansion, p: u64) -> bool {
        a.terms().all(|(_, c)| c.denom() % p != 0u32.into())
    }

    proptest! {
        #[test]
        fn reduction_is_a_homomorphism(a in arb_series(), b in arb_series(), c in -50i64..50, l in 1u32..3) {
            let p = 11;
            prop_assume!(p_integral(&a, p) && p_integral(&b, p));
            let ra = a.reduce_mod(p, l).unwrap();
            let rb = b.reduce_mod(p, l).unwrap();
            prop_assert_eq!(a.add(&b).reduce_mod(p, l).unwrap(), ra.add(&rb).unwrap());
            let m = (p as i64).pow(l);
            prop_assert_eq!(
                a.scale(&rational_int(c)).reduce_mod(p, l).unwrap(),
                ra.scale(c.rem_euclid(m) as u64)
            );
        }

        #[test]
        fn compare_empty_iff_equal(a in arb_series(), b in arb_series()) {
            let p = 13;
            prop_assume!(p_integral(&a, p) && p_integral(&b, p));
            let ra = a.reduce_mod(p, 1).unwrap();
            let rb = b.reduce_mod(p, 1).unwrap();
            let n = ra.precision().min(rb.precision());
            let same = (0..=n).all(|e| ra.residue(e) == rb.residue(e));
            prop_assert_eq!(ra.compare(&rb).unwrap().is_empty(), same);
        }

        #[test]
        fn json_round_trip(a in arb_series()) {
            prop_assert_eq!(QExpansion::from_json(&a.to_json()).unwrap(), a);
        }
    }
}
