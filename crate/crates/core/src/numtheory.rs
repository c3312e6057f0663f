//! Exact integer and rational number theory: factorization, multiplicative
//! functions, the Kronecker symbol, Bernoulli numbers (ordinary and twisted by
//! a quadratic character) and the values of zeta and Dirichlet L-functions at
//! non-positive integers.
//!
//! Bernoulli numbers and generalized Bernoulli numbers are memoized in
//! process-wide tables guarded by `RwLock`s, so every function here can be
//! called from parallel workers.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Prime factorization by trial division. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize expects n >= 1");
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        push(d, &mut n);
        push(d + 2, &mut n);
        d += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

pub fn moebius(n: u64) -> i8 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sum of `d^r` over the positive divisors `d` of `n`.
pub fn sigma(r: u32, n: u64) -> BigUint {
    factorize(n)
        .into_iter()
        .map(|(p, e)| {
            let pr = BigUint::from(p).pow(r);
            let mut term = BigUint::one();
            let mut acc = BigUint::one();
            for _ in 0..e {
                term *= &pr;
                acc += &term;
            }
            acc
        })
        .product()
}

/// Positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// Jacobi symbol `(a / n)` for odd positive `n` and `a >= 0`.
fn jacobi(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1i8;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// The Kronecker symbol `(a / b)` for arbitrary integers.
pub fn kronecker(a: i64, b: i64) -> i8 {
    if b == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut k = 1i8;
    let mut b = b as i128;
    let a = a as i128;
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    let v = b.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        b >>= v;
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            k = -k;
        }
    }
    if b == 1 {
        return k;
    }
    let b = b as u64;
    k * jacobi(a.rem_euclid(b as i128) as u64, b)
}

fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// The quadratic character `chi_{-D0} = (-D0 / .)` attached to a negative
/// fundamental discriminant `-D0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadraticCharacter {
    d0: u64,
}

impl QuadraticCharacter {
    /// Builds `chi_{-d0}`; fails unless `-d0` is a fundamental discriminant.
    pub fn new(d0: u64) -> Result<Self> {
        if is_negative_fundamental(d0) {
            Ok(Self { d0 })
        } else {
            Err(Error::Domain(format!("-{d0} is not a fundamental discriminant")))
        }
    }

    pub fn d0(&self) -> u64 {
        self.d0
    }

    pub fn discriminant(&self) -> i64 {
        -(self.d0 as i64)
    }

    /// Conductor of the character (equal to `D0`).
    pub fn conductor(&self) -> u64 {
        self.d0
    }

    pub fn eval(&self, m: i64) -> i8 {
        kronecker(self.discriminant(), m)
    }
}

/// True when `-d0` is the discriminant of an imaginary quadratic field.
pub fn is_negative_fundamental(d0: u64) -> bool {
    match d0 % 4 {
        3 => is_squarefree(d0),
        0 => {
            let m = d0 / 4;
            matches!(m % 4, 1 | 2) && is_squarefree(m)
        }
        _ => false,
    }
}

/// All characters `chi_{-D0}` with `D0 <= max_d0`, ordered by `D0`.
pub fn negative_fundamental_characters(max_d0: u64) -> Vec<QuadraticCharacter> {
    (3..=max_d0)
        .filter(|&d| is_negative_fundamental(d))
        .map(|d0| QuadraticCharacter { d0 })
        .collect()
}

/// `n = D0 * f^2` with `-D0` a fundamental discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decomposition {
    pub d0: u64,
    pub f: u64,
}

impl Decomposition {
    pub fn character(&self) -> QuadraticCharacter {
        QuadraticCharacter { d0: self.d0 }
    }
}

pub fn fundamental_decomposition(n: u64) -> Result<Decomposition> {
    if n < 3 || matches!(n % 4, 1 | 2) {
        return Err(Error::Domain(format!(
            "{n} has no decomposition D0*f^2 with -D0 fundamental (need n >= 3, n = 0, 3 mod 4)"
        )));
    }
    let mut core = 1u64;
    let mut root = 1u64;
    for (p, e) in factorize(n) {
        if e % 2 == 1 {
            core *= p;
        }
        root *= p.pow(e / 2);
    }
    // core = 3 mod 4 is already fundamental; otherwise n = 0 mod 4 forces root even.
    if core % 4 == 3 {
        Ok(Decomposition { d0: core, f: root })
    } else {
        debug_assert!(root.is_multiple_of(2));
        Ok(Decomposition {
            d0: 4 * core,
            f: root / 2,
        })
    }
}

/// Even-index Bernoulli table: entry `i` holds `B_{2i}`.
fn bernoulli_table() -> &'static RwLock<Vec<Rational>> {
    static TABLE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Rational::one()]))
}

/// `B_2, B_4, ..., B_{2m}` (plus `B_0`) from the tangent numbers.
fn even_bernoulli_via_tangent(m: usize) -> Vec<Rational> {
    let mut t = vec![BigUint::zero(); m + 1];
    if m >= 1 {
        t[1] = BigUint::one();
    }
    for k in 2..=m {
        t[k] = &t[k - 1] * (k as u64 - 1);
    }
    for k in 2..=m {
        for j in k..=m {
            t[j] = &t[j - 1] * (j - k) as u64 + &t[j] * (j - k + 2) as u64;
        }
    }
    let mut out = Vec::with_capacity(m + 1);
    out.push(Rational::one());
    for (k, tk) in t.into_iter().enumerate().skip(1) {
        let four_k = BigInt::one() << (2 * k);
        let num = BigInt::from(tk) * BigInt::from(2 * k as u64);
        let den = &four_k * (&four_k - 1u32);
        let b = Rational::new(num, den);
        out.push(if k % 2 == 1 { b } else { -b });
    }
    out
}

/// The n-th Bernoulli number, with `B_1 = -1/2`.
pub fn bernoulli(n: u64) -> Rational {
    match n {
        0 => return Rational::one(),
        1 => return rational(-1, 2),
        _ if n % 2 == 1 => return Rational::zero(),
        _ => {}
    }
    let idx = (n / 2) as usize;
    {
        let table = bernoulli_table().read().expect("bernoulli cache poisoned");
        if let Some(b) = table.get(idx) {
            return b.clone();
        }
    }
    let mut table = bernoulli_table().write().expect("bernoulli cache poisoned");
    if idx >= table.len() {
        let target = idx.max(2 * table.len()).max(32);
        *table = even_bernoulli_via_tangent(target);
    }
    table[idx].clone()
}

/// Copy of the memoized `B_0, B_2, B_4, ...` table.
pub fn bernoulli_snapshot() -> Vec<Rational> {
    bernoulli_table()
        .read()
        .expect("bernoulli cache poisoned")
        .clone()
}

/// Installs a longer even-index table (entry `i` = `B_{2i}`), e.g. one loaded
/// from disk. Shorter tables than the current one are ignored. The caller is
/// responsible for the values being correct.
pub fn seed_bernoulli(table: Vec<Rational>) {
    let mut current = bernoulli_table().write().expect("bernoulli cache poisoned");
    if table.len() > current.len() && table.first().is_some_and(|b| b.is_one()) {
        *current = table;
    }
}

/// Denominator of `B_{2k}` by von Staudt-Clausen: product of primes `p` with `(p-1) | 2k`.
pub fn bernoulli_denominator(two_k: u64) -> BigInt {
    divisors(two_k)
        .into_iter()
        .map(|d| d + 1)
        .filter(|&p| is_prime(p))
        .map(BigInt::from)
        .product()
}

fn generalized_table() -> &'static RwLock<HashMap<(u64, u64), Rational>> {
    static TABLE: OnceLock<RwLock<HashMap<(u64, u64), Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `B_{n,chi} = f^{n-1} sum_{a=1..f} chi(a) B_n(a/f)`, expanded as
/// `(1/f) sum_j C(n,j) B_j f^j S_{n-j}` with `S_i = sum_a chi(a) a^i`.
pub fn generalized_bernoulli(n: u64, chi: QuadraticCharacter) -> Rational {
    assert!(n >= 1, "generalized Bernoulli numbers are indexed from 1");
    if let Some(v) = generalized_table()
        .read()
        .expect("bernoulli cache poisoned")
        .get(&(chi.d0, n))
    {
        return v.clone();
    }
    let value = if n == 1 {
        first_generalized_bernoulli(chi)
    } else {
        generalized_bernoulli_uncached(n, chi)
    };
    generalized_table()
        .write()
        .expect("bernoulli cache poisoned")
        .insert((chi.d0, n), value.clone());
    value
}

fn first_generalized_bernoulli(chi: QuadraticCharacter) -> Rational {
    let f = chi.conductor();
    let s: i128 = (1..=f)
        .map(|a| chi.eval(a as i64) as i128 * a as i128)
        .sum();
    Rational::new(BigInt::from(s), BigInt::from(f))
}

fn generalized_bernoulli_uncached(n: u64, chi: QuadraticCharacter) -> Rational {
    let f = chi.conductor();
    let n_us = n as usize;
    let mut power_sums = vec![BigInt::zero(); n_us + 1];
    for a in 1..=f {
        let c = chi.eval(a as i64);
        if c == 0 {
            continue;
        }
        let mut pow = BigInt::one();
        for s in power_sums.iter_mut() {
            if c > 0 {
                *s += &pow;
            } else {
                *s -= &pow;
            }
            pow *= a;
        }
    }
    let f_big = BigInt::from(f);
    let mut binom = BigInt::one();
    let mut f_pow = BigInt::one();
    let mut acc = Rational::zero();
    for j in 0..=n {
        let bj = bernoulli(j);
        if !bj.is_zero() {
            let s = &power_sums[(n - j) as usize];
            if !s.is_zero() {
                acc += bj * Rational::from_integer(&binom * &f_pow * s);
            }
        }
        binom = binom * (n - j) / (j + 1);
        f_pow *= &f_big;
    }
    acc / Rational::from_integer(f_big)
}

/// `zeta(s) = -B_{1-s}/(1-s)` for odd `s <= -1`.
pub fn zeta_nonpositive(s: i64) -> Result<Rational> {
    if s > -1 || s % 2 == 0 {
        return Err(Error::Domain(format!(
            "zeta_nonpositive expects an odd s <= -1, got {s}"
        )));
    }
    let n = (1 - s) as u64;
    Ok(-bernoulli(n) / rational_int(n as i64))
}

/// `L(1-n, chi) = -B_{n,chi}/n` for `one_minus_n = 1 - n <= 0`.
pub fn dirichlet_l_nonpositive(one_minus_n: i64, chi: QuadraticCharacter) -> Result<Rational> {
    if one_minus_n > 0 {
        return Err(Error::Domain(format!(
            "dirichlet_l_nonpositive expects 1-n <= 0, got {one_minus_n}"
        )));
    }
    let n = (1 - one_minus_n) as u64;
    Ok(-generalized_bernoulli(n, chi) / rational_int(n as i64))
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}
