//! Small number-theory helpers shared by the modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Fractional part `{t}` in `[0, 1)`.
pub fn frac(t: &Q) -> Q {
    t - t.floor()
}

/// Second Bernoulli function `{t}^2 - {t} + 1/6`.
pub fn bernoulli_p2(t: &Q) -> Q {
    let f = frac(t);
    &f * &f - &f + q(1, 6)
}

/// First Bernoulli function: `{t} - 1/2` off the integers, `0` on them.
pub fn bernoulli_p1(t: &Q) -> Q {
    if t.is_integer() {
        Q::zero()
    } else {
        frac(t) - q(1, 2)
    }
}

pub fn to_r64(x: &Q) -> Rational64 {
    Rational64::new(
        x.numer().to_i64().expect("exponent numerator overflow"),
        x.denom().to_i64().expect("exponent denominator overflow"),
    )
}

pub fn from_r64(x: Rational64) -> Q {
    q(*x.numer(), *x.denom())
}

/// Integer value of `x`, if it is one.
pub fn as_int(x: &Q) -> Option<BigInt> {
    if x.is_integer() {
        Some(x.to_integer())
    } else {
        None
    }
}

/// True when `x` is an integer divisible by `m`.
pub fn is_int_multiple(x: &Q, m: i64) -> bool {
    as_int(x).is_some_and(|v| (v % BigInt::from(m)).is_zero())
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    v.sort_unstable();
    v
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: i64) -> i64 {
    assert!(n > 0 && n % 2 == 1, "jacobi symbol needs odd positive modulus");
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
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

/// Extended gcd: returns `(g, x, y)` with `a x + b y = g >= 0`.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

pub fn lcm_all<I: IntoIterator<Item = BigInt>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.abs()))
}
