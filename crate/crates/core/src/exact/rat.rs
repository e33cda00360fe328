//! Exact rational scalars and the small integer combinatorics used everywhere
//! else: factorials, binomials, double factorials, integer powers.
//!
//! `Rat` is always stored reduced with a positive denominator (the `num`
//! crate maintains that invariant for us); every function here returns exact
//! values — there is no floating point anywhere in this crate.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(int(n))
}

/// `a/b` as an exact rational. Panics if `b == 0`.
pub fn ratio(a: i64, b: i64) -> Rat {
    Rat::new(int(a), int(b))
}

pub fn rat_is_integer(q: &Rat) -> bool {
    q.denom().is_one()
}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= int(k as i64);
    }
    acc
}

/// Binomial coefficient with the usual convention that out-of-range `k`
/// gives 0 (needed by the Bernoulli-polynomial expansion).
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= int((n - i) as i64);
        den *= int((i + 1) as i64);
    }
    num / den
}

/// Odd double factorial `(2k-1)!! = 1·3·5···(2k-1)`, with `(-1)!! = 1`.
pub fn odd_double_factorial(k: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut j = 1i64;
    for _ in 0..k {
        acc *= int(2 * j - 1);
        j += 1;
    }
    acc
}

pub fn rat_pow(q: &Rat, e: i64) -> Rat {
    if e == 0 {
        return Rat::one();
    }
    let ue = e.unsigned_abs() as u32;
    let p = Rat::new(q.numer().pow(ue), q.denom().pow(ue));
    if e > 0 {
        p
    } else {
        assert!(!q.is_zero(), "zero to a negative power");
        p.recip()
    }
}

/// Renders `q` as `num/den` (or just `num` for integers); the exact-output
/// contract of the CLI and all report files.
pub fn rat_display(q: &Rat) -> String {
    if rat_is_integer(q) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses the `rat_display` format back; used by the disk caches.
pub fn rat_parse(s: &str) -> Option<Rat> {
    let mut it = s.splitn(2, '/');
    let numer: BigInt = it.next()?.trim().parse().ok()?;
    match it.next() {
        None => Some(Rat::from_integer(numer)),
        Some(d) => {
            let denom: BigInt = d.trim().parse().ok()?;
            if denom.is_zero() {
                None
            } else {
                Some(Rat::new(numer, denom))
            }
        }
    }
}

pub fn rat_abs(q: &Rat) -> Rat {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_and_binomials() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(5), int(120));
        assert_eq!(binomial(7, 3), int(35));
        assert_eq!(binomial(3, 7), int(0));
        assert_eq!(odd_double_factorial(0), int(1));
        assert_eq!(odd_double_factorial(3), int(15));
    }

    #[test]
    fn display_round_trip() {
        for q in [ratio(-3, 7), rat(4), ratio(1, 1152), rat(0)] {
            assert_eq!(rat_parse(&rat_display(&q)).unwrap(), q);
        }
        assert_eq!(rat_display(&ratio(2, 4)), "1/2");
        assert!(rat_parse("1/0").is_none());
    }

    #[test]
    fn powers() {
        assert_eq!(rat_pow(&ratio(2, 3), 3), ratio(8, 27));
        assert_eq!(rat_pow(&ratio(2, 3), -2), ratio(9, 4));
        assert_eq!(rat_pow(&rat(0), 0), rat(1));
    }
}
