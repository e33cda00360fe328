//! Bernoulli numbers and polynomials.
//!
//! The numbers are produced once by expanding the defining generating
//! function w/(e^w − 1) = Σ B_j w^j/j! (so B₁ = −1/2) and cached process-wide;
//! the polynomials are assembled from them via B_k(v) = Σ C(k,j) B_j v^{k−j},
//! which is the coefficient-of-w^k·k! of w·e^{wv}/(e^w − 1).

use std::sync::RwLock;

use num::{One, Zero};
use once_cell::sync::Lazy;

use super::rat::{binomial, factorial, int, rat_pow, Rat};

/// Cached B_j/j! values, i.e. the raw coefficients of w/(e^w − 1).
static GF_COEFFS: Lazy<RwLock<Vec<Rat>>> = Lazy::new(|| RwLock::new(vec![Rat::one()]));

fn ensure_gf_coeffs(order: usize) {
    {
        let got = GF_COEFFS.read().unwrap();
        if got.len() > order {
            return;
        }
    }
    let mut w = GF_COEFFS.write().unwrap();
    // Invert (e^w − 1)/w = Σ_{j≥0} w^j/(j+1)! term by term: with a_j the
    // inverse's coefficients, Σ_{i≤n} a_i/(n−i+1)! = [n = 0].
    while w.len() <= order {
        let n = w.len();
        let mut acc = Rat::zero();
        for (i, a) in w.iter().enumerate() {
            acc += a * Rat::new(int(1), factorial((n - i + 1) as u64));
        }
        w.push(-acc);
    }
}

/// The Bernoulli number B_k with the B₁ = −1/2 convention.
pub fn bernoulli_number(k: u64) -> Rat {
    ensure_gf_coeffs(k as usize);
    let coeffs = GF_COEFFS.read().unwrap();
    &coeffs[k as usize] * Rat::from_integer(factorial(k))
}

/// The Bernoulli polynomial value B_k(v).
pub fn bernoulli_poly(k: u64, v: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for j in 0..=k {
        acc += Rat::from_integer(binomial(k, j)) * bernoulli_number(j) * rat_pow(v, (k - j) as i64);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{rat, ratio};

    #[test]
    fn small_numbers() {
        assert_eq!(bernoulli_number(0), rat(1));
        assert_eq!(bernoulli_number(1), ratio(-1, 2));
        assert_eq!(bernoulli_number(2), ratio(1, 6));
        assert_eq!(bernoulli_number(3), rat(0));
        assert_eq!(bernoulli_number(4), ratio(-1, 30));
        assert_eq!(bernoulli_number(12), ratio(-691, 2730));
    }

    #[test]
    fn polynomial_values() {
        assert_eq!(bernoulli_poly(0, &ratio(7, 3)), rat(1));
        assert_eq!(bernoulli_poly(1, &rat(0)), ratio(-1, 2));
        assert_eq!(bernoulli_poly(2, &ratio(1, 2)), ratio(-1, 12));
        // B₂(v) = v² − v + 1/6
        assert_eq!(bernoulli_poly(2, &rat(1)), ratio(1, 6));
        // B₃(v) = v³ − (3/2)v² + (1/2)v vanishes at 0, 1/2, 1 and is 1/27 at 1/3.
        assert_eq!(bernoulli_poly(3, &ratio(1, 2)), rat(0));
        assert_eq!(bernoulli_poly(3, &ratio(1, 3)), ratio(1, 27));
    }

    #[test]
    fn reflection_symmetry() {
        // B_j(1−v) = (−1)^j B_j(v); relied on by the series lemmas.
        for j in 0..=9u64 {
            for v in [ratio(1, 2), ratio(2, 5), rat(3), ratio(-7, 4)] {
                let lhs = bernoulli_poly(j, &(rat(1) - &v));
                let sign = if j % 2 == 0 { rat(1) } else { rat(-1) };
                assert_eq!(lhs, sign * bernoulli_poly(j, &v));
            }
        }
    }
}
