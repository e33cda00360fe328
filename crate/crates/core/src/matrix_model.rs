//! Finite-matrix-integral side of the story: the generating function of the
//! branched-cover counts is re-expanded as a sum over partitions (characters
//! and Schur polynomials) and, independently, as a finite sum over integer
//! eigenvalue tuples. Both sides are computed exactly as truncated Laurent
//! data in the expansion parameter with polynomial coefficients, and compared
//! coefficient by coefficient.

use std::collections::BTreeMap;

use itertools::Itertools;
use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exact::bernoulli::bernoulli_number;
use crate::exact::mpoly::MPoly;
use crate::exact::rat::{factorial, rat, rat_display, rat_is_integer, rat_pow, ratio, Rat};
use crate::partitions::{dimension, partitions_of, shifted_power_sum, Partition};

/// One-variable polynomial of degree r+1 whose values at the shifted row
/// coordinates h_i = λ_i − i + N add up to the shifted power sum of λ.
/// The coefficients depend on the matrix size N.
#[derive(Clone, Debug, PartialEq)]
pub struct APoly {
    pub r: u32,
    pub n: u32,
    /// coeffs[d] multiplies x^d; length r+2.
    pub coeffs: Vec<Rat>,
}

impl APoly {
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_at(&self, h: u32) -> Rat {
        self.eval(&rat(h as i64))
    }
}

// Closed form: the x-part is the binomial expansion of (x − N + 1/2)^{r+1},
// the constant tail resums Σ_j (1/2 − j)^{r+1} over the rows of the empty
// diagram through Faulhaber's formula, hence the Bernoulli numbers and the
// dyadic factor 1 − 2^{1−k}.
fn a_coefficients(r: u32, n: u32) -> Vec<Rat> {
    let deg = (r + 1) as usize;
    let mut coeffs = vec![Rat::zero(); deg + 1];
    let r_fact = Rat::from_integer(factorial(r as u64));
    let shift = ratio(1, 2) - rat(n as i64);
    let sign_r = if deg % 2 == 0 { rat(1) } else { rat(-1) };
    for k in 0..=deg {
        let k_fact = Rat::from_integer(factorial(k as u64));
        let lead = &r_fact * rat_pow(&shift, k as i64)
            / (&k_fact * Rat::from_integer(factorial((deg - k) as u64)));
        coeffs[deg - k] += lead;
        let sign_k = if k % 2 == 0 { rat(1) } else { rat(-1) };
        let dyadic = rat(1) - rat_pow(&rat(2), 1 - k as i64);
        let tail = &sign_r * &r_fact * sign_k * bernoulli_number(k as u64) * dyadic
            * rat_pow(&rat(n as i64), (deg - k) as i64)
            / (&k_fact * Rat::from_integer(factorial((deg + 1 - k) as u64)));
        coeffs[0] += tail;
    }
    coeffs
}

pub fn a_polynomial(r: u32, n: u32) -> APoly {
    assert!(r >= 1 && n >= 1);
    APoly { r, n, coeffs: a_coefficients(r, n) }
}

/// h_i = λ_i − i + N for i = 1..N (rows beyond the length count as 0);
/// strictly decreasing whenever λ has at most N rows.
pub fn h_tuple(lambda: &[u32], n: u32) -> Vec<u32> {
    let n = n as usize;
    assert!(lambda.len() <= n, "partition has more rows than the matrix size");
    (0..n).map(|i| lambda.get(i).copied().unwrap_or(0) + (n - 1 - i) as u32).collect()
}

/// Exact verdict on Σ_i A_{r+1}(h_i) = 𝐩_{r+1}(λ)/(r+1).
pub fn a_identity_check(r: u32, n: u32, lambda: &[u32]) -> bool {
    let poly = a_polynomial(r, n);
    let lhs = h_tuple(lambda, n)
        .iter()
        .fold(Rat::zero(), |acc, &h| acc + poly.eval_at(h));
    lhs == shifted_power_sum(r + 1, lambda)
}

#[derive(Clone, Debug, Serialize)]
pub struct AIdentityInstance {
    pub r: u32,
    pub n: u32,
    pub lambda: Partition,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AIdentityReport {
    pub seed: u64,
    pub count: usize,
    pub failures: usize,
    pub instances: Vec<AIdentityInstance>,
}

impl AIdentityReport {
    pub fn all_pass(&self) -> bool {
        self.failures == 0
    }
}

/// Randomized sweep of the defining identity of the A-polynomials over a
/// reproducible stream: r ≤ 4, N ≤ 6, |λ| ≤ 8 with at most N rows.
pub fn a_identity_sweep(seed: u64, count: usize) -> AIdentityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances = Vec::with_capacity(count);
    let mut failures = 0;
    for _ in 0..count {
        let r = rng.random_range(1..=4u32);
        let n = rng.random_range(1..=6u32);
        let k = rng.random_range(0..=8u32);
        let pool: Vec<Partition> =
            partitions_of(k).into_iter().filter(|p| p.len() <= n as usize).collect();
        let lambda = pool[rng.random_range(0..pool.len())].clone();
        let pass = a_identity_check(r, n, &lambda);
        if !pass {
            failures += 1;
        }
        instances.push(AIdentityInstance { r, n, lambda, pass });
    }
    AIdentityReport { seed, count, failures, instances }
}

/// Vandermonde determinant Π_{i<j} (h_i − h_j) of an integer tuple.
fn vandermonde_rat(h: &[u32]) -> Rat {
    let mut acc = rat(1);
    for i in 0..h.len() {
        for j in i + 1..h.len() {
            acc *= rat(h[i] as i64 - h[j] as i64);
        }
    }
    acc
}

/// Alternant det(v_i^{h_j}) expanded over permutations with sign; vanishes
/// identically when the exponent tuple has repeats.
fn alternant(h: &[u32], n: usize) -> MPoly {
    assert_eq!(h.len(), n);
    let mut det = MPoly::zero(n);
    for perm in (0..n).permutations(n) {
        let mut inversions = 0u32;
        for i in 0..n {
            for j in i + 1..n {
                if perm[i] > perm[j] {
                    inversions += 1;
                }
            }
        }
        let coef = if inversions % 2 == 0 { rat(1) } else { rat(-1) };
        let exps: Vec<u32> = perm.iter().map(|&j| h[j]).collect();
        det = det.add(&MPoly::monomial(n, exps, coef));
    }
    det
}

fn schur_from_h(h: &[u32], n: usize) -> MPoly {
    let mut acc = alternant(h, n);
    for i in 0..n {
        for j in i + 1..n {
            acc = acc.div_linear_diff(i, j);
        }
    }
    acc
}

/// Schur polynomial in N variables as the alternant divided exactly by the
/// Vandermonde determinant.
pub fn schur_poly(lambda: &[u32], n: u32) -> MPoly {
    schur_from_h(&h_tuple(lambda, n), n as usize)
}

/// Coefficient of one power of the counting variable in the partition
/// function: a Laurent polynomial in the expansion parameter (finitely many
/// powers once truncated) whose coefficients are polynomials in v_1..v_N.
#[derive(Clone, Debug, PartialEq)]
pub struct ZCoefficient {
    pub k: u32,
    pub arity: usize,
    terms: BTreeMap<i64, MPoly>,
}

/// First place two Laurent expansions differ: lowest expansion power, then
/// lexicographically first monomial, with both coefficients rendered exactly.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Mismatch {
    pub gs_power: i64,
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

fn monomial_display(exps: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("v{}", i + 1)),
            _ => parts.push(format!("v{}^{}", i + 1, e)),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

fn mpoly_coeff(p: &MPoly, exps: &[u32]) -> Rat {
    p.terms()
        .find(|(e, _)| e.as_slice() == exps)
        .map(|(_, q)| q.clone())
        .unwrap_or_else(|| rat(0))
}

impl ZCoefficient {
    fn new(k: u32, arity: usize) -> Self {
        ZCoefficient { k, arity, terms: BTreeMap::new() }
    }

    fn add_term(&mut self, power: i64, poly: MPoly) {
        if poly.is_zero() {
            return;
        }
        let entry = self.terms.entry(power).or_insert_with(|| MPoly::zero(self.arity));
        *entry = entry.add(&poly);
        if entry.is_zero() {
            self.terms.remove(&power);
        }
    }

    pub fn powers(&self) -> impl Iterator<Item = (&i64, &MPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, power: i64) -> MPoly {
        self.terms.get(&power).cloned().unwrap_or_else(|| MPoly::zero(self.arity))
    }

    pub fn first_difference(&self, other: &Self) -> Option<Mismatch> {
        assert_eq!(self.arity, other.arity);
        let powers: std::collections::BTreeSet<i64> =
            self.terms.keys().chain(other.terms.keys()).copied().collect();
        for p in powers {
            let a = self.coefficient(p);
            let b = other.coefficient(p);
            let diff = a.sub(&b);
            let first = diff.terms().next().map(|(e, _)| e.clone());
            if let Some(e) = first {
                return Some(Mismatch {
                    gs_power: p,
                    monomial: monomial_display(&e),
                    lhs: rat_display(&mpoly_coeff(&a, &e)),
                    rhs: rat_display(&mpoly_coeff(&b, &e)),
                });
            }
        }
        None
    }
}

/// exp(g^r·s)·g^{−k} truncated to expansion orders r·m ≤ order, as
/// (power of g, scalar) pairs.
fn exp_laurent(s: &Rat, r: u32, k: u32, order: u32) -> Vec<(i64, Rat)> {
    let mut out = Vec::new();
    let mut term = rat(1);
    let mut m = 0u32;
    while r * m <= order {
        out.push(((r * m) as i64 - k as i64, term.clone()));
        m += 1;
        term = term * s / rat(m as i64);
    }
    out
}

/// Character-side expansion: sum over partitions of k with at most N rows of
/// dim(λ)/k! · s_λ(v) · exp(g^r·𝐩_{r+1}(λ)/(r+1)), truncated in g.
pub fn z_coefficient_character(k: u32, n: u32, r: u32, gs_order: u32) -> ZCoefficient {
    assert!(n > k, "matrix size must exceed the extracted degree");
    assert!(r >= 1);
    let arity = n as usize;
    let k_fact = Rat::from_integer(factorial(k as u64));
    let mut out = ZCoefficient::new(k, arity);
    for lambda in partitions_of(k) {
        if lambda.len() > arity {
            continue;
        }
        let dim = Rat::from_integer(dimension(&lambda));
        let poly = schur_poly(&lambda, n).scale(&(dim / &k_fact));
        let s = shifted_power_sum(r + 1, &lambda);
        for (p, c) in exp_laurent(&s, r, k, gs_order) {
            out.add_term(p, poly.scale(&c));
        }
    }
    out
}

/// Smallest eigenvalue cutoff for which the finite sum reproduces the
/// character sum at degree k: every strictly decreasing tuple with row sum
/// k + n(n−1)/2 must fit under the cutoff, so the top entry forces k + n − 1;
/// the analytic bound 2d > 2k + n − 1 is weaker from three rows on.
pub fn minimal_admissible_d(k: u32, n: u32) -> u32 {
    let row_bound = k + n - 1;
    let half_bound = k + (n - 1) / 2 + 1;
    row_bound.max(half_bound)
}

/// Finite-sum side: eigenvalue tuples d ≥ h_1 > … > h_N ≥ 0 selected by the
/// counting-variable degree, each contributing its alternant over the
/// Vandermonde times Δ(h)/Π h_i! and the exponential of Σ A_{r+1}(h_i).
///
/// Degree-k agreement with `z_coefficient_character` needs
/// d ≥ `minimal_admissible_d(k, n)`; smaller cutoffs satisfying the analytic
/// bound are accepted and genuinely drop tuples.
pub fn z_coefficient_finite_sum(k: u32, n: u32, d: u32, r: u32, gs_order: u32) -> ZCoefficient {
    assert!(n > k, "matrix size must exceed the extracted degree");
    assert!(2 * d > 2 * k + n - 1, "eigenvalue cutoff below the analytic bound");
    assert!(r >= 1);
    let arity = n as usize;
    let poly_a = a_polynomial(r, n);
    let half_shift = ratio(n as i64 - 1, 2);
    let mut out = ZCoefficient::new(k, arity);
    for h in weakly_decreasing_tuples(arity, d) {
        // Per-eigenvalue degrees h_i − (N−1)/2 are half-integers; only the
        // integrality of their sum makes the degree selection meaningful.
        let t_exp = h.iter().fold(Rat::zero(), |acc, &hi| acc + rat(hi as i64) - &half_shift);
        assert!(rat_is_integer(&t_exp), "half-integer degrees failed to cancel");
        if t_exp != rat(k as i64) {
            continue;
        }
        if h.windows(2).any(|w| w[0] == w[1]) {
            assert!(vandermonde_rat(&h).is_zero());
            continue;
        }
        let fact_prod = h.iter().fold(BigInt::one(), |acc, &hi| acc * factorial(hi as u64));
        let scalar = vandermonde_rat(&h) / Rat::from_integer(fact_prod);
        let poly = schur_from_h(&h, arity).scale(&scalar);
        let s = h.iter().fold(Rat::zero(), |acc, &hi| acc + poly_a.eval_at(hi));
        for (p, c) in exp_laurent(&s, r, k, gs_order) {
            out.add_term(p, poly.scale(&c));
        }
    }
    out
}

fn weakly_decreasing_tuples(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: usize, top: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for v in (0..=top).rev() {
            prefix.push(v);
            rec(remaining - 1, v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientCheck {
    pub k: u32,
    pub n: u32,
    pub d: u32,
    pub r: u32,
    pub gs_order: u32,
    pub pass: bool,
    pub first_mismatch: Option<Mismatch>,
}

/// Compare the two expansions of the degree-k coefficient.
pub fn coefficient_check(k: u32, n: u32, d: u32, r: u32, gs_order: u32) -> CoefficientCheck {
    let character = z_coefficient_character(k, n, r, gs_order);
    let finite = z_coefficient_finite_sum(k, n, d, r, gs_order);
    let first_mismatch = character.first_difference(&finite);
    CoefficientCheck { k, n, d, r, gs_order, pass: first_mismatch.is_none(), first_mismatch }
}

/// Sweep the comparison over all degrees up to k_max, matrix sizes k+1 and
/// k+2, the minimal admissible cutoff, and ranks up to r_max, through
/// expansion order 3r.
pub fn coefficient_report(k_max: u32, r_max: u32) -> Vec<CoefficientCheck> {
    let mut out = Vec::new();
    for k in 0..=k_max {
        for n in [k + 1, k + 2] {
            for r in 1..=r_max {
                out.push(coefficient_check(k, n, minimal_admissible_d(k, n), r, 3 * r));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{class_size, irreducible_character, partitions_of_range};

    fn a_linear(n: u32) -> APoly {
        APoly { r: 0, n, coeffs: a_coefficients(0, n) }
    }

    #[test]
    fn linear_case_collapses() {
        for n in 1..=5 {
            let a = a_linear(n);
            assert_eq!(a.coeffs, vec![ratio(-(n as i64 - 1), 2), rat(1)]);
        }
        // weight extraction: λ = (2) at N = 2 has rows (3, 0)
        let a = a_linear(2);
        assert_eq!(a.eval_at(3) + a.eval_at(0), rat(2));
        // empty diagram sums to zero for every degree
        for r in 1..=3 {
            for n in 1..=4 {
                let poly = a_polynomial(r, n);
                let total = h_tuple(&[], n)
                    .iter()
                    .fold(Rat::zero(), |acc, &h| acc + poly.eval_at(h));
                assert!(total.is_zero(), "r={r} n={n}");
            }
        }
    }

    #[test]
    fn row_sum_identity_examples() {
        assert!(a_identity_check(1, 2, &[2]));
        assert!(a_identity_check(2, 3, &[2, 1]));
        assert!(a_identity_check(3, 4, &[4, 2, 1]));
        assert!(a_identity_check(4, 6, &[3, 3, 1, 1]));
        // the identity is independent of the padding size
        for n in 3..=6 {
            assert!(a_identity_check(2, n, &[2, 2, 1]));
        }
    }

    #[test]
    fn seeded_sweep_passes() {
        let report = a_identity_sweep(0x5eed, 50);
        assert_eq!(report.count, 50);
        assert!(report.all_pass(), "failures: {}", report.failures);
    }

    #[test]
    fn schur_examples() {
        let p1 = schur_poly(&[1], 3);
        let expected = MPoly::var(3, 0).add(&MPoly::var(3, 1)).add(&MPoly::var(3, 2));
        assert_eq!(p1, expected);

        let p2 = schur_poly(&[2], 2);
        let expected = MPoly::monomial(2, vec![2, 0], rat(1))
            .add(&MPoly::monomial(2, vec![1, 1], rat(1)))
            .add(&MPoly::monomial(2, vec![0, 2], rat(1)));
        assert_eq!(p2, expected);

        let p11 = schur_poly(&[1, 1], 2);
        assert_eq!(p11, MPoly::monomial(2, vec![1, 1], rat(1)));

        assert_eq!(schur_poly(&[], 4), MPoly::one(4));
    }

    fn power_sum(n: usize, m: u32) -> MPoly {
        let mut acc = MPoly::zero(n);
        for i in 0..n {
            acc = acc.add(&MPoly::var(n, i).pow(m));
        }
        acc
    }

    #[test]
    fn schur_matches_character_expansion() {
        // s_λ = (1/k!) Σ_μ |C_μ| χ_λ(μ) Π_j p_{μ_j}
        let n = 3usize;
        for k in 1..=5u32 {
            let k_fact = Rat::from_integer(factorial(k as u64));
            for lambda in partitions_of(k) {
                if lambda.len() > n {
                    continue;
                }
                let mut rhs = MPoly::zero(n);
                for mu in partitions_of(k) {
                    let coef = Rat::from_integer(class_size(&mu))
                        * Rat::from_integer(irreducible_character(&lambda, &mu))
                        / &k_fact;
                    let mut prod = MPoly::one(n);
                    for &part in &mu {
                        prod = prod.mul(&power_sum(n, part));
                    }
                    rhs = rhs.add(&prod.scale(&coef));
                }
                assert_eq!(schur_poly(&lambda, n as u32), rhs, "λ={lambda:?}");
            }
        }
    }

    #[test]
    fn hook_dimension_matches_vandermonde() {
        // dim λ/|λ|! against Δ(h)/Π h_i!, with h padded to each matrix size
        for lambda in partitions_of_range(1, 6) {
            let k = lambda.iter().sum::<u32>();
            let lhs = Rat::from_integer(dimension(&lambda))
                / Rat::from_integer(factorial(k as u64));
            for extra in 0..=1u32 {
                let n = lambda.len() as u32 + extra;
                let h = h_tuple(&lambda, n);
                let fact_prod =
                    h.iter().fold(BigInt::one(), |acc, &hi| acc * factorial(hi as u64));
                let rhs = vandermonde_rat(&h) / Rat::from_integer(fact_prod);
                assert_eq!(lhs, rhs, "λ={lambda:?} n={n}");
            }
        }
    }

    #[test]
    fn degenerate_alternant_vanishes() {
        assert!(alternant(&[2, 2, 0], 3).is_zero());
        assert!(alternant(&[3, 1, 1, 0], 4).is_zero());
    }

    #[test]
    fn degree_zero_coefficient_is_one() {
        let c = z_coefficient_character(0, 1, 1, 3);
        assert_eq!(c.coefficient(0), MPoly::one(1));
        assert_eq!(c.powers().count(), 1);
        let c = z_coefficient_character(0, 3, 2, 6);
        assert_eq!(c.coefficient(0), MPoly::one(3));
        assert_eq!(c.powers().count(), 1);

        let f = z_coefficient_finite_sum(0, 1, 1, 1, 3);
        assert_eq!(f.coefficient(0), MPoly::one(1));
        assert_eq!(f.powers().count(), 1);
    }

    #[test]
    fn degree_one_extraction() {
        // single partition (1): dim 1, shifted power sum 0, so the whole
        // coefficient is (v_1 + v_2)/g
        let c = z_coefficient_character(1, 2, 1, 3);
        assert_eq!(c.coefficient(-1), MPoly::var(2, 0).add(&MPoly::var(2, 1)));
        assert_eq!(c.powers().count(), 1);
        let f = z_coefficient_finite_sum(1, 2, 3, 1, 3);
        assert_eq!(c.first_difference(&f), None);
    }

    #[test]
    fn finite_sum_matches_characters() {
        let check = coefficient_check(1, 2, 3, 1, 3);
        assert!(check.pass);
        for check in coefficient_report(1, 1) {
            assert!(check.pass, "k={} n={} r={}", check.k, check.n, check.r);
        }
    }

    #[test]
    fn analytic_cutoff_bound_is_not_sharp() {
        // at degree 2 with four rows the analytic bound admits d = 4, but the
        // tuple for λ = (2) tops out at h_1 = 5, so the finite sum drops it
        assert_eq!(minimal_admissible_d(2, 4), 5);
        let short = coefficient_check(2, 4, 4, 1, 3);
        assert!(!short.pass);
        let miss = short.first_mismatch.expect("undersized cutoff must be visible");
        assert_eq!(miss.rhs, "0");
        let full = coefficient_check(2, 4, 5, 1, 3);
        assert!(full.pass);
    }

    #[test]
    fn mismatch_reporting_is_exact() {
        let a = z_coefficient_character(1, 2, 1, 3);
        let mut b = a.clone();
        b.add_term(-1, MPoly::var(2, 1).scale(&ratio(1, 2)));
        let miss = a.first_difference(&b).unwrap();
        assert_eq!(miss.gs_power, -1);
        assert_eq!(miss.monomial, "v2");
        assert_eq!(miss.lhs, "1");
        assert_eq!(miss.rhs, "3/2");
    }
}
