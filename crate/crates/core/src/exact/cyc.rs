//! The coefficient ring Q(ζ_r)[α] with ζ_r reduced modulo the r-th
//! cyclotomic polynomial Φ_r and α an abstract square root of −2/r.
//!
//! Elements are stored as c0 + c1·α with c0, c1 ∈ Q[x]/Φ_r in canonical
//! reduced form (degree < φ(r), trailing zeros trimmed), so equality is
//! structural. A value with `r == 0` is a plain rational scalar that adopts
//! the other operand's root of unity on first contact; this is what lets the
//! generic series code build constants without threading `r` everywhere.
//! Mixing two *different* nonzero r values is a bug and panics.
//!
//! For r ∈ {6, 8, 12, …} the quotient Q(ζ_r)[α]/(α²+2/r) has zero divisors
//! (e.g. √(−1/3) already lies in Q(ζ₆)), so `inv` is partial: it inverts
//! everything this crate ever needs — rationals, powers and differences of
//! roots of unity, and any element whose conjugate-norm is a unit — and
//! panics with a clear message otherwise.

use std::collections::HashMap;
use std::sync::RwLock;

use num::{One, Zero};
use once_cell::sync::Lazy;

use super::rat::{rat, ratio, Rat};

/// Coefficients of Φ_r, dense, constant term first. Memoized per r.
static CYCLOTOMIC: Lazy<RwLock<HashMap<u32, Vec<Rat>>>> = Lazy::new(Default::default);

fn poly_trim(p: &mut Vec<Rat>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

/// Quotient of a polynomial division, asserting the remainder is zero.
fn poly_div_exact(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let mut rem: Vec<Rat> = num.to_vec();
    poly_trim(&mut rem);
    let mut den = den.to_vec();
    poly_trim(&mut den);
    let dl = den.len();
    assert!(dl > 0, "division by zero polynomial");
    let mut quot = vec![Rat::zero(); rem.len().saturating_sub(dl) + 1];
    while rem.len() >= dl {
        let shift = rem.len() - dl;
        let c = rem.last().unwrap() / den.last().unwrap();
        for i in 0..dl {
            let t = &den[i] * &c;
            rem[shift + i] -= t;
        }
        quot[shift] = c;
        poly_trim(&mut rem);
    }
    assert!(rem.is_empty(), "polynomial division was not exact");
    quot
}

fn cyclotomic_poly(r: u32) -> Vec<Rat> {
    if let Some(p) = CYCLOTOMIC.read().unwrap().get(&r) {
        return p.clone();
    }
    // Φ_r = (x^r − 1) / Π_{d|r, d<r} Φ_d
    let mut num = vec![Rat::zero(); r as usize + 1];
    num[0] = rat(-1);
    num[r as usize] = Rat::one();
    let mut acc = num;
    for d in 1..r {
        if r % d == 0 {
            acc = poly_div_exact(&acc, &cyclotomic_poly(d));
        }
    }
    CYCLOTOMIC.write().unwrap().insert(r, acc.clone());
    acc
}

/// φ(r) = deg Φ_r.
pub fn phi_deg(r: u32) -> usize {
    cyclotomic_poly(r).len() - 1
}

fn poly_mod_phi(mut p: Vec<Rat>, r: u32) -> Vec<Rat> {
    let phi = cyclotomic_poly(r);
    let dl = phi.len();
    while p.len() >= dl {
        let shift = p.len() - dl;
        let c = p.last().unwrap().clone();
        for i in 0..dl {
            let t = &phi[i] * &c;
            p[shift + i] -= t;
        }
        poly_trim(&mut p);
    }
    poly_trim(&mut p);
    p
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    poly_trim(&mut out);
    out
}

fn poly_neg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|c| -c).collect()
}

fn poly_scale(a: &[Rat], s: &Rat) -> Vec<Rat> {
    if s.is_zero() {
        return vec![];
    }
    a.iter().map(|c| c * s).collect()
}

/// Inverse of `a` modulo Φ_r via the extended Euclidean algorithm.
/// Returns None when gcd(a, Φ_r) is not constant (only possible at
/// non-primitive-root divisors, which our callers never produce).
fn poly_inv_mod_phi(a: &[Rat], r: u32) -> Option<Vec<Rat>> {
    let mut r0 = cyclotomic_poly(r);
    let mut r1 = a.to_vec();
    poly_trim(&mut r1);
    if r1.is_empty() {
        return None;
    }
    // Bezout coefficients for r1 only.
    let mut s0: Vec<Rat> = vec![];
    let mut s1: Vec<Rat> = vec![Rat::one()];
    while !r1.is_empty() {
        // Divide r0 by r1.
        let mut q = vec![Rat::zero(); r0.len().saturating_sub(r1.len()) + 1];
        let mut rem = r0.clone();
        while rem.len() >= r1.len() && !rem.is_empty() {
            let shift = rem.len() - r1.len();
            let c = rem.last().unwrap() / r1.last().unwrap();
            for i in 0..r1.len() {
                let t = &r1[i] * &c;
                rem[shift + i] -= t;
            }
            q[shift] = c;
            poly_trim(&mut rem);
        }
        let s2 = poly_add(&s0, &poly_neg(&poly_mul(&q, &s1)));
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
        let _ = &r0;
    }
    // r0 is now the gcd, s0 its Bezout coefficient: s0·a ≡ r0 (mod Φ).
    if r0.len() != 1 {
        return None;
    }
    let lead = r0[0].clone();
    Some(poly_mod_phi(poly_scale(&s0, &lead.recip()), r))
}

#[derive(Clone, PartialEq, Eq)]
pub struct CycExt {
    /// 0 for a not-yet-promoted rational scalar; otherwise the root order.
    r: u32,
    /// ζ-polynomial part (canonical mod Φ_r, or a single rational for r = 0).
    c0: Vec<Rat>,
    /// Coefficient of α, same representation.
    c1: Vec<Rat>,
}

impl std::fmt::Debug for CycExt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CycExt(r={}, {:?} + α·{:?})", self.r, self.c0, self.c1)
    }
}

impl CycExt {
    /// Canonical constructor: an element that is in fact a plain rational
    /// (no ζ beyond degree 0, no α part) forgets its ring tag so that equal
    /// values are structurally equal regardless of which ring produced them.
    fn make(r: u32, c0: Vec<Rat>, c1: Vec<Rat>) -> Self {
        if c1.is_empty() && c0.len() <= 1 {
            CycExt { r: 0, c0, c1 }
        } else {
            CycExt { r, c0, c1 }
        }
    }

    pub fn zero() -> Self {
        CycExt { r: 0, c0: vec![], c1: vec![] }
    }

    pub fn from_rat(q: Rat) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        CycExt { r: 0, c0: vec![q], c1: vec![] }
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    /// ζ_r^e.
    pub fn zeta_pow(r: u32, e: i64) -> Self {
        assert!(r >= 1);
        let e = e.rem_euclid(r as i64) as usize;
        let mut p = vec![Rat::zero(); e + 1];
        p[e] = Rat::one();
        CycExt::make(r, poly_mod_phi(p, r), vec![])
    }

    pub fn zeta(r: u32) -> Self {
        Self::zeta_pow(r, 1)
    }

    /// The abstract square root α of −2/r.
    pub fn alpha(r: u32) -> Self {
        assert!(r >= 1);
        CycExt { r, c0: vec![], c1: vec![Rat::one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_empty() && self.c1.is_empty()
    }

    pub fn is_rational(&self) -> bool {
        self.c1.is_empty() && self.c0.len() <= 1
    }

    /// The rational value of a scalar element; None when ζ or α survive.
    pub fn as_rat(&self) -> Option<Rat> {
        if !self.c1.is_empty() || self.c0.len() > 1 {
            return None;
        }
        Some(self.c0.first().cloned().unwrap_or_else(Rat::zero))
    }

    pub fn root_order(&self) -> u32 {
        self.r
    }

    fn promoted(&self, r: u32) -> CycExt {
        if self.r == r || r == 0 {
            return self.clone();
        }
        assert!(
            self.r == 0,
            "mixed cyclotomic orders: {} vs {}",
            self.r,
            r
        );
        CycExt { r, c0: poly_mod_phi(self.c0.clone(), r), c1: poly_mod_phi(self.c1.clone(), r) }
    }

    fn joint_r(&self, o: &CycExt) -> u32 {
        match (self.r, o.r) {
            (0, r) | (r, 0) => r,
            (a, b) => {
                assert!(a == b, "mixed cyclotomic orders: {a} vs {b}");
                a
            }
        }
    }

    pub fn add(&self, o: &CycExt) -> CycExt {
        let r = self.joint_r(o);
        let a = self.promoted(r);
        let b = o.promoted(r);
        CycExt::make(r, poly_add(&a.c0, &b.c0), poly_add(&a.c1, &b.c1))
    }

    pub fn neg(&self) -> CycExt {
        CycExt::make(self.r, poly_neg(&self.c0), poly_neg(&self.c1))
    }

    pub fn sub(&self, o: &CycExt) -> CycExt {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &CycExt) -> CycExt {
        let r = self.joint_r(o);
        let a = self.promoted(r);
        let b = o.promoted(r);
        // (a0 + a1 α)(b0 + b1 α) = a0b0 − (2/r)·a1b1 + (a0b1 + a1b0) α
        let alpha_sq = if r == 0 {
            // α never appears in scalar-only products.
            assert!(a.c1.is_empty() && b.c1.is_empty());
            Rat::zero()
        } else {
            ratio(-2, r as i64)
        };
        let reduce = |p: Vec<Rat>| if r == 0 { p } else { poly_mod_phi(p, r) };
        let c0 = poly_add(&poly_mul(&a.c0, &b.c0), &poly_scale(&poly_mul(&a.c1, &b.c1), &alpha_sq));
        let c1 = poly_add(&poly_mul(&a.c0, &b.c1), &poly_mul(&a.c1, &b.c0));
        CycExt::make(r, reduce(c0), reduce(c1))
    }

    pub fn scale(&self, s: &Rat) -> CycExt {
        CycExt::make(self.r, poly_scale(&self.c0, s), poly_scale(&self.c1, s))
    }

    pub fn try_inv(&self) -> Option<CycExt> {
        if self.is_zero() {
            return None;
        }
        if self.r == 0 {
            return Some(CycExt::from_rat(self.c0[0].recip()));
        }
        let r = self.r;
        if self.c1.is_empty() {
            let inv = poly_inv_mod_phi(&self.c0, r)?;
            return Some(CycExt::make(r, inv, vec![]));
        }
        // (c0 + c1 α)⁻¹ = (c0 − c1 α) / (c0² + (2/r) c1²); the norm is α-free.
        let norm = poly_add(
            &poly_mod_phi(poly_mul(&self.c0, &self.c0), r),
            &poly_scale(&poly_mod_phi(poly_mul(&self.c1, &self.c1), r), &ratio(2, r as i64)),
        );
        let ninv = poly_inv_mod_phi(&norm, r)?;
        let conj = CycExt { r, c0: self.c0.clone(), c1: poly_neg(&self.c1) };
        Some(conj.mul(&CycExt { r, c0: ninv, c1: vec![] }))
    }

    pub fn inv(&self) -> CycExt {
        self.try_inv().unwrap_or_else(|| {
            panic!("non-invertible element in Q(ζ_{})[α]: {:?}", self.r, self)
        })
    }

    pub fn pow(&self, e: u32) -> CycExt {
        let mut acc = CycExt::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_relations() {
        // ζ·ζ³ = 1 and (1+ζ)(1−ζ) = 2 at r = 4 (ζ² = −1 mod Φ₄ = x²+1).
        let z = CycExt::zeta(4);
        assert_eq!(z.mul(&CycExt::zeta_pow(4, 3)), CycExt::one());
        let one = CycExt::one();
        let lhs = one.add(&z).mul(&one.sub(&z));
        assert_eq!(lhs, CycExt::from_rat(rat(2)));
        // Primitive-root sums: 1 + ζ₃ + ζ₃² = 0.
        let z3 = CycExt::zeta(3);
        assert!(CycExt::one().add(&z3).add(&z3.pow(2)).is_zero());
    }

    #[test]
    fn alpha_square() {
        for r in 1..=6u32 {
            let a = CycExt::alpha(r);
            assert_eq!(a.mul(&a), CycExt::from_rat(ratio(-2, r as i64)));
        }
    }

    #[test]
    fn scalar_promotion() {
        let half = CycExt::from_rat(ratio(1, 2));
        let z = CycExt::zeta(5);
        let prod = half.mul(&z);
        assert_eq!(prod.root_order(), 5);
        assert_eq!(prod.mul(&CycExt::from_rat(rat(2))), z);
    }

    #[test]
    fn inverses() {
        // (ζ − 1)⁻¹ exists for primitive roots; spot check (x)(x⁻¹) = 1.
        for r in [2u32, 3, 4, 5, 6, 8] {
            let x = CycExt::zeta(r).sub(&CycExt::one());
            let xi = x.inv();
            assert_eq!(x.mul(&xi), CycExt::one());
            let y = CycExt::alpha(r).add(&CycExt::from_rat(rat(3)));
            assert_eq!(y.mul(&y.inv()), CycExt::one());
        }
        assert!(CycExt::zero().try_inv().is_none());
    }

    #[test]
    fn ring_axioms_randomized() {
        // Deterministic pseudo-random elements; checks associativity,
        // commutativity, distributivity in Q(ζ₆)[α] where zero divisors
        // lurk — the *ring* axioms must still hold there.
        let mk = |seed: u64| {
            let mut s = seed;
            let mut next = move || {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 33) % 7) as i64 - 3
            };
            let mut e = CycExt::from_rat(rat(next()));
            e = e.add(&CycExt::zeta(6).scale(&rat(next())));
            e = e.add(&CycExt::alpha(6).scale(&rat(next())));
            e
        };
        for seed in 0..12u64 {
            let (a, b, c) = (mk(seed), mk(seed + 100), mk(seed + 200));
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }
    }

    #[test]
    fn phi_polynomials() {
        // Φ₁ = x−1, Φ₂ = x+1, Φ₄ = x²+1, Φ₆ = x²−x+1.
        assert_eq!(cyclotomic_poly(1), vec![rat(-1), rat(1)]);
        assert_eq!(cyclotomic_poly(2), vec![rat(1), rat(1)]);
        assert_eq!(cyclotomic_poly(4), vec![rat(1), rat(0), rat(1)]);
        assert_eq!(cyclotomic_poly(6), vec![rat(1), rat(-1), rat(1)]);
        assert_eq!(phi_deg(12), 4);
    }
}
