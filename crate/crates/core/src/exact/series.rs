//! Truncated power series over an exact coefficient ring.
//!
//! A `TruncSeries` of order N knows coefficients of z^0..z^{N−1} and nothing
//! beyond: the tail is O(z^N), not zero. Every binary operation insists both
//! operands carry the same order — silently mixing truncation orders is how
//! exact computations go quietly wrong, so a mismatch panics instead.
//! Operations that genuinely change the order (derivative, z-shifts,
//! truncate) say so in their names and documentation.

use num::{One, Zero};

use super::cyc::CycExt;
use super::rat::{rat, Rat};

/// Exact coefficient ring used by series, matrices and graph sums.
/// `inv` panics on non-invertible input; use ring-specific entry points when
/// partiality matters.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
    fn from_rat(q: &Rat) -> Self;

    fn scale_rat(&self, q: &Rat) -> Self {
        self.mul(&Self::from_rat(q))
    }
}

impl Coeff for Rat {
    fn zero() -> Self {
        <Rat as Zero>::zero()
    }
    fn one() -> Self {
        <Rat as One>::one()
    }
    fn is_zero(&self) -> bool {
        <Rat as Zero>::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!<Rat as Zero>::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn from_rat(q: &Rat) -> Self {
        q.clone()
    }
}

impl Coeff for CycExt {
    fn zero() -> Self {
        CycExt::zero()
    }
    fn one() -> Self {
        CycExt::one()
    }
    fn is_zero(&self) -> bool {
        CycExt::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        CycExt::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        CycExt::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        CycExt::mul(self, o)
    }
    fn neg(&self) -> Self {
        CycExt::neg(self)
    }
    fn inv(&self) -> Self {
        CycExt::inv(self)
    }
    fn from_rat(q: &Rat) -> Self {
        CycExt::from_rat(q.clone())
    }
    fn scale_rat(&self, q: &Rat) -> Self {
        CycExt::scale(self, q)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct TruncSeries<C: Coeff> {
    c: Vec<C>,
}

impl<C: Coeff> TruncSeries<C> {
    /// Series whose first `coeffs.len()` coefficients are known.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "series needs order >= 1");
        TruncSeries { c: coeffs }
    }

    /// An exact polynomial viewed at truncation order `ord` (zero-padded).
    pub fn from_polynomial(coeffs: &[C], ord: usize) -> Self {
        assert!(coeffs.len() <= ord, "polynomial degree exceeds requested order");
        let mut c = coeffs.to_vec();
        c.resize(ord, C::zero());
        TruncSeries { c }
    }

    pub fn zero(ord: usize) -> Self {
        Self::from_polynomial(&[], ord)
    }

    pub fn one(ord: usize) -> Self {
        Self::from_polynomial(&[C::one()], ord)
    }

    /// coef · z^k.
    pub fn monomial(ord: usize, k: usize, coef: C) -> Self {
        assert!(k < ord);
        let mut c = vec![C::zero(); ord];
        c[k] = coef;
        TruncSeries { c }
    }

    pub fn order(&self) -> usize {
        self.c.len()
    }

    pub fn coeff(&self, i: usize) -> &C {
        assert!(i < self.c.len(), "coefficient {} beyond truncation order {}", i, self.c.len());
        &self.c[i]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(C::is_zero)
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    fn same_order(&self, o: &Self) -> usize {
        assert!(
            self.c.len() == o.c.len(),
            "truncation order mismatch: {} vs {}",
            self.c.len(),
            o.c.len()
        );
        self.c.len()
    }

    /// Drop knowledge above z^{ord}; `ord` must not exceed the current order.
    pub fn truncate(&self, ord: usize) -> Self {
        assert!(ord >= 1 && ord <= self.c.len(), "cannot extend a series by truncating");
        TruncSeries { c: self.c[..ord].to_vec() }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_order(o);
        TruncSeries { c: self.c.iter().zip(&o.c).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.same_order(o);
        TruncSeries { c: self.c.iter().zip(&o.c).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Self {
        TruncSeries { c: self.c.iter().map(C::neg).collect() }
    }

    pub fn scale(&self, s: &C) -> Self {
        TruncSeries { c: self.c.iter().map(|a| a.mul(s)).collect() }
    }

    pub fn scale_rat(&self, q: &Rat) -> Self {
        TruncSeries { c: self.c.iter().map(|a| a.scale_rat(q)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.same_order(o);
        let mut out = vec![C::zero(); n];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        TruncSeries { c: out }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.c.len());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// d/dz; the result is known to one order fewer.
    pub fn derivative(&self) -> Self {
        assert!(self.c.len() >= 2, "derivative needs order >= 2");
        let c = (1..self.c.len())
            .map(|i| self.c[i].scale_rat(&rat(i as i64)))
            .collect();
        TruncSeries { c }
    }

    /// Multiply by z^k; knowledge extends to order + k.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut c = vec![C::zero(); k];
        c.extend(self.c.iter().cloned());
        TruncSeries { c }
    }

    /// Divide by z^k, asserting the first k coefficients vanish; order drops by k.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(k < self.c.len(), "shift_down would consume the whole series");
        for i in 0..k {
            assert!(self.c[i].is_zero(), "shift_down: coefficient {i} is nonzero");
        }
        TruncSeries { c: self.c[k..].to_vec() }
    }

    /// Keep only coefficients with index ≡ parity (mod 2); same order.
    pub fn parity_part(&self, parity: usize) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(i, a)| if i % 2 == parity % 2 { a.clone() } else { C::zero() })
            .collect();
        TruncSeries { c }
    }

    /// f(s·z).
    pub fn scale_arg(&self, s: &C) -> Self {
        let mut p = C::one();
        let c = self
            .c
            .iter()
            .map(|a| {
                let v = a.mul(&p);
                p = p.mul(s);
                v
            })
            .collect();
        TruncSeries { c }
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn invert(&self) -> Self {
        let n = self.c.len();
        let g0 = self.c[0].inv();
        let mut g = vec![C::zero(); n];
        g[0] = g0.clone();
        for m in 1..n {
            let mut s = C::zero();
            for k in 1..=m {
                if !self.c[k].is_zero() && !g[m - k].is_zero() {
                    s = s.add(&self.c[k].mul(&g[m - k]));
                }
            }
            g[m] = s.mul(&g0).neg();
        }
        TruncSeries { c: g }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.invert())
    }

    /// exp(f) for f with zero constant term.
    pub fn exp(&self) -> Self {
        assert!(self.c[0].is_zero(), "exp needs vanishing constant term");
        let n = self.c.len();
        let mut e = vec![C::zero(); n];
        e[0] = C::one();
        for m in 1..n {
            let mut s = C::zero();
            for k in 1..=m {
                if !self.c[k].is_zero() && !e[m - k].is_zero() {
                    s = s.add(&self.c[k].scale_rat(&rat(k as i64)).mul(&e[m - k]));
                }
            }
            e[m] = s.scale_rat(&Rat::new(1.into(), (m as i64).into()));
        }
        TruncSeries { c: e }
    }

    /// log(f) for f with constant term 1.
    pub fn log(&self) -> Self {
        assert!(self.c[0] == C::one(), "log needs constant term 1");
        let n = self.c.len();
        let mut l = vec![C::zero(); n];
        for m in 1..n {
            let mut s = C::zero();
            for k in 1..m {
                if !l[k].is_zero() && !self.c[m - k].is_zero() {
                    s = s.add(&l[k].scale_rat(&rat(k as i64)).mul(&self.c[m - k]));
                }
            }
            l[m] = self.c[m].sub(&s.scale_rat(&Rat::new(1.into(), (m as i64).into())));
        }
        TruncSeries { c: l }
    }

    /// Square root with constant term 1.
    pub fn sqrt_one(&self) -> Self {
        self.log().scale_rat(&Rat::new(1.into(), 2.into())).exp()
    }

    /// g(f) for f with zero constant term, both at the same order.
    pub fn compose(&self, inner: &Self) -> Self {
        let n = self.same_order(inner);
        assert!(inner.c[0].is_zero(), "composition needs inner constant term 0");
        let mut acc = Self::from_polynomial(&[self.c[n - 1].clone()], n);
        for k in (0..n - 1).rev() {
            acc = acc.mul(inner);
            acc.c[0] = acc.c[0].add(&self.c[k]);
        }
        acc
    }

    /// Compositional inverse g of f (f(0) = 0, f'(0) invertible):
    /// g(f(z)) = z to the common order. Coefficients via the residue formula
    /// n·g_n = [u^{n−1}] (u/f(u))^n.
    pub fn lagrange_invert(&self) -> Self {
        let n = self.c.len();
        assert!(n >= 2, "lagrange inversion needs order >= 2");
        assert!(self.c[0].is_zero(), "lagrange inversion needs f(0) = 0");
        assert!(!self.c[1].is_zero(), "lagrange inversion needs f'(0) invertible");
        // w = (f/z)^{-1}, a unit series of order n−1.
        let h = self.shift_down(1);
        let w = h.invert();
        let mut g = vec![C::zero(); n];
        let mut p = w.clone();
        for m in 1..n {
            // p = w^m here; g_m = p[m−1] / m.
            g[m] = p.c[m - 1].scale_rat(&Rat::new(1.into(), (m as i64).into()));
            if m + 1 < n {
                p = p.mul(&w);
            }
        }
        TruncSeries { c: g }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        TruncSeries { c: self.c.iter().map(f).collect() }
    }
}

impl TruncSeries<Rat> {
    /// View a rational series inside Q(ζ_r)[α].
    pub fn lift_cyc(&self) -> TruncSeries<CycExt> {
        self.map(|q| CycExt::from_rat(q.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::ratio;
    use proptest::prelude::*;

    fn rs(v: &[i64]) -> TruncSeries<Rat> {
        TruncSeries::new(v.iter().map(|&x| rat(x)).collect())
    }

    #[test]
    fn catalan_from_inversion() {
        // f = z − z²  ⇒  f^{-1} = Σ Catalan(n−1) zⁿ = z + z² + 2z³ + 5z⁴ + 14z⁵.
        let f = rs(&[0, 1, -1, 0, 0, 0]);
        let g = f.lagrange_invert();
        assert_eq!(g.coeffs()[1..], [rat(1), rat(1), rat(2), rat(5), rat(14)]);
        let id = TruncSeries::monomial(6, 1, rat(1));
        assert_eq!(g.compose(&f), id);
        assert_eq!(f.compose(&g), id);
    }

    #[test]
    fn ternary_trees_from_inversion() {
        // f = z − z³  ⇒  odd coefficients 1, 1, 3, 12, 55.
        let f = rs(&[0, 1, 0, -1, 0, 0, 0, 0, 0, 0]);
        let g = f.lagrange_invert();
        assert_eq!(*g.coeff(3), rat(1));
        assert_eq!(*g.coeff(5), rat(3));
        assert_eq!(*g.coeff(7), rat(12));
        assert_eq!(*g.coeff(9), rat(55));
        assert!(g.parity_part(0).is_zero());
    }

    #[test]
    fn exp_log_round_trip() {
        let f = TruncSeries::new(vec![rat(1), ratio(1, 2), rat(-3), ratio(7, 5), rat(0), rat(2)]);
        assert_eq!(f.log().exp(), f);
        let u = rs(&[0, 1, -2, 3, -4, 5]);
        assert_eq!(u.exp().log(), u);
    }

    #[test]
    fn sqrt_squares_back() {
        let f = rs(&[1, 1, 0, 0, 0, 0]);
        let s = f.sqrt_one();
        assert_eq!(s.mul(&s), f);
        assert_eq!(*s.coeff(1), ratio(1, 2));
        assert_eq!(*s.coeff(2), ratio(-1, 8));
    }

    #[test]
    fn inverse_and_division() {
        let f = rs(&[2, 1, 0, 0]);
        let g = f.invert();
        assert_eq!(f.mul(&g), TruncSeries::one(4));
        assert_eq!(f.div(&f), TruncSeries::one(4));
    }

    #[test]
    fn cyclotomic_coefficients() {
        // exp(αz)·exp(−αz) = 1 in Q(ζ₃)[α].
        let a = CycExt::alpha(3);
        let e1 = TruncSeries::monomial(7, 1, a.clone()).exp();
        let e2 = TruncSeries::monomial(7, 1, a.neg()).exp();
        assert_eq!(e1.mul(&e2), TruncSeries::one(7));
        // cos-like even part: coefficient of z² is α²/2 = −1/3.
        assert_eq!(e1.coeff(2).as_rat(), Some(ratio(-1, 3)));
    }

    #[test]
    #[should_panic(expected = "order mismatch")]
    fn order_mismatch_panics() {
        let _ = rs(&[1, 2]).add(&rs(&[1, 2, 3]));
    }

    #[test]
    fn shifts_track_order() {
        let f = rs(&[0, 0, 3, 4]);
        let d = f.shift_down(2);
        assert_eq!(d.order(), 2);
        assert_eq!(*d.coeff(0), rat(3));
        let u = d.shift_up(2);
        assert_eq!(u, f);
    }

    proptest! {
        #[test]
        fn lagrange_is_two_sided_inverse(tail in proptest::collection::vec(-4i64..5, 4), unit in 1i64..4) {
            let mut v = vec![rat(0), ratio(1, unit)];
            v.extend(tail.iter().map(|&x| ratio(x, 3)));
            let f = TruncSeries::new(v);
            let g = f.lagrange_invert();
            let id = TruncSeries::monomial(f.order(), 1, rat(1));
            prop_assert_eq!(g.compose(&f), id.clone());
            prop_assert_eq!(f.compose(&g), id);
        }

        #[test]
        fn exp_turns_sum_into_product(a in proptest::collection::vec(-3i64..4, 5), b in proptest::collection::vec(-3i64..4, 5)) {
            let mk = |v: &[i64]| {
                let mut c = vec![rat(0)];
                c.extend(v.iter().map(|&x| ratio(x, 2)));
                TruncSeries::new(c)
            };
            let (f, g) = (mk(&a), mk(&b));
            prop_assert_eq!(f.add(&g).exp(), f.exp().mul(&g.exp()));
        }
    }
}
