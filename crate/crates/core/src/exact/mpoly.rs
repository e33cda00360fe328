//! Dense-exponent sparse multivariate polynomials over Q, used for the
//! finite-matrix-integral side: Vandermonde determinants, Schur alternants
//! and their exact quotients.

use std::collections::BTreeMap;

use num::Zero;

use super::rat::{rat, Rat};

#[derive(Clone, PartialEq, Debug)]
pub struct MPoly {
    n: usize,
    /// exponent vector (length n) → nonzero coefficient
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero(n: usize) -> Self {
        MPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, q: Rat) -> Self {
        let mut p = Self::zero(n);
        if !q.is_zero() {
            p.terms.insert(vec![0; n], q);
        }
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, rat(1))
    }

    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n);
        let mut e = vec![0u32; n];
        e[i] = 1;
        let mut p = Self::zero(n);
        p.terms.insert(e, rat(1));
        p
    }

    /// coef · Π v_i^{e_i}.
    pub fn monomial(n: usize, exps: Vec<u32>, coef: Rat) -> Self {
        assert_eq!(exps.len(), n);
        let mut p = Self::zero(n);
        if !coef.is_zero() {
            p.terms.insert(exps, coef);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(&mut self, e: Vec<u32>, q: Rat) {
        if q.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(q);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += q;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut out = self.clone();
        for (e, q) in &o.terms {
            out.insert_add(e.clone(), q.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly { n: self.n, terms: self.terms.iter().map(|(e, q)| (e.clone(), -q)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        MPoly { n: self.n, terms: self.terms.iter().map(|(e, q)| (e.clone(), q * s)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let mut out = Self::zero(self.n);
        for (ea, qa) in &self.terms {
            for (eb, qb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_add(e, qa * qb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiply by v_j.
    pub fn mul_var(&self, j: usize) -> Self {
        assert!(j < self.n);
        MPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, q)| {
                    let mut e2 = e.clone();
                    e2[j] += 1;
                    (e2, q.clone())
                })
                .collect(),
        }
    }

    /// Exact quotient by (v_i − v_j), done by synthetic (Horner) division in
    /// v_i with multiply-by-v_j as the evaluation step; panics when the
    /// remainder is nonzero.
    pub fn div_linear_diff(&self, i: usize, j: usize) -> Self {
        assert!(i < self.n && j < self.n && i != j);
        if self.is_zero() {
            return Self::zero(self.n);
        }
        let top = self.terms.keys().map(|e| e[i]).max().unwrap() as usize;
        // c[d] = coefficient of v_i^d, an MPoly with the v_i slot zeroed.
        let mut c = vec![Self::zero(self.n); top + 1];
        for (e, q) in &self.terms {
            let d = e[i] as usize;
            let mut e2 = e.clone();
            e2[i] = 0;
            c[d].insert_add(e2, q.clone());
        }
        assert!(top >= 1, "degree in v_{i} too small to divide by (v_{i} − v_{j})");
        let mut q = vec![Self::zero(self.n); top];
        q[top - 1] = c[top].clone();
        for d in (1..top).rev() {
            q[d - 1] = c[d].add(&q[d].mul_var(j));
        }
        let rem = c[0].add(&q[0].mul_var(j));
        assert!(rem.is_zero(), "division by (v_{i} − v_{j}) leaves a remainder");
        let mut out = Self::zero(self.n);
        for (d, qd) in q.into_iter().enumerate() {
            for (e, coef) in qd.terms {
                let mut e2 = e;
                e2[i] = d as u32;
                out.insert_add(e2, coef);
            }
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.n);
        let mut acc = Rat::zero();
        for (e, q) in &self.terms {
            let mut t = q.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }
}
