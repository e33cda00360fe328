//! Local expansions of the plane curve x = -y^r + log y at its ramification
//! points, each computed two ways: once directly from the curve by series
//! inversion, once from Bernoulli-polynomial closed forms.  The module also
//! assembles n-point coefficient tables from the correlator engine, runs an
//! independent residue-recursion pipeline for the two smallest topologies
//! (`recursion`), and checks the basis-change scaling identity tying the
//! curve data to the flat-basis correlators (`scaling`).

pub mod recursion;
pub mod scaling;

use serde::Serialize;
use thiserror::Error;

use crate::cohft::F_coefficient;
use crate::exact::bernoulli::bernoulli_poly;
use crate::exact::cyc::CycExt;
use crate::exact::rat::{factorial, rat, rat_display, rat_pow, ratio, Rat};
use crate::exact::series::{Coeff, TruncSeries};

#[derive(Debug, Error)]
pub enum SpectralError {
    /// The residue pipeline is implemented only where every pole order and
    /// residue can be bounded a priori.
    #[error("residue recursion not implemented for genus {0}, {1} points")]
    UnsupportedTopology(u32, u32),
}

/// (m)!! for odd m >= -3, extended downward by the recursion m!! = m (m-2)!!,
/// so (-1)!! = 1 and (-3)!! = -1.
fn odd_double_factorial(m: i64) -> Rat {
    assert!(m >= -3 && m % 2 != 0, "double factorial wants odd m >= -3");
    match m {
        -3 => rat(-1),
        -1 => rat(1),
        _ => {
            let mut acc = rat(1);
            let mut k = m;
            while k >= 3 {
                acc = &acc * &rat(k);
                k -= 2;
            }
            acc
        }
    }
}

/// The defining relation z^2 = x - x_i pulled back through y = y_i (1 + u):
/// z^2 = -((1+u)^r - 1)/r + log(1+u), a rational series in u starting
/// -(r/2) u^2.
fn branch_relation(r: u32, len: usize) -> TruncSeries<Rat> {
    assert!(r >= 1);
    let one_plus_u = TruncSeries::from_polynomial(&[rat(1), rat(1)], len);
    let power = one_plus_u.pow(r);
    let shifted = power.sub(&TruncSeries::one(len)).scale_rat(&ratio(-1, r as i64));
    let rel = shifted.add(&one_plus_u.log());
    assert!(rel.coeff(0).is_zero() && rel.coeff(1).is_zero());
    assert_eq!(rel.coeff(2), &ratio(-(r as i64), 2));
    rel
}

/// Inverse of the branch relation on the normalized square root: writing
/// z^2 = -(r/2) u^2 G(u) with G(0) = 1 and v = u sqrt(G), returns the series
/// u = sum_n U_n v^n (U_0 = 0, U_1 = 1).  The local coordinate itself is
/// u(z) = sum_n U_n (alpha z)^n with alpha^2 = -2/r; the opposite square-root
/// branch would negate every odd U_n.
pub fn branch_inverse(r: u32, len: usize) -> TruncSeries<Rat> {
    let rel = branch_relation(r, len + 2);
    let g = rel.shift_down(2).scale_rat(&ratio(-2, r as i64));
    let v = g.sqrt_one().shift_up(1).truncate(len);
    v.lagrange_invert()
}

/// u as a series in the local coordinate z, over Q(zeta_r, alpha).
pub fn u_of_z(r: u32, len: usize) -> TruncSeries<CycExt> {
    branch_inverse(r, len)
        .lift_cyc()
        .scale_arg(&CycExt::alpha(r))
}

/// Odd-part expansion coefficients V_j of the curve branch at a ramification
/// point, normalized so V_0 = 1, computed directly from the curve.
pub fn local_odd_expansion(r: u32, order: usize) -> Vec<Rat> {
    let u = branch_inverse(r, 2 * order + 2);
    (0..=order)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let scale = &odd_double_factorial(2 * j as i64 + 1)
                * &(&rat(sign) / &rat_pow(&rat(r as i64), 2 * j as i64));
            u.coeff(2 * j + 1) * &scale
        })
        .collect()
}

/// The same coefficients from the Bernoulli-polynomial closed form
/// exp(-sum_{j>=1} B_{j+1}(1/r) zeta^j / (j (j+1))).
pub fn v_bernoulli(r: u32, order: usize) -> Vec<Rat> {
    let len = order + 1;
    let mut arg = vec![Rat::zero()];
    for j in 1..len {
        let b = bernoulli_poly(j as u64 + 1, &ratio(1, r as i64));
        arg.push(&b / &rat(-(j as i64) * (j as i64 + 1)));
    }
    TruncSeries::new(arg).exp().coeffs().to_vec()
}

/// Two-point expansion coefficients (U_k)_{i1 i2} of the curve branches,
/// computed directly: the double pole of the branch kernel
/// y_{i1,odd} y'(z) / (y_{i1} - y(z))^2 at the ramification points, graded so
/// that k = 0 gives the identity matrix.  Values live in Q(zeta_r, alpha).
pub fn u_matrix_direct(r: u32, i1: u32, i2: u32, order: usize) -> Vec<CycExt> {
    assert!(i1 < r && i2 < r, "sheet labels run over 0..r");
    let len = 2 * order + 5;
    let u = u_of_z(r, len + 1);
    let du = u.derivative();
    let u = u.truncate(len);
    let j1 = CycExt::zeta_pow(r, i1 as i64);
    let j2 = CycExt::zeta_pow(r, i2 as i64);
    let alpha = CycExt::alpha(r);

    // (J^{i1} - J^{i2}(1 + u))^2, the squared difference of the two branches.
    let gap = j1.sub(&j2);
    let base = TruncSeries::from_polynomial(&[gap], len).sub(&u.scale(&j2));
    let den = base.mul(&base);
    let num = du.scale(&alpha.mul(&j1.mul(&j2)));

    // z^2 * (kernel): regular at z = 0, with constant term delta_{i1 i2}.
    let series = if i1 == i2 {
        num.truncate(len - 2).div(&den.shift_down(2))
    } else {
        num.shift_up(2).truncate(len).div(&den)
    };

    (0..=order)
        .map(|k| {
            let grade = &odd_double_factorial(2 * k as i64 - 3)
                / &rat_pow(&rat(2 * r as i64), k as i64);
            series.coeff(2 * k).scale(&grade).neg()
        })
        .collect()
}

/// The same matrix entries from the Bernoulli closed form: the discrete
/// Fourier average over sheets c of exp(-sum_k B_{k+1}(c/r) z^k / (k (k+1)))
/// weighted by zeta^{c (i2 - i1)}.
pub fn u_matrix_bernoulli(r: u32, i1: u32, i2: u32, order: usize) -> Vec<CycExt> {
    assert!(i1 < r && i2 < r, "sheet labels run over 0..r");
    let len = order + 1;
    let mut acc = TruncSeries::<CycExt>::zero(len);
    for c in 0..r as i64 {
        let mut arg = vec![Rat::zero()];
        for k in 1..len {
            let b = bernoulli_poly(k as u64 + 1, &ratio(c, r as i64));
            arg.push(&b / &rat(-(k as i64) * (k as i64 + 1)));
        }
        let phase = CycExt::zeta_pow(r, c * (i2 as i64 - i1 as i64));
        acc = acc.add(&TruncSeries::new(arg).exp().lift_cyc().scale(&phase));
    }
    acc.scale_rat(&ratio(1, r as i64)).coeffs().to_vec()
}

/// Exponential-coordinate expansion of a leaf series, both ways.
#[derive(Debug, Clone)]
pub struct XiSeries {
    pub r: u32,
    pub a: u32,
    /// Closed-form coefficients (rn + r - a - 1)^n / n!.
    pub closed: Vec<Rat>,
    /// Coefficients read off the curve: y = e^x u(q) with u = e^{q u^r},
    /// q = e^{rx}, expanded through u^{r-a-1} / (1 - r q u^r).
    pub direct: Vec<Rat>,
}

impl XiSeries {
    pub fn agree(&self) -> bool {
        self.closed == self.direct
    }

    pub fn first_mismatch(&self) -> Option<usize> {
        self.closed.iter().zip(&self.direct).position(|(c, d)| c != d)
    }
}

/// Solves u = exp(q u^r) as a rational series in q by fixed-point iteration;
/// each pass fixes one further coefficient.
fn exponential_fixed_point(r: u32, len: usize) -> TruncSeries<Rat> {
    let mut u = TruncSeries::one(len);
    for _ in 0..len {
        u = u.pow(r).shift_up(1).truncate(len).exp();
    }
    u
}

pub fn xi_tilde(r: u32, a: u32, order: usize) -> XiSeries {
    assert!(a < r, "twist label runs over 0..r");
    let closed = (0..=order as i64)
        .map(|n| {
            let base = rat(r as i64 * n + r as i64 - a as i64 - 1);
            if n == 0 {
                rat(1)
            } else {
                &rat_pow(&base, n) / &Rat::from_integer(factorial(n as u64))
            }
        })
        .collect();

    let len = order + 1;
    let u = exponential_fixed_point(r, len);
    let geom = TruncSeries::one(len)
        .sub(&u.pow(r).shift_up(1).truncate(len).scale_rat(&rat(r as i64)))
        .invert();
    let direct = u.pow(r - a - 1).mul(&geom).coeffs().to_vec();

    XiSeries { r, a, closed, direct }
}

/// A table of n-point coefficients indexed by sorted exponent tuples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientTable {
    pub g: u32,
    pub n: u32,
    pub r: u32,
    /// (k_1 <= ... <= k_n, coefficient) rows; tuples whose total violates the
    /// divisibility constraint r | (sum k + n + 2g - 2) are omitted.
    pub rows: Vec<(Vec<u32>, String)>,
}

impl CoefficientTable {
    pub fn lookup(&self, ks: &[u32]) -> Option<&str> {
        let mut key = ks.to_vec();
        key.sort_unstable();
        self.rows
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v.as_str())
    }
}

fn sorted_tuples(n: u32, k_bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![1u32; n as usize];
    loop {
        out.push(cur.clone());
        let mut idx = n as usize;
        loop {
            if idx == 0 {
                return out;
            }
            idx -= 1;
            if cur[idx] < k_bound {
                let next = cur[idx] + 1;
                for slot in cur.iter_mut().skip(idx) {
                    *slot = next;
                }
                break;
            }
        }
    }
}

/// Assembles the n-point coefficient table from the correlator engine: the
/// entry at (k_1, ..., k_n) is prod_j k_j times the generating-function
/// coefficient, for every admissible tuple with entries up to `k_bound`.
pub fn doss_assemble(g: u32, r: u32, n: u32, k_bound: u32) -> CoefficientTable {
    assert!(r >= 1 && n >= 1 && k_bound >= 1);
    assert!(2 * g + n > 2, "n-point table needs a stable topology");
    let rows = sorted_tuples(n, k_bound)
        .into_iter()
        .filter(|ks| {
            let total: u32 = ks.iter().sum();
            (total + n + 2 * g) % r == 2 % r
        })
        .map(|ks| {
            let mut value = F_coefficient(g, r, &ks);
            for &k in &ks {
                value = &value * &rat(k as i64);
            }
            (ks, rat_display(&value))
        })
        .collect();
    CoefficientTable { g, n, r, rows }
}

/// One verdict row of the series-identity report.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaCheck {
    pub lemma: String,
    pub r: u32,
    pub order: u32,
    pub pass: bool,
    /// Position and value pair of the first disagreement, if any.
    pub first_mismatch: Option<String>,
}

fn mismatch_rat(direct: &[Rat], closed: &[Rat]) -> Option<String> {
    direct
        .iter()
        .zip(closed)
        .position(|(d, c)| d != c)
        .map(|j| {
            format!(
                "index {}: direct {} vs closed {}",
                j,
                rat_display(&direct[j]),
                rat_display(&closed[j])
            )
        })
}

/// Runs every dual-route series identity at the given depth and reports one
/// verdict per identity per r.
pub fn lemma_report(r_max: u32, order: usize) -> Vec<LemmaCheck> {
    let mut out = Vec::new();
    for r in 1..=r_max {
        let direct = local_odd_expansion(r, order);
        let closed = v_bernoulli(r, order);
        out.push(LemmaCheck {
            lemma: "odd-expansion".into(),
            r,
            order: order as u32,
            pass: direct == closed,
            first_mismatch: mismatch_rat(&direct, &closed),
        });

        let mut pair_mismatch = None;
        'pairs: for i1 in 0..r {
            for i2 in 0..r {
                let d = u_matrix_direct(r, i1, i2, order);
                let c = u_matrix_bernoulli(r, i1, i2, order);
                if let Some(k) = d.iter().zip(&c).position(|(x, y)| x != y) {
                    pair_mismatch = Some(format!("entry ({i1},{i2}) index {k}"));
                    break 'pairs;
                }
            }
        }
        out.push(LemmaCheck {
            lemma: "two-point-expansion".into(),
            r,
            order: order as u32,
            pass: pair_mismatch.is_none(),
            first_mismatch: pair_mismatch,
        });

        let mut leaf_mismatch = None;
        for a in 0..r {
            let xi = xi_tilde(r, a, order);
            if let Some(j) = xi.first_mismatch() {
                leaf_mismatch = Some(format!(
                    "twist {a} index {j}: direct {} vs closed {}",
                    rat_display(&xi.direct[j]),
                    rat_display(&xi.closed[j])
                ));
                break;
            }
        }
        out.push(LemmaCheck {
            lemma: "leaf-expansion".into(),
            r,
            order: order as u32,
            pass: leaf_mismatch.is_none(),
            first_mismatch: leaf_mismatch,
        });

        let scaling = scaling::scaling_report(r);
        out.push(LemmaCheck {
            lemma: "scaling-identity".into(),
            r,
            order: order as u32,
            pass: scaling.iter().all(|c| c.pass),
            first_mismatch: scaling.iter().find(|c| !c.pass).map(|c| c.label.clone()),
        });
    }
    out
}

pub fn report_to_json(report: &[LemmaCheck]) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn report_to_markdown(report: &[LemmaCheck]) -> String {
    let mut out = String::from("| identity | r | order | verdict | first mismatch |\n|---|---|---|---|---|\n");
    for c in report {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            c.lemma,
            c.r,
            c.order,
            if c.pass { "PASS" } else { "FAIL" },
            c.first_mismatch.as_deref().unwrap_or("-")
        ));
    }
    out
}
