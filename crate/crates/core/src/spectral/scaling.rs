//! Correlators reconstructed in the sheet basis of the curve, where the
//! two-point expansion matrices of the branch points play the role of the
//! R-matrix.  A discrete Fourier transform over sheet labels, weighted by an
//! overall power of r, must reproduce the flat-basis correlators exactly;
//! `scaling_identity_check` verifies that coefficient identity in
//! Q(zeta_r, alpha).

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use itertools::Itertools;
use once_cell::sync::Lazy;
use serde::Serialize;

use super::u_matrix_direct;
use crate::cohft::{givental_correlator, graph_sum, GraphWeights};
use crate::exact::cyc::CycExt;
use crate::exact::rat::{rat, rat_pow, ratio};
use crate::exact::series::Coeff;
use crate::psi::psi_intersection;

/// Series depth of the sheet-basis weight data: enough for every decoration
/// the dimension-bounded graph sum can request.
const SHEET_LEN: usize = 7;

type Matrix = Vec<Vec<CycExt>>;

fn matrix_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = CycExt::zero();
                    for t in 0..n {
                        acc = acc.add(&a[i][t].mul(&b[t][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Graph-sum weights in the sheet basis: legs carry the inverse two-point
/// matrix series, edges its symplectic kernel with identity pairing, the
/// translation pushes the flat unit through the inverse series, and vertices
/// are diagonal in the sheet label.
pub struct SheetWeights {
    r: u32,
    /// sinv[k][i][j]: grade-k block of the inverse of the (transposed)
    /// two-point matrix series.
    sinv: Vec<Matrix>,
    /// edge[i][j][k1][k2].
    edge: Vec<Vec<Vec<Vec<CycExt>>>>,
    /// trans[t][i] for t >= 2.
    trans: Vec<Vec<CycExt>>,
}

impl SheetWeights {
    fn new(r: u32) -> Self {
        let d = r as usize;
        let len = SHEET_LEN;

        // rhat[k][i][j] = grade-k two-point entry, transposed so that grade 0
        // is the identity acting on column vectors of sheet components.
        let mut table = vec![vec![Vec::new(); d]; d];
        for (i1, row) in table.iter_mut().enumerate() {
            for (i2, slot) in row.iter_mut().enumerate() {
                *slot = u_matrix_direct(r, i1 as u32, i2 as u32, len);
            }
        }
        let rhat: Vec<Matrix> = (0..=len)
            .map(|k| {
                (0..d)
                    .map(|i| (0..d).map(|j| table[j][i][k].clone()).collect())
                    .collect()
            })
            .collect();

        let identity: Matrix = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { CycExt::one() } else { CycExt::zero() })
                    .collect()
            })
            .collect();
        let mut sinv: Vec<Matrix> = vec![identity];
        for m in 1..=len {
            let mut acc: Matrix = vec![vec![CycExt::zero(); d]; d];
            for k in 1..=m {
                let prod = matrix_mul(&rhat[k], &sinv[m - k]);
                for i in 0..d {
                    for j in 0..d {
                        acc[i][j] = acc[i][j].sub(&prod[i][j]);
                    }
                }
            }
            sinv.push(acc);
        }

        // Edge kernel [Id - S(w) S(z)^T] / (w + z) with identity pairing:
        // numerator entries n(p,q) = -Σ_t S_p[i][t] S_q[j][t] off (0,0).
        let num = |p: usize, q: usize, i: usize, j: usize| -> CycExt {
            let mut acc = CycExt::zero();
            for t in 0..d {
                acc = acc.add(&sinv[p][i][t].mul(&sinv[q][j][t]));
            }
            if p == 0 && q == 0 {
                // Grade (0,0) cancels against the identity: S_0 = Id.
                assert!(acc.sub(&if i == j { CycExt::one() } else { CycExt::zero() }).is_zero());
                return CycExt::zero();
            }
            acc.neg()
        };
        let el = len;
        let mut edge = vec![vec![vec![vec![CycExt::zero(); el]; el]; d]; d];
        for i in 0..d {
            for j in 0..d {
                for q in 0..el {
                    for p in 0..el - q {
                        let mut v = num(p + 1, q, i, j);
                        if q > 0 {
                            v = v.sub(&edge[i][j][p + 1][q - 1]);
                        }
                        edge[i][j][p][q] = v;
                    }
                }
                // The recurrence used only the p-boundary; the q-boundary has
                // to agree or the numerator was not divisible.
                for q in 1..el {
                    assert!(
                        edge[i][j][0][q - 1].sub(&num(0, q, i, j)).is_zero(),
                        "edge kernel numerator not divisible by w + z"
                    );
                }
            }
        }

        // Flat unit in sheet components: (1/r) ζ^i per sheet i.
        let unit: Vec<CycExt> = (0..d)
            .map(|i| CycExt::zeta_pow(r, i as i64).scale(&ratio(1, r as i64)))
            .collect();
        let mut trans = vec![vec![CycExt::zero(); d]; len + 1];
        for (t, row) in trans.iter_mut().enumerate().take(len + 1).skip(2) {
            for (i, slot) in row.iter_mut().enumerate() {
                let mut acc = CycExt::zero();
                for j in 0..d {
                    acc = acc.add(&sinv[t - 1][i][j].mul(&unit[j]));
                }
                *slot = acc.neg();
            }
        }

        SheetWeights { r, sinv, edge, trans }
    }
}

impl GraphWeights for SheetWeights {
    type C = CycExt;

    fn num_fields(&self) -> usize {
        self.r as usize
    }

    fn leg(&self, ext: usize, field: usize, k: u32) -> CycExt {
        self.sinv[k as usize][field][ext].clone()
    }

    fn edge(&self, f1: usize, f2: usize, k1: u32, k2: u32) -> CycExt {
        self.edge[f1][f2][k1 as usize][k2 as usize].clone()
    }

    fn translation(&self, field: usize, t: u32) -> CycExt {
        self.trans[t as usize][field].clone()
    }

    fn vertex(&self, g: u32, fields: &[usize], powers: &[u32]) -> CycExt {
        let i = fields[0];
        if fields.iter().any(|&f| f != i) {
            return CycExt::zero();
        }
        let e = 2 * g as i64 + fields.len() as i64 - 2;
        let psi = psi_intersection(g, powers);
        if psi.is_zero() {
            return CycExt::zero();
        }
        let scale = &psi * &rat_pow(&rat(self.r as i64), e);
        CycExt::zeta_pow(self.r, -e * i as i64).scale(&scale)
    }
}

static SHEET_MEMO: Lazy<RwLock<HashMap<u32, Arc<SheetWeights>>>> = Lazy::new(Default::default);

pub fn sheet_weights(r: u32) -> Arc<SheetWeights> {
    if let Some(w) = SHEET_MEMO.read().unwrap().get(&r) {
        return w.clone();
    }
    let w = Arc::new(SheetWeights::new(r));
    SHEET_MEMO.write().unwrap().entry(r).or_insert(w).clone()
}

/// Correlator with sheet-label externals (i_k, d_k), reconstructed entirely
/// from the curve's own expansion data.
pub fn sheet_correlator(r: u32, g: u32, legs: &[(usize, u32)]) -> CycExt {
    let w = sheet_weights(r);
    graph_sum(&*w, g, legs)
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingCheck {
    pub label: String,
    pub g: u32,
    pub r: u32,
    /// (twist, ψ-power) externals of the flat-basis side.
    pub pairs: Vec<(u32, u32)>,
    pub pass: bool,
}

/// Checks that the Fourier sum of sheet-basis correlators over all sheet
/// assignments, weighted by ζ^{(a_k + 1) i_k}, equals r^n times the
/// flat-basis correlator — an identity in Q(ζ_r, α).
pub fn scaling_identity_check(g: u32, r: u32, pairs: &[(u32, u32)]) -> ScalingCheck {
    let n = pairs.len();
    let mut lhs = CycExt::zero();
    for sheets in (0..n).map(|_| 0..r).multi_cartesian_product() {
        let legs: Vec<(usize, u32)> = sheets
            .iter()
            .zip(pairs)
            .map(|(&i, &(_, d))| (i as usize, d))
            .collect();
        let mut phase = CycExt::one();
        for (&i, &(a, _)) in sheets.iter().zip(pairs) {
            phase = phase.mul(&CycExt::zeta_pow(r, (a as i64 + 1) * i as i64));
        }
        lhs = lhs.add(&sheet_correlator(r, g, &legs).mul(&phase));
    }
    let rhs_rat = &givental_correlator(r, g, pairs) * &rat_pow(&rat(r as i64), n as i64);
    let pass = lhs.sub(&CycExt::from_rat(rhs_rat)).is_zero();
    ScalingCheck {
        label: format!("g={g} r={r} pairs={pairs:?}"),
        g,
        r,
        pairs: pairs.to_vec(),
        pass,
    }
}

/// Every (twist, ψ-power) assignment on the dimension ≤ 1 topologies.
pub fn scaling_report(r: u32) -> Vec<ScalingCheck> {
    let mut out = Vec::new();
    let topologies: [(u32, usize, i64); 3] = [(0, 3, 0), (1, 1, 1), (0, 4, 1)];
    for (g, n, dim) in topologies {
        for a_vec in (0..n).map(|_| 0..r).multi_cartesian_product() {
            for total_d in 0..=dim {
                for d_vec in compositions(total_d as u32, n) {
                    let pairs: Vec<(u32, u32)> =
                        a_vec.iter().copied().zip(d_vec).collect();
                    out.push(scaling_identity_check(g, r, &pairs));
                }
            }
        }
    }
    out
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
