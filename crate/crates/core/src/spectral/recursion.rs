//! Correlation forms of the curve x = -y^r + log y computed independently of
//! the correlator engine: the kernel recursion is evaluated by exact series
//! residues at the r simple ramification points w = ζ^i of the global
//! coordinate w = r^{1/r} y, and the resulting pole decomposition is
//! re-expanded in the exponential coordinate.  Implemented for the two
//! smallest topologies, where every contributing pole order is bounded by
//! the series valuations; the divisibility constraint on admissible
//! exponents and the rationality of the final coefficients are asserted,
//! not assumed.

use std::collections::HashMap;

use super::{sorted_tuples, u_of_z, CoefficientTable, SpectralError};
use crate::exact::cyc::CycExt;
use crate::exact::rat::{rat, rat_display, rat_pow, ratio, Rat};
use crate::exact::series::{Coeff, TruncSeries};

/// Series depth for the local residue computations.
const LOCAL_LEN: usize = 12;

/// w(q) solving w = q exp(w^r / r): the inverse of q = w exp(-w^r / r),
/// which is the exponential coordinate rescaled to put the ramification
/// points at the r-th roots of unity.
fn w_series(r: u32, len: usize) -> TruncSeries<Rat> {
    let mut w = TruncSeries::monomial(len, 1, Rat::one());
    for _ in 0..len {
        w = w
            .pow(r)
            .scale_rat(&ratio(1, r as i64))
            .exp()
            .shift_up(1)
            .truncate(len);
    }
    w
}

/// Deck-transformation data at a ramification point: the local coordinate
/// series u(z), its reflection u(-z), and both derivatives, all in
/// Q(ζ_r, α).  The branch w = ζ^i (1 + u(z)) is shared by every sheet.
struct LocalFrame {
    u: TruncSeries<CycExt>,
    um: TruncSeries<CycExt>,
    du: TruncSeries<CycExt>,
    dum: TruncSeries<CycExt>,
}

fn local_frame(r: u32) -> LocalFrame {
    let full = u_of_z(r, LOCAL_LEN + 1);
    let du = full.derivative();
    let u = full.truncate(LOCAL_LEN);
    let minus = CycExt::from_rat(rat(-1));
    let um = u.scale_arg(&minus);
    let dum = du.scale_arg(&minus);
    LocalFrame { u, um, du, dum }
}

/// Pole decomposition of the one-point genus-one form: coefficient of
/// (w0 - ζ^i)^{-p} dw0, from the residue of the kernel against the doubled
/// two-point form across the deck transformation.
fn one_point_poles(r: u32) -> HashMap<(usize, usize), CycExt> {
    let f = local_frame(r);
    let delta = f.u.sub(&f.um);
    let cube_unit = delta
        .mul(&delta)
        .mul(&delta)
        .shift_down(3)
        .invert();
    let du_pair = f.du.mul(&f.dum);

    let mut poles = HashMap::new();
    for j in 1..=4usize {
        let odd_power = f.u.pow(j as u32).sub(&f.um.pow(j as u32));
        let residue = odd_power
            .mul(&du_pair)
            .truncate(LOCAL_LEN - 3)
            .mul(&cube_unit)
            .coeff(3)
            .clone();
        if j == 4 {
            // Valuation forces the pole expansion to stop at order 4.
            assert!(residue.is_zero(), "unexpected order-5 pole in the one-point form");
            continue;
        }
        if residue.is_zero() {
            continue;
        }
        let weight = residue.scale(&ratio(-1, 4));
        for i in 0..r as i64 {
            let phase = CycExt::zeta_pow(r, i * (j as i64 - 1));
            poles
                .entry((i as usize, j + 1))
                .and_modify(|c: &mut CycExt| *c = c.add(&phase.mul(&weight)))
                .or_insert_with(|| phase.mul(&weight));
        }
    }
    poles
}

/// Pole decomposition of the three-point genus-zero form: coefficient of
/// Π_m (w_m - ζ^i)^{-p_m} dw_m from the kernel residue against the two
/// cross two-point forms, symmetrized over the deck transformation.
fn three_point_poles(r: u32) -> HashMap<(usize, [usize; 3]), CycExt> {
    let f = local_frame(r);
    let delta = f.u.sub(&f.um);
    let line_unit = delta.shift_down(1).invert();
    let du_pair = f.du.mul(&f.dum);

    let mut poles = HashMap::new();
    for j0 in 1..=2usize {
        let odd_power = f.u.pow(j0 as u32).sub(&f.um.pow(j0 as u32));
        for j1 in 0..=1usize {
            for j2 in 0..=1usize {
                let cross = f
                    .u
                    .pow(j1 as u32)
                    .mul(&f.um.pow(j2 as u32))
                    .add(&f.um.pow(j1 as u32).mul(&f.u.pow(j2 as u32)));
                let residue = odd_power
                    .mul(&du_pair)
                    .mul(&cross)
                    .truncate(LOCAL_LEN - 1)
                    .mul(&line_unit)
                    .coeff(1)
                    .clone();
                if residue.is_zero() {
                    continue;
                }
                let scale = rat(((j1 + 1) * (j2 + 1)) as i64);
                let weight = residue.scale(&(&scale / &rat(-4)));
                for i in 0..r as i64 {
                    let phase = CycExt::zeta_pow(r, i * (j0 + j1 + j2 + 1) as i64);
                    let key = (i as usize, [j0 + 1, j1 + 2, j2 + 2]);
                    poles
                        .entry(key)
                        .and_modify(|c: &mut CycExt| *c = c.add(&phase.mul(&weight)))
                        .or_insert_with(|| phase.mul(&weight));
                }
            }
        }
    }
    poles
}

/// e[p][k] = [q^k] of (w(q) - ζ^i)^{-p} · dw/dx, the exponential-coordinate
/// expansion of one pole against the Jacobian w / (1 - w^r).
fn pole_expansion(r: u32, i: usize, max_p: usize, k_bound: u32) -> Vec<Vec<CycExt>> {
    let len = k_bound as usize + 1;
    let w = w_series(r, len).lift_cyc();
    let jacobian = w.mul(
        &TruncSeries::one(len)
            .sub(&w.pow(r))
            .invert(),
    );
    let root = CycExt::zeta_pow(r, i as i64);
    let base = w.sub(&TruncSeries::from_polynomial(&[root], len));
    let inv = base.invert();
    let mut out = vec![vec![CycExt::zero(); len]; max_p + 1];
    let mut power = TruncSeries::one(len);
    for p in 1..=max_p {
        power = power.mul(&inv);
        let row = power.mul(&jacobian);
        out[p] = row.coeffs().to_vec();
    }
    out
}

/// Coefficient table of a correlation form computed purely by kernel
/// residues on the curve, expanded in the exponential coordinate with
/// entries up to `k_bound` per point.  Supported topologies: genus 0 with
/// 3 points and genus 1 with 1 point.
pub fn eo_direct(
    g: u32,
    n: u32,
    r: u32,
    k_bound: u32,
) -> Result<CoefficientTable, SpectralError> {
    assert!(r >= 1 && k_bound >= 1);
    match (g, n) {
        (1, 1) => {
            let poles = one_point_poles(r);
            let max_p = 4;
            let expansions: Vec<_> = (0..r as usize)
                .map(|i| pole_expansion(r, i, max_p, k_bound))
                .collect();
            let mut rows = Vec::new();
            for k in 1..=k_bound {
                let mut acc = CycExt::zero();
                for ((i, p), c) in &poles {
                    acc = acc.add(&c.mul(&expansions[*i][*p][k as usize]));
                }
                push_row(&mut rows, vec![k], k + 1, r, acc);
            }
            Ok(CoefficientTable { g, n, r, rows })
        }
        (0, 3) => {
            let poles = three_point_poles(r);
            let max_p = 4;
            let expansions: Vec<_> = (0..r as usize)
                .map(|i| pole_expansion(r, i, max_p, k_bound))
                .collect();
            let mut rows = Vec::new();
            for ks in sorted_tuples(3, k_bound) {
                let total: u32 = ks.iter().sum();
                let mut acc = CycExt::zero();
                for ((i, ps), c) in &poles {
                    let mut term = c.clone();
                    for (m, &p) in ps.iter().enumerate() {
                        term = term.mul(&expansions[*i][p][ks[m] as usize]);
                    }
                    acc = acc.add(&term);
                }
                push_row(&mut rows, ks, total + 1, r, acc);
            }
            Ok(CoefficientTable { g, n, r, rows })
        }
        _ => Err(SpectralError::UnsupportedTopology(g, n)),
    }
}

/// Strips the global root power r^{power/r} (`power` = Σk + kernel count)
/// and records the rational coefficient; inadmissible exponents must vanish
/// identically.
fn push_row(
    rows: &mut Vec<(Vec<u32>, String)>,
    ks: Vec<u32>,
    power: u32,
    r: u32,
    acc: CycExt,
) {
    if power % r == 0 {
        let scaled = acc.scale(&rat_pow(&rat(r as i64), (power / r) as i64));
        let v = scaled
            .as_rat()
            .expect("residue coefficient must be rational after stripping the root power");
        rows.push((ks, rat_display(&v)));
    } else {
        assert!(
            acc.is_zero(),
            "exponent {ks:?} violates the divisibility constraint but has a nonzero coefficient"
        );
    }
}
