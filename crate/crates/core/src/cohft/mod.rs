//! The r-spin field theory reconstructed from its degree-0 part by a
//! diagonal R-matrix with Bernoulli-polynomial exponents: correlators as
//! stable-graph sums, and the bridge from correlators to ramification
//! counts (f-numbers and exponential-series coefficients).
//!
//! Convention stack, pinned by calibration tests below: legs carry
//! R⁻¹(ψ)·e_a, edges carry the kernel built from products of R⁻¹ divided by
//! w + z, the translation series is z(Id − R⁻¹(z)) applied to the unit, and
//! vertices contract the degree-0 theory against ψ-intersection numbers.

pub mod graphs;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use once_cell::sync::Lazy;
use serde::Serialize;

use crate::exact::rat::{factorial, rat, rat_display, rat_pow, ratio, Rat};
use crate::exact::series::{Coeff, TruncSeries};
use crate::exact::bernoulli::bernoulli_poly;
use crate::hurwitz::Profile;
use crate::partitions::Partition;
use crate::psi::psi_intersection;
use graphs::{stable_graphs, StableGraph};

/// Degree-0 theory: r^{2g−1} when 2g − 2 − Σaᵢ ≡ 0 mod r, else 0.
pub fn tqft_value(r: u32, g: u32, a: &[u32]) -> Rat {
    assert!(r >= 1);
    assert!(a.iter().all(|&x| x < r), "field index out of range");
    let sel = (2 * g as i64 - 2 - a.iter().map(|&x| x as i64).sum::<i64>()).rem_euclid(r as i64);
    if sel != 0 {
        return Rat::zero();
    }
    rat_pow(&rat(r as i64), 2 * g as i64 - 1)
}

/// Pairing η_{ab} = (1/r)·[a + b + 2 ≡ 0 mod r].
pub fn metric(r: u32, a: u32, b: u32) -> Rat {
    assert!(a < r && b < r);
    if (a as i64 + b as i64 + 2).rem_euclid(r as i64) == 0 {
        ratio(1, r as i64)
    } else {
        Rat::zero()
    }
}

/// The index paired with a by the metric: a* = (r − 2 − a) mod r.
pub fn dual_index(r: u32, a: u32) -> u32 {
    ((2 * r - 2 - a) % r) as u32
}

/// Frobenius product on basis indices: e_a • e_b = e_{(a+b) mod r}.
pub fn quantum_product_index(r: u32, a: u32, b: u32) -> u32 {
    (a + b) % r
}

const SERIES_ORDER: usize = 12;

fn bernoulli_exponent(r: u32, a: u32, sign: i64) -> TruncSeries<Rat> {
    // Σ_{k≥1} sign · B_{k+1}((a+1)/r) / (k(k+1)) · z^k
    let x = ratio(a as i64 + 1, r as i64);
    let mut c = vec![Rat::zero(); SERIES_ORDER + 1];
    for (k, slot) in c.iter_mut().enumerate().skip(1) {
        *slot = rat(sign) * bernoulli_poly(k as u64 + 1, &x)
            / rat((k * (k + 1)) as i64);
    }
    TruncSeries::new(c)
}

/// Coefficient of z^k in the (a, a) entry of the R-matrix
/// exp[−Σ B_{k+1}((a+1)/r)/(k(k+1)) z^k].
pub fn r_matrix_coefficient(r: u32, a: u32, k: u32) -> Rat {
    assert!(a < r);
    assert!((k as usize) < SERIES_ORDER, "R-matrix truncation exceeded");
    bernoulli_exponent(r, a, -1).exp().coeff(k as usize).clone()
}

/// Precomputed flat-basis weights for one r: R⁻¹ diagonal series and the
/// edge kernel r·[1 − R⁻¹_b(w)R⁻¹_{b*}(z)]/(w + z).
pub struct FlatWeights {
    r: u32,
    rinv: Vec<Vec<Rat>>,
    edge_kernel: Vec<Vec<Vec<Rat>>>,
}

static FLAT_MEMO: Lazy<RwLock<HashMap<u32, Arc<FlatWeights>>>> = Lazy::new(Default::default);

pub fn flat_weights(r: u32) -> Arc<FlatWeights> {
    if let Some(w) = FLAT_MEMO.read().unwrap().get(&r) {
        return w.clone();
    }
    let rinv: Vec<Vec<Rat>> = (0..r)
        .map(|a| bernoulli_exponent(r, a, 1).exp().coeffs().to_vec())
        .collect();
    let edge_kernel = (0..r as usize)
        .map(|b| {
            let bd = dual_index(r, b as u32) as usize;
            divide_by_w_plus_z(&rinv[b], &rinv[bd], r)
        })
        .collect();
    let w = Arc::new(FlatWeights { r, rinv, edge_kernel });
    FLAT_MEMO.write().unwrap().insert(r, w.clone());
    w
}

/// Solve N(w,z) = (w+z)·D(w,z) for D where
/// N = r·[1 − A(w)·B(z)], asserting exact divisibility.
/// Returns D[p][q] for p + q ≤ SERIES_ORDER − 1.
fn divide_by_w_plus_z(a: &[Rat], b: &[Rat], r: u32) -> Vec<Vec<Rat>> {
    let l = SERIES_ORDER;
    let n = |p: usize, q: usize| -> Rat {
        if p == 0 && q == 0 {
            Rat::zero()
        } else {
            -rat(r as i64) * &a[p] * &b[q]
        }
    };
    let mut d = vec![vec![Rat::zero(); l]; l];
    for q in 0..l {
        for p in 0..l - q {
            d[p][q] = if q == 0 { n(p + 1, 0) } else { n(p + 1, q) - d[p + 1][q - 1].clone() };
        }
    }
    // The recurrence used only the p-boundary; the q-boundary must agree or
    // the numerator was not divisible.
    for q in 1..l {
        assert_eq!(d[0][q - 1], n(0, q), "edge kernel numerator not divisible by w + z");
    }
    d
}

/// Weight data consumed by the graph-sum engine. Implementations fix a
/// coefficient ring, a field basis, and the leg/edge/translation/vertex
/// weights of the reconstruction.
pub trait GraphWeights {
    type C: Coeff;
    fn num_fields(&self) -> usize;
    /// Leg with external label `ext`, meeting its vertex in `field`, with
    /// ψ-power shift k.
    fn leg(&self, ext: usize, field: usize, k: u32) -> Self::C;
    /// Edge with fields (f1, f2) and ψ-powers (k1, k2) at its two ends.
    fn edge(&self, f1: usize, f2: usize, k1: u32, k2: u32) -> Self::C;
    /// Translation leg with `field` and ψ-power t ≥ 2.
    fn translation(&self, field: usize, t: u32) -> Self::C;
    /// Vertex of genus g meeting the listed fields with the listed ψ-powers
    /// (dimension-exact by construction).
    fn vertex(&self, g: u32, fields: &[usize], powers: &[u32]) -> Self::C;
}

impl GraphWeights for FlatWeights {
    type C = Rat;

    fn num_fields(&self) -> usize {
        self.r as usize
    }

    fn leg(&self, ext: usize, field: usize, k: u32) -> Rat {
        if field == ext {
            self.rinv[ext][k as usize].clone()
        } else {
            Rat::zero()
        }
    }

    fn edge(&self, f1: usize, f2: usize, k1: u32, k2: u32) -> Rat {
        if f2 == dual_index(self.r, f1 as u32) as usize {
            self.edge_kernel[f1][k1 as usize][k2 as usize].clone()
        } else {
            Rat::zero()
        }
    }

    fn translation(&self, field: usize, t: u32) -> Rat {
        // z(Id − R⁻¹(z)) applied to the unit e₀: component 0 only, and the
        // z¹ term cancels since R⁻¹(0) = Id.
        debug_assert!(t >= 2);
        if field == 0 {
            -self.rinv[0][t as usize - 1].clone()
        } else {
            Rat::zero()
        }
    }

    fn vertex(&self, g: u32, fields: &[usize], powers: &[u32]) -> Rat {
        let a: Vec<u32> = fields.iter().map(|&f| f as u32).collect();
        let t = tqft_value(self.r, g, &a);
        if t.is_zero() {
            return t;
        }
        t * psi_intersection(g, powers)
    }
}

/// Ψ-power budget at a vertex: the moduli dimension before translation legs.
fn base_dimension(g: u32, valence: u32) -> i64 {
    3 * g as i64 - 3 + valence as i64
}

/// Σ over translation-leg configurations at one vertex: orderings divided by
/// m!, each leg carrying a field and a power ≥ 2, with Σ powers = deficit + m.
fn translated_vertex<W: GraphWeights>(
    w: &W,
    g: u32,
    fields: &mut Vec<usize>,
    powers: &mut Vec<u32>,
    deficit: i64,
) -> W::C {
    fn rec<W: GraphWeights>(
        w: &W,
        g: u32,
        fields: &mut Vec<usize>,
        powers: &mut Vec<u32>,
        remaining: i64,
        slots: u32,
        acc: &W::C,
        total: &mut W::C,
    ) {
        if remaining == 0 && slots == 0 {
            let v = w.vertex(g, fields, powers);
            *total = total.add(&v.mul(acc));
            return;
        }
        if slots == 0 {
            return;
        }
        // Next translation leg: power t ≥ 2, leaving ≥ 2 per later slot.
        let max_t = remaining - 2 * (slots as i64 - 1);
        for t in 2..=max_t {
            for f in 0..w.num_fields() {
                let tw = w.translation(f, t as u32);
                if tw.is_zero() {
                    continue;
                }
                fields.push(f);
                powers.push(t as u32);
                let acc2 = acc.mul(&tw);
                rec(w, g, fields, powers, remaining - t, slots - 1, &acc2, total);
                powers.pop();
                fields.pop();
            }
        }
    }

    let mut total = W::C::zero();
    for m in 0..=deficit.max(0) {
        let mut acc = W::C::one();
        acc = acc.scale_rat(&(Rat::one() / Rat::from(factorial(m as u64))));
        rec(w, g, fields, powers, deficit + m, m as u32, &acc, &mut total);
    }
    total
}

/// Sum over all decorations of one stable graph: edge fields and powers,
/// leg power shifts, translation legs; product of all weights.
fn decorated_graph_sum<W: GraphWeights>(
    w: &W,
    graph: &StableGraph,
    legs: &[(usize, u32)],
) -> W::C {
    let nv = graph.num_vertices();
    let mut rem: Vec<i64> = (0..nv).map(|v| base_dimension(graph.genera[v], graph.valence(v))).collect();
    let mut fields: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let mut powers: Vec<Vec<u32>> = vec![Vec::new(); nv];
    // Leg base powers are fixed spending.
    for (i, &(_, d)) in legs.iter().enumerate() {
        rem[graph.leg_at[i]] -= d as i64;
    }
    if rem.iter().any(|&x| x < 0) {
        return W::C::zero();
    }

    fn rec<W: GraphWeights>(
        w: &W,
        graph: &StableGraph,
        legs: &[(usize, u32)],
        item: usize,
        rem: &mut Vec<i64>,
        fields: &mut Vec<Vec<usize>>,
        powers: &mut Vec<Vec<u32>>,
        acc: &W::C,
        total: &mut W::C,
    ) {
        let ne = graph.edges.len();
        if item == ne + legs.len() {
            // All hard decorations placed; vertices absorb the rest.
            let mut prod = acc.clone();
            for v in 0..graph.num_vertices() {
                let deficit = rem[v];
                let vv = translated_vertex(w, graph.genera[v], &mut fields[v], &mut powers[v], deficit);
                if vv.is_zero() {
                    return;
                }
                prod = prod.mul(&vv);
            }
            *total = total.add(&prod);
            return;
        }
        if item < ne {
            let (u, v) = graph.edges[item];
            for f1 in 0..w.num_fields() {
                for f2 in 0..w.num_fields() {
                    for k1 in 0..=rem[u] {
                        // On a loop the two ends share one budget.
                        let cap2 = if u == v { rem[v] - k1 } else { rem[v] };
                        for k2 in 0..=cap2 {
                            let ew = w.edge(f1, f2, k1 as u32, k2 as u32);
                            if ew.is_zero() {
                                continue;
                            }
                            rem[u] -= k1;
                            rem[v] -= k2;
                            fields[u].push(f1);
                            powers[u].push(k1 as u32);
                            fields[v].push(f2);
                            powers[v].push(k2 as u32);
                            let acc2 = acc.mul(&ew);
                            rec(w, graph, legs, item + 1, rem, fields, powers, &acc2, total);
                            powers[v].pop();
                            fields[v].pop();
                            powers[u].pop();
                            fields[u].pop();
                            rem[v] += k2;
                            rem[u] += k1;
                        }
                    }
                }
            }
        } else {
            let i = item - ne;
            let (ext, d) = legs[i];
            let v = graph.leg_at[i];
            for field in 0..w.num_fields() {
                for k in 0..=rem[v] {
                    let lw = w.leg(ext, field, k as u32);
                    if lw.is_zero() {
                        continue;
                    }
                    rem[v] -= k;
                    fields[v].push(field);
                    powers[v].push(d + k as u32);
                    let acc2 = acc.mul(&lw);
                    rec(w, graph, legs, item + 1, rem, fields, powers, &acc2, total);
                    powers[v].pop();
                    fields[v].pop();
                    rem[v] += k;
                }
            }
        }
    }

    let mut total = W::C::zero();
    let acc = W::C::one();
    rec(w, graph, legs, 0, &mut rem, &mut fields, &mut powers, &acc, &mut total);
    total
}

/// Full reconstruction sum: Σ_graphs (decorations)/|Aut|. Legs are
/// (external field label, ψ-power) pairs.
pub fn graph_sum<W: GraphWeights>(w: &W, g: u32, legs: &[(usize, u32)]) -> W::C {
    let n = legs.len();
    assert!(
        3 * g as i64 - 3 + n as i64 <= 4,
        "graph sum bounded to moduli dimension 4 (got g={g}, n={n})"
    );
    let mut total = W::C::zero();
    for counted in stable_graphs(g, n) {
        let val = decorated_graph_sum(w, &counted.graph, legs);
        if !val.is_zero() {
            total = total.add(&val.scale_rat(&(Rat::one() / rat(counted.aut as i64))));
        }
    }
    total
}

static CORRELATOR_MEMO: Lazy<RwLock<HashMap<(u32, u32, Vec<(u32, u32)>), Rat>>> =
    Lazy::new(Default::default);

/// ⟨τ^{a₁}_{d₁} ⋯ τ^{aₙ}_{dₙ}⟩_g for the spin-r theory: the integral of the
/// reconstructed class against ψ-powers, as a stable-graph sum.
pub fn givental_correlator(r: u32, g: u32, pairs: &[(u32, u32)]) -> Rat {
    assert!(r >= 1);
    assert!(
        2 * g as i64 - 2 + pairs.len() as i64 > 0,
        "unstable moduli space: g={g}, n={}",
        pairs.len()
    );
    assert!(pairs.iter().all(|&(a, _)| a < r), "field index out of range");
    let mut key_pairs = pairs.to_vec();
    key_pairs.sort_unstable();
    let key = (r, g, key_pairs);
    if let Some(v) = CORRELATOR_MEMO.read().unwrap().get(&key) {
        return v.clone();
    }
    let w = flat_weights(r);
    let legs: Vec<(usize, u32)> = key.2.iter().map(|&(a, d)| (a as usize, d)).collect();
    let value = graph_sum(w.as_ref(), g, &legs);
    CORRELATOR_MEMO.write().unwrap().insert(key, value.clone());
    value
}

/// f-number of a profile: m! r^{m+n+2g−2} Π (kᵢ/r)^{pᵢ}/pᵢ! times the sum of
/// correlators against Π(kᵢ/r)^{dᵢ} over all ψ-degrees within dimension.
pub fn f_number(p: &Profile) -> Rat {
    let n = p.num_points();
    assert!(
        2 * p.g as i64 - 2 + n as i64 > 0,
        "unstable moduli space: g={}, n={n}",
        p.g
    );
    let m = p.branch_count().expect("profile must admit an integer branch count");
    let r = p.r;
    let pa = p.part_data();
    let dim = (3 * p.g as i64 - 3 + n as i64) as u32;

    let mut prefactor = Rat::from(factorial(m as u64))
        * rat_pow(&rat(r as i64), m as i64 + n as i64 + 2 * p.g as i64 - 2);
    for (i, &(pi, _)) in pa.iter().enumerate() {
        prefactor *= rat_pow(&ratio(p.k[i] as i64, r as i64), pi as i64)
            / Rat::from(factorial(pi as u64));
    }

    let mut sum = Rat::zero();
    let mut d = vec![0u32; n];
    loop {
        if d.iter().sum::<u32>() <= dim {
            let pairs: Vec<(u32, u32)> =
                pa.iter().zip(&d).map(|(&(_, a), &di)| (a, di)).collect();
            let c = givental_correlator(r, p.g, &pairs);
            if !c.is_zero() {
                let mut term = c;
                for (i, &di) in d.iter().enumerate() {
                    term *= rat_pow(&ratio(p.k[i] as i64, r as i64), di as i64);
                }
                sum += term;
            }
        }
        // Odometer over d-vectors bounded by the dimension.
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            if d[i] < dim {
                d[i] += 1;
                break;
            }
            d[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    prefactor * sum
}

/// Coefficient of Π e^{kᵢxᵢ} in the exponential generating function: f/m!,
/// computed both directly and through the resummed power-of-r form, with the
/// two routes asserted equal.
#[allow(non_snake_case)]
pub fn F_coefficient(g: u32, r: u32, k_list: &[u32]) -> Rat {
    let p = Profile::new(g, r, k_list.to_vec());
    let m = p.branch_count().expect("profile must admit an integer branch count");
    let direct = f_number(&p) / Rat::from(factorial(m as u64));

    // Resummation: Σ_d r^{2g+2n−2+(2g−2−Σaᵢ)/r−Σdᵢ} Π kᵢ^{pᵢ+dᵢ}/pᵢ! ⟨…⟩.
    let n = k_list.len();
    let pa = p.part_data();
    let dim = (3 * g as i64 - 3 + n as i64) as u32;
    let sum_a: i64 = pa.iter().map(|&(_, a)| a as i64).sum();
    let twist = 2 * g as i64 - 2 - sum_a;
    assert_eq!(twist.rem_euclid(r as i64), 0, "valid profile has integral twist degree");
    let base_exp = 2 * g as i64 + 2 * n as i64 - 2 + twist / r as i64;

    let mut resummed = Rat::zero();
    let mut d = vec![0u32; n];
    loop {
        if d.iter().sum::<u32>() <= dim {
            let pairs: Vec<(u32, u32)> =
                pa.iter().zip(&d).map(|(&(_, a), &di)| (a, di)).collect();
            let c = givental_correlator(r, g, &pairs);
            if !c.is_zero() {
                let mut term = c
                    * rat_pow(&rat(r as i64), base_exp - d.iter().sum::<u32>() as i64);
                for (i, &di) in d.iter().enumerate() {
                    term *= rat_pow(&rat(k_list[i] as i64), pa[i].0 as i64 + di as i64)
                        / Rat::from(factorial(pa[i].0 as u64));
                }
                resummed += term;
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            if d[i] < dim {
                d[i] += 1;
                break;
            }
            d[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    assert_eq!(
        direct, resummed,
        "conventions bug: direct and resummed series coefficients disagree at g={g}, r={r}, k={k_list:?}"
    );
    direct
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrelatorRow {
    pub g: u32,
    pub r: u32,
    pub pairs: Vec<(u32, u32)>,
    pub value: String,
}

#[derive(Clone, Debug, Default)]
pub struct CorrelatorTable {
    rows: Vec<CorrelatorRow>,
}

#[derive(Serialize)]
struct CorrelatorTableFile<'a> {
    format: &'static str,
    rows: &'a [CorrelatorRow],
}

impl CorrelatorTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: u32, g: u32, pairs: &[(u32, u32)], value: &Rat) {
        let mut pairs = pairs.to_vec();
        pairs.sort_unstable();
        self.rows.push(CorrelatorRow { g, r, pairs, value: rat_display(value) });
    }

    pub fn rows(&self) -> &[CorrelatorRow] {
        &self.rows
    }

    pub fn to_json(&self) -> String {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| (a.r, a.g, &a.pairs).cmp(&(b.r, b.g, &b.pairs)));
        serde_json::to_string_pretty(&CorrelatorTableFile {
            format: "correlator-table-v1",
            rows: &rows,
        })
        .expect("table serialization cannot fail")
    }
}

/// Sorted ψ-power list view used in tests and reports.
pub fn sorted_powers(ds: &[u32]) -> Partition {
    let mut v = ds.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}
