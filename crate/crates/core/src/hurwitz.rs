//! Ramification counts with completed-cycle insertions: the character-sum
//! route (disconnected, then connected via the formal logarithm), a
//! brute-force enumeration oracle over decorated factorizations, table
//! plumbing with provenance, and the first-equation KP check for the
//! connected generating series.

use std::collections::{BTreeMap, HashMap};

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::rat::{factorial, rat, rat_display, Rat};
use crate::partitions::{
    class_size, completed_cycle, dimension, irreducible_character, multiplicities, normalize,
    partitions_of, shifted_power_sum, weight, Partition,
};

/// A ramification profile: genus g, spin r, and the positive part lengths k.
/// Derived data: K = Σkᵢ, n = #k, branch count m = (K + n + 2g − 2)/r, and
/// per-part (pᵢ, aᵢ) with kᵢ = r·pᵢ + (r − 1 − aᵢ), aᵢ ∈ {0..r−1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    pub g: u32,
    pub r: u32,
    pub k: Vec<u32>,
}

impl Profile {
    pub fn new(g: u32, r: u32, k: Vec<u32>) -> Self {
        assert!(r >= 1, "spin parameter must be positive");
        assert!(k.iter().all(|&x| x >= 1), "profile parts must be positive");
        Profile { g, r, k }
    }

    pub fn total(&self) -> u32 {
        self.k.iter().sum()
    }

    pub fn num_points(&self) -> usize {
        self.k.len()
    }

    /// Number of completed-cycle branch points, when it is a non-negative
    /// integer; `None` flags an invalid profile (all its counts are 0).
    pub fn branch_count(&self) -> Option<u32> {
        let num = self.total() as i64 + self.k.len() as i64 + 2 * self.g as i64 - 2;
        if num < 0 || num % self.r as i64 != 0 {
            return None;
        }
        Some((num / self.r as i64) as u32)
    }

    pub fn is_valid(&self) -> bool {
        self.branch_count().is_some()
    }

    /// (pᵢ, aᵢ) for every part: kᵢ = r·pᵢ + (r − 1 − aᵢ) with 0 ≤ aᵢ < r.
    pub fn part_data(&self) -> Vec<(u32, u32)> {
        self.k
            .iter()
            .map(|&k| {
                let s = k % self.r;
                (k / self.r, self.r - 1 - s)
            })
            .collect()
    }

    /// Rebuild a profile from (r, parts, branch count): the genus is read off
    /// 2g − 2 = r·m − K − n; `None` when that is odd or negative.
    pub fn from_parts(r: u32, mu: &[u32], m: u32) -> Option<Profile> {
        let twog = r as i64 * m as i64 - mu.iter().sum::<u32>() as i64 - mu.len() as i64 + 2;
        if twog < 0 || twog % 2 != 0 {
            return None;
        }
        Some(Profile::new((twog / 2) as u32, r, mu.to_vec()))
    }
}

/// Σ over λ ⊢ |μ| of (dim λ/K!)² · |C_μ| χ_λ(μ)/dim λ · 𝐩_{r+1}(λ)^m —
/// the coefficient of p_μ at fixed m in the disconnected series, before the
/// 1/m! bookkeeping.
pub fn disconnected_coefficient(r: u32, mu: &[u32], m: u32) -> Rat {
    disconnected_by_m(r, mu, m).pop().unwrap()
}

/// The same sum for every branch count 0..=m_max in one sweep over λ.
fn disconnected_by_m(r: u32, mu: &[u32], m_max: u32) -> Vec<Rat> {
    let mu = normalize(mu);
    let k = weight(&mu);
    if k == 0 {
        // Zero sheets: only the empty configuration, which admits no
        // branch points at all.
        let mut out = vec![Rat::zero(); m_max as usize + 1];
        out[0] = Rat::one();
        return out;
    }
    let kfact = Rat::from(factorial(k as u64));
    let cmu = Rat::from(class_size(&mu));
    let mut out = vec![Rat::zero(); m_max as usize + 1];
    for lam in partitions_of(k) {
        let dim = Rat::from(dimension(&lam));
        let chi = Rat::from(irreducible_character(&lam, &mu));
        let base = &dim * &cmu * chi / (&kfact * &kfact);
        let eigen = shifted_power_sum(r + 1, &lam);
        let mut pw = Rat::one();
        for slot in out.iter_mut() {
            *slot += &base * &pw;
            pw *= &eigen;
        }
    }
    out
}

/// Connected count at explicit (r, parts, branch count), extracted as the
/// coefficient of p_μ β^m in the logarithm of the disconnected series and
/// rescaled by m!·Π m_j(μ)! so that degree-one covers count 1.
pub fn connected_from_parts(r: u32, mu: &[u32], m: u32) -> Rat {
    let mu = normalize(mu);
    if mu.is_empty() {
        return Rat::zero();
    }
    let mults = multiplicities(&mu);
    let parts: Vec<u32> = mults.keys().copied().collect();
    let maxc: Vec<u32> = mults.values().copied().collect();
    let nparts = parts.len();
    let total_len: u32 = maxc.iter().sum();

    // Z over the truncated algebra of (sub-multiset counts, branch count).
    type Key = (Vec<u32>, u32);
    let mut z: BTreeMap<Key, Rat> = BTreeMap::new();
    let mut counter = vec![0u32; nparts];
    loop {
        let sub: Partition = {
            let mut s = Vec::new();
            for (i, &c) in counter.iter().enumerate() {
                s.extend(std::iter::repeat(parts[i]).take(c as usize));
            }
            normalize(&s)
        };
        for (mm, d) in disconnected_by_m(r, &sub, m).into_iter().enumerate() {
            if !d.is_zero() {
                let val = d / Rat::from(factorial(mm as u64));
                z.insert((counter.clone(), mm as u32), val);
            }
        }
        // Advance the mixed-radix counter over sub-multisets.
        let mut i = 0;
        loop {
            if i == nparts {
                break;
            }
            if counter[i] < maxc[i] {
                counter[i] += 1;
                break;
            }
            counter[i] = 0;
            i += 1;
        }
        if i == nparts {
            break;
        }
    }

    let mul = |a: &BTreeMap<Key, Rat>, b: &BTreeMap<Key, Rat>| -> BTreeMap<Key, Rat> {
        let mut out: BTreeMap<Key, Rat> = BTreeMap::new();
        for ((ca, ma), va) in a {
            for ((cb, mb), vb) in b {
                if ma + mb > m {
                    continue;
                }
                let sum: Vec<u32> = ca.iter().zip(cb).map(|(x, y)| x + y).collect();
                if sum.iter().zip(&maxc).any(|(s, mx)| s > mx) {
                    continue;
                }
                let t = va * vb;
                *out.entry((sum, ma + mb)).or_insert_with(Rat::zero) += t;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    };

    // W = Z − 1; every term carries at least one part, so W^t = 0 for
    // t > ℓ(μ) and log Z is a finite alternating sum.
    let one_key = (vec![0u32; nparts], 0u32);
    assert_eq!(z.get(&one_key), Some(&Rat::one()));
    let mut w = z;
    w.remove(&one_key);
    let mut g_series: BTreeMap<Key, Rat> = BTreeMap::new();
    let mut pw = w.clone();
    for t in 1..=total_len {
        let sign = if t % 2 == 1 { Rat::one() } else { -Rat::one() };
        let c = sign / rat(t as i64);
        for (key, v) in &pw {
            *g_series.entry(key.clone()).or_insert_with(Rat::zero) += v * &c;
        }
        if t < total_len {
            pw = mul(&pw, &w);
        }
    }

    let coeff = g_series.remove(&(maxc.clone(), m)).unwrap_or_else(Rat::zero);
    let mut scale = Rat::from(factorial(m as u64));
    for &c in &maxc {
        scale *= Rat::from(factorial(c as u64));
    }
    coeff * scale
}

/// Connected count of a profile; exactly 0 on invalid profiles.
pub fn connected_hurwitz(p: &Profile) -> Rat {
    match p.branch_count() {
        None => Rat::zero(),
        Some(m) => connected_from_parts(p.r, &p.k, m),
    }
}

#[derive(thiserror::Error, Debug, PartialEq, Eq)]
pub enum OracleError {
    #[error("brute-force guard exceeded: K={k_total} (max 5), m={m} (max 3)")]
    ResourceGuard { k_total: u32, m: u32 },
}

fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn invert_perm(a: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u8;
    }
    out
}

/// (sorted nontrivial cycle lengths, support mask of nontrivial cycles,
/// fixed points).
fn cycle_data(p: &[u8]) -> (Partition, u32, Vec<u8>) {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut lens = Vec::new();
    let mut mask = 0u32;
    let mut fixed = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0u32;
        let mut x = s;
        let mut cyc_mask = 0u32;
        loop {
            seen[x] = true;
            cyc_mask |= 1 << x;
            len += 1;
            x = p[x] as usize;
            if x == s {
                break;
            }
        }
        if len == 1 {
            fixed.push(s as u8);
        } else {
            lens.push(len);
            mask |= cyc_mask;
        }
    }
    lens.sort_unstable_by(|a, b| b.cmp(a));
    (lens, mask, fixed)
}

fn all_masks_connected(masks: &[u32], full: u32) -> bool {
    if full.count_ones() == 1 {
        return true;
    }
    let mut comps: Vec<u32> = Vec::new();
    for &m in masks {
        let mut cur = m;
        comps.retain(|&c| {
            if c & cur != 0 {
                cur |= c;
                false
            } else {
                true
            }
        });
        // Re-merge: the enlarged component may now touch earlier ones.
        loop {
            let before = comps.len();
            comps.retain(|&c| {
                if c & cur != 0 {
                    cur |= c;
                    false
                } else {
                    true
                }
            });
            if comps.len() == before {
                break;
            }
        }
        comps.push(cur);
    }
    comps.len() == 1 && comps[0] == full
}

/// Enumerative oracle: sums the weights of transitive decorated
/// factorizations τ₁⋯τ_m = σ₀ over a fixed base permutation σ₀ of cycle
/// type k, where each factor is a permutation together with a distinguished
/// set (its nontrivial cycles, plus a choice of marked fixed points matching
/// the unit parts of its completed-cycle term), then divides by Π kᵢ.
/// Guarded to K ≤ 5, m ≤ 3.
pub fn brute_force_hurwitz(p: &Profile) -> Result<Rat, OracleError> {
    let m = match p.branch_count() {
        None => return Ok(Rat::zero()),
        Some(m) => m,
    };
    let k_total = p.total();
    if k_total > 5 || m > 3 {
        return Err(OracleError::ResourceGuard { k_total, m });
    }
    let kk = k_total as usize;
    let full: u32 = (1u32 << kk) - 1;

    // Canonical σ₀ with the requested cycle type: consecutive cycles.
    let mut sigma0 = vec![0u8; kk];
    let mut start = 0usize;
    for &part in &p.k {
        let part = part as usize;
        for i in 0..part {
            sigma0[start + i] = (start + (i + 1) % part) as u8;
        }
        start += part;
    }

    if m == 0 {
        // Empty product must equal σ₀ and the single-point cover is the only
        // connected configuration without branch points.
        let s = if sigma0.iter().enumerate().all(|(i, &x)| x as usize == i) && kk == 1 {
            Rat::one()
        } else {
            Rat::zero()
        };
        return Ok(finish_oracle(s, &p.k));
    }

    // All decorated factors, grouped by their permutation.
    let perms = permutations(kk);
    let index: HashMap<Vec<u8>, usize> =
        perms.iter().enumerate().map(|(i, q)| (q.clone(), i)).collect();
    let cc = completed_cycle(p.r + 1);
    let mut decorated: Vec<Vec<(u32, Rat)>> = vec![Vec::new(); perms.len()];
    for (pi, q) in perms.iter().enumerate() {
        let (lens, mask, fixed) = cycle_data(q);
        for (lam, coeff) in &cc.coeffs {
            if weight(lam) > k_total {
                continue;
            }
            let nontrivial: Partition = lam.iter().copied().filter(|&x| x >= 2).collect();
            let units = lam.len() - nontrivial.len();
            if nontrivial != lens || units > fixed.len() {
                continue;
            }
            for choice in subsets_of_size(&fixed, units) {
                let mut dm = mask;
                for b in choice {
                    dm |= 1 << b;
                }
                decorated[pi].push((dm, coeff.clone()));
            }
        }
    }

    let sigma0_idx = index[&sigma0];
    let mut s = Rat::zero();
    match m {
        1 => {
            for (mask, w) in &decorated[sigma0_idx] {
                if *mask == full {
                    s += w;
                }
            }
        }
        2 => {
            for (i1, q1) in perms.iter().enumerate() {
                if decorated[i1].is_empty() {
                    continue;
                }
                let q2 = compose(&invert_perm(q1), &sigma0);
                let i2 = index[&q2];
                for (m1, w1) in &decorated[i1] {
                    for (m2, w2) in &decorated[i2] {
                        if all_masks_connected(&[*m1, *m2], full) {
                            s += w1 * w2;
                        }
                    }
                }
            }
        }
        3 => {
            for (i1, q1) in perms.iter().enumerate() {
                if decorated[i1].is_empty() {
                    continue;
                }
                for (i2, q2) in perms.iter().enumerate() {
                    if decorated[i2].is_empty() {
                        continue;
                    }
                    let q3 = compose(&invert_perm(&compose(q1, q2)), &sigma0);
                    let i3 = index[&q3];
                    if decorated[i3].is_empty() {
                        continue;
                    }
                    for (m1, w1) in &decorated[i1] {
                        for (m2, w2) in &decorated[i2] {
                            let w12 = w1 * w2;
                            for (m3, w3) in &decorated[i3] {
                                if all_masks_connected(&[*m1, *m2, *m3], full) {
                                    s += &w12 * w3;
                                }
                            }
                        }
                    }
                }
            }
        }
        _ => unreachable!("guard admits m <= 3"),
    }
    Ok(finish_oracle(s, &p.k))
}

fn finish_oracle(s: Rat, k: &[u32]) -> Rat {
    let mut denom = Rat::one();
    for &part in k {
        denom *= rat(part as i64);
    }
    s / denom
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    fn heap(k: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k % 2 == 0 {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out
}

fn subsets_of_size(items: &[u8], size: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[u8], size: usize, from: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in from..items.len() {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut cur, &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Character,
    Oracle,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Character => "character",
            Provenance::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HurwitzRow {
    pub g: u32,
    pub r: u32,
    pub k: Vec<u32>,
    pub m: Option<u32>,
    pub h: String,
    pub provenance: String,
}

/// Accumulated table of computed counts with provenance; the same profile
/// computed along different routes must agree, which `check_consistency`
/// verifies.
#[derive(Clone, Debug, Default)]
pub struct HurwitzTable {
    rows: Vec<HurwitzRow>,
}

#[derive(Serialize)]
struct HurwitzTableFile<'a> {
    format: &'static str,
    rows: &'a [HurwitzRow],
}

impl HurwitzTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, p: &Profile, value: &Rat, provenance: Provenance) {
        self.rows.push(HurwitzRow {
            g: p.g,
            r: p.r,
            k: p.k.clone(),
            m: p.branch_count(),
            h: rat_display(value),
            provenance: provenance.as_str().to_string(),
        });
    }

    pub fn rows(&self) -> &[HurwitzRow] {
        &self.rows
    }

    fn sorted_rows(&self) -> Vec<HurwitzRow> {
        let mut rows = self.rows.clone();
        rows.sort_by(|a, b| {
            (a.g, a.r, &a.k, &a.provenance).cmp(&(b.g, b.r, &b.k, &b.provenance))
        });
        rows
    }

    /// Err carries the first profile whose routes disagree.
    pub fn check_consistency(&self) -> Result<(), String> {
        let mut seen: HashMap<(u32, u32, Vec<u32>), (String, String)> = HashMap::new();
        for row in &self.rows {
            let key = (row.g, row.r, row.k.clone());
            match seen.get(&key) {
                None => {
                    seen.insert(key, (row.h.clone(), row.provenance.clone()));
                }
                Some((h, prov)) => {
                    if *h != row.h {
                        return Err(format!(
                            "profile g={} r={} k={:?}: {} gives {} but {} gives {}",
                            row.g, row.r, row.k, prov, h, row.provenance, row.h
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let rows = self.sorted_rows();
        serde_json::to_string_pretty(&HurwitzTableFile {
            format: "hurwitz-table-v1",
            rows: &rows,
        })
        .expect("table serialization cannot fail")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("g,r,k,m,h,provenance\n");
        for row in self.sorted_rows() {
            let kstr: Vec<String> = row.k.iter().map(|x| x.to_string()).collect();
            let mstr = row.m.map(|m| m.to_string()).unwrap_or_else(|| "invalid".into());
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.g,
                row.r,
                kstr.join("+"),
                mstr,
                row.h,
                row.provenance
            ));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// KP check: the free energy in the (partition-weight, branch-count) algebra.

pub type BetaKey = (Partition, u32);

/// Series in p-variables and β, truncated by partition weight and β-order.
/// Only the handful of operations the KP residual needs.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaSeries {
    pub w_bound: u32,
    pub m_bound: u32,
    pub terms: BTreeMap<BetaKey, Rat>,
}

impl BetaSeries {
    pub fn zero(w_bound: u32, m_bound: u32) -> Self {
        BetaSeries { w_bound, m_bound, terms: BTreeMap::new() }
    }

    pub fn insert(&mut self, mono: &[u32], m: u32, v: Rat) {
        let mono = normalize(mono);
        assert!(weight(&mono) <= self.w_bound && m <= self.m_bound);
        if !v.is_zero() {
            *self.terms.entry((mono, m)).or_insert_with(Rat::zero) += v;
        }
    }

    pub fn coeff(&self, mono: &[u32], m: u32) -> Rat {
        self.terms.get(&(normalize(mono), m)).cloned().unwrap_or_else(Rat::zero)
    }

    fn compatible(&self, o: &Self) -> (u32, u32) {
        assert!(
            self.w_bound == o.w_bound && self.m_bound == o.m_bound,
            "truncation mismatch: ({}, {}) vs ({}, {})",
            self.w_bound,
            self.m_bound,
            o.w_bound,
            o.m_bound
        );
        (self.w_bound, self.m_bound)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.compatible(o);
        let mut out = self.clone();
        for (k, v) in &o.terms {
            let e = out.terms.entry(k.clone()).or_insert_with(Rat::zero);
            *e += v;
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= s;
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (wb, mb) = self.compatible(o);
        let mut out = Self::zero(wb, mb);
        for ((pa, ma), va) in &self.terms {
            for ((pb, mb2), vb) in &o.terms {
                if ma + mb2 > mb || weight(pa) + weight(pb) > wb {
                    continue;
                }
                let mut mono = pa.clone();
                mono.extend_from_slice(pb);
                let t = va * vb;
                *out.terms.entry((normalize(&mono), ma + mb2)).or_insert_with(Rat::zero) += t;
            }
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    /// log of a series with constant term 1 whose other terms all carry
    /// positive partition weight (so the expansion terminates).
    pub fn log(&self) -> Self {
        let one = (Partition::new(), 0u32);
        assert_eq!(self.terms.get(&one), Some(&Rat::one()), "log needs constant term 1");
        let mut w = self.clone();
        w.terms.remove(&one);
        assert!(
            w.terms.keys().all(|(p, _)| !p.is_empty()),
            "log needs every non-constant term to carry a p-variable"
        );
        let mut acc = Self::zero(self.w_bound, self.m_bound);
        let mut pw = w.clone();
        for t in 1..=self.w_bound {
            let sign = if t % 2 == 1 { Rat::one() } else { -Rat::one() };
            acc = acc.add(&pw.scale(&(sign / rat(t as i64))));
            if t < self.w_bound {
                pw = pw.mul(&w);
                if pw.terms.is_empty() {
                    break;
                }
            }
        }
        acc
    }

    /// exp of a series with no constant term, all terms carrying positive
    /// partition weight.
    pub fn exp(&self) -> Self {
        assert!(
            self.terms.keys().all(|(p, _)| !p.is_empty()),
            "exp needs every term to carry a p-variable"
        );
        let mut acc = Self::zero(self.w_bound, self.m_bound);
        acc.insert(&[], 0, Rat::one());
        let mut pw = acc.clone();
        for t in 1..=self.w_bound {
            pw = pw.mul(self);
            if pw.terms.is_empty() {
                break;
            }
            acc = acc.add(&pw.scale(&(Rat::one() / Rat::from(factorial(t as u64)))));
        }
        acc
    }

    /// ∂/∂p_j: p_j^c ↦ c·p_j^{c−1} on each monomial.
    pub fn p_derivative(&self, j: u32) -> Self {
        let mut out = Self::zero(self.w_bound, self.m_bound);
        for ((mono, m), v) in &self.terms {
            let c = mono.iter().filter(|&&x| x == j).count();
            if c == 0 {
                continue;
            }
            let mut reduced = mono.clone();
            let pos = reduced.iter().position(|&x| x == j).unwrap();
            reduced.remove(pos);
            *out.terms.entry((reduced, *m)).or_insert_with(Rat::zero) += v * rat(c as i64);
        }
        out
    }
}

/// The connected generating series as a `BetaSeries`: log of the
/// character-sum series, all partitions up to the weight bound.
pub fn connected_free_energy(r: u32, w_bound: u32, m_bound: u32) -> BetaSeries {
    let mut z = BetaSeries::zero(w_bound, m_bound);
    z.insert(&[], 0, Rat::one());
    for k in 1..=w_bound {
        for mu in partitions_of(k) {
            for (m, d) in disconnected_by_m(r, &mu, m_bound).into_iter().enumerate() {
                if !d.is_zero() {
                    z.insert(&mu, m as u32, d / Rat::from(factorial(m as u64)));
                }
            }
        }
    }
    z.log()
}

#[derive(Clone, Debug, Serialize)]
pub struct KpResidualEntry {
    pub monomial: Vec<u32>,
    pub m: u32,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct KpReport {
    pub format: &'static str,
    pub r: u32,
    pub degree_bound: u32,
    pub beta_bound: u32,
    pub equation: &'static str,
    pub checked_weight: u32,
    pub residuals: Vec<KpResidualEntry>,
    pub all_zero: bool,
}

pub const KP_EQUATION: &str = "R(F) = F_{p1p1p1p1} + 6*(F_{p1p1})^2 + 12*F_{p2p2} - 12*F_{p1p3}; \
     sign and time conventions calibrated on tau = 1, tau = exp(p1), a one-soliton family, \
     and the classical r = 1 series";

/// First-equation residual of a free energy, trustworthy for monomials of
/// weight ≤ w_bound − 4 (four p₁-derivatives burn that much knowledge).
pub fn first_kp_residual(f: &BetaSeries) -> BetaSeries {
    let f1 = f.p_derivative(1);
    let f11 = f1.p_derivative(1);
    let f1111 = f11.p_derivative(1).p_derivative(1);
    let f22 = f.p_derivative(2).p_derivative(2);
    let f13 = f.p_derivative(1).p_derivative(3);
    f1111
        .add(&f11.mul(&f11).scale(&rat(6)))
        .add(&f22.scale(&rat(12)))
        .add(&f13.scale(&rat(-12)))
}

/// Build the connected series for spin r up to total p-weight `degree_bound`
/// and β-order 12, evaluate the calibrated first KP equation, and report
/// every residual coefficient in the trustworthy range.
pub fn kp_residual(r: u32, degree_bound: u32) -> KpReport {
    assert!(degree_bound >= 4, "need at least weight 4 to form the equation");
    let beta_bound = 12;
    let f = connected_free_energy(r, degree_bound, beta_bound);
    let res = first_kp_residual(&f);
    let check_w = degree_bound - 4;
    let mut residuals = Vec::new();
    let mut all_zero = true;
    for k in 0..=check_w {
        let monos = if k == 0 { vec![Partition::new()] } else { partitions_of(k) };
        for mono in monos {
            for m in 0..=beta_bound {
                let v = res.coeff(&mono, m);
                if !v.is_zero() {
                    all_zero = false;
                }
                residuals.push(KpResidualEntry {
                    monomial: mono.clone(),
                    m,
                    residual: rat_display(&v),
                });
            }
        }
    }
    KpReport {
        format: "kp-report-v1",
        r,
        degree_bound,
        beta_bound,
        equation: KP_EQUATION,
        checked_weight: check_w,
        residuals,
        all_zero,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::ratio;

    #[test]
    fn profile_arithmetic() {
        let p = Profile::new(0, 2, vec![1, 3]);
        assert_eq!(p.total(), 4);
        assert_eq!(p.branch_count(), Some(2));
        // k = r·p + (r−1−a): 1 = 2·0 + (1−0), 3 = 2·1 + (1−0).
        assert_eq!(p.part_data(), vec![(0, 0), (1, 0)]);
        let q = Profile::new(0, 2, vec![2]);
        assert_eq!(q.branch_count(), None);
        assert!(!q.is_valid());
        assert_eq!(connected_hurwitz(&q), rat(0));
        let rebuilt = Profile::from_parts(2, &[1, 3], 2).unwrap();
        assert_eq!(rebuilt, p);
        // 2g − 2 = r·m − K − n = 2 − 2 − 1 is odd: no genus fits.
        assert_eq!(Profile::from_parts(1, &[2], 2), None);
    }

    #[test]
    fn disconnected_examples() {
        assert_eq!(disconnected_coefficient(1, &[1], 0), rat(1));
        assert_eq!(disconnected_coefficient(3, &[1], 0), rat(1));
        assert_eq!(disconnected_coefficient(1, &[2], 1), ratio(1, 2));
        assert_eq!(disconnected_coefficient(1, &[1, 1], 0), ratio(1, 2));
        assert_eq!(disconnected_coefficient(2, &[], 0), rat(1));
        assert_eq!(disconnected_coefficient(2, &[], 2), rat(0));
    }

    #[test]
    fn connected_examples() {
        for r in 1..=3 {
            assert_eq!(connected_hurwitz(&Profile::new(0, r, vec![1])), rat(1));
        }
        assert_eq!(connected_hurwitz(&Profile::new(0, 1, vec![2])), ratio(1, 2));
        assert_eq!(connected_hurwitz(&Profile::new(1, 1, vec![1])), rat(0));
        // Symmetry in the parts.
        assert_eq!(
            connected_hurwitz(&Profile::new(0, 2, vec![1, 3, 2])),
            connected_hurwitz(&Profile::new(0, 2, vec![3, 2, 1]))
        );
    }

    #[test]
    fn oracle_classical_values() {
        assert_eq!(brute_force_hurwitz(&Profile::new(0, 1, vec![2])).unwrap(), ratio(1, 2));
        // Three transitive transposition pairs compose to a 3-cycle.
        assert_eq!(brute_force_hurwitz(&Profile::new(0, 1, vec![3])).unwrap(), rat(1));
        // Classical count for profile (2,1): four factorizations.
        assert_eq!(brute_force_hurwitz(&Profile::new(0, 1, vec![2, 1])).unwrap(), rat(4));
        // Degree-one covers.
        assert_eq!(brute_force_hurwitz(&Profile::new(0, 3, vec![1])).unwrap(), rat(1));
        // No transposition lives in one sheet.
        assert_eq!(brute_force_hurwitz(&Profile::new(1, 1, vec![1])).unwrap(), rat(0));
    }

    #[test]
    fn oracle_guard() {
        let err = brute_force_hurwitz(&Profile::new(0, 1, vec![6])).unwrap_err();
        assert_eq!(err, OracleError::ResourceGuard { k_total: 6, m: 5 });
    }

    #[test]
    fn oracle_matches_characters_small() {
        // A fast slice of the sweep the acceptance gate runs in full.
        for r in 1..=2u32 {
            for k_total in 1..=4u32 {
                for mu in partitions_of(k_total) {
                    for m in 0..=3u32 {
                        let p = match Profile::from_parts(r, &mu, m) {
                            Some(p) => p,
                            None => continue,
                        };
                        let fast = connected_hurwitz(&p);
                        let slow = brute_force_hurwitz(&p).unwrap();
                        assert_eq!(fast, slow, "r={r} mu={mu:?} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn table_provenance_and_export() {
        let mut t = HurwitzTable::new();
        let p = Profile::new(0, 1, vec![2, 1]);
        let v = connected_hurwitz(&p);
        t.push(&p, &v, Provenance::Character);
        t.push(&p, &brute_force_hurwitz(&p).unwrap(), Provenance::Oracle);
        t.check_consistency().unwrap();
        let csv = t.to_csv();
        assert!(csv.starts_with("g,r,k,m,h,provenance\n"));
        assert!(csv.contains("0,1,2+1,3,4,character"));
        let json = t.to_json();
        assert!(json.contains("hurwitz-table-v1"));
        // An inconsistent pair is caught.
        let mut bad = HurwitzTable::new();
        bad.push(&p, &rat(4), Provenance::Character);
        bad.push(&p, &rat(5), Provenance::Oracle);
        assert!(bad.check_consistency().is_err());
    }

    #[test]
    fn kp_residual_of_simple_tau_functions() {
        // tau = 1.
        let f = BetaSeries::zero(8, 0);
        assert!(first_kp_residual(&f).terms.is_empty());
        // tau = exp(p1) ⇒ F = p1.
        let mut f = BetaSeries::zero(8, 0);
        f.insert(&[1], 0, rat(1));
        assert!(first_kp_residual(&f).terms.is_empty());
    }

    #[test]
    fn kp_residual_of_one_soliton() {
        // tau = (1 + exp(Σ p_i/i))/2 — an honest solution; the halving only
        // shifts F by a constant, keeping coefficients rational.
        let wb = 9u32;
        let mut xi = BetaSeries::zero(wb, 0);
        for i in 1..=wb {
            xi.insert(&[i], 0, ratio(1, i as i64));
        }
        let e = xi.exp();
        // F = log((1 + E)/2) = log(1 + (E−1)/2).
        let mut half_shift = e.scale(&ratio(1, 2));
        half_shift.insert(&[], 0, ratio(1, 2));
        let f = half_shift.log();
        let res = first_kp_residual(&f);
        for k in 0..=wb - 4 {
            let monos = if k == 0 { vec![Partition::new()] } else { partitions_of(k) };
            for mono in monos {
                assert_eq!(res.coeff(&mono, 0), rat(0), "soliton residual at {mono:?}");
            }
        }
    }

    #[test]
    fn kp_residual_detects_a_non_solution() {
        // F = p2²: R picks up 12·F_{p2p2} = 24 ≠ 0, so the checker is not
        // vacuously green.
        let mut f = BetaSeries::zero(8, 0);
        f.insert(&[2, 2], 0, rat(1));
        let res = first_kp_residual(&f);
        assert_eq!(res.coeff(&[], 0), rat(24));
    }

    #[test]
    fn kp_residual_classical_series() {
        let report = kp_residual(1, 5);
        assert!(report.all_zero, "classical series must satisfy the first equation");
        assert!(report.residuals.iter().all(|e| e.residual == "0"));
    }

    #[test]
    fn free_energy_agrees_with_profile_extraction() {
        // The full-algebra logarithm and the per-profile sub-multiset
        // logarithm are different prunings of the same series.
        let f = connected_free_energy(2, 4, 6);
        for mu in partitions_of_range_local(1, 4) {
            for m in 0..=6u32 {
                let mut scale = Rat::from(factorial(m as u64));
                for (_, c) in multiplicities(&mu) {
                    scale *= Rat::from(factorial(c as u64));
                }
                assert_eq!(
                    f.coeff(&mu, m) * scale,
                    connected_from_parts(2, &mu, m),
                    "mu={mu:?} m={m}"
                );
            }
        }
    }

    fn partitions_of_range_local(lo: u32, hi: u32) -> Vec<Partition> {
        crate::partitions::partitions_of_range(lo, hi)
    }
}
