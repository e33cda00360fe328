//! Intersection numbers ⟨τ_{d₁}⋯τ_{dₙ}⟩_g of ψ-classes on the moduli space
//! of stable curves, computed by the KdV/Virasoro recursion on the largest
//! index, with the string equation clearing zero indices.
//!
//! Values are memoized in-process; an optional JSON cache file lets CLI runs
//! skip recomputation. Deleting the cache can never change a value — it is
//! a pure memo with a version tag, and unknown versions are ignored.

use std::collections::HashMap;
use std::path::Path;
use std::sync::RwLock;

use num::Zero;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::exact::rat::{odd_double_factorial, rat, rat_display, rat_parse, ratio, Rat};

static PSI_MEMO: Lazy<RwLock<HashMap<(u32, Vec<u32>), Rat>>> = Lazy::new(Default::default);

/// (2k−1)!! as a rational, with (−1)!! = 1.
fn odf(k: u32) -> Rat {
    Rat::from(odd_double_factorial(k as u64))
}

/// ⟨τ_{d₁}⋯τ_{dₙ}⟩_g. Exactly zero off the dimension Σd = 3g−3+n, so
/// callers may sum blindly over index vectors; unstable (g, n) is a caller
/// bug and panics.
pub fn psi_intersection(g: u32, ds: &[u32]) -> Rat {
    assert!(
        2 * g as i64 - 2 + ds.len() as i64 > 0,
        "unstable moduli space: g={g}, n={}",
        ds.len()
    );
    psi_value(g, ds)
}

/// Recursion workhorse: identical to [`psi_intersection`] but returns 0 on
/// unstable (g, n), which the splitting terms of the recursion produce
/// freely.
fn psi_value(g: u32, ds: &[u32]) -> Rat {
    let n = ds.len() as i64;
    if 2 * g as i64 - 2 + n <= 0 {
        return Rat::zero();
    }
    let dim = 3 * g as i64 - 3 + n;
    if ds.iter().map(|&d| d as i64).sum::<i64>() != dim {
        return Rat::zero();
    }
    let mut key_ds = ds.to_vec();
    key_ds.sort_unstable_by(|a, b| b.cmp(a));
    if g == 0 && key_ds == [0, 0, 0] {
        return rat(1);
    }
    if g == 1 && key_ds == [1] {
        return ratio(1, 24);
    }
    let key = (g, key_ds);
    if let Some(v) = PSI_MEMO.read().unwrap().get(&key) {
        return v.clone();
    }
    let ds = &key.1;
    let value = if *ds.last().unwrap() == 0 {
        // String equation: drop the last (zero) index, lower each other
        // index by one in turn.
        let rest = &ds[..ds.len() - 1];
        let mut acc = Rat::zero();
        for j in 0..rest.len() {
            if rest[j] == 0 {
                continue;
            }
            let mut next = rest.to_vec();
            next[j] -= 1;
            acc += psi_value(g, &next);
        }
        acc
    } else {
        dvv_step(g, ds)
    };
    PSI_MEMO.write().unwrap().insert(key, value.clone());
    value
}

/// One step of the recursion on the largest index d₁ (all indices ≥ 1).
fn dvv_step(g: u32, ds: &[u32]) -> Rat {
    let d1 = ds[0];
    let rest = &ds[1..];
    let mut acc = Rat::zero();
    // Joining τ_{d1} with one of the other insertions.
    for j in 0..rest.len() {
        let mut next = rest.to_vec();
        next[j] = d1 + rest[j] - 1;
        acc += odf(d1 + rest[j]) / odf(rest[j]) * psi_value(g, &next);
    }
    // Splitting τ_{d1} into τ_a τ_b: either a handle (genus drops) or a
    // separating node (genus and the remaining insertions distribute).
    for a in 0..d1.saturating_sub(1) {
        let b = d1 - 2 - a;
        let w = odf(a + 1) * odf(b + 1) * ratio(1, 2);
        if g >= 1 {
            let mut joined = vec![a, b];
            joined.extend_from_slice(rest);
            acc += &w * psi_value(g - 1, &joined);
        }
        for g1 in 0..=g {
            let g2 = g - g1;
            for mask in 0..(1u32 << rest.len()) {
                let mut left = vec![a];
                let mut right = vec![b];
                for (j, &dj) in rest.iter().enumerate() {
                    if mask & (1 << j) != 0 {
                        left.push(dj);
                    } else {
                        right.push(dj);
                    }
                }
                let l = psi_value(g1, &left);
                if l.is_zero() {
                    continue;
                }
                acc += &w * l * psi_value(g2, &right);
            }
        }
    }
    acc / odf(d1 + 1)
}

#[derive(Serialize, Deserialize)]
struct PsiCacheFile {
    format: String,
    entries: Vec<PsiCacheEntry>,
}

#[derive(Serialize, Deserialize)]
struct PsiCacheEntry {
    g: u32,
    ds: Vec<u32>,
    value: String,
}

const PSI_CACHE_FORMAT: &str = "psi-cache-v1";

/// Merge a cache file into the in-process memo. Unknown formats and missing
/// files are skipped (returning 0); corrupt rationals are an error.
pub fn load_psi_cache(path: &Path) -> std::io::Result<usize> {
    if !path.exists() {
        return Ok(0);
    }
    let text = std::fs::read_to_string(path)?;
    let file: PsiCacheFile = match serde_json::from_str(&text) {
        Ok(f) => f,
        Err(_) => return Ok(0),
    };
    if file.format != PSI_CACHE_FORMAT {
        return Ok(0);
    }
    let mut memo = PSI_MEMO.write().unwrap();
    let mut n = 0;
    for e in file.entries {
        let v = rat_parse(&e.value).ok_or_else(|| {
            std::io::Error::new(std::io::ErrorKind::InvalidData, format!("bad rational {:?}", e.value))
        })?;
        memo.insert((e.g, e.ds), v);
        n += 1;
    }
    Ok(n)
}

/// Write every memoized value out, sorted for byte-stable output.
pub fn save_psi_cache(path: &Path) -> std::io::Result<usize> {
    let memo = PSI_MEMO.read().unwrap();
    let mut entries: Vec<PsiCacheEntry> = memo
        .iter()
        .map(|((g, ds), v)| PsiCacheEntry { g: *g, ds: ds.clone(), value: rat_display(v) })
        .collect();
    drop(memo);
    entries.sort_by(|a, b| (a.g, &a.ds).cmp(&(b.g, &b.ds)));
    let n = entries.len();
    let file = PsiCacheFile { format: PSI_CACHE_FORMAT.to_string(), entries };
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, serde_json::to_string_pretty(&file)?)?;
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::factorial;
    use num::One;
    use proptest::prelude::*;

    #[test]
    fn first_values() {
        assert_eq!(psi_intersection(0, &[0, 0, 0]), rat(1));
        assert_eq!(psi_intersection(1, &[1]), ratio(1, 24));
        assert_eq!(psi_intersection(1, &[0, 2]), ratio(1, 24));
        assert_eq!(psi_intersection(1, &[1, 1]), ratio(1, 24));
        assert_eq!(psi_intersection(0, &[1, 0, 0, 0]), rat(1));
        assert_eq!(psi_intersection(2, &[4]), ratio(1, 1152));
        assert_eq!(psi_intersection(2, &[3, 2]), ratio(29, 5760));
        assert_eq!(psi_intersection(2, &[4, 1]), ratio(1, 384));
    }

    #[test]
    fn off_dimension_and_unstable_vanish() {
        assert_eq!(psi_intersection(1, &[0]), rat(0));
        assert_eq!(psi_intersection(2, &[3]), rat(0));
        assert_eq!(psi_intersection(3, &[]), rat(0));
        // The recursion-internal view tolerates unstable inputs as zero.
        assert_eq!(psi_value(0, &[0, 0]), rat(0));
        assert_eq!(psi_value(0, &[5]), rat(0));
    }

    #[test]
    #[should_panic(expected = "unstable moduli space")]
    fn unstable_query_is_rejected() {
        psi_intersection(0, &[0, 0]);
    }

    #[test]
    fn genus_zero_closed_form() {
        // ⟨τ_{d₁}⋯τ_{dₙ}⟩₀ = (n−3)! / Π dᵢ! on the dimension Σd = n−3.
        let cases: Vec<Vec<u32>> = vec![
            vec![1, 0, 0, 0],
            vec![2, 0, 0, 0, 0],
            vec![1, 1, 0, 0, 0],
            vec![3, 0, 0, 0, 0, 0],
            vec![2, 1, 0, 0, 0, 0],
            vec![1, 1, 1, 0, 0, 0],
            vec![2, 2, 0, 0, 0, 0, 0],
            vec![4, 0, 0, 0, 0, 0, 0],
        ];
        for ds in cases {
            let n = ds.len() as u64;
            let mut denom = Rat::one();
            for &d in &ds {
                denom *= Rat::from(factorial(d as u64));
            }
            let want = Rat::from(factorial(n - 3)) / denom;
            assert_eq!(psi_intersection(0, &ds), want, "ds={ds:?}");
        }
    }

    #[test]
    fn dilaton_equation() {
        // ⟨τ₁ X⟩_g = (2g−2+n)⟨X⟩_g — not built into the recursion, so it is
        // an independent consistency check.
        let cases: Vec<(u32, Vec<u32>)> = vec![
            (1, vec![1]),
            (2, vec![4]),
            (2, vec![3, 2]),
            (0, vec![1, 0, 0, 0]),
            (1, vec![2, 0]),
            (1, vec![1, 1, 1]),
        ];
        for (g, ds) in cases {
            let n = ds.len() as i64;
            let mut up = ds.clone();
            up.push(1);
            assert_eq!(
                psi_intersection(g, &up),
                rat(2 * g as i64 - 2 + n) * psi_intersection(g, &ds),
                "g={g} ds={ds:?}"
            );
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("psi.json");
        let v = psi_intersection(2, &[3, 2]);
        let saved = save_psi_cache(&path).unwrap();
        assert!(saved >= 1);
        let loaded = load_psi_cache(&path).unwrap();
        assert_eq!(loaded, saved);
        assert_eq!(psi_intersection(2, &[3, 2]), v);
        // A file with a foreign version tag is ignored, not an error.
        std::fs::write(&path, r#"{"format":"psi-cache-v999","entries":[]}"#).unwrap();
        assert_eq!(load_psi_cache(&path).unwrap(), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn string_equation_holds(g in 0u32..3, mut ds in proptest::collection::vec(0u32..5, 1..5)) {
            // Pad with a zero insertion; the result must equal the sum of
            // single decrements whenever the padded correlator is on-shell.
            let n = ds.len() as i64;
            if 2*g as i64 - 2 + n + 1 > 0 {
                let dim = 3*g as i64 - 3 + n + 1;
                let cur: i64 = ds.iter().map(|&d| d as i64).sum();
                // Adjust the first entry to land on the correct dimension
                // when possible, so the test exercises nonzero values too.
                if dim >= 1 && cur - ds[0] as i64 <= dim && dim - (cur - ds[0] as i64) <= 12 {
                    ds[0] = (dim - (cur - ds[0] as i64)) as u32;
                }
                let mut padded = ds.clone();
                padded.push(0);
                let mut want = Rat::zero();
                for j in 0..ds.len() {
                    if ds[j] > 0 {
                        let mut next = ds.clone();
                        next[j] -= 1;
                        // The decremented tuple may leave the stable range;
                        // those terms contribute nothing.
                        want += psi_value(g, &next);
                    }
                }
                prop_assert_eq!(psi_intersection(g, &padded), want);
            }
        }
    }
}
