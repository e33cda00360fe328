//! Stable graphs: dual graphs of nodal curves with genus labels, the index
//! set of the R-matrix graph sum. Enumeration is exhaustive over vertex
//! counts, genus vectors, edge multisets, and leg placements, deduplicated
//! to one representative per isomorphism class with its automorphism order.

use itertools::Itertools;

/// Genus-labeled multigraph with n labeled legs. `edges` holds unordered
/// pairs (u ≤ v), sorted; loops are (v, v).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableGraph {
    pub genera: Vec<u32>,
    pub leg_at: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl StableGraph {
    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    /// Leg count plus edge ends (loops count twice) at vertex v.
    pub fn valence(&self, v: usize) -> u32 {
        let legs = self.leg_at.iter().filter(|&&x| x == v).count();
        let ends = self
            .edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum::<usize>();
        (legs + ends) as u32
    }

    fn relabeled(&self, perm: &[usize]) -> (Vec<u32>, Vec<usize>, Vec<(usize, usize)>) {
        let nv = self.genera.len();
        let mut genera = vec![0; nv];
        for (old, &new) in perm.iter().enumerate() {
            genera[new] = self.genera[old];
        }
        let leg_at: Vec<usize> = self.leg_at.iter().map(|&v| perm[v]).collect();
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        (genera, leg_at, edges)
    }
}

/// A representative graph with the order of its automorphism group: vertex
/// symmetries × permutations of parallel edges × loop flips and swaps.
#[derive(Clone, Debug)]
pub struct CountedGraph {
    pub graph: StableGraph,
    pub aut: u64,
}

fn edge_multisets(pool: &[(usize, usize)], size: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(
        pool: &[(usize, usize)],
        size: usize,
        from: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in from..pool.len() {
            cur.push(pool[i]);
            rec(pool, size, i, cur, out);
            cur.pop();
        }
    }
    rec(pool, size, 0, &mut cur, &mut out);
    out
}

fn is_connected(nv: usize, edges: &[(usize, usize)]) -> bool {
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let r0 = find(&mut parent, 0);
    (1..nv).all(|v| find(&mut parent, v) == r0)
}

fn factorial_u64(k: usize) -> u64 {
    (1..=k as u64).product::<u64>().max(1)
}

/// All isomorphism classes of stable graphs of genus g with n legs.
/// Total genus = Σ vertex genera + first Betti number; every vertex
/// satisfies 2g_v − 2 + valence > 0.
pub fn stable_graphs(g: u32, n: usize) -> Vec<CountedGraph> {
    assert!(
        2 * g as i64 - 2 + n as i64 > 0,
        "unstable moduli space: g={g}, n={n}"
    );
    let max_v = (2 * g as i64 - 2 + n as i64) as usize;
    let mut out = Vec::new();
    for nv in 1..=max_v {
        let pairs: Vec<(usize, usize)> =
            (0..nv).flat_map(|a| (a..nv).map(move |b| (a, b))).collect();
        // Genus vectors with Σ ≤ g.
        let mut genus_vectors = vec![Vec::<u32>::new()];
        for _ in 0..nv {
            genus_vectors = genus_vectors
                .into_iter()
                .flat_map(|v| {
                    let used: u32 = v.iter().sum();
                    (0..=g - used).map(move |gv| {
                        let mut w = v.clone();
                        w.push(gv);
                        w
                    })
                })
                .collect();
        }
        for genera in genus_vectors {
            let total: u32 = genera.iter().sum();
            let e_count = g as i64 - total as i64 + nv as i64 - 1;
            if e_count < 0 {
                continue;
            }
            for edges in edge_multisets(&pairs, e_count as usize) {
                if !is_connected(nv, &edges) {
                    continue;
                }
                let leg_assignments: Vec<Vec<usize>> = if n == 0 {
                    vec![vec![]]
                } else {
                    std::iter::repeat(0..nv).take(n).multi_cartesian_product().collect()
                };
                for leg_at in leg_assignments {
                    let graph = StableGraph { genera: genera.clone(), leg_at, edges: edges.clone() };
                    if (0..nv)
                        .any(|v| 2 * graph.genera[v] as i64 - 2 + graph.valence(v) as i64 <= 0)
                    {
                        continue;
                    }
                    // Canonical representative: smallest relabeling.
                    let own = graph.relabeled(&(0..nv).collect::<Vec<_>>());
                    let mut aut_v = 0u64;
                    let mut minimal = true;
                    for perm in (0..nv).permutations(nv) {
                        let key = graph.relabeled(&perm);
                        if key < own {
                            minimal = false;
                            break;
                        }
                        if key == own {
                            aut_v += 1;
                        }
                    }
                    if !minimal {
                        continue;
                    }
                    let mut aut = aut_v;
                    for (pair, group) in &graph.edges.iter().chunk_by(|&&e| e) {
                        let mult = group.count();
                        if pair.0 == pair.1 {
                            // ℓ loops: 2 per flip, ℓ! for swaps.
                            aut *= 2u64.pow(mult as u32) * factorial_u64(mult);
                        } else {
                            aut *= factorial_u64(mult);
                        }
                    }
                    out.push(CountedGraph { graph, aut });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graphs(g: u32, n: usize) -> Vec<CountedGraph> {
        stable_graphs(g, n)
    }

    #[test]
    fn smallest_spaces() {
        let g03 = graphs(0, 3);
        assert_eq!(g03.len(), 1);
        assert_eq!(g03[0].aut, 1);
        assert!(g03[0].graph.edges.is_empty());

        let g11 = graphs(1, 1);
        assert_eq!(g11.len(), 2);
        let smooth = g11.iter().find(|c| c.graph.genera == [1]).unwrap();
        assert_eq!(smooth.aut, 1);
        let nodal = g11.iter().find(|c| c.graph.genera == [0]).unwrap();
        assert_eq!(nodal.graph.edges, vec![(0, 0)]);
        assert_eq!(nodal.aut, 2);
    }

    #[test]
    fn four_and_five_marked_points() {
        // 1 smooth + 3 two-vertex splittings.
        assert_eq!(graphs(0, 4).len(), 4);
        // 1 smooth + 10 one-node + 15 two-node strata.
        assert_eq!(graphs(0, 5).len(), 26);
    }

    #[test]
    fn genus_two_closed_strata() {
        let all = graphs(2, 0);
        assert_eq!(all.len(), 7);
        // The two trivalent graphs carry the largest symmetry.
        let theta = all
            .iter()
            .find(|c| c.graph.genera == [0, 0] && c.graph.edges == [(0, 1), (0, 1), (0, 1)])
            .unwrap();
        assert_eq!(theta.aut, 12);
        let dumbbell = all
            .iter()
            .find(|c| c.graph.genera == [0, 0] && c.graph.edges == [(0, 0), (0, 1), (1, 1)])
            .unwrap();
        assert_eq!(dumbbell.aut, 8);
    }

    #[test]
    fn genus_consistency_and_stability() {
        for (g, n) in [(0usize, 4usize), (1, 1), (1, 2), (2, 1)] {
            let g = g as u32;
            for c in graphs(g, n) {
                let betti =
                    c.graph.edges.len() as i64 - c.graph.num_vertices() as i64 + 1;
                let total = c.graph.genera.iter().sum::<u32>() as i64 + betti;
                assert_eq!(total, g as i64);
                for v in 0..c.graph.num_vertices() {
                    assert!(2 * c.graph.genera[v] as i64 - 2 + c.graph.valence(v) as i64 > 0);
                }
                assert_eq!(c.graph.leg_at.len(), n);
            }
        }
    }
}
