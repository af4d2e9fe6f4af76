//! Canonical codes for small rooted multigraphs.
//!
//! Two balls compare equal as rooted graphs exactly when their codes are
//! byte-identical. The code is produced by iterated color refinement seeded
//! from the root, with individualization/backtracking over any residual
//! symmetry, taking the lexicographically smallest serialized form.

use std::collections::BTreeMap;

/// A rooted multigraph: `adj[v]` lists neighbors of `v` with multiplicity
/// (each undirected edge appears in both endpoint lists; a k-fold edge
/// appears k times). The root is vertex 0 by convention of the constructor.
#[derive(Clone, Debug, PartialEq)]
pub struct RootedGraph {
    pub adj: Vec<Vec<usize>>,
    pub root: usize,
}

impl RootedGraph {
    pub fn new(adj: Vec<Vec<usize>>, root: usize) -> Self {
        assert!(root < adj.len());
        RootedGraph { adj, root }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// Multiplicity matrix (symmetric).
    fn mult_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.adj.len();
        let mut m = vec![vec![0u32; n]; n];
        for (v, nbrs) in self.adj.iter().enumerate() {
            for &u in nbrs {
                m[v][u] += 1;
            }
        }
        m
    }
}

/// Refine colors until stable. Colors are isomorphism-invariant integers;
/// the root always holds a unique color.
fn refine(mult: &[Vec<u32>], colors: &mut Vec<u64>) {
    let n = colors.len();
    loop {
        // Signature: (own color, sorted multiset of (neighbor color, mult)).
        let mut sigs: Vec<(u64, Vec<(u64, u32)>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut nb: Vec<(u64, u32)> = (0..n)
                .filter(|&u| mult[v][u] > 0)
                .map(|u| (colors[u], mult[v][u]))
                .collect();
            nb.sort_unstable();
            sigs.push((colors[v], nb));
        }
        #[allow(clippy::type_complexity)]
        let mut order: BTreeMap<&(u64, Vec<(u64, u32)>), u64> = BTreeMap::new();
        for s in &sigs {
            order.entry(s).or_insert(0);
        }
        for (rank, v) in order.values_mut().enumerate() {
            *v = rank as u64;
        }
        let new_colors: Vec<u64> = sigs.iter().map(|s| order[s]).collect();
        if new_colors == *colors {
            return;
        }
        *colors = new_colors;
    }
}

/// Serialize the graph under the vertex order given by `perm` (canonical
/// position -> original vertex).
fn serialize(mult: &[Vec<u32>], perm: &[usize], root: usize) -> Vec<u8> {
    let n = perm.len();
    let root_pos = perm.iter().position(|&v| v == root).expect("root in perm");
    let mut out = Vec::with_capacity(8 + n * n / 4);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&(root_pos as u32).to_le_bytes());
    for i in 0..n {
        for j in (i + 1)..n {
            let m = mult[perm[i]][perm[j]];
            if m > 0 {
                out.extend_from_slice(&(i as u16).to_le_bytes());
                out.extend_from_slice(&(j as u16).to_le_bytes());
                out.extend_from_slice(&m.to_le_bytes());
            }
        }
    }
    out
}

fn search(mult: &[Vec<u32>], colors: &[u64], root: usize, best: &mut Option<Vec<u8>>) {
    let n = colors.len();
    // Group vertices by color; colors are already canonical integers.
    let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        classes.entry(c).or_default().push(v);
    }
    if classes.len() == n {
        // Discrete coloring: the color order is the canonical order.
        let perm: Vec<usize> = classes.values().map(|vs| vs[0]).collect();
        let code = serialize(mult, &perm, root);
        if best.as_ref().is_none_or(|b| code < *b) {
            *best = Some(code);
        }
        return;
    }
    // Individualize each member of the first non-singleton class.
    let class = classes.values().find(|vs| vs.len() > 1).expect("non-discrete");
    for &v in class {
        let mut next = colors.to_vec();
        // A color value strictly between existing ones cannot collide after
        // renumbering inside refine, so mark v with a fresh maximal color.
        next[v] = u64::MAX;
        refine(mult, &mut next);
        search(mult, &next, root, best);
    }
}

/// Canonical byte code; equal codes ⇔ root-preserving isomorphism.
pub fn canonical_code(g: &RootedGraph) -> Vec<u8> {
    let mult = g.mult_matrix();
    let n = g.adj.len();
    let mut colors = vec![0u64; n];
    colors[g.root] = 1;
    refine(&mult, &mut colors);
    let mut best = None;
    search(&mult, &colors, g.root, &mut best);
    best.expect("at least one labeling")
}

/// Lowercase hex rendering of a canonical code.
pub fn code_hex(code: &[u8]) -> String {
    let mut s = String::with_capacity(code.len() * 2);
    for b in code {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Brute-force root-preserving isomorphism (test oracle, factorial time).
pub fn isomorphic_rooted(a: &RootedGraph, b: &RootedGraph) -> bool {
    let n = a.adj.len();
    if n != b.adj.len() {
        return false;
    }
    let ma = a.mult_matrix();
    let mb = b.mult_matrix();
    let mut others: Vec<usize> = (0..n).filter(|&v| v != a.root).collect();
    let targets: Vec<usize> = (0..n).filter(|&v| v != b.root).collect();
    #[allow(clippy::too_many_arguments)]
    fn permute(
        others: &mut Vec<usize>,
        k: usize,
        map: &mut Vec<usize>,
        targets: &[usize],
        used: &mut Vec<bool>,
        ma: &[Vec<u32>],
        mb: &[Vec<u32>],
        ra: usize,
        rb: usize,
    ) -> bool {
        if k == others.len() {
            return true;
        }
        let v = others[k];
        for (ti, &t) in targets.iter().enumerate() {
            if used[ti] {
                continue;
            }
            if ma[v][ra] != mb[t][rb] || ma[v][v] != mb[t][t] {
                continue;
            }
            let ok = others[..k]
                .iter()
                .all(|&w| ma[v][w] == mb[t][map[w]]);
            if !ok {
                continue;
            }
            used[ti] = true;
            map[v] = t;
            if permute(others, k + 1, map, targets, used, ma, mb, ra, rb) {
                return true;
            }
            used[ti] = false;
        }
        false
    }
    let mut map = vec![usize::MAX; n];
    map[a.root] = b.root;
    let mut used = vec![false; targets.len()];
    permute(&mut others, 0, &mut map, &targets, &mut used, &ma, &mb, a.root, b.root)
}
