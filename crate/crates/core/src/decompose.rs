//! Layer decompositions of trees.
//!
//! `DEG(s, t)` repeatedly peels white nodes of residual degree at most `s`
//! and black nodes of residual degree at most `t`. `ARC(r, Delta)` repeatedly
//! removes leaves (raking) together with every node that has no node of
//! residual degree `>= Delta` within distance `r` (compressing).

use std::fmt;

use crate::tree::{Color, ColoredTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Reason {
    LowDegree,
    Raked,
    Compressed,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::LowDegree => "low-degree",
            Reason::Raked => "raked",
            Reason::Compressed => "compressed",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Procedure {
    Deg { s: usize, t: usize },
    Arc { r: usize, delta: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerDecomposition {
    /// Layer of each node, starting at 1.
    pub layer_of: Vec<u32>,
    pub reason: Vec<Reason>,
    pub layer_count: usize,
    pub params: Procedure,
}

impl LayerDecomposition {
    pub fn layer(&self, v: usize) -> u32 {
        self.layer_of[v]
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.layer_count];
        for &l in &self.layer_of {
            sizes[l as usize - 1] += 1;
        }
        sizes
    }

    /// Nodes grouped by layer, each group sorted by index.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.layer_count];
        for (v, &l) in self.layer_of.iter().enumerate() {
            out[l as usize - 1].push(v);
        }
        out
    }

    /// `layer <node-id> <index> <reason>` per node, in id order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for v in 0..self.layer_of.len() {
            out.push_str(&format!(
                "layer {} {} {}\n",
                v + 1,
                self.layer_of[v],
                self.reason[v]
            ));
        }
        out
    }
}

/// A tree with some nodes removed; degrees are residual.
#[derive(Clone, Debug)]
pub struct ResidualForest<'a> {
    tree: &'a ColoredTree,
    alive: Vec<bool>,
    deg: Vec<usize>,
    members: Vec<usize>,
}

impl<'a> ResidualForest<'a> {
    pub fn new(tree: &'a ColoredTree) -> Self {
        ResidualForest {
            tree,
            alive: vec![true; tree.len()],
            deg: (0..tree.len()).map(|v| tree.degree(v)).collect(),
            members: (0..tree.len()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_alive(&self, v: usize) -> bool {
        self.alive[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.deg[v]
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// White nodes of residual degree `<= s` and black nodes `<= t`.
    pub fn degen_set(&self, s: usize, t: usize) -> Vec<usize> {
        self.members
            .iter()
            .copied()
            .filter(|&v| self.deg[v] <= threshold(self.tree.color(v), s, t))
            .collect()
    }

    /// Nodes of residual degree at most one (isolated nodes included).
    pub fn leaves_set(&self) -> Vec<usize> {
        self.members
            .iter()
            .copied()
            .filter(|&v| self.deg[v] <= 1)
            .collect()
    }

    /// Nodes with no node of residual degree `>= delta` within distance `r`.
    pub fn ext_set(&self, r: usize, delta: usize) -> Vec<usize> {
        let mut near = vec![false; self.tree.len()];
        self.mark_near_high(r, delta, &mut near);
        self.members
            .iter()
            .copied()
            .filter(|&v| !near[v])
            .collect()
    }

    /// Multi-source BFS of depth `r` from the high-degree nodes.
    fn mark_near_high(&self, r: usize, delta: usize, near: &mut [bool]) -> Vec<usize> {
        let mut frontier: Vec<usize> = self
            .members
            .iter()
            .copied()
            .filter(|&v| self.deg[v] >= delta)
            .collect();
        let mut touched = frontier.clone();
        for &v in &frontier {
            near[v] = true;
        }
        for _ in 0..r {
            let mut next = Vec::new();
            for &v in &frontier {
                for a in self.tree.neighbors(v) {
                    if self.alive[a.node] && !near[a.node] {
                        near[a.node] = true;
                        next.push(a.node);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            touched.extend_from_slice(&next);
            frontier = next;
        }
        touched
    }

    pub fn remove(&mut self, nodes: &[usize]) {
        for &v in nodes {
            self.alive[v] = false;
        }
        for &v in nodes {
            for a in self.tree.neighbors(v) {
                if self.alive[a.node] {
                    self.deg[a.node] -= 1;
                }
            }
        }
        let alive = &self.alive;
        self.members.retain(|&v| alive[v]);
    }
}

fn threshold(c: Color, s: usize, t: usize) -> usize {
    match c {
        Color::White => s,
        Color::Black => t,
    }
}

/// `DEG(s, t)` in linear time: nodes are queued as soon as their residual
/// degree reaches the threshold of their color.
pub fn deg_decompose(tree: &ColoredTree, s: usize, t: usize) -> LayerDecomposition {
    assert!(s >= 1 && t >= 1, "DEG needs s, t >= 1");
    let n = tree.len();
    let mut deg: Vec<usize> = (0..n).map(|v| tree.degree(v)).collect();
    let mut layer_of = vec![0u32; n];
    let mut queued = vec![false; n];
    let mut current: Vec<usize> = (0..n)
        .filter(|&v| deg[v] <= threshold(tree.color(v), s, t))
        .collect();
    for &v in &current {
        queued[v] = true;
    }
    let mut layer = 0u32;
    let mut remaining = n;
    let mut sizes_alive = vec![n];
    while !current.is_empty() {
        layer += 1;
        for &v in &current {
            layer_of[v] = layer;
        }
        let mut next = Vec::new();
        for &v in &current {
            for a in tree.neighbors(v) {
                let u = a.node;
                if layer_of[u] == 0 {
                    deg[u] -= 1;
                    if !queued[u] && deg[u] <= threshold(tree.color(u), s, t) {
                        queued[u] = true;
                        next.push(u);
                    }
                }
            }
        }
        remaining -= current.len();
        sizes_alive.push(remaining);
        current = next;
    }
    assert_eq!(remaining, 0, "a nonempty forest always has a low-degree node");
    for i in 0..sizes_alive.len().saturating_sub(2) {
        // two peeling steps shrink a forest by a factor s*t
        assert!(
            sizes_alive[i + 2] * s * t <= sizes_alive[i] + 2 * s * t,
            "DEG shrinkage violated at step {i}"
        );
    }
    LayerDecomposition {
        layer_of,
        reason: vec![Reason::LowDegree; n],
        layer_count: layer as usize,
        params: Procedure::Deg { s, t },
    }
}

/// Residual node counts `|G_0|, |G_1|, ...` of a decomposition.
pub fn residual_sizes(dec: &LayerDecomposition) -> Vec<usize> {
    let sizes = dec.sizes();
    let mut out = vec![dec.layer_of.len()];
    let mut left = dec.layer_of.len();
    for s in sizes {
        left -= s;
        out.push(left);
    }
    out
}

/// `ARC(r, Delta)`: rake and aggressive compress.
pub fn arc_decompose(tree: &ColoredTree, r: usize, delta: usize) -> LayerDecomposition {
    assert!(r >= 1 && delta >= 2, "ARC needs r >= 1 and Delta >= 2");
    let n = tree.len();
    let mut forest = ResidualForest::new(tree);
    let mut layer_of = vec![0u32; n];
    let mut reason = vec![Reason::Raked; n];
    let mut near = vec![false; n];
    let mut layer = 0u32;
    while !forest.is_empty() {
        layer += 1;
        let touched = forest.mark_near_high(r, delta, &mut near);
        let mut removed = Vec::new();
        for &v in forest.members() {
            let leaf = forest.degree(v) <= 1;
            if leaf || !near[v] {
                layer_of[v] = layer;
                reason[v] = if leaf {
                    Reason::Raked
                } else {
                    Reason::Compressed
                };
                removed.push(v);
            }
        }
        for v in touched {
            near[v] = false;
        }
        forest.remove(&removed);
    }
    LayerDecomposition {
        layer_of,
        reason,
        layer_count: layer as usize,
        params: Procedure::Arc { r, delta },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RakedViolation {
    /// The degree-Delta node whose neighborhood fails the check.
    pub node: usize,
    pub detail: String,
}

/// Neighbors of `v` ordered by layer, ties by index.
pub fn lowest_layer_neighbors(dec: &LayerDecomposition, tree: &ColoredTree, v: usize) -> Vec<usize> {
    let mut ns: Vec<usize> = tree.neighbors(v).iter().map(|a| a.node).collect();
    ns.sort_by_key(|&u| (dec.layer_of[u], u));
    ns
}

/// For every node of degree exactly `delta`: its `k` lowest-layer neighbors
/// are raked and, when `r >= 2`, so are all their other neighbors.
pub fn check_raked_neighbors(
    dec: &LayerDecomposition,
    tree: &ColoredTree,
    delta: usize,
    k: usize,
    r: usize,
) -> Result<(), RakedViolation> {
    for v in (0..tree.len()).filter(|&v| tree.degree(v) == delta) {
        let low = lowest_layer_neighbors(dec, tree, v);
        let raked = low
            .iter()
            .filter(|&&u| dec.reason[u] == Reason::Raked)
            .count();
        if raked < k {
            return Err(RakedViolation {
                node: v,
                detail: format!("only {raked} raked neighbors, need {k}"),
            });
        }
        for &u in &low[..k] {
            if dec.reason[u] != Reason::Raked {
                return Err(RakedViolation {
                    node: v,
                    detail: format!("low neighbor {} is {}", u + 1, dec.reason[u]),
                });
            }
            if r >= 2 {
                if let Some(w) = tree
                    .neighbors(u)
                    .iter()
                    .map(|a| a.node)
                    .find(|&w| w != v && dec.reason[w] != Reason::Raked)
                {
                    return Err(RakedViolation {
                        node: v,
                        detail: format!("node {} two hops away is {}", w + 1, dec.reason[w]),
                    });
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerStats {
    pub layer_count: usize,
    pub sizes: Vec<usize>,
    pub rounds_estimate: usize,
}

pub fn layer_stats(dec: &LayerDecomposition) -> LayerStats {
    let r = match dec.params {
        Procedure::Arc { r, .. } => r,
        Procedure::Deg { .. } => 1,
    };
    LayerStats {
        layer_count: dec.layer_count,
        sizes: dec.sizes(),
        rounds_estimate: dec.layer_count * r,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{generate, TreeKind};

    fn star(n: usize) -> ColoredTree {
        generate(TreeKind::Star { center: Color::White }, n, 0).unwrap()
    }

    fn path(n: usize) -> ColoredTree {
        generate(TreeKind::Path, n, 0).unwrap()
    }

    #[test]
    fn degen_examples() {
        let s = star(6);
        assert_eq!(ResidualForest::new(&s).degen_set(2, 2), vec![1, 2, 3, 4, 5]);
        let p = path(4);
        assert_eq!(ResidualForest::new(&p).degen_set(1, 1), vec![0, 3]);
    }

    #[test]
    fn deg_examples() {
        let d = deg_decompose(&star(6), 2, 2);
        assert_eq!(d.layer_count, 2);
        assert_eq!(d.layer_of, vec![2, 1, 1, 1, 1, 1]);
        assert_eq!(deg_decompose(&path(4), 1, 1).layer_count, 2);
        assert_eq!(deg_decompose(&path(50), 2, 2).layer_count, 1);
    }

    #[test]
    fn deg_matches_naive() {
        for seed in 0..30 {
            let t = generate(TreeKind::Random { cap: 6 }, 300, seed).unwrap();
            let fast = deg_decompose(&t, 2, 3);
            let mut f = ResidualForest::new(&t);
            let mut layer = 0;
            while !f.is_empty() {
                layer += 1;
                let l = f.degen_set(2, 3);
                for &v in &l {
                    assert_eq!(fast.layer_of[v], layer);
                }
                f.remove(&l);
            }
            assert_eq!(fast.layer_count, layer as usize);
        }
    }

    #[test]
    fn ext_examples() {
        let p = path(7);
        assert_eq!(ResidualForest::new(&p).ext_set(1, 3).len(), 7);
        assert!(ResidualForest::new(&star(6)).ext_set(1, 5).is_empty());
        let single = ColoredTree::build(vec![Color::White], &[]).unwrap();
        assert_eq!(ResidualForest::new(&single).ext_set(1, 2), vec![0]);
        assert_eq!(ResidualForest::new(&single).leaves_set(), vec![0]);
    }

    #[test]
    fn arc_examples() {
        let d = arc_decompose(&path(9), 1, 3);
        assert_eq!(d.layer_count, 1);
        // endpoints are leaves, so raked wins for them
        assert_eq!(d.reason[0], Reason::Raked);
        assert!(d.reason[1..8].iter().all(|&r| r == Reason::Compressed));

        let s = arc_decompose(&star(6), 1, 5);
        assert_eq!(s.layer_count, 2);
        assert_eq!(s.sizes(), vec![5, 1]);
        assert_eq!(s.reason[0], Reason::Raked);
        assert_eq!(check_raked_neighbors(&s, &star(6), 5, 1, 1), Ok(()));
        let st = layer_stats(&s);
        assert_eq!(st.rounds_estimate, 2);
        assert!(s.dump().starts_with("layer 1 2 raked\nlayer 2 1 raked\n"));
    }

    #[test]
    fn arc_regular_depth() {
        let mut counts = Vec::new();
        for h in [4, 6, 8] {
            let n = TreeKind::complete_regular_size(3, 3, h);
            let t = generate(
                TreeKind::Regular {
                    white: 3,
                    black: 3,
                    depth: Some(h),
                },
                n,
                0,
            )
            .unwrap();
            counts.push(arc_decompose(&t, 1, 3).layer_count);
        }
        assert!(counts[0] < counts[1] && counts[1] < counts[2], "{counts:?}");
    }

    #[test]
    fn raked_neighbors_random() {
        for seed in 0..50 {
            let t = generate(TreeKind::Random { cap: 8 }, 400, seed).unwrap();
            let delta = t.max_degree();
            for (r, k) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                if delta < k + 1 {
                    continue;
                }
                let dec = arc_decompose(&t, r, delta - k + 1);
                assert_eq!(check_raked_neighbors(&dec, &t, delta, k, r), Ok(()));
            }
        }
    }
}
