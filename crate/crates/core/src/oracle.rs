//! Exact feasibility and solution construction by dynamic programming over
//! the tree, plus brute force for tiny instances.

use crate::bitset::BitSet;
use crate::problem::Problem;
use crate::solve::{verify, EdgeLabeling, SolveError};
use crate::tree::ColoredTree;

/// One incident item of a node during the DP: a child in the component, or
/// an edge leaving the component whose label is unconstrained on the far side.
#[derive(Clone, Copy)]
enum Item {
    Child { node: usize, edge: usize },
    Free { edge: usize },
}

struct Dp<'a> {
    tree: &'a ColoredTree,
    p: &'a Problem,
    order: Vec<usize>,
    parent: Vec<usize>,
    parent_edge: Vec<usize>,
    items: Vec<Vec<Item>>,
    feasible: Vec<[bool; 2]>,
}

const NONE: usize = usize::MAX;

impl<'a> Dp<'a> {
    /// Roots the component containing `root` (nodes with `inside`) and fills
    /// the feasibility table bottom-up.
    fn run(
        tree: &'a ColoredTree,
        p: &'a Problem,
        root: usize,
        inside: &dyn Fn(usize) -> bool,
    ) -> Self {
        let n = tree.len();
        let mut parent = vec![NONE; n];
        let mut parent_edge = vec![NONE; n];
        let mut order = vec![root];
        let mut items: Vec<Vec<Item>> = vec![Vec::new(); n];
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for a in tree.neighbors(v) {
                if a.node == parent[v] {
                    continue;
                }
                if inside(a.node) {
                    parent[a.node] = v;
                    parent_edge[a.node] = a.edge;
                    order.push(a.node);
                    items[v].push(Item::Child {
                        node: a.node,
                        edge: a.edge,
                    });
                } else {
                    items[v].push(Item::Free { edge: a.edge });
                }
            }
        }
        let mut dp = Dp {
            tree,
            p,
            order,
            parent,
            parent_edge,
            items,
            feasible: vec![[false; 2]; n],
        };
        for i in (0..dp.order.len()).rev() {
            let v = dp.order[i];
            let reach = dp.prefix_sets(v).pop().unwrap();
            let c = p.constraint_for(tree.color(v), tree.degree(v));
            dp.feasible[v] = [0, 1].map(|b| match c {
                None => !reach.is_empty(),
                Some(c) => reach.iter().any(|j| c.contains(j + b)),
            });
        }
        dp
    }

    fn allows(&self, item: Item) -> [bool; 2] {
        match item {
            Item::Free { .. } => [true, true],
            Item::Child { node, .. } => self.feasible[node],
        }
    }

    /// Reachable counts after each prefix of `v`'s items.
    fn prefix_sets(&self, v: usize) -> Vec<BitSet> {
        let m = self.items[v].len();
        let mut sets = Vec::with_capacity(m + 1);
        let mut cur = BitSet::new(m + 1);
        cur.insert(0);
        sets.push(cur.clone());
        for &item in &self.items[v] {
            let [zero, one] = self.allows(item);
            let mut next = if zero { cur.clone() } else { BitSet::new(m + 1) };
            if one {
                next.union_with(&cur.shifted_up(m + 1));
            }
            cur = next;
            sets.push(cur.clone());
        }
        sets
    }

    fn root_feasible(&self) -> bool {
        self.feasible[self.order[0]][0]
    }

    /// Deepest node whose subtree admits no labeling at all.
    fn witness(&self) -> usize {
        for &v in self.order.iter().rev() {
            let dead = if self.parent[v] == NONE {
                !self.feasible[v][0]
            } else {
                self.feasible[v] == [false, false]
            };
            if dead {
                return v;
            }
        }
        self.order[0]
    }

    /// Top-down reconstruction: each node takes the smallest admissible
    /// count and prefers label 0 on each item.
    fn reconstruct(&self, lab: &mut EdgeLabeling) {
        for &v in &self.order {
            let b = match self.parent_edge[v] {
                NONE => 0,
                e => usize::from(lab.get(e).expect("parent edge labeled first")),
            };
            let sets = self.prefix_sets(v);
            let reach = sets.last().unwrap();
            let c = self.p.constraint_for(self.tree.color(v), self.tree.degree(v));
            let mut j = reach
                .iter()
                .find(|&j| c.is_none_or(|c| c.contains(j + b)))
                .expect("feasible node has an admissible count");
            for (i, &item) in self.items[v].iter().enumerate().rev() {
                let [zero, one] = self.allows(item);
                let label = if zero && sets[i].contains(j) {
                    false
                } else {
                    debug_assert!(one && j >= 1 && sets[i].contains(j - 1));
                    j -= 1;
                    true
                };
                let edge = match item {
                    Item::Child { edge, .. } | Item::Free { edge } => edge,
                };
                lab.set(edge, label);
            }
        }
    }
}

pub fn dp_feasible(tree: &ColoredTree, p: &Problem) -> bool {
    Dp::run(tree, p, 0, &|_| true).root_feasible()
}

pub fn dp_solve(tree: &ColoredTree, p: &Problem) -> Result<EdgeLabeling, SolveError> {
    let dp = Dp::run(tree, p, 0, &|_| true);
    if !dp.root_feasible() {
        return Err(SolveError::Infeasible {
            witness: dp.witness(),
        });
    }
    let mut lab = EdgeLabeling::unset(tree.edge_count());
    dp.reconstruct(&mut lab);
    verify(tree, p, &lab).map_err(SolveError::VerifyFailed)?;
    Ok(lab)
}

/// Labels every edge incident to `component` (a connected node set) so that
/// all of its relevant nodes are satisfied; edges leaving the component are
/// treated as unconstrained on the far side.
pub fn dp_component(
    tree: &ColoredTree,
    p: &Problem,
    component: &[usize],
    lab: &mut EdgeLabeling,
) -> Result<(), SolveError> {
    let mut inside = vec![false; tree.len()];
    for &v in component {
        inside[v] = true;
    }
    let dp = Dp::run(tree, p, component[0], &|v| inside[v]);
    if !dp.root_feasible() {
        return Err(SolveError::Infeasible {
            witness: dp.witness(),
        });
    }
    dp.reconstruct(lab);
    Ok(())
}

pub const EXHAUSTIVE_MAX_EDGES: usize = 20;

/// Brute force over all labelings in increasing bitmask order.
pub fn exhaustive_solve(tree: &ColoredTree, p: &Problem) -> Result<EdgeLabeling, SolveError> {
    let m = tree.edge_count();
    if m > EXHAUSTIVE_MAX_EDGES {
        return Err(SolveError::TooLarge { edges: m });
    }
    let relevant: Vec<(usize, &crate::problem::ConstraintSet)> = (0..tree.len())
        .filter_map(|v| {
            p.constraint_for(tree.color(v), tree.degree(v))
                .map(|c| (v, c))
        })
        .collect();
    let masks: Vec<(u32, &crate::problem::ConstraintSet)> = relevant
        .iter()
        .map(|&(v, c)| {
            let mask = tree
                .neighbors(v)
                .iter()
                .fold(0u32, |acc, a| acc | (1 << a.edge));
            (mask, c)
        })
        .collect();
    for x in 0u32..(1u32 << m) {
        if masks
            .iter()
            .all(|&(mask, c)| c.contains((x & mask).count_ones() as usize))
        {
            let lab = EdgeLabeling::from_bools((0..m).map(|e| x >> e & 1 == 1).collect());
            return Ok(lab);
        }
    }
    Err(SolveError::Infeasible {
        witness: relevant.first().map_or(0, |r| r.0),
    })
}
