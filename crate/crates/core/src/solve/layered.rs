//! Solvers that label edges layer by layer, from the last layer of a
//! decomposition down to the first.

use super::{checked, EdgeLabeling, SolveError, Solved};
use crate::decompose::{arc_decompose, deg_decompose, LayerDecomposition};
use crate::problem::{complete_node, max_resiliency, Problem};
use crate::tree::{Adj, Color, ColoredTree};

/// What a node sees when its layer is processed.
struct NodeView<'a> {
    node: usize,
    relevant: bool,
    color: Color,
    /// incident edges labeled 1 so far
    ones: usize,
    /// unlabeled incident edges, lowest layer first (ties by id)
    free: &'a [Adj],
}

/// Same-layer edges get 0, then each layer from the top labels all of its
/// remaining incident edges; `rule` returns how many of `free` (in order)
/// get a 1, or an explicit label per free edge.
fn sweep(
    tree: &ColoredTree,
    p: &Problem,
    dec: &LayerDecomposition,
    mut rule: impl FnMut(&NodeView) -> Result<Vec<bool>, SolveError>,
) -> Result<EdgeLabeling, SolveError> {
    let mut lab = EdgeLabeling::unset(tree.edge_count());
    for (e, &(u, v)) in tree.edges().iter().enumerate() {
        if dec.layer_of[u] == dec.layer_of[v] {
            lab.set(e, false);
        }
    }
    let layers = dec.layers();
    let mut free: Vec<Adj> = Vec::new();
    for layer in layers.iter().rev() {
        for &v in layer {
            free.clear();
            free.extend(
                tree.neighbors(v)
                    .iter()
                    .filter(|a| lab.get(a.edge).is_none()),
            );
            free.sort_by_key(|a| (dec.layer_of[a.node], a.node));
            let view = NodeView {
                node: v,
                relevant: p.constraint_for(tree.color(v), tree.degree(v)).is_some(),
                color: tree.color(v),
                ones: lab.ones_at(tree, v),
                free: &free,
            };
            let labels = rule(&view)?;
            debug_assert_eq!(labels.len(), free.len());
            for (a, &b) in free.iter().zip(&labels) {
                lab.set(a.edge, b);
            }
        }
    }
    Ok(lab)
}

/// First `count` free edges get 1, the rest 0.
fn first_ones(free: usize, count: usize) -> Vec<bool> {
    (0..free).map(|i| i < count).collect()
}

/// Relevant nodes take `target - ones` lowest-layer free edges; a node that
/// cannot is treated as irrelevant and zero-fills.
fn pick_lowest(view: &NodeView, target: usize) -> Vec<bool> {
    let n = view.free.len();
    if !view.relevant || view.ones > target || target - view.ones > n {
        return vec![false; n];
    }
    first_ones(n, target - view.ones)
}

/// Resilient solver on `DEG(s, t)`: every relevant node completes its count
/// with the smallest admissible value, using the free edges to the smallest
/// neighbor ids.
pub fn solve_resilient(
    tree: &ColoredTree,
    p: &Problem,
    s: usize,
    t: usize,
) -> Result<Solved, SolveError> {
    if s == 0 || t == 0 || s >= p.d || t >= p.delta {
        return Err(SolveError::BadParameters(format!(
            "need 1 <= s < d and 1 <= t < delta, got s={s}, t={t}"
        )));
    }
    match max_resiliency(&p.white, &p.black) {
        Some((ms, mt)) if s <= ms && t <= mt => {}
        _ => {
            return Err(SolveError::BadParameters(format!(
                "problem is not ({s},{t})-resilient"
            )))
        }
    }
    let dec = deg_decompose(tree, s, t);
    let lab = sweep(tree, p, &dec, |view| {
        let n = view.free.len();
        if !view.relevant {
            return Ok(vec![false; n]);
        }
        let (_, c) = p.side(view.color);
        let x = complete_node(c, view.ones, n)
            .ok_or(SolveError::CompletionInfeasible { node: view.node })?;
        let mut by_id: Vec<usize> = (0..n).collect();
        by_id.sort_by_key(|&i| view.free[i].node);
        let mut labels = vec![false; n];
        for &i in &by_id[..x - view.ones] {
            labels[i] = true;
        }
        Ok(labels)
    })?;
    Ok(Solved {
        labeling: checked(tree, p, lab)?,
        decomposition: Some(dec),
    })
}

/// `(k, l)`-factor on `ARC(1, min(d - k, delta - l) + 1)`. W and B only need
/// to contain `k` and `l`.
pub fn solve_factor(tree: &ColoredTree, p: &Problem, k: usize, l: usize) -> Result<Solved, SolveError> {
    if k == 0 || l == 0 || k >= p.d || l >= p.delta || !p.white.contains(k) || !p.black.contains(l)
    {
        return Err(SolveError::BadParameters(format!(
            "factor needs 1 <= k < d, 1 <= l < delta, k in W, l in B; got k={k}, l={l}"
        )));
    }
    let dec = arc_decompose(tree, 1, (p.d - k).min(p.delta - l) + 1);
    let lab = sweep(tree, p, &dec, |view| {
        let target = match view.color {
            Color::White => k,
            Color::Black => l,
        };
        Ok(pick_lowest(view, target))
    })?;
    Ok(Solved {
        labeling: checked(tree, p, lab)?,
        decomposition: Some(dec),
    })
}

/// Quasi-`(k, l)`-orientation on `ARC(2, d - k + 1)`. W must contain `k`
/// and B must contain `0` and `delta - l`.
pub fn solve_quasi(tree: &ColoredTree, p: &Problem, k: usize, l: usize) -> Result<Solved, SolveError> {
    if k == 0
        || k + 2 > p.d
        || l >= p.delta
        || !p.white.contains(k)
        || !p.black.contains(0)
        || !p.black.contains(p.delta - l)
    {
        return Err(SolveError::BadParameters(format!(
            "quasi needs 1 <= k <= d-2, l < delta, k in W, {{0, delta-l}} in B; got k={k}, l={l}"
        )));
    }
    let dec = arc_decompose(tree, 2, p.d - k + 1);
    let lab = sweep(tree, p, &dec, |view| {
        let n = view.free.len();
        Ok(match view.color {
            Color::White => pick_lowest(view, k),
            Color::Black if view.relevant && view.ones == 1 && n >= l => {
                // keep the l lowest-layer edges at 0, select everything else
                (0..n).map(|i| i >= l).collect()
            }
            Color::Black => vec![false; n],
        })
    })?;
    Ok(Solved {
        labeling: checked(tree, p, lab)?,
        decomposition: Some(dec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::verify;
    use crate::tree::{generate, TreeKind};

    fn regular(white: usize, black: usize, n: usize, seed: u64) -> ColoredTree {
        let t = generate(
            TreeKind::Regular {
                white,
                black,
                depth: None,
            },
            n,
            0,
        )
        .unwrap();
        // shuffle ids so tie-breaking is exercised
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        t.relabeled(&perm)
    }

    #[test]
    fn resilient_splitting() {
        let star = generate(TreeKind::Star { center: Color::White }, 6, 0).unwrap();
        let p = Problem::from_sets(5, 3, &[1, 2, 3, 4], &[1, 2]).unwrap();
        let lab = solve_resilient(&star, &p, 4, 2).unwrap().labeling;
        let ones = lab.ones_at(&star, 0);
        assert!((1..=4).contains(&ones));

        let edge = generate(TreeKind::Path, 2, 0).unwrap();
        let s = solve_resilient(&edge, &p, 4, 2).unwrap();
        assert_eq!(s.labeling, EdgeLabeling::zeros(1));

        for seed in 0..20 {
            let t = generate(TreeKind::Random { cap: 6 }, 300, seed).unwrap();
            let p = Problem::from_sets(4, 3, &[1, 2, 3], &[1, 2]).unwrap();
            solve_resilient(&t, &p, 3, 2).unwrap();
        }
    }

    #[test]
    fn factor_regular() {
        let p = Problem::from_sets(5, 3, &[2], &[1]).unwrap();
        for seed in 0..100 {
            let t = regular(5, 3, 400, seed);
            let s = solve_factor(&t, &p, 2, 1).unwrap();
            assert_eq!(verify(&t, &p, &s.labeling), Ok(()));
        }
        let matching = Problem::from_sets(3, 2, &[1], &[1]).unwrap();
        assert!(solve_factor(&generate(TreeKind::Path, 3, 0).unwrap(), &matching, 2, 1).is_err());
    }

    #[test]
    fn quasi_regular() {
        let p = Problem::from_sets(10, 3, &[1], &[0, 2]).unwrap();
        for seed in 0..100 {
            let t = regular(10, 3, 500, seed);
            solve_quasi(&t, &p, 1, 1).unwrap();
        }
        let star = generate(TreeKind::Star { center: Color::White }, 4, 0).unwrap();
        let q = Problem::from_sets(3, 2, &[1], &[0, 1]).unwrap();
        let lab = solve_quasi(&star, &q, 1, 1).unwrap().labeling;
        assert_eq!(lab.ones_at(&star, 0), 1);
    }

    #[test]
    fn quasi_on_random_trees() {
        for (d, delta, k, l) in [(4, 3, 1, 1), (5, 4, 2, 2), (6, 3, 1, 0), (5, 5, 3, 1)] {
            let mut black = vec![0];
            black.push(delta - l);
            let p = Problem::from_sets(d, delta, &[k], &black).unwrap();
            for seed in 0..60 {
                let t = generate(TreeKind::Random { cap: d + 1 }, 200, seed).unwrap();
                solve_quasi(&t, &p, k, l).unwrap();
            }
        }
    }

    #[test]
    fn factor_on_random_trees() {
        for (d, delta, k, l) in [(3, 3, 1, 1), (4, 3, 2, 1), (5, 5, 2, 3)] {
            let p = Problem::from_sets(d, delta, &[k], &[l]).unwrap();
            for seed in 0..60 {
                let t = generate(TreeKind::Random { cap: d.max(delta) + 1 }, 200, seed).unwrap();
                solve_factor(&t, &p, k, l).unwrap();
            }
        }
    }
}
