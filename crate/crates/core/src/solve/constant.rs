use super::{checked, EdgeLabeling, SolveError};
use crate::problem::Problem;
use crate::tree::{Color, ColoredTree};

/// Zero-round solutions for the four constant forms: all zeros, all ones,
/// or one side picking a fixed count while the other side accepts anything.
pub fn solve_constant(tree: &ColoredTree, p: &Problem) -> Result<EdgeLabeling, SolveError> {
    let m = tree.edge_count();
    let lab = if p.white.contains(0) && p.black.contains(0) {
        EdgeLabeling::zeros(m)
    } else if p.white.contains(p.d) && p.black.contains(p.delta) {
        EdgeLabeling::zeros(m).complement()
    } else if p.white.is_full() && !p.black.is_empty() {
        pick_fixed(tree, p, Color::Black, p.black.min().unwrap())
    } else if p.black.is_full() && !p.white.is_empty() {
        pick_fixed(tree, p, Color::White, p.white.min().unwrap())
    } else {
        return Err(SolveError::NotConstantClass);
    };
    checked(tree, p, lab)
}

/// Each relevant node of `color` selects its `k` edges with smallest
/// neighbor ids; the other side is unconstrained.
fn pick_fixed(tree: &ColoredTree, p: &Problem, color: Color, k: usize) -> EdgeLabeling {
    let mut lab = EdgeLabeling::zeros(tree.edge_count());
    for v in 0..tree.len() {
        if tree.color(v) == color && p.constraint_for(color, tree.degree(v)).is_some() {
            for a in &tree.neighbors(v)[..k] {
                lab.set(a.edge, true);
            }
        }
    }
    lab
}
