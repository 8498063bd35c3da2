//! Edge labelings, the verifier, the specialized solvers, and the automatic
//! dispatcher.

pub mod constant;
pub mod layered;
pub mod linear;

use std::fmt;

use thiserror::Error;

use crate::classify::{classify, select_solver, Plan, Strategy, Transform};
use crate::decompose::LayerDecomposition;
use crate::oracle::dp_solve;
use crate::problem::{Problem, StructureBudget};
use crate::tree::ColoredTree;

pub use constant::solve_constant;
pub use layered::{solve_factor, solve_quasi, solve_resilient};
pub use linear::solve_linear;

/// Per-edge label; `None` means not yet decided.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EdgeLabeling {
    labels: Vec<Option<bool>>,
}

impl EdgeLabeling {
    pub fn unset(edges: usize) -> Self {
        EdgeLabeling {
            labels: vec![None; edges],
        }
    }

    pub fn zeros(edges: usize) -> Self {
        EdgeLabeling {
            labels: vec![Some(false); edges],
        }
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        EdgeLabeling {
            labels: bits.into_iter().map(Some).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, e: usize) -> Option<bool> {
        self.labels[e]
    }

    pub fn set(&mut self, e: usize, label: bool) {
        self.labels[e] = Some(label);
    }

    pub fn is_total(&self) -> bool {
        self.labels.iter().all(Option::is_some)
    }

    /// Indices of edges labeled 1.
    pub fn selected(&self) -> Vec<usize> {
        (0..self.labels.len())
            .filter(|&e| self.labels[e] == Some(true))
            .collect()
    }

    pub fn complement(&self) -> Self {
        EdgeLabeling {
            labels: self.labels.iter().map(|l| l.map(|b| !b)).collect(),
        }
    }

    /// Number of incident edges of `v` labeled 1.
    pub fn ones_at(&self, tree: &ColoredTree, v: usize) -> usize {
        tree.neighbors(v)
            .iter()
            .filter(|a| self.labels[a.edge] == Some(true))
            .count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Unlabeled { edge: (usize, usize) },
    Count { node: usize, ones: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Unlabeled { edge: (u, v) } => {
                write!(f, "edge ({}, {}) is unlabeled", u + 1, v + 1)
            }
            Violation::Count { node, ones } => {
                write!(f, "node {} has {} selected edges", node + 1, ones)
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("problem is not in one of the constant-time forms")]
    NotConstantClass,
    #[error("solver parameters do not fit the problem: {0}")]
    BadParameters(String),
    #[error("no valid labeling exists (witness node {})", witness + 1)]
    Infeasible { witness: usize },
    #[error("completion impossible at node {}", node + 1)]
    CompletionInfeasible { node: usize },
    #[error("labeling failed verification at {} nodes", .0.len())]
    VerifyFailed(Vec<Violation>),
    #[error("exhaustive search is limited to 20 edges, instance has {edges}")]
    TooLarge { edges: usize },
}

/// Checks every relevant node; other nodes are unconstrained.
pub fn verify(tree: &ColoredTree, p: &Problem, lab: &EdgeLabeling) -> Result<(), Vec<Violation>> {
    assert_eq!(lab.len(), tree.edge_count(), "labeling size mismatch");
    let unlabeled: Vec<Violation> = (0..lab.len())
        .filter(|&e| lab.get(e).is_none())
        .map(|e| Violation::Unlabeled {
            edge: tree.edge(e),
        })
        .collect();
    if !unlabeled.is_empty() {
        return Err(unlabeled);
    }
    let bad: Vec<Violation> = (0..tree.len())
        .filter_map(|v| {
            let c = p.constraint_for(tree.color(v), tree.degree(v))?;
            let ones = lab.ones_at(tree, v);
            (!c.contains(ones)).then_some(Violation::Count { node: v, ones })
        })
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad)
    }
}

/// A labeling together with the decomposition a layered solver used.
#[derive(Clone, Debug)]
pub struct Solved {
    pub labeling: EdgeLabeling,
    pub decomposition: Option<LayerDecomposition>,
}

impl Solved {
    fn plain(labeling: EdgeLabeling) -> Self {
        Solved {
            labeling,
            decomposition: None,
        }
    }
}

fn checked(tree: &ColoredTree, p: &Problem, lab: EdgeLabeling) -> Result<EdgeLabeling, SolveError> {
    verify(tree, p, &lab).map_err(SolveError::VerifyFailed)?;
    Ok(lab)
}

/// Runs one strategy under a transformation and maps the labeling back.
pub fn run_plan(tree: &ColoredTree, p: &Problem, plan: &Plan) -> Result<Solved, SolveError> {
    let q = plan.transform.apply(p);
    let swapped;
    let t = if plan.transform.switch {
        swapped = tree.swapped_colors();
        &swapped
    } else {
        tree
    };
    let mut solved = match plan.strategy {
        Strategy::Constant => solve_constant(t, &q).map(Solved::plain)?,
        Strategy::Resilient { s, t: tt } => solve_resilient(t, &q, s, tt)?,
        Strategy::Factor { k, l } => solve_factor(t, &q, k, l)?,
        Strategy::Quasi { k, l } => solve_quasi(t, &q, k, l)?,
        Strategy::Linear => solve_linear(t, &q).map(Solved::plain)?,
        Strategy::Oracle => dp_solve(t, &q).map(Solved::plain)?,
    };
    if plan.transform.reverse {
        solved.labeling = solved.labeling.complement();
    }
    solved.labeling = checked(tree, p, solved.labeling)?;
    Ok(solved)
}

#[derive(Clone, Debug)]
pub struct AutoReport {
    pub solved: Solved,
    pub plan: Plan,
    /// Set when the planned solver failed and the oracle took over.
    pub fallback: Option<String>,
}

/// Classifies, picks a solver, runs it, and falls back to the oracle if the
/// chosen solver errors. Infeasibility is only reported by the oracle.
pub fn solve_auto(
    tree: &ColoredTree,
    p: &Problem,
    budget: &StructureBudget,
) -> Result<AutoReport, SolveError> {
    let class = classify(p, budget);
    let plan = select_solver(p, &class, budget);
    match run_plan(tree, p, &plan) {
        Ok(solved) => Ok(AutoReport {
            solved,
            plan,
            fallback: None,
        }),
        Err(e) if plan.strategy == Strategy::Oracle => Err(e),
        Err(e) => {
            let labeling = dp_solve(tree, p)?;
            Ok(AutoReport {
                solved: Solved::plain(labeling),
                plan,
                fallback: Some(e.to_string()),
            })
        }
    }
}

/// Solver names accepted by [`solve_named`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolverKind {
    Auto,
    Constant,
    Resilient,
    Factor,
    Quasi,
    Linear,
    Oracle,
}

impl std::str::FromStr for SolverKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "auto" => SolverKind::Auto,
            "constant" => SolverKind::Constant,
            "resilient" => SolverKind::Resilient,
            "factor" => SolverKind::Factor,
            "quasi" => SolverKind::Quasi,
            "linear" => SolverKind::Linear,
            "oracle" => SolverKind::Oracle,
            _ => return Err(format!("unknown solver `{s}`")),
        })
    }
}

/// Plan for a forced solver family: parameters are searched over the four
/// switch/reverse variants in a fixed order.
pub fn plan_for(kind: SolverKind, p: &Problem, budget: &StructureBudget) -> Option<Plan> {
    use crate::classify::{factor_params, quasi_params};
    use crate::problem::max_resiliency;
    let transforms = [(false, false), (false, true), (true, false), (true, true)]
        .map(|(switch, reverse)| Transform { switch, reverse });
    let strategy_in = |t: &Transform| -> Option<Strategy> {
        let q = t.apply(p);
        match kind {
            SolverKind::Resilient => {
                max_resiliency(&q.white, &q.black).map(|(s, t)| Strategy::Resilient { s, t })
            }
            SolverKind::Factor => factor_params(&q, budget.cap.max(q.d.max(q.delta)))
                .map(|(k, l)| Strategy::Factor { k, l }),
            SolverKind::Quasi => quasi_params(&q, budget.cap.max(q.d))
                .map(|(k, l)| Strategy::Quasi { k, l }),
            _ => None,
        }
    };
    let simple = |strategy| Plan {
        transform: Transform::default(),
        strategy,
        notes: vec![],
    };
    match kind {
        SolverKind::Auto => Some(select_solver(p, &classify(p, budget), budget)),
        SolverKind::Constant => Some(simple(Strategy::Constant)),
        SolverKind::Linear => Some(simple(Strategy::Linear)),
        SolverKind::Oracle => Some(simple(Strategy::Oracle)),
        _ => transforms.iter().find_map(|t| {
            strategy_in(t).map(|strategy| Plan {
                transform: *t,
                strategy,
                notes: vec![],
            })
        }),
    }
}

const SOLUTION_HEADER: &str = "binlab-sol v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("solution line {line}: {msg}")]
pub struct SolutionParseError {
    pub line: usize,
    pub msg: String,
}

pub fn write_solution(tree: &ColoredTree, lab: &EdgeLabeling) -> String {
    let mut out = format!("{SOLUTION_HEADER}\n");
    for e in lab.selected() {
        let (u, v) = tree.edge(e);
        out.push_str(&format!("s {} {}\n", u + 1, v + 1));
    }
    out
}

pub fn read_solution(tree: &ColoredTree, text: &str) -> Result<EdgeLabeling, SolutionParseError> {
    let err = |line, msg: &str| SolutionParseError {
        line,
        msg: msg.to_string(),
    };
    let mut lines = text.lines();
    if lines.next() != Some(SOLUTION_HEADER) {
        return Err(err(1, "missing `binlab-sol v1` header"));
    }
    let mut lab = EdgeLabeling::zeros(tree.edge_count());
    let mut prev: Option<usize> = None;
    for (i, line) in lines.enumerate() {
        let ln = i + 2;
        let f: Vec<&str> = line.split(' ').collect();
        let [tag, u, v] = f.as_slice() else {
            return Err(err(ln, "expected `s <u> <v>`"));
        };
        let (Ok(u), Ok(v)) = (u.parse::<usize>(), v.parse::<usize>()) else {
            return Err(err(ln, "bad node id"));
        };
        if *tag != "s" || u == 0 || v == 0 || u >= v || v > tree.len() {
            return Err(err(ln, "expected `s <u> <v>` with 1 <= u < v <= n"));
        }
        let e = tree
            .edge_index(u - 1, v - 1)
            .ok_or_else(|| err(ln, "not an edge of the tree"))?;
        if prev.is_some_and(|p| p >= e) {
            return Err(err(ln, "edges must be sorted and distinct"));
        }
        prev = Some(e);
        lab.set(e, true);
    }
    Ok(lab)
}
