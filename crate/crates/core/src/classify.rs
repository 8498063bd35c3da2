//! Complexity classification and solver selection.
//!
//! The broad class comes from a table of pattern pairs over the constraint
//! strings. Inside the logarithmic class, the base of the logarithm is decided
//! by a short sequence of structural tests.

use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

use crate::lang::{structural_simplicity, LangError, LanguageFamily, Simplicity};
use crate::problem::{max_resiliency, ConstraintSet, Problem, StructureBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Broad {
    Unsolvable,
    Constant,
    Log,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Fine {
    LogD,
    LogDelta,
    LogN,
}

impl Fine {
    fn swapped(self) -> Fine {
        match self {
            Fine::LogD => Fine::LogDelta,
            Fine::LogDelta => Fine::LogD,
            Fine::LogN => Fine::LogN,
        }
    }
}

impl fmt::Display for Broad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Broad::Unsolvable => "unsolvable",
            Broad::Constant => "constant",
            Broad::Log => "log",
            Broad::Linear => "linear",
        })
    }
}

impl fmt::Display for Fine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fine::LogD => "log_d",
            Fine::LogDelta => "log_delta",
            Fine::LogN => "log_n",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ComplexityClass {
    pub broad: Broad,
    pub fine: Option<Fine>,
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.fine {
            Some(fine) => write!(f, "{} {}", self.broad, fine),
            None => write!(f, "{}", self.broad),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("fine classification needs a log-class problem, got {0}")]
    NotLog(Broad),
    #[error("family is not structurally simple: degree {degree} has constraint {set}")]
    NotSimple { degree: usize, set: String },
    #[error(transparent)]
    Lang(#[from] LangError),
}

/// Pattern row: `0`/`1` literals, `*` any bit, `+` repeats the previous
/// symbol one or more times. `N` stands for "contains a 1".
struct Row {
    white: &'static str,
    black: &'static str,
    class: Broad,
}

const ROWS: &[Row] = &[
    Row { white: "100+", black: "0**+", class: Broad::Unsolvable },
    Row { white: "00+1", black: "**+0", class: Broad::Unsolvable },
    Row { white: "0**+", black: "100+", class: Broad::Unsolvable },
    Row { white: "**+0", black: "00+1", class: Broad::Unsolvable },
    Row { white: "000+", black: "***+", class: Broad::Unsolvable },
    Row { white: "***+", black: "000+", class: Broad::Unsolvable },
    Row { white: "N", black: "111+", class: Broad::Constant },
    Row { white: "111+", black: "N", class: Broad::Constant },
    Row { white: "1**+", black: "1**+", class: Broad::Constant },
    Row { white: "**+1", black: "**+1", class: Broad::Constant },
    Row { white: "10+1", black: "010", class: Broad::Linear },
    Row { white: "010", black: "10+1", class: Broad::Linear },
    Row { white: "0+1*", black: "*10+", class: Broad::Linear },
    Row { white: "*10+", black: "0+1*", class: Broad::Linear },
];

fn compile(pattern: &str) -> Regex {
    let body = if pattern == "N" {
        ".*1.*".to_string()
    } else {
        pattern.replace('*', "[01]")
    };
    Regex::new(&format!("^(?:{body})$")).expect("row pattern")
}

fn row_table() -> &'static [(Regex, Regex, Broad)] {
    static TABLE: OnceLock<Vec<(Regex, Regex, Broad)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        ROWS.iter()
            .map(|r| (compile(r.white), compile(r.black), r.class))
            .collect()
    })
}

/// Broad class of the pair of constraint strings.
pub fn classify_broad(w: &ConstraintSet, b: &ConstraintSet) -> Broad {
    let (ws, bs) = (w.to_bits(), b.to_bits());
    row_table()
        .iter()
        .find(|(rw, rb, _)| rw.is_match(&ws) && rb.is_match(&bs))
        .map_or(Broad::Log, |r| r.2)
}

/// One answered question of the fine decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub question: String,
    pub answer: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FineReport {
    pub fine: Fine,
    /// True when the roles were exchanged to get `d >= delta`.
    pub switched: bool,
    pub path: Vec<Decision>,
    pub warnings: Vec<String>,
}

fn zero_framed(c: &ConstraintSet) -> bool {
    !c.contains(0) && !c.contains(c.degree())
}

/// Final test: one constraint hugs the right end while the other hugs the
/// left end, or the mirror image.
fn hugging_pair(w: &ConstraintSet, b: &ConstraintSet, cap: usize) -> bool {
    let right = |c: &ConstraintSet| c.elements().iter().all(|&x| x + cap >= c.degree());
    let left = |c: &ConstraintSet| c.elements().iter().all(|&x| x <= cap);
    (right(w) && left(b)) || (left(w) && right(b))
}

fn tension_pattern(w: &ConstraintSet, b: &ConstraintSet) -> bool {
    let zeros_then_ones = Regex::new("^0+1+$").unwrap();
    let ones_then_zeros = Regex::new("^1+0+$").unwrap();
    let (ws, bs) = (w.to_bits(), b.to_bits());
    (zeros_then_ones.is_match(&ws) && ones_then_zeros.is_match(&bs))
        || (ones_then_zeros.is_match(&ws) && zeros_then_ones.is_match(&bs))
}

/// Base of the logarithm for a log-class problem.
pub fn classify_fine(p: &Problem, budget: &StructureBudget) -> Result<FineReport, ClassifyError> {
    let broad = classify_broad(&p.white, &p.black);
    if broad != Broad::Log {
        return Err(ClassifyError::NotLog(broad));
    }
    let switched = p.d < p.delta;
    let q = if switched { p.switch() } else { p.clone() };
    let c = budget.cap;
    let mut path = Vec::new();
    let mut ask = |question: String, answer: bool| {
        path.push(Decision { question, answer });
        answer
    };
    let fine = if !ask(format!("is W(d) {c}-edge-good?"), q.white.is_edge_good(c)) {
        Fine::LogD
    } else if !ask("is B(delta) of the form 0b'0?".into(), zero_framed(&q.black)) {
        Fine::LogD
    } else if !ask(format!("is B(delta) {c}-edge-good?"), q.black.is_edge_good(c)) {
        Fine::LogDelta
    } else if ask(
        format!("do W and B hug opposite ends within {c}?"),
        hugging_pair(&q.white, &q.black, c),
    ) {
        Fine::LogN
    } else {
        Fine::LogDelta
    };
    let mut warnings = Vec::new();
    if tension_pattern(&q.white, &q.black) {
        warnings.push(format!(
            "W={} B={} has the 0^a1^k / 1^l0^b shape, for which a separate lower bound \
             gives Omega(log n) or unsolvability; reported class follows the decision procedure",
            q.white, q.black
        ));
    }
    Ok(FineReport {
        fine: if switched { fine.swapped() } else { fine },
        switched,
        path,
        warnings,
    })
}

pub fn classify(p: &Problem, budget: &StructureBudget) -> ComplexityClass {
    let broad = classify_broad(&p.white, &p.black);
    let fine = (broad == Broad::Log).then(|| {
        classify_fine(p, budget)
            .expect("broad class is log")
            .fine
    });
    ComplexityClass { broad, fine }
}

/// Derives a budget covering both families over degrees up to `probe`: the
/// smaller epsilon and the larger cap.
pub fn family_budget(
    white: &LanguageFamily,
    black: &LanguageFamily,
    probe: usize,
    fallback: &StructureBudget,
) -> Result<StructureBudget, ClassifyError> {
    let mut eps = None;
    let mut cap = 0;
    for fam in [white, black] {
        match structural_simplicity(fam, probe, fallback)? {
            Simplicity::Simple {
                epsilon, cap: c, ..
            } => {
                eps = Some(eps.map_or(epsilon, |e: num_rational::Ratio<u32>| e.min(epsilon)));
                cap = cap.max(c);
            }
            Simplicity::NotSimple { degree, set, .. } => {
                return Err(ClassifyError::NotSimple { degree, set })
            }
        }
    }
    Ok(StructureBudget {
        epsilon: eps.unwrap_or(fallback.epsilon),
        cap,
    })
}

/// Concrete solver family chosen by [`select_solver`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Constant,
    Resilient { s: usize, t: usize },
    Factor { k: usize, l: usize },
    Quasi { k: usize, l: usize },
    Linear,
    Oracle,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Constant => write!(f, "constant"),
            Strategy::Resilient { s, t } => write!(f, "resilient({s},{t})"),
            Strategy::Factor { k, l } => write!(f, "factor({k},{l})"),
            Strategy::Quasi { k, l } => write!(f, "quasi({k},{l})"),
            Strategy::Linear => write!(f, "linear"),
            Strategy::Oracle => write!(f, "oracle-fallback"),
        }
    }
}

/// `switch` solves on the color-swapped tree; `reverse` complements labels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Transform {
    pub switch: bool,
    pub reverse: bool,
}

impl Transform {
    pub fn apply(&self, p: &Problem) -> Problem {
        let q = if self.switch { p.switch() } else { p.clone() };
        if self.reverse {
            q.reverse()
        } else {
            q
        }
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.switch, self.reverse) {
            (false, false) => write!(f, "identity"),
            (true, false) => write!(f, "switch"),
            (false, true) => write!(f, "reverse"),
            (true, true) => write!(f, "switch+reverse"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub transform: Transform,
    pub strategy: Strategy,
    pub notes: Vec<String>,
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.transform == Transform::default() {
            write!(f, "{}", self.strategy)
        } else {
            write!(f, "{} via {}", self.strategy, self.transform)
        }
    }
}

/// Factor parameters: small `k` in W and small `l` in B leaving room on both
/// sides.
pub fn factor_params(q: &Problem, cap: usize) -> Option<(usize, usize)> {
    let k = (1..=cap.min(q.d - 1)).find(|&k| q.white.contains(k))?;
    let l = (1..=cap.min(q.delta - 1)).find(|&l| q.black.contains(l))?;
    Some((k, l))
}

/// Quasi-orientation parameters: small `k` in W with `d - k >= 2`, and
/// `{0, delta - l}` inside B with `delta - l >= 1` as large as possible.
pub fn quasi_params(q: &Problem, cap: usize) -> Option<(usize, usize)> {
    if q.d < 3 || !q.black.contains(0) {
        return None;
    }
    let k = (1..=cap.min(q.d - 2)).find(|&k| q.white.contains(k))?;
    let x = q.black.max().filter(|&x| x >= 1)?;
    Some((k, q.delta - x))
}

fn with_transform(
    p: &Problem,
    base: Transform,
    cap: usize,
    find: fn(&Problem, usize) -> Option<(usize, usize)>,
) -> Option<(Transform, usize, usize)> {
    [false, true].into_iter().find_map(|rev| {
        let t = Transform {
            switch: base.switch,
            reverse: rev,
        };
        find(&t.apply(p), cap).map(|(a, b)| (t, a, b))
    })
}

/// Chooses a solver, following the case analysis of the logarithmic
/// classification; anything not covered goes to the exact oracle.
pub fn select_solver(p: &Problem, class: &ComplexityClass, budget: &StructureBudget) -> Plan {
    let plan = |transform, strategy, notes: Vec<String>| Plan {
        transform,
        strategy,
        notes,
    };
    let id = Transform::default();
    match class.broad {
        Broad::Unsolvable => {
            return plan(id, Strategy::Oracle, vec!["unsolvable class".into()]);
        }
        Broad::Constant => return plan(id, Strategy::Constant, vec![]),
        Broad::Linear => return plan(id, Strategy::Linear, vec![]),
        Broad::Log => {}
    }
    let cap = budget.cap;
    let norm = Transform {
        switch: p.d < p.delta,
        reverse: false,
    };
    let q = norm.apply(p);
    let resilient = |t: Transform| {
        max_resiliency(&q.white, &q.black).map(|(s, tt)| Plan {
            transform: t,
            strategy: Strategy::Resilient { s, t: tt },
            notes: vec![],
        })
    };

    if q.white.is_center_good(budget.epsilon) {
        if let Some(pl) = resilient(norm) {
            return pl;
        }
    }
    let (s_b, t_b) = (q.black.contains(0), q.black.contains(q.delta));
    if s_b || t_b {
        if let Some((t, k, l)) = with_transform(p, norm, cap, quasi_params) {
            return plan(t, Strategy::Quasi { k, l }, vec![]);
        }
    } else {
        if q.black.is_center_good(budget.epsilon) {
            if let Some(pl) = resilient(norm) {
                return pl;
            }
        }
        if let Some((t, k, l)) = with_transform(p, norm, cap, factor_params) {
            return plan(t, Strategy::Factor { k, l }, vec![]);
        }
        if class.fine == Some(Fine::LogN) {
            return plan(
                id,
                Strategy::Oracle,
                vec!["log_n class: no specialized solver, using the exact oracle".into()],
            );
        }
        let swapped = Transform {
            switch: !norm.switch,
            reverse: false,
        };
        if let Some((t, k, l)) = with_transform(p, swapped, cap, quasi_params) {
            return plan(t, Strategy::Quasi { k, l }, vec![]);
        }
    }
    if let Some(pl) = resilient(norm) {
        return pl;
    }
    plan(
        id,
        Strategy::Oracle,
        vec!["no specialized solver applies".into()],
    )
}
