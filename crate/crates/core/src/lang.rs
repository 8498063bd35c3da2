//! Degree-parameterized constraint families.
//!
//! A family assigns a constraint string of length `k + 1` to each degree `k`.
//! Three representations are supported: an explicit generator, a finite union
//! of paired loops `u v^n w x^n y`, and a context-free grammar enumerated up to
//! a length bound.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use thiserror::Error;

use crate::problem::{ConstraintSet, StructureBudget};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LangError {
    #[error("bad paired loop `{0}` (expected u:v:w:x:y over {{0,1}} with `-` for empty)")]
    BadLoop(String),
    #[error("family is not thin: two words of length {length}: {first} and {second}")]
    Ambiguous {
        length: usize,
        first: String,
        second: String,
    },
    #[error("family defines no constraint at degree {0}")]
    UndefinedDegree(usize),
    #[error("grammar line {line}: {msg}")]
    Grammar { line: usize, msg: String },
    #[error("length {length} exceeds the grammar enumeration bound {bound}")]
    BeyondBound { length: usize, bound: usize },
    #[error("grammar enumeration produced more than {cap} words for {symbol} at length {length}")]
    EnumerationCap {
        symbol: String,
        length: usize,
        cap: usize,
    },
}

/// The language `{ u v^n w x^n y : n >= 0 }`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairedLoop {
    pub u: String,
    pub v: String,
    pub w: String,
    pub x: String,
    pub y: String,
}

impl PairedLoop {
    pub fn new(u: &str, v: &str, w: &str, x: &str, y: &str) -> Result<Self, LangError> {
        let parts = [u, v, w, x, y];
        if parts
            .iter()
            .any(|p| !p.bytes().all(|b| b == b'0' || b == b'1'))
        {
            return Err(LangError::BadLoop(parts.join(":")));
        }
        Ok(PairedLoop {
            u: u.into(),
            v: v.into(),
            w: w.into(),
            x: x.into(),
            y: y.into(),
        })
    }

    fn parts(&self) -> [&str; 5] {
        [&self.u, &self.v, &self.w, &self.x, &self.y]
    }

    /// Length of the word with `n = 0`.
    pub fn base_len(&self) -> usize {
        self.u.len() + self.w.len() + self.y.len()
    }

    pub fn step(&self) -> usize {
        self.v.len() + self.x.len()
    }

    pub fn word(&self, n: usize) -> String {
        let mut s = String::with_capacity(self.base_len() + n * self.step());
        s.push_str(&self.u);
        for _ in 0..n {
            s.push_str(&self.v);
        }
        s.push_str(&self.w);
        for _ in 0..n {
            s.push_str(&self.x);
        }
        s.push_str(&self.y);
        s
    }

    pub fn word_at_length(&self, length: usize) -> Option<String> {
        let (base, step) = (self.base_len(), self.step());
        if length < base {
            return None;
        }
        match step {
            0 => (length == base).then(|| self.word(0)),
            _ => ((length - base) % step == 0).then(|| self.word((length - base) / step)),
        }
    }
}

impl fmt::Display for PairedLoop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |s: &str| if s.is_empty() { "-".to_string() } else { s.to_string() };
        let p = self.parts().map(show);
        write!(f, "{}", p.join(":"))
    }
}

impl FromStr for PairedLoop {
    type Err = LangError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let fields: Vec<&str> = s.trim().split(':').collect();
        if fields.len() != 5 {
            return Err(LangError::BadLoop(s.to_string()));
        }
        let f: Vec<&str> = fields
            .iter()
            .map(|p| if *p == "-" { "" } else { *p })
            .collect();
        if fields.iter().any(|p| p.is_empty()) {
            return Err(LangError::BadLoop(s.to_string()));
        }
        PairedLoop::new(f[0], f[1], f[2], f[3], f[4]).map_err(|_| LangError::BadLoop(s.to_string()))
    }
}

/// Parses a `;`-separated loop list.
pub fn parse_loops(s: &str) -> Result<Vec<PairedLoop>, LangError> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect()
}

pub fn format_loops(loops: &[PairedLoop]) -> String {
    loops
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

type Generator = Arc<dyn Fn(usize) -> Option<ConstraintSet> + Send + Sync>;

/// A family given directly as a function of the degree.
#[derive(Clone)]
pub struct ExplicitFamily {
    pub name: String,
    generator: Generator,
}

impl ExplicitFamily {
    pub fn new(
        name: &str,
        generator: impl Fn(usize) -> Option<ConstraintSet> + Send + Sync + 'static,
    ) -> Self {
        ExplicitFamily {
            name: name.to_string(),
            generator: Arc::new(generator),
        }
    }

    pub fn from_table(name: &str, table: BTreeMap<usize, ConstraintSet>) -> Self {
        Self::new(name, move |k| table.get(&k).cloned())
    }

    pub fn at(&self, k: usize) -> Option<ConstraintSet> {
        (self.generator)(k)
    }
}

impl fmt::Debug for ExplicitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExplicitFamily({})", self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Symbol {
    T(u8),
    N(usize),
}

/// A context-free grammar over {0,1}, enumerated by length up to `bound`.
#[derive(Clone, Debug)]
pub struct Grammar {
    bound: usize,
    /// words of the start symbol, indexed by length
    table: Vec<Vec<String>>,
}

pub const DEFAULT_GRAMMAR_BOUND: usize = 512;
const WORDS_PER_CELL: usize = 256;

impl Grammar {
    /// Parses `A -> symbols` lines (alternatives separated by `|`, `-` for
    /// the empty word) and enumerates the start symbol `S` up to `bound`.
    pub fn parse(text: &str, bound: usize) -> Result<Self, LangError> {
        let mut names: Vec<String> = vec!["S".into()];
        let mut index: HashMap<String, usize> = HashMap::from([("S".to_string(), 0)]);
        let mut intern = |name: &str, names: &mut Vec<String>| {
            *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                names.len() - 1
            })
        };
        let mut rules = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| LangError::Grammar {
                line: ln + 1,
                msg: msg.to_string(),
            };
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| err("expected `->`"))?;
            let lhs = lhs.trim();
            if lhs.is_empty() || lhs.contains(char::is_whitespace) {
                return Err(err("bad nonterminal"));
            }
            let head = intern(lhs, &mut names);
            for alt in rhs.split('|') {
                let mut body = Vec::new();
                for tok in alt.split_whitespace() {
                    if tok == "-" {
                        continue;
                    }
                    if tok.bytes().all(|b| b == b'0' || b == b'1') {
                        body.extend(tok.bytes().map(Symbol::T));
                    } else {
                        body.push(Symbol::N(intern(tok, &mut names)));
                    }
                }
                rules.push((head, body));
            }
        }
        if rules.is_empty() {
            return Err(LangError::Grammar {
                line: 0,
                msg: "no productions".into(),
            });
        }
        let table = enumerate(&names, &rules, bound)?;
        Ok(Grammar { bound, table })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn words_at_length(&self, length: usize) -> Result<&[String], LangError> {
        self.table
            .get(length)
            .map(Vec::as_slice)
            .ok_or(LangError::BeyondBound {
                length,
                bound: self.bound,
            })
    }
}

/// Length-ordered fixpoint: all words of length `< L` are final before
/// length `L` is computed, and length `L` is iterated to a fixpoint to cover
/// nullable and unit productions.
fn enumerate(
    names: &[String],
    rules: &[(usize, Vec<Symbol>)],
    bound: usize,
) -> Result<Vec<Vec<String>>, LangError> {
    let nt = names.len();
    // words[a][len]
    let mut words: Vec<Vec<BTreeSet<String>>> = vec![vec![BTreeSet::new(); bound + 1]; nt];
    let nullable = {
        let mut nul = vec![false; nt];
        loop {
            let mut changed = false;
            for (head, body) in rules {
                if !nul[*head]
                    && body.iter().all(|s| matches!(s, Symbol::N(b) if nul[*b]))
                {
                    nul[*head] = true;
                    changed = true;
                }
            }
            if !changed {
                break nul;
            }
        }
    };
    let min_len = |s: &Symbol| match s {
        Symbol::T(_) => 1,
        Symbol::N(b) => usize::from(!nullable[*b]),
    };
    for len in 0..=bound {
        loop {
            let mut changed = false;
            for (head, body) in rules {
                let mut suffix_min = vec![0usize; body.len() + 1];
                for j in (0..body.len()).rev() {
                    suffix_min[j] = suffix_min[j + 1] + min_len(&body[j]);
                }
                if suffix_min[0] > len {
                    continue;
                }
                // prefixes keyed by consumed length
                let mut partial: BTreeMap<usize, BTreeSet<String>> =
                    BTreeMap::from([(0, BTreeSet::from([String::new()]))]);
                for (j, sym) in body.iter().enumerate() {
                    let mut next: BTreeMap<usize, BTreeSet<String>> = BTreeMap::new();
                    let last = j + 1 == body.len();
                    for (&used, prefixes) in &partial {
                        let room = len - used;
                        let range: Vec<usize> = if last {
                            vec![room]
                        } else {
                            (0..=room.saturating_sub(suffix_min[j + 1])).collect()
                        };
                        for take in range {
                            let pieces: Vec<String> = match sym {
                                Symbol::T(t) if take == 1 => vec![(*t as char).to_string()],
                                Symbol::T(_) => continue,
                                Symbol::N(b) => words[*b][take].iter().cloned().collect(),
                            };
                            if pieces.is_empty() {
                                continue;
                            }
                            let slot = next.entry(used + take).or_default();
                            for p in prefixes {
                                for piece in &pieces {
                                    slot.insert(format!("{p}{piece}"));
                                }
                            }
                        }
                    }
                    partial = next;
                    if partial.is_empty() {
                        break;
                    }
                }
                if let Some(done) = partial.remove(&len) {
                    let cell = &mut words[*head][len];
                    for w in done {
                        if cell.insert(w) {
                            changed = true;
                        }
                    }
                    if cell.len() > WORDS_PER_CELL {
                        return Err(LangError::EnumerationCap {
                            symbol: names[*head].clone(),
                            length: len,
                            cap: WORDS_PER_CELL,
                        });
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }
    Ok(words[0].iter().map(|s| s.iter().cloned().collect()).collect())
}

/// A degree-parameterized constraint family.
#[derive(Clone, Debug)]
pub enum LanguageFamily {
    Explicit(ExplicitFamily),
    Loops(Vec<PairedLoop>),
    Grammar(Grammar),
}

impl LanguageFamily {
    pub fn loops(text: &str) -> Result<Self, LangError> {
        Ok(LanguageFamily::Loops(parse_loops(text)?))
    }

    /// The unique word of this length, if any.
    pub fn word_at_length(&self, length: usize) -> Result<Option<String>, LangError> {
        match self {
            LanguageFamily::Explicit(e) => {
                Ok(length.checked_sub(1).and_then(|k| e.at(k)).map(|c| c.to_bits()))
            }
            LanguageFamily::Loops(loops) => {
                let mut found: Option<String> = None;
                for l in loops {
                    if let Some(w) = l.word_at_length(length) {
                        match &found {
                            Some(prev) if *prev != w => {
                                return Err(LangError::Ambiguous {
                                    length,
                                    first: prev.clone(),
                                    second: w,
                                })
                            }
                            Some(_) => {}
                            None => found = Some(w),
                        }
                    }
                }
                Ok(found)
            }
            LanguageFamily::Grammar(g) => match g.words_at_length(length)? {
                [] => Ok(None),
                [w] => Ok(Some(w.clone())),
                [a, b, ..] => Err(LangError::Ambiguous {
                    length,
                    first: a.clone(),
                    second: b.clone(),
                }),
            },
        }
    }

    pub fn set_at_degree(&self, k: usize) -> Result<ConstraintSet, LangError> {
        if let LanguageFamily::Explicit(e) = self {
            return e.at(k).ok_or(LangError::UndefinedDegree(k));
        }
        let word = self
            .word_at_length(k + 1)?
            .ok_or(LangError::UndefinedDegree(k))?;
        Ok(ConstraintSet::from_bits(&word).expect("family words are binary"))
    }

    /// Degrees `k` in `lo..=hi` at which the family has a word.
    fn defined_degrees(&self, lo: usize, hi: usize) -> Result<Vec<(usize, ConstraintSet)>, LangError> {
        let mut out = Vec::new();
        for k in lo..=hi {
            match self.set_at_degree(k) {
                Ok(c) => out.push((k, c)),
                Err(LangError::UndefinedDegree(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(out)
    }
}

/// Two distinct words of one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinnessCounterexample {
    pub length: usize,
    pub first: String,
    pub second: String,
}

/// Compares words length by length for `3 <= length <= max_length`.
pub fn check_thin(
    family: &LanguageFamily,
    max_length: usize,
) -> Result<(), ThinnessCounterexample> {
    for length in 3..=max_length {
        match family.word_at_length(length) {
            Err(LangError::Ambiguous {
                length,
                first,
                second,
            }) => {
                return Err(ThinnessCounterexample {
                    length,
                    first,
                    second,
                })
            }
            Err(LangError::BeyondBound { .. }) => break,
            _ => {}
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxCase {
    /// Some 1 lies at a position in `[alpha n - B, (1 - alpha) n + B]`.
    Center,
    /// Every 1 lies at a position `<= C` or `>= n - C`.
    Edge,
}

/// Constants certifying that one paired loop is structurally simple for
/// word lengths `n >= min_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuxConstants {
    pub alpha: Ratio<u64>,
    pub shift_b: u64,
    pub cap_c: usize,
    pub min_n: usize,
    pub case: AuxCase,
}

pub fn aux_constants(l: &PairedLoop) -> AuxConstants {
    let zeros = |s: &str| s.bytes().all(|b| b == b'0');
    let n = l.parts().iter().map(|p| p.len()).sum::<usize>();
    let c0 = l.parts().iter().map(|p| p.len()).max().unwrap_or(0);
    let half = Ratio::new(1, 2);
    let (v, x) = (l.v.len(), l.x.len());
    let mk = |alpha: Ratio<u64>, shift_b: u64, cap_c: usize, case: AuxCase| AuxConstants {
        alpha,
        shift_b,
        cap_c,
        min_n: n,
        case,
    };
    if zeros(&l.v) && zeros(&l.w) && zeros(&l.x) {
        mk(half, 0, c0, AuxCase::Edge)
    } else if v >= 1 && x >= 1 {
        let alpha = Ratio::new(v.min(x) as u64, (v + x) as u64);
        let b = (alpha * Ratio::from_integer(n as u64)).ceil().to_integer();
        mk(alpha, b, c0, AuxCase::Center)
    } else if v + x >= 1 {
        let pumped = if v == 0 { &l.x } else { &l.v };
        let case = if zeros(pumped) {
            AuxCase::Edge
        } else {
            AuxCase::Center
        };
        mk(half, n as u64, 2 * c0, case)
    } else {
        // a single word; every position is within C = |uwy| of the left end
        mk(half, n as u64, n, AuxCase::Edge)
    }
}

/// Whether `word` satisfies the claim of `aux`.
pub fn aux_claim_holds(aux: &AuxConstants, word: &str) -> bool {
    let n = word.len() as i128;
    let ones = word
        .bytes()
        .enumerate()
        .filter(|&(_, b)| b == b'1')
        .map(|(i, _)| i as i128);
    match aux.case {
        AuxCase::Center => {
            let (a, q) = (*aux.alpha.numer() as i128, *aux.alpha.denom() as i128);
            let b = aux.shift_b as i128;
            ones.into_iter()
                .any(|i| a * n - b * q <= i * q && i * q <= (q - a) * n + b * q)
        }
        AuxCase::Edge => {
            let c = aux.cap_c as i128;
            ones.into_iter().all(|i| i <= c || i >= n - c)
        }
    }
}

/// Outcome of [`structural_simplicity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Simplicity {
    /// Every defined degree `k` in `[min_degree, probe]` is `epsilon`-center-good
    /// or `cap`-edge-good.
    Simple {
        epsilon: Ratio<u32>,
        cap: usize,
        min_degree: usize,
    },
    /// First degree at which neither holds under the reported budget.
    NotSimple {
        degree: usize,
        set: String,
        epsilon: Ratio<u32>,
        cap: usize,
    },
}

/// Fractions `p/q` with `q <= 16` in `(0, 1/2]`, ascending.
pub fn epsilon_grid() -> Vec<Ratio<u32>> {
    let mut grid: Vec<Ratio<u32>> = (1..=16u32)
        .flat_map(|q| (1..=q / 2).map(move |p| Ratio::new(p, q)))
        .collect();
    grid.sort();
    grid.dedup();
    grid
}

fn good_at(c: &ConstraintSet, epsilon: Ratio<u32>, cap: usize) -> bool {
    c.is_edge_good(cap) || c.is_center_good(epsilon)
}

fn first_failure(
    sets: &[(usize, ConstraintSet)],
    epsilon: Ratio<u32>,
    cap: usize,
) -> Option<&(usize, ConstraintSet)> {
    sets.iter().find(|(_, c)| !good_at(c, epsilon, cap))
}

/// Structural-simplicity constants of a family over degrees up to `probe`.
///
/// Loop families derive their own budget: the per-loop constants are
/// combined, the largest grid `epsilon` consistent with the combined `C` is
/// located by bisection, and `C` is then shrunk as far as that `epsilon`
/// allows. Other families are checked against `budget`.
pub fn structural_simplicity(
    family: &LanguageFamily,
    probe: usize,
    budget: &StructureBudget,
) -> Result<Simplicity, LangError> {
    if let Err(ce) = check_thin(family, probe + 1) {
        return Err(LangError::Ambiguous {
            length: ce.length,
            first: ce.first,
            second: ce.second,
        });
    }
    match family {
        LanguageFamily::Loops(loops) => {
            let auxes: Vec<AuxConstants> = loops.iter().map(aux_constants).collect();
            let cap = auxes.iter().map(|a| a.cap_c).max().unwrap_or(0);
            let min_n = auxes.iter().map(|a| a.min_n).max().unwrap_or(0);
            let min_degree = min_n.saturating_sub(1).max(2);
            let sets = family.defined_degrees(min_degree, probe.max(min_degree))?;
            let grid = epsilon_grid();
            let ok = |e: Ratio<u32>| first_failure(&sets, e, cap).is_none();
            if !ok(grid[0]) {
                let (degree, set) = first_failure(&sets, grid[0], cap).unwrap();
                return Ok(Simplicity::NotSimple {
                    degree: *degree,
                    set: set.to_bits(),
                    epsilon: grid[0],
                    cap,
                });
            }
            // largest index with ok(grid[i]); monotone since the center window
            // only widens as epsilon decreases
            let (mut lo, mut hi) = (0usize, grid.len());
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if ok(grid[mid]) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let epsilon = grid[lo];
            let cap = (0..=cap)
                .find(|&c| first_failure(&sets, epsilon, c).is_none())
                .unwrap_or(cap);
            Ok(Simplicity::Simple {
                epsilon,
                cap,
                min_degree,
            })
        }
        _ => {
            let sets = family.defined_degrees(2, probe.max(2))?;
            match first_failure(&sets, budget.epsilon, budget.cap) {
                Some((degree, set)) => Ok(Simplicity::NotSimple {
                    degree: *degree,
                    set: set.to_bits(),
                    epsilon: budget.epsilon,
                    cap: budget.cap,
                }),
                None => Ok(Simplicity::Simple {
                    epsilon: budget.epsilon,
                    cap: budget.cap,
                    min_degree: sets.first().map_or(2, |s| s.0),
                }),
            }
        }
    }
}

/// Well-known families.
pub mod families {
    use super::*;

    /// `0 1^+ 0`: between 1 and k-1 selected edges.
    pub fn splitting() -> LanguageFamily {
        LanguageFamily::loops("01:1:-:-:0").unwrap()
    }

    /// `0 1 0^+`: exactly one selected edge.
    pub fn matching() -> LanguageFamily {
        LanguageFamily::loops("010:0:-:-:-").unwrap()
    }

    /// `1 1^+ 0`: anything but all edges.
    pub fn sinkless() -> LanguageFamily {
        LanguageFamily::loops("11:1:-:-:0").unwrap()
    }

    /// `{floor(log2 k)}`.
    pub fn floor_log2() -> LanguageFamily {
        LanguageFamily::Explicit(ExplicitFamily::new("floor-log2", |k| {
            (k >= 1)
                .then(|| ConstraintSet::from_elems(k, [k.ilog2() as usize]).ok())
                .flatten()
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;

    fn lp(s: &str) -> PairedLoop {
        s.parse().unwrap()
    }

    #[test]
    fn loop_syntax() {
        let l = lp("01:1:-:-:0");
        assert_eq!(l.to_string(), "01:1:-:-:0");
        assert!("0:1:2:-:-".parse::<PairedLoop>().is_err());
        assert!("0:1:-:-".parse::<PairedLoop>().is_err());
        assert!("0:1::-:-".parse::<PairedLoop>().is_err());
        assert_eq!(parse_loops("0:1:-:-:0;-:-:-:1:0").unwrap().len(), 2);
    }

    #[test]
    fn words() {
        assert_eq!(splitting().word_at_length(5).unwrap().as_deref(), Some("01110"));
        assert_eq!(matching().word_at_length(4).unwrap().as_deref(), Some("0100"));
        assert_eq!(splitting().word_at_length(2).unwrap(), None);
        assert_eq!(splitting().set_at_degree(4).unwrap().elements(), vec![1, 2, 3]);
        assert_eq!(matching().set_at_degree(4).unwrap().elements(), vec![1]);
        assert_eq!(sinkless().set_at_degree(3).unwrap().elements(), vec![0, 1, 2]);
        assert_eq!(
            splitting().set_at_degree(1),
            Err(LangError::UndefinedDegree(1))
        );
    }

    #[test]
    fn thinness() {
        assert_eq!(check_thin(&splitting(), 64), Ok(()));
        let twice = LanguageFamily::loops("0:1:-:-:0;0:-:-:1:0").unwrap();
        assert_eq!(check_thin(&twice, 64), Ok(()));
        let clash = LanguageFamily::loops("-:1:-:-:-;-:-:-:1:0").unwrap();
        let ce = check_thin(&clash, 64).unwrap_err();
        assert_eq!(ce.length, 3);
        assert_eq!((ce.first.as_str(), ce.second.as_str()), ("111", "110"));
    }

    #[test]
    fn aux_examples() {
        let a = aux_constants(&lp("0:1:-:-:0"));
        assert_eq!((a.alpha, a.shift_b, a.case), (Ratio::new(1, 2), 3, AuxCase::Center));
        let b = aux_constants(&lp("01:0:-:0:-"));
        assert_eq!((b.case, b.cap_c), (AuxCase::Edge, 2));
        let c = aux_constants(&lp("-:10:-:0:-"));
        assert_eq!((c.alpha, c.shift_b, c.case), (Ratio::new(1, 3), 1, AuxCase::Center));
    }

    #[test]
    fn aux_claims_enumerated() {
        for s in ["0:1:-:-:0", "01:0:-:0:-", "-:10:-:0:-", "1:-:0:01:-", "-:-:1:-:-"] {
            let l = lp(s);
            let a = aux_constants(&l);
            for len in a.min_n..a.min_n + 64 {
                if let Some(w) = l.word_at_length(len) {
                    assert!(aux_claim_holds(&a, &w), "{s} at {len}: {w}");
                }
            }
        }
    }

    #[test]
    fn simplicity_of_examples() {
        let budget = StructureBudget::default();
        match structural_simplicity(&splitting(), 300, &budget).unwrap() {
            Simplicity::Simple { epsilon, .. } => {
                for k in 16..=300 {
                    let c = splitting().set_at_degree(k).unwrap();
                    assert!(c.is_center_good(Ratio::new(1, 4)));
                    assert!(c.is_center_good(epsilon) || c.is_edge_good(2));
                }
            }
            other => panic!("{other:?}"),
        }
        match structural_simplicity(&matching(), 300, &budget).unwrap() {
            Simplicity::Simple { cap, .. } => assert_eq!(cap, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn floor_log_is_not_simple() {
        let budget = StructureBudget::new(Ratio::new(1, 4), 2).unwrap();
        let fam = floor_log2();
        assert!(matches!(
            structural_simplicity(&fam, 1000, &budget).unwrap(),
            Simplicity::Simple { .. }
        ));
        match structural_simplicity(&fam, 70_000, &budget).unwrap() {
            Simplicity::NotSimple { degree, .. } => assert_eq!(degree, 50_626),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn grammar_enumeration() {
        let g = Grammar::parse("S -> 0 T 0\nT -> 1 T | 1\n", 64).unwrap();
        let fam = LanguageFamily::Grammar(g);
        assert_eq!(fam.word_at_length(5).unwrap().as_deref(), Some("01110"));
        assert_eq!(fam.word_at_length(2).unwrap(), None);
        assert_eq!(check_thin(&fam, 64), Ok(()));

        let nullable = Grammar::parse("S -> 01 A\nA -> 0 A | -\n", 32).unwrap();
        let fam = LanguageFamily::Grammar(nullable);
        assert_eq!(fam.word_at_length(4).unwrap().as_deref(), Some("0100"));
        assert_eq!(fam.word_at_length(2).unwrap().as_deref(), Some("01"));

        let ambiguous = Grammar::parse("S -> 0 S | 1 S | -\n", 6).unwrap();
        assert!(check_thin(&LanguageFamily::Grammar(ambiguous), 6).is_err());
        assert!(Grammar::parse("S 0 1\n", 8).is_err());
    }
}
