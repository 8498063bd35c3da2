//! The `binlab-problem v1` text format.
//!
//! ```text
//! binlab-problem v1
//! d 3
//! delta 2
//! white set 1
//! black loops 010:0:-:-:-
//! ```
//!
//! Each side is `set <comma-list>`, `string <bits>`, `loops <loop-list>` or
//! `grammar <path>`; grammar paths are relative to the problem file. `d` and
//! `delta` may be omitted when the side is a family and the degree is
//! supplied later.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::lang::{parse_loops, Grammar, LangError, LanguageFamily, DEFAULT_GRAMMAR_BOUND};
use crate::problem::{ConstraintSet, Problem, ProblemError};
use crate::tree::Color;

pub const PROBLEM_HEADER: &str = "binlab-problem v1";

#[derive(Debug, Error)]
pub enum ProblemFileError {
    #[error("expected header `{PROBLEM_HEADER}`")]
    Header,
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("missing {0}")]
    Missing(&'static str),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Lang(#[from] LangError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Clone, Debug)]
pub enum SideSpec {
    Set(Vec<usize>),
    Bits(ConstraintSet),
    Family(LanguageFamily),
}

impl SideSpec {
    fn at(&self, degree: Option<usize>, name: &'static str) -> Result<ConstraintSet, ProblemFileError> {
        match self {
            SideSpec::Bits(c) => match degree {
                Some(k) if k != c.degree() => Err(ProblemError::DegreeMismatch {
                    side: name,
                    expected: k,
                    found: c.degree(),
                }
                .into()),
                _ => Ok(c.clone()),
            },
            SideSpec::Set(xs) => {
                let k = degree.ok_or(ProblemFileError::Missing(name))?;
                Ok(ConstraintSet::from_elems(k, xs.iter().copied())?)
            }
            SideSpec::Family(f) => {
                let k = degree.ok_or(ProblemFileError::Missing(name))?;
                Ok(f.set_at_degree(k)?)
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub d: Option<usize>,
    pub delta: Option<usize>,
    pub white: SideSpec,
    pub black: SideSpec,
}

impl ProblemFile {
    /// `base` is the directory grammar paths are resolved against.
    pub fn parse(text: &str, base: Option<&Path>) -> Result<Self, ProblemFileError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        if lines.next().map(|(_, l)| l) != Some(PROBLEM_HEADER) {
            return Err(ProblemFileError::Header);
        }
        let (mut d, mut delta, mut white, mut black) = (None, None, None, None);
        for (line, l) in lines {
            let bad = |msg: String| ProblemFileError::Line { line, msg };
            let mut parts = l.splitn(3, char::is_whitespace);
            let key = parts.next().unwrap_or("");
            match key {
                "d" | "delta" => {
                    let v: usize = parts
                        .next()
                        .and_then(|s| s.trim().parse().ok())
                        .ok_or_else(|| bad(format!("`{key}` needs a non-negative integer")))?;
                    if key == "d" { &mut d } else { &mut delta }.replace(v);
                }
                "white" | "black" => {
                    let form = parts.next().unwrap_or("");
                    let arg = parts.next().unwrap_or("").trim();
                    let spec = parse_side(form, arg, base).map_err(|e| match e {
                        ProblemFileError::Line { msg, .. } => bad(msg),
                        other => other,
                    })?;
                    if key == "white" { &mut white } else { &mut black }.replace(spec);
                }
                _ => return Err(bad(format!("unknown key `{key}`"))),
            }
        }
        Ok(ProblemFile {
            d,
            delta,
            white: white.ok_or(ProblemFileError::Missing("white constraint"))?,
            black: black.ok_or(ProblemFileError::Missing("black constraint"))?,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ProblemFileError> {
        let text = fs::read_to_string(path).map_err(|source| ProblemFileError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path.parent())
    }

    /// The concrete problem; `d` and `delta` override the file's values.
    pub fn resolve(&self, d: Option<usize>, delta: Option<usize>) -> Result<Problem, ProblemFileError> {
        let white = self.white.at(d.or(self.d), "white degree `d`")?;
        let black = self.black.at(delta.or(self.delta), "black degree `delta`")?;
        Ok(Problem::new(white, black)?)
    }

    pub fn family(&self, color: Color) -> Option<&LanguageFamily> {
        match self.side(color) {
            SideSpec::Family(f) => Some(f),
            _ => None,
        }
    }

    pub fn side(&self, color: Color) -> &SideSpec {
        match color {
            Color::White => &self.white,
            Color::Black => &self.black,
        }
    }
}

fn parse_side(form: &str, arg: &str, base: Option<&Path>) -> Result<SideSpec, ProblemFileError> {
    let bad = |msg: String| ProblemFileError::Line { line: 0, msg };
    match form {
        "set" => {
            if arg.is_empty() || arg == "-" {
                return Ok(SideSpec::Set(Vec::new()));
            }
            arg.split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map(SideSpec::Set)
                .map_err(|_| bad(format!("bad set `{arg}`")))
        }
        "string" => Ok(SideSpec::Bits(ConstraintSet::from_bits(arg)?)),
        "loops" => Ok(SideSpec::Family(LanguageFamily::Loops(parse_loops(arg)?))),
        "grammar" => {
            let path = base.map_or_else(|| PathBuf::from(arg), |b| b.join(arg));
            let text = fs::read_to_string(&path).map_err(|source| ProblemFileError::Io {
                path: path.clone(),
                source,
            })?;
            Ok(SideSpec::Family(LanguageFamily::Grammar(Grammar::parse(
                &text,
                DEFAULT_GRAMMAR_BOUND,
            )?)))
        }
        _ => Err(bad(format!("unknown constraint form `{form}`"))),
    }
}

/// A problem as a file with explicit strings.
pub fn write_problem(p: &Problem) -> String {
    format!(
        "{PROBLEM_HEADER}\nd {}\ndelta {}\nwhite string {}\nblack string {}\n",
        p.d,
        p.delta,
        p.white.to_bits(),
        p.black.to_bits()
    )
}
