//! Binary labeling problems, their constraint strings, and the structural
//! predicates used by the classifier and the solvers.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::tree::Color;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error("constraint string must be non-empty and over {{0,1}}, got `{0}`")]
    BadString(String),
    #[error("element {elem} exceeds degree {degree}")]
    ElementOutOfRange { elem: usize, degree: usize },
    #[error("shift amount {k} exceeds degree {degree}")]
    ShiftOutOfRange { k: usize, degree: usize },
    #[error("degrees must be at least 2 (got d={d}, delta={delta})")]
    DegreeTooSmall { d: usize, delta: usize },
    #[error("{side} constraint has degree {found}, expected {expected}")]
    DegreeMismatch {
        side: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("epsilon must lie strictly between 0 and 1")]
    BadEpsilon,
}

/// A subset of `{0, .., degree}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConstraintSet {
    degree: usize,
    allowed: BitSet,
}

impl ConstraintSet {
    pub fn empty(degree: usize) -> Self {
        ConstraintSet {
            degree,
            allowed: BitSet::new(degree + 1),
        }
    }

    pub fn full(degree: usize) -> Self {
        ConstraintSet {
            degree,
            allowed: BitSet::full(degree + 1),
        }
    }

    pub fn from_elems(
        degree: usize,
        elems: impl IntoIterator<Item = usize>,
    ) -> Result<Self, ProblemError> {
        let mut set = Self::empty(degree);
        for x in elems {
            if x > degree {
                return Err(ProblemError::ElementOutOfRange { elem: x, degree });
            }
            set.allowed.insert(x);
        }
        Ok(set)
    }

    /// Parses the bit-string form; index 0 is the leftmost character.
    pub fn from_bits(bits: &str) -> Result<Self, ProblemError> {
        if bits.is_empty() || !bits.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(ProblemError::BadString(bits.to_string()));
        }
        let mut set = Self::empty(bits.len() - 1);
        for (i, b) in bits.bytes().enumerate() {
            if b == b'1' {
                set.allowed.insert(i);
            }
        }
        Ok(set)
    }

    pub fn to_bits(&self) -> String {
        (0..=self.degree)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn contains(&self, x: usize) -> bool {
        self.allowed.contains(x)
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.allowed.count() == self.degree + 1
    }

    pub fn elements(&self) -> Vec<usize> {
        self.allowed.iter().collect()
    }

    pub fn min(&self) -> Option<usize> {
        self.allowed.iter().next()
    }

    pub fn max(&self) -> Option<usize> {
        self.allowed.iter().last()
    }

    pub fn bits(&self) -> &BitSet {
        &self.allowed
    }

    /// Smallest element in `lo..=hi`.
    pub fn first_in(&self, lo: usize, hi: usize) -> Option<usize> {
        self.allowed.first_in(lo, hi)
    }

    /// `{degree - x}` for every element `x`.
    pub fn reversed(&self) -> Self {
        let mut out = Self::empty(self.degree);
        for x in self.allowed.iter() {
            out.allowed.insert(self.degree - x);
        }
        out
    }

    /// Degree drops by `k`; an element survives if some `x - i` with
    /// `0 <= i <= k` lands in the new range.
    pub fn shift(&self, k: usize) -> Result<Self, ProblemError> {
        if k > self.degree {
            return Err(ProblemError::ShiftOutOfRange {
                k,
                degree: self.degree,
            });
        }
        let deg = self.degree - k;
        let mut out = Self::empty(deg);
        for y in 0..=deg {
            if self.allowed.any_in(y, y + k) {
                out.allowed.insert(y);
            }
        }
        Ok(out)
    }

    pub fn longest_zero_run(&self) -> usize {
        let (mut best, mut cur) = (0, 0);
        for i in 0..=self.degree {
            if self.contains(i) {
                cur = 0;
            } else {
                cur += 1;
                best = best.max(cur);
            }
        }
        best
    }

    pub fn is_center_good(&self, epsilon: Ratio<u32>) -> bool {
        let (lo, hi) = center_bounds(self.degree, epsilon);
        lo <= hi && self.allowed.any_in(lo, hi)
    }

    /// Every element within `cap` of either end. Vacuously true when empty.
    pub fn is_edge_good(&self, cap: usize) -> bool {
        self.allowed
            .iter()
            .all(|x| x <= cap || x + cap >= self.degree)
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bits())
    }
}

impl fmt::Debug for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConstraintSet({})", self.to_bits())
    }
}

impl FromStr for ConstraintSet {
    type Err = ProblemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_bits(s)
    }
}

/// `(ceil(k^eps), floor(k^(1-eps)))` by exact integer root extraction.
pub fn center_bounds(k: usize, epsilon: Ratio<u32>) -> (usize, usize) {
    let (p, q) = (*epsilon.numer(), *epsilon.denom());
    let kb = BigUint::from(k);
    let low_target = kb.pow(p);
    let mut lo = low_target.nth_root(q);
    if lo.pow(q) < low_target {
        lo += 1u32;
    }
    let hi = kb.pow(q - p).nth_root(q);
    (to_usize(&lo), to_usize(&hi))
}

fn to_usize(x: &BigUint) -> usize {
    let digits = x.to_u64_digits();
    match digits.as_slice() {
        [] => 0,
        [d] => *d as usize,
        _ => usize::MAX,
    }
}

/// The tuple `(d, delta, W, B)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Problem {
    pub d: usize,
    pub delta: usize,
    pub white: ConstraintSet,
    pub black: ConstraintSet,
}

impl Problem {
    pub fn new(white: ConstraintSet, black: ConstraintSet) -> Result<Self, ProblemError> {
        let (d, delta) = (white.degree(), black.degree());
        if d < 2 || delta < 2 {
            return Err(ProblemError::DegreeTooSmall { d, delta });
        }
        Ok(Problem {
            d,
            delta,
            white,
            black,
        })
    }

    /// Checks that the constraints have the announced degrees.
    pub fn with_degrees(
        d: usize,
        delta: usize,
        white: ConstraintSet,
        black: ConstraintSet,
    ) -> Result<Self, ProblemError> {
        if white.degree() != d {
            return Err(ProblemError::DegreeMismatch {
                side: "white",
                expected: d,
                found: white.degree(),
            });
        }
        if black.degree() != delta {
            return Err(ProblemError::DegreeMismatch {
                side: "black",
                expected: delta,
                found: black.degree(),
            });
        }
        Self::new(white, black)
    }

    pub fn from_bits(white: &str, black: &str) -> Result<Self, ProblemError> {
        Self::new(white.parse()?, black.parse()?)
    }

    /// Convenience constructor from explicit element lists.
    pub fn from_sets(
        d: usize,
        delta: usize,
        white: &[usize],
        black: &[usize],
    ) -> Result<Self, ProblemError> {
        Self::new(
            ConstraintSet::from_elems(d, white.iter().copied())?,
            ConstraintSet::from_elems(delta, black.iter().copied())?,
        )
    }

    pub fn switch(&self) -> Problem {
        Problem {
            d: self.delta,
            delta: self.d,
            white: self.black.clone(),
            black: self.white.clone(),
        }
    }

    pub fn reverse(&self) -> Problem {
        Problem {
            d: self.d,
            delta: self.delta,
            white: self.white.reversed(),
            black: self.black.reversed(),
        }
    }

    /// Degree and constraint governing nodes of the given color.
    pub fn side(&self, color: Color) -> (usize, &ConstraintSet) {
        match color {
            Color::White => (self.d, &self.white),
            Color::Black => (self.delta, &self.black),
        }
    }

    /// Constraint for a node of this color and degree, if it is relevant.
    pub fn constraint_for(&self, color: Color, degree: usize) -> Option<&ConstraintSet> {
        let (k, c) = self.side(color);
        (degree == k).then_some(c)
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(d={}, delta={}, W={}, B={})",
            self.d, self.delta, self.white, self.black
        )
    }
}

/// Constants for checking center-good / edge-good at a fixed degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureBudget {
    pub epsilon: Ratio<u32>,
    pub cap: usize,
}

impl StructureBudget {
    pub fn new(epsilon: Ratio<u32>, cap: usize) -> Result<Self, ProblemError> {
        if epsilon <= Ratio::zero() || epsilon >= Ratio::one() {
            return Err(ProblemError::BadEpsilon);
        }
        Ok(StructureBudget { epsilon, cap })
    }
}

impl Default for StructureBudget {
    fn default() -> Self {
        StructureBudget {
            epsilon: Ratio::new(1, 4),
            cap: 1,
        }
    }
}

/// Largest `(s, t)` for which `(W, B)` is `(s, t)`-resilient, capped at
/// `d - 1` and `delta - 1`; `None` if either side drops below 1.
pub fn max_resiliency(w: &ConstraintSet, b: &ConstraintSet) -> Option<(usize, usize)> {
    let side = |c: &ConstraintSet| {
        let k = c.degree();
        k.saturating_sub(c.longest_zero_run())
            .min(k.saturating_sub(1))
    };
    let (s, t) = (side(w), side(b));
    (s >= 1 && t >= 1).then_some((s, t))
}

/// Smallest allowed total in `[fixed_ones, fixed_ones + free_edges]`.
pub fn complete_node(c: &ConstraintSet, fixed_ones: usize, free_edges: usize) -> Option<usize> {
    c.first_in(fixed_ones, fixed_ones + free_edges)
}
