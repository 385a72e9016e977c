//! Positive roots of types B, C and D, the mirror order on matrix indices,
//! and the map sending a root to its matrix position.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported rank; variable ids pack two indices into a `u16`.
pub const MAX_RANK: usize = 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    /// Odd orthogonal, `O(2n+1)`.
    B,
    /// Symplectic, `Sp(2n)`.
    C,
    /// Even orthogonal, `O(2n)`.
    D,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Letter::B => "B",
            Letter::C => "C",
            Letter::D => "D",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "B" | "b" => Ok(Letter::B),
            "C" | "c" => Ok(Letter::C),
            "D" | "d" => Ok(Letter::D),
            other => Err(Error::InvalidShape(format!("unknown type letter {other:?}"))),
        }
    }
}

/// A classical group type together with its rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupType {
    letter: Letter,
    n: usize,
}

/// A row or column label, ordered by the mirror order
/// `1 < 2 < ... < n < 0 < -n < ... < -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MirrorIndex(pub i32);

impl MirrorIndex {
    fn key(self) -> (u8, i32) {
        match self.0.cmp(&0) {
            Ordering::Greater => (0, self.0),
            Ordering::Equal => (1, 0),
            Ordering::Less => (2, self.0),
        }
    }

    pub fn value(self) -> i32 {
        self.0
    }

    pub fn opposite(self) -> MirrorIndex {
        MirrorIndex(-self.0)
    }

    /// 1-based position of this index in the mirror order for `ty`.
    pub fn rank(self, ty: GroupType) -> usize {
        let n = ty.n as i32;
        let m = ty.m() as i32;
        let r = match self.0.cmp(&0) {
            Ordering::Greater => self.0,
            Ordering::Equal => n + 1,
            Ordering::Less => m + 1 + self.0,
        };
        r as usize
    }

    pub fn is_valid(self, ty: GroupType) -> bool {
        let n = ty.n as i32;
        if self.0 == 0 {
            ty.letter == Letter::B
        } else {
            self.0.abs() <= n
        }
    }
}

impl PartialOrd for MirrorIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MirrorIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for MirrorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A matrix cell addressed by mirror indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub row: MirrorIndex,
    pub col: MirrorIndex,
}

impl Position {
    pub fn new(row: i32, col: i32) -> Self {
        Position {
            row: MirrorIndex(row),
            col: MirrorIndex(col),
        }
    }

    /// The cell reflected in the antidiagonal, `(r, c) -> (-c, -r)`.
    pub fn mirrored(self) -> Position {
        Position {
            row: self.col.opposite(),
            col: self.row.opposite(),
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// A positive root, or a formal element `2e_i` for the orthogonal types.
///
/// Indices are 1-based. The derived order (variant, then indices) is the
/// canonical iteration order used everywhere in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Root {
    /// `e_i - e_j`, `i < j`.
    Minus(usize, usize),
    /// `e_i + e_j`, `i < j`.
    Plus(usize, usize),
    /// `2e_i`; a genuine root only in type C.
    Double(usize),
    /// `e_i`; type B only.
    Single(usize),
}

impl Root {
    /// Coefficients on `e_1..e_n`.
    pub fn lattice(&self, n: usize) -> Vec<i32> {
        let mut v = vec![0; n];
        match *self {
            Root::Minus(i, j) => {
                v[i - 1] += 1;
                v[j - 1] -= 1;
            }
            Root::Plus(i, j) => {
                v[i - 1] += 1;
                v[j - 1] += 1;
            }
            Root::Double(i) => v[i - 1] += 2,
            Root::Single(i) => v[i - 1] += 1,
        }
        v
    }

    /// The position given by the defining formula, without type checks.
    pub fn position(&self) -> Position {
        let (i, j) = match *self {
            Root::Minus(i, j) => (-(j as i32), i as i32),
            Root::Plus(i, j) => (j as i32, i as i32),
            Root::Double(i) => (i as i32, i as i32),
            Root::Single(i) => (0, i as i32),
        };
        Position::new(i, -j)
    }

    pub fn is_formal(&self, ty: GroupType) -> bool {
        matches!(self, Root::Double(_)) && ty.letter != Letter::C
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Root::Minus(..) => "minus",
            Root::Plus(..) => "plus",
            Root::Double(_) => "double",
            Root::Single(_) => "single",
        }
    }

    /// `(i, j)` with `j = 0` for the one-index kinds.
    pub fn indices(&self) -> (usize, usize) {
        match *self {
            Root::Minus(i, j) | Root::Plus(i, j) => (i, j),
            Root::Double(i) | Root::Single(i) => (i, 0),
        }
    }

    /// Largest index mentioned.
    fn max_index(&self) -> usize {
        let (i, j) = self.indices();
        i.max(j)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Root::Minus(i, j) => write!(f, "e{i}-e{j}"),
            Root::Plus(i, j) => write!(f, "e{i}+e{j}"),
            Root::Double(i) => write!(f, "2e{i}"),
            Root::Single(i) => write!(f, "e{i}"),
        }
    }
}

/// Outcome of comparing two roots under `a > b  iff  a - b` is a positive root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Succ,
    Prec,
    Equal,
    Incomparable,
}

impl GroupType {
    pub fn new(letter: Letter, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_RANK {
            return Err(Error::InvalidShape(format!(
                "rank must be in 1..={MAX_RANK}, got {n}"
            )));
        }
        Ok(GroupType { letter, n })
    }

    pub fn letter(&self) -> Letter {
        self.letter
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix size: `2n + 1` for B, `2n` for C and D.
    pub fn m(&self) -> usize {
        match self.letter {
            Letter::B => 2 * self.n + 1,
            Letter::C | Letter::D => 2 * self.n,
        }
    }

    /// All row/column labels in mirror order.
    pub fn indices(&self) -> Vec<MirrorIndex> {
        let n = self.n as i32;
        let mut out: Vec<MirrorIndex> = (1..=n).map(MirrorIndex).collect();
        if self.letter == Letter::B {
            out.push(MirrorIndex(0));
        }
        out.extend((1..=n).rev().map(|i| MirrorIndex(-i)));
        out
    }

    /// The label with the given 1-based mirror rank.
    pub fn index_at_rank(&self, rank: usize) -> MirrorIndex {
        self.indices()[rank - 1]
    }

    pub fn positive_roots(&self) -> Vec<Root> {
        let n = self.n;
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(Root::Minus(i, j));
            }
        }
        for i in 1..=n {
            for j in i + 1..=n {
                out.push(Root::Plus(i, j));
            }
        }
        match self.letter {
            Letter::C => out.extend((1..=n).map(Root::Double)),
            Letter::B => out.extend((1..=n).map(Root::Single)),
            Letter::D => {}
        }
        out
    }

    /// Whether `r` is well-formed for this rank (indices in range, `i < j`).
    fn is_well_formed(&self, r: &Root) -> bool {
        let ok = match *r {
            Root::Minus(i, j) | Root::Plus(i, j) => i >= 1 && i < j,
            Root::Double(i) | Root::Single(i) => i >= 1,
        };
        ok && r.max_index() <= self.n
    }

    pub fn is_positive_root(&self, r: &Root) -> bool {
        self.is_well_formed(r)
            && match r {
                Root::Minus(..) | Root::Plus(..) => true,
                Root::Double(_) => self.letter == Letter::C,
                Root::Single(_) => self.letter == Letter::B,
            }
    }

    /// Position of a positive root, or of a formal `2e_i`.
    pub fn e_position(&self, r: &Root) -> Result<Position> {
        if !self.is_well_formed(r) {
            return Err(Error::NotARoot(format!("{r} is not a root of {}{}", self.letter, self.n)));
        }
        if matches!(r, Root::Single(_)) && self.letter != Letter::B {
            return Err(Error::NotARoot(format!(
                "{r} exists only in type B, not {}",
                self.letter
            )));
        }
        Ok(r.position())
    }

    /// Inverse of [`GroupType::e_position`].
    pub fn root_at(&self, pos: Position, allow_formal: bool) -> Option<Root> {
        if !pos.row.is_valid(*self) || !pos.col.is_valid(*self) {
            return None;
        }
        let c = pos.col.value();
        let r = pos.row.value();
        if c >= 0 {
            return None;
        }
        let i = (-c) as usize;
        let root = match r.cmp(&0) {
            Ordering::Less => {
                let j = (-r) as usize;
                (j > i).then_some(Root::Minus(i, j))?
            }
            Ordering::Equal => Root::Single(i),
            Ordering::Greater => {
                let j = r as usize;
                match j.cmp(&i) {
                    Ordering::Greater => Root::Plus(i, j),
                    Ordering::Equal => Root::Double(i),
                    Ordering::Less => return None,
                }
            }
        };
        if self.is_positive_root(&root) || (allow_formal && matches!(root, Root::Double(_))) {
            Some(root)
        } else {
            None
        }
    }

    /// Reads a lattice vector back as a root of this type.
    ///
    /// `2e_i` is accepted outside type C only when `allow_formal` is set.
    pub fn classify(&self, v: &[i32], allow_formal: bool) -> Option<Root> {
        let nz: Vec<(usize, i32)> = v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (k + 1, c))
            .collect();
        let root = match nz.as_slice() {
            [(i, 1)] => Root::Single(*i),
            [(i, 2)] => Root::Double(*i),
            [(i, 1), (j, -1)] => Root::Minus(*i, *j),
            [(i, 1), (j, 1)] => Root::Plus(*i, *j),
            _ => return None,
        };
        if self.is_positive_root(&root) || (allow_formal && matches!(root, Root::Double(_))) {
            Some(root)
        } else {
            None
        }
    }

    /// `a + b` as a root (genuine, or formal if allowed).
    pub fn add(&self, a: &Root, b: &Root, allow_formal: bool) -> Option<Root> {
        let mut v = a.lattice(self.n);
        for (x, y) in v.iter_mut().zip(b.lattice(self.n)) {
            *x += y;
        }
        self.classify(&v, allow_formal)
    }

    /// `a - b` as a root (genuine, or formal if allowed).
    pub fn sub(&self, a: &Root, b: &Root, allow_formal: bool) -> Option<Root> {
        let mut v = a.lattice(self.n);
        for (x, y) in v.iter_mut().zip(b.lattice(self.n)) {
            *x -= y;
        }
        self.classify(&v, allow_formal)
    }

    /// `a > b` iff `a - b` is a positive root. No transitive closure.
    pub fn compare(&self, a: &Root, b: &Root) -> Comparison {
        if a == b {
            Comparison::Equal
        } else if self.sub(a, b, false).is_some() {
            Comparison::Succ
        } else if self.sub(b, a, false).is_some() {
            Comparison::Prec
        } else {
            Comparison::Incomparable
        }
    }

    pub fn succ(&self, a: &Root, b: &Root) -> bool {
        self.compare(a, b) == Comparison::Succ
    }

    /// Like [`compare`](Self::compare), but a difference equal to a formal
    /// `2e_i` (types B and D) also counts. This is the relation the base
    /// construction needs to agree with the matrix picture, where `2e_i`
    /// sits at `(i,-i)` in every type.
    pub fn compare_extended(&self, a: &Root, b: &Root) -> Comparison {
        if a == b {
            Comparison::Equal
        } else if self.sub(a, b, true).is_some() {
            Comparison::Succ
        } else if self.sub(b, a, true).is_some() {
            Comparison::Prec
        } else {
            Comparison::Incomparable
        }
    }

    pub fn succ_extended(&self, a: &Root, b: &Root) -> bool {
        self.compare_extended(a, b) == Comparison::Succ
    }
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter, self.n)
    }
}
