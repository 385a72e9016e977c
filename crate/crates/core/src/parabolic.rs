//! Block partitions, and the split of the positive roots into the nilradical
//! and the Levi part.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::roots::{GroupType, Letter, MirrorIndex, Root};

/// A parabolic subalgebra given by palindromic diagonal block sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicShape {
    ty: GroupType,
    blocks: Vec<usize>,
    /// Block ordinal (1-based) for each mirror rank, indexed by `rank - 1`.
    block_of_rank: Vec<usize>,
}

/// Root bookkeeping derived from a shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviData {
    /// Roots whose root spaces lie in the nilradical.
    pub nilradical: BTreeSet<Root>,
    /// Positive roots of the Levi part.
    pub levi: BTreeSet<Root>,
    /// Largest `k` with `e_k + e_{k+1}` in the nilradical.
    pub k: Option<usize>,
    /// Levi roots adjusted by the `2e_i`, `i > k` family. May hold formal
    /// elements for types B and D.
    pub gamma_r: BTreeSet<Root>,
}

impl LeviData {
    pub fn dim_nilradical(&self) -> usize {
        self.nilradical.len()
    }

    pub fn in_nilradical(&self, r: &Root) -> bool {
        self.nilradical.contains(r)
    }

    pub fn in_levi(&self, r: &Root) -> bool {
        self.levi.contains(r)
    }

    pub fn in_gamma_r(&self, r: &Root) -> bool {
        self.gamma_r.contains(r)
    }
}

impl ParabolicShape {
    pub fn new(ty: GroupType, blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidShape("empty block list".into()));
        }
        if blocks.contains(&0) {
            return Err(Error::InvalidShape(format!(
                "block sizes must be positive: {blocks:?}"
            )));
        }
        let sum: usize = blocks.iter().sum();
        let mut problems = Vec::new();
        if sum != ty.m() {
            problems.push(format!("sizes sum to {sum}, expected m = {}", ty.m()));
        }
        if blocks.iter().ne(blocks.iter().rev()) {
            problems.push("block list is not a palindrome".to_string());
        }
        if !problems.is_empty() {
            return Err(Error::InvalidShape(format!(
                "{blocks:?} for {ty}: {}",
                problems.join("; ")
            )));
        }
        let block_of_rank = blocks
            .iter()
            .enumerate()
            .flat_map(|(t, &size)| std::iter::repeat_n(t + 1, size))
            .collect();
        Ok(ParabolicShape {
            ty,
            blocks,
            block_of_rank,
        })
    }

    /// Convenience constructor used heavily in tests and the CLI.
    pub fn parse(letter: Letter, n: usize, blocks: &[usize]) -> Result<Self> {
        ParabolicShape::new(GroupType::new(letter, n)?, blocks.to_vec())
    }

    pub fn group(&self) -> GroupType {
        self.ty
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_of(&self, i: MirrorIndex) -> usize {
        self.block_of_rank[i.rank(self.ty) - 1]
    }

    /// `R`: total size of the blocks before the central one. With an even
    /// number of blocks the central block is empty and `R = n`.
    pub fn central_offset(&self) -> usize {
        let s = self.blocks.len();
        let before = if s.is_multiple_of(2) { s / 2 } else { (s - 1) / 2 };
        self.blocks[..before].iter().sum()
    }

    /// Whether the root's position `(a, -b)` satisfies `R < a < -R` strictly.
    pub fn is_right_of_central(&self, root: &Root) -> Result<bool> {
        let pos = self.ty.e_position(root)?;
        if pos.col.value() >= 0 {
            return Err(Error::Precondition(format!(
                "{root} has position {pos} outside the negative half"
            )));
        }
        let r = self.central_offset() as i32;
        if r == 0 {
            return Ok(false);
        }
        let lo = MirrorIndex(r);
        let hi = MirrorIndex(-r);
        Ok(lo < pos.row && pos.row < hi)
    }

    pub fn split_roots(&self) -> LeviData {
        let ty = self.ty;
        let mut nilradical = BTreeSet::new();
        let mut levi = BTreeSet::new();
        for root in ty.positive_roots() {
            let pos = root.position();
            if self.block_of(pos.row) < self.block_of(pos.col) {
                nilradical.insert(root);
            } else {
                levi.insert(root);
            }
        }
        let k = (1..ty.n())
            .rev()
            .find(|&k| nilradical.contains(&Root::Plus(k, k + 1)));
        let mut gamma_r = levi.clone();
        if let Some(k) = k {
            let tail = (k + 1..=ty.n()).map(Root::Double);
            match ty.letter() {
                Letter::B | Letter::D => gamma_r.extend(tail),
                Letter::C => {
                    for r in tail {
                        gamma_r.remove(&r);
                    }
                }
            }
        }
        LeviData {
            nilradical,
            levi,
            k,
            gamma_r,
        }
    }
}

/// Every palindromic composition of `m` (central block of any size,
/// including an empty one when `m` is even).
pub fn palindromic_partitions(m: usize) -> Vec<Vec<usize>> {
    fn compositions(total: usize) -> Vec<Vec<usize>> {
        if total == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for first in 1..=total {
            for mut rest in compositions(total - first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    let mut out = Vec::new();
    for centre in 0..=m {
        if !(m - centre).is_multiple_of(2) {
            continue;
        }
        for half in compositions((m - centre) / 2) {
            if centre == 0 && half.is_empty() {
                continue;
            }
            let mut blocks = half.clone();
            if centre > 0 {
                blocks.push(centre);
            }
            blocks.extend(half.iter().rev());
            out.push(blocks);
        }
    }
    out
}
