//! Chains, admissible pairs of base roots and the expanded base.

use std::fmt;

use crate::base::BaseSet;
use crate::error::{Error, Result};
use crate::parabolic::{LeviData, ParabolicShape};
use crate::roots::{GroupType, Position, Root};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairCase {
    /// `{xi, alpha, xi'}` is a chain through a Levi root.
    Chain,
    /// Both roots lie right of the central block; `alpha` is taken from
    /// the adjusted Levi set and may be formal.
    RightOfCentral,
}

impl PairCase {
    pub fn name(&self) -> &'static str {
        match self {
            PairCase::Chain => "chain",
            PairCase::RightOfCentral => "right-of-central",
        }
    }
}

impl fmt::Display for PairCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdmissiblePair {
    pub xi: Root,
    pub xi_prime: Root,
    pub alpha: Root,
    pub phi: Root,
    pub case: PairCase,
}

/// Whether consecutive positions link as `(a1,a2), (a2,a3), ...`.
pub fn is_chain(roots: &[Root], ty: GroupType) -> Result<bool> {
    let positions = roots
        .iter()
        .map(|r| ty.e_position(r))
        .collect::<Result<Vec<Position>>>()?;
    Ok(positions.windows(2).all(|w| w[0].col == w[1].row))
}

pub fn admissible_pairs(
    base: &BaseSet,
    levi: &LeviData,
    shape: &ParabolicShape,
) -> Result<Vec<AdmissiblePair>> {
    let ty = shape.group();
    let right: Vec<bool> = base
        .roots
        .iter()
        .map(|r| shape.is_right_of_central(r))
        .collect::<Result<_>>()?;

    let mut pairs: Vec<AdmissiblePair> = Vec::new();
    for (u, xi) in base.roots.iter().enumerate() {
        let p = xi.position();
        for (v, xi_prime) in base.roots.iter().enumerate() {
            let p_prime = xi_prime.position();
            if p.row > p_prime.row {
                continue;
            }
            let (alpha, case) = if right[u] && right[v] {
                let at = Position {
                    row: p.row.opposite(),
                    col: p_prime.row,
                };
                match ty.root_at(at, true) {
                    Some(a) if levi.in_gamma_r(&a) => (a, PairCase::RightOfCentral),
                    _ => continue,
                }
            } else {
                let at = Position {
                    row: p.col,
                    col: p_prime.row,
                };
                match ty.root_at(at, false) {
                    Some(a) if levi.in_levi(&a) => (a, PairCase::Chain),
                    _ => continue,
                }
            };
            let phi = ty.add(&alpha, xi_prime, false).ok_or_else(|| {
                Error::Construction(format!(
                    "alpha = {alpha} plus {xi_prime} is not a positive root (pair {xi}, {xi_prime})"
                ))
            })?;
            if !levi.in_nilradical(&phi) {
                return Err(Error::Construction(format!(
                    "phi = {phi} of pair ({xi}, {xi_prime}) is outside the nilradical"
                )));
            }
            let pair = AdmissiblePair {
                xi: *xi,
                xi_prime: *xi_prime,
                alpha,
                phi,
                case,
            };
            if let Some(prev) = pairs.iter().find(|q| q.phi == phi) {
                if prev.alpha == alpha {
                    continue;
                }
                return Err(Error::Construction(format!(
                    "pairs ({}, {}) and ({xi}, {xi_prime}) share phi = {phi}",
                    prev.xi, prev.xi_prime
                )));
            }
            pairs.push(pair);
        }
    }
    Ok(pairs)
}

/// `S` followed by `Phi`. Fails if the two overlap.
pub fn expanded_base(base: &BaseSet, pairs: &[AdmissiblePair]) -> Result<Vec<Root>> {
    let mut out = base.roots.clone();
    for q in pairs {
        if base.contains(&q.phi) {
            return Err(Error::Construction(format!(
                "phi = {} is already a base root",
                q.phi
            )));
        }
        out.push(q.phi);
    }
    Ok(out)
}
