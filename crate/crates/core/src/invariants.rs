//! The generic nilradical element, the minors attached to roots, and the
//! quadratic combinations attached to admissible pairs.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use rustc_hash::FxHashMap;

use crate::base::{compute_base, BaseSet};
use crate::error::{Error, Result};
use crate::expanded::{admissible_pairs, expanded_base, AdmissiblePair};
use crate::parabolic::{LeviData, ParabolicShape};
use crate::poly::{PolyMatrix, Polynomial, Rational, Var};
use crate::roots::{GroupType, Letter, MirrorIndex, Position, Root};

/// Where a nilradical root lives in the generic matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub var: Var,
    /// Cell holding `+x`.
    pub primary: Position,
    /// The root's own position, holding `sign * x`. Equal to `primary` for
    /// the symplectic `2e_i`.
    pub mirror: Position,
    pub sign: i8,
}

/// The generic element of the nilradical with one signed variable per root.
#[derive(Clone, Debug)]
pub struct FormalMatrix {
    pub matrix: PolyMatrix,
    pub slots: BTreeMap<Root, Slot>,
}

impl FormalMatrix {
    pub fn build(shape: &ParabolicShape, levi: &LeviData) -> FormalMatrix {
        let ty = shape.group();
        let mut matrix = PolyMatrix::zeros(ty.indices(), ty.indices());
        let mut slots = BTreeMap::new();
        for root in &levi.nilradical {
            let slot = slot_of(ty, root);
            let x = Polynomial::var(slot.var);
            matrix.set(slot.primary.row, slot.primary.col, x.clone());
            if slot.mirror != slot.primary {
                matrix.set(
                    slot.mirror.row,
                    slot.mirror.col,
                    x.scale(&Rational::from_int(slot.sign as i64)),
                );
            }
            slots.insert(*root, slot);
        }
        FormalMatrix { matrix, slots }
    }

    pub fn var_of(&self, root: &Root) -> Option<Var> {
        self.slots.get(root).map(|s| s.var)
    }

    pub fn root_of(&self, var: Var) -> Option<Root> {
        self.slots
            .iter()
            .find(|(_, s)| s.var == var)
            .map(|(r, _)| *r)
    }

    pub fn variables(&self) -> Vec<Var> {
        self.slots.values().map(|s| s.var).collect()
    }
}

/// Slot layout of any root, independent of the shape.
pub fn slot_of(ty: GroupType, root: &Root) -> Slot {
    let pos = root.position();
    let primary = pos.mirrored();
    // variable x_{i,j} with (i, j) = primary; the mirror cell is (-j, -i)
    let j = primary.col.value();
    let sign = if ty.letter() == Letter::C && j < 0 { 1 } else { -1 };
    Slot {
        var: Var::at(primary.row, primary.col),
        primary,
        mirror: pos,
        sign,
    }
}

/// Row and column labels of a minor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorLabels {
    pub rows: Vec<MirrorIndex>,
    pub cols: Vec<MirrorIndex>,
}

/// Base roots strictly below-left of the root's position.
pub fn s_gamma(root: &Root, base: &BaseSet) -> Vec<Root> {
    let pos = root.position();
    base.roots
        .iter()
        .filter(|xi| {
            let p = xi.position();
            p.row > pos.row && p.col < pos.col
        })
        .copied()
        .collect()
}

fn ordered(mut v: Vec<MirrorIndex>) -> Vec<MirrorIndex> {
    v.sort();
    v.dedup();
    v
}

/// Labels of `M_root` (or of its barred twin).
pub fn minor_labels(root: &Root, base: &BaseSet, bar: bool) -> Result<MinorLabels> {
    let pos = root.position();
    let a = pos.row;
    let b = pos.col.opposite();
    let below: Vec<(MirrorIndex, MirrorIndex)> = s_gamma(root, base)
        .iter()
        .map(|xi| {
            let p = xi.position();
            (p.row, p.col.opposite())
        })
        .collect();
    let selected: Vec<(MirrorIndex, MirrorIndex)> =
        below.iter().copied().filter(|&(_, bt)| bt > a).collect();

    let (rows, cols) = if !bar {
        let rows = below
            .iter()
            .map(|&(_, bt)| bt)
            .chain([b])
            .chain(selected.iter().map(|&(at, _)| at))
            .collect();
        let cols = [a.opposite()]
            .into_iter()
            .chain(below.iter().map(|&(at, _)| at.opposite()))
            .chain(selected.iter().map(|&(_, bt)| bt.opposite()))
            .collect();
        (rows, cols)
    } else {
        let rows = [a]
            .into_iter()
            .chain(below.iter().map(|&(at, _)| at))
            .chain(selected.iter().map(|&(_, bt)| bt))
            .collect();
        let cols = below
            .iter()
            .map(|&(_, bt)| bt.opposite())
            .chain([b.opposite()])
            .chain(selected.iter().map(|&(at, _)| at.opposite()))
            .collect();
        (rows, cols)
    };
    let (rows, cols) = (ordered(rows), ordered(cols));
    if rows.len() != cols.len() {
        return Err(Error::Construction(format!(
            "minor for {root} is not square: rows {rows:?}, columns {cols:?}"
        )));
    }
    Ok(MinorLabels { rows, cols })
}

/// Everything derived from a shape that the invariants depend on.
#[derive(Debug)]
pub struct Construction {
    pub shape: ParabolicShape,
    pub levi: LeviData,
    pub base: BaseSet,
    pub pairs: Vec<AdmissiblePair>,
    pub formal: FormalMatrix,
    minors: Mutex<FxHashMap<(Root, bool), Polynomial>>,
}

impl Construction {
    pub fn new(shape: ParabolicShape) -> Result<Self> {
        let ty = shape.group();
        let levi = shape.split_roots();
        let base = compute_base(&levi.nilradical, ty)?;
        let pairs = admissible_pairs(&base, &levi, &shape)?;
        expanded_base(&base, &pairs)?;
        let formal = FormalMatrix::build(&shape, &levi);
        Ok(Construction {
            shape,
            levi,
            base,
            pairs,
            formal,
            minors: Mutex::new(FxHashMap::default()),
        })
    }

    pub fn group(&self) -> GroupType {
        self.shape.group()
    }

    pub fn phi(&self) -> Vec<Root> {
        self.pairs.iter().map(|q| q.phi).collect()
    }

    /// `S` followed by `Phi`.
    pub fn expanded_base(&self) -> Vec<Root> {
        let mut v = self.base.roots.clone();
        v.extend(self.phi());
        v
    }

    pub fn minor_labels(&self, root: &Root, bar: bool) -> Result<MinorLabels> {
        if !self.levi.in_nilradical(root) {
            return Err(Error::Precondition(format!("{root} is not in the nilradical")));
        }
        minor_labels(root, &self.base, bar)
    }

    /// `M_root` (`bar = false`) or its barred twin.
    pub fn minor(&self, root: &Root, bar: bool) -> Result<Polynomial> {
        if let Some(p) = self.minors.lock().unwrap().get(&(*root, bar)) {
            return Ok(p.clone());
        }
        let labels = self.minor_labels(root, bar)?;
        let det = self
            .formal
            .matrix
            .submatrix(&labels.rows, &labels.cols)
            .determinant()?;
        self.minors.lock().unwrap().insert((*root, bar), det.clone());
        Ok(det)
    }

    /// The ordered decompositions `alpha = a1 + a2` with `a1, a2` in the
    /// adjusted Levi set, the Levi roots, or zero, and both shifted roots in
    /// the nilradical.
    pub fn decompositions(&self, q: &AdmissiblePair) -> Vec<(Option<Root>, Option<Root>)> {
        let ty = self.group();
        let n = ty.n();
        let alpha = q.alpha.lattice(n);
        // Genuine Levi roots always take part. In type C this brings back the
        // 2e_i (i > k) that the adjusted set leaves out; without them the sum
        // is not invariant.
        let pool: BTreeSet<Root> = self.levi.gamma_r.union(&self.levi.levi).copied().collect();
        let candidates = std::iter::once(None).chain(pool.iter().copied().map(Some));
        let mut out = Vec::new();
        for a1 in candidates {
            let mut rest = alpha.clone();
            if let Some(r) = a1 {
                for (x, y) in rest.iter_mut().zip(r.lattice(n)) {
                    *x -= y;
                }
            }
            let a2 = if rest.iter().all(|&c| c == 0) {
                None
            } else {
                match ty.classify(&rest, true) {
                    Some(r) if pool.contains(&r) => Some(r),
                    _ => continue,
                }
            };
            let left = match a1 {
                None => Some(q.xi),
                Some(r) => ty.add(&q.xi, &r, false),
            };
            let right = match a2 {
                None => Some(q.xi_prime),
                Some(r) => ty.add(&r, &q.xi_prime, false),
            };
            match (left, right) {
                (Some(l), Some(r)) if self.levi.in_nilradical(&l) && self.levi.in_nilradical(&r) => {
                    out.push((a1, a2))
                }
                _ => {}
            }
        }
        out
    }

    pub fn build_l(&self, q: &AdmissiblePair) -> Result<Polynomial> {
        let ty = self.group();
        let terms = self.decompositions(q);
        if terms.is_empty() {
            return Err(Error::Construction(format!(
                "alpha = {} of pair ({}, {}) has no decomposition",
                q.alpha, q.xi, q.xi_prime
            )));
        }
        let mut out = Polynomial::zero();
        for (a1, a2) in terms {
            let left = a1.map_or(Some(q.xi), |r| ty.add(&q.xi, &r, false)).unwrap();
            let right = a2
                .map_or(Some(q.xi_prime), |r| ty.add(&r, &q.xi_prime, false))
                .unwrap();
            out.add_assign(&self.minor(&left, false)?.mul(&self.minor(&right, true)?));
        }
        Ok(out)
    }

    pub fn build_system(&self) -> Result<InvariantSystem> {
        let mut base_invs = Vec::with_capacity(self.base.len());
        for xi in &self.base.roots {
            let p = self.minor(xi, false)?;
            if p.is_zero() {
                return Err(Error::Construction(format!("M for {xi} vanishes")));
            }
            base_invs.push((*xi, p));
        }
        let mut pair_invs = Vec::with_capacity(self.pairs.len());
        for q in &self.pairs {
            let p = self.build_l(q)?;
            if p.is_zero() {
                return Err(Error::Construction(format!("L for {} vanishes", q.phi)));
            }
            pair_invs.push((*q, p));
        }
        Ok(InvariantSystem {
            base_invs,
            pair_invs,
            dim_nilradical: self.levi.dim_nilradical(),
        })
    }
}

/// The polynomials `M_xi` and `L_phi` for one shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSystem {
    pub base_invs: Vec<(Root, Polynomial)>,
    pub pair_invs: Vec<(AdmissiblePair, Polynomial)>,
    pub dim_nilradical: usize,
}

impl InvariantSystem {
    pub fn base_count(&self) -> usize {
        self.base_invs.len()
    }

    pub fn pair_count(&self) -> usize {
        self.pair_invs.len()
    }

    pub fn len(&self) -> usize {
        self.base_invs.len() + self.pair_invs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(name, kind, polynomial)` with kind `"M"` or `"L"`.
    pub fn named(&self) -> Vec<(String, &'static str, &Polynomial)> {
        let mut out: Vec<(String, &'static str, &Polynomial)> = self
            .base_invs
            .iter()
            .map(|(r, p)| (format!("M[{r}]"), "M", p))
            .collect();
        out.extend(
            self.pair_invs
                .iter()
                .map(|(q, p)| (format!("L[{}]", q.phi), "L", p)),
        );
        out
    }

    pub fn polynomials(&self) -> Vec<&Polynomial> {
        self.base_invs
            .iter()
            .map(|(_, p)| p)
            .chain(self.pair_invs.iter().map(|(_, p)| p))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: i32, j: i32) -> Polynomial {
        Polynomial::var(Var::x(i, j))
    }

    fn labels(v: &[i32]) -> Vec<MirrorIndex> {
        v.iter().copied().map(MirrorIndex).collect()
    }

    fn b8() -> Construction {
        Construction::new(ParabolicShape::parse(Letter::B, 8, &[1, 2, 5, 1, 5, 2, 1]).unwrap())
            .unwrap()
    }

    fn d8() -> Construction {
        Construction::new(ParabolicShape::parse(Letter::D, 8, &[3, 1, 2, 4, 2, 1, 3]).unwrap())
            .unwrap()
    }

    #[test]
    fn formal_matrix_cells() {
        let c = b8();
        let m = &c.formal.matrix;
        let at = |i, j| m.get(MirrorIndex(i), MirrorIndex(j)).clone();
        assert_eq!(at(7, 0), x(7, 0));
        assert_eq!(at(0, -8), x(8, 0).neg());
        assert!(at(8, -8).is_zero());
        let sp = Construction::new(ParabolicShape::parse(Letter::C, 3, &[1, 4, 1]).unwrap()).unwrap();
        let at = |i, j| sp.formal.matrix.get(MirrorIndex(i), MirrorIndex(j)).clone();
        // e1+e3: x[1,-3] at (1,-3) and (3,-1)
        assert_eq!(at(1, -3), x(1, -3));
        assert_eq!(at(3, -1), x(1, -3));
        assert_eq!(at(1, 2), x(1, 2));
        assert_eq!(at(-2, -1), x(1, 2).neg());
        assert_eq!(at(1, -1), x(1, -1));
    }

    #[test]
    fn single_block_matrix_is_zero() {
        let c = Construction::new(ParabolicShape::parse(Letter::D, 3, &[6]).unwrap()).unwrap();
        assert!(c.formal.matrix.is_zero());
        assert!(c.build_system().unwrap().is_empty());
    }

    #[test]
    fn s_gamma_examples() {
        let c = b8();
        assert_eq!(s_gamma(&Root::Plus(6, 7), &c.base), vec![Root::Single(8)]);
        let c = d8();
        let mut got = s_gamma(&Root::Minus(2, 6), &c.base);
        got.sort();
        assert_eq!(got, vec![Root::Minus(3, 4), Root::Minus(4, 5)]);
        assert!(s_gamma(&Root::Minus(6, 7), &c.base).is_empty());
    }

    #[test]
    fn b8_bar_minor_labels() {
        let c = b8();
        let bar = c.minor_labels(&Root::Plus(6, 7), true).unwrap();
        assert_eq!(bar.rows, labels(&[7, 8, 0]));
        assert_eq!(bar.cols, labels(&[0, -8, -6]));
        let plain = c.minor_labels(&Root::Plus(6, 7), false).unwrap();
        assert_eq!(plain.rows, labels(&[6, 8, 0]));
        assert_eq!(plain.cols, labels(&[0, -8, -7]));
    }

    #[test]
    fn d8_minors() {
        let c = d8();
        assert_eq!(c.minor(&Root::Minus(6, 7), false).unwrap(), x(6, 7));
        assert_eq!(c.minor(&Root::Minus(4, 5), false).unwrap(), x(4, 5));
        let want = x(5, 7).mul(&x(6, 8)).sub(&x(5, 8).mul(&x(6, 7)));
        assert_eq!(c.minor(&Root::Minus(5, 8), false).unwrap(), want);
    }

    #[test]
    fn sp4_system() {
        let c = Construction::new(ParabolicShape::parse(Letter::C, 2, &[1, 2, 1]).unwrap()).unwrap();
        let sys = c.build_system().unwrap();
        assert_eq!(sys.base_invs, vec![(Root::Minus(1, 2), x(1, 2))]);
        assert!(sys.pair_invs.is_empty());
    }

    #[test]
    fn l_for_chain_pair() {
        let c = d8();
        let q = c.pairs.iter().find(|q| q.phi == Root::Minus(4, 6)).unwrap();
        let want = x(4, 6).mul(&x(6, 7)).add(&x(4, 5).mul(&x(5, 7))).neg();
        assert_eq!(c.build_l(q).unwrap(), want);
    }
}
