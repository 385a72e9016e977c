//! The base of the nilradical root set: the antichain reached by repeatedly
//! peeling off minimal elements.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::roots::{Comparison, GroupType, Root};

/// The base `S` together with the generations it was peeled in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSet {
    pub roots: Vec<Root>,
    pub generations: Vec<Vec<Root>>,
}

impl BaseSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, r: &Root) -> bool {
        self.roots.contains(r)
    }
}

/// Elements of `set` that dominate nothing else in `set`.
pub fn minimal_elements(set: &BTreeSet<Root>, ty: GroupType) -> BTreeSet<Root> {
    set.iter()
        .filter(|g| !set.iter().any(|x| ty.succ_extended(g, x)))
        .copied()
        .collect()
}

pub fn compute_base(nilradical: &BTreeSet<Root>, ty: GroupType) -> Result<BaseSet> {
    let mut rest = nilradical.clone();
    let mut generations = Vec::new();
    while !rest.is_empty() {
        let minimal = minimal_elements(&rest, ty);
        if minimal.is_empty() {
            // Cannot happen for a finite set; the relation has no cycles.
            return Err(Error::Construction("no minimal element in a nonempty set".into()));
        }
        rest.retain(|g| !minimal.contains(g) && !minimal.iter().any(|x| ty.succ_extended(g, x)));
        generations.push(minimal.into_iter().collect::<Vec<_>>());
    }
    let mut roots: Vec<Root> = generations.iter().flatten().copied().collect();
    roots.sort();
    let base = BaseSet { roots, generations };
    check_base(&base, nilradical, ty)?;
    Ok(base)
}

/// Antichain and covering conditions.
pub fn check_base(base: &BaseSet, nilradical: &BTreeSet<Root>, ty: GroupType) -> Result<()> {
    for (k, a) in base.roots.iter().enumerate() {
        for b in &base.roots[k + 1..] {
            if ty.compare_extended(a, b) != Comparison::Incomparable {
                return Err(Error::Construction(format!(
                    "base elements {a} and {b} are comparable"
                )));
            }
        }
    }
    for g in nilradical {
        if !base.contains(g) && !base.roots.iter().any(|x| ty.succ_extended(g, x)) {
            return Err(Error::Construction(format!(
                "{g} is not above any base element"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::ParabolicShape;
    use crate::roots::Letter;

    #[test]
    fn minimal_in_sp4() {
        let shape = ParabolicShape::parse(Letter::C, 2, &[1, 2, 1]).unwrap();
        let levi = shape.split_roots();
        let want: BTreeSet<Root> = [Root::Minus(1, 2), Root::Plus(1, 2), Root::Double(1)].into();
        assert_eq!(levi.nilradical, want);
        let min = minimal_elements(&levi.nilradical, shape.group());
        assert_eq!(min.into_iter().collect::<Vec<_>>(), vec![Root::Minus(1, 2)]);
        let base = compute_base(&levi.nilradical, shape.group()).unwrap();
        assert_eq!(base.roots, vec![Root::Minus(1, 2)]);
    }

    #[test]
    fn trivial_sets() {
        let ty = GroupType::new(Letter::D, 3).unwrap();
        assert!(minimal_elements(&BTreeSet::new(), ty).is_empty());
        let one: BTreeSet<Root> = [Root::Minus(1, 2)].into();
        assert_eq!(minimal_elements(&one, ty), one);
        assert!(compute_base(&BTreeSet::new(), ty).unwrap().is_empty());
    }

    #[test]
    fn d8_base() {
        let shape = ParabolicShape::parse(Letter::D, 8, &[3, 1, 2, 4, 2, 1, 3]).unwrap();
        let base = compute_base(&shape.split_roots().nilradical, shape.group()).unwrap();
        let mut want = vec![
            Root::Minus(6, 7),
            Root::Minus(5, 8),
            Root::Minus(4, 5),
            Root::Minus(3, 4),
            Root::Minus(2, 6),
            Root::Plus(1, 8),
        ];
        want.sort();
        assert_eq!(base.roots, want);
    }

    #[test]
    fn base_is_stable_under_reinsertion() {
        let shape = ParabolicShape::parse(Letter::B, 4, &[2, 1, 3, 1, 2]).unwrap();
        let m = shape.split_roots().nilradical;
        let ty = shape.group();
        let base = compute_base(&m, ty).unwrap();
        let again = compute_base(&m.iter().copied().collect(), ty).unwrap();
        assert_eq!(base.roots, again.roots);
        let s: BTreeSet<Root> = base.roots.iter().copied().collect();
        assert_eq!(minimal_elements(&s, ty), s);
    }
}
