//! Structural statements about the base and the minors, checked per shape.

use serde::Serialize;

use crate::base::check_base;
use crate::invariants::Construction;
use crate::roots::{Letter, MirrorIndex, Root};

/// One property evaluated on one shape; `failures` lists offending roots.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl PropertyCheck {
    fn new(name: &'static str) -> Self {
        PropertyCheck {
            name,
            ..Default::default()
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Candidate forms of a base root below `e_i + e_j` (i < j).
fn plus_case(i: usize, j: usize, xi: &Root) -> bool {
    match *xi {
        Root::Plus(p, q) => {
            let other_with_j = (p == j && q != i) || (q == j && p != i);
            let k = if p == j { q } else { p };
            (other_with_j && k > i) || (p == i && q > j)
        }
        Root::Minus(p, k) => (p == i && k > i) || (p == j && k > j),
        Root::Single(p) => p == i || p == j,
        Root::Double(p) => p == i || p == j,
    }
}

/// Every root of `M \ S` lies above a base root of a prescribed form; one check
/// per kind of root.
pub fn dominance(cons: &Construction) -> [PropertyCheck; 3] {
    let ty = cons.group();
    let mut plus = PropertyCheck::new("dominance.plus");
    let mut minus = PropertyCheck::new("dominance.minus");
    let mut double = PropertyCheck::new("dominance.double");
    let base = &cons.base.roots;
    for gamma in cons.levi.nilradical.iter().filter(|g| !cons.base.contains(g)) {
        match *gamma {
            Root::Plus(i, j) => {
                let ok = base.iter().any(|xi| {
                    plus_case(i, j, xi) && ty.succ_extended(gamma, xi)
                });
                plus.record(ok, || gamma.to_string());
            }
            Root::Minus(i, j) => {
                let (mi, mj) = (MirrorIndex(-(i as i32)), MirrorIndex(-(j as i32)));
                let ok = base.iter().any(|xi| {
                    let p = xi.position();
                    (p.row == mj && p.col < mi) || (p.col == mi && MirrorIndex(j as i32) < p.row)
                });
                minus.record(ok, || gamma.to_string());
            }
            Root::Double(i) => {
                let (pi, mi) = (MirrorIndex(i as i32), MirrorIndex(-(i as i32)));
                let ok = base.iter().any(|xi| {
                    let p = xi.position();
                    p.col == mi && p.row > pi
                });
                double.record(ok, || gamma.to_string());
            }
            Root::Single(_) => {}
        }
    }
    [plus, minus, double]
}

/// Type C: every column `-i` met by the nilradical is met by the base.
pub fn dominance_columns(cons: &Construction) -> PropertyCheck {
    let mut check = PropertyCheck::new("dominance.columns");
    let ty = cons.group();
    if ty.letter() != Letter::C {
        return check;
    }
    for i in 1..=ty.n() as i32 {
        let col = MirrorIndex(-i);
        if cons.levi.nilradical.iter().any(|g| g.position().col == col) {
            let ok = cons.base.roots.iter().any(|xi| xi.position().col == col);
            check.record(ok, || format!("column {}", -i));
        }
    }
    check
}

/// Gaps in the row labels of `M_xi` can only be `a`; column labels have no gaps.
pub fn label_gaps(cons: &Construction) -> [PropertyCheck; 2] {
    let ty = cons.group();
    let labels = ty.indices();
    let mut rows = PropertyCheck::new("label_gaps.rows");
    let mut cols = PropertyCheck::new("label_gaps.cols");
    for xi in &cons.base.roots {
        let a = xi.position().row;
        let Ok(m) = cons.minor_labels(xi, false) else {
            rows.record(false, || format!("{xi}: labels"));
            continue;
        };
        let gaps = |set: &[MirrorIndex]| -> Vec<MirrorIndex> {
            match (set.first(), set.last()) {
                (Some(&lo), Some(&hi)) => labels
                    .iter()
                    .copied()
                    .filter(|&i| lo < i && i < hi && !set.contains(&i))
                    .collect(),
                _ => Vec::new(),
            }
        };
        let row_gaps = gaps(&m.rows);
        rows.record(row_gaps.iter().all(|&i| i == a), || {
            format!("{xi}: rows {:?}", row_gaps)
        });
        let col_gaps = gaps(&m.cols);
        cols.record(col_gaps.is_empty(), || format!("{xi}: columns {:?}", col_gaps));
    }
    [rows, cols]
}

pub fn base_antichain(cons: &Construction) -> PropertyCheck {
    let mut check = PropertyCheck::new("base.antichain_covering");
    let res = check_base(&cons.base, &cons.levi.nilradical, cons.group());
    check.record(res.is_ok(), || res.unwrap_err().to_string());
    check
}

/// `M_gamma = +-Mbar_gamma` for every root of the nilradical.
pub fn minor_symmetry(cons: &Construction) -> PropertyCheck {
    let mut check = PropertyCheck::new("minor.bar_symmetry");
    for gamma in &cons.levi.nilradical {
        let ok = match (cons.minor(gamma, false), cons.minor(gamma, true)) {
            (Ok(m), Ok(mb)) => match m.proportional_to(&mb) {
                Some(c) => c.is_one() || (-c).is_one(),
                None => false,
            },
            _ => false,
        };
        check.record(ok, || gamma.to_string());
    }
    check
}

pub fn all_properties(cons: &Construction) -> Vec<PropertyCheck> {
    let mut out = Vec::new();
    out.push(base_antichain(cons));
    out.extend(dominance(cons));
    out.push(dominance_columns(cons));
    out.extend(label_gaps(cons));
    out.push(minor_symmetry(cons));
    out
}
