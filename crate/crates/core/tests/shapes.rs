use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;

use nilinv::base::{compute_base, BaseSet};
use nilinv::invariants::Construction;
use nilinv::parabolic::{palindromic_partitions, ParabolicShape};
use nilinv::poly::{Polynomial, Var};
use nilinv::report;
use nilinv::roots::{GroupType, Letter, Root};
use nilinv::verify::{adjoint_image, check_invariance, pi_restrict_check};

fn cons(letter: Letter, n: usize, blocks: &[usize]) -> Construction {
    Construction::new(ParabolicShape::parse(letter, n, blocks).unwrap()).unwrap()
}

fn shapes(max_n: usize) -> Vec<(Letter, usize, Vec<usize>)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for letter in [Letter::B, Letter::C, Letter::D] {
            let m = if letter == Letter::B { 2 * n + 1 } else { 2 * n };
            for b in palindromic_partitions(m) {
                out.push((letter, n, b));
            }
        }
    }
    out
}

/// Comparability from lattice vectors alone: `a - b` is a positive root or
/// a doubled unit vector.
struct LatticeOrder {
    n: usize,
    steps: HashSet<Vec<i32>>,
}

impl LatticeOrder {
    fn new(ty: GroupType) -> Self {
        let n = ty.n();
        let mut steps: HashSet<Vec<i32>> =
            ty.positive_roots().iter().map(|r| r.lattice(n)).collect();
        for i in 0..n {
            let mut v = vec![0; n];
            v[i] = 2;
            steps.insert(v);
        }
        LatticeOrder { n, steps }
    }

    fn above(&self, a: &Root, b: &Root) -> bool {
        let d: Vec<i32> = a
            .lattice(self.n)
            .iter()
            .zip(b.lattice(self.n))
            .map(|(x, y)| x - y)
            .collect();
        self.steps.contains(&d)
    }

    /// Generation by generation: take the minimal elements, drop everything
    /// above them, repeat.
    fn base(&self, set: &BTreeSet<Root>) -> BTreeSet<Root> {
        let mut rest: Vec<Root> = set.iter().copied().collect();
        let mut out = BTreeSet::new();
        while !rest.is_empty() {
            let minimal: Vec<Root> = rest
                .iter()
                .filter(|g| !rest.iter().any(|x| self.above(g, x)))
                .copied()
                .collect();
            rest.retain(|g| !minimal.contains(g) && !minimal.iter().any(|x| self.above(g, x)));
            out.extend(minimal);
        }
        out
    }
}

fn diagram_cells(text: &str) -> Vec<(i32, i32, char)> {
    let mut lines = text.lines();
    let header: Vec<i32> = lines
        .next()
        .unwrap()
        .split_whitespace()
        .map(|s| s.parse().unwrap())
        .collect();
    let mut out = Vec::new();
    for line in lines.filter(|l| !l.trim_start().starts_with('+')) {
        let (label, rest) = line.split_once('|').unwrap();
        let row: i32 = label.trim().parse().unwrap();
        let chars: Vec<char> = rest.chars().collect();
        for (k, &col) in header.iter().enumerate() {
            let ch = chars[4 * k + 1];
            if ch != ' ' {
                out.push((row, col, ch));
            }
        }
    }
    out
}

#[test]
fn base_matches_lattice_oracle_on_family() {
    for (letter, n, blocks) in shapes(6) {
        let c = cons(letter, n, &blocks);
        let oracle = LatticeOrder::new(c.group());
        let got: BTreeSet<Root> = c.base.roots.iter().copied().collect();
        assert_eq!(got, oracle.base(&c.levi.nilradical), "{letter}{n} {blocks:?}");
        for a in &got {
            for b in &got {
                assert!(!oracle.above(a, b), "{letter}{n} {blocks:?}: {a} > {b}");
            }
        }
    }
}

#[test]
fn b8_fixture() {
    let c = cons(Letter::B, 8, &[1, 2, 5, 1, 5, 2, 1]);
    let s: BTreeSet<Root> = c.base.roots.iter().copied().collect();
    let want: BTreeSet<Root> = [
        Root::Minus(1, 2),
        Root::Minus(2, 5),
        Root::Minus(3, 4),
        Root::Plus(4, 5),
        Root::Plus(6, 7),
        Root::Single(8),
    ]
    .into();
    assert_eq!(s, want);
    let phi: BTreeSet<Root> = c.phi().into_iter().collect();
    let want: BTreeSet<Root> = [
        Root::Minus(1, 3),
        Root::Minus(2, 6),
        Root::Minus(3, 6),
        Root::Minus(2, 8),
        Root::Minus(3, 8),
    ]
    .into();
    assert_eq!(phi, want);
    let cells = diagram_cells(&report::render_diagram(&c, false));
    assert!(cells.contains(&(0, -8, '⊗')));
}

#[test]
fn d8_diagram_marks() {
    let c = cons(Letter::D, 8, &[3, 1, 2, 4, 2, 1, 3]);
    let cells = diagram_cells(&report::render_diagram(&c, false));
    let count = |ch| cells.iter().filter(|t| t.2 == ch).count();
    assert_eq!(count('⊗'), 6);
    assert_eq!(count('×'), 5);
    assert!(cells.contains(&(7, -6, '×')));
    assert!(cells.contains(&(-8, 1, '⊗')) || cells.contains(&(8, -1, '⊗')));
}

#[test]
fn single_block_diagram_has_no_marks() {
    for (letter, n, m) in [(Letter::B, 3, 7), (Letter::C, 3, 6), (Letter::D, 4, 8)] {
        let c = cons(letter, n, &[m]);
        let cells = diagram_cells(&report::render_diagram(&c, true));
        assert!(cells.iter().all(|t| t.2 == '1' && t.0 == t.1));
        assert_eq!(cells.len(), m);
    }
}

#[test]
fn d8_restrictions() {
    let c = cons(Letter::D, 8, &[3, 1, 2, 4, 2, 1, 3]);
    let sys = c.build_system().unwrap();
    let out = pi_restrict_check(&sys, &c);
    let image = |name: &str| {
        out.forms
            .iter()
            .find(|f| f.polynomial == name)
            .unwrap_or_else(|| panic!("{name} missing"))
            .image
            .clone()
    };
    assert_eq!(image("M[e5-e8]"), "-x[5,8]*x[6,7]");
    assert_eq!(image("L[e4-e6]"), "-x[4,6]*x[6,7]");
}

#[test]
fn sp16_system_is_invariant() {
    let c = cons(Letter::C, 8, &[3, 1, 2, 4, 2, 1, 3]);
    let sys = c.build_system().unwrap();
    assert_eq!(sys.base_count(), c.base.len());
    assert_eq!(sys.pair_count(), 3);
    assert!(check_invariance(&sys, &c).ok());
}

fn roundtrip(c: &Construction) {
    let sys = c.build_system().unwrap();
    let doc = report::document(c, Some(&sys), serde_json::Value::Null);
    let text = serde_json::to_string(&doc).unwrap();
    assert_eq!(report::parse_document(&text).unwrap(), doc);
    let parsed = report::parse_invariants(&text).unwrap();
    let named = sys.named();
    assert_eq!(parsed.len(), named.len());
    for ((name, kind, p), (n2, k2, q)) in parsed.iter().zip(&named) {
        assert_eq!((name, kind.as_str()), (n2, *k2));
        assert_eq!(p, *q);
    }
    let ty = c.group();
    for (r, j) in c.base.roots.iter().zip(&doc.base) {
        assert_eq!(j.to_root().unwrap(), *r);
        assert_eq!(j.formal, r.is_formal(ty));
    }
}

#[test]
fn json_roundtrip_large_shapes() {
    roundtrip(&cons(Letter::D, 8, &[3, 1, 2, 4, 2, 1, 3]));
    roundtrip(&cons(Letter::C, 8, &[3, 1, 2, 4, 2, 1, 3]));
    roundtrip(&cons(Letter::B, 8, &[1, 2, 5, 1, 5, 2, 1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn structural_invariants(idx in 0usize..10_000) {
        let all = shapes(5);
        let (letter, n, blocks) = &all[idx % all.len()];
        let c = cons(*letter, *n, blocks);
        let ty = c.group();

        // Re-running the base on S plus some covered roots gives S back.
        let extra: BTreeSet<Root> = c.levi.nilradical.iter()
            .enumerate()
            .filter(|(k, _)| (idx >> (k % 13)) & 1 == 1)
            .map(|(_, g)| *g)
            .chain(c.base.roots.iter().copied())
            .collect();
        let again: BaseSet = compute_base(&extra, ty).unwrap();
        prop_assert_eq!(&again.roots, &c.base.roots);

        let phi = c.phi();
        for p in &phi {
            prop_assert!(c.levi.nilradical.contains(p));
            prop_assert!(!c.base.contains(p));
        }
        prop_assert_eq!(phi.iter().collect::<HashSet<_>>().len(), phi.len());

        let cells = diagram_cells(&report::render_diagram(&c, true));
        prop_assert_eq!(cells.iter().filter(|t| t.2 == 'S').count(), c.base.len());
        prop_assert_eq!(cells.iter().filter(|t| t.2 == 'P').count(), phi.len());

        roundtrip(&c);
    }

    #[test]
    fn corrupting_an_invariant_is_detected(idx in 0usize..10_000) {
        let all: Vec<_> = shapes(4)
            .into_iter()
            .filter(|(l, n, b)| !cons(*l, *n, b).base.is_empty())
            .collect();
        let (letter, n, blocks) = &all[idx % all.len()];
        let c = cons(*letter, *n, blocks);
        let mut sys = c.build_system().unwrap();
        prop_assert!(check_invariance(&sys, &c).ok());
        let positive = c.group().positive_roots();
        let moved: Option<Var> = c
            .formal
            .variables()
            .into_iter()
            .find(|&v| {
                let p = Polynomial::var(v);
                positive.iter().any(|a| adjoint_image(&p, a, &c).unwrap() != p)
            });
        // Shapes whose coordinates are all fixed have nothing to corrupt.
        prop_assume!(moved.is_some());
        let moved = Polynomial::var(moved.unwrap());
        sys.base_invs[0].1 = sys.base_invs[0].1.add(&moved);
        prop_assert!(!check_invariance(&sys, &c).ok());
    }
}
