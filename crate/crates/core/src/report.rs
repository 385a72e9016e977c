//! Text and JSON rendering, JSON parsing, and the root diagram.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expanded::{AdmissiblePair, PairCase};
use crate::invariants::{Construction, InvariantSystem};
use crate::poly::{Monomial, Polynomial, Rational, Var};
use crate::properties::PropertyCheck;
use crate::roots::{GroupType, Letter, MirrorIndex, Root};
use crate::verify::VerificationReport;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootJson {
    pub kind: String,
    pub i: usize,
    pub j: usize,
    pub formal: bool,
}

impl RootJson {
    pub fn new(root: &Root, ty: GroupType) -> Self {
        let (i, j) = root.indices();
        RootJson {
            kind: root.kind_name().to_string(),
            i,
            j,
            formal: root.is_formal(ty),
        }
    }

    pub fn to_root(&self) -> Result<Root> {
        let bad = || Error::Parse(format!("bad root {self:?}"));
        let root = match self.kind.as_str() {
            "minus" => Root::Minus(self.i, self.j),
            "plus" => Root::Plus(self.i, self.j),
            "double" => Root::Double(self.i),
            "single" => Root::Single(self.i),
            _ => return Err(bad()),
        };
        let (i, j) = root.indices();
        let two = matches!(root, Root::Minus(..) | Root::Plus(..));
        if i == 0 || (two && j <= i) || (!two && self.j != 0) || j != self.j {
            return Err(bad());
        }
        Ok(root)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJson {
    pub xi: RootJson,
    pub xi_prime: RootJson,
    pub alpha: RootJson,
    pub phi: RootJson,
    pub case: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub monomial: Vec<[i32; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantJson {
    pub name: String,
    pub kind: String,
    pub poly: Vec<TermJson>,
}

/// Root data of the shape, emitted by the `roots` subcommand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootsJson {
    pub dim_nilradical: usize,
    pub central_offset: usize,
    pub k: Option<usize>,
    pub nilradical: Vec<RootJson>,
    pub levi: Vec<RootJson>,
    pub gamma_r: Vec<RootJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Document {
    #[serde(rename = "type")]
    pub letter: Letter,
    pub n: usize,
    pub blocks: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub roots: Option<RootsJson>,
    #[serde(rename = "S")]
    pub base: Vec<RootJson>,
    #[serde(rename = "Phi")]
    pub phi: Vec<RootJson>,
    #[serde(rename = "Q")]
    pub pairs: Vec<PairJson>,
    pub invariants: Vec<InvariantJson>,
    pub report: serde_json::Value,
}

pub fn poly_to_json(p: &Polynomial) -> Vec<TermJson> {
    p.sorted_terms()
        .into_iter()
        .map(|(m, c)| TermJson {
            coeff: format!("{}/{}", c.numer(), c.denom()),
            monomial: m
                .powers()
                .iter()
                .map(|&(v, e)| {
                    let (i, j) = v.indices().unwrap_or((0, 0));
                    [i, j, e as i32]
                })
                .collect(),
        })
        .collect()
}

pub fn poly_from_json(terms: &[TermJson]) -> Result<Polynomial> {
    let mut p = Polynomial::zero();
    for t in terms {
        let c: Rational = t.coeff.parse().map_err(Error::Parse)?;
        let mut powers = Vec::with_capacity(t.monomial.len());
        for &[i, j, e] in &t.monomial {
            if i.abs() > 31 || j.abs() > 31 || !(1..=u16::MAX as i32).contains(&e) {
                return Err(Error::Parse(format!("bad factor [{i},{j},{e}]")));
            }
            powers.push((Var::x(i, j), e as u16));
        }
        p.add_term(Monomial::from_powers(powers), c);
    }
    Ok(p)
}

fn pair_json(q: &AdmissiblePair, ty: GroupType) -> PairJson {
    PairJson {
        xi: RootJson::new(&q.xi, ty),
        xi_prime: RootJson::new(&q.xi_prime, ty),
        alpha: RootJson::new(&q.alpha, ty),
        phi: RootJson::new(&q.phi, ty),
        case: q.case.name().to_string(),
    }
}

pub fn roots_json(cons: &Construction) -> RootsJson {
    let ty = cons.group();
    let list = |s: &std::collections::BTreeSet<Root>| s.iter().map(|r| RootJson::new(r, ty)).collect();
    RootsJson {
        dim_nilradical: cons.levi.dim_nilradical(),
        central_offset: cons.shape.central_offset(),
        k: cons.levi.k,
        nilradical: list(&cons.levi.nilradical),
        levi: list(&cons.levi.levi),
        gamma_r: list(&cons.levi.gamma_r),
    }
}

pub fn document(
    cons: &Construction,
    sys: Option<&InvariantSystem>,
    report: serde_json::Value,
) -> Document {
    let ty = cons.group();
    Document {
        letter: ty.letter(),
        n: ty.n(),
        blocks: cons.shape.blocks().to_vec(),
        roots: None,
        base: cons.base.roots.iter().map(|r| RootJson::new(r, ty)).collect(),
        phi: cons.phi().iter().map(|r| RootJson::new(r, ty)).collect(),
        pairs: cons.pairs.iter().map(|q| pair_json(q, ty)).collect(),
        invariants: sys
            .map(|s| {
                s.named()
                    .into_iter()
                    .map(|(name, kind, p)| InvariantJson {
                        name,
                        kind: kind.to_string(),
                        poly: poly_to_json(p),
                    })
                    .collect()
            })
            .unwrap_or_default(),
        report,
    }
}

/// Invariants of a parsed document as `(name, kind, polynomial)`.
pub fn parse_invariants(json: &str) -> Result<Vec<(String, String, Polynomial)>> {
    let doc: Document = serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
    doc.invariants
        .iter()
        .map(|inv| Ok((inv.name.clone(), inv.kind.clone(), poly_from_json(&inv.poly)?)))
        .collect()
}

pub fn parse_document(json: &str) -> Result<Document> {
    serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
}

/// Machine-readable summary for the `report` field.
pub fn report_value(
    verification: Option<&VerificationReport>,
    properties: Option<&[PropertyCheck]>,
) -> serde_json::Value {
    let mut map = serde_json::Map::new();
    if let Some(v) = verification {
        map.insert("passed".into(), v.passed().into());
        map.insert("pi_forms_ok".into(), v.pi.ok().into());
        map.insert(
            "verification".into(),
            serde_json::to_value(v).expect("serializable report"),
        );
    }
    if let Some(p) = properties {
        map.insert(
            "properties".into(),
            serde_json::to_value(p).expect("serializable properties"),
        );
    }
    serde_json::Value::Object(map)
}

fn join(roots: &[Root]) -> String {
    roots.iter().map(Root::to_string).collect::<Vec<_>>().join(", ")
}

fn header(cons: &Construction) -> String {
    let blocks: Vec<String> = cons.shape.blocks().iter().map(usize::to_string).collect();
    format!("{} blocks ({})\n", cons.group(), blocks.join(","))
}

pub fn roots_text(cons: &Construction) -> String {
    let mut out = header(cons);
    let v = |s: &std::collections::BTreeSet<Root>| s.iter().copied().collect::<Vec<_>>();
    let _ = writeln!(out, "dim m = {}", cons.levi.dim_nilradical());
    let _ = writeln!(out, "R = {}", cons.shape.central_offset());
    match cons.levi.k {
        Some(k) => {
            let _ = writeln!(out, "k = {k}");
        }
        None => out.push_str("k = none\n"),
    }
    let _ = writeln!(out, "M = {{{}}}", join(&v(&cons.levi.nilradical)));
    let _ = writeln!(out, "Levi = {{{}}}", join(&v(&cons.levi.levi)));
    let _ = writeln!(out, "Gamma_r = {{{}}}", join(&v(&cons.levi.gamma_r)));
    out
}

pub fn base_text(cons: &Construction) -> String {
    let mut out = header(cons);
    let _ = writeln!(out, "S = {{{}}}", join(&cons.base.roots));
    for (t, g) in cons.base.generations.iter().enumerate() {
        let _ = writeln!(out, "S_{} = {{{}}}", t + 1, join(g));
    }
    out
}

pub fn pairs_text(cons: &Construction) -> String {
    let mut out = header(cons);
    let _ = writeln!(out, "S = {{{}}}", join(&cons.base.roots));
    for q in &cons.pairs {
        let _ = writeln!(
            out,
            "q = ({}, {})  alpha = {}  phi = {}  [{}]",
            q.xi,
            q.xi_prime,
            q.alpha,
            q.phi,
            q.case.name()
        );
    }
    let _ = writeln!(out, "Phi = {{{}}}", join(&cons.phi()));
    out
}

pub fn invariants_text(cons: &Construction, sys: &InvariantSystem) -> String {
    let mut out = header(cons);
    for (name, _, p) in sys.named() {
        let _ = writeln!(out, "{name} = {p}");
    }
    out
}

pub fn verify_text(report: &VerificationReport) -> String {
    let b = report.bounds;
    let mut out = String::new();
    let _ = writeln!(out, "|S| = {}, |Phi| = {}, dim m = {}", b.base, b.phi, b.dim_nilradical);
    let inv = &report.invariance;
    let _ = writeln!(
        out,
        "invariance: {} ({} checks, {} failures, closure {})",
        ok(report.invariance_ok()),
        inv.checks,
        inv.failures.len(),
        ok(inv.closure_ok)
    );
    for f in &inv.failures {
        let _ = writeln!(out, "  {} moved by g[{}]", f.polynomial, f.alpha);
    }
    for e in &inv.closure_errors {
        let _ = writeln!(out, "  {e}");
    }
    let _ = writeln!(
        out,
        "independence: {} (Jacobian rank {} of {})",
        ok(report.independence_ok()),
        report.independence_rank,
        b.trdeg_lower
    );
    let _ = writeln!(out, "trdeg lower bound: {}", b.trdeg_lower);
    let _ = writeln!(
        out,
        "orbit bound: {} (sampled ranks {:?}, bound {})",
        ok(report.orbit_ok()),
        report.orbit_rank_samples,
        b.orbit_upper
    );
    let pi = &report.pi;
    let _ = writeln!(
        out,
        "pi forms: {} (injective {})",
        ok(pi.ok()),
        ok(pi.injective)
    );
    for f in pi.forms.iter().filter(|f| !f.ok()) {
        let _ = writeln!(out, "  pi({}) = {}", f.polynomial, f.image);
    }
    let _ = writeln!(out, "verified (invariance, independence, orbit bound): {}", ok(report.passed()));
    out
}

pub fn properties_text(props: &[PropertyCheck]) -> String {
    let mut out = String::new();
    for p in props {
        let _ = writeln!(out, "{}: {} ({} checked)", p.name, ok(p.ok()), p.checked);
        for f in &p.failures {
            let _ = writeln!(out, "  {f}");
        }
    }
    out
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

/// The `m x m` grid with `S` and `Phi` marked at their positions.
pub fn render_diagram(cons: &Construction, ascii: bool) -> String {
    let ty = cons.group();
    let labels = ty.indices();
    let (s_mark, p_mark) = if ascii { ("S", "P") } else { ("⊗", "×") };
    let block = |i: MirrorIndex| cons.shape.block_of(i);
    let boundary_after = |k: usize| k + 1 < labels.len() && block(labels[k]) != block(labels[k + 1]);
    let mut marks = std::collections::HashMap::new();
    for r in &cons.base.roots {
        marks.insert(r.position(), s_mark);
    }
    for r in cons.phi() {
        marks.insert(r.position(), p_mark);
    }

    let rule = {
        let mut s = String::from("    +");
        for k in 0..labels.len() {
            s.push_str("---");
            s.push(if boundary_after(k) || k + 1 == labels.len() { '+' } else { '-' });
        }
        s.push('\n');
        s
    };
    let mut out = String::from("    ");
    for c in &labels {
        let _ = write!(out, "{:>3} ", c.value());
    }
    out = out.trim_end().to_string();
    out.push('\n');
    out.push_str(&rule);
    for (rk, &r) in labels.iter().enumerate() {
        let _ = write!(out, "{:>3} |", r.value());
        for (ck, &c) in labels.iter().enumerate() {
            let cell = if r == c {
                "1"
            } else {
                marks
                    .get(&crate::roots::Position { row: r, col: c })
                    .copied()
                    .unwrap_or(" ")
            };
            let _ = write!(out, " {cell} ");
            out.push(if boundary_after(ck) || ck + 1 == labels.len() { '|' } else { ' ' });
        }
        out.push('\n');
        if boundary_after(rk) || rk + 1 == labels.len() {
            out.push_str(&rule);
        }
    }
    out
}

pub fn case_from_name(name: &str) -> Option<PairCase> {
    match name {
        "chain" => Some(PairCase::Chain),
        "right-of-central" => Some(PairCase::RightOfCentral),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::ParabolicShape;

    fn cons(letter: Letter, n: usize, blocks: &[usize]) -> Construction {
        Construction::new(ParabolicShape::parse(letter, n, blocks).unwrap()).unwrap()
    }

    #[test]
    fn root_json_round_trip() {
        let ty = GroupType::new(Letter::D, 4).unwrap();
        for r in ty.positive_roots().into_iter().chain([Root::Double(2)]) {
            let j = RootJson::new(&r, ty);
            assert_eq!(j.to_root().unwrap(), r);
        }
        assert!(RootJson::new(&Root::Double(2), ty).formal);
        let bad = RootJson { kind: "minus".into(), i: 3, j: 2, formal: false };
        assert!(bad.to_root().is_err());
    }

    #[test]
    fn coefficients_are_fractions() {
        let p = Polynomial::var(Var::x(7, 0)).scale(&Rational::new(-3, 2));
        let j = poly_to_json(&p);
        assert_eq!(j[0].coeff, "-3/2");
        assert_eq!(j[0].monomial, vec![[7, 0, 1]]);
        assert_eq!(poly_from_json(&j).unwrap(), p);
    }

    #[test]
    fn diagram_marks() {
        let c = cons(Letter::D, 8, &[3, 1, 2, 4, 2, 1, 3]);
        let d = render_diagram(&c, false);
        assert_eq!(d.matches('⊗').count(), 6);
        assert_eq!(d.matches('×').count(), 5);
        let a = render_diagram(&c, true);
        assert_eq!(a.matches(" S ").count(), 6);
        assert_eq!(a.matches(" P ").count(), 5);
        let single = cons(Letter::C, 2, &[4]);
        let d = render_diagram(&single, false);
        assert_eq!(d.matches('⊗').count() + d.matches('×').count(), 0);
        let ones: Vec<usize> = d
            .lines()
            .filter_map(|l| l.split_once('|').map(|(_, grid)| grid.matches('1').count()))
            .collect();
        assert_eq!(ones, vec![1, 1, 1, 1]);
    }

    #[test]
    fn case_names() {
        for c in [PairCase::Chain, PairCase::RightOfCentral] {
            assert_eq!(case_from_name(c.name()), Some(c));
        }
    }
}
