//! Computational checks of invariance, algebraic independence and the
//! orbit-dimension bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expanded::AdmissiblePair;
use crate::invariants::{s_gamma, Construction, InvariantSystem};
use crate::linalg;
use crate::poly::{Monomial, PolyMatrix, Polynomial, Rational, Var};
use crate::roots::{GroupType, Letter, Position, Root};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_RETRIES: usize = 5;
pub const DEFAULT_ORBIT_SAMPLES: usize = 3;
/// Random coordinates are drawn uniformly from `-COORD_RANGE..=COORD_RANGE`.
pub const COORD_RANGE: i64 = 99;

/// The root vector `E_gamma` as a sparse list of unit entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChevalleyGenerator {
    pub root: Root,
    pub entries: Vec<(Position, i64)>,
}

impl ChevalleyGenerator {
    pub fn new(root: Root, ty: GroupType) -> Result<Self> {
        if !ty.is_positive_root(&root) {
            return Err(Error::NotARoot(format!("{root} is not a root of {ty}")));
        }
        let p = |r: i32, c: i32| Position::new(r, c);
        let entries = match root {
            Root::Minus(i, j) => {
                let (i, j) = (i as i32, j as i32);
                vec![(p(i, j), 1), (p(-j, -i), -1)]
            }
            Root::Plus(i, j) => {
                let (i, j) = (i as i32, j as i32);
                let s = if ty.letter() == Letter::C { 1 } else { -1 };
                vec![(p(i, -j), 1), (p(j, -i), s)]
            }
            Root::Double(i) => vec![(p(i as i32, -(i as i32)), 1)],
            Root::Single(i) => {
                let i = i as i32;
                vec![(p(i, 0), 1), (p(0, -i), -1)]
            }
        };
        Ok(ChevalleyGenerator { root, entries })
    }

    pub fn to_matrix(&self, ty: GroupType) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(ty.indices(), ty.indices());
        for &(pos, v) in &self.entries {
            m.set(pos.row, pos.col, Polynomial::constant(Rational::from_int(v)));
        }
        m
    }
}

fn t_poly(scale: Rational, power: u16) -> Polynomial {
    Polynomial::term(scale, Monomial::from_powers(vec![(Var::T, power)]))
}

/// The one-parameter subgroup `g_alpha(t)` as a matrix over `Q[t]`.
pub fn one_param(alpha: &Root, ty: GroupType) -> Result<PolyMatrix> {
    let gen = ChevalleyGenerator::new(*alpha, ty)?;
    let mut g = PolyMatrix::identity(ty.indices());
    for &(pos, v) in &gen.entries {
        g.set(pos.row, pos.col, t_poly(Rational::from_int(v), 1));
    }
    if let Root::Single(i) = alpha {
        let i = *i as i32;
        g.set(
            crate::roots::MirrorIndex(i),
            crate::roots::MirrorIndex(-i),
            t_poly(Rational::new(-1, 2), 2),
        );
    }
    Ok(g)
}

/// `g` with `t -> -t`, which is its inverse.
pub fn inverse_one_param(g: &PolyMatrix) -> PolyMatrix {
    g.map(|p| p.substitute(|v| (v == Var::T).then(|| Polynomial::var(Var::T).neg())))
}

/// The substitution `x -> (g^-1 X g)` restricted to the variables it moves.
#[derive(Clone, Debug)]
pub struct AdjointAction {
    pub alpha: Root,
    pub images: FxHashMap<Var, Polynomial>,
}

impl AdjointAction {
    /// Conjugates the generic matrix by `g_alpha(t)` and checks that the
    /// result is again a generic nilradical element.
    pub fn new(alpha: &Root, cons: &Construction) -> Result<Self> {
        let ty = cons.group();
        let g = one_param(alpha, ty)?;
        let g_inv = inverse_one_param(&g);
        let y = g_inv.mul(&cons.formal.matrix)?.mul(&g)?;

        let mut covered = std::collections::HashSet::new();
        let mut images = FxHashMap::default();
        for slot in cons.formal.slots.values() {
            let img = y.get(slot.primary.row, slot.primary.col).clone();
            covered.insert(slot.primary);
            if slot.mirror != slot.primary {
                covered.insert(slot.mirror);
                let twin = y.get(slot.mirror.row, slot.mirror.col);
                if *twin != img.scale(&Rational::from_int(slot.sign as i64)) {
                    return Err(Error::Construction(format!(
                        "conjugation by g[{alpha}] breaks the sign pairing at {}",
                        slot.mirror
                    )));
                }
            }
            if img != Polynomial::var(slot.var) {
                images.insert(slot.var, img);
            }
        }
        let labels = ty.indices();
        for &r in &labels {
            for &c in &labels {
                let pos = Position { row: r, col: c };
                if !covered.contains(&pos) && !y.get(r, c).is_zero() {
                    return Err(Error::Construction(format!(
                        "conjugation by g[{alpha}] leaves the nilradical at {pos}"
                    )));
                }
            }
        }
        Ok(AdjointAction {
            alpha: *alpha,
            images,
        })
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        if self.images.is_empty() {
            return p.clone();
        }
        p.substitute(|v| self.images.get(&v).cloned())
    }
}

/// `p(g^-1 X g)` for `g = g_alpha(t)`.
pub fn adjoint_image(p: &Polynomial, alpha: &Root, cons: &Construction) -> Result<Polynomial> {
    Ok(AdjointAction::new(alpha, cons)?.apply(p))
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceFailure {
    pub polynomial: String,
    pub alpha: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceOutcome {
    pub checks: usize,
    pub failures: Vec<InvarianceFailure>,
    pub closure_ok: bool,
    pub closure_errors: Vec<String>,
}

impl InvarianceOutcome {
    pub fn ok(&self) -> bool {
        self.closure_ok && self.failures.is_empty()
    }
}

/// Every `(polynomial, alpha)` pair, with `t` kept formal.
pub fn check_invariance(sys: &InvariantSystem, cons: &Construction) -> InvarianceOutcome {
    let named = sys.named();
    let roots = cons.group().positive_roots();
    let per_root: Vec<(Vec<InvarianceFailure>, Option<String>)> = roots
        .par_iter()
        .map(|alpha| match AdjointAction::new(alpha, cons) {
            Err(e) => (Vec::new(), Some(e.to_string())),
            Ok(action) => {
                let fails = named
                    .par_iter()
                    .filter(|(_, _, p)| action.apply(p) != **p)
                    .map(|(name, _, _)| InvarianceFailure {
                        polynomial: name.clone(),
                        alpha: alpha.to_string(),
                    })
                    .collect();
                (fails, None)
            }
        })
        .collect();
    let mut failures = Vec::new();
    let mut closure_errors = Vec::new();
    for (f, e) in per_root {
        failures.extend(f);
        closure_errors.extend(e);
    }
    InvarianceOutcome {
        checks: roots.len() * named.len(),
        failures,
        closure_ok: closure_errors.is_empty(),
        closure_errors,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PiForm {
    pub polynomial: String,
    /// The restricted polynomial, rendered.
    pub image: String,
    pub single_monomial: bool,
    pub exponents_ok: bool,
    pub has_distinguished: bool,
    /// Variables are exactly the distinguished one and the expected factors.
    pub support_ok: bool,
}

impl PiForm {
    pub fn ok(&self) -> bool {
        self.single_monomial && self.exponents_ok && self.has_distinguished && self.support_ok
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PiOutcome {
    pub forms: Vec<PiForm>,
    pub injective: bool,
}

impl PiOutcome {
    pub fn ok(&self) -> bool {
        self.injective && self.forms.iter().all(PiForm::ok)
    }
}

fn pi_form(
    name: String,
    p: &Polynomial,
    keep: &std::collections::HashSet<Var>,
    distinguished: Var,
    factors: &[Var],
) -> PiForm {
    let img = p.restrict(|v| keep.contains(&v));
    let single = img.len() == 1;
    let (exponents_ok, has_distinguished, support_ok) = match img.terms().next() {
        Some((m, _)) if single => {
            let exps_ok = m.powers().iter().all(|&(_, e)| e == 1 || e == 2);
            let dist = m.exponent(distinguished) == 1;
            let mut want: Vec<Var> = factors.to_vec();
            want.push(distinguished);
            want.sort();
            want.dedup();
            let got: Vec<Var> = m.powers().iter().map(|&(v, _)| v).collect();
            (exps_ok, dist, got == want)
        }
        _ => (false, false, false),
    };
    PiForm {
        polynomial: name,
        image: img.to_string(),
        single_monomial: single,
        exponents_ok,
        has_distinguished,
        support_ok,
    }
}

/// Restriction to the span of the expanded-base root vectors.
pub fn pi_restrict_check(sys: &InvariantSystem, cons: &Construction) -> PiOutcome {
    let var = |r: &Root| cons.formal.var_of(r).expect("nilradical root");
    let keep: std::collections::HashSet<Var> = cons.expanded_base().iter().map(var).collect();
    let mut forms = Vec::new();
    let mut distinguished = Vec::new();
    for (xi, p) in &sys.base_invs {
        let factors: Vec<Var> = s_gamma(xi, &cons.base).iter().map(var).collect();
        distinguished.push(var(xi));
        forms.push(pi_form(format!("M[{xi}]"), p, &keep, var(xi), &factors));
    }
    for (q, p) in &sys.pair_invs {
        let AdmissiblePair { xi, xi_prime, phi, .. } = q;
        let mut factors = vec![var(xi)];
        factors.extend(s_gamma(xi, &cons.base).iter().map(var));
        factors.extend(s_gamma(xi_prime, &cons.base).iter().map(var));
        distinguished.push(var(phi));
        forms.push(pi_form(format!("L[{phi}]"), p, &keep, var(phi), &factors));
    }
    let mut uniq = distinguished.clone();
    uniq.sort();
    uniq.dedup();
    PiOutcome {
        forms,
        injective: uniq.len() == distinguished.len(),
    }
}

fn random_coord(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(-COORD_RANGE..=COORD_RANGE)
}

/// Rank of the Jacobian of the system at seeded random integer points.
///
/// Tries up to `1 + retries` points and returns the best rank seen,
/// stopping early once the rank is full.
pub fn independence_rank(
    sys: &InvariantSystem,
    cons: &Construction,
    seed: u64,
    retries: usize,
) -> usize {
    let polys = sys.polynomials();
    if polys.is_empty() {
        return 0;
    }
    let vars = cons.formal.variables();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for _ in 0..=retries {
        let point: FxHashMap<Var, Rational> = vars
            .iter()
            .map(|&v| (v, Rational::from_int(random_coord(&mut rng))))
            .collect();
        let rows: Vec<Vec<Rational>> = polys
            .par_iter()
            .map(|p| {
                let g = p.gradient_at(|v| point[&v].clone());
                vars.iter()
                    .map(|v| g.get(v).cloned().unwrap_or_default())
                    .collect()
            })
            .collect();
        best = best.max(linalg::rank(&rows));
        if best == polys.len() {
            break;
        }
    }
    best
}

/// Rank of `y -> [y, x]` from the span of all positive root vectors into
/// the nilradical, at a seeded random point `x`.
pub fn orbit_rank_sample(cons: &Construction, seed: u64) -> usize {
    let ty = cons.group();
    let m = ty.m();
    let rank_of = |i: crate::roots::MirrorIndex| i.rank(ty) - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![vec![0i64; m]; m];
    for root in &cons.levi.nilradical {
        let c = random_coord(&mut rng);
        let gen = ChevalleyGenerator::new(*root, ty).expect("positive root");
        for (pos, v) in gen.entries {
            x[rank_of(pos.row)][rank_of(pos.col)] += c * v;
        }
    }
    let rows: Vec<Vec<i64>> = ty
        .positive_roots()
        .iter()
        .map(|alpha| {
            let gen = ChevalleyGenerator::new(*alpha, ty).expect("positive root");
            let mut e = vec![vec![0i64; m]; m];
            for (pos, v) in gen.entries {
                e[rank_of(pos.row)][rank_of(pos.col)] += v;
            }
            let mut out = vec![0i64; m * m];
            for r in 0..m {
                for c in 0..m {
                    let mut s = 0;
                    for k in 0..m {
                        s += e[r][k] * x[k][c] - x[r][k] * e[k][c];
                    }
                    out[r * m + c] = s;
                }
            }
            out
        })
        .collect();
    linalg::rank_i64(&rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub base: usize,
    pub phi: usize,
    pub dim_nilradical: usize,
    pub trdeg_lower: usize,
    pub orbit_upper: i64,
}

impl Bounds {
    pub fn new(base: usize, phi: usize, dim_nilradical: usize) -> Self {
        Bounds {
            base,
            phi,
            dim_nilradical,
            trdeg_lower: base + phi,
            orbit_upper: dim_nilradical as i64 - (base + phi) as i64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub retries: usize,
    pub orbit_samples: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            retries: DEFAULT_RETRIES,
            orbit_samples: DEFAULT_ORBIT_SAMPLES,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub invariance: InvarianceOutcome,
    pub pi: PiOutcome,
    pub independence_rank: usize,
    pub orbit_rank_samples: Vec<usize>,
    pub bounds: Bounds,
}

impl VerificationReport {
    pub fn invariance_ok(&self) -> bool {
        self.invariance.ok()
    }

    pub fn independence_ok(&self) -> bool {
        self.independence_rank == self.bounds.trdeg_lower
    }

    pub fn orbit_ok(&self) -> bool {
        self.orbit_rank_samples
            .iter()
            .all(|&r| r as i64 <= self.bounds.orbit_upper)
    }

    /// Invariance, independence and the orbit bound. The monomial shape of
    /// the restricted invariants is reported separately in `pi`.
    pub fn passed(&self) -> bool {
        self.invariance_ok() && self.independence_ok() && self.orbit_ok()
    }
}

pub fn verify(
    sys: &InvariantSystem,
    cons: &Construction,
    opts: VerifyOptions,
) -> VerificationReport {
    let invariance = check_invariance(sys, cons);
    let pi = pi_restrict_check(sys, cons);
    let independence_rank = independence_rank(sys, cons, opts.seed, opts.retries);
    let orbit_rank_samples = (0..opts.orbit_samples as u64)
        .map(|k| orbit_rank_sample(cons, opts.seed.wrapping_add(k)))
        .collect();
    VerificationReport {
        invariance,
        pi,
        independence_rank,
        orbit_rank_samples,
        bounds: Bounds::new(sys.base_count(), sys.pair_count(), sys.dim_nilradical),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parabolic::ParabolicShape;

    fn cons(letter: Letter, n: usize, blocks: &[usize]) -> Construction {
        Construction::new(ParabolicShape::parse(letter, n, blocks).unwrap()).unwrap()
    }

    fn x(i: i32, j: i32) -> Polynomial {
        Polynomial::var(Var::x(i, j))
    }

    #[test]
    fn one_param_is_unipotent() {
        for letter in [Letter::B, Letter::C, Letter::D] {
            let ty = GroupType::new(letter, 3).unwrap();
            for alpha in ty.positive_roots() {
                let g = one_param(&alpha, ty).unwrap();
                let prod = g.mul(&inverse_one_param(&g)).unwrap();
                assert_eq!(prod, PolyMatrix::identity(ty.indices()), "{letter} {alpha}");
            }
        }
    }

    #[test]
    fn one_param_single_root_has_quadratic_term() {
        let ty = GroupType::new(Letter::B, 2).unwrap();
        let g = one_param(&Root::Single(1), ty).unwrap();
        let at = |i, j| g.get(crate::roots::MirrorIndex(i), crate::roots::MirrorIndex(j)).clone();
        assert_eq!(at(1, 0), Polynomial::var(Var::T));
        assert_eq!(at(0, -1), Polynomial::var(Var::T).neg());
        assert_eq!(at(1, -1), t_poly(Rational::new(-1, 2), 2));
        let c = GroupType::new(Letter::C, 2).unwrap();
        let g = one_param(&Root::Double(2), c).unwrap();
        assert_eq!(
            g.get(crate::roots::MirrorIndex(2), crate::roots::MirrorIndex(-2)).clone(),
            Polynomial::var(Var::T)
        );
        assert!(one_param(&Root::Double(1), GroupType::new(Letter::D, 2).unwrap()).is_err());
    }

    #[test]
    fn generator_is_linear_coefficient() {
        for letter in [Letter::B, Letter::C, Letter::D] {
            let ty = GroupType::new(letter, 3).unwrap();
            for alpha in ty.positive_roots() {
                let g = one_param(&alpha, ty).unwrap();
                let linear = g.map(|p| p.derivative(Var::T).restrict(|v| v != Var::T));
                let e = ChevalleyGenerator::new(alpha, ty).unwrap().to_matrix(ty);
                assert_eq!(linear, e);
            }
        }
    }

    #[test]
    fn sp4_adjoint_fixes_corner() {
        let c = cons(Letter::C, 2, &[1, 2, 1]);
        let p = x(1, 2);
        assert_eq!(adjoint_image(&p, &Root::Double(2), &c).unwrap(), p);
        for alpha in c.group().positive_roots() {
            assert_eq!(adjoint_image(&p, &alpha, &c).unwrap(), p);
        }
    }

    #[test]
    fn corrupted_polynomial_is_caught() {
        let c = cons(Letter::D, 8, &[3, 1, 2, 4, 2, 1, 3]);
        let bad = x(6, 7).add(&x(5, 7));
        let moved = c
            .group()
            .positive_roots()
            .iter()
            .any(|a| adjoint_image(&bad, a, &c).unwrap() != bad);
        assert!(moved);
    }

    #[test]
    fn sp4_ranks() {
        let c = cons(Letter::C, 2, &[1, 2, 1]);
        let sys = c.build_system().unwrap();
        assert_eq!(independence_rank(&sys, &c, 42, 5), 1);
        let b = Bounds::new(1, 0, 3);
        assert_eq!(b.orbit_upper, 2);
        for s in 0..3 {
            assert!(orbit_rank_sample(&c, s) as i64 <= b.orbit_upper);
        }
    }

    #[test]
    fn empty_system() {
        let c = cons(Letter::B, 2, &[5]);
        let sys = c.build_system().unwrap();
        assert_eq!(independence_rank(&sys, &c, 42, 5), 0);
        assert_eq!(orbit_rank_sample(&c, 42), 0);
        assert!(pi_restrict_check(&sys, &c).ok());
        let report = verify(&sys, &c, VerifyOptions::default());
        assert!(report.passed());
    }
}
