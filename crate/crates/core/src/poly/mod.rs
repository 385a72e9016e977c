//! Exact sparse multivariate polynomials over the rationals.

mod matrix;
mod rational;

pub use matrix::PolyMatrix;
pub use rational::Rational;

use std::cmp::Ordering;
use std::fmt;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::roots::MirrorIndex;

/// A polynomial variable: either `x[i,j]` or the formal parameter `t`.
///
/// Packed so that the integer order is the mirror order on `(i, j)`, with
/// `t` after every `x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u16);

fn pack_index(i: i32) -> u16 {
    debug_assert!(i.abs() <= 31);
    match i.cmp(&0) {
        Ordering::Greater => i as u16,
        Ordering::Equal => 32,
        Ordering::Less => (64 + i) as u16,
    }
}

fn unpack_index(k: u16) -> i32 {
    match k.cmp(&32) {
        Ordering::Less => k as i32,
        Ordering::Equal => 0,
        Ordering::Greater => k as i32 - 64,
    }
}

impl Var {
    pub const T: Var = Var(u16::MAX);

    pub fn x(i: i32, j: i32) -> Var {
        Var((pack_index(i) << 6) | pack_index(j))
    }

    pub fn at(row: MirrorIndex, col: MirrorIndex) -> Var {
        Var::x(row.value(), col.value())
    }

    /// `(i, j)` for `x[i,j]`, `None` for `t`.
    pub fn indices(self) -> Option<(i32, i32)> {
        if self == Var::T {
            None
        } else {
            Some((unpack_index(self.0 >> 6), unpack_index(self.0 & 63)))
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.indices() {
            Some((i, j)) => write!(f, "x[{i},{j}]"),
            None => f.write_str("t"),
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A power product, stored as `(variable, exponent)` sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, u16); 8]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(smallvec::smallvec![(v, 1)])
    }

    pub fn from_powers(mut powers: Vec<(Var, u16)>) -> Self {
        powers.retain(|&(_, e)| e > 0);
        powers.sort_by_key(|&(v, _)| v);
        let mut out: SmallVec<[(Var, u16); 8]> = SmallVec::new();
        for (v, e) in powers {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn powers(&self) -> &[(Var, u16)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e as u32).sum()
    }

    pub fn exponent(&self, v: Var) -> u16 {
        self.0
            .iter()
            .find(|&&(w, _)| w == v)
            .map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Ordering used for rendering: total degree, then variables.
    pub fn display_cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse polynomial; zero coefficients are never stored, so structural
/// equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: FxHashMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn var(v: Var) -> Self {
        Polynomial::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Terms in rendering order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.display_cmp(b.0));
        v
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_assign(&mut self, other: &Polynomial) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    /// `self += c * m * other`.
    pub fn add_scaled(&mut self, other: &Polynomial, c: &Rational, m: &Monomial) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), oc * c);
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Polynomial::zero();
        out.terms.reserve(large.len());
        for (m, c) in &small.terms {
            out.add_scaled(large, c, m);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|&(v, _)| v))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Composition with `v -> map(v)`; variables mapped to `None` stay put.
    pub fn substitute<F>(&self, map: F) -> Polynomial
    where
        F: Fn(Var) -> Option<Polynomial>,
    {
        let mut images: FxHashMap<Var, Option<Polynomial>> = FxHashMap::default();
        for v in self.variables() {
            let img = map(v).filter(|p| *p != Polynomial::var(v));
            images.insert(v, img);
        }
        let mut power_cache: FxHashMap<(Var, u16), Polynomial> = FxHashMap::default();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut fixed: Vec<(Var, u16)> = Vec::new();
            let mut moved = Polynomial::one();
            for &(v, e) in m.powers() {
                match &images[&v] {
                    None => fixed.push((v, e)),
                    Some(img) => {
                        let pw = power_cache
                            .entry((v, e))
                            .or_insert_with(|| img.pow(e as u32));
                        moved = moved.mul(pw);
                    }
                }
            }
            out.add_scaled(&moved, c, &Monomial(fixed.into_iter().collect()));
        }
        out
    }

    pub fn derivative(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let powers: SmallVec<[(Var, u16); 8]> = m
                .0
                .iter()
                .filter_map(|&(w, f)| {
                    if w == v {
                        (f > 1).then_some((w, f - 1))
                    } else {
                        Some((w, f))
                    }
                })
                .collect();
            out.add_term(Monomial(powers), c * &Rational::from_int(e as i64));
        }
        out
    }

    /// Value at a point; `point` must cover every variable present.
    pub fn eval<F>(&self, point: F) -> Rational
    where
        F: Fn(Var) -> Rational,
    {
        let mut cache: FxHashMap<Var, Rational> = FxHashMap::default();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.powers() {
                let x = cache.entry(v).or_insert_with(|| point(v));
                t = &t * &x.pow(e as u32);
            }
            acc = &acc + &t;
        }
        acc
    }

    /// All partial derivatives at a point, in one pass over the terms.
    pub fn gradient_at<F>(&self, point: F) -> FxHashMap<Var, Rational>
    where
        F: Fn(Var) -> Rational,
    {
        let mut values: FxHashMap<Var, Rational> = FxHashMap::default();
        for v in self.variables() {
            values.insert(v, point(v));
        }
        let mut grad: FxHashMap<Var, Rational> = FxHashMap::default();
        for (m, c) in &self.terms {
            let p = m.powers();
            for (k, &(v, e)) in p.iter().enumerate() {
                let mut t = c * &Rational::from_int(e as i64);
                for (l, &(w, f)) in p.iter().enumerate() {
                    let f = if l == k { f - 1 } else { f } as u32;
                    if f > 0 {
                        t = &t * &values[&w].pow(f);
                    }
                }
                let slot = grad.entry(v).or_default();
                *slot = &*slot + &t;
            }
        }
        grad
    }

    /// Keeps only the terms whose variables all satisfy `keep`.
    pub fn restrict<F>(&self, keep: F) -> Polynomial
    where
        F: Fn(Var) -> bool,
    {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.powers().iter().all(|&(v, _)| keep(v)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Whether `self == c * other` for some nonzero rational `c`.
    pub fn proportional_to(&self, other: &Polynomial) -> Option<Rational> {
        if self.len() != other.len() || self.is_zero() {
            return None;
        }
        let (m0, c0) = self.terms.iter().next()?;
        let ratio = c0 / &other.terms.get(m0)?.clone();
        (other.scale(&ratio) == *self).then_some(ratio)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.powers().is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}
