//! Sparse multivariate polynomials with packed exponent vectors.
//!
//! A monomial stores up to [`MAX_VARS`] byte exponents plus its total degree.
//! Terms are kept sorted in decreasing order for the polynomial's monomial order
//! and zero coefficients are never stored.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::Field;

pub const MAX_VARS: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mono {
    deg: u16,
    e: [u8; MAX_VARS],
}

impl Mono {
    pub fn one() -> Self {
        Mono { deg: 0, e: [0; MAX_VARS] }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::one();
        m.e[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(exps: &[u8]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let mut m = Self::one();
        m.e[..exps.len()].copy_from_slice(exps);
        m.deg = exps.iter().map(|&x| x as u16).sum();
        m
    }

    pub fn deg(&self) -> u32 {
        self.deg as u32
    }

    pub fn exp(&self, i: usize) -> u8 {
        self.e[i]
    }

    pub fn exps(&self) -> &[u8; MAX_VARS] {
        &self.e
    }

    #[inline]
    pub fn mul(&self, o: &Mono) -> Mono {
        let mut e = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = self.e[i].checked_add(o.e[i]).expect("exponent overflow");
        }
        Mono { deg: self.deg + o.deg, e }
    }

    #[inline]
    pub fn divides(&self, o: &Mono) -> bool {
        self.deg <= o.deg && self.e.iter().zip(o.e.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming divisibility.
    #[inline]
    pub fn div_into(&self, o: &Mono) -> Mono {
        let mut e = [0u8; MAX_VARS];
        for i in 0..MAX_VARS {
            e[i] = o.e[i] - self.e[i];
        }
        Mono { deg: o.deg - self.deg, e }
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let mut e = [0u8; MAX_VARS];
        let mut deg = 0u16;
        for i in 0..MAX_VARS {
            e[i] = self.e[i].max(o.e[i]);
            deg += e[i] as u16;
        }
        Mono { deg, e }
    }

    pub fn coprime(&self, o: &Mono) -> bool {
        self.e.iter().zip(o.e.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Degree in the first `k` variables.
    fn block_deg(&self, k: usize) -> u16 {
        self.e[..k].iter().map(|&x| x as u16).sum()
    }
}

/// Monomial orders. `Elim(k)` compares the first `k` variables by degrevlex
/// first and breaks ties by degrevlex on the remaining ones.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum MonoOrder {
    #[default]
    DegRevLex,
    Elim(usize),
}

fn drl_range(a: &Mono, b: &Mono, lo: usize, hi: usize, da: u16, db: u16) -> Ordering {
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for i in (lo..hi).rev() {
        if a.e[i] != b.e[i] {
            return b.e[i].cmp(&a.e[i]);
        }
    }
    Ordering::Equal
}

impl MonoOrder {
    #[inline]
    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match *self {
            MonoOrder::DegRevLex => drl_range(a, b, 0, MAX_VARS, a.deg, b.deg),
            MonoOrder::Elim(k) => {
                let (ka, kb) = (a.block_deg(k), b.block_deg(k));
                match drl_range(a, b, 0, k, ka, kb) {
                    Ordering::Equal => drl_range(a, b, k, MAX_VARS, a.deg - ka, b.deg - kb),
                    o => o,
                }
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    order: MonoOrder,
    terms: Vec<(Mono, F)>,
}

impl<F: Field> Poly<F> {
    pub fn zero_with(order: MonoOrder) -> Self {
        Poly { order, terms: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(c, Mono::one())
    }

    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS, "too many variables");
        Self::monomial(F::one(), Mono::var(i))
    }

    pub fn monomial(c: F, m: Mono) -> Self {
        let terms = if c.is_zero() { vec![] } else { vec![(m, c)] };
        Poly { order: MonoOrder::DegRevLex, terms }
    }

    /// Builds a polynomial from arbitrary (unsorted, possibly repeated) terms.
    pub fn from_terms(order: MonoOrder, mut raw: Vec<(Mono, F)>) -> Self {
        raw.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut terms: Vec<(Mono, F)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match terms.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        Poly { order, terms }
    }

    pub fn order(&self) -> MonoOrder {
        self.order
    }

    pub fn with_order(&self, order: MonoOrder) -> Self {
        Self::from_terms(order, self.terms.clone())
    }

    pub fn terms(&self) -> &[(Mono, F)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.deg == 0)
    }

    pub fn lm(&self) -> Option<&Mono> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn lc(&self) -> Option<&F> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.deg()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.deg == m0.deg),
        }
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.e[i] as u32).max().unwrap_or(0)
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.e[i] > 0)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero_with(self.order);
        }
        Poly { order: self.order, terms: self.terms.iter().map(|(m, x)| (*m, x.clone() * c.clone())).collect() }
    }

    pub fn monic(&self) -> Self {
        match self.lc() {
            None => self.clone(),
            Some(c) => self.scale(&c.try_inv().expect("nonzero leading coefficient")),
        }
    }

    /// `self * c * m`; order is preserved by multiplication by a monomial.
    pub fn mul_term(&self, c: &F, m: &Mono) -> Self {
        if c.is_zero() {
            return Self::zero_with(self.order);
        }
        Poly { order: self.order, terms: self.terms.iter().map(|(t, x)| (t.mul(m), x.clone() * c.clone())).collect() }
    }

    /// `self - c * m * g`, by a single merge.
    pub fn sub_mul_term(&self, c: &F, m: &Mono, g: &Poly<F>) -> Self {
        let ord = self.order;
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut i = 0;
        let mut j = 0;
        let a = &self.terms;
        let b = &g.terms;
        let mut bj: Option<Mono> = b.first().map(|t| t.0.mul(m));
        while i < a.len() || bj.is_some() {
            let o = match (&bj, a.get(i)) {
                (None, _) => Ordering::Greater,
                (Some(_), None) => Ordering::Less,
                (Some(mb), Some((ma, _))) => ord.cmp(ma, mb),
            };
            match o {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((bj.unwrap(), -(c.clone() * b[j].1.clone())));
                    j += 1;
                    bj = b.get(j).map(|t| t.0.mul(m));
                }
                Ordering::Equal => {
                    let v = a[i].1.clone() - c.clone() * b[j].1.clone();
                    if !v.is_zero() {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                    bj = b.get(j).map(|t| t.0.mul(m));
                }
            }
        }
        Poly { order: ord, terms: out }
    }

    pub fn eval(&self, x: &[F]) -> F {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, xi) in x.iter().enumerate() {
                let e = m.e[i];
                if e > 0 {
                    t = t * xi.pow(e as u64);
                }
            }
            debug_assert!(m.e[x.len()..].iter().all(|&e| e == 0), "variable outside point");
            acc = acc + t;
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let raw = self
            .terms
            .iter()
            .filter(|(m, _)| m.e[i] > 0)
            .map(|(m, c)| {
                let mut m2 = *m;
                m2.e[i] -= 1;
                m2.deg -= 1;
                (m2, c.clone() * F::from_i64(m.e[i] as i64))
            })
            .collect();
        Self::from_terms(self.order, raw)
    }

    /// Substitutes polynomials for variables: variable `i` becomes `subs[i]`.
    pub fn substitute(&self, subs: &[Poly<F>]) -> Self {
        let mut acc = Self::zero_with(self.order);
        for (m, c) in &self.terms {
            let mut t = Self::constant(c.clone()).with_order(self.order);
            for (i, s) in subs.iter().enumerate() {
                for _ in 0..m.e[i] {
                    t = &t * s;
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Renames variable `i` to `map[i]`.
    pub fn rename_vars(&self, map: &[usize], order: MonoOrder) -> Self {
        let raw = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = [0u8; MAX_VARS];
                for (i, &j) in map.iter().enumerate() {
                    e[j] = m.e[i];
                }
                (Mono { deg: m.deg, e }, c.clone())
            })
            .collect();
        Self::from_terms(order, raw)
    }

    fn combine_order(&self, o: &Self) -> MonoOrder {
        if self.is_constant() {
            o.order
        } else if o.is_constant() {
            self.order
        } else {
            assert_eq!(self.order, o.order, "mixing monomial orders");
            self.order
        }
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        let ord = self.combine_order(o);
        let a = if self.order == ord { std::borrow::Cow::Borrowed(self) } else { std::borrow::Cow::Owned(self.with_order(ord)) };
        let b = if o.order == ord { std::borrow::Cow::Borrowed(o) } else { std::borrow::Cow::Owned(o.with_order(ord)) };
        let (a, b) = (&a.terms, &b.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sgn = |c: &F| if negate { -c.clone() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match ord.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0, sgn(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = a[i].1.clone() + sgn(&b[j].1);
                    if !v.is_zero() {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (*m, sgn(c))));
        Poly { order: ord, terms: out }
    }

    /// Formats with the given variable names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let cs = c.to_string();
            let neg = cs.starts_with('-');
            let mag = cs.trim_start_matches('-');
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.e.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            if factors.is_empty() {
                s.push_str(mag);
            } else {
                if mag != "1" {
                    s.push_str(mag);
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&[]))
    }
}

impl<'a, F: Field> Add for &'a Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: &'a Poly<F>) -> Poly<F> {
        self.merge(o, false)
    }
}

impl<'a, F: Field> Sub for &'a Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: &'a Poly<F>) -> Poly<F> {
        self.merge(o, true)
    }
}

impl<'a, F: Field> Mul for &'a Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: &'a Poly<F>) -> Poly<F> {
        let ord = self.combine_order(o);
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return o.with_order(ord).mul_term(c, m);
        }
        if o.terms.len() == 1 {
            let (m, c) = &o.terms[0];
            return self.with_order(ord).mul_term(c, m);
        }
        let mut raw = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                raw.push((ma.mul(mb), ca.clone() * cb.clone()));
            }
        }
        Poly::from_terms(ord, raw)
    }
}

impl<F: Field> Add for Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: Poly<F>) -> Poly<F> {
        &self + &o
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: Poly<F>) -> Poly<F> {
        &self - &o
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: Poly<F>) -> Poly<F> {
        &self * &o
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly { order: self.order, terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<F: Field> Zero for Poly<F> {
    fn zero() -> Self {
        Self::zero_with(MonoOrder::DegRevLex)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Field> One for Poly<F> {
    fn one() -> Self {
        Self::constant(F::one())
    }
}
