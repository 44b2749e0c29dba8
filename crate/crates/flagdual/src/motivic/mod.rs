//! Grothendieck-ring bookkeeping for the dual pair, exact point counts over small
//! finite fields, and the degree of X in the Plücker embedding.

mod count;
mod schubert;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

pub use count::{
    count_points, count_subspaces, enumerate_subspaces, reduce_section, sum_over_subspaces, CountBudget, PointCounts,
    Which,
};
pub use schubert::{degree_check, pieri, DegreeReport, SchubertClass};

/// Integer polynomial in the Lefschetz class L, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LPoly(pub Vec<i64>);

impl LPoly {
    pub fn constant(c: i64) -> Self {
        LPoly(vec![c]).trimmed()
    }

    pub fn l_power(n: usize) -> Self {
        let mut v = vec![0; n + 1];
        v[n] = 1;
        LPoly(v)
    }

    /// [Pⁿ] = 1 + L + … + Lⁿ.
    pub fn projective_space(n: usize) -> Self {
        LPoly(vec![1; n + 1])
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, o: &LPoly) -> LPoly {
        let n = self.0.len().max(o.0.len());
        LPoly((0..n).map(|i| self.0.get(i).unwrap_or(&0) + o.0.get(i).unwrap_or(&0)).collect()).trimmed()
    }

    pub fn neg(&self) -> LPoly {
        LPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &LPoly) -> LPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &LPoly) -> LPoly {
        if self.is_zero() || o.is_zero() {
            return LPoly::default();
        }
        let mut v = vec![0; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        LPoly(v).trimmed()
    }

    /// Exact division by a polynomial with leading coefficient ±1; `None` on a remainder.
    pub fn div_exact(&self, d: &LPoly) -> Option<LPoly> {
        let d = d.clone().trimmed();
        let lead = *d.0.last()?;
        if lead.abs() != 1 {
            return None;
        }
        let mut rem = self.clone().trimmed().0;
        if rem.len() < d.0.len() {
            return if rem.is_empty() { Some(LPoly::default()) } else { None };
        }
        let mut quot = vec![0; rem.len() - d.0.len() + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + d.0.len() - 1] * lead;
            quot[k] = c;
            for (j, dj) in d.0.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
        rem.iter().all(|&c| c == 0).then(|| LPoly(quot).trimmed())
    }

    pub fn eval(&self, q: i128) -> i128 {
        self.0.iter().rev().fold(0i128, |acc, &c| acc * q + c as i128)
    }
}

impl fmt::Display for LPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "L".to_string(),
                (1, c) => format!("{c}L"),
                (i, 1) => format!("L^{i}"),
                (i, c) => format!("{c}L^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
        }
    }
}

/// Gaussian binomial [n choose k] in L: the class of G(k, n).
pub fn gauss_binomial(n: usize, k: usize) -> LPoly {
    assert!(k <= n, "gauss_binomial needs k <= n");
    let one_minus = |m: usize| LPoly::constant(1).sub(&LPoly::l_power(m));
    let mut num = LPoly::constant(1);
    let mut den = LPoly::constant(1);
    for i in 0..k {
        num = num.mul(&one_minus(n - i));
        den = den.mul(&one_minus(i + 1));
    }
    num.div_exact(&den).expect("Gaussian binomials are polynomials")
}

/// Formal generators of the Grothendieck ring used in the relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Generator {
    One,
    X,
    Y,
    G25,
    G35,
    M,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Generator::One => "1",
            Generator::X => "[X]",
            Generator::Y => "[Y]",
            Generator::G25 => "[G25]",
            Generator::G35 => "[G35]",
            Generator::M => "[M]",
        };
        write!(f, "{s}")
    }
}

/// A Z[L]-linear combination of generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MotivicClass {
    pub terms: BTreeMap<Generator, LPoly>,
}

impl MotivicClass {
    pub fn generator(g: Generator) -> Self {
        Self::term(g, LPoly::constant(1))
    }

    pub fn term(g: Generator, p: LPoly) -> Self {
        let mut c = MotivicClass::default();
        if !p.is_zero() {
            c.terms.insert(g, p);
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|p| p.is_zero())
    }

    pub fn add(&self, o: &MotivicClass) -> MotivicClass {
        let mut out = self.clone();
        for (g, p) in &o.terms {
            let s = out.terms.get(g).cloned().unwrap_or_default().add(p);
            if s.is_zero() {
                out.terms.remove(g);
            } else {
                out.terms.insert(*g, s);
            }
        }
        out
    }

    pub fn sub(&self, o: &MotivicClass) -> MotivicClass {
        self.add(&o.scale(&LPoly::constant(-1)))
    }

    /// Product with a class that is a polynomial in L, e.g. [A × Pⁿ] = [A][Pⁿ].
    pub fn scale(&self, p: &LPoly) -> MotivicClass {
        let mut out = MotivicClass::default();
        for (g, c) in &self.terms {
            out = out.add(&MotivicClass::term(*g, c.mul(p)));
        }
        out
    }

    /// Replaces every occurrence of `from` by `to`.
    pub fn substitute(&self, from: Generator, to: &MotivicClass) -> MotivicClass {
        let mut rest = self.clone();
        match rest.terms.remove(&from) {
            Some(c) => rest.add(&to.scale(&c)),
            None => rest,
        }
    }

    /// Common polynomial factor pulled out when every coefficient is divisible by `p`.
    pub fn divide(&self, p: &LPoly) -> Option<MotivicClass> {
        let mut out = MotivicClass::default();
        for (g, c) in &self.terms {
            out.terms.insert(*g, c.div_exact(p)?);
        }
        Some(out)
    }

    /// Evaluates at L = q with integer values for the generators (1 is forced to 1).
    pub fn eval(&self, q: i128, values: &BTreeMap<Generator, i128>) -> Option<i128> {
        let mut acc = 0i128;
        for (g, c) in &self.terms {
            let v = if *g == Generator::One { 1 } else { *values.get(g)? };
            acc += c.eval(q) * v;
        }
        Some(acc)
    }
}

impl fmt::Display for MotivicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, p)| match (g, p.0.as_slice()) {
                (Generator::One, _) => format!("({p})"),
                (_, [1]) => g.to_string(),
                _ => format!("({p}){g}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// One line of the derivation: a class asserted to be zero.
#[derive(Clone, Debug, Serialize)]
pub struct DerivationStep {
    pub note: String,
    pub class: MotivicClass,
    pub rendered: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LRelation {
    pub steps: Vec<DerivationStep>,
    /// The final class, equal to zero in the Grothendieck ring.
    pub relation: MotivicClass,
    pub rendered: String,
}

impl LRelation {
    /// Values of every step at L = q; all zero when the counts are consistent.
    pub fn evaluate(&self, q: i128, values: &BTreeMap<Generator, i128>) -> Vec<Option<i128>> {
        self.steps.iter().map(|s| s.class.eval(q, values)).collect()
    }
}

fn fibration(base: Generator, grass: Generator) -> MotivicClass {
    // [M] = [base][P²] + ([grass] - [base])[P¹], written as an expression equal to zero
    let g = MotivicClass::generator;
    let p2 = LPoly::projective_space(2);
    let p1 = LPoly::projective_space(1);
    g(Generator::M).sub(&g(base).scale(&p2)).sub(&g(grass).sub(&g(base)).scale(&p1))
}

/// Subtracts the two fibration decompositions of [M], identifies [G25] with [G35], and
/// divides out nothing: the result is ([X] - [Y])L².
pub fn derive_l_relation() -> LRelation {
    let mut steps = Vec::new();
    let mut push = |note: &str, class: MotivicClass| {
        steps.push(DerivationStep { note: note.into(), rendered: format!("{class} = 0"), class });
    };
    let over_g25 = fibration(Generator::X, Generator::G25);
    let over_g35 = fibration(Generator::Y, Generator::G35);
    push("fibration of M over G(2,5)", over_g25.clone());
    push("fibration of M over G(3,5)", over_g35.clone());
    let diff = over_g35.sub(&over_g25);
    push("difference, [M] cancels", diff.clone());
    let identified = diff.substitute(Generator::G35, &MotivicClass::generator(Generator::G25));
    push("[G(3,5)] = [G(2,5)] via the duality V -> V^*", identified.clone());
    let relation = identified;
    let rendered = format!("{relation} = 0");
    LRelation { steps, relation, rendered }
}
