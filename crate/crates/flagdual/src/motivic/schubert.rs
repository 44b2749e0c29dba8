//! The Chow ring of G(2,5) in the Schubert basis σ_(a,b), 3 ≥ a ≥ b ≥ 0.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

const BOX: u8 = 3;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SchubertClass {
    pub terms: BTreeMap<(u8, u8), i64>,
}

impl SchubertClass {
    pub fn one() -> Self {
        Self::sigma(0, 0)
    }

    pub fn sigma(a: u8, b: u8) -> Self {
        let mut terms = BTreeMap::new();
        if a <= BOX && b <= a {
            terms.insert((a, b), 1);
        }
        SchubertClass { terms }
    }

    /// The special class σ_k; zero outside the box.
    pub fn special(k: i64) -> Self {
        if (0..=BOX as i64).contains(&k) {
            Self::sigma(k as u8, 0)
        } else {
            SchubertClass::default()
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&k, &c) in &o.terms {
            *out.terms.entry(k).or_insert(0) += c;
        }
        out.terms.retain(|_, c| *c != 0);
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = SchubertClass::default();
        for (&k, &v) in &self.terms {
            if c * v != 0 {
                out.terms.insert(k, c * v);
            }
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    /// Product by Giambelli, σ_(a,b) = σ_a σ_b - σ_(a+1) σ_(b-1), and Pieri.
    pub fn mul(&self, o: &Self) -> Self {
        let mut out = SchubertClass::default();
        for (&(a, b), &c) in &o.terms {
            let (a, b) = (a as i64, b as i64);
            let first = pieri(&pieri(self, a), b);
            let second = if b >= 1 { pieri(&pieri(self, a + 1), b - 1) } else { SchubertClass::default() };
            out = out.add(&first.sub(&second).scale(c));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Coefficient of the point class σ_(3,3).
    pub fn integral(&self) -> i64 {
        *self.terms.get(&(BOX, BOX)).unwrap_or(&0)
    }
}

impl fmt::Display for SchubertClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(&(a, b), &c)| format!("{c}·σ({a},{b})")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// σ_λ · σ_k as the sum of σ_μ over μ with |μ| = |λ| + k and λ₂ ≤ μ₂ ≤ λ₁ ≤ μ₁ ≤ 3.
pub fn pieri(x: &SchubertClass, k: i64) -> SchubertClass {
    if !(0..=BOX as i64).contains(&k) {
        return SchubertClass::default();
    }
    let mut out = SchubertClass::default();
    for (&(l1, l2), &c) in &x.terms {
        let total = (l1 + l2) as i64 + k;
        for m2 in l2 as i64..=l1 as i64 {
            let m1 = total - m2;
            if m1 >= l1 as i64 && m1 <= BOX as i64 && m1 >= m2 {
                out = out.add(&SchubertClass::sigma(m1 as u8, m2 as u8).scale(c));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub c3: String,
    pub c3_from_chern_roots: String,
    pub c3_agrees: bool,
    pub sigma1_pow6: i64,
    pub sigma1_pow4_sigma2: i64,
    pub sigma1_pow3_sigma3: i64,
    pub degree: i64,
}

impl DegreeReport {
    pub fn pass(&self) -> bool {
        self.c3_agrees && self.degree == 25
    }
}

/// c_k(E ⊗ L) = Σ_i binom(r - i, k - i) c_i(E) h^{k-i} for E of rank r and c₁(L) = h.
fn chern_twisted(c: &[SchubertClass], rank: usize, h: &SchubertClass, k: usize) -> SchubertClass {
    let binom = |n: usize, m: usize| -> i64 { (0..m).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1)) };
    let mut out = SchubertClass::default();
    for i in 0..=k {
        out = out.add(&c[i].mul(&h.pow((k - i) as u32)).scale(binom(rank - i, k - i)));
    }
    out
}

/// ∫ c₃(Q^∨(2)) σ₁³ over G(2,5): the degree of the zero locus in the Plücker embedding.
pub fn degree_check() -> DegreeReport {
    let s1 = SchubertClass::special(1);
    let s2 = SchubertClass::special(2);
    let s3 = SchubertClass::special(3);
    let c3 = s1.pow(3).scale(4).add(&s1.mul(&s2).scale(2)).sub(&s3);
    // Chern classes of the dual quotient bundle are (-1)^i σ_i
    let cq_dual: Vec<SchubertClass> = (0..=3).map(|i| SchubertClass::special(i).scale(if i % 2 == 0 { 1 } else { -1 })).collect();
    let from_roots = chern_twisted(&cq_dual, 3, &s1.scale(2), 3);
    let h3 = s1.pow(3);
    DegreeReport {
        c3: c3.to_string(),
        c3_from_chern_roots: from_roots.to_string(),
        c3_agrees: c3 == from_roots,
        sigma1_pow6: s1.pow(6).integral(),
        sigma1_pow4_sigma2: s1.pow(4).mul(&s2).integral(),
        sigma1_pow3_sigma3: h3.mul(&s3).integral(),
        degree: c3.mul(&h3).integral(),
    }
}
