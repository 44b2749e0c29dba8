//! The gauged linear sigma model on pairs (B, ω) with B: C³ → V₅ and ω ∈ (C³)^∨, gauge
//! group GL(3) acting by g·(B, ω) = (B g⁻¹, det(g)² ω g⁻¹), and superpotential ω·ŝ(B).
//!
//! Chamber τ > 0 keeps the points with rank B = 3; chamber τ < 0 keeps the points with
//! ω ≠ 0 and ker ω ∩ ker B = 0. Unstable points come with an explicit one-parameter
//! family g_n⁻¹ = P diag(n^a₁, n^a₂, n^a₃) P⁻¹ whose limit exists as n → ∞.

mod sweep;

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::duality::{b_var, pushforward_to_g35, quintic_vector};
use crate::exactalg::{AlgError, Field, Mat, Poly};
use crate::grassflag::{GrassPoint, SectionMatrix};

pub use sweep::{
    bijection_count, certificate_sweep, minus_chamber_sweep, okonek_check, plus_chamber_sweep, random_gauge, sample_x_point,
    sample_y_point, BijectionReport, CertificateSweep, MinusSweep, OkonekReport, PlusSweep,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chamber {
    Plus,
    Minus,
}

impl Chamber {
    pub fn parse(s: &str) -> Result<Chamber, GlsmError> {
        match s.trim() {
            "plus" | "+" => Ok(Chamber::Plus),
            "minus" | "-" => Ok(Chamber::Minus),
            other => Err(GlsmError::Shape(format!("unknown chamber {other:?}"))),
        }
    }
}

impl fmt::Display for Chamber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == Chamber::Plus { "plus" } else { "minus" })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlsmError {
    #[error("point is semistable in the {0} chamber")]
    Semistable(Chamber),
    #[error("point is unstable in the {0} chamber")]
    Unstable(Chamber),
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlsmPoint<F> {
    pub b: Mat<F>,
    pub omega: Vec<F>,
}

impl<F: Field> GlsmPoint<F> {
    pub fn new(b: Mat<F>, omega: Vec<F>) -> Result<Self, GlsmError> {
        if b.rows() != 5 || b.cols() != 3 || omega.len() != 3 {
            return Err(GlsmError::Shape("B must be 5x3 and ω a 3-vector".into()));
        }
        Ok(GlsmPoint { b, omega })
    }

    /// g·(B, ω) = (B g⁻¹, det(g)² ω g⁻¹).
    pub fn gauge(&self, g: &Mat<F>) -> Result<Self, AlgError> {
        let gi = g.inverse()?;
        let d = g.det()?;
        let d2 = d.clone() * d;
        let w = gi.transpose().mul_vec(&self.omega);
        Ok(GlsmPoint { b: &self.b * &gi, omega: w.into_iter().map(|x| x * d2.clone()).collect() })
    }

    pub fn rank_b(&self) -> usize {
        self.b.rank()
    }

    fn stacked(&self) -> Mat<F> {
        let mut rows: Vec<Vec<F>> = (0..5).map(|i| self.b.row(i)).collect();
        rows.push(self.omega.clone());
        Mat::from_rows(rows)
    }

    /// A nonzero vector in ker ω ∩ ker B, if any.
    pub fn common_kernel(&self) -> Option<Vec<F>> {
        self.stacked().kernel().into_iter().next()
    }
}

impl<F: Field> fmt::Display for GlsmPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.omega.iter().map(|x| x.to_string()).collect();
        write!(f, "B =\n{}ω = ({})", self.b, w.join(", "))
    }
}

pub fn semistable<F: Field>(pt: &GlsmPoint<F>, chamber: Chamber) -> bool {
    match chamber {
        Chamber::Plus => pt.rank_b() == 3,
        Chamber::Minus => pt.omega.iter().any(|x| !x.is_zero()) && pt.common_kernel().is_none(),
    }
}

/// The quintics ŝ of a section together with their 3x15 Jacobian.
#[derive(Clone)]
pub struct Superpotential<F> {
    pub section: SectionMatrix<F>,
    partials: Vec<Vec<Poly<F>>>,
}

impl<F: Field> fmt::Debug for Superpotential<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Superpotential").field("section", &self.section).finish_non_exhaustive()
    }
}

impl<F: Field> Superpotential<F> {
    pub fn new(section: &SectionMatrix<F>) -> Self {
        let q = pushforward_to_g35(section);
        let partials = q.components.iter().map(|c| (0..15).map(|v| c.derivative(v)).collect()).collect();
        Superpotential { section: section.clone(), partials }
    }

    pub fn quintics(&self, b: &Mat<F>) -> Vec<F> {
        quintic_vector(&self.section, b)
    }

    pub fn value(&self, pt: &GlsmPoint<F>) -> F {
        superpotential(pt, &self.section)
    }

    /// dŝ(B), rows indexed by the component r, columns by the entry (p, c) at `3p + c`.
    pub fn jacobian(&self, b: &Mat<F>) -> Mat<F> {
        let x: Vec<F> = (0..15).map(|v| b[(v / 3, v % 3)].clone()).collect();
        Mat::from_fn(3, 15, |r, v| self.partials[r][v].eval(&x))
    }

    /// ∂ŝ₁/∂b_{i1} for i = 1..5: after dropping ω₁ these are the equations of the critical
    /// locus at a point whose first column vanishes.
    pub fn reduced_quartics(&self, b: &Mat<F>) -> Vec<F> {
        let x: Vec<F> = (0..15).map(|v| b[(v / 3, v % 3)].clone()).collect();
        (0..5).map(|p| self.partials[0][b_var(p, 0)].eval(&x)).collect()
    }

    /// The reduced quartics as polynomials in the entries of columns 2 and 3.
    pub fn reduced_quartic_polys(&self) -> Vec<Poly<F>> {
        let subs: Vec<Poly<F>> = (0..15).map(|v| if v % 3 == 0 { Poly::zero() } else { Poly::var(v) }).collect();
        (0..5).map(|p| self.partials[0][b_var(p, 0)].substitute(&subs)).collect()
    }
}

/// W(B, ω) = ω·ŝ(B).
pub fn superpotential<F: Field>(pt: &GlsmPoint<F>, s: &SectionMatrix<F>) -> F {
    let sh = quintic_vector(s, &pt.b);
    pt.omega.iter().zip(sh).fold(F::zero(), |acc, (w, v)| acc + w.clone() * v)
}

/// ŝ(B) = 0 and ω·dŝ(B) = 0: the critical equations of W with no chamber condition.
pub fn is_critical_point<F: Field>(pt: &GlsmPoint<F>, w: &Superpotential<F>) -> bool {
    if w.quintics(&pt.b).iter().any(|x| !x.is_zero()) {
        return false;
    }
    let j = w.jacobian(&pt.b);
    j.transpose().mul_vec(&pt.omega).iter().all(|x| x.is_zero())
}

pub fn critical_member<F: Field>(pt: &GlsmPoint<F>, w: &Superpotential<F>, chamber: Chamber) -> Result<bool, GlsmError> {
    if !semistable(pt, chamber) {
        return Err(GlsmError::Unstable(chamber));
    }
    match chamber {
        Chamber::Plus => Ok(is_critical_point(pt, w)),
        Chamber::Minus => {
            // rank 3 points are never critical when Y is smooth; for degenerate sections
            // the critical equations decide
            if pt.rank_b() != 2 {
                return Ok(is_critical_point(pt, w));
            }
            let (nf, _) = normal_form(pt)?;
            Ok(w.reduced_quartics(&nf.b).iter().all(|x| x.is_zero()))
        }
    }
}

/// Completes a nonzero vector to a basis, returned as the columns of an invertible matrix.
fn complete_basis<F: Field>(first: &[F], rest: &[Vec<F>]) -> Mat<F> {
    let mut cols = vec![first.to_vec()];
    cols.extend(rest.iter().cloned());
    for i in 0..3 {
        if cols.len() == 3 {
            break;
        }
        let mut e = vec![F::zero(); 3];
        e[i] = F::one();
        let mut trial = cols.clone();
        trial.push(e);
        if Mat::from_cols(&trial).rank() == trial.len() {
            cols = trial;
        }
    }
    Mat::from_cols(&cols)
}

/// For a minus-chamber point with rank B = 2, a gauge element g with
/// g·(B, ω) = ((0 | A), (1, 0, 0)), A in reduced column echelon form.
pub fn normal_form<F: Field>(pt: &GlsmPoint<F>) -> Result<(GlsmPoint<F>, Mat<F>), GlsmError> {
    if !semistable(pt, Chamber::Minus) || pt.rank_b() != 2 {
        return Err(GlsmError::Shape("normal form needs rank B = 2 and ker ω ∩ ker B = 0".into()));
    }
    let k = pt.b.kernel().into_iter().next().expect("rank 2");
    let ker_omega = Mat::from_rows(vec![pt.omega.clone()]).kernel();
    let p = complete_basis(&k, &ker_omega);
    let g1 = p.inverse()?;
    let step = pt.gauge(&g1)?;
    // step.b = (0 | A₁), step.ω = (c, 0, 0)
    let a1 = step.b.submatrix(&[0, 1, 2, 3, 4], &[1, 2]);
    let ech = a1.transpose().echelon();
    let h_inv = a1.submatrix(&ech.pivots, &[0, 1]).inverse()?;
    let h = h_inv.inverse()?;
    let dh = h.det()?;
    let lambda = (dh.clone() * dh * step.omega[0].clone()).try_inv()?;
    let mut g2 = Mat::identity(3);
    g2[(0, 0)] = lambda;
    for i in 0..2 {
        for j in 0..2 {
            g2[(i + 1, j + 1)] = h[(i, j)].clone();
        }
    }
    let g = &g2 * &g1;
    Ok((pt.gauge(&g)?, g))
}

/// The point of G(2,5) spanned by the nonzero columns of the normal form.
pub fn gauge_reduce<F: Field>(pt: &GlsmPoint<F>) -> Result<GrassPoint<F>, GlsmError> {
    let (nf, _) = normal_form(pt)?;
    Ok(GrassPoint::new(nf.b.submatrix(&[0, 1, 2, 3, 4], &[1, 2]))?)
}

/// A destabilizing family g_n⁻¹ = P diag(n^w) P⁻¹, n → ∞.
#[derive(Clone, Debug, PartialEq)]
pub struct OnePsCertificate<F> {
    pub chamber: Chamber,
    pub weights: [i64; 3],
    pub conjugator: Option<Mat<F>>,
}

/// Exponent bookkeeping for a certificate. Exponents are powers of n in the entries of
/// P⁻¹·(B, ω) under the diagonal family; t-valuations with t = 1/n are their negatives.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateCheck {
    pub weights: [i64; 3],
    pub max_entry_exponent: Option<i64>,
    pub min_t_valuation: Option<i64>,
    pub det_t_valuation: i64,
    pub limit_exists: bool,
    pub character_condition: bool,
    pub valid: bool,
}

pub fn instability_certificate<F: Field>(pt: &GlsmPoint<F>, chamber: Chamber) -> Result<OnePsCertificate<F>, GlsmError> {
    if semistable(pt, chamber) {
        return Err(GlsmError::Semistable(chamber));
    }
    let cert = match chamber {
        Chamber::Plus => {
            let k = pt.b.kernel().into_iter().next().expect("rank below 3");
            OnePsCertificate { chamber, weights: [1, 0, 0], conjugator: Some(complete_basis(&k, &[])) }
        }
        Chamber::Minus if pt.omega.iter().all(|x| x.is_zero()) => {
            OnePsCertificate { chamber, weights: [-1, 0, 0], conjugator: None }
        }
        Chamber::Minus => {
            let k = pt.common_kernel().expect("unstable with ω ≠ 0");
            OnePsCertificate { chamber, weights: [3, -2, -2], conjugator: Some(complete_basis(&k, &[])) }
        }
    };
    Ok(cert)
}

pub fn verify_certificate<F: Field>(pt: &GlsmPoint<F>, cert: &OnePsCertificate<F>) -> Result<CertificateCheck, AlgError> {
    let moved = match &cert.conjugator {
        Some(p) => pt.gauge(&p.inverse()?)?,
        None => pt.clone(),
    };
    let a = cert.weights;
    let sum: i64 = a.iter().sum();
    let mut exps = Vec::new();
    for i in 0..5 {
        for (j, &aj) in a.iter().enumerate() {
            if !moved.b[(i, j)].is_zero() {
                exps.push(aj);
            }
        }
    }
    for (j, &aj) in a.iter().enumerate() {
        if !moved.omega[j].is_zero() {
            exps.push(aj - 2 * sum);
        }
    }
    let max_entry_exponent = exps.iter().copied().max();
    let limit_exists = max_entry_exponent.is_none_or(|m| m <= 0);
    // det g_n = n^{-Σa}; its t-valuation is Σa
    let det_t_valuation = sum;
    let character_condition = match cert.chamber {
        Chamber::Plus => det_t_valuation > 0,
        Chamber::Minus => det_t_valuation < 0,
    };
    Ok(CertificateCheck {
        weights: a,
        max_entry_exponent,
        min_t_valuation: max_entry_exponent.map(|m| -m),
        det_t_valuation,
        limit_exists,
        character_condition,
        valid: limit_exists && character_condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::{pushforward_to_g25, quadric_vector, random_hf_section};
    use crate::F13;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn m(rows: &[&[i64]]) -> Mat<F13> {
        Mat::from_i64_rows(rows)
    }

    fn v(x: &[i64]) -> Vec<F13> {
        x.iter().map(|&a| F13::from_i64(a)).collect()
    }

    fn e123() -> Mat<F13> {
        m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 0], &[0, 0, 0]])
    }

    #[test]
    fn chamber_examples() {
        let p = GlsmPoint::new(e123(), v(&[0, 0, 0])).unwrap();
        assert!(semistable(&p, Chamber::Plus));
        assert!(!semistable(&p, Chamber::Minus));
        let zero_col = m(&[&[0, 1, 2], &[0, 3, 1], &[0, 0, 5], &[0, 2, 2], &[0, 1, 0]]);
        let p = GlsmPoint::new(zero_col.clone(), v(&[0, 4, 7])).unwrap();
        assert!(!semistable(&p, Chamber::Minus));
        let p = GlsmPoint::new(zero_col, v(&[1, 4, 7])).unwrap();
        assert!(semistable(&p, Chamber::Minus));
        assert!(!semistable(&p, Chamber::Plus));
    }

    #[test]
    fn superpotential_vanishing_and_invariance() {
        let mut r = rng(1);
        let s = random_hf_section::<F13, _>(&mut r);
        let b = Mat::random(5, 3, &mut r);
        assert!(superpotential(&GlsmPoint::new(b.clone(), v(&[0, 0, 0])).unwrap(), &s).is_zero());
        let low = m(&[&[1, 2, 3], &[0, 1, 1], &[2, 0, 2], &[1, 1, 2], &[0, 3, 3]]);
        assert_eq!(low.rank(), 2);
        assert!(superpotential(&GlsmPoint::new(low, v(&[1, 2, 3])).unwrap(), &s).is_zero());
        let p = GlsmPoint::new(b, (0..3).map(|_| F13::random(&mut r)).collect()).unwrap();
        let w0 = superpotential(&p, &s);
        for _ in 0..100 {
            let g = random_gauge(&mut r);
            assert_eq!(superpotential(&p.gauge(&g).unwrap(), &s), w0);
        }
    }

    #[test]
    fn certificates_for_each_shape() {
        let p = GlsmPoint::new(m(&[&[0, 1, 2], &[0, 3, 1], &[0, 0, 5], &[0, 2, 2], &[0, 1, 0]]), v(&[0, 4, 7])).unwrap();
        let c = instability_certificate(&p, Chamber::Minus).unwrap();
        assert_eq!(c.weights, [3, -2, -2]);
        assert!(verify_certificate(&p, &c).unwrap().valid);

        let p = GlsmPoint::new(e123(), v(&[0, 0, 0])).unwrap();
        let c = instability_certificate(&p, Chamber::Minus).unwrap();
        assert_eq!(c.weights, [-1, 0, 0]);
        assert!(verify_certificate(&p, &c).unwrap().valid);
        assert!(instability_certificate(&p, Chamber::Plus).is_err());

        let low = m(&[&[1, 2, 3], &[0, 1, 1], &[2, 0, 2], &[1, 1, 2], &[0, 3, 3]]);
        let p = GlsmPoint::new(low, v(&[5, 1, 1])).unwrap();
        let c = instability_certificate(&p, Chamber::Plus).unwrap();
        let chk = verify_certificate(&p, &c).unwrap();
        assert!(chk.valid && chk.min_t_valuation.unwrap() >= 0, "{chk:?}");
    }

    #[test]
    fn wrong_weights_fail_verification() {
        let p = GlsmPoint::new(m(&[&[0, 1, 2], &[0, 3, 1], &[0, 0, 5], &[0, 2, 2], &[0, 1, 0]]), v(&[0, 4, 7])).unwrap();
        let mut c = instability_certificate(&p, Chamber::Minus).unwrap();
        c.weights = [3, -1, -1];
        assert!(!verify_certificate(&p, &c).unwrap().valid);
        c.weights = [1, -2, -2];
        assert!(!verify_certificate(&p, &c).unwrap().limit_exists);
    }

    #[test]
    fn normal_form_examples() {
        let b = m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
        let p = GlsmPoint::new(b.clone(), v(&[1, 0, 0])).unwrap();
        let (nf, g) = normal_form(&p).unwrap();
        assert_eq!(nf, p);
        assert_eq!(g, Mat::identity(3));
        let a = gauge_reduce(&p).unwrap();
        assert!(a.same_point(&GrassPoint::new(b.submatrix(&[0, 1, 2, 3, 4], &[1, 2])).unwrap()));

        let mut r = rng(3);
        for _ in 0..30 {
            let q = p.gauge(&random_gauge(&mut r)).unwrap();
            let (nf2, g2) = normal_form(&q).unwrap();
            assert_eq!(nf2, p);
            assert_eq!(q.gauge(&g2).unwrap(), nf2);
            assert!(gauge_reduce(&q).unwrap().same_point(&a));
        }
    }

    #[test]
    fn reduced_quartics_are_the_quadrics() {
        // in the normal form with A = (b₂ | b₃) the quartics equal the quadrics of X at [A]
        let mut r = rng(4);
        let s = random_hf_section::<F13, _>(&mut r);
        let w = Superpotential::new(&s);
        let quad = pushforward_to_g25(&s);
        let polys = w.reduced_quartic_polys();
        for _ in 0..40 {
            let a = Mat::<F13>::random_full_rank(5, 2, &mut r);
            let b = Mat::from_cols(&[vec![F13::zero(); 5], a.col(0), a.col(1)]);
            let x = crate::grassflag::pluecker(&a).unwrap();
            let qv = quadric_vector(&s, &x);
            let qsym: Vec<F13> = quad.quadrics.iter().map(|q| q.eval(&x)).collect();
            assert_eq!(qv, qsym);
            let entries: Vec<F13> = (0..15).map(|k| b[(k / 3, k % 3)]).collect();
            let quartic: Vec<F13> = polys.iter().map(|p| p.eval(&entries)).collect();
            assert_eq!(quartic, w.reduced_quartics(&b));
            // same vector up to one global sign
            let neg: Vec<F13> = qv.iter().map(|&x| -x).collect();
            assert!(quartic == qv || quartic == neg, "{quartic:?} vs {qv:?}");
        }
    }

    #[test]
    fn plus_chamber_okonek_example() {
        let mut r = rng(5);
        let s = random_hf_section::<F13, _>(&mut r);
        let w = Superpotential::new(&s);
        let b = sweep::sample_y_point(&w, &mut r).unwrap();
        let j = w.jacobian(&b);
        assert_eq!(j.rank(), 3);
        let zero = GlsmPoint::new(b.clone(), v(&[0, 0, 0])).unwrap();
        assert!(critical_member(&zero, &w, Chamber::Plus).unwrap());
        let nonzero = GlsmPoint::new(b, v(&[1, 2, 3])).unwrap();
        assert!(!critical_member(&nonzero, &w, Chamber::Plus).unwrap());
    }

    #[test]
    fn rank_three_is_never_minus_critical() {
        let mut r = rng(6);
        let s = random_hf_section::<F13, _>(&mut r);
        let w = Superpotential::new(&s);
        let p = GlsmPoint::new(e123(), v(&[1, 1, 1])).unwrap();
        assert!(!critical_member(&p, &w, Chamber::Minus).unwrap());
        let unstable = GlsmPoint::new(e123(), v(&[0, 0, 0])).unwrap();
        assert!(matches!(critical_member(&unstable, &w, Chamber::Minus), Err(GlsmError::Unstable(_))));
    }

    #[test]
    fn predicates_survive_many_gauge_transformations() {
        let mut r = rng(7);
        let s = random_hf_section::<F13, _>(&mut r);
        let w = Superpotential::new(&s);
        let a = sample_x_point(&s, &mut r).unwrap();
        let crit = GlsmPoint::new(Mat::from_cols(&[vec![F13::zero(); 5], a.col(0), a.col(1)]), v(&[1, 0, 0])).unwrap();
        let generic = GlsmPoint::new(Mat::random(5, 3, &mut r), v(&[2, 0, 1])).unwrap();
        for p in [crit, generic] {
            let base: Vec<bool> = [Chamber::Plus, Chamber::Minus].iter().map(|&c| semistable(&p, c)).collect();
            let cm = critical_member(&p, &w, Chamber::Minus).ok();
            for _ in 0..500 {
                let q = p.gauge(&random_gauge(&mut r)).unwrap();
                let now: Vec<bool> = [Chamber::Plus, Chamber::Minus].iter().map(|&c| semistable(&q, c)).collect();
                assert_eq!(now, base);
                assert_eq!(critical_member(&q, &w, Chamber::Minus).ok(), cm);
            }
        }
    }
}
