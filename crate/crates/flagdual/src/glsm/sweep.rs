use rand::Rng;
use serde::Serialize;

use super::{
    critical_member, gauge_reduce, instability_certificate, is_critical_point, normal_form, verify_certificate,
    Chamber, GlsmPoint, Superpotential,
};
use crate::duality::quadric_vector;
use crate::exactalg::{AlgError, Field, FiniteField, Mat};
use crate::grassflag::{pluecker, SectionMatrix};
use crate::motivic::{count_points, sum_over_subspaces, CountBudget, Which};

/// Rejection-sampling attempts per requested point: a few thousand times the expected
/// q³ draws, since X and Y have about q³ of the q⁶ points of their Grassmannians.
fn max_tries<F: Field>() -> usize {
    let q = F::characteristic().clamp(2, 1000) as usize;
    2000 * q * q * q
}

pub fn random_gauge<F: Field, R: Rng + ?Sized>(rng: &mut R) -> Mat<F> {
    Mat::random_full_rank(3, 3, rng)
}

fn nonzero_vec<F: Field, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<F> {
    loop {
        let v: Vec<F> = (0..n).map(|_| F::random(rng)).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn on_x<F: Field>(s: &SectionMatrix<F>, a: &Mat<F>) -> bool {
    quadric_vector(s, &pluecker(a).expect("5x2")).iter().all(|x| x.is_zero())
}

/// A 5x2 representative of a random point of X, by rejection sampling.
pub fn sample_x_point<F: Field, R: Rng + ?Sized>(s: &SectionMatrix<F>, rng: &mut R) -> Option<Mat<F>> {
    (0..max_tries::<F>()).map(|_| Mat::random_full_rank(5, 2, rng)).find(|a| on_x(s, a))
}

/// A 5x3 representative of a random point of Y, by rejection sampling.
pub fn sample_y_point<F: Field, R: Rng + ?Sized>(w: &Superpotential<F>, rng: &mut R) -> Option<Mat<F>> {
    (0..max_tries::<F>())
        .map(|_| Mat::random_full_rank(5, 3, rng))
        .find(|b| w.quintics(b).iter().all(|x| x.is_zero()))
}

fn canonical<F: Field>(a: &Mat<F>) -> GlsmPoint<F> {
    let b = Mat::from_cols(&[vec![F::zero(); 5], a.col(0), a.col(1)]);
    let mut omega = vec![F::zero(); 3];
    omega[0] = F::one();
    GlsmPoint { b, omega }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinusSweep {
    pub field: String,
    pub samples: usize,
    /// points of X found by rejection sampling (the sweep falls back to generic rank 2)
    pub x_points_sampled: usize,
    pub rank_two: usize,
    pub critical: usize,
    /// critical_member agrees with "rank 2 and the reduced point lies on X"
    pub agree_reduction: usize,
    /// critical_member agrees with the Jacobian equations ŝ = 0, ω·dŝ = 0
    pub agree_jacobian: usize,
    /// predicates and the reduced point unchanged under one random gauge transformation
    pub gauge_stable: usize,
    pub mismatches: Vec<usize>,
    pub pass: bool,
}

/// Samples minus-chamber points (half built over points of X, the rest generic rank 2
/// or rank 3) and compares the three descriptions of the critical locus.
pub fn minus_chamber_sweep<F: Field, R: Rng + ?Sized>(w: &Superpotential<F>, samples: usize, rng: &mut R) -> MinusSweep {
    let mut out = MinusSweep {
        field: F::field_name(),
        samples,
        x_points_sampled: 0,
        rank_two: 0,
        critical: 0,
        agree_reduction: 0,
        agree_jacobian: 0,
        gauge_stable: 0,
        mismatches: Vec::new(),
        pass: false,
    };
    let mut x_empty = false;
    for i in 0..samples {
        let base = match i % 4 {
            0 | 1 if !x_empty => {
                let a = sample_x_point(&w.section, rng);
                x_empty = a.is_none();
                out.x_points_sampled += a.is_some() as usize;
                a
            }
            3 => None,
            _ => Some(Mat::random_full_rank(5, 2, rng)),
        };
        let pt = match base {
            Some(a) => canonical(&a).gauge(&random_gauge(rng)).expect("invertible"),
            None if i % 4 == 3 => GlsmPoint { b: Mat::random_full_rank(5, 3, rng), omega: nonzero_vec(rng, 3) },
            None => canonical(&Mat::random_full_rank(5, 2, rng)).gauge(&random_gauge(rng)).expect("invertible"),
        };
        let member = critical_member(&pt, w, Chamber::Minus).expect("sampled points are semistable");
        let rank_two = pt.rank_b() == 2;
        let reduced = if rank_two { Some(gauge_reduce(&pt).expect("rank 2")) } else { None };
        let expected = reduced.as_ref().is_some_and(|a| on_x(&w.section, &a.rep));
        let jac = is_critical_point(&pt, w);
        let moved = pt.gauge(&random_gauge(rng)).expect("invertible");
        let stable = critical_member(&moved, w, Chamber::Minus).ok() == Some(member)
            && match &reduced {
                Some(a) => gauge_reduce(&moved).map(|b| b.same_point(a)).unwrap_or(false),
                None => moved.rank_b() == 3,
            };
        out.rank_two += rank_two as usize;
        out.critical += member as usize;
        out.agree_reduction += (member == expected) as usize;
        out.agree_jacobian += (member == jac) as usize;
        out.gauge_stable += stable as usize;
        if member != expected || member != jac || !stable {
            out.mismatches.push(i);
        }
    }
    out.pass = out.mismatches.is_empty();
    out
}

/// Plus-chamber points: a third on Y with ω = 0, a third on Y with ω ≠ 0, a third with
/// random B. Critical membership must coincide with ω = 0 and ŝ(B) = 0.
#[derive(Clone, Debug, Serialize)]
pub struct PlusSweep {
    pub field: String,
    pub samples: usize,
    pub y_points_sampled: usize,
    pub critical: usize,
    pub mismatches: usize,
    pub pass: bool,
}

pub fn plus_chamber_sweep<F: Field, R: Rng + ?Sized>(w: &Superpotential<F>, samples: usize, rng: &mut R) -> PlusSweep {
    let mut out =
        PlusSweep { field: F::field_name(), samples, y_points_sampled: 0, critical: 0, mismatches: 0, pass: false };
    let mut y_empty = false;
    for i in 0..samples {
        let on_y = if i % 3 < 2 && !y_empty { sample_y_point(w, rng) } else { None };
        y_empty |= i % 3 < 2 && on_y.is_none();
        out.y_points_sampled += on_y.is_some() as usize;
        let b = on_y.unwrap_or_else(|| Mat::random_full_rank(5, 3, rng));
        let omega = if i % 3 == 0 { vec![F::zero(); 3] } else { nonzero_vec(rng, 3) };
        let expected = omega.iter().all(|x| x.is_zero()) && w.quintics(&b).iter().all(|x| x.is_zero());
        let pt = GlsmPoint { b, omega };
        let crit = critical_member(&pt, w, Chamber::Plus).expect("rank 3 is plus-semistable");
        out.critical += crit as usize;
        out.mismatches += (crit != expected) as usize;
    }
    out.pass = out.mismatches == 0;
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateSweep {
    pub samples: usize,
    pub plus_rank_deficient: usize,
    pub minus_zero_omega: usize,
    pub minus_common_kernel: usize,
    pub verified: usize,
    pub pass: bool,
}

/// Draws unstable points of the three shapes in rotation and verifies every certificate.
pub fn certificate_sweep<F: Field, R: Rng + ?Sized>(samples: usize, rng: &mut R) -> Result<CertificateSweep, AlgError> {
    let mut out = CertificateSweep {
        samples,
        plus_rank_deficient: 0,
        minus_zero_omega: 0,
        minus_common_kernel: 0,
        verified: 0,
        pass: false,
    };
    for i in 0..samples {
        let (pt, chamber) = match i % 3 {
            0 => {
                // rank at most 2: the third column is a combination of the first two
                let a = Mat::<F>::random(5, 2, rng);
                let (x, y) = (F::random(rng), F::random(rng));
                let c: Vec<F> = (0..5).map(|r| a[(r, 0)].clone() * x.clone() + a[(r, 1)].clone() * y.clone()).collect();
                let b = Mat::from_cols(&[a.col(0), a.col(1), c]).mul_perm(i);
                out.plus_rank_deficient += 1;
                (GlsmPoint { b, omega: (0..3).map(|_| F::random(rng)).collect() }, Chamber::Plus)
            }
            1 => {
                out.minus_zero_omega += 1;
                (GlsmPoint { b: Mat::random(5, 3, rng), omega: vec![F::zero(); 3] }, Chamber::Minus)
            }
            _ => {
                // B and ω both kill a random vector k
                let g = random_gauge::<F, _>(rng);
                let mut b = Mat::random(5, 3, rng);
                for r in 0..5 {
                    b[(r, 0)] = F::zero();
                }
                let omega = vec![F::zero(), F::random(rng), F::one()];
                out.minus_common_kernel += 1;
                (GlsmPoint { b, omega }.gauge(&g)?, Chamber::Minus)
            }
        };
        let cert = instability_certificate(&pt, chamber).map_err(|e| AlgError::Invalid(e.to_string()))?;
        if verify_certificate(&pt, &cert)?.valid {
            out.verified += 1;
        }
    }
    out.pass = out.verified == samples;
    Ok(out)
}

trait MulPerm {
    fn mul_perm(self, i: usize) -> Self;
}

impl<F: Field> MulPerm for Mat<F> {
    /// Cyclically shifts the columns so the dependent one is not always last.
    fn mul_perm(self, i: usize) -> Self {
        let k = (i / 3) % 3;
        let cols: Vec<Vec<F>> = (0..3).map(|j| self.col((j + k) % 3)).collect();
        Mat::from_cols(&cols)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BijectionReport {
    pub field: String,
    pub q: u64,
    /// canonical points ((0 | A), (1,0,0)), one per point A of G(2,5), that are critical
    pub critical_classes: u64,
    pub x_count: u64,
    /// random critical points whose normal form is a canonical point
    pub normalized: usize,
    pub normalization_samples: usize,
    pub pass: bool,
}

/// Counts gauge classes of minus-chamber critical points through their canonical
/// representatives and compares with the number of points of X.
pub fn bijection_count<F: FiniteField, R: Rng + ?Sized>(
    w: &Superpotential<F>,
    budget: CountBudget,
    samples: usize,
    rng: &mut R,
) -> Result<BijectionReport, AlgError> {
    let x_count = count_points(&w.section, Which::X, budget)?;
    let critical_classes = sum_over_subspaces::<F>(2, |a| {
        critical_member(&canonical(a), w, Chamber::Minus).expect("canonical points are semistable") as u64
    });
    let mut normalized = 0;
    if x_count > 0 {
        for _ in 0..samples {
            let Some(a) = sample_x_point(&w.section, rng) else { break };
            let pt = canonical(&a).gauge(&random_gauge(rng))?;
            let Ok((nf, g)) = normal_form(&pt) else { continue };
            let a = nf.b.submatrix(&[0, 1, 2, 3, 4], &[1, 2]);
            let is_canonical = nf == canonical(&a) && a.transpose().echelon().rref == a.transpose();
            if is_canonical && pt.gauge(&g)? == nf {
                normalized += 1;
            }
        }
    }
    let normalization_samples = if x_count > 0 { samples } else { 0 };
    Ok(BijectionReport {
        field: F::field_name(),
        q: F::order(),
        critical_classes,
        x_count,
        normalized,
        normalization_samples,
        pass: critical_classes == x_count && normalized == normalization_samples,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OkonekReport {
    pub field: String,
    pub requested: usize,
    pub points: usize,
    pub ranks: Vec<usize>,
    pub pass: bool,
}

/// Rank of dŝ at sampled points of Y; rank 3 forces ω = 0 on the critical locus.
pub fn okonek_check<F: Field, R: Rng + ?Sized>(w: &Superpotential<F>, points: usize, rng: &mut R) -> OkonekReport {
    let ranks: Vec<usize> =
        (0..points).map_while(|_| sample_y_point(w, rng)).map(|b| w.jacobian(&b).rank()).collect();
    let pass = ranks.len() == points && ranks.iter().all(|&r| r == 3);
    OkonekReport { field: F::field_name(), requested: points, points: ranks.len(), ranks, pass }
}
