//! Randomized identity checks over any field, with explicit instance counts so that
//! reports can state how many cases were run.

use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use crate::duality::{quadric_vector, quintic_contracted_vector, quintic_vector, random_hf_section};
use crate::exactalg::{exterior_square, groebner_basis, is_groebner, Budget, Field, Ideal, Mat, Poly};
use crate::grassflag::{dual_coords, pluecker, pluecker_relations, SectionMatrix};

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub field: String,
    pub instances: usize,
    pub failures: usize,
    pub pass: bool,
}

fn tally<F: Field>(name: &str, instances: usize, mut case: impl FnMut() -> bool) -> PropertyResult {
    let failures = (0..instances).filter(|_| !case()).count();
    PropertyResult { name: name.into(), field: F::field_name(), instances, failures, pass: failures == 0 }
}

pub fn wedge_multiplicative<F: Field, R: Rng + ?Sized>(rng: &mut R, n: usize) -> PropertyResult {
    tally::<F>("wedge2_multiplicative", n, || {
        let a = Mat::<F>::random(5, 5, rng);
        let b = Mat::<F>::random(5, 5, rng);
        let lhs = exterior_square(&(&a * &b)).unwrap();
        lhs == &exterior_square(&a).unwrap() * &exterior_square(&b).unwrap()
    })
}

pub fn wedge_determinant<F: Field, R: Rng + ?Sized>(rng: &mut R, n: usize) -> PropertyResult {
    tally::<F>("det_wedge2_is_det_to_the_4", n, || {
        let t = Mat::<F>::random(5, 5, rng);
        let d = t.det().unwrap();
        exterior_square(&t).unwrap().det().unwrap() == d.pow(4)
    })
}

/// Plücker relations on both Grassmannians; G(3,5) points enter through their dual
/// coordinates.
pub fn pluecker_identities<F: Field, R: Rng + ?Sized>(rng: &mut R, n: usize) -> PropertyResult {
    tally::<F>("pluecker_relations", n, || {
        let a = Mat::<F>::random(5, 2, rng);
        let b = Mat::<F>::random(5, 3, rng);
        let on_g25 = pluecker_relations(&pluecker(&a).unwrap()).iter().all(|x| x.is_zero());
        let on_g35 = pluecker_relations(&dual_coords(&pluecker(&b).unwrap())).iter().all(|x| x.is_zero());
        on_g25 && on_g35
    })
}

/// ŝ(B g⁻¹) = det(g)⁻² g ŝ(B).
pub fn gauge_covariance<F: Field, R: Rng + ?Sized>(s: &SectionMatrix<F>, rng: &mut R, n: usize) -> PropertyResult {
    tally::<F>("quintic_gauge_covariance", n, || {
        let b = Mat::<F>::random(5, 3, rng);
        let g = Mat::<F>::random_full_rank(3, 3, rng);
        let lhs = quintic_vector(s, &(&b * &g.inverse().unwrap()));
        let d = g.det().unwrap();
        let scale = (d.clone() * d).try_inv().unwrap();
        let rhs: Vec<F> = g.mul_vec(&quintic_vector(s, &b)).into_iter().map(|x| x * scale.clone()).collect();
        lhs == rhs
    })
}

/// Both pushforwards contract back to the section: s(A, [A|w]) = Σ w_r Q_r(A), and
/// Σ_c ŝ_c(B) B_qc equals the contracted vector of B.
pub fn contraction_identity<F: Field, R: Rng + ?Sized>(s: &SectionMatrix<F>, rng: &mut R, n: usize) -> PropertyResult {
    tally::<F>("pushforward_contraction", n, || {
        let a = Mat::<F>::random(5, 2, rng);
        let w: Vec<F> = (0..5).map(|_| F::random(rng)).collect();
        let x = pluecker(&a).unwrap();
        let y = dual_coords(&pluecker(&a.hstack(&Mat::from_cols(&[w.clone()]))).unwrap());
        let q = quadric_vector(s, &x);
        let contracted = w.iter().zip(&q).fold(F::zero(), |acc, (u, v)| acc + u.clone() * v.clone());
        let g25 = s.eval(&x, &y) == contracted;

        let b = Mat::<F>::random(5, 3, rng);
        let sh = quintic_vector(s, &b);
        let lhs: Vec<F> =
            (0..5).map(|p| (0..3).fold(F::zero(), |acc, c| acc + sh[c].clone() * b[(p, c)].clone())).collect();
        g25 && lhs == quintic_contracted_vector(s, &b)
    })
}

fn random_poly<F: Field, R: Rng + ?Sized>(rng: &mut R, nvars: usize) -> Poly<F> {
    let mut p = Poly::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let mut m: Poly<F> = Poly::constant(F::random(rng));
        for _ in 0..rng.gen_range(0..=2) {
            m = &m * &Poly::<F>::var(rng.gen_range(0..nvars));
        }
        p = &p + &m;
    }
    p
}

/// Every S-polynomial of a computed basis reduces to zero, and so does every generator.
pub fn groebner_reduction<F: Field, R: Rng + ?Sized>(rng: &mut R, n: usize) -> PropertyResult {
    tally::<F>("groebner_s_polynomials_reduce", n, || {
        let gens: Vec<Poly<F>> = (0..3).map(|_| random_poly(rng, 3)).collect();
        let ideal = Ideal::new(3, gens.clone());
        let Ok((gb, _)) = groebner_basis(&ideal, Budget::default()) else { return false };
        is_groebner(&gb.gens) && gens.iter().all(|g| crate::exactalg::groebner::contains(&gb, g))
    })
}

/// All six families on one field.
pub fn run_all<F: Field, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<PropertyResult> {
    let s = random_hf_section::<F, _>(rng);
    vec![
        wedge_multiplicative::<F, _>(rng, n),
        wedge_determinant::<F, _>(rng, n),
        pluecker_identities::<F, _>(rng, n),
        gauge_covariance(&s, rng, n),
        contraction_identity(&s, rng, n),
        groebner_reduction::<F, _>(rng, n),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{F13, F2, Q};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_families_hold_on_small_runs() {
        let mut r = ChaCha8Rng::seed_from_u64(5);
        for res in run_all::<F13, _>(&mut r, 20).into_iter().chain(run_all::<F2, _>(&mut r, 20)) {
            assert!(res.pass, "{res:?}");
        }
        for res in run_all::<Q, _>(&mut r, 5) {
            assert!(res.pass, "{res:?}");
        }
    }

    #[test]
    fn a_broken_identity_is_caught() {
        let mut r = ChaCha8Rng::seed_from_u64(6);
        let res = tally::<F13>("always_false", 7, || false);
        assert_eq!((res.failures, res.pass), (7, false));
        // det(∧²T) is not det(T)³ in general
        let bad = tally::<F13>("det_cubed", 30, || {
            let t = Mat::<F13>::random(5, 5, &mut r);
            exterior_square(&t).unwrap().det().unwrap() == t.det().unwrap().pow(3)
        });
        assert!(!bad.pass);
    }
}
