use num_traits::Zero;

use crate::exactalg::{pair_index, Field, Mat, Poly, Ring, PAIRS, TRIPLES};
use crate::grassflag::{dual_coords, Grass, GrassPoint, SectionMatrix};

/// Scalar relating `s(A, [A|w])` to `Σ_r w_r Q_r(A)`. With the pinned conventions the
/// contraction reproduces the section exactly, so the constant is one; it is still
/// recomputed on a reference flag by [`normalization_constant`].
pub const QUADRIC_NORMALIZATION: i64 = 1;

/// The five quadrics Q_1..Q_5 in the ten Plücker variables of G(2,5).
#[derive(Clone, PartialEq)]
pub struct QuadricSystem<F> {
    pub quadrics: Vec<Poly<F>>,
}

/// The three quintics in the fifteen entries of B; entry (p, r) is variable `3p + r`.
#[derive(Clone, PartialEq)]
pub struct QuinticTriple<F> {
    pub components: Vec<Poly<F>>,
}

impl<F: Field> std::fmt::Debug for QuadricSystem<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.quadrics.iter()).finish()
    }
}

impl<F: Field> std::fmt::Debug for QuinticTriple<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.components.iter()).finish()
    }
}

pub fn b_var(p: usize, r: usize) -> usize {
    3 * p + r
}

/// Coefficient of w_r in the dual coordinates of [A | w], as a linear form in the
/// Plücker coordinates x of A: ψ_ijk = w_i x_jk - w_j x_ik + w_k x_ij.
fn dual_coords_linear_in_w<F: Ring>(x: &[F]) -> [[F; 10]; 5] {
    let mut out: [[F; 10]; 5] = std::array::from_fn(|_| std::array::from_fn(|_| F::zero()));
    for r in 0..5 {
        let mut psi = vec![F::zero(); 10];
        for (t, &(i, j, k)) in TRIPLES.iter().enumerate() {
            let mut v = F::zero();
            if r == i {
                v = v + x[pair_index(j, k)].clone();
            }
            if r == j {
                v = v - x[pair_index(i, k)].clone();
            }
            if r == k {
                v = v + x[pair_index(i, j)].clone();
            }
            psi[t] = v;
        }
        let y = dual_coords(&psi);
        for p in 0..10 {
            out[r][p] = y[p].clone();
        }
    }
    out
}

pub fn pushforward_to_g25<F: Field>(s: &SectionMatrix<F>) -> QuadricSystem<F> {
    let x: Vec<Poly<F>> = (0..10).map(Poly::var).collect();
    let sx: Vec<Poly<F>> = (0..10)
        .map(|p| (0..10).fold(Poly::zero(), |acc, q| &acc + &x[q].scale(&s.s[(p, q)])))
        .collect();
    let lin = dual_coords_linear_in_w(&x);
    let quadrics = (0..5)
        .map(|r| (0..10).fold(Poly::zero(), |acc, p| &acc + &(&lin[r][p] * &sx[p])))
        .collect();
    QuadricSystem { quadrics }
}

/// The quadric vector at Plücker coordinates `x`, computed without polynomials.
pub fn quadric_vector<F: Field>(s: &SectionMatrix<F>, x: &[F]) -> Vec<F> {
    let lin = dual_coords_linear_in_w(x);
    let sx = s.s.mul_vec(x);
    (0..5).map(|r| (0..10).fold(F::zero(), |acc, p| acc + lin[r][p].clone() * sx[p].clone())).collect()
}

/// Ratio s(A, [A|w]) / Σ_r w_r Q_r(A) on the reference flag (e1,e2) ⊂ (e1,e2,e3),
/// measured with a matrix-unit section that is nonzero there.
pub fn normalization_constant<F: Field>() -> F {
    // probe section: the matrix unit pairing x_12 with the dual coordinate of e1∧e2∧e3
    let mut m = Mat::zeros(10, 10);
    let (p, _) = crate::exactalg::triple_to_pair(0);
    m[(p, 0)] = F::one();
    let s = SectionMatrix { s: m };
    let a = GrassPoint::new(Mat::from_i64_rows(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0], &[0, 0]])).unwrap();
    let b = GrassPoint::new(Mat::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 0], &[0, 0, 0]])).unwrap();
    let direct = s.eval_points(&a, &b);
    let q = quadric_vector(&s, &a.coords());
    let contracted = q[2].clone();
    direct.try_div(&contracted).expect("probe is nonzero on the reference flag")
}

/// Plücker coordinates of the wedge of the two columns of B other than r.
fn cofactor_pluecker<R: crate::exactalg::Ring>(b: &Mat<R>, r: usize) -> Vec<R> {
    let cols: Vec<usize> = (0..3).filter(|&c| c != r).collect();
    PAIRS.iter().map(|&(l, m)| b.minor(&[l, m], &cols)).collect()
}

fn sign<R: crate::exactalg::Ring>(r: usize, v: R) -> R {
    if r % 2 == 0 {
        v
    } else {
        -v
    }
}

pub fn pushforward_to_g35<F: Field>(s: &SectionMatrix<F>) -> QuinticTriple<F> {
    let b = Mat::<Poly<F>>::from_fn(5, 3, |p, r| Poly::var(b_var(p, r)));
    let psi: Vec<Poly<F>> = TRIPLES.iter().map(|&(i, j, k)| b.minor(&[i, j, k], &[0, 1, 2])).collect();
    let mut y = vec![Poly::zero(); 10];
    for (t, v) in psi.into_iter().enumerate() {
        let (p, sg) = crate::exactalg::triple_to_pair(t);
        y[p] = if sg > 0 { v } else { -v };
    }
    // c = S^T y
    let c: Vec<Poly<F>> = (0..10)
        .map(|q| (0..10).fold(Poly::zero(), |acc, p| &acc + &y[p].scale(&s.s[(p, q)])))
        .collect();
    let components = (0..3)
        .map(|r| {
            let cof = cofactor_pluecker(&b, r);
            let v = (0..10).fold(Poly::zero(), |acc, q| &acc + &(&c[q] * &cof[q]));
            sign(r, v)
        })
        .collect();
    QuinticTriple { components }
}

/// ŝ(B) evaluated directly; zero when B has rank below 3.
pub fn quintic_vector<F: Field>(s: &SectionMatrix<F>, b: &Mat<F>) -> Vec<F> {
    let psi: Vec<F> = TRIPLES.iter().map(|&(i, j, k)| b.minor(&[i, j, k], &[0, 1, 2])).collect();
    let y = dual_coords(&psi);
    let c = s.s.transpose().mul_vec(&y);
    (0..3)
        .map(|r| {
            let cof = cofactor_pluecker(b, r);
            sign(r, c.iter().zip(&cof).fold(F::zero(), |acc, (u, v)| acc + u.clone() * v.clone()))
        })
        .collect()
}

/// The 5-vector v_q = Σ_{lm} (S^T ybar)_{lm} ψ_{qlm}(B).
pub fn quintic_contracted_vector<F: Field>(s: &SectionMatrix<F>, b: &Mat<F>) -> Vec<F> {
    let psi: Vec<F> = TRIPLES.iter().map(|&(i, j, k)| b.minor(&[i, j, k], &[0, 1, 2])).collect();
    let c = s.s.transpose().mul_vec(&dual_coords(&psi));
    (0..5)
        .map(|q| {
            PAIRS.iter().enumerate().fold(F::zero(), |acc, (pi, &(l, m))| {
                if q == l || q == m {
                    return acc;
                }
                let minor = b.minor(&[q, l, m], &[0, 1, 2]);
                acc + c[pi].clone() * minor
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum FiberClass {
    P1,
    P2,
}

/// Fiber of M over a point of G(2,5) or G(3,5).
pub fn fiber_class<F: Field>(s: &SectionMatrix<F>, x: &GrassPoint<F>) -> FiberClass {
    let v = match x.space {
        Grass::G25 => quadric_vector(s, &x.coords()),
        Grass::G35 => quintic_vector(s, &x.rep),
    };
    if v.iter().all(|c| c.is_zero()) {
        FiberClass::P2
    } else {
        FiberClass::P1
    }
}
