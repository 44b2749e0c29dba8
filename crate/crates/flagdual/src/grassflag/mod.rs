//! Plücker coordinates on G(2,5) and G(3,5), the flag variety F(2,3,5) inside
//! P(Λ²V) × P(Λ²V^∨), its 25 linear (1,1) equations, the complement `hf_space`,
//! and the involution induced by an isomorphism V → V^∨.
//!
//! A point of G(3,5) is turned into dual coordinates by sending the minor on rows
//! `ijk` to the complementary pair `lm` with the sign of the permutation `ijklm`.

mod subspace;

use rand::Rng;

pub use subspace::MatrixSubspace;

use crate::exactalg::{
    exterior_square, pair_index, perm_sign, triple_to_pair, AlgError, Field, Mat, Ring, PAIRS, TRIPLES,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Grass {
    G25,
    G35,
}

impl Grass {
    pub fn k(self) -> usize {
        match self {
            Grass::G25 => 2,
            Grass::G35 => 3,
        }
    }
}

/// Maximal minors of a 5x2 or 5x3 matrix, in lexicographic pair or triple order.
pub fn pluecker<F: Field>(rep: &Mat<F>) -> Result<Vec<F>, AlgError> {
    if rep.rows() != 5 {
        return Err(AlgError::Dimension(format!("pluecker needs 5 rows, got {}", rep.rows())));
    }
    match rep.cols() {
        2 => Ok(PAIRS.iter().map(|&(i, j)| rep.minor(&[i, j], &[0, 1])).collect()),
        3 => Ok(TRIPLES.iter().map(|&(i, j, k)| rep.minor(&[i, j, k], &[0, 1, 2])).collect()),
        c => Err(AlgError::Dimension(format!("pluecker needs 2 or 3 columns, got {c}"))),
    }
}

/// Triple-indexed coordinates to pair-indexed dual coordinates.
pub fn dual_coords<F: Ring>(psi: &[F]) -> Vec<F> {
    let mut y = vec![F::zero(); 10];
    for (t, v) in psi.iter().enumerate() {
        let (p, s) = triple_to_pair(t);
        y[p] = if s > 0 { v.clone() } else { -v.clone() };
    }
    y
}

/// The five quadratic Plücker relations x_ij x_kl - x_ik x_jl + x_il x_jk for i<j<k<l.
pub fn pluecker_relations<F: Field>(x: &[F]) -> Vec<F> {
    let mut out = Vec::with_capacity(5);
    for skip in (0..5).rev() {
        let q: Vec<usize> = (0..5).filter(|&a| a != skip).collect();
        let (i, j, k, l) = (q[0], q[1], q[2], q[3]);
        let g = |a: usize, b: usize| x[pair_index(a, b)].clone();
        out.push(g(i, j) * g(k, l) - g(i, k) * g(j, l) + g(i, l) * g(j, k));
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrassPoint<F> {
    pub space: Grass,
    pub rep: Mat<F>,
    pub pluecker: Vec<F>,
}

impl<F: Field> GrassPoint<F> {
    /// Fails on a rank-deficient representative.
    pub fn new(rep: Mat<F>) -> Result<Self, AlgError> {
        let pl = pluecker(&rep)?;
        if pl.iter().all(|x| x.is_zero()) {
            return Err(AlgError::Invalid("rank-deficient representative".into()));
        }
        let space = if rep.cols() == 2 { Grass::G25 } else { Grass::G35 };
        Ok(GrassPoint { space, rep, pluecker: pl })
    }

    pub fn random<R: Rng + ?Sized>(space: Grass, rng: &mut R) -> Self {
        Self::new(Mat::random_full_rank(5, space.k(), rng)).expect("full rank")
    }

    /// Coordinates in the pair basis: Plücker coordinates on G(2,5), dual coordinates on G(3,5).
    pub fn coords(&self) -> Vec<F> {
        match self.space {
            Grass::G25 => self.pluecker.clone(),
            Grass::G35 => dual_coords(&self.pluecker),
        }
    }

    /// Same point of the Grassmannian: Plücker vectors are proportional.
    pub fn same_point(&self, o: &Self) -> bool {
        self.space == o.space && Mat::from_cols(&[self.pluecker.clone(), o.pluecker.clone()]).rank() == 1
    }
}

#[derive(Clone, Debug)]
pub struct FlagPoint<F> {
    pub inner: GrassPoint<F>,
    pub outer: GrassPoint<F>,
}

impl<F: Field> FlagPoint<F> {
    pub fn new(inner: GrassPoint<F>, outer: GrassPoint<F>) -> Result<Self, AlgError> {
        if inner.space != Grass::G25 || outer.space != Grass::G35 {
            return Err(AlgError::Invalid("flag needs a G(2,5) and a G(3,5) point".into()));
        }
        if outer.rep.hstack(&inner.rep).rank() != 3 {
            return Err(AlgError::Invalid("inner space is not contained in outer space".into()));
        }
        Ok(FlagPoint { inner, outer })
    }

    /// Random flag with outer representative `[A | w]`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let inner = GrassPoint::random(Grass::G25, rng);
        loop {
            let w: Vec<F> = (0..5).map(|_| F::random(rng)).collect();
            let b = inner.rep.hstack(&Mat::from_cols(&[w]));
            if let Ok(outer) = GrassPoint::new(b) {
                return FlagPoint { inner, outer };
            }
        }
    }

    pub fn is_incident(a: &GrassPoint<F>, b: &GrassPoint<F>) -> bool {
        b.rep.hstack(&a.rep).rank() == 3
    }
}

/// A (1,1) section given by a 10x10 matrix, evaluated as `ybar^T S xbar`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionMatrix<F> {
    pub s: Mat<F>,
}

impl<F: Field> SectionMatrix<F> {
    pub fn new(s: Mat<F>) -> Result<Self, AlgError> {
        if s.rows() != 10 || s.cols() != 10 {
            return Err(AlgError::Dimension("section matrix must be 10x10".into()));
        }
        Ok(SectionMatrix { s })
    }

    pub fn eval(&self, xbar: &[F], ybar: &[F]) -> F {
        let sx = self.s.mul_vec(xbar);
        ybar.iter().zip(sx).fold(F::zero(), |acc, (y, v)| acc + y.clone() * v)
    }

    pub fn eval_points(&self, a: &GrassPoint<F>, b: &GrassPoint<F>) -> F {
        self.eval(&a.coords(), &b.coords())
    }
}

/// Integer matrix of the flag equation for x* = e_a^*, y = e_b.
///
/// For ω = Σ ψ_t e_t in Λ³V, contracting with e_a^* and wedging with α and e_b gives
/// a multiple of e_1∧…∧e_5; rows are indexed by the dual pair of t and columns by α.
pub fn flag_equation_basis<F: Field>(a: usize, b: usize) -> Mat<F> {
    let mut m: Mat<F> = Mat::zeros(10, 10);
    for (t, &(i, j, k)) in TRIPLES.iter().enumerate() {
        let trip = [i, j, k];
        let Some(pos) = trip.iter().position(|&x| x == a) else {
            continue;
        };
        let rest: Vec<usize> = trip.iter().copied().filter(|&x| x != a).collect();
        let (row, dsign) = triple_to_pair(t);
        let csign = if pos % 2 == 0 { 1 } else { -1 };
        for (pcol, &(p, q)) in PAIRS.iter().enumerate() {
            let w = perm_sign(&[rest[0], rest[1], p, q, b]);
            if w != 0 {
                let v = m[(row, pcol)].clone() + F::from_i64(dsign * csign * w);
                m[(row, pcol)] = v;
            }
        }
    }
    m
}

/// Flag equation for arbitrary x* and y, bilinear in both.
pub fn flag_equation<F: Field>(xstar: &[F], y: &[F]) -> Mat<F> {
    let mut acc = Mat::zeros(10, 10);
    for a in 0..5 {
        for b in 0..5 {
            let c = xstar[a].clone() * y[b].clone();
            if !c.is_zero() {
                acc = &acc + &flag_equation_basis::<F>(a, b).scale(&c);
            }
        }
    }
    acc
}

/// Span of the 25 flag equations together with the natural pairing Σ x_p y_p.
///
/// The pairing is Σ_a of the (a, a) equations divided by 3, so over ℤ the equations
/// alone span an index-3 sublattice and in characteristic 3 only a 24-dimensional space.
pub fn flag_ideal_space<F: Field>() -> MatrixSubspace<F> {
    let mut mats: Vec<Mat<F>> = (0..5).flat_map(|a| (0..5).map(move |b| flag_equation_basis(a, b))).collect();
    mats.push(Mat::identity(10));
    MatrixSubspace::span(&mats)
}

/// Flag equations of the dual flag variety written in the dual basis.
///
/// Running the same construction with V and V^∨ exchanged produces the same integer
/// matrices, with rows and columns swapping roles; transposing lets the entrywise
/// pairing trace(A^T B) realise the natural duality.
pub fn dual_flag_ideal_space<F: Field>() -> MatrixSubspace<F> {
    let mut mats: Vec<Mat<F>> =
        (0..5).flat_map(|a| (0..5).map(move |b| flag_equation_basis::<F>(a, b).transpose())).collect();
    mats.push(Mat::identity(10));
    MatrixSubspace::span(&mats)
}

/// The perpendicular of the dual flag ideal under trace(A^T B).
pub fn hf_space<F: Field>() -> MatrixSubspace<F> {
    dual_flag_ideal_space().perp()
}

/// An isomorphism V → V^∨ with its cached exterior square.
#[derive(Clone, Debug)]
pub struct DualityMap<F> {
    pub t: Mat<F>,
    pub m: Mat<F>,
    m_inv: Mat<F>,
}

impl<F: Field> DualityMap<F> {
    pub fn new(t: Mat<F>) -> Result<Self, AlgError> {
        let m = exterior_square(&t)?;
        if t.det()?.is_zero() {
            return Err(AlgError::Singular);
        }
        let m_inv = m.inverse()?;
        Ok(DualityMap { t, m, m_inv })
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(Mat::random_full_rank(5, 5, rng)).expect("invertible")
    }
}

/// M^{-1} S^T M.
pub fn iota_action<F: Field>(s: &Mat<F>, f: &DualityMap<F>) -> Mat<F> {
    &(&f.m_inv * &s.transpose()) * &f.m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{F11, F17, F7, Q};
    use num_traits::Zero;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn pluecker_of_coordinate_plane() {
        let a = Mat::<F7>::from_i64_rows(&[&[1, 0], &[0, 1], &[0, 0], &[0, 0], &[0, 0]]);
        let pl = pluecker(&a).unwrap();
        assert_eq!(pl[0], F7::from_i64(1));
        assert!(pl[1..].iter().all(|x| x.is_zero()));
        let deg = Mat::<F7>::from_i64_rows(&[&[1, 1], &[0, 0], &[0, 0], &[0, 0], &[0, 0]]);
        assert!(pluecker(&deg).unwrap().iter().all(|x| x.is_zero()));
        assert!(GrassPoint::new(deg).is_err());
    }

    #[test]
    fn ideal_dimensions_hold_in_characteristic_3() {
        use crate::F3;
        let eqs: Vec<Mat<F3>> = (0..5).flat_map(|a| (0..5).map(move |b| flag_equation_basis(a, b))).collect();
        assert_eq!(MatrixSubspace::span(&eqs).dim(), 24);
        assert_eq!(flag_ideal_space::<F3>().dim(), 25);
        assert_eq!(hf_space::<F3>().dim(), 75);
        let mut r = rng(3);
        for _ in 0..20 {
            let f = FlagPoint::<F3>::random(&mut r);
            let (x, y) = (f.inner.coords(), f.outer.coords());
            assert!(x.iter().zip(&y).fold(F3::zero(), |acc, (a, b)| acc + *a * *b).is_zero());
        }
    }

    #[test]
    fn random_points_satisfy_pluecker_relations() {
        let mut r = rng(1);
        for _ in 0..50 {
            let p = GrassPoint::<F7>::random(Grass::G25, &mut r);
            assert!(pluecker_relations(&p.coords()).iter().all(|x| x.is_zero()));
            let q = GrassPoint::<F7>::random(Grass::G35, &mut r);
            assert!(pluecker_relations(&q.coords()).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn dual_coords_are_pluecker_of_annihilator() {
        // independent oracle: the annihilator of B is spanned by the kernel of B^T,
        // and its Plücker vector must be proportional to the dual coordinates
        let mut r = rng(2);
        for _ in 0..30 {
            let b = GrassPoint::<Q>::random(Grass::G35, &mut r);
            let ker = b.rep.transpose().kernel();
            assert_eq!(ker.len(), 2);
            let ann = pluecker(&Mat::from_cols(&ker)).unwrap();
            let y = b.coords();
            assert_eq!(Mat::from_cols(&[ann, y]).rank(), 1);
        }
    }

    #[test]
    fn flag_equations_vanish_on_flags_and_span_25() {
        let mut r = rng(3);
        let eqs: Vec<Mat<F11>> = (0..5).flat_map(|a| (0..5).map(move |b| flag_equation_basis(a, b))).collect();
        for _ in 0..100 {
            let f = FlagPoint::<F11>::random(&mut r);
            for e in &eqs {
                let s = SectionMatrix::new(e.clone()).unwrap();
                assert!(s.eval_points(&f.inner, &f.outer).is_zero());
            }
        }
        assert_eq!(flag_ideal_space::<Q>().dim(), 25);
    }

    #[test]
    fn flag_equation_separates_non_incident_pairs() {
        let mut r = rng(4);
        let mut found = 0;
        for _ in 0..50 {
            let a = GrassPoint::<F11>::random(Grass::G25, &mut r);
            let b = GrassPoint::<F11>::random(Grass::G35, &mut r);
            if FlagPoint::is_incident(&a, &b) {
                continue;
            }
            let nonzero = (0..5).any(|i| {
                (0..5).any(|j| !SectionMatrix::new(flag_equation_basis(i, j)).unwrap().eval_points(&a, &b).is_zero())
            });
            assert!(nonzero);
            found += 1;
        }
        assert!(found > 0);
    }

    #[test]
    fn hf_space_is_a_complement() {
        let i = flag_ideal_space::<F17>();
        let h = hf_space::<F17>();
        assert_eq!(h.dim(), 75);
        assert_eq!(i.intersection_dim(&h), 0);
        assert_eq!(i.sum(&h).dim(), 100);
    }

    #[test]
    fn flag_ideal_and_complement_are_iota_invariant() {
        let mut r = rng(6);
        let i = flag_ideal_space::<F17>();
        let h = hf_space::<F17>();
        for _ in 0..10 {
            let f = DualityMap::<F17>::random(&mut r);
            assert!(i.basis().iter().all(|m| i.contains(&iota_action(m, &f))));
            assert!(h.basis().iter().all(|m| h.contains(&iota_action(m, &f))));
        }
    }

    #[test]
    fn iota_with_scalar_map_is_transpose() {
        let mut r = rng(5);
        let s = Mat::<F17>::random(10, 10, &mut r);
        let id = DualityMap::new(Mat::identity(5)).unwrap();
        assert_eq!(iota_action(&s, &id), s.transpose());
        let lam = DualityMap::new(Mat::identity(5).scale(&F17::from_i64(3))).unwrap();
        assert_eq!(iota_action(&s, &lam), s.transpose());
        assert!(DualityMap::new(Mat::<F17>::zeros(5, 5)).is_err());
    }

    #[test]
    fn section_is_bilinear_in_pluecker_vectors() {
        let mut r = rng(6);
        let s = SectionMatrix::new(Mat::<F7>::random(10, 10, &mut r)).unwrap();
        let x1: Vec<F7> = (0..10).map(|_| F7::random(&mut r)).collect();
        let x2: Vec<F7> = (0..10).map(|_| F7::random(&mut r)).collect();
        let y: Vec<F7> = (0..10).map(|_| F7::random(&mut r)).collect();
        let c = F7::from_i64(3);
        let comb: Vec<F7> = x1.iter().zip(&x2).map(|(a, b)| *a + c * *b).collect();
        assert_eq!(s.eval(&comb, &y), s.eval(&x1, &y) + c * s.eval(&x2, &y));
    }

    proptest::proptest! {
        #[test]
        fn pluecker_relations_hold_on_both_sides(seed in proptest::prelude::any::<u64>()) {
            let mut r = rng(seed);
            let a = Mat::<F17>::random(5, 2, &mut r);
            let b = Mat::<F17>::random(5, 3, &mut r);
            proptest::prop_assert!(pluecker_relations(&pluecker(&a).unwrap()).iter().all(|x| x.is_zero()));
            proptest::prop_assert!(pluecker_relations(&dual_coords(&pluecker(&b).unwrap())).iter().all(|x| x.is_zero()));
        }

        #[test]
        fn pluecker_vector_scales_by_det(seed in proptest::prelude::any::<u64>()) {
            let mut r = rng(seed);
            let a = Mat::<F17>::random(5, 2, &mut r);
            let g = Mat::<F17>::random_full_rank(2, 2, &mut r);
            let d = g.det().unwrap();
            let lhs = pluecker(&(&a * &g)).unwrap();
            let rhs: Vec<F17> = pluecker(&a).unwrap().into_iter().map(|x| x * d).collect();
            proptest::prop_assert_eq!(lhs, rhs);
        }
    }
}
