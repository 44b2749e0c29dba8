//! From a section matrix to the pair (X, Y): the quadrics cutting out X in G(2,5), the
//! quintics ŝ on 5x3 matrices cutting out Y in G(3,5), the P¹/P² fiber dichotomy of M,
//! the self-duality test and the non-birationality certificate.

mod nonbirational;
mod pushforward;

use rand::Rng;

pub use nonbirational::{
    charpoly_squarefree, commutant_space, commutation_ideal, generic_matrix, generic_symmetric_matrix, is_fixed_by,
    nonbirational_certificate, selfdual_test, CertificateOptions, NonbirationalReport, Route, RouteOutcome,
};
pub use pushforward::{
    b_var, fiber_class, normalization_constant, pushforward_to_g25, pushforward_to_g35, quadric_vector,
    quintic_contracted_vector, quintic_vector, FiberClass, QuadricSystem, QuinticTriple, QUADRIC_NORMALIZATION,
};

use crate::exactalg::{Field, Mat};
use crate::grassflag::{hf_space, SectionMatrix};

/// Near-diagonal witness: diagonal (1,0,0,0,0,-1,1,-1,-1,1) plus a single 1 in row 5, column 2.
pub fn witness_section<F: Field>() -> Mat<F> {
    let d = [1, 0, 0, 0, 0, -1, 1, -1, -1, 1];
    let mut s = Mat::diag(&d.map(F::from_i64));
    s[(4, 1)] = F::one();
    s
}

/// Uniformly random element of the invariant complement.
pub fn random_hf_section<F: Field, R: Rng + ?Sized>(rng: &mut R) -> SectionMatrix<F> {
    let h = hf_space::<F>();
    let coeffs: Vec<F> = (0..h.dim()).map(|_| F::random(rng)).collect();
    SectionMatrix { s: h.combine(&coeffs) }
}
