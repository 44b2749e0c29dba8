//! Exact tools for dual pairs of Calabi-Yau threefolds cut out of the flag variety
//! F(2,3,5) by a single (1,1) section, written as a 10x10 matrix.

pub mod exactalg;
pub mod bwb;
pub mod duality;
pub mod glsm;
pub mod grassflag;
pub mod motivic;
pub mod mutation;
pub mod pipeline;
pub mod properties;

pub use exactalg::{Field, FiniteField, Fp, Gf4, Mat, Poly};

/// Prime field of the default Gröbner computations.
pub type F17 = Fp<17>;
pub type F13 = Fp<13>;
pub type F11 = Fp<11>;
pub type F7 = Fp<7>;
pub type F5 = Fp<5>;
pub type F3 = Fp<3>;
pub type F2 = Fp<2>;
/// Exact rationals.
pub type Q = num_rational::BigRational;
