//! Borel–Weil–Bott cohomology on G(2,5), G(3,5) and F(2,3,5), Ext groups on F and
//! vanishing certificates on the hyperplane section M.

pub mod bundle;
pub mod ext;
pub mod lemmas;
pub mod lr;
pub mod weight;

pub use bundle::{named, tensor_decompose, BundleExpr};
pub use ext::{ext_f, ext_grass, ext_on_m, ext_on_m_vanishing_certificate, Bundle, Kind, VanishingCertificate};
pub use weight::{bott, line_weight, weyl_dim, BlockedWeight, CohomologyTable, Space};
