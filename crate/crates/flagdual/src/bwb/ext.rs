use std::fmt;

use serde::{Deserialize, Serialize};

use super::bundle::{tensor_decompose, BundleExpr};
use super::weight::{grass_line_weight, line_weight, sort_with_length, BlockedWeight, CohomologyTable, Space};
use crate::exactalg::AlgError;

/// Homogeneous bundles on F (and their restrictions to M) used by the mutation calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    O,
    U2,
    U2Dual,
    Q2,
    Q2Dual,
    U3,
    U3Dual,
    Q3,
    Q3Dual,
}

impl Kind {
    pub const ALL: [Kind; 9] =
        [Kind::O, Kind::U2, Kind::U2Dual, Kind::Q2, Kind::Q2Dual, Kind::U3, Kind::U3Dual, Kind::Q3, Kind::Q3Dual];

    pub fn from_g25(self) -> bool {
        matches!(self, Kind::O | Kind::U2 | Kind::U2Dual | Kind::Q2 | Kind::Q2Dual)
    }

    pub fn from_g35(self) -> bool {
        matches!(self, Kind::O | Kind::U3 | Kind::U3Dual | Kind::Q3 | Kind::Q3Dual)
    }

    /// Irreducible as a homogeneous bundle on F. Q₂ and U₃ (and duals) are extensions there.
    pub fn irreducible_on_f(self) -> bool {
        matches!(self, Kind::O | Kind::U2 | Kind::U2Dual | Kind::Q3 | Kind::Q3Dual)
    }

    /// Weight on its home Grassmannian (G(2,5) for O).
    pub fn grass_weight(self) -> (Space, [i64; 5]) {
        match self {
            Kind::O => (Space::G25, [0; 5]),
            Kind::U2 => (Space::G25, [0, -1, 0, 0, 0]),
            Kind::U2Dual => (Space::G25, [1, 0, 0, 0, 0]),
            Kind::Q2 => (Space::G25, [0, 0, 0, 0, -1]),
            Kind::Q2Dual => (Space::G25, [0, 0, 1, 0, 0]),
            Kind::U3 => (Space::G35, [0, 0, -1, 0, 0]),
            Kind::U3Dual => (Space::G35, [1, 0, 0, 0, 0]),
            Kind::Q3 => (Space::G35, [0, 0, 0, 0, -1]),
            Kind::Q3Dual => (Space::G35, [0, 0, 0, 1, 0]),
        }
    }

    /// Weights on F of the graded pieces (a single piece for irreducible kinds).
    /// The filtrations are 0 → O(1,-1) → Q₂ → Q₃ → 0 and 0 → U₂ → U₃ → O(1,-1) → 0.
    pub fn f_pieces(self) -> Vec<[i64; 5]> {
        match self {
            Kind::O => vec![[0; 5]],
            Kind::U2 => vec![[0, -1, 0, 0, 0]],
            Kind::U2Dual => vec![[1, 0, 0, 0, 0]],
            Kind::Q3 => vec![[0, 0, 0, 0, -1]],
            Kind::Q3Dual => vec![[0, 0, 0, 1, 0]],
            Kind::Q2 => vec![[0, 0, -1, 0, 0], [0, 0, 0, 0, -1]],
            Kind::Q2Dual => vec![[0, 0, 1, 0, 0], [0, 0, 0, 1, 0]],
            Kind::U3 => vec![[0, -1, 0, 0, 0], [0, 0, -1, 0, 0]],
            Kind::U3Dual => vec![[1, 0, 0, 0, 0], [0, 0, 1, 0, 0]],
        }
    }

    pub fn dual(self) -> Kind {
        match self {
            Kind::O => Kind::O,
            Kind::U2 => Kind::U2Dual,
            Kind::U2Dual => Kind::U2,
            Kind::Q2 => Kind::Q2Dual,
            Kind::Q2Dual => Kind::Q2,
            Kind::U3 => Kind::U3Dual,
            Kind::U3Dual => Kind::U3,
            Kind::Q3 => Kind::Q3Dual,
            Kind::Q3Dual => Kind::Q3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::O => "O",
            Kind::U2 => "U2",
            Kind::U2Dual => "U2dual",
            Kind::Q2 => "Q2",
            Kind::Q2Dual => "Q2dual",
            Kind::U3 => "U3",
            Kind::U3Dual => "U3dual",
            Kind::Q3 => "Q3",
            Kind::Q3Dual => "Q3dual",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }
}

/// A twisted bundle E(a,b) on F.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bundle {
    pub kind: Kind,
    pub a: i64,
    pub b: i64,
}

impl Bundle {
    pub fn new(kind: Kind, a: i64, b: i64) -> Self {
        Bundle { kind, a, b }
    }

    pub fn o(a: i64, b: i64) -> Self {
        Bundle::new(Kind::O, a, b)
    }

    pub fn twist(&self, a: i64, b: i64) -> Self {
        Bundle { kind: self.kind, a: self.a + a, b: self.b + b }
    }

    /// Weight on F; only for kinds irreducible there.
    pub fn f_weight(&self) -> Option<BlockedWeight> {
        if !self.kind.irreducible_on_f() {
            return None;
        }
        Some(BlockedWeight { space: Space::F, w: self.kind.f_pieces()[0] }.twist(self.a, self.b))
    }

    /// Parses "Q3(1,2)", "O(0,0)", "U2dual(1,3)".
    pub fn parse(s: &str) -> Result<Self, AlgError> {
        let err = || AlgError::Parse(s.to_string());
        let s = s.trim();
        let open = s.find('(').ok_or_else(err)?;
        let kind = Kind::parse(&s[..open]).ok_or_else(err)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(err)?;
        let mut it = inner.split(',').map(|x| x.trim().parse::<i64>());
        let a = it.next().ok_or_else(err)?.map_err(|_| err())?;
        let b = it.next().ok_or_else(err)?.map_err(|_| err())?;
        if it.next().is_some() {
            return Err(err());
        }
        Ok(Bundle::new(kind, a, b))
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.kind.name(), self.a, self.b)
    }
}

/// Relative Bott for p: F → G(2,5); returns the degree and the G(2,5) weight.
pub fn push_to_g25(w: [i64; 5]) -> Option<(usize, [i64; 5])> {
    let mut v = [w[2] + 2, w[3] + 1, w[4]];
    let len = sort_with_length(&mut v)?;
    Some((len, [w[0], w[1], v[0] - 2, v[1] - 1, v[2]]))
}

/// Relative Bott for q: F → G(3,5).
pub fn push_to_g35(w: [i64; 5]) -> Option<(usize, [i64; 5])> {
    let mut v = [w[0] + 2, w[1] + 1, w[2]];
    let len = sort_with_length(&mut v)?;
    Some((len, [v[0] - 2, v[1] - 1, v[2], w[3], w[4]]))
}

fn push(space: Space, w: [i64; 5]) -> Option<(usize, [i64; 5])> {
    match space {
        Space::G25 => push_to_g25(w),
        Space::G35 => push_to_g35(w),
        Space::F => unreachable!(),
    }
}

/// H^•(F, E) for E irreducible on F, computed directly.
pub fn cohomology_f(w: &BlockedWeight) -> CohomologyTable {
    BundleExpr::irreducible(*w).cohomology()
}

/// H^•(F, p^*C ⊗ E) for C on `space` and E irreducible on F, by the projection formula
/// and the Leray spectral sequence (the pushforward of E sits in a single degree).
fn pullback_times(c: &BundleExpr, e: [i64; 5]) -> CohomologyTable {
    match push(c.space, e) {
        None => CohomologyTable::zero(),
        Some((deg, pw)) => {
            let t = tensor_decompose(c, &BundleExpr::from_weight(c.space, pw));
            t.cohomology().shifted(deg)
        }
    }
}

fn grass_expr(kind: Kind, space: Space) -> BundleExpr {
    let (home, w) = kind.grass_weight();
    if kind == Kind::O {
        return BundleExpr::trivial(space);
    }
    assert_eq!(home, space);
    BundleExpr::from_weight(space, w)
}

/// Ext^•_F(e1, e2).
///
/// Irreducible pairs are expanded by Littlewood–Richardson on F. Pairs pulled back from
/// one Grassmannian are pushed down there. A non-split bundle paired with an irreducible
/// one is handled through adjunction along the projection it comes from. The remaining
/// case (a non-split bundle from each side) falls back to graded pieces and the table is
/// marked inexact: only its vanishing is meaningful.
pub fn ext_f(e1: &Bundle, e2: &Bundle) -> CohomologyTable {
    let (k1, k2) = (e1.kind, e2.kind);
    if k1.irreducible_on_f() && k2.irreducible_on_f() {
        let a = BundleExpr::irreducible(e1.f_weight().unwrap()).dual();
        let b = BundleExpr::irreducible(e2.f_weight().unwrap());
        return tensor_decompose(&a, &b).cohomology();
    }
    let (da, db) = (e2.a - e1.a, e2.b - e1.b);
    for space in [Space::G25, Space::G35] {
        let home = |k: Kind| if space == Space::G25 { k.from_g25() } else { k.from_g35() };
        if home(k1) && home(k2) {
            let c = tensor_decompose(&grass_expr(k1, space).dual(), &grass_expr(k2, space));
            return pullback_times(&c, line_weight(da, db));
        }
    }
    for space in [Space::G25, Space::G35] {
        let home = |k: Kind| if space == Space::G25 { k.from_g25() } else { k.from_g35() };
        if !k1.irreducible_on_f() && home(k1) && k2.irreducible_on_f() {
            // Hom(p^*A ⊗ L1, E) = H(p^*A^∨ ⊗ E ⊗ L1^{-1})
            let e = BlockedWeight { space: Space::F, w: k2.f_pieces()[0] }.twist(da, db);
            return pullback_times(&grass_expr(k1, space).dual(), e.w);
        }
        if !k2.irreducible_on_f() && home(k2) && k1.irreducible_on_f() {
            let e = BlockedWeight { space: Space::F, w: k1.f_pieces()[0] }.dual().twist(da, db);
            return pullback_times(&grass_expr(k2, space), e.w);
        }
    }
    let mut t = CohomologyTable::zero();
    for p1 in k1.f_pieces() {
        for p2 in k2.f_pieces() {
            let a = BundleExpr::from_weight(Space::F, p1).dual();
            let b = BundleExpr::from_weight(Space::F, p2).shift(line_weight(da, db));
            t.merge(&tensor_decompose(&a, &b).cohomology());
        }
    }
    t.exact = false;
    t
}

/// Ext^• on a Grassmannian between E(s) and E'(t).
pub fn ext_grass(space: Space, e1: &BundleExpr, s: i64, e2: &BundleExpr, t: i64) -> CohomologyTable {
    let a = e1.shift(grass_line_weight(space, s)).dual();
    let b = e2.shift(grass_line_weight(space, t));
    tensor_decompose(&a, &b).cohomology()
}

/// Outcome of the Koszul test on the hyperplane section M ⊂ F.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingCertificate {
    pub source: Bundle,
    pub target: Bundle,
    pub certified_zero: bool,
    /// Ext_F(a, b).
    pub ext_f: CohomologyTable,
    /// Ext_F(a, b(-1,-1)).
    pub ext_f_twisted: CohomologyTable,
}

/// Certifies Ext_M(a, b) = 0 from 0 → O_F(-1,-1) → O_F → O_M → 0. Never claims nonvanishing.
pub fn ext_on_m_vanishing_certificate(a: &Bundle, b: &Bundle) -> VanishingCertificate {
    let plain = ext_f(a, b);
    let twisted = ext_f(a, &b.twist(-1, -1));
    VanishingCertificate {
        source: *a,
        target: *b,
        certified_zero: plain.is_zero() && twisted.is_zero(),
        ext_f: plain,
        ext_f_twisted: twisted,
    }
}

/// Ext_M(a, b) when one of the two Koszul terms vanishes and the other is exact.
pub fn ext_on_m(a: &Bundle, b: &Bundle) -> Option<CohomologyTable> {
    let t0 = ext_f(a, b);
    let t1 = ext_f(a, &b.twist(-1, -1));
    if t1.is_zero() && t0.exact {
        return Some(t0);
    }
    if t0.is_zero() && t1.exact {
        // H^i(M, -) = H^{i+1}(F, -(-1,-1))
        let degrees = t1.degrees.iter().filter(|(&d, _)| d > 0).map(|(&d, &n)| (d - 1, n)).collect();
        if t1.get(0) != 0 {
            return None;
        }
        return Some(CohomologyTable { degrees, exact: true });
    }
    None
}
