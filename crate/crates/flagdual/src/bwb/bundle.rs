use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::lr::lr_product;
use super::weight::{bott, BlockedWeight, CohomologyTable, Space};

/// A completely reducible homogeneous bundle: a formal sum of irreducibles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleExpr {
    pub space: Space,
    pub terms: BTreeMap<[i64; 5], u64>,
}

impl BundleExpr {
    pub fn zero(space: Space) -> Self {
        BundleExpr { space, terms: BTreeMap::new() }
    }

    pub fn irreducible(w: BlockedWeight) -> Self {
        assert!(w.is_dominant(), "{w} is not dominant");
        BundleExpr { space: w.space, terms: BTreeMap::from([(w.w, 1)]) }
    }

    pub fn from_weight(space: Space, w: [i64; 5]) -> Self {
        Self::irreducible(BlockedWeight { space, w })
    }

    pub fn trivial(space: Space) -> Self {
        Self::irreducible(BlockedWeight::trivial(space))
    }

    pub fn weights(&self) -> impl Iterator<Item = (BlockedWeight, u64)> + '_ {
        self.terms.iter().map(|(w, &m)| (BlockedWeight { space: self.space, w: *w }, m))
    }

    pub fn add(&mut self, o: &BundleExpr) {
        assert_eq!(self.space, o.space);
        for (w, m) in &o.terms {
            *self.terms.entry(*w).or_insert(0) += m;
        }
    }

    pub fn dual(&self) -> Self {
        let mut out = Self::zero(self.space);
        for (w, m) in self.weights() {
            *out.terms.entry(w.dual().w).or_insert(0) += m;
        }
        out
    }

    /// Tensor with a line bundle given by its weight.
    pub fn shift(&self, l: [i64; 5]) -> Self {
        let mut out = Self::zero(self.space);
        for (w, m) in self.weights() {
            *out.terms.entry(w.shift(l).w).or_insert(0) += m;
        }
        out
    }

    pub fn rank(&self) -> u128 {
        self.weights().map(|(w, m)| w.rank() * m as u128).sum()
    }

    pub fn cohomology(&self) -> CohomologyTable {
        let mut t = CohomologyTable::zero();
        for (w, m) in self.weights() {
            let h = bott(&w).expect("expressions hold dominant weights");
            for (&d, &n) in &h.degrees {
                t.add_in(d, n * m as u128);
            }
        }
        t
    }
}

/// Tensor product, expanded blockwise by Littlewood–Richardson.
pub fn tensor_decompose(a: &BundleExpr, b: &BundleExpr) -> BundleExpr {
    assert_eq!(a.space, b.space, "tensor factors live on different spaces");
    let ranges = a.space.block_ranges();
    let mut out = BundleExpr::zero(a.space);
    for (wa, ma) in &a.terms {
        for (wb, mb) in &b.terms {
            // cartesian product of the per-block expansions
            let mut partial: Vec<(Vec<i64>, u64)> = vec![(Vec::new(), ma * mb)];
            for r in &ranges {
                let blk = lr_product(&wa[r.clone()], &wb[r.clone()]);
                let mut next = Vec::with_capacity(partial.len() * blk.len());
                for (pre, m) in &partial {
                    for (nu, c) in &blk {
                        let mut v = pre.clone();
                        v.extend_from_slice(nu);
                        next.push((v, m * c));
                    }
                }
                partial = next;
            }
            for (v, m) in partial {
                *out.terms.entry(v.try_into().expect("five entries")).or_insert(0) += m;
            }
        }
    }
    out
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .weights()
            .map(|(w, m)| if m == 1 { w.to_string() } else { format!("{m}·{w}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Frequently used irreducible bundles on the two Grassmannians.
pub mod named {
    use super::*;

    pub fn u2() -> BundleExpr {
        BundleExpr::from_weight(Space::G25, [0, -1, 0, 0, 0])
    }
    pub fn u2_dual() -> BundleExpr {
        BundleExpr::from_weight(Space::G25, [1, 0, 0, 0, 0])
    }
    pub fn q2() -> BundleExpr {
        BundleExpr::from_weight(Space::G25, [0, 0, 0, 0, -1])
    }
    pub fn q2_dual() -> BundleExpr {
        BundleExpr::from_weight(Space::G25, [0, 0, 1, 0, 0])
    }
    pub fn u3() -> BundleExpr {
        BundleExpr::from_weight(Space::G35, [0, 0, -1, 0, 0])
    }
    pub fn u3_dual() -> BundleExpr {
        BundleExpr::from_weight(Space::G35, [1, 0, 0, 0, 0])
    }
    pub fn q3() -> BundleExpr {
        BundleExpr::from_weight(Space::G35, [0, 0, 0, 0, -1])
    }
    pub fn q3_dual() -> BundleExpr {
        BundleExpr::from_weight(Space::G35, [0, 0, 0, 1, 0])
    }
    /// O(t) on a Grassmannian.
    pub fn line(space: Space, t: i64) -> BundleExpr {
        BundleExpr::from_weight(space, crate::bwb::weight::grass_line_weight(space, t))
    }
}
