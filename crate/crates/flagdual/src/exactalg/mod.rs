//! Exact arithmetic: fields, dense matrices, sparse polynomials and Gröbner bases.

pub mod field;
pub mod groebner;
pub mod io;
pub mod mat;
pub mod poly;
pub mod upoly;

use thiserror::Error;

pub use field::{FiniteField, Field, Fp, Gf4, Ring};
pub use groebner::{groebner_basis, is_groebner, s_polynomial, saturate, Budget, GbStats, Ideal};
pub use io::{format_matrix, parse_matrix};
pub use mat::{exterior_square, Mat};
pub use poly::{MonoOrder, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular matrix")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("cannot parse entry {0:?}")]
    Parse(String),
    #[error("resource budget exceeded after {reductions} reductions with {basis} basis elements")]
    BudgetExceeded { reductions: usize, basis: usize },
    #[error("field of order {q} exceeds the enumeration budget (largest allowed order {max})")]
    FieldTooLarge { q: u64, max: u64 },
    #[error("{0}")]
    Invalid(String),
}

/// The ten 2-subsets of {0,..,4} in lexicographic order.
pub const PAIRS: [(usize, usize); 10] =
    [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

/// The ten 3-subsets of {0,..,4} in lexicographic order.
pub const TRIPLES: [(usize, usize, usize); 10] = [
    (0, 1, 2),
    (0, 1, 3),
    (0, 1, 4),
    (0, 2, 3),
    (0, 2, 4),
    (0, 3, 4),
    (1, 2, 3),
    (1, 2, 4),
    (1, 3, 4),
    (2, 3, 4),
];

pub fn pairs() -> &'static [(usize, usize); 10] {
    &PAIRS
}

pub fn pair_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    PAIRS.iter().position(|&p| p == (a, b)).expect("valid pair")
}

pub fn triple_index(i: usize, j: usize, k: usize) -> usize {
    let mut t = [i, j, k];
    t.sort_unstable();
    TRIPLES.iter().position(|&p| p == (t[0], t[1], t[2])).expect("valid triple")
}

/// Sign of a sequence of distinct integers viewed as a permutation of its sorted self;
/// 0 if an entry repeats.
pub fn perm_sign(seq: &[usize]) -> i64 {
    let mut s = 1;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] == seq[b] {
                return 0;
            }
            if seq[a] > seq[b] {
                s = -s;
            }
        }
    }
    s
}

/// The pair complementary to triple `t`, and the sign of the permutation (t, pair).
/// This pins the identification of the third exterior power with the dual second one.
pub fn triple_to_pair(t: usize) -> (usize, i64) {
    let (i, j, k) = TRIPLES[t];
    let rest: Vec<usize> = (0..5).filter(|x| *x != i && *x != j && *x != k).collect();
    let p = pair_index(rest[0], rest[1]);
    (p, perm_sign(&[i, j, k, rest[0], rest[1]]))
}

/// Inverse of [`triple_to_pair`].
pub fn pair_to_triple(p: usize) -> (usize, i64) {
    let t = (0..10).find(|&t| triple_to_pair(t).0 == p).unwrap();
    (t, triple_to_pair(t).1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_map_is_a_signed_bijection() {
        let mut seen = [false; 10];
        for t in 0..10 {
            let (p, s) = triple_to_pair(t);
            assert!(s == 1 || s == -1);
            assert!(!seen[p]);
            seen[p] = true;
            assert_eq!(pair_to_triple(p), (t, s));
        }
        // (1,2,3 | 4,5) is the identity permutation
        assert_eq!(triple_to_pair(0), (9, 1));
        // (1,2,4 | 3,5) is one transposition
        assert_eq!(triple_to_pair(1), (8, -1));
    }

    #[test]
    fn index_lookups() {
        assert_eq!(pair_index(4, 3), 9);
        assert_eq!(triple_index(4, 0, 2), 4);
        assert_eq!(perm_sign(&[1, 0, 2]), -1);
        assert_eq!(perm_sign(&[1, 1, 2]), 0);
    }
}
