use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ExceptionalCollection, Functor, Move, Symbol};
use crate::bwb::{ext_on_m, ext_on_m_vanishing_certificate, Bundle, CohomologyTable, Kind, VanishingCertificate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("position {0} is out of range")]
    OutOfRange(usize),
    #[error("no rule matches the pair ⟨{0}, {1}⟩ for {2}")]
    PatternMismatch(String, String, String),
    #[error("cannot certify {what} for ⟨{left}, {right}⟩")]
    Uncertified { what: String, left: String, right: String },
    #[error("blocks are opaque and cannot be swapped")]
    OpaqueBlock,
}

/// Evidence attached to every move of a log.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Certificate {
    /// A mutation rule; `pair_ext` is Ext_M(first, second) of the input pair and must equal
    /// `expected`; `orthogonality` certifies Ext_M(second, first) = 0.
    Rule { rule: String, pair_ext: CohomologyTable, expected: CohomologyTable, orthogonality: VanishingCertificate },
    Swap { forward: VanishingCertificate, backward: VanishingCertificate },
    /// Both names carry weights on F that differ by a power of det V.
    Normalize { from: Bundle, to: Bundle, det_power: i64 },
    Rotate { count: i64, twist: (i64, i64) },
    Twist { a: i64, b: i64 },
    /// A block passes a bundle; only its word changes.
    Block { functor: Functor },
}

/// A rule instance: name, rewritten pair, expected Ext_M(first, second).
struct RuleHit {
    rule: &'static str,
    out: (Bundle, Bundle),
    expected: CohomologyTable,
}

fn same(x: &Bundle, y: &Bundle) -> bool {
    (x.a, x.b) == (y.a, y.b)
}

/// ⟨x, y⟩ ↦ ⟨L_x y, x⟩.
fn left_rule(x: Bundle, y: Bundle) -> Option<RuleHit> {
    use Kind::*;
    if x.kind != O {
        return None;
    }
    let (a, b) = (y.a, y.b);
    let hit = |rule, k: Kind, expected| Some(RuleHit { rule, out: (Bundle::new(k, a, b), x), expected });
    match y.kind {
        Q2 if same(&x, &y) => hit("UQ: L_O Q2 = U2", U2, CohomologyTable::single(0, 5)),
        Q3 if same(&x, &y) => hit("UQ: L_O Q3 = U3", U3, CohomologyTable::single(0, 5)),
        U2Dual if same(&x, &y) => hit("dual UQ inverse: L_O U2dual = Q2dual", Q2Dual, CohomologyTable::single(0, 5)),
        U3Dual if same(&x, &y) => hit("dual UQ inverse: L_O U3dual = Q3dual", Q3Dual, CohomologyTable::single(0, 5)),
        Q3Dual if (x.a, x.b) == (a - 1, b + 1) => {
            hit("dual tilde Q: L_O(a-1,b+1) Q3dual(a,b) = Q2dual(a,b)", Q2Dual, CohomologyTable::single(1, 1))
        }
        U3Dual if (x.a, x.b) == (a - 1, b + 1) => {
            hit("dual tilde U: L_O(a-1,b+1) U3dual(a,b) = U2dual(a,b)", U2Dual, CohomologyTable::single(0, 1))
        }
        Q2 if (x.a, x.b) == (a + 1, b - 1) => {
            hit("tilde Q inverse: L_O(a+1,b-1) Q2(a,b) = Q3(a,b)", Q3, CohomologyTable::single(0, 1))
        }
        U2 if (x.a, x.b) == (a + 1, b - 1) => {
            hit("tilde U inverse: L_O(a+1,b-1) U2(a,b) = U3(a,b)", U3, CohomologyTable::single(1, 1))
        }
        _ => None,
    }
}

/// ⟨x, y⟩ ↦ ⟨y, R_y x⟩.
fn right_rule(x: Bundle, y: Bundle) -> Option<RuleHit> {
    use Kind::*;
    if y.kind != O {
        return None;
    }
    let (a, b) = (x.a, x.b);
    let hit = |rule, k: Kind, expected| Some(RuleHit { rule, out: (y, Bundle::new(k, a, b)), expected });
    match x.kind {
        U2 if same(&x, &y) => hit("UQ inverse: R_O U2 = Q2", Q2, CohomologyTable::single(0, 5)),
        U3 if same(&x, &y) => hit("UQ inverse: R_O U3 = Q3", Q3, CohomologyTable::single(0, 5)),
        Q2Dual if same(&x, &y) => hit("dual UQ: R_O Q2dual = U2dual", U2Dual, CohomologyTable::single(0, 5)),
        Q3Dual if same(&x, &y) => hit("dual UQ: R_O Q3dual = U3dual", U3Dual, CohomologyTable::single(0, 5)),
        Q3 if (y.a, y.b) == (a + 1, b - 1) => {
            hit("tilde Q: R_O(a+1,b-1) Q3(a,b) = Q2(a,b)", Q2, CohomologyTable::single(1, 1))
        }
        U3 if (y.a, y.b) == (a + 1, b - 1) => {
            hit("tilde U: R_O(a+1,b-1) U3(a,b) = U2(a,b)", U2, CohomologyTable::single(0, 1))
        }
        Q2Dual if (y.a, y.b) == (a - 1, b + 1) => {
            hit("dual tilde Q inverse: R_O(a-1,b+1) Q2dual(a,b) = Q3dual(a,b)", Q3Dual, CohomologyTable::single(0, 1))
        }
        U2Dual if (y.a, y.b) == (a - 1, b + 1) => {
            hit("dual tilde U inverse: R_O(a-1,b+1) U2dual(a,b) = U3dual(a,b)", U3Dual, CohomologyTable::single(1, 1))
        }
        _ => None,
    }
}

/// The isomorphisms Q₃(a,b) ≅ Q₃^∨(a,b+1) and U₂^∨(a,b) ≅ U₂(a+1,b), in either direction.
pub fn normalize(e: Bundle) -> Option<Bundle> {
    match e.kind {
        Kind::Q3 => Some(Bundle::new(Kind::Q3Dual, e.a, e.b + 1)),
        Kind::Q3Dual => Some(Bundle::new(Kind::Q3, e.a, e.b - 1)),
        Kind::U2Dual => Some(Bundle::new(Kind::U2, e.a + 1, e.b)),
        Kind::U2 => Some(Bundle::new(Kind::U2Dual, e.a - 1, e.b)),
        _ => None,
    }
}

fn certify_rule(x: Bundle, y: Bundle, hit: RuleHit) -> Result<Certificate, MutationError> {
    let fail = |what: &str| MutationError::Uncertified { what: what.to_string(), left: x.to_string(), right: y.to_string() };
    let orthogonality = ext_on_m_vanishing_certificate(&y, &x);
    if !orthogonality.certified_zero {
        return Err(fail("exceptional pair"));
    }
    let pair_ext = ext_on_m(&x, &y).ok_or_else(|| fail("Ext on M"))?;
    if pair_ext != hit.expected {
        return Err(fail(&format!("{} (Ext {} instead of {})", hit.rule, pair_ext, hit.expected)));
    }
    Ok(Certificate::Rule { rule: hit.rule.to_string(), pair_ext, expected: hit.expected, orthogonality })
}

fn pair(c: &ExceptionalCollection, i: usize) -> Result<(Symbol, Symbol), MutationError> {
    if i + 1 >= c.len() {
        return Err(MutationError::OutOfRange(i));
    }
    Ok((c.symbols[i].clone(), c.symbols[i + 1].clone()))
}

fn push_word(s: &Symbol, f: Functor) -> Symbol {
    match s {
        Symbol::Block { name, word } => {
            let mut w = word.clone();
            w.push(f);
            Symbol::Block { name: *name, word: w }
        }
        other => other.clone(),
    }
}

/// Applies one move, returning the new collection and the certificate for the log.
pub fn apply_move(c: &ExceptionalCollection, mv: Move) -> Result<(ExceptionalCollection, Certificate), MutationError> {
    let mut out = c.clone();
    let cert = match mv {
        Move::LeftMut(i) => {
            let (x, y) = pair(c, i)?;
            match (&x, &y) {
                (Symbol::Bundle(bx), Symbol::Bundle(by)) => {
                    let hit = left_rule(*bx, *by)
                        .ok_or_else(|| MutationError::PatternMismatch(x.to_string(), y.to_string(), "LeftMut".into()))?;
                    let (p, q) = hit.out;
                    let cert = certify_rule(*bx, *by, hit)?;
                    out.symbols[i] = Symbol::Bundle(p);
                    out.symbols[i + 1] = Symbol::Bundle(q);
                    cert
                }
                (Symbol::Bundle(bx), Symbol::Block { .. }) => {
                    let f = Functor::Left(*bx);
                    out.symbols[i] = push_word(&y, f);
                    out.symbols[i + 1] = x.clone();
                    Certificate::Block { functor: f }
                }
                _ => return Err(MutationError::PatternMismatch(x.to_string(), y.to_string(), "LeftMut".into())),
            }
        }
        Move::RightMut(i) => {
            let (x, y) = pair(c, i)?;
            match (&x, &y) {
                (Symbol::Bundle(bx), Symbol::Bundle(by)) => {
                    let hit = right_rule(*bx, *by)
                        .ok_or_else(|| MutationError::PatternMismatch(x.to_string(), y.to_string(), "RightMut".into()))?;
                    let (p, q) = hit.out;
                    let cert = certify_rule(*bx, *by, hit)?;
                    out.symbols[i] = Symbol::Bundle(p);
                    out.symbols[i + 1] = Symbol::Bundle(q);
                    cert
                }
                (Symbol::Block { .. }, Symbol::Bundle(by)) => {
                    let f = Functor::Right(*by);
                    out.symbols[i] = y.clone();
                    out.symbols[i + 1] = push_word(&x, f);
                    Certificate::Block { functor: f }
                }
                _ => return Err(MutationError::PatternMismatch(x.to_string(), y.to_string(), "RightMut".into())),
            }
        }
        Move::Swap(i) => {
            let (x, y) = pair(c, i)?;
            let (bx, by) = match (x.as_bundle(), y.as_bundle()) {
                (Some(p), Some(q)) => (p, q),
                _ => return Err(MutationError::OpaqueBlock),
            };
            let forward = ext_on_m_vanishing_certificate(&bx, &by);
            let backward = ext_on_m_vanishing_certificate(&by, &bx);
            if !(forward.certified_zero && backward.certified_zero) {
                return Err(MutationError::Uncertified {
                    what: "mutual orthogonality".into(),
                    left: x.to_string(),
                    right: y.to_string(),
                });
            }
            out.symbols.swap(i, i + 1);
            Certificate::Swap { forward, backward }
        }
        Move::SerreRotate(k) => {
            out = c.serre_rotate(k);
            let s = if k >= 0 { 2 } else { -2 };
            Certificate::Rotate { count: k, twist: (s, s) }
        }
        Move::Twist(a, b) => {
            out = c.twisted(a, b);
            Certificate::Twist { a, b }
        }
        Move::Normalize(i) => {
            let e = c.symbols.get(i).ok_or(MutationError::OutOfRange(i))?;
            let be = e.as_bundle().ok_or(MutationError::OpaqueBlock)?;
            let to = normalize(be)
                .ok_or_else(|| MutationError::PatternMismatch(e.to_string(), String::new(), "Normalize".into()))?;
            let det_power = det_difference(be, to).ok_or_else(|| MutationError::Uncertified {
                what: "isomorphism".into(),
                left: be.to_string(),
                right: to.to_string(),
            })?;
            out.symbols[i] = Symbol::Bundle(to);
            Certificate::Normalize { from: be, to, det_power }
        }
    };
    Ok((out, cert))
}

/// If the two F-weights differ by a multiple of (1,1,1,1,1), that multiple.
fn det_difference(x: Bundle, y: Bundle) -> Option<i64> {
    let (wx, wy) = (x.f_weight()?, y.f_weight()?);
    let d: Vec<i64> = (0..5).map(|i| wy.w[i] - wx.w[i]).collect();
    d.iter().all(|&v| v == d[0]).then_some(d[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutation::BlockName;

    fn coll(names: &[&str]) -> ExceptionalCollection {
        ExceptionalCollection::parse(names).unwrap()
    }

    #[test]
    fn tilde_q_instance() {
        let (c, cert) = apply_move(&coll(&["Q3(0,2)", "O(1,1)"]), Move::RightMut(0)).unwrap();
        assert_eq!(c.labels(), vec!["O(1,1)", "Q2(0,2)"]);
        assert!(matches!(cert, Certificate::Rule { .. }));
    }

    #[test]
    fn uq_orientation() {
        // the exceptional pair is ⟨O, Q⟩; its left mutation produces U
        let (c, _) = apply_move(&coll(&["O(0,0)", "Q2(0,0)"]), Move::LeftMut(0)).unwrap();
        assert_eq!(c.labels(), vec!["U2(0,0)", "O(0,0)"]);
        // ⟨O, U₂⟩ is not an exceptional pair on M, so no rule applies
        assert!(apply_move(&coll(&["O(0,0)", "U2(0,0)"]), Move::LeftMut(0)).is_err());
    }

    #[test]
    fn left_then_right_is_identity() {
        for names in [
            ["O(0,0)", "Q2(0,0)"],
            ["O(1,2)", "Q3(1,2)"],
            ["O(0,3)", "U3dual(1,2)"],
            ["O(0,3)", "Q3dual(1,2)"],
            ["O(2,0)", "Q2(1,1)"],
            ["O(2,0)", "U2(1,1)"],
            ["O(1,1)", "U2dual(1,1)"],
        ] {
            let c = coll(&names);
            let (d, _) = apply_move(&c, Move::LeftMut(0)).unwrap_or_else(|e| panic!("{names:?}: {e}"));
            let (e, _) = apply_move(&d, Move::RightMut(0)).unwrap();
            assert_eq!(e, c);
        }
    }

    #[test]
    fn swap_needs_two_sided_vanishing() {
        assert!(apply_move(&coll(&["O(0,0)", "O(0,1)"]), Move::Swap(0)).is_err());
        let (c, _) = apply_move(&coll(&["O(0,3)", "O(1,2)"]), Move::Swap(0)).unwrap();
        assert_eq!(c.labels(), vec!["O(1,2)", "O(0,3)"]);
        assert_eq!(apply_move(&coll(&["O(0,3)", "Y"]), Move::Swap(0)), Err(MutationError::OpaqueBlock));
    }

    #[test]
    fn normalization_is_certified() {
        let (c, cert) = apply_move(&coll(&["Q3(1,1)"]), Move::Normalize(0)).unwrap();
        assert_eq!(c.labels(), vec!["Q3dual(1,2)"]);
        assert_eq!(cert, Certificate::Normalize { from: Bundle::parse("Q3(1,1)").unwrap(), to: Bundle::parse("Q3dual(1,2)").unwrap(), det_power: 1 });
        let (c, _) = apply_move(&coll(&["U2dual(1,2)"]), Move::Normalize(0)).unwrap();
        assert_eq!(c.labels(), vec!["U2(2,2)"]);
    }

    #[test]
    fn blocks_record_functors() {
        let (c, _) = apply_move(&coll(&["Y", "O(2,2)"]), Move::RightMut(0)).unwrap();
        assert_eq!(c.labels(), vec!["O(2,2)", "Y"]);
        assert_eq!(c.block(BlockName::Y).unwrap().functors, vec![Functor::Right(Bundle::o(2, 2))]);
        let (d, _) = apply_move(&c, Move::LeftMut(0)).unwrap();
        assert!(d.block(BlockName::Y).unwrap().is_identity());
    }

    proptest::proptest! {
        #[test]
        fn rotation_conjugates_positions(k in 0usize..8, shift in -2i64..3) {
            // three independent mutable pairs
            let c = coll(&["O(0,0)", "Q2(0,0)", "Q3(0,2)", "O(1,1)", "O(0,3)", "U3dual(1,2)", "O(5,5)", "Y"])
                .twisted(shift, 0);
            let n = c.len();
            for (j, mv) in [(0, Move::LeftMut as fn(usize) -> Move), (2, Move::RightMut), (4, Move::LeftMut)] {
                let (mutated, _) = apply_move(&c, mv(j)).unwrap();
                let lhs = mutated.serre_rotate(k as i64);
                let rotated = c.serre_rotate(k as i64);
                let pos = if j >= k { j - k } else { j + n - k };
                if j < k && j + 1 >= k {
                    continue; // the pair is split by the rotation
                }
                let (rhs, _) = apply_move(&rotated, mv(pos)).unwrap();
                proptest::prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
