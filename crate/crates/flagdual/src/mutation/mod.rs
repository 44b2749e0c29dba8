//! Exceptional collections on the hyperplane section M ⊂ F as symbol lists, with
//! rule-based mutations whose every step carries an Ext certificate.

pub mod replay;
pub mod rules;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bwb::{Bundle, Kind};
use crate::exactalg::AlgError;

pub use replay::{check_collection, replay_proof, CollectionCheck, ReplayReport};
pub use rules::{apply_move, Certificate};

/// A functor applied to an opaque block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Functor {
    Left(Bundle),
    Right(Bundle),
    Twist(i64, i64),
}

impl Functor {
    pub fn inverse(self) -> Functor {
        match self {
            Functor::Left(e) => Functor::Right(e),
            Functor::Right(e) => Functor::Left(e),
            Functor::Twist(a, b) => Functor::Twist(-a, -b),
        }
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functor::Left(e) => write!(f, "L_{e}"),
            Functor::Right(e) => write!(f, "R_{e}"),
            Functor::Twist(a, b) => write!(f, "T({a},{b})"),
        }
    }
}

/// Functors applied in order, first element first. Adjacent inverse pairs cancel.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutationWord {
    pub functors: Vec<Functor>,
}

impl MutationWord {
    pub fn push(&mut self, f: Functor) {
        match (self.functors.last().copied(), f) {
            (Some(Functor::Twist(a, b)), Functor::Twist(c, d)) => {
                self.functors.pop();
                if (a + c, b + d) != (0, 0) {
                    self.functors.push(Functor::Twist(a + c, b + d));
                }
            }
            (Some(last), _) if last == f.inverse() => {
                self.functors.pop();
            }
            _ => self.functors.push(f),
        }
    }

    pub fn then(&self, o: &MutationWord) -> MutationWord {
        let mut w = self.clone();
        for &f in &o.functors {
            w.push(f);
        }
        w
    }

    pub fn inverse(&self) -> MutationWord {
        MutationWord { functors: self.functors.iter().rev().map(|f| f.inverse()).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.functors.is_empty()
    }
}

impl fmt::Display for MutationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.functors.is_empty() {
            return write!(f, "id");
        }
        // composition notation: the last functor applied is written first
        let parts: Vec<String> = self.functors.iter().rev().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join("∘"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockName {
    X,
    Y,
}

/// An entry of a collection on M: a homogeneous bundle or an opaque block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symbol {
    Bundle(Bundle),
    Block { name: BlockName, word: MutationWord },
}

impl Symbol {
    pub fn bundle(kind: Kind, a: i64, b: i64) -> Symbol {
        Symbol::Bundle(Bundle::new(kind, a, b))
    }

    pub fn block(name: BlockName) -> Symbol {
        Symbol::Block { name, word: MutationWord::default() }
    }

    pub fn as_bundle(&self) -> Option<Bundle> {
        match self {
            Symbol::Bundle(b) => Some(*b),
            Symbol::Block { .. } => None,
        }
    }

    pub fn twisted(&self, a: i64, b: i64) -> Symbol {
        match self {
            Symbol::Bundle(e) => Symbol::Bundle(e.twist(a, b)),
            Symbol::Block { name, word } => {
                let mut w = word.clone();
                w.push(Functor::Twist(a, b));
                Symbol::Block { name: *name, word: w }
            }
        }
    }

    pub fn parse(s: &str) -> Result<Symbol, AlgError> {
        match s.trim() {
            "X" => Ok(Symbol::block(BlockName::X)),
            "Y" => Ok(Symbol::block(BlockName::Y)),
            other => Bundle::parse(other).map(Symbol::Bundle),
        }
    }

    /// Equality of displayed names, ignoring block words.
    pub fn same_label(&self, o: &Symbol) -> bool {
        self.to_string() == o.to_string()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Bundle(b) => write!(f, "{b}"),
            Symbol::Block { name, .. } => write!(f, "{name:?}"),
        }
    }
}

/// An ordered list of symbols on M.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCollection {
    pub symbols: Vec<Symbol>,
}

impl ExceptionalCollection {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        ExceptionalCollection { symbols }
    }

    pub fn parse(names: &[impl AsRef<str>]) -> Result<Self, AlgError> {
        Ok(ExceptionalCollection { symbols: names.iter().map(|s| Symbol::parse(s.as_ref())).collect::<Result<_, _>>()? })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn labels(&self) -> Vec<String> {
        self.symbols.iter().map(|s| s.to_string()).collect()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.to_string() == label)
    }

    pub fn block(&self, name: BlockName) -> Option<&MutationWord> {
        self.symbols.iter().find_map(|s| match s {
            Symbol::Block { name: n, word } if *n == name => Some(word),
            _ => None,
        })
    }

    /// Moves `count` leading symbols to the tail twisted by the anticanonical class O(2,2);
    /// a negative count moves trailing symbols to the head twisted by O(-2,-2).
    pub fn serre_rotate(&self, count: i64) -> Self {
        let n = self.len() as i64;
        if n == 0 {
            return self.clone();
        }
        let mut out = self.clone();
        let k = count.rem_euclid(n) as usize;
        let laps = count.div_euclid(n);
        // whole laps twist everything
        if laps != 0 {
            out = out.twisted(2 * laps, 2 * laps);
        }
        let mut syms = out.symbols;
        let head: Vec<Symbol> = syms.drain(..k).map(|s| s.twisted(2, 2)).collect();
        syms.extend(head);
        ExceptionalCollection { symbols: syms }
    }

    pub fn twisted(&self, a: i64, b: i64) -> Self {
        ExceptionalCollection { symbols: self.symbols.iter().map(|s| s.twisted(a, b)).collect() }
    }
}

impl fmt::Display for ExceptionalCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}⟩", self.labels().join(", "))
    }
}

/// An elementary move on a collection; indices refer to the left member of a pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    LeftMut(usize),
    RightMut(usize),
    Swap(usize),
    SerreRotate(i64),
    Twist(i64, i64),
    Normalize(usize),
}

impl Move {
    pub fn inverse(self) -> Move {
        match self {
            Move::LeftMut(i) => Move::RightMut(i),
            Move::RightMut(i) => Move::LeftMut(i),
            Move::Swap(i) => Move::Swap(i),
            Move::SerreRotate(k) => Move::SerreRotate(-k),
            Move::Twist(a, b) => Move::Twist(-a, -b),
            Move::Normalize(i) => Move::Normalize(i),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coll(names: &[&str]) -> ExceptionalCollection {
        ExceptionalCollection::parse(names).unwrap()
    }

    #[test]
    fn word_cancellation() {
        let e = Bundle::o(1, 1);
        let mut w = MutationWord::default();
        w.push(Functor::Right(e));
        w.push(Functor::Twist(2, 2));
        let inv = w.inverse();
        assert!(w.then(&inv).is_identity());
        assert_eq!(w.to_string(), "T(2,2)∘R_O(1,1)");
    }

    #[test]
    fn rotate_full_length_twists() {
        let c = coll(&["O(0,0)", "Q3(0,0)", "O(0,1)"]);
        assert_eq!(c.serre_rotate(3), c.twisted(2, 2));
        assert_eq!(c.serre_rotate(2).serre_rotate(-2), c);
        assert_eq!(c.serre_rotate(1).labels(), vec!["Q3(0,0)", "O(0,1)", "O(2,2)"]);
        assert_eq!(c.serre_rotate(-1).labels(), vec!["O(-2,-1)", "O(0,0)", "Q3(0,0)"]);
    }

    #[test]
    fn block_picks_up_twists() {
        let c = coll(&["O(0,0)", "Y"]).serre_rotate(2);
        assert_eq!(c.block(BlockName::Y).unwrap().functors, vec![Functor::Twist(2, 2)]);
    }
}
