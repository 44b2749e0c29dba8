use serde::{Deserialize, Serialize};

use super::rules::{apply_move, Certificate, MutationError};
use super::{BlockName, ExceptionalCollection, Move, MutationWord, Symbol};
use crate::bwb::{ext_grass, ext_on_m, ext_on_m_vanishing_certificate, named, BundleExpr, CohomologyTable, Space};

/// The scripted move list, compiled from the proof's prose.
pub const REPLAY_SCRIPT: &str = include_str!("../../data/replay_moves.json");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Script {
    pub version: u32,
    pub start: Vec<String>,
    pub steps: Vec<Step>,
    #[serde(rename = "final")]
    pub final_collection: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Step {
    #[serde(flatten)]
    pub op: Op,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Script operations; symbols are addressed by their printed names.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Op {
    Rotate { count: i64 },
    Twist { a: i64, b: i64 },
    /// Left mutation of the pair whose left member is `at`.
    Left { at: String },
    /// Right mutation of the pair whose left member is `at`.
    Right { at: String },
    Swap { at: String },
    Normalize { at: String },
    /// Moves `symbol` by certified swaps so that it sits right after `after` (or right before `before`).
    Move {
        symbol: String,
        #[serde(default)]
        after: Option<String>,
        #[serde(default)]
        before: Option<String>,
    },
    /// Reorders by certified adjacent swaps to match `target`.
    Reorder { target: Vec<String> },
    /// Block passes `count` symbols to its left (left mutations).
    BlockLeft { block: BlockName, count: usize },
    /// Block passes `count` symbols to its right (right mutations).
    BlockRight { block: BlockName, count: usize },
    /// Checkpoint against a displayed collection.
    Expect { label: String, collection: Vec<String> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LogEntry {
    pub index: usize,
    pub step: usize,
    #[serde(rename = "move")]
    pub mv: Move,
    pub before: Vec<String>,
    pub after: Vec<String>,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Checkpoint {
    pub label: String,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReplayReport {
    pub start: Vec<String>,
    pub final_collection: Vec<String>,
    pub expected_final: Vec<String>,
    pub matches_expected: bool,
    pub checkpoints: Vec<Checkpoint>,
    pub moves: usize,
    pub log: Vec<LogEntry>,
    /// Φ as applied to the Y block, last functor written first.
    pub phi: String,
    pub phi_word: MutationWord,
    pub phi_inverse_is_identity: bool,
    /// Replaying the inverse log from the final collection returns the start.
    pub inverse_replay_returns_start: bool,
    pub start_exceptional: bool,
    pub final_exceptional: bool,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ReplayError {
    #[error("script: {0}")]
    Script(String),
    #[error("step {step}: {source}")]
    Move { step: usize, source: MutationError },
    #[error("step {step}: checkpoint {label} differs: got {got}")]
    Checkpoint { step: usize, label: String, got: String },
}

pub fn load_script(text: &str) -> Result<Script, ReplayError> {
    serde_json::from_str(text).map_err(|e| ReplayError::Script(e.to_string()))
}

struct Runner {
    c: ExceptionalCollection,
    log: Vec<LogEntry>,
    step: usize,
}

impl Runner {
    fn apply(&mut self, mv: Move) -> Result<(), ReplayError> {
        let (lo, hi) = match mv {
            Move::LeftMut(i) | Move::RightMut(i) | Move::Swap(i) => (i, i + 2),
            Move::Normalize(i) => (i, i + 1),
            _ => (0, self.c.len()),
        };
        let before = self.c.labels()[lo..hi.min(self.c.len())].to_vec();
        let (next, certificate) = apply_move(&self.c, mv).map_err(|source| ReplayError::Move { step: self.step, source })?;
        let after = next.labels()[lo..hi.min(next.len())].to_vec();
        self.c = next;
        self.log.push(LogEntry { index: self.log.len(), step: self.step, mv, before, after, certificate });
        Ok(())
    }

    fn find(&self, label: &str) -> Result<usize, ReplayError> {
        self.c
            .position(label)
            .ok_or_else(|| ReplayError::Script(format!("step {}: no symbol {label} in {}", self.step, self.c)))
    }

    /// Bubble `from` to index `to` by adjacent swaps.
    fn carry(&mut self, mut from: usize, to: usize) -> Result<(), ReplayError> {
        while from > to {
            self.apply(Move::Swap(from - 1))?;
            from -= 1;
        }
        while from < to {
            self.apply(Move::Swap(from))?;
            from += 1;
        }
        Ok(())
    }

    fn run(&mut self, op: &Op) -> Result<(), ReplayError> {
        match op {
            Op::Rotate { count } => self.apply(Move::SerreRotate(*count)),
            Op::Twist { a, b } => self.apply(Move::Twist(*a, *b)),
            Op::Left { at } => {
                let i = self.find(at)?;
                self.apply(Move::LeftMut(i))
            }
            Op::Right { at } => {
                let i = self.find(at)?;
                self.apply(Move::RightMut(i))
            }
            Op::Swap { at } => {
                let i = self.find(at)?;
                self.apply(Move::Swap(i))
            }
            Op::Normalize { at } => {
                let i = self.find(at)?;
                self.apply(Move::Normalize(i))
            }
            Op::Move { symbol, after, before } => {
                let from = self.find(symbol)?;
                let to = match (after, before) {
                    (Some(a), None) => {
                        let j = self.find(a)?;
                        if j < from {
                            j + 1
                        } else {
                            j
                        }
                    }
                    (None, Some(b)) => {
                        let j = self.find(b)?;
                        if j < from {
                            j
                        } else {
                            j - 1
                        }
                    }
                    _ => return Err(ReplayError::Script("move needs exactly one of after/before".into())),
                };
                self.carry(from, to)
            }
            Op::Reorder { target } => {
                if target.len() != self.c.len() {
                    return Err(ReplayError::Script(format!("reorder target has {} entries", target.len())));
                }
                for (dest, label) in target.iter().enumerate() {
                    let from = self.find(label)?;
                    if from < dest {
                        return Err(ReplayError::Script(format!("reorder target repeats {label}")));
                    }
                    self.carry(from, dest)?;
                }
                Ok(())
            }
            Op::BlockLeft { block, count } => {
                for _ in 0..*count {
                    let i = self.find(&format!("{block:?}"))?;
                    if i == 0 {
                        return Err(ReplayError::Script("block already first".into()));
                    }
                    self.apply(Move::LeftMut(i - 1))?;
                }
                Ok(())
            }
            Op::BlockRight { block, count } => {
                for _ in 0..*count {
                    let i = self.find(&format!("{block:?}"))?;
                    self.apply(Move::RightMut(i))?;
                }
                Ok(())
            }
            Op::Expect { label, collection } => {
                if self.c.labels() != *collection {
                    return Err(ReplayError::Checkpoint { step: self.step, label: label.clone(), got: self.c.to_string() });
                }
                Ok(())
            }
        }
    }
}

/// Certifies one-directional vanishing Ext_M(E_i, E_j) = 0 for i > j and Ext_M(E,E) = ℂ[0].
pub fn exceptional_on_m(c: &ExceptionalCollection) -> Result<(), String> {
    let bundles: Vec<_> = c.symbols.iter().filter_map(Symbol::as_bundle).collect();
    for e in &bundles {
        if ext_on_m(e, e) != Some(CohomologyTable::single(0, 1)) {
            return Err(format!("{e} is not certified exceptional"));
        }
    }
    for i in 0..bundles.len() {
        for j in 0..i {
            if !ext_on_m_vanishing_certificate(&bundles[i], &bundles[j]).certified_zero {
                return Err(format!("Ext({}, {}) not certified zero", bundles[i], bundles[j]));
            }
        }
    }
    Ok(())
}

/// Runs a script and returns the certified log.
pub fn run_script(script: &Script) -> Result<ReplayReport, ReplayError> {
    let start = ExceptionalCollection::parse(&script.start).map_err(|e| ReplayError::Script(e.to_string()))?;
    let mut r = Runner { c: start.clone(), log: Vec::new(), step: 0 };
    let mut checkpoints = Vec::new();
    for (k, step) in script.steps.iter().enumerate() {
        r.step = k;
        r.run(&step.op)?;
        if let Op::Expect { label, .. } = &step.op {
            checkpoints.push(Checkpoint { label: label.clone(), matches: true });
        }
    }
    let final_labels = r.c.labels();
    let matches_expected = final_labels == script.final_collection;

    let phi_word = r.c.block(BlockName::Y).cloned().unwrap_or_default();
    let phi_inverse_is_identity = phi_word.then(&phi_word.inverse()).is_identity();

    // replay the inverse moves in reverse order
    let mut back = r.c.clone();
    let mut inverse_ok = true;
    for e in r.log.iter().rev() {
        match apply_move(&back, e.mv.inverse()) {
            Ok((n, _)) => back = n,
            Err(_) => {
                inverse_ok = false;
                break;
            }
        }
    }
    inverse_ok &= back == start;

    Ok(ReplayReport {
        start: start.labels(),
        final_collection: final_labels,
        expected_final: script.final_collection.clone(),
        matches_expected,
        checkpoints,
        moves: r.log.len(),
        phi: phi_word.to_string(),
        phi_word,
        phi_inverse_is_identity,
        inverse_replay_returns_start: inverse_ok,
        start_exceptional: exceptional_on_m(&start).is_ok(),
        final_exceptional: exceptional_on_m(&r.c).is_ok(),
        log: r.log,
    })
}

/// Replays the shipped script.
pub fn replay_proof() -> Result<ReplayReport, ReplayError> {
    run_script(&load_script(REPLAY_SCRIPT)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CollectionCheck {
    pub name: String,
    pub space: Space,
    pub objects: Vec<String>,
    pub self_ext_ok: bool,
    /// Pairs (i, j), i > j, whose Ext(E_i, E_j) fails to vanish.
    pub failures: Vec<(usize, usize)>,
    pub pass: bool,
}

/// The minimal Lefschetz collections on G(2,5) and G(3,5).
pub fn named_collection(name: &str) -> Option<(Space, Vec<(String, BundleExpr, i64)>)> {
    let (space, second, label) = match name {
        "kuznetsov25" => (Space::G25, named::u2_dual(), "U2dual"),
        "kuznetsov35" => (Space::G35, named::q3(), "Q3"),
        _ => return None,
    };
    let mut objs = Vec::new();
    for t in 0..5 {
        objs.push((format!("O({t})"), BundleExpr::trivial(space), t));
        objs.push((format!("{label}({t})"), second.clone(), t));
    }
    Some((space, objs))
}

/// Full exceptionality check on the Grassmannian.
pub fn check_collection(name: &str) -> Option<CollectionCheck> {
    let (space, objs) = named_collection(name)?;
    Some(check_objects(name, space, &objs))
}

pub fn check_objects(name: &str, space: Space, objs: &[(String, BundleExpr, i64)]) -> CollectionCheck {
    let self_ext_ok =
        objs.iter().all(|(_, e, t)| ext_grass(space, e, *t, e, *t) == CohomologyTable::single(0, 1));
    let mut failures = Vec::new();
    for i in 0..objs.len() {
        for j in 0..i {
            let (_, ei, ti) = &objs[i];
            let (_, ej, tj) = &objs[j];
            if !ext_grass(space, ei, *ti, ej, *tj).is_zero() {
                failures.push((i, j));
            }
        }
    }
    CollectionCheck {
        name: name.to_string(),
        space,
        objects: objs.iter().map(|o| o.0.clone()).collect(),
        pass: self_ext_ok && failures.is_empty(),
        self_ext_ok,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kuznetsov_collections_are_exceptional() {
        for name in ["kuznetsov25", "kuznetsov35"] {
            let c = check_collection(name).unwrap();
            assert!(c.pass, "{c:?}");
        }
        assert!(check_collection("nope").is_none());
    }

    #[test]
    fn a_reversed_collection_fails() {
        let (space, mut objs) = named_collection("kuznetsov25").unwrap();
        objs.reverse();
        let c = check_objects("reversed", space, &objs);
        assert!(c.self_ext_ok && !c.pass);
    }

    #[test]
    fn script_parses() {
        let s = load_script(REPLAY_SCRIPT).unwrap();
        assert_eq!(s.start.len(), 21);
        assert_eq!(s.final_collection.len(), 21);
    }
}

#[cfg(test)]
mod replay_tests {
    use super::*;

    #[test]
    fn replay_reaches_final_display() {
        let r = replay_proof().unwrap_or_else(|e| panic!("{e}"));
        assert!(r.matches_expected, "{:?}", r.final_collection);
        assert!(r.phi_inverse_is_identity);
        assert!(r.inverse_replay_returns_start);
        assert!(r.start_exceptional && r.final_exceptional);
    }
}
