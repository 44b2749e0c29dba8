use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Range;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::exactalg::AlgError;

pub const RHO: [i64; 5] = [4, 3, 2, 1, 0];

/// Homogeneous spaces of GL(5) handled by the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Space {
    G25,
    G35,
    F,
}

impl Space {
    /// Sizes of the Levi blocks, left to right.
    pub fn blocks(self) -> &'static [usize] {
        match self {
            Space::G25 => &[2, 3],
            Space::G35 => &[3, 2],
            Space::F => &[2, 1, 2],
        }
    }

    pub fn block_ranges(self) -> Vec<Range<usize>> {
        let mut start = 0;
        self.blocks()
            .iter()
            .map(|&len| {
                let r = start..start + len;
                start += len;
                r
            })
            .collect()
    }

    pub fn dim(self) -> usize {
        match self {
            Space::G25 | Space::G35 => 6,
            Space::F => 8,
        }
    }

    /// Weight of the canonical bundle.
    pub fn canonical(self) -> [i64; 5] {
        match self {
            Space::G25 => [-5, -5, 0, 0, 0],
            Space::G35 => [-5, -5, -5, 0, 0],
            Space::F => line_weight(-3, -3),
        }
    }

    pub fn parse(s: &str) -> Result<Space, AlgError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "G25" | "G(2,5)" => Ok(Space::G25),
            "G35" | "G(3,5)" => Ok(Space::G35),
            "F" | "F235" | "F(2,3,5)" => Ok(Space::F),
            other => Err(AlgError::Parse(other.to_string())),
        }
    }
}

/// Weight of O(a,b) on F, where O(1,0) = det U₂^∨ and O(0,1) = det U₃^∨.
pub fn line_weight(a: i64, b: i64) -> [i64; 5] {
    [a + b, a + b, b, 0, 0]
}

/// Weight of O(t) on a Grassmannian (det of the dual tautological bundle).
pub fn grass_line_weight(space: Space, t: i64) -> [i64; 5] {
    match space {
        Space::G25 => [t, t, 0, 0, 0],
        Space::G35 => [t, t, t, 0, 0],
        Space::F => panic!("F has a two-parameter Picard group"),
    }
}

/// A weight of GL(5) together with a parabolic block structure; block i describes a
/// Schur functor of the dual of the i-th graded piece of the tautological flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockedWeight {
    pub space: Space,
    pub w: [i64; 5],
}

impl BlockedWeight {
    pub fn new(space: Space, w: [i64; 5]) -> Result<Self, AlgError> {
        let bw = BlockedWeight { space, w };
        if !bw.is_dominant() {
            return Err(AlgError::Invalid(format!("{bw} is not dominant for the Levi")));
        }
        Ok(bw)
    }

    pub fn trivial(space: Space) -> Self {
        BlockedWeight { space, w: [0; 5] }
    }

    pub fn is_dominant(&self) -> bool {
        self.space.block_ranges().into_iter().all(|r| self.w[r].windows(2).all(|p| p[0] >= p[1]))
    }

    /// Weight of the dual bundle: reverse and negate inside every block.
    pub fn dual(&self) -> Self {
        let mut w = self.w;
        for r in self.space.block_ranges() {
            let mut part: Vec<i64> = self.w[r.clone()].iter().map(|x| -x).collect();
            part.reverse();
            w[r].copy_from_slice(&part);
        }
        BlockedWeight { space: self.space, w }
    }

    /// Tensor with the line bundle of weight `l` (constant on each block).
    pub fn shift(&self, l: [i64; 5]) -> Self {
        let mut w = self.w;
        for i in 0..5 {
            w[i] += l[i];
        }
        BlockedWeight { space: self.space, w }
    }

    /// Tensor with O(a,b); only meaningful on F.
    pub fn twist(&self, a: i64, b: i64) -> Self {
        assert_eq!(self.space, Space::F);
        self.shift(line_weight(a, b))
    }

    pub fn block(&self, i: usize) -> &[i64] {
        let r = self.space.block_ranges()[i].clone();
        &self.w[r]
    }

    pub fn rank(&self) -> u128 {
        self.space.block_ranges().into_iter().map(|r| weyl_dim(&self.w[r])).product()
    }

    /// Parses "2,2|1|0,0"; the block shape determines the space.
    pub fn parse(s: &str) -> Result<Self, AlgError> {
        let blocks: Vec<Vec<i64>> = s
            .split('|')
            .map(|b| {
                b.split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|_| AlgError::Parse(s.to_string())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let shape: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
        let space = match shape.as_slice() {
            [2, 3] => Space::G25,
            [3, 2] => Space::G35,
            [2, 1, 2] => Space::F,
            _ => return Err(AlgError::Parse(s.to_string())),
        };
        let flat: Vec<i64> = blocks.concat();
        BlockedWeight::new(space, flat.try_into().expect("five entries"))
    }
}

impl fmt::Display for BlockedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .space
            .block_ranges()
            .into_iter()
            .map(|r| self.w[r].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "({})", parts.join("|"))
    }
}

/// Dimensions of cohomology groups by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub degrees: BTreeMap<usize, u128>,
    /// False when the table was assembled from graded pieces of a non-split bundle; then
    /// only an all-zero table carries information.
    pub exact: bool,
}

impl Default for CohomologyTable {
    fn default() -> Self {
        CohomologyTable::zero()
    }
}

impl CohomologyTable {
    pub fn zero() -> Self {
        CohomologyTable { degrees: BTreeMap::new(), exact: true }
    }

    pub fn single(degree: usize, dim: u128) -> Self {
        let mut t = CohomologyTable::zero();
        t.add_in(degree, dim);
        t
    }

    pub fn add_in(&mut self, degree: usize, dim: u128) {
        if dim > 0 {
            *self.degrees.entry(degree).or_insert(0) += dim;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn get(&self, degree: usize) -> u128 {
        self.degrees.get(&degree).copied().unwrap_or(0)
    }

    pub fn merge(&mut self, o: &CohomologyTable) {
        for (&d, &n) in &o.degrees {
            self.add_in(d, n);
        }
        self.exact &= o.exact;
    }

    pub fn shifted(&self, by: usize) -> Self {
        CohomologyTable { degrees: self.degrees.iter().map(|(&d, &n)| (d + by, n)).collect(), exact: self.exact }
    }

    pub fn euler(&self) -> i128 {
        self.degrees.iter().map(|(&d, &n)| if d % 2 == 0 { n as i128 } else { -(n as i128) }).sum()
    }

    /// True when the table is exactly ℂ^n in degree `d` and nothing else.
    pub fn is_concentrated(&self, d: usize, n: u128) -> bool {
        self.exact && self.degrees.len() == 1 && self.get(d) == n
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .degrees
            .iter()
            .map(|(&d, &n)| {
                let shift = if d == 0 { "0".to_string() } else { format!("-{d}") };
                if n == 1 {
                    format!("C[{shift}]")
                } else {
                    format!("C^{n}[{shift}]")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))?;
        if !self.exact {
            write!(f, " (graded bound)")?;
        }
        Ok(())
    }
}

/// Weyl dimension of the GL(n) irreducible with highest weight `mu` (non-increasing).
pub fn weyl_dim(mu: &[i64]) -> u128 {
    let n = mu.len();
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..n {
        for j in i + 1..n {
            num *= (mu[i] - mu[j] + (j - i) as i64) as i128;
            den *= (j - i) as i128;
        }
    }
    (num / den) as u128
}

/// Sorts `v` into strictly decreasing order, returning the number of inversions, or
/// `None` if two entries coincide.
pub(crate) fn sort_with_length(v: &mut [i64]) -> Option<usize> {
    let mut len = 0;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] < v[j + 1] {
                v.swap(j, j + 1);
                len += 1;
            }
        }
    }
    if v.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some(len)
}

fn memo() -> &'static Mutex<HashMap<[i64; 5], CohomologyTable>> {
    static MEMO: OnceLock<Mutex<HashMap<[i64; 5], CohomologyTable>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

fn bott_raw(w: [i64; 5]) -> CohomologyTable {
    let mut v = [0i64; 5];
    for i in 0..5 {
        v[i] = w[i] + RHO[i];
    }
    match sort_with_length(&mut v) {
        None => CohomologyTable::zero(),
        Some(len) => {
            let mu: Vec<i64> = (0..5).map(|i| v[i] - RHO[i]).collect();
            CohomologyTable::single(len, weyl_dim(&mu))
        }
    }
}

/// Cohomology of the irreducible homogeneous bundle with weight `w`.
pub fn bott(w: &BlockedWeight) -> Result<CohomologyTable, AlgError> {
    if !w.is_dominant() {
        return Err(AlgError::Invalid(format!("{w} is not dominant for the Levi")));
    }
    if let Some(t) = memo().lock().expect("memo lock").get(&w.w) {
        return Ok(t.clone());
    }
    let t = bott_raw(w.w);
    memo().lock().expect("memo lock").insert(w.w, t.clone());
    Ok(t)
}
