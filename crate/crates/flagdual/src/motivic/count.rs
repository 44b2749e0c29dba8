use rayon::prelude::*;
use serde::Serialize;

use crate::duality::{quadric_vector, quintic_vector};
use crate::exactalg::{AlgError, Field, FiniteField, Mat};
use crate::grassflag::{dual_coords, pluecker, SectionMatrix};
use crate::Q;

use super::gauss_binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Which {
    X,
    Y,
    M,
    G,
}

/// Largest field order enumerated without an explicit override.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CountBudget {
    pub max_q: u64,
}

impl Default for CountBudget {
    fn default() -> Self {
        CountBudget { max_q: 5 }
    }
}

impl CountBudget {
    fn check<F: FiniteField>(&self) -> Result<(), AlgError> {
        if F::order() > self.max_q {
            return Err(AlgError::FieldTooLarge { q: F::order(), max: self.max_q });
        }
        Ok(())
    }
}

/// Reduces a rational section modulo the characteristic of `F`.
pub fn reduce_section<F: Field>(s: &Mat<Q>) -> Result<SectionMatrix<F>, AlgError> {
    let mut out = Mat::zeros(s.rows(), s.cols());
    for i in 0..s.rows() {
        for j in 0..s.cols() {
            let e = &s[(i, j)];
            out[(i, j)] = F::from_ratio(e.numer(), e.denom())?;
        }
    }
    SectionMatrix::new(out)
}

/// A Schubert cell of k-subspaces of F_q^5: the pivot rows of the reduced column echelon
/// representative and the positions of its free entries.
struct Cell {
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
}

fn cells(k: usize) -> Vec<Cell> {
    let mut out = Vec::new();
    for mask in 0u32..32 {
        if mask.count_ones() as usize != k {
            continue;
        }
        let pivots: Vec<usize> = (0..5).filter(|r| mask >> r & 1 == 1).collect();
        let mut free = Vec::new();
        for (j, &p) in pivots.iter().enumerate() {
            for r in p + 1..5 {
                if !pivots.contains(&r) {
                    free.push((r, j));
                }
            }
        }
        out.push(Cell { pivots, free });
    }
    out
}

fn cell_point<F: FiniteField>(cell: &Cell, elems: &[F], mut index: u64) -> Mat<F> {
    let q = elems.len() as u64;
    let k = cell.pivots.len();
    let mut m = Mat::zeros(5, k);
    for (j, &p) in cell.pivots.iter().enumerate() {
        m[(p, j)] = F::one();
    }
    for &(r, j) in &cell.free {
        m[(r, j)] = elems[(index % q) as usize];
        index /= q;
    }
    m
}

/// Sums `f` over one representative of every k-dimensional subspace of F_q^5, with the
/// cells split across worker threads. The sum does not depend on the split.
pub fn sum_over_subspaces<F: FiniteField>(k: usize, f: impl Fn(&Mat<F>) -> u64 + Sync) -> u64 {
    let elems = F::elements();
    let q = F::order();
    cells(k)
        .par_iter()
        .map(|cell| {
            let total = q.pow(cell.free.len() as u32);
            (0..total).into_par_iter().map(|i| f(&cell_point(cell, &elems, i))).sum::<u64>()
        })
        .sum()
}

pub fn enumerate_subspaces<F: FiniteField>(k: usize) -> Vec<Mat<F>> {
    let elems = F::elements();
    let q = F::order();
    cells(k)
        .iter()
        .flat_map(|cell| (0..q.pow(cell.free.len() as u32)).map(|i| cell_point(cell, &elems, i)).collect::<Vec<_>>())
        .collect()
}

pub fn count_subspaces<F: FiniteField>(k: usize) -> u64 {
    sum_over_subspaces::<F>(k, |_| 1)
}

/// Nonzero vectors of the coordinate subspace on `rows`, one per line.
fn projective_points<F: FiniteField>(rows: &[usize]) -> Vec<Vec<F>> {
    let mut out = Vec::new();
    for cell in cells(1) {
        if !rows.contains(&cell.pivots[0]) {
            continue;
        }
        let elems = F::elements();
        let free: Vec<usize> = cell.free.iter().map(|&(r, _)| r).filter(|r| rows.contains(r)).collect();
        let total = F::order().pow(free.len() as u32);
        for mut i in 0..total {
            let mut v = vec![F::zero(); 5];
            v[cell.pivots[0]] = F::one();
            for &r in &free {
                v[r] = elems[(i % F::order()) as usize];
                i /= F::order();
            }
            out.push(v);
        }
    }
    out
}

fn dot<F: Field>(u: &[F], v: &[F]) -> F {
    u.iter().zip(v).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// M counted over G(2,5): every flag A ⊂ [A | w] with w running over the projective plane
/// of the coordinate complement of A, evaluating ybarᵀ (S xbar) on each flag.
fn count_m_over_g25<F: FiniteField>(s: &SectionMatrix<F>) -> u64 {
    sum_over_subspaces::<F>(2, |a| {
        let sx = s.s.mul_vec(&pluecker(a).expect("5x2"));
        let pivots: Vec<usize> = (0..2).map(|j| pivot_row(a, j)).collect();
        let complement: Vec<usize> = (0..5).filter(|r| !pivots.contains(r)).collect();
        projective_points::<F>(&complement)
            .into_iter()
            .filter(|w| {
                let b = a.hstack(&Mat::from_cols(&[w.clone()]));
                dot(&dual_coords(&pluecker(&b).expect("5x3")), &sx).is_zero()
            })
            .count() as u64
    })
}

/// M counted over G(3,5): every plane B·C inside the column span of B, evaluating
/// (Sᵀ ybar)ᵀ xbar on each flag.
fn count_m_over_g35<F: FiniteField>(s: &SectionMatrix<F>) -> u64 {
    let sub: Vec<Mat<F>> = enumerate_subspaces_of_dim3::<F>();
    let st = s.s.transpose();
    sum_over_subspaces::<F>(3, |b| {
        let c = st.mul_vec(&dual_coords(&pluecker(b).expect("5x3")));
        sub.iter().filter(|m| dot(&pluecker(&(b * *m)).expect("5x2"), &c).is_zero()).count() as u64
    })
}

/// The 3x2 echelon representatives of planes in F_q^3.
fn enumerate_subspaces_of_dim3<F: FiniteField>() -> Vec<Mat<F>> {
    // embed F_q^3 as the first three coordinates of F_q^5 and keep the cells inside it
    enumerate_subspaces::<F>(2)
        .into_iter()
        .filter(|m| (3..5).all(|r| (0..2).all(|j| m[(r, j)].is_zero())))
        .map(|m| m.submatrix(&[0, 1, 2], &[0, 1]))
        .collect()
}

/// In an echelon representative the pivot of a column is its first nonzero entry.
fn pivot_row<F: FiniteField>(a: &Mat<F>, j: usize) -> usize {
    (0..a.rows()).find(|&r| !a[(r, j)].is_zero()).expect("nonzero column")
}

pub fn count_points<F: FiniteField>(s: &SectionMatrix<F>, which: Which, budget: CountBudget) -> Result<u64, AlgError> {
    budget.check::<F>()?;
    Ok(match which {
        Which::G => count_subspaces::<F>(2),
        Which::X => sum_over_subspaces::<F>(2, |a| {
            quadric_vector(s, &pluecker(a).expect("5x2")).iter().all(|v| v.is_zero()) as u64
        }),
        Which::Y => sum_over_subspaces::<F>(3, |b| quintic_vector(s, b).iter().all(|v| v.is_zero()) as u64),
        Which::M => count_m_over_g25(s),
    })
}

/// Every count for one section over one field, with both fibration formulas evaluated.
#[derive(Clone, Debug, Serialize)]
pub struct PointCounts {
    pub field: String,
    pub q: u64,
    pub g25: u64,
    pub g35: u64,
    pub gauss_binomial: i128,
    pub x: u64,
    pub y: u64,
    pub m_over_g25: u64,
    pub m_over_g35: u64,
    pub m_formula_x: u64,
    pub m_formula_y: u64,
    pub fibration_x_holds: bool,
    pub fibration_y_holds: bool,
    pub x_equals_y: bool,
}

impl PointCounts {
    pub fn pass(&self) -> bool {
        self.fibration_x_holds
            && self.fibration_y_holds
            && self.x_equals_y
            && self.g25 as i128 == self.gauss_binomial
            && self.g35 as i128 == self.gauss_binomial
    }

    pub fn compute<F: FiniteField>(s: &SectionMatrix<F>, budget: CountBudget) -> Result<Self, AlgError> {
        budget.check::<F>()?;
        let q = F::order();
        let g25 = count_subspaces::<F>(2);
        let g35 = count_subspaces::<F>(3);
        let x = count_points(s, Which::X, budget)?;
        let y = count_points(s, Which::Y, budget)?;
        let m_over_g25 = count_m_over_g25(s);
        let m_over_g35 = count_m_over_g35(s);
        let (p2, p1) = (q * q + q + 1, q + 1);
        let m_formula_x = x * p2 + (g25 - x) * p1;
        let m_formula_y = y * p2 + (g35 - y) * p1;
        Ok(PointCounts {
            field: F::field_name(),
            q,
            g25,
            g35,
            gauss_binomial: gauss_binomial(5, 2).eval(q as i128),
            x,
            y,
            m_over_g25,
            m_over_g35,
            m_formula_x,
            m_formula_y,
            fibration_x_holds: m_over_g25 == m_formula_x && m_over_g35 == m_formula_x,
            fibration_y_holds: m_over_g25 == m_formula_y && m_over_g35 == m_formula_y,
            x_equals_y: x == y,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::random_hf_section;
    use crate::{Gf4, F2, F3};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    #[test]
    fn echelon_cells_count_grassmannians() {
        assert_eq!(count_subspaces::<F2>(2), 155);
        assert_eq!(count_subspaces::<F3>(3), gauss_binomial(5, 3).eval(3) as u64);
        assert_eq!(count_subspaces::<Gf4>(2), gauss_binomial(5, 2).eval(4) as u64);
        assert_eq!(enumerate_subspaces_of_dim3::<F3>().len(), 13);
        assert_eq!(projective_points::<F3>(&[1, 3, 4]).len(), 13);
    }

    #[test]
    fn representatives_are_distinct_points() {
        // distinct echelon representatives never span the same subspace
        let reps = enumerate_subspaces::<F2>(2);
        let keys: HashSet<Vec<u32>> =
            reps.iter().map(|m| pluecker(m).unwrap().iter().map(|v| v.value()).collect()).collect();
        assert_eq!(keys.len(), reps.len());
        for m in &reps {
            assert_eq!(m.rank(), 2);
        }
    }

    #[test]
    fn zero_section_counts() {
        let s = SectionMatrix { s: Mat::<F2>::zeros(10, 10) };
        let c = PointCounts::compute(&s, CountBudget::default()).unwrap();
        assert_eq!((c.x, c.y), (155, 155));
        assert_eq!(c.m_over_g25, 155 * 7);
        assert!(c.pass());
    }

    #[test]
    fn random_sections_over_f2_and_f3() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..2 {
            let s = random_hf_section::<F2, _>(&mut rng);
            let c = PointCounts::compute(&s, CountBudget::default()).unwrap();
            assert!(c.pass(), "{c:?}");
        }
        let s = random_hf_section::<F3, _>(&mut rng);
        assert!(PointCounts::compute(&s, CountBudget::default()).unwrap().pass());
    }

    #[test]
    fn budget_refuses_large_fields() {
        let s = SectionMatrix { s: Mat::<crate::F7>::zeros(10, 10) };
        assert!(matches!(
            count_points(&s, Which::X, CountBudget::default()),
            Err(AlgError::FieldTooLarge { q: 7, max: 5 })
        ));
    }

    #[test]
    fn rational_reduction() {
        let m = Mat::<Q>::from_fn(10, 10, |i, j| Q::new((i as i64 + 1).into(), (j as i64 + 2).into()));
        let r = reduce_section::<crate::F13>(&m).unwrap();
        assert_eq!(r.s[(0, 0)], crate::F13::from_i64(7)); // 1/2 = 7 mod 13
        assert!(reduce_section::<F2>(&m).is_err());
    }
}
