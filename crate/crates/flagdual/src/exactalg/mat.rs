//! Dense matrices over a ring, with exact Gaussian elimination over fields.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use rand::Rng;

use super::field::{Field, Ring};
use super::{pairs, AlgError};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Mat<R> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_cols(cols: &[Vec<R>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        Self::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn diag(d: &[R]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<R> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| c.clone() * x.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = R::zero();
                for j in 0..self.cols {
                    acc = acc + self[(i, j)].clone() * v[j].clone();
                }
                acc
            })
            .collect()
    }

    /// Selects the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Determinant by cofactor-free division-less expansion (Laplace); meant for n <= 5.
    pub fn det_laplace(&self) -> R {
        assert!(self.is_square());
        let n = self.rows;
        let cols: Vec<usize> = (0..n).collect();
        self.minor_laplace(0, &cols)
    }

    fn minor_laplace(&self, row: usize, cols: &[usize]) -> R {
        if cols.is_empty() {
            return R::one();
        }
        let mut acc = R::zero();
        for (k, &c) in cols.iter().enumerate() {
            let x = &self[(row, c)];
            if x.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&d| d != c).collect();
            let term = x.clone() * self.minor_laplace(row + 1, &rest);
            acc = if k % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    /// Minor on the given rows and columns (square selections, small sizes).
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> R {
        assert_eq!(rows.len(), cols.len());
        let e = |i: usize, j: usize| self[(rows[i], cols[j])].clone();
        match rows.len() {
            0 => R::one(),
            1 => e(0, 0),
            2 => e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0),
            3 => {
                e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                    + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
            }
            _ => self.submatrix(rows, cols).det_laplace(),
        }
    }
}

/// Second exterior power of a 5x5 matrix in the lexicographic pair order.
///
/// Entry (p, q) is the minor on rows `pairs()[p]` and columns `pairs()[q]`.
pub fn exterior_square<R: Ring>(t: &Mat<R>) -> Result<Mat<R>, AlgError> {
    if t.rows() != 5 || t.cols() != 5 {
        return Err(AlgError::Dimension(format!("exterior_square needs 5x5, got {}x{}", t.rows(), t.cols())));
    }
    let pr = pairs();
    Ok(Mat::from_fn(10, 10, |p, q| {
        let (i, j) = pr[p];
        let (k, l) = pr[q];
        t[(i, k)].clone() * t[(j, l)].clone() - t[(i, l)].clone() * t[(j, k)].clone()
    }))
}

impl<R> Index<(usize, usize)> for Mat<R> {
    type Output = R;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &R {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<R> IndexMut<(usize, usize)> for Mat<R> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<'a, R: Ring> Mul for &'a Mat<R> {
    type Output = Mat<R>;
    fn mul(self, rhs: &'a Mat<R>) -> Mat<R> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = std::mem::replace(&mut out[(i, j)], R::zero());
                    out[(i, j)] = cur + a.clone() * b.clone();
                }
            }
        }
        out
    }
}

impl<'a, R: Ring> Add for &'a Mat<R> {
    type Output = Mat<R>;
    fn add(self, rhs: &'a Mat<R>) -> Mat<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<'a, R: Ring> Sub for &'a Mat<R> {
    type Output = Mat<R>;
    fn sub(self, rhs: &'a Mat<R>) -> Mat<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<'a, R: Ring> Neg for &'a Mat<R> {
    type Output = Mat<R>;
    fn neg(self) -> Mat<R> {
        self.map(|x| -x.clone())
    }
}

impl<R: fmt::Display> fmt::Display for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols).map(|j| self.data[i * self.cols + j].to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl<R: fmt::Debug> fmt::Debug for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

/// Result of row reduction: the reduced row echelon form and its pivot columns.
pub struct Echelon<F> {
    pub rref: Mat<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Mat<F> {
    pub fn random<Rn: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut Rn) -> Self {
        Self::from_fn(rows, cols, |_, _| F::random(rng))
    }

    /// Uniform random matrix of full column rank (rejection sampling).
    pub fn random_full_rank<Rn: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut Rn) -> Self {
        loop {
            let m = Self::random(rows, cols, rng);
            if m.rank() == rows.min(cols) {
                return m;
            }
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| F::from_i64(x)).collect()).collect())
    }

    pub fn echelon(&self) -> Echelon<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].try_inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m[(r, j)].clone() * inv.clone();
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { rref: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let Echelon { rref, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![F::zero(); self.cols];
                v[fc] = F::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -rref[(r, fc)].clone();
                }
                v
            })
            .collect()
    }

    pub fn det(&self) -> Result<F, AlgError> {
        if !self.is_square() {
            return Err(AlgError::Dimension("det of non-square matrix".into()));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(F::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det = det * piv.clone();
            let inv = piv.try_inv()?;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone() * inv.clone();
                for j in c..n {
                    let v = m[(i, j)].clone() - f.clone() * m[(c, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self, AlgError> {
        if !self.is_square() {
            return Err(AlgError::Dimension("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n));
        let Echelon { rref, pivots } = aug.echelon();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(AlgError::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| rref[(i, n + j)].clone()))
    }

    /// One solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let bcol = Mat::from_cols(&[b.to_vec()]);
        let Echelon { rref, pivots } = self.hstack(&bcol).echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = rref[(r, self.cols)].clone();
        }
        Some(x)
    }

    /// Characteristic polynomial det(xI - M), coefficients low degree first (Berkowitz).
    pub fn charpoly(&self) -> Vec<F> {
        assert!(self.is_square());
        let n = self.rows;
        // Berkowitz: build the Toeplitz products column vectors.
        let mut v: Vec<F> = vec![F::one()];
        for r in 0..n {
            // leading r x r block A, column c = M[0..r, r], row R = M[r, 0..r], a = M[r,r]
            let a = self[(r, r)].clone();
            let col: Vec<F> = (0..r).map(|i| self[(i, r)].clone()).collect();
            let row: Vec<F> = (0..r).map(|j| self[(r, j)].clone()).collect();
            // t = [1, -a, -R c, -R A c, ..., -R A^{r-1} c]
            let mut t = vec![F::one(), -a];
            let mut ac = col.clone();
            for _ in 0..r {
                let rc = row.iter().zip(&ac).fold(F::zero(), |s, (x, y)| s + x.clone() * y.clone());
                t.push(-rc);
                let next: Vec<F> = (0..r)
                    .map(|i| (0..r).fold(F::zero(), |s, k| s + self[(i, k)].clone() * ac[k].clone()))
                    .collect();
                ac = next;
            }
            // new v = T * v with T lower-triangular Toeplitz of size (r+2) x (r+1)
            let mut nv = vec![F::zero(); r + 2];
            for i in 0..r + 2 {
                for (j, vj) in v.iter().enumerate() {
                    if i >= j && i - j < t.len() {
                        nv[i] = nv[i].clone() + t[i - j].clone() * vj.clone();
                    }
                }
            }
            v = nv;
        }
        // v holds coefficients from x^n downward
        v.reverse();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::Fp;
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type F17 = Fp<17>;

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n)
    }

    #[test]
    fn exterior_square_of_identity_and_scalar() {
        let i5 = Mat::<F17>::identity(5);
        assert_eq!(exterior_square(&i5).unwrap(), Mat::identity(10));
        let two = i5.scale(&F17::from_i64(2));
        assert_eq!(exterior_square(&two).unwrap(), Mat::identity(10).scale(&F17::from_i64(4)));
    }

    #[test]
    fn exterior_square_of_diagonal_matches_pair_products() {
        let d = Mat::<BigRational>::diag(&[q(1), q(2), q(3), q(4), q(5)]);
        let e = exterior_square(&d).unwrap();
        let expected = [2, 3, 4, 5, 6, 8, 10, 12, 15, 20];
        // independent oracle: product of the two diagonal entries indexed by each pair
        for (p, (i, j)) in pairs().iter().enumerate() {
            assert_eq!(e[(p, p)], q(((i + 1) * (j + 1)) as i64));
            assert_eq!(e[(p, p)], q(expected[p]));
        }
    }

    #[test]
    fn exterior_square_rejects_bad_shape() {
        assert!(exterior_square(&Mat::<F17>::identity(4)).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Mat::<F17>::zeros(3, 3).kernel().len(), 3);
        assert!(Mat::<F17>::identity(3).kernel().is_empty());
        // B with zero first column and rank-2 remaining block
        let b = Mat::<F17>::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 2, 3], &[0, 0, 0], &[0, 5, 1]]);
        let k = b.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![F17::one(), F17::zero(), F17::zero()]);
    }

    #[test]
    fn inverse_and_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = Mat::<F17>::random(6, 6, &mut rng);
            let d = m.det().unwrap();
            assert_eq!(d, m.det_laplace());
            match m.inverse() {
                Ok(inv) => {
                    assert!(!d.is_zero());
                    assert_eq!(&m * &inv, Mat::identity(6));
                }
                Err(_) => assert!(d.is_zero()),
            }
        }
    }

    #[test]
    fn charpoly_constant_term_and_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let m = Mat::<BigRational>::random(4, 4, &mut rng);
            let cp = m.charpoly();
            assert_eq!(cp.len(), 5);
            assert_eq!(cp[4], q(1));
            let tr = (0..4).fold(q(0), |s, i| s + m[(i, i)].clone());
            assert_eq!(cp[3], -tr);
            assert_eq!(cp[0], m.det().unwrap());
        }
    }

    #[test]
    fn solve_consistent_system() {
        let a = Mat::<F17>::from_i64_rows(&[&[1, 2], &[3, 4], &[4, 6]]);
        let x = a.solve(&[F17::from_i64(5), F17::from_i64(11), F17::from_i64(16)]).unwrap();
        assert_eq!(x, vec![F17::from_i64(1), F17::from_i64(2)]);
        assert!(a.solve(&[F17::one(), F17::zero(), F17::zero()]).is_none());
    }

    fn seeded(seed: u64, rows: usize, cols: usize) -> Mat<F17> {
        Mat::random(rows, cols, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    proptest::proptest! {
        #[test]
        fn wedge_square_is_multiplicative(sa in proptest::prelude::any::<u64>(), sb in proptest::prelude::any::<u64>()) {
            let (a, b) = (seeded(sa, 5, 5), seeded(sb, 5, 5));
            proptest::prop_assert_eq!(
                exterior_square(&(&a * &b)).unwrap(),
                &exterior_square(&a).unwrap() * &exterior_square(&b).unwrap()
            );
        }

        #[test]
        fn det_of_wedge_square(seed in proptest::prelude::any::<u64>()) {
            let t = seeded(seed, 5, 5);
            proptest::prop_assert_eq!(exterior_square(&t).unwrap().det().unwrap(), t.det().unwrap().pow(4));
        }

        #[test]
        fn rank_plus_nullity(seed in proptest::prelude::any::<u64>(), rows in 1usize..6, cols in 1usize..6) {
            let m = seeded(seed, rows, cols);
            let ker = m.kernel();
            proptest::prop_assert_eq!(m.rank() + ker.len(), cols);
            for v in &ker {
                proptest::prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            }
        }
    }
}
