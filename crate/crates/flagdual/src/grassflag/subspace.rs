use crate::exactalg::{Field, Mat};

/// A linear subspace of 10x10 matrices, stored as an echelonized basis.
#[derive(Clone, Debug)]
pub struct MatrixSubspace<F> {
    basis: Vec<Mat<F>>,
    /// Flattened basis, one row per element, in reduced row echelon form.
    flat: Mat<F>,
    pivots: Vec<usize>,
}

fn flatten<F: Field>(m: &Mat<F>) -> Vec<F> {
    m.entries().to_vec()
}

fn unflatten<F: Field>(v: &[F], n: usize) -> Mat<F> {
    Mat::from_fn(n, n, |i, j| v[i * n + j].clone())
}

impl<F: Field> MatrixSubspace<F> {
    /// Span of the given 10x10 matrices.
    pub fn span(mats: &[Mat<F>]) -> Self {
        let rows: Vec<Vec<F>> = mats.iter().map(flatten).collect();
        let m = if rows.is_empty() { Mat::zeros(0, 100) } else { Mat::from_rows(rows) };
        let ech = m.echelon();
        let r = ech.pivots.len();
        let flat = Mat::from_fn(r, 100, |i, j| ech.rref[(i, j)].clone());
        let basis = (0..r).map(|i| unflatten(&flat.row(i), 10)).collect();
        MatrixSubspace { basis, flat, pivots: ech.pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat<F>] {
        &self.basis
    }

    /// Exact membership by reduction against the echelon basis.
    pub fn contains(&self, m: &Mat<F>) -> bool {
        let mut v = flatten(m);
        for (r, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc].clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..100 {
                let x = self.flat[(r, j)].clone();
                if !x.is_zero() {
                    v[j] = v[j].clone() - c.clone() * x;
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    /// Orthogonal complement for the entrywise pairing trace(A^T B).
    pub fn perp(&self) -> Self {
        let mat = if self.dim() == 0 { Mat::zeros(1, 100) } else { self.flat.clone() };
        let ker = mat.kernel();
        let mats: Vec<Mat<F>> = ker.iter().map(|v| unflatten(v, 10)).collect();
        Self::span(&mats)
    }

    pub fn sum(&self, o: &Self) -> Self {
        let mut all = self.basis.clone();
        all.extend(o.basis.iter().cloned());
        Self::span(&all)
    }

    pub fn intersection_dim(&self, o: &Self) -> usize {
        self.dim() + o.dim() - self.sum(o).dim()
    }

    /// Linear coordinates, in terms of `basis()`, of a member.
    pub fn coordinates(&self, m: &Mat<F>) -> Option<Vec<F>> {
        if !self.contains(m) {
            return None;
        }
        let v = flatten(m);
        Some(self.pivots.iter().map(|&pc| v[pc].clone()).collect())
    }

    /// Linear combination of the basis.
    pub fn combine(&self, coeffs: &[F]) -> Mat<F> {
        let mut acc = Mat::zeros(10, 10);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            acc = &acc + &b.scale(c);
        }
        acc
    }

    /// Projection onto `self` along `complement`, assuming the two are complementary.
    pub fn project_along(&self, complement: &Self, m: &Mat<F>) -> Mat<F> {
        let mut cols: Vec<Vec<F>> = self.basis.iter().map(flatten).collect();
        cols.extend(complement.basis.iter().map(flatten));
        let a = Mat::from_cols(&cols);
        let x = a.solve(&flatten(m)).expect("complementary subspaces span everything");
        self.combine(&x[..self.dim()])
    }
}
