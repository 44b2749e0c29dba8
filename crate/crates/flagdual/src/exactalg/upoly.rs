//! Dense univariate polynomials, only as much as the squarefree test needs.

use super::field::Field;

/// Coefficients low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly<F>(Vec<F>);

impl<F: Field> UPoly<F> {
    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.0
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c.clone() * F::from_i64(i as i64)).collect())
    }

    pub fn rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.0[dd].try_inv().unwrap();
        let mut r = self.0.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let c = r[k].clone() * inv.clone();
            for (i, di) in d.0.iter().enumerate() {
                let v = r[k - dd + i].clone() - c.clone() * di.clone();
                r[k - dd + i] = v;
            }
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        Self::new(r)
    }

    pub fn monic(&self) -> Self {
        match self.0.last() {
            None => self.clone(),
            Some(l) => {
                let inv = l.try_inv().unwrap();
                Self::new(self.0.iter().map(|c| c.clone() * inv.clone()).collect())
            }
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// gcd(f, f') = 1.
    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::Fp;
    type F = Fp<17>;

    fn p(c: &[i64]) -> UPoly<F> {
        UPoly::new(c.iter().map(|&x| F::from_i64(x)).collect())
    }

    #[test]
    fn squarefree_detection() {
        // (x-1)(x-2)
        assert!(p(&[2, -3, 1]).is_squarefree());
        // (x-1)^2
        assert!(!p(&[1, -2, 1]).is_squarefree());
    }

    #[test]
    fn gcd_of_products() {
        // (x-1)(x-2) and (x-1)(x+3)
        let g = p(&[2, -3, 1]).gcd(&p(&[-3, 2, 1]));
        assert_eq!(g, p(&[-1, 1]));
    }
}
