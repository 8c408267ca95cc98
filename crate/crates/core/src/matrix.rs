//! Small dense square matrices over a [`Field`].

use std::fmt;

use crate::field::Field;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F> {
    n: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![F::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for k in 0..n {
            m.data[k * n + k] = F::one();
        }
        m
    }

    /// Panics unless `rows` is square.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.n + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut t = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                t.data[c * n + r] = self.data[r * n + c].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = &self.data[r * n + k];
                if a.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let b = &other.data[k * n + c];
                    if !b.is_zero() {
                        out.data[r * n + c] += &(a.clone() * b);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|a| a.clone() * s).collect(),
        }
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| self.get(r, c).clone() == -self.get(c, r).clone()))
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                for c in 0..n {
                    a.data.swap(pivot * n + c, col * n + c);
                    inv.data.swap(pivot * n + c, col * n + c);
                }
            }
            let p = a.get(col, col).inv();
            for c in 0..n {
                a.data[col * n + c] *= &p;
                inv.data[col * n + c] *= &p;
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for c in 0..n {
                    let da = a.data[col * n + c].clone() * &f;
                    a.data[r * n + c] -= &da;
                    let di = inv.data[col * n + c].clone() * &f;
                    inv.data[r * n + c] -= &di;
                }
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> F {
        let n = self.n;
        let mut a = self.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return F::zero();
            };
            if pivot != col {
                for c in 0..n {
                    a.data.swap(pivot * n + c, col * n + c);
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det *= &p;
            let p_inv = p.inv();
            for r in col + 1..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone() * &p_inv;
                for c in col..n {
                    let d = a.data[col * n + c].clone() * &f;
                    a.data[r * n + c] -= &d;
                }
            }
        }
        det
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.n.max(1))).finish()
    }
}
