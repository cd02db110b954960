//! Sparse superoperators acting on column-major vectorised density matrices.
//!
//! `vec(A ρ B) = (Bᵀ ⊗ A) vec ρ`: the product of `A[i,k]` and `B[l,j]` lands
//! at row `i + j n`, column `k + l n`.

use std::collections::BTreeMap;

use crate::operator::{c, CMatrix, CVector, C64, I};

/// Compressed-row complex matrix of size `n² × n²`.
#[derive(Clone, Debug, PartialEq)]
pub struct Superoperator {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<C64>,
}

impl Superoperator {
    /// Hilbert-space dimension `n` (the superoperator is `n² × n²`).
    pub fn hilbert_dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// `out = L x`.
    pub fn apply(&self, x: &CVector, out: &mut CVector) {
        for row in 0..self.row_ptr.len() - 1 {
            let mut acc = c(0.0);
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            out[row] = acc;
        }
    }

    /// Applies the map to a matrix, returning `L(ρ)`.
    pub fn apply_matrix(&self, rho: &CMatrix) -> CMatrix {
        let x = CVector::from_column_slice(rho.as_slice());
        let mut y = CVector::zeros(x.len());
        self.apply(&x, &mut y);
        CMatrix::from_column_slice(self.n, self.n, y.as_slice())
    }

    pub fn to_dense(&self) -> CMatrix {
        let m = self.n * self.n;
        let mut d = CMatrix::zeros(m, m);
        for row in 0..m {
            for k in self.row_ptr[row]..self.row_ptr[row + 1] {
                d[(row, self.cols[k])] += self.vals[k];
            }
        }
        d
    }
}

/// Accumulates `coeff · A ρ B` terms before compression.
#[derive(Clone, Debug)]
pub struct SuperopBuilder {
    n: usize,
    entries: BTreeMap<(usize, usize), C64>,
}

fn nonzeros(m: &CMatrix) -> Vec<(usize, usize, C64)> {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v.re != 0.0 || v.im != 0.0 {
                out.push((i, j, v));
            }
        }
    }
    out
}

impl SuperopBuilder {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            entries: BTreeMap::new(),
        }
    }

    /// Adds `coeff · A ρ B`.
    pub fn sandwich(&mut self, coeff: C64, a: &CMatrix, b: &CMatrix) -> &mut Self {
        let n = self.n;
        let na = nonzeros(a);
        let nb = nonzeros(b);
        for &(l, j, bv) in &nb {
            for &(i, k, av) in &na {
                *self.entries.entry((i + j * n, k + l * n)).or_insert(c(0.0)) += coeff * av * bv;
            }
        }
        self
    }

    pub fn left(&mut self, coeff: C64, a: &CMatrix) -> &mut Self {
        let id = CMatrix::identity(self.n, self.n);
        self.sandwich(coeff, a, &id)
    }

    pub fn right(&mut self, coeff: C64, b: &CMatrix) -> &mut Self {
        let id = CMatrix::identity(self.n, self.n);
        self.sandwich(coeff, &id, b)
    }

    /// `−i[H, ρ]`.
    pub fn hamiltonian(&mut self, h: &CMatrix) -> &mut Self {
        self.left(-I, h).right(I, h)
    }

    /// `γ (L ρ L† − ½{L†L, ρ})`.
    pub fn dissipator(&mut self, l: &CMatrix, rate: f64) -> &mut Self {
        if rate == 0.0 {
            return self;
        }
        let ld = l.adjoint();
        let ldl = &ld * l;
        self.sandwich(c(rate), l, &ld)
            .left(c(-0.5 * rate), &ldl)
            .right(c(-0.5 * rate), &ldl)
    }

    /// `−iκ([s, t ρ] − [ρ t, s])`.
    pub fn cascaded(&mut self, s: &CMatrix, t: &CMatrix, kappa: f64) -> &mut Self {
        if kappa == 0.0 {
            return self;
        }
        let k = -I * kappa;
        let st = s * t;
        let ts = t * s;
        self.left(k, &st)
            .sandwich(-k, t, s)
            .right(-k, &ts)
            .sandwich(k, s, t)
    }

    pub fn build(&self) -> Superoperator {
        let m = self.n * self.n;
        let mut row_ptr = vec![0usize; m + 1];
        let mut cols = Vec::with_capacity(self.entries.len());
        let mut vals = Vec::with_capacity(self.entries.len());
        for (&(r, col), &v) in &self.entries {
            if v.re == 0.0 && v.im == 0.0 {
                continue;
            }
            row_ptr[r + 1] += 1;
            cols.push(col);
            vals.push(v);
        }
        for r in 0..m {
            row_ptr[r + 1] += row_ptr[r];
        }
        Superoperator {
            n: self.n,
            row_ptr,
            cols,
            vals,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_matrix(n: usize, seed: u64) -> CMatrix {
        let mut s = seed;
        CMatrix::from_fn(n, n, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5;
            C64::new(a, b)
        })
    }

    #[test]
    fn sandwich_matches_dense_product() {
        let n = 4;
        let a = random_matrix(n, 1);
        let b = random_matrix(n, 2);
        let rho = random_matrix(n, 3);
        let mut sb = SuperopBuilder::new(n);
        sb.sandwich(c(2.0), &a, &b);
        let got = sb.build().apply_matrix(&rho);
        let want = (&a * &rho * &b) * c(2.0);
        assert!((got - want).norm() < 1e-12);
    }

    #[test]
    fn dense_agrees_with_sparse() {
        let n = 3;
        let h = random_matrix(n, 4);
        let h = &h + h.adjoint();
        let l = random_matrix(n, 5);
        let mut sb = SuperopBuilder::new(n);
        sb.hamiltonian(&h).dissipator(&l, 0.7);
        let s = sb.build();
        let rho = random_matrix(n, 6);
        let x = CVector::from_column_slice(rho.as_slice());
        let dense = s.to_dense() * &x;
        let sparse = CVector::from_column_slice(s.apply_matrix(&rho).as_slice());
        assert!((dense - sparse).norm() < 1e-12);
        let direct = (&h * &rho - &rho * &h) * (-I)
            + (&l * &rho * l.adjoint() - (l.adjoint() * &l * &rho + &rho * l.adjoint() * &l) * c(0.5)) * c(0.7);
        assert!((s.apply_matrix(&rho) - direct).norm() < 1e-12);
    }
}
