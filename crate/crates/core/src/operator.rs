//! Dense operator algebra on composed, truncated Hilbert spaces.
//!
//! Basis ordering: factor 0 is the slowest-varying (leftmost) tensor index,
//! so a space `[qubit, mode(d)]` orders its basis as
//! `|g,0>, |g,1>, ..., |g,d-1>, |e,0>, ...`. Qubit factors use the ordered
//! basis `(|g>, |e>)` with `sigma_z |e> = +|e>`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const I: C64 = Complex { re: 0.0, im: 1.0 };

pub(crate) fn c(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorKind {
    /// Two-level system, basis `(|g>, |e>)`.
    Qubit,
    /// Truncated bosonic mode, Fock basis `|0>..|dim-1>`.
    Mode,
    /// Any other finite level structure (charge states, ...).
    Levels,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
    pub kind: FactorKind,
}

/// Ordered tensor product of finite factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    factors: Vec<Factor>,
}

impl HilbertSpace {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidDimension { dim: 0 });
        }
        for f in &factors {
            if f.dim < 2 {
                return Err(Error::InvalidDimension { dim: f.dim });
            }
            if f.kind == FactorKind::Qubit && f.dim != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    found: f.dim,
                });
            }
        }
        Ok(Self { factors })
    }

    pub fn builder() -> SpaceBuilder {
        SpaceBuilder::default()
    }

    /// Single qubit labelled `q`.
    pub fn qubit() -> Self {
        Self {
            factors: vec![Factor {
                label: "q".into(),
                dim: 2,
                kind: FactorKind::Qubit,
            }],
        }
    }

    /// Single truncated mode labelled `b`.
    pub fn mode(dim: usize) -> Result<Self> {
        Self::new(vec![Factor {
            label: "b".into(),
            dim,
            kind: FactorKind::Mode,
        }])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn factor(&self, index: usize) -> Result<&Factor> {
        self.factors.get(index).ok_or(Error::FactorOutOfRange {
            index,
            factors: self.factors.len(),
        })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.dim).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.label == label)
    }

    /// Stride of factor `k` in the flattened basis index.
    pub(crate) fn stride(&self, k: usize) -> usize {
        self.factors[k + 1..].iter().map(|f| f.dim).product()
    }

    /// Level of factor `k` encoded in flattened basis index `idx`.
    pub(crate) fn level_of(&self, idx: usize, k: usize) -> usize {
        (idx / self.stride(k)) % self.factors[k].dim
    }
}

impl fmt::Display for HilbertSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|x| format!("{}({})", x.label, x.dim))
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[derive(Default)]
pub struct SpaceBuilder {
    factors: Vec<Factor>,
}

impl SpaceBuilder {
    pub fn qubit(mut self, label: &str) -> Self {
        self.factors.push(Factor {
            label: label.into(),
            dim: 2,
            kind: FactorKind::Qubit,
        });
        self
    }

    pub fn mode(mut self, label: &str, dim: usize) -> Self {
        self.factors.push(Factor {
            label: label.into(),
            dim,
            kind: FactorKind::Mode,
        });
        self
    }

    pub fn levels(mut self, label: &str, dim: usize) -> Self {
        self.factors.push(Factor {
            label: label.into(),
            dim,
            kind: FactorKind::Levels,
        });
        self
    }

    pub fn build(self) -> Result<HilbertSpace> {
        HilbertSpace::new(self.factors)
    }
}

/// Complex square matrix acting on a [`HilbertSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    space: HilbertSpace,
    matrix: CMatrix,
}

impl Operator {
    pub fn new(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let n = space.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { space, matrix })
    }

    /// Builds an operator and verifies Hermiticity to `1e-12 * max|M|`.
    pub fn hermitian(space: HilbertSpace, matrix: CMatrix) -> Result<Self> {
        let op = Self::new(space, matrix)?;
        op.check_hermitian()?;
        Ok(op)
    }

    pub fn from_real(space: HilbertSpace, matrix: DMatrix<f64>) -> Result<Self> {
        Self::new(space, matrix.map(c))
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        let n = space.total_dim();
        Self {
            space: space.clone(),
            matrix: CMatrix::identity(n, n),
        }
    }

    pub fn zeros(space: &HilbertSpace) -> Self {
        let n = space.total_dim();
        Self {
            space: space.clone(),
            matrix: CMatrix::zeros(n, n),
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn dagger(&self) -> Self {
        Self {
            space: self.space.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        Self {
            space: self.space.clone(),
            matrix: &self.matrix * z,
        }
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(c(x))
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        self * other - other * self
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let diff = &self.matrix - self.matrix.adjoint();
        diff.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= 1e-12 * self.max_abs()
    }

    pub fn check_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                deviation: self.hermitian_deviation(),
            })
        }
    }

    /// Ascending eigenvalues of a Hermitian operator.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.check_hermitian()?;
        Ok(hermitian_eigenvalues(&self.matrix))
    }

    /// Unitary conjugation `U^dag A U`.
    pub fn conjugate_by(&self, u: &Operator) -> Self {
        &(&u.dagger() * self) * u
    }

    pub(crate) fn ensure_same_space(&self, other: &Operator) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch {
                left: self.space.to_string(),
                right: other.space.to_string(),
            });
        }
        Ok(())
    }
}

fn assert_same(a: &Operator, b: &Operator) {
    assert!(
        a.space == b.space,
        "operator spaces differ: {} vs {}",
        a.space,
        b.space
    );
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_same(self, rhs);
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_same(self, rhs);
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_same(self, rhs);
        Operator {
            space: self.space.clone(),
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        &self + &rhs
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        &self - &rhs
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        &self * &rhs
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale_re(-1.0)
    }
}

pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()) * c(0.5);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Truncated bosonic annihilation operator with `sqrt(n)` at `(n-1, n)`.
pub fn annihilation(dim: usize) -> Result<Operator> {
    let space = HilbertSpace::mode(dim)?;
    let mut m = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = c((n as f64).sqrt());
    }
    Operator::new(space, m)
}

pub fn creation(dim: usize) -> Result<Operator> {
    Ok(annihilation(dim)?.dagger())
}

pub fn number(dim: usize) -> Result<Operator> {
    let b = annihilation(dim)?;
    Ok(&b.dagger() * &b)
}

/// Dimensionless position quadrature `(b + b^dag)/sqrt(2)`.
pub fn position(dim: usize) -> Result<Operator> {
    let b = annihilation(dim)?;
    Ok((&b + &b.dagger()).scale_re(std::f64::consts::FRAC_1_SQRT_2))
}

/// Dimensionless momentum quadrature `i (b^dag - b)/sqrt(2)`.
pub fn momentum(dim: usize) -> Result<Operator> {
    let b = annihilation(dim)?;
    Ok((&b.dagger() - &b).scale(I * std::f64::consts::FRAC_1_SQRT_2))
}

/// Mode parity `(-1)^{b^dag b}`.
pub fn parity(dim: usize) -> Result<Operator> {
    let space = HilbertSpace::mode(dim)?;
    let m = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            c(if i % 2 == 0 { 1.0 } else { -1.0 })
        } else {
            c(0.0)
        }
    });
    Operator::new(space, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
    /// Raising operator `|e><g|`.
    Plus,
    /// Lowering operator `|g><e|`.
    Minus,
}

/// Pauli operator in the ordered basis `(|g>, |e>)`.
pub fn pauli(which: Pauli) -> Operator {
    let z0 = c(0.0);
    let one = c(1.0);
    let m = match which {
        Pauli::X => [[z0, one], [one, z0]],
        Pauli::Y => [[z0, I], [-I, z0]],
        Pauli::Z => [[-one, z0], [z0, one]],
        Pauli::Plus => [[z0, z0], [one, z0]],
        Pauli::Minus => [[z0, one], [z0, z0]],
    };
    let matrix = CMatrix::from_fn(2, 2, |i, j| m[i][j]);
    Operator {
        space: HilbertSpace::qubit(),
        matrix,
    }
}

/// Hadamard gate in the `(|g>, |e>)` basis; its columns are `(|g>+|e>)/sqrt2`
/// and `(|g>-|e>)/sqrt2`.
pub fn hadamard() -> Operator {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Operator {
        space: HilbertSpace::qubit(),
        matrix: CMatrix::from_fn(2, 2, |i, j| c(if i == 1 && j == 1 { -s } else { s })),
    }
}

/// Lifts a single-factor operator onto `target_factor` of `space`, acting as
/// the identity on every other factor.
pub fn embed(op: &Operator, target_factor: usize, space: &HilbertSpace) -> Result<Operator> {
    let factor = space.factor(target_factor)?;
    if op.dim() != factor.dim {
        return Err(Error::DimensionMismatch {
            expected: factor.dim,
            found: op.dim(),
        });
    }
    let left: usize = space.factors()[..target_factor].iter().map(|f| f.dim).product();
    let right = space.stride(target_factor);
    let mut m = op.matrix.clone();
    if right > 1 {
        m = m.kronecker(&CMatrix::identity(right, right));
    }
    if left > 1 {
        m = CMatrix::identity(left, left).kronecker(&m);
    }
    Operator::new(space.clone(), m)
}

/// Like [`embed`] but locates the factor by label.
pub fn embed_on(op: &Operator, label: &str, space: &HilbertSpace) -> Result<Operator> {
    let k = space.index_of(label).ok_or_else(|| Error::InvalidParameter {
        name: "factor".into(),
        reason: format!("no factor labelled `{label}` in {space}"),
    })?;
    embed(op, k, space)
}

/// Tensor product of operators, one per factor of `space`, in order.
pub fn tensor(ops: &[&Operator], space: &HilbertSpace) -> Result<Operator> {
    if ops.len() != space.factors().len() {
        return Err(Error::DimensionMismatch {
            expected: space.factors().len(),
            found: ops.len(),
        });
    }
    let mut m = CMatrix::identity(1, 1);
    for (op, f) in ops.iter().zip(space.factors()) {
        if op.dim() != f.dim {
            return Err(Error::DimensionMismatch {
                expected: f.dim,
                found: op.dim(),
            });
        }
        m = m.kronecker(&op.matrix);
    }
    Operator::new(space.clone(), m)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Representation {
    Vector(CVector),
    Density(CMatrix),
}

/// Pure or mixed state on a [`HilbertSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    space: HilbertSpace,
    repr: Representation,
}

const STATE_TOL: f64 = 1e-10;

impl QuantumState {
    pub fn pure(space: HilbertSpace, psi: CVector) -> Result<Self> {
        if psi.len() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.total_dim(),
                found: psi.len(),
            });
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("state vector norm {norm}")));
        }
        Ok(Self {
            space,
            repr: Representation::Vector(psi),
        })
    }

    pub fn mixed(space: HilbertSpace, rho: CMatrix) -> Result<Self> {
        let n = space.total_dim();
        if rho.nrows() != n || rho.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rho.nrows(),
            });
        }
        let herm = (&rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!("density matrix not Hermitian ({herm:.3e})")));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min_ev = hermitian_eigenvalues(&rho)[0];
        if min_ev < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_ev:.3e}")));
        }
        Ok(Self {
            space,
            repr: Representation::Density(rho),
        })
    }

    /// Product of pure single-factor kets.
    pub fn product(space: HilbertSpace, kets: &[CVector]) -> Result<Self> {
        if kets.len() != space.factors().len() {
            return Err(Error::DimensionMismatch {
                expected: space.factors().len(),
                found: kets.len(),
            });
        }
        let mut psi = CVector::from_element(1, c(1.0));
        for k in kets {
            psi = psi.kronecker(k);
        }
        Self::pure(space, psi)
    }

    /// Product of single-factor density matrices.
    pub fn product_mixed(space: HilbertSpace, rhos: &[CMatrix]) -> Result<Self> {
        if rhos.len() != space.factors().len() {
            return Err(Error::DimensionMismatch {
                expected: space.factors().len(),
                found: rhos.len(),
            });
        }
        let mut rho = CMatrix::identity(1, 1);
        for r in rhos {
            rho = rho.kronecker(r);
        }
        Self::mixed(space, rho)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn density_matrix(&self) -> CMatrix {
        match &self.repr {
            Representation::Vector(psi) => psi * psi.adjoint(),
            Representation::Density(rho) => rho.clone(),
        }
    }

    pub fn to_density(&self) -> Self {
        Self {
            space: self.space.clone(),
            repr: Representation::Density(self.density_matrix()),
        }
    }

    /// Populations of each level of factor `k` (diagonal of the reduced state).
    pub fn factor_populations(&self, k: usize) -> Result<Vec<f64>> {
        let f = self.space.factor(k)?;
        let mut pops = vec![0.0; f.dim];
        let n = self.space.total_dim();
        for idx in 0..n {
            let p = match &self.repr {
                Representation::Vector(psi) => psi[idx].norm_sqr(),
                Representation::Density(rho) => rho[(idx, idx)].re,
            };
            pops[self.space.level_of(idx, k)] += p;
        }
        Ok(pops)
    }

    /// Largest population held in the top two Fock levels of any mode factor.
    pub fn top_fock_population(&self) -> f64 {
        top_fock_population(&self.space, |i| match &self.repr {
            Representation::Vector(psi) => psi[i].norm_sqr(),
            Representation::Density(rho) => rho[(i, i)].re,
        })
        .map(|(_, p)| p)
        .unwrap_or(0.0)
    }
}

/// Worst mode factor and its top-two-level population, given basis populations.
pub(crate) fn top_fock_population(
    space: &HilbertSpace,
    pop: impl Fn(usize) -> f64,
) -> Option<(usize, f64)> {
    let n = space.total_dim();
    let mut worst: Option<(usize, f64)> = None;
    for (k, f) in space.factors().iter().enumerate() {
        if f.kind != FactorKind::Mode {
            continue;
        }
        let mut top = 0.0;
        for idx in 0..n {
            if space.level_of(idx, k) + 2 >= f.dim {
                top += pop(idx);
            }
        }
        if worst.map_or(true, |(_, p)| top > p) {
            worst = Some((k, top));
        }
    }
    worst
}

/// `<psi|O|psi>` or `tr(rho O)`.
pub fn expectation(state: &QuantumState, op: &Operator) -> Result<C64> {
    if state.space != op.space {
        return Err(Error::SpaceMismatch {
            left: state.space.to_string(),
            right: op.space.to_string(),
        });
    }
    Ok(match &state.repr {
        Representation::Vector(psi) => psi.dotc(&(&op.matrix * psi)),
        Representation::Density(rho) => (rho * &op.matrix).trace(),
    })
}

pub fn ket_fock(dim: usize, n: usize) -> Result<CVector> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim });
    }
    if n >= dim {
        return Err(Error::InvalidState(format!("Fock level {n} outside dim {dim}")));
    }
    let mut v = CVector::zeros(dim);
    v[n] = c(1.0);
    Ok(v)
}

/// Qubit ket: `excited = false` gives `|g>`.
pub fn ket_qubit(excited: bool) -> CVector {
    let mut v = CVector::zeros(2);
    v[usize::from(excited)] = c(1.0);
    v
}

/// Truncated coherent state, renormalised after truncation.
pub fn ket_coherent(dim: usize, alpha: C64) -> Result<CVector> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim });
    }
    let mut v = CVector::zeros(dim);
    let mut amp = c((-alpha.norm_sqr() / 2.0).exp());
    for n in 0..dim {
        if n > 0 {
            amp = amp * alpha / (n as f64).sqrt();
        }
        v[n] = amp;
    }
    let norm = v.norm();
    Ok(v / c(norm))
}

/// Truncated thermal state with occupation `nbar`, renormalised.
pub fn density_thermal(dim: usize, nbar: f64) -> Result<CMatrix> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim });
    }
    if nbar < 0.0 {
        return Err(Error::InvalidState(format!("negative occupation {nbar}")));
    }
    let mut m = CMatrix::zeros(dim, dim);
    if nbar == 0.0 {
        m[(0, 0)] = c(1.0);
        return Ok(m);
    }
    let ratio = nbar / (1.0 + nbar);
    let weights: Vec<f64> = (0..dim).map(|n| ratio.powi(n as i32)).collect();
    let z: f64 = weights.iter().sum();
    for (n, w) in weights.iter().enumerate() {
        m[(n, n)] = c(w / z);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn annihilation_two_level() {
        let b = annihilation(2).unwrap();
        assert_eq!(b.matrix()[(0, 1)], c(1.0));
        assert_eq!(b.matrix()[(1, 0)], c(0.0));
        assert_eq!(b.matrix()[(0, 0)], c(0.0));
        assert_eq!(b.matrix()[(1, 1)], c(0.0));
    }

    #[test]
    fn annihilation_sqrt_rule() {
        let b = annihilation(3).unwrap();
        assert!((b.matrix()[(1, 2)].re - 1.41421356).abs() < 1e-8);
    }

    #[test]
    fn annihilation_rejects_small_dim() {
        assert_eq!(annihilation(1).unwrap_err(), Error::InvalidDimension { dim: 1 });
        assert!(annihilation(0).is_err());
    }

    #[test]
    fn number_diagonal_dim8() {
        // explicit matrix-multiply oracle
        let b = annihilation(8).unwrap();
        let m = b.matrix();
        for n in 0..8 {
            let mut acc = c(0.0);
            for k in 0..8 {
                acc += m[(k, n)].conj() * m[(k, n)];
            }
            assert!((acc.re - n as f64).abs() < 1e-12);
            let nop = number(8).unwrap();
            assert!(close(nop.matrix()[(n, n)], c(n as f64), 1e-12));
        }
    }

    #[test]
    fn truncated_commutator() {
        for dim in 2..12 {
            let b = annihilation(dim).unwrap();
            let comm = b.commutator(&b.dagger());
            for i in 0..dim {
                for j in 0..dim {
                    let expect = if i != j {
                        0.0
                    } else if i == dim - 1 {
                        -((dim - 1) as f64)
                    } else {
                        1.0
                    };
                    assert!(close(comm.matrix()[(i, j)], c(expect), 1e-12));
                }
            }
        }
    }

    #[test]
    fn pauli_conventions() {
        let z = pauli(Pauli::Z);
        assert_eq!(z.matrix()[(0, 0)], c(-1.0));
        assert_eq!(z.matrix()[(1, 1)], c(1.0));
        let x = pauli(Pauli::X);
        assert_eq!(&x * &x, Operator::identity(&HilbertSpace::qubit()));
        let y = pauli(Pauli::Y);
        let comm = x.commutator(&y);
        let want = z.scale(c(0.0) + I * 2.0);
        assert!((comm.matrix() - want.matrix()).norm() < 1e-15);
        // sigma_+ raises g to e
        let up = pauli(Pauli::Plus);
        let e = up.matrix() * ket_qubit(false);
        assert_eq!(e, ket_qubit(true));
        let sx = &up + &pauli(Pauli::Minus);
        assert_eq!(sx, x);
    }

    #[test]
    fn hadamard_columns() {
        let h = hadamard();
        assert!((&h * &h).matrix().iter().zip(CMatrix::identity(2, 2).iter()).all(|(a, b)| close(*a, *b, 1e-15)));
    }

    #[test]
    fn embed_identity_is_identity() {
        let space = HilbertSpace::builder().qubit("q").mode("b", 4).mode("a", 3).build().unwrap();
        let id = Operator::identity(&HilbertSpace::qubit());
        assert_eq!(embed(&id, 0, &space).unwrap(), Operator::identity(&space));
    }

    #[test]
    fn embedded_disjoint_operators_commute() {
        let space = HilbertSpace::builder().qubit("q").mode("b", 5).build().unwrap();
        let sz = embed(&pauli(Pauli::Z), 0, &space).unwrap();
        let b = embed(&annihilation(5).unwrap(), 1, &space).unwrap();
        let comm = sz.commutator(&b);
        assert!(comm.max_abs() < 1e-15);
    }

    #[test]
    fn embed_trace_scaling() {
        // dense oracle: trace(embed(op,k)) = trace(op) * prod_{j != k} dim_j
        let space = HilbertSpace::builder().mode("a", 3).qubit("q").mode("b", 4).build().unwrap();
        let n = number(4).unwrap();
        let lifted = embed(&n, 2, &space).unwrap();
        assert!(close(lifted.trace(), n.trace() * 6.0, 1e-12));
        let z = pauli(Pauli::Z).scale_re(2.0) + Operator::identity(&HilbertSpace::qubit());
        let lifted = embed(&z, 1, &space).unwrap();
        assert!(close(lifted.trace(), z.trace() * 12.0, 1e-12));
    }

    #[test]
    fn embed_basis_order_slowest_first() {
        let space = HilbertSpace::builder().qubit("q").mode("b", 3).build().unwrap();
        let sz = embed(&pauli(Pauli::Z), 0, &space).unwrap();
        // |g,0>,|g,1>,|g,2> then |e,0>,...
        let diag: Vec<f64> = (0..6).map(|i| sz.matrix()[(i, i)].re).collect();
        assert_eq!(diag, vec![-1.0, -1.0, -1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn embed_dimension_mismatch() {
        let space = HilbertSpace::builder().qubit("q").mode("b", 3).build().unwrap();
        assert!(matches!(
            embed(&annihilation(4).unwrap(), 1, &space),
            Err(Error::DimensionMismatch { expected: 3, found: 4 })
        ));
        assert!(embed(&pauli(Pauli::X), 5, &space).is_err());
    }

    #[test]
    fn embed_preserves_spectrum_with_multiplicity() {
        for dim in 2..=6 {
            let space = HilbertSpace::builder().mode("a", dim).qubit("q").build().unwrap();
            let x = position(dim).unwrap();
            let ev = x.eigenvalues().unwrap();
            let lifted = embed(&x, 0, &space).unwrap();
            assert!(lifted.is_hermitian());
            let ev2 = lifted.eigenvalues().unwrap();
            let mut doubled: Vec<f64> = ev.iter().flat_map(|e| [*e, *e]).collect();
            doubled.sort_by(|a, b| a.total_cmp(b));
            for (a, b) in doubled.iter().zip(&ev2) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn expectation_fock_and_thermal() {
        let space = HilbertSpace::mode(10).unwrap();
        let n = number(10).unwrap();
        let ground = QuantumState::pure(space.clone(), ket_fock(10, 0).unwrap()).unwrap();
        assert!(close(expectation(&ground, &n).unwrap(), c(0.0), 1e-15));
        let three = QuantumState::pure(space.clone(), ket_fock(10, 3).unwrap()).unwrap();
        assert!(close(expectation(&three, &n).unwrap(), c(3.0), 1e-12));
    }

    #[test]
    fn thermal_expectation_matches_geometric_series() {
        // independent oracle: explicit geometric-series density matrix at large dim
        let dim = 60;
        let nbar: f64 = 0.5;
        let mut rho = CMatrix::zeros(dim, dim);
        for k in 0..dim {
            rho[(k, k)] = c(nbar.powi(k as i32) / (1.0 + nbar).powi(k as i32 + 1));
        }
        let state = QuantumState::mixed(HilbertSpace::mode(dim).unwrap(), rho).unwrap();
        let val = expectation(&state, &number(dim).unwrap()).unwrap();
        assert!((val.re - 0.5).abs() < 1e-10);
        assert!(val.im.abs() < 1e-10);
        let built = density_thermal(dim, nbar).unwrap();
        let s2 = QuantumState::mixed(HilbertSpace::mode(dim).unwrap(), built).unwrap();
        assert!((expectation(&s2, &number(dim).unwrap()).unwrap().re - 0.5).abs() < 1e-10);
    }

    #[test]
    fn state_validation() {
        let space = HilbertSpace::mode(3).unwrap();
        let bad = CVector::from_element(3, c(1.0));
        assert!(QuantumState::pure(space.clone(), bad).is_err());
        let mut rho = CMatrix::zeros(3, 3);
        rho[(0, 0)] = c(1.5);
        rho[(1, 1)] = c(-0.5);
        assert!(QuantumState::mixed(space.clone(), rho).is_err());
        let op = number(4).unwrap();
        let st = QuantumState::pure(space, ket_fock(3, 1).unwrap()).unwrap();
        assert!(matches!(expectation(&st, &op), Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn coherent_mean_number() {
        let psi = ket_coherent(40, c(1.5)).unwrap();
        let st = QuantumState::pure(HilbertSpace::mode(40).unwrap(), psi).unwrap();
        let n = expectation(&st, &number(40).unwrap()).unwrap();
        assert!((n.re - 2.25).abs() < 1e-10);
    }

    #[test]
    fn factor_populations_and_top_fock() {
        let space = HilbertSpace::builder().qubit("q").mode("b", 5).build().unwrap();
        let st = QuantumState::product(space, &[ket_qubit(true), ket_fock(5, 3).unwrap()]).unwrap();
        assert_eq!(st.factor_populations(0).unwrap(), vec![0.0, 1.0]);
        assert_eq!(st.factor_populations(1).unwrap()[3], 1.0);
        assert_eq!(st.top_fock_population(), 1.0);
    }

    #[test]
    fn quadrature_commutator() {
        let q = position(12).unwrap();
        let p = momentum(12).unwrap();
        let comm = q.commutator(&p);
        for n in 0..11 {
            assert!(close(comm.matrix()[(n, n)], I, 1e-12));
        }
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn hermitian_expectations_are_real(dim in 2usize..7, re in proptest::collection::vec(-1.0f64..1.0, 14), im in proptest::collection::vec(-1.0f64..1.0, 14)) {
            let space = HilbertSpace::builder().qubit("q").mode("b", dim).build().unwrap();
            let n = space.total_dim();
            let mut psi = CVector::from_fn(n, |i, _| Complex::new(re[i % 14] + 0.01 * i as f64, im[i % 14]));
            let norm = psi.norm();
            psi /= c(norm);
            let st = QuantumState::pure(space.clone(), psi).unwrap();
            let b = embed(&annihilation(dim).unwrap(), 1, &space).unwrap();
            let x = &b + &b.dagger();
            let sx = embed(&pauli(Pauli::X), 0, &space).unwrap();
            let h = &(&x * &sx) + &b.dagger().commutator(&b);
            prop_assert!(h.is_hermitian());
            let v = expectation(&st, &h).unwrap();
            prop_assert!(v.im.abs() < 1e-10);
            let v = expectation(&st.to_density(), &h).unwrap();
            prop_assert!(v.im.abs() < 1e-10);
        }
    }
}
