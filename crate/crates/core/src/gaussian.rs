//! Linear (Gaussian) open-system dynamics: drift and diffusion matrices,
//! mean and covariance evolution, Lyapunov steady states, force spectra and
//! cooling rates.
//!
//! Quadratures are `q = (b + b†)/√2`, `p = i(b† − b)/√2`, so the vacuum has
//! variance 1/2 and a mode's phonon number is `(Σ_qq + Σ_pp − 1)/2`.

use log::warn;
use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::ode::{Dopri5, Hooks};
use crate::operator::hermitian_eigenvalues;
use crate::series::TimeSeries;

type C = Complex<f64>;

/// `ẋ = A x + noise`, with symmetrised noise correlations `D` and, optionally,
/// the antisymmetric commutator part `K` so that the ordered correlation is
/// `⟨ξ_i(t) ξ_j(t')⟩ = (D + iK/2)_ij δ(t − t')`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianModel {
    drift: DMatrix<f64>,
    diffusion: DMatrix<f64>,
    commutator: DMatrix<f64>,
    labels: Vec<String>,
}

impl GaussianModel {
    pub fn new(drift: DMatrix<f64>, diffusion: DMatrix<f64>, labels: Vec<String>) -> Result<Self> {
        let n = drift.nrows();
        let commutator = DMatrix::zeros(n, n);
        Self::with_commutator(drift, diffusion, commutator, labels)
    }

    pub fn with_commutator(
        drift: DMatrix<f64>,
        diffusion: DMatrix<f64>,
        commutator: DMatrix<f64>,
        labels: Vec<String>,
    ) -> Result<Self> {
        let n = drift.nrows();
        if n == 0 || n % 2 != 0 || !drift.is_square() {
            return Err(invalid("drift", format!("must be square with even size, got {}x{}", n, drift.ncols())));
        }
        for (name, m) in [("diffusion", &diffusion), ("commutator", &commutator)] {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch { expected: n, found: m.nrows() });
            }
            let _ = name;
        }
        if labels.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: labels.len() });
        }
        if drift.iter().chain(diffusion.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("drift", "non-finite entry"));
        }
        let scale = diffusion.amax().max(1.0);
        if (&diffusion - diffusion.transpose()).amax() > 1e-12 * scale {
            return Err(invalid("diffusion", "not symmetric"));
        }
        if (&commutator + commutator.transpose()).amax() > 1e-12 * commutator.amax().max(1.0) {
            return Err(invalid("commutator", "not antisymmetric"));
        }
        let min_eig = diffusion.clone().symmetric_eigenvalues().min();
        if min_eig < -1e-12 * scale {
            return Err(invalid("diffusion", format!("not positive semidefinite (min eigenvalue {min_eig:.3e})")));
        }
        Ok(Self { drift, diffusion, commutator, labels })
    }

    pub fn drift(&self) -> &DMatrix<f64> {
        &self.drift
    }

    pub fn diffusion(&self) -> &DMatrix<f64> {
        &self.diffusion
    }

    pub fn commutator(&self) -> &DMatrix<f64> {
        &self.commutator
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.drift.nrows()
    }

    pub fn modes(&self) -> usize {
        self.dim() / 2
    }

    pub fn eigenvalues(&self) -> Vec<C> {
        self.drift.complex_eigenvalues().iter().copied().collect()
    }

    /// Largest real part among the drift eigenvalues.
    pub fn max_real_eigenvalue(&self) -> f64 {
        self.eigenvalues().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_stable(&self) -> bool {
        self.max_real_eigenvalue() < 0.0
    }
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn rate(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(invalid(name, format!("must be finite and >= 0, got {v}")))
    }
}

/// Membrane and atomic centre-of-mass oscillators with asymmetric position
/// coupling through a partially reflecting membrane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MembraneAtomParams {
    pub omega_m: f64,
    pub omega_at: f64,
    /// Collective coupling `λ_N`.
    pub lambda_n: f64,
    /// Membrane reflectivity in `[0, 1]`.
    pub r: f64,
    /// Intrinsic membrane energy damping.
    pub gamma_m: f64,
    /// Atomic laser-cooling rate.
    pub gamma_cool: f64,
    /// Membrane bath occupation.
    pub n_th: f64,
    /// Attach the [`cascade_diffusion`] terms that make the one-way part of
    /// the coupling completely positive.
    pub cascade_noise: bool,
}

impl MembraneAtomParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.r) {
            return Err(invalid("r", format!("reflectivity must lie in [0, 1], got {}", self.r)));
        }
        rate("gamma_m", self.gamma_m)?;
        rate("gamma_cool", self.gamma_cool)?;
        rate("n_th", self.n_th)?;
        if !self.lambda_n.is_finite() || !self.omega_m.is_finite() || !self.omega_at.is_finite() {
            return Err(invalid("lambda_n", "frequencies and couplings must be finite"));
        }
        Ok(())
    }

    /// Momentum diffusion added to each oscillator.
    pub fn extra_diffusion(&self) -> f64 {
        if self.cascade_noise {
            cascade_diffusion(self.lambda_n, self.r)
        } else {
            0.0
        }
    }

    /// Quadratures ordered `(q, p, q_at, p_at)`:
    ///
    /// ```text
    /// ṗ    = −Ω_M q    − 2rλ_N q_at
    /// ṗ_at = −Ω_at q_at − 2λ_N q
    /// ```
    ///
    /// Each mode is damped at half its energy rate on both quadratures; the
    /// membrane sees a thermal bath at `n_th`, the atoms a zero-temperature one.
    pub fn gaussian(&self) -> Result<GaussianModel> {
        self.validate()?;
        let (gm, gc, lam) = (self.gamma_m, self.gamma_cool, self.lambda_n);
        let mut a = DMatrix::zeros(4, 4);
        a[(0, 1)] = self.omega_m;
        a[(1, 0)] = -self.omega_m;
        a[(1, 2)] = -2.0 * self.r * lam;
        a[(2, 3)] = self.omega_at;
        a[(3, 2)] = -self.omega_at;
        a[(3, 0)] = -2.0 * lam;
        for i in 0..2 {
            a[(i, i)] = -gm / 2.0;
            a[(i + 2, i + 2)] = -gc / 2.0;
        }
        let kc = self.extra_diffusion();
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![
            gm * (self.n_th + 0.5),
            gm * (self.n_th + 0.5) + kc,
            gc / 2.0,
            gc / 2.0 + kc,
        ]));
        let mut k = DMatrix::zeros(4, 4);
        k[(0, 1)] = gm;
        k[(1, 0)] = -gm;
        k[(2, 3)] = gc;
        k[(3, 2)] = -gc;
        GaussianModel::with_commutator(a, d, k, labels(&["q", "p", "q_at", "p_at"]))
    }
}

/// [`MembraneAtomParams::gaussian`] with the cascade noise attached.
pub fn build_membrane_atom_model(
    omega_m: f64,
    omega_at: f64,
    lambda_n: f64,
    r: f64,
    gamma_m: f64,
    gamma_cool: f64,
    n_th: f64,
) -> Result<GaussianModel> {
    MembraneAtomParams {
        omega_m,
        omega_at,
        lambda_n,
        r,
        gamma_m,
        gamma_cool,
        n_th,
        cascade_noise: true,
    }
    .gaussian()
}

/// Momentum-diffusion rate `(1 − r)|λ_N|` attached to each oscillator.
///
/// The cascaded term equals `D[L] − i(1−r)λ_N[q q_at, ·]` minus the diagonal
/// parts of `D[L]` for `L = √k (q ± i q_at)`; adding `D[√k q] + D[√k q_at]`
/// back restores a Lindblad generator.
pub fn cascade_diffusion(lambda_n: f64, r: f64) -> f64 {
    (1.0 - r) * lambda_n.abs()
}

/// Parameters of the linearised mirror, cavity field and atomic ensemble.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CavityAtomMirror {
    pub omega_m: f64,
    pub gamma_m: f64,
    /// Linearised optomechanical coupling.
    pub g: f64,
    /// Cavity amplitude decay rate.
    pub kappa: f64,
    /// Effective cavity detuning.
    pub delta_f: f64,
    /// Collective atom-field coupling.
    pub g_a: f64,
    /// Atomic coherence decay rate.
    pub gamma_a: f64,
    pub delta_a: f64,
    pub n_th: f64,
}

/// Six-quadrature model ordered `(q, p, a_x, a_y, c_x, c_y)` for
///
/// ```text
/// q̇ = Ω_M p,  ṗ = −Ω_M q − Γ_M p + √2 g a_x + ξ
/// ȧ = −(κ + iΔ_f) a − iG_a c + i g √2 q + √(2κ) a_in
/// ċ = −(γ_a + iΔ_a) c − iG_a a + √(2γ_a) c_in
/// ```
///
/// with vacuum optical and atomic inputs and momentum-only mechanical friction.
pub fn build_cavity_atom_mirror_model(p: &CavityAtomMirror) -> Result<GaussianModel> {
    if !(p.kappa > 0.0) || !(p.gamma_a > 0.0) {
        return Err(invalid("kappa", "kappa and gamma_a must be > 0"));
    }
    rate("gamma_m", p.gamma_m)?;
    rate("n_th", p.n_th)?;
    let s2 = std::f64::consts::SQRT_2;
    let mut a = DMatrix::zeros(6, 6);
    a[(0, 1)] = p.omega_m;
    a[(1, 0)] = -p.omega_m;
    a[(1, 1)] = -p.gamma_m;
    a[(1, 2)] = s2 * p.g;
    a[(2, 2)] = -p.kappa;
    a[(2, 3)] = p.delta_f;
    a[(2, 5)] = p.g_a;
    a[(3, 3)] = -p.kappa;
    a[(3, 2)] = -p.delta_f;
    a[(3, 0)] = s2 * p.g;
    a[(3, 4)] = -p.g_a;
    a[(4, 4)] = -p.gamma_a;
    a[(4, 5)] = p.delta_a;
    a[(4, 3)] = p.g_a;
    a[(5, 5)] = -p.gamma_a;
    a[(5, 4)] = -p.delta_a;
    a[(5, 2)] = -p.g_a;
    let d = DMatrix::from_diagonal(&DVector::from_vec(vec![
        0.0,
        p.gamma_m * (2.0 * p.n_th + 1.0),
        p.kappa,
        p.kappa,
        p.gamma_a,
        p.gamma_a,
    ]));
    let mut k = DMatrix::zeros(6, 6);
    k[(2, 3)] = 2.0 * p.kappa;
    k[(3, 2)] = -2.0 * p.kappa;
    k[(4, 5)] = 2.0 * p.gamma_a;
    k[(5, 4)] = -2.0 * p.gamma_a;
    GaussianModel::with_commutator(a, d, k, labels(&["q", "p", "a_x", "a_y", "c_x", "c_y"]))
}

/// Integrates `ẋ = A x` and reports every quadrature on `t_grid`.
pub fn evolve_means(model: &GaussianModel, x0: &DVector<f64>, t_grid: &[f64]) -> Result<TimeSeries> {
    if x0.len() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), found: x0.len() });
    }
    let a = model.drift();
    let mut ts = TimeSeries::new(model.labels().iter().cloned());
    let stats = Dopri5::default().solve(
        |_, y: &DVector<f64>, dy: &mut DVector<f64>| a.mul_to(y, dy),
        x0.clone(),
        t_grid,
        Hooks::default(),
        |_, t, y| {
            ts.push(t, y.as_slice());
            Ok(())
        },
    )?;
    ts.diagnostics.accepted_steps = stats.accepted;
    ts.diagnostics.rejected_steps = stats.rejected;
    Ok(ts)
}

/// Integrates `Σ̇ = AΣ + ΣAᵀ + D` and returns the covariance at each grid point.
pub fn evolve_covariance(
    model: &GaussianModel,
    sigma0: &DMatrix<f64>,
    t_grid: &[f64],
) -> Result<Vec<DMatrix<f64>>> {
    let n = model.dim();
    if sigma0.shape() != (n, n) {
        return Err(Error::DimensionMismatch { expected: n, found: sigma0.nrows() });
    }
    let a = model.drift();
    let d = model.diffusion();
    let mut out = Vec::with_capacity(t_grid.len());
    let y0 = DVector::from_column_slice(sigma0.as_slice());
    Dopri5::default().solve(
        |_, y: &DVector<f64>, dy: &mut DVector<f64>| {
            let s = DMatrix::from_column_slice(n, n, y.as_slice());
            let ds = a * &s + &s * a.transpose() + d;
            dy.copy_from_slice(ds.as_slice());
        },
        y0,
        t_grid,
        Hooks::default(),
        |_, _, y| {
            let s = DMatrix::from_column_slice(n, n, y.as_slice());
            out.push((&s + s.transpose()) * 0.5);
            Ok(())
        },
    )?;
    Ok(out)
}

/// Phonon number of each mode, `(Σ_qq + Σ_pp − 1)/2`.
pub fn phonon_numbers(sigma: &DMatrix<f64>) -> Vec<f64> {
    (0..sigma.nrows() / 2)
        .map(|k| (sigma[(2 * k, 2 * k)] + sigma[(2 * k + 1, 2 * k + 1)] - 1.0) / 2.0)
        .collect()
}

/// Block-diagonal symplectic form with `Ω_qp = +1`.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut w = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        w[(2 * k, 2 * k + 1)] = 1.0;
        w[(2 * k + 1, 2 * k)] = -1.0;
    }
    w
}

/// Smallest eigenvalue of the Hermitian matrix `Σ + (i/2)Ω`; non-negative
/// for a physical covariance matrix.
pub fn physicality_margin(sigma: &DMatrix<f64>) -> f64 {
    let w = symplectic_form(sigma.nrows() / 2);
    let m = DMatrix::from_fn(sigma.nrows(), sigma.ncols(), |i, j| C::new(sigma[(i, j)], 0.5 * w[(i, j)]));
    hermitian_eigenvalues(&m)[0]
}

/// Purity `1/(2^n √det Σ)` of the Gaussian state with covariance `Σ`.
pub fn purity(sigma: &DMatrix<f64>) -> f64 {
    let n = (sigma.nrows() / 2) as i32;
    let det = sigma.determinant();
    if det <= 0.0 {
        return f64::NAN;
    }
    1.0 / (2f64.powi(n) * det.sqrt())
}

#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceReport {
    pub covariance: DMatrix<f64>,
    /// Mean phonon number per mode.
    pub phonon_numbers: Vec<f64>,
    pub purity: f64,
    /// `‖AΣ + ΣAᵀ + D‖_F / ‖D‖_F` (absolute when `D = 0`).
    pub residual: f64,
    /// Smallest eigenvalue of `Σ + (i/2)Ω`.
    pub physicality_margin: f64,
}

/// Solves `AΣ + ΣAᵀ + D = 0` by a dense solve of the vectorised equation,
/// followed by one step of iterative refinement.
pub fn steady_state_covariance(model: &GaussianModel) -> Result<CovarianceReport> {
    let max_real = model.max_real_eigenvalue();
    if !(max_real < 0.0) {
        return Err(Error::NoSteadyState { max_real });
    }
    let n = model.dim();
    let a = model.drift();
    let d = model.diffusion();
    let eye = DMatrix::<f64>::identity(n, n);
    let big = eye.kronecker(a) + a.kronecker(&eye);
    let lu = big.clone().lu();
    let rhs = -DVector::from_column_slice(d.as_slice());
    let mut x = lu.solve(&rhs).ok_or(Error::Singular("Lyapunov operator"))?;
    let resid = &rhs - &big * &x;
    if let Some(dx) = lu.solve(&resid) {
        x += dx;
    }
    let s = DMatrix::from_column_slice(n, n, x.as_slice());
    let sigma = (&s + s.transpose()) * 0.5;
    let r = a * &sigma + &sigma * a.transpose() + d;
    let dn = d.norm();
    let residual = if dn > 0.0 { r.norm() / dn } else { r.norm() };
    Ok(CovarianceReport {
        phonon_numbers: phonon_numbers(&sigma),
        purity: purity(&sigma),
        physicality_margin: physicality_margin(&sigma),
        residual,
        covariance: sigma,
    })
}

/// Non-symmetrised spectrum `S(ω) = ∫ e^{iωt} ⟨F(t) F(0)⟩ dt` of the force on
/// the mode-0 momentum exerted by the rest of the system, with the mechanics
/// held fixed (open loop). Scaled so that `S(∓Ω_M)` are the golden-rule
/// phonon up/down transition rates per unit `(n+1)` or `n`.
pub fn langevin_force_spectrum(model: &GaussianModel, omega_grid: &[f64]) -> Result<Vec<f64>> {
    let n = model.dim();
    if n < 4 {
        return Err(invalid("model", "need at least one mode besides the mechanics"));
    }
    let m = n - 2;
    let a = model.drift();
    let sub = a.view((2, 2), (m, m)).map(|v| C::new(v, 0.0));
    let f = DVector::from_fn(m, |j, _| C::new(a[(1, j + 2)], 0.0));
    let noise = DMatrix::from_fn(m, m, |i, j| {
        C::new(model.diffusion()[(i + 2, j + 2)], 0.5 * model.commutator()[(i + 2, j + 2)])
    });
    omega_grid
        .iter()
        .map(|&w| {
            let resolvent = DMatrix::<C>::from_diagonal_element(m, m, C::new(0.0, -w)) - &sub;
            let chi = resolvent.lu().try_inverse().ok_or(Error::Singular("force-spectrum resolvent"))?;
            let u = chi.transpose() * &f;
            let s = (u.transpose() * &noise * u.conjugate())[(0, 0)];
            Ok(0.5 * s.re.max(0.0))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SidebandRates {
    /// Cooling (anti-Stokes) rate `S(+Ω_M)`.
    pub a_as: f64,
    /// Heating (Stokes) rate `S(−Ω_M)`.
    pub a_s: f64,
    /// Net optical damping `A_as − A_s`.
    pub gamma_opt: f64,
    /// `A_s / (Γ_M + Γ_opt)`.
    pub n_res: f64,
}

pub fn sideband_rates(model: &GaussianModel, omega_m: f64, gamma_m: f64) -> Result<SidebandRates> {
    let s = langevin_force_spectrum(model, &[omega_m, -omega_m])?;
    let (a_as, a_s) = (s[0], s[1]);
    let gamma_opt = a_as - a_s;
    Ok(SidebandRates { a_as, a_s, gamma_opt, n_res: residual_occupancy(a_s, gamma_m, gamma_opt) })
}

/// Atom-mediated optical damping `(g²/κ) C/(1+C)`.
pub fn optical_damping(g: f64, kappa: f64, c: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return Err(invalid("kappa", "must be > 0"));
    }
    if !(c >= 0.0) {
        return Err(invalid("cooperativity", "must be >= 0"));
    }
    if c.is_infinite() {
        return Ok(g * g / kappa);
    }
    Ok(g * g / kappa * c / (1.0 + c))
}

/// Heating rate with the Stokes sideband filtered by the atoms, `g²/[κ(1+C)]`.
pub fn filtered_stokes_rate(g: f64, kappa: f64, c: f64) -> f64 {
    g * g / (kappa * (1.0 + c))
}

/// `n_res = A_s/(Γ_M + Γ_opt)`.
pub fn residual_occupancy(a_s: f64, gamma_m: f64, gamma_opt: f64) -> f64 {
    a_s / (gamma_m + gamma_opt)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SympatheticDamping {
    pub gamma_eff: f64,
    /// `Γ_eff − Γ_M`.
    pub delta_gamma: f64,
}

/// `Γ_eff = Γ_M + 4rλ_N²/γ_cool`.
pub fn sympathetic_damping(gamma_m: f64, r: f64, lambda_n: f64, gamma_cool: f64) -> Result<SympatheticDamping> {
    if !(gamma_cool > 0.0) {
        return Err(invalid("gamma_cool", "must be > 0"));
    }
    if lambda_n.abs() > 0.1 * gamma_cool {
        warn!("lambda_N = {lambda_n:.3e} is not well inside the weak-coupling regime (gamma_cool = {gamma_cool:.3e})");
    }
    let delta_gamma = 4.0 * r * lambda_n * lambda_n / gamma_cool;
    Ok(SympatheticDamping { gamma_eff: gamma_m + delta_gamma, delta_gamma })
}

/// Energy damping rate of the eigenmode with the largest weight on mode
/// `mode`, i.e. `−2 Re μ` for the matching drift eigenvalue `μ`.
pub fn extracted_damping(model: &GaussianModel, mode: usize) -> Result<f64> {
    if mode >= model.modes() {
        return Err(invalid("mode", format!("index {mode} out of range")));
    }
    let n = model.dim();
    let a = model.drift().map(|v| C::new(v, 0.0));
    let mut best: Option<(f64, C)> = None;
    for mu in model.eigenvalues() {
        if mu.im < 0.0 {
            continue;
        }
        let shifted = &a - DMatrix::<C>::from_diagonal_element(n, n, mu);
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.ok_or(Error::Singular("eigenvector"))?;
        let k = svd.singular_values.imin();
        let v = v_t.row(k);
        let total: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let w = (v[2 * mode].norm_sqr() + v[2 * mode + 1].norm_sqr()) / total;
        if best.map_or(true, |(bw, _)| w > bw) {
            best = Some((w, mu));
        }
    }
    let (_, mu) = best.ok_or(Error::Singular("no eigenvalues"))?;
    Ok(-2.0 * mu.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn damped_oscillator(omega: f64, gamma: f64, n_th: f64) -> GaussianModel {
        let a = DMatrix::from_row_slice(2, 2, &[-gamma / 2.0, omega, -omega, -gamma / 2.0]);
        let d = DMatrix::identity(2, 2) * (gamma * (n_th + 0.5));
        GaussianModel::new(a, d, labels(&["q", "p"])).unwrap()
    }

    #[test]
    fn model_validation() {
        let a = DMatrix::zeros(3, 3);
        assert!(GaussianModel::new(a.clone(), a, labels(&["a", "b", "c"])).is_err());
        let a = DMatrix::zeros(2, 2);
        let d = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(GaussianModel::new(a.clone(), d, labels(&["q", "p"])).is_err());
        let d = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(GaussianModel::new(a, d, labels(&["q", "p"])).is_err());
    }

    #[test]
    fn thermal_fixed_point() {
        for n_th in [0.0, 0.5, 10.0] {
            let rep = steady_state_covariance(&damped_oscillator(1.0, 0.1, n_th)).unwrap();
            assert!((rep.phonon_numbers[0] - n_th).abs() < 1e-8, "{n_th}");
            assert!(rep.residual < 1e-10);
            assert!(rep.physicality_margin > -1e-8);
        }
        let rep = steady_state_covariance(&damped_oscillator(1.0, 0.1, 0.0)).unwrap();
        assert!((&rep.covariance - DMatrix::identity(2, 2) * 0.5).amax() < 1e-12);
        assert!((rep.purity - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unstable_has_no_steady_state() {
        let a = DMatrix::from_row_slice(2, 2, &[0.1, 1.0, -1.0, 0.1]);
        let m = GaussianModel::new(a, DMatrix::identity(2, 2), labels(&["q", "p"])).unwrap();
        assert!(matches!(steady_state_covariance(&m), Err(Error::NoSteadyState { .. })));
    }

    #[test]
    fn membrane_atom_structure() {
        assert!(build_membrane_atom_model(1.0, 1.0, 0.1, 1.5, 0.0, 0.0, 0.0).is_err());
        let m = build_membrane_atom_model(1.0, 1.2, 0.0, 0.3, 0.0, 0.0, 0.0).unwrap();
        let a = m.drift();
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3), (2, 0), (2, 1), (3, 0), (3, 1)] {
            assert_eq!(a[(i, j)], 0.0);
        }
        let m = build_membrane_atom_model(1.0, 1.0, 0.05, 1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(m.drift()[(1, 2)], -0.1);
        assert_eq!(m.drift()[(3, 0)], -0.1);
        let m = build_membrane_atom_model(1.0, 1.0, 0.05, 0.3, 0.0, 0.0, 0.0).unwrap();
        assert!((m.drift()[(1, 2)] + 0.03).abs() < 1e-15);
        assert_eq!(m.drift()[(3, 0)], -0.1);
    }

    #[test]
    fn normal_mode_splitting() {
        let lam = 1e-3;
        let m = build_membrane_atom_model(1.0, 1.0, lam, 1.0, 0.0, 0.0, 0.0).unwrap();
        let mut freqs: Vec<f64> = m.eigenvalues().iter().filter(|z| z.im > 0.0).map(|z| z.im).collect();
        freqs.sort_by(f64::total_cmp);
        // exact: Ω sqrt(1 ± 2λ/Ω), splitting ≈ 2λ
        assert!(((freqs[1] - freqs[0]) - 2.0 * lam).abs() < 1e-6);
    }

    #[test]
    fn means_free_oscillator() {
        let m = build_membrane_atom_model(1.0, 1.3, 0.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        let t: Vec<f64> = crate::ode::linspace(0.0, 200.0 * std::f64::consts::PI, 401);
        let x0 = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        let ts = evolve_means(&m, &x0, &t).unwrap();
        let q = ts.column("q").unwrap();
        for (ti, qi) in t.iter().zip(q) {
            assert!((qi - ti.cos()).abs() < 1e-6);
        }
        let zero = evolve_means(&m, &DVector::zeros(4), &t).unwrap();
        assert!(zero.columns.iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn means_excitation_swap_matches_matrix_exponential() {
        let lam = 0.01;
        let m = build_membrane_atom_model(1.0, 1.0, lam, 1.0, 0.0, 0.0, 0.0).unwrap();
        let tswap = std::f64::consts::PI / (2.0 * lam);
        let x0 = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
        let ts = evolve_means(&m, &x0, &[0.0, tswap]).unwrap();
        let oracle = (m.drift() * tswap).exp() * &x0;
        for (k, name) in ["q", "p", "q_at", "p_at"].iter().enumerate() {
            assert!((ts.last(name).unwrap() - oracle[k]).abs() < 1e-6);
        }
        // energy has moved to the atoms
        let e_m = oracle[0].powi(2) + oracle[1].powi(2);
        assert!(e_m < 0.01, "{e_m}");
    }

    #[test]
    fn covariance_relaxes_to_lyapunov_solution() {
        let m = build_membrane_atom_model(1.0, 1.0, 0.02, 0.6, 0.05, 0.4, 2.0).unwrap();
        let steady = steady_state_covariance(&m).unwrap();
        let t = crate::ode::linspace(0.0, 600.0, 3);
        let traj = evolve_covariance(&m, &(DMatrix::identity(4, 4) * 0.5), &t).unwrap();
        assert!((traj.last().unwrap() - &steady.covariance).amax() < 1e-6);
    }

    #[test]
    fn cavity_model_limits() {
        let base = CavityAtomMirror {
            omega_m: 1.0,
            gamma_m: 1e-3,
            g: 0.0,
            kappa: 20.0,
            delta_f: 0.0,
            g_a: 0.0,
            gamma_a: 0.02,
            delta_a: -1.0,
            n_th: 0.0,
        };
        let m = build_cavity_atom_mirror_model(&base).unwrap();
        let a = m.drift();
        for i in 0..6 {
            for j in 0..6 {
                if i / 2 != j / 2 {
                    assert_eq!(a[(i, j)], 0.0);
                }
            }
        }
        let s = langevin_force_spectrum(&m, &[-1.0, 0.0, 1.0]).unwrap();
        assert!(s.iter().all(|v| *v == 0.0));
        let p = CavityAtomMirror { g: 0.1, g_a: (10.0f64 * 20.0 * 0.02).sqrt(), ..base };
        let m = build_cavity_atom_mirror_model(&p).unwrap();
        assert!(m.is_stable());
        assert!(build_cavity_atom_mirror_model(&CavityAtomMirror { kappa: 0.0, ..p }).is_err());
    }

    #[test]
    fn bad_cavity_rates_without_atoms() {
        let p = CavityAtomMirror {
            omega_m: 1.0,
            gamma_m: 1e-4,
            g: 0.1,
            kappa: 20.0,
            delta_f: 0.0,
            g_a: 0.0,
            gamma_a: 1.0,
            delta_a: 0.0,
            n_th: 0.0,
        };
        let m = build_cavity_atom_mirror_model(&p).unwrap();
        let r = sideband_rates(&m, 1.0, p.gamma_m).unwrap();
        let oracle = p.g * p.g * p.kappa / (p.kappa * p.kappa + 1.0);
        assert!((r.a_as - oracle).abs() < 1e-12 * oracle);
        assert!((r.a_s - oracle).abs() < 1e-12 * oracle);
        assert!((r.a_s - p.g * p.g / p.kappa).abs() < 0.01 * r.a_s);
    }

    #[test]
    fn atoms_filter_the_stokes_sideband() {
        let c = 10.0;
        let kappa = 20.0;
        let gamma_a = 0.2 / (1.0 + c);
        let p = CavityAtomMirror {
            omega_m: 1.0,
            gamma_m: 1e-6,
            g: 0.2,
            kappa,
            delta_f: 0.0,
            g_a: (c * kappa * gamma_a).sqrt(),
            gamma_a,
            delta_a: -1.0,
            n_th: 0.0,
        };
        let m = build_cavity_atom_mirror_model(&p).unwrap();
        let r = sideband_rates(&m, 1.0, p.gamma_m).unwrap();
        let a_s = filtered_stokes_rate(p.g, kappa, c);
        assert!((r.a_s - a_s).abs() < 0.2 * a_s, "{} vs {}", r.a_s, a_s);
        assert!(r.a_as > 5.0 * r.a_s);
    }

    #[test]
    fn optical_damping_limits() {
        assert_eq!(optical_damping(1.0, 2.0, 0.0).unwrap(), 0.0);
        assert_eq!(optical_damping(1.0, 2.0, f64::INFINITY).unwrap(), 0.5);
        assert!((optical_damping(1.0, 2.0, 1e12).unwrap() - 0.5).abs() < 1e-12);
        let c = 100.0;
        let n = residual_occupancy(filtered_stokes_rate(1.0, 2.0, c), 0.0, optical_damping(1.0, 2.0, c).unwrap());
        assert!((n - 1.0 / c).abs() < 1e-15);
        assert!(optical_damping(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn sympathetic_formula() {
        assert!(sympathetic_damping(0.1, 1.0, 0.0, 0.0).is_err());
        let s = sympathetic_damping(0.1, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(s.gamma_eff, 0.1);
        let a = sympathetic_damping(0.0, 0.5, 0.01, 0.2).unwrap();
        let b = sympathetic_damping(0.0, 0.5, 0.02, 0.2).unwrap();
        assert!((b.delta_gamma / a.delta_gamma - 4.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalue_damping_matches_formula() {
        let gamma = 0.2;
        for r in [0.3, 1.0] {
            let lam = gamma / 20.0;
            let m = build_membrane_atom_model(1.0, 1.0, lam, r, 1e-4, gamma, 0.0).unwrap();
            let got = extracted_damping(&m, 0).unwrap();
            let want = sympathetic_damping(1e-4, r, lam, gamma).unwrap().gamma_eff;
            assert!((got - want).abs() < 0.2 * want, "r={r}: {got} vs {want}");
        }
        let m = build_membrane_atom_model(1.0, 1.3, 0.0, 1.0, 0.01, 0.2, 0.0).unwrap();
        assert!((extracted_damping(&m, 0).unwrap() - 0.01).abs() < 1e-10);
        assert!((extracted_damping(&m, 1).unwrap() - 0.2).abs() < 1e-10);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn steady_states_are_physical(
            lam in 0.0f64..0.05, r in 0.0f64..1.0, gm in 1e-3f64..0.1,
            gc in 0.05f64..1.0, n_th in 0.0f64..20.0, w_at in 0.8f64..1.2,
        ) {
            let m = build_membrane_atom_model(1.0, w_at, lam, r, gm, gc, n_th).unwrap();
            prop_assume!(m.is_stable());
            let rep = steady_state_covariance(&m).unwrap();
            prop_assert!(rep.residual <= 1e-10);
            prop_assert!(rep.physicality_margin >= -1e-8);
        }
    }
}
