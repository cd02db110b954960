//! Closed-system propagation by exact diagonalisation.

use crate::error::Result;
use crate::operator::{
    annihilation, c, embed, number, pauli, CMatrix, HilbertSpace, Operator, Pauli, QuantumState, Representation, C64,
};
use crate::series::TimeSeries;

use super::check_initial_truncation;

/// Qubit `q` (factor 0) ⊗ mode `b` (factor 1).
pub fn qubit_mode_space(dim: usize) -> Result<HilbertSpace> {
    HilbertSpace::builder().qubit("q").mode("b", dim).build()
}

pub(crate) struct QubitModeOps {
    pub sz: Operator,
    pub sx: Operator,
    pub sp: Operator,
    pub sm: Operator,
    pub b: Operator,
    pub n: Operator,
}

pub(crate) fn qubit_mode_ops(space: &HilbertSpace) -> Result<QubitModeOps> {
    let dim = space.factor(1)?.dim;
    let b = embed(&annihilation(dim)?, 1, space)?;
    Ok(QubitModeOps {
        sz: embed(&pauli(Pauli::Z), 0, space)?,
        sx: embed(&pauli(Pauli::X), 0, space)?,
        sp: embed(&pauli(Pauli::Plus), 0, space)?,
        sm: embed(&pauli(Pauli::Minus), 0, space)?,
        n: embed(&number(dim)?, 1, space)?,
        b,
    })
}

/// `Ω b†b + (Ω+δ)/2 σ_z + λ(σ₊b + σ₋b†)`.
pub fn jaynes_cummings_hamiltonian(lambda: f64, omega_m: f64, detuning: f64, dim: usize) -> Result<Operator> {
    let space = qubit_mode_space(dim)?;
    let o = qubit_mode_ops(&space)?;
    let coupling = &(&o.sp * &o.b) + &(&o.sm * &o.b.dagger());
    Ok(&(&o.n.scale_re(omega_m) + &o.sz.scale_re((omega_m + detuning) / 2.0)) + &coupling.scale_re(lambda))
}

/// `(ω_L/2)σ_z + Ω b†b + λ(b + b†)σ_x`, or its rotating-wave form.
pub fn spin_resonator_hamiltonian(lambda: f64, omega_l: f64, omega_m: f64, dim: usize, rwa: bool) -> Result<Operator> {
    if rwa {
        return jaynes_cummings_hamiltonian(lambda, omega_m, omega_l - omega_m, dim);
    }
    let space = qubit_mode_space(dim)?;
    let o = qubit_mode_ops(&space)?;
    let x = &o.b + &o.b.dagger();
    Ok(&(&o.sz.scale_re(omega_l / 2.0) + &o.n.scale_re(omega_m)) + &(&x * &o.sx).scale_re(lambda))
}

/// Propagates `state` under `h` using its eigendecomposition and records
/// `Re ⟨O⟩` for each observable.
pub(crate) fn propagate_closed(
    h: &Operator,
    state: &QuantumState,
    t_grid: &[f64],
    observables: &[(&str, &Operator)],
) -> Result<TimeSeries> {
    h.check_hermitian()?;
    h.ensure_same_space(&Operator::zeros(state.space()))?;
    let rho0 = state.density_matrix();
    check_initial_truncation(state.space(), |i| rho0[(i, i)].re)?;
    let eig = h.matrix().clone().symmetric_eigen();
    let v = eig.eigenvectors;
    let vd = v.adjoint();
    let energies = eig.eigenvalues;
    let obs_eig: Vec<CMatrix> = observables.iter().map(|(_, o)| &vd * o.matrix() * &v).collect();
    let mut ts = TimeSeries::new(observables.iter().map(|(n, _)| n.to_string()));
    match state.representation() {
        Representation::Vector(psi) => {
            let a0 = &vd * psi;
            for &t in t_grid {
                let a = a0.zip_map(&energies, |z, e| z * C64::from_polar(1.0, -e * t));
                let vals: Vec<f64> = obs_eig.iter().map(|o| a.dotc(&(o * &a)).re).collect();
                ts.diagnostics.max_trace_deviation = ts.diagnostics.max_trace_deviation.max((a.norm_squared() - 1.0).abs());
                ts.push(t, &vals);
            }
        }
        Representation::Density(rho) => {
            let r0 = &vd * rho * &v;
            let n = r0.nrows();
            for &t in t_grid {
                let r = CMatrix::from_fn(n, n, |i, j| r0[(i, j)] * C64::from_polar(1.0, -(energies[i] - energies[j]) * t));
                let vals: Vec<f64> = obs_eig.iter().map(|o| (&r * o).trace().re).collect();
                ts.diagnostics.max_trace_deviation =
                    ts.diagnostics.max_trace_deviation.max((r.trace() - c(1.0)).norm());
                ts.push(t, &vals);
            }
        }
    }
    Ok(ts)
}

fn qubit_mode_observables(space: &HilbertSpace) -> Result<Vec<(&'static str, Operator)>> {
    let o = qubit_mode_ops(space)?;
    let pe = &o.sp * &o.sm;
    let exc = &pe + &o.n;
    Ok(vec![("P_e", pe), ("n", o.n.clone()), ("excitation", exc), ("sigma_z", o.sz), ("sigma_x", o.sx)])
}

fn run_qubit_mode(h: &Operator, state: &QuantumState, t_grid: &[f64]) -> Result<TimeSeries> {
    let obs = qubit_mode_observables(h.space())?;
    let refs: Vec<(&str, &Operator)> = obs.iter().map(|(n, o)| (*n, o)).collect();
    let mut ts = propagate_closed(h, state, t_grid, &refs)?;
    top_level_diagnostic(h.space(), state, h, t_grid, &mut ts)?;
    Ok(ts)
}

fn top_level_diagnostic(
    space: &HilbertSpace,
    state: &QuantumState,
    h: &Operator,
    t_grid: &[f64],
    ts: &mut TimeSeries,
) -> Result<()> {
    let dim = space.factor(1)?.dim;
    let mut proj = CMatrix::zeros(dim, dim);
    for k in dim.saturating_sub(2)..dim {
        proj[(k, k)] = c(1.0);
    }
    let top = embed(&Operator::new(HilbertSpace::mode(dim)?, proj)?, 1, space)?;
    let t = propagate_closed(h, state, t_grid, &[("top", &top)])?;
    let worst = t.columns[0].iter().copied().fold(0.0, f64::max);
    ts.diagnostics.max_top_fock_population = worst;
    if worst > super::TRUNCATION_WARN {
        log::warn!("top-two Fock population reaches {worst:.3e}; consider a larger truncation");
    }
    Ok(())
}

/// Resonant or detuned Jaynes-Cummings dynamics of qubit ⊗ mode.
///
/// Columns: `P_e`, `n`, `excitation`, `sigma_z`, `sigma_x`.
pub fn simulate_jaynes_cummings(
    lambda: f64,
    omega_m: f64,
    detuning: f64,
    dim: usize,
    psi0: &QuantumState,
    t_grid: &[f64],
) -> Result<TimeSeries> {
    let h = jaynes_cummings_hamiltonian(lambda, omega_m, detuning, dim)?;
    run_qubit_mode(&h, psi0, t_grid)
}

/// Spin coupled to a resonator through `σ_x (b + b†)`, with or without the
/// rotating-wave approximation. Same columns as [`simulate_jaynes_cummings`].
pub fn simulate_spin_resonator_full(
    lambda_mag: f64,
    omega_l: f64,
    omega_m: f64,
    dim: usize,
    psi0: &QuantumState,
    t_grid: &[f64],
    use_rwa: bool,
) -> Result<TimeSeries> {
    let h = spin_resonator_hamiltonian(lambda_mag, omega_l, omega_m, dim, use_rwa)?;
    run_qubit_mode(&h, psi0, t_grid)
}

/// Dispersive qubit-resonator dynamics under
/// `(E_J/2ħ)σ_z + Ω b†b + χ(b†b + ½)σ_z`, which is diagonal in the product basis.
///
/// Columns: `p0..p{dim-1}` (phonon distribution), `ramsey_x`, `ramsey_y`
/// (qubit coherence `2ρ_ge` in the frame rotating at `E_J/ħ`), `ramsey_phase`
/// (its unwrapped argument) and `lab_phase` (unwrapped argument without the
/// frame change).
pub fn simulate_dispersive_qnd(
    chi: f64,
    e_j: f64,
    omega_m: f64,
    dim: usize,
    rho0: &QuantumState,
    t_grid: &[f64],
) -> Result<TimeSeries> {
    let space = qubit_mode_space(dim)?;
    if rho0.space() != &space {
        return Err(crate::error::Error::SpaceMismatch {
            left: space.to_string(),
            right: rho0.space().to_string(),
        });
    }
    let rho = rho0.density_matrix();
    check_initial_truncation(&space, |i| rho[(i, i)].re)?;
    let w_q = e_j / crate::constants::HBAR;
    // basis index = qubit * dim + n, qubit 0 = g
    let energy = |idx: usize| {
        let s = if idx / dim == 1 { 1.0 } else { -1.0 };
        let n = (idx % dim) as f64;
        s * w_q / 2.0 + omega_m * n + chi * (n + 0.5) * s
    };
    let mut names: Vec<String> = (0..dim).map(|n| format!("p{n}")).collect();
    names.extend(["ramsey_x", "ramsey_y", "ramsey_phase", "lab_phase"].map(String::from));
    let mut ts = TimeSeries::new(names);
    let (mut prev_rot, mut prev_lab) = (None::<f64>, None::<f64>);
    let (mut acc_rot, mut acc_lab) = (0.0, 0.0);
    let unwrap = |prev: &mut Option<f64>, acc: &mut f64, raw: f64| {
        if let Some(p) = *prev {
            let mut d = raw - p;
            while d > std::f64::consts::PI {
                d -= std::f64::consts::TAU;
            }
            while d < -std::f64::consts::PI {
                d += std::f64::consts::TAU;
            }
            *acc += d;
        } else {
            *acc = raw;
        }
        *prev = Some(raw);
        *acc
    };
    for &t in t_grid {
        let mut row = vec![0.0; dim + 4];
        let mut lab = c(0.0);
        for n in 0..dim {
            let g = n;
            let e = dim + n;
            row[n] = rho[(g, g)].re + rho[(e, e)].re;
            let phase = -(energy(g) - energy(e)) * t;
            lab += rho[(g, e)] * C64::from_polar(2.0, phase);
        }
        let rot = lab * C64::from_polar(1.0, -w_q * t);
        row[dim] = rot.re;
        row[dim + 1] = rot.im;
        row[dim + 2] = unwrap(&mut prev_rot, &mut acc_rot, rot.arg());
        row[dim + 3] = unwrap(&mut prev_lab, &mut acc_lab, lab.arg());
        ts.push(t, &row);
    }
    Ok(ts)
}
