//! Lindblad master-equation integration with optional cascaded (one-way)
//! coupling terms, plus exact state-vector propagation for closed models.

mod pure;
mod superop;
mod sympathetic;

use log::warn;
use nalgebra::DVector;

pub(crate) use pure::{qubit_mode_ops, QubitModeOps};
pub use pure::{
    jaynes_cummings_hamiltonian, qubit_mode_space, simulate_dispersive_qnd, simulate_jaynes_cummings,
    simulate_spin_resonator_full, spin_resonator_hamiltonian,
};
pub use superop::{SuperopBuilder, Superoperator};
pub use sympathetic::{membrane_atom_lindblad, membrane_atom_observables, simulate_sympathetic_cooling, SympatheticRun};

use crate::error::{invalid, Error, Result};
use crate::ode::{Dopri5, Hooks};
use crate::operator::{
    hermitian_eigenvalues, top_fock_population, CMatrix, CVector, HilbertSpace, Operator,
    QuantumState, C64,
};
use crate::series::TimeSeries;

/// One-way coupling term `−i(1−r)λ([s, t ρ] − [ρ t, s])`.
#[derive(Clone, Debug, PartialEq)]
pub struct CascadedTerm {
    pub source: Operator,
    pub target: Operator,
    pub strength: f64,
    /// Reflectivity; `r = 1` switches the term off.
    pub r: f64,
}

/// `ρ̇ = −i[H, ρ] + Σ γ_k D[L_k]ρ + Σ C_j ρ`, with `H` in rad/s.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladModel {
    space: HilbertSpace,
    hamiltonian: Operator,
    collapse: Vec<(Operator, f64)>,
    cascaded: Vec<CascadedTerm>,
}

impl LindbladModel {
    pub fn new(hamiltonian: Operator) -> Result<Self> {
        hamiltonian.check_hermitian()?;
        Ok(Self {
            space: hamiltonian.space().clone(),
            hamiltonian,
            collapse: Vec::new(),
            cascaded: Vec::new(),
        })
    }

    /// Adds `rate · D[op]`.
    pub fn with_collapse(mut self, op: Operator, rate: f64) -> Result<Self> {
        self.hamiltonian.ensure_same_space(&op)?;
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(invalid("rate", format!("collapse rates must be finite and >= 0, got {rate}")));
        }
        self.collapse.push((op, rate));
        Ok(self)
    }

    pub fn with_cascaded(mut self, term: CascadedTerm) -> Result<Self> {
        self.hamiltonian.ensure_same_space(&term.source)?;
        self.hamiltonian.ensure_same_space(&term.target)?;
        if !(0.0..=1.0).contains(&term.r) {
            return Err(invalid("r", format!("reflectivity must lie in [0, 1], got {}", term.r)));
        }
        self.cascaded.push(term);
        Ok(self)
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn collapse_ops(&self) -> &[(Operator, f64)] {
        &self.collapse
    }

    pub fn cascaded_terms(&self) -> &[CascadedTerm] {
        &self.cascaded
    }

    pub fn liouvillian(&self) -> Superoperator {
        let mut b = SuperopBuilder::new(self.space.total_dim());
        b.hamiltonian(self.hamiltonian.matrix());
        for (l, rate) in &self.collapse {
            b.dissipator(l.matrix(), *rate);
        }
        for c in &self.cascaded {
            b.cascaded(c.source.matrix(), c.target.matrix(), (1.0 - c.r) * c.strength);
        }
        b.build()
    }
}

/// The map `ρ ↦ −i(1−r)λ_N([s, t ρ] − [ρ t, s])` with `s = source`, `t = target`.
pub fn cascaded_superoperator(source: &Operator, target: &Operator, lambda_n: f64, r: f64) -> Result<Superoperator> {
    source.ensure_same_space(target)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(invalid("r", format!("reflectivity must lie in [0, 1], got {r}")));
    }
    let mut b = SuperopBuilder::new(source.dim());
    b.cascaded(source.matrix(), target.matrix(), (1.0 - r) * lambda_n);
    Ok(b.build())
}

/// Population above which a run warns about Fock truncation.
pub const TRUNCATION_WARN: f64 = 1e-6;
/// Largest top-two-level population accepted in an initial state.
pub const TRUNCATION_INITIAL: f64 = 1e-8;
const TRACE_STEP_TOL: f64 = 1e-10;

pub(crate) fn check_initial_truncation(space: &HilbertSpace, pop: impl Fn(usize) -> f64) -> Result<()> {
    if let Some((k, p)) = top_fock_population(space, pop) {
        if p >= TRUNCATION_INITIAL {
            let f = &space.factors()[k];
            return Err(Error::Truncation {
                factor: f.label.clone(),
                population: p,
                suggested_dim: 2 * f.dim,
            });
        }
    }
    Ok(())
}

fn trace_of(x: &CVector, n: usize) -> C64 {
    (0..n).map(|i| x[i + i * n]).sum()
}

fn symmetrise(x: &mut CVector, n: usize) {
    for j in 0..n {
        for i in 0..=j {
            let a = x[i + j * n];
            let b = x[j + i * n];
            let avg = (a + b.conj()) * 0.5;
            x[i + j * n] = avg;
            x[j + i * n] = avg.conj();
        }
    }
}

/// Full result of a master-equation run.
#[derive(Clone, Debug, PartialEq)]
pub struct MasterRun {
    pub series: TimeSeries,
    pub final_rho: CMatrix,
}

/// Integrates the master equation from `rho0`, recording `Re tr(ρ O)` for
/// each named observable at every grid point.
pub fn evolve_master(
    model: &LindbladModel,
    rho0: &QuantumState,
    t_grid: &[f64],
    observables: &[(&str, &Operator)],
) -> Result<TimeSeries> {
    Ok(evolve_master_run(model, rho0, t_grid, observables)?.series)
}

pub fn evolve_master_run(
    model: &LindbladModel,
    rho0: &QuantumState,
    t_grid: &[f64],
    observables: &[(&str, &Operator)],
) -> Result<MasterRun> {
    if rho0.space() != model.space() {
        return Err(Error::SpaceMismatch {
            left: model.space().to_string(),
            right: rho0.space().to_string(),
        });
    }
    for (_, o) in observables {
        model.hamiltonian.ensure_same_space(o)?;
    }
    let rho = rho0.density_matrix();
    let space = model.space().clone();
    let n = space.total_dim();
    check_initial_truncation(&space, |i| rho[(i, i)].re)?;

    let l = model.liouvillian();
    let mut ts = TimeSeries::new(observables.iter().map(|(name, _)| name.to_string()));
    let mut warned = false;
    let mut final_rho = rho.clone();
    let accept = |prev: &CVector, next: &CVector| (trace_of(next, n) - trace_of(prev, n)).norm() <= TRACE_STEP_TOL;
    let post = |x: &mut CVector| symmetrise(x, n);
    let hooks = Hooks {
        accept: Some(&accept),
        post_step: Some(&post),
    };
    let y0 = DVector::from_column_slice(rho.as_slice());
    let stats = Dopri5::default().solve(
        |_, x: &CVector, dx: &mut CVector| l.apply(x, dx),
        y0,
        t_grid,
        hooks,
        |idx, t, x| {
            let r = CMatrix::from_column_slice(n, n, x.as_slice());
            let dev = (r.trace() - C64::new(1.0, 0.0)).norm();
            ts.diagnostics.max_trace_deviation = ts.diagnostics.max_trace_deviation.max(dev);
            if let Some((k, p)) = top_fock_population(&space, |i| r[(i, i)].re) {
                ts.diagnostics.max_top_fock_population = ts.diagnostics.max_top_fock_population.max(p);
                if p > TRUNCATION_WARN && !warned {
                    warned = true;
                    warn!(
                        "top-two Fock population {p:.3e} on factor `{}` at t = {t:.4e}; consider a larger truncation",
                        space.factors()[k].label
                    );
                }
            }
            let values: Vec<f64> = observables.iter().map(|(_, o)| (&r * o.matrix()).trace().re).collect();
            ts.push(t, &values);
            if idx + 1 == t_grid.len() {
                final_rho = r;
            }
            Ok(())
        },
    )?;
    ts.diagnostics.accepted_steps = stats.accepted;
    ts.diagnostics.rejected_steps = stats.rejected;
    ts.diagnostics.min_final_eigenvalue = Some(hermitian_eigenvalues(&final_rho)[0]);
    Ok(MasterRun { series: ts, final_rho })
}
