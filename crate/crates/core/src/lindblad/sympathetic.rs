//! Full quantum model of the membrane–atom system and sympathetic-cooling
//! rate extraction.

use log::warn;

use crate::error::Result;
use crate::fit::{exponential_decay, DecayFit};
use crate::gaussian::{steady_state_covariance, sympathetic_damping, MembraneAtomParams};
use crate::operator::{annihilation, embed, ket_fock, momentum, number, position, HilbertSpace, Operator, QuantumState};
use crate::series::TimeSeries;

use super::{evolve_master, CascadedTerm, LindbladModel, TRUNCATION_WARN};

/// Lindblad form of the membrane (factor 0) and atomic centre-of-mass mode
/// (factor 1).
///
/// The coupling enters with strength `−λ_N` in both the `−2λ q_at q`
/// Hamiltonian and the cascaded term, which makes the mean values follow
/// [`MembraneAtomParams::gaussian`] term by term. Damping uses `D[b]`,
/// `D[b†]` for the membrane bath and `D[c]` for laser cooling.
pub fn membrane_atom_lindblad(p: &MembraneAtomParams, dims: (usize, usize)) -> Result<LindbladModel> {
    p.validate()?;
    let space = HilbertSpace::builder().mode("membrane", dims.0).mode("atoms", dims.1).build()?;
    let b = embed(&annihilation(dims.0)?, 0, &space)?;
    let a = embed(&annihilation(dims.1)?, 1, &space)?;
    let q = embed(&position(dims.0)?, 0, &space)?;
    let qa = embed(&position(dims.1)?, 1, &space)?;
    let nb = embed(&number(dims.0)?, 0, &space)?;
    let na = embed(&number(dims.1)?, 1, &space)?;
    let lam = -p.lambda_n;
    let h = &(&nb.scale_re(p.omega_m) + &na.scale_re(p.omega_at)) + &(&qa * &q).scale_re(-2.0 * lam);
    let kc = p.extra_diffusion();
    LindbladModel::new(h)?
        .with_collapse(b.clone(), p.gamma_m * (p.n_th + 1.0))?
        .with_collapse(b.dagger(), p.gamma_m * p.n_th)?
        .with_collapse(a, p.gamma_cool)?
        .with_collapse(q.clone(), kc)?
        .with_collapse(qa.clone(), kc)?
        .with_cascaded(CascadedTerm {
            source: q,
            target: qa,
            strength: lam,
            r: p.r,
        })
}

/// Quadrature and number observables of the two-mode model:
/// `q, p, q_at, p_at, n_m, n_at`.
pub fn membrane_atom_observables(space: &HilbertSpace) -> Result<Vec<(&'static str, Operator)>> {
    let d0 = space.factor(0)?.dim;
    let d1 = space.factor(1)?.dim;
    Ok(vec![
        ("q", embed(&position(d0)?, 0, space)?),
        ("p", embed(&momentum(d0)?, 0, space)?),
        ("q_at", embed(&position(d1)?, 1, space)?),
        ("p_at", embed(&momentum(d1)?, 1, space)?),
        ("n_m", embed(&number(d0)?, 0, space)?),
        ("n_at", embed(&number(d1)?, 1, space)?),
    ])
}

#[derive(Clone, Debug, PartialEq)]
pub struct SympatheticRun {
    pub series: TimeSeries,
    /// Truncation actually used (after any automatic retry).
    pub dims: (usize, usize),
    /// `Γ_M + 4rλ_N²/γ_cool`.
    pub gamma_eff_formula: f64,
    /// Steady-state membrane occupation from the matching Gaussian model.
    pub n_inf: f64,
    /// Exponential fit of `n_m(t) − n_∞`, or the reason it failed.
    pub fit: std::result::Result<DecayFit, String>,
}

impl SympatheticRun {
    pub fn fitted_rate(&self) -> Option<f64> {
        self.fit.as_ref().ok().map(|f| f.rate)
    }
}

/// Starts the membrane in Fock state `initial_fock` with the atoms in their
/// ground state, integrates the master equation and fits the membrane
/// occupation decay. Doubles the truncation once if the top Fock levels
/// become populated.
pub fn simulate_sympathetic_cooling(
    p: &MembraneAtomParams,
    initial_fock: usize,
    dims: (usize, usize),
    t_grid: &[f64],
) -> Result<SympatheticRun> {
    let formula = if p.gamma_cool > 0.0 {
        sympathetic_damping(p.gamma_m, p.r, p.lambda_n, p.gamma_cool)?.gamma_eff
    } else {
        p.gamma_m
    };
    let n_inf = match p.gaussian().and_then(|g| steady_state_covariance(&g)) {
        Ok(rep) => rep.phonon_numbers[0],
        Err(_) => f64::NAN,
    };
    let mut dims = dims;
    let mut retried = false;
    loop {
        let model = membrane_atom_lindblad(p, dims)?;
        let space = model.space().clone();
        let rho0 = QuantumState::product(space.clone(), &[ket_fock(dims.0, initial_fock)?, ket_fock(dims.1, 0)?])?;
        let obs = membrane_atom_observables(&space)?;
        let refs: Vec<(&str, &Operator)> = obs.iter().map(|(n, o)| (*n, o)).collect();
        let series = evolve_master(&model, &rho0, t_grid, &refs)?;
        if series.diagnostics.max_top_fock_population > TRUNCATION_WARN && !retried {
            retried = true;
            dims = (2 * dims.0, 2 * dims.1);
            warn!("retrying sympathetic-cooling run with dims {dims:?}");
            continue;
        }
        let fit = fit_decay(&series, n_inf, p);
        return Ok(SympatheticRun { series, dims, gamma_eff_formula: formula, n_inf, fit });
    }
}

fn fit_decay(series: &TimeSeries, n_inf: f64, p: &MembraneAtomParams) -> std::result::Result<DecayFit, String> {
    if !n_inf.is_finite() {
        return Err("no steady state to decay towards".into());
    }
    let n = series.column("n_m").ok_or("missing n_m column")?;
    let t_end = series.t.last().copied().unwrap_or(0.0);
    // discard the transient while the atoms settle into their cooled state
    let skip = (5.0 / p.gamma_cool).min(0.25 * t_end);
    let fit = exponential_decay(&series.t, n, n_inf, skip).map_err(|e| e.to_string())?;
    if fit.r_squared < 0.99 || fit.rate <= 0.0 {
        return Err(format!("decay is not exponential (R² = {:.4}, rate = {:.3e})", fit.r_squared, fit.rate));
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::evolve_means;
    use crate::ode::linspace;
    use crate::operator::c;
    use nalgebra::DVector;

    fn params(r: f64) -> MembraneAtomParams {
        MembraneAtomParams {
            omega_m: 1.0,
            omega_at: 1.0,
            lambda_n: 0.01,
            r,
            gamma_m: 1e-3,
            gamma_cool: 0.2,
            n_th: 0.0,
            cascade_noise: true,
        }
    }

    #[test]
    fn means_follow_gaussian_drift() {
        let p = MembraneAtomParams { lambda_n: 3e-4, gamma_m: 0.05, ..params(0.3) };
        let model = membrane_atom_lindblad(&p, (4, 4)).unwrap();
        let space = model.space().clone();
        let psi_m = (ket_fock(4, 0).unwrap() + ket_fock(4, 1).unwrap()) / c(2f64.sqrt());
        let rho0 = QuantumState::product(space.clone(), &[psi_m, ket_fock(4, 0).unwrap()]).unwrap();
        let obs = membrane_atom_observables(&space).unwrap();
        let refs: Vec<(&str, &Operator)> = obs.iter().map(|(n, o)| (*n, o)).collect();
        let t = linspace(0.0, 4.0 * std::f64::consts::TAU, 41);
        let ts = evolve_master(&model, &rho0, &t, &refs).unwrap();
        let x0 = DVector::from_vec(vec![ts.column("q").unwrap()[0], ts.column("p").unwrap()[0], 0.0, 0.0]);
        let g = evolve_means(&p.gaussian().unwrap(), &x0, &t).unwrap();
        for name in ["q", "p", "q_at", "p_at"] {
            let a = ts.column(name).unwrap();
            let b = g.column(name).unwrap();
            let err = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            assert!(err < 1e-6, "{name}: {err}");
        }
    }

    #[test]
    fn no_damping_means_no_decay() {
        let p = MembraneAtomParams { gamma_m: 0.0, gamma_cool: 0.0, r: 1.0, ..params(1.0) };
        let t = linspace(0.0, 200.0, 101);
        let run = simulate_sympathetic_cooling(&p, 1, (4, 4), &t).unwrap();
        assert!(run.fit.is_err());
        let tot: Vec<f64> = run
            .series
            .column("n_m")
            .unwrap()
            .iter()
            .zip(run.series.column("n_at").unwrap())
            .map(|(a, b)| a + b)
            .collect();
        // energy is only exchanged, up to small counter-rotating corrections
        assert!(tot.iter().all(|e| (e - 1.0).abs() < 0.05));
        assert!(run.series.column("n_at").unwrap().iter().copied().fold(0.0, f64::max) > 0.9);
    }
}
