//! Named platform parameter sets, the quantities derived from them and the
//! dynamical models they build.
//!
//! Every frequency and rate is angular (rad/s); everything else is SI.
//! Derived quantities are always produced by the calculators in
//! [`crate::couplings`] and [`crate::gaussian`]; a scenario never carries its
//! own formula.

mod cpb;
mod qubit;
mod table;

use serde::Serialize;

use crate::constants::{hz_to_angular, C_LIGHT, E_CHARGE, H, HBAR, MU_B, MU_P, M_BE9, M_CS133, M_RB87, TWO_PI};
use crate::couplings::{
    collective_coupling, cooperativity, dispersive_shift, epsilon_coulomb, figure_of_merit, lambda_cavity_mediated,
    lambda_collective, lambda_deformation, lambda_direct, lambda_electrostatic, lambda_lorentz, lambda_magnetic,
    mrfm_force, thermal_rate, CavityMediatedParams, ChargeQubitParams, DeformationParams, DirectCouplingParams,
    FluxQubitParams, MechanicalMode, SpinParams,
};
use crate::error::{invalid, Error, Result};
use crate::gaussian::{
    build_cavity_atom_mirror_model, extracted_damping, filtered_stokes_rate, optical_damping, residual_occupancy,
    steady_state_covariance, sympathetic_damping, CavityAtomMirror, GaussianModel, MembraneAtomParams,
};
use crate::lindblad::{membrane_atom_lindblad, LindbladModel};

pub use cpb::{cpb_hamiltonian, cpb_hamiltonian_at};
pub use qubit::{driven_hamiltonian, qubit_resonator_model, DrivenHamiltonian, QubitSpec};
pub use table::{estimate_table, estimate_table_from, EstimateRow, DEFAULT_SPANS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Platform {
    CpbResonator,
    FluxResonator,
    SpinResonator,
    QuantumDot,
    IonDirect,
    BecCantilever,
    LatticeMembrane,
    CavityAtomMirror,
    CavitySingleAtomMembrane,
}

impl Platform {
    pub const ALL: [Platform; 9] = [
        Platform::CpbResonator,
        Platform::FluxResonator,
        Platform::SpinResonator,
        Platform::QuantumDot,
        Platform::IonDirect,
        Platform::BecCantilever,
        Platform::LatticeMembrane,
        Platform::CavityAtomMirror,
        Platform::CavitySingleAtomMembrane,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Platform::CpbResonator => "cpb_resonator",
            Platform::FluxResonator => "flux_resonator",
            Platform::SpinResonator => "spin_resonator",
            Platform::QuantumDot => "quantum_dot",
            Platform::IonDirect => "ion_direct",
            Platform::BecCantilever => "bec_cantilever",
            Platform::LatticeMembrane => "lattice_membrane",
            Platform::CavityAtomMirror => "cavity_atom_mirror",
            Platform::CavitySingleAtomMembrane => "cavity_single_atom_membrane",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Platforms that describe a two-level system coupled to one mode.
    pub fn is_qubit(self) -> bool {
        matches!(
            self,
            Platform::CpbResonator | Platform::FluxResonator | Platform::SpinResonator | Platform::QuantumDot
        )
    }
}

/// A named number with its unit and where it came from.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Quantity {
    pub name: &'static str,
    pub value: f64,
    pub unit: &'static str,
    pub note: &'static str,
}

impl Quantity {
    fn new(name: &'static str, value: f64, unit: &'static str, note: &'static str) -> Self {
        Self { name, value, unit, note }
    }

    /// `value / 2π` for angular frequencies, `None` otherwise.
    pub fn hz(&self) -> Option<f64> {
        (self.unit == RAD_S).then(|| self.value / TWO_PI)
    }
}

const RAD_S: &str = "rad/s";
const QUOTED: &str = "quoted";
const ASSUMED: &str = "assumed representative value";
const DERIVED: &str = "derived";
const CONST: &str = "physical constant";

/// A platform with its parameters and the quantities derived from them.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    name: String,
    platform: Platform,
    params: Vec<Quantity>,
    derived: Vec<Quantity>,
}

/// Names accepted by [`builtin`].
pub fn builtin_names() -> Vec<&'static str> {
    Platform::ALL.iter().map(|p| p.name()).collect()
}

/// Looks up a prebuilt scenario by name.
pub fn builtin(name: &str) -> Result<Scenario> {
    let platform = Platform::from_name(name).ok_or_else(|| Error::UnknownScenario {
        name: name.to_string(),
        valid: builtin_names().into_iter().map(String::from).collect(),
    })?;
    let params = match platform {
        Platform::CpbResonator => cpb_params(),
        Platform::FluxResonator => flux_params(),
        Platform::SpinResonator => spin_params(),
        Platform::QuantumDot => dot_params(),
        Platform::IonDirect => ion_params(),
        Platform::BecCantilever => bec_params(),
        Platform::LatticeMembrane => lattice_params(),
        Platform::CavityAtomMirror => mirror_params(),
        Platform::CavitySingleAtomMembrane => single_atom_params()?,
    };
    Scenario::new(name, platform, params)
}

fn q(name: &'static str, value: f64, unit: &'static str, note: &'static str) -> Quantity {
    Quantity::new(name, value, unit, note)
}

/// Nanoscale beam shared by the solid-state examples.
fn nanobeam(omega_m_hz: f64, note: &'static str) -> Vec<Quantity> {
    vec![
        q("m_eff", 1e-17, "kg", ASSUMED),
        q("omega_m", hz_to_angular(omega_m_hz), RAD_S, note),
        q("quality_q", 1e5, "1", ASSUMED),
        q("temperature", 0.02, "K", "assumed dilution-refrigerator temperature"),
    ]
}

fn cpb_params() -> Vec<Quantity> {
    let mut p = nanobeam(100e6, "quoted upper end of the 10-100 MHz beam range");
    p.extend([
        q("gate_voltage", 2.0, "V", ASSUMED),
        q("c_gate", 0.031e-15, "F", "assumed, C_g/C_sigma = 0.02"),
        q("c_total", 1.55e-15, "F", "chosen so that 4e^2/2C_sigma is about h x 50 GHz"),
        q("gap", 100e-9, "m", QUOTED),
        q("e_c", H * 50e9, "J", "quoted E_C/h = 50 GHz"),
        q("e_j", H * 5e9, "J", "quoted E_J/h = 5 GHz"),
        q("delta_ng", 0.0, "1", "charge degeneracy point"),
        q("t2", 1e-6, "s", "quoted optimised charge-qubit dephasing time"),
    ]);
    p
}

fn flux_params() -> Vec<Quantity> {
    let mut p = nanobeam(100e6, ASSUMED);
    p.extend([
        q("b_field", 10e-3, "T", "quoted critical-field limit"),
        q("current", 100e-9, "A", QUOTED),
        q("length", 5e-6, "m", QUOTED),
        q("flux_bias", 0.0, RAD_S, "degeneracy point"),
        q("tunnel_gap", hz_to_angular(5e9), RAD_S, ASSUMED),
        q("t2", 1e-6, "s", ASSUMED),
    ]);
    p
}

fn spin_params() -> Vec<Quantity> {
    let mut p = nanobeam(10e6, ASSUMED);
    p.extend([
        q("gradient", 1e7, "T/m", "quoted nanoscale gradient"),
        q("g_factor", 2.0, "1", "free electron, g ~ 2"),
        q("omega_l", hz_to_angular(10e6), RAD_S, "tuned to resonance with the beam"),
        q("t2", 1e-3, "s", "quoted NV coherence, a few ms"),
        q("nv_lambda_quoted", hz_to_angular(70.0), RAD_S, "quoted NV-nanowire coupling, stored rather than derived"),
        q("nv_gradient_quoted", 7e3, "T/m", "quoted NV-nanowire gradient"),
    ]);
    p
}

fn dot_params() -> Vec<Quantity> {
    let mut p = nanobeam(100e6, ASSUMED);
    p.extend([
        q("d_e", 8.0 * E_CHARGE, "J", "assumed excited-state deformation potential"),
        q("d_g", 0.0, "J", "assumed ground-state deformation potential"),
        q("z_0", 25e-9, "m", ASSUMED),
        q("length", 1e-6, "m", ASSUMED),
        q("omega_q", hz_to_angular(335e12), RAD_S, "assumed near-infrared exciton line"),
        q("t2", 1e-9, "s", "assumed radiative-limited, same order as the coupling"),
    ]);
    p
}

fn ion_params() -> Vec<Quantity> {
    let w = hz_to_angular(70e6);
    vec![
        q("m_eff", 1e-15, "kg", QUOTED),
        q("omega_m", w, RAD_S, "resonant with the trap"),
        q("quality_q", 1e5, "1", ASSUMED),
        q("temperature", 4.0, "K", ASSUMED),
        q("m_at", M_BE9, "kg", "9Be+ ion"),
        q("omega_at", w, RAD_S, QUOTED),
        q("epsilon", 1.0, "1", QUOTED),
        q("n_atoms", 1.0, "1", "single ion"),
        q("distance", 10e-6, "m", QUOTED),
        q("c_tip", 1e-17, "F", QUOTED),
        q("v_tip", 90.0, "V", QUOTED),
        q("t2", 1.0, "s", "assumed hyperfine coherence"),
    ]
}

fn bec_params() -> Vec<Quantity> {
    let w = hz_to_angular(10e3);
    vec![
        q("m_eff", 5e-12, "kg", QUOTED),
        q("omega_m", w, RAD_S, QUOTED),
        q("quality_q", 3200.0, "1", QUOTED),
        q("temperature", 300.0, "K", "assumed room-temperature cantilever"),
        q("m_at", M_RB87, "kg", "87Rb"),
        q("omega_at", w, RAD_S, "resonant with the cantilever"),
        q("epsilon", 1.0, "1", "not quoted; default 1 makes every coupling an upper bound"),
        q("n_atoms", 2e3, "1", QUOTED),
        q("t2", 1.0, "s", "assumed hyperfine coherence"),
    ]
}

fn lattice_params() -> Vec<Quantity> {
    let w = hz_to_angular(1e6);
    vec![
        q("m_eff", M_RB87 / 1e-14, "kg", "quoted mass ratio m_at/m_eff = 1e-14"),
        q("omega_m", w, RAD_S, "quoted trap frequency around 1 MHz"),
        q("quality_q", 1e6, "1", ASSUMED),
        q("temperature", 1.0, "K", ASSUMED),
        q("m_at", M_RB87, "kg", "87Rb"),
        q("omega_at", w, RAD_S, "resonant with the membrane"),
        q("epsilon", 1.0, "1", "the lattice itself is the trap"),
        q("n_atoms", 1e8, "1", QUOTED),
        q("r", 0.3, "1", "assumed membrane power reflectivity"),
        q("gamma_cool", hz_to_angular(10e3), RAD_S, "assumed, weak-coupling regime"),
        q("t2", 1.0, "s", "assumed hyperfine coherence"),
    ]
}

fn mirror_params() -> Vec<Quantity> {
    let w = hz_to_angular(1e6);
    vec![
        q("m_eff", 1e-12, "kg", ASSUMED),
        q("omega_m", w, RAD_S, ASSUMED),
        q("quality_q", 1e6, "1", ASSUMED),
        q("temperature", 0.0, "K", "zero-temperature bath"),
        q("g_om", 0.1 * w, RAD_S, "assumed linearised optomechanical coupling"),
        q("kappa", 20.0 * w, RAD_S, "bad cavity, kappa = 20 Omega_M"),
        q("delta_f", 0.0, RAD_S, "resonant drive"),
        q("g_a", hz_to_angular(2e3), RAD_S, ASSUMED),
        q("n_atoms", 1.25e6, "1", ASSUMED),
        q("gamma_a", hz_to_angular(2.5e3), RAD_S, "assumed; C = 100 and a dip 0.25 Omega_M wide"),
        q("delta_a", -w, RAD_S, "atoms on the Stokes sideband"),
    ]
}

fn single_atom_params() -> Result<Vec<Quantity>> {
    let w = hz_to_angular(1.3e6);
    let finesse = 2e5;
    let length = 50e-6;
    let detuning = hz_to_angular(20e6);
    let kappa = cavity_linewidth(finesse, length);
    let g = calibrate_field_coupling(hz_to_angular(45e3), detuning, kappa, w)?;
    Ok(vec![
        q("m_eff", 0.4e-12, "kg", QUOTED),
        q("omega_m", w, RAD_S, QUOTED),
        q("quality_q", 1e7, "1", QUOTED),
        q("temperature", 2.0, "K", "assumed; puts Gamma_th near 0.1 lambda"),
        q("m_at", M_CS133, "kg", "133Cs"),
        q("omega_at", w, RAD_S, "resonant with the membrane"),
        q("finesse", finesse, "1", QUOTED),
        q("cavity_length", length, "m", QUOTED),
        q("waist", 10e-6, "m", "quoted; enters only through the quoted cooperativity"),
        q("power", 850e-6, "W", "quoted circulating power; enters only through g_field"),
        q("cooperativity_quoted", 140.0, "1", QUOTED),
        q("detuning", detuning, RAD_S, ASSUMED),
        q("g_field", g, RAD_S, "calibrated so the cavity-mediated coupling is 2pi x 45 kHz"),
        q("t2", 1.0, "s", "assumed hyperfine coherence"),
    ])
}

/// Cavity amplitude decay rate `π c / (2 L F)`.
pub fn cavity_linewidth(finesse: f64, length: f64) -> f64 {
    std::f64::consts::PI * C_LIGHT / (2.0 * length * finesse)
}

/// Equal atom and membrane field couplings that make the cavity-mediated
/// coupling equal to `target`.
pub fn calibrate_field_coupling(target: f64, detuning: f64, kappa: f64, omega_m: f64) -> Result<f64> {
    let unit = lambda_cavity_mediated(&CavityMediatedParams { g_at_f: 1.0, g_m_f: 1.0, detuning, kappa, omega_m })?;
    if unit == 0.0 || target / unit < 0.0 {
        return Err(invalid("detuning", "cannot reach the target coupling with this detuning"));
    }
    Ok((target / unit).sqrt())
}

impl Scenario {
    fn new(name: &str, platform: Platform, params: Vec<Quantity>) -> Result<Self> {
        let mut s = Self {
            name: name.to_string(),
            platform,
            params,
            derived: Vec::new(),
        };
        s.derived = s.compute_derived()?;
        Ok(s)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn platform(&self) -> Platform {
        self.platform
    }

    pub fn params(&self) -> &[Quantity] {
        &self.params
    }

    pub fn derived(&self) -> &[Quantity] {
        &self.derived
    }

    /// A parameter value.
    pub fn param(&self, key: &str) -> Result<f64> {
        self.params
            .iter()
            .find(|p| p.name == key)
            .map(|p| p.value)
            .ok_or_else(|| self.unknown(key))
    }

    /// A parameter or derived value.
    pub fn get(&self, key: &str) -> Result<f64> {
        self.param(key).or_else(|_| {
            self.derived
                .iter()
                .find(|p| p.name == key)
                .map(|p| p.value)
                .ok_or_else(|| self.unknown(key))
        })
    }

    fn unknown(&self, key: &str) -> Error {
        Error::UnknownParameter {
            scenario: self.name.clone(),
            name: key.to_string(),
        }
    }

    /// Overrides a parameter and recomputes every derived quantity. On
    /// failure the scenario is left unchanged.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let idx = self.params.iter().position(|p| p.name == key).ok_or_else(|| self.unknown(key))?;
        let old = self.params[idx].value;
        self.params[idx].value = value;
        match self.compute_derived() {
            Ok(d) => {
                self.derived = d;
                Ok(())
            }
            Err(e) => {
                self.params[idx].value = old;
                Err(e)
            }
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Result<Self> {
        self.set(key, value)?;
        Ok(self)
    }

    /// Largest relative difference between the stored derived quantities
    /// and a fresh recomputation.
    pub fn derived_drift(&self) -> Result<f64> {
        let fresh = self.compute_derived()?;
        let mut worst: f64 = 0.0;
        for (a, b) in self.derived.iter().zip(&fresh) {
            if a.name != b.name {
                return Ok(f64::INFINITY);
            }
            if a.value.is_nan() && b.value.is_nan() || a.value == b.value {
                continue;
            }
            worst = worst.max((a.value - b.value).abs() / a.value.abs().max(b.value.abs()));
        }
        Ok(worst)
    }

    fn p(&self, key: &str) -> Result<f64> {
        self.param(key)
    }

    fn count(&self, key: &str) -> Result<u64> {
        let n = self.p(key)?;
        if !(n >= 1.0) || n.fract() != 0.0 || n > u64::MAX as f64 {
            return Err(invalid(key, format!("must be a positive integer, got {n}")));
        }
        Ok(n as u64)
    }

    pub fn mode(&self) -> Result<MechanicalMode> {
        MechanicalMode::new(self.p("m_eff")?, self.p("omega_m")?, self.p("quality_q")?, self.p("temperature")?)
    }

    fn charge(&self) -> Result<ChargeQubitParams> {
        Ok(ChargeQubitParams {
            gate_voltage: self.p("gate_voltage")?,
            c_gate: self.p("c_gate")?,
            c_total: self.p("c_total")?,
            gap: self.p("gap")?,
            e_c: self.p("e_c")?,
            e_j: self.p("e_j")?,
            delta_ng: self.p("delta_ng")?,
        })
    }

    /// Charge-qubit parameters (`cpb_resonator` only).
    pub fn charge_params(&self) -> Result<ChargeQubitParams> {
        self.require(&[Platform::CpbResonator])?;
        self.charge()
    }

    fn direct(&self) -> Result<DirectCouplingParams> {
        Ok(DirectCouplingParams {
            m_at: self.p("m_at")?,
            omega_at: self.p("omega_at")?,
            epsilon: self.p("epsilon")?,
            n_atoms: self.count("n_atoms")?,
        })
    }

    fn require(&self, allowed: &[Platform]) -> Result<()> {
        if allowed.contains(&self.platform) {
            Ok(())
        } else {
            Err(invalid("scenario", format!("operation not available for `{}`", self.platform.name())))
        }
    }

    /// The qubit-mode description (qubit platforms only).
    pub fn qubit(&self) -> Result<QubitSpec> {
        if !self.platform.is_qubit() {
            return Err(Error::NotQubitScenario(self.name.clone()));
        }
        let mode = self.mode()?;
        let (bias, tunnelling) = match self.platform {
            Platform::CpbResonator => {
                let c = self.charge()?;
                (2.0 * c.e_c * c.delta_ng / HBAR, c.e_j / HBAR)
            }
            Platform::FluxResonator => (self.p("flux_bias")?, self.p("tunnel_gap")?),
            // transverse coupling: the Larmor splitting plays the tunnelling role
            Platform::SpinResonator => (0.0, self.p("omega_l")?),
            Platform::QuantumDot => (self.p("omega_q")?, 0.0),
            _ => unreachable!(),
        };
        Ok(QubitSpec {
            bias,
            tunnelling,
            lambda: self.get("lambda")?,
            omega_m: mode.omega_m,
            t2: self.p("t2")?,
            gamma_m: mode.damping(),
            n_th: mode.thermal_occupation(),
        })
    }

    fn membrane_atom(&self) -> Result<MembraneAtomParams> {
        let mode = self.mode()?;
        let (lambda_n, r, gamma_cool) = match self.platform {
            Platform::LatticeMembrane => (lambda_collective(&self.direct()?, &mode)?, self.p("r")?, self.p("gamma_cool")?),
            Platform::IonDirect | Platform::BecCantilever => {
                // symmetric coupling, atoms damped at their hyperfine-limited rate
                (lambda_collective(&self.direct()?, &mode)?, 1.0, 1.0 / self.p("t2")?)
            }
            Platform::CavitySingleAtomMembrane => {
                let lambda = self.get("lambda")?;
                // atomic decoherence taken at one tenth of the coupling
                (lambda, 1.0, 0.1 * lambda.abs())
            }
            _ => return Err(invalid("scenario", format!("`{}` is not a two-oscillator platform", self.name))),
        };
        Ok(MembraneAtomParams {
            omega_m: mode.omega_m,
            omega_at: self.p("omega_at")?,
            lambda_n,
            r,
            gamma_m: mode.damping(),
            gamma_cool,
            n_th: mode.thermal_occupation(),
            cascade_noise: true,
        })
    }

    /// Membrane–atom parameters for the two-oscillator platforms.
    pub fn membrane_atom_params(&self) -> Result<MembraneAtomParams> {
        self.membrane_atom()
    }

    fn mirror(&self) -> Result<CavityAtomMirror> {
        let mode = self.mode()?;
        Ok(CavityAtomMirror {
            omega_m: mode.omega_m,
            gamma_m: mode.damping(),
            g: self.p("g_om")?,
            kappa: self.p("kappa")?,
            delta_f: self.p("delta_f")?,
            g_a: collective_coupling(self.p("g_a")?, self.count("n_atoms")?),
            gamma_a: self.p("gamma_a")?,
            delta_a: self.p("delta_a")?,
            n_th: mode.thermal_occupation(),
        })
    }

    /// Cavity–atom–mirror parameters (`cavity_atom_mirror` only).
    pub fn cavity_atom_mirror_params(&self) -> Result<CavityAtomMirror> {
        self.require(&[Platform::CavityAtomMirror])?;
        self.mirror()
    }

    /// Linear (Gaussian) model of the scenario.
    pub fn gaussian_model(&self) -> Result<GaussianModel> {
        match self.platform {
            Platform::CavityAtomMirror => build_cavity_atom_mirror_model(&self.mirror()?),
            p if p.is_qubit() => Err(invalid("scenario", format!("`{}` has no Gaussian model", self.name))),
            _ => self.membrane_atom()?.gaussian(),
        }
    }

    /// Master-equation model: the qubit-mode model in the generic basis for
    /// qubit platforms, the membrane–atom model otherwise. `dims.1` is
    /// ignored for qubit platforms.
    pub fn lindblad_model(&self, dims: (usize, usize)) -> Result<LindbladModel> {
        if self.platform.is_qubit() {
            return build_qubit_resonator_model(self, false, dims.0);
        }
        if self.platform == Platform::CavityAtomMirror {
            return Err(invalid("scenario", "the cavity-atom-mirror model is only available in Gaussian form"));
        }
        membrane_atom_lindblad(&self.membrane_atom()?, dims)
    }

    fn compute_derived(&self) -> Result<Vec<Quantity>> {
        let mut d = Vec::new();
        let mode = self.mode()?;
        d.push(q("x_zpf", mode.x_zpf(), "m", DERIVED));
        d.push(q("gamma_m", mode.damping(), RAD_S, DERIVED));
        d.push(q("gamma_th", thermal_rate(&mode), RAD_S, DERIVED));
        d.push(q("n_th", mode.thermal_occupation(), "1", DERIVED));
        let t2 = self.p("t2").ok();
        let lambda = match self.platform {
            Platform::CpbResonator => {
                let c = self.charge()?;
                let lambda = lambda_electrostatic(&c, &mode)?;
                let chi = dispersive_shift(c.e_j, lambda, mode.omega_m)?;
                let w_q = (2.0 * c.e_c * c.delta_ng).hypot(c.e_j) / HBAR;
                d.push(q("lambda", lambda, RAD_S, DERIVED));
                d.push(q("omega_q", w_q, RAD_S, DERIVED));
                d.push(q("chi", chi, RAD_S, DERIVED));
                d.push(q("omega_0", w_q - mode.omega_m, RAD_S, "gate-drive frequency E_J/hbar - Omega_M"));
                d.push(q("chi_t2", chi * t2.unwrap_or(0.0), "1", DERIVED));
                d.push(q("chi_over_gamma_th", chi / thermal_rate(&mode), "1", DERIVED));
                lambda
            }
            Platform::FluxResonator => {
                let f = FluxQubitParams {
                    b_field: self.p("b_field")?,
                    current: self.p("current")?,
                    length: self.p("length")?,
                };
                let lambda = lambda_lorentz(&f, &mode)?;
                d.push(q("lambda", lambda, RAD_S, DERIVED));
                d.push(q("omega_q", self.p("flux_bias")?.hypot(self.p("tunnel_gap")?), RAD_S, DERIVED));
                lambda
            }
            Platform::SpinResonator => {
                let grad = self.p("gradient")?;
                let s = SpinParams {
                    g_factor: self.p("g_factor")?,
                    ..SpinParams::electron(grad, self.p("omega_l")?)
                };
                let lambda = lambda_magnetic(&s, &mode)?;
                let nuclear = lambda_magnetic(&SpinParams::proton(grad, 0.0), &mode)?;
                d.push(q("lambda", lambda, RAD_S, DERIVED));
                d.push(q("lambda_nuclear", nuclear, RAD_S, "same gradient, proton moment"));
                d.push(q("force_electron", mrfm_force(MU_B, grad), "N", DERIVED));
                d.push(q("force_proton", mrfm_force(MU_P, grad), "N", DERIVED));
                lambda
            }
            Platform::QuantumDot => {
                let p = DeformationParams {
                    d_e: self.p("d_e")?,
                    d_g: self.p("d_g")?,
                    z_0: self.p("z_0")?,
                    length: self.p("length")?,
                };
                let lambda = lambda_deformation(&p, &mode)?;
                d.push(q("lambda", lambda, RAD_S, DERIVED));
                lambda
            }
            Platform::IonDirect | Platform::BecCantilever | Platform::LatticeMembrane => {
                let p = self.direct()?;
                let single = lambda_direct(&DirectCouplingParams { n_atoms: 1, ..p }, &mode)?;
                let collective = lambda_collective(&p, &mode)?;
                d.push(q("lambda_direct", single, RAD_S, DERIVED));
                d.push(q("lambda_collective", collective, RAD_S, DERIVED));
                if self.platform == Platform::IonDirect {
                    let eps = epsilon_coulomb(
                        self.p("c_tip")? * self.p("v_tip")?,
                        self.p("distance")?,
                        p.m_at,
                        p.omega_at,
                    )?;
                    let tip = lambda_direct(&DirectCouplingParams { epsilon: eps, n_atoms: 1, ..p }, &mode)?;
                    d.push(q("epsilon_tip", eps, "1", "Coulomb curvature of the charged tip"));
                    d.push(q("lambda_tip", tip, RAD_S, DERIVED));
                }
                if self.platform == Platform::LatticeMembrane {
                    let r = self.p("r")?;
                    let g_cool = self.p("gamma_cool")?;
                    let s = sympathetic_damping(mode.damping(), r, collective, g_cool)?;
                    d.push(q("gamma_eff", s.gamma_eff, RAD_S, DERIVED));
                    d.push(q("delta_gamma", s.delta_gamma, RAD_S, DERIVED));
                    let eig = extracted_damping(&self.membrane_atom()?.gaussian()?, 0)?;
                    d.push(q("gamma_eff_eigen", eig, RAD_S, "from the eigenvalues of the linear model"));
                }
                collective
            }
            Platform::CavityAtomMirror => {
                let m = self.mirror()?;
                let c = cooperativity(m.g_a, m.kappa, m.gamma_a)?;
                let gamma_opt = optical_damping(m.g, m.kappa, c)?;
                let a_s = filtered_stokes_rate(m.g, m.kappa, c);
                let n_res = residual_occupancy(a_s, m.gamma_m, gamma_opt);
                let n_lyap = match build_cavity_atom_mirror_model(&m).and_then(|g| steady_state_covariance(&g)) {
                    Ok(rep) => rep.phonon_numbers[0],
                    Err(_) => f64::NAN,
                };
                d.push(q("g_a_collective", m.g_a, RAD_S, DERIVED));
                d.push(q("cooperativity", c, "1", DERIVED));
                d.push(q("a_as", m.g * m.g / m.kappa, RAD_S, "bad-cavity anti-Stokes rate"));
                d.push(q("a_s", a_s, RAD_S, "filtered Stokes rate"));
                d.push(q("gamma_opt", gamma_opt, RAD_S, DERIVED));
                d.push(q("n_res", n_res, "1", DERIVED));
                d.push(q("n_res_times_c", n_res * c, "1", DERIVED));
                d.push(q("n_res_lyapunov", n_lyap, "1", "steady state of the linear model"));
                d.push(q("n_res_optomech", (m.kappa / (2.0 * m.omega_m)).powi(2), "1", "without atoms"));
                gamma_opt
            }
            Platform::CavitySingleAtomMembrane => {
                let kappa = cavity_linewidth(self.p("finesse")?, self.p("cavity_length")?);
                let g = self.p("g_field")?;
                let det = self.p("detuning")?;
                let lambda = lambda_cavity_mediated(&CavityMediatedParams {
                    g_at_f: g,
                    g_m_f: g,
                    detuning: det,
                    kappa,
                    omega_m: mode.omega_m,
                })?;
                d.push(q("kappa", kappa, RAD_S, DERIVED));
                d.push(q("lambda", lambda, RAD_S, DERIVED));
                d.push(q("detuning_over_g", det / g, "1", DERIVED));
                lambda
            }
        };
        if self.platform != Platform::CavityAtomMirror {
            let fom = figure_of_merit(lambda, t2.unwrap_or(0.0), thermal_rate(&mode));
            d.push(q("lambda_t2", fom.lambda_t2, "1", DERIVED));
            d.push(q("lambda_over_gamma_th", fom.lambda_over_thermal, "1", DERIVED));
            d.push(q("strong_coupling", f64::from(u8::from(fom.strong_coupling)), "bool", DERIVED));
        }
        Ok(d)
    }
}

/// Qubit-mode master equation for a qubit scenario; see
/// [`qubit_resonator_model`] for the two forms.
pub fn build_qubit_resonator_model(scenario: &Scenario, rotated_basis: bool, dim: usize) -> Result<LindbladModel> {
    qubit_resonator_model(&scenario.qubit()?, rotated_basis, dim)
}

/// All physical constants that enter the builtin values, for run metadata.
pub fn constants_used() -> Vec<Quantity> {
    vec![
        q("hbar", HBAR, "J s", CONST),
        q("e", E_CHARGE, "C", CONST),
        q("mu_b", MU_B, "J/T", CONST),
        q("mu_p", MU_P, "J/T", CONST),
        q("c", C_LIGHT, "m/s", CONST),
    ]
}
