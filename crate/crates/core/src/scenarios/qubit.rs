//! Qubit–resonator master equations in the charge (generic) basis or in the
//! qubit eigenbasis.

use crate::error::{invalid, Result};
use crate::lindblad::{qubit_mode_ops, qubit_mode_space, LindbladModel, QubitModeOps};
use crate::operator::Operator;

/// Qubit ⊗ mode parameters in rad/s.
///
/// The bare qubit is `(ε/2)σ_z − (Δ/2)σ_x` and the mode couples through
/// `λ(b + b†)σ_z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitSpec {
    /// `ε`, the charge-basis bias.
    pub bias: f64,
    /// `Δ`, the tunnelling splitting.
    pub tunnelling: f64,
    pub lambda: f64,
    pub omega_m: f64,
    pub t2: f64,
    pub gamma_m: f64,
    pub n_th: f64,
}

impl QubitSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("bias", self.bias), ("tunnelling", self.tunnelling), ("lambda", self.lambda), ("omega_m", self.omega_m)] {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        if !(self.t2 > 0.0) {
            return Err(invalid("t2", format!("must be > 0, got {}", self.t2)));
        }
        if !(self.gamma_m >= 0.0 && self.n_th >= 0.0) {
            return Err(invalid("gamma_m", "damping and occupation must be >= 0"));
        }
        if self.splitting() == 0.0 {
            return Err(invalid("bias", "qubit splitting vanishes"));
        }
        Ok(())
    }

    /// `ω_q = √(ε² + Δ²)`.
    pub fn splitting(&self) -> f64 {
        self.bias.hypot(self.tunnelling)
    }

    /// Gate-drive frequency `ω_0 = ω_q − Ω_M` that makes qubit and phonon
    /// exchange resonant.
    pub fn drive_frequency(&self) -> f64 {
        self.splitting() - self.omega_m
    }

    /// The operator `σ_z` of the charge basis, written in the chosen basis.
    fn coupling_axis(&self, o: &QubitModeOps, rotated: bool) -> Operator {
        if rotated {
            let w = self.splitting();
            &o.sx.scale_re(self.tunnelling / w) - &o.sz.scale_re(self.bias / w)
        } else {
            o.sz.clone()
        }
    }
}

/// Builds the qubit–mode master equation.
///
/// Generic form: `(ε/2)σ_z − (Δ/2)σ_x + Ω b†b + λ(b + b†)σ_z`.
/// Rotated form: `(ω_q/2)σ_z + Ω b†b + λ(b + b†)[(Δ/ω_q)σ_x − (ε/ω_q)σ_z]`,
/// which at `ε = 0` is `(Δ/2)σ_z + Ω b†b + λ(b + b†)σ_x`. The two are related
/// by the qubit eigenbasis change combined with the mode parity `b → −b`.
///
/// Dissipators: `D[σ]` at `1/(2T₂)` on the charge-basis `σ_z`, `D[b]` at
/// `Γ_M(n_th + 1)` and `D[b†]` at `Γ_M n_th`.
pub fn qubit_resonator_model(spec: &QubitSpec, rotated: bool, dim: usize) -> Result<LindbladModel> {
    spec.validate()?;
    let space = qubit_mode_space(dim)?;
    let o = qubit_mode_ops(&space)?;
    let x = &o.b + &o.b.dagger();
    let qubit = if rotated {
        o.sz.scale_re(spec.splitting() / 2.0)
    } else {
        &o.sz.scale_re(spec.bias / 2.0) - &o.sx.scale_re(spec.tunnelling / 2.0)
    };
    let axis = spec.coupling_axis(&o, rotated);
    let h = &(&qubit + &o.n.scale_re(spec.omega_m)) + &(&x * &axis).scale_re(spec.lambda);
    let dephasing = if rotated {
        // sign is irrelevant inside D[.]
        let w = spec.splitting();
        &o.sz.scale_re(spec.bias / w) - &o.sx.scale_re(spec.tunnelling / w)
    } else {
        o.sz.clone()
    };
    LindbladModel::new(h)?
        .with_collapse(dephasing, 1.0 / (2.0 * spec.t2))?
        .with_collapse(o.b.clone(), spec.gamma_m * (spec.n_th + 1.0))?
        .with_collapse(o.b.dagger(), spec.gamma_m * spec.n_th)
}

/// Rotated-basis Hamiltonian with the coupling modulated by a gate drive,
/// `H(t) = H_0 + 2 cos(ω_0 t) V`.
#[derive(Clone, Debug, PartialEq)]
pub struct DrivenHamiltonian {
    pub static_part: Operator,
    pub drive: Operator,
    pub frequency: f64,
}

impl DrivenHamiltonian {
    pub fn at(&self, t: f64) -> Operator {
        &self.static_part + &self.drive.scale_re(2.0 * (self.frequency * t).cos())
    }
}

/// Gate-driven coupling at `ω_0 = ω_q − Ω_M`. In the interaction picture
/// and after the rotating-wave approximation this is the resonant
/// Jaynes-Cummings exchange `λ(σ₊b + σ₋b†)` (for `ε = 0`).
pub fn driven_hamiltonian(spec: &QubitSpec, dim: usize) -> Result<DrivenHamiltonian> {
    spec.validate()?;
    let space = qubit_mode_space(dim)?;
    let o = qubit_mode_ops(&space)?;
    let x = &o.b + &o.b.dagger();
    let axis = spec.coupling_axis(&o, true);
    Ok(DrivenHamiltonian {
        static_part: &o.sz.scale_re(spec.splitting() / 2.0) + &o.n.scale_re(spec.omega_m),
        drive: (&x * &axis).scale_re(spec.lambda),
        frequency: spec.drive_frequency(),
    })
}
