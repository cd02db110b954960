//! Cooper-pair box in the charge basis.

use crate::constants::{E_CHARGE, HBAR};
use crate::couplings::ChargeQubitParams;
use crate::error::{invalid, Result};
use crate::operator::{c, CMatrix, HilbertSpace, Operator};

/// `E_C (N − N_g)² − E_J cos δ` over `charge_states` charge states centred on
/// the nearest integer to `n_g`, in rad/s. `cos δ` couples neighbouring
/// charge states with amplitude ½.
pub fn cpb_hamiltonian_at(e_c: f64, e_j: f64, n_g: f64, charge_states: usize) -> Result<Operator> {
    if charge_states < 3 || charge_states % 2 == 0 {
        return Err(invalid("charge_states", format!("need an odd window of at least 3, got {charge_states}")));
    }
    let centre = n_g.round() as i64;
    let half = (charge_states / 2) as i64;
    let ec = e_c / HBAR;
    let ej = e_j / HBAR;
    let m = CMatrix::from_fn(charge_states, charge_states, |i, j| {
        if i == j {
            let n = (centre - half + i as i64) as f64;
            c(ec * (n - n_g).powi(2))
        } else if i.abs_diff(j) == 1 {
            c(-ej / 2.0)
        } else {
            c(0.0)
        }
    });
    let space = HilbertSpace::builder().levels("charge", charge_states).build()?;
    Operator::new(space, m)
}

/// Charge-basis Hamiltonian at `N_g = n + ½ + ΔN_g`, where `n` is the
/// integer part of the static gate charge `C_g V_g / 2e`.
pub fn cpb_hamiltonian(p: &ChargeQubitParams, charge_states: usize) -> Result<Operator> {
    p.validate()?;
    let n = (p.c_gate * p.gate_voltage / (2.0 * E_CHARGE)).floor();
    cpb_hamiltonian_at(p.e_c, p.e_j, n + 0.5 + p.delta_ng, charge_states)
}
