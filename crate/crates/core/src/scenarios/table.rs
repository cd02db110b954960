//! Coupling-strength ranges per mechanism from representative parameter spans.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::constants::{hz_to_angular, E_CHARGE, TWO_PI};
use crate::couplings::{
    figure_of_merit, lambda_deformation, lambda_electrostatic, lambda_lorentz, lambda_magnetic, thermal_rate,
    ChargeQubitParams, DeformationParams, FluxQubitParams, MechanicalMode, SpinParams,
};
use crate::error::{Error, Result};

/// The span file shipped with the crate.
pub const DEFAULT_SPANS: &str = include_str!("../../data/estimate_spans.toml");

#[derive(Debug, Deserialize)]
struct SpanFile {
    version: u32,
    temperature: f64,
    quality_q: f64,
    row: Vec<SpanRow>,
}

#[derive(Debug, Deserialize)]
struct SpanRow {
    name: String,
    mechanism: String,
    quoted_hz: [f64; 2],
    t2: f64,
    note: String,
    low: BTreeMap<String, f64>,
    high: BTreeMap<String, f64>,
}

/// One line of the estimate table. Rates are angular (rad/s).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateRow {
    pub name: String,
    pub mechanism: String,
    pub lambda_low: f64,
    pub lambda_high: f64,
    pub quoted_low_hz: f64,
    pub quoted_high_hz: f64,
    /// Whether the computed and quoted ranges intersect.
    pub overlaps: bool,
    pub gamma_th_low: f64,
    pub gamma_th_high: f64,
    pub t2: f64,
    pub strong_low: bool,
    pub strong_high: bool,
    pub note: String,
    pub spans_version: u32,
}

impl EstimateRow {
    pub fn lambda_low_hz(&self) -> f64 {
        self.lambda_low / TWO_PI
    }

    pub fn lambda_high_hz(&self) -> f64 {
        self.lambda_high / TWO_PI
    }
}

fn get(map: &BTreeMap<String, f64>, row: &str, key: &str) -> Result<f64> {
    map.get(key)
        .copied()
        .ok_or_else(|| Error::Data(format!("row `{row}` is missing `{key}`")))
}

fn evaluate(row: &SpanRow, p: &BTreeMap<String, f64>, t: f64, q: f64) -> Result<(f64, f64)> {
    let g = |k: &str| get(p, &row.name, k);
    let mode = MechanicalMode::new(g("m_eff")?, hz_to_angular(g("omega_m_hz")?), q, t)?;
    let lambda = match row.mechanism.as_str() {
        "electrostatic" => {
            let c = ChargeQubitParams {
                gate_voltage: g("gate_voltage")?,
                c_gate: g("c_gate")?,
                c_total: g("c_total")?,
                gap: g("gap")?,
                // the qubit energies do not enter the coupling
                e_c: 1.0,
                e_j: 1.0,
                delta_ng: 0.0,
            };
            lambda_electrostatic(&c, &mode)?
        }
        "lorentz" => {
            let f = FluxQubitParams {
                b_field: g("b_field")?,
                current: g("current")?,
                length: g("length")?,
            };
            lambda_lorentz(&f, &mode)?
        }
        "magnetic_electron" => lambda_magnetic(&SpinParams::electron(g("gradient")?, 0.0), &mode)?,
        "magnetic_proton" => lambda_magnetic(&SpinParams::proton(g("gradient")?, 0.0), &mode)?,
        "deformation" => {
            let d = DeformationParams {
                d_e: g("d_e_ev")? * E_CHARGE,
                d_g: g("d_g_ev")? * E_CHARGE,
                z_0: g("z_0")?,
                length: g("length")?,
            };
            lambda_deformation(&d, &mode)?
        }
        other => return Err(Error::Data(format!("row `{}`: unknown mechanism `{other}`", row.name))),
    };
    Ok((lambda, thermal_rate(&mode)))
}

/// Builds the table from a span file in the format of [`DEFAULT_SPANS`].
pub fn estimate_table_from(spans: &str) -> Result<Vec<EstimateRow>> {
    let file: SpanFile = toml::from_str(spans).map_err(|e| Error::Data(e.to_string()))?;
    let mut out = Vec::with_capacity(file.row.len());
    for row in &file.row {
        let (l0, g0) = evaluate(row, &row.low, file.temperature, file.quality_q)?;
        let (l1, g1) = evaluate(row, &row.high, file.temperature, file.quality_q)?;
        let (lo, hi) = (l0.min(l1), l0.max(l1));
        let [q0, q1] = row.quoted_hz;
        let overlaps = lo / TWO_PI <= q1 && hi / TWO_PI >= q0;
        out.push(EstimateRow {
            name: row.name.clone(),
            mechanism: row.mechanism.clone(),
            lambda_low: lo,
            lambda_high: hi,
            quoted_low_hz: q0,
            quoted_high_hz: q1,
            overlaps,
            gamma_th_low: g0,
            gamma_th_high: g1,
            t2: row.t2,
            strong_low: figure_of_merit(l0, row.t2, g0).strong_coupling,
            strong_high: figure_of_merit(l1, row.t2, g1).strong_coupling,
            note: row.note.clone(),
            spans_version: file.version,
        });
    }
    Ok(out)
}

/// Coupling ranges for the electrostatic, Lorentz-force, magnetic (electron
/// and nuclear) and deformation-potential mechanisms.
pub fn estimate_table() -> Result<Vec<EstimateRow>> {
    estimate_table_from(DEFAULT_SPANS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row<'a>(t: &'a [EstimateRow], name: &str) -> &'a EstimateRow {
        t.iter().find(|r| r.name == name).unwrap()
    }

    #[test]
    fn all_rows_overlap_their_quoted_ranges() {
        let t = estimate_table().unwrap();
        assert_eq!(t.len(), 5);
        for r in &t {
            assert!(r.overlaps, "{}: [{:.3e}, {:.3e}] Hz", r.name, r.lambda_low_hz(), r.lambda_high_hz());
        }
    }

    #[test]
    fn electrostatic_and_magnetic_spans() {
        let t = estimate_table().unwrap();
        let el = row(&t, "electrostatic");
        assert!(el.lambda_low_hz() > 5e6 && el.lambda_high_hz() < 50e6);
        let mag = row(&t, "magnetic");
        assert!(mag.lambda_low_hz() > 10e3 && mag.lambda_high_hz() < 100e3);
    }

    #[test]
    fn nuclear_row_is_electron_row_scaled() {
        let t = estimate_table().unwrap();
        let ratio = row(&t, "magnetic_nuclear").lambda_high / row(&t, "magnetic").lambda_high;
        assert!(ratio > 1e-3 && ratio < 2e-3, "{ratio}");
    }

    #[test]
    fn strong_coupling_verdicts() {
        let t = estimate_table().unwrap();
        assert!(row(&t, "electrostatic").strong_high);
        // 10 Hz-scale nuclear coupling loses against a 20 mK, Q = 1e5 bath
        assert!(!row(&t, "magnetic_nuclear").strong_low);
    }

    #[test]
    fn bad_span_files_are_reported() {
        assert!(matches!(estimate_table_from("version = 1"), Err(Error::Data(_))));
        let missing = DEFAULT_SPANS.replacen("gate_voltage = 1.1", "", 1);
        assert!(matches!(estimate_table_from(&missing), Err(Error::Data(_))));
        let unknown = DEFAULT_SPANS.replacen("mechanism = \"lorentz\"", "mechanism = \"gravity\"", 1);
        assert!(estimate_table_from(&unknown).is_err());
    }
}
