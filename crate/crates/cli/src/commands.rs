//! The six batch commands. Each returns a table plus run details for the
//! metadata sidecar.

use std::path::Path;

use hybrid_core::constants::TWO_PI;
use hybrid_core::gaussian::{evolve_covariance, evolve_means, steady_state_covariance};
use hybrid_core::lindblad::{
    evolve_master_run, membrane_atom_lindblad, membrane_atom_observables, qubit_mode_space, simulate_jaynes_cummings,
    simulate_spin_resonator_full,
};
use hybrid_core::ode::{linspace, Dopri5};
use hybrid_core::operator::{embed, ket_fock, ket_qubit, number, pauli, HilbertSpace, Operator, Pauli, QuantumState};
use hybrid_core::scenarios::{build_qubit_resonator_model, constants_used, estimate_table, estimate_table_from, Scenario};
use hybrid_core::{GaussianModel, TimeSeries};
use log::info;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::config::{parse_dims, Config, Section};
use crate::error::CliError;
use crate::model::Source;
use crate::output::{Cell, Table};
use crate::Command;

/// Default population limit on the top two Fock levels before a run is
/// declared a truncation failure.
pub const TRUNCATION_LIMIT: f64 = 1e-3;

/// Settings that come from the command line rather than the file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub dims: Option<String>,
    pub workers: Option<usize>,
}

/// What a command produced.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub table: Table,
    /// Source description (`scenario ...` or `model ...`).
    pub source: String,
    pub resolved: Json,
    /// Command-specific settings and diagnostics.
    pub details: Json,
}

fn empty_config() -> Config {
    Config::parse("").expect("empty config parses")
}

/// Runs `command` on a parsed configuration.
pub fn run(command: Command, cfg: Option<&Config>, base_dir: &Path, ov: &Overrides) -> Result<Report, CliError> {
    let blank = empty_config();
    let cfg = cfg.unwrap_or(&blank);
    check_run_section(command, cfg)?;
    match command {
        Command::Table => cmd_table(cfg, base_dir),
        Command::Couplings => cmd_couplings(cfg),
        Command::Evolve => cmd_evolve(cfg, ov),
        Command::Steady => cmd_steady(cfg),
        Command::Spectrum => cmd_spectrum(cfg),
        Command::Sweep => cmd_sweep(cfg, ov),
    }
}

const RUN_KEYS: [&str; 7] = ["command", "scenario", "out", "dims", "workers", "basis", "truncation_limit"];

fn check_run_section(command: Command, cfg: &Config) -> Result<(), CliError> {
    let Some(run) = cfg.section("run") else { return Ok(()) };
    run.only_keys(&RUN_KEYS)?;
    if let Some(e) = run.entry("command") {
        let named = Command::from_name(&e.raw)
            .ok_or_else(|| CliError::config(e.line, format!("unknown command `{}`", e.raw)))?;
        if named != command {
            return Err(CliError::config(
                e.line,
                format!("config is for `{}` but `{}` was requested", e.raw, command.name()),
            ));
        }
    }
    Ok(())
}

fn run_section(cfg: &Config) -> Option<&Section> {
    cfg.section("run")
}

fn dims_spec(cfg: &Config, ov: &Overrides) -> Result<Option<Vec<usize>>, CliError> {
    if let Some(spec) = &ov.dims {
        return parse_dims(spec).map(Some).map_err(CliError::usage);
    }
    match run_section(cfg).and_then(|r| r.entry("dims")) {
        Some(e) => parse_dims(&e.raw).map(Some).map_err(|m| CliError::config(e.line, m)),
        None => Ok(None),
    }
}

fn one_dim(dims: Option<Vec<usize>>, default: usize) -> Result<usize, CliError> {
    match dims.as_deref() {
        None => Ok(default),
        Some([d]) => Ok(*d),
        Some(other) => Err(CliError::usage(format!("this model has one mode; got truncation {other:?}"))),
    }
}

fn two_dims(dims: Option<Vec<usize>>, default: (usize, usize)) -> Result<(usize, usize), CliError> {
    match dims.as_deref() {
        None => Ok(default),
        Some([d]) => Ok((*d, *d)),
        Some([a, b]) => Ok((*a, *b)),
        Some(other) => Err(CliError::usage(format!("this model has two modes; got truncation {other:?}"))),
    }
}

fn hz(unit: &str, v: f64) -> Cell {
    if unit == "rad/s" {
        Cell::Num(v / TWO_PI)
    } else {
        Cell::Empty
    }
}

fn cmd_couplings(cfg: &Config) -> Result<Report, CliError> {
    cfg.only_sections(&["run", "params"])?;
    let source = Source::from_config(cfg)?;
    let s = source
        .scenario()
        .ok_or_else(|| CliError::usage("`couplings` needs a builtin scenario, not an inline [model]"))?;
    let mut t = Table::new(["quantity", "kind", "value", "value_hz", "unit", "provenance"]);
    let groups = [("param", s.params().to_vec()), ("derived", s.derived().to_vec()), ("constant", constants_used())];
    for (kind, items) in groups {
        for q in items {
            t.push(vec![q.name.into(), kind.into(), q.value.into(), hz(q.unit, q.value), q.unit.into(), q.note.into()]);
        }
    }
    Ok(Report { table: t, source: source.label(), resolved: source.resolved(), details: json!({}) })
}

fn cmd_table(cfg: &Config, base_dir: &Path) -> Result<Report, CliError> {
    cfg.only_sections(&["run", "table"])?;
    let (rows, spans) = match cfg.section("table").and_then(|s| s.entry("spans")) {
        Some(e) => {
            let path = base_dir.join(&e.raw);
            let text = std::fs::read_to_string(&path)
                .map_err(|err| CliError::config(e.line, format!("cannot read {}: {err}", path.display())))?;
            (estimate_table_from(&text)?, e.raw.clone())
        }
        None => (estimate_table()?, "builtin".to_string()),
    };
    let mut t = Table::new([
        "name",
        "mechanism",
        "lambda_low",
        "lambda_high",
        "lambda_low_hz",
        "lambda_high_hz",
        "quoted_low_hz",
        "quoted_high_hz",
        "overlaps",
        "gamma_th_low",
        "gamma_th_high",
        "t2",
        "strong_low",
        "strong_high",
        "provenance",
    ]);
    for r in &rows {
        t.push(vec![
            r.name.as_str().into(),
            r.mechanism.as_str().into(),
            r.lambda_low.into(),
            r.lambda_high.into(),
            r.lambda_low_hz().into(),
            r.lambda_high_hz().into(),
            r.quoted_low_hz.into(),
            r.quoted_high_hz.into(),
            r.overlaps.to_string().into(),
            r.gamma_th_low.into(),
            r.gamma_th_high.into(),
            r.t2.into(),
            r.strong_low.to_string().into(),
            r.strong_high.to_string().into(),
            format!("{}; spans v{}; rates in rad/s, t2 in s", r.note, r.spans_version).into(),
        ]);
    }
    Ok(Report {
        table: t,
        source: "estimate table".into(),
        resolved: json!({ "spans": spans }),
        details: json!({}),
    })
}

fn time_grid(cfg: &Config) -> Result<Vec<f64>, CliError> {
    let s = cfg.section("time").ok_or_else(|| CliError::usage("missing [time] section (start, stop, points)"))?;
    s.only_keys(&["start", "stop", "points"])?;
    let start = s.f64_or("start", "s", 0.0)?;
    let stop = s.f64("stop", "s")?;
    let points = s.usize("points")?;
    if points < 2 {
        return Err(CliError::config(s.entry("points").map_or(s.line, |e| e.line), "need at least 2 time points"));
    }
    if !(stop > start) {
        return Err(CliError::config(s.line, "`stop` must be later than `start`"));
    }
    Ok(linspace(start, stop, points))
}

fn series_table(ts: &TimeSeries, provenance: &str) -> Table {
    let mut header = vec!["t".to_string()];
    header.extend(ts.names.iter().cloned());
    header.push("provenance".into());
    let mut t = Table::new(header);
    for (k, tk) in ts.t.iter().enumerate() {
        let mut row = vec![Cell::Num(*tk)];
        row.extend(ts.columns.iter().map(|c| Cell::Num(c[k])));
        row.push(provenance.into());
        t.push(row);
    }
    t
}

fn check_truncation(ts: &TimeSeries, limit: f64) -> Result<(), CliError> {
    let p = ts.diagnostics.max_top_fock_population;
    if p > limit {
        return Err(CliError::Truncation(format!(
            "top-two Fock population reached {p:.3e} (limit {limit:.1e}); increase --dims"
        )));
    }
    Ok(())
}

fn initial_section(cfg: &Config, allowed: &[&str]) -> Result<Option<Section>, CliError> {
    match cfg.section("initial") {
        Some(s) => {
            s.only_keys(allowed)?;
            Ok(Some(s.clone()))
        }
        None => Ok(None),
    }
}

fn qubit_initial(cfg: &Config) -> Result<(bool, usize), CliError> {
    let Some(s) = initial_section(cfg, &["qubit", "fock"])? else { return Ok((true, 0)) };
    let excited = match s.str_or("qubit", "e")? {
        "e" => true,
        "g" => false,
        other => {
            let line = s.entry("qubit").map_or(s.line, |e| e.line);
            return Err(CliError::config(line, format!("`qubit` must be `e` or `g`, got `{other}`")));
        }
    };
    Ok((excited, s.usize_or("fock", 0)?))
}

fn qubit_state(dim: usize, excited: bool, fock: usize) -> Result<QuantumState, CliError> {
    let space = qubit_mode_space(dim)?;
    let n = ket_fock(dim, fock)?;
    Ok(QuantumState::product(space, &[ket_qubit(excited), n])?)
}

fn qubit_observables(space: &HilbertSpace) -> Result<Vec<(&'static str, Operator)>, CliError> {
    let dim = space.factor(1)?.dim;
    let sz = embed(&pauli(Pauli::Z), 0, space)?;
    let pe = (&sz + &Operator::identity(space)).scale_re(0.5);
    Ok(vec![
        ("P_e", pe),
        ("n", embed(&number(dim)?, 1, space)?),
        ("sigma_z", sz),
        ("sigma_x", embed(&pauli(Pauli::X), 0, space)?),
    ])
}

fn solver_json() -> Json {
    let s = Dopri5::default();
    json!({ "method": "dopri5", "rtol": s.rtol, "atol": s.atol, "max_steps": s.max_steps })
}

fn cmd_evolve(cfg: &Config, ov: &Overrides) -> Result<Report, CliError> {
    cfg.only_sections(&["run", "params", "model", "time", "initial", "evolve"])?;
    let source = Source::from_config(cfg)?;
    let t = time_grid(cfg)?;
    let dims = dims_spec(cfg, ov)?;
    let limit = run_section(cfg).map_or(Ok(TRUNCATION_LIMIT), |r| r.f64_or("truncation_limit", "1", TRUNCATION_LIMIT))?;
    let method = match cfg.section("evolve") {
        Some(s) => {
            s.only_keys(&["method"])?;
            s.str_or("method", "lindblad")?.to_string()
        }
        None => "lindblad".to_string(),
    };
    if method != "lindblad" && method != "gaussian" {
        return Err(CliError::usage(format!("unknown evolve method `{method}`; use lindblad or gaussian")));
    }

    let (ts, provenance, dims_used) = match &source {
        _ if method == "gaussian" => return evolve_gaussian(cfg, &source, &t),
        Source::JaynesCummings { lambda, omega_m, detuning } => {
            let dim = one_dim(dims, 6)?;
            let (e, n) = qubit_initial(cfg)?;
            let ts = simulate_jaynes_cummings(*lambda, *omega_m, *detuning, dim, &qubit_state(dim, e, n)?, &t)?;
            (ts, "exact propagation; t in s; expectation values dimensionless", vec![dim])
        }
        Source::SpinResonator { lambda, omega_l, omega_m, rwa } => {
            let dim = one_dim(dims, 6)?;
            let (e, n) = qubit_initial(cfg)?;
            let psi = qubit_state(dim, e, n)?;
            let ts = simulate_spin_resonator_full(*lambda, *omega_l, *omega_m, dim, &psi, &t, *rwa)?;
            (ts, "exact propagation; t in s; expectation values dimensionless", vec![dim])
        }
        Source::Scenario(s) if s.platform().is_qubit() => {
            let dim = one_dim(dims, 8)?;
            let rotated = match run_section(cfg).map_or(Ok("generic"), |r| r.str_or("basis", "generic"))? {
                "generic" => false,
                "rotated" => true,
                other => return Err(CliError::usage(format!("`basis` must be generic or rotated, got `{other}`"))),
            };
            let (e, n) = qubit_initial(cfg)?;
            let model = build_qubit_resonator_model(s, rotated, dim)?;
            let obs = qubit_observables(model.space())?;
            let refs: Vec<(&str, &Operator)> = obs.iter().map(|(n, o)| (*n, o)).collect();
            let run = evolve_master_run(&model, &qubit_state(dim, e, n)?, &t, &refs)?;
            let p = if rotated {
                "master equation, qubit eigenbasis; t in s; expectation values dimensionless"
            } else {
                "master equation, charge basis; t in s; expectation values dimensionless"
            };
            (run.series, p, vec![dim])
        }
        _ => {
            let p = source.membrane_atom().ok_or_else(|| {
                CliError::Precondition(format!("{} is only available in Gaussian form; set [evolve] method = gaussian", source.label()))
            })??;
            let (d0, d1) = two_dims(dims, (6, 6))?;
            let (nm, na) = match initial_section(cfg, &["membrane_fock", "atom_fock"])? {
                Some(s) => (s.usize_or("membrane_fock", 1)?, s.usize_or("atom_fock", 0)?),
                None => (1, 0),
            };
            let model = membrane_atom_lindblad(&p, (d0, d1))?;
            let rho0 = QuantumState::product(model.space().clone(), &[ket_fock(d0, nm)?, ket_fock(d1, na)?])?;
            let obs = membrane_atom_observables(model.space())?;
            let refs: Vec<(&str, &Operator)> = obs.iter().map(|(n, o)| (*n, o)).collect();
            let run = evolve_master_run(&model, &rho0, &t, &refs)?;
            (run.series, "master equation; t in s; quadratures and occupations dimensionless", vec![d0, d1])
        }
    };
    check_truncation(&ts, limit)?;
    info!("evolve: {} samples, {} accepted steps", ts.len(), ts.diagnostics.accepted_steps);
    Ok(Report {
        table: series_table(&ts, provenance),
        source: source.label(),
        resolved: source.resolved(),
        details: json!({
            "method": if matches!(source, Source::JaynesCummings { .. } | Source::SpinResonator { .. }) { "exact" } else { "lindblad" },
            "dims": dims_used,
            "truncation_limit": limit,
            "solver": solver_json(),
            "diagnostics": ts.diagnostics,
        }),
    })
}

fn evolve_gaussian(cfg: &Config, source: &Source, t: &[f64]) -> Result<Report, CliError> {
    let g = source.gaussian()?;
    let n = g.dim();
    let modes = g.modes();
    let (means, occ) = match initial_section(cfg, &["means", "occupations"])? {
        Some(s) => (s.f64_list("means", "1")?, s.f64_list("occupations", "1")?),
        None => (None, None),
    };
    let x0 = means.unwrap_or_else(|| vec![0.0; n]);
    if x0.len() != n {
        return Err(CliError::usage(format!("[initial] means needs {n} values, got {}", x0.len())));
    }
    let occ = occ.unwrap_or_else(|| vec![0.0; modes]);
    if occ.len() != modes || occ.iter().any(|o| *o < 0.0) {
        return Err(CliError::usage(format!("[initial] occupations needs {modes} non-negative values")));
    }
    let sigma0 = DMatrix::from_diagonal(&DVector::from_fn(n, |i, _| occ[i / 2] + 0.5));
    let m = evolve_means(&g, &DVector::from_vec(x0), t)?;
    let covs = evolve_covariance(&g, &sigma0, t)?;
    let mut header = vec!["t".to_string()];
    header.extend(g.labels().iter().cloned());
    header.extend((0..modes).map(|k| format!("n_{}", g.labels()[2 * k])));
    header.push("provenance".into());
    let mut table = Table::new(header);
    for (k, tk) in t.iter().enumerate() {
        let mut row = vec![Cell::Num(*tk)];
        row.extend(m.columns.iter().map(|c| Cell::Num(c[k])));
        for j in 0..modes {
            let (q, p) = (m.columns[2 * j][k], m.columns[2 * j + 1][k]);
            let s = &covs[k];
            row.push(Cell::Num((s[(2 * j, 2 * j)] + s[(2 * j + 1, 2 * j + 1)] + q * q + p * p - 1.0) / 2.0));
        }
        row.push("Gaussian moments; t in s; quadratures and occupations dimensionless".into());
        table.push(row);
    }
    Ok(Report {
        table,
        source: source.label(),
        resolved: source.resolved(),
        details: json!({ "method": "gaussian", "solver": solver_json() }),
    })
}

fn gaussian_source(cfg: &Config) -> Result<(Source, GaussianModel), CliError> {
    let source = Source::from_config(cfg)?;
    let g = source.gaussian()?;
    Ok((source, g))
}

fn cmd_steady(cfg: &Config) -> Result<Report, CliError> {
    cfg.only_sections(&["run", "params", "model"])?;
    let (source, g) = gaussian_source(cfg)?;
    let rep = steady_state_covariance(&g)?;
    let mut t = Table::new(["quantity", "value", "unit", "provenance"]);
    let lyap = "Lyapunov steady state";
    t.push(vec!["max_real_eigenvalue".into(), g.max_real_eigenvalue().into(), "rad/s".into(), "drift matrix".into()]);
    for (k, n) in rep.phonon_numbers.iter().enumerate() {
        t.push(vec![format!("n_{}", g.labels()[2 * k]).into(), (*n).into(), "1".into(), lyap.into()]);
    }
    t.push(vec!["purity".into(), rep.purity.into(), "1".into(), lyap.into()]);
    t.push(vec!["residual".into(), rep.residual.into(), "1".into(), "relative to the diffusion norm".into()]);
    t.push(vec!["physicality_margin".into(), rep.physicality_margin.into(), "1".into(), lyap.into()]);
    let labels = g.labels();
    for i in 0..g.dim() {
        for j in i..g.dim() {
            let name = format!("sigma_{}_{}", labels[i], labels[j]);
            t.push(vec![name.into(), rep.covariance[(i, j)].into(), "1".into(), lyap.into()]);
        }
    }
    Ok(Report { table: t, source: source.label(), resolved: source.resolved(), details: json!({}) })
}

fn cmd_spectrum(cfg: &Config) -> Result<Report, CliError> {
    cfg.only_sections(&["run", "params", "model", "spectrum"])?;
    let (source, g) = gaussian_source(cfg)?;
    let s = cfg
        .section("spectrum")
        .ok_or_else(|| CliError::usage("missing [spectrum] section (start, stop, points)"))?;
    s.only_keys(&["start", "stop", "points"])?;
    let start = s.f64("start", "rad/s")?;
    let stop = s.f64("stop", "rad/s")?;
    let points = s.usize("points")?;
    if points < 2 || !(stop > start) {
        return Err(CliError::config(s.line, "need points >= 2 and stop > start"));
    }
    let grid = linspace(start, stop, points);
    let spec = hybrid_core::gaussian::langevin_force_spectrum(&g, &grid)?;
    let mut t = Table::new(["omega", "omega_hz", "force_spectrum", "provenance"]);
    for (w, sv) in grid.iter().zip(&spec) {
        t.push(vec![
            (*w).into(),
            (w / TWO_PI).into(),
            (*sv).into(),
            "open-loop force spectrum on the mechanics; omega and spectrum in rad/s".into(),
        ]);
    }
    Ok(Report { table: t, source: source.label(), resolved: source.resolved(), details: json!({}) })
}

/// A resolved `[sweep]` section.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub parameter: String,
    pub values: Vec<f64>,
    pub outputs: Vec<String>,
    pub spacing: String,
}

fn sweep_spec(cfg: &Config, s: &Scenario) -> Result<SweepSpec, CliError> {
    let sec = cfg.section("sweep").ok_or_else(|| CliError::usage("missing [sweep] section"))?;
    sec.only_keys(&["parameter", "start", "stop", "count", "spacing", "outputs", "integer"])?;
    let line = |k: &str| sec.entry(k).map_or(sec.line, |e| e.line);
    let path = sec.str("parameter")?;
    let key = path.strip_prefix("params.").unwrap_or(path);
    let unit = s
        .params()
        .iter()
        .find(|q| q.name == key)
        .map(|q| q.unit)
        .ok_or_else(|| CliError::config(line("parameter"), format!("`{path}` is not a parameter of {}", s.name())))?;
    let unit = if unit == "bool" { "1" } else { unit };
    let start = sec.f64("start", unit)?;
    let stop = sec.f64("stop", unit)?;
    let count = sec.usize("count")?;
    if count < 2 {
        return Err(CliError::config(line("count"), "a sweep needs count >= 2"));
    }
    let spacing = sec.str_or("spacing", "linear")?.to_string();
    let mut values: Vec<f64> = match spacing.as_str() {
        "linear" => linspace(start, stop, count),
        "log" => {
            if !(start > 0.0 && stop > 0.0) {
                return Err(CliError::config(line("spacing"), "log spacing needs positive start and stop"));
            }
            let (a, b) = (start.ln(), stop.ln());
            let mut v: Vec<f64> = (0..count).map(|k| (a + (b - a) * k as f64 / (count - 1) as f64).exp()).collect();
            v[0] = start;
            v[count - 1] = stop;
            v
        }
        other => return Err(CliError::config(line("spacing"), format!("spacing must be linear or log, got `{other}`"))),
    };
    if sec.bool_or("integer", false)? {
        values.iter_mut().for_each(|v| *v = v.round());
    }
    let outputs: Vec<String> = match sec.entry("outputs") {
        Some(e) => e.raw.split(',').map(|o| o.trim().to_string()).filter(|o| !o.is_empty()).collect(),
        None => s.derived().iter().map(|q| q.name.to_string()).collect(),
    };
    for o in &outputs {
        if s.get(o).is_err() {
            return Err(CliError::config(line("outputs"), format!("unknown output `{o}` for {}", s.name())));
        }
    }
    Ok(SweepSpec { parameter: key.to_string(), values, outputs, spacing })
}

fn unit_of(s: &Scenario, key: &str) -> &'static str {
    s.params().iter().chain(s.derived()).find(|q| q.name == key).map_or("1", |q| q.unit)
}

fn cmd_sweep(cfg: &Config, ov: &Overrides) -> Result<Report, CliError> {
    cfg.only_sections(&["run", "params", "sweep"])?;
    let source = Source::from_config(cfg)?;
    let base = source
        .scenario()
        .ok_or_else(|| CliError::usage("`sweep` needs a builtin scenario, not an inline [model]"))?;
    let spec = sweep_spec(cfg, base)?;
    let workers = match ov.workers {
        Some(w) => w,
        None => run_section(cfg).map_or(Ok(1), |r| r.usize_or("workers", 1))?,
    }
    .max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {workers} workers: {e}")))?;
    let results: Vec<Result<Vec<f64>, CliError>> = pool.install(|| {
        spec.values
            .par_iter()
            .map(|&v| {
                let mut s = base.clone();
                s.set(&spec.parameter, v)
                    .map_err(|e| CliError::Precondition(format!("{} = {v:e}: {e}", spec.parameter)))?;
                spec.outputs.iter().map(|o| s.get(o).map_err(CliError::from)).collect()
            })
            .collect()
    });

    let mut header = vec!["index".to_string(), spec.parameter.clone()];
    for o in &spec.outputs {
        header.push(o.clone());
        if unit_of(base, o) == "rad/s" {
            header.push(format!("{o}_hz"));
        }
    }
    header.push("provenance".into());
    let units: Vec<String> = std::iter::once(&spec.parameter)
        .chain(&spec.outputs)
        .map(|k| format!("{k}[{}]", unit_of(base, k)))
        .collect();
    let provenance = format!("{}; {}", source.label(), units.join(" "));
    let mut t = Table::new(header);
    for (k, (v, res)) in spec.values.iter().zip(results).enumerate() {
        let outs = res?;
        let mut row = vec![Cell::Num(k as f64), Cell::Num(*v)];
        for (o, x) in spec.outputs.iter().zip(outs) {
            row.push(Cell::Num(x));
            if unit_of(base, o) == "rad/s" {
                row.push(Cell::Num(x / TWO_PI));
            }
        }
        row.push(provenance.as_str().into());
        t.push(row);
    }
    Ok(Report {
        table: t,
        source: source.label(),
        resolved: source.resolved(),
        details: json!({
            "parameter": spec.parameter,
            "spacing": spec.spacing,
            "values": spec.values,
            "outputs": spec.outputs,
            "workers": workers,
        }),
    })
}
