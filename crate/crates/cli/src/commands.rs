//! Subcommand implementations: each returns rendered output text; failures
//! carry the exit-code classification.

use serde_json::json;

use vevlab_core::fields::{ElectroModel, ScalarModel};
use vevlab_core::potentials::{equivalent_potential, YukawaSpec};
use vevlab_core::scattering::{constructed_amplitude, fractional_error, Provenance};
use vevlab_core::xsection::compton_dsigma_domega;

use crate::config::ConfigFile;
use crate::format::{Cell, OutputFormat, Table};
use crate::verify::{run, Suite};
use crate::CliError;

fn finite(name: &'static str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Usage(format!("{name} must be finite")))
    }
}

/// Inclusive linear grid with `steps` points (a single point for steps = 1).
fn grid(lo: f64, hi: f64, steps: usize, name: &'static str) -> Result<Vec<f64>, CliError> {
    if steps == 0 {
        return Err(CliError::Usage(format!("{name} grid needs at least one point")));
    }
    finite(name, lo)?;
    finite(name, hi)?;
    if lo > hi {
        return Err(CliError::Usage(format!("{name} grid has min > max")));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let h = (hi - lo) / (steps as f64 - 1.0);
    Ok((0..steps).map(|k| lo + h * k as f64).collect())
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

pub struct VerifyArgs {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub corrupt: bool,
    pub format: OutputFormat,
}

/// Runs the verification suites, returning the rendered report and a
/// summary line naming every failed identity (empty when all pass).
pub fn cmd_verify(args: &VerifyArgs) -> Result<(String, String), CliError> {
    let suite = Suite::parse(&args.suite)
        .ok_or_else(|| CliError::Usage(format!("unknown suite '{}'", args.suite)))?;
    if args.trials == 0 {
        return Err(CliError::Usage("trials must be at least 1".into()));
    }
    let rows = run(suite, args.trials, args.seed, args.tol, args.corrupt);
    let mut table = Table::new(vec!["suite", "check", "max_residual", "tolerance", "status"]);
    let mut failures = Vec::new();
    for row in &rows {
        let status = if row.passed() { "pass" } else { "fail" };
        if !row.passed() {
            failures.push(format!("{}:{} (residual {:e})", row.suite, row.check, row.residual));
        }
        table.push(vec![
            Cell::Text(row.suite.to_string()),
            Cell::Text(row.check.to_string()),
            Cell::Num(row.residual),
            Cell::Num(row.tol),
            Cell::Text(status.to_string()),
        ]);
    }
    Ok((table.render(args.format), failures.join("; ")))
}

// ---------------------------------------------------------------------------
// compton
// ---------------------------------------------------------------------------

pub struct ComptonArgs {
    pub photon_energy: f64,
    pub mass: f64,
    pub charge: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub theta_steps: usize,
    pub variant: String,
    pub format: OutputFormat,
}

/// Spin-averaged Compton differential cross-section sweep over a theta grid
/// at fixed incident photon energy (electron rest frame).
pub fn cmd_compton(args: &ComptonArgs) -> Result<String, CliError> {
    if !(args.photon_energy > 0.0 && args.photon_energy.is_finite()) {
        return Err(CliError::Usage("photon energy must be positive".into()));
    }
    if !(args.mass > 0.0) || !(args.charge != 0.0) {
        return Err(CliError::Usage("mass must be positive and charge nonzero".into()));
    }
    let thetas = grid(args.theta_min, args.theta_max, args.theta_steps, "theta")?;
    if thetas.iter().any(|&t| !(0.0..=core::f64::consts::PI).contains(&t)) {
        return Err(CliError::Usage("theta grid must lie in [0, pi]".into()));
    }
    let (want_f, want_c) = match args.variant.as_str() {
        "feynman" => (true, false),
        "constructed" => (false, true),
        "both" => (true, true),
        other => return Err(CliError::Usage(format!("unknown variant '{other}'"))),
    };

    let mut columns = vec!["theta"];
    if want_f {
        columns.push("dsigma_feynman");
    }
    if want_c {
        columns.push("dsigma_constructed");
    }
    if want_f && want_c {
        columns.push("ratio");
    }
    columns.push("fractional_error");
    let mut table = Table::new(columns);

    for &theta in &thetas {
        let mut row = vec![Cell::Num(theta)];
        let eval = |prov: Provenance| -> Result<f64, CliError> {
            compton_dsigma_domega(args.mass, args.photon_energy, theta, args.charge, prov)
                .map_err(|e| CliError::Usage(format!("{e}")))
        };
        let f = if want_f { Some(eval(Provenance::Feynman)?) } else { None };
        let c = if want_c { Some(eval(Provenance::Constructed)?) } else { None };
        if let Some(v) = f {
            row.push(Cell::Num(v));
        }
        if let Some(v) = c {
            row.push(Cell::Num(v));
        }
        if let (Some(fv), Some(cv)) = (f, c) {
            row.push(Cell::Num(cv / fv));
        }
        row.push(Cell::Num(fractional_error(args.photon_energy, theta, args.mass)));
        table.push(row);
    }
    Ok(table.render(args.format))
}

// ---------------------------------------------------------------------------
// potential
// ---------------------------------------------------------------------------

pub struct PotentialArgs {
    pub delta: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub c4: f64,
    pub mass: f64,
    pub p1: f64,
    pub r_min: f64,
    pub r_max: f64,
    pub r_steps: usize,
    pub quadrature: bool,
    pub format: OutputFormat,
}

/// Equivalent-potential magnitude/phase table over an r grid.
pub fn cmd_potential(args: &PotentialArgs) -> Result<String, CliError> {
    let spec = YukawaSpec::new(args.delta, args.epsilon, args.alpha, args.c4, args.mass)
        .map_err(|e| CliError::Usage(format!("{e}")))?;
    if !(args.r_min > 0.0) {
        return Err(CliError::Usage("r grid must start above zero".into()));
    }
    let rs = grid(args.r_min, args.r_max, args.r_steps, "r")?;
    let mut table = Table::new(vec!["r", "magnitude", "phase"]);
    for &r in &rs {
        let v = equivalent_potential(&spec, args.p1, r, !args.quadrature)
            .map_err(|e| CliError::Usage(format!("{e}")))?;
        table.push(vec![Cell::Num(r), Cell::Num(v.magnitude), Cell::Num(v.phase)]);
    }
    Ok(table.render(args.format))
}

// ---------------------------------------------------------------------------
// amplitude
// ---------------------------------------------------------------------------

/// Evaluates the constructed amplitude for every sweep point in the config,
/// emitting a JSON record with the channel breakdown.
pub fn cmd_amplitude(config: &ConfigFile) -> Result<String, CliError> {
    let spec = config.multiplier_spec()?;
    let mut points = Vec::new();
    for point in &config.sweep.points {
        let kin = config.kinematics(point)?;
        let amp = match config.model.kind.as_str() {
            "electro" => constructed_amplitude(&kin, &spec, &ElectroModel::new(config.model.mass)),
            "scalar" => constructed_amplitude(&kin, &spec, &ScalarModel),
            other => return Err(CliError::Usage(format!("unknown model kind '{other}'"))),
        }
        .map_err(|e| CliError::Usage(format!("{e:?}")))?;
        let channels: Vec<_> = amp
            .channel_terms
            .iter()
            .map(|t| {
                json!({
                    "label": t.label,
                    "value": [t.value.re, t.value.im],
                    "coefficient": [t.coefficient.re, t.coefficient.im],
                })
            })
            .collect();
        points.push(json!({
            "value": [amp.value.re, amp.value.im],
            "abs_sq": amp.abs_sq(),
            "terms_sum_residual": amp.terms_sum_residual(),
            "channels": channels,
        }));
    }
    let mut out = serde_json::to_string_pretty(&json!({ "points": points }))
        .expect("amplitude record serialization cannot fail");
    out.push('\n');
    Ok(out)
}
