use std::path::Path;

use serde::{Deserialize, Serialize};

use bell_recycle::audit::{run_all, AuditReport};
use bell_recycle::monogamy::{conjecture_margin, ScenarioConfig};
use bell_recycle::multiparty::{noise_robustness, plan_multibob};
use bell_recycle::optimizer::{boundary_curve, BoundaryPoint, MIN_BUDGET};
use bell_recycle::{
    evaluate_scenario, region1_closed, region3_curve, Error, MeasurementKind, MeasurementPair, Observable,
    SearchMode, TwoQubitState,
};

use crate::grid::parse_grid;
use crate::output::{emit, emit_table, fmt12, opt12, to_json, CmdError, CmdResult};
use crate::state_arg::{parse_correlation, parse_state};
use crate::{OutputArgs, EXIT_AUDIT, EXIT_INFEASIBLE};

fn lib_error(e: Error) -> CmdError {
    let code = match e {
        Error::Infeasible { .. } | Error::NotNonlocal { .. } => EXIT_INFEASIBLE,
        _ => crate::EXIT_CONFIG,
    };
    CmdError {
        code,
        message: e.to_string(),
    }
}

/// Region-1 curve where it is defined (`0 < s ≤ 2`).
fn region1(s: f64) -> Option<f64> {
    (s > 0.0 && s <= 2.0).then(|| region1_closed(s).ok()).flatten()
}

#[derive(Serialize)]
struct CurveRow<'a> {
    #[serde(flatten)]
    point: &'a BoundaryPoint,
    region1: Option<f64>,
    region3: Option<f64>,
}

#[derive(Serialize)]
struct CurveDoc<'a> {
    command: &'static str,
    mode: SearchMode,
    seed: u64,
    budget: usize,
    points: Vec<CurveRow<'a>>,
}

pub const CURVE_HEADER: [&str; 11] = [
    "target_s",
    "achieved_s",
    "s_star",
    "region1",
    "region3",
    "feasible",
    "evaluations",
    "seed",
    "mode",
    "branch",
    "params",
];

pub fn curve(mode: SearchMode, grid: &str, seed: u64, budget: usize, out: &OutputArgs) -> CmdResult {
    let grid = parse_grid(grid).map_err(CmdError::config)?;
    if budget < MIN_BUDGET {
        return Err(CmdError::config(format!("budget must be at least {MIN_BUDGET}")));
    }
    let points = boundary_curve(&grid, mode, budget, seed).map_err(lib_error)?;
    if let Some(p) = points.iter().find(|p| !p.feasible) {
        return Err(CmdError {
            code: EXIT_INFEASIBLE,
            message: format!(
                "optimizer missed target s = {} (reached {})",
                fmt12(p.target_s),
                fmt12(p.achieved_s)
            ),
        });
    }
    let rows: Vec<CurveRow> = points
        .iter()
        .map(|p| CurveRow {
            point: p,
            region1: region1(p.target_s),
            region3: region3_curve(p.target_s).ok(),
        })
        .collect();
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let p = r.point;
            vec![
                fmt12(p.target_s),
                fmt12(p.achieved_s),
                fmt12(p.s_star),
                opt12(r.region1),
                opt12(r.region3),
                p.feasible.to_string(),
                p.evaluations.to_string(),
                p.seed.to_string(),
                p.mode.to_string(),
                p.branch.map(|b| format!("{b:?}").to_lowercase()).unwrap_or_default(),
                p.params.iter().map(|&x| fmt12(x)).collect::<Vec<_>>().join(";"),
            ]
        })
        .collect();
    let doc = CurveDoc {
        command: "curve",
        mode,
        seed,
        budget,
        points: rows,
    };
    emit_table(out, &CURVE_HEADER, &table, &doc)
}

#[derive(Serialize)]
struct TabRow {
    s: f64,
    region1: Option<f64>,
    region3: Option<f64>,
}

pub fn tabulate(grid: &str, out: &OutputArgs) -> CmdResult {
    let grid = parse_grid(grid).map_err(CmdError::config)?;
    let rows: Vec<TabRow> = grid
        .iter()
        .map(|&s| TabRow {
            s,
            region1: region1(s),
            region3: region3_curve(s).ok(),
        })
        .collect();
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![fmt12(r.s), opt12(r.region1), opt12(r.region3)])
        .collect();
    let doc = serde_json::json!({ "command": "tabulate", "rows": rows });
    emit_table(out, &["s", "region1", "region3"], &table, &doc)
}

#[derive(Serialize)]
struct AuditDoc {
    command: &'static str,
    samples: usize,
    seed: u64,
    worst_margin: f64,
    violations: usize,
    audits: Vec<AuditReport>,
}

pub fn audit(samples: usize, seed: u64, output: Option<&Path>) -> CmdResult {
    if samples == 0 {
        return Err(CmdError::config("--samples must be positive"));
    }
    let audits = run_all(samples, seed).map_err(lib_error)?;
    let doc = AuditDoc {
        command: "audit",
        samples,
        seed,
        worst_margin: audits.iter().map(|a| a.worst_margin).fold(f64::INFINITY, f64::min),
        violations: audits.iter().map(|a| a.violations).sum(),
        audits,
    };
    emit(&to_json(&doc)?, output)?;
    if doc.violations > 0 {
        return Err(CmdError {
            code: EXIT_AUDIT,
            message: format!("{} audit violations", doc.violations),
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct MultiBobDoc {
    command: &'static str,
    n_bobs: usize,
    margin: f64,
    tilt: f64,
    bob_strengths: Vec<[f64; 2]>,
    chsh_values: Vec<f64>,
    s_min: f64,
    p_min: f64,
    check_visibility: f64,
    chsh_at_check: Vec<f64>,
    alice: MeasurementPair,
    bobs: Vec<MeasurementPair>,
}

pub fn multibob(n: usize, margin: f64, state: Option<&str>, out: &OutputArgs) -> CmdResult {
    if n == 0 {
        return Err(CmdError::config("--n must be positive"));
    }
    if !(margin > 0.0) {
        return Err(CmdError::config("--margin must be positive"));
    }
    let t = match state {
        Some(s) => parse_correlation(s).map_err(CmdError::config)?,
        None => TwoQubitState::singlet().correlation(),
    };
    let schedule = plan_multibob(&t, n, margin).map_err(lib_error)?;
    let report = noise_robustness(&schedule).map_err(lib_error)?;
    let check = (report.p_min + 0.01).min(1.0);
    let noisy = schedule
        .base_state()
        .add_isotropic_noise(check)
        .map_err(lib_error)?;
    let at_check = schedule.chsh_on(&noisy).map_err(lib_error)?;
    let table: Vec<Vec<String>> = (0..n)
        .map(|k| {
            vec![
                (k + 1).to_string(),
                fmt12(schedule.bob_strengths[k][0]),
                fmt12(schedule.bob_strengths[k][1]),
                fmt12(schedule.chsh_values[k]),
                fmt12(at_check[k]),
            ]
        })
        .collect();
    let doc = MultiBobDoc {
        command: "multibob",
        n_bobs: n,
        margin,
        tilt: schedule.tilt,
        bob_strengths: schedule.bob_strengths.clone(),
        chsh_values: schedule.chsh_values.clone(),
        s_min: report.s_min,
        p_min: report.p_min,
        check_visibility: check,
        chsh_at_check: at_check,
        alice: schedule.alice,
        bobs: schedule.bobs.clone(),
    };
    emit_table(
        out,
        &["bob", "strength_first", "strength_second", "chsh", "chsh_at_check"],
        &table,
        &doc,
    )
}

#[derive(Deserialize)]
struct ObservableIn {
    #[serde(default)]
    bias: f64,
    strength: f64,
    direction: [f64; 3],
}

#[derive(Deserialize)]
struct PairIn {
    first: ObservableIn,
    second: ObservableIn,
}

#[derive(Deserialize)]
enum KindIn {
    SquareRoot,
    SimpleModel,
    WeakPointer(f64),
}

#[derive(Deserialize)]
struct ScenarioIn {
    state: serde_json::Value,
    alice: PairIn,
    bob: PairIn,
    #[serde(default = "default_kind")]
    kind: KindIn,
}

fn default_kind() -> KindIn {
    KindIn::SquareRoot
}

fn pair(p: PairIn) -> Result<MeasurementPair, Error> {
    let o = |x: ObservableIn| Observable::new(x.bias, x.strength, x.direction);
    Ok(MeasurementPair::new(o(p.first)?, o(p.second)?))
}

/// Accepts the configuration layout the audit report uses for offenders.
pub fn evaluate(scenario: &str, output: Option<&Path>) -> CmdResult {
    let text = match scenario.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CmdError::config(format!("{path}: {e}")))?,
        None => scenario.to_string(),
    };
    let input: ScenarioIn =
        serde_json::from_str(&text).map_err(|e| CmdError::config(format!("scenario: {e}")))?;
    let state_text = match &input.state {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let state = parse_state(&state_text).map_err(CmdError::config)?;
    let kind = match input.kind {
        KindIn::SquareRoot => MeasurementKind::SquareRoot,
        KindIn::SimpleModel => MeasurementKind::SimpleModel,
        KindIn::WeakPointer(f) => MeasurementKind::WeakPointer(f),
    };
    let cfg = ScenarioConfig::new(
        state,
        pair(input.alice).map_err(lib_error)?,
        pair(input.bob).map_err(lib_error)?,
        kind,
    );
    let res = evaluate_scenario(&cfg).map_err(lib_error)?;
    let doc = serde_json::json!({
        "command": "evaluate",
        "s_first": res.s_first,
        "s_star_second": res.s_star_second,
        "conjecture_margin": conjecture_margin(&res),
    });
    emit(&to_json(&doc)?, output)
}
