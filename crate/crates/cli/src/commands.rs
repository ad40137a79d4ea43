use std::path::Path;

use qsiege::{
    bernoulli_cost, compare_policies, defender_best_response, effective_attack, equilibrium,
    is_stable, jsq_cost_bound, queue_cost, regime_map, risk_surface, simulate, simulate_traced,
    utilities, AttackChoice, CostGrid, CostParams, ExtendedValue, Regime, RoutingPolicy,
    StrategyProfile, SurfaceGrid, SystemParams, TraceRecord,
};
use serde_json::{json, Value};

use crate::args::{require, Command, Settings};
use crate::error::CliError;
use crate::output::{csv_writer, extended, float, print_json};

pub fn run(command: Command, mut s: Settings) -> Result<(), CliError> {
    let body = match command {
        Command::Stability => stability(&mut s)?,
        Command::Cost => cost(&mut s)?,
        Command::Utilities => utility(&mut s)?,
        Command::Equilibrium => equilibrium_cmd(&mut s)?,
        Command::RiskSurface => surface(&mut s)?,
        Command::RegimeMap => regimes(&mut s)?,
        Command::Simulate { trace } => simulation(&mut s, trace.as_deref())?,
        Command::Compare => compare(&mut s)?,
    };
    let mut doc = json!({ "inputs": s });
    if let (Value::Object(doc), Value::Object(body)) = (&mut doc, body) {
        doc.extend(body);
    }
    print_json(&doc)
}

fn system(s: &Settings) -> Result<SystemParams, CliError> {
    Ok(SystemParams::new(
        require(s.lambda, "lambda")?,
        require(s.mu, "mu")?,
    )?)
}

fn costs(s: &Settings) -> Result<CostParams, CliError> {
    Ok(CostParams::new(
        require(s.c_a, "ca")?,
        require(s.c_d, "cd")?,
    )?)
}

/// Profile from `--a`, `--p` (default 1) and `--d`.
fn profile(s: &mut Settings) -> Result<StrategyProfile, CliError> {
    let a = require(s.a, "a")?;
    let d = require(s.d, "d")?;
    let p = *s.p.get_or_insert(1.0);
    Ok(StrategyProfile::new(a, p, d)?)
}

fn stability(s: &mut Settings) -> Result<Value, CliError> {
    let policy = s.policy()?;
    let params = system(s)?;
    match (s.a, s.d) {
        (Some(_), Some(_)) => {
            let prof = profile(s)?;
            Ok(json!({
                "stable": is_stable(policy, &prof, &params),
                "effective_attack": effective_attack(&prof),
            }))
        }
        (None, None) => {
            let p = *s.p.get_or_insert(1.0);
            let n = *s.res.get_or_insert(101);
            if n < 2 {
                return Err(CliError::Usage("--res must be at least 2".into()));
            }
            let step = 1.0 / (n - 1) as f64;
            let mut cells = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    let (a, d) = (i as f64 * step, j as f64 * step);
                    let prof = StrategyProfile::new(a, p, d)?;
                    cells.push((a, d, is_stable(policy, &prof, &params)));
                }
            }
            let stable = cells.iter().filter(|c| c.2).count();
            let mut body =
                json!({ "stable_cells": stable, "unstable_cells": cells.len() - stable });
            match &s.out {
                Some(path) => {
                    let mut w = csv_writer(path)?;
                    w.write_record(["a", "d", "stable"])?;
                    for (a, d, st) in &cells {
                        w.write_record([float(*a), float(*d), st.to_string()])?;
                    }
                    w.flush().map_err(|e| CliError::io("writing CSV", e))?;
                    body["rows"] = json!(cells.len());
                }
                None => {
                    body["cells"] = cells
                        .iter()
                        .map(|(a, d, st)| json!({ "a": a, "d": d, "stable": st }))
                        .collect();
                }
            }
            Ok(body)
        }
        _ => Err(CliError::Usage(
            "pass both --a and --d for a point, or neither for the lattice".into(),
        )),
    }
}

fn cost(s: &mut Settings) -> Result<Value, CliError> {
    let params = system(s)?;
    let prof = profile(s)?;
    Ok(json!({
        "jsq": {
            "stable": is_stable(RoutingPolicy::ShorterQueue, &prof, &params),
            "cost": jsq_cost_bound(&prof, &params),
        },
        "bernoulli": {
            "stable": is_stable(RoutingPolicy::Bernoulli, &prof, &params),
            "cost": bernoulli_cost(&prof, &params),
        },
    }))
}

fn utility(s: &mut Settings) -> Result<Value, CliError> {
    let policy = s.policy()?;
    let params = system(s)?;
    let costs = costs(s)?;
    let prof = profile(s)?;
    if prof.p() != 1.0 {
        return Err(CliError::Usage(
            "utilities are defined for p = 1 only".into(),
        ));
    }
    let u = utilities(policy, prof.a(), prof.d(), &params, &costs)?;
    Ok(json!({
        "attacker": u.attacker,
        "defender": u.defender,
        "queue_cost": queue_cost(policy, &prof, &params).total,
    }))
}

fn equilibrium_cmd(s: &mut Settings) -> Result<Value, CliError> {
    let policy = s.policy()?;
    let params = system(s)?;
    let costs = costs(s)?;
    let eq = equilibrium(policy, &params, &costs)?;
    let reply = defender_best_response(policy, AttackChoice::FullAttack, &params, costs.c_d())?;
    Ok(json!({
        "regime": eq.regime.label(),
        "a": eq.a_star,
        "d": eq.d_star,
        "utilities": eq.utilities,
        "defense_against_full_attack": reply,
    }))
}

fn surface(s: &mut Settings) -> Result<Value, CliError> {
    let policy = s.policy()?;
    let params = system(s)?;
    // The security risk does not depend on the attack cost.
    let costs = CostParams::new(s.c_a.unwrap_or(0.0), require(s.c_d, "cd")?)?;
    let n = *s.res.get_or_insert(101);
    let points = risk_surface(policy, &params, &costs, SurfaceGrid::square(n))?;
    let infinite = points.iter().filter(|pt| !pt.risk.is_finite()).count();
    let max_finite = points
        .iter()
        .filter_map(|pt| pt.risk.finite())
        .fold(f64::NEG_INFINITY, f64::max);
    let mut body = json!({
        "infinite_cells": infinite,
        "max_finite_risk": ExtendedValue::from(max_finite),
    });
    match &s.out {
        Some(path) => {
            let mut w = csv_writer(path)?;
            w.write_record(["a", "d", "risk"])?;
            for pt in &points {
                w.write_record([float(pt.a), float(pt.d), extended(pt.risk)])?;
            }
            w.flush().map_err(|e| CliError::io("writing CSV", e))?;
            body["rows"] = json!(points.len());
        }
        None => body["cells"] = serde_json::to_value(&points).expect("serialisable"),
    }
    Ok(body)
}

fn regimes(s: &mut Settings) -> Result<Value, CliError> {
    let policy = s.policy()?;
    let params = system(s)?;
    let grid = CostGrid {
        resolution: *s.res.get_or_insert(CostGrid::standard().resolution),
        ..CostGrid::standard()
    };
    let cells = regime_map(policy, &params, grid)?;
    let count = |r: Regime| cells.iter().filter(|c| c.regime == r).count();
    let mut body = json!({
        "grid": grid,
        "counts": { "A": count(Regime::A), "B1": count(Regime::B1), "B2": count(Regime::B2) },
    });
    match &s.out {
        Some(path) => {
            let mut w = csv_writer(path)?;
            w.write_record(["ca", "cd", "regime", "a_star", "d_star"])?;
            for c in &cells {
                w.write_record([
                    float(c.c_a),
                    float(c.c_d),
                    c.regime.label().to_string(),
                    float(c.a_star),
                    float(c.d_star),
                ])?;
            }
            w.flush().map_err(|e| CliError::io("writing CSV", e))?;
            body["rows"] = json!(cells.len());
        }
        None => body["cells"] = serde_json::to_value(&cells).expect("serialisable"),
    }
    Ok(body)
}

fn simulation(s: &mut Settings, trace: Option<&Path>) -> Result<Value, CliError> {
    let policy = s.policy()?;
    let params = system(s)?;
    let prof = profile(s)?;
    let config = s.sim_config();
    let estimate = match trace {
        None => simulate(policy, &prof, &params, &config)?,
        Some(path) => {
            let mut w = csv_writer(path)?;
            w.write_record(["time", "event", "x", "y"])?;
            let mut failure = None;
            let mut sink = |rec: &TraceRecord| {
                if failure.is_none() {
                    let row = [
                        float(rec.time),
                        rec.kind.label().to_string(),
                        rec.x.to_string(),
                        rec.y.to_string(),
                    ];
                    if let Err(e) = w.write_record(row) {
                        failure = Some(e);
                    }
                }
            };
            let est = simulate_traced(policy, &prof, &params, &config, &mut sink)?;
            if let Some(e) = failure {
                return Err(e.into());
            }
            w.flush().map_err(|e| CliError::io("writing trace", e))?;
            est
        }
    };
    if let Some(path) = &s.out {
        let mut w = csv_writer(path)?;
        w.write_record(["replication", "mean_total_jobs"])?;
        for (r, m) in estimate.replication_means.iter().enumerate() {
            w.write_record([r.to_string(), float(*m)])?;
        }
        w.flush().map_err(|e| CliError::io("writing CSV", e))?;
    }
    Ok(json!({
        "stable": is_stable(policy, &prof, &params),
        "analytic": queue_cost(policy, &prof, &params),
        "estimate": estimate,
    }))
}

fn compare(s: &mut Settings) -> Result<Value, CliError> {
    let params = system(s)?;
    let costs = costs(s)?;
    let config = s.sim_config();
    let report = compare_policies(&params, &costs, &config)?;
    Ok(json!({ "report": report }))
}
