use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::reproduce::{kimura_constants, reproduce_double_poles, reproduce_kimura};
use super::{Command, Example, Outcome, Pairs, EXIT_DISCREPANCY, EXIT_INTERNAL, EXIT_INVALID, EXIT_OK};
use crate::connection::io::{poly_json, ratfunc_json, InstanceFile};
use crate::connection::{apparent_data, assemble_normal_form, to_e1, validate, Connection, Diagnostics, Instance, Kind};
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, parse_rational, Pos, Rational, Scalar};
use crate::isoflow::{certify, flow, DeformationDirection, FloatState, FlowOptions};
use crate::localform::{reduce_point, ReduceOptions, ReductionReport};
use crate::symplectic::{
    base_coordinates, canonical_matrix, coordinate_basis, fiber_coordinates, hamiltonians, krichever_matrix, Coord,
    FiberChart, OmegaMode, TangentDirection,
};

struct Loaded {
    file: InstanceFile,
    inst: Instance<Rational>,
    digest: String,
}

fn load(path: &Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let file = InstanceFile::from_json(&text)?;
    let inst = file.to_instance()?;
    // digest of the canonical form, so formatting differences do not matter
    let canonical = InstanceFile::from_instance(&inst, file.options.clone()).to_json();
    let digest = format!("{:x}", Sha256::digest(canonical.as_bytes()));
    Ok(Loaded { file, inst, digest })
}

fn diagnostics_json(d: &Diagnostics) -> Vec<Value> {
    d.checks.iter().map(|c| json!({ "name": c.name, "ok": c.ok, "detail": c.detail })).collect()
}

fn report(command: &str, digest: Option<&str>, outputs: Value, diagnostics: Vec<Value>) -> Value {
    json!({ "command": command, "instance_digest": digest, "outputs": outputs, "diagnostics": diagnostics })
}

/// Loads, validates and hands the instance to `body`; validation failures exit 2 with the itemized checks.
fn with_valid(
    command: &str,
    path: &Path,
    body: impl FnOnce(&Loaded) -> Result<(Value, i32)>,
) -> Result<Outcome> {
    let loaded = load(path)?;
    let diag = validate(&loaded.inst);
    if !diag.is_ok() {
        let err = diag.clone().into_result().unwrap_err();
        let mut r = report(command, Some(&loaded.digest), Value::Null, diagnostics_json(&diag));
        r["error"] = json!({ "kind": "Validation", "message": err.to_string() });
        r["exit_code"] = json!(EXIT_INVALID);
        return Ok(Outcome { report: r, code: EXIT_INVALID });
    }
    let (outputs, code) = body(&loaded)?;
    // a valid instance has nothing to report beyond the validate command
    Ok(Outcome { report: report(command, Some(&loaded.digest), outputs, Vec::new()), code })
}

fn connection_json(c: &Connection<Rational>) -> Value {
    let e = |i: usize, j: usize| serde_json::to_value(ratfunc_json(&c.omega0[i][j])).expect("json");
    json!([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
}

fn darboux_json(d: &[crate::connection::DarbouxPoint<Rational>]) -> Vec<Value> {
    d.iter().map(|d| json!({ "q": format_rational(&d.q), "p": format_rational(&d.p) })).collect()
}

fn is_quintic_ramified_at_infinity(inst: &Instance<Rational>) -> bool {
    matches!(inst.sing.points.as_slice(), [p] if p.pos == Pos::Inf && p.kind == Kind::Ramified && p.order == 5)
}

fn build(l: &Loaded) -> Result<(Value, i32)> {
    let nf = assemble_normal_form(&l.inst)?;
    let e1 = to_e1(&nf)?;
    let recovered = apparent_data(&e1)?;
    let mut expected = l.inst.darboux.clone();
    let mut got = recovered.clone();
    let key = |d: &crate::connection::DarbouxPoint<Rational>| d.q.clone();
    expected.sort_by_key(key);
    got.sort_by_key(key);
    let round_trip = expected == got;
    let mut out = json!({
        "omega_en2": connection_json(&nf.connection()?),
        "omega_e1": connection_json(&e1.connection()?),
        "ctilde": poly_json(&nf.ctilde),
        "round_trip": { "ok": round_trip, "recovered": darboux_json(&recovered) },
    });
    if is_quintic_ramified_at_infinity(&l.inst) {
        let (k1, k2) = kimura_constants(&nf)?;
        out["kimura"] = json!({ "K1": format_rational(&k1), "K2": format_rational(&k2) });
    }
    Ok((out, if round_trip { EXIT_OK } else { EXIT_INTERNAL }))
}

fn reduce(l: &Loaded, point: Option<usize>, order: Option<usize>, sigma: &[String]) -> Result<(Value, i32)> {
    let nf = assemble_normal_form(&l.inst)?;
    let sigma = sigma.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
    let points: Vec<usize> = match point {
        Some(i) if i >= l.inst.sing.points.len() => return Err(Error::BadIndex(format!("point {i}"))),
        Some(i) => vec![i],
        None => (0..l.inst.sing.points.len()).collect(),
    };
    let mut reports = Vec::new();
    for i in points {
        let n = l.inst.sing.points[i].order;
        let order = order.or(l.file.options.truncation.map(|extra| 2 * n - 1 + extra));
        let red = reduce_point(&nf, i, &ReduceOptions { order, sigma: sigma.clone() })?;
        reports.push(serde_json::to_value(ReductionReport::new(&red)).expect("json"));
    }
    Ok((json!(reports), EXIT_OK))
}

fn hamiltonians_cmd(l: &Loaded) -> Result<(Value, i32)> {
    let nf = assemble_normal_form(&l.inst)?;
    let coords = base_coordinates(&l.inst.sing);
    let values = hamiltonians(&nf, &coords)?;
    let mut h_theta = serde_json::Map::new();
    let mut h_t = serde_json::Map::new();
    for (c, v) in coords.iter().zip(&values) {
        let target = if matches!(c, Coord::T(_)) { &mut h_t } else { &mut h_theta };
        target.insert(c.to_string(), json!(format_rational(v)));
    }
    Ok((json!({ "H_theta": h_theta, "H_t": h_t }), EXIT_OK))
}

fn matrix_json(m: &[Vec<Rational>]) -> Value {
    json!(m.iter().map(|row| row.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn omega(l: &Loaded, pairs: Pairs) -> Result<(Value, i32)> {
    match pairs {
        Pairs::Canonical => {
            let coords = fiber_coordinates(l.inst.darboux.len(), FiberChart::P);
            let dirs: Vec<TangentDirection> = coords.iter().map(|c| TangentDirection::basis_in(FiberChart::P, *c)).collect();
            let omega = krichever_matrix(&l.inst, &dirs, OmegaMode::Fiber)?;
            let canonical = canonical_matrix(&l.inst, &dirs)?;
            let ok = omega == canonical;
            let out = json!({
                "coordinates": coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "omega": matrix_json(&omega),
                "canonical": matrix_json(&canonical),
                "matches": ok,
            });
            Ok((out, if ok { EXIT_OK } else { EXIT_INTERNAL }))
        }
        Pairs::All => {
            let basis = coordinate_basis(&l.inst, FiberChart::Eta);
            let dirs: Vec<TangentDirection> = basis.iter().map(|(_, d)| d.clone()).collect();
            let omega = krichever_matrix(&l.inst, &dirs, OmegaMode::Extended)?;
            let canonical = canonical_matrix(&l.inst, &dirs)?;
            let difference: Vec<Vec<Rational>> = omega
                .iter()
                .zip(&canonical)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
                .collect();
            // the difference must vanish whenever a fiber direction is involved
            let fiber_ok = basis.iter().enumerate().all(|(a, (ca, _))| {
                basis.iter().enumerate().all(|(b, (cb, _))| !(ca.is_fiber() || cb.is_fiber()) || difference[a][b].is_zero())
            });
            let out = json!({
                "coordinates": basis.iter().map(|(c, _)| c.to_string()).collect::<Vec<_>>(),
                "omega_hat": matrix_json(&omega),
                "omega_hat_canonical": matrix_json(&canonical),
                "difference": matrix_json(&difference),
                "fiber_pairs_agree": fiber_ok,
            });
            Ok((out, if fiber_ok { EXIT_OK } else { EXIT_INTERNAL }))
        }
    }
}

fn certify_cmd(l: &Loaded) -> Result<(Value, i32)> {
    let certs = certify(&l.inst);
    let all = certs.iter().all(|c| c.holds());
    let items: Vec<Value> = certs
        .iter()
        .map(|c| match &c.result {
            Ok(u) => json!({
                "direction": c.direction.to_string(),
                "ok": true,
                "unknowns": u.unknowns,
                "nullity": u.nullity,
                "budget_increase": u.budget_increase,
            }),
            Err(e) => json!({ "direction": c.direction.to_string(), "ok": false, "error": e.to_string() }),
        })
        .collect();
    Ok((json!({ "all_hold": all, "certificates": items }), if all { EXIT_OK } else { EXIT_DISCREPANCY }))
}

fn flow_cmd(l: &Loaded, dir: &str, steps: usize, h: f64, out: Option<&Path>) -> Result<(Value, i32)> {
    let dir: DeformationDirection = dir.parse()?;
    let floats = l.inst.map(|r| r.approx());
    let start = FloatState::of_instance(&floats, dir)?;
    let mut opts = FlowOptions { h, steps, ..FlowOptions::default() };
    if let Some(m) = l.file.options.margins {
        opts.margin = m;
    }
    let traj = flow(&floats.sing, &start, dir, &opts)?;
    let mut outputs = json!({
        "direction": dir.to_string(),
        "h": h,
        "steps": steps,
        "initial": traj.first(),
        "final": traj.last(),
    });
    match out {
        Some(path) => {
            let text = serde_json::to_string_pretty(&traj).expect("json");
            std::fs::write(path, text).map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
            outputs["trajectory_file"] = json!(path.display().to_string());
        }
        None => outputs["trajectory"] = serde_json::to_value(&traj).expect("json"),
    }
    Ok((outputs, EXIT_OK))
}

pub fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Build { instance } => with_valid("build", instance, build),
        Command::Reduce { instance, point, order, sigma } => {
            with_valid("reduce", instance, |l| reduce(l, *point, *order, sigma))
        }
        Command::Hamiltonians { instance } => with_valid("hamiltonians", instance, hamiltonians_cmd),
        Command::Omega { instance, pairs } => with_valid("omega", instance, |l| omega(l, *pairs)),
        Command::Certify { instance } => with_valid("certify", instance, certify_cmd),
        Command::Flow { instance, dir, steps, h, out } => {
            with_valid("flow", instance, |l| flow_cmd(l, dir, *steps, *h, out.as_deref()))
        }
        Command::Validate { instance } => {
            let loaded = load(instance)?;
            let diag = validate(&loaded.inst);
            let ok = diag.is_ok();
            let r = report("validate", Some(&loaded.digest), json!({ "ok": ok }), diagnostics_json(&diag));
            Ok(Outcome { report: r, code: if ok { EXIT_OK } else { EXIT_INVALID } })
        }
        Command::Reproduce { which, seed, samples } => {
            let rep = match which {
                Example::DoublePoles => reproduce_double_poles(*seed, *samples)?,
                Example::Kimura => reproduce_kimura(*seed, *samples)?,
            };
            let code = if rep.ok { EXIT_OK } else { EXIT_DISCREPANCY };
            let r = report("reproduce", None, serde_json::to_value(&rep).expect("json"), Vec::new());
            Ok(Outcome { report: r, code })
        }
    }
}
