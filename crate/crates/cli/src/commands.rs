use randlab::diagonal::{
    diagonalize_ce, diagonalize_complexity, escaping_counterexample, find_intervals, verify_kraft_witnesses,
    IntervalPlan, PlanMode, PlanViolation,
};
use randlab::functional::FunctionalViolation;
use randlab::omega::{build_solovay_test, compute_against, joint_horizon, OmegaOptions};
use randlab::reductions::{
    build_compressing_oracle, build_tree, compile_reduction, extract_bounded_test, extract_ml_test, normalize_test,
    NormalForm,
};
use randlab::{
    k_at_stage, kc_assign, omega_at_stage, settling_time, validate_functional, Approximation, Functional, KcRequest,
    MachineTable, Mode, Test, UseFunction,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{Diagonalization, FormArg, KindArg, MachineQuery, PlanArgs};
use crate::io::{parse_bits, read_json, write_json, write_lines, CliError, CliResult};

#[derive(Debug, Serialize, thiserror::Error)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum InputError {
    #[error("the interval plan does not fit f")]
    InvalidPlan { violations: Vec<PlanViolation> },
    #[error("functional {index} is not a valid table")]
    InvalidFunctional { index: usize, violations: Vec<FunctionalViolation> },
    #[error("{kind} extraction needs a {needs} functional")]
    KindMismatch { kind: &'static str, needs: &'static str },
}

/// Requests may be bare lengths or `{"length", "payload"}` objects.
#[derive(Deserialize)]
#[serde(untagged)]
enum RequestRepr {
    Length(usize),
    Full(KcRequest),
}

pub fn kc(input: &std::path::Path, out: Option<&std::path::Path>) -> CliResult<Value> {
    let reqs: Vec<RequestRepr> = read_json(input)?;
    let reqs: Vec<KcRequest> = reqs
        .into_iter()
        .map(|r| match r {
            RequestRepr::Length(l) => KcRequest::new(l, Default::default()),
            RequestRepr::Full(r) => r,
        })
        .collect();
    let state = kc_assign(&reqs).map_err(CliError::domain)?;
    let machine = state.to_machine();
    if let Some(path) = out {
        write_json(path, &machine)?;
    }
    Ok(json!({"assigned": state.assigned, "free_weight": state.free_weight, "machine": machine}))
}

pub fn machine(query: &MachineQuery) -> CliResult<Value> {
    match query {
        MachineQuery::K { machine, sigma, at } => {
            let m: MachineTable = read_json(machine)?;
            let sigma = parse_bits(sigma)?;
            let k = k_at_stage(&m, &sigma, *at).map_err(CliError::domain)?;
            Ok(json!({"sigma": sigma, "stage": at, "k": k}))
        }
        MachineQuery::Omega { machine, at } => {
            let m: MachineTable = read_json(machine)?;
            let omega = omega_at_stage(&m, *at).map_err(CliError::domain)?;
            Ok(json!({"stage": at, "omega": omega}))
        }
        MachineQuery::Settle { machine, t } => {
            let m: MachineTable = read_json(machine)?;
            let s = settling_time(&m, *t);
            Ok(json!({"t": t, "settling_time": s, "prefix": m.final_omega().binary_prefix(*t)}))
        }
    }
}

pub fn compile_test(
    input: &std::path::Path,
    mode: Mode,
    form: Option<FormArg>,
    out: Option<&std::path::Path>,
) -> CliResult<Value> {
    let t: Test = read_json(input)?;
    let form = match form {
        Some(FormArg::Kurtz) => NormalForm::Kurtz,
        Some(FormArg::Granular) => NormalForm::Granular,
        None if mode == Mode::Tt => NormalForm::Kurtz,
        None => NormalForm::Granular,
    };
    let normal = normalize_test(&t, form).map_err(CliError::domain)?;
    let tree = build_tree(&normal).map_err(CliError::domain)?;
    let phi = compile_reduction(&tree, mode);
    if let Some(path) = out {
        write_json(path, &phi)?;
    }
    let cuts = tree.cuts();
    let uses: Vec<usize> = cuts.iter().enumerate().map(|(s, c)| c - s).collect();
    Ok(json!({
        "lengths": normal.lengths,
        "q": tree.q,
        "p": tree.p,
        "cuts": cuts,
        "use_at_cuts": uses,
        "members": normal.members().count(),
        "functional": phi,
    }))
}

pub fn extract_test(
    input: &std::path::Path,
    kind: KindArg,
    depth: usize,
    cuts: &[usize],
    out: Option<&std::path::Path>,
) -> CliResult<Value> {
    let phi: Functional = read_json(input)?;
    let t = match kind {
        KindArg::Ml => extract_ml_test(&phi, depth),
        KindArg::Kurtz if phi.mode != Mode::Tt => {
            return Err(CliError::domain(InputError::KindMismatch { kind: "kurtz", needs: "tt" }))
        }
        KindArg::Granular if phi.mode != Mode::Wtt => {
            return Err(CliError::domain(InputError::KindMismatch { kind: "granular", needs: "wtt" }))
        }
        _ => extract_bounded_test(&phi, cuts),
    }
    .map_err(CliError::domain)?;
    if let Some(path) = out {
        write_json(path, &t)?;
    }
    Ok(json!({"test": t, "measures": t.level_measures()}))
}

pub fn compress(machine: &std::path::Path, x: &str, count: usize) -> CliResult<Value> {
    let m: MachineTable = read_json(machine)?;
    let x = parse_bits(x)?;
    let c = build_compressing_oracle(&m, &x, count).map_err(CliError::domain)?;
    Ok(json!({"oracle": c.oracle, "segments": c.segments, "gaps_hold": c.gaps_hold(), "functional": c.to_functional(&x)}))
}

fn load_plan(args: &PlanArgs, f: &UseFunction, count: usize, mode: PlanMode) -> CliResult<IntervalPlan> {
    let plan = if args.plan == "auto" {
        find_intervals(f, count, mode).map_err(CliError::domain)?
    } else {
        read_json(std::path::Path::new(&args.plan))?
    };
    let violations = plan.validate(f);
    if violations.is_empty() {
        Ok(plan)
    } else {
        Err(CliError::domain(InputError::InvalidPlan { violations }))
    }
}

pub fn diagonalize(construction: &Diagonalization) -> CliResult<Value> {
    match construction {
        Diagonalization::Ce { plan: args, functionals } => {
            let f: UseFunction = read_json(&args.f)?;
            let phis: Vec<Functional> = read_json(functionals)?;
            for (index, phi) in phis.iter().enumerate() {
                let violations = validate_functional(phi);
                if !violations.is_empty() {
                    return Err(CliError::domain(InputError::InvalidFunctional { index, violations }));
                }
            }
            let plan = load_plan(args, &f, phis.len(), PlanMode::SumGt2)?;
            let max_vis = phis.iter().map(Functional::last_stage).max().unwrap_or(0);
            let horizon = args.horizon.unwrap_or(max_vis + plan.end() + plan.count() + 1);
            let trace = diagonalize_ce(&f, &phis, &plan, horizon);
            if let Some(path) = &args.trace {
                write_lines(path, &trace.events)?;
            }
            let requirements: Vec<Value> = (0..phis.len().min(plan.count()))
                .map(|e| {
                    let counterexample = escaping_counterexample(&f, &phis[e], &plan, e, &trace);
                    json!({"requirement": e, "escaped": counterexample.is_none(), "counterexample": counterexample})
                })
                .collect();
            Ok(json!({
                "plan": plan,
                "horizon": horizon,
                "final_set": trace.final_set,
                "events": trace.events,
                "requirements": requirements,
                "kraft": verify_kraft_witnesses(&trace, &f),
            }))
        }
        Diagonalization::Complexity { plan: args, machine, count } => {
            let f: UseFunction = read_json(&args.f)?;
            let m: MachineTable = read_json(machine)?;
            let plan = load_plan(args, &f, *count, PlanMode::WeightedGt2e)?;
            let horizon = args.horizon.unwrap_or(m.horizon + plan.end() + plan.count() + 1);
            let run = diagonalize_complexity(&f, &m, &plan, horizon);
            if let Some(path) = &args.trace {
                write_lines(path, &run.trace.events)?;
            }
            Ok(json!({
                "plan": plan,
                "horizon": horizon,
                "all_satisfied": run.all_satisfied(),
                "ledger_consistent": run.ledger_consistent(),
                "run": run,
            }))
        }
    }
}

pub fn omega_reduce(
    machine: &std::path::Path,
    x: &std::path::Path,
    n: usize,
    opts: OmegaOptions,
) -> CliResult<Value> {
    let m: MachineTable = read_json(machine)?;
    let x: Approximation = read_json(x)?;
    let j = build_solovay_test(&m, &x, joint_horizon(&m, &x));
    let answer = compute_against(&m, &x, n, &j, opts).map_err(CliError::domain)?;
    Ok(json!({
        "prefix": answer.prefix,
        "bits_used": answer.bits_used,
        "t0": answer.t0,
        "g_literal": answer.g_literal,
        "g_envelope": answer.g_envelope,
        "audit": answer.audit,
        "solovay": {"items": j.items.len(), "weight": j.weight, "retirements": j.retirements.len()},
    }))
}
