//! Command implementations for the workbench binary. Each command builds a
//! deterministic text report (the golden-comparable artifact) together with
//! a machine-readable JSON report; the caller decides where they go.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde_json::json;
use thiserror::Error;

use relalg::gen::random_equivalence_on_x;
use relalg::symbolic::{
    closure_trace, deletion_is_sound, evaluate, normalize, Expr, TraceError,
};
use relalg::{
    star_report, verify_identity_suite, BundleDoc, ConstructionBundle, EpistemicModel,
    GroundSpace, ModelDoc, PointId, Relation, RelationDoc, Rng,
};

/// Errors of the input class: bad files, bad flags, unparsable expressions.
/// These exit with status 2, as opposed to failed checks which exit with 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("failed to read {}: {e}", path.display())))
}

/// A finished command: overall verdict, text artifact, JSON report.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub ok: bool,
    pub text: String,
    pub json: serde_json::Value,
}

/// `trace`: the staged symbolic closure, one canonical union per line.
pub fn trace(max_stages: usize) -> Result<CommandOutput, CliError> {
    match closure_trace(max_stages) {
        Ok(report) => {
            let text = report.golden_text();
            let json = json!({
                "stages": report.stage_lines(),
                "wordCounts": report.word_counts(),
                "fixpoint": report.fixpoint,
            });
            Ok(CommandOutput { ok: true, text, json })
        }
        Err(TraceError::NoFixpoint { max_stages }) => Ok(CommandOutput {
            ok: false,
            text: format!("no fixpoint within {max_stages} stages\n"),
            json: json!({ "error": "no-fixpoint", "maxStages": max_stages }),
        }),
    }
}

struct Counter {
    name: &'static str,
    passed: usize,
    total: usize,
}

impl Counter {
    fn new(name: &'static str) -> Self {
        Counter { name, passed: 0, total: 0 }
    }

    fn record(&mut self, ok: bool) -> bool {
        self.total += 1;
        if ok {
            self.passed += 1;
        }
        ok
    }

    fn ok(&self) -> bool {
        self.passed == self.total
    }

    fn line(&self) -> String {
        format!("{}: {}/{}", self.name, self.passed, self.total)
    }
}

/// `verify`: seeded random equivalence relations of carrier size
/// `1..=size`, each driven through the identity suite, idempotence and
/// equivalence checks, the closure restriction, and the symbolic-concrete
/// bridge; with `audit`, every normalization deletion is containment-checked
/// on every instance.
pub fn verify(size: usize, count: usize, seed: u64, audit: bool) -> Result<CommandOutput, CliError> {
    if size == 0 {
        return Err(CliError::input("--size must be at least 1"));
    }
    let report = match closure_trace(64) {
        Ok(r) => r,
        Err(e) => {
            return Ok(CommandOutput {
                ok: false,
                text: format!("verify: {e}\n"),
                json: json!({ "error": e.to_string() }),
            })
        }
    };

    let mut identity = Counter::new("identity suite");
    let mut idempotence = Counter::new("idempotence");
    let mut equivalence = Counter::new("equivalence");
    let mut restriction = Counter::new("closure restriction");
    let mut bridge = Counter::new("soundness bridge");
    let mut audit_counter = Counter::new("deletion audit");
    let mut max_stage = 0usize;
    let mut first_failure: Option<String> = None;
    let fail = |slot: &mut Option<String>, msg: String| {
        if slot.is_none() {
            *slot = Some(msg);
        }
    };

    let mut rng = Rng::new(seed);
    for instance in 0..count {
        let x_size = 1 + rng.below(size);
        let space = GroundSpace::with_auto_y((1..=x_size).map(|i| format!("x{i}")))
            .expect("generated names are unique");
        let e = random_equivalence_on_x(&space, &mut rng);
        let bundle = ConstructionBundle::for_equivalence(&e)
            .expect("random equivalence relations satisfy the entry contract");
        let describe = || format!("instance {instance} (|X| = {x_size}, |E| = {})", e.len());

        let suite = verify_identity_suite(&bundle)
            .expect("bundle spaces generate all triples");
        for check in &suite.checks {
            if !identity.record(check.holds) {
                fail(
                    &mut first_failure,
                    format!(
                        "{}: {} failed: {}",
                        describe(),
                        check.name,
                        check.counterexample.as_deref().unwrap_or("no witness")
                    ),
                );
            }
        }

        let i2 = bundle.i().power(2).expect("positive power");
        if !idempotence.record(&i2 == bundle.i()) {
            fail(&mut first_failure, format!("{}: I∘I ≠ I", describe()));
        }
        let j2 = bundle.j().power(2).expect("positive power");
        if !idempotence.record(&j2 == bundle.j()) {
            fail(&mut first_failure, format!("{}: J∘J ≠ J", describe()));
        }

        let omega: BTreeSet<PointId> = space.points().collect();
        if !equivalence.record(bundle.i().is_equivalence(&omega)) {
            fail(&mut first_failure, format!("{}: I is not an equivalence", describe()));
        }
        if !equivalence.record(bundle.j().is_equivalence(&omega)) {
            fail(&mut first_failure, format!("{}: J is not an equivalence", describe()));
        }

        let closure = bundle.i_union_j().transitive_closure();
        max_stage = max_stage.max(closure.stages);
        let x: BTreeSet<PointId> = space.x_points().collect();
        let restricted = closure.relation.restrict(&x).expect("X belongs to the space");
        if !restriction.record(closure.stages <= 5 && restricted == e) {
            fail(
                &mut first_failure,
                format!("{}: closure restriction failed at stage {}", describe(), closure.stages),
            );
        }

        let iuj = bundle.i_union_j();
        for (k, stage) in report.stages.iter().enumerate() {
            let symbolic = evaluate(&bundle, stage);
            let concrete = iuj.power(k + 1).expect("positive power");
            if !bridge.record(symbolic == concrete) {
                fail(
                    &mut first_failure,
                    format!("{}: stage {} differs from the concrete power", describe(), k + 1),
                );
            }
        }

        if audit {
            for (stage, deletion) in &report.deletions {
                if !audit_counter.record(deletion_is_sound(&bundle, deletion)) {
                    fail(
                        &mut first_failure,
                        format!("{}: unsound deletion at stage {stage}: {deletion}", describe()),
                    );
                }
            }
        }
    }

    let counters = [&identity, &idempotence, &equivalence, &restriction, &bridge];
    let ok = counters.iter().all(|c| c.ok()) && (!audit || audit_counter.ok());

    let mut text = format!(
        "verify: size={size} count={count} seed={seed} audit={}\n",
        if audit { "on" } else { "off" }
    );
    for c in counters {
        text.push_str(&c.line());
        text.push('\n');
    }
    if audit {
        text.push_str(&audit_counter.line());
        text.push('\n');
    }
    text.push_str(&format!("max closure stage: {max_stage}\n"));
    if let Some(f) = &first_failure {
        text.push_str(&format!("first counterexample: {f}\n"));
    }
    text.push_str(&format!("result: {}\n", if ok { "PASS" } else { "FAIL" }));

    let json = json!({
        "config": { "size": size, "count": count, "seed": seed, "audit": audit },
        "identitySuite": { "passed": identity.passed, "total": identity.total },
        "idempotence": { "passed": idempotence.passed, "total": idempotence.total },
        "equivalence": { "passed": equivalence.passed, "total": equivalence.total },
        "closureRestriction": { "passed": restriction.passed, "total": restriction.total },
        "soundnessBridge": { "passed": bridge.passed, "total": bridge.total },
        "deletionAudit": if audit {
            json!({ "passed": audit_counter.passed, "total": audit_counter.total })
        } else {
            serde_json::Value::Null
        },
        "maxClosureStage": max_stage,
        "firstCounterexample": first_failure,
        "pass": ok,
    });
    Ok(CommandOutput { ok, text, json })
}

fn format_event(model: &EpistemicModel, event: &BTreeSet<PointId>) -> String {
    let ids = model.event_ids(event);
    format!("{{{}}}", ids.join(","))
}

/// `ck`: knowledge and common-knowledge events for a model file. Each event
/// is a JSON list of state ids (inline or `@file`). The meet/iteration
/// agreement is additionally checked over every event when the state set is
/// small enough to enumerate.
pub fn ck(input: &Path, event_args: &[String]) -> Result<CommandOutput, CliError> {
    let doc: ModelDoc = serde_json::from_str(&read_to_string(input)?)
        .map_err(|e| CliError::Input(format!("invalid model file {}: {e}", input.display())))?;
    let model = EpistemicModel::from_doc(&doc)
        .map_err(|e| CliError::Input(format!("invalid model {}: {e}", input.display())))?;

    let mut events = Vec::new();
    for arg in event_args {
        let raw = if let Some(path) = arg.strip_prefix('@') {
            read_to_string(Path::new(path))?
        } else {
            arg.clone()
        };
        let ids: Vec<String> = serde_json::from_str(&raw)
            .map_err(|e| CliError::Input(format!("invalid event {arg:?}: {e}")))?;
        let event = model
            .event_from_ids(ids.iter().map(String::as_str))
            .map_err(|e| CliError::Input(format!("invalid event {arg:?}: {e}")))?;
        events.push(event);
    }

    let meet = model.meet();
    let state_count = model.states().len();
    let mut ok = true;

    let mut text = format!("ck: states={state_count} agents={}\n", model.agents().len());
    let meet_blocks: Vec<String> = meet
        .blocks()
        .iter()
        .map(|b| format_event(&model, b))
        .collect();
    text.push_str(&format!("meet: {}\n", meet_blocks.join(" ")));

    let mut event_reports = Vec::new();
    for event in &events {
        text.push_str(&format!("event {}:\n", format_event(&model, event)));
        let mut knows_map = serde_json::Map::new();
        for (agent, partition) in model.agents().iter().zip(model.partitions()) {
            let known = relalg::knows(event, partition);
            text.push_str(&format!("  knows[{agent}] = {}\n", format_event(&model, &known)));
            knows_map.insert(agent.clone(), json!(model.event_ids(&known)));
        }
        let everyone = model.everyone_knows(event);
        let via_meet = model.common_knowledge_meet(event);
        let via_iteration = model.common_knowledge_iterated(event);
        let agrees = via_meet == via_iteration;
        ok &= agrees;
        text.push_str(&format!("  everyone-knows = {}\n", format_event(&model, &everyone)));
        text.push_str(&format!("  common-knowledge = {}\n", format_event(&model, &via_meet)));
        text.push_str(&format!(
            "  iterated = {} ({})\n",
            format_event(&model, &via_iteration),
            if agrees { "agrees" } else { "DISAGREES" }
        ));
        event_reports.push(json!({
            "event": model.event_ids(event),
            "knows": knows_map,
            "everyoneKnows": model.event_ids(&everyone),
            "commonKnowledge": model.event_ids(&via_meet),
            "iterated": model.event_ids(&via_iteration),
            "agrees": agrees,
        }));
    }

    // exhaustive agreement check when the power set is tractable
    let mut sweep = serde_json::Value::Null;
    if state_count <= 12 {
        let states: Vec<PointId> = model.states().into_iter().collect();
        let mut checked = 0usize;
        let mut agreed = 0usize;
        for mask in 0u32..(1 << state_count) {
            let event: BTreeSet<PointId> = states
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .collect();
            checked += 1;
            if model.common_knowledge_meet(&event) == model.common_knowledge_iterated(&event) {
                agreed += 1;
            }
        }
        ok &= agreed == checked;
        text.push_str(&format!(
            "meet/iteration agreement over all {checked} events: {}\n",
            if agreed == checked { "PASS" } else { "FAIL" }
        ));
        sweep = json!({ "checked": checked, "agreed": agreed });
    }
    text.push_str(&format!("result: {}\n", if ok { "PASS" } else { "FAIL" }));

    let json = json!({
        "states": state_count,
        "agents": model.agents(),
        "meet": meet.blocks().iter().map(|b| model.event_ids(b)).collect::<Vec<_>>(),
        "events": event_reports,
        "agreementSweep": sweep,
        "pass": ok,
    });
    Ok(CommandOutput { ok, text, json })
}

/// `star`: cover analysis of the hub relation on `n` points.
pub fn star(n: usize) -> Result<CommandOutput, CliError> {
    let report = star_report(n).map_err(|e| CliError::Input(e.to_string()))?;
    let mut text = format!("star: n={n}\n");
    text.push_str(&format!("family size: {}\n", report.family_size));
    text.push_str(&format!("min cover size: {}\n", report.min_cover));
    match report.exhaustive_min_cover {
        Some(found) => text.push_str(&format!("exhaustive search: min cover {found}\n")),
        None => text.push_str("exhaustive search: skipped (n > 5)\n"),
    }
    text.push_str(&format!("uniqueness: {}\n", report.uniqueness_note));
    text.push_str(&format!("result: {}\n", if report.pass { "PASS" } else { "FAIL" }));
    let ok = report.pass;
    let json = serde_json::to_value(&report).expect("report serializes");
    Ok(CommandOutput { ok, text, json })
}

fn load_bundle(path: &Path) -> Result<ConstructionBundle, CliError> {
    let doc: BundleDoc = serde_json::from_str(&read_to_string(path)?)
        .map_err(|e| CliError::Input(format!("invalid bundle file {}: {e}", path.display())))?;
    ConstructionBundle::from_doc(&doc)
        .map_err(|e| CliError::Input(format!("invalid bundle {}: {e}", path.display())))
}

/// `eval`: parse a composition expression and evaluate it on a bundle.
pub fn eval(expr_text: &str, input: &Path) -> Result<CommandOutput, CliError> {
    let expr = Expr::parse(expr_text)
        .map_err(|e| CliError::Input(format!("cannot parse {expr_text:?}: {e}")))?;
    let bundle = load_bundle(input)?;
    let value = evaluate(&bundle, &expr);
    let normal = normalize(&expr);

    let mut text = format!("eval: {expr_text}\n");
    text.push_str(&format!("parsed: {expr}\n"));
    text.push_str(&format!("normalized: {normal}\n"));
    text.push_str(&format!("pairs: {}\n", value.len()));
    for [a, b] in value.pair_ids() {
        text.push_str(&format!("  ({a}, {b})\n"));
    }
    let json = json!({
        "expr": expr_text,
        "parsed": expr.to_string(),
        "normalized": normal.to_string(),
        "pairCount": value.len(),
        "pairs": value.pair_ids(),
    });
    Ok(CommandOutput { ok: true, text, json })
}

/// `bundle`: build a construction bundle — from a seeded random equivalence
/// relation, or from a relation file supplying `E` — and emit it as JSON.
pub fn bundle(
    size: Option<usize>,
    seed: u64,
    input: Option<&Path>,
) -> Result<CommandOutput, CliError> {
    let e = match (size, input) {
        (Some(_), Some(_)) => {
            return Err(CliError::input("--size and --input are mutually exclusive"))
        }
        (Some(n), None) => {
            if n == 0 {
                return Err(CliError::input("--size must be at least 1"));
            }
            let space = GroundSpace::with_auto_y((1..=n).map(|i| format!("x{i}")))
                .expect("generated names are unique");
            let mut rng = Rng::new(seed);
            random_equivalence_on_x(&space, &mut rng)
        }
        (None, Some(path)) => {
            let doc: RelationDoc = serde_json::from_str(&read_to_string(path)?).map_err(|e| {
                CliError::Input(format!("invalid relation file {}: {e}", path.display()))
            })?;
            // rebuild over a space with the full triple cube
            let x_ids = doc.space.x.clone();
            let space = GroundSpace::with_auto_y(x_ids)
                .map_err(|e| CliError::Input(e.to_string()))?;
            Relation::pairs_from_doc(&space, &doc.pairs)
                .map_err(|e| CliError::Input(e.to_string()))?
        }
        (None, None) => return Err(CliError::input("give either --size or --input")),
    };
    let bundle = ConstructionBundle::for_equivalence(&e)
        .map_err(|e| CliError::Input(format!("cannot build bundle: {e}")))?;
    let doc = bundle.to_doc();
    let space = bundle.space();

    let text = format!(
        "bundle: |X|={} |Y|={} |E|={} |F|={} |G|={} |H|={} |I|={} |J|={}\n",
        space.x_count(),
        space.y_count(),
        bundle.e().len(),
        bundle.f().len(),
        bundle.g().len(),
        bundle.h().len(),
        bundle.i().len(),
        bundle.j().len(),
    );
    let json = serde_json::to_value(&doc).expect("bundle serializes");
    Ok(CommandOutput { ok: true, text, json })
}

/// Write the two report files next to each other: `<prefix>.txt` holds the
/// byte-exact text artifact, `<prefix>.json` the machine report.
pub fn write_reports(prefix: &Path, out: &CommandOutput) -> Result<(), CliError> {
    if let Some(dir) = prefix.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
        }
    }
    let txt = prefix.with_extension("txt");
    fs::write(&txt, &out.text)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", txt.display())))?;
    let json_path = prefix.with_extension("json");
    let mut body = serde_json::to_string_pretty(&out.json).expect("reports serialize");
    body.push('\n');
    fs::write(&json_path, body)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", json_path.display())))?;
    Ok(())
}
