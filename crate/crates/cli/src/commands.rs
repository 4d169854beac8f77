use fsig_core::bounds::{pi1_order_bound, purity_check, purity_verdict, BoundReport, PurityVerdict, SValue};
use fsig_core::covers::{
    chain_simulation, count_trace_summands, doubling_check, verify_note_trace, verify_transformation, Backend,
    ChainReport, CoverSummary, DoublingReport, NoteTraceReport, VerificationReport,
};
use fsig_core::frobenius::{fsig_sequence, SplittingSequence};
use fsig_core::rational::{serde_fraction, to_f64, to_fraction_string};
use fsig_core::toric::{toric_fsig_exact, toric_fsig_sequence};
use fsig_core::{Budget, Error, Rational, DEFAULT_E_MAX};
use serde::Serialize;

use crate::spec::{BackendChoice, Model, SpecDocument};
use crate::table::Table;
use crate::CliError;

pub struct Settings {
    pub e_max: u32,
    pub backend: BackendChoice,
    pub budget: Budget,
}

impl Settings {
    pub fn resolve(doc: &SpecDocument, e_max: Option<u32>, backend: Option<BackendChoice>, budget: Option<f64>) -> Self {
        let e_max = e_max.or(doc.options.e_max).unwrap_or(DEFAULT_E_MAX);
        let backend = backend.or(doc.options.backend).unwrap_or_default();
        let budget = match budget.or(doc.options.time_budget_secs) {
            Some(secs) => Budget::from_secs(secs),
            None => Budget::unlimited(),
        };
        Settings { e_max, backend, budget }
    }
}

/// A rendered command result: the JSON payload, the human table, and any
/// failed checks that turn into exit code 4.
pub struct Outcome {
    pub json: String,
    pub table: String,
    pub failures: Vec<String>,
}

fn outcome<T: Serialize>(report: &T, table: String, failures: Vec<String>) -> Result<Outcome, CliError> {
    let json = serde_json::to_string_pretty(report).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(Outcome { json, table, failures })
}

fn exact_and_decimal(r: &Rational) -> (String, String) {
    (to_fraction_string(r), format!("{:.6}", to_f64(r)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum UsedBackend {
    ToricExact,
    /// Lattice-point counts on the toric model.
    ToricSequence,
    /// Frobenius-power colon ideals on a presented ring.
    Sequence,
}

enum SignatureData {
    Exact(Rational),
    Sequence(Box<SplittingSequence>),
}

fn signature(model: &Model, settings: &Settings) -> Result<(UsedBackend, SignatureData), CliError> {
    let toric = model.toric();
    match (settings.backend, toric) {
        (BackendChoice::Auto | BackendChoice::Toric, Some((ring, delta))) => {
            Ok((UsedBackend::ToricExact, SignatureData::Exact(toric_fsig_exact(ring, delta)?)))
        }
        (BackendChoice::Toric, None) => {
            Err(CliError::Input("backend: toric needs a toric ring or a regular ring with coordinate pairs".into()))
        }
        (_, _) => match model {
            Model::Toric { ring, delta } => {
                let seq = toric_fsig_sequence(ring, delta.as_ref(), settings.e_max, &settings.budget)?;
                Ok((UsedBackend::ToricSequence, SignatureData::Sequence(Box::new(seq))))
            }
            Model::Presented { ring, pair, .. } => {
                let seq = fsig_sequence(ring, pair, settings.e_max, &settings.budget)?;
                Ok((UsedBackend::Sequence, SignatureData::Sequence(Box::new(seq))))
            }
        },
    }
}

#[derive(Serialize)]
struct ComputeReport {
    command: &'static str,
    backend: UsedBackend,
    p: u64,
    #[serde(with = "serde_fraction")]
    s: Rational,
    exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    sequence: Option<SplittingSequence>,
}

pub fn compute(doc: &SpecDocument, settings: &Settings) -> Result<Outcome, CliError> {
    let model = doc.model()?;
    let (backend, data) = signature(&model, settings)?;
    let mut table = Table::new(&["e", "q", "a_e", "a_e/q^d", "decimal"]);
    let (s, exact, sequence) = match data {
        SignatureData::Exact(s) => {
            let (frac, dec) = exact_and_decimal(&s);
            return outcome(
                &ComputeReport { command: "compute", backend, p: model.p(), s, exact: true, sequence: None },
                format!("s = {frac} ({dec})  [backend: toric_exact]\n"),
                Vec::new(),
            );
        }
        SignatureData::Sequence(seq) => {
            for r in &seq.records {
                let (frac, dec) = exact_and_decimal(&r.normalized);
                table.row(vec![r.e.to_string(), r.q.to_string(), r.a_e.to_string(), frac, dec]);
            }
            let s = SValue::from_sequence(&seq);
            (s.value().clone(), s.is_exact(), *seq)
        }
    };
    let mut text = table.render();
    let est = &sequence.estimate;
    if let Some(x) = &est.extrapolation {
        let (frac, dec) = exact_and_decimal(x);
        text.push_str(&format!("extrapolation (1/q model): {frac} ({dec})\n"));
    }
    if let Some(e) = sequence.vanishes_from {
        text.push_str(&format!("a_e vanishes from e = {e}: s = 0\n"));
    }
    let (lo, hi) = (exact_and_decimal(&est.low), exact_and_decimal(&est.high));
    text.push_str(&format!("estimate range: [{}, {}]  [backend: {}]\n", lo.1, hi.1, backend_name(backend)));
    outcome(
        &ComputeReport { command: "compute", backend, p: model.p(), s, exact, sequence: Some(sequence) },
        text,
        Vec::new(),
    )
}

fn backend_name(b: UsedBackend) -> &'static str {
    match b {
        UsedBackend::ToricExact => "toric_exact",
        UsedBackend::ToricSequence => "toric_sequence",
        UsedBackend::Sequence => "sequence",
    }
}

#[derive(Serialize)]
struct VerifyReport {
    command: &'static str,
    cover: CoverSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    claimed_degree: Option<u64>,
    transformation: Option<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transformation_error: Option<String>,
    doubling: Option<DoublingReport>,
    note_trace: NoteTraceReport,
    trace_summands: u64,
    all_pass: bool,
}

pub fn verify(doc: &SpecDocument, settings: &Settings) -> Result<Outcome, CliError> {
    let (cover, claimed, delta) = doc.cover()?;
    let backend = match settings.backend {
        BackendChoice::Auto | BackendChoice::Toric => Backend::ToricExact,
        BackendChoice::Sequence => Backend::Sequence { e_max: settings.e_max },
    };
    let mut failures = Vec::new();
    if let Some(d) = claimed {
        if d != cover.degree {
            failures.push(format!("degree mismatch: spec claims {d}, the cover has degree {}", cover.degree));
        }
    }
    let (transformation, transformation_error) =
        match verify_transformation(&cover, delta.as_ref(), backend, &settings.budget) {
            Ok(r) => {
                if !r.holds {
                    failures.push(format!("transformation rule fails: {} != {}", r.lhs, r.rhs));
                }
                (Some(r), None)
            }
            Err(Error::NotEffective { facet, coefficient }) => {
                let msg = format!("boundary on the cover is not effective along facet {facet} (coefficient {coefficient})");
                failures.push(msg.clone());
                (None, Some(msg))
            }
            Err(e) => return Err(e.into()),
        };
    let doubling = if cover.etale_in_codim_one { Some(doubling_check(&cover)?) } else { None };
    if let Some(d) = &doubling {
        if !d.holds {
            failures.push(format!("doubling fails: {} < 2*{}", d.s_upper, d.s_lower));
        }
    }
    let note_trace = verify_note_trace(&cover);
    if !note_trace.passed {
        failures.push("trace of the maximal ideal leaves the maximal ideal".into());
    }
    let trace_summands = count_trace_summands(&cover);
    if cover.trace.is_surjective() && trace_summands != 1 {
        failures.push(format!("expected one trace summand, found {trace_summands}"));
    }

    let mut table = Table::new(&["check", "result", "detail"]);
    let pass = |ok: bool| if ok { "pass" } else { "FAIL" }.to_string();
    table.row(vec![
        "degree".into(),
        pass(claimed.is_none_or(|d| d == cover.degree)),
        match claimed {
            Some(d) => format!("claimed {d}, actual {}", cover.degree),
            None => format!("{}", cover.degree),
        },
    ]);
    match (&transformation, &transformation_error) {
        (Some(r), _) => table.row(vec![
            "transformation".into(),
            pass(r.holds),
            format!(
                "f*s(S) = {} ({:.6}), [L:K]*s(R) = {} ({:.6})",
                to_fraction_string(&r.lhs),
                to_f64(&r.lhs),
                to_fraction_string(&r.rhs),
                to_f64(&r.rhs)
            ),
        ]),
        (None, Some(msg)) => table.row(vec!["transformation".into(), "FAIL".into(), msg.clone()]),
        (None, None) => unreachable!("either a report or an error"),
    }
    match &doubling {
        Some(d) if d.applicable => table.row(vec![
            "doubling".into(),
            pass(d.holds),
            format!("s(S) = {}, 2*s(R) = {}", to_fraction_string(&d.s_upper), to_fraction_string(&(&d.s_lower * Rational::from_integer(2.into())))),
        ]),
        Some(_) => table.row(vec!["doubling".into(), "pass".into(), "vacuous: étale".into()]),
        None => table.row(vec!["doubling".into(), "n/a".into(), "ramified in codimension one".into()]),
    }
    table.row(vec!["trace of n in m".into(), pass(note_trace.passed), format!("{} generators", note_trace.evidence.len())]);
    table.row(vec![
        "trace summands".into(),
        pass(!cover.trace.is_surjective() || trace_summands == 1),
        trace_summands.to_string(),
    ]);
    let report = VerifyReport {
        command: "verify",
        cover: cover.summary(),
        claimed_degree: claimed,
        transformation,
        transformation_error,
        doubling,
        note_trace,
        trace_summands,
        all_pass: failures.is_empty(),
    };
    outcome(&report, table.render(), failures)
}

#[derive(Serialize)]
struct BoundsReport {
    command: &'static str,
    backend: UsedBackend,
    bound: BoundReport,
    purity: PurityVerdict,
}

fn svalue(model: &Model, settings: &Settings) -> Result<(UsedBackend, SValue), CliError> {
    let (backend, data) = signature(model, settings)?;
    let s = match data {
        SignatureData::Exact(s) => SValue::exact(s),
        SignatureData::Sequence(seq) => SValue::from_sequence(&seq),
    };
    Ok((backend, s))
}

pub fn bounds(doc: &SpecDocument, settings: &Settings) -> Result<Outcome, CliError> {
    let model = doc.model()?;
    let (backend, s) = svalue(&model, settings)?;
    let bound = pi1_order_bound(&s, model.p())?;
    let purity = purity_verdict(&s, model.p());
    let mut table = Table::new(&["quantity", "exact", "decimal"]);
    let (frac, dec) = exact_and_decimal(&bound.s);
    table.row(vec![if bound.exact { "s" } else { "s (estimate)" }.into(), frac, dec]);
    let label = if bound.exact { "order bound floor(1/s)" } else { "order bound (provisional)" };
    table.row(vec![label.into(), bound.bound.to_string(), String::new()]);
    if let Some((lo, hi)) = bound.provisional_range {
        table.row(vec!["provisional range".into(), format!("{lo}..{hi}"), String::new()]);
    }
    let shown: Vec<String> = bound.admissible_degrees.iter().take(12).map(u64::to_string).collect();
    table.row(vec![format!("degrees prime to {}", bound.prime_to_p), shown.join(","), String::new()]);
    table.row(vec![
        format!("purity forced (s > {})", to_fraction_string(&purity.threshold)),
        purity.purity_forced.to_string(),
        String::new(),
    ]);
    outcome(&BoundsReport { command: "bounds", backend, bound, purity }, table.render(), Vec::new())
}

pub fn chain(doc: &SpecDocument, settings: &Settings) -> Result<Outcome, CliError> {
    let Some(crate::spec::RingJson::Quotient { n, weights, p }) = &doc.ring else {
        return Err(CliError::Input("ring: chain needs a quotient ring".into()));
    };
    doc.model()?;
    let report: ChainReport = chain_simulation(*n, weights, *p, &settings.budget)?;
    let mut text = String::new();
    for (i, c) in report.chains.iter().enumerate() {
        let orders: Vec<String> = c.orders.iter().map(u64::to_string).collect();
        text.push_str(&format!("chain {} ({}), stabilization index {}\n", i + 1, orders.join(" > "), c.stabilization_index));
        let mut table = Table::new(&["group", "s", "decimal", "step degree", "etale c1", "rule", "doubling"]);
        let (frac, dec) = exact_and_decimal(&report.s_start);
        table.row(vec![format!("mu_{}", c.orders[0]), frac, dec, "-".into(), "-".into(), "-".into(), "-".into()]);
        for s in &c.steps {
            let (frac, dec) = exact_and_decimal(&s.s_upper);
            table.row(vec![
                format!("mu_{}", s.to),
                frac,
                dec,
                s.degree.to_string(),
                s.etale_in_codim_one.to_string(),
                if s.etale_in_codim_one { s.transformation_holds.to_string() } else { "n/a".into() },
                if s.etale_in_codim_one { s.doubling_holds.to_string() } else { "n/a".into() },
            ]);
        }
        text.push_str(&table.render());
    }
    let failures = if report.all_pass { Vec::new() } else { vec!["a chain step failed its checks".into()] };
    outcome(&report, text, failures)
}

#[derive(Serialize)]
struct PurityOutput {
    command: &'static str,
    backend: UsedBackend,
    verdict: PurityVerdict,
    /// Present for toric rings, where covers étale in codimension one are
    /// searched for.
    #[serde(skip_serializing_if = "Option::is_none")]
    covers_found: Option<Vec<u64>>,
    consistent: bool,
}

pub fn purity(doc: &SpecDocument, settings: &Settings) -> Result<Outcome, CliError> {
    let model = doc.model()?;
    let out = match (&model, settings.backend) {
        (Model::Toric { ring, delta: None }, BackendChoice::Auto | BackendChoice::Toric) => {
            let r = purity_check(ring)?;
            PurityOutput {
                command: "purity",
                backend: UsedBackend::ToricExact,
                verdict: r.verdict,
                covers_found: Some(r.covers_found),
                consistent: r.consistent,
            }
        }
        _ => {
            let (backend, s) = svalue(&model, settings)?;
            PurityOutput { command: "purity", backend, verdict: purity_verdict(&s, model.p()), covers_found: None, consistent: true }
        }
    };
    let mut table = Table::new(&["quantity", "value"]);
    let (frac, dec) = exact_and_decimal(&out.verdict.s);
    table.row(vec![if out.verdict.exact { "s" } else { "s (estimate)" }.into(), format!("{frac} ({dec})")]);
    table.row(vec!["threshold".into(), to_fraction_string(&out.verdict.threshold)]);
    table.row(vec!["purity forced".into(), out.verdict.purity_forced.to_string()]);
    if let Some(c) = &out.covers_found {
        let shown: Vec<String> = c.iter().map(u64::to_string).collect();
        table.row(vec!["cover degrees found".into(), format!("[{}]", shown.join(","))]);
    }
    let failures = if out.consistent { Vec::new() } else { vec!["purity forced yet a cover was found".into()] };
    outcome(&out, table.render(), failures)
}
