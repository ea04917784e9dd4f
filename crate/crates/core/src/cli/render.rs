//! JSON, CSV and text renderings of reports, sweep tables and verify runs.
//!
//! Numbers are rounded to 12 significant digits in every format, so equal
//! inputs give byte-identical output.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::models::{ModelReport, SweepTable};
use crate::number::{format_sig, round_sig};
use crate::oracle::VerifyReport;
use crate::prob::RandomVar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" => Ok(OutputFormat::Text),
            other => Err(Error::invalid(
                "format",
                format!("expected json, csv or text, got {other:?}"),
            )),
        }
    }
}

/// Replaces every float in a JSON tree with its 12-digit rounding.
fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(if x == 0.0 { 0.0 } else { x })
                .map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut tree = serde_json::to_value(value).map_err(|e| Error::Internal(e.to_string()))?;
    round_json(&mut tree);
    let mut text =
        serde_json::to_string_pretty(&tree).map_err(|e| Error::Internal(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

#[derive(Debug, Clone, PartialEq)]
enum Cell {
    Num(f64),
    Flag(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_sig(*v),
            Cell::Flag(b) => b.to_string(),
            Cell::Text(t) => t.clone(),
        }
    }
}

/// One flattened line of a report.
#[derive(Debug, Clone, PartialEq)]
struct Row {
    kind: &'static str,
    name: String,
    value: Cell,
    atoms: Option<Vec<f64>>,
}

fn scalar(kind: &'static str, name: impl Into<String>, v: f64) -> Row {
    Row {
        kind,
        name: name.into(),
        value: Cell::Num(v),
        atoms: None,
    }
}

fn flag(kind: &'static str, name: impl Into<String>, b: bool) -> Row {
    Row {
        kind,
        name: name.into(),
        value: Cell::Flag(b),
        atoms: None,
    }
}

fn text(kind: &'static str, name: impl Into<String>, t: impl Into<String>) -> Row {
    Row {
        kind,
        name: name.into(),
        value: Cell::Text(t.into()),
        atoms: None,
    }
}

/// A per-atom variable; the value column stays empty.
fn variable(kind: &'static str, name: impl Into<String>, x: &RandomVar) -> Row {
    Row {
        kind,
        name: name.into(),
        value: Cell::Text(String::new()),
        atoms: Some(x.values().to_vec()),
    }
}

fn event(name: &str, members: &[String], atoms: &[String]) -> Row {
    let indicator = atoms
        .iter()
        .map(|a| if members.contains(a) { 1.0 } else { 0.0 })
        .collect();
    Row {
        kind: "event",
        name: name.into(),
        value: Cell::Text(members.join(" ")),
        atoms: Some(indicator),
    }
}

fn report_rows(r: &ModelReport) -> Vec<Row> {
    let mut rows = vec![scalar("input", "capital", r.capital)];
    let per_agent = |rows: &mut Vec<Row>, label: &str, values: &[f64]| {
        for (agent, &v) in r.agents.iter().zip(values) {
            rows.push(scalar("premium", format!("{label}.{agent}"), v));
        }
    };
    per_agent(&mut rows, "fair", &r.premia.fair);
    rows.push(scalar("premium", "fair_total", r.premia.fair_total));
    if let Some(fr) = &r.premia.reinsurer_fair {
        per_agent(&mut rows, "reinsurer_fair", fr);
    }
    per_agent(&mut rows, "charged", &r.premia.charged);
    rows.push(scalar("premium", "charged_total", r.premia.charged_total));
    per_agent(&mut rows, "premium_input", &r.premia.premium_input);
    per_agent(&mut rows, "capital_input", &r.premia.capital_input);

    if let Some(sol) = &r.retention {
        rows.push(scalar("retention", "retention", sol.retention));
        rows.push(scalar(
            "retention",
            "retained_premium",
            sol.retained_premium,
        ));
        rows.push(scalar("retention", "ceded_premium", sol.ceded_premium));
        rows.push(flag("retention", "beyond_max_claim", sol.beyond_max_claim));
    }
    if let Some(ev) = &r.events {
        rows.push(event("A", &ev.a, &r.atoms));
        rows.push(event("B", &ev.b, &r.atoms));
        rows.push(event("C", &ev.c, &r.atoms));
    }
    if let Some(sh) = &r.shares {
        rows.push(scalar("share", "insurer", sh.insurer));
        for (agent, &v) in r.agents.iter().zip(&sh.agents) {
            rows.push(scalar("share", agent.clone(), v));
        }
        rows.push(flag("share", "degenerate", sh.degenerate));
    }

    rows.push(variable("variable", "surplus", &r.surplus));
    for p in &r.payoffs {
        rows.push(variable("payoff", p.party.clone(), &p.payoff));
    }
    for v in &r.verdicts {
        rows.push(scalar("verdict", format!("{}.utility", v.party), v.utility));
        rows.push(scalar(
            "verdict",
            format!("{}.benchmark", v.party),
            v.benchmark,
        ));
        rows.push(scalar("verdict", format!("{}.gap", v.party), v.gap));
        rows.push(flag("verdict", format!("{}.accepted", v.party), v.accepted));
    }
    for b in &r.premium_bounds {
        rows.push(scalar(
            "bound",
            format!("{}.sufficient_bound", b.agent),
            b.sufficient_bound,
        ));
        rows.push(flag(
            "bound",
            format!("{}.within_sufficient_bound", b.agent),
            b.within_sufficient_bound,
        ));
        rows.push(scalar(
            "bound",
            format!("{}.agent_cap", b.agent),
            b.agent_cap,
        ));
        rows.push(flag(
            "bound",
            format!("{}.within_agent_cap", b.agent),
            b.within_agent_cap,
        ));
    }
    for id in &r.identities {
        rows.push(scalar("identity", format!("{}.lhs", id.name), id.lhs));
        rows.push(scalar("identity", format!("{}.rhs", id.name), id.rhs));
        rows.push(scalar(
            "identity",
            format!("{}.residual", id.name),
            id.residual,
        ));
    }

    let f = &r.flows;
    rows.push(scalar("flow", "premium_income", f.premium_income));
    rows.push(scalar("flow", "capital", f.capital));
    rows.push(scalar("flow", "reinsurance_premium", f.reinsurance_premium));
    rows.push(variable("flow", "insurer_claims", &f.insurer_claims));
    rows.push(variable("flow", "reinsurer_claims", &f.reinsurer_claims));
    rows.push(variable(
        "flow",
        "government_transfer",
        &f.government_transfer,
    ));
    rows.push(variable("flow", "distributed", &f.distributed));
    rows.push(scalar("check", "balance_residual", r.balance_residual));

    if let Some(alt) = &r.alternative_split {
        for (agent, &v) in r.agents.iter().zip(&alt.premium_input) {
            rows.push(scalar("alternative", format!("premium_input.{agent}"), v));
        }
        rows.push(scalar(
            "alternative",
            "premium_input_total",
            alt.premium_input_total,
        ));
        rows.push(scalar("alternative", "required_total", alt.required_total));
        for (agent, &v) in r.agents.iter().zip(&alt.capital_input) {
            rows.push(scalar("alternative", format!("capital_input.{agent}"), v));
        }
        if let Some(sh) = &alt.shares {
            rows.push(scalar("alternative", "share.insurer", sh.insurer));
            for (agent, &v) in r.agents.iter().zip(&sh.agents) {
                rows.push(scalar("alternative", format!("share.{agent}"), v));
            }
        }
        for v in &alt.verdicts {
            rows.push(scalar(
                "alternative",
                format!("{}.utility", v.party),
                v.utility,
            ));
            rows.push(flag(
                "alternative",
                format!("{}.accepted", v.party),
                v.accepted,
            ));
        }
        rows.push(flag("alternative", "advisory_only", alt.advisory_only));
    }
    for (k, note) in r.notes.iter().enumerate() {
        rows.push(text("note", format!("note{}", k + 1), note.clone()));
    }
    rows
}

fn csv_error(e: impl std::fmt::Display) -> Error {
    Error::Internal(format!("csv output: {e}"))
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(csv_error)?;
    String::from_utf8(bytes).map_err(csv_error)
}

/// Columns `model,kind,name,value,atom_<id>...`; one section per report.
/// Per-atom columns are filled only for per-atom variables.
pub fn reports_to_csv(reports: &[ModelReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let atoms = reports.first().map(|r| r.atoms.clone()).unwrap_or_default();
    let mut header = vec![
        "model".to_string(),
        "kind".into(),
        "name".into(),
        "value".into(),
    ];
    header.extend(atoms.iter().map(|a| format!("atom_{a}")));
    w.write_record(&header).map_err(csv_error)?;
    for r in reports {
        for row in report_rows(r) {
            let mut record = vec![
                r.model.number().to_string(),
                row.kind.into(),
                row.name,
                row.value.render(),
            ];
            match &row.atoms {
                Some(vals) => record.extend(vals.iter().map(|&v| format_sig(v))),
                None => record.extend(std::iter::repeat_n(String::new(), atoms.len())),
            }
            w.write_record(&record).map_err(csv_error)?;
        }
    }
    finish_csv(w)
}

pub fn reports_to_text(reports: &[ModelReport]) -> String {
    let mut out = String::new();
    for (k, r) in reports.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        out.push_str(&format!("== {} ==\n", r.model));
        out.push_str(&format!("atoms: {}\n", r.atoms.join(" ")));
        let mut last_kind = "";
        for row in report_rows(r) {
            if row.kind != last_kind {
                out.push_str(&format!("[{}]\n", row.kind));
                last_kind = row.kind;
            }
            match &row.atoms {
                Some(vals) => {
                    let vals: Vec<String> = vals.iter().map(|&v| format_sig(v)).collect();
                    let value = row.value.render();
                    if value.is_empty() {
                        out.push_str(&format!("  {} = ({})\n", row.name, vals.join(", ")));
                    } else {
                        out.push_str(&format!(
                            "  {} = {{{}}} ({})\n",
                            row.name,
                            value,
                            vals.join(", ")
                        ));
                    }
                }
                None => out.push_str(&format!("  {} = {}\n", row.name, row.value.render())),
            }
        }
        out.push_str(&format!(
            "verdict: {}\n",
            if r.all_accepted() {
                "all accepted"
            } else {
                "some verdicts rejected"
            }
        ));
    }
    out
}

pub fn render_reports(reports: &[ModelReport], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(&reports),
        OutputFormat::Csv => reports_to_csv(reports),
        OutputFormat::Text => Ok(reports_to_text(reports)),
    }
}

const SWEEP_COLUMNS: [&str; 7] = [
    "capital",
    "retention",
    "insurer_utility",
    "extra_return",
    "return_ratio",
    "scaled_identity_residual",
    "extra_identity_residual",
];

fn sweep_values(row: &crate::models::SweepRow) -> [f64; 7] {
    [
        row.capital,
        row.retention,
        row.insurer_utility,
        row.extra_return,
        row.return_ratio,
        row.scaled_identity_residual,
        row.extra_identity_residual,
    ]
}

fn sweep_checks(t: &SweepTable) -> [(&'static str, String); 4] {
    [
        ("limit_extra_return", format_sig(t.limit_extra_return)),
        (
            "retention_non_decreasing",
            t.retention_non_decreasing.to_string(),
        ),
        (
            "utility_non_decreasing",
            t.utility_non_decreasing.to_string(),
        ),
        ("monotone", t.monotone().to_string()),
    ]
}

/// The table, then `check,<name>,<value>` lines for the monotonicity result.
pub fn sweep_to_csv(t: &SweepTable) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .from_writer(Vec::new());
    w.write_record(SWEEP_COLUMNS).map_err(csv_error)?;
    for row in &t.rows {
        w.write_record(sweep_values(row).map(format_sig))
            .map_err(csv_error)?;
    }
    for (name, value) in sweep_checks(t) {
        w.write_record(["check", name, value.as_str()])
            .map_err(csv_error)?;
    }
    finish_csv(w)
}

pub fn sweep_to_text(t: &SweepTable) -> String {
    let cells: Vec<[String; 7]> = t
        .rows
        .iter()
        .map(|r| sweep_values(r).map(format_sig))
        .collect();
    let widths: Vec<usize> = (0..7)
        .map(|c| {
            cells
                .iter()
                .map(|r| r[c].len())
                .chain([SWEEP_COLUMNS[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |items: Vec<&str>| {
        items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
            + "\n"
    };
    let mut out = line(SWEEP_COLUMNS.to_vec());
    for r in &cells {
        out.push_str(&line(r.iter().map(String::as_str).collect()));
    }
    for (name, value) in sweep_checks(t) {
        out.push_str(&format!("{name}: {value}\n"));
    }
    out
}

pub fn render_sweep(t: &SweepTable, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(t),
        OutputFormat::Csv => sweep_to_csv(t),
        OutputFormat::Text => Ok(sweep_to_text(t)),
    }
}

pub fn render_verify(v: &VerifyReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => to_json(v),
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "check",
                "cases",
                "failures",
                "max_error",
                "tolerance",
                "passed",
            ])
            .map_err(csv_error)?;
            for c in &v.checks {
                w.write_record([
                    c.name.clone(),
                    c.cases.to_string(),
                    c.failures.to_string(),
                    format_sig(c.max_error),
                    format_sig(c.tolerance),
                    c.passed().to_string(),
                ])
                .map_err(csv_error)?;
            }
            finish_csv(w)
        }
        OutputFormat::Text => {
            let mut out = format!("seed {} over {} instances\n", v.seed, v.instances);
            for c in &v.checks {
                out.push_str(&format!(
                    "[{}] {}: {} cases, {} failures, max error {} (tol {})\n",
                    if c.passed() { "PASS" } else { "FAIL" },
                    c.name,
                    c.cases,
                    c.failures,
                    format_sig(c.max_error),
                    format_sig(c.tolerance),
                ));
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_floats_are_rounded() {
        let s = to_json(&vec![1.0 / 3.0, 2.0, -0.0]).unwrap();
        assert_eq!(s, "[\n  0.333333333333,\n  2.0,\n  0.0\n]\n");
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<OutputFormat>().unwrap(), OutputFormat::Csv);
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
