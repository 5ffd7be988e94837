//! Plain-text table rendering of reports.

use bures_core::suites::SuiteReport;
use serde_json::Value;

use crate::runner::{Report, Status};

fn compact(value: &Value) -> String {
    match value {
        Value::Number(n) => n.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => {
            if items.len() > 8
                || items
                    .iter()
                    .any(|v| matches!(v, Value::Array(inner) if inner.iter().any(Value::is_array)))
            {
                "<matrix>".into()
            } else {
                let parts: Vec<String> = items.iter().map(compact).collect();
                format!("[{}]", parts.join(", "))
            }
        }
        Value::Object(_) => "<object>".into(),
    }
}

pub fn scenario_table(report: &Report) -> String {
    let mut rows: Vec<(String, String, String)> = Vec::new();
    for analysis in &report.analyses {
        let status = match analysis.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Info => "info",
        };
        let detail = match &analysis.values {
            Value::Object(map) => map
                .iter()
                .map(|(k, v)| format!("{k}={}", compact(v)))
                .collect::<Vec<_>>()
                .join("  "),
            other => compact(other),
        };
        rows.push((analysis.op.clone(), status.to_string(), detail));
        for failure in &analysis.failures {
            rows.push((
                String::new(),
                "!".into(),
                format!("{} (residual {:.3e})", failure.invariant, failure.residual),
            ));
        }
    }
    let op_w = rows.iter().map(|r| r.0.len()).max().unwrap_or(2).max(2);
    let st_w = rows.iter().map(|r| r.1.len()).max().unwrap_or(6).max(6);
    let mut out = String::new();
    out.push_str(&format!(
        "scenario report (version {}, seed {}) — {} pass, {} fail\n",
        report.version, report.seed, report.passes, report.failures
    ));
    out.push_str(&format!("{:<op_w$}  {:<st_w$}  details\n", "op", "status"));
    for (op, status, detail) in rows {
        out.push_str(&format!("{op:<op_w$}  {status:<st_w$}  {detail}\n"));
    }
    out
}

pub fn suite_table(report: &SuiteReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "suite `{}` — {} trials, seed {}, {} checks, {} failures\n",
        report.suite, report.trials, report.seed, report.total_checks, report.failures
    ));
    let name_w = report
        .checks
        .iter()
        .map(|c| c.name.len())
        .max()
        .unwrap_or(5)
        .max(5);
    out.push_str(&format!(
        "{:<name_w$}  {:>7}  {:>8}  {:>13}  {:>10}\n",
        "check", "count", "failures", "worst", "tolerance"
    ));
    for check in &report.checks {
        out.push_str(&format!(
            "{:<name_w$}  {:>7}  {:>8}  {:>13.3e}  {:>10.1e}\n",
            check.name, check.count, check.failures, check.worst_residual, check.tolerance
        ));
    }
    for failure in &report.failed {
        out.push_str(&format!(
            "FAIL trial {} {} (residual {:.3e}, tolerance {:.1e})\n",
            failure.trial, failure.invariant, failure.residual, failure.tolerance
        ));
    }
    out.push_str(if report.passed {
        "result: pass\n"
    } else {
        "result: FAIL\n"
    });
    out
}
