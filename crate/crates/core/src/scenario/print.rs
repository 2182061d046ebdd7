use super::{Scenario, Statement};
use crate::ledger::AgentKind;

fn params(out: &mut String, params: &[(String, String)]) {
    for (k, v) in params {
        out.push(' ');
        out.push_str(k);
        out.push('=');
        out.push_str(v);
    }
}

/// Canonical text: one statement per line, single spaces, no comments.
pub fn print(s: &Scenario) -> String {
    let mut out = String::new();
    for stmt in &s.statements {
        out.push_str(&statement(&stmt.body));
        out.push('\n');
    }
    out
}

pub(super) fn statement(body: &Statement) -> String {
    let mut out = String::new();
    match body {
        Statement::Regime(r) => out.push_str(&format!("regime {r}")),
        Statement::Currency(c) => out.push_str(&format!("currency {c}")),
        Statement::Commodity(c) => out.push_str(&format!("commodity {c}")),
        Statement::Agent {
            name,
            kind,
            currency,
        } => {
            out.push_str(&format!("agent {name} kind={kind}"));
            if let Some(c) = currency {
                let key = if *kind == AgentKind::CentralBank {
                    "issues"
                } else {
                    "currency"
                };
                out.push_str(&format!(" {key}={c}"));
            }
        }
        Statement::Op { name, params: p } => {
            out.push_str("op ");
            out.push_str(name);
            params(&mut out, p);
        }
        Statement::Assert {
            measure,
            cmp,
            value,
        } => out.push_str(&format!("assert {measure} {} {value}", cmp.as_str())),
        Statement::ExpectError {
            name,
            params: p,
            code,
        } => {
            out.push_str("expect_error ");
            out.push_str(name);
            params(&mut out, p);
            out.push_str(&format!(" error={code}"));
        }
        Statement::Snapshot(path) => out.push_str(&format!("snapshot {path}")),
        Statement::Dot(path) => out.push_str(&format!("dot {path}")),
    }
    out
}
