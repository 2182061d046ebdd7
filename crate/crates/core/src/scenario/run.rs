use serde::Serialize;

use super::print::statement;
use super::{Measure, Scenario, ScenarioError, Statement, Stmt};
use crate::dispatch::{self, OpRecord, Params};
use crate::error::Error;
use crate::ledger::{BalanceGraph, CurrencyId, Regime, Unit};
use crate::measures::{self, MeasureReport};

/// One executed statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceLine {
    pub line: usize,
    pub statement: String,
    /// `ok` or `failed`.
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub measures: Vec<MeasureReport>,
}

/// Measures of the scenario's first currency after an operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesRow {
    pub step: usize,
    pub base: u128,
    pub broad: u128,
    pub net: i128,
}

/// Output requested by `snapshot` and `dot` lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub path: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    pub lines: Vec<TraceLine>,
    pub series: Vec<SeriesRow>,
    pub log: Vec<OpRecord>,
    pub artifacts: Vec<Artifact>,
    /// Final graph state.
    pub snapshot: String,
    pub failure: Option<ScenarioError>,
}

impl RunTrace {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }

    /// One JSON object per executed statement.
    pub fn trace_jsonl(&self) -> String {
        self.lines
            .iter()
            .map(|l| serde_json::to_string(l).expect("trace serializes") + "\n")
            .collect()
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("step,base,broad,net\n");
        for r in &self.series {
            out.push_str(&format!("{},{},{},{}\n", r.step, r.base, r.broad, r.net));
        }
        out
    }
}

fn params(pairs: &[(String, String)]) -> Params {
    pairs.iter().cloned().collect()
}

fn unexpected(line: usize, e: Error) -> ScenarioError {
    ScenarioError::Unexpected {
        line,
        code: e.code().to_string(),
        message: e.to_string(),
    }
}

fn currency(g: &BalanceGraph, c: &Option<CurrencyId>) -> Result<CurrencyId, Error> {
    match c {
        Some(c) => Ok(c.clone()),
        None => dispatch::default_currency(g),
    }
}

fn evaluate(g: &BalanceGraph, m: &Measure) -> Result<i128, Error> {
    Ok(match m {
        Measure::BaseMoney(c) => measures::base_money(g, &currency(g, c)?)? as i128,
        Measure::BroadMoney(c) => measures::broad_money(g, &currency(g, c)?)? as i128,
        Measure::NetMoney(c) => measures::net_money(g, &currency(g, c)?)?,
        Measure::NetWorth(agent, unit) => {
            let unit = match unit {
                Some(u) => g.unit(u)?,
                None => Unit::Currency(dispatch::default_currency(g)?),
            };
            g.net_worth(agent, &unit)?
        }
    })
}

struct Runner {
    g: BalanceGraph,
    trace: Vec<TraceLine>,
    series: Vec<SeriesRow>,
    log: Vec<OpRecord>,
    artifacts: Vec<Artifact>,
    /// First currency the scenario declares; the CSV series follows it.
    series_currency: Option<CurrencyId>,
}

impl Runner {
    fn line(&self, stmt: &Stmt) -> TraceLine {
        TraceLine {
            line: stmt.line,
            statement: statement(&stmt.body),
            status: "ok",
            error: None,
            actual: None,
            measures: Vec::new(),
        }
    }

    fn note_currency(&mut self, c: &CurrencyId) {
        if self.series_currency.is_none() {
            self.series_currency = Some(c.clone());
        }
    }

    fn step(&mut self, stmt: &Stmt) -> Result<TraceLine, Box<(TraceLine, ScenarioError)>> {
        let mut out = self.line(stmt);
        let n = stmt.line;
        let fail = |mut out: TraceLine, e: ScenarioError| {
            out.status = "failed";
            if let ScenarioError::Unexpected { code, .. } = &e {
                out.error = Some(code.clone());
            }
            Box::new((out, e))
        };
        match &stmt.body {
            Statement::Regime(_) => {}
            Statement::Currency(c) => {
                self.g.add_currency(c.clone()).map_err(|e| fail(out.clone(), unexpected(n, e)))?;
                self.note_currency(c);
            }
            Statement::Commodity(c) => {
                self.g.add_commodity(c.clone()).map_err(|e| fail(out.clone(), unexpected(n, e)))?;
            }
            Statement::Agent {
                name,
                kind,
                currency,
            } => {
                self.g
                    .add_agent(name.clone(), *kind, currency.clone())
                    .map_err(|e| fail(out.clone(), unexpected(n, e)))?;
                if let Some(c) = currency {
                    self.note_currency(c);
                }
            }
            Statement::Op { name, params: p } => {
                let p = params(p);
                let effect = dispatch::apply(&mut self.g, name, &p)
                    .map_err(|e| fail(out.clone(), unexpected(n, e)))?;
                if name == "add_agent" || name == "add_currency" {
                    if let Some(c) = p.get("issues").or(p.get("currency")).or(p.get("id")) {
                        if let Ok(c) = CurrencyId::new(c.as_str()) {
                            self.note_currency(&c);
                        }
                    }
                }
                self.log.push(OpRecord {
                    seq: self.log.len() as u64,
                    name: name.clone(),
                    params: p,
                    effect,
                });
                out.measures = measures::reports(&self.g);
                if let Some(c) = self.series_currency.clone().filter(|c| self.g.has_currency(c)) {
                    self.series.push(SeriesRow {
                        step: self.log.len(),
                        base: measures::base_money(&self.g, &c).expect("known currency"),
                        broad: measures::broad_money(&self.g, &c).expect("known currency"),
                        net: measures::net_money(&self.g, &c).expect("known currency"),
                    });
                }
            }
            Statement::Assert {
                measure,
                cmp,
                value,
            } => {
                let actual = evaluate(&self.g, measure).map_err(|e| fail(out.clone(), unexpected(n, e)))?;
                out.actual = Some(actual.to_string());
                if !cmp.holds(actual, *value) {
                    let e = ScenarioError::AssertFailed {
                        line: n,
                        expected: format!("{measure} {} {value}", cmp.as_str()),
                        actual: actual.to_string(),
                    };
                    return Err(fail(out, e));
                }
            }
            Statement::ExpectError {
                name,
                params: p,
                code,
            } => match dispatch::apply(&mut self.g, name, &params(p)) {
                Ok(_) => {
                    let e = ScenarioError::MissingError {
                        line: n,
                        expected: code.clone(),
                    };
                    return Err(fail(out, e));
                }
                Err(e) if e.code() == code => out.error = Some(code.clone()),
                Err(e) => return Err(fail(out, unexpected(n, e))),
            },
            Statement::Snapshot(path) => self.artifacts.push(Artifact {
                path: path.clone(),
                contents: self.g.snapshot(),
            }),
            Statement::Dot(path) => self.artifacts.push(Artifact {
                path: path.clone(),
                contents: measures::export_dot(&self.g),
            }),
        }
        Ok(out)
    }
}

/// Execute a scenario on a fresh graph, stopping at the first failure.
pub fn run(s: &Scenario) -> RunTrace {
    let regime = match s.statements.first().map(|s| &s.body) {
        Some(Statement::Regime(r)) => *r,
        _ => Regime::Fiat,
    };
    let mut r = Runner {
        g: BalanceGraph::new(regime),
        trace: Vec::new(),
        series: Vec::new(),
        log: Vec::new(),
        artifacts: Vec::new(),
        series_currency: None,
    };
    let mut failure = None;
    for stmt in &s.statements {
        match r.step(stmt) {
            Ok(line) => r.trace.push(line),
            Err(failed) => {
                let (line, e) = *failed;
                r.trace.push(line);
                failure = Some(e);
                break;
            }
        }
    }
    RunTrace {
        snapshot: r.g.snapshot(),
        lines: r.trace,
        series: r.series,
        log: r.log,
        artifacts: r.artifacts,
        failure,
    }
}
