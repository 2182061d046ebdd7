use std::collections::BTreeSet;

use super::{Cmp, Measure, Scenario, ScenarioError, Statement, Stmt};
use crate::dispatch;
use crate::error::Error;
use crate::ledger::{AgentId, AgentKind, CommodityId, CurrencyId, Regime};

/// Parameters whose values name agents; an `op` may only use agents that
/// were declared on an earlier line.
const AGENT_KEYS: &[&str] = &[
    "agent", "bank", "borrower", "cb", "from", "from_bank", "holder", "issuer", "payee", "payer",
    "recipient", "to", "to_bank", "treasury",
];

struct Line<'a> {
    number: usize,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, offset: usize, message: impl Into<String>) -> ScenarioError {
        ScenarioError::Parse {
            line: self.number,
            column: self.text[..offset].chars().count() + 1,
            message: message.into(),
        }
    }
}

/// Whitespace-separated words with their byte offsets.
fn words(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if c.is_whitespace() {
            if let Some(st) = start.take() {
                out.push((st, &s[st..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        out.push((st, &s[st..]));
    }
    out
}

fn is_key(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some('a'..='z' | '_'))
        && chars.all(|c| matches!(c, 'a'..='z' | '0'..='9' | '_'))
}

fn key_values<'a>(
    line: &Line<'a>,
    tokens: &[(usize, &'a str)],
) -> Result<Vec<(usize, String, String)>, ScenarioError> {
    let mut out: Vec<(usize, String, String)> = Vec::new();
    for &(at, tok) in tokens {
        let Some((k, v)) = tok.split_once('=') else {
            return Err(line.err(at, format!("expected key=value, found {tok:?}")));
        };
        if !is_key(k) {
            return Err(line.err(at, format!("bad parameter name {k:?}")));
        }
        if v.is_empty() {
            return Err(line.err(at, format!("empty value for {k}")));
        }
        if out.iter().any(|(_, seen, _)| seen == k) {
            return Err(line.err(at, format!("duplicate parameter {k}")));
        }
        out.push((at, k.to_string(), v.to_string()));
    }
    Ok(out)
}

struct Parser {
    statements: Vec<Stmt>,
    agents: BTreeSet<String>,
}

/// Parse scenario text. The first error aborts.
pub fn parse(text: &str) -> Result<Scenario, ScenarioError> {
    let mut p = Parser {
        statements: Vec::new(),
        agents: BTreeSet::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let code = match raw.find('#') {
            Some(at) => &raw[..at],
            None => raw,
        };
        let line = Line {
            number: i + 1,
            text: raw,
        };
        let toks = words(code);
        if toks.is_empty() {
            continue;
        }
        let body = p.statement(&line, code, &toks)?;
        p.statements.push(Stmt {
            line: line.number,
            body,
        });
    }
    Ok(Scenario {
        statements: p.statements,
    })
}

impl Parser {
    fn statement(
        &mut self,
        line: &Line<'_>,
        code: &str,
        toks: &[(usize, &str)],
    ) -> Result<Statement, ScenarioError> {
        let (at, keyword) = toks[0];
        let rest = &toks[1..];
        let end = code.trim_end().len();
        match keyword {
            "regime" => {
                if !self.statements.is_empty() {
                    return Err(line.err(at, "regime must be the first statement"));
                }
                let words: Vec<&str> = rest.iter().map(|(_, w)| *w).collect();
                let regime: Regime = words.join(" ").parse().map_err(|_| {
                    line.err(
                        rest.first().map_or(end, |t| t.0),
                        format!("unknown regime {:?}", words.join(" ")),
                    )
                })?;
                Ok(Statement::Regime(regime))
            }
            "currency" | "commodity" => {
                let [(uat, unit)] = rest else {
                    return Err(line.err(at, format!("{keyword} takes one identifier")));
                };
                let bad = |e: Error| line.err(*uat, e.to_string());
                if keyword == "currency" {
                    Ok(Statement::Currency(CurrencyId::new(*unit).map_err(bad)?))
                } else {
                    Ok(Statement::Commodity(CommodityId::new(*unit).map_err(bad)?))
                }
            }
            "agent" => self.agent(line, at, rest, end),
            "op" | "expect_error" => self.op(line, keyword, at, rest, end),
            "assert" => self.assert(line, code, at, rest, end),
            "snapshot" | "dot" => {
                let [(_, path)] = rest else {
                    return Err(line.err(at, format!("{keyword} takes one path")));
                };
                Ok(if keyword == "snapshot" {
                    Statement::Snapshot(path.to_string())
                } else {
                    Statement::Dot(path.to_string())
                })
            }
            other => Err(line.err(at, format!("unknown statement {other:?}"))),
        }
    }

    fn agent(
        &mut self,
        line: &Line<'_>,
        at: usize,
        rest: &[(usize, &str)],
        end: usize,
    ) -> Result<Statement, ScenarioError> {
        let Some(&(nat, name)) = rest.first() else {
            return Err(line.err(end, "agent needs a name"));
        };
        let name = AgentId::new(name).map_err(|e| line.err(nat, e.to_string()))?;
        let mut kind = None;
        let mut currency = None;
        for (kat, k, v) in key_values(line, &rest[1..])? {
            match k.as_str() {
                "kind" => {
                    kind = Some(
                        v.parse::<AgentKind>()
                            .map_err(|_| line.err(kat, format!("unknown kind {v}")))?,
                    )
                }
                "issues" | "currency" => {
                    if currency.is_some() {
                        return Err(line.err(kat, "currency given twice"));
                    }
                    currency =
                        Some(CurrencyId::new(v).map_err(|e| line.err(kat, e.to_string()))?)
                }
                _ => return Err(line.err(kat, format!("unexpected parameter {k}"))),
            }
        }
        let kind = kind.ok_or_else(|| line.err(at, "agent needs kind=<kind>"))?;
        self.agents.insert(name.to_string());
        Ok(Statement::Agent {
            name,
            kind,
            currency,
        })
    }

    fn op(
        &mut self,
        line: &Line<'_>,
        keyword: &str,
        at: usize,
        rest: &[(usize, &str)],
        end: usize,
    ) -> Result<Statement, ScenarioError> {
        let Some(&(nat, name)) = rest.first() else {
            return Err(line.err(end, format!("{keyword} needs an operation name")));
        };
        if !dispatch::OPS.contains(&name) {
            return Err(line.err(nat, format!("unknown operation {name:?}")));
        }
        let kvs = key_values(line, &rest[1..])?;
        if keyword == "expect_error" {
            let mut params = Vec::new();
            let mut code = None;
            for (kat, k, v) in kvs {
                if k == "error" {
                    if !Error::CODES.contains(&v.as_str()) {
                        return Err(line.err(kat, format!("unknown error code {v}")));
                    }
                    code = Some(v);
                } else {
                    params.push((k, v));
                }
            }
            let code = code.ok_or_else(|| line.err(at, "expect_error needs error=<code>"))?;
            return Ok(Statement::ExpectError {
                name: name.to_string(),
                params,
                code,
            });
        }
        for (kat, k, v) in &kvs {
            if AGENT_KEYS.contains(&k.as_str()) && !self.agents.contains(v) {
                return Err(line.err(*kat, format!("agent {v} is not declared")));
            }
        }
        for (_, k, v) in &kvs {
            match (name, k.as_str()) {
                ("add_agent", "name") => {
                    self.agents.insert(v.clone());
                }
                ("aggregate_sector", "kind") => {
                    if let Ok(kind) = v.parse::<AgentKind>() {
                        self.agents.insert(crate::ops::sector_id(kind).to_string());
                    }
                }
                _ => {}
            }
        }
        Ok(Statement::Op {
            name: name.to_string(),
            params: kvs.into_iter().map(|(_, k, v)| (k, v)).collect(),
        })
    }

    fn assert(
        &mut self,
        line: &Line<'_>,
        code: &str,
        at: usize,
        rest: &[(usize, &str)],
        end: usize,
    ) -> Result<Statement, ScenarioError> {
        let Some(&(mat, _)) = rest.first() else {
            return Err(line.err(end, "assert needs a measure"));
        };
        let tail = &code[mat..];
        let found = ["==", ">=", "<="]
            .iter()
            .filter_map(|op| tail.find(op).map(|i| (i, *op)))
            .min();
        let Some((ci, op)) = found else {
            return Err(line.err(at, "assert needs ==, >= or <="));
        };
        let cmp = match op {
            "==" => Cmp::Eq,
            ">=" => Cmp::Ge,
            _ => Cmp::Le,
        };
        let measure = self.measure(line, mat, tail[..ci].trim_end())?;
        let vstart = mat + ci + 2;
        let vtext = &code[vstart..];
        let vat = vstart + (vtext.len() - vtext.trim_start().len());
        let vtext = vtext.trim();
        let digits = vtext.strip_prefix('-').unwrap_or(vtext);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(line.err(vat.min(end), format!("expected an integer, found {vtext:?}")));
        }
        let value: i128 = vtext
            .parse()
            .map_err(|_| line.err(vat, format!("{vtext} is out of range")))?;
        Ok(Statement::Assert {
            measure,
            cmp,
            value,
        })
    }

    fn measure(&self, line: &Line<'_>, at: usize, text: &str) -> Result<Measure, ScenarioError> {
        let (name, args) = match text.find('(') {
            Some(open) => {
                let Some(inner) = text[open + 1..].strip_suffix(')') else {
                    return Err(line.err(at + open, "unclosed parenthesis"));
                };
                let args: Vec<&str> = inner.split(',').map(str::trim).collect();
                (text[..open].trim_end(), args)
            }
            None => (text, Vec::new()),
        };
        let cur = |args: &[&str]| -> Result<Option<CurrencyId>, ScenarioError> {
            match args {
                [] => Ok(None),
                [c] => CurrencyId::new(*c)
                    .map(Some)
                    .map_err(|e| line.err(at, e.to_string())),
                _ => Err(line.err(at, format!("{name} takes at most one currency"))),
            }
        };
        match name {
            "base_money" => Ok(Measure::BaseMoney(cur(&args)?)),
            "broad_money" => Ok(Measure::BroadMoney(cur(&args)?)),
            "net_money" => Ok(Measure::NetMoney(cur(&args)?)),
            "net_worth" => {
                let (agent, unit) = match args.as_slice() {
                    [a] => (*a, None),
                    [a, u] => {
                        CurrencyId::new(*u).map_err(|e| line.err(at, e.to_string()))?;
                        (*a, Some(u.to_string()))
                    }
                    _ => return Err(line.err(at, "net_worth(<agent>[,<UNIT>])")),
                };
                let agent = AgentId::new(agent).map_err(|e| line.err(at, e.to_string()))?;
                if !self.agents.contains(agent.as_str()) {
                    return Err(line.err(at, format!("agent {agent} is not declared")));
                }
                Ok(Measure::NetWorth(agent, unit))
            }
            other => Err(line.err(at, format!("unknown measure {other:?}"))),
        }
    }
}
