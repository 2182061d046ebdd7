//! Scenario files (`.mgs`): one statement per line, replayed on a fresh
//! graph.
//!
//! ```text
//! regime fiat
//! agent cb kind=central_bank issues=DOM
//! agent b1 kind=bank
//! agent h1 kind=nonbank
//! op create_loan bank=b1 borrower=h1 amount=100 currency=DOM
//! assert broad_money == 100
//! assert net_money(DOM) == 0
//! expect_error repay_loan bank=b1 borrower=h1 amount=101 error=ErrExceedsLoan
//! snapshot out/final.json
//! ```

mod parse;
mod print;
mod run;

use std::fmt;

use thiserror::Error;

use crate::ledger::{AgentId, AgentKind, CommodityId, CurrencyId, Regime};

pub use parse::parse;
pub use print::print;
pub use run::{run, Artifact, RunTrace, SeriesRow, TraceLine};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Measure {
    BaseMoney(Option<CurrencyId>),
    BroadMoney(Option<CurrencyId>),
    NetMoney(Option<CurrencyId>),
    /// Agent and unit name (currency or commodity).
    NetWorth(AgentId, Option<String>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Ge,
    Le,
}

impl Cmp {
    pub fn as_str(self) -> &'static str {
        match self {
            Cmp::Eq => "==",
            Cmp::Ge => ">=",
            Cmp::Le => "<=",
        }
    }

    pub fn holds(self, actual: i128, expected: i128) -> bool {
        match self {
            Cmp::Eq => actual == expected,
            Cmp::Ge => actual >= expected,
            Cmp::Le => actual <= expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Regime(Regime),
    Currency(CurrencyId),
    Commodity(CommodityId),
    Agent {
        name: AgentId,
        kind: AgentKind,
        currency: Option<CurrencyId>,
    },
    /// Parameters keep their written order.
    Op {
        name: String,
        params: Vec<(String, String)>,
    },
    Assert {
        measure: Measure,
        cmp: Cmp,
        value: i128,
    },
    ExpectError {
        name: String,
        params: Vec<(String, String)>,
        code: String,
    },
    Snapshot(String),
    Dot(String),
}

#[derive(Debug, Clone)]
pub struct Stmt {
    /// 1-based source line.
    pub line: usize,
    pub body: Statement,
}

/// Two scenarios are equal when their statements are, wherever they sit in
/// the source.
#[derive(Debug, Clone, Default)]
pub struct Scenario {
    pub statements: Vec<Stmt>,
}

impl PartialEq for Scenario {
    fn eq(&self, other: &Self) -> bool {
        self.statements.len() == other.statements.len()
            && self
                .statements
                .iter()
                .zip(&other.statements)
                .all(|(a, b)| a.body == b.body)
    }
}

impl Eq for Scenario {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: assertion failed: expected {expected}, actual {actual}")]
    AssertFailed {
        line: usize,
        expected: String,
        actual: String,
    },
    #[error("line {line}: {code}: {message}")]
    Unexpected {
        line: usize,
        code: String,
        message: String,
    },
    #[error("line {line}: expected {expected}, but the operation succeeded")]
    MissingError { line: usize, expected: String },
}

impl ScenarioError {
    pub fn code(&self) -> &'static str {
        match self {
            ScenarioError::Parse { .. } => "ErrParse",
            ScenarioError::AssertFailed { .. } => "ErrAssertFailed",
            ScenarioError::Unexpected { .. } => "ErrUnexpected",
            ScenarioError::MissingError { .. } => "ErrMissingError",
        }
    }

    pub fn line(&self) -> usize {
        match self {
            ScenarioError::Parse { line, .. }
            | ScenarioError::AssertFailed { line, .. }
            | ScenarioError::Unexpected { line, .. }
            | ScenarioError::MissingError { line, .. } => *line,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, cur) = match self {
            Measure::BaseMoney(c) => ("base_money", c),
            Measure::BroadMoney(c) => ("broad_money", c),
            Measure::NetMoney(c) => ("net_money", c),
            Measure::NetWorth(agent, unit) => {
                return match unit {
                    Some(u) => write!(f, "net_worth({agent},{u})"),
                    None => write!(f, "net_worth({agent})"),
                }
            }
        };
        match cur {
            Some(c) => write!(f, "{name}({c})"),
            None => f.write_str(name),
        }
    }
}

/// The bundled corpus, by file name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("endogenous.mgs", include_str!("../../scenarios/endogenous.mgs")),
    ("commodity_credit.mgs", include_str!("../../scenarios/commodity_credit.mgs")),
    ("gold_standard.mgs", include_str!("../../scenarios/gold_standard.mgs")),
    ("full_backing.mgs", include_str!("../../scenarios/full_backing.mgs")),
    ("net_money.mgs", include_str!("../../scenarios/net_money.mgs")),
    ("bond_finance.mgs", include_str!("../../scenarios/bond_finance.mgs")),
    ("consolidation.mgs", include_str!("../../scenarios/consolidation.mgs")),
    ("interbank.mgs", include_str!("../../scenarios/interbank.mgs")),
    ("cash.mgs", include_str!("../../scenarios/cash.mgs")),
    ("foreign.mgs", include_str!("../../scenarios/foreign.mgs")),
    ("sectors.mgs", include_str!("../../scenarios/sectors.mgs")),
];
