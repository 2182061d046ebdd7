//! Monetary aggregates and the DOT rendering of a graph.
//!
//! Government for a currency means its central bank and its treasury; every
//! other agent (bank, nonbank, foreign, and foreign central banks) is
//! non-government.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ledger::*;

fn known(g: &BalanceGraph, currency: &CurrencyId) -> Result<()> {
    if g.has_currency(currency) {
        Ok(())
    } else {
        Err(Error::UnknownCurrency(currency.to_string()))
    }
}

/// Notes (convertible or not) and reserves issued by the central bank and
/// held outside government.
pub fn base_money(g: &BalanceGraph, currency: &CurrencyId) -> Result<u128> {
    known(g, currency)?;
    Ok(g.instruments()
        .filter(|i| {
            matches!(
                i.id.kind,
                InstrumentKind::Note | InstrumentKind::ConvertibleNote | InstrumentKind::Reserve
            )
                && &i.id.currency == currency
                && g.agent(&i.id.debtor).is_ok_and(|a| a.issues() == Some(currency))
                && !g.is_government(&i.id.creditor, currency)
        })
        .map(|i| i.amount as u128)
        .sum())
}

/// Deposits and notes (convertible or not) held by nonbanks. Foreign
/// holders are excluded.
pub fn broad_money(g: &BalanceGraph, currency: &CurrencyId) -> Result<u128> {
    known(g, currency)?;
    Ok(g.instruments()
        .filter(|i| {
            matches!(
                i.id.kind,
                InstrumentKind::Deposit | InstrumentKind::Note | InstrumentKind::ConvertibleNote
            )
                && &i.id.currency == currency
                && g.agent(&i.id.creditor).is_ok_and(|a| a.kind == AgentKind::Nonbank)
        })
        .map(|i| i.amount as u128)
        .sum())
}

/// Net claims of the non-government sector on government: equal to the
/// consolidated government's net liability position in `currency`.
pub fn net_money(g: &BalanceGraph, currency: &CurrencyId) -> Result<i128> {
    known(g, currency)?;
    let mut net = 0i128;
    for i in g.instruments() {
        if &i.id.currency != currency {
            continue;
        }
        let debtor_gov = g.is_government(&i.id.debtor, currency);
        let creditor_gov = g.is_government(&i.id.creditor, currency);
        match (debtor_gov, creditor_gov) {
            (true, false) => net += i.amount as i128,
            (false, true) => net -= i.amount as i128,
            _ => {}
        }
    }
    Ok(net)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasureReport {
    pub currency: CurrencyId,
    #[serde(with = "crate::dec")]
    pub base_money: u128,
    #[serde(with = "crate::dec")]
    pub broad_money: u128,
    #[serde(with = "crate::dec")]
    pub net_money: i128,
    /// Net financial position per agent kind; sums to zero.
    pub sectors: BTreeMap<AgentKind, Signed>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Signed(#[serde(with = "crate::dec")] pub i128);

pub fn report(g: &BalanceGraph, currency: &CurrencyId) -> Result<MeasureReport> {
    let mut sectors: BTreeMap<AgentKind, Signed> = BTreeMap::new();
    for a in g.agents() {
        let net = a.positions.get(currency).map_or(0, Position::net);
        sectors.entry(a.kind).or_insert(Signed(0)).0 += net;
    }
    Ok(MeasureReport {
        currency: currency.clone(),
        base_money: base_money(g, currency)?,
        broad_money: broad_money(g, currency)?,
        net_money: net_money(g, currency)?,
        sectors,
    })
}

/// One report per known currency, in currency order.
pub fn reports(g: &BalanceGraph) -> Vec<MeasureReport> {
    g.currencies()
        .map(|c| report(g, c).expect("known currency"))
        .collect()
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Deterministic DOT digraph: agents as boxes labeled with kind and net
/// worth per unit, one arrow per instrument from debtor to creditor.
pub fn export_dot(g: &BalanceGraph) -> String {
    let mut out = String::from("digraph G {\n");
    if g.agents().next().is_some() {
        out.push_str("  rankdir=LR;\n  node [shape=box];\n");
    }
    for a in g.agents() {
        let mut label = format!("{}\\n{}", a.id, a.kind);
        for (c, p) in &a.positions {
            let _ = write!(label, "\\n{c}: {}", p.net());
        }
        for (c, q) in &a.commodities {
            let _ = write!(label, "\\n{c}: {q}");
        }
        let _ = writeln!(out, "  {} [label=\"{label}\"];", quote(a.id.as_str()));
    }
    for i in g.instruments() {
        let mut label = format!("{}:{} {}", i.id.kind, i.amount, i.id.currency);
        if let Some(r) = &i.id.redemption {
            let _ = write!(label, " @{} {}", r.rate, r.target);
        }
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(i.id.debtor.as_str()),
            quote(i.id.creditor.as_str()),
            quote(&label)
        );
    }
    out.push_str("}\n");
    out
}
