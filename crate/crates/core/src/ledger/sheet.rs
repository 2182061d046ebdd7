use std::collections::BTreeMap;

use serde::Serialize;

use super::graph::BalanceGraph;
use super::types::*;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SheetLine {
    /// Instrument kind, or `holdings` for a commodity stock.
    pub source: String,
    #[serde(with = "crate::dec")]
    pub amount: u128,
}

/// Projection of the graph onto one agent in one unit. Lines are summed per
/// instrument kind so the sheet does not depend on counterparty identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalanceSheet {
    pub agent: AgentId,
    pub unit: Unit,
    pub assets: Vec<SheetLine>,
    pub liabilities: Vec<SheetLine>,
    #[serde(with = "crate::dec")]
    pub net_worth: i128,
}

impl BalanceSheet {
    pub fn total_assets(&self) -> u128 {
        self.assets.iter().map(|l| l.amount).sum()
    }

    pub fn total_liabilities(&self) -> u128 {
        self.liabilities.iter().map(|l| l.amount).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sheet serializes")
    }
}

impl BalanceGraph {
    pub fn balance_sheet(&self, agent: &AgentId, unit: &Unit) -> Result<BalanceSheet> {
        let a = self.agent(agent)?;
        // validates the unit
        self.unit(unit.name())?;
        let mut assets: BTreeMap<String, u128> = BTreeMap::new();
        let mut liabilities: BTreeMap<String, u128> = BTreeMap::new();
        match unit {
            Unit::Currency(c) => {
                for (id, &amount) in &self.instruments {
                    if &id.currency != c {
                        continue;
                    }
                    if &id.creditor == agent {
                        *assets.entry(id.kind.to_string()).or_default() += amount as u128;
                    }
                    if &id.debtor == agent {
                        *liabilities.entry(id.kind.to_string()).or_default() += amount as u128;
                    }
                }
            }
            Unit::Commodity(c) => {
                let held = a.holding(c);
                if held > 0 {
                    assets.insert("holdings".into(), held as u128);
                }
            }
        }
        let lines = |m: BTreeMap<String, u128>| {
            m.into_iter()
                .map(|(source, amount)| SheetLine { source, amount })
                .collect::<Vec<_>>()
        };
        let total_a: u128 = assets.values().sum();
        let total_l: u128 = liabilities.values().sum();
        Ok(BalanceSheet {
            agent: agent.clone(),
            unit: unit.clone(),
            assets: lines(assets),
            liabilities: lines(liabilities),
            net_worth: total_a as i128 - total_l as i128,
        })
    }

    /// Net worth of `agent` in `unit`.
    pub fn net_worth(&self, agent: &AgentId, unit: &Unit) -> Result<i128> {
        Ok(self.balance_sheet(agent, unit)?.net_worth)
    }
}
