//! Canonical JSON snapshots.
//!
//! Field order is fixed: `regime`, `config`, `currencies`, `commodities`,
//! `agents`, `instruments`. Agents and instruments are sorted by id and all
//! amounts are decimal strings, so two equal graphs give byte-identical
//! snapshots.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::graph::BalanceGraph;
use super::types::*;
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Snapshot {
    regime: Regime,
    #[serde(default)]
    config: Config,
    #[serde(default)]
    currencies: Vec<CurrencyId>,
    #[serde(default)]
    commodities: Vec<CommodityEntry>,
    #[serde(default)]
    agents: Vec<Agent>,
    #[serde(default)]
    instruments: Vec<InstrumentEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CommodityEntry {
    id: CommodityId,
    #[serde(with = "crate::dec")]
    minted: u128,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstrumentEntry {
    id: String,
    kind: InstrumentKind,
    debtor: AgentId,
    creditor: AgentId,
    currency: CurrencyId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    redemption: Option<Redemption>,
    #[serde(with = "crate::dec")]
    amount: Amount,
}

impl BalanceGraph {
    pub fn snapshot(&self) -> String {
        let snap = Snapshot {
            regime: self.regime,
            config: self.config,
            currencies: self.currencies.iter().cloned().collect(),
            commodities: self
                .commodities
                .iter()
                .map(|(id, &minted)| CommodityEntry {
                    id: id.clone(),
                    minted,
                })
                .collect(),
            agents: self.agents.values().cloned().collect(),
            instruments: self
                .instruments
                .iter()
                .map(|(id, &amount)| InstrumentEntry {
                    id: id.to_string(),
                    kind: id.kind,
                    debtor: id.debtor.clone(),
                    creditor: id.creditor.clone(),
                    currency: id.currency.clone(),
                    redemption: id.redemption.clone(),
                    amount,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&snap).expect("snapshot serializes");
        s.push('\n');
        s
    }

    /// Parse a snapshot. Only the structure is validated; run
    /// [`check_invariants`](super::check_invariants) to audit the content.
    pub fn load(json: &str) -> Result<BalanceGraph> {
        let snap: Snapshot =
            serde_json::from_str(json).map_err(|e| Error::Snapshot(e.to_string()))?;
        let mut g = BalanceGraph::with_config(snap.regime, snap.config);
        for c in snap.currencies {
            if !g.currencies.insert(c.clone()) {
                return Err(Error::Snapshot(format!("duplicate currency {c}")));
            }
        }
        for c in snap.commodities {
            if g.currencies.contains(c.id.as_str()) {
                return Err(Error::Snapshot(format!("{} is both currency and commodity", c.id)));
            }
            if g.commodities.insert(c.id.clone(), c.minted).is_some() {
                return Err(Error::Snapshot(format!("duplicate commodity {}", c.id)));
            }
        }
        for a in snap.agents {
            if g.agents.contains_key(&a.id) {
                return Err(Error::Snapshot(format!("duplicate agent {}", a.id)));
            }
            g.agents.insert(a.id.clone(), a);
        }
        let mut instruments = BTreeMap::new();
        for e in snap.instruments {
            let id = InstrumentId {
                kind: e.kind,
                debtor: e.debtor,
                creditor: e.creditor,
                currency: e.currency,
                redemption: e.redemption,
            };
            if id.to_string() != e.id {
                return Err(Error::Snapshot(format!("instrument id {} does not match {id}", e.id)));
            }
            if instruments.insert(id, e.amount).is_some() {
                return Err(Error::Snapshot(format!("duplicate instrument {}", e.id)));
            }
        }
        g.instruments = instruments;
        Ok(g)
    }
}
