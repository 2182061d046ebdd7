use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::graph::{edge_kind_rule, BalanceGraph};
use super::types::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Σ assets = Σ edges = Σ liabilities in one currency.
    ZeroSum,
    /// Cached position disagrees with the edges.
    Position,
    Amount,
    SelfClaim,
    Endpoint,
    Kind,
    Regime,
    Backing,
    Issuer,
    Commodity,
}

/// One broken invariant. `subject` names the currency, agent, instrument or
/// commodity involved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub subject: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} [{}]: {}", self.rule, self.subject, self.message)
    }
}

fn slot<'a, 'b>(per_agent: &'b mut Vec<(&'a CurrencyId, Position)>, c: &'a CurrencyId) -> &'b mut Position {
    let at = match per_agent.iter().position(|(k, _)| *k == c) {
        Some(at) => at,
        None => {
            per_agent.push((c, Position::default()));
            per_agent.len() - 1
        }
    };
    &mut per_agent[at].1
}

/// Re-derive every invariant from the raw edges and holdings.
///
/// Independent of the incremental bookkeeping in `post`: positions cached on
/// agents are compared against sums recomputed here.
pub fn check_invariants(g: &BalanceGraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |rule, subject: &dyn fmt::Display, message: String| {
        out.push(Violation {
            rule,
            subject: subject.to_string(),
            message,
        })
    };

    // issuers and treasuries
    let mut issuers: BTreeMap<&CurrencyId, Vec<&AgentId>> = BTreeMap::new();
    let mut treasuries: BTreeMap<&CurrencyId, Vec<&AgentId>> = BTreeMap::new();
    for a in g.agents.values() {
        match (a.kind, &a.currency) {
            (AgentKind::CentralBank, Some(c)) => issuers.entry(c).or_default().push(&a.id),
            (AgentKind::Treasury, Some(c)) => treasuries.entry(c).or_default().push(&a.id),
            (AgentKind::CentralBank | AgentKind::Treasury, None) => {
                push(Rule::Issuer, &a.id, format!("{} without a currency", a.kind))
            }
            (_, Some(c)) => push(Rule::Issuer, &a.id, format!("{} carries currency {c}", a.kind)),
            (_, None) => {}
        }
        if let Some(c) = &a.currency {
            if !g.currencies.contains(c) {
                push(Rule::Issuer, &a.id, format!("undeclared currency {c}"));
            }
        }
    }
    for (c, ids) in &issuers {
        if ids.len() > 1 {
            push(Rule::Issuer, c, format!("{} central banks issue {c}", ids.len()));
        }
    }
    for (c, ids) in &treasuries {
        if ids.len() > 1 {
            push(Rule::Issuer, c, format!("{} treasuries for {c}", ids.len()));
        }
    }

    // edges; agents are addressed by their index in id order
    let agents: Vec<&Agent> = g.agents.values().collect();
    let index = |id: &AgentId| agents.binary_search_by(|a| a.id.cmp(id)).ok();
    let mut recomputed: Vec<Vec<(&CurrencyId, Position)>> = vec![Vec::new(); agents.len()];
    let mut edge_totals: BTreeMap<&CurrencyId, u128> = BTreeMap::new();
    for (id, &amount) in &g.instruments {
        if amount == 0 {
            push(Rule::Amount, id, "zero-amount edge kept in graph".into());
        }
        *edge_totals.entry(&id.currency).or_default() += amount as u128;

        if id.debtor == id.creditor {
            push(Rule::SelfClaim, id, "claim on itself".into());
        }
        let (Some(d), Some(c)) = (index(&id.debtor), index(&id.creditor)) else {
            push(Rule::Endpoint, id, "edge touches an unknown agent".into());
            continue;
        };
        slot(&mut recomputed[c], &id.currency).assets += amount as u128;
        slot(&mut recomputed[d], &id.currency).liabilities += amount as u128;
        if let Some(why) = g.regime.forbids(id.kind) {
            push(Rule::Regime, id, why.into());
        }
        if !g.currencies.contains(&id.currency) {
            push(Rule::Issuer, id, format!("undeclared currency {}", id.currency));
        }
        if !issuers.contains_key(&id.currency) {
            push(Rule::Issuer, &id.currency, "no issuing central bank".into());
        }
        if let Err(msg) = edge_kind_rule(id, agents[d], agents[c]) {
            push(Rule::Kind, id, msg);
        }
    }
    for per_agent in &mut recomputed {
        per_agent.sort_by(|a, b| a.0.cmp(b.0));
    }
    let recorded_by_edges = |i: usize, c: &CurrencyId| {
        recomputed[i]
            .iter()
            .find(|(k, _)| *k == c)
            .map(|(_, p)| *p)
            .unwrap_or_default()
    };

    // zero-sum and cached positions, per currency
    let mut cached_totals: BTreeMap<&CurrencyId, Position> = BTreeMap::new();
    for (i, a) in agents.iter().enumerate() {
        for (c, p) in &a.positions {
            let t = cached_totals.entry(c).or_default();
            t.assets += p.assets;
            t.liabilities += p.liabilities;
            let actual = recorded_by_edges(i, c);
            if actual != *p {
                push(
                    Rule::Position,
                    &a.id,
                    format!(
                        "{c}: recorded assets {} liabilities {}, edges give {} and {}",
                        p.assets, p.liabilities, actual.assets, actual.liabilities
                    ),
                );
            }
        }
        for (c, p) in &recomputed[i] {
            if !a.positions.contains_key(*c) && !p.is_empty() {
                push(
                    Rule::Position,
                    &a.id,
                    format!("{c}: no recorded position, edges give {} and {}", p.assets, p.liabilities),
                );
            }
        }
    }
    let mut all_currencies: Vec<&CurrencyId> =
        cached_totals.keys().chain(edge_totals.keys()).copied().collect();
    all_currencies.sort();
    all_currencies.dedup();
    for c in all_currencies {
        let t = cached_totals.get(c).copied().unwrap_or_default();
        let edges = edge_totals.get(c).copied().unwrap_or(0);
        if t.assets != edges || t.liabilities != edges {
            push(
                Rule::ZeroSum,
                c,
                format!(
                    "assets {} and liabilities {} do not both equal edge total {edges}",
                    t.assets, t.liabilities
                ),
            );
        }
    }

    // commodities
    let mut held: BTreeMap<&CommodityId, u128> = BTreeMap::new();
    for a in g.agents.values() {
        for (c, &q) in &a.commodities {
            if q == 0 {
                push(Rule::Commodity, &a.id, format!("zero holding of {c} kept"));
            }
            if !g.commodities.contains_key(c) {
                push(Rule::Commodity, c, format!("held by {} but undeclared", a.id));
            }
            *held.entry(c).or_default() += q as u128;
        }
    }
    for (c, &minted) in &g.commodities {
        let h = held.get(c).copied().unwrap_or(0);
        if h != minted {
            push(Rule::Commodity, c, format!("{h} held but {minted} minted"));
        }
    }

    // full backing
    if g.regime == (Regime::Convertible { full_backing: true }) {
        let mut owed: BTreeMap<(&AgentId, &Unit), BigRational> = BTreeMap::new();
        for (id, &amount) in &g.instruments {
            if let Some(r) = &id.redemption {
                *owed
                    .entry((&id.debtor, &r.target))
                    .or_insert_with(BigRational::zero) +=
                    r.rate.to_big() * BigRational::from_integer(amount.into());
            }
        }
        for ((agent, target), need) in owed {
            let have: u128 = match target {
                Unit::Commodity(c) => g.agents.get(agent).map_or(0, |a| a.holding(c) as u128),
                Unit::Currency(c) => index(agent).map_or(0, |i| recorded_by_edges(i, c).assets),
            };
            if need > BigRational::from_integer(have.into()) {
                push(
                    Rule::Backing,
                    agent,
                    format!(
                        "owes {} {target}, holds {have}",
                        crate::rational::format_big(&need)
                    ),
                );
            }
        }
    }

    out
}
