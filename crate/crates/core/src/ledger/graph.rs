use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::types::*;
use crate::error::{Error, Result};

/// One element of an atomic posting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Delta {
    /// Signed change of an edge amount; creates the edge if absent.
    Edge {
        id: InstrumentId,
        #[serde(with = "crate::dec")]
        change: i128,
    },
    /// Moves commodity between holders; the commodity deltas of one posting
    /// must net to zero per commodity.
    Commodity {
        agent: AgentId,
        commodity: CommodityId,
        #[serde(with = "crate::dec")]
        change: i128,
    },
    /// New commodity supply.
    Mint {
        agent: AgentId,
        commodity: CommodityId,
        #[serde(with = "crate::dec")]
        qty: u64,
    },
}

impl Delta {
    pub fn edge(id: InstrumentId, change: impl Into<i128>) -> Self {
        Delta::Edge {
            id,
            change: change.into(),
        }
    }
}

/// The whole system state: agents as nodes, instruments as edges from
/// debtor to creditor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceGraph {
    pub(crate) regime: Regime,
    pub(crate) config: Config,
    pub(crate) currencies: BTreeSet<CurrencyId>,
    /// Commodity -> total ever minted.
    pub(crate) commodities: BTreeMap<CommodityId, u128>,
    pub(crate) agents: BTreeMap<AgentId, Agent>,
    pub(crate) instruments: BTreeMap<InstrumentId, Amount>,
}

impl BalanceGraph {
    pub fn new(regime: Regime) -> Self {
        BalanceGraph::with_config(regime, Config::default())
    }

    pub fn with_config(regime: Regime, config: Config) -> Self {
        BalanceGraph {
            regime,
            config,
            currencies: BTreeSet::new(),
            commodities: BTreeMap::new(),
            agents: BTreeMap::new(),
            instruments: BTreeMap::new(),
        }
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn config(&self) -> Config {
        self.config
    }

    pub fn set_config(&mut self, config: Config) {
        self.config = config;
    }

    pub fn currencies(&self) -> impl Iterator<Item = &CurrencyId> {
        self.currencies.iter()
    }

    pub fn commodities(&self) -> impl Iterator<Item = &CommodityId> {
        self.commodities.keys()
    }

    pub fn minted(&self, commodity: &CommodityId) -> u128 {
        self.commodities.get(commodity).copied().unwrap_or(0)
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.agents.values()
    }

    pub fn agent(&self, id: &AgentId) -> Result<&Agent> {
        self.agents
            .get(id)
            .ok_or_else(|| Error::UnknownAgent(id.to_string()))
    }

    pub fn instruments(&self) -> impl Iterator<Item = Instrument> + '_ {
        self.instruments.iter().map(|(id, &amount)| Instrument {
            id: id.clone(),
            amount,
        })
    }

    /// Borrowing view of the edges, in key order.
    pub fn edges(&self) -> impl Iterator<Item = (&InstrumentId, Amount)> + '_ {
        self.instruments.iter().map(|(id, &amount)| (id, amount))
    }

    pub fn instrument_count(&self) -> usize {
        self.instruments.len()
    }

    /// Current amount of an edge, 0 when absent.
    pub fn amount(&self, id: &InstrumentId) -> Amount {
        self.instruments.get(id).copied().unwrap_or(0)
    }

    pub fn has_currency(&self, c: &CurrencyId) -> bool {
        self.currencies.contains(c)
    }

    pub fn has_commodity(&self, c: &CommodityId) -> bool {
        self.commodities.contains_key(c)
    }

    /// Resolve a bare unit name against declared currencies and commodities.
    pub fn unit(&self, name: &str) -> Result<Unit> {
        if let Ok(c) = CurrencyId::new(name) {
            if self.currencies.contains(&c) {
                return Ok(Unit::Currency(c));
            }
        }
        if let Ok(c) = CommodityId::new(name) {
            if self.commodities.contains_key(&c) {
                return Ok(Unit::Commodity(c));
            }
        }
        Err(Error::UnknownCurrency(name.to_string()))
    }

    pub fn add_currency(&mut self, c: CurrencyId) -> Result<()> {
        if self.commodities.contains_key(c.as_str()) {
            return Err(Error::DuplicateUnit(c.to_string()));
        }
        self.currencies.insert(c);
        Ok(())
    }

    pub fn add_commodity(&mut self, c: CommodityId) -> Result<()> {
        if self.currencies.contains(c.as_str()) {
            return Err(Error::DuplicateUnit(c.to_string()));
        }
        self.commodities.entry(c).or_insert(0);
        Ok(())
    }

    /// Add a node. Central banks must name the currency they issue; a
    /// treasury names its fiscal currency. Both register the currency.
    pub fn add_agent(
        &mut self,
        id: AgentId,
        kind: AgentKind,
        currency: Option<CurrencyId>,
    ) -> Result<AgentId> {
        if self.agents.contains_key(&id) {
            return Err(Error::DuplicateAgent(id.to_string()));
        }
        match (kind, &currency) {
            (AgentKind::CentralBank | AgentKind::Treasury, None) => {
                return Err(Error::IssuerRequired(format!("{kind} {id}")));
            }
            (AgentKind::CentralBank | AgentKind::Treasury, Some(c)) => {
                if self.commodities.contains_key(c.as_str()) {
                    return Err(Error::DuplicateUnit(c.to_string()));
                }
                let taken = self
                    .agents
                    .values()
                    .any(|a| a.kind == kind && a.currency.as_ref() == Some(c));
                if taken {
                    return Err(match kind {
                        AgentKind::CentralBank => Error::DuplicateCentralBank(c.to_string()),
                        _ => Error::DuplicateTreasury(c.to_string()),
                    });
                }
            }
            (_, Some(c)) => {
                return Err(Error::KindMismatch(format!(
                    "{kind} {id} cannot carry currency {c}"
                )));
            }
            (_, None) => {}
        }
        if let Some(c) = &currency {
            self.currencies.insert(c.clone());
        }
        self.agents
            .insert(id.clone(), Agent::new(id.clone(), kind, currency));
        Ok(id)
    }

    pub fn central_bank(&self, currency: &CurrencyId) -> Option<&Agent> {
        self.agents
            .values()
            .find(|a| a.issues() == Some(currency))
    }

    pub fn treasury(&self, currency: &CurrencyId) -> Option<&Agent> {
        self.agents
            .values()
            .find(|a| a.kind == AgentKind::Treasury && a.currency.as_ref() == Some(currency))
    }

    /// Central bank and treasury of `currency`.
    pub fn is_government(&self, agent: &AgentId, currency: &CurrencyId) -> bool {
        self.agents.get(agent).is_some_and(|a| {
            matches!(a.kind, AgentKind::CentralBank | AgentKind::Treasury)
                && a.currency.as_ref() == Some(currency)
        })
    }

    /// Σ of edges in `currency` whose creditor is `agent`.
    pub fn financial_assets(&self, agent: &AgentId, currency: &CurrencyId) -> u128 {
        self.agents
            .get(agent)
            .and_then(|a| a.positions.get(currency))
            .map_or(0, |p| p.assets)
    }

    /// Apply every delta or none of them.
    pub fn post(&mut self, deltas: &[Delta]) -> Result<()> {
        let staged = self.stage(deltas)?;
        self.commit(staged);
        Ok(())
    }

    /// Validate a posting against the current state without applying it.
    pub fn check_post(&self, deltas: &[Delta]) -> Result<()> {
        self.stage(deltas).map(|_| ())
    }

    fn stage(&self, deltas: &[Delta]) -> Result<Staged> {
        let mut edges: BTreeMap<InstrumentId, i128> = BTreeMap::new();
        let mut holdings: BTreeMap<(AgentId, CommodityId), i128> = BTreeMap::new();
        let mut flow: BTreeMap<CommodityId, i128> = BTreeMap::new();
        let mut minted: BTreeMap<CommodityId, u128> = BTreeMap::new();

        for delta in deltas {
            match delta {
                Delta::Edge { id, change } => {
                    let v = edges
                        .entry(id.clone())
                        .or_insert_with(|| self.amount(id) as i128);
                    *v = v.checked_add(*change).ok_or(Error::Overflow)?;
                }
                Delta::Commodity {
                    agent,
                    commodity,
                    change,
                } => {
                    self.check_holding_target(agent, commodity)?;
                    let v = holdings
                        .entry((agent.clone(), commodity.clone()))
                        .or_insert_with(|| self.agents[agent].holding(commodity) as i128);
                    *v = v.checked_add(*change).ok_or(Error::Overflow)?;
                    let f = flow.entry(commodity.clone()).or_insert(0);
                    *f = f.checked_add(*change).ok_or(Error::Overflow)?;
                }
                Delta::Mint {
                    agent,
                    commodity,
                    qty,
                } => {
                    if *qty == 0 {
                        return Err(Error::ZeroAmount);
                    }
                    self.check_holding_target(agent, commodity)?;
                    let v = holdings
                        .entry((agent.clone(), commodity.clone()))
                        .or_insert_with(|| self.agents[agent].holding(commodity) as i128);
                    *v = v.checked_add(*qty as i128).ok_or(Error::Overflow)?;
                    *minted.entry(commodity.clone()).or_insert(0) += *qty as u128;
                }
            }
        }

        if let Some((c, _)) = flow.iter().find(|(_, f)| **f != 0) {
            return Err(Error::BadParam(format!(
                "commodity transfers of {c} do not net to zero; use mint"
            )));
        }

        for (id, &value) in &edges {
            if value < 0 {
                return Err(Error::NegativeAmount(id.to_string()));
            }
            if value > Amount::MAX as i128 {
                return Err(Error::Overflow);
            }
            if value > 0 {
                self.validate_edge(id)?;
            }
        }
        for ((agent, commodity), &value) in &holdings {
            if value < 0 {
                return Err(Error::NegativeAmount(format!("{commodity} held by {agent}")));
            }
            if value > Amount::MAX as i128 {
                return Err(Error::Overflow);
            }
        }
        for (c, m) in &minted {
            self.minted(c).checked_add(*m).ok_or(Error::Overflow)?;
        }

        let staged = Staged {
            edges,
            holdings,
            minted,
        };
        let positions = self.staged_positions(&staged)?;
        if self.regime == (Regime::Convertible { full_backing: true }) {
            self.check_backing(&staged, &positions)?;
        }
        Ok(staged)
    }

    fn check_holding_target(&self, agent: &AgentId, commodity: &CommodityId) -> Result<()> {
        if !self.agents.contains_key(agent) {
            return Err(Error::UnknownAgent(agent.to_string()));
        }
        if !self.commodities.contains_key(commodity) {
            return Err(Error::UnknownCommodity(commodity.to_string()));
        }
        Ok(())
    }

    /// Structural and regime rules for an edge that will carry a positive amount.
    pub(crate) fn validate_edge(&self, id: &InstrumentId) -> Result<()> {
        let debtor = self.agent(&id.debtor)?;
        let creditor = self.agent(&id.creditor)?;
        if id.debtor == id.creditor {
            return Err(Error::SelfClaim(id.to_string()));
        }
        if let Some(why) = self.regime.forbids(id.kind) {
            return Err(Error::RegimeViolation(format!("{}: {why}", id.kind)));
        }
        if !self.currencies.contains(&id.currency) {
            return Err(Error::UnknownCurrency(id.currency.to_string()));
        }
        if self.central_bank(&id.currency).is_none() {
            return Err(Error::MissingAgent(format!(
                "no central bank issues {}",
                id.currency
            )));
        }
        edge_kind_rule(id, debtor, creditor).map_err(Error::KindMismatch)?;
        if let Some(r) = &id.redemption {
            match &r.target {
                Unit::Commodity(c) if !self.commodities.contains_key(c) => {
                    return Err(Error::UnknownCommodity(c.to_string()))
                }
                Unit::Currency(c) if !self.currencies.contains(c) => {
                    return Err(Error::UnknownCurrency(c.to_string()))
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn staged_positions(&self, staged: &Staged) -> Result<BTreeMap<(AgentId, CurrencyId), Position>> {
        let mut out: BTreeMap<(AgentId, CurrencyId), Position> = BTreeMap::new();
        for (id, &value) in &staged.edges {
            let change = value - self.amount(id) as i128;
            if change == 0 {
                continue;
            }
            for (agent, is_asset) in [(&id.creditor, true), (&id.debtor, false)] {
                let key = (agent.clone(), id.currency.clone());
                let pos = out.entry(key).or_insert_with(|| {
                    self.agents
                        .get(agent)
                        .and_then(|a| a.positions.get(&id.currency))
                        .copied()
                        .unwrap_or_default()
                });
                let slot = if is_asset {
                    &mut pos.assets
                } else {
                    &mut pos.liabilities
                };
                let next = (*slot as i128)
                    .checked_add(change)
                    .filter(|v| *v >= 0)
                    .ok_or(Error::Overflow)?;
                *slot = next as u128;
            }
        }
        Ok(out)
    }

    /// Under full backing every issuer's convertible liabilities, converted
    /// at their rates, must be covered by its holdings of each target.
    fn check_backing(
        &self,
        staged: &Staged,
        positions: &BTreeMap<(AgentId, CurrencyId), Position>,
    ) -> Result<()> {
        let mut issuers: BTreeSet<&AgentId> = BTreeSet::new();
        for id in staged.edges.keys() {
            if id.kind == InstrumentKind::ConvertibleNote {
                issuers.insert(&id.debtor);
            }
            // the creditor's currency holdings may be someone's backing
            issuers.insert(&id.creditor);
        }
        for (agent, _) in staged.holdings.keys() {
            issuers.insert(agent);
        }
        let edge_value = |id: &InstrumentId| -> u64 {
            staged
                .edges
                .get(id)
                .map_or_else(|| self.amount(id), |v| *v as u64)
        };
        for agent in issuers {
            let mut owed: BTreeMap<&Unit, BigRational> = BTreeMap::new();
            let existing = self.instruments.keys();
            let fresh = staged
                .edges
                .keys()
                .filter(|id| !self.instruments.contains_key(*id));
            for id in existing.chain(fresh) {
                if id.debtor != *agent {
                    continue;
                }
                let Some(r) = &id.redemption else { continue };
                let amount = edge_value(id);
                if amount == 0 {
                    continue;
                }
                let converted = r.rate.to_big() * BigRational::from_integer(amount.into());
                *owed.entry(&r.target).or_insert_with(BigRational::zero) += converted;
            }
            for (target, need) in owed {
                let have: u128 = match target {
                    Unit::Commodity(c) => staged
                        .holdings
                        .get(&(agent.clone(), c.clone()))
                        .map_or_else(|| self.agents[agent].holding(c) as u128, |v| *v as u128),
                    Unit::Currency(c) => positions
                        .get(&(agent.clone(), c.clone()))
                        .map_or_else(|| self.financial_assets(agent, c), |p| p.assets),
                };
                if need > BigRational::from_integer(have.into()) {
                    return Err(Error::InsufficientBacking(format!(
                        "{agent} owes {} {target} against holdings of {have}",
                        crate::rational::format_big(&need)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The same id with names shared with the agent and currency tables.
    fn canonical(&self, mut id: InstrumentId) -> InstrumentId {
        if let Some((k, _)) = self.agents.get_key_value(&id.debtor) {
            id.debtor = k.clone();
        }
        if let Some((k, _)) = self.agents.get_key_value(&id.creditor) {
            id.creditor = k.clone();
        }
        if let Some(k) = self.currencies.get(&id.currency) {
            id.currency = k.clone();
        }
        id
    }

    fn commit(&mut self, staged: Staged) {
        for (id, value) in staged.edges {
            let id = match self.instruments.get_key_value(&id) {
                Some((k, _)) => k.clone(),
                None => self.canonical(id),
            };
            let old = self.amount(&id) as i128;
            let change = value - old;
            if change == 0 {
                continue;
            }
            for (agent, is_asset) in [(&id.creditor, true), (&id.debtor, false)] {
                let a = self.agents.get_mut(agent).expect("validated agent");
                let pos = a.positions.entry(id.currency.clone()).or_default();
                let slot = if is_asset {
                    &mut pos.assets
                } else {
                    &mut pos.liabilities
                };
                *slot = (*slot as i128 + change) as u128;
                if pos.is_empty() {
                    a.positions.remove(&id.currency);
                }
            }
            if value == 0 {
                self.instruments.remove(&id);
            } else {
                self.instruments.insert(id, value as Amount);
            }
        }
        for ((agent, commodity), value) in staged.holdings {
            let a = self.agents.get_mut(&agent).expect("validated agent");
            if value == 0 {
                a.commodities.remove(&commodity);
            } else {
                a.commodities.insert(commodity, value as Amount);
            }
        }
        for (c, m) in staged.minted {
            *self.commodities.entry(c).or_insert(0) += m;
        }
    }

    /// Recompute every agent's cached positions from the edges.
    pub(crate) fn rebuild_positions(&mut self) {
        for a in self.agents.values_mut() {
            a.positions.clear();
        }
        for (id, &amount) in &self.instruments {
            if let Some(a) = self.agents.get_mut(&id.creditor) {
                a.positions.entry(id.currency.clone()).or_default().assets += amount as u128;
            }
            if let Some(a) = self.agents.get_mut(&id.debtor) {
                a.positions.entry(id.currency.clone()).or_default().liabilities +=
                    amount as u128;
            }
        }
    }
}

struct Staged {
    edges: BTreeMap<InstrumentId, i128>,
    holdings: BTreeMap<(AgentId, CommodityId), i128>,
    minted: BTreeMap<CommodityId, u128>,
}

/// Debtor/creditor kind constraints per instrument kind.
pub(crate) fn edge_kind_rule(
    id: &InstrumentId,
    debtor: &Agent,
    creditor: &Agent,
) -> std::result::Result<(), String> {
    use AgentKind::*;
    let issues_own = debtor.issues() == Some(&id.currency);
    match id.kind {
        InstrumentKind::Note | InstrumentKind::Reserve if !issues_own => {
            return Err(format!(
                "{} must be a liability of the central bank issuing {}",
                id.kind, id.currency
            ));
        }
        InstrumentKind::Reserve if creditor.kind != Bank => {
            return Err(format!("reserves are held by banks, not {}", creditor.kind));
        }
        InstrumentKind::Deposit if !(debtor.kind == Bank || issues_own) => {
            return Err(format!(
                "deposits are liabilities of a bank or the issuing central bank, not {}",
                debtor.kind
            ));
        }
        InstrumentKind::Loan
            if !(creditor.kind == Bank || creditor.issues() == Some(&id.currency)) =>
        {
            return Err(format!(
                "loans are made by a bank or the issuing central bank, not {}",
                creditor.kind
            ));
        }
        _ => {}
    }
    match (&id.kind, &id.redemption) {
        (InstrumentKind::ConvertibleNote, None) => {
            Err("convertible note without redemption terms".into())
        }
        (InstrumentKind::ConvertibleNote, Some(r)) => {
            if !r.rate.is_positive() {
                Err(format!("redemption rate {} must be positive", r.rate))
            } else if r.target == Unit::Currency(id.currency.clone()) {
                Err(format!("{} redeemable into itself", id.currency))
            } else {
                Ok(())
            }
        }
        (_, Some(_)) => Err(format!("{} cannot carry redemption terms", id.kind)),
        (_, None) => Ok(()),
    }
}
