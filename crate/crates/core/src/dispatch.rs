//! Operations by name with string parameters.
//!
//! This is the single entry point shared by the scenario runner, the CLI
//! and the session service: `apply(g, "create_loan", {bank: b1, ...})`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::*;
use crate::ops;
use crate::pegsim::{self, PegConfig};
use crate::rational::Rational;

pub type Params = BTreeMap<String, String>;

/// Every operation name [`apply`] understands.
pub const OPS: &[&str] = &[
    "add_agent",
    "add_commodity",
    "add_currency",
    "aggregate_sector",
    "cb_open_market_purchase",
    "config",
    "consolidate",
    "create_loan",
    "deposit_cash",
    "issue_convertible_note",
    "mint_commodity",
    "pay_deposit",
    "redeem",
    "repay_loan",
    "tax",
    "transfer_commodity",
    "treasury_issue_bond",
    "treasury_spend",
    "withdraw_cash",
];

/// What an applied operation did to the graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "effect", rename_all = "snake_case")]
pub enum Effect {
    /// One atomic posting.
    Post { deltas: Vec<Delta> },
    /// The graph was replaced by a derived graph (consolidation, aggregation).
    Rewrite,
    /// A declaration: agent, unit or config change.
    Declare,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpRecord {
    pub seq: u64,
    pub name: String,
    pub params: Params,
    #[serde(flatten)]
    pub effect: Effect,
}

impl OpRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Re-apply a log: recorded postings are posted as they are, everything
/// else is re-run from its parameters.
pub fn replay(g: &mut BalanceGraph, records: &[OpRecord]) -> Result<()> {
    for r in records {
        match &r.effect {
            Effect::Post { deltas } => g.post(deltas)?,
            _ => {
                apply(g, &r.name, &r.params)?;
            }
        }
    }
    Ok(())
}

struct Args<'a> {
    params: &'a Params,
    used: BTreeSet<&'a str>,
}

impl<'a> Args<'a> {
    fn new(params: &'a Params) -> Self {
        Args {
            params,
            used: BTreeSet::new(),
        }
    }

    fn opt(&mut self, key: &'a str) -> Option<&'a str> {
        self.used.insert(key);
        self.params.get(key).map(String::as_str)
    }

    fn req(&mut self, key: &'a str) -> Result<&'a str> {
        self.opt(key)
            .ok_or_else(|| Error::BadParam(format!("missing parameter {key}")))
    }

    fn agent(&mut self, key: &'a str) -> Result<AgentId> {
        AgentId::new(self.req(key)?)
    }

    fn opt_agent(&mut self, key: &'a str) -> Result<Option<AgentId>> {
        self.opt(key).map(AgentId::new).transpose()
    }

    fn amount(&mut self, key: &'a str) -> Result<Amount> {
        let s = self.req(key)?;
        parse_amount(s).ok_or_else(|| Error::BadParam(format!("{key}={s} is not an unsigned integer")))
    }

    fn flag(&mut self, key: &'a str) -> Result<Option<bool>> {
        match self.opt(key) {
            None => Ok(None),
            Some("true") => Ok(Some(true)),
            Some("false") => Ok(Some(false)),
            Some(other) => Err(Error::BadParam(format!("{key}={other} is not true or false"))),
        }
    }

    /// The `currency` parameter, or the graph's only currency.
    fn currency(&mut self, g: &BalanceGraph) -> Result<CurrencyId> {
        match self.opt("currency") {
            Some(c) => {
                let c = CurrencyId::new(c)?;
                if !g.has_currency(&c) {
                    return Err(Error::UnknownCurrency(c.to_string()));
                }
                Ok(c)
            }
            None => default_currency(g),
        }
    }

    fn finish(self) -> Result<()> {
        match self.params.keys().find(|k| !self.used.contains(k.as_str())) {
            Some(k) => Err(Error::BadParam(format!("unexpected parameter {k}"))),
            None => Ok(()),
        }
    }
}

fn parse_amount(s: &str) -> Option<Amount> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// The graph's currency when there is exactly one.
pub fn default_currency(g: &BalanceGraph) -> Result<CurrencyId> {
    let all: Vec<&CurrencyId> = g.currencies().collect();
    match all.as_slice() {
        [one] => Ok((*one).clone()),
        _ => Err(Error::AmbiguousCurrency(
            all.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(", "),
        )),
    }
}

fn issued_currency(g: &BalanceGraph, agent: &AgentId) -> Result<Option<CurrencyId>> {
    Ok(g.agent(agent)?.issues().cloned())
}

/// Run the named operation. On error the graph is unchanged.
pub fn apply(g: &mut BalanceGraph, name: &str, params: &Params) -> Result<Effect> {
    let mut a = Args::new(params);
    let effect = match name {
        "add_currency" => {
            let c = CurrencyId::new(a.req("id")?)?;
            a.finish()?;
            g.add_currency(c)?;
            Effect::Declare
        }
        "add_commodity" => {
            let c = CommodityId::new(a.req("id")?)?;
            a.finish()?;
            g.add_commodity(c)?;
            Effect::Declare
        }
        "add_agent" => {
            let id = a.agent("name")?;
            let kind: AgentKind = a.req("kind")?.parse()?;
            let currency = match (a.opt("issues"), a.opt("currency")) {
                (Some(_), Some(_)) => {
                    return Err(Error::BadParam("give issues or currency, not both".into()))
                }
                (Some(c), None) | (None, Some(c)) => Some(CurrencyId::new(c)?),
                (None, None) => None,
            };
            a.finish()?;
            g.add_agent(id, kind, currency)?;
            Effect::Declare
        }
        "config" => {
            let mut config = g.config();
            if let Some(v) = a.flag("cb_intraday_credit")? {
                config.cb_intraday_credit = v;
            }
            if let Some(v) = a.flag("treasury_overdraft")? {
                config.treasury_overdraft = v;
            }
            a.finish()?;
            g.set_config(config);
            Effect::Declare
        }
        "consolidate" | "aggregate_sector" => {
            let next = rewrite(g, name, &mut a)?;
            a.finish()?;
            *g = next;
            Effect::Rewrite
        }
        _ => {
            let deltas = plan(g, name, &mut a)?;
            a.finish()?;
            g.post(&deltas)?;
            Effect::Post { deltas }
        }
    };
    Ok(effect)
}

fn rewrite<'a>(g: &BalanceGraph, name: &str, a: &mut Args<'a>) -> Result<BalanceGraph> {
    match name {
        "consolidate" => {
            let (cb, tr) = match (a.opt_agent("cb")?, a.opt_agent("treasury")?) {
                (Some(cb), Some(tr)) => (cb, tr),
                (cb, tr) => {
                    let c = a.currency(g)?;
                    let cb = match cb {
                        Some(cb) => cb,
                        None => g
                            .central_bank(&c)
                            .ok_or_else(|| Error::MissingAgent(format!("no central bank for {c}")))?
                            .id
                            .clone(),
                    };
                    let tr = match tr {
                        Some(tr) => tr,
                        None => g
                            .treasury(&c)
                            .ok_or_else(|| Error::MissingAgent(format!("no treasury for {c}")))?
                            .id
                            .clone(),
                    };
                    (cb, tr)
                }
            };
            ops::consolidate(g, &cb, &tr)
        }
        _ => {
            let kind: AgentKind = a.req("kind")?.parse()?;
            ops::aggregate_sector(g, kind)
        }
    }
}

fn plan<'a>(g: &BalanceGraph, name: &str, a: &mut Args<'a>) -> Result<Vec<Delta>> {
    match name {
        "create_loan" => ops::credit_allowed(g)?,
        "issue_convertible_note" => ops::convertibility_allowed(g)?,
        _ => {}
    }
    match name {
        "mint_commodity" => {
            let agent = a.agent("agent")?;
            let c = CommodityId::new(a.req("commodity")?)?;
            let qty = a.amount("qty")?;
            ops::plan_mint_commodity(g, &agent, &c, qty)
        }
        "transfer_commodity" => {
            let from = a.agent("from")?;
            let to = a.agent("to")?;
            let c = CommodityId::new(a.req("commodity")?)?;
            let qty = a.amount("qty")?;
            ops::plan_transfer_commodity(g, &from, &to, &c, qty)
        }
        "issue_convertible_note" => {
            let issuer = a.agent("issuer")?;
            let holder = a.agent("holder")?;
            let amount = a.amount("amount")?;
            let currency = match a.opt("currency") {
                Some(_) => a.currency(g)?,
                None => match issued_currency(g, &issuer)? {
                    Some(c) => c,
                    None => a.currency(g)?,
                },
            };
            let backing = g.unit(a.req("backing")?)?;
            let rate = match a.opt("rate") {
                Some(r) => r.parse()?,
                None => Rational::integer(1),
            };
            ops::plan_issue_convertible_note(g, &issuer, &holder, amount, &currency, &backing, rate)
                .map(|(_, d)| d)
        }
        "create_loan" => {
            let bank = a.agent("bank")?;
            let borrower = a.agent("borrower")?;
            let amount = a.amount("amount")?;
            let c = a.currency(g)?;
            ops::plan_create_loan(g, &bank, &borrower, amount, &c).map(|(_, _, d)| d)
        }
        "repay_loan" => {
            let bank = a.agent("bank")?;
            let borrower = a.agent("borrower")?;
            let amount = a.amount("amount")?;
            let c = a.currency(g)?;
            let loan = InstrumentId::new(InstrumentKind::Loan, &borrower, &bank, &c);
            ops::plan_repay_loan(g, &loan, amount)
        }
        "pay_deposit" => {
            let payer = a.agent("payer")?;
            let payee = a.agent("payee")?;
            let amount = a.amount("amount")?;
            let c = a.currency(g)?;
            let from = a.opt_agent("from_bank")?;
            let to = a.opt_agent("to_bank")?;
            ops::plan_pay_deposit(g, &payer, &payee, amount, &c, from.as_ref(), to.as_ref())
        }
        "withdraw_cash" | "deposit_cash" => {
            let holder = a.agent("holder")?;
            let amount = a.amount("amount")?;
            let c = a.currency(g)?;
            let bank = a.opt_agent("bank")?;
            if name == "withdraw_cash" {
                ops::plan_withdraw_cash(g, &holder, amount, &c, bank.as_ref())
            } else {
                ops::plan_deposit_cash(g, &holder, amount, &c, bank.as_ref())
            }
        }
        "cb_open_market_purchase" => {
            let cb = a.agent("cb")?;
            let bank = a.agent("bank")?;
            let amount = a.amount("amount")?;
            let treasury = match a.opt_agent("treasury")? {
                Some(t) => t,
                None => {
                    let c = issued_currency(g, &cb)?.ok_or_else(|| {
                        Error::KindMismatch(format!("{cb} is not a central bank"))
                    })?;
                    g.treasury(&c)
                        .ok_or_else(|| Error::MissingAgent(format!("no treasury for {c}")))?
                        .id
                        .clone()
                }
            };
            let c = g
                .agent(&treasury)?
                .currency
                .clone()
                .ok_or_else(|| Error::KindMismatch(format!("{treasury} is not a treasury")))?;
            let bond = InstrumentId::new(InstrumentKind::Bond, &treasury, &bank, &c);
            ops::plan_cb_open_market_purchase(g, &cb, &bank, &bond, amount)
        }
        "treasury_issue_bond" => {
            let treasury = a.agent("treasury")?;
            let bank = a.agent("bank")?;
            let amount = a.amount("amount")?;
            ops::plan_treasury_issue_bond(g, &treasury, &bank, amount).map(|(_, d)| d)
        }
        "treasury_spend" => {
            let treasury = a.agent("treasury")?;
            let recipient = a.agent("recipient")?;
            let amount = a.amount("amount")?;
            let bank = a.opt_agent("bank")?;
            ops::plan_treasury_spend(g, &treasury, &recipient, amount, bank.as_ref())
        }
        "tax" => {
            let treasury = a.agent("treasury")?;
            let payer = a.agent("payer")?;
            let amount = a.amount("amount")?;
            let bank = a.opt_agent("bank")?;
            ops::plan_tax(g, &treasury, &payer, amount, bank.as_ref())
        }
        "redeem" => {
            let holder = a.agent("holder")?;
            let amount = a.amount("amount")?;
            let currency = a.currency(g)?;
            let peg = match (a.opt("reserve"), a.opt("rate")) {
                (Some(unit), Some(rate)) => PegConfig {
                    currency,
                    reserve_asset: g.unit(unit)?,
                    rate: rate.parse()?,
                    initial_reserves: 0,
                },
                (None, None) => held_peg(g, &holder, currency)?,
                _ => return Err(Error::BadParam("give both reserve and rate, or neither".into())),
            };
            pegsim::plan_redeem(g, &holder, amount, &peg)
        }
        other => Err(Error::UnknownOp(other.to_string())),
    }
}

/// The peg terms of the holder's convertible claims, when they hold exactly
/// one kind.
fn held_peg(g: &BalanceGraph, holder: &AgentId, currency: CurrencyId) -> Result<PegConfig> {
    let terms: BTreeSet<Redemption> = g
        .instruments()
        .filter(|i| &i.id.creditor == holder && i.id.currency == currency)
        .filter_map(|i| i.id.redemption)
        .collect();
    let mut it = terms.into_iter();
    match (it.next(), it.next()) {
        (Some(r), None) => Ok(PegConfig {
            currency,
            reserve_asset: r.target,
            rate: r.rate,
            initial_reserves: 0,
        }),
        (None, _) => Err(Error::InsufficientClaim(format!(
            "{holder} holds no convertible {currency} notes"
        ))),
        _ => Err(Error::BadParam(format!(
            "{holder} holds notes on several terms; give reserve and rate"
        ))),
    }
}
