//! Composite monetary operations.
//!
//! Each `plan_*` function is a pure compiler from parameters to one delta
//! list; the matching operation checks nothing more and posts that list
//! atomically, so a failed precondition never leaves a partial change.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ledger::*;
use crate::rational::Rational;

fn positive(amount: Amount) -> Result<()> {
    if amount == 0 {
        Err(Error::ZeroAmount)
    } else {
        Ok(())
    }
}

fn expect_kind(g: &BalanceGraph, agent: &AgentId, kind: AgentKind) -> Result<()> {
    let a = g.agent(agent)?;
    if a.kind != kind {
        return Err(Error::KindMismatch(format!("{agent} is {}, not {kind}", a.kind)));
    }
    Ok(())
}

fn issuer(g: &BalanceGraph, currency: &CurrencyId) -> Result<AgentId> {
    if !g.has_currency(currency) {
        return Err(Error::UnknownCurrency(currency.to_string()));
    }
    g.central_bank(currency)
        .map(|a| a.id.clone())
        .ok_or_else(|| Error::MissingAgent(format!("no central bank issues {currency}")))
}

fn treasury_currency(g: &BalanceGraph, treasury: &AgentId) -> Result<CurrencyId> {
    expect_kind(g, treasury, AgentKind::Treasury)?;
    Ok(g.agent(treasury)?.currency.clone().expect("treasury has a currency"))
}

fn deposit_id(bank: &AgentId, holder: &AgentId, c: &CurrencyId) -> InstrumentId {
    InstrumentId::new(InstrumentKind::Deposit, bank, holder, c)
}

fn reserve_id(cb: &AgentId, bank: &AgentId, c: &CurrencyId) -> InstrumentId {
    InstrumentId::new(InstrumentKind::Reserve, cb, bank, c)
}

/// Banks where `holder` keeps a deposit in `c` of at least `min`, by id.
fn banks_of(g: &BalanceGraph, holder: &AgentId, c: &CurrencyId, min: Amount) -> Vec<AgentId> {
    g.instruments()
        .filter(|i| {
            i.id.kind == InstrumentKind::Deposit
                && &i.id.creditor == holder
                && &i.id.currency == c
                && i.amount >= min
                && g.agent(&i.id.debtor).is_ok_and(|a| a.kind == AgentKind::Bank)
        })
        .map(|i| i.id.debtor)
        .collect()
}

/// The bank a payment is drawn on: the named one, or the first bank holding
/// enough of the payer's deposits.
fn paying_bank(
    g: &BalanceGraph,
    payer: &AgentId,
    amount: Amount,
    c: &CurrencyId,
    bank: Option<&AgentId>,
) -> Result<AgentId> {
    g.agent(payer)?;
    match bank {
        Some(b) => {
            expect_kind(g, b, AgentKind::Bank)?;
            let have = g.amount(&deposit_id(b, payer, c));
            if have < amount {
                return Err(Error::InsufficientDeposit(format!(
                    "{payer} holds {have} {c} at {b}, needs {amount}"
                )));
            }
            Ok(b.clone())
        }
        None => banks_of(g, payer, c, amount).into_iter().next().ok_or_else(|| {
            Error::InsufficientDeposit(format!("{payer} has no bank deposit of {amount} {c}"))
        }),
    }
}

/// The bank a payment is credited to: the named one, the first bank where
/// the payee already banks, or `fallback`.
fn receiving_bank(
    g: &BalanceGraph,
    payee: &AgentId,
    c: &CurrencyId,
    bank: Option<&AgentId>,
    fallback: Option<&AgentId>,
) -> Result<AgentId> {
    g.agent(payee)?;
    if let Some(b) = bank {
        expect_kind(g, b, AgentKind::Bank)?;
        return Ok(b.clone());
    }
    banks_of(g, payee, c, 1)
        .into_iter()
        .next()
        .or_else(|| fallback.cloned())
        .ok_or_else(|| Error::NoBankAccount(payee.to_string()))
}

fn depositor(g: &BalanceGraph, agent: &AgentId) -> Result<()> {
    let a = g.agent(agent)?;
    if matches!(a.kind, AgentKind::Bank | AgentKind::CentralBank) {
        return Err(Error::KindMismatch(format!(
            "{agent} is a {} and holds no bank deposits",
            a.kind
        )));
    }
    Ok(())
}

/// Reserve debit of `bank`, drawing intraday central-bank credit for any
/// shortfall when the graph allows it.
fn debit_reserves(
    g: &BalanceGraph,
    cb: &AgentId,
    bank: &AgentId,
    amount: Amount,
    c: &CurrencyId,
    allow_credit: bool,
    deltas: &mut Vec<Delta>,
) -> Result<()> {
    let rid = reserve_id(cb, bank, c);
    let have = g.amount(&rid);
    if have < amount {
        if !allow_credit {
            return Err(Error::InsufficientReserves(format!(
                "{bank} holds {have} {c} reserves, needs {amount}"
            )));
        }
        let shortfall = amount - have;
        deltas.push(Delta::edge(
            InstrumentId::new(InstrumentKind::Loan, bank, cb, c),
            shortfall,
        ));
        deltas.push(Delta::edge(rid.clone(), shortfall));
    }
    deltas.push(Delta::edge(rid, -(amount as i128)));
    Ok(())
}

pub fn credit_allowed(g: &BalanceGraph) -> Result<()> {
    if g.regime().allows_credit() {
        Ok(())
    } else {
        Err(Error::RegimeViolation(format!(
            "no bank credit in a {} regime",
            g.regime()
        )))
    }
}

pub fn convertibility_allowed(g: &BalanceGraph) -> Result<()> {
    if matches!(g.regime(), Regime::Convertible { .. }) {
        Ok(())
    } else {
        Err(Error::RegimeViolation(format!(
            "convertible notes need a convertible regime, graph is {}",
            g.regime()
        )))
    }
}

// ---------------------------------------------------------------- commodity

pub fn plan_mint_commodity(
    g: &BalanceGraph,
    agent: &AgentId,
    commodity: &CommodityId,
    qty: Amount,
) -> Result<Vec<Delta>> {
    positive(qty)?;
    g.agent(agent)?;
    Ok(vec![Delta::Mint {
        agent: agent.clone(),
        commodity: commodity.clone(),
        qty,
    }])
}

/// New commodity supply: the only operation changing a commodity total.
pub fn mint_commodity(
    g: &mut BalanceGraph,
    agent: &AgentId,
    commodity: &CommodityId,
    qty: Amount,
) -> Result<()> {
    let d = plan_mint_commodity(g, agent, commodity, qty)?;
    g.post(&d)
}

pub fn plan_transfer_commodity(
    g: &BalanceGraph,
    from: &AgentId,
    to: &AgentId,
    commodity: &CommodityId,
    qty: Amount,
) -> Result<Vec<Delta>> {
    positive(qty)?;
    let held = g.agent(from)?.holding(commodity);
    g.agent(to)?;
    if !g.has_commodity(commodity) {
        return Err(Error::UnknownCommodity(commodity.to_string()));
    }
    if held < qty {
        return Err(Error::InsufficientCommodity(format!(
            "{from} holds {held} {commodity}, needs {qty}"
        )));
    }
    Ok(vec![
        Delta::Commodity {
            agent: from.clone(),
            commodity: commodity.clone(),
            change: -(qty as i128),
        },
        Delta::Commodity {
            agent: to.clone(),
            commodity: commodity.clone(),
            change: qty as i128,
        },
    ])
}

pub fn transfer_commodity(
    g: &mut BalanceGraph,
    from: &AgentId,
    to: &AgentId,
    commodity: &CommodityId,
    qty: Amount,
) -> Result<()> {
    let d = plan_transfer_commodity(g, from, to, commodity, qty)?;
    g.post(&d)
}

pub fn plan_issue_convertible_note(
    g: &BalanceGraph,
    issuer: &AgentId,
    holder: &AgentId,
    amount: Amount,
    currency: &CurrencyId,
    backing: &Unit,
    rate: Rational,
) -> Result<(InstrumentId, Vec<Delta>)> {
    convertibility_allowed(g)?;
    positive(amount)?;
    if !rate.is_positive() {
        return Err(Error::BadParam(format!("rate {rate} must be positive")));
    }
    g.agent(issuer)?;
    g.agent(holder)?;
    let id = InstrumentId::convertible(
        issuer,
        holder,
        currency,
        Redemption {
            target: backing.clone(),
            rate,
        },
    );
    Ok((id.clone(), vec![Delta::edge(id, amount)]))
}

/// Liability of `issuer` redeemable into `backing` at `rate`. Under full
/// backing the post is refused with `ErrInsufficientBacking` when the
/// issuer's unencumbered backing does not cover it.
#[allow(clippy::too_many_arguments)]
pub fn issue_convertible_note(
    g: &mut BalanceGraph,
    issuer: &AgentId,
    holder: &AgentId,
    amount: Amount,
    currency: &CurrencyId,
    backing: &Unit,
    rate: Rational,
) -> Result<InstrumentId> {
    let (id, d) = plan_issue_convertible_note(g, issuer, holder, amount, currency, backing, rate)?;
    g.post(&d)?;
    Ok(id)
}

// ------------------------------------------------------------------- credit

pub fn plan_create_loan(
    g: &BalanceGraph,
    bank: &AgentId,
    borrower: &AgentId,
    amount: Amount,
    currency: &CurrencyId,
) -> Result<(InstrumentId, InstrumentId, Vec<Delta>)> {
    credit_allowed(g)?;
    positive(amount)?;
    expect_kind(g, bank, AgentKind::Bank)?;
    g.agent(borrower)?;
    let loan = InstrumentId::new(InstrumentKind::Loan, borrower, bank, currency);
    let deposit = deposit_id(bank, borrower, currency);
    let deltas = vec![
        Delta::edge(loan.clone(), amount),
        Delta::edge(deposit.clone(), amount),
    ];
    Ok((loan, deposit, deltas))
}

/// A bank lends by crediting the borrower's deposit: money is created as a
/// matched loan/deposit pair.
pub fn create_loan(
    g: &mut BalanceGraph,
    bank: &AgentId,
    borrower: &AgentId,
    amount: Amount,
    currency: &CurrencyId,
) -> Result<(InstrumentId, InstrumentId)> {
    let (loan, deposit, d) = plan_create_loan(g, bank, borrower, amount, currency)?;
    g.post(&d)?;
    Ok((loan, deposit))
}

pub fn plan_repay_loan(g: &BalanceGraph, loan: &InstrumentId, amount: Amount) -> Result<Vec<Delta>> {
    if loan.kind != InstrumentKind::Loan || g.amount(loan) == 0 {
        return Err(Error::UnknownInstrument(loan.to_string()));
    }
    positive(amount)?;
    let owed = g.amount(loan);
    if owed < amount {
        return Err(Error::ExceedsLoan(format!("{loan} is {owed}, repayment {amount}")));
    }
    let (borrower, lender, c) = (&loan.debtor, &loan.creditor, &loan.currency);
    let lender_is_cb = g.agent(lender)?.issues() == Some(c);
    let borrower_kind = g.agent(borrower)?.kind;
    // the borrower pays with money the lender owes it
    let means = match (lender_is_cb, borrower_kind) {
        (true, AgentKind::Bank) => reserve_id(lender, borrower, c),
        _ => deposit_id(lender, borrower, c),
    };
    let have = g.amount(&means);
    if have < amount {
        let msg = format!("{borrower} holds {have} at {lender}, repayment {amount}");
        return Err(match means.kind {
            InstrumentKind::Reserve => Error::InsufficientReserves(msg),
            _ => Error::InsufficientDeposit(msg),
        });
    }
    Ok(vec![
        Delta::edge(loan.clone(), -(amount as i128)),
        Delta::edge(means, -(amount as i128)),
    ])
}

/// Repayment destroys the deposit money the loan created.
pub fn repay_loan(g: &mut BalanceGraph, loan: &InstrumentId, amount: Amount) -> Result<()> {
    let d = plan_repay_loan(g, loan, amount)?;
    g.post(&d)
}

// ----------------------------------------------------------------- payments

#[allow(clippy::too_many_arguments)]
pub fn plan_pay_deposit(
    g: &BalanceGraph,
    payer: &AgentId,
    payee: &AgentId,
    amount: Amount,
    currency: &CurrencyId,
    from_bank: Option<&AgentId>,
    to_bank: Option<&AgentId>,
) -> Result<Vec<Delta>> {
    positive(amount)?;
    depositor(g, payer)?;
    depositor(g, payee)?;
    let from = paying_bank(g, payer, amount, currency, from_bank)?;
    let to = receiving_bank(g, payee, currency, to_bank, Some(&from))?;
    let mut d = vec![
        Delta::edge(deposit_id(&from, payer, currency), -(amount as i128)),
        Delta::edge(deposit_id(&to, payee, currency), amount),
    ];
    if from != to {
        let cb = issuer(g, currency)?;
        let credit = g.config().cb_intraday_credit;
        debit_reserves(g, &cb, &from, amount, currency, credit, &mut d)?;
        d.push(Delta::edge(reserve_id(&cb, &to, currency), amount));
    }
    Ok(d)
}

/// Deposit transfer. Between different banks the payer's bank settles by
/// moving reserves to the payee's bank in the same posting.
pub fn pay_deposit(
    g: &mut BalanceGraph,
    payer: &AgentId,
    payee: &AgentId,
    amount: Amount,
    currency: &CurrencyId,
    from_bank: Option<&AgentId>,
    to_bank: Option<&AgentId>,
) -> Result<()> {
    let d = plan_pay_deposit(g, payer, payee, amount, currency, from_bank, to_bank)?;
    g.post(&d)
}

pub fn plan_withdraw_cash(
    g: &BalanceGraph,
    holder: &AgentId,
    amount: Amount,
    currency: &CurrencyId,
    bank: Option<&AgentId>,
) -> Result<Vec<Delta>> {
    positive(amount)?;
    depositor(g, holder)?;
    let bank = paying_bank(g, holder, amount, currency, bank)?;
    let cb = issuer(g, currency)?;
    let mut d = vec![Delta::edge(deposit_id(&bank, holder, currency), -(amount as i128))];
    debit_reserves(g, &cb, &bank, amount, currency, false, &mut d)?;
    d.push(Delta::edge(
        InstrumentId::new(InstrumentKind::Note, &cb, holder, currency),
        amount,
    ));
    Ok(d)
}

/// Deposit and reserves out, banknotes in.
pub fn withdraw_cash(
    g: &mut BalanceGraph,
    holder: &AgentId,
    amount: Amount,
    currency: &CurrencyId,
    bank: Option<&AgentId>,
) -> Result<()> {
    let d = plan_withdraw_cash(g, holder, amount, currency, bank)?;
    g.post(&d)
}

pub fn plan_deposit_cash(
    g: &BalanceGraph,
    holder: &AgentId,
    amount: Amount,
    currency: &CurrencyId,
    bank: Option<&AgentId>,
) -> Result<Vec<Delta>> {
    positive(amount)?;
    depositor(g, holder)?;
    let cb = issuer(g, currency)?;
    let note = InstrumentId::new(InstrumentKind::Note, &cb, holder, currency);
    let have = g.amount(&note);
    if have < amount {
        return Err(Error::InsufficientNotes(format!(
            "{holder} holds {have} {currency} in notes, needs {amount}"
        )));
    }
    let bank = receiving_bank(g, holder, currency, bank, None)?;
    Ok(vec![
        Delta::edge(note, -(amount as i128)),
        Delta::edge(deposit_id(&bank, holder, currency), amount),
        Delta::edge(reserve_id(&cb, &bank, currency), amount),
    ])
}

pub fn deposit_cash(
    g: &mut BalanceGraph,
    holder: &AgentId,
    amount: Amount,
    currency: &CurrencyId,
    bank: Option<&AgentId>,
) -> Result<()> {
    let d = plan_deposit_cash(g, holder, amount, currency, bank)?;
    g.post(&d)
}

// --------------------------------------------------------------- government

pub fn plan_cb_open_market_purchase(
    g: &BalanceGraph,
    cb: &AgentId,
    bank: &AgentId,
    bond: &InstrumentId,
    amount: Amount,
) -> Result<Vec<Delta>> {
    positive(amount)?;
    expect_kind(g, bank, AgentKind::Bank)?;
    let c = &bond.currency;
    if g.agent(cb)?.issues() != Some(c) {
        return Err(Error::CurrencyMismatch(format!("{cb} does not issue {c}")));
    }
    if bond.kind != InstrumentKind::Bond || &bond.creditor != bank {
        return Err(Error::BadParam(format!("{bond} is not a bond held by {bank}")));
    }
    let held = g.amount(bond);
    if held < amount {
        return Err(Error::InsufficientBond(format!("{bank} holds {held} of {bond}, sale {amount}")));
    }
    Ok(vec![
        Delta::edge(bond.clone(), -(amount as i128)),
        Delta::edge(
            InstrumentId::new(InstrumentKind::Bond, &bond.debtor, cb, c),
            amount,
        ),
        Delta::edge(reserve_id(cb, bank, c), amount),
    ])
}

/// The central bank buys part of a bond position at face value, paying in
/// reserves: an asset swap for the selling bank.
pub fn cb_open_market_purchase(
    g: &mut BalanceGraph,
    cb: &AgentId,
    bank: &AgentId,
    bond: &InstrumentId,
    amount: Amount,
) -> Result<()> {
    let d = plan_cb_open_market_purchase(g, cb, bank, bond, amount)?;
    g.post(&d)
}

pub fn plan_treasury_issue_bond(
    g: &BalanceGraph,
    treasury: &AgentId,
    bank: &AgentId,
    amount: Amount,
) -> Result<(InstrumentId, Vec<Delta>)> {
    positive(amount)?;
    let c = treasury_currency(g, treasury)?;
    expect_kind(g, bank, AgentKind::Bank)?;
    let cb = issuer(g, &c)?;
    let bond = InstrumentId::new(InstrumentKind::Bond, treasury, bank, &c);
    let mut d = vec![Delta::edge(bond.clone(), amount)];
    debit_reserves(g, &cb, bank, amount, &c, false, &mut d)?;
    credit_treasury(g, &cb, treasury, amount, &c, &mut d);
    Ok((bond, d))
}

/// A bank buys a new treasury bond with reserves; the proceeds land in the
/// treasury's account at the central bank.
pub fn treasury_issue_bond(
    g: &mut BalanceGraph,
    treasury: &AgentId,
    bank: &AgentId,
    amount: Amount,
) -> Result<InstrumentId> {
    let (bond, d) = plan_treasury_issue_bond(g, treasury, bank, amount)?;
    g.post(&d)?;
    Ok(bond)
}

pub fn plan_treasury_spend(
    g: &BalanceGraph,
    treasury: &AgentId,
    recipient: &AgentId,
    amount: Amount,
    bank: Option<&AgentId>,
) -> Result<Vec<Delta>> {
    positive(amount)?;
    let c = treasury_currency(g, treasury)?;
    let cb = issuer(g, &c)?;
    let account = deposit_id(&cb, treasury, &c);
    let balance = g.amount(&account);
    let mut d = Vec::new();
    if balance < amount {
        if !g.config().treasury_overdraft {
            return Err(Error::InsufficientTreasuryBalance(format!(
                "{treasury} holds {balance} {c} at {cb}, spending {amount}"
            )));
        }
        let shortfall = amount - balance;
        d.push(Delta::edge(
            InstrumentId::new(InstrumentKind::Loan, treasury, &cb, &c),
            shortfall,
        ));
        d.push(Delta::edge(account.clone(), shortfall));
    }
    d.push(Delta::edge(account, -(amount as i128)));
    match g.agent(recipient)?.kind {
        AgentKind::Bank => d.push(Delta::edge(reserve_id(&cb, recipient, &c), amount)),
        AgentKind::CentralBank | AgentKind::Treasury => {
            return Err(Error::KindMismatch(format!(
                "{recipient} is part of government, not a spending recipient"
            )))
        }
        _ => {
            let bank = receiving_bank(g, recipient, &c, bank, None)?;
            d.push(Delta::edge(reserve_id(&cb, &bank, &c), amount));
            d.push(Delta::edge(deposit_id(&bank, recipient, &c), amount));
        }
    }
    Ok(d)
}

/// Government spending: net money of the non-government sector rises by
/// `amount`.
pub fn treasury_spend(
    g: &mut BalanceGraph,
    treasury: &AgentId,
    recipient: &AgentId,
    amount: Amount,
    bank: Option<&AgentId>,
) -> Result<()> {
    let d = plan_treasury_spend(g, treasury, recipient, amount, bank)?;
    g.post(&d)
}

pub fn plan_tax(
    g: &BalanceGraph,
    treasury: &AgentId,
    payer: &AgentId,
    amount: Amount,
    bank: Option<&AgentId>,
) -> Result<Vec<Delta>> {
    positive(amount)?;
    let c = treasury_currency(g, treasury)?;
    let cb = issuer(g, &c)?;
    let mut d = Vec::new();
    match g.agent(payer)?.kind {
        AgentKind::Bank => debit_reserves(g, &cb, payer, amount, &c, false, &mut d)?,
        AgentKind::CentralBank | AgentKind::Treasury => {
            return Err(Error::KindMismatch(format!("{payer} is part of government")))
        }
        _ => {
            let bank = paying_bank(g, payer, amount, &c, bank)?;
            d.push(Delta::edge(deposit_id(&bank, payer, &c), -(amount as i128)));
            debit_reserves(g, &cb, &bank, amount, &c, false, &mut d)?;
        }
    }
    credit_treasury(g, &cb, treasury, amount, &c, &mut d);
    Ok(d)
}

/// Receipts pay down the overdraft before reaching the account.
fn credit_treasury(
    g: &BalanceGraph,
    cb: &AgentId,
    treasury: &AgentId,
    amount: Amount,
    c: &CurrencyId,
    d: &mut Vec<Delta>,
) {
    let overdraft = InstrumentId::new(InstrumentKind::Loan, treasury, cb, c);
    let repay = amount.min(g.amount(&overdraft));
    if repay > 0 {
        d.push(Delta::edge(overdraft, -(repay as i128)));
    }
    if amount > repay {
        d.push(Delta::edge(deposit_id(cb, treasury, c), amount - repay));
    }
}

/// Exact inverse of [`treasury_spend`].
pub fn tax(
    g: &mut BalanceGraph,
    treasury: &AgentId,
    payer: &AgentId,
    amount: Amount,
    bank: Option<&AgentId>,
) -> Result<()> {
    let d = plan_tax(g, treasury, payer, amount, bank)?;
    g.post(&d)
}

// ------------------------------------------------------------------ merging

/// Fold `members` into the single node `into`: edges between members
/// vanish, edges to third parties are re-attached, parallel edges add up.
fn merge(g: &BalanceGraph, members: &[AgentId], into: Agent) -> BalanceGraph {
    let mut out = g.clone();
    let mut merged = into;
    for m in members {
        if let Some(a) = out.agents.remove(m) {
            for (c, q) in a.commodities {
                *merged.commodities.entry(c).or_insert(0) += q;
            }
        }
    }
    let remap = |a: &AgentId| {
        if members.contains(a) {
            merged.id.clone()
        } else {
            a.clone()
        }
    };
    let mut edges: BTreeMap<InstrumentId, Amount> = BTreeMap::new();
    for (id, &amount) in &g.instruments {
        let new_id = InstrumentId {
            debtor: remap(&id.debtor),
            creditor: remap(&id.creditor),
            ..id.clone()
        };
        if new_id.debtor == new_id.creditor {
            continue;
        }
        *edges.entry(new_id).or_insert(0) += amount;
    }
    out.agents.insert(merged.id.clone(), merged);
    out.instruments = edges;
    out.rebuild_positions();
    out
}

/// A new graph in which `cb` and `treasury` form one government node (it
/// keeps the central bank's id). Claims between the two cancel, including
/// treasury bonds held by the central bank and the treasury's account.
pub fn consolidate(g: &BalanceGraph, cb: &AgentId, treasury: &AgentId) -> Result<BalanceGraph> {
    let missing = |what: &str, id: &AgentId| Error::MissingAgent(format!("no {what} named {id}"));
    let bank = g
        .agent(cb)
        .ok()
        .filter(|a| a.kind == AgentKind::CentralBank)
        .ok_or_else(|| missing("central bank", cb))?;
    let tr = g
        .agent(treasury)
        .ok()
        .filter(|a| a.kind == AgentKind::Treasury)
        .ok_or_else(|| missing("treasury", treasury))?;
    if bank.currency != tr.currency {
        return Err(Error::CurrencyMismatch(format!(
            "{cb} issues {:?}, {treasury} is a {:?} treasury",
            bank.currency, tr.currency
        )));
    }
    let gov = Agent::new(cb.clone(), AgentKind::CentralBank, bank.currency.clone());
    Ok(merge(g, &[cb.clone(), treasury.clone()], gov))
}

/// Id of the node produced by [`aggregate_sector`].
pub fn sector_id(kind: AgentKind) -> AgentId {
    AgentId::new(format!("{kind}_sector")).expect("valid id")
}

/// A new graph with every agent of `kind` merged into `<kind>_sector`.
pub fn aggregate_sector(g: &BalanceGraph, kind: AgentKind) -> Result<BalanceGraph> {
    let members: Vec<AgentId> = g
        .agents()
        .filter(|a| a.kind == kind)
        .map(|a| a.id.clone())
        .collect();
    if members.is_empty() {
        return Err(Error::MissingAgent(format!("no agent of kind {kind}")));
    }
    let id = sector_id(kind);
    if !members.contains(&id) && g.agent(&id).is_ok() {
        return Err(Error::DuplicateAgent(id.to_string()));
    }
    let mut currencies: Vec<Option<CurrencyId>> =
        g.agents().filter(|a| a.kind == kind).map(|a| a.currency.clone()).collect();
    currencies.dedup();
    if currencies.len() > 1 {
        return Err(Error::CurrencyMismatch(format!(
            "{kind} agents span several currencies"
        )));
    }
    let sector = Agent::new(id, kind, currencies.pop().flatten());
    Ok(merge(g, &members, sector))
}
