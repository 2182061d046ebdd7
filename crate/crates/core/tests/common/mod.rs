//! Shared generators and independent oracles for the integration tests.
#![allow(dead_code)]

pub mod criteria;

use std::collections::BTreeMap;

use moneygraph::dispatch::{self, Params};
use moneygraph::ledger::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn id(s: &str) -> AgentId {
    AgentId::new(s).unwrap()
}

pub fn dom() -> CurrencyId {
    CurrencyId::new("DOM").unwrap()
}

pub fn p(pairs: &[(&str, &str)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

pub fn apply(g: &mut BalanceGraph, name: &str, pairs: &[(&str, &str)]) {
    dispatch::apply(g, name, &p(pairs)).unwrap_or_else(|e| panic!("{name} {pairs:?}: {e}"));
}

/// A one-currency fiat economy: `cb`, `tr`, banks `b0..`, nonbanks `h0..`,
/// foreigners `f0..`, with treasury overdraft and intraday credit on.
pub fn fiat_economy(banks: usize, nonbanks: usize, foreign: usize) -> BalanceGraph {
    let mut g = BalanceGraph::new(Regime::Fiat);
    apply(&mut g, "add_agent", &[("name", "cb"), ("kind", "central_bank"), ("issues", "DOM")]);
    apply(&mut g, "add_agent", &[("name", "tr"), ("kind", "treasury"), ("currency", "DOM")]);
    for (prefix, kind, n) in [("b", "bank", banks), ("h", "nonbank", nonbanks), ("f", "foreign", foreign)] {
        for i in 0..n {
            apply(&mut g, "add_agent", &[("name", &format!("{prefix}{i}")), ("kind", kind)]);
        }
    }
    apply(&mut g, "config", &[("treasury_overdraft", "true"), ("cb_intraday_credit", "true")]);
    g
}

pub fn of_kind(g: &BalanceGraph, kinds: &[AgentKind]) -> Vec<String> {
    g.agents()
        .filter(|a| kinds.contains(&a.kind))
        .map(|a| a.id.to_string())
        .collect()
}

fn pick(rng: &mut Rng8, v: &[String]) -> String {
    v.choose(rng).cloned().unwrap_or_else(|| "nobody".into())
}

fn amount(rng: &mut Rng8) -> String {
    match rng.gen_range(0..40) {
        0 => "0".into(),
        1 => u64::MAX.to_string(),
        _ => rng.gen_range(1..=200u64).to_string(),
    }
}

pub const FIAT_OPS: &[&str] = &[
    "create_loan",
    "repay_loan",
    "pay_deposit",
    "withdraw_cash",
    "deposit_cash",
    "cb_open_market_purchase",
    "treasury_issue_bond",
    "treasury_spend",
    "tax",
];

/// A random operation on a fiat economy. Most are valid; some are meant to
/// fail (zero or huge amounts, overdrawn accounts).
pub fn random_fiat_op(g: &BalanceGraph, rng: &mut Rng8) -> (String, Params) {
    let banks = of_kind(g, &[AgentKind::Bank]);
    let holders = of_kind(g, &[AgentKind::Nonbank, AgentKind::Foreign]);
    let name = *FIAT_OPS.choose(rng).unwrap();
    let mut out: Vec<(String, String)> = Vec::new();
    let mut put = |k: &str, v: String| out.push((k.into(), v));
    match name {
        "create_loan" => {
            put("bank", pick(rng, &banks));
            put("borrower", pick(rng, &holders));
            put("amount", amount(rng));
        }
        "repay_loan" => {
            let loans: Vec<(String, String, u64)> = g
                .instruments()
                .filter(|i| i.id.kind == InstrumentKind::Loan)
                .map(|i| (i.id.creditor.to_string(), i.id.debtor.to_string(), i.amount))
                .collect();
            match loans.choose(rng) {
                Some((bank, borrower, owed)) => {
                    put("bank", bank.clone());
                    put("borrower", borrower.clone());
                    let a = if rng.gen_bool(0.1) { owed.saturating_add(1) } else { rng.gen_range(1..=*owed) };
                    put("amount", a.to_string());
                }
                None => {
                    put("bank", pick(rng, &banks));
                    put("borrower", pick(rng, &holders));
                    put("amount", amount(rng));
                }
            }
        }
        "pay_deposit" => {
            put("payer", pick(rng, &holders));
            put("payee", pick(rng, &holders));
            put("amount", amount(rng));
            if rng.gen_bool(0.5) {
                put("to_bank", pick(rng, &banks));
            }
        }
        "withdraw_cash" | "deposit_cash" => {
            put("holder", pick(rng, &holders));
            put("amount", amount(rng));
        }
        "cb_open_market_purchase" => {
            put("cb", "cb".into());
            put("bank", pick(rng, &banks));
            put("amount", amount(rng));
        }
        "treasury_issue_bond" => {
            put("treasury", "tr".into());
            put("bank", pick(rng, &banks));
            put("amount", amount(rng));
        }
        "treasury_spend" => {
            put("treasury", "tr".into());
            let all: Vec<String> = holders.iter().chain(&banks).cloned().collect();
            put("recipient", pick(rng, &all));
            put("amount", amount(rng));
            if rng.gen_bool(0.7) {
                put("bank", pick(rng, &banks));
            }
        }
        "tax" => {
            put("treasury", "tr".into());
            let all: Vec<String> = holders.iter().chain(&banks).cloned().collect();
            put("payer", pick(rng, &all));
            put("amount", amount(rng));
        }
        _ => unreachable!(),
    }
    (name.to_string(), out.into_iter().collect())
}

/// Σ net position over all agents is zero in every currency, and total
/// assets equal total liabilities.
pub fn sector_zero_sum(g: &BalanceGraph) -> Result<(), String> {
    let mut sums: BTreeMap<&str, (u128, u128, i128)> = BTreeMap::new();
    for a in g.agents() {
        for (c, p) in &a.positions {
            let s = sums.entry(c.as_str()).or_default();
            s.0 += p.assets;
            s.1 += p.liabilities;
            s.2 += p.assets as i128 - p.liabilities as i128;
        }
    }
    match sums.iter().find(|(_, (a, l, n))| a != l || *n != 0) {
        Some((c, s)) => Err(format!("{c}: assets, liabilities, net {s:?}")),
        None => Ok(()),
    }
}

/// Zero-sum recomputed from the raw edges alone: per currency, total
/// assets equal total liabilities, and every agent's cached position
/// equals what its edges say.
pub fn raw_zero_sum(g: &BalanceGraph) -> Result<(), String> {
    let mut pos: BTreeMap<(&str, &str), (u128, u128)> = BTreeMap::new();
    let mut total: BTreeMap<&str, (u128, u128)> = BTreeMap::new();
    for (i, amount) in g.edges() {
        let c = i.currency.as_str();
        let a = amount as u128;
        pos.entry((i.creditor.as_str(), c)).or_default().0 += a;
        pos.entry((i.debtor.as_str(), c)).or_default().1 += a;
        let t = total.entry(c).or_default();
        t.0 += a;
        t.1 += a;
    }
    for (c, (assets, liabilities)) in &total {
        let net: i128 = pos
            .iter()
            .filter(|((_, cur), _)| cur == c)
            .map(|(_, (a, l))| *a as i128 - *l as i128)
            .sum();
        if assets != liabilities || net != 0 {
            return Err(format!("{c}: assets {assets} liabilities {liabilities} net {net}"));
        }
    }
    for a in g.agents() {
        for (c, cached) in &a.positions {
            let raw = pos.get(&(a.id.as_str(), c.as_str())).copied().unwrap_or((0, 0));
            if (cached.assets, cached.liabilities) != raw {
                return Err(format!("{} {c}: cached {cached:?} edges {raw:?}", a.id));
            }
        }
    }
    Ok(())
}

/// For every convertible issuer and target: Σ notes × rate ≤ what the
/// issuer holds of the target. Exact rationals.
pub fn backing_ok(g: &BalanceGraph) -> bool {
    let mut owed: BTreeMap<(String, Unit), BigRational> = BTreeMap::new();
    for i in g.instruments() {
        if let Some(r) = &i.id.redemption {
            let rate = r.rate.to_big();
            *owed
                .entry((i.id.debtor.to_string(), r.target.clone()))
                .or_insert_with(|| BigRational::from_integer(0.into())) +=
                rate * BigRational::from_integer(BigInt::from(i.amount));
        }
    }
    owed.iter().all(|((issuer, target), need)| {
        let a = g.agent(&id(issuer)).unwrap();
        let have: u128 = match target {
            Unit::Commodity(c) => a.holding(c) as u128,
            Unit::Currency(c) => g.financial_assets(&a.id, c),
        };
        *need <= BigRational::from_integer(BigInt::from(have))
    })
}

/// A fiat economy after `steps` random operations (failures skipped).
pub fn random_fiat_graph(rng: &mut Rng8, steps: usize) -> BalanceGraph {
    let banks = rng.gen_range(1..=4);
    let nonbanks = rng.gen_range(1..=5);
    let foreign = rng.gen_range(0..=1);
    let mut g = fiat_economy(banks, nonbanks, foreign);
    if rng.gen_bool(0.3) {
        apply(&mut g, "config", &[("cb_intraday_credit", "false")]);
    }
    for _ in 0..steps {
        let (name, params) = random_fiat_op(&g, rng);
        let _ = dispatch::apply(&mut g, &name, &params);
    }
    g
}
