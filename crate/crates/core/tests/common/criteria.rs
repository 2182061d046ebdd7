//! The acceptance checks, shared by the `acceptance` target and the
//! ordinary integration tests (which run them at smaller sizes).
//! Each returns a one-line summary or the first discrepancy.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::panic;

use moneygraph::dispatch::{self, Params};
use moneygraph::ledger::*;
use moneygraph::measures::{broad_money, net_money};
use moneygraph::pegsim::{self, Demand, DemandProcess, PegConfig};
use moneygraph::{ops, scenario, Rational};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use super::*;

pub type Outcome = Result<String, String>;

// ------------------------------------------------------------ conservation

/// `valid` successful random operations on a 20-agent fiat economy. After
/// every step the invariant checker must be silent and the agents' net
/// positions must sum to zero per currency; every 64 steps all positions
/// are recomputed from the raw edges. Every fourth rejected operation is
/// checked to have left the graph untouched.
pub fn conservation(valid: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    let mut g = fiat_economy(6, 11, 1);
    if g.agents().count() != 20 {
        return Err(format!("economy has {} agents", g.agents().count()));
    }
    let (mut ok, mut failed, mut attempts) = (0usize, 0usize, 0usize);
    while ok < valid {
        attempts += 1;
        let (name, params) = random_fiat_op(&g, &mut rng);
        let before = (attempts % 4 == 0).then(|| g.clone());
        match dispatch::apply(&mut g, &name, &params) {
            Ok(_) => ok += 1,
            Err(e) => {
                failed += 1;
                if before.is_some_and(|b| b != g) {
                    return Err(format!("{name} {params:?} failed with {e} but changed the graph"));
                }
                if failed > 50 * valid {
                    return Err(format!("only {ok} of {attempts} operations succeeded"));
                }
                continue;
            }
        }
        let v = check_invariants(&g);
        if !v.is_empty() {
            return Err(format!("after {name} {params:?}: {}", v[0]));
        }
        sector_zero_sum(&g).map_err(|e| format!("after {name} {params:?}: {e}"))?;
        if ok % 64 == 0 || ok == valid {
            raw_zero_sum(&g).map_err(|e| format!("after {name} {params:?}: {e}"))?;
        }
    }
    Ok(format!(
        "{ok} operations ({failed} rejected), {} instruments at the end",
        g.instrument_count()
    ))
}

// -------------------------------------------------------------- delta laws

/// (Δbroad, Δnet) per operation, as multiples of the amount.
pub const LAWS: &[(&str, i128, i128)] = &[
    ("create_loan", 1, 0),
    ("repay_loan", -1, 0),
    ("pay_deposit", 0, 0),
    ("withdraw_cash", 0, 0),
    ("deposit_cash", 0, 0),
    ("cb_open_market_purchase", 0, 0),
    ("treasury_issue_bond", 0, 0),
    ("treasury_spend", 1, 1),
    ("tax", -1, -1),
];

fn edges_of(g: &BalanceGraph, keep: impl Fn(&Instrument) -> bool) -> Vec<Instrument> {
    g.instruments().filter(|i| keep(i)).collect()
}

/// An operation from the delta-law table with nonbank counterparts,
/// sized from the current state so that most attempts succeed.
fn law_op(g: &BalanceGraph, rng: &mut Rng8) -> Option<(String, Params, u64)> {
    let banks = of_kind(g, &[AgentKind::Bank]);
    let households = of_kind(g, &[AgentKind::Nonbank]);
    let is_household = |a: &AgentId| households.iter().any(|h| h == a.as_str());
    let (name, _, _) = *LAWS.choose(rng).unwrap();
    let mut out: Vec<(&str, String)> = Vec::new();
    let amount;
    match name {
        "create_loan" | "treasury_spend" => {
            amount = rng.gen_range(1..=500);
            let bank = banks.choose(rng)?.clone();
            let h = households.choose(rng)?.clone();
            if name == "create_loan" {
                out.extend([("bank", bank), ("borrower", h)]);
            } else {
                out.extend([("treasury", "tr".into()), ("recipient", h), ("bank", bank)]);
            }
        }
        "repay_loan" => {
            let loans = edges_of(g, |i| i.id.kind == InstrumentKind::Loan && is_household(&i.id.debtor));
            let loan = loans.choose(rng)?;
            let dep = InstrumentId::new(InstrumentKind::Deposit, &loan.id.creditor, &loan.id.debtor, &dom());
            let max = loan.amount.min(g.amount(&dep));
            if max == 0 {
                return None;
            }
            amount = rng.gen_range(1..=max);
            out.extend([("bank", loan.id.creditor.to_string()), ("borrower", loan.id.debtor.to_string())]);
        }
        "pay_deposit" | "withdraw_cash" | "tax" => {
            let deps = edges_of(g, |i| i.id.kind == InstrumentKind::Deposit && is_household(&i.id.creditor));
            let d = deps.choose(rng)?;
            amount = rng.gen_range(1..=d.amount);
            let (bank, h) = (d.id.debtor.to_string(), d.id.creditor.to_string());
            match name {
                "pay_deposit" => {
                    let payee = households.iter().filter(|x| **x != h).collect::<Vec<_>>();
                    let payee = (*payee.choose(rng)?).clone();
                    let to = banks.choose(rng)?.clone();
                    out.extend([("payer", h), ("payee", payee), ("from_bank", bank), ("to_bank", to)]);
                }
                "withdraw_cash" => out.extend([("holder", h), ("bank", bank)]),
                _ => out.extend([("treasury", "tr".into()), ("payer", h), ("bank", bank)]),
            }
        }
        "deposit_cash" => {
            let notes = edges_of(g, |i| i.id.kind == InstrumentKind::Note && is_household(&i.id.creditor));
            let n = notes.choose(rng)?;
            amount = rng.gen_range(1..=n.amount);
            out.extend([("holder", n.id.creditor.to_string()), ("bank", banks.choose(rng)?.clone())]);
        }
        "cb_open_market_purchase" => {
            let bonds = edges_of(g, |i| {
                i.id.kind == InstrumentKind::Bond && g.agent(&i.id.creditor).is_ok_and(|a| a.kind == AgentKind::Bank)
            });
            let b = bonds.choose(rng)?;
            amount = rng.gen_range(1..=b.amount);
            out.extend([("cb", "cb".into()), ("bank", b.id.creditor.to_string())]);
        }
        "treasury_issue_bond" => {
            let bank = banks.choose(rng)?.clone();
            let reserves = g.amount(&InstrumentId::new(InstrumentKind::Reserve, &id("cb"), &id(&bank), &dom()));
            if reserves == 0 {
                return None;
            }
            amount = rng.gen_range(1..=reserves);
            out.extend([("treasury", "tr".into()), ("bank", bank)]);
        }
        _ => unreachable!(),
    }
    let mut params: Params = out.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    params.insert("amount".into(), amount.to_string());
    Some((name.to_string(), params, amount))
}

/// `cases` successful operations drawn from the table; the measured
/// changes of broad and net money must equal the table exactly.
pub fn delta_laws(cases: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    let mut g = fiat_economy(4, 8, 1);
    let mut per_op: BTreeMap<&str, usize> = BTreeMap::new();
    let (mut ok, mut attempts) = (0usize, 0usize);
    while ok < cases {
        attempts += 1;
        if attempts > 200 * cases {
            return Err(format!("only {ok} successful cases in {attempts} attempts"));
        }
        let Some((name, params, a)) = law_op(&g, &mut rng) else {
            continue;
        };
        let broad0 = broad_money(&g, &dom()).unwrap() as i128;
        let net0 = net_money(&g, &dom()).unwrap();
        let before = g.clone();
        if dispatch::apply(&mut g, &name, &params).is_err() {
            if g != before {
                return Err(format!("failed {name} changed the graph"));
            }
            continue;
        }
        let db = broad_money(&g, &dom()).unwrap() as i128 - broad0;
        let dn = net_money(&g, &dom()).unwrap() - net0;
        let &(law, kb, kn) = LAWS.iter().find(|(n, _, _)| *n == name).unwrap();
        let a = a as i128;
        if (db, dn) != (kb * a, kn * a) {
            return Err(format!(
                "{law} {params:?}: measured ({db:+}, {dn:+}), table says ({:+}, {:+})",
                kb * a,
                kn * a
            ));
        }
        *per_op.entry(law).or_default() += 1;
        ok += 1;
    }
    let missing: Vec<&str> = LAWS
        .iter()
        .map(|(n, _, _)| *n)
        .filter(|n| per_op.get(n).copied().unwrap_or(0) == 0)
        .collect();
    if !missing.is_empty() {
        return Err(format!("never exercised: {missing:?}"));
    }
    let spread: Vec<String> = per_op.iter().map(|(k, v)| format!("{k}={v}")).collect();
    Ok(format!("{ok} cases exact ({})", spread.join(" ")))
}

// ------------------------------------------------------------ model check

/// Agents cb (issues DOM), b1, h1; commodity GOLD.
pub fn commodity_graph(regime: Regime) -> BalanceGraph {
    let mut g = BalanceGraph::new(regime);
    apply(&mut g, "add_commodity", &[("id", "GOLD")]);
    apply(&mut g, "add_agent", &[("name", "cb"), ("kind", "central_bank"), ("issues", "DOM")]);
    apply(&mut g, "add_agent", &[("name", "b1"), ("kind", "bank")]);
    apply(&mut g, "add_agent", &[("name", "h1"), ("kind", "nonbank")]);
    g
}

pub fn model_alphabet() -> Vec<(&'static str, Params)> {
    let issue = |holder: &str, amount: &str| {
        p(&[("issuer", "cb"), ("holder", holder), ("amount", amount), ("backing", "GOLD")])
    };
    let transfer = |from: &str, to: &str| {
        p(&[("from", from), ("to", to), ("commodity", "GOLD"), ("qty", "1")])
    };
    vec![
        ("mint_commodity", p(&[("agent", "cb"), ("commodity", "GOLD"), ("qty", "1")])),
        ("mint_commodity", p(&[("agent", "h1"), ("commodity", "GOLD"), ("qty", "1")])),
        ("transfer_commodity", transfer("h1", "cb")),
        ("transfer_commodity", transfer("cb", "h1")),
        ("transfer_commodity", transfer("cb", "b1")),
        ("issue_convertible_note", issue("h1", "1")),
        ("issue_convertible_note", issue("h1", "2")),
        ("issue_convertible_note", issue("b1", "1")),
        ("create_loan", p(&[("bank", "b1"), ("borrower", "h1"), ("amount", "1"), ("currency", "DOM")])),
        ("redeem", p(&[("holder", "h1"), ("amount", "1")])),
        ("redeem", p(&[("holder", "b1"), ("amount", "1")])),
    ]
}

/// Notes the issuer could still put out under full backing at rate 1:
/// GOLD held minus GOLD-convertible notes outstanding.
fn headroom(g: &BalanceGraph) -> i128 {
    let held = g.agent(&id("cb")).unwrap().holding(&CommodityId::new("GOLD").unwrap()) as i128;
    let owed: i128 = g
        .instruments()
        .filter(|i| i.id.kind == InstrumentKind::ConvertibleNote)
        .map(|i| i.amount as i128)
        .sum();
    held - owed
}

/// Every sequence of at most `depth` operations from [`model_alphabet`]
/// (breadth first, identical states merged), in the pure commodity and
/// fully backed convertible regimes.
pub fn model_check(depth: usize) -> Outcome {
    let mut summary = Vec::new();
    for regime in [Regime::PureCommodity, Regime::Convertible { full_backing: true }] {
        let alphabet = model_alphabet();
        let start = commodity_graph(regime);
        let mut seen: HashSet<String> = HashSet::from([start.snapshot()]);
        let mut queue = VecDeque::from([(start, 0usize)]);
        let (mut transitions, mut accepted_notes) = (0usize, 0usize);
        while let Some((g, d)) = queue.pop_front() {
            if d == depth {
                continue;
            }
            for (name, params) in &alphabet {
                transitions += 1;
                let mut next = g.clone();
                let res = dispatch::apply(&mut next, name, params);
                let path = || format!("{regime}: {name} {params:?} from {}", g.snapshot());
                match (*name, &res) {
                    ("create_loan", Ok(_)) => return Err(format!("loan accepted: {}", path())),
                    ("create_loan", Err(e)) if e.code() != "ErrRegimeViolation" => {
                        return Err(format!("loan rejected with {}: {}", e.code(), path()))
                    }
                    ("issue_convertible_note", r) => {
                        let amount: i128 = params["amount"].parse().unwrap();
                        let should = regime != Regime::PureCommodity && headroom(&g) >= amount;
                        if r.is_ok() != should {
                            return Err(format!("note issue ok={} expected {should}: {}", r.is_ok(), path()));
                        }
                        if let Err(e) = r {
                            let want = if regime == Regime::PureCommodity {
                                "ErrRegimeViolation"
                            } else {
                                "ErrInsufficientBacking"
                            };
                            if e.code() != want {
                                return Err(format!("note rejected with {}: {}", e.code(), path()));
                            }
                        } else {
                            accepted_notes += 1;
                        }
                    }
                    _ => {}
                }
                if res.is_err() {
                    if next != g {
                        return Err(format!("rejected op changed the graph: {}", path()));
                    }
                    continue;
                }
                if !backing_ok(&next) || headroom(&next) < 0 {
                    return Err(format!("backing exceeded: {}", path()));
                }
                if regime == Regime::PureCommodity && next.instrument_count() > 0 {
                    return Err(format!("financial claim in a commodity economy: {}", path()));
                }
                let v = check_invariants(&next);
                if !v.is_empty() {
                    return Err(format!("{:?}: {}", v[0], path()));
                }
                if seen.insert(next.snapshot()) {
                    queue.push_back((next, d + 1));
                }
            }
        }
        summary.push(format!(
            "{regime}: {} states, {transitions} transitions, {accepted_notes} note issues accepted",
            seen.len()
        ));
    }
    Ok(format!("depth {depth}; {}", summary.join("; ")))
}

// ---------------------------------------------------------- consolidation

/// `graphs` random fiat graphs: consolidating cb and tr leaves every other
/// agent's serialized balance sheet, and net money, unchanged.
pub fn consolidation(graphs: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    let mut sheets = 0usize;
    for n in 0..graphs {
        let steps = rng.gen_range(0..=60);
        let g = random_fiat_graph(&mut rng, steps);
        let c = ops::consolidate(&g, &id("cb"), &id("tr")).map_err(|e| format!("graph {n}: {e}"))?;
        for a in g.agents().filter(|a| !g.is_government(&a.id, &dom())) {
            let unit = Unit::Currency(dom());
            let before = g.balance_sheet(&a.id, &unit).unwrap().to_json();
            let after = c
                .balance_sheet(&a.id, &unit)
                .map_err(|e| format!("graph {n}: {} lost: {e}", a.id))?
                .to_json();
            if before != after {
                return Err(format!("graph {n}, {}: {before} became {after}", a.id));
            }
            sheets += 1;
        }
        let (n0, n1) = (net_money(&g, &dom()).unwrap(), net_money(&c, &dom()).unwrap());
        if n0 != n1 {
            return Err(format!("graph {n}: net money {n0} became {n1}"));
        }
        if !check_invariants(&c).is_empty() {
            return Err(format!("graph {n}: consolidated graph violates invariants"));
        }
    }
    Ok(format!("{graphs} graphs, {sheets} sheets byte-identical, net money unchanged"))
}

// ---------------------------------------------------------------- pegsim

pub fn fair() -> Vec<Demand> {
    let half = Rational::new(1, 2).unwrap();
    vec![Demand { delta: 1, prob: half }, Demand { delta: -1, prob: half }]
}

/// Counts the ±1 paths of length `horizon` from `reserves` that touch
/// zero, by walking every bit pattern.
pub fn enumerate_fair(reserves: i64, horizon: u32) -> BigRational {
    let mut hits = 0u64;
    for mask in 0u64..(1u64 << horizon) {
        let mut r = reserves;
        for t in 0..horizon {
            r += if mask >> t & 1 == 1 { -1 } else { 1 };
            if r <= 0 {
                hits += 1;
                break;
            }
        }
    }
    BigRational::new(BigInt::from(hits), BigInt::from(1u64) << horizon)
}

/// Same probability from surviving-path counts, one reserve level per
/// slot.
pub fn dp_fair(reserves: usize, horizon: u32) -> BigRational {
    let width = reserves + horizon as usize + 2;
    let mut alive = vec![BigUint::zero(); width];
    alive[reserves] = BigUint::one();
    for _ in 0..horizon {
        let mut next = vec![BigUint::zero(); width];
        for r in 1..width - 1 {
            if alive[r].is_zero() {
                continue;
            }
            next[r + 1] += &alive[r];
            if r > 1 {
                next[r - 1] += &alive[r];
            }
        }
        alive = next;
    }
    let total = BigUint::one() << horizon;
    let surviving: BigUint = alive.iter().sum();
    BigRational::new(BigInt::from(&total - surviving), BigInt::from(total))
}

fn peg(reserves: u64) -> PegConfig {
    PegConfig {
        currency: dom(),
        reserve_asset: Unit::Commodity(CommodityId::new("GOLD").unwrap()),
        rate: Rational::integer(1),
        initial_reserves: reserves,
    }
}

fn within_three_sigma(reserves: u64, horizon: u32, exact: &BigRational, trials: u64, seed: u64) -> Outcome {
    let demand = DemandProcess { steps: fair(), horizon, trials, seed };
    let out = pegsim::simulate(&peg(reserves), &demand).map_err(|e| e.to_string())?;
    let p = exact.to_f64().unwrap();
    let freq = out.depleted() as f64 / trials as f64;
    let bound = 3.0 * (p * (1.0 - p) / trials as f64).sqrt();
    let dev = (freq - p).abs();
    let line = format!(
        "R={reserves} h={horizon}: exact {exact}, mc {}/{trials} (|dev| {dev:.5} vs 3sigma {bound:.5})",
        out.depleted()
    );
    if dev <= bound {
        Ok(line)
    } else {
        Err(line)
    }
}

/// Reserves 2, horizon 4 must be exactly 3/8 and the seeded Monte Carlo
/// within three standard errors; reserves 3, horizon 10 is checked against
/// all 2^10 paths.
pub fn peg_oracle(trials: u64) -> Outcome {
    let three_eighths = BigRational::new(3.into(), 8.into());
    let enumerated = enumerate_fair(2, 4);
    if enumerated != three_eighths {
        return Err(format!("enumeration gives {enumerated}, not 3/8"));
    }
    let lib = pegsim::absorption_oracle(2, &fair(), 4).map_err(|e| e.to_string())?;
    let exact = pegsim::exact_depletion(&peg(2), &fair(), 4).map_err(|e| e.to_string())?;
    if lib != enumerated || exact != enumerated {
        return Err(format!("engine oracle {lib}, exact_depletion {exact}; enumeration 3/8"));
    }
    let first = within_three_sigma(2, 4, &enumerated, trials, 42)?;

    let enumerated = enumerate_fair(3, 10);
    let lib = pegsim::exact_depletion(&peg(3), &fair(), 10).map_err(|e| e.to_string())?;
    if lib != enumerated {
        return Err(format!("R=3 h=10: engine {lib}, 2^10 paths give {enumerated}"));
    }
    let second = within_three_sigma(3, 10, &enumerated, trials, 42)?;
    Ok(format!("{first}; {second}"))
}

/// Depletion probability of the fair walk for reserves 1..=5 at horizons
/// 10, 100 and 1000 from the engine's dynamic program, cross-checked
/// against [`dp_fair`]. Requires > 0.95 at 1000 and a strictly increasing
/// sequence over the horizons.
pub fn unsustainability() -> Outcome {
    let horizons = [10u32, 100, 1000];
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for reserves in 1..=5i64 {
        let mut ps = Vec::new();
        for &h in &horizons {
            let lib = pegsim::absorption_dp(reserves, &fair(), h).map_err(|e| e.to_string())?;
            let own = dp_fair(reserves as usize, h);
            if lib != own {
                return Err(format!("R={reserves} h={h}: engine DP disagrees with the path count"));
            }
            ps.push(own.to_f64().unwrap());
        }
        if !ps.windows(2).all(|w| w[0] < w[1]) {
            failures.push(format!("R={reserves} not increasing"));
        }
        if ps[2] <= 0.95 {
            failures.push(format!("R={reserves} p(1000)={:.4} <= 0.95", ps[2]));
        }
        rows.push(format!("R={reserves}: {:.4} {:.4} {:.4}", ps[0], ps[1], ps[2]));
    }
    let table = rows.join(", ");
    if failures.is_empty() {
        Ok(table)
    } else {
        Err(format!("{}; {table}", failures.join(", ")))
    }
}

// ------------------------------------------------------------ determinism

pub fn corpus_deterministic() -> Outcome {
    for (name, text) in scenario::BUNDLED {
        let s = scenario::parse(text).map_err(|e| format!("{name}: {e}"))?;
        let (a, b) = (scenario::run(&s), scenario::run(&scenario::parse(text).unwrap()));
        if !a.ok() {
            return Err(format!("{name}: {}", a.failure.unwrap()));
        }
        let same = a.trace_jsonl() == b.trace_jsonl()
            && a.csv() == b.csv()
            && a.snapshot == b.snapshot
            && a.artifacts == b.artifacts;
        if !same {
            return Err(format!("{name}: two runs differ"));
        }
        let printed = scenario::print(&s);
        let again = scenario::parse(&printed).map_err(|e| format!("{name} reprinted: {e}"))?;
        if again != s || scenario::print(&again) != printed {
            return Err(format!("{name}: parse(print(s)) != s"));
        }
    }
    Ok(format!("{} scenarios", scenario::BUNDLED.len()))
}

pub fn pegsim_deterministic() -> Outcome {
    let skew = moneygraph::pegsim::parse_demand("+2:1/3,-1:1/2,0:1/6").unwrap();
    for (steps, reserves, seed) in [(fair(), 2, 42), (fair(), 5, 7), (skew, 3, 1)] {
        let d = DemandProcess { steps, horizon: 50, trials: 5000, seed };
        let a = pegsim::simulate(&peg(reserves), &d).unwrap();
        let b = pegsim::simulate(&peg(reserves), &d).unwrap();
        if a != b || a.steps_csv() != b.steps_csv() {
            return Err(format!("seed {seed}: runs differ"));
        }
    }
    Ok("3 seeded runs".into())
}

const WORDS: &[&str] = &[
    "regime", "fiat", "commodity", "convertible", "full_backing", "currency", "commodity", "agent",
    "op", "assert", "expect_error", "snapshot", "dot", "kind=bank", "kind=nonbank",
    "kind=central_bank", "issues=DOM", "currency=DOM", "create_loan", "pay_deposit", "bank=b1",
    "borrower=h1", "amount=100", "amount=-1", "amount=", "=", "==", ">=", "<=", "broad_money",
    "base_money(DOM)", "net_money(", "net_worth(h1,GOLD)", "error=ErrExceedsLoan", "#", "DOM", "h1",
    "b1", "cb", "é", "\t", "18446744073709551616", "-0",
];

/// Random byte lines and token soup: the parser must never panic, and
/// every error it reports carries a line and a column.
pub fn parser_fuzz(lines: usize, seed: u64) -> Outcome {
    let mut rng = rng(seed);
    let hook = panic::take_hook();
    panic::set_hook(Box::new(|_| {}));
    let mut errors = 0usize;
    let mut result = Ok(());
    for n in 0..lines {
        let body = if n % 2 == 0 {
            let len = rng.gen_range(0..40);
            let bytes: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            String::from_utf8_lossy(&bytes).into_owned()
        } else {
            let len = rng.gen_range(0..8);
            (0..len).map(|_| *WORDS.choose(&mut rng).unwrap()).collect::<Vec<_>>().join(" ")
        };
        let text = if n % 3 == 0 { format!("regime fiat\n{body}\n") } else { body.clone() };
        match panic::catch_unwind(|| scenario::parse(&text)) {
            Err(_) => {
                result = Err(format!("parser panicked on {body:?}"));
                break;
            }
            Ok(Err(e)) => {
                errors += 1;
                match e {
                    scenario::ScenarioError::Parse { line, column, .. } if line >= 1 && column >= 1 => {}
                    other => {
                        result = Err(format!("{body:?}: bad error {other:?}"));
                        break;
                    }
                }
            }
            Ok(Ok(_)) => {}
        }
    }
    panic::set_hook(hook);
    result.map(|_| format!("{lines} lines, {errors} rejected with positions"))
}

pub fn determinism(fuzz_lines: usize) -> Outcome {
    let a = corpus_deterministic()?;
    let b = pegsim_deterministic()?;
    let c = parser_fuzz(fuzz_lines, 0xF022)?;
    Ok(format!("{a}; {b}; {c}"))
}
