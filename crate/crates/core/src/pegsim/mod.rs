//! Convertibility and pegs.
//!
//! A gold standard and a currency peg are the same mechanism here: a
//! central bank promises to redeem its convertible liabilities into a
//! reserve asset at a fixed rate, out of a finite stock. [`redeem`] is the
//! ledger side of one redemption; [`simulate`] runs stochastic redemption
//! demand against the reserve stock, and the oracles give the exact
//! depletion probability.

mod oracle;
mod rng;

use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::*;
use crate::rational::Rational;

pub use oracle::{absorption_dp, absorption_oracle, MAX_PATHS};
pub use rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PegConfig {
    /// Currency of the convertible liabilities.
    pub currency: CurrencyId,
    /// Commodity (gold standard) or foreign currency (peg).
    pub reserve_asset: Unit,
    /// Reserve units per domestic unit.
    pub rate: Rational,
    #[serde(with = "crate::dec")]
    pub initial_reserves: Amount,
}

impl PegConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.rate.is_positive() {
            return Err(Error::BadParam(format!("peg rate {} must be positive", self.rate)));
        }
        Ok(())
    }
}

/// One outcome of the per-step net redemption demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Demand {
    /// Positive = net redemption (reserves fall), negative = inflow.
    pub delta: i64,
    pub prob: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemandProcess {
    pub steps: Vec<Demand>,
    pub horizon: u32,
    pub trials: u64,
    pub seed: u64,
}

/// Parse `"+1:1/2,-1:1/2"`.
pub fn parse_demand(s: &str) -> Result<Vec<Demand>> {
    s.split(',')
        .map(|part| {
            let (delta, prob) = part.trim().split_once(':').ok_or_else(|| {
                Error::BadDistribution(format!("expected delta:probability, got {part:?}"))
            })?;
            let delta = delta.trim();
            let digits = delta.strip_prefix(['+', '-']).unwrap_or(delta);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::BadDistribution(format!("bad delta {delta:?}")));
            }
            let delta: i64 = delta
                .strip_prefix('+')
                .unwrap_or(delta)
                .parse()
                .map_err(|_| Error::BadDistribution(format!("bad delta {delta:?}")))?;
            let prob: Rational = prob
                .parse()
                .map_err(|_| Error::BadDistribution(format!("bad probability {prob:?}")))?;
            Ok(Demand { delta, prob })
        })
        .collect()
}

pub(crate) fn validate_steps(steps: &[Demand]) -> Result<()> {
    if steps.is_empty() {
        return Err(Error::BadDistribution("no outcomes".into()));
    }
    let mut total = num_rational::Ratio::<i128>::zero();
    for d in steps {
        if d.prob < Rational::integer(0) {
            return Err(Error::BadDistribution(format!("negative probability {}", d.prob)));
        }
        total += num_rational::Ratio::new(d.prob.numer() as i128, d.prob.denom() as i128);
    }
    if total != num_rational::Ratio::from_integer(1) {
        return Err(Error::BadDistribution(format!("probabilities sum to {total}, not 1")));
    }
    Ok(())
}

impl DemandProcess {
    pub fn validate(&self) -> Result<()> {
        validate_steps(&self.steps)?;
        if self.horizon == 0 {
            return Err(Error::BadDistribution("horizon must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::BadDistribution("trials must be positive".into()));
        }
        Ok(())
    }
}

/// Integer sampler over the lcm of the probability denominators.
struct Sampler {
    denom: u64,
    /// Cumulative upper bounds, scaled to `denom`.
    bounds: Vec<(u64, i64)>,
}

impl Sampler {
    fn new(steps: &[Demand]) -> Result<Self> {
        let denom = steps.iter().try_fold(1u64, |acc, d| {
            let den = d.prob.denom() as u64;
            let l = acc / acc.gcd(&den);
            l.checked_mul(den)
        });
        let denom = denom.ok_or_else(|| {
            Error::BadDistribution("probability denominators are too large".into())
        })?;
        let mut acc = 0u64;
        let mut bounds = Vec::new();
        for d in steps {
            acc += d.prob.numer() as u64 * (denom / d.prob.denom() as u64);
            bounds.push((acc, d.delta));
        }
        Ok(Sampler { denom, bounds })
    }

    fn draw(&self, rng: &mut SplitMix64) -> i64 {
        let r = rng.below(self.denom);
        self.bounds
            .iter()
            .find(|(bound, _)| r < *bound)
            .map(|(_, delta)| *delta)
            .expect("bounds reach denom")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    /// First step at which reserves were `<= 0`, per trial.
    pub depletion_steps: Vec<Option<u32>>,
    pub horizon: u32,
}

impl RunOutcome {
    pub fn trials(&self) -> u64 {
        self.depletion_steps.len() as u64
    }

    pub fn depleted(&self) -> u64 {
        self.depletion_steps.iter().filter(|s| s.is_some()).count() as u64
    }

    /// `depleted / trials`, exact.
    pub fn frequency(&self) -> Rational {
        Rational::new(self.depleted() as i64, self.trials() as i64).expect("trials > 0")
    }

    /// Mean steps survived, counting survivors as the full horizon.
    pub fn mean_survival(&self) -> Rational {
        let total: i64 = self
            .depletion_steps
            .iter()
            .map(|s| s.unwrap_or(self.horizon) as i64)
            .sum();
        Rational::new(total, self.trials() as i64).expect("trials > 0")
    }

    pub fn report(&self) -> OutcomeReport {
        OutcomeReport {
            depleted: self.depleted(),
            trials: self.trials(),
            frequency: format!("{}/{}", self.depleted(), self.trials()),
            mean_survival: self.mean_survival().to_string(),
            horizon: self.horizon,
        }
    }

    /// `trial,depletion_step` with an empty step for survivors.
    pub fn steps_csv(&self) -> String {
        let mut out = String::from("trial,depletion_step\n");
        for (i, s) in self.depletion_steps.iter().enumerate() {
            match s {
                Some(t) => out.push_str(&format!("{i},{t}\n")),
                None => out.push_str(&format!("{i},\n")),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutcomeReport {
    pub depleted: u64,
    pub trials: u64,
    pub frequency: String,
    pub mean_survival: String,
    pub horizon: u32,
}

/// Reserve level after scaling by the rate denominator, and the scaled
/// outflow per unit of demand.
fn scaled(peg: &PegConfig) -> (i128, i128) {
    (
        peg.initial_reserves as i128 * peg.rate.denom() as i128,
        peg.rate.numer() as i128,
    )
}

/// Run `trials` independent reserve walks of `horizon` steps. Demand is in
/// domestic units and drains `delta * rate` reserve units.
pub fn simulate(peg: &PegConfig, demand: &DemandProcess) -> Result<RunOutcome> {
    peg.validate()?;
    demand.validate()?;
    let sampler = Sampler::new(&demand.steps)?;
    let (start, per_unit) = scaled(peg);
    let depletion_steps = (0..demand.trials)
        .into_par_iter()
        .map(|trial| {
            if start <= 0 {
                return Some(0);
            }
            let mut rng = SplitMix64::new(demand.seed ^ trial);
            let mut level = start;
            for t in 1..=demand.horizon {
                level -= sampler.draw(&mut rng) as i128 * per_unit;
                if level <= 0 {
                    return Some(t);
                }
            }
            None
        })
        .collect();
    Ok(RunOutcome {
        depletion_steps,
        horizon: demand.horizon,
    })
}

/// The exact counterpart of [`simulate`] for a peg: initial reserves and
/// demand are rescaled by the rate, then handed to the path-enumeration
/// oracle (or the DP oracle when there are too many paths).
pub fn exact_depletion(peg: &PegConfig, steps: &[Demand], horizon: u32) -> Result<num_rational::BigRational> {
    peg.validate()?;
    let (start, per_unit) = scaled(peg);
    let start = i64::try_from(start).map_err(|_| Error::Overflow)?;
    let rescaled: Vec<Demand> = steps
        .iter()
        .map(|d| {
            Ok(Demand {
                delta: i64::try_from(d.delta as i128 * per_unit).map_err(|_| Error::Overflow)?,
                prob: d.prob,
            })
        })
        .collect::<Result<_>>()?;
    match absorption_oracle(start, &rescaled, horizon) {
        Err(Error::TooLarge(_)) => absorption_dp(start, &rescaled, horizon),
        other => other,
    }
}

fn reserve_edge(
    g: &BalanceGraph,
    cb: &AgentId,
    target: &CurrencyId,
) -> Result<Option<InstrumentId>> {
    let foreign_cb = g.central_bank(target).ok_or_else(|| {
        Error::MissingAgent(format!("no central bank issues reserve currency {target}"))
    })?;
    Ok(Some(InstrumentId::new(
        InstrumentKind::Deposit,
        &foreign_cb.id,
        cb,
        target,
    )))
}

pub fn plan_redeem(
    g: &BalanceGraph,
    holder: &AgentId,
    amount: Amount,
    peg: &PegConfig,
) -> Result<Vec<Delta>> {
    peg.validate()?;
    if amount == 0 {
        return Err(Error::ZeroAmount);
    }
    g.agent(holder)?;
    let cb = g
        .central_bank(&peg.currency)
        .ok_or_else(|| Error::MissingAgent(format!("no central bank issues {}", peg.currency)))?
        .id
        .clone();
    let converted = peg
        .rate
        .convert_exact(amount)
        .ok_or_else(|| Error::Indivisible(format!("{amount} x {} is not whole", peg.rate)))?;
    let converted = u64::try_from(converted).map_err(|_| Error::Overflow)?;

    let (reserves, payout) = match &peg.reserve_asset {
        Unit::Commodity(c) => {
            let have = g.agent(&cb)?.holding(c);
            let moves = vec![
                Delta::Commodity {
                    agent: cb.clone(),
                    commodity: c.clone(),
                    change: -(converted as i128),
                },
                Delta::Commodity {
                    agent: holder.clone(),
                    commodity: c.clone(),
                    change: converted as i128,
                },
            ];
            (have, moves)
        }
        Unit::Currency(f) => {
            let edge = reserve_edge(g, &cb, f)?.expect("edge");
            let have = g.amount(&edge);
            let to_holder = InstrumentId {
                creditor: holder.clone(),
                ..edge.clone()
            };
            let moves = vec![
                Delta::edge(edge, -(converted as i128)),
                Delta::edge(to_holder, converted),
            ];
            (have, moves)
        }
    };
    if reserves == 0 {
        return Err(Error::ReservesDepleted(format!(
            "{cb} has no {} left; the rate can no longer be defended",
            peg.reserve_asset
        )));
    }
    if reserves < converted {
        return Err(Error::ReservesDepleted(format!(
            "{cb} holds {reserves} {}, redemption needs {converted}",
            peg.reserve_asset
        )));
    }

    let claim = InstrumentId::convertible(
        &cb,
        holder,
        &peg.currency,
        Redemption {
            target: peg.reserve_asset.clone(),
            rate: peg.rate,
        },
    );
    let held = g.amount(&claim);
    if held < amount {
        return Err(Error::InsufficientClaim(format!(
            "{holder} holds {held} of {claim}, redeeming {amount}"
        )));
    }
    let mut d = vec![Delta::edge(claim, -(amount as i128))];
    d.extend(payout);
    Ok(d)
}

/// Convert `amount` of the holder's convertible claims on the issuing
/// central bank into the reserve asset at the peg rate.
pub fn redeem(g: &mut BalanceGraph, holder: &AgentId, amount: Amount, peg: &PegConfig) -> Result<()> {
    let d = plan_redeem(g, holder, amount, peg)?;
    g.post(&d)
}
