//! Exact depletion probabilities for the reserve walk
//! `R(t+1) = R(t) - delta(t)`, absorbed once `R <= 0`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Demand;
use crate::error::{Error, Result};

/// Path-enumeration guard.
pub const MAX_PATHS: u128 = 10_000_000;

/// Exact probability that the walk started at `initial` reaches `<= 0`
/// within `horizon` steps, by enumerating every path with exact rational
/// weights.
pub fn absorption_oracle(initial: i64, demand: &[Demand], horizon: u32) -> Result<BigRational> {
    super::validate_steps(demand)?;
    let paths = (demand.len() as u128).checked_pow(horizon);
    if paths.is_none_or(|p| p > MAX_PATHS) {
        return Err(Error::TooLarge(format!(
            "{}^{horizon} paths exceeds {MAX_PATHS}",
            demand.len()
        )));
    }
    let probs: Vec<(i64, BigRational)> = demand.iter().map(|d| (d.delta, d.prob.to_big())).collect();
    let mut absorbed = BigRational::zero();
    enumerate(initial, horizon, &BigRational::one(), &probs, &mut absorbed);
    Ok(absorbed)
}

fn enumerate(
    level: i64,
    remaining: u32,
    weight: &BigRational,
    probs: &[(i64, BigRational)],
    absorbed: &mut BigRational,
) {
    if level <= 0 {
        // every continuation of this prefix is already depleted
        *absorbed += weight;
        return;
    }
    if remaining == 0 {
        return;
    }
    for (delta, p) in probs {
        if p.is_zero() {
            continue;
        }
        enumerate(level - delta, remaining - 1, &(weight * p), probs, absorbed);
    }
}

/// Same probability by dynamic programming over reserve levels.
///
/// Weights are scaled to integers over the common denominator `D` of the
/// step probabilities, so mass at step `t` is an integer count over `D^t`.
/// Levels too high to be absorbed in the remaining steps are dropped.
pub fn absorption_dp(initial: i64, demand: &[Demand], horizon: u32) -> Result<BigRational> {
    super::validate_steps(demand)?;
    if initial <= 0 {
        return Ok(BigRational::one());
    }
    let denom = demand
        .iter()
        .fold(BigUint::one(), |acc, d| acc.lcm(&BigUint::from(d.prob.denom() as u64)));
    let weights: Vec<(i64, BigUint)> = demand
        .iter()
        .filter(|d| !d.prob.is_zero())
        .map(|d| {
            let w = BigUint::from(d.prob.numer() as u64) * &denom / BigUint::from(d.prob.denom() as u64);
            (d.delta, w)
        })
        .collect();
    let max_drop = demand.iter().map(|d| d.delta).max().unwrap_or(0).max(0) as i128;

    let mut live: BTreeMap<i64, BigUint> = BTreeMap::new();
    live.insert(initial, BigUint::one());
    // absorbed mass over denom^t
    let mut absorbed = BigUint::zero();
    for t in 0..horizon {
        let remaining_after = (horizon - t - 1) as i128;
        let mut next: BTreeMap<i64, BigUint> = BTreeMap::new();
        let mut hit = BigUint::zero();
        for (&level, count) in &live {
            for (delta, w) in &weights {
                let to = level - delta;
                let mass = count * w;
                if to <= 0 {
                    hit += mass;
                } else if (to as i128) <= max_drop * remaining_after {
                    *next.entry(to).or_insert_with(BigUint::zero) += mass;
                }
            }
        }
        absorbed = absorbed * &denom + hit;
        live = next;
        if live.is_empty() {
            // nothing left can be absorbed; scale to the full horizon
            absorbed *= denom.pow(horizon - t - 1);
            break;
        }
    }
    Ok(BigRational::new(
        BigInt::from(absorbed),
        BigInt::from(denom.pow(horizon)),
    ))
}
