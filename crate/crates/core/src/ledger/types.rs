use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::Rational;

/// Minor units of a currency or quantity units of a commodity.
pub type Amount = u64;

fn is_agent_ident(s: &str) -> bool {
    let mut bytes = s.bytes();
    matches!(bytes.next(), Some(b'a'..=b'z' | b'_'))
        && bytes.all(|b| matches!(b, b'a'..=b'z' | b'0'..=b'9' | b'_'))
}

fn is_unit_ident(s: &str) -> bool {
    let mut bytes = s.bytes();
    matches!(bytes.next(), Some(b'A'..=b'Z'))
        && bytes.all(|b| matches!(b, b'A'..=b'Z' | b'0'..=b'9' | b'_'))
}

macro_rules! ident_newtype {
    ($(#[$meta:meta])* $name:ident, $check:ident) => {
        $(#[$meta])*
        /// Shared so that cloning a graph does not copy names.
        #[derive(Debug, Clone, Eq)]
        pub struct $name(Arc<str>);

        impl std::hash::Hash for $name {
            fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
                self.0.hash(h)
            }
        }

        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
            }
        }

        impl Ord for $name {
            fn cmp(&self, other: &Self) -> std::cmp::Ordering {
                if Arc::ptr_eq(&self.0, &other.0) {
                    std::cmp::Ordering::Equal
                } else {
                    self.0.cmp(&other.0)
                }
            }
        }

        impl PartialOrd for $name {
            fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(other))
            }
        }

        impl $name {
            pub fn new(s: impl Into<String>) -> Result<Self, Error> {
                let s = s.into();
                if $check(&s) {
                    Ok($name(Arc::from(s)))
                } else {
                    Err(Error::InvalidId(s))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl std::borrow::Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self, Error> {
                $name::new(s)
            }
        }

        impl Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.0)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                $name::new(s).map_err(serde::de::Error::custom)
            }
        }
    };
}

ident_newtype!(
    /// Lowercase agent name, `[a-z_][a-z0-9_]*`.
    AgentId,
    is_agent_ident
);
ident_newtype!(
    /// Uppercase currency code such as `DOM` or `FOR`.
    CurrencyId,
    is_unit_ident
);
ident_newtype!(
    /// Uppercase commodity code such as `GOLD`.
    CommodityId,
    is_unit_ident
);

/// A unit of account: balance sheets and redemption targets are per unit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Currency(CurrencyId),
    Commodity(CommodityId),
}

impl Unit {
    pub fn name(&self) -> &str {
        match self {
            Unit::Currency(c) => c.as_str(),
            Unit::Commodity(c) => c.as_str(),
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    CentralBank,
    Treasury,
    Bank,
    Nonbank,
    Foreign,
}

impl AgentKind {
    pub const ALL: [AgentKind; 5] = [
        AgentKind::CentralBank,
        AgentKind::Treasury,
        AgentKind::Bank,
        AgentKind::Nonbank,
        AgentKind::Foreign,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AgentKind::CentralBank => "central_bank",
            AgentKind::Treasury => "treasury",
            AgentKind::Bank => "bank",
            AgentKind::Nonbank => "nonbank",
            AgentKind::Foreign => "foreign",
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AgentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        AgentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::BadParam(format!("unknown agent kind {s:?}")))
    }
}

/// Assets and liabilities of one agent in one currency, maintained
/// incrementally by `post` and re-derived by the invariant checker.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Position {
    #[serde(with = "crate::dec")]
    pub assets: u128,
    #[serde(with = "crate::dec")]
    pub liabilities: u128,
}

impl Position {
    pub fn is_empty(&self) -> bool {
        self.assets == 0 && self.liabilities == 0
    }

    pub fn net(&self) -> i128 {
        self.assets as i128 - self.liabilities as i128
    }
}

/// A node of the balance-sheet graph.
///
/// `currency` is the issued currency for a central bank and the fiscal
/// currency for a treasury; it is `None` for every other kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Agent {
    pub id: AgentId,
    pub kind: AgentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub currency: Option<CurrencyId>,
    #[serde(default, with = "crate::dec::map")]
    pub commodities: BTreeMap<CommodityId, Amount>,
    #[serde(default)]
    pub positions: BTreeMap<CurrencyId, Position>,
}

impl Agent {
    pub fn new(id: AgentId, kind: AgentKind, currency: Option<CurrencyId>) -> Self {
        Agent {
            id,
            kind,
            currency,
            commodities: BTreeMap::new(),
            positions: BTreeMap::new(),
        }
    }

    pub fn holding(&self, commodity: &CommodityId) -> Amount {
        self.commodities.get(commodity).copied().unwrap_or(0)
    }

    pub fn issues(&self) -> Option<&CurrencyId> {
        match self.kind {
            AgentKind::CentralBank => self.currency.as_ref(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstrumentKind {
    /// Currency in circulation, a central-bank liability.
    Note,
    /// Central-bank liability to a bank.
    Reserve,
    /// Liability of a bank (or the central bank) to a depositor.
    Deposit,
    /// Claim of a lender on a borrower.
    Loan,
    Bond,
    /// Liability redeemable into a reserve asset at a fixed rate.
    ConvertibleNote,
}

impl InstrumentKind {
    pub const ALL: [InstrumentKind; 6] = [
        InstrumentKind::Note,
        InstrumentKind::Reserve,
        InstrumentKind::Deposit,
        InstrumentKind::Loan,
        InstrumentKind::Bond,
        InstrumentKind::ConvertibleNote,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            InstrumentKind::Note => "note",
            InstrumentKind::Reserve => "reserve",
            InstrumentKind::Deposit => "deposit",
            InstrumentKind::Loan => "loan",
            InstrumentKind::Bond => "bond",
            InstrumentKind::ConvertibleNote => "convertible_note",
        }
    }
}

impl fmt::Display for InstrumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InstrumentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        InstrumentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::BadParam(format!("unknown instrument kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Redemption {
    pub target: Unit,
    /// Target units per unit of the note's currency.
    pub rate: Rational,
}

/// Identity of an edge. At most one instrument exists per id, so repeated
/// postings on the same (kind, debtor, creditor, currency, redemption)
/// accumulate on a single edge and graphs stay canonical.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InstrumentId {
    pub kind: InstrumentKind,
    pub debtor: AgentId,
    pub creditor: AgentId,
    pub currency: CurrencyId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redemption: Option<Redemption>,
}

impl InstrumentId {
    pub fn new(
        kind: InstrumentKind,
        debtor: &AgentId,
        creditor: &AgentId,
        currency: &CurrencyId,
    ) -> Self {
        InstrumentId {
            kind,
            debtor: debtor.clone(),
            creditor: creditor.clone(),
            currency: currency.clone(),
            redemption: None,
        }
    }

    pub fn convertible(
        debtor: &AgentId,
        creditor: &AgentId,
        currency: &CurrencyId,
        redemption: Redemption,
    ) -> Self {
        InstrumentId {
            redemption: Some(redemption),
            ..InstrumentId::new(InstrumentKind::ConvertibleNote, debtor, creditor, currency)
        }
    }
}

/// `deposit:b1>h1:DOM`, `convertible_note:cb>h1:DOM@GOLD*1/2`.
impl fmt::Display for InstrumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}>{}:{}",
            self.kind, self.debtor, self.creditor, self.currency
        )?;
        if let Some(r) = &self.redemption {
            write!(f, "@{}*{}", r.target, r.rate)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instrument {
    pub id: InstrumentId,
    pub amount: Amount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    PureCommodity,
    Convertible { full_backing: bool },
    Fiat,
}

impl Regime {
    pub fn allows_credit(&self) -> bool {
        matches!(
            self,
            Regime::Fiat
                | Regime::Convertible {
                    full_backing: false
                }
        )
    }

    /// Why an instrument of `kind` cannot exist in this regime, if it cannot.
    pub fn forbids(&self, kind: InstrumentKind) -> Option<&'static str> {
        match (self, kind) {
            (Regime::PureCommodity, _) => {
                Some("commodity money regime admits no financial claims")
            }
            (Regime::Fiat, InstrumentKind::ConvertibleNote) => {
                Some("fiat regime has no convertibility")
            }
            (
                Regime::Convertible { full_backing: true },
                InstrumentKind::Loan,
            ) => Some("fully backed convertible regime admits no credit"),
            _ => None,
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::PureCommodity => f.write_str("commodity"),
            Regime::Convertible { full_backing: true } => f.write_str("convertible full_backing"),
            Regime::Convertible { full_backing: false } => f.write_str("convertible"),
            Regime::Fiat => f.write_str("fiat"),
        }
    }
}

/// Accepts the [`Display`](fmt::Display) forms plus `pure_commodity`.
impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            ["commodity" | "pure_commodity"] => Ok(Regime::PureCommodity),
            ["fiat"] => Ok(Regime::Fiat),
            ["convertible"] => Ok(Regime::Convertible { full_backing: false }),
            ["convertible", "full_backing"] => Ok(Regime::Convertible { full_backing: true }),
            _ => Err(Error::BadParam(format!("unknown regime {s:?}"))),
        }
    }
}

/// Graph-level switches. Everything defaults to "no overdraft".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    /// Cover a bank's reserve shortfall in an interbank payment with a
    /// central-bank loan instead of failing.
    #[serde(default)]
    pub cb_intraday_credit: bool,
    /// Let the treasury spend beyond its central-bank deposit by borrowing
    /// from the central bank.
    #[serde(default)]
    pub treasury_overdraft: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identifier_rules() {
        assert!(AgentId::new("h1").is_ok());
        assert!(AgentId::new("_tmp").is_ok());
        assert!(AgentId::new("1h").is_err());
        assert!(AgentId::new("H1").is_err());
        assert!(AgentId::new("").is_err());
        assert!(CurrencyId::new("DOM").is_ok());
        assert!(CurrencyId::new("dom").is_err());
        assert!(CommodityId::new("GOLD_2").is_ok());
    }

    #[test]
    fn instrument_id_display() {
        let b1 = AgentId::new("b1").unwrap();
        let h1 = AgentId::new("h1").unwrap();
        let dom = CurrencyId::new("DOM").unwrap();
        let id = InstrumentId::new(InstrumentKind::Deposit, &b1, &h1, &dom);
        assert_eq!(id.to_string(), "deposit:b1>h1:DOM");
        let note = InstrumentId::convertible(
            &b1,
            &h1,
            &dom,
            Redemption {
                target: Unit::Commodity(CommodityId::new("GOLD").unwrap()),
                rate: "1/2".parse().unwrap(),
            },
        );
        assert_eq!(note.to_string(), "convertible_note:b1>h1:DOM@GOLD*1/2");
    }

    #[test]
    fn regime_credit() {
        assert!(Regime::Fiat.allows_credit());
        assert!(!Regime::PureCommodity.allows_credit());
        assert!(!Regime::Convertible { full_backing: true }.allows_credit());
        assert!(Regime::Convertible { full_backing: false }.allows_credit());
        for kind in InstrumentKind::ALL {
            assert!(Regime::PureCommodity.forbids(kind).is_some());
        }
    }
}
