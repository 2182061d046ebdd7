//! Monetary systems as balance-sheet graphs.
//!
//! Agents (central bank, treasury, banks, households, foreigners) are nodes;
//! financial instruments are edges from debtor to creditor. Monetary
//! operations are graph rewrites compiled to a single atomic posting, so
//! conservation laws hold for every reachable state and can be re-verified
//! from scratch with [`ledger::check_invariants`].
//!
//! ```
//! use moneygraph::ledger::{AgentId, AgentKind, BalanceGraph, CurrencyId, Regime};
//! use moneygraph::{measures, ops};
//!
//! let dom = CurrencyId::new("DOM").unwrap();
//! let mut g = BalanceGraph::new(Regime::Fiat);
//! let id = |s: &str| AgentId::new(s).unwrap();
//! g.add_agent(id("cb"), AgentKind::CentralBank, Some(dom.clone())).unwrap();
//! g.add_agent(id("b1"), AgentKind::Bank, None).unwrap();
//! g.add_agent(id("h1"), AgentKind::Nonbank, None).unwrap();
//!
//! ops::create_loan(&mut g, &id("b1"), &id("h1"), 100, &dom).unwrap();
//! assert_eq!(measures::broad_money(&g, &dom).unwrap(), 100);
//! assert_eq!(measures::net_money(&g, &dom).unwrap(), 0);
//! ```

pub mod dec;
pub mod dispatch;
pub mod error;
pub mod ledger;
pub mod measures;
pub mod ops;
pub mod pegsim;
pub mod rational;
pub mod scenario;

pub use error::{Error, Result};
pub use rational::Rational;
