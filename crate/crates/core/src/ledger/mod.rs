//! Balance-sheet graph: agents are nodes, every financial claim is a single
//! debtor→creditor edge, so each claim is one agent's asset and another's
//! liability by construction.

mod check;
mod graph;
mod sheet;
mod snapshot;
mod types;

pub use check::{check_invariants, Rule, Violation};
pub use graph::{BalanceGraph, Delta};
pub use sheet::{BalanceSheet, SheetLine};
pub use types::*;
