use thiserror::Error;

/// Every failure the engine can report. Each variant has a stable code
/// (`ErrRegimeViolation`, ...) that scenarios and the HTTP API match on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("central bank for {0} already exists")]
    DuplicateCentralBank(String),
    #[error("treasury for {0} already exists")]
    DuplicateTreasury(String),
    #[error("agent {0} already exists")]
    DuplicateAgent(String),
    #[error("{0} is already declared as a currency or commodity")]
    DuplicateUnit(String),
    #[error("{0} requires an issued currency")]
    IssuerRequired(String),
    #[error("invalid identifier {0:?}")]
    InvalidId(String),
    #[error("unknown agent {0}")]
    UnknownAgent(String),
    #[error("unknown instrument {0}")]
    UnknownInstrument(String),
    #[error("unknown currency {0}")]
    UnknownCurrency(String),
    #[error("unknown commodity {0}")]
    UnknownCommodity(String),
    #[error("missing agent: {0}")]
    MissingAgent(String),
    #[error("currency mismatch: {0}")]
    CurrencyMismatch(String),
    #[error("cannot pick a currency, pass one explicitly (known: {0})")]
    AmbiguousCurrency(String),
    #[error("{0} has no deposit account")]
    NoBankAccount(String),
    #[error("amount must be positive")]
    ZeroAmount,
    #[error("amount of {0} would become negative")]
    NegativeAmount(String),
    #[error("amount overflow")]
    Overflow,
    #[error("claim of {0} on itself")]
    SelfClaim(String),
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("regime violation: {0}")]
    RegimeViolation(String),
    #[error("insufficient backing: {0}")]
    InsufficientBacking(String),
    #[error("insufficient commodity: {0}")]
    InsufficientCommodity(String),
    #[error("insufficient deposit: {0}")]
    InsufficientDeposit(String),
    #[error("insufficient reserves: {0}")]
    InsufficientReserves(String),
    #[error("insufficient notes: {0}")]
    InsufficientNotes(String),
    #[error("insufficient bond holding: {0}")]
    InsufficientBond(String),
    #[error("insufficient treasury balance: {0}")]
    InsufficientTreasuryBalance(String),
    #[error("repayment exceeds loan: {0}")]
    ExceedsLoan(String),
    #[error("insufficient convertible claims: {0}")]
    InsufficientClaim(String),
    #[error("reserves depleted: {0}")]
    ReservesDepleted(String),
    #[error("conversion is not exact: {0}")]
    Indivisible(String),
    #[error("bad distribution: {0}")]
    BadDistribution(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("unknown operation {0}")]
    UnknownOp(String),
    #[error("malformed snapshot: {0}")]
    Snapshot(String),
}

impl Error {
    /// Stable error code, e.g. `ErrRegimeViolation`.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DuplicateCentralBank(_) => "ErrDuplicateCentralBank",
            Error::DuplicateTreasury(_) => "ErrDuplicateTreasury",
            Error::DuplicateAgent(_) => "ErrDuplicateAgent",
            Error::DuplicateUnit(_) => "ErrDuplicateUnit",
            Error::IssuerRequired(_) => "ErrIssuerRequired",
            Error::InvalidId(_) => "ErrInvalidId",
            Error::UnknownAgent(_) => "ErrUnknownAgent",
            Error::UnknownInstrument(_) => "ErrUnknownInstrument",
            Error::UnknownCurrency(_) => "ErrUnknownCurrency",
            Error::UnknownCommodity(_) => "ErrUnknownCommodity",
            Error::MissingAgent(_) => "ErrMissingAgent",
            Error::CurrencyMismatch(_) => "ErrCurrencyMismatch",
            Error::AmbiguousCurrency(_) => "ErrAmbiguousCurrency",
            Error::NoBankAccount(_) => "ErrNoBankAccount",
            Error::ZeroAmount => "ErrZeroAmount",
            Error::NegativeAmount(_) => "ErrNegativeAmount",
            Error::Overflow => "ErrOverflow",
            Error::SelfClaim(_) => "ErrSelfClaim",
            Error::KindMismatch(_) => "ErrKindMismatch",
            Error::RegimeViolation(_) => "ErrRegimeViolation",
            Error::InsufficientBacking(_) => "ErrInsufficientBacking",
            Error::InsufficientCommodity(_) => "ErrInsufficientCommodity",
            Error::InsufficientDeposit(_) => "ErrInsufficientDeposit",
            Error::InsufficientReserves(_) => "ErrInsufficientReserves",
            Error::InsufficientNotes(_) => "ErrInsufficientNotes",
            Error::InsufficientBond(_) => "ErrInsufficientBond",
            Error::InsufficientTreasuryBalance(_) => "ErrInsufficientTreasuryBalance",
            Error::ExceedsLoan(_) => "ErrExceedsLoan",
            Error::InsufficientClaim(_) => "ErrInsufficientClaim",
            Error::ReservesDepleted(_) => "ErrReservesDepleted",
            Error::Indivisible(_) => "ErrIndivisible",
            Error::BadDistribution(_) => "ErrBadDistribution",
            Error::TooLarge(_) => "ErrTooLarge",
            Error::BadParam(_) => "ErrBadParam",
            Error::UnknownOp(_) => "ErrUnknownOp",
            Error::Snapshot(_) => "ErrSnapshot",
        }
    }

    /// All codes, used by the scenario parser to validate `error=` values.
    pub const CODES: &'static [&'static str] = &[
        "ErrDuplicateCentralBank",
        "ErrDuplicateTreasury",
        "ErrDuplicateAgent",
        "ErrDuplicateUnit",
        "ErrIssuerRequired",
        "ErrInvalidId",
        "ErrUnknownAgent",
        "ErrUnknownInstrument",
        "ErrUnknownCurrency",
        "ErrUnknownCommodity",
        "ErrMissingAgent",
        "ErrCurrencyMismatch",
        "ErrAmbiguousCurrency",
        "ErrNoBankAccount",
        "ErrZeroAmount",
        "ErrNegativeAmount",
        "ErrOverflow",
        "ErrSelfClaim",
        "ErrKindMismatch",
        "ErrRegimeViolation",
        "ErrInsufficientBacking",
        "ErrInsufficientCommodity",
        "ErrInsufficientDeposit",
        "ErrInsufficientReserves",
        "ErrInsufficientNotes",
        "ErrInsufficientBond",
        "ErrInsufficientTreasuryBalance",
        "ErrExceedsLoan",
        "ErrInsufficientClaim",
        "ErrReservesDepleted",
        "ErrIndivisible",
        "ErrBadDistribution",
        "ErrTooLarge",
        "ErrBadParam",
        "ErrUnknownOp",
        "ErrSnapshot",
    ];
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
