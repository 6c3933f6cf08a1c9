use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring Z/{p}^{e}: {reason}")]
    InvalidRing { p: u64, e: u32, reason: String },

    #[error("{0} is not a unit")]
    NotAUnit(u64),

    #[error("exponent {exponent} outside [1, {max}]")]
    ExponentOutOfRange { exponent: u32, max: u32 },

    #[error("module order p^{0} does not fit in 64 bits")]
    OrderTooLarge(u32),

    #[error("element {coords:?} does not belong to a module with exponents {exponents:?}")]
    BadElement { coords: Vec<u64>, exponents: Vec<u32> },

    #[error("operands live over different rings or parents")]
    ParentMismatch,

    #[error("chain length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("chain is not increasing at level {index}")]
    NotIncreasing { index: usize },

    #[error("element is not in the numerator of the quotient")]
    NotInNumerator,

    #[error("factor {index} is not uniserial (exponents {exponents:?})")]
    NonUniserialFactor { index: usize, exponents: Vec<u32> },

    #[error("object {index} is not in U_n (factor {level} is zero)")]
    NotInUn { index: usize, level: usize },

    #[error("object {index} is the zero object")]
    ZeroObjectInInput { index: usize },

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },

    #[error("ideal is not proper")]
    NotProper,

    #[error("ideal I(level {level}, {kind}) is not maximal")]
    NotMaximal { level: usize, kind: char },

    #[error("morphism is not an isomorphism of chains")]
    NotAnIsomorphism,

    #[error("quotient E/J is not commutative: {detail}")]
    NonCommutativeQuotient { detail: String },

    #[error("quotient E/J is not a product of fields: {detail}")]
    NotProductOfFields { detail: String },

    #[error("Hall condition fails at level {level} ({kind}): |T| = {size}, |N+(T)| = {neighbours}")]
    HallViolation { level: usize, kind: char, size: usize, neighbours: usize },

    #[error("no two-way permutation at level {level} ({kind})")]
    NoPermutation { level: usize, kind: char },
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }

    /// True for outcomes that contradict a proven statement rather than bad input.
    pub fn is_violation(&self) -> bool {
        matches!(
            self,
            Error::NonCommutativeQuotient { .. }
                | Error::NotProductOfFields { .. }
                | Error::HallViolation { .. }
                | Error::NoPermutation { .. }
        )
    }
}
