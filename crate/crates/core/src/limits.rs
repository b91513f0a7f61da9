use crate::arith::Nat;
use crate::error::{Error, Result};

/// Environment variable overriding [`Limits::enum_cap`].
pub const CAP_ENV: &str = "CUSPCOUNT_CAP";

pub const DEFAULT_ENUM_CAP: Nat = 10_000_000;
pub const DEFAULT_FULL_CHECK_CAP: Nat = 4_096;

/// Size bounds for brute-force enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest ambient modulus any enumeration may walk.
    pub enum_cap: Nat,
    /// Largest ambient modulus for which whole-group cross-checks also run.
    pub full_check_cap: Nat,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enum_cap: DEFAULT_ENUM_CAP,
            full_check_cap: DEFAULT_FULL_CHECK_CAP,
        }
    }
}

impl Limits {
    pub fn with_cap(enum_cap: Nat) -> Self {
        Limits {
            enum_cap,
            full_check_cap: DEFAULT_FULL_CHECK_CAP.min(enum_cap),
        }
    }

    /// Defaults, with `enum_cap` taken from `CUSPCOUNT_CAP` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(CAP_ENV) {
            Ok(v) => v
                .trim()
                .parse::<Nat>()
                .map(Limits::with_cap)
                .map_err(|_| Error::InvalidArgument(format!("{CAP_ENV}={v} is not an integer"))),
            Err(_) => Ok(Limits::default()),
        }
    }

    pub fn check(&self, modulus: Nat) -> Result<()> {
        if modulus > self.enum_cap {
            Err(Error::CapExceeded {
                modulus,
                cap: self.enum_cap,
            })
        } else {
            Ok(())
        }
    }

    pub fn allows(&self, modulus: Nat) -> bool {
        modulus <= self.enum_cap
    }

    pub fn allows_full_check(&self, modulus: Nat) -> bool {
        modulus <= self.full_check_cap.min(self.enum_cap)
    }
}
