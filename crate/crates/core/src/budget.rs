//! Enumeration budgets.
//!
//! Every exhaustive enumeration in the crate checks its size against a limit
//! before it starts. The default limit is `2^24`; setting the environment
//! variable `ZERONE_BUDGET` to a positive integer replaces it globally.

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 1 << 24;

pub const BUDGET_ENV: &str = "ZERONE_BUDGET";

/// Current enumeration limit.
pub fn limit() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_BUDGET)
}

/// `base^exp` as a budget quantity, saturating instead of overflowing.
pub fn power(base: u64, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Fails with a budget error when `needed` exceeds the current limit.
pub fn check(what: &str, needed: u128) -> Result<()> {
    let limit = limit();
    if needed > limit as u128 {
        return Err(Error::budget(what, needed, limit));
    }
    Ok(())
}
