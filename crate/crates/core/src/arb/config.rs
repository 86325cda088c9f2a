use std::sync::OnceLock;

/// Environment variable overriding the maximum working precision.
pub const MAX_PREC_ENV: &str = "DIOPH_MAX_PREC";

pub const DEFAULT_MAX_PREC: u32 = 8192;

static MAX_PREC: OnceLock<u32> = OnceLock::new();

/// Largest precision (in bits) any adaptive routine may escalate to.
///
/// Read once from `DIOPH_MAX_PREC` (falling back to 8192) unless
/// [`set_max_precision`] ran first.
pub fn max_precision() -> u32 {
    *MAX_PREC.get_or_init(|| {
        std::env::var(MAX_PREC_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .filter(|&p| p >= 64)
            .unwrap_or(DEFAULT_MAX_PREC)
    })
}

/// Fixes the maximum precision. Only the first call (or the first read)
/// wins; returns the value in effect.
pub fn set_max_precision(bits: u32) -> u32 {
    let _ = MAX_PREC.set(bits.max(64));
    max_precision()
}
