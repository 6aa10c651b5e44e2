//! Process-wide enumeration and degree caps.

use std::sync::atomic::{AtomicUsize, Ordering};

pub const DEFAULT_MAX_N: usize = 8;

static MAX_N: AtomicUsize = AtomicUsize::new(0);
static MAX_DEGREE: AtomicUsize = AtomicUsize::new(0);

/// Largest ground set allowed for NC(n) enumeration.
///
/// Resolution order: `set_max_n`, then `NCPROB_MAX_N`, then the default.
pub fn max_n() -> usize {
    match MAX_N.load(Ordering::Relaxed) {
        0 => std::env::var("NCPROB_MAX_N")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .filter(|&n| n > 0)
            .unwrap_or(DEFAULT_MAX_N),
        n => n,
    }
}

pub fn set_max_n(n: usize) {
    MAX_N.store(n, Ordering::Relaxed);
}

/// Degree cap for dense multilinear tables over a base of dimension `b_dim`.
pub fn max_degree(b_dim: usize) -> usize {
    match MAX_DEGREE.load(Ordering::Relaxed) {
        0 if b_dim <= 1 => 5,
        0 => 4,
        d => d,
    }
}

pub fn set_max_degree(d: usize) {
    MAX_DEGREE.store(d, Ordering::Relaxed);
}
