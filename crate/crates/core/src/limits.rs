//! Process-wide resource limits.
//!
//! The dimension cap bounds every dense matrix and every constructed module.
//! It is read on each construction and is expected to be set once at startup.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_DIM_CAP: usize = 4000;

static DIM_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_DIM_CAP);

pub fn dim_cap() -> usize {
    DIM_CAP.load(Ordering::Relaxed)
}

pub fn set_dim_cap(cap: usize) {
    DIM_CAP.store(cap, Ordering::Relaxed);
}

/// Fails with a resource error when `dim` exceeds the cap.
pub fn check_dim(what: &str, dim: usize) -> Result<()> {
    let cap = dim_cap();
    if dim > cap {
        return Err(Error::Resource { what: what.to_string(), dim, cap });
    }
    Ok(())
}
