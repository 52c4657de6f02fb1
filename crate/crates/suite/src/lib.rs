//! Reference data for the acceptance checks in `tests/acceptance.rs`.

use std::path::PathBuf;

pub mod golden;

/// The hematocrit dataset shipped with the repository.
pub fn hematocrit() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/hematocrit.json")
}
