//! Fixtures for the kernel benchmarks.

use std::path::PathBuf;

use ppdiv_core::doc::Document;
use ppdiv_core::galois::SemilinearAction;
use ppdiv_core::ppdiv::{base_change, PolyhedralDivisor};

fn load(name: &str) -> Document {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../golden")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    Document::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn ppdivisor(name: &str) -> PolyhedralDivisor {
    load(name).into_ppdivisor().unwrap().divisor
}

/// The divisor `name` over `Q(sqrt d)` with the action read from `action`.
pub fn action_pair(name: &str, d: i64, action: &str) -> (PolyhedralDivisor, SemilinearAction) {
    let divisor = base_change(&ppdivisor(name), d).unwrap();
    (divisor, load(action).into_action().unwrap().action)
}
