//! Shared fixtures for the criterion benches.

use ttp2::generate::random_euclidean;
use ttp2::Instance;

/// Deterministic random Euclidean instance used by every bench at size `n`.
pub fn fixture(n: usize) -> Instance {
    random_euclidean(n, 1000, 0xbe7c_0000 + n as u64)
}
