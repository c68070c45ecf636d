//! Shared fixtures for the protocol benchmarks.

use cavity_gbs::protocol::ProtocolConfig;

/// The parameter point every benchmark starts from.
pub fn bench_config() -> ProtocolConfig {
    ProtocolConfig::default()
}

/// A dense η grid sized like a publication-quality sweep.
pub fn bench_eta_grid() -> Vec<f64> {
    (0..=200).map(|k| 0.05 * k as f64).collect()
}
