//! Shared inputs for the benchmarks under `benches/`.

use rgg_core::{sample_rgg, Graph, ModelParams, RngSpec};

/// A fixed geometric graph at density `p`.
pub fn fixture_graph(n: usize, d: usize, p: f64) -> Graph {
    let m = ModelParams::linfty(n, d, p).expect("valid fixture parameters");
    sample_rgg(&m, &mut RngSpec::new(0xbe).rng()).expect("fixture sample").0
}
