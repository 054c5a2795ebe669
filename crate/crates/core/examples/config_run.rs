//! Load a JSON config and run one Fourier map from it, as the `mcs` binary does.
//!
//! `cargo run --example config_run -- configs/fourier_map.json`

use mcs_adi::config::load_config;
use mcs_adi::experiments::{run_fourier_map, write_fourier_csv};

fn main() -> mcs_adi::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/fourier_map.json").into());
    let mut cfg = load_config(&path)?;
    cfg.fourier.points = 5;
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    let map = run_fourier_map(&cfg, cfg.primary_inv_h())?;
    write_fourier_csv(&map, std::io::stdout().lock())
}
