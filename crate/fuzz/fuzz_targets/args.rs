//! Command lines split on whitespace: flag parsing and validation never
//! panic, and every accepted route applies to the resolved order.
#![no_main]
use clap::Parser;
use fraclap_cli::{Cli, RunConfig};
use fraclap_core::mellin::FracOrder;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let args = std::iter::once("fraclap").chain(text.split_whitespace());
    let Ok(cli) = Cli::try_parse_from(args) else {
        return;
    };
    let Ok(cfg) = RunConfig::resolve(cli.command, &cli.flags) else {
        return;
    };
    if let Ok(ord) = FracOrder::new(cfg.alpha, cfg.dim) {
        assert!(cfg.routes.iter().all(|r| r.applicable(ord)));
    }
});
