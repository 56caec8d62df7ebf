//! `key = value` config files: parsing never panics, accepted keys are
//! canonical, and merged flags resolve without panicking.
#![no_main]
use fraclap_cli::{parse_config, CommandKind, Flags, RunConfig, CONFIG_KEYS};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(map) = parse_config(text) else {
        return;
    };
    for k in map.keys() {
        assert!(CONFIG_KEYS.contains(&k.as_str()), "{k}");
    }
    let flags = Flags::default().merge(&map);
    for cmd in [
        CommandKind::Apply,
        CommandKind::Compare,
        CommandKind::Sfde,
        CommandKind::Theorems,
    ] {
        if let Ok(cfg) = RunConfig::resolve(cmd, &flags) {
            assert!(cfg.points.iter().all(|x| x.is_finite()));
            assert!(cfg.tol > 0.0);
        }
    }
});
