//! Point lists: parsing never panics, and printing accepted points at 17
//! significant digits parses back to the same bits.
#![no_main]
use fraclap_cli::{format_g17, parse_points};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(points) = parse_points(text) else {
        return;
    };
    let printed: Vec<String> = points.iter().map(|&x| format_g17(x)).collect();
    let back = parse_points(&printed.join(",")).expect("printed points parse");
    assert_eq!(back.len(), points.len());
    for (a, b) in points.iter().zip(&back) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
});
