//! Angle grammar: accepted values must be finite radians.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(radians) = jrc_cli::parse::parse_angle(text) {
            assert!(radians.is_finite(), "accepted angle {text:?} -> non-finite {radians}");
        }
    }
});
