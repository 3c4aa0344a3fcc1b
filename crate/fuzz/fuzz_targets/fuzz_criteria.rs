//! Criterion-selection grammar: accepted ids always lie in 1..=10.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(ids) = jrc_cli::parse::parse_criteria(text) {
            assert!(!ids.is_empty());
            assert!(ids.iter().all(|id| (1..=10).contains(id)));
        }
    }
});
