//! AWGN method-list grammar: accepted lists are nonempty and every parsed
//! method round-trips through its CSV column label.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(methods) = jrc_cli::parse::parse_methods(text) {
            assert!(!methods.is_empty());
            for method in methods {
                let relabeled = jrc_cli::parse::parse_methods(&method.label())
                    .unwrap_or_else(|e| panic!("label {:?} must re-parse: {e}", method.label()));
                assert_eq!(relabeled, vec![method]);
            }
        }
    }
});
