//! SNR/probability grid grammar: accepted grids must be nonempty, finite,
//! nondecreasing, and bounded in size; probability grids stay inside (0,1).

#![no_main]

use libfuzzer_sys::fuzz_target;

use jrc_cli::parse::{parse_probability_grid, parse_snr_grid, MAX_GRID_POINTS};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(grid) = parse_snr_grid(text) {
            assert!(!grid.is_empty() && grid.len() <= MAX_GRID_POINTS);
            assert!(grid.iter().all(|v| v.is_finite()));
            assert!(grid.windows(2).all(|w| w[0] <= w[1]), "grid {text:?} not sorted");
        }
        if let Ok(grid) = parse_probability_grid(text) {
            assert!(grid.iter().all(|&p| p > 0.0 && p < 1.0));
        }
    }
});
