//! TOML run-config decoder: parsing arbitrary text must never panic, and
//! the lazy angle/grid fields must resolve without panicking either.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = jrc_cli::config::FileConfig::parse_str(text) {
            if let Some(angle) = &cfg.theta_c {
                if let Ok(v) = angle.radians() {
                    assert!(v.is_finite());
                }
            }
            if let Some(angle) = &cfg.theta_n {
                let _ = angle.radians();
            }
            if let Some(grid) = &cfg.snr_db {
                if let Ok(values) = grid.values() {
                    assert!(!values.is_empty());
                }
            }
            if let Some(grid) = &cfg.p_out_grid {
                let _ = grid.values();
            }
        }
    }
});
