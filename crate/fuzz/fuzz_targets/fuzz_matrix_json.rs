//! Phase-matrix JSON decoder: the deserialize + validate path the CLI uses
//! for `pdf --phase-matrix` must never panic, and a matrix that passes
//! validation must be safe to hand to downstream consumers (the phase-pdf
//! Fourier expansion evaluates to a finite density).

#![no_main]

use libfuzzer_sys::fuzz_target;

use jrc_core::distributions::PhasePdf;
use jrc_core::waveform::PhaseCodingMatrix;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(matrix) = serde_json::from_str::<PhaseCodingMatrix>(text) {
            if matrix.validate().is_ok() {
                let pdf = PhasePdf::new(&matrix, 4);
                assert!(pdf.eval(0.3).is_finite());
            }
        }
    }
});
