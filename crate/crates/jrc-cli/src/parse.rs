//! Small text grammars the CLI accepts on the command line and in config
//! files: angles, SNR grids, AWGN method lists, and criterion selections.
//!
//! Every parser is a total function from `&str` to `Result<_, String>` with
//! no side effects, so the same entry points back the fuzz targets. Errors
//! are plain strings; the command layer wraps them with flag context.

use jrc_core::capacity::AwgnMethod;

/// Largest number of grid points a `lo:hi:step` range may expand to. Guards
/// against `--snr-db 0:1e18:1e-9`-style inputs allocating unbounded memory.
pub const MAX_GRID_POINTS: usize = 100_000;

// ---------------------------------------------------------------------------
// Angles
// ---------------------------------------------------------------------------

/// Parse an angle to radians. Bare numbers are radians; a `deg` or `rad`
/// suffix (case-insensitive, optional whitespace before it) makes the unit
/// explicit: `-22deg`, `-22 deg`, `0.38`, `0.38rad`.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty angle; expected e.g. `-22deg` or `0.38` (radians)".into());
    }
    let lower = t.to_ascii_lowercase();
    let (body, to_radians): (&str, fn(f64) -> f64) = if let Some(b) = lower.strip_suffix("deg") {
        (b, f64::to_radians)
    } else if let Some(b) = lower.strip_suffix("rad") {
        (b, std::convert::identity)
    } else {
        (lower.as_str(), std::convert::identity)
    };
    let body = body.trim_end();
    let value: f64 = body
        .parse()
        .map_err(|_| format!("cannot parse `{t}` as an angle; expected e.g. `-22deg` or `0.38` (radians)"))?;
    if !value.is_finite() {
        return Err(format!("angle `{t}` must be finite"));
    }
    Ok(to_radians(value))
}

// ---------------------------------------------------------------------------
// SNR grids
// ---------------------------------------------------------------------------

/// Parse an SNR grid in dB: either a single number (`10`) or an inclusive
/// range `lo:hi:step` (`-10:30:1` gives the 41 integers −10..=30).
pub fn parse_snr_grid(s: &str) -> Result<Vec<f64>, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty SNR grid; expected `10` or `lo:hi:step`".into());
    }
    let parts: Vec<&str> = t.split(':').collect();
    let parse_num = |p: &str, role: &str| -> Result<f64, String> {
        let v: f64 = p
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse `{p}` as the {role} of SNR grid `{t}`"))?;
        if !v.is_finite() {
            return Err(format!("{role} of SNR grid `{t}` must be finite"));
        }
        Ok(v)
    };
    match parts.as_slice() {
        [single] => Ok(vec![parse_num(single, "value")?]),
        [lo, hi, step] => {
            let lo = parse_num(lo, "lower end")?;
            let hi = parse_num(hi, "upper end")?;
            let step = parse_num(step, "step")?;
            if !(step > 0.0) {
                return Err(format!("SNR grid `{t}` needs a positive step, got {step}"));
            }
            if hi < lo {
                return Err(format!("SNR grid `{t}` runs downward; use lo ≤ hi"));
            }
            // The 1e-9 slack keeps 0.1-style steps from dropping the endpoint
            // to representation error. Bound-check in f64: the count can
            // overflow usize long before the cast.
            let count_f = ((hi - lo) / step + 1e-9).floor() + 1.0;
            if !(count_f <= MAX_GRID_POINTS as f64) {
                return Err(format!(
                    "SNR grid `{t}` expands to {count_f:.0} points; the limit is {MAX_GRID_POINTS}"
                ));
            }
            let count = count_f as usize;
            Ok((0..count).map(|i| lo + i as f64 * step).collect())
        }
        _ => Err(format!("cannot parse SNR grid `{t}`; expected `10` or `lo:hi:step`")),
    }
}

/// Parse a probability grid `lo:hi:step` or single value, then require every
/// point to lie in the open interval (0, 1).
pub fn parse_probability_grid(s: &str) -> Result<Vec<f64>, String> {
    let grid = parse_snr_grid(s)?;
    for &p in &grid {
        if !(p > 0.0 && p < 1.0) {
            return Err(format!("probability grid `{}` leaves (0,1): point {p}", s.trim()));
        }
    }
    Ok(grid)
}

// ---------------------------------------------------------------------------
// AWGN method lists
// ---------------------------------------------------------------------------

/// Parse a comma-separated AWGN method list, or `all` for the six series of
/// the Fig. 9 comparison. Names match the CSV column labels the sweep
/// writes: `stable`, `single_side`, `delta_<w>db`, `no_constraint`,
/// `rayleigh_csi`.
pub fn parse_methods(s: &str) -> Result<Vec<AwgnMethod>, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("all") {
        return Ok(vec![
            AwgnMethod::Stable,
            AwgnMethod::SingleSide,
            AwgnMethod::DoubleDelta { delta_db: 1.0 },
            AwgnMethod::DoubleDelta { delta_db: 3.0 },
            AwgnMethod::DoubleDelta { delta_db: 6.0 },
            AwgnMethod::NoConstraint,
        ]);
    }
    let mut methods = Vec::new();
    for raw in t.split(',') {
        let name = raw.trim().to_ascii_lowercase();
        if name.is_empty() {
            return Err(format!("empty method name in `{t}`"));
        }
        let method = match name.as_str() {
            "stable" => AwgnMethod::Stable,
            "single_side" => AwgnMethod::SingleSide,
            "no_constraint" => AwgnMethod::NoConstraint,
            "rayleigh_csi" => AwgnMethod::RayleighCsi,
            other => {
                let width = other
                    .strip_prefix("delta_")
                    .and_then(|rest| rest.strip_suffix("db"))
                    .ok_or_else(|| {
                        format!(
                            "unknown method `{other}`; expected stable, single_side, \
                             delta_<width>db, no_constraint, rayleigh_csi, or all"
                        )
                    })?;
                let delta_db: f64 = width
                    .parse()
                    .map_err(|_| format!("cannot parse window width in method `{other}`"))?;
                if !delta_db.is_finite() || delta_db <= 0.0 {
                    return Err(format!("method `{other}` needs a positive finite width"));
                }
                AwgnMethod::DoubleDelta { delta_db }
            }
        };
        methods.push(method);
    }
    if methods.is_empty() {
        return Err("no methods given".into());
    }
    Ok(methods)
}

// ---------------------------------------------------------------------------
// Criterion selections
// ---------------------------------------------------------------------------

/// Parse a criterion selection: `all` or a comma-separated list of ids in
/// 1..=10 (duplicates tolerated; the validation runner dedups).
pub fn parse_criteria(s: &str) -> Result<Vec<usize>, String> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("all") {
        return Ok(jrc_core::validation::CRITERION_IDS.to_vec());
    }
    let mut ids = Vec::new();
    for raw in t.split(',') {
        let part = raw.trim();
        if part.is_empty() {
            return Err(format!("empty criterion id in `{t}`"));
        }
        let id: usize = part
            .parse()
            .map_err(|_| format!("cannot parse criterion id `{part}`; expected 1..=10 or all"))?;
        if !(1..=10).contains(&id) {
            return Err(format!("criterion id {id} out of range 1..=10"));
        }
        ids.push(id);
    }
    Ok(ids)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
