//! Output-file assembly: CSV bodies with a `#`-prefixed JSON metadata
//! header, an optional timestamp line, and float formatting that is
//! byte-stable across runs.
//!
//! Layout of every CSV file:
//!
//! ```text
//! # {"command":"capacity","parameters":{...},"seed":12345,"units":"nats","version":"0.1.0"}
//! # generated: 1755856800 (unix seconds)        ← absent with --no-timestamp
//! snr_db,stable,single_side,...
//! -10,0.09...,...
//! ```
//!
//! The metadata line is JSON with sorted keys (serde_json's default map is
//! ordered), so reruns with the same inputs produce byte-identical files
//! apart from the timestamp line, which `--no-timestamp` suppresses for
//! diff-based testing.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

/// Everything the writers need to place and stamp files.
#[derive(Debug, Clone)]
pub struct OutputCtx {
    /// Directory all files are written into (created on demand).
    pub dir: PathBuf,
    /// Suppress the `# generated:` line for byte-identical reruns.
    pub no_timestamp: bool,
    /// Resolved master seed, echoed into every metadata header.
    pub seed: u64,
    /// Convert capacity/rate outputs from nats to bits.
    pub bits: bool,
}

impl OutputCtx {
    /// The `# {...}` metadata line. `units` is `None` for unitless outputs
    /// (densities, counts); parameters must already be JSON.
    pub fn metadata_line(&self, command: &str, units: Option<&str>, parameters: Value) -> String {
        let mut meta = json!({
            "command": command,
            "parameters": parameters,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
        });
        if let Some(u) = units {
            meta["units"] = json!(u);
        }
        format!("# {meta}")
    }

    /// Assemble a CSV body: metadata, optional timestamp, column header,
    /// then rows. Returns the full file contents.
    pub fn csv_body(
        &self,
        command: &str,
        units: Option<&str>,
        parameters: Value,
        columns: &[&str],
        rows: &[Vec<String>],
        trailing_comments: &[String],
    ) -> String {
        let mut lines = Vec::with_capacity(rows.len() + 3);
        lines.push(self.metadata_line(command, units, parameters));
        if !self.no_timestamp {
            lines.push(timestamp_line());
        }
        lines.push(columns.join(","));
        for row in rows {
            lines.push(row.join(","));
        }
        lines.extend(trailing_comments.iter().cloned());
        lines.push(String::new()); // trailing newline
        lines.join("\n")
    }

    /// Write `body` to `name` inside the output directory, creating the
    /// directory if needed, and report the path on stdout.
    pub fn write(&self, name: &str, body: &str) -> anyhow::Result<PathBuf> {
        std::fs::create_dir_all(&self.dir)
            .map_err(|e| anyhow::anyhow!("cannot create output dir {}: {e}", self.dir.display()))?;
        let path = self.dir.join(name);
        std::fs::write(&path, body)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display()))?;
        println!("wrote {}", path.display());
        Ok(path)
    }

    /// Convert a capacity value to the requested unit and name that unit.
    pub fn capacity_units(&self) -> &'static str {
        if self.bits { "bits" } else { "nats" }
    }

    pub fn scale_capacity(&self, nats: f64) -> f64 {
        if self.bits { nats / std::f64::consts::LN_2 } else { nats }
    }
}

/// `# generated:` line carrying the wall-clock time. Kept to whole seconds;
/// the point is provenance, not precision.
pub fn timestamp_line() -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("# generated: {secs} (unix seconds)")
}

/// Shortest-roundtrip float formatting (Rust's default `Display`), shared by
/// every CSV writer so values re-parse to the exact f64.
pub fn fmt_f(v: f64) -> String {
    format!("{v}")
}

/// Read a whole file, with the path in the error message.
pub fn read_file(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))
}
