//! Run manifests: provenance records written before any heavy compute
//! starts, so a crashed or interrupted run still leaves behind what was
//! attempted, with which config, seeds, and code version.

use crate::Result;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Provenance for one CLI invocation.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    /// The subcommand and its arguments, as invoked.
    pub command: String,
    /// FNV-1a hash of the canonical config text (hex), empty without one.
    pub config_hash: String,
    /// Every base seed the run derives trial seeds from.
    pub seeds: Vec<u64>,
    /// Crate version baked in at build time.
    pub version: String,
    /// Wall-clock start, seconds since the UNIX epoch.
    pub unix_time_secs: u64,
    /// The same instant as an ISO-8601 UTC string.
    pub timestamp: String,
    /// Files the run intends to write.
    pub outputs: Vec<String>,
}

impl RunManifest {
    /// Captures the invocation now, before compute begins.
    #[must_use]
    pub fn new(command: &str, config_text: Option<&str>, seeds: &[u64], outputs: &[PathBuf]) -> Self {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunManifest {
            command: command.to_string(),
            config_hash: config_text.map(|t| format!("{:016x}", fnv64(t.as_bytes()))).unwrap_or_default(),
            seeds: seeds.to_vec(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            unix_time_secs: secs,
            timestamp: iso8601_utc(secs),
            outputs: outputs
                .iter()
                .map(|p| p.to_string_lossy().into_owned())
                .collect(),
        }
    }

    /// Writes `manifest.json` into `dir`, creating the directory.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("manifest.json");
        std::fs::write(&path, serde_json::to_string_pretty(self)?)?;
        Ok(path)
    }
}

/// FNV-1a over a byte string.
#[must_use]
pub fn fnv64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Formats seconds-since-epoch as `YYYY-MM-DDThh:mm:ssZ`.
#[must_use]
pub fn iso8601_utc(secs: u64) -> String {
    let days = (secs / 86_400) as i64;
    let rem = secs % 86_400;
    let (y, m, d) = civil_from_days(days);
    format!(
        "{y:04}-{m:02}-{d:02}T{:02}:{:02}:{:02}Z",
        rem / 3600,
        (rem % 3600) / 60,
        rem % 60
    )
}

/// Gregorian date from days since 1970-01-01 (era decomposition).
fn civil_from_days(z: i64) -> (i64, u32, u32) {
    let z = z + 719_468;
    let era = z.div_euclid(146_097);
    let doe = z.rem_euclid(146_097) as u64;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe as i64 + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = if mp < 10 { mp + 3 } else { mp - 9 } as u32;
    (if m <= 2 { y + 1 } else { y }, m, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timestamp_formatting_matches_known_instants() {
        assert_eq!(iso8601_utc(0), "1970-01-01T00:00:00Z");
        assert_eq!(iso8601_utc(951_782_400), "2000-02-29T00:00:00Z");
        assert_eq!(iso8601_utc(1_700_000_000), "2023-11-14T22:13:20Z");
        assert_eq!(iso8601_utc(4_102_444_799), "2099-12-31T23:59:59Z");
    }

    #[test]
    fn hash_is_stable_and_content_sensitive() {
        let a = fnv64(b"config a");
        assert_eq!(a, fnv64(b"config a"));
        assert_ne!(a, fnv64(b"config b"));
        // documented FNV-1a basis behavior for the empty string
        assert_eq!(fnv64(b""), 0xcbf2_9ce4_8422_2325);
    }

    #[test]
    fn manifest_round_trips_to_disk() {
        let dir = tempfile::tempdir().unwrap();
        let m = RunManifest::new(
            "experiment accuracy-vs-shots --config cfg.json",
            Some("{\"seed\":7}"),
            &[7],
            &[dir.path().join("points.csv")],
        );
        let path = m.write(dir.path()).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        let back: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back["seeds"][0], 7);
        assert_eq!(back["config_hash"].as_str().unwrap().len(), 16);
        assert!(back["timestamp"].as_str().unwrap().ends_with('Z'));
        assert_eq!(back["version"], env!("CARGO_PKG_VERSION"));
    }
}
