//! CSV output: `slots.csv` (per-slot log) and `summary.csv` (one row per
//! policy and SNR point).
//!
//! Numbers are written in plain decimal with at most 9 significant digits.
//! Summary values are rounded to 9 significant digits when the row is built,
//! so parsing the file back reproduces the in-memory rows exactly.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use super::episode::{EpisodeResult, Phase, SlotRecord};
use crate::bandit::PolicyKind;
use crate::error::{Error, Result};
use crate::link::{throughput, CommConfig};

pub const SLOTS_HEADER: [&str; 11] = [
    "trial",
    "snr_db",
    "policy",
    "slot",
    "phase",
    "beam",
    "reward",
    "ber",
    "cumulative_ber",
    "regret",
    "quality",
];

pub const SUMMARY_HEADER: [&str; 7] = [
    "policy",
    "snr_db",
    "trials",
    "final_cumulative_ber",
    "throughput_bps",
    "total_regret",
    "exploration_time_s",
];

/// Round to 9 significant digits.
pub fn quantize(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// Plain decimal, at most 9 significant digits.
pub fn fmt_sig9(x: f64) -> String {
    let q = quantize(x);
    if q == 0.0 {
        return "0".to_string();
    }
    format!("{q}")
}

/// Mean metrics of one policy at one SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub policy: PolicyKind,
    pub snr_db: f64,
    pub trials: usize,
    pub final_cumulative_ber: f64,
    pub throughput_bps: f64,
    pub total_regret: f64,
    pub exploration_time_s: f64,
}

impl SummaryRow {
    /// Average over `episodes`, which must share a policy and SNR point.
    pub fn from_episodes(episodes: &[&EpisodeResult], comm: &CommConfig) -> Result<Self> {
        let first = episodes
            .first()
            .ok_or_else(|| Error::arg("episodes", "need at least one episode"))?;
        if episodes
            .iter()
            .any(|e| e.policy != first.policy || e.snr_index != first.snr_index)
        {
            return Err(Error::arg("episodes", "mixed policies or SNR points"));
        }
        let n = episodes.len() as f64;
        let mean = |f: fn(&EpisodeResult) -> f64| episodes.iter().map(|e| f(e)).sum::<f64>() / n;
        let ber = mean(|e| e.final_cumulative_ber);
        Ok(SummaryRow {
            policy: first.policy,
            snr_db: quantize(first.snr_db),
            trials: episodes.len(),
            final_cumulative_ber: quantize(ber),
            throughput_bps: quantize(throughput(ber, comm)),
            total_regret: quantize(mean(|e| e.total_regret)),
            exploration_time_s: quantize(mean(|e| e.exploration_time)),
        })
    }

    fn fields(&self) -> [String; 7] {
        [
            self.policy.name().to_string(),
            fmt_sig9(self.snr_db),
            self.trials.to_string(),
            fmt_sig9(self.final_cumulative_ber),
            fmt_sig9(self.throughput_bps),
            fmt_sig9(self.total_regret),
            fmt_sig9(self.exploration_time_s),
        ]
    }
}

fn record_fields(r: &SlotRecord) -> [String; 11] {
    [
        r.trial.to_string(),
        fmt_sig9(r.snr_db),
        r.policy.name().to_string(),
        r.slot.to_string(),
        r.phase.name().to_string(),
        r.beam.map(|b| b.to_string()).unwrap_or_default(),
        fmt_sig9(r.reward),
        fmt_sig9(r.ber),
        fmt_sig9(r.cumulative_ber),
        fmt_sig9(r.regret),
        r.quality.map(fmt_sig9).unwrap_or_default(),
    ]
}

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(f)))
}

/// Streaming writer for `slots.csv`.
pub struct SlotWriter {
    path: std::path::PathBuf,
    inner: csv::Writer<BufWriter<File>>,
}

impl SlotWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let mut inner = writer(path)?;
        inner.write_record(SLOTS_HEADER).map_err(|e| Error::io(path, e))?;
        Ok(SlotWriter {
            path: path.to_path_buf(),
            inner,
        })
    }

    pub fn write(&mut self, records: &[SlotRecord]) -> Result<()> {
        for r in records {
            self.inner
                .write_record(record_fields(r))
                .map_err(|e| Error::io(&self.path, e))?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush().map_err(|e| Error::io(&self.path, e))?;
        let buf = self.inner.into_inner().map_err(|e| Error::io(&self.path, e.error()))?;
        buf.into_inner()
            .map_err(|e| Error::io(&self.path, e.error()))?
            .sync_all()
            .map_err(|e| Error::io(&self.path, e))
    }
}

pub fn write_slots(path: &Path, records: &[SlotRecord]) -> Result<()> {
    let mut w = SlotWriter::create(path)?;
    w.write(records)?;
    w.finish()
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(SUMMARY_HEADER).map_err(|e| Error::io(path, e))?;
    for r in rows {
        w.write_record(r.fields()).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn parse<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad {what} `{s}`")))
}

pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| Error::io(path, e))?;
    let header = rd.headers().map_err(|e| Error::io(path, e))?.clone();
    if header.iter().ne(SUMMARY_HEADER) {
        return Err(Error::Parse(format!("unexpected summary header in {}", path.display())));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| Error::io(path, e))?;
        if rec.len() != SUMMARY_HEADER.len() {
            return Err(Error::Parse(format!("summary row has {} fields", rec.len())));
        }
        rows.push(SummaryRow {
            policy: PolicyKind::parse(&rec[0])?,
            snr_db: parse(&rec[1], "snr_db")?,
            trials: parse(&rec[2], "trials")?,
            final_cumulative_ber: parse(&rec[3], "final_cumulative_ber")?,
            throughput_bps: parse(&rec[4], "throughput_bps")?,
            total_regret: parse(&rec[5], "total_regret")?,
            exploration_time_s: parse(&rec[6], "exploration_time_s")?,
        });
    }
    Ok(rows)
}

pub fn read_slots(path: &Path) -> Result<Vec<SlotRecord>> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| Error::io(path, e))?;
    let header = rd.headers().map_err(|e| Error::io(path, e))?.clone();
    if header.iter().ne(SLOTS_HEADER) {
        return Err(Error::Parse(format!("unexpected slots header in {}", path.display())));
    }
    let opt = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            parse(s, "quality").map(Some)
        }
    };
    let mut out = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| Error::io(path, e))?;
        if rec.len() != SLOTS_HEADER.len() {
            return Err(Error::Parse(format!("slot row has {} fields", rec.len())));
        }
        out.push(SlotRecord {
            trial: parse(&rec[0], "trial")?,
            snr_db: parse(&rec[1], "snr_db")?,
            policy: PolicyKind::parse(&rec[2])?,
            slot: parse(&rec[3], "slot")?,
            phase: Phase::parse(&rec[4])?,
            beam: if rec[5].is_empty() { None } else { Some(parse(&rec[5], "beam")?) },
            reward: parse(&rec[6], "reward")?,
            ber: parse(&rec[7], "ber")?,
            cumulative_ber: parse(&rec[8], "cumulative_ber")?,
            regret: parse(&rec[9], "regret")?,
            quality: opt(&rec[10])?,
        });
    }
    Ok(out)
}

/// Write both files into `dir`, creating it if needed.
pub fn emit_csv(records: &[SlotRecord], summaries: &[SummaryRow], dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_slots(&dir.join("slots.csv"), records)?;
    write_summary(&dir.join("summary.csv"), summaries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_formatting() {
        assert_eq!(fmt_sig9(0.0), "0");
        assert_eq!(fmt_sig9(10_000_000.0), "10000000");
        assert_eq!(fmt_sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_sig9(123_456_789_123.0), "123456789000");
        assert_eq!(fmt_sig9(2.5e-7), "0.00000025");
        assert_eq!(fmt_sig9(-5.0), "-5");
        assert!(!fmt_sig9(1e-12).contains('e'));
    }

    #[test]
    fn quantize_is_idempotent_and_parses_back() {
        for &x in &[0.1, 1.0 / 7.0, 9.42e6, 8.123456789e-5, 0.5, 123.456789012] {
            let q = quantize(x);
            assert_eq!(quantize(q), q);
            assert_eq!(fmt_sig9(q).parse::<f64>().unwrap(), q);
        }
    }

    #[test]
    fn empty_files_are_header_only() {
        let dir = tempfile::tempdir().unwrap();
        emit_csv(&[], &[], dir.path()).unwrap();
        let slots = std::fs::read_to_string(dir.path().join("slots.csv")).unwrap();
        assert_eq!(slots, format!("{}\n", SLOTS_HEADER.join(",")));
        let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
        assert_eq!(summary, format!("{}\n", SUMMARY_HEADER.join(",")));
        assert!(read_summary(&dir.path().join("summary.csv")).unwrap().is_empty());
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let err = write_summary(Path::new("/nonexistent-dir/x/summary.csv"), &[]).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
