//! Range scan: segmented prime iteration, a worker pool over contiguous
//! segments, and an in-order writer so the report stream is byte-identical
//! for any worker count. A resume cursor is checkpointed alongside the
//! output file every few segments.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use lpr_core::arith::{primes_up_to, PrimeContext};
use lpr_core::bounds::{golomb_pair_bound, lehmer_count_bound, lpr_count_bound};
use lpr_core::lehmer::LehmerProfile;
use lpr_core::sieve::{certify_existence_with, CertifyOptions, Verdict};
use lpr_core::{Error, Result};

pub const DEFAULT_COUNTING_CAP: u64 = 1_000_000;
const SEGMENT_SPAN: u64 = 1 << 20;
const CHECKPOINT_EVERY: u64 = 16;

pub const CSV_HEADER: &str = "p,M,N,G,first_lpr,verdict,thm1,thm2,thm6,elapsed_us";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    JsonLines,
    Csv,
}

impl OutputFormat {
    fn name(&self) -> &'static str {
        match self {
            OutputFormat::JsonLines => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub lo: u64,
    pub hi: u64,
    pub counts: bool,
    pub golomb: bool,
    pub bounds: bool,
    pub certify: bool,
    pub jobs: usize,
    pub counting_cap: u64,
    pub direct_cap: u64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub stable: bool,
    pub resume: bool,
}

impl ScanConfig {
    pub fn checks_name(&self) -> String {
        let mut parts = Vec::new();
        if self.counts {
            parts.push("counts");
        }
        if self.bounds {
            parts.push("bounds");
        }
        if self.certify {
            parts.push("certify");
        }
        if self.golomb {
            parts.push("golomb");
        }
        parts.join(",")
    }
}

/// One output row. Field order is the wire order for both formats.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRecord {
    pub p: u64,
    #[serde(rename = "M")]
    pub m: Option<u64>,
    #[serde(rename = "N")]
    pub n: Option<u64>,
    #[serde(rename = "G")]
    pub g: Option<u64>,
    pub first_lpr: Option<u64>,
    pub verdict: Option<String>,
    pub thm1: Option<bool>,
    pub thm2: Option<bool>,
    pub thm6: Option<bool>,
    pub elapsed_us: u64,
}

fn opt_field<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

impl ScanRecord {
    fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::JsonLines => serde_json::to_string(self).expect("plain record"),
            OutputFormat::Csv => format!(
                "{},{},{},{},{},{},{},{},{},{}",
                self.p,
                opt_field(&self.m),
                opt_field(&self.n),
                opt_field(&self.g),
                opt_field(&self.first_lpr),
                opt_field(&self.verdict),
                opt_field(&self.thm1),
                opt_field(&self.thm2),
                opt_field(&self.thm6),
                self.elapsed_us
            ),
        }
    }
}

#[derive(Debug, Clone, Default)]
struct SegmentStats {
    primes: u64,
    failures: u64,
    undecided: u64,
    no_lpr: Vec<u64>,
    // min slack of the N, M and G bound checks, in that order
    min_slack: [Option<f64>; 3],
}

impl SegmentStats {
    fn absorb(&mut self, other: &SegmentStats) {
        self.primes += other.primes;
        self.failures += other.failures;
        self.undecided += other.undecided;
        self.no_lpr.extend_from_slice(&other.no_lpr);
        for i in 0..3 {
            self.min_slack[i] = match (self.min_slack[i], other.min_slack[i]) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
        }
    }

    fn note_slack(&mut self, i: usize, slack: f64) {
        self.min_slack[i] = Some(self.min_slack[i].map_or(slack, |s| s.min(slack)));
    }
}

#[derive(Debug, Clone)]
pub struct ScanSummary {
    pub primes: u64,
    pub failures: u64,
    pub undecided: u64,
    pub no_lpr: Vec<u64>,
    pub min_slack: [Option<f64>; 3],
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct CheckpointConfig {
    lo: u64,
    hi: u64,
    checks: String,
    format: String,
    stable: bool,
    counting_cap: u64,
    direct_cap: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    config: CheckpointConfig,
    next_segment: u64,
    byte_offset: u64,
    primes: u64,
    failures: u64,
    undecided: u64,
    no_lpr: Vec<u64>,
    min_slack: [Option<f64>; 3],
}

fn checkpoint_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".resume");
    PathBuf::from(name)
}

fn config_echo(cfg: &ScanConfig) -> CheckpointConfig {
    CheckpointConfig {
        lo: cfg.lo,
        hi: cfg.hi,
        checks: cfg.checks_name(),
        format: cfg.format.name().into(),
        stable: cfg.stable,
        counting_cap: cfg.counting_cap,
        direct_cap: cfg.direct_cap,
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Primes in [start, end), via the precomputed base primes.
fn primes_in_segment(start: u64, end: u64, base: &[u64], out: &mut Vec<u64>) {
    out.clear();
    let len = (end - start) as usize;
    let mut composite = vec![false; len];
    for &q in base {
        if q * q >= end {
            break;
        }
        let mut m = (start.div_ceil(q) * q).max(q * q);
        while m < end {
            composite[(m - start) as usize] = true;
            m += q;
        }
    }
    for i in 0..len {
        let n = start + i as u64;
        if n >= 2 && !composite[i] {
            out.push(n);
        }
    }
}

fn process_prime(p: u64, cfg: &ScanConfig, stats: &mut SegmentStats) -> ScanRecord {
    let started = (!cfg.stable).then(Instant::now);
    let mut rec = ScanRecord {
        p,
        m: None,
        n: None,
        g: None,
        first_lpr: None,
        verdict: None,
        thm1: None,
        thm2: None,
        thm6: None,
        elapsed_us: 0,
    };
    stats.primes += 1;
    if cfg.certify {
        let cert = certify_existence_with(
            p,
            &CertifyOptions {
                direct_search_cap: cfg.direct_cap,
            },
        )
        .expect("segment yields primes only");
        match cert.verdict {
            Verdict::NoLpr => {
                stats.no_lpr.push(p);
                if p > 7 {
                    stats.failures += 1;
                }
            }
            Verdict::Undecided => {
                stats.undecided += 1;
                stats.failures += 1;
            }
            _ => {}
        }
        rec.verdict = Some(cert.verdict.to_string());
    }
    if cfg.counts && p > 2 {
        let ctx = PrimeContext::with_inverse_table(p, cfg.counting_cap)
            .expect("range preflighted against the counting cap");
        let profile = LehmerProfile::build(&ctx).expect("table just built");
        let (m, _) = profile.count_lehmer();
        let n = profile.count_lpr();
        rec.m = Some(m);
        rec.n = Some(n);
        rec.first_lpr = profile.first_lpr();
        if rec.first_lpr.is_none() && p > 7 {
            stats.failures += 1;
        }
        if cfg.golomb {
            rec.g = Some(profile.count_golomb_pairs());
        }
        if cfg.bounds {
            let pairs = rec.g.expect("bounds implies golomb");
            let r_n = lpr_count_bound(&ctx, n, false);
            let r_m = lehmer_count_bound(&ctx, m, false);
            let r_g = golomb_pair_bound(&ctx, pairs, false);
            for (i, r) in [r_n, r_m, r_g].iter().enumerate() {
                stats.note_slack(i, r.slack);
                if !r.holds {
                    stats.failures += 1;
                }
            }
            rec.thm1 = Some(r_n.holds);
            rec.thm2 = Some(r_m.holds);
            rec.thm6 = Some(r_g.holds);
        }
    }
    if let Some(t0) = started {
        rec.elapsed_us = t0.elapsed().as_micros() as u64;
    }
    rec
}

fn process_segment(seg: u64, cfg: &ScanConfig, base: &[u64]) -> (Vec<ScanRecord>, SegmentStats) {
    let start = cfg.lo + seg * SEGMENT_SPAN;
    let end = (start + SEGMENT_SPAN).min(cfg.hi + 1);
    let mut primes = Vec::new();
    primes_in_segment(start, end, base, &mut primes);
    let mut stats = SegmentStats::default();
    let records = primes
        .into_iter()
        .map(|p| process_prime(p, cfg, &mut stats))
        .collect();
    (records, stats)
}

enum Sink {
    File(BufWriter<File>),
    Stdout(std::io::Stdout),
}

impl Sink {
    fn write_line(&mut self, line: &str) -> std::io::Result<()> {
        match self {
            Sink::File(w) => writeln!(w, "{line}"),
            Sink::Stdout(w) => writeln!(w.lock(), "{line}"),
        }
    }

    fn flush(&mut self) -> std::io::Result<()> {
        match self {
            Sink::File(w) => w.flush(),
            Sink::Stdout(w) => w.flush(),
        }
    }
}

fn io_error(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("i/o failure: {e}"))
}

/// Run the scan; records go to the configured sink in ascending p, the
/// summary is returned (and printed by the caller). Deterministic for a
/// fixed config regardless of the worker count.
pub fn run_scan(cfg: &ScanConfig) -> Result<ScanSummary> {
    if cfg.lo > cfg.hi {
        return Err(Error::InvalidArgument(format!(
            "empty range {}:{}",
            cfg.lo, cfg.hi
        )));
    }
    if cfg.counts && cfg.hi > cfg.counting_cap {
        return Err(Error::CapExceeded {
            what: "scan upper limit with counting checks",
            value: cfg.hi,
            cap: cfg.counting_cap,
        });
    }
    if cfg.resume && cfg.out.is_none() {
        return Err(Error::InvalidArgument(
            "--resume needs --out to continue into".into(),
        ));
    }

    let segments = (cfg.hi - cfg.lo) / SEGMENT_SPAN + 1;
    let mut start_segment = 0u64;
    let mut carried = SegmentStats::default();
    let mut byte_offset = 0u64;

    if cfg.resume {
        let path = checkpoint_path(cfg.out.as_ref().unwrap());
        let raw = std::fs::read_to_string(&path).map_err(|e| {
            Error::InvalidArgument(format!("cannot read resume cursor {}: {e}", path.display()))
        })?;
        let ck: Checkpoint = serde_json::from_str(&raw)
            .map_err(|e| Error::InvalidArgument(format!("corrupt resume cursor: {e}")))?;
        if ck.config != config_echo(cfg) {
            return Err(Error::InvalidArgument(
                "resume cursor does not match this scan configuration".into(),
            ));
        }
        start_segment = ck.next_segment;
        byte_offset = ck.byte_offset;
        carried = SegmentStats {
            primes: ck.primes,
            failures: ck.failures,
            undecided: ck.undecided,
            no_lpr: ck.no_lpr,
            min_slack: ck.min_slack,
        };
    }

    let mut sink = match &cfg.out {
        Some(path) => {
            let file = if cfg.resume {
                let f = OpenOptions::new().write(true).open(path).map_err(io_error)?;
                // drop anything written past the last completed checkpoint
                f.set_len(byte_offset).map_err(io_error)?;
                let mut f = OpenOptions::new().append(true).open(path).map_err(io_error)?;
                f.flush().map_err(io_error)?;
                f
            } else {
                File::create(path).map_err(io_error)?
            };
            Sink::File(BufWriter::new(file))
        }
        None => Sink::Stdout(std::io::stdout()),
    };

    if cfg.format == OutputFormat::Csv && start_segment == 0 {
        sink.write_line(CSV_HEADER).map_err(io_error)?;
        byte_offset += CSV_HEADER.len() as u64 + 1;
    }

    let base = primes_up_to(isqrt(cfg.hi).max(2));
    let next = AtomicU64::new(start_segment);
    let (tx, rx) = mpsc::sync_channel::<(u64, Vec<ScanRecord>, SegmentStats)>(cfg.jobs * 4);

    let mut total = carried;
    std::thread::scope(|scope| -> Result<()> {
        for _ in 0..cfg.jobs.max(1) {
            let tx = tx.clone();
            let base = &base;
            let next = &next;
            scope.spawn(move || loop {
                let seg = next.fetch_add(1, Ordering::Relaxed);
                if seg >= segments {
                    break;
                }
                let (records, stats) = process_segment(seg, cfg, base);
                if tx.send((seg, records, stats)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending: BTreeMap<u64, (Vec<ScanRecord>, SegmentStats)> = BTreeMap::new();
        let mut expect = start_segment;
        while let Ok((seg, records, stats)) = rx.recv() {
            pending.insert(seg, (records, stats));
            while let Some((records, stats)) = pending.remove(&expect) {
                for rec in &records {
                    let line = rec.render(cfg.format);
                    sink.write_line(&line).map_err(io_error)?;
                    byte_offset += line.len() as u64 + 1;
                }
                total.absorb(&stats);
                expect += 1;
                if let Some(out) = &cfg.out {
                    if expect % CHECKPOINT_EVERY == 0 && expect < segments {
                        sink.flush().map_err(io_error)?;
                        let ck = Checkpoint {
                            config: config_echo(cfg),
                            next_segment: expect,
                            byte_offset,
                            primes: total.primes,
                            failures: total.failures,
                            undecided: total.undecided,
                            no_lpr: total.no_lpr.clone(),
                            min_slack: total.min_slack,
                        };
                        let path = checkpoint_path(out);
                        let tmp = path.with_extension("resume.tmp");
                        std::fs::write(&tmp, serde_json::to_vec(&ck).expect("plain struct"))
                            .map_err(io_error)?;
                        std::fs::rename(&tmp, &path).map_err(io_error)?;
                    }
                }
            }
        }
        Ok(())
    })?;

    sink.flush().map_err(io_error)?;
    if let Some(out) = &cfg.out {
        let _ = std::fs::remove_file(checkpoint_path(out));
    }
    let mut no_lpr = total.no_lpr;
    no_lpr.sort_unstable();
    Ok(ScanSummary {
        primes: total.primes,
        failures: total.failures,
        undecided: total.undecided,
        no_lpr,
        min_slack: total.min_slack,
    })
}
