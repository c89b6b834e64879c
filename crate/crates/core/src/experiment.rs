//! Monte-Carlo trials of the homomorphism pipeline on `G(n, c/n)`, the
//! odd-girth law they are compared against, and report persistence.
//!
//! Trial `i` of an experiment uses seed `base_seed + i`. Records are kept in
//! trial order whatever order the threads finish in, and wall-clock timing is
//! off unless requested, so rerunning a configuration reproduces the CSV and
//! JSON byte for byte.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{hom_find, HomOutcome};
use crate::cycles::odd_girth;
use crate::error::{Error, Result};
use crate::graph::{families, generate_gnp};
use crate::oracle::{hom_search_with, SearchOptions, DEFAULT_BUDGET};

pub const SCHEMA: &str = "1";
pub const CSV_HEADER: &str = "n,c,ell,seed,outcome,odd_girth,ms";

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// `φ_ℓ(c) = Σ_{i=1}^{ℓ-1} c^{2i+1} / (2(2i+1))`; zero for `ℓ <= 1`.
pub fn phi(ell: usize, c: f64) -> f64 {
    (1..ell)
        .map(|i| {
            let k = (2 * i + 1) as i32;
            c.powi(k) / (2.0 * k as f64)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilsonInterval {
    pub lo: f64,
    pub hi: f64,
    pub center: f64,
    /// Half-width divided by `z`.
    pub sigma: f64,
}

/// Wilson score interval for `k` successes in `n` trials; `[0, 1]` when `n = 0`.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> WilsonInterval {
    if n == 0 {
        return WilsonInterval {
            lo: 0.0,
            hi: 1.0,
            center: 0.5,
            sigma: f64::INFINITY,
        };
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    WilsonInterval {
        lo: (center - half).max(0.0),
        hi: (center + half).min(1.0),
        center,
        sigma: half / z,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutcomeTag {
    Hom,
    OddGirthCert,
    StructureFailure,
    /// The pipeline failed but the exact oracle proved there is no
    /// homomorphism.
    OracleNone,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub c: f64,
    pub ell: usize,
    pub seed: u64,
    pub outcome: OutcomeTag,
    /// `None` when the graph is bipartite.
    pub odd_girth: Option<usize>,
    pub ms: Option<u64>,
}

impl TrialRecord {
    /// Internal consistency of the tag and the observed odd girth.
    pub fn is_consistent(&self) -> bool {
        let short = self.odd_girth.is_some_and(|g| g < 2 * self.ell + 1);
        match self.outcome {
            OutcomeTag::Hom => !short,
            OutcomeTag::OddGirthCert => short,
            _ => true,
        }
    }
}

/// Largest `n` for which [`run_trial`] runs the exact oracle when asked.
pub const ORACLE_MAX_N: usize = 200;

/// Generates `G(n, c/n)` from `seed`, runs [`hom_find`], re-verifies the
/// outcome and measures the odd girth independently. With `oracle` (and
/// `n <= ORACLE_MAX_N`) the outcome is also cross-checked against exact
/// search. A failed self-check is an [`Error::Inconsistent`].
pub fn run_trial(n: usize, c: f64, ell: usize, seed: u64, oracle: bool, timing: bool) -> Result<TrialRecord> {
    let start = Instant::now();
    let g = generate_gnp(n, c, seed)?;
    let outcome = hom_find(&g, ell)?;
    let ms = timing.then(|| start.elapsed().as_millis() as u64);
    outcome
        .check(&g, ell)
        .map_err(|e| Error::Inconsistent(format!("seed {seed}: {e}")))?;
    let og = odd_girth(&g).map(|c| c.len());
    let mut tag = match outcome {
        HomOutcome::Hom(_) => OutcomeTag::Hom,
        HomOutcome::OddGirthCertificate { .. } => OutcomeTag::OddGirthCert,
        HomOutcome::StructureFailure(_) => OutcomeTag::StructureFailure,
    };
    if oracle && n <= ORACLE_MAX_N {
        let target = families::cycle(2 * ell + 1);
        let opts = SearchOptions {
            budget: DEFAULT_BUDGET,
            fix_first: true,
        };
        let exists = hom_search_with(&g, &target, opts).decided();
        match (tag, exists) {
            (OutcomeTag::Hom, Some(false)) | (OutcomeTag::OddGirthCert, Some(true)) => {
                return Err(Error::Inconsistent(format!(
                    "seed {seed}: pipeline says {tag:?}, exact search disagrees"
                )))
            }
            (OutcomeTag::StructureFailure, Some(false)) => tag = OutcomeTag::OracleNone,
            _ => {}
        }
    }
    let rec = TrialRecord {
        n,
        c,
        ell,
        seed,
        outcome: tag,
        odd_girth: og,
        ms,
    };
    if !rec.is_consistent() {
        return Err(Error::Inconsistent(format!("seed {seed}: {rec:?}")));
    }
    Ok(rec)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub c: f64,
    pub ell: usize,
    pub trials: u64,
    pub seed: u64,
    pub oracle: bool,
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: 10_000,
            c: 1.2,
            ell: 2,
            trials: 100,
            seed: 1,
            oracle: false,
            timing: false,
        }
    }
}

impl ExperimentConfig {
    /// Sets one field from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::InvalidParameter(format!("{key}: cannot parse {v:?}")))
        }
        match key {
            "n" => self.n = num(key, value)?,
            "c" => self.c = num(key, value)?,
            "ell" => self.ell = num(key, value)?,
            "trials" => self.trials = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "oracle" => self.oracle = num(key, value)?,
            "timing" => self.timing = num(key, value)?,
            _ => return Err(Error::InvalidParameter(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Applies a flat `key=value` file on top of `self`. Blank lines and
    /// lines starting with `#` are skipped.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                reason: "expected key=value".into(),
            })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.ell == 0 {
            return Err(Error::InvalidParameter("n and ell must be positive".into()));
        }
        if !(self.c >= 0.0) || self.c > self.n as f64 {
            return Err(Error::InvalidParameter(format!("c = {} outside [0, n]", self.c)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub hom: u64,
    pub odd_girth_cert: u64,
    pub structure_failure: u64,
    pub oracle_none: u64,
}

impl OutcomeCounts {
    pub fn add(&mut self, t: OutcomeTag) {
        match t {
            OutcomeTag::Hom => self.hom += 1,
            OutcomeTag::OddGirthCert => self.odd_girth_cert += 1,
            OutcomeTag::StructureFailure => self.structure_failure += 1,
            OutcomeTag::OracleNone => self.oracle_none += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.hom + self.odd_girth_cert + self.structure_failure + self.oracle_none
    }
}

/// Probability that `χ_c` falls in `(2 + 1/(l+1), 2 + 1/l]`, estimated by
/// the fraction of graphs with odd girth exactly `2l + 1`. The limit is
/// `e^{-φ_l(c)} - e^{-φ_{l+1}(c)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub ell: usize,
    pub count: u64,
    pub empirical: f64,
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: String,
    pub config: ExperimentConfig,
    pub counts: OutcomeCounts,
    /// Trials whose odd girth is at least `2ℓ + 1` (bipartite included).
    pub long_odd_girth: u64,
    pub p_long_odd_girth: Option<f64>,
    pub wilson: WilsonInterval,
    /// `e^{-φ_ℓ(c)}`.
    pub predicted: f64,
    /// `(predicted - wilson.center) / wilson.sigma`.
    pub z_score: Option<f64>,
    pub bands: Vec<Band>,
}

impl ExperimentReport {
    pub fn from_records(config: &ExperimentConfig, records: &[TrialRecord]) -> Self {
        let mut counts = OutcomeCounts::default();
        let mut long = 0;
        let band_max = config.ell + 1;
        let mut band_counts = vec![0u64; band_max + 1];
        for r in records {
            counts.add(r.outcome);
            match r.odd_girth {
                Some(g) if g < 2 * config.ell + 1 => {}
                _ => long += 1,
            }
            if let Some(g) = r.odd_girth {
                let l = (g - 1) / 2;
                if l <= band_max {
                    band_counts[l] += 1;
                }
            }
        }
        let t = records.len() as u64;
        let frac = |k: u64| (t > 0).then(|| k as f64 / t as f64);
        let wilson = wilson_interval(long, t, Z95);
        let predicted = (-phi(config.ell, config.c)).exp();
        let bands = (1..=band_max)
            .map(|l| Band {
                ell: l,
                count: band_counts[l],
                empirical: frac(band_counts[l]).unwrap_or(0.0),
                predicted: (-phi(l, config.c)).exp() - (-phi(l + 1, config.c)).exp(),
            })
            .collect();
        ExperimentReport {
            schema: SCHEMA.into(),
            config: config.clone(),
            counts,
            long_odd_girth: long,
            p_long_odd_girth: frac(long),
            z_score: (t > 0).then(|| (predicted - wilson.center) / wilson.sigma),
            wilson,
            predicted,
            bands,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub records: Vec<TrialRecord>,
    pub report: ExperimentReport,
}

/// Runs `config.trials` trials in parallel and aggregates them.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Experiment> {
    config.validate()?;
    let records = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            run_trial(
                config.n,
                config.c,
                config.ell,
                config.seed.wrapping_add(i),
                config.oracle,
                config.timing,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let report = ExperimentReport::from_records(config, &records);
    Ok(Experiment { records, report })
}

impl Experiment {
    /// Writes `trials.csv` and `report.json` into `dir` (created if missing)
    /// and returns their paths.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let csv_path = dir.join("trials.csv");
        let json_path = dir.join("report.json");
        fs::write(&csv_path, records_to_csv(&self.records)?).map_err(|e| Error::io(&csv_path, e))?;
        let mut json = serde_json::to_string_pretty(&self.report)?;
        json.push('\n');
        fs::write(&json_path, json).map_err(|e| Error::io(&json_path, e))?;
        Ok((csv_path, json_path))
    }
}

pub fn records_to_csv(records: &[TrialRecord]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(CSV_HEADER.split(','))?;
    for r in records {
        w.serialize(r)?;
    }
    w.into_inner()
        .map_err(|e| Error::Serialization(e.to_string()))
}

pub fn read_trials_csv(path: &Path) -> Result<Vec<TrialRecord>> {
    let text = fs::read(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(text.as_slice());
    let header: Vec<&str> = CSV_HEADER.split(',').collect();
    if r.headers()?.iter().collect::<Vec<_>>() != header {
        return Err(Error::Parse {
            line: 1,
            reason: format!("expected header {CSV_HEADER}"),
        });
    }
    r.deserialize().map(|x| x.map_err(Error::from)).collect()
}

/// Re-derives a record from scratch: regenerates the graph from its seed,
/// recomputes the odd girth and checks the outcome tag is plausible.
pub fn audit_record(rec: &TrialRecord) -> Result<()> {
    if !rec.is_consistent() {
        return Err(Error::Inconsistent(format!("seed {}: tag contradicts odd girth", rec.seed)));
    }
    let g = generate_gnp(rec.n, rec.c, rec.seed)?;
    let og = odd_girth(&g).map(|c| c.len());
    if og != rec.odd_girth {
        return Err(Error::Inconsistent(format!(
            "seed {}: recorded odd girth {:?}, recomputed {:?}",
            rec.seed, rec.odd_girth, og
        )));
    }
    Ok(())
}
