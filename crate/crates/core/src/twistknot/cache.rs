//! Append-only JSON-lines results cache with per-norm completion markers.
//!
//! Each finished norm is appended in one write: its class lines followed by a
//! `done` line carrying the class count. A norm counts as complete only when
//! the marker is present and the distinct keys on file match its count, so a
//! torn write is recomputed rather than trusted. Unparseable or foreign lines
//! move to `<file>.quarantine` when the cache is opened.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::mpsc;

use serde::{Deserialize, Serialize};

use super::orbifold::OrbifoldSpec;
use super::survey::{survey_norms, survey_task, ClassRecord, SurveyOptions, SurveyReport};
use crate::arith::prime_power;
use crate::error::{param, Error, Result};

pub const CACHE_SCHEMA: u32 = 1;

/// Environment override for the cache directory.
pub const CACHE_DIR_ENV: &str = "KLEINLAB_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CacheLine {
    Class {
        schema: u32,
        #[serde(flatten)]
        record: ClassRecord,
    },
    Done {
        schema: u32,
        n: i32,
        k: u32,
        q: u64,
        classes: usize,
    },
}

/// Work still to do for one orbifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyPlan {
    pub spec: OrbifoldSpec,
    pub q_max: u64,
    pub options: SurveyOptions,
    pub norms: Vec<u64>,
}

impl SurveyPlan {
    pub fn full(spec: OrbifoldSpec, q_max: u64, options: SurveyOptions) -> Self {
        SurveyPlan { spec, q_max, options, norms: survey_norms(q_max).0 }
    }
}

pub struct ResultsCache {
    path: PathBuf,
    spec: OrbifoldSpec,
    options: SurveyOptions,
    records: BTreeMap<u64, BTreeMap<u64, ClassRecord>>,
    done: BTreeMap<u64, usize>,
    quarantined: usize,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

impl ResultsCache {
    pub fn file_name(spec: &OrbifoldSpec, opts: &SurveyOptions) -> String {
        let mut name = format!("twist_n{}_k{}_P{}", spec.n, spec.k, opts.proxy_prime);
        if let Some(p2) = opts.second_prime {
            name.push_str(&format!("_S{p2}"));
        }
        if opts.exact {
            name.push_str("_exact");
        }
        name + ".jsonl"
    }

    /// Loads (creating the directory if needed) and quarantines bad lines.
    pub fn open(dir: &Path, spec: &OrbifoldSpec, opts: &SurveyOptions) -> Result<Self> {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let path = dir.join(Self::file_name(spec, opts));
        let mut cache =
            ResultsCache { path, spec: *spec, options: *opts, records: BTreeMap::new(), done: BTreeMap::new(), quarantined: 0 };
        let text = match fs::read(&cache.path) {
            Ok(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(io_err(&cache.path)(e)),
        };
        let mut good = Vec::new();
        let mut bad = Vec::new();
        let complete_tail = text.ends_with('\n');
        let lines: Vec<&str> = text.lines().collect();
        for (i, line) in lines.iter().enumerate() {
            let torn = i + 1 == lines.len() && !complete_tail;
            match serde_json::from_str::<CacheLine>(line) {
                Ok(l) if !torn && cache.accept(&l) => good.push(*line),
                _ if line.trim().is_empty() => {}
                _ => bad.push(*line),
            }
        }
        if !bad.is_empty() {
            cache.quarantined = bad.len();
            let side = cache.quarantine_path();
            let mut f = OpenOptions::new().create(true).append(true).open(&side).map_err(io_err(&side))?;
            f.write_all((bad.join("\n") + "\n").as_bytes()).map_err(io_err(&side))?;
            let tmp = cache.path.with_extension("jsonl.tmp");
            let body: String = good.iter().map(|l| format!("{l}\n")).collect();
            fs::write(&tmp, body).map_err(io_err(&tmp))?;
            fs::rename(&tmp, &cache.path).map_err(io_err(&cache.path))?;
        }
        Ok(cache)
    }

    fn accept(&mut self, line: &CacheLine) -> bool {
        match line {
            CacheLine::Class { schema, record: r } => {
                if *schema != CACHE_SCHEMA || !self.record_fits(r) {
                    return false;
                }
                self.records.entry(r.q).or_default().insert(r.canonical_key, r.clone());
            }
            CacheLine::Done { schema, n, k, q, classes } => {
                if *schema != CACHE_SCHEMA || (*n, *k) != (self.spec.n, self.spec.k) || prime_power(*q).is_none() {
                    return false;
                }
                self.done.insert(*q, *classes);
            }
        }
        true
    }

    fn record_fits(&self, r: &ClassRecord) -> bool {
        let field_ok = prime_power(r.q) == Some((r.p, r.m as u32))
            && [&r.x, &r.y, &r.t].iter().all(|e| e.coeffs().len() <= r.m && e.coeffs().iter().all(|&c| (c as u64) < r.p))
            && r.canonical_key < r.q * r.q;
        field_ok
            && (r.n, r.k) == (self.spec.n, self.spec.k)
            && r.proxy_prime == self.options.proxy_prime
            && r.second_betti.is_some() == self.options.second_prime.is_some()
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn quarantine_path(&self) -> PathBuf {
        self.path.with_extension("jsonl.quarantine")
    }

    /// Lines moved aside when this cache was opened.
    pub fn quarantined(&self) -> usize {
        self.quarantined
    }

    pub fn is_complete(&self, q: u64) -> bool {
        self.done.get(&q).is_some_and(|&c| self.records.get(&q).map_or(0, BTreeMap::len) == c)
    }

    /// Records of every complete norm up to `q_max`.
    pub fn completed(&self, q_max: u64) -> Vec<(u64, Vec<ClassRecord>)> {
        self.done
            .keys()
            .filter(|&&q| q <= q_max && self.is_complete(q))
            .map(|&q| (q, self.records.get(&q).map(|m| m.values().cloned().collect()).unwrap_or_default()))
            .collect()
    }

    pub fn remaining(&self, norms: &[u64]) -> Vec<u64> {
        norms.iter().copied().filter(|&q| !self.is_complete(q)).collect()
    }

    /// Appends one finished norm as a single write.
    pub fn append(file: &mut File, path: &Path, spec: &OrbifoldSpec, q: u64, records: &[ClassRecord]) -> Result<()> {
        let mut buf = String::new();
        for r in records {
            let line = CacheLine::Class { schema: CACHE_SCHEMA, record: r.clone() };
            buf.push_str(&serde_json::to_string(&line).expect("records serialize"));
            buf.push('\n');
        }
        let done = CacheLine::Done { schema: CACHE_SCHEMA, n: spec.n, k: spec.k, q, classes: records.len() };
        buf.push_str(&serde_json::to_string(&done).expect("markers serialize"));
        buf.push('\n');
        file.write_all(buf.as_bytes()).map_err(io_err(path))?;
        file.flush().map_err(io_err(path))
    }
}

/// Subtracts norms already complete in `dir` from the plan.
pub fn cache_resume(dir: &Path, plan: &SurveyPlan) -> Result<SurveyPlan> {
    let cache = ResultsCache::open(dir, &plan.spec, &plan.options)?;
    Ok(SurveyPlan { norms: cache.remaining(&plan.norms), ..plan.clone() })
}

/// Survey backed by the cache in `dir`: computes missing norms in parallel,
/// streams them to a single writer thread, then reports from the file.
pub fn survey_cached(spec: &OrbifoldSpec, q_max: u64, opts: &SurveyOptions, dir: &Path) -> Result<SurveyReport> {
    use rayon::prelude::*;
    if q_max < 2 {
        return param("q_max must be at least 2");
    }
    opts.validate()?;
    let plan = cache_resume(dir, &SurveyPlan::full(*spec, q_max, *opts))?;
    if !plan.norms.is_empty() {
        let path = dir.join(ResultsCache::file_name(spec, opts));
        let mut file = OpenOptions::new().create(true).append(true).open(&path).map_err(io_err(&path))?;
        let (tx, rx) = mpsc::channel::<(u64, Vec<ClassRecord>)>();
        let spec_w = *spec;
        let writer = std::thread::spawn(move || -> Result<()> {
            for (q, recs) in rx {
                ResultsCache::append(&mut file, &path, &spec_w, q, &recs)?;
            }
            file.sync_data().map_err(io_err(&path))
        });
        let work = plan.norms.par_iter().try_for_each_with(tx, |tx, &q| -> Result<()> {
            let recs = survey_task(spec, q, opts)?;
            // a closed channel means the writer failed; its error is reported below
            let _ = tx.send((q, recs));
            Ok(())
        });
        let written = writer.join().map_err(|_| Error::Invariant("cache writer panicked".into()))?;
        work?;
        written?;
    }
    let cache = ResultsCache::open(dir, spec, opts)?;
    let (norms, _) = survey_norms(q_max);
    let missing = cache.remaining(&norms);
    if !missing.is_empty() {
        return Err(Error::Invariant(format!("cache incomplete after survey: {missing:?}")));
    }
    Ok(SurveyReport::aggregate(spec, q_max, *opts, cache.completed(q_max)))
}
