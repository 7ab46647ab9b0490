//! Growth of the `d_k`, Witt's formula, and the rational-homology-sphere exhaustion checker.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use super::pc::is_powerful;
use super::pquot::{p_quotient, LayerRanks};
use crate::arith::{gcd, mobius};
use crate::error::{param, Error, Result};
use crate::fpcore::{abelianization, Presentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthLabel {
    Bounded,
    Growing,
    Inconclusive,
}

impl fmt::Display for GrowthLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthLabel::Bounded => "bounded",
            GrowthLabel::Growing => "growing",
            GrowthLabel::Inconclusive => "inconclusive",
        })
    }
}

pub const BOUNDED_MAX: usize = 3;
pub const GROWTH_RATIO: f64 = 1.2;

/// Labels a computed `d_k` sequence (lower exponent-p central series).
pub fn classify(d: &[usize]) -> GrowthLabel {
    if d.iter().all(|&x| x <= BOUNDED_MAX) {
        return GrowthLabel::Bounded;
    }
    if d.len() >= 4 && d[d.len() - 4..].windows(2).all(|w| w[0] > 0 && w[1] as f64 > GROWTH_RATIO * w[0] as f64) {
        return GrowthLabel::Growing;
    }
    GrowthLabel::Inconclusive
}

pub fn dk_series_and_classify(pres: &Presentation, p: u64, max_class: usize) -> Result<(LayerRanks, GrowthLabel)> {
    let (_, r) = p_quotient(pres, p, max_class)?;
    let label = classify(&r.d);
    Ok((r, label))
}

/// `Σ_{m<=k} (1/m) Σ_{d|m} μ(m/d) 2^d`: the free group of rank 2's `d_k`.
pub fn witt_cumulative(k: u32) -> Result<u64> {
    if !(1..=30).contains(&k) {
        return param("k must lie in 1..=30");
    }
    let mut total: i64 = 0;
    for m in 1..=k as i64 {
        let inner: i64 = (1..=m).filter(|d| m % d == 0).map(|d| mobius((m / d) as u64) * (1i64 << d)).sum();
        total += inner / m;
    }
    Ok(total as u64)
}

/// Every p-quotient is powerful iff the class-2 quotient is.
pub fn is_p_powerful(pres: &Presentation, p: u64) -> Result<bool> {
    let (s, _) = p_quotient(pres, p, 2)?;
    Ok(is_powerful(&s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Satisfied,
    NotSatisfied,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub hypotheses: BTreeMap<String, bool>,
    pub conclusion: Conclusion,
    pub witnesses: Vec<String>,
}

impl Verdict {
    pub fn satisfied(&self) -> bool {
        self.conclusion == Conclusion::Satisfied
    }
}

pub const HYP_BETTI: &str = "betti_zero";
pub const HYP_COPRIME: &str = "h1_coprime";
pub const HYP_POWERFUL: &str = "p_powerful";

/// Hypotheses for exhausting a closed hyperbolic 3-manifold by rational homology spheres:
/// `β_1 = 0`, `gcd(|H_1|, p^{2n} - 1) = 1`, and a p-powerful fundamental group.
/// `h1_order` overrides the computed torsion order.
pub fn exhaustion_check(pres: &Presentation, p: u64, n: u32, h1_order: Option<u64>) -> Result<Verdict> {
    if n == 0 || (p as f64).powi(2 * n as i32) >= u64::MAX as f64 {
        return param("p^(2n) must fit in 64 bits and n must be positive");
    }
    let mut witnesses = Vec::new();
    let mut hyp = BTreeMap::new();
    let ab = abelianization(pres);
    hyp.insert(HYP_BETTI.to_string(), ab.betti == 0);
    witnesses.push(format!(
        "H1 = Z^{} + torsion [{}]",
        ab.betti,
        ab.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    ));
    let m = p.pow(2 * n) - 1;
    let order = match h1_order {
        Some(h) => Some(BigInt::from(h)),
        None if ab.betti == 0 => Some(ab.torsion_order()),
        None => None,
    };
    let coprime = match order {
        Some(h) => {
            let g = gcd((&h % m).to_u64().expect("reduced below m"), m);
            witnesses.push(format!("gcd(|H1| = {h}, {p}^{} - 1 = {m}) = {g}", 2 * n));
            g == 1
        }
        None => {
            witnesses.push("|H1| infinite".into());
            false
        }
    };
    hyp.insert(HYP_COPRIME.to_string(), coprime);
    let powerful = is_p_powerful(pres, p)?;
    witnesses.push(format!("class-2 {p}-quotient powerful: {powerful}"));
    hyp.insert(HYP_POWERFUL.to_string(), powerful);
    let conclusion = if hyp.values().all(|&v| v) { Conclusion::Satisfied } else { Conclusion::NotSatisfied };
    Ok(Verdict { hypotheses: hyp, conclusion, witnesses })
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchRow {
    pub name: String,
    pub p: u64,
    pub d: Vec<usize>,
    pub label: GrowthLabel,
    pub p_powerful: bool,
}

/// Runs every presentation file in `dir` (sorted by name), in parallel.
pub fn batch_dir(dir: &Path, p: u64, max_class: usize) -> Result<Vec<BatchRow>> {
    let io = |e| Error::Io { path: dir.to_path_buf(), source: e };
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(io)?
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(io)?
        .into_iter()
        .map(|e| e.path())
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    files
        .par_iter()
        .map(|f| {
            let text = std::fs::read_to_string(f).map_err(|e| Error::Io { path: f.clone(), source: e })?;
            let pres = Presentation::parse(&text)?;
            let name = f.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            batch_row(name, &pres, p, max_class)
        })
        .collect()
}

/// One batch entry; a tripped width guard keeps the partial ranks and labels them `inconclusive`.
pub fn batch_row(name: String, pres: &Presentation, p: u64, max_class: usize) -> Result<BatchRow> {
    let (d, label) = match dk_series_and_classify(pres, p, max_class) {
        Ok((r, label)) => (r.d, label),
        Err(Error::Resource { partial, .. }) => (partial, GrowthLabel::Inconclusive),
        Err(e) => return Err(e),
    };
    let p_powerful = is_p_powerful(pres, p)?;
    Ok(BatchRow { name, p, d, label, p_powerful })
}

/// CSV with `d1..d{max_class}` columns; layers past the end of a series are empty.
pub fn batch_csv(rows: &[BatchRow], max_class: usize) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["name".to_string(), "p".to_string()];
    header.extend((1..=max_class).map(|k| format!("d{k}")));
    header.extend(["label".to_string(), "p_powerful".to_string()]);
    let csv_err = |e: csv::Error| Error::Invariant(format!("csv: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![r.name.clone(), r.p.to_string()];
        rec.extend((0..max_class).map(|k| r.d.get(k).map(|x| x.to_string()).unwrap_or_default()));
        rec.extend([r.label.to_string(), r.p_powerful.to_string()]);
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Invariant(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
