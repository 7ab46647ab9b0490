//! Surveys of `Γ_0` covers over all prime powers up to a bound.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::epi::{cover_betti_at, enumerate_with, EpiClass, EpiOptions, FieldData, DEFAULT_PROXY_PRIME};
use super::orbifold::OrbifoldSpec;
use crate::arith::{is_prime, prime_power};
use crate::error::{param, Result};
use crate::finfield::{FqElem, MAX_USER_DEGREE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyOptions {
    pub exact: bool,
    pub proxy_prime: u64,
    /// Positives must also be positive over this prime when set.
    pub second_prime: Option<u64>,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions { exact: false, proxy_prime: DEFAULT_PROXY_PRIME, second_prime: None }
    }
}

impl SurveyOptions {
    pub fn validate(&self) -> Result<()> {
        for p in std::iter::once(self.proxy_prime).chain(self.second_prime) {
            if !is_prime(p) || p >= 1 << 32 {
                return param(format!("proxy prime {p} must be a prime below 2^32"));
            }
        }
        Ok(())
    }
}

/// One cover, flattened for the results cache.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub n: i32,
    pub k: u32,
    pub q: u64,
    pub p: u64,
    pub m: usize,
    pub canonical_key: u64,
    pub x: FqElem,
    pub y: FqElem,
    pub t: FqElem,
    pub semisimple: bool,
    pub betti_proxy: usize,
    pub proxy_prime: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_betti: Option<usize>,
}

impl ClassRecord {
    pub fn is_positive(&self) -> bool {
        self.betti_proxy > 0 && self.second_betti.map_or(true, |b| b > 0)
    }
}

/// Prime powers `q <= q_max` split into those in range (`m <= 8`) and those skipped.
pub fn survey_norms(q_max: u64) -> (Vec<u64>, Vec<u64>) {
    (2..=q_max)
        .filter_map(|q| prime_power(q).map(|(_, m)| (q, m)))
        .fold((Vec::new(), Vec::new()), |(mut ok, mut skip), (q, m)| {
            if m as usize <= MAX_USER_DEGREE {
                ok.push(q);
            } else {
                skip.push(q);
            }
            (ok, skip)
        })
}

/// All classes at one norm with their covers; pure and single-threaded.
pub fn survey_task(spec: &OrbifoldSpec, q: u64, opts: &SurveyOptions) -> Result<Vec<ClassRecord>> {
    let data = FieldData::new(q)?;
    let classes = enumerate_with(spec, &data, &EpiOptions { exact: opts.exact })?;
    classes.iter().map(|c| class_record(c, &data, opts)).collect()
}

fn class_record(c: &EpiClass, data: &FieldData, opts: &SurveyOptions) -> Result<ClassRecord> {
    let f = data.field();
    let point = c.q as usize;
    let betti_proxy = cover_betti_at(c, f, opts.proxy_prime, point)?.betti_proxy;
    let second_betti = match opts.second_prime {
        // a zero proxy is already exact
        Some(p2) if betti_proxy > 0 => Some(cover_betti_at(c, f, p2, point)?.betti_proxy),
        Some(_) => Some(0),
        None => None,
    };
    Ok(ClassRecord {
        n: c.n,
        k: c.k,
        q: c.q,
        p: c.p,
        m: c.m,
        canonical_key: c.canonical_key,
        x: c.x,
        y: c.y,
        t: c.t,
        semisimple: c.semisimple,
        betti_proxy,
        proxy_prime: opts.proxy_prime,
        second_betti,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormSummary {
    pub q: u64,
    pub classes: usize,
    pub positive: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub n: i32,
    pub k: u32,
    pub q_max: u64,
    pub options: SurveyOptions,
    pub per_q: Vec<NormSummary>,
    pub records: Vec<ClassRecord>,
    pub classes_total: usize,
    pub classes_positive: usize,
    pub percent: f64,
    pub exceptional_norms: Vec<u64>,
    /// Exceptional norms missing from the published list for this orbifold;
    /// candidates for classes off the canonical component.
    pub non_canonical: Vec<u64>,
    /// Prime powers in range whose degree exceeds the supported field degree.
    pub skipped_norms: Vec<u64>,
}

pub const SURVEY_CSV_HEADER: &str = "n,k,q_max,classes_total,classes_positive,percent,exceptional_norms";

impl SurveyReport {
    /// Builds the report from per-norm records in any order.
    pub fn aggregate(
        spec: &OrbifoldSpec,
        q_max: u64,
        options: SurveyOptions,
        per_norm: impl IntoIterator<Item = (u64, Vec<ClassRecord>)>,
    ) -> SurveyReport {
        let mut by_q: BTreeMap<u64, Vec<ClassRecord>> = BTreeMap::new();
        for (q, recs) in per_norm {
            by_q.entry(q).or_default().extend(recs);
        }
        let mut records = Vec::new();
        let mut per_q = Vec::new();
        for (q, mut recs) in by_q {
            recs.sort_by_key(|r| r.canonical_key);
            recs.dedup_by_key(|r| r.canonical_key);
            let positive = recs.iter().filter(|r| r.is_positive()).count();
            per_q.push(NormSummary { q, classes: recs.len(), positive });
            records.extend(recs);
        }
        let classes_total = records.len();
        let classes_positive = records.iter().filter(|r| r.is_positive()).count();
        let percent = if classes_total == 0 { 0.0 } else { 100.0 * classes_positive as f64 / classes_total as f64 };
        let exceptional_norms: Vec<u64> = per_q.iter().filter(|s| s.positive > 0).map(|s| s.q).collect();
        let non_canonical = match spec.reference_exceptional_norms() {
            Some(list) => exceptional_norms.iter().copied().filter(|q| !list.contains(q)).collect(),
            None => Vec::new(),
        };
        SurveyReport {
            n: spec.n,
            k: spec.k,
            q_max,
            options,
            per_q,
            records,
            classes_total,
            classes_positive,
            percent,
            exceptional_norms,
            non_canonical,
            skipped_norms: survey_norms(q_max).1,
        }
    }

    pub fn spec(&self) -> OrbifoldSpec {
        OrbifoldSpec { n: self.n, k: self.k }
    }

    /// The CSV data row (no header).
    pub fn csv_row(&self) -> String {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        let norms = join(&self.exceptional_norms);
        w.write_record([
            self.n.to_string(),
            self.k.to_string(),
            self.q_max.to_string(),
            self.classes_total.to_string(),
            self.classes_positive.to_string(),
            format!("{:.2}", self.percent),
            norms,
        ])
        .expect("writing to memory");
        String::from_utf8(w.into_inner().expect("writing to memory")).expect("ascii")
    }
}

pub fn join(qs: &[u64]) -> String {
    qs.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

/// Survey without a cache, parallel over norms on the current rayon pool.
pub fn survey(spec: &OrbifoldSpec, q_max: u64, opts: &SurveyOptions) -> Result<SurveyReport> {
    use rayon::prelude::*;
    if q_max < 2 {
        return param("q_max must be at least 2");
    }
    opts.validate()?;
    let (norms, _) = survey_norms(q_max);
    let per_norm: Vec<(u64, Vec<ClassRecord>)> =
        norms.par_iter().map(|&q| survey_task(spec, q, opts).map(|r| (q, r))).collect::<Result<_>>()?;
    Ok(SurveyReport::aggregate(spec, q_max, *opts, per_norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn norms_split_by_degree() {
        let (ok, skip) = survey_norms(1100);
        assert!(ok.contains(&256) && ok.contains(&729) && ok.contains(&1009));
        assert_eq!(skip, vec![512, 1024]);
        assert_eq!(survey_norms(10).0, vec![2, 3, 4, 5, 7, 8, 9]);
    }

    #[test]
    fn t44_desk_scale() {
        let spec = OrbifoldSpec::new(4, 4).unwrap();
        let r = survey(&spec, 500, &SurveyOptions::default()).unwrap();
        assert_eq!(r.exceptional_norms, vec![23, 103]);
        assert!(r.non_canonical.is_empty());
        assert!(r.skipped_norms.is_empty());
        assert_eq!(r.csv_row(), format!("4,4,500,{},{},{:.2},\"23,103\"\n", r.classes_total, r.classes_positive, r.percent));
        // the cross-check prime confirms both
        let opts = SurveyOptions { second_prime: Some(65537), ..Default::default() };
        let r2 = survey(&spec, 110, &opts).unwrap();
        assert_eq!(r2.exceptional_norms, vec![23, 103]);
    }

    #[test]
    fn rejects_bad_options() {
        let spec = OrbifoldSpec::new(4, 4).unwrap();
        assert!(survey(&spec, 1, &SurveyOptions::default()).is_err());
        let bad = SurveyOptions { proxy_prime: 31992, ..Default::default() };
        assert!(survey(&spec, 10, &bad).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn totals_monotone_in_q_max(idx in 0usize..34, a in 2u64..60, b in 2u64..60) {
            let spec = OrbifoldSpec::all()[idx];
            let (lo, hi) = (a.min(b), a.max(b));
            let opts = SurveyOptions::default();
            let r_lo = survey(&spec, lo, &opts).unwrap();
            let r_hi = survey(&spec, hi, &opts).unwrap();
            prop_assert!(r_lo.classes_total <= r_hi.classes_total);
            prop_assert!(r_lo.classes_positive <= r_hi.classes_positive);
            prop_assert!(r_lo.exceptional_norms.iter().all(|q| r_hi.exceptional_norms.contains(q)));
        }

        #[test]
        fn aggregation_ignores_order(idx in 0usize..34, seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let spec = OrbifoldSpec::all()[idx];
            let opts = SurveyOptions::default();
            let (norms, _) = survey_norms(50);
            let mut per: Vec<(u64, Vec<ClassRecord>)> =
                norms.iter().map(|&q| (q, survey_task(&spec, q, &opts).unwrap())).collect();
            let base = SurveyReport::aggregate(&spec, 50, opts, per.clone());
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            per.shuffle(&mut rng);
            for (_, recs) in per.iter_mut() {
                recs.shuffle(&mut rng);
            }
            prop_assert_eq!(SurveyReport::aggregate(&spec, 50, opts, per), base);
        }
    }
}
