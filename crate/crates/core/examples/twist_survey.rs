//! Desk-scale survey of Γ_0 covers for one twist-knot orbifold, with a resumable cache.
//!
//! `cargo run --example twist_survey -- 4 4 500 [cache_dir]`

use std::path::PathBuf;

use kleinlab::twistknot::{survey, survey_cached, OrbifoldSpec, SurveyOptions, SURVEY_CSV_HEADER};

fn main() -> kleinlab::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: i64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let spec = OrbifoldSpec::new(num(0, 4) as i32, num(1, 4) as u32)?;
    let q_max = num(2, 200) as u64;
    let opts = SurveyOptions::default();
    let report = match args.get(3) {
        Some(dir) => survey_cached(&spec, q_max, &opts, &PathBuf::from(dir))?,
        None => survey(&spec, q_max, &opts)?,
    };
    for s in report.per_q.iter().filter(|s| s.positive > 0) {
        println!("q={:<5} classes={} positive={}", s.q, s.classes, s.positive);
    }
    println!("{SURVEY_CSV_HEADER}\n{}", report.csv_row().trim_end());
    Ok(())
}
