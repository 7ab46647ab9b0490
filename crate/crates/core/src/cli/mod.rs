//! Command-line front end. `cli_run` parses arguments, runs one subcommand and
//! returns the process exit code: 0 success, 1 usage or input error, 2 a failed check.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fpcore::Presentation;
use crate::prop::{self, PcGroup};
use crate::quatlab::{self, base_presentation};
use crate::twistknot::{self, OrbifoldSpec, SurveyOptions, SurveyReport, CACHE_DIR_ENV, SURVEY_CSV_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RED: i32 = 2;

/// Published value of `vol(M_0)`.
pub const VOLUME_REFERENCE: f64 = 2.007_682_006_682_396_3;
/// Extra positives allowed off the published lists.
pub const MAX_NON_CANONICAL: usize = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "kleinlab", version, about = "Congruence covers of Kleinian groups, quaternion orders and pro-p tools")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "csv")]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub tasks: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    #[arg(short = 'n', allow_hyphen_values = true)]
    pub n: i32,
    #[arg(short = 'k')]
    pub k: u32,
    #[arg(long = "qmax", default_value_t = 500)]
    pub q_max: u64,
    #[arg(long, default_value_t = twistknot::DEFAULT_PROXY_PRIME)]
    pub proxy_prime: u64,
    /// Also require a positive proxy over this prime.
    #[arg(long)]
    pub second_prime: Option<u64>,
    /// Require `ρ(a)` of order exactly k.
    #[arg(long)]
    pub exact: bool,
    /// Results cache directory (falls back to the environment variable KLEINLAB_CACHE_DIR).
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Survey `Γ_0` covers of T(n,k) over all prime-power norms up to --qmax.
    TwistSurvey(SurveyArgs),
    /// List the epimorphism classes and covers for one norm q.
    TwistCover {
        #[arg(short = 'n', allow_hyphen_values = true)]
        n: i32,
        #[arg(short = 'k')]
        k: u32,
        #[arg(short = 'q')]
        q: u64,
        #[arg(long, default_value_t = twistknot::DEFAULT_PROXY_PRIME)]
        proxy_prime: u64,
        #[arg(long)]
        exact: bool,
    },
    /// Check the maximal order, the unit generators and the complex embedding.
    QuatVerify,
    /// Orders of the unit filtration quotients of the local division algebra.
    LocalLayers {
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    /// The volume constant from truncated series.
    Volume {
        #[arg(long, default_value_t = 10_000_000)]
        terms: u64,
    },
    /// Trace and injectivity-radius lower bounds for levels 1..=N.
    Bounds {
        #[arg(default_value_t = 12)]
        levels: u32,
    },
    /// Residues of ±π modulo cubes in Z/9.
    Kummer,
    /// Lower exponent-p central series ranks; FILE may be a directory (batch mode).
    Pq {
        /// Presentation file, directory, `@quat`, or `@twist:N,K`.
        file: String,
        #[arg(short = 'p')]
        p: u64,
        #[arg(long = "class", default_value_t = 5)]
        class: usize,
        /// Also print the pc presentation of the quotient.
        #[arg(long)]
        show_pc: bool,
    },
    /// Powerful test: a pc-group file (`pc P N` header) or a presentation with -p.
    Powerful {
        file: String,
        #[arg(short = 'p')]
        p: Option<u64>,
    },
    /// Hypotheses for exhausting by rational homology spheres.
    Exhaust {
        file: String,
        #[arg(short = 'p')]
        p: u64,
        /// Norm exponent of the ramified prime: N = p^n.
        #[arg(short = 'n')]
        n: u32,
        #[arg(long)]
        h1_order: Option<u64>,
    },
    /// Witt's cumulative count for the free group of rank 2.
    Witt { k: u32 },
}

/// Presentation from a file or a built-in name.
pub fn load_presentation(spec: &str) -> Result<Presentation> {
    if spec == "@quat" {
        return Ok(base_presentation());
    }
    if let Some(rest) = spec.strip_prefix("@twist:") {
        let bad = || Error::Parameter(format!("expected @twist:N,K, got {spec:?}"));
        let (n, k) = rest.split_once(',').ok_or_else(bad)?;
        let o = OrbifoldSpec::new(n.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?)?;
        return Ok(twistknot::twist_presentation(&o));
    }
    let path = Path::new(spec);
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?;
    Presentation::parse(&text)
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn fq(e: &crate::finfield::FqElem) -> String {
    e.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(":")
}

struct Ctx<'a> {
    format: Format,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn print(&mut self, s: &str) -> Result<()> {
        writeln!(self.out, "{s}").map_err(|e| Error::Io { path: PathBuf::from("<stdout>"), source: e })
    }

    fn note(&mut self, s: &str) {
        let _ = writeln!(self.err, "{s}");
    }
}

fn survey_cmd(ctx: &mut Ctx, a: &SurveyArgs) -> Result<i32> {
    let spec = OrbifoldSpec::new(a.n, a.k)?;
    let opts = SurveyOptions { exact: a.exact, proxy_prime: a.proxy_prime, second_prime: a.second_prime };
    opts.validate()?;
    if a.q_max < 2 {
        return Err(Error::Parameter("--qmax must be at least 2".into()));
    }
    let dir = a.cache_dir.clone().or_else(|| std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from));
    let report: SurveyReport = match &dir {
        Some(d) => twistknot::survey_cached(&spec, a.q_max, &opts, d)?,
        None => twistknot::survey(&spec, a.q_max, &opts)?,
    };
    if !report.skipped_norms.is_empty() {
        ctx.note(&format!("skipped norms of degree above the field guard: {}", twistknot::survey::join(&report.skipped_norms)));
    }
    match ctx.format {
        Format::Json => ctx.print(&json(&report))?,
        Format::Csv => {
            ctx.print(SURVEY_CSV_HEADER)?;
            ctx.print(report.csv_row().trim_end())?;
            ctx.print(&twistknot::survey::join(&report.exceptional_norms))?;
            if !report.non_canonical.is_empty() {
                ctx.print(&format!("non-canonical component: {}", twistknot::survey::join(&report.non_canonical)))?;
            }
        }
    }
    Ok(if report.non_canonical.len() > MAX_NON_CANONICAL { EXIT_RED } else { EXIT_OK })
}

fn cover_cmd(ctx: &mut Ctx, n: i32, k: u32, q: u64, proxy_prime: u64, exact: bool) -> Result<i32> {
    let spec = OrbifoldSpec::new(n, k)?;
    let opts = SurveyOptions { exact, proxy_prime, second_prime: None };
    opts.validate()?;
    let records = twistknot::survey_task(&spec, q, &opts)?;
    match ctx.format {
        Format::Json => ctx.print(&json(&records))?,
        Format::Csv => {
            ctx.print("q,canonical_key,x,y,t,semisimple,betti_proxy")?;
            for r in &records {
                ctx.print(&format!("{},{},{},{},{},{},{}", r.q, r.canonical_key, fq(&r.x), fq(&r.y), fq(&r.t), r.semisimple, r.betti_proxy))?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct QuatVerify {
    order_closure: quatlab::OrderClosureReport,
    presentation_units: quatlab::PresentationUnitsReport,
    embedding: quatlab::EmbeddingReport,
}

fn quat_cmd(ctx: &mut Ctx) -> Result<i32> {
    let r = QuatVerify {
        order_closure: quatlab::verify_order_closure(),
        presentation_units: quatlab::verify_presentation_units()?,
        embedding: quatlab::numeric_embedding_check(1e-10)?,
    };
    let ok = r.order_closure.closed && r.presentation_units.ok && r.embedding.ok;
    match ctx.format {
        Format::Json => ctx.print(&json(&r))?,
        Format::Csv => {
            ctx.print(&format!("order_closed,{}", r.order_closure.closed))?;
            for g in &r.presentation_units.generators {
                ctx.print(&format!("generator,{},norm={},in_order={},unit={}", g.name, g.reduced_norm, g.in_order, g.unit))?;
            }
            for rel in &r.presentation_units.relators {
                let sign = rel.sign.map_or("not ±1".to_string(), |s| if s > 0 { "+1".into() } else { "-1".into() });
                ctx.print(&format!("relator,{},{}", rel.relator, sign))?;
            }
            let max_err = r.embedding.relator_errors.iter().chain(&r.embedding.trace_errors).fold(0.0f64, |a, &b| a.max(b));
            ctx.print(&format!("embedding,max_error={max_err:.3e},ok={}", r.embedding.ok))?;
            ctx.print(&format!("verified,{ok}"))?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_RED })
}

fn local_cmd(ctx: &mut Ctx, n_max: usize) -> Result<i32> {
    let r = quatlab::local_layer_orders(n_max)?;
    // (Z/3)^2 for odd n, Z/3 for even n; the unit image is Z/8
    let expected: Vec<u64> = (1..=n_max).map(|n| if n % 2 == 1 { 9 } else { 3 }).collect();
    let ok = r.unit_image_order == 8 && r.layers == expected;
    match ctx.format {
        Format::Json => ctx.print(&json(&r))?,
        Format::Csv => {
            ctx.print("level,quotient_order")?;
            ctx.print(&format!("0,{}", r.unit_image_order))?;
            for (i, l) in r.layers.iter().enumerate() {
                ctx.print(&format!("{},{}", i + 1, l))?;
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_RED })
}

fn volume_cmd(ctx: &mut Ctx, terms: u64) -> Result<i32> {
    let r = quatlab::volume_constant(terms)?;
    let ok = (r.volume - VOLUME_REFERENCE).abs() <= r.error_bound + 1e-14;
    match ctx.format {
        Format::Json => ctx.print(&json(&r))?,
        Format::Csv => {
            ctx.print(&format!("{:.16}", r.volume))?;
            ctx.note(&format!("terms {terms}, error bound {:.2e}, vol(M_0') = {:.16}", r.error_bound, r.volume_prime));
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_RED })
}

fn bounds_cmd(ctx: &mut Ctx, levels: u32) -> Result<i32> {
    if levels == 0 {
        return Err(Error::Parameter("at least one level".into()));
    }
    let rows: Vec<_> = (1..=levels).map(quatlab::injrad_lower_bound).collect();
    match ctx.format {
        Format::Json => ctx.print(&json(&rows))?,
        Format::Csv => {
            ctx.print("n,trace_floor,length_bound,injrad_bound")?;
            for b in &rows {
                ctx.print(&format!("{},{:.6},{:.6},{:.6}", b.n, b.trace_floor, b.length_bound, b.injrad_bound))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn kummer_cmd(ctx: &mut Ctx) -> Result<i32> {
    let r = quatlab::kummer_residues();
    let ok = r.residues == [4, 5] && r.one_absent;
    match ctx.format {
        Format::Json => ctx.print(&json(&r))?,
        Format::Csv => {
            let j = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
            ctx.print(&format!("sqrt_m2,{}", r.sqrt_m2))?;
            ctx.print(&format!("pi,{}", r.image_pi))?;
            ctx.print(&format!("minus_pi,{}", r.image_minus_pi))?;
            ctx.print(&format!("cubes,\"{}\"", j(&r.cubes)))?;
            ctx.print(&format!("residues,\"{}\"", j(&r.residues)))?;
            ctx.print(&format!("one_absent,{}", r.one_absent))?;
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_RED })
}

fn pq_cmd(ctx: &mut Ctx, file: &str, p: u64, class: usize, show_pc: bool) -> Result<i32> {
    let rows = if Path::new(file).is_dir() {
        prop::batch_dir(Path::new(file), p, class)?
    } else {
        let pres = load_presentation(file)?;
        if show_pc {
            let (g, _) = prop::p_quotient(&pres, p, class)?;
            ctx.note(&g.to_text());
        }
        let name = Path::new(file).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| file.into());
        vec![prop::batch_row(name, &pres, p, class)?]
    };
    match ctx.format {
        Format::Json => ctx.print(&json(&rows))?,
        Format::Csv => ctx.print(prop::batch_csv(&rows, class)?.trim_end())?,
    }
    Ok(EXIT_OK)
}

fn powerful_cmd(ctx: &mut Ctx, file: &str, p: Option<u64>) -> Result<i32> {
    let text = if file.starts_with('@') { String::new() } else {
        std::fs::read_to_string(file).map_err(|e| Error::Io { path: file.into(), source: e })?
    };
    let is_pc = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).is_some_and(|l| l.starts_with("pc "));
    let (kind, answer) = if is_pc {
        let g = PcGroup::parse(&text)?;
        if !g.is_consistent() {
            return Err(Error::Parameter("pc presentation is not consistent".into()));
        }
        ("powerful", prop::is_powerful(&g))
    } else {
        let p = p.ok_or_else(|| Error::Parameter("-p is required for a group presentation".into()))?;
        ("p_powerful", prop::is_p_powerful(&load_presentation(file)?, p)?)
    };
    match ctx.format {
        Format::Json => ctx.print(&json(&serde_json::json!({ kind: answer })))?,
        Format::Csv => ctx.print(&format!("{kind},{answer}"))?,
    }
    Ok(EXIT_OK)
}

fn exhaust_cmd(ctx: &mut Ctx, file: &str, p: u64, n: u32, h1: Option<u64>) -> Result<i32> {
    let v = prop::exhaustion_check(&load_presentation(file)?, p, n, h1)?;
    match ctx.format {
        Format::Json => ctx.print(&json(&v))?,
        Format::Csv => {
            for (name, pass) in &v.hypotheses {
                ctx.print(&format!("{name},{}", if *pass { "pass" } else { "fail" }))?;
            }
            ctx.print(&format!("conclusion,{}", if v.satisfied() { "satisfied" } else { "not-satisfied" }))?;
            for w in &v.witnesses {
                ctx.note(w);
            }
        }
    }
    Ok(EXIT_OK)
}

fn dispatch(ctx: &mut Ctx, cmd: &Command) -> Result<i32> {
    match cmd {
        Command::TwistSurvey(a) => survey_cmd(ctx, a),
        Command::TwistCover { n, k, q, proxy_prime, exact } => cover_cmd(ctx, *n, *k, *q, *proxy_prime, *exact),
        Command::QuatVerify => quat_cmd(ctx),
        Command::LocalLayers { n_max } => local_cmd(ctx, *n_max),
        Command::Volume { terms } => volume_cmd(ctx, *terms),
        Command::Bounds { levels } => bounds_cmd(ctx, *levels),
        Command::Kummer => kummer_cmd(ctx),
        Command::Pq { file, p, class, show_pc } => pq_cmd(ctx, file, *p, *class, *show_pc),
        Command::Powerful { file, p } => powerful_cmd(ctx, file, *p),
        Command::Exhaust { file, p, n, h1_order } => exhaust_cmd(ctx, file, *p, *n, *h1_order),
        Command::Witt { k } => {
            let w = prop::witt_cumulative(*k)?;
            ctx.print(&w.to_string())?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn cli_run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // --help and --version render to stdout with success
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    // output is buffered so the command can run inside a sized thread pool
    let exec = || {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let r = dispatch(&mut Ctx { format: cli.format, out: &mut o, err: &mut e }, &cli.command);
        (r, o, e)
    };
    let (result, o, e) = match cli.tasks {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
            Ok(pool) => pool.install(exec),
            Err(e) => (Err(Error::Parameter(format!("thread pool: {e}"))), Vec::new(), Vec::new()),
        },
        None => exec(),
    };
    let _ = out.write_all(&o);
    let _ = err.write_all(&e);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
