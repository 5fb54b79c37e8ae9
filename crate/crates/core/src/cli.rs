//! Command-line front end: `ordpat <dist|analyze|delay|rolling|simulate|inject>`.
//!
//! Every command renders into a `String` so output can be compared byte for
//! byte. Probabilities, estimates and z-scores are printed with 6 decimals.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dependence::{
    analyze_pair, default_watch_list, delay_scan, distribution, increment_correlation,
    rolling_analysis, DelayReport, DependenceReport, RollingReport,
};
use crate::error::{Error, Result};
use crate::ingest::{align, read_csv, write_csv, DroppedRows, TimeSeries};
use crate::patterns::{
    all_patterns, pattern_sequence, OrdinalPattern, PatternConfig, WindowScheme,
};
use crate::synth::{
    correlated_ar1_pair, gaussian_iid_pair, gaussian_walk_pair, inject_outliers, Ar1Config,
    OutlierConfig,
};

/// Largest order accepted on the command line; `9!` rows still fit a table.
pub const MAX_CLI_ORDER: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "ordpat",
    version,
    about = "Ordinal pattern dependence between time series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pattern frequency table of one series.
    Dist(DistArgs),
    /// Coincident/reflected pattern counts and dependence estimates for a pair.
    Analyze(PairArgs),
    /// Dependence estimates for a range of delays between the two series.
    Delay(DelayArgs),
    /// Dependence estimates over consecutive windows.
    Rolling(RollingArgs),
    /// Write a synthetic pair of series as CSV.
    Simulate(SimulateArgs),
    /// Inject correlated outliers into a pair of series.
    Inject(InjectArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Tsv,
    #[value(name = "md")]
    Markdown,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Sliding,
    Block,
}

impl From<Mode> for WindowScheme {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Sliding => WindowScheme::Sliding,
            Mode::Block => WindowScheme::Block,
        }
    }
}

#[derive(Clone, Debug, Args)]
pub struct PatternArgs {
    /// Pattern order (number of increments per window).
    #[arg(long, default_value_t = 3)]
    pub h: usize,
    #[arg(long, value_enum, default_value_t = Mode::Sliding)]
    pub mode: Mode,
    /// Values closer than this are treated as tied.
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Tsv)]
    pub format: OutputFormat,
}

impl PatternArgs {
    fn config(&self) -> Result<PatternConfig> {
        if self.h == 0 {
            return Err(Error::InvalidParameter("h must be at least 1".into()));
        }
        if self.h > MAX_CLI_ORDER {
            return Err(Error::UnsupportedOrder(self.h));
        }
        Ok(PatternConfig::new(self.h, self.mode.into()).with_epsilon(self.epsilon))
    }
}

#[derive(Clone, Debug, Args)]
pub struct DistArgs {
    /// Input CSV.
    #[arg(long)]
    pub x: PathBuf,
    #[arg(long, default_value = "key")]
    pub key: String,
    #[arg(long, default_value = "value")]
    pub value: String,
    #[command(flatten)]
    pub pattern: PatternArgs,
}

#[derive(Clone, Debug, Args)]
pub struct InputPair {
    /// First input CSV.
    #[arg(long)]
    pub x: PathBuf,
    /// Second input CSV.
    #[arg(long)]
    pub y: PathBuf,
    /// Key column shared by both files.
    #[arg(long, default_value = "key")]
    pub key: String,
    /// Value column, used for both files unless overridden.
    #[arg(long, default_value = "value")]
    pub value: String,
    #[arg(long)]
    pub x_value: Option<String>,
    #[arg(long)]
    pub y_value: Option<String>,
}

impl InputPair {
    fn x_column(&self) -> &str {
        self.x_value.as_deref().unwrap_or(&self.value)
    }

    fn y_column(&self) -> &str {
        self.y_value.as_deref().unwrap_or(&self.value)
    }

    fn load(&self) -> Result<(TimeSeries, TimeSeries, DroppedRows)> {
        let x = read_csv(&self.x, &self.key, self.x_column())?;
        let y = read_csv(&self.y, &self.key, self.y_column())?;
        let aligned = align(&x, &y)?;
        Ok((aligned.a, aligned.b, aligned.dropped))
    }
}

#[derive(Clone, Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub input: InputPair,
    #[command(flatten)]
    pub pattern: PatternArgs,
}

#[derive(Clone, Debug, Args)]
pub struct DelayArgs {
    #[command(flatten)]
    pub input: InputPair,
    #[command(flatten)]
    pub pattern: PatternArgs,
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    pub from_delay: i64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub to_delay: i64,
}

#[derive(Clone, Debug, Args)]
pub struct RollingArgs {
    #[command(flatten)]
    pub input: InputPair,
    #[command(flatten)]
    pub pattern: PatternArgs,
    /// Points per window.
    #[arg(long)]
    pub window: usize,
    /// Points between window starts; defaults to the window length.
    #[arg(long)]
    pub step: Option<usize>,
    /// Pattern to count per window, e.g. `(0,1,2,3)`. Repeatable.
    #[arg(long)]
    pub watch: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimKind {
    /// Independent Gaussian random walks.
    Walk,
    /// Correlated AR(1) pair.
    Ar1,
    /// Independent iid standard normal values.
    Iid,
}

#[derive(Clone, Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub kind: SimKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.99, allow_hyphen_values = true)]
    pub phi: f64,
    #[arg(long, default_value_t = -0.8, allow_hyphen_values = true)]
    pub rho: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_x: PathBuf,
    #[arg(long)]
    pub out_y: PathBuf,
    /// Header of the key column in the written files.
    #[arg(long, default_value = "key")]
    pub key: String,
    /// Header of the value column in the written files.
    #[arg(long, default_value = "value")]
    pub value: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Tsv)]
    pub format: OutputFormat,
}

#[derive(Clone, Debug, Args)]
pub struct InjectArgs {
    #[command(flatten)]
    pub input: InputPair,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 10.0)]
    pub magnitude: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_x: PathBuf,
    #[arg(long)]
    pub out_y: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Tsv)]
    pub format: OutputFormat,
}

/// Runs one parsed command and returns what it prints on stdout.
pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Dist(a) => cmd_dist(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Delay(a) => cmd_delay(a),
        Command::Rolling(a) => cmd_rolling(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Inject(a) => cmd_inject(a),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run_args<I, T>(args: I) -> std::result::Result<String, String>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| e.to_string())?;
    run(&cli).map_err(|e| error_line(&e))
}

/// `error: <code>: <message>` on one line.
pub fn error_line(e: &Error) -> String {
    let msg = e.to_string().replace(['\n', '\r'], " ");
    format!("error: {}: {}", e.code(), msg)
}

fn prob(v: f64) -> String {
    format!("{v:.6}")
}

fn opt_prob(v: Option<f64>) -> String {
    v.map(prob).unwrap_or_else(|| "NA".to_string())
}

/// Rows of string cells rendered as TSV or a Markdown table.
struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        match format {
            OutputFormat::Tsv | OutputFormat::Json => {
                out.push_str(&self.header.join("\t"));
                out.push('\n');
                for r in &self.rows {
                    out.push_str(&r.join("\t"));
                    out.push('\n');
                }
            }
            OutputFormat::Markdown => {
                let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
                out.push_str(&line(&self.header));
                let sep: Vec<String> = self.header.iter().map(|_| "---".to_string()).collect();
                out.push_str(&format!("|{}|\n", sep.join("|")));
                for r in &self.rows {
                    out.push_str(&line(r));
                }
            }
        }
        out
    }
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct DistRow {
    pattern: OrdinalPattern,
    rank: u64,
    count: u64,
    freq: f64,
}

#[derive(Serialize)]
struct DistOutput {
    h: usize,
    mode: WindowScheme,
    total: u64,
    rows: Vec<DistRow>,
}

pub fn cmd_dist(a: &DistArgs) -> Result<String> {
    let cfg = a.pattern.config()?;
    let series = read_csv(&a.x, &a.key, &a.value)?;
    let seq = pattern_sequence(series.values(), &cfg)?;
    let dist = distribution(&seq)?;
    let rows: Vec<DistRow> = all_patterns(cfg.order)
        .map(|p| DistRow {
            rank: p.lex_rank(),
            count: dist.count(&p),
            freq: dist.freq(&p),
            pattern: p,
        })
        .collect();
    if a.pattern.format == OutputFormat::Json {
        return json(&DistOutput {
            h: cfg.order,
            mode: cfg.scheme,
            total: dist.total(),
            rows,
        });
    }
    let mut table = Table::new(["pattern", "rank", "abs_freq", "rel_freq"]);
    let mut freq_sum = 0.0;
    for r in &rows {
        freq_sum += r.freq;
        table.push(vec![
            r.pattern.to_string(),
            r.rank.to_string(),
            r.count.to_string(),
            prob(r.freq),
        ]);
    }
    table.push(vec![
        "total".into(),
        String::new(),
        dist.total().to_string(),
        prob(freq_sum),
    ]);
    Ok(table.render(a.pattern.format))
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    mode: WindowScheme,
    dropped_x: usize,
    dropped_y: usize,
    report: &'a DependenceReport,
}

fn report_fields(r: &DependenceReport) -> Vec<(&'static str, String)> {
    vec![
        ("h", r.h.to_string()),
        ("n_windows", r.n_windows.to_string()),
        ("n_coincident", r.n_coincident.to_string()),
        ("n_reflected", r.n_reflected.to_string()),
        ("p_eq", prob(r.p_eq)),
        ("p_neq", prob(r.p_neq)),
        ("base_eq", prob(r.base_eq)),
        ("base_neq", prob(r.base_neq)),
        ("alpha_tilde", prob(r.alpha_tilde)),
        ("beta_tilde", prob(r.beta_tilde)),
        ("z_eq", opt_prob(r.z_eq)),
        ("z_neq", opt_prob(r.z_neq)),
    ]
}

fn key_value_table(fields: Vec<(&str, String)>, format: OutputFormat) -> String {
    let mut table = Table::new(["field", "value"]);
    for (k, v) in fields {
        table.push(vec![k.to_string(), v]);
    }
    table.render(format)
}

pub fn cmd_analyze(a: &PairArgs) -> Result<String> {
    let cfg = a.pattern.config()?;
    let (x, y, dropped) = a.input.load()?;
    let report = analyze_pair(&x, &y, &cfg)?;
    if a.pattern.format == OutputFormat::Json {
        return json(&AnalyzeOutput {
            mode: cfg.scheme,
            dropped_x: dropped.a,
            dropped_y: dropped.b,
            report: &report,
        });
    }
    let mut fields = vec![("mode", cfg.scheme.to_string())];
    fields.extend(report_fields(&report));
    fields.push(("dropped_x", dropped.a.to_string()));
    fields.push(("dropped_y", dropped.b.to_string()));
    Ok(key_value_table(fields, a.pattern.format))
}

#[derive(Serialize)]
struct DelayOutput<'a> {
    mode: WindowScheme,
    dropped_x: usize,
    dropped_y: usize,
    delays: &'a [DelayReport],
}

pub fn cmd_delay(a: &DelayArgs) -> Result<String> {
    let cfg = a.pattern.config()?;
    if a.from_delay > a.to_delay {
        return Err(Error::InvalidParameter(format!(
            "from-delay {} exceeds to-delay {}",
            a.from_delay, a.to_delay
        )));
    }
    let (x, y, dropped) = a.input.load()?;
    let scan = delay_scan(&x, &y, &cfg, a.from_delay..=a.to_delay)?;
    if a.pattern.format == OutputFormat::Json {
        return json(&DelayOutput {
            mode: cfg.scheme,
            dropped_x: dropped.a,
            dropped_y: dropped.b,
            delays: &scan,
        });
    }
    let mut table = Table::new([
        "delay",
        "n_windows",
        "n_coincident",
        "n_reflected",
        "p_eq",
        "p_neq",
        "alpha_tilde",
        "beta_tilde",
    ]);
    for d in &scan {
        let r = &d.report;
        table.push(vec![
            d.delay.to_string(),
            r.n_windows.to_string(),
            r.n_coincident.to_string(),
            r.n_reflected.to_string(),
            prob(r.p_eq),
            prob(r.p_neq),
            prob(r.alpha_tilde),
            prob(r.beta_tilde),
        ]);
    }
    Ok(table.render(a.pattern.format))
}

pub fn cmd_rolling(a: &RollingArgs) -> Result<String> {
    let cfg = a.pattern.config()?;
    let watch: Vec<OrdinalPattern> = if a.watch.is_empty() {
        if cfg.order == 3 {
            default_watch_list()
        } else {
            Vec::new()
        }
    } else {
        a.watch.iter().map(|s| s.parse()).collect::<Result<_>>()?
    };
    let (x, y, _) = a.input.load()?;
    let step = a.step.unwrap_or(a.window);
    let rolling: RollingReport = rolling_analysis(&x, &y, &cfg, a.window, step, &watch)?;
    if a.pattern.format == OutputFormat::Json {
        return json(&rolling);
    }
    let mut header: Vec<String> = [
        "from",
        "to",
        "n_windows",
        "n_coincident",
        "n_reflected",
        "alpha_tilde",
        "beta_tilde",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for p in &watch {
        header.push(format!("{p} {}", x.name()));
        header.push(format!("{p} {}", y.name()));
    }
    let mut table = Table::new(header);
    for w in &rolling.windows {
        let r = &w.report;
        let mut row = vec![
            w.start_key.clone(),
            w.end_key.clone(),
            r.n_windows.to_string(),
            r.n_coincident.to_string(),
            r.n_reflected.to_string(),
            prob(r.alpha_tilde),
            prob(r.beta_tilde),
        ];
        for c in &w.watch {
            row.push(c.x.to_string());
            row.push(c.y.to_string());
        }
        table.push(row);
    }
    Ok(table.render(a.pattern.format))
}

fn summary(fields: Vec<(&str, String)>, format: OutputFormat) -> Result<String> {
    if format == OutputFormat::Json {
        let map: serde_json::Map<String, serde_json::Value> = fields
            .into_iter()
            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v)))
            .collect();
        return json(&map);
    }
    Ok(key_value_table(fields, format))
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<String> {
    let (x, y) = match a.kind {
        SimKind::Walk => gaussian_walk_pair(a.n, a.seed)?,
        SimKind::Iid => gaussian_iid_pair(a.n, a.seed)?,
        SimKind::Ar1 => correlated_ar1_pair(&Ar1Config {
            n: a.n,
            phi: a.phi,
            rho: a.rho,
            seed: a.seed,
        })?,
    };
    write_csv(&x, &a.out_x, &a.key, &a.value)?;
    write_csv(&y, &a.out_y, &a.key, &a.value)?;
    let kind = match a.kind {
        SimKind::Walk => "walk",
        SimKind::Ar1 => "ar1",
        SimKind::Iid => "iid",
    };
    let mut fields = vec![("kind", kind.to_string()), ("n", a.n.to_string())];
    if a.kind == SimKind::Ar1 {
        fields.push(("phi", a.phi.to_string()));
        fields.push(("rho", a.rho.to_string()));
    }
    fields.push(("seed", a.seed.to_string()));
    fields.push(("out_x", a.out_x.display().to_string()));
    fields.push(("out_y", a.out_y.display().to_string()));
    summary(fields, a.format)
}

fn reflected_after(x: &TimeSeries, y: &TimeSeries, h: usize) -> String {
    analyze_pair(x, y, &PatternConfig::sliding(h))
        .map(|r| r.n_reflected.to_string())
        .unwrap_or_else(|_| "NA".to_string())
}

fn corr_cell(x: &TimeSeries, y: &TimeSeries) -> String {
    increment_correlation(x, y)
        .map(prob)
        .unwrap_or_else(|_| "NA".to_string())
}

pub fn cmd_inject(a: &InjectArgs) -> Result<String> {
    let (x, y, _) = a.input.load()?;
    let cfg = OutlierConfig {
        k: a.k,
        magnitude: a.magnitude,
        seed: a.seed,
    };
    let (xo, yo) = inject_outliers(&x, &y, &cfg)?;
    write_csv(&xo, &a.out_x, &a.input.key, a.input.x_column())?;
    write_csv(&yo, &a.out_y, &a.input.key, a.input.y_column())?;
    let mut fields = vec![
        ("k", a.k.to_string()),
        ("magnitude", a.magnitude.to_string()),
        ("seed", a.seed.to_string()),
        ("corr_before", corr_cell(&x, &y)),
        ("corr_after", corr_cell(&xo, &yo)),
    ];
    fields.push(("reflected_h2", reflected_after(&xo, &yo, 2)));
    fields.push(("reflected_h3", reflected_after(&xo, &yo, 3)));
    summary(fields, a.format)
}
