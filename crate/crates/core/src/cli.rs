//! Command-line front end. Every report is human text followed by a
//! `key=value;` block.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_rational::Rational64;

use crate::blocking::{
    detect_spreading, search_blocking_capped, strip_width, verify_blocking_capped, BlockingKind, DEFAULT_CONE_CAP,
};
use crate::classify::{classify, ClassifyParams};
use crate::curve::{parse_rational, Curve};
use crate::error::Error;
use crate::language::{find_orphan, generic_limit_sample, limit_language_approx, nilpotency_probe, NilpotencyProbe};
use crate::measure::{mu_limit_probe, BernoulliMeasure};
use crate::render::{render_spacetime, ImageFormat, Palette};
use crate::rule::{directional_orbit, parse_rule, LocalRule};
use crate::symbolic::PeriodicConfig;
use crate::zoo;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dirdyn", version, about = "Directional dynamics of one-dimensional cellular automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct RuleArg {
    /// Rule file path or `zoo:NAME`.
    #[arg(long)]
    rule: String,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[command(flatten)]
    rule: RuleArg,
    /// Period word of the initial configuration.
    #[arg(long)]
    init: String,
    /// Cell index at which the period word starts.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    phase: i64,
    /// Curve: `p/q`, an integer, or `tab:d0,d1,...`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    direction: String,
    #[arg(long, default_value_t = 10)]
    steps: u64,
    #[arg(long, default_value_t = 10)]
    half_window: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Directional orbit of a periodic configuration, as text or an image.
    Simulate {
        #[command(flatten)]
        orbit: OrbitArgs,
        /// Also write the space-time diagram to this path.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "pgm")]
        format: String,
    },
    /// Write a space-time diagram as PGM or PPM.
    Render {
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value = "pgm")]
        format: String,
    },
    /// Verify a blocking word, or search all words up to a length.
    Blocking {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        direction: String,
        /// Word to verify; omit together with `--search`.
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        offset: i64,
        /// Search every word of length at most `--max-len`.
        #[arg(long)]
        search: bool,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[arg(long, default_value_t = 30)]
        horizon: u64,
        #[arg(long, default_value_t = DEFAULT_CONE_CAP)]
        cone_cap: usize,
    },
    /// Spreading states, read off the table.
    Spreading {
        #[command(flatten)]
        rule: RuleArg,
    },
    /// Exact surjectivity with a shortest orphan when there is one.
    Surjective {
        #[command(flatten)]
        rule: RuleArg,
    },
    /// Whether `F^t` is constant for some `t` up to the horizon.
    Nilpotent {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long, default_value_t = 30)]
        horizon: u64,
    },
    /// Words of length ℓ in the image of `F^t`.
    LimitLanguage {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long, default_value_t = 6)]
        time: u64,
        #[arg(long, default_value_t = 5)]
        length: usize,
    },
    /// Windows seen along a direction on random configurations.
    GenericSample {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        direction: String,
        /// `uniform` or comma-separated weights in alphabet order.
        #[arg(long, default_value = "uniform")]
        measure: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// First observed time; defaults to `--time`.
        #[arg(long)]
        t_min: Option<u64>,
        #[arg(long, default_value_t = 60)]
        time: u64,
        #[arg(long, default_value_t = 5)]
        window: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact probabilities of every word of length ℓ at each time.
    MuLimit {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long, default_value = "uniform")]
        measure: String,
        #[arg(long, default_value_t = 1)]
        length: usize,
        #[arg(long, default_value_t = 10)]
        horizon: u64,
    },
    /// Directional class with its evidence.
    Classify {
        #[command(flatten)]
        rule: RuleArg,
        /// Comma-separated slopes; defaults to quarters over the cone.
        #[arg(long, allow_hyphen_values = true)]
        slopes: Option<String>,
        #[arg(long, default_value_t = 2)]
        word_len: usize,
        #[arg(long, default_value_t = 30)]
        horizon: u64,
        #[arg(long, default_value = "uniform")]
        measure: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 60)]
        time: u64,
        #[arg(long, default_value_t = 5)]
        window: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Built-in example rules.
    Zoo {
        #[arg(long)]
        list: bool,
        /// Print the rule file of an entry.
        #[arg(long)]
        dump: Option<String>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TableTooLarge { .. } | Error::ConeTooWide { .. } => Failure::Cap(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = std::result::Result<Vec<u8>, Failure>;

/// Parameter header, body, then the `key=value;` block.
struct Report {
    text: String,
}

impl Report {
    fn new(command: &str, params: &[(&str, String)]) -> Self {
        let mut text = format!("# dirdyn {command}\n");
        for (k, v) in params {
            let _ = writeln!(text, "# {k}: {v}");
        }
        Report { text }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn kv(&mut self, k: &str, v: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{k}={v};");
    }

    fn done(self) -> Outcome {
        Ok(self.text.into_bytes())
    }
}

fn load_rule(source: &str) -> std::result::Result<LocalRule, Failure> {
    if source.starts_with("zoo:") {
        return Ok(zoo::resolve(source)?.rule);
    }
    let text = std::fs::read_to_string(source).map_err(|e| Failure::Usage(format!("cannot read `{source}`: {e}")))?;
    Ok(parse_rule(&text)?)
}

fn parse_format(s: &str) -> std::result::Result<ImageFormat, Failure> {
    Ok(s.parse::<ImageFormat>()?)
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> std::result::Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| Failure::Usage(format!("cannot write `{}`: {e}", path.display())))
}

fn orbit_params(o: &OrbitArgs) -> Vec<(&'static str, String)> {
    vec![
        ("rule", o.rule.rule.clone()),
        ("init", o.init.clone()),
        ("phase", o.phase.to_string()),
        ("direction", o.direction.clone()),
        ("steps", o.steps.to_string()),
        ("half-window", o.half_window.to_string()),
    ]
}

fn trace_of(o: &OrbitArgs) -> std::result::Result<crate::rule::OrbitTrace, Failure> {
    let rule = load_rule(&o.rule.rule)?;
    let curve: Curve = o.direction.parse()?;
    let letters = rule.alphabet().parse_letters(&o.init)?;
    let x = PeriodicConfig::new(rule.alphabet().clone(), letters, o.phase)?;
    Ok(directional_orbit(&rule, &curve, &x, o.steps, o.half_window)?)
}

fn simulate(orbit: &OrbitArgs, output: Option<&PathBuf>, format: &str) -> Outcome {
    let mut params = orbit_params(orbit);
    params.push(("format", format.to_string()));
    let trace = trace_of(orbit)?;
    let mut r = Report::new("simulate", &params);
    r.text.push_str(&trace.to_text());
    if let Some(path) = output {
        let bytes = render_spacetime(&trace, &Palette::default_for(trace.rule.alphabet()), parse_format(format)?)?;
        write_file(path, &bytes)?;
        r.kv("output", path.display());
    }
    r.kv("width", trace.width());
    r.kv("height", trace.rows.len());
    r.done()
}

fn render(orbit: &OrbitArgs, output: &PathBuf, format: &str) -> Outcome {
    let mut params = orbit_params(orbit);
    params.push(("format", format.to_string()));
    let trace = trace_of(orbit)?;
    let bytes = render_spacetime(&trace, &Palette::default_for(trace.rule.alphabet()), parse_format(format)?)?;
    write_file(output, &bytes)?;
    let mut r = Report::new("render", &params);
    r.line(format!("wrote {} bytes to {}", bytes.len(), output.display()));
    r.kv("output", output.display());
    r.kv("width", trace.width());
    r.kv("height", trace.rows.len());
    r.kv("bytes", bytes.len());
    r.done()
}

#[allow(clippy::too_many_arguments)]
fn blocking(
    source: &str,
    direction: &str,
    word: Option<&str>,
    offset: i64,
    search: bool,
    max_len: usize,
    horizon: u64,
    cone_cap: usize,
) -> Outcome {
    let rule = load_rule(source)?;
    let curve: Curve = direction.parse()?;
    let a = rule.alphabet();
    let strip = strip_width(&rule, &curve);
    match (word, search) {
        (Some(w), false) => {
            let u = a.parse_word(w)?;
            let v = verify_blocking_capped(&rule, &curve, &u, offset, horizon, cone_cap)?;
            let mut r = Report::new(
                "blocking",
                &[
                    ("rule", source.to_string()),
                    ("direction", curve.to_string()),
                    ("word", w.to_string()),
                    ("offset", offset.to_string()),
                    ("horizon", horizon.to_string()),
                    ("cone-cap", cone_cap.to_string()),
                ],
            );
            r.line(format!("strip width: {}", v.strip));
            let kind = match &v.kind {
                BlockingKind::StrongBlocking => {
                    r.line("strongly blocking; strip colors by time:");
                    for (t, c) in v.colors.iter().enumerate() {
                        r.line(format!("  {t}\t{}", a.format_letters(c)));
                    }
                    "StrongBlocking"
                }
                BlockingKind::NotBlocking(w) => {
                    r.line(format!("not blocking: at time {} cell {} two fillings differ", w.time, w.cell));
                    r.line(format!("  first  at {}: {}", w.window_start, a.format_letters(&w.first)));
                    r.line(format!("  second at {}: {}", w.window_start, a.format_letters(&w.second)));
                    "NotBlocking"
                }
            };
            let strong = v.is_strong();
            let side = |b: Option<bool>| match b {
                _ if strong => "true".to_string(),
                Some(b) => b.to_string(),
                None => "undecided".to_string(),
            };
            r.kv("kind", kind);
            r.kv("strip", v.strip);
            r.kv("left_blocking", side(v.left_blocking));
            r.kv("right_blocking", side(v.right_blocking));
            r.done()
        }
        (None, true) => {
            let hits = search_blocking_capped(&rule, &curve, max_len, horizon, cone_cap)?;
            let mut r = Report::new(
                "blocking",
                &[
                    ("rule", source.to_string()),
                    ("direction", curve.to_string()),
                    ("max-len", max_len.to_string()),
                    ("horizon", horizon.to_string()),
                    ("cone-cap", cone_cap.to_string()),
                ],
            );
            r.line(format!("strip width: {strip}"));
            for (w, s) in &hits {
                r.line(format!("{w}\t{s}"));
            }
            r.kv("found", hits.len());
            r.done()
        }
        _ => Err(Failure::Usage("give exactly one of `--word` or `--search`".into())),
    }
}

fn symbols(rule: &LocalRule, set: impl IntoIterator<Item = u8>, sep: &str) -> String {
    let v: Vec<&str> = set.into_iter().map(|s| rule.alphabet().symbol(s)).collect();
    if v.is_empty() {
        "none".into()
    } else {
        v.join(sep)
    }
}

fn spreading(source: &str) -> Outcome {
    let rule = load_rule(source)?;
    let set = detect_spreading(&rule);
    let mut r = Report::new("spreading", &[("rule", source.to_string())]);
    r.line(format!("spreading states: {}", symbols(&rule, set.iter().copied(), " ")));
    r.kv("spreading", symbols(&rule, set.iter().copied(), ","));
    r.done()
}

fn surjective(source: &str) -> Outcome {
    let rule = load_rule(source)?;
    let orphan = find_orphan(&rule);
    let mut r = Report::new("surjective", &[("rule", source.to_string())]);
    match &orphan {
        Some(w) => r.line(format!("not surjective: `{w}` has no preimage")),
        None => r.line("surjective: every word has a preimage"),
    }
    r.kv("surjective", orphan.is_none());
    r.kv("orphan", orphan.map_or("none".to_string(), |w| w.to_string()));
    r.done()
}

fn nilpotent(source: &str, horizon: u64) -> Outcome {
    let rule = load_rule(source)?;
    let probe = nilpotency_probe(&rule, horizon)?;
    let mut r = Report::new(
        "nilpotent",
        &[("rule", source.to_string()), ("horizon", horizon.to_string())],
    );
    match probe {
        NilpotencyProbe::NilpotentAt { time, symbol } => {
            r.line(format!("F^{time} is constant onto {}", rule.alphabet().symbol(symbol)));
            r.kv("nilpotent", true);
            r.kv("time", time);
        }
        NilpotencyProbe::NotNilpotentYet { note } => {
            r.line(format!("no constant iterate up to t={horizon}"));
            r.kv("nilpotent", false);
            r.kv("note", format!("{note:?}"));
        }
    }
    r.done()
}

fn limit_language(source: &str, time: u64, length: usize) -> Outcome {
    let rule = load_rule(source)?;
    let approx = limit_language_approx(&rule, time, length)?;
    let mut r = Report::new(
        "limit-language",
        &[
            ("rule", source.to_string()),
            ("time", time.to_string()),
            ("length", length.to_string()),
        ],
    );
    for w in approx.language.formatted() {
        r.line(w);
    }
    r.kv("words", approx.language.len());
    r.kv("stabilized", approx.stabilized);
    r.done()
}

#[allow(clippy::too_many_arguments)]
fn generic_sample(
    source: &str,
    direction: &str,
    measure: &str,
    samples: usize,
    t_min: Option<u64>,
    time: u64,
    window: usize,
    seed: u64,
) -> Outcome {
    let rule = load_rule(source)?;
    let curve: Curve = direction.parse()?;
    let mu = BernoulliMeasure::parse(rule.alphabet().clone(), measure)?;
    let t_min = t_min.unwrap_or(time);
    let s = generic_limit_sample(&rule, &curve, &mu, samples, t_min, time, window, seed)?;
    let mut r = Report::new(
        "generic-sample",
        &[
            ("rule", source.to_string()),
            ("direction", curve.to_string()),
            ("measure", mu.to_string()),
            ("samples", samples.to_string()),
            ("t-min", t_min.to_string()),
            ("time", time.to_string()),
            ("window", window.to_string()),
            ("seed", seed.to_string()),
        ],
    );
    r.text.push_str(&s.dump());
    r.kv("seed", seed);
    r.kv("observations", s.total());
    r.kv("distinct", s.histogram.len());
    r.kv("monochrome", s.monochrome_count());
    r.done()
}

fn mu_limit(source: &str, measure: &str, length: usize, horizon: u64) -> Outcome {
    let rule = load_rule(source)?;
    let mu = BernoulliMeasure::parse(rule.alphabet().clone(), measure)?;
    let table = mu_limit_probe(&rule, &mu, length, horizon)?;
    let mut r = Report::new(
        "mu-limit",
        &[
            ("rule", source.to_string()),
            ("measure", mu.to_string()),
            ("length", length.to_string()),
            ("horizon", horizon.to_string()),
        ],
    );
    r.text.push_str(&table.to_tsv());
    r.kv("rows", table.rows.len());
    r.done()
}

#[allow(clippy::too_many_arguments)]
fn classify_cmd(
    source: &str,
    slopes: Option<&str>,
    word_len: usize,
    horizon: u64,
    measure: &str,
    samples: usize,
    time: u64,
    window: usize,
    seed: u64,
) -> Outcome {
    let rule = load_rule(source)?;
    let mut params = ClassifyParams::defaults_for(&rule);
    if let Some(text) = slopes {
        params.slope_grid = text
            .split(',')
            .map(|s| parse_rational(s.trim()))
            .collect::<crate::Result<Vec<Rational64>>>()?;
    }
    params.word_len = word_len;
    params.horizon = horizon;
    params.sampling.measure = Some(BernoulliMeasure::parse(rule.alphabet().clone(), measure)?);
    params.sampling.samples = samples;
    params.sampling.time = time;
    params.sampling.window = window;
    params.sampling.seed = seed;
    let grid: Vec<String> = params.slope_grid.iter().map(|s| s.to_string()).collect();
    let report = classify(&rule, source, &params)?;
    let mut r = Report::new(
        "classify",
        &[
            ("rule", source.to_string()),
            ("slopes", grid.join(",")),
            ("word-len", word_len.to_string()),
            ("horizon", horizon.to_string()),
            ("measure", measure.to_string()),
            ("samples", samples.to_string()),
            ("time", time.to_string()),
            ("window", window.to_string()),
            ("seed", seed.to_string()),
        ],
    );
    r.text.push_str(&report.render());
    r.kv("seed", seed);
    r.done()
}

fn zoo_cmd(list: bool, dump: Option<&str>) -> Outcome {
    match (list, dump) {
        (true, None) => {
            let mut out = String::new();
            for name in zoo::NAMES {
                let e = zoo::builtin(name)?;
                let _ = writeln!(out, "{name}\t{}\t{}", e.expected.verdict, e.notes);
            }
            Ok(out.into_bytes())
        }
        (false, Some(name)) => {
            let e = zoo::resolve(name)?;
            Ok(e.rule.to_rule_text().into_bytes())
        }
        _ => Err(Failure::Usage("give exactly one of `--list` or `--dump NAME`".into())),
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Simulate { orbit, output, format } => simulate(&orbit, output.as_ref(), &format),
        Command::Render { orbit, output, format } => render(&orbit, &output, &format),
        Command::Blocking {
            rule,
            direction,
            word,
            offset,
            search,
            max_len,
            horizon,
            cone_cap,
        } => blocking(&rule.rule, &direction, word.as_deref(), offset, search, max_len, horizon, cone_cap),
        Command::Spreading { rule } => spreading(&rule.rule),
        Command::Surjective { rule } => surjective(&rule.rule),
        Command::Nilpotent { rule, horizon } => nilpotent(&rule.rule, horizon),
        Command::LimitLanguage { rule, time, length } => limit_language(&rule.rule, time, length),
        Command::GenericSample {
            rule,
            direction,
            measure,
            samples,
            t_min,
            time,
            window,
            seed,
        } => generic_sample(&rule.rule, &direction, &measure, samples, t_min, time, window, seed),
        Command::MuLimit {
            rule,
            measure,
            length,
            horizon,
        } => mu_limit(&rule.rule, &measure, length, horizon),
        Command::Classify {
            rule,
            slopes,
            word_len,
            horizon,
            measure,
            samples,
            time,
            window,
            seed,
        } => classify_cmd(
            &rule.rule,
            slopes.as_deref(),
            word_len,
            horizon,
            &measure,
            samples,
            time,
            window,
            seed,
        ),
        Command::Zoo { list, dump } => zoo_cmd(list, dump.as_deref()),
    }
}

/// Parses `argv` (program name first), writes the report to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
                return EXIT_OK;
            }
            let _ = err.write_all(text.as_bytes());
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command) {
        Ok(bytes) => {
            let _ = out.write_all(&bytes);
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Cap(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_CAP
        }
    }
}
