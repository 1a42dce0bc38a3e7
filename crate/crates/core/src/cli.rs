//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cyclotomic::QContext;
use crate::error::{Error, Result};
use crate::identities::order_seven_identities;
use crate::numeric::{format_real, BigComplex, Tolerance, DEFAULT_PRECISION};
use crate::polytab::{reference_table, root_assignment, th_polynomial, verify_t_root};
use crate::sixj::{SixJ, SqrtBranch};
use crate::statesum::{parse_triangulation, state_sum, ColourFilter, Normalization, StateSumOptions};
use crate::systems::{
    build_tv, epsilon_system, export_system, gamma_system, homologically_trivial, verify_relation, EpsilonBranch,
    RelationPattern, SixJSystem,
};

#[derive(Parser, Debug)]
#[command(name = "tvkit", version, about = "Quantum 6j-symbols and Turaev–Viro type invariants")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Order r of the invariant.
    #[arg(short = 'r', long = "order", global = true, default_value_t = 7)]
    pub r: i64,
    /// Root selector: q = exp(iπm/r).
    #[arg(short = 'm', long = "root", global = true, default_value_t = 1)]
    pub m: i64,
    /// Decimal digits carried by numeric values.
    #[arg(long, global = true, env = "TVKIT_PRECISION", default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    /// Comparison tolerance, e.g. 1e-50 (default 10^-(precision/2)).
    #[arg(long, global = true)]
    pub tolerance: Option<String>,
    /// Index pattern of the defining relation.
    #[arg(long, global = true, value_enum, default_value_t = PatternArg::Book)]
    pub pattern: PatternArg,
    /// State-sum normalization.
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::Default)]
    pub convention: ConventionArg,
    /// System: tv:R, th:R, epsilon, epsilon:neg, gamma:K or trivial.
    #[arg(long, global = true, default_value = "gamma:1")]
    pub system: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PatternArg {
    Printed,
    Book,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConventionArg {
    /// N = Σ w_i², edge weights to the first power.
    Default,
    /// N = Σ w_i.
    #[value(name = "alt-N")]
    AltN,
    /// Edge weights squared.
    EdgeSquared,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    JsonLines,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one 6j-symbol ⟨i j k | l m n⟩ of TV_r.
    Sixj {
        #[arg(num_args = 6, value_names = ["I", "J", "K", "L", "M", "N"])]
        colours: Vec<u32>,
    },
    /// Run exact identity checks and relation sweeps.
    Verify {
        /// Quantum-integer identities at r = 7.
        #[arg(long)]
        identities: bool,
        /// T([3]) = 0 for the configured root.
        #[arg(long)]
        t_root: bool,
        /// Sweep the defining relation for a system (same syntax as --system).
        #[arg(long, value_name = "SYSTEM")]
        relation: Option<String>,
    },
    /// State sum of the selected system on a .tri triangulation.
    Statesum {
        file: PathBuf,
        /// Restrict to even colours.
        #[arg(long)]
        even: bool,
        /// Flip every square-root branch.
        #[arg(long)]
        flip_roots: bool,
        /// Maximum number of partial colourings.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u64,
    },
    /// Polynomials whose roots are the values of [3]_r.
    Polytable {
        #[arg(long, default_value_t = 11)]
        max_order: u32,
    },
    /// Which root of x³ - 2x² - x + 1 each q gives as [3]_7.
    Roots,
    /// Write the selected system as JSON.
    Export {
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
}

impl RunConfig {
    fn tolerance(&self) -> Result<Tolerance> {
        match &self.tolerance {
            Some(t) => Tolerance::parse(t, crate::numeric::bits_for_digits(self.precision)),
            None => Ok(Tolerance::for_precision(self.precision)),
        }
    }

    fn pattern(&self) -> RelationPattern {
        match self.pattern {
            PatternArg::Printed => RelationPattern::Printed,
            PatternArg::Book => RelationPattern::Book,
        }
    }

    fn context(&self) -> Result<QContext> {
        QContext::new(self.r, self.m, self.precision)
    }
}

/// Builds a system from `tv:R`, `th:R`, `epsilon`, `epsilon:neg`, `gamma:K` or `trivial`.
pub fn parse_system(name: &str, m: i64, precision: u32) -> Result<SixJSystem> {
    let (kind, arg) = match name.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (name, None),
    };
    let number = |a: Option<&str>| -> Result<i64> {
        a.and_then(|x| x.parse().ok())
            .ok_or_else(|| Error::InvalidArgument(format!("system `{name}` needs a numeric argument")))
    };
    match kind {
        "tv" => Ok(build_tv(&QContext::new(number(arg)?, m, precision)?)),
        "th" => homologically_trivial(&build_tv(&QContext::new(number(arg)?, m, precision)?)),
        "epsilon" => match arg {
            None | Some("pos") => epsilon_system(EpsilonBranch::Positive, precision),
            Some("neg") => epsilon_system(EpsilonBranch::Negative, precision),
            Some(other) => Err(Error::InvalidArgument(format!("unknown epsilon branch `{other}`"))),
        },
        "gamma" => gamma_system(number(arg)? as u32, precision),
        "trivial" => Ok(SixJSystem::trivial(precision)),
        _ => Err(Error::InvalidArgument(format!("unknown system `{name}`"))),
    }
}

fn complex_json(v: &BigComplex, digits: usize) -> serde_json::Value {
    let (re, im) = v.to_decimal_strings(digits);
    json!({ "re": re, "im": im })
}

fn complex_text(v: &BigComplex, digits: usize) -> String {
    let (re, im) = v.to_decimal_strings(digits);
    format!("{re} + {im}i")
}

/// Digits shown in text output.
const SHOWN: usize = 30;

/// Runs one parsed invocation; returns whether every requested check passed.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let cfg = &cli.config;
    if let Some(k) = cfg.threads {
        // a pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
    let json = cfg.format == Format::JsonLines;
    match &cli.command {
        Command::Sixj { colours } => cmd_sixj(cfg, colours, json, out),
        Command::Verify { identities, t_root, relation } => {
            let all = !identities && !t_root && relation.is_none();
            cmd_verify(cfg, *identities || all, *t_root || all, relation.as_deref(), json, out)
        }
        Command::Statesum { file, even, flip_roots, budget } => {
            cmd_statesum(cfg, file, *even, *flip_roots, *budget, json, out)
        }
        Command::Polytable { max_order } => cmd_polytable(*max_order, json, out),
        Command::Roots => cmd_roots(cfg, json, out),
        Command::Export { output } => {
            let sys = parse_system(&cfg.system, cfg.m, cfg.precision)?;
            let text = export_system(&sys)?;
            match output {
                Some(path) => std::fs::write(path, text + "\n")?,
                None => writeln!(out, "{text}")?,
            }
            Ok(true)
        }
    }
}

fn cmd_sixj(cfg: &RunConfig, colours: &[u32], json: bool, out: &mut dyn Write) -> Result<bool> {
    let ctx = cfg.context()?;
    let eval = SixJ::new(&ctx);
    let key: [u32; 6] = colours.try_into().map_err(|_| Error::InvalidArgument("sixj needs six colours".into()))?;
    let value = eval.sixj(&key)?;
    let numeric = value.embed(&ctx, SqrtBranch::Principal)?;
    let bad = eval.inadmissible_face(&key);
    let square = value.squared_exact();
    let radicand: Vec<String> = value.radical_indices().iter().map(|n| format!("[{n}]")).collect();
    if json {
        let line = json!({
            "key": key,
            "r": ctx.r(),
            "m": ctx.m(),
            "zero": value.is_zero(),
            "inadmissible": bad.map(|t| [t.x, t.y, t.z]),
            "phase": value.phase().to_string(),
            "radicand": radicand,
            "radicand_exact": value.radicand().to_string(),
            "factor": value.factor().to_string(),
            "square": square.to_string(),
            "value": complex_json(&numeric, ctx.precision() as usize),
        });
        writeln!(out, "{line}")?;
        return Ok(true);
    }
    let [i, j, k, l, m, n] = key;
    writeln!(out, "⟨{i} {j} {k} | {l} {m} {n}⟩  r = {}, m = {}", ctx.r(), ctx.m())?;
    if value.is_zero() {
        match bad {
            Some(t) => writeln!(out, "value: 0 (inadmissible triple {t})")?,
            None => writeln!(out, "value: 0")?,
        }
        return Ok(true);
    }
    let shown = if radicand.is_empty() { "1".to_string() } else { radicand.join("·") };
    writeln!(out, "phase:    {}", value.phase())?;
    writeln!(out, "radicand: {shown} = {}", value.radicand())?;
    writeln!(out, "factor:   {}", value.factor())?;
    writeln!(out, "square:   {square}")?;
    writeln!(out, "value:    {}", complex_text(&numeric, SHOWN))?;
    Ok(true)
}

fn cmd_verify(
    cfg: &RunConfig,
    identities: bool,
    t_root: bool,
    relation: Option<&str>,
    json: bool,
    out: &mut dyn Write,
) -> Result<bool> {
    let mut ok = true;
    if identities {
        let ctx = cfg.context()?;
        for c in order_seven_identities(&ctx)? {
            ok &= c.holds();
            if json {
                writeln!(out, "{}", json!({"check": "identity", "name": c.name, "m": ctx.m(), "exact": c.holds()}))?;
            } else {
                let verdict = if c.holds() { "holds exactly" } else { "FAILS" };
                writeln!(out, "{:<22} m = {:<2} {verdict}", c.name, ctx.m())?;
            }
        }
    }
    if t_root {
        let zero = verify_t_root(cfg.m).is_ok();
        ok &= zero;
        if json {
            writeln!(out, "{}", json!({"check": "t_root", "m": cfg.m, "exact_zero": zero}))?;
        } else {
            writeln!(out, "T([3]_7) for m = {}: {}", cfg.m, if zero { "exact zero" } else { "NONZERO" })?;
        }
    }
    if let Some(name) = relation {
        let sys = parse_system(name, cfg.m, cfg.precision)?;
        let tol = cfg.tolerance()?;
        let report = verify_relation(&sys, &tol, cfg.pattern());
        ok &= report.passed();
        let residual = format_real(&report.max_residual, 6);
        if json {
            let line = json!({
                "check": "relation",
                "system": sys.label(),
                "pattern": report.pattern.to_string(),
                "tuples": report.total,
                "max_residual": residual,
                "worst_tuple": report.worst_tuple,
                "failures": report.failures.len(),
                "tolerance": tol.to_string(),
                "passed": report.passed(),
            });
            writeln!(out, "{line}")?;
        } else {
            writeln!(
                out,
                "relation ({} pattern) for {}: {} tuples, max residual {residual} at {:?}, {} failures (tolerance {tol}): {}",
                report.pattern,
                sys.label(),
                report.total,
                report.worst_tuple,
                report.failures.len(),
                if report.passed() { "pass" } else { "FAIL" }
            )?;
        }
    }
    Ok(ok)
}

fn cmd_statesum(
    cfg: &RunConfig,
    file: &PathBuf,
    even: bool,
    flip: bool,
    budget: u64,
    json: bool,
    out: &mut dyn Write,
) -> Result<bool> {
    let text = std::fs::read_to_string(file)?;
    let tri = parse_triangulation(&text)?;
    let mut sys = parse_system(&cfg.system, cfg.m, cfg.precision)?;
    if flip {
        sys = sys.with_sqrt_branch(SqrtBranch::Flipped);
    }
    let (normalization, edge_exponent) = match cfg.convention {
        ConventionArg::Default => (Normalization::SumOfSquares, 1),
        ConventionArg::AltN => (Normalization::SumOfWeights, 1),
        ConventionArg::EdgeSquared => (Normalization::SumOfSquares, 2),
    };
    let options = StateSumOptions {
        normalization,
        edge_exponent,
        filter: if even { ColourFilter::Even } else { ColourFilter::All },
        budget,
        threads: cfg.threads,
    };
    let s = state_sum(&tri, &sys, &options)?;
    if json {
        let line = json!({
            "file": file.display().to_string(),
            "system": sys.label(),
            "tets": tri.tet_count(),
            "vertices": s.vertex_count,
            "edges": s.edge_count,
            "colourings": s.colourings,
            "value": complex_json(&s.value, cfg.precision as usize),
        });
        writeln!(out, "{line}")?;
    } else {
        writeln!(
            out,
            "{}: {} tetrahedra, {} vertices, {} edges",
            file.display(),
            tri.tet_count(),
            s.vertex_count,
            s.edge_count
        )?;
        writeln!(out, "system {}, {} contributing colourings", sys.label(), s.colourings)?;
        writeln!(out, "value: {}", complex_text(&s.value, SHOWN))?;
    }
    Ok(true)
}

fn cmd_polytable(max_order: u32, json: bool, out: &mut dyn Write) -> Result<bool> {
    if max_order < 3 {
        return Err(Error::InvalidArgument("max order must be at least 3".into()));
    }
    let reference = reference_table();
    let mut ok = true;
    for order in 3..=max_order {
        let r = 2 * order - 1;
        let p = th_polynomial(r)?;
        let expected = reference.iter().find(|(o, _)| *o == order).map(|(_, q)| q);
        let matches = expected.map(|q| *q == p);
        ok &= matches != Some(false);
        if json {
            let coeffs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
            writeln!(out, "{}", json!({"order": order, "r": r, "coeffs": coeffs, "matches_table": matches}))?;
        } else {
            let mark = match matches {
                Some(true) => "matches table",
                Some(false) => "DIFFERS from table",
                None => "",
            };
            writeln!(out, "{order:>3}  {p:<70} {mark}")?;
        }
    }
    Ok(ok)
}

fn cmd_roots(cfg: &RunConfig, json: bool, out: &mut dyn Write) -> Result<bool> {
    if cfg.r != 7 {
        return Err(Error::InvalidArgument("roots is defined for r = 7".into()));
    }
    let rows = root_assignment(cfg.precision)?;
    for (m, k) in &rows {
        let ctx = QContext::new(7, *m as i64, cfg.precision)?;
        let v = ctx.embed(&ctx.qint(3));
        let angle = 180.0 * *m as f64 / 7.0;
        if json {
            writeln!(out, "{}", json!({"m": m, "angle_deg": angle, "q3": format_real(v.re(), 20), "gamma": k}))?;
        } else {
            writeln!(out, "m = {m:>2}  arg q = {angle:>7.2}°  [3] = {}  γ{k}", format_real(v.re(), 12))?;
        }
    }
    Ok(true)
}

/// Parses `args`, runs, and maps the outcome to an exit status.
pub fn run<I, T>(args: I) -> std::process::ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return std::process::ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(true) => std::process::ExitCode::SUCCESS,
        Ok(false) => std::process::ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(2)
        }
    }
}
