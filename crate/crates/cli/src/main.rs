mod format;

use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heartglue::scenarios;
use heartglue::slicing::{
    f_compatibility_witness, gluable_via_exchange, gluable_witness, grading_witness, implication_check, perverse_witness,
    psi, pushforward_support, HeartWindow, PsiArg, Witness,
};
use heartglue::upperset::{
    perversity_to_upperset, perversity_to_upperset_complement, upperset_to_perversity, upperset_to_perversity_northeast,
};
use heartglue::{Element, ExtPerversity, HomOracle, Perversity, UpperSet2D, ZSetMap, ZToset};

use format::{BuiltOracle, Input, InputError, OracleDoc};

const DEFAULT_WINDOW: (i64, i64) = (-8, 8);
const WINDOW_ENV: &str = "HEARTGLUE_WINDOW";
const MAX_PLOT_SIDE: i64 = 200;

#[derive(Parser)]
#[command(name = "heartglue", version, about = "Perversities, upper sets of Z x Z, and gluing of slicings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Perversity functions and their upper sets.
    #[command(subcommand)]
    Perv(PervCommand),
    /// Evaluate a compatibility predicate on a window.
    Check {
        #[arg(value_enum)]
        predicate: Predicate,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Map for `compatible`.
        #[arg(long, default_value = "exchange")]
        map: String,
        /// Perversity for the `gamma` and `g` maps.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
    },
    /// Membership of objects in the perverse heart.
    Heart {
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "u")]
        p: Option<String>,
        #[arg(long)]
        u: Option<String>,
        /// `n,w[,m];...` or a JSON object document; repeatable.
        #[arg(long = "object", allow_hyphen_values = true)]
        objects: Vec<String>,
    },
    /// Support of an object for the pushed-forward slicing.
    Push {
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long)]
        map: String,
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        object: String,
    },
    /// Draw an upper set of Z x Z.
    Plot {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "u")]
        p: Option<String>,
        #[arg(long)]
        u: Option<String>,
        #[arg(long, value_enum, default_value_t = Route::Northeast)]
        route: Route,
        /// `n0,n1,m0,m1`.
        #[arg(long, allow_hyphen_values = true, default_value = "-4,4,-4,4")]
        window: String,
        #[arg(long, value_enum, default_value_t = PlotFormat::Ascii)]
        format: PlotFormat,
        #[arg(long)]
        output: Option<std::path::PathBuf>,
    },
    /// Run a worked scenario.
    Demo {
        #[arg(value_parser = scenarios::SCENARIOS)]
        name: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 3)]
        dim: i64,
    },
}

#[derive(Subcommand)]
enum PervCommand {
    /// All perversities on a window with values in a range, constant outside.
    Enumerate {
        #[arg(long, allow_hyphen_values = true, default_value = "-2,2")]
        window: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-2,2")]
        values: String,
    },
    ToUpperset {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, value_enum, default_value_t = Route::Northeast)]
        route: Route,
        #[arg(long)]
        text: bool,
    },
    FromUpperset {
        #[arg(long)]
        u: String,
        #[arg(long, value_enum, default_value_t = Route::Complement)]
        route: Route,
        #[arg(long)]
        text: bool,
    },
    /// `--dot k`: n ↦ p(n + k). `--plus k`: n ↦ p(n) + k.
    Act {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "plus")]
        dot: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        plus: Option<i64>,
        #[arg(long)]
        text: bool,
    },
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    IsStrict {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
}

/// Which bijection between perversities and upper sets to use.
#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Route {
    /// `p ↦ φ(S_p)`: order-reversing, `p + 1` acts as the (1, 1) translation.
    Northeast,
    /// Complement of the opposite of `φ(S_p)`: order-preserving, inverse given by `p_U`.
    Complement,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Predicate {
    Compatible,
    Gluable,
    Grading,
    Perverse,
    Implications,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum PlotFormat {
    Ascii,
    Svg,
}

#[derive(Args)]
struct OracleArgs {
    /// semisimple, koszul, coherent-support, torsion-pair, beilinson-soule, quiver, table.
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long, default_value_t = 3)]
    dim: i64,
    #[arg(long, default_value = "number-field")]
    preset: String,
    /// Ext-table file for `--oracle table`.
    #[arg(long)]
    table: Option<String>,
    #[arg(long, default_value_t = 2)]
    quiver_n: usize,
    #[arg(long, default_value = "slope")]
    slicing: String,
    /// Manifest file; its oracle, window and objects are used.
    #[arg(long)]
    manifest: Option<String>,
    /// `lo,hi`; overrides the manifest and the environment.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
}

struct Outcome {
    text: String,
    pass: bool,
}

/// Prefixes a parse error with the flag it came from.
fn flag<T>(name: &str, r: Input<T>) -> Input<T> {
    r.map_err(|e| InputError(format!("--{name}: {}", e.0)))
}

fn parse_pair(s: &str, name: &str) -> Input<(i64, i64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(InputError(format!("{name}: expected lo,hi, found \"{s}\"")));
    }
    let lo = parts[0].parse().map_err(|_| InputError(format!("{name}: \"{}\" is not an integer", parts[0])))?;
    let hi = parts[1].parse().map_err(|_| InputError(format!("{name}: \"{}\" is not an integer", parts[1])))?;
    if lo > hi {
        return Err(InputError(format!("{name}: [{lo}, {hi}] is empty")));
    }
    Ok((lo, hi))
}

struct Context {
    oracle: BuiltOracle,
    name: String,
    window: (i64, i64),
    objects: Vec<heartglue::SupportObject>,
}

fn resolve(args: &OracleArgs) -> Input<Context> {
    let manifest = args.manifest.as_deref().map(format::parse_manifest).transpose()?;
    let doc = match (&args.oracle, &manifest) {
        (Some(kind), _) => match kind.as_str() {
            "semisimple" => OracleDoc::Semisimple,
            "koszul" => OracleDoc::Koszul,
            "coherent-support" => OracleDoc::CoherentSupport { dim: args.dim },
            "torsion-pair" => OracleDoc::TorsionPair,
            "beilinson-soule" => OracleDoc::BeilinsonSoule { preset: args.preset.clone(), planted_nonzero: Vec::new() },
            "quiver" => OracleDoc::Quiver { n: args.quiver_n, slicing: args.slicing.clone() },
            "table" => OracleDoc::TableFile {
                path: args.table.clone().ok_or_else(|| InputError("table: --oracle table needs --table FILE".into()))?,
            },
            other => return Err(InputError(format!("oracle: unknown oracle \"{other}\""))),
        },
        (None, Some(m)) => m.oracle.clone(),
        (None, None) => return Err(InputError("oracle: give --oracle or --manifest".into())),
    };
    let window = match (&args.window, manifest.as_ref().and_then(|m| m.window)) {
        (Some(w), _) => parse_pair(w, "window")?,
        (None, Some(w)) => w,
        (None, None) => match std::env::var(WINDOW_ENV) {
            Ok(v) => parse_pair(&v, WINDOW_ENV)?,
            Err(_) => DEFAULT_WINDOW,
        },
    };
    let objects = match &manifest {
        Some(m) => m.objects.iter().map(format::object_from_doc).collect::<Input<Vec<_>>>()?,
        None => Vec::new(),
    };
    let oracle = format::build_oracle(&doc)?;
    let name = oracle.shared().describe();
    Ok(Context { oracle, name, window, objects })
}

/// The weights of the window that the oracle admits.
fn heart_window(o: &dyn HomOracle, (lo, hi): (i64, i64)) -> HeartWindow {
    let weights: Vec<i64> = (lo..=hi).filter(|w| o.index().contains(&Element::Pair(0, *w))).collect();
    HeartWindow::new(weights, (lo, hi))
}

fn baric_labels(o: &dyn HomOracle, (lo, hi): (i64, i64)) -> Vec<Element> {
    let idx = o.index();
    let mut out: Vec<Element> =
        (lo..=hi).flat_map(|i| (lo..=hi).map(move |k| Element::Pair(i, k))).filter(|x| idx.contains(x)).collect();
    out.sort();
    out
}

fn abelian(ctx: &Context, what: &str) -> Input<Arc<dyn HomOracle>> {
    match &ctx.oracle {
        BuiltOracle::Abelian(o) => Ok(o.clone()),
        BuiltOracle::Baric(_) => Err(InputError(format!("oracle: {what} needs an abelian Z-slicing, not a baric one"))),
    }
}

fn build_map(name: &str, p: Option<&str>, domain: &ZToset) -> Input<ZSetMap> {
    let need_p = || -> Input<ExtPerversity> {
        flag("p", format::parse_perversity(p.ok_or_else(|| InputError(format!("p: the map {name} needs --p")))?))
    };
    Ok(match name {
        "identity" => ZSetMap::identity(domain.clone()),
        "exchange" => ZSetMap::exchange(domain)?,
        "alpha" => ZSetMap::alpha(),
        "beta" => ZSetMap::beta(),
        "gamma" => ZSetMap::gamma(&need_p()?)?,
        "g" => ZSetMap::g(&need_p()?)?,
        "projection" => ZSetMap::projection_first(domain)?,
        other => {
            return Err(InputError(format!(
                "map: unknown map \"{other}\" (identity, exchange, alpha, beta, gamma, g, projection)"
            )))
        }
    })
}

fn verdict(w: &Option<Witness>) -> String {
    match w {
        None => "pass".into(),
        Some(w) => format!("fail, witness {w}"),
    }
}

fn cmd_check(predicate: Predicate, args: &OracleArgs, map: &str, p: Option<&str>) -> Input<Outcome> {
    let ctx = resolve(args)?;
    let mut text = String::new();
    writeln!(text, "oracle: {}", ctx.name).unwrap();
    let (lo, hi) = ctx.window;
    let pass = match (predicate, &ctx.oracle) {
        (Predicate::Compatible, oracle) | (Predicate::Gluable, oracle @ BuiltOracle::Baric(_)) => {
            let o = oracle.shared();
            let f = if predicate == Predicate::Gluable { ZSetMap::exchange(&o.index())? } else { build_map(map, p, &o.index())? };
            let labels = match oracle {
                BuiltOracle::Baric(_) => baric_labels(o.as_ref(), ctx.window),
                BuiltOracle::Abelian(_) => heart_window(o.as_ref(), ctx.window).labels(lo, hi),
            };
            writeln!(text, "map: {}", f.name()).unwrap();
            writeln!(text, "window: labels with coordinates in [{lo}, {hi}] ({} labels)", labels.len()).unwrap();
            let w = f_compatibility_witness(o.as_ref(), &f, &labels)?;
            writeln!(text, "{}-compatible: {}", f.name(), verdict(&w)).unwrap();
            w.is_none()
        }
        (Predicate::Gluable | Predicate::Grading | Predicate::Perverse, _) => {
            let o = abelian(&ctx, "this predicate")?;
            let w = heart_window(o.as_ref(), ctx.window);
            writeln!(text, "window: {w}").unwrap();
            let (name, wit) = match predicate {
                Predicate::Gluable => ("gluable", gluable_witness(o.as_ref(), &w)?),
                Predicate::Grading => ("grading", grading_witness(o.as_ref(), &w)?),
                _ => ("perverse", perverse_witness(o.as_ref(), &w)?),
            };
            writeln!(text, "{name}: {}", verdict(&wit)).unwrap();
            if predicate == Predicate::Gluable {
                let ex = gluable_via_exchange(o.as_ref(), &w)?;
                writeln!(text, "exchange-compatible: {}", verdict(&ex)).unwrap();
            }
            wit.is_none()
        }
        (Predicate::Implications, _) => {
            let o = abelian(&ctx, "implications")?;
            let w = heart_window(o.as_ref(), ctx.window);
            let r = implication_check(o.as_ref(), &w)?;
            writeln!(text, "window: {w}").unwrap();
            writeln!(text, "gluable: {}", verdict(&r.gluable)).unwrap();
            writeln!(text, "grading: {}", verdict(&r.grading)).unwrap();
            writeln!(text, "perverse: {}", verdict(&r.perverse)).unwrap();
            writeln!(text, "exchange-compatible: {}", verdict(&r.exchange)).unwrap();
            let v = r.violations();
            for line in &v {
                writeln!(text, "violation: {line}").unwrap();
            }
            writeln!(text, "implications: {}", if v.is_empty() { "hold" } else { "violated" }).unwrap();
            v.is_empty()
        }
    };
    Ok(Outcome { text, pass })
}

fn cmd_heart(args: &OracleArgs, p: Option<&str>, u: Option<&str>, objects: &[String]) -> Input<Outcome> {
    let ctx = resolve(args)?;
    let o = abelian(&ctx, "heart")?;
    let arg = match (p, u) {
        (Some(p), _) => PsiArg::Perversity(flag("p", format::parse_perversity(p))?),
        (None, Some(u)) => PsiArg::UpperSet(flag("u", format::parse_upperset(u))?),
        (None, None) => return Err(InputError("p: give --p or --u".into())),
    };
    let mut objs = ctx.objects.clone();
    for s in objects {
        objs.push(flag("object", format::parse_object(s))?);
    }
    let mut text = String::new();
    writeln!(text, "oracle: {}", ctx.name).unwrap();
    let w = heart_window(o.as_ref(), ctx.window);
    let (desc, warnings) = match psi(o.as_ref(), &arg, &w) {
        Ok(x) => x,
        Err(e @ heartglue::Error::Precondition(_)) => {
            writeln!(text, "{e}").unwrap();
            return Ok(Outcome { text, pass: false });
        }
        Err(e) => return Err(e.into()),
    };
    for wline in warnings {
        writeln!(text, "warning: {wline}").unwrap();
    }
    writeln!(text, "perversity: {}", desc.perversity).unwrap();
    let mut all = true;
    for (i, x) in objs.iter().enumerate() {
        let (ok, bad) = desc.heart_membership(x)?;
        all &= ok;
        if ok {
            writeln!(text, "object {i} {x}: in").unwrap();
        } else {
            let labels: Vec<String> = bad.iter().map(ToString::to_string).collect();
            writeln!(text, "object {i} {x}: out, violating labels {}", labels.join(" ")).unwrap();
        }
    }
    Ok(Outcome { text, pass: all })
}

fn cmd_push(args: &OracleArgs, map: &str, p: Option<&str>, object: &str) -> Input<Outcome> {
    let ctx = resolve(args)?;
    let o = ctx.oracle.shared();
    let f = build_map(map, p, &o.index())?;
    let x = flag("object", format::parse_object(object))?;
    let mut text = String::new();
    writeln!(text, "oracle: {}", ctx.name).unwrap();
    writeln!(text, "map: {}", f.name()).unwrap();
    match pushforward_support(o.as_ref(), &f, &x) {
        Ok(y) => {
            for (label, m) in y.descending() {
                writeln!(text, "{label} x{m}").unwrap();
            }
            Ok(Outcome { text, pass: true })
        }
        Err(e @ heartglue::Error::Incompatible { .. }) => {
            writeln!(text, "{e}").unwrap();
            Ok(Outcome { text, pass: false })
        }
        Err(e) => Err(e.into()),
    }
}

fn to_upperset(p: &ExtPerversity, route: Route) -> UpperSet2D {
    match route {
        Route::Northeast => perversity_to_upperset(p),
        Route::Complement => perversity_to_upperset_complement(p),
    }
}

fn show_perversity(p: &ExtPerversity, text: bool) -> String {
    if text {
        let values: Vec<String> = (-4..=4).map(|n| p.eval(n).to_string()).collect();
        format!("{p}\nvalues on [-4, 4]: {}\n", values.join(" "))
    } else {
        format::to_pretty(&format::perversity_to_doc(p)) + "\n"
    }
}

fn cmd_perv(c: &PervCommand) -> Input<Outcome> {
    let out = |text: String| Ok(Outcome { text, pass: true });
    match c {
        PervCommand::Enumerate { window, values } => {
            let w = parse_pair(window, "window")?;
            let v = parse_pair(values, "values")?;
            if w.1 - w.0 > 12 {
                return Err(InputError("window: at most 13 points".into()));
            }
            let all = Perversity::enumerate(w, v);
            let mut text = String::new();
            for p in &all {
                let vals: Vec<String> = (w.0..=w.1).map(|n| p.eval(n).to_string()).collect();
                writeln!(text, "{}", vals.join(" ")).unwrap();
            }
            writeln!(text, "count {}", all.len()).unwrap();
            out(text)
        }
        PervCommand::ToUpperset { p, route, text } => {
            let u = to_upperset(&flag("p", format::parse_perversity(p))?, *route);
            out(if *text { format!("{u}\n") } else { format::to_pretty(&format::upperset_to_doc(&u)) + "\n" })
        }
        PervCommand::FromUpperset { u, route, text } => {
            let u = flag("u", format::parse_upperset(u))?;
            let p = match route {
                Route::Northeast => upperset_to_perversity_northeast(&u),
                Route::Complement => upperset_to_perversity(&u),
            };
            out(show_perversity(&p, *text))
        }
        PervCommand::Act { p, dot, plus, text } => {
            let p = flag("p", format::parse_perversity(p))?;
            let q = match (dot, plus) {
                (Some(k), _) => p.act_dot(*k),
                (None, Some(k)) => p.act_plus(*k),
                (None, None) => return Err(InputError("act: give --dot K or --plus K".into())),
            };
            out(show_perversity(&q, *text))
        }
        PervCommand::Compare { p, q } => {
            let (p, q) = (flag("p", format::parse_perversity(p))?, flag("q", format::parse_perversity(q))?);
            let word = match p.compare(&q) {
                Some(std::cmp::Ordering::Less) => "lt",
                Some(std::cmp::Ordering::Equal) => "eq",
                Some(std::cmp::Ordering::Greater) => "gt",
                None => "incomparable",
            };
            out(format!("{word}\n"))
        }
        PervCommand::IsStrict { p } => {
            let p = flag("p", format::parse_perversity(p))?;
            let strict = p.is_strict().map_err(InputError::from)?;
            let mut text = format!("{strict}\n");
            if let Some(n) = p.as_finite().and_then(Perversity::strictness_witness) {
                writeln!(text, "witness: p({}) > p({n}) + 1", n + 2).unwrap();
            }
            Ok(Outcome { text, pass: strict })
        }
    }
}

fn render_ascii(u: &UpperSet2D, (n0, n1, m0, m1): (i64, i64, i64, i64)) -> String {
    let mut s = String::new();
    for m in (m0..=m1).rev() {
        for n in n0..=n1 {
            s.push(if u.contains(n, m) { '#' } else { '.' });
        }
        s.push('\n');
    }
    s
}

fn render_svg(u: &UpperSet2D, (n0, n1, m0, m1): (i64, i64, i64, i64), title: &str) -> String {
    const CELL: i64 = 12;
    let (w, h) = ((n1 - n0 + 1) * CELL, (m1 - m0 + 1) * CELL);
    let mut s = String::new();
    writeln!(s, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">", w, h + 3 * CELL).unwrap();
    writeln!(s, "<title>{}</title>", title.replace('<', "&lt;").replace('>', "&gt;")).unwrap();
    for m in (m0..=m1).rev() {
        for n in n0..=n1 {
            let fill = if u.contains(n, m) { "#333333" } else { "#ffffff" };
            let (x, y) = ((n - n0) * CELL, (m1 - m) * CELL);
            writeln!(s, "<rect x=\"{x}\" y=\"{y}\" width=\"{CELL}\" height=\"{CELL}\" fill=\"{fill}\" stroke=\"#cccccc\"/>").unwrap();
        }
    }
    writeln!(s, "<text x=\"0\" y=\"{}\" font-size=\"10\">n in [{n0}, {n1}], n' in [{m0}, {m1}]</text>", h + CELL).unwrap();
    writeln!(s, "<text x=\"0\" y=\"{}\" font-size=\"10\">dark: (n, n') in U</text>", h + 2 * CELL + 4).unwrap();
    s.push_str("</svg>\n");
    s
}

fn cmd_plot(
    p: Option<&str>,
    u: Option<&str>,
    route: Route,
    window: &str,
    fmt: PlotFormat,
    output: Option<&std::path::Path>,
) -> Input<Outcome> {
    let nums: Vec<i64> = window
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| InputError(format!("window: \"{x}\" is not an integer"))))
        .collect::<Input<_>>()?;
    let [n0, n1, m0, m1] = nums[..] else {
        return Err(InputError(format!("window: expected n0,n1,m0,m1, found \"{window}\"")));
    };
    if n0 > n1 || m0 > m1 {
        return Err(InputError("window: empty range".into()));
    }
    if n1 - n0 + 1 > MAX_PLOT_SIDE || m1 - m0 + 1 > MAX_PLOT_SIDE {
        return Err(InputError(format!("window: larger than {MAX_PLOT_SIDE}x{MAX_PLOT_SIDE}, refusing to plot")));
    }
    let set = match (p, u) {
        (Some(p), _) => to_upperset(&flag("p", format::parse_perversity(p))?, route),
        (None, Some(u)) => flag("u", format::parse_upperset(u))?,
        (None, None) => return Err(InputError("p: give --p or --u".into())),
    };
    let body = match fmt {
        PlotFormat::Ascii => render_ascii(&set, (n0, n1, m0, m1)),
        PlotFormat::Svg => render_svg(&set, (n0, n1, m0, m1), &set.to_string()),
    };
    match output {
        Some(path) => {
            std::fs::write(path, &body).map_err(|e| InputError(format!("output: cannot write {}: {e}", path.display())))?;
            Ok(Outcome { text: String::new(), pass: true })
        }
        None => Ok(Outcome { text: body, pass: true }),
    }
}

fn run(cli: Cli) -> Input<Outcome> {
    match &cli.command {
        Command::Perv(c) => cmd_perv(c),
        Command::Check { predicate, oracle, map, p } => cmd_check(*predicate, oracle, map, p.as_deref()),
        Command::Heart { oracle, p, u, objects } => cmd_heart(oracle, p.as_deref(), u.as_deref(), objects),
        Command::Push { oracle, map, p, object } => cmd_push(oracle, map, p.as_deref(), object),
        Command::Plot { p, u, route, window, format, output } => {
            cmd_plot(p.as_deref(), u.as_deref(), *route, window, *format, output.as_deref())
        }
        Command::Demo { name, k, dim } => {
            let r = scenarios::run(name, *k, *dim)?;
            Ok(Outcome { text: format!("{r}\n"), pass: r.passed() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(o) => {
            print!("{}", o.text);
            if o.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
