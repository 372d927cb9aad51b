//! `harmonica`: command-line front end. Exit status 0 on success, 1 on a
//! domain error (its name on stderr), 2 on a usage error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use harmonica::chebfib::{cdf, fib_order, CdfKind};
use harmonica::graph::{adjacency_charpoly, forest_reduce, harmonic_kernel, is_uniqueness_set};
use harmonica::lattice::{double_pattern, grid_kernel_dims, j_order, torus_harmonic, TorusPattern};
use harmonica::lightsout::{is_winning, odd_domination, solve};
use harmonica::partnership::{component, component_cached, euler_check, hasse_weil, partners_of};
use harmonica::{poly2, Error, Graph, Pattern, Poly2, Result, Sign};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "harmonica",
    version,
    about = "Binary harmonic functions, Chebyshev-Dickson polynomials over GF(2) and the partnership graph"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the parallel enumerations.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    workers: Option<u16>,
    /// Directory for cached partnership components.
    #[arg(long, global = true, env = "HARMONICA_CACHE")]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Polynomial arithmetic over GF(2).
    #[command(subcommand)]
    Poly(PolyCmd),
    /// Chebyshev-Dickson polynomial T_n, E_n or F_n.
    Cdf {
        #[arg(value_enum, ignore_case = true)]
        kind: Kind,
        n: u64,
    },
    /// Fibonacci order of an irreducible polynomial.
    Ford { poly: String },
    /// Harmonicity of a torus or grid.
    #[command(subcommand)]
    Harmonic(HarmonicCmd),
    /// Kernel basis of a graph Laplacian.
    Kernel(GraphSign),
    /// Characteristic polynomial of the adjacency matrix.
    Charpoly(GraphArg),
    /// Kernel of a forest by leaf deletion.
    ForestReduce(GraphSign),
    /// Whether a vertex set determines every kernel pattern.
    Uniq {
        #[command(flatten)]
        gs: GraphSign,
        /// Comma-separated vertices.
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },
    /// Order of the transfer matrix of `G × Z`.
    Jorder(GraphSign),
    /// Double a harmonic torus pattern.
    Double {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Lights Out.
    #[command(subcommand)]
    Lightsout(LightsCmd),
    /// Partnership graph.
    #[command(subcommand)]
    Partnership(PartnerCmd),
    /// Point counts s_r and sbar_r.
    Hasse { r: u32 },
    /// Euler-function identities at level r.
    EulerCheck { r: u32 },
}

#[derive(Subcommand)]
enum PolyCmd {
    Mul {
        a: String,
        b: String,
    },
    Gcd {
        a: String,
        b: String,
    },
    Factor {
        p: String,
    },
    Conj {
        p: String,
    },
    Recip {
        p: String,
    },
    Delta {
        p: String,
    },
    Cyclotomic {
        d: u64,
    },
    /// `h_r`, or `h̃_r` with `--tilde`.
    H {
        r: u32,
        #[arg(long)]
        tilde: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    #[value(name = "T")]
    T,
    #[value(name = "E")]
    E,
    #[value(name = "F")]
    F,
}

#[derive(Subcommand)]
enum HarmonicCmd {
    Torus {
        #[arg(required = true)]
        dims: Vec<u64>,
    },
    Grid {
        #[arg(required = true)]
        dims: Vec<u64>,
    },
}

#[derive(Subcommand)]
enum LightsCmd {
    Winning(GraphArg),
    Solve {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        pattern: String,
    },
    OddDom(GraphArg),
}

#[derive(Subcommand)]
enum PartnerCmd {
    Component { r: u32 },
    Partners { n: u64 },
}

#[derive(Args)]
struct GraphArg {
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args)]
struct GraphSign {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    sign: SignArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Sign {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

/// One result in every supported format.
struct Rendered {
    text: String,
    json: Value,
    dot: Option<String>,
}

impl Rendered {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Rendered { text: text.into(), json, dot: None }
    }
}

fn poly(s: &str) -> Result<Poly2> {
    s.parse()
}

fn read_graph(a: &GraphArg) -> Result<Graph> {
    Graph::parse_text(&read(&a.graph)?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::IoError(format!("{}: {e}", path.display())))
}

fn poly_json(p: &Poly2) -> Value {
    json!({ "poly": p.to_string(), "hex": p.to_hex() })
}

fn poly_result(p: Poly2) -> Rendered {
    Rendered::new(p.to_string(), poly_json(&p))
}

fn bits(v: &Pattern) -> String {
    v.to_string()
}

fn run_poly(cmd: PolyCmd) -> Result<Rendered> {
    Ok(match cmd {
        PolyCmd::Mul { a, b } => poly_result(poly(&a)?.mul(&poly(&b)?)),
        PolyCmd::Gcd { a, b } => poly_result(poly(&a)?.gcd(&poly(&b)?)),
        PolyCmd::Conj { p } => poly_result(poly(&p)?.conjugate()),
        PolyCmd::Recip { p } => poly_result(poly(&p)?.reciprocal()),
        PolyCmd::Delta { p } => poly_result(poly(&p)?.delta()),
        PolyCmd::Cyclotomic { d } => poly_result(poly2::cyclotomic(d)?),
        PolyCmd::H { r, tilde } => poly_result(if tilde { poly2::h_tilde(r)? } else { poly2::h_poly(r)? }),
        PolyCmd::Factor { p } => {
            let factors = poly2::factor(&poly(&p)?)?;
            let text = factors
                .iter()
                .map(|(f, k)| if *k == 1 { format!("({f})") } else { format!("({f})^{k}") })
                .collect::<Vec<_>>()
                .join(" ");
            let json = factors
                .iter()
                .map(|(f, k)| json!({ "poly": f.to_string(), "hex": f.to_hex(), "multiplicity": k }))
                .collect();
            Rendered::new(if text.is_empty() { "1".into() } else { text }, json!({ "factors": Value::Array(json) }))
        }
    })
}

fn run_harmonic(cmd: HarmonicCmd) -> Result<Rendered> {
    Ok(match cmd {
        HarmonicCmd::Torus { dims } => {
            let (h, w) = torus_harmonic(&dims)?;
            let text = match &w {
                Some(w) => format!(
                    "HARMONIC: orders {}, field degree {}",
                    w.orders.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
                    w.field_degree
                ),
                None if h => "HARMONIC".into(),
                None => "NOT HARMONIC".into(),
            };
            Rendered::new(text, json!({ "dims": dims, "harmonic": h, "witness": w }))
        }
        HarmonicCmd::Grid { dims } => {
            let (plus, minus) = grid_kernel_dims(&dims)?;
            let verdict = if plus > 0 { "HARMONIC" } else { "NOT HARMONIC" };
            Rendered::new(
                format!("{verdict}: d+ = {plus}, d- = {minus}"),
                json!({ "dims": dims, "harmonic": plus > 0, "d_plus": plus, "d_minus": minus }),
            )
        }
    })
}

fn run_lights(cmd: LightsCmd) -> Result<Rendered> {
    Ok(match cmd {
        LightsCmd::Winning(a) => {
            let w = is_winning(&read_graph(&a)?);
            Rendered::new(if w { "WINNING" } else { "NOT WINNING" }, json!({ "winning": w }))
        }
        LightsCmd::Solve { graph, pattern } => {
            let g = read_graph(&graph)?;
            let out = solve(&g, &pattern.parse()?)?;
            Rendered::new(out.to_string(), serde_json::to_value(&out).expect("serializable"))
        }
        LightsCmd::OddDom(a) => {
            let moves = odd_domination(&read_graph(&a)?)?;
            let text = moves.iter().map(|v| format!("v{v}")).collect::<Vec<_>>().join(" ");
            Rendered::new(text, json!({ "moves": moves }))
        }
    })
}

fn run_partnership(cmd: PartnerCmd, cache: Option<&Path>) -> Result<Rendered> {
    Ok(match cmd {
        PartnerCmd::Component { r } => {
            let c = match cache {
                Some(dir) => component_cached(dir, r)?,
                None => component(r)?,
            };
            let mut text = String::new();
            let vs = c.vertices.iter().map(|v| v.n.to_string()).collect::<Vec<_>>().join(" ");
            writeln!(text, "r = {}", c.r).unwrap();
            writeln!(text, "vertices: {vs}").unwrap();
            for e in &c.edges {
                writeln!(text, "edge {} -- {}: {}", e.m, e.n, e.s).unwrap();
            }
            for l in &c.loops {
                writeln!(text, "loop {}: {}", l.n, l.s).unwrap();
            }
            if let Some(x) = c.exceptional {
                writeln!(text, "exceptional 1 -> 3: {}, 3 -> 1: {}", x.one_to_three, x.three_to_one).unwrap();
            }
            Rendered {
                text: text.trim_end().into(),
                json: serde_json::to_value(&c).expect("serializable"),
                dot: Some(c.to_dot().trim_end().into()),
            }
        }
        PartnerCmd::Partners { n } => {
            let ps = partners_of(n)?;
            let text = ps.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
            Rendered::new(text, json!({ "n": n, "partners": ps }))
        }
    })
}

fn run_euler(r: u32) -> Result<Rendered> {
    let e = euler_check(r)?;
    let mark = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let mut text = String::new();
    writeln!(text, "{} vertex identity ({} vertices)", mark(e.vertex_identity_holds()), e.vertices.len()).unwrap();
    writeln!(text, "{} level identity: {} = {}", mark(e.level_identity_holds()), e.level_phi, e.level_labels).unwrap();
    writeln!(text, "{} total identity: {} = {}", mark(e.total_identity_holds()), e.total, e.two_q).unwrap();
    match e.inequality {
        Some(i) => writeln!(text, "{} inequality: {} >= {}", mark(e.inequality_holds()), i.lhs, i.rhs).unwrap(),
        None => writeln!(text, "SKIP inequality (r < 3)").unwrap(),
    }
    let mut json = serde_json::to_value(&e).expect("serializable");
    json["passed"] = json!(e.passed());
    Ok(Rendered::new(text.trim_end(), json))
}

fn run(cli: Cli) -> Result<Rendered> {
    Ok(match cli.command {
        Command::Poly(cmd) => run_poly(cmd)?,
        Command::Cdf { kind, n } => {
            let k = match kind {
                Kind::T => CdfKind::FirstKind,
                Kind::E => CdfKind::SecondKind,
                Kind::F => CdfKind::Fibonacci,
            };
            poly_result(cdf(k, n)?)
        }
        Command::Ford { poly: p } => {
            let p = poly(&p)?;
            let f = fib_order(&p)?;
            Rendered::new(f.to_string(), json!({ "poly": p.to_string(), "ford": f }))
        }
        Command::Harmonic(cmd) => run_harmonic(cmd)?,
        Command::Kernel(a) => {
            let k = harmonic_kernel(&read_graph(&a.graph)?, a.sign.into());
            let mut text = format!("dimension {}", k.dimension);
            for h in &k.basis {
                write!(text, "\n{}", bits(h)).unwrap();
            }
            Rendered::new(text, serde_json::to_value(&k).expect("serializable"))
        }
        Command::Charpoly(a) => poly_result(adjacency_charpoly(&read_graph(&a)?)),
        Command::ForestReduce(a) => {
            let f = forest_reduce(&read_graph(&a.graph)?, a.sign.into())?;
            let rem = f.remaining.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
            let mut text = format!("remaining: {rem}\ndimension {}", f.dimension);
            for h in &f.basis.basis {
                write!(text, "\n{}", bits(h)).unwrap();
            }
            Rendered::new(text, serde_json::to_value(&f).expect("serializable"))
        }
        Command::Uniq { gs, set } => {
            let sign: Sign = gs.sign.into();
            let u = is_uniqueness_set(&read_graph(&gs.graph)?, &set, sign)?;
            Rendered::new(
                if u { "UNIQUENESS SET" } else { "NOT A UNIQUENESS SET" },
                json!({ "set": set, "sign": sign, "uniqueness": u }),
            )
        }
        Command::Jorder(a) => {
            let o = j_order(&read_graph(&a.graph)?, a.sign.into())?;
            Rendered::new(o.to_string(), json!({ "order": o }))
        }
        Command::Double { input } => {
            let f: TorusPattern = serde_json::from_str(&read(&input)?)
                .map_err(|e| Error::MalformedPattern(format!("{}: {e}", input.display())))?;
            let d = double_pattern(&f);
            let json = serde_json::to_value(&d).expect("serializable");
            let text = json["rows"]
                .as_array()
                .expect("rows")
                .iter()
                .map(|r| r.as_str().expect("row"))
                .collect::<Vec<_>>()
                .join("\n");
            Rendered::new(text, json)
        }
        Command::Lightsout(cmd) => run_lights(cmd)?,
        Command::Partnership(cmd) => run_partnership(cmd, cli.cache_dir.as_deref())?,
        Command::Hasse { r } => {
            let (s, sbar) = hasse_weil(r)?;
            Rendered::new(format!("s_{r} = {s}, sbar_{r} = {sbar}"), json!({ "r": r, "s": s, "sbar": sbar }))
        }
        Command::EulerCheck { r } => run_euler(r)?,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let format = cli.format;
    match run(cli) {
        Ok(out) => match format {
            Format::Text => {
                println!("{}", out.text);
                ExitCode::SUCCESS
            }
            Format::Json => {
                println!("{}", out.json);
                ExitCode::SUCCESS
            }
            Format::Dot => match out.dot {
                Some(d) => {
                    println!("{d}");
                    ExitCode::SUCCESS
                }
                None => {
                    eprintln!("error: --format dot is only available for `partnership component`");
                    ExitCode::from(2)
                }
            },
        },
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
    }
}
