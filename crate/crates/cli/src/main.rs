use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quatlat_core::abelian::{self, bigint_json, quat_json, SearchBounds};
use quatlat_core::complex::{self, CornerTable, Diagram};
use quatlat_core::lattice::{dickson_factor, padic_embed, PadicMatrix};
use quatlat_core::verify::{self, Status, VerifyConfig};
use quatlat_core::{
    Error, Family, GroupElement, Lattice, LatticeParams, Order, Presentation, Quat, Word,
};

#[derive(Parser)]
#[command(
    name = "quatlat",
    version,
    about = "Exact computations in the quaternionic lattices Γ_{p,l}"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// First prime (the A-family).
    #[arg(long, global = true, default_value_t = 3)]
    p: u64,
    /// Second prime (the B-family).
    #[arg(long, global = true, default_value_t = 5)]
    l: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
    Svg,
    Dot,
    Ascii,
}

/// An element given either as a quaternion or as a word.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct ElementArg {
    /// Quaternion "x0,x1,x2,x3".
    #[arg(long, allow_hyphen_values = true)]
    quat: Option<String>,
    /// Word such as "a1,a2',b3" (prime = inverse).
    #[arg(long, allow_hyphen_values = true)]
    word: Option<String>,
}

#[derive(Args)]
struct Bounds {
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
    s_max: u32,
    #[arg(long, default_value_t = 2)]
    radius: u32,
}

#[derive(Subcommand)]
enum Command {
    /// List the generators a_i and b_j.
    Gens,
    /// Derive the square-complex presentation.
    Present,
    /// Multiply two elements (each a quaternion or a word).
    Mul {
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
    },
    /// Reduced word for an element.
    NormalForm {
        #[command(flatten)]
        elem: ElementArg,
        /// Write A-letters first instead of B-letters first.
        #[arg(long)]
        a_first: bool,
    },
    /// Word length ℓ = r + s.
    Length {
        #[command(flatten)]
        elem: ElementArg,
    },
    /// Decide whether two elements commute.
    Commute {
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
    },
    /// Factor a quaternion of norm p·l both ways.
    FactorPl {
        #[arg(long, allow_hyphen_values = true)]
        quat: String,
    },
    /// Classify the maximal abelian subgroup containing an element.
    Classify {
        #[command(flatten)]
        elem: ElementArg,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Search for a commuting pair of norms p^r and l^r.
    FindPeriod {
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
        r_max: u32,
    },
    /// Tile the flat spanned by a commuting A-word and B-word.
    Tile {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 8)]
        width: usize,
        #[arg(long, default_value_t = 8)]
        height: usize,
    },
    /// Vertices near O moved least by an element.
    Minset {
        #[command(flatten)]
        elem: ElementArg,
        #[arg(long, default_value_t = 3)]
        radius: u32,
    },
    /// Images in PGL2 over Z/p^k and Z/l^k.
    Embed {
        #[command(flatten)]
        elem: ElementArg,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
    },
    /// Run the seeded invariant suite.
    Verify {
        #[arg(long, env = "QUATLAT_SEED", default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(5..))]
        samples: u64,
        #[command(flatten)]
        bounds: Bounds,
        /// Directory holding presentation_3_5.json and apartment_3_5.svg.
        #[arg(long)]
        golden_dir: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::UnsupportedFormat(_)
            | Error::NotOddPrime(_)
            | Error::InvalidParams(_) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

type CmdResult = Result<(String, bool), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let params = LatticeParams::new(cli.global.p, cli.global.l)?;
    let fmt = cli.global.format;
    let done = |s: String| Ok((s, true));
    match &cli.command {
        Command::Gens => done(cmd_gens(&Lattice::new(params)?, fmt)?),
        Command::Present => {
            let pres = Presentation::derive(&Lattice::new(params)?)?;
            done(match fmt {
                OutFormat::Json => pres.to_json(),
                OutFormat::Text => pres.to_text(),
                _ => return Err(bad_format(fmt, "present")),
            })
        }
        Command::Mul { left, right } => {
            let lat = Lattice::new(params)?;
            let (x, y) = (parse_element(&lat, left)?, parse_element(&lat, right)?);
            done(describe(&lat, &x.multiply(&y)?, fmt)?)
        }
        Command::NormalForm { elem, a_first } => {
            let lat = Lattice::new(params)?;
            let g = elem.resolve(&lat)?;
            let order = if *a_first {
                Order::AThenB
            } else {
                Order::BThenA
            };
            let w = lat.normal_form(&g, order)?;
            done(text_or_json(
                fmt,
                format!("{w}\n"),
                || json!({ "word": w.to_string(), "length": w.len() }),
            )?)
        }
        Command::Length { elem } => {
            let lat = Lattice::new(params)?;
            let g = elem.resolve(&lat)?;
            done(text_or_json(
                fmt,
                format!("{}\n", g.length()),
                || json!({ "length": g.length(), "r": g.r(), "s": g.s() }),
            )?)
        }
        Command::Commute { left, right } => {
            let lat = Lattice::new(params)?;
            let (x, y) = (parse_element(&lat, left)?, parse_element(&lat, right)?);
            let c = x.commutes(&y);
            done(text_or_json(
                fmt,
                format!("{c}\n"),
                || json!({ "commute": c }),
            )?)
        }
        Command::FactorPl { quat } => {
            let lat = Lattice::new(params)?;
            let x: Quat = quat.parse()?;
            let f = dickson_factor(&lat, &x)?;
            let name = |q: &Quat| {
                lat.letter_for_quat(q)
                    .map(|g| g.to_string())
                    .unwrap_or_default()
            };
            let text = format!(
                "{x} = ({}) ({}) = ({}) ({})\n     = {} {} = {} {}\n",
                f.z,
                f.y,
                f.y_tilde,
                f.z_tilde,
                name(&f.z),
                name(&f.y),
                name(&f.y_tilde),
                name(&f.z_tilde)
            );
            done(text_or_json(fmt, text, || {
                let part = |q: &Quat| json!({ "quat": quat_json(q), "letter": name(q) });
                json!({
                    "quat": quat_json(&x),
                    "a_then_b": [part(&f.z), part(&f.y)],
                    "b_then_a": [part(&f.y_tilde), part(&f.z_tilde)],
                })
            })?)
        }
        Command::Classify { elem, bounds } => {
            let lat = Lattice::new(params)?;
            let g = elem.resolve(&lat)?;
            let v = abelian::classify(&g, bounds.get())?;
            let text = match &v.certificate {
                Some(c) => format!(
                    "{} (n = {}, certificate: {})\n",
                    v.kind,
                    v.descriptor.n,
                    c.tag()
                ),
                None => format!("{} (n = {})\n", v.kind, v.descriptor.n),
            };
            done(text_or_json(fmt, text, || v.to_json())?)
        }
        Command::FindPeriod { r_max } => match abelian::find_period_pair(params, *r_max)? {
            Some(pair) => done(text_or_json(
                fmt,
                format!(
                    "r = {}, n = {}\nx = {}\ny = {}\n",
                    pair.r,
                    pair.dir.n(),
                    pair.x.rep(),
                    pair.y.rep()
                ),
                || pair.to_json(),
            )?),
            None => Err(Failure::Domain(format!("no period pair with r ≤ {r_max}"))),
        },
        Command::Tile {
            alpha,
            beta,
            width,
            height,
        } => {
            let pres = Presentation::derive(&Lattice::new(params)?)?;
            let table = CornerTable::build(&pres)?;
            let grid = complex::tile_apartment(
                &pres,
                &table,
                &alpha.parse()?,
                &beta.parse()?,
                *width,
                *height,
            )?;
            done(render(&Diagram::from_grid(&grid), fmt, "tile")?)
        }
        Command::Minset { elem, radius } => {
            let lat = Lattice::new(params)?;
            let g = elem.resolve(&lat)?;
            let region = complex::minset_region(&lat, &g, *radius)?;
            if fmt == OutFormat::Json {
                let verts: Vec<String> =
                    region.vertices.iter().map(|(w, _)| w.to_string()).collect();
                let out = json!({
                    "displacement": region.displacement,
                    "radius": region.radius,
                    "horizontal_extent": region.horizontal_extent()?,
                    "vertical_extent": region.vertical_extent()?,
                    "columns": region.column_count()?,
                    "vertices": verts,
                });
                return done(pretty(&out));
            }
            let diagram = Diagram::from_region(&lat, &region)?;
            if fmt == OutFormat::Text {
                return done(format!(
                    "displacement {}\nvertices {}\ncolumns {}\nhorizontal extent {}\nvertical extent {}\n",
                    region.displacement,
                    region.vertices.len(),
                    region.column_count()?,
                    region.horizontal_extent()?,
                    region.vertical_extent()?,
                ));
            }
            done(render(&diagram, fmt, "minset")?)
        }
        Command::Embed { elem, k } => {
            let lat = Lattice::new(params)?;
            let g = elem.resolve(&lat)?;
            let pair = padic_embed(params, &g, *k)?;
            let text = format!("p-side: {}\nl-side: {}\n", pair.p_side, pair.l_side);
            done(text_or_json(
                fmt,
                text,
                || json!({ "k": k, "p": matrix_json(&pair.p_side), "l": matrix_json(&pair.l_side) }),
            )?)
        }
        Command::Verify {
            seed,
            samples,
            bounds,
            golden_dir,
        } => {
            let mut cfg = VerifyConfig::new(params, *seed);
            cfg.samples = *samples as usize;
            cfg.bounds = bounds.get();
            cfg.golden_dir = golden_dir.clone();
            let results = verify::run_suite(&cfg)?;
            let ok = results.iter().all(|r| r.status != Status::Fail);
            let mut out = format!("seed {seed}, samples {samples}\n");
            for r in &results {
                out.push_str(&format!("{r}\n"));
            }
            let failed = results.iter().filter(|r| r.status == Status::Fail).count();
            out.push_str(&format!("{} checks, {failed} failed\n", results.len()));
            Ok((out, ok))
        }
    }
}

impl ElementArg {
    fn resolve(&self, lat: &Lattice) -> Result<GroupElement, Failure> {
        match (&self.quat, &self.word) {
            (Some(q), _) => Ok(lat.element(&q.parse()?)?),
            (_, Some(w)) => Ok(lat.evaluate(&w.parse()?)?),
            _ => Err(Failure::Usage("one of --quat or --word is required".into())),
        }
    }
}

impl Bounds {
    fn get(&self) -> SearchBounds {
        SearchBounds {
            s_max: self.s_max,
            radius: self.radius,
        }
    }
}

/// Four integers read as a quaternion, anything else as a word.
fn parse_element(lat: &Lattice, s: &str) -> Result<GroupElement, Failure> {
    let numeric =
        s.split(',').count() == 4 && s.split(',').all(|t| t.trim().parse::<i128>().is_ok());
    if numeric {
        Ok(lat.element(&s.parse()?)?)
    } else {
        Ok(lat.evaluate(&s.parse::<Word>()?)?)
    }
}

fn cmd_gens(lat: &Lattice, fmt: OutFormat) -> Result<String, Failure> {
    let mut rows = Vec::new();
    for family in [Family::A, Family::B] {
        for g in lat.letters(family) {
            rows.push((g.to_string(), lat.letter_quat(g)?));
        }
    }
    let text = rows.iter().map(|(n, q)| format!("{n} = {q}\n")).collect();
    text_or_json(fmt, text, || {
        Value::Array(
            rows.iter()
                .map(|(n, q)| json!({ "name": n, "quat": quat_json(q) }))
                .collect(),
        )
    })
}

fn describe(lat: &Lattice, g: &GroupElement, fmt: OutFormat) -> Result<String, Failure> {
    let w = lat.normal_form(g, Order::BThenA)?;
    text_or_json(
        fmt,
        format!("{g}\nword {w}\nlength {}\n", g.length()),
        || json!({ "quat": quat_json(g.rep()), "word": w.to_string(), "length": g.length() }),
    )
}

fn matrix_json(m: &PadicMatrix) -> Value {
    json!({
        "modulus": bigint_json(&m.modulus),
        "entries": m.m.iter().map(|row| row.iter().map(bigint_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn render(d: &Diagram, fmt: OutFormat, cmd: &str) -> Result<String, Failure> {
    let f = match fmt {
        OutFormat::Svg => complex::Format::Svg,
        OutFormat::Dot => complex::Format::Dot,
        OutFormat::Ascii | OutFormat::Text => complex::Format::Ascii,
        OutFormat::Json => return Err(bad_format(fmt, cmd)),
    };
    Ok(d.render(f)?)
}

fn text_or_json(
    fmt: OutFormat,
    text: String,
    js: impl FnOnce() -> Value,
) -> Result<String, Failure> {
    match fmt {
        OutFormat::Text => Ok(text),
        OutFormat::Json => Ok(pretty(&js())),
        _ => Err(Failure::Usage("this command writes text or json".into())),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn bad_format(fmt: OutFormat, cmd: &str) -> Failure {
    let name = fmt
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    Failure::Usage(format!("{cmd} does not support --format {name}"))
}
