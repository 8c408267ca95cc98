use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use moyalquot::atlas::{
    atlas_validate, kchart_space, kchart_star, parse_atlas, transport, KChartFunction, ProjectiveAtlas,
};
use moyalquot::parse::{parse_function, parse_series};
use moyalquot::symprod::{
    invariant_star, quot_point_validate, support_divisor, ProductContext, QuotCellPoint, SymSeries,
};
use moyalquot::verify::{run_suite, SuiteConfig};
use moyalquot::{moyal, Error, ErrorClass, GaussianRational as G, HSeries, MoyalContext, SymplecticSpace, Vars};

#[derive(Parser)]
#[command(
    name = "moyalquot",
    version,
    about = "Exact star products on flat spaces, the projective line and its symmetric products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Star product of two series.
    Star {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Poisson bracket of two functions.
    Poisson {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Run a verification suite.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, env = "MOYALQUOT_ORDER", default_value_t = 6)]
        order: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Atlas file; the projective line when absent.
        #[arg(long)]
        atlas: Option<PathBuf>,
    },
    /// Rewrite a series in the coordinates of another chart.
    Transport {
        #[arg(long)]
        atlas: Option<PathBuf>,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, env = "MOYALQUOT_ORDER", default_value_t = 6)]
        order: usize,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Check an atlas file for degenerate or inconsistent transitions.
    ValidateAtlas { path: PathBuf },
    /// Check a point of the open cell.
    ValidatePoint {
        /// Comma-separated support points.
        #[arg(long, allow_hyphen_values = true)]
        support: String,
        /// Comma-separated covectors, one per support point.
        #[arg(long, allow_hyphen_values = true)]
        covectors: String,
        /// Comma-separated flat coordinates u1,v1,u2,v2,...
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        flat: String,
    },
}

#[derive(Args)]
struct SpaceArgs {
    #[arg(long, value_enum, default_value = "flat2")]
    space: Space,
    #[arg(long, env = "MOYALQUOT_ORDER", default_value_t = 6)]
    order: usize,
    /// Number of Darboux pairs for flatN; number of points for product.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Rank for product.
    #[arg(long, default_value_t = 2)]
    r: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Space {
    Flat2,
    #[value(name = "flatN")]
    FlatN,
    Kchart,
    Product,
}

impl Space {
    fn name(self) -> &'static str {
        match self {
            Space::Flat2 => "flat2",
            Space::FlatN => "flatN",
            Space::Kchart => "kchart",
            Space::Product => "product",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Structured,
}

enum Failure {
    Engine(Error),
    Io(String),
    Verification,
    Invalid,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

type Outcome = Result<(), Failure>;

fn chart_vars(space: Space) -> Vars {
    match space {
        Space::Kchart => Vars::new(["z", "p"]),
        _ => Vars::new(["x", "y"]),
    }
}

fn symplectic(args: &SpaceArgs) -> Result<SymplecticSpace<G>, Error> {
    match args.space {
        Space::Flat2 => Ok(SymplecticSpace::flat2()),
        Space::FlatN => {
            if args.d == 0 {
                return Err(Error::Usage("--d must be positive".into()));
            }
            Ok(SymplecticSpace::flat(args.d))
        }
        Space::Kchart => kchart_space(&chart_vars(Space::Kchart)),
        Space::Product => Ok(ProductContext::new(args.d, args.r, args.order)?.space()),
    }
}

fn structured(space: &str, series: &HSeries<G>) -> Value {
    let coefficients: Vec<Value> = series
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            json!({
                "h_power": k,
                "numerator": c.num().to_expr_string(),
                "denominator": c.den().to_expr_string(),
            })
        })
        .collect();
    json!({ "space": space, "order": series.order(), "coefficients": coefficients })
}

fn print_series(output: Output, space: &str, series: &HSeries<G>) {
    match output {
        Output::Text => println!("{}", series.to_expr_string()),
        Output::Structured => {
            let doc = structured(space, series);
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
    }
}

fn star(space: &SpaceArgs, output: Output, f: &str, g: &str) -> Outcome {
    let product = match space.space {
        Space::Kchart => {
            let vars = chart_vars(Space::Kchart);
            let f = parse_series(f, &vars, space.order)?;
            let g = parse_series(g, &vars, space.order)?;
            kchart_star(space.order, &f, &g)?
        }
        Space::Product => {
            let ctx = ProductContext::new(space.d, space.r, space.order)?;
            let f = SymSeries {
                value: parse_series(f, ctx.vars(), space.order)?,
            };
            let g = SymSeries {
                value: parse_series(g, ctx.vars(), space.order)?,
            };
            invariant_star(&ctx, &f, &g)?.value
        }
        _ => {
            let ctx = MoyalContext::new(symplectic(space)?, space.order);
            let f = parse_series(f, ctx.vars(), space.order)?;
            let g = parse_series(g, ctx.vars(), space.order)?;
            moyal::moyal_star(&ctx, &f, &g)?
        }
    };
    print_series(output, space.space.name(), &product);
    Ok(())
}

fn poisson(space: &SpaceArgs, f: &str, g: &str) -> Outcome {
    let ctx = MoyalContext::new(symplectic(space)?, 0);
    let f = parse_function(f, ctx.vars())?;
    let g = parse_function(g, ctx.vars())?;
    println!("{}", moyal::poisson_bracket(&ctx, &f, &g)?.to_expr_string());
    Ok(())
}

fn load_atlas(path: Option<&Path>) -> Result<ProjectiveAtlas, Failure> {
    match path {
        None => Ok(ProjectiveAtlas::cp1()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            Ok(parse_atlas(&text)?)
        }
    }
}

fn verify(suite: &str, cfg: SuiteConfig) -> Outcome {
    let report = run_suite(suite, &cfg)?;
    println!("{report}");
    if report.is_success() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn transport_cmd(atlas: Option<&Path>, from: &str, to: &str, order: usize, output: Output, expr: &str) -> Outcome {
    let atlas = load_atlas(atlas)?;
    let vars = atlas.chart(from)?.vars.clone();
    let f = KChartFunction::new(&atlas, from, parse_series(expr, &vars, order)?)?;
    let moved = transport(&atlas, &f, to)?;
    print_series(output, "kchart", &moved.value);
    Ok(())
}

fn validate_atlas(path: &Path) -> Outcome {
    let atlas = load_atlas(Some(path))?;
    let report = atlas_validate(&atlas);
    if report.is_valid() {
        println!(
            "valid: {} charts, {} transitions",
            atlas.charts().len(),
            atlas.transition_entries().count()
        );
        return Ok(());
    }
    for issue in &report.issues {
        println!("{issue}");
    }
    Err(Failure::Invalid)
}

fn literals(list: &str) -> Result<Vec<G>, Error> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<G>().map_err(|e| Error::Syntax {
                offset: 0,
                message: e.to_string(),
            })
        })
        .collect()
}

fn validate_point(support: &str, covectors: &str, flat: &str) -> Outcome {
    let flat = literals(flat)?;
    if flat.len() % 2 != 0 {
        return Err(Error::Usage("--flat needs an even number of coordinates".into()).into());
    }
    let pt = QuotCellPoint {
        support: literals(support)?,
        covectors: literals(covectors)?,
        flat: flat.chunks(2).map(|uv| (uv[0].clone(), uv[1].clone())).collect(),
    };
    let report = quot_point_validate(&pt);
    if !report.is_valid() {
        for issue in &report.issues {
            println!("{issue}");
        }
        return Err(Failure::Invalid);
    }
    let divisor: Vec<String> = support_divisor(&pt)?.iter().map(ToString::to_string).collect();
    println!("valid: support {{{}}}", divisor.join(", "));
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Star { space, output, f, g } => star(&space, output, &f, &g),
        Command::Poisson { space, f, g } => poisson(&space, &f, &g),
        Command::Verify {
            suite,
            seed,
            samples,
            order,
            d,
            r,
            atlas,
        } => {
            let cfg = SuiteConfig {
                seed,
                samples,
                order,
                d,
                r,
                atlas: load_atlas(atlas.as_deref())?,
            };
            verify(&suite, cfg)
        }
        Command::Transport {
            atlas,
            from,
            to,
            order,
            output,
            expr,
        } => transport_cmd(atlas.as_deref(), &from, &to, order, output, &expr),
        Command::ValidateAtlas { path } => validate_atlas(&path),
        Command::ValidatePoint {
            support,
            covectors,
            flat,
        } => validate_point(&support, &covectors, &flat),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Invalid) => ExitCode::from(3),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(4)
        }
        Err(Failure::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Parse => 2,
                ErrorClass::Domain => 3,
                ErrorClass::Usage => 4,
            })
        }
    }
}
