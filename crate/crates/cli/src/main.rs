use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use superchar::bggcheck::{self, Report};
use superchar::borels::BorelElt;
use superchar::charring::{self, FormalChar};
use superchar::diagrams::{self, GenericityMode};
use superchar::rootdata::{self, decode, encode, Coords, RankProfile, Weight};
use superchar::vermacalc::Limits;
use superchar::Error;

#[derive(Parser)]
#[command(name = "superchar", version, about = "Highest weight combinatorics and characters for gl(m|n)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Positive, simple and flipped roots and the Weyl vectors of a Borel
    Roots(Common),
    /// All Borel subalgebras containing the standard even Borel
    Borels(Common),
    /// Weight diagram of a regular dominant weight
    Diagram(Common),
    /// Atypicality and atypical odd roots
    Atyp(Common),
    /// g-1-genericity test
    Generic {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Mode::Fast)]
        mode: Mode,
    },
    /// Truncated characters
    Char {
        #[command(flatten)]
        common: Common,
        #[arg(long = "type", value_enum)]
        kind: CharType,
    },
    /// Euler characteristic of the narrow BGG complex against the simple character
    Euler(Common),
    /// Verma characters across all pairs of Borels
    Lemma52 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        mismatches: usize,
    },
    /// Weight space dimensions of the narrow Verma module by linear algebra
    Image(Common),
    /// Run the verification battery
    Suite(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Coordinates `a1,...,am/b1,...,bn`, i.e. (λ+ρ, ε_i) and (λ+ρ, δ_j)
    #[arg(long, allow_hyphen_values = true, conflicts_with = "coeffs")]
    coords: Option<String>,
    /// Raw coefficients of λ in the basis ε_1..ε_m, δ_1..δ_n
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Borel as a partition (`2,1`, `()` for the distinguished one) or an εδ-word (`dede`)
    #[arg(long)]
    borel: Option<String>,
    #[arg(long, default_value_t = charring::DEFAULT_DEPTH)]
    depth: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Brute,
    Fast,
}

#[derive(Clone, Copy, ValueEnum)]
enum CharType {
    Verma,
    Even,
    Kac,
    Narrow,
    Simple,
}

enum Failure {
    Usage(String),
    Verification,
    Inconsistent(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_) => Failure::Inconsistent(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn parse_ints(s: &str) -> Result<Vec<i64>, Failure> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("not an integer: {t:?}")))
        })
        .collect()
}

impl Common {
    fn profile(&self) -> Result<RankProfile, Failure> {
        Ok(RankProfile::new(self.m, self.n)?)
    }

    fn weight(&self) -> Result<Weight, Failure> {
        let profile = self.profile()?;
        match (&self.coords, &self.coeffs) {
            (Some(c), None) => {
                let (eps, del) = c
                    .split_once('/')
                    .ok_or_else(|| Failure::Usage(format!("coords must look like a,b/c,d: {c:?}")))?;
                let coords = Coords::from_blocks(profile, &parse_ints(eps)?, &parse_ints(del)?)?;
                Ok(decode(&coords))
            }
            (None, Some(c)) => Ok(Weight::new(profile, parse_ints(c)?)?),
            _ => Err(Failure::Usage("give the weight with --coords or --coeffs".into())),
        }
    }

    fn borel(&self) -> Result<BorelElt, Failure> {
        let profile = self.profile()?;
        let Some(spec) = self.borel.as_deref().map(str::trim) else {
            return Ok(BorelElt::distinguished(profile));
        };
        let inner = spec.trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        if !inner.is_empty() && inner.chars().all(|c| "edεδ".contains(c)) {
            return Ok(BorelElt::parse_seq(profile, inner)?);
        }
        let parts = inner
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Failure::Usage(format!("bad Borel {spec:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BorelElt::from_partition(profile, &parts)?)
    }

    fn json(&self) -> bool {
        self.format == Format::Json
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("values serialize"));
}

fn roots(c: &Common) -> Outcome {
    let b = c.borel()?;
    let profile = b.profile();
    let names = |rs: &[rootdata::Root]| rs.iter().map(|r| r.to_string()).collect::<Vec<_>>();
    let positive = b.positive_system();
    let even: Vec<_> = positive.iter().filter(|r| !r.is_odd()).copied().collect();
    let odd = b.odd_positive();
    let simple = b.simple_roots();
    let flipped = b.flipped();
    let rho = rootdata::rho(profile);
    let rho_b = b.rho_b();
    if c.json() {
        print_json(&json!({
            "profile": [profile.m(), profile.n()],
            "borel": b.to_string(),
            "even_positive": names(&even),
            "odd_positive": names(&odd),
            "simple": names(&simple),
            "flipped": names(&flipped),
            "rho": rho.coeffs(),
            "rho_b": rho_b.coeffs(),
        }));
    } else {
        println!("{profile} {b}");
        println!("even positive: {}", names(&even).join(" "));
        println!("odd positive:  {}", names(&odd).join(" "));
        println!("simple:        {}", names(&simple).join(" "));
        println!("flipped:       {}", names(&flipped).join(" "));
        println!("rho:           {rho}");
        println!("rho^b:         {rho_b}");
    }
    Ok(())
}

fn borels(c: &Common) -> Outcome {
    let profile = c.profile()?;
    let all = BorelElt::enumerate(profile)?;
    if c.json() {
        let views: Vec<_> = all
            .iter()
            .map(|b| {
                let v = b.convert();
                json!({
                    "partition": v.partition,
                    "seq": b.seq_string(true),
                    "shuffle": v.shuffle,
                    "lattice_path": v.lattice_path,
                })
            })
            .collect();
        print_json(&json!(views));
    } else {
        for b in &all {
            println!("{b}");
        }
    }
    Ok(())
}

fn diagram(c: &Common) -> Outcome {
    let d = diagrams::weight_diagram(&c.weight()?)?;
    if c.json() {
        print_json(&serde_json::to_value(d.to_json()).expect("diagram serializes"));
    } else {
        println!("{}", d.render_default());
    }
    Ok(())
}

fn atyp(c: &Common) -> Outcome {
    let lambda = c.weight()?;
    let b = c.borel()?;
    let a = rootdata::atypicality(&lambda, &b)?;
    let gamma: Vec<String> = rootdata::gamma(&lambda).iter().map(|r| r.to_string()).collect();
    if c.json() {
        print_json(&json!({
            "coords": encode(&lambda).values(),
            "borel": b.to_string(),
            "atypicality": a.aty,
            "gamma": gamma,
        }));
    } else {
        println!("coords {} borel {b}", encode(&lambda));
        println!("atypicality {}", a.aty);
        println!("gamma {}", if gamma.is_empty() { "(empty)".into() } else { gamma.join(" ") });
    }
    Ok(())
}

fn generic(c: &Common, mode: Mode) -> Outcome {
    let lambda = c.weight()?;
    let mode = match mode {
        Mode::Brute => GenericityMode::Brute,
        Mode::Fast => GenericityMode::Fast,
    };
    let g = diagrams::is_g1_generic(&lambda, mode)?;
    if c.json() {
        print_json(&json!({ "coords": encode(&lambda).values(), "generic": g }));
    } else {
        println!("{}", if g { "generic" } else { "not generic" });
    }
    Ok(())
}

fn print_char(c: &Common, ch: &FormalChar, extra: serde_json::Value) {
    if c.json() {
        let mut v = serde_json::to_value(ch.to_json()).expect("character serializes");
        if let (Some(obj), Some(more)) = (v.as_object_mut(), extra.as_object()) {
            for (k, x) in more {
                obj.insert(k.clone(), x.clone());
            }
        }
        print_json(&v);
    } else {
        println!("top {} depth {}", ch.top(), ch.depth());
        if let Some(more) = extra.as_object() {
            for (k, x) in more {
                println!("{k}: {x}");
            }
        }
        for (d, terms) in ch.coeffs_by_depth() {
            for (w, coeff) in terms {
                println!("{d:>3}  {coeff:>6}  e^{w}");
            }
        }
    }
}

fn character(c: &Common, kind: CharType) -> Outcome {
    let lambda = c.weight()?;
    let d = c.depth;
    let (ch, extra) = match kind {
        CharType::Verma => (charring::char_verma(&c.borel()?, &lambda, d)?, json!({})),
        CharType::Even => (charring::char_even_simple(&lambda, d)?, json!({})),
        CharType::Kac => (charring::char_kac(&lambda, d)?, json!({})),
        CharType::Narrow => {
            let n = charring::char_narrow(&lambda, d)?;
            let mut extra = json!({ "generic": n.generic });
            if !n.generic {
                extra["warning"] = json!("weight is not g-1-generic; the formula is not established here");
            }
            (n.series, extra)
        }
        CharType::Simple => (charring::char_simple_td(&lambda, d)?, json!({})),
    };
    print_char(c, &ch, extra);
    Ok(())
}

fn emit_reports(c: &Common, reports: &[Report]) -> Outcome {
    if c.json() {
        print_json(&serde_json::to_value(reports).expect("reports serialize"));
    } else {
        for r in reports {
            println!("{}", r.text_line());
            if !r.pass {
                println!("  {}", r.details);
            }
        }
    }
    if reports.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn euler(c: &Common) -> Outcome {
    let r = bggcheck::euler_check(&c.weight()?, c.depth)?;
    emit_reports(c, &[r.to_report()])
}

fn lemma52(c: &Common, trials: usize, mismatches: usize) -> Outcome {
    let profile = c.profile()?;
    let r = bggcheck::lemma52_sweep(profile, trials, mismatches, c.depth, c.seed)?;
    let anchor = c.weight().unwrap_or_else(|_| Weight::zero(profile));
    emit_reports(c, &[r.to_report(&anchor)])
}

fn image(c: &Common) -> Outcome {
    let r = bggcheck::narrow_image_check(&c.weight()?, c.depth, &Limits::from_env())?;
    emit_reports(c, &[r])
}

fn suite(c: &Common) -> Outcome {
    let reports = bggcheck::battery(c.seed, &Limits::from_env())?;
    emit_reports(c, &reports)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Roots(c) => roots(c),
        Command::Borels(c) => borels(c),
        Command::Diagram(c) => diagram(c),
        Command::Atyp(c) => atyp(c),
        Command::Generic { common, mode } => generic(common, *mode),
        Command::Char { common, kind } => character(common, *kind),
        Command::Euler(c) => euler(c),
        Command::Lemma52 { common, trials, mismatches } => lemma52(common, *trials, *mismatches),
        Command::Image(c) => image(c),
        Command::Suite(c) => suite(c),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Inconsistent(msg)) => {
            eprintln!("verification failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: superchar <COMMAND> --m M --n N [--coords a,b/c | --coeffs a,b,c] [--depth D] [--format text|json]");
            ExitCode::from(2)
        }
    }
}
