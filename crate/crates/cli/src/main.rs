//! `picard`: command-line front end to the Picard-curve library.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use picard_core::arith::factor::{factor_int, DEFAULT_TRIAL_BOUND};
use picard_core::arith::hilbert::{nontrivial_places, relevant_places};
use picard_core::arith::rat::{is_integral, vp};
use picard_core::arith::{fmt_rat, rat, hilbert_symbol, parse_rat, solve_sunit_equation, Place, Rat};
use picard_core::binary_forms::{
    are_equivalent, disc_binary, hessian_shadow, invariant_i, invariant_j, rational_symmetries, reduce_quartic,
    BinaryQuartic,
};
use picard_core::db::{db_build, BuildOptions, CurveInput, Database, Query};
use picard_core::invariants::{
    automorphism_type, normalized_point, qbar_class, special_model, twists_with_good_reduction_outside,
};
use picard_core::models::{global_minimal_model, minimize_at_prime, PicardCurve, PicardModel, DEFAULT_DEPTH};
use picard_core::parse::parse_univariate;
use picard_core::reduction::{candidate_primes, has_good_reduction, validate_conductor_exponents};
use picard_core::special_class::{classify_special_good_outside_23, enumerate_special_twists_23, ClassificationTable};
use picard_core::ternary_forms::{disc_ternary, TernaryQuartic};
use picard_core::{PicardError, Result};

/// Like `println!`, but exits quietly when stdout is closed (e.g. piped into `head`).
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        if writeln!(std::io::stdout().lock(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

macro_rules! out_raw {
    ($($t:tt)*) => {{
        use std::io::Write;
        if write!(std::io::stdout().lock(), $($t)*).is_err() {
            std::process::exit(0);
        }
    }};
}

#[derive(Parser)]
#[command(name = "picard", version, about = "Exact arithmetic on Picard curves y^3 = f(x)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solutions of x + y = 1 in S-units, one canonical λ per line.
    Sunit {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, default_value_t = 10)]
        bound: u32,
    },
    /// Hilbert symbols (a, b)_v at the places where they can be nontrivial.
    Hilbert {
        #[arg(short, allow_hyphen_values = true)]
        a: String,
        #[arg(short, allow_hyphen_values = true)]
        b: String,
    },
    /// Binary quartic operations.
    #[command(subcommand)]
    Quartic(QuarticCommand),
    /// Discriminant of a ternary quartic form.
    Disc {
        #[arg(long)]
        ternary: String,
        /// Trial-division bound for the factorization.
        #[arg(long, default_value_t = DEFAULT_TRIAL_BOUND)]
        trial_bound: u64,
    },
    /// Minimal model at one prime or at every prime of Δ.
    Minimize {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
    },
    /// Good or bad reduction at each prime.
    Goodred {
        #[command(flatten)]
        curve: CurveArg,
        /// Defaults to the primes dividing Δ and 3 (and 2 for special curves).
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
    },
    /// Checks the stored conductor exponents of a database.
    Validate {
        #[arg(long)]
        db: PathBuf,
    },
    /// Weighted point, geometric class and automorphism type.
    Invariants {
        #[command(flatten)]
        curve: CurveArg,
    },
    /// Twists with good reduction outside a set containing 3.
    Twists {
        #[command(flatten)]
        curve: CurveArg,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    /// The special polynomials with good reduction outside {2, 3}.
    #[command(subcommand)]
    Special(SpecialCommand),
    /// Curve database.
    #[command(subcommand)]
    Db(DbCommand),
}

#[derive(Args)]
struct CurveArg {
    /// Equation such as "y^3 = x^4 + x" or a ternary form.
    #[arg(long)]
    curve: String,
}

#[derive(Args)]
struct PolyArg {
    /// Polynomial in x of degree at most 4, e.g. "x^4+6*x^2-3".
    #[arg(long)]
    poly: String,
}

#[derive(Subcommand)]
enum QuarticCommand {
    /// Reduced quartic at a prime.
    Reduce {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        prime: u64,
    },
    /// Invariants I, J and the discriminant.
    Disc {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Hessian shadow.
    Shadow {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Rational symmetries A with g∘A = μ·g.
    Symmetries {
        #[command(flatten)]
        poly: PolyArg,
    },
    /// Rational equivalence g₂∘A = μ·g₁.
    Equiv {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        other: String,
    },
}

#[derive(Subcommand)]
enum SpecialCommand {
    /// Rebuilds and prints the classification table.
    Classify,
    /// The twists x^4 = a·g(y), a = ±2^μ3^ν, as database records.
    Twists {
        #[arg(long, default_value_t = 1)]
        depth: u32,
    },
    /// Hessian shadow of a special polynomial and its table entry.
    Shadow {
        #[command(flatten)]
        poly: PolyArg,
    },
}

#[derive(Subcommand)]
enum DbCommand {
    /// Builds a database from one curve per line.
    Build {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: u32,
    },
    /// Looks up records.
    Query {
        #[arg(long)]
        db: PathBuf,
        #[arg(long, group = "key")]
        curve: Option<String>,
        /// With --curve: every stored twist of the curve.
        #[arg(long, requires = "curve")]
        twists: bool,
        #[arg(long, group = "key", value_delimiter = ',')]
        bad_primes: Option<Vec<u64>>,
        /// Weighted point "c2,c3,c4".
        #[arg(long, group = "key")]
        point: Option<String>,
    },
    /// Full consistency check of a database.
    Validate {
        #[arg(long)]
        db: PathBuf,
    },
}

/// How a command ended.
enum Outcome {
    Ok,
    Violations,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violations) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &PicardError) -> u8 {
    match e {
        PicardError::Parse(_)
        | PicardError::Degenerate(_)
        | PicardError::Precondition(_)
        | PicardError::NotSquarefree
        | PicardError::Record(_) => 2,
        PicardError::Computation(_) | PicardError::Verification(_) => 1,
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Sunit { primes, bound } => {
            for l in solve_sunit_equation(&primes, bound) {
                out!("{}", fmt_rat(&l));
            }
        }
        Command::Hilbert { a, b } => hilbert(&a, &b)?,
        Command::Quartic(q) => quartic(q)?,
        Command::Disc { ternary, trial_bound } => {
            let f = TernaryQuartic::parse(&ternary)?;
            let d = disc_ternary(&f)?;
            out!("disc = {}", fmt_rat(&d));
            out!("factorization = {}", factor_rat_text(&d, trial_bound));
        }
        Command::Minimize { curve, prime, depth } => minimize(&curve.curve, prime, depth)?,
        Command::Goodred { curve, primes } => {
            let c = PicardCurve::parse(&curve.curve)?;
            let primes = if primes.is_empty() { candidate_primes(&c)? } else { primes };
            for p in primes {
                out!("{}", has_good_reduction(&c, p)?);
            }
        }
        Command::Validate { db } => return validate_conductors(&db),
        Command::Invariants { curve } => invariants(&curve.curve)?,
        Command::Twists { curve, primes } => {
            let c = PicardCurve::parse(&curve.curve)?;
            let m = nonspecial(&c)?;
            for t in twists_with_good_reduction_outside(&m, &primes)? {
                out!("{}", PicardModel::NonspecialShort(t).render());
            }
        }
        Command::Special(s) => special(s)?,
        Command::Db(d) => return db(d),
    }
    Ok(Outcome::Ok)
}

fn parse_rat_arg(s: &str) -> Result<Rat> {
    parse_rat(s.trim()).ok_or_else(|| PicardError::Parse(format!("not a rational number: {s}")))
}

fn factor_rat_text(q: &Rat, bound: u64) -> String {
    if *q == rat(0) {
        return "0".into();
    }
    let num = factor_int(q.numer(), bound).render();
    if is_integral(q) {
        num
    } else {
        format!("({num}) / ({})", factor_int(q.denom(), bound).render())
    }
}

fn place_name(v: Place) -> String {
    match v {
        Place::Finite(p) => p.to_string(),
        Place::Infinite => "inf".into(),
    }
}

fn hilbert(a: &str, b: &str) -> Result<()> {
    let (a, b) = (parse_rat_arg(a)?, parse_rat_arg(b)?);
    if a == rat(0) || b == rat(0) {
        return Err(PicardError::Degenerate("Hilbert symbol needs nonzero entries".into()));
    }
    for v in relevant_places(&a, &b) {
        out!("{}: {}", place_name(v), hilbert_symbol(&a, &b, v));
    }
    let bad: Vec<String> = nontrivial_places(&a, &b).into_iter().map(place_name).collect();
    out!("nontrivial: {}", if bad.is_empty() { "none".into() } else { bad.join(",") });
    Ok(())
}

fn quartic_arg(s: &str) -> Result<BinaryQuartic> {
    BinaryQuartic::from_poly(&parse_univariate(s)?)
}

fn quartic(q: QuarticCommand) -> Result<()> {
    match q {
        QuarticCommand::Reduce { poly, prime } => {
            let (g, a) = reduce_quartic(&quartic_arg(&poly.poly)?, prime)?;
            out!("{g}");
            out!("map = {a}");
        }
        QuarticCommand::Disc { poly } => {
            let g = quartic_arg(&poly.poly)?;
            out!("I = {}", fmt_rat(&invariant_i(&g)));
            out!("J = {}", fmt_rat(&invariant_j(&g)));
            out!("disc = {}", fmt_rat(&disc_binary(&g)));
        }
        QuarticCommand::Shadow { poly } => out!("{}", hessian_shadow(&quartic_arg(&poly.poly)?)?),
        QuarticCommand::Symmetries { poly } => {
            for (a, mu) in rational_symmetries(&quartic_arg(&poly.poly)?) {
                out!("{a} mu={}", fmt_rat(&mu));
            }
        }
        QuarticCommand::Equiv { poly, other } => match are_equivalent(&quartic_arg(&poly.poly)?, &quartic_arg(&other)?) {
            Some((a, mu)) => out!("equivalent: {a} mu={}", fmt_rat(&mu)),
            None => out!("not equivalent"),
        },
    }
    Ok(())
}

fn minimize(curve: &str, prime: Option<u64>, depth: u32) -> Result<()> {
    let c = PicardCurve::parse(curve)?;
    match prime {
        Some(p) => {
            let m = minimize_at_prime(&c, p, depth)?;
            out!("{}", m.model.render());
            let v = vp(&m.disc(), p);
            out!("v_{p}(disc) = {v}{}", if v < 9 { " (minimal)" } else { "" });
        }
        None => {
            let g = global_minimal_model(&c, depth)?;
            out!("{}", g.curve.model.render());
            out!("disc = {}", g.render_disc());
            for e in &g.exponents {
                out!(
                    "{}: input {} local {} global {} {}",
                    e.p,
                    e.input,
                    e.local,
                    e.global,
                    if e.certified { "minimal" } else { "uncertified" }
                );
            }
        }
    }
    Ok(())
}

fn nonspecial(c: &PicardCurve) -> Result<picard_core::models::NonspecialShort> {
    if c.is_special() {
        return Err(PicardError::Precondition("special curve".into()));
    }
    c.model
        .nonspecial_short()
        .ok_or_else(|| PicardError::Precondition("expected a y^3 = f(x) model".into()))
}

fn invariants(curve: &str) -> Result<()> {
    let c = PicardCurve::parse(curve)?;
    out!("special: {}", c.is_special());
    if c.is_special() {
        let table = ClassificationTable::embedded();
        let m = special_model(&c).ok_or_else(|| PicardError::Computation("no special model".into()))?;
        match table.identify(&m) {
            Some((i, a)) => out!("class: {i} twist {}", fmt_rat(&a)),
            None => out!("class: none"),
        }
        return Ok(());
    }
    let m = nonspecial(&c)?;
    out!("point: {}", normalized_point(&m)?);
    out!("qbar: {}", qbar_class(&m));
    out!("aut: {}", automorphism_type(&m)?);
    Ok(())
}

fn special(s: SpecialCommand) -> Result<()> {
    match s {
        SpecialCommand::Classify => out_raw!("{}", classify_special_good_outside_23()?),
        SpecialCommand::Twists { depth } => {
            let table = ClassificationTable::embedded();
            let inputs: Vec<CurveInput> = enumerate_special_twists_23(&table)
                .into_iter()
                .map(|t| {
                    let mut i = CurveInput::new(PicardCurve::new(PicardModel::SpecialShort(t.curve))?);
                    i.provenance = format!("special-23/{}", t.class);
                    Ok(i)
                })
                .collect::<Result<_>>()?;
            out_raw!("{}", db_build(&inputs, &table, &BuildOptions { depth })?.to_text());
        }
        SpecialCommand::Shadow { poly } => {
            let g = quartic_arg(&poly.poly)?;
            let h = hessian_shadow(&g)?;
            out!("{h}");
            let table = ClassificationTable::embedded();
            let find = |f: &BinaryQuartic| table.classes.iter().find(|cl| are_equivalent(&cl.poly, f).is_some());
            match (find(&g), find(&h)) {
                (Some(a), Some(b)) => out!("entries: {} -> {}", a.index, b.index),
                _ => out!("entries: not in table"),
            }
        }
    }
    Ok(())
}

fn read_db(path: &PathBuf) -> Result<Database> {
    let text = fs::read_to_string(path).map_err(|e| PicardError::Parse(format!("{}: {e}", path.display())))?;
    Database::parse(&text)
}

fn validate_conductors(path: &PathBuf) -> Result<Outcome> {
    let db = read_db(path)?;
    let mut n = 0;
    for r in &db.records {
        for v in validate_conductor_exponents(&r.conductor_data()) {
            out!("{}: {v}", r.label);
            n += 1;
        }
    }
    report(n)
}

fn report(violations: usize) -> Result<Outcome> {
    if violations == 0 {
        out!("ok");
        Ok(Outcome::Ok)
    } else {
        out!("{violations} violation(s)");
        Ok(Outcome::Violations)
    }
}

fn parse_point(s: &str) -> Result<picard_core::invariants::WeightedPoint> {
    let c: Vec<Rat> = s.split(',').map(parse_rat_arg).collect::<Result<_>>()?;
    let [c2, c3, c4]: [Rat; 3] = c
        .try_into()
        .map_err(|_| PicardError::Parse(format!("expected c2,c3,c4, got {s}")))?;
    Ok(picard_core::invariants::WeightedPoint::new(c2, c3, c4))
}

fn db(cmd: DbCommand) -> Result<Outcome> {
    let table = ClassificationTable::embedded();
    match cmd {
        DbCommand::Build { input, out, depth } => {
            let text =
                fs::read_to_string(&input).map_err(|e| PicardError::Parse(format!("{}: {e}", input.display())))?;
            let inputs: Vec<CurveInput> = text
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
                .map(|(n, l)| {
                    CurveInput::parse_line(l).map_err(|e| PicardError::Parse(format!("line {}: {e}", n + 1)))
                })
                .collect::<Result<_>>()?;
            let db = db_build(&inputs, &table, &BuildOptions { depth })?;
            fs::write(&out, db.to_text()).map_err(|e| PicardError::Computation(format!("{}: {e}", out.display())))?;
            out!("{} records from {} curves", db.len(), inputs.len());
        }
        DbCommand::Query {
            db,
            curve,
            twists,
            bad_primes,
            point,
        } => {
            let db = read_db(&db)?;
            let q = match (curve, bad_primes, point) {
                (Some(c), _, _) if twists => Query::Twists(PicardCurve::parse(&c)?),
                (Some(c), _, _) => Query::Curve(PicardCurve::parse(&c)?),
                (_, Some(s), _) => Query::BadPrimes(s),
                (_, _, Some(p)) => Query::Point(parse_point(&p)?),
                _ => return Err(PicardError::Parse("one of --curve, --bad-primes, --point is required".into())),
            };
            for r in db.query(&q, &table)? {
                out!("{}", r.to_text());
            }
        }
        DbCommand::Validate { db } => {
            let db = read_db(&db)?;
            let v = db.validate(&table);
            for x in &v {
                out!("{x}");
            }
            return report(v.len());
        }
    }
    Ok(Outcome::Ok)
}
