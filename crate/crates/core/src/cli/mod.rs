//! Command-line front end. Every command produces a JSON value and a text
//! rendering; the exit code is 0 on success, 1 when a check fails and 2 on
//! bad input.

pub mod schema;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::adams::{
    decompose, kernel_annihilation, r_k, verify_eigenvalues, verify_theta_identities, AdamsEndoModule,
};
use crate::arith::{factorial, prime_factors};
use crate::bounds::{
    bott_kernel_bound, euler_index_gap_bound, n_s, n_s_oracle, phi_kernel_bound, product_valuation, Supernatural,
};
use crate::chern::{k0_shadow_check, verify_chern_duality};
use crate::endo::random::{random_endo_module, RandomConfig};
use crate::endo::{verify_props, EndoModule};
use crate::error::{Error, Result};
use crate::graded::{bso_report, fixture, sl1_report, ComponentCap, GradedRingPresentation};
use crate::lattice::{BaseRing, FPModule, ModuleMap};
use schema::{document_of, parse_document, parse_presentation, Document};

pub const SEED_ENV: &str = "ENDOKALC_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "endokalc", version, about = "Exact endo-module and connective K-theory calculator")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for random instances; ENDOKALC_SEED takes precedence.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Largest k used by the N_s oracle.
    #[arg(long, default_value_t = 200, global = true)]
    pub kmax: u64,
    /// Largest prime examined by the N_s oracle.
    #[arg(long = "prime-bound", default_value_t = 100, global = true)]
    pub prime_bound: u64,
    /// Exponent bound NAME=E for a ring generator; repeatable.
    #[arg(long = "cap", global = true)]
    pub caps: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Endo-modules read from JSON files.
    Endo {
        #[command(subcommand)]
        cmd: EndoCmd,
    },
    /// Torsion bounds.
    Bounds {
        #[command(subcommand)]
        cmd: BoundsCmd,
    },
    /// Adams operations.
    Adams {
        #[command(subcommand)]
        cmd: AdamsCmd,
    },
    /// Graded rings with term relations.
    Ring {
        #[command(subcommand)]
        cmd: RingCmd,
    },
    /// Built-in ring fixtures and their table checks.
    Fixtures {
        #[command(subcommand)]
        cmd: FixturesCmd,
    },
    /// Chern class identities in truncated root rings.
    Chern {
        #[command(subcommand)]
        cmd: ChernCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum EndoCmd {
    /// The s-th derived endo-module.
    Derive {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        s: usize,
    },
    /// Boundary table, colimit filtration and classification.
    Report { file: PathBuf },
    /// Stability index and derivations until degeneracy.
    Classify { file: PathBuf },
    /// Structural properties of derived endo-modules, for a file or random instances.
    Props {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        file: Option<PathBuf>,
        #[arg(long)]
        random: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// N_s in closed form and from the truncated gcd.
    Ns {
        #[arg(long)]
        s: i64,
    },
    /// Bound for the kernel of the Chow to graded K comparison.
    Phi {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        i: i64,
    },
    /// Bound for the kernel of the Bott map.
    Bott {
        #[arg(long)]
        i: i64,
    },
    /// Bound on the p-adic gap between Euler characteristic and index.
    Euler {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        p: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum AdamsCmd {
    /// Eigenvalue checks and kernel annihilation.
    Check {
        file: PathBuf,
        #[arg(long = "m-max", default_value_t = 64)]
        m_max: u32,
    },
    /// Splits the colimit along its filtration with the σ_k idempotents.
    Sigma { file: PathBuf },
    /// Identities of the Bott cannibalistic series.
    Theta {
        #[arg(long)]
        k: i64,
        #[arg(long = "k-prime")]
        k_prime: Option<i64>,
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
}

#[derive(Debug, Args)]
pub struct RingSource {
    /// Built-in presentation: ck_sl1, ck_bso or ch_bso.
    #[arg(long, conflicts_with = "file", requires = "param")]
    pub fixture: Option<String>,
    #[arg(long)]
    pub param: Option<u64>,
    /// Presentation file {generators: [{name, degree}], relations: [{coeff, exponents}]}.
    #[arg(long, required_unless_present = "fixture")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum RingCmd {
    /// Graded component in one degree.
    Component {
        #[command(flatten)]
        source: RingSource,
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
    },
    /// Quotient by β (value 0) or by β - 1 (value 1).
    Specialize {
        #[command(flatten)]
        source: RingSource,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        value: u8,
    },
    /// Endo-module of components over a degree window with the Bott maps.
    Endo {
        #[command(flatten)]
        source: RingSource,
        #[arg(long, allow_negative_numbers = true)]
        lo: i64,
        #[arg(long, allow_negative_numbers = true)]
        hi: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixturesCmd {
    /// Table checks for the SL_1 ring at a prime p.
    Sl1 {
        #[arg(long)]
        p: u64,
    },
    /// Table checks for the B SO_n ring at an odd n.
    Bso {
        #[arg(long)]
        n: u64,
        #[arg(long = "exp-cap", default_value_t = 2)]
        exp_cap: u32,
        #[arg(long = "beta-cap", default_value_t = 4)]
        beta_cap: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum ChernCmd {
    /// Duality, Whitney and rank-one checks through a truncation degree.
    Verify {
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 8)]
        trunc: u32,
    },
}

/// A finished command: its report and whether every check passed.
pub struct Outcome {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

impl Outcome {
    fn new(json: Value, text: String, ok: bool) -> Self {
        Outcome { json, text, ok }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::VerificationFailure(_) | Error::PropertyViolation { .. } => 1,
        _ => 2,
    }
}

/// Parses `args`, runs the command and writes the report. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli).and_then(|o| emit(&cli, &o).map(|()| o.ok)) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(cli: &Cli, outcome: &Outcome) -> Result<()> {
    let body = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.json).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => outcome.text.clone(),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Error::parse(path.display().to_string(), format!("cannot write: {e}"))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn effective_seed(cli: &Cli) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::parse(SEED_ENV, format!("not an unsigned integer: {v:?}"))),
        Err(_) => Ok(cli.seed),
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::parse(path.display().to_string(), format!("cannot read: {e}")))
}

fn load(path: &Path) -> Result<Document> {
    parse_document(&read(path)?).map_err(|e| match e {
        Error::ParseError { location, message } => Error::ParseError {
            location: format!("{}#{location}", path.display()),
            message,
        },
        other => other,
    })
}

fn caps(cli: &Cli) -> Result<ComponentCap> {
    cli.caps
        .iter()
        .try_fold(ComponentCap::new(), |c, entry| c.parse_entry(entry))
}

fn big_json(n: &num_bigint::BigUint) -> Value {
    u64::try_from(n).map_or_else(|_| json!(n.to_string()), |v| json!(v))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Endo { cmd } => endo(cli, cmd),
        Command::Bounds { cmd } => bounds(cli, cmd),
        Command::Adams { cmd } => adams(cmd),
        Command::Ring { cmd } => ring(cli, cmd),
        Command::Fixtures { cmd } => fixtures(cmd),
        Command::Chern { cmd } => chern(cmd),
    }
}

fn table_json(e: &EndoModule) -> Value {
    Value::Array(
        e.table()
            .into_iter()
            .map(|(i, a, b, c)| json!({"index": i, "a": a, "b": b, "c": c}))
            .collect(),
    )
}

fn table_text(e: &EndoModule, out: &mut String) {
    let rows: Vec<_> = e.table();
    let _ = writeln!(out, "{:>5}  {:<16} {:<16} {:<16}", "i", "A_i", "B_i", "C_i");
    for (i, a, b, c) in rows {
        let _ = writeln!(out, "{i:>5}  {:<16} {:<16} {:<16}", a.to_string(), b.to_string(), c.to_string());
    }
}

fn endo(cli: &Cli, cmd: &EndoCmd) -> Result<Outcome> {
    match cmd {
        EndoCmd::Derive { file, s } => {
            let doc = load(file)?;
            let derived = match &doc.adams {
                Some(ae) => {
                    let d = ae.derived_n(*s);
                    Document { endo: d.base().clone(), adams: Some(d) }
                }
                None => Document { endo: doc.endo.derived_n(*s), adams: None },
            };
            let mut text = format!("derivative {s} over {}\n", derived.endo.ring());
            table_text(&derived.endo, &mut text);
            let json = json!({"s": s, "table": table_json(&derived.endo), "module": document_of(&derived)});
            Ok(Outcome::new(json, text, true))
        }
        EndoCmd::Report { file } => {
            let doc = load(file)?;
            let e = &doc.endo;
            let filt = e.filtration();
            let class = e.classify();
            let levels: Vec<Value> = filt
                .levels
                .iter()
                .zip(&filt.epsilon_iso_from)
                .map(|(l, s)| json!({"index": l.index, "submodule": l.submodule.canonical(), "quotient": l.quotient.canonical(), "epsilon_iso_from": s}))
                .collect();
            let mut text = format!("endo-module over {} on [{}, {}]\n", e.ring(), e.lo(), e.hi());
            table_text(e, &mut text);
            let _ = writeln!(text, "colimit: {}", filt.colimit.canonical());
            for (l, s) in filt.levels.iter().zip(&filt.epsilon_iso_from) {
                let _ = writeln!(
                    text,
                    "H_({}) = {}, graded piece {}, epsilon iso from derivative {s}",
                    l.index,
                    l.submodule.canonical(),
                    l.quotient.canonical()
                );
            }
            let _ = writeln!(
                text,
                "stable from {}, degenerate after {} derivations",
                class.min_stable_d, class.derivations_to_degeneracy
            );
            let json = json!({
                "table": table_json(e),
                "colimit": filt.colimit.canonical(),
                "filtration": levels,
                "classification": class,
            });
            Ok(Outcome::new(json, text, true))
        }
        EndoCmd::Classify { file } => {
            let class = load(file)?.endo.classify();
            let text = format!(
                "min stable d: {}\ndegenerate: {}\nderivations to degeneracy: {}\n",
                class.min_stable_d, class.degenerate, class.derivations_to_degeneracy
            );
            Ok(Outcome::new(to_json(&class), text, true))
        }
        EndoCmd::Props { file: Some(file), .. } => {
            let report = verify_props(&load(file)?.endo);
            let mut text = String::new();
            for item in &report.items {
                let _ = writeln!(text, "{:<6} {:<4} {}", item.name, if item.passed { "PASS" } else { "FAIL" }, item.description);
            }
            let ok = report.all_passed();
            Ok(Outcome::new(to_json(&report), text, ok))
        }
        EndoCmd::Props { random, .. } => {
            let n = random.expect("clap requires a file or --random");
            let seed = effective_seed(cli)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cfg = RandomConfig::default();
            let ring = BaseRing::integers();
            let mut failures = Vec::new();
            let mut checks = 0usize;
            for instance in 0..n {
                let e = random_endo_module(&mut rng, &ring, &cfg);
                let report = verify_props(&e);
                for item in report.items {
                    checks += item.checks;
                    if !item.passed {
                        failures.push(json!({"instance": instance, "item": item.name, "witness": item.witness}));
                    }
                }
            }
            let text = format!("{n} random instances (seed {seed}): {checks} checks, {} failures\n", failures.len());
            let ok = failures.is_empty();
            let json = json!({"instances": n, "seed": seed, "checks": checks, "failures": failures});
            Ok(Outcome::new(json, text, ok))
        }
    }
}

fn bounds(cli: &Cli, cmd: &BoundsCmd) -> Result<Outcome> {
    match *cmd {
        BoundsCmd::Ns { s } => {
            let value = n_s(s)?;
            let oracle = n_s_oracle(s, cli.kmax, cli.prime_bound)?;
            let exact = Supernatural::of_int(i64::try_from(&value).map_err(|_| Error::DomainError("N_s too large".into()))?)?
                .truncate(cli.prime_bound);
            let agrees = exact == oracle;
            let text = format!("N_{s} = {value}\noracle (k <= {}, p <= {}): {oracle}\n", cli.kmax, cli.prime_bound);
            let json = json!({"s": s, "n_s": big_json(&value), "oracle": oracle, "oracle_agrees": agrees});
            Ok(Outcome::new(json, text, agrees))
        }
        BoundsCmd::Phi { d, i } => {
            let b = phi_kernel_bound(d, i)?;
            let text = format!("phi kernel bound for d = {d}, i = {i}: {} (primes {:?})\n", b.bound, b.support);
            let ok = b.support_ok;
            Ok(Outcome::new(to_json(&b), text, ok))
        }
        BoundsCmd::Bott { i } => {
            let b = bott_kernel_bound(i)?;
            let text = format!("Bott kernel bound at i = {i}: {b}\n");
            Ok(Outcome::new(json!({"i": i, "bound": big_json(&b)}), text, true))
        }
        BoundsCmd::Euler { d, p } => {
            let gap = euler_index_gap_bound(d, p)?;
            let pv = product_valuation(d, p)?;
            let text = format!("index gap bound for d = {d}, p = {p}: {gap} (v_p of the N_s product: {pv})\n");
            Ok(Outcome::new(json!({"d": d, "p": p, "bound": gap, "product_valuation": pv}), text, true))
        }
    }
}

fn require_adams(doc: Document) -> Result<AdamsEndoModule> {
    doc.adams
        .ok_or_else(|| Error::PreconditionFailure("the input has no psi block".into()))
}

fn adams(cmd: &AdamsCmd) -> Result<Outcome> {
    match cmd {
        AdamsCmd::Check { file, m_max } => {
            let ae = require_adams(load(file)?)?;
            let eigen = verify_eigenvalues(&ae, |i| i);
            let width = (ae.base().hi() - ae.base().lo()) as usize;
            let mut annihilations = Vec::new();
            let mut text = format!("psi_{} eigenvalues: {}\n", ae.k(), if eigen.all_hold() { "ok" } else { "FAIL" });
            let mut ok = eigen.all_hold();
            for s in 1..=width {
                for i in ae.base().indices() {
                    if !eigen.holds_at(s, i) {
                        continue;
                    }
                    let a = kernel_annihilation(&ae, i, s, *m_max)?;
                    if a.divides_n_s == Some(false) {
                        ok = false;
                    }
                    let _ = writeln!(
                        text,
                        "s = {s}, i = {i}: kernel {}, m = {}, divides N_s: {}",
                        a.kernel,
                        a.m.map_or("none".into(), |m| m.to_string()),
                        a.divides_n_s.map_or("n/a".into(), |b| b.to_string())
                    );
                    annihilations.push(a);
                }
            }
            let json = json!({"k": ae.k(), "eigenvalues": eigen, "annihilation": annihilations});
            Ok(Outcome::new(json, text, ok))
        }
        AdamsCmd::Sigma { file } => {
            let ae = require_adams(load(file)?)?;
            let (summands, quotients) = sigma_split(&ae)?;
            let mut text = String::new();
            for (j, (s, q)) in summands.iter().zip(&quotients).enumerate() {
                let _ = writeln!(text, "S_{j} = {s}  (graded piece {q})");
            }
            let json = json!({"k": ae.k(), "summands": summands, "quotients": quotients});
            Ok(Outcome::new(json, text, true))
        }
        AdamsCmd::Theta { k, k_prime, order } => {
            let rep = verify_theta_identities(*k, k_prime.unwrap_or(*k), *order)?;
            let text = format!(
                "tau^{k}(0) = {k}: {}\ninvertible over Z[1/{k}]: {}\ntheta on trivial bundles: {}\nproduct identity: {}\n",
                rep.tau_at_zero, rep.invertible_over_z_1_k, rep.theta_on_trivial, rep.theta_product
            );
            let ok = rep.all_hold();
            Ok(Outcome::new(to_json(&rep), text, ok))
        }
    }
}

/// Decomposes `H = B_hi` over the ring inverting `(hi+1)!` and `r_k`, with
/// `H_(j) = 0` for `j < lo`.
fn sigma_split(ae: &AdamsEndoModule) -> Result<(Vec<crate::lattice::CanonicalForm>, Vec<crate::lattice::CanonicalForm>)> {
    let base = ae.base();
    if base.lo() < 0 {
        return Err(Error::PreconditionFailure("the window must start at a non-negative index".into()));
    }
    let top = base.hi() as u32;
    let mut primes = prime_factors(u64::try_from(factorial(u64::from(top) + 1)).map_err(|_| Error::DomainError("window too long".into()))?);
    let rk = r_k(ae.k(), top);
    primes.extend(bigint_primes(&rk)?);
    let ring = BaseRing::new(primes)?.join(base.ring());
    let local = base.localize(&ring);
    let h = local.module(local.hi());
    let psi = ae.psi(base.hi()).localize(&ring);
    let zero = FPModule::zero(&ring);
    let mut chain: Vec<ModuleMap> = (0..base.lo()).map(|_| ModuleMap::zero(&zero, &h)).collect();
    chain.extend(local.filtration_levels().into_iter().map(|l| l.inclusion));
    let d = decompose(&h, &chain, &psi, ae.k())?;
    Ok((
        d.summands.iter().map(FPModule::canonical).collect(),
        d.quotients.iter().map(FPModule::canonical).collect(),
    ))
}

fn bigint_primes(n: &BigInt) -> Result<Vec<u64>> {
    let n = u64::try_from(n.magnitude()).map_err(|_| Error::DomainError(format!("{n} is too large to factor")))?;
    Ok(prime_factors(n))
}

fn presentation(source: &RingSource) -> Result<GradedRingPresentation> {
    match (&source.fixture, &source.file) {
        (Some(name), _) => fixture(name, source.param.expect("clap requires --param")),
        (None, Some(path)) => parse_presentation(&read(path)?),
        (None, None) => Err(Error::parse("", "need --fixture or --file")),
    }
}

fn ring(cli: &Cli, cmd: &RingCmd) -> Result<Outcome> {
    let cap = caps(cli)?;
    match cmd {
        RingCmd::Component { source, degree } => {
            let r = presentation(source)?;
            let c = r.component(*degree, &cap)?;
            let monomials: Vec<Value> = c
                .labels
                .iter()
                .zip(&c.orders)
                .map(|(l, o)| json!({"monomial": l, "order": o}))
                .collect();
            let mut text = format!("degree {degree} of {r}: {}\n", c.canonical());
            for (l, o) in c.labels.iter().zip(&c.orders) {
                let _ = writeln!(text, "  {l}: {}", if *o == 0 { "Z".into() } else { format!("Z/{o}") });
            }
            let json = json!({"degree": degree, "canonical": c.canonical(), "monomials": monomials});
            Ok(Outcome::new(json, text, true))
        }
        RingCmd::Specialize { source, value } => {
            let r = presentation(source)?;
            if *value == 0 {
                let s = r.specialize_beta_zero()?;
                let text = format!("{s}\n");
                Ok(Outcome::new(to_json(&s), text, true))
            } else {
                let s = r.specialize_beta_one()?;
                let survivors = s.surviving_generators();
                let text = format!(
                    "{} relations after reduction; surviving generators: {}\n",
                    s.relations.len(),
                    if survivors.is_empty() { "none".into() } else { survivors.join(", ") }
                );
                let json = json!({"presentation": s, "surviving_generators": survivors});
                Ok(Outcome::new(json, text, true))
            }
        }
        RingCmd::Endo { source, lo, hi } => {
            let r = presentation(source)?;
            let e = r.to_endo_module(*lo, *hi, &cap)?;
            let rows: Vec<Value> = e
                .table()
                .into_iter()
                .filter(|(j, ..)| *j <= e.hi())
                .map(|(j, a, b, c)| json!({"degree": hi - j, "a": a, "b": b, "c": c}))
                .collect();
            let class = e.classify();
            let mut text = format!("{r} on degrees [{lo}, {hi}]\n{:>6}  {:<12} {:<12} {:<12}\n", "deg", "A", "CK", "C");
            for (j, a, b, c) in e.table().into_iter().filter(|(j, ..)| *j <= e.hi()) {
                let _ = writeln!(text, "{:>6}  {:<12} {:<12} {:<12}", hi - j, a.to_string(), b.to_string(), c.to_string());
            }
            let _ = writeln!(text, "degenerate after {} derivations", class.derivations_to_degeneracy);
            let json = json!({"table": rows, "classification": class});
            Ok(Outcome::new(json, text, true))
        }
    }
}

fn fixtures(cmd: &FixturesCmd) -> Result<Outcome> {
    match *cmd {
        FixturesCmd::Sl1 { p } => {
            let rep = sl1_report(p)?;
            let mark = |v: &Vec<i64>| if v.is_empty() { "ok".to_string() } else { format!("mismatch at {v:?}") };
            let text = format!(
                "SL_1 for p = {p} on degrees [{}, {}]\nCK table: {}\nCH table: {}\nA table: {}\nK_0 = Z: {}\ndegenerates at derivative {}\n",
                rep.window.0,
                rep.window.1,
                mark(&rep.ck_mismatches),
                mark(&rep.ch_mismatches),
                mark(&rep.a_mismatches),
                rep.k0_is_z,
                rep.degenerate_derivative
            );
            let ok = rep.all_hold();
            Ok(Outcome::new(to_json(&rep), text, ok))
        }
        FixturesCmd::Bso { n, exp_cap, beta_cap } => {
            let rep = bso_report(n, exp_cap, beta_cap)?;
            let text = format!(
                "B SO_{n} with exponents <= {exp_cap}, beta <= {beta_cap}\nR/(beta) = CH componentwise: {}\nR/(beta - 1) polynomial on even classes: {}\nbeta kills odd classes: {}\n",
                rep.ch_mismatches.is_empty(),
                rep.k0_polynomial_on_even,
                rep.bott_survivors.is_empty()
            );
            let ok = rep.all_hold();
            Ok(Outcome::new(to_json(&rep), text, ok))
        }
    }
}

fn chern(cmd: &ChernCmd) -> Result<Outcome> {
    match *cmd {
        ChernCmd::Verify { rank, trunc } => {
            let duality = verify_chern_duality(rank, trunc)?;
            let shadow = k0_shadow_check(1, trunc)?;
            let text = format!(
                "duality formula holds for rank {rank} through degree {trunc} (j = 0..{rank})\nWhitney splits: {:?}\nK_0 shadow identities hold\n",
                duality.whitney_splits
            );
            let ok = duality.homogeneous && duality.total_class_matches;
            Ok(Outcome::new(json!({"duality": duality, "k0_shadow": shadow}), text, ok))
        }
    }
}
