//! `finmm`: exact distances between finite metric (measure) spaces.
//!
//! Exit status: 0 on success, 1 when the input is rejected or a solver
//! refuses (invalid space, guard exceeded, failed certificate), 2 on usage
//! errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use finmm::io::Certificate;
use finmm::moduli::{canonicalize, mm_coordinates, MetricVector, PERMUTATION_GUARD};
use finmm::number::{format_decimal, format_fraction, parse_real};
use finmm::{
    box_exact_with, build_comb, comb_witness, distortion, gh_exact_with, is_correspondence, prokhorov,
    uniform_lift, BoxOptions, CombParams, Error, ExtReal, FiniteMMSpace, FiniteMetricSpace, GhOptions, Real,
    Relation, SpaceDoc,
};

#[derive(Parser)]
#[command(name = "finmm", version, about = "Exact Gromov-Hausdorff, box and Prokhorov distances")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Print numbers as exact fractions.
    #[arg(long, global = true)]
    exact: bool,
    /// Significant digits for decimal output.
    #[arg(long, global = true, env = "FINMM_PRECISION", default_value_t = 12)]
    precision: usize,
    /// Worker threads for the solvers (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest point count the exhaustive searches accept per space.
    #[arg(long, global = true)]
    guard_n: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a space file and report every violated axiom.
    Validate { file: PathBuf },
    /// Gromov-Hausdorff distance between two spaces.
    Gh {
        x: PathBuf,
        y: PathBuf,
        /// Also print a minimizing correspondence.
        #[arg(long)]
        witness: bool,
    },
    /// Box distance between two metric measure spaces.
    Box {
        x: PathBuf,
        y: PathBuf,
        /// Also print a minimizing certificate.
        #[arg(long)]
        witness: bool,
        /// Write the minimizing certificate to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Verify a certificate instead of solving.
        #[arg(long, value_name = "CERT", conflicts_with_all = ["witness", "output"])]
        check_certificate: Option<PathBuf>,
    },
    /// Prokhorov distance between two measures on one space.
    Prokhorov {
        z: PathBuf,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        nu: String,
    },
    /// Reorder the points into canonical order.
    Canonicalize { file: PathBuf },
    /// Attach the uniform measure.
    Lift { file: PathBuf },
    /// Smallest nonzero distance.
    Sep { file: PathBuf },
    /// Distortion of a relation, given as `i:j,i:j,...`.
    Dis {
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        relation: String,
    },
    /// Comb space generator and certificates.
    #[command(subcommand)]
    Comb(CombCommand),
}

#[derive(Subcommand)]
enum CombCommand {
    /// Write a discretized comb as a space file.
    Build {
        #[arg(long)]
        t: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        mesh: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write the block-matching certificate between two combs.
    Witness {
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        mesh: usize,
        /// Target bound; rejected unless every witness term is below eps/4.
        #[arg(long)]
        eps: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
        /// Also write the comb built from `s`.
        #[arg(long)]
        out_s: Option<PathBuf>,
        /// Also write the comb built from `t`.
        #[arg(long)]
        out_t: Option<PathBuf>,
    },
}

struct Ctx {
    exact: bool,
    precision: usize,
    guard_n: Option<usize>,
}

impl Ctx {
    fn num(&self, v: &Real) -> String {
        if self.exact {
            format_fraction(v)
        } else {
            format_decimal(v, self.precision)
        }
    }

    fn ext(&self, v: &ExtReal) -> String {
        match v {
            ExtReal::Finite(v) => self.num(v),
            ExtReal::Infinity => "inf".into(),
        }
    }

    fn gh_options(&self) -> GhOptions {
        let mut o = GhOptions::default();
        if let Some(n) = self.guard_n {
            o.guard_n = n;
        }
        o
    }

    fn box_options(&self) -> BoxOptions {
        let mut o = BoxOptions::default();
        if let Some(n) = self.guard_n {
            o.guard_cells = n * n;
        }
        o
    }
}

enum Failure {
    Domain(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))
}

fn load_doc(path: &Path) -> Result<SpaceDoc, Failure> {
    SpaceDoc::parse(&read(path)?).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn load_metric(path: &Path) -> Result<FiniteMetricSpace, Failure> {
    load_doc(path)?.to_metric().map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn load_mm(path: &Path) -> Result<FiniteMMSpace, Failure> {
    load_doc(path)?.to_mm().map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn parse_vec(text: &str, what: &str) -> Result<Vec<Real>, Failure> {
    text.split(',')
        .map(|s| parse_real(s.trim()).map_err(|e| Failure::Usage(format!("--{what}: {e}"))))
        .collect()
}

fn parse_relation(text: &str) -> Result<Relation, Failure> {
    let pair = |p: &str| -> Option<(usize, usize)> {
        let (i, j) = p.trim().split_once(':')?;
        Some((i.trim().parse().ok()?, j.trim().parse().ok()?))
    };
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| pair(p).ok_or_else(|| Failure::Usage(format!("--relation: expected `i:j`, got `{p}`"))))
        .collect()
}

fn relation_text(r: &Relation) -> String {
    r.iter().map(|(i, j)| format!("{i}:{j}")).collect::<Vec<_>>().join(",")
}

fn validate(file: &Path) -> Outcome {
    let doc = load_doc(file)?;
    let report = doc.validate();
    if !report.is_valid() {
        return Err(Failure::Domain(format!("{}: {report}", file.display())));
    }
    let kind = if doc.mass.is_some() { "metric measure space" } else { "metric space" };
    Ok(format!("valid {kind} with {} points\n", doc.labels.len()))
}

fn gh(ctx: &Ctx, x: &Path, y: &Path, witness: bool) -> Outcome {
    let (x, y) = (load_metric(x)?, load_metric(y)?);
    let res = gh_exact_with(&x, &y, &ctx.gh_options())?;
    let mut out = format!("{}\n", ctx.num(&res.value));
    if witness {
        out += &format!("correspondence: {}\n", relation_text(&res.witness));
        out += &format!("distortion: {}\n", ctx.num(&res.distortion));
    }
    Ok(out)
}

fn box_solve(ctx: &Ctx, x: &Path, y: &Path, witness: bool, output: Option<&Path>) -> Outcome {
    let (x, y) = (load_mm(x)?, load_mm(y)?);
    let res = box_exact_with(&x, &y, &ctx.box_options())?;
    let cert = Certificate { pi: res.coupling, s: res.relation, claimed_value: res.value.clone() };
    let mut out = format!("{}\n", ctx.num(&res.value));
    if witness {
        out += &cert.to_text();
    }
    if let Some(path) = output {
        write(path, &cert.to_text())?;
    }
    Ok(out)
}

fn box_check(ctx: &Ctx, x: &Path, y: &Path, cert: &Path) -> Outcome {
    let (x, y) = (load_mm(x)?, load_mm(y)?);
    let cert = Certificate::parse(&read(cert)?).map_err(|e| Failure::Domain(format!("{}: {e}", cert.display())))?;
    let check = cert.check(&x, &y)?;
    let summary = format!("recomputed {}, claimed {}", ctx.num(&check.recomputed), ctx.num(&check.claimed));
    if !check.coupling_valid {
        return Err(Failure::Domain(format!("certificate rejected: pi is not a coupling of the two measures ({summary})")));
    }
    if !check.holds() {
        return Err(Failure::Domain(format!("certificate rejected: recomputed value exceeds the claim ({summary})")));
    }
    Ok(format!("certificate holds: {summary}\n"))
}

fn prokhorov_cmd(ctx: &Ctx, z: &Path, mu: &str, nu: &str) -> Outcome {
    let z = load_metric(z)?;
    let (mu, nu) = (parse_vec(mu, "mu")?, parse_vec(nu, "nu")?);
    Ok(format!("{}\n", ctx.num(&prokhorov(&mu, &nu, &z)?)))
}

fn canonicalize_cmd(ctx: &Ctx, file: &Path) -> Outcome {
    let doc = load_doc(file)?;
    let limit = ctx.guard_n.unwrap_or(PERMUTATION_GUARD);
    let out = match &doc.mass {
        Some(_) => {
            let x = doc.to_mm()?;
            let (r, s) = mm_coordinates(&x);
            let (_, sigma) = canonicalize(&r, Some(&s), limit)?;
            let mass = sigma.iter().map(|&i| x.mass()[i].clone()).collect();
            SpaceDoc::from_mm(&FiniteMMSpace::new(x.space().restrict(&sigma)?, mass)?)
        }
        None => {
            let x = doc.to_metric()?;
            let (_, sigma) = canonicalize(&MetricVector::from_space(&x), None, limit)?;
            SpaceDoc::from_metric(&x.restrict(&sigma)?)
        }
    };
    Ok(out.to_text())
}

fn lift(file: &Path) -> Outcome {
    Ok(SpaceDoc::from_mm(&uniform_lift(&load_metric(file)?)).to_text())
}

fn sep(ctx: &Ctx, file: &Path) -> Outcome {
    Ok(format!("{}\n", ctx.ext(&load_metric(file)?.separation())))
}

fn dis(ctx: &Ctx, x: &Path, y: &Path, relation: &str) -> Outcome {
    let (x, y) = (load_metric(x)?, load_metric(y)?);
    let r = parse_relation(relation)?;
    let d = distortion(&r, &x, &y)?;
    let kind = if is_correspondence(&r, x.len(), y.len()) { "correspondence" } else { "not a correspondence" };
    Ok(format!("{}\n{kind}\n", ctx.num(&d)))
}

fn comb(ctx: &Ctx, cmd: &CombCommand) -> Outcome {
    match cmd {
        CombCommand::Build { t, depth, mesh, output } => {
            let params = CombParams::with_depth(parse_vec(t, "t")?, *depth, *mesh)?;
            let c = build_comb(&params);
            write(output, &SpaceDoc::from_mm(&c).to_text())?;
            Ok(format!("wrote {} points to {}\n", c.len(), output.display()))
        }
        CombCommand::Witness { s, t, depth, mesh, eps, output, out_s, out_t } => {
            let (s, t) = (parse_vec(s, "s")?, parse_vec(t, "t")?);
            let ps = CombParams::with_depth(s.clone(), *depth, *mesh)?;
            let pt = CombParams::with_depth(t.clone(), *depth, *mesh)?;
            let eps = eps.as_deref().map(|e| parse_vec(e, "eps")).transpose()?;
            let eps = match eps.as_deref() {
                None => None,
                Some([e]) => Some(e),
                Some(_) => return Err(Failure::Usage("--eps: expected one number".into())),
            };
            let w = comb_witness(&s, &t, *mesh, eps)?;
            let cert = Certificate { pi: w.coupling.clone(), s: w.relation.clone(), claimed_value: w.certified_value() };
            write(output, &cert.to_text())?;
            if let Some(p) = out_s {
                write(p, &SpaceDoc::from_mm(&build_comb(&ps)).to_text())?;
            }
            if let Some(p) = out_t {
                write(p, &SpaceDoc::from_mm(&build_comb(&pt)).to_text())?;
            }
            Ok(format!(
                "certified value {} (distortion {}, bound {})\n",
                ctx.num(&w.certified_value()),
                ctx.num(&w.distortion),
                ctx.num(&w.eps_bound)
            ))
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx { exact: cli.global.exact, precision: cli.global.precision, guard_n: cli.global.guard_n };
    if ctx.precision == 0 {
        return Err(Failure::Usage("--precision must be at least 1".into()));
    }
    if let Some(n) = cli.global.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(format!("--threads: {e}")))?;
    }
    match &cli.command {
        Command::Validate { file } => validate(file),
        Command::Gh { x, y, witness } => gh(&ctx, x, y, *witness),
        Command::Box { x, y, check_certificate: Some(cert), .. } => box_check(&ctx, x, y, cert),
        Command::Box { x, y, witness, output, .. } => box_solve(&ctx, x, y, *witness, output.as_deref()),
        Command::Prokhorov { z, mu, nu } => prokhorov_cmd(&ctx, z, mu, nu),
        Command::Canonicalize { file } => canonicalize_cmd(&ctx, file),
        Command::Lift { file } => lift(file),
        Command::Sep { file } => sep(&ctx, file),
        Command::Dis { x, y, relation } => dis(&ctx, x, y, relation),
        Command::Comb(cmd) => comb(&ctx, cmd),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}
