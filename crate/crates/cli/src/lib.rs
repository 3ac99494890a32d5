//! Batch front-end: reads tuple and measure documents, runs order checks and
//! calculus transforms, and renders reports as text or JSON.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use specorder::fixtures;
use specorder::io::{self, TupleDoc};
use specorder::measures::{
    audit_iota_increasing, cdf_leq, dominance_equivalence_check, lowerset_dominance,
    total_mass_implications, AtomicMeasure,
};
use specorder::order::{
    infimum_probe, monotone_transport_check, olson_necessity_scan, spectral_leq,
    spectral_leq_componentwise, OrderVerdict, Witness, ORDER_TOL,
};
use specorder::random::{self, PairShape};
use specorder::resolution::{reconstruct_measure, ProjValuedStepFunction};
use specorder::spectral::{
    calculus_vector, is_positive_tuple, joint_measure, CommutingTuple, ScalarFunction, Sign,
    VectorFunction, CLUSTER_TOL, COMM_TOL,
};

pub const MAX_ALPHA: u32 = 16;
const REPORT_SCHEMA: &str = "specorder-report/1";

#[derive(Debug, Parser)]
#[command(
    name = "specorder",
    version,
    about = "Spectral order checks for commuting Hermitian tuples"
)]
pub struct Cli {
    /// Order tolerance; overrides SPECORDER_TOL.
    #[arg(long, global = true, env = "SPECORDER_TOL")]
    pub tol: Option<f64>,
    /// Largest multi-index length for monomial scans (at most 16).
    #[arg(long, global = true, default_value_t = 8)]
    pub alpha_max: u32,
    /// Trailing-coordinate order parameter; defaults to κ.
    #[arg(long, global = true)]
    pub iota: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check A ⪯ B for two tuple files.
    CheckOrder {
        a: PathBuf,
        b: PathBuf,
        /// Also scan monomials A^α ≤ B^α up to --alpha-max when both tuples are positive.
        #[arg(long)]
        monomials: bool,
    },
    /// Apply a function to a tuple through the joint spectral measure.
    Calculus {
        input: PathBuf,
        /// monomial:A1,..  fractional:B1,..  sum  product  parts:+-..  clip:L,U:C1,..
        #[arg(long)]
        function: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Fail when the function is not increasing on the joint spectrum.
        #[arg(long)]
        require_monotone: bool,
    },
    /// Compare two atomic measures by distribution functions, lower sets and integrals.
    MeasureCheck { mu1: PathBuf, mu2: PathBuf },
    /// Reproduce the built-in worked examples against their known answers.
    Examples,
    /// Run randomized consistency checks.
    Selftest {
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

/// Input and usage problems exit with 2, failed monotonicity requirements with 1.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Monotonicity(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Monotonicity(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Monotonicity(m) => m,
        }
    }
}

fn input(context: &str, e: specorder::Error) -> CliError {
    CliError::Input(format!("{context}: {e}"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessDoc {
    GridPoint {
        point: Vec<f64>,
    },
    Coordinate {
        index: usize,
        point: f64,
    },
    MultiIndex {
        alpha: Vec<u32>,
    },
    Vector {
        entries: Vec<[f64; 2]>,
    },
    Ideal {
        members: Vec<Vec<f64>>,
        mass1: f64,
        mass2: f64,
    },
    Point {
        point: Vec<f64>,
        mass1: f64,
        mass2: f64,
    },
}

impl From<&Witness> for WitnessDoc {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::GridPoint(p) => WitnessDoc::GridPoint { point: p.clone() },
            Witness::Coordinate { index, point } => WitnessDoc::Coordinate {
                index: *index,
                point: *point,
            },
            Witness::MultiIndex(a) => WitnessDoc::MultiIndex { alpha: a.clone() },
            Witness::Vector(v) => WitnessDoc::Vector {
                entries: v.iter().map(|z| [z.re, z.im]).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Verdict {
    fn new(name: &str, holds: bool) -> Self {
        Verdict {
            name: name.to_string(),
            holds,
            witness: None,
            detail: None,
        }
    }

    fn order(name: &str, v: &OrderVerdict) -> Self {
        Verdict {
            name: name.to_string(),
            holds: v.holds,
            witness: v.witness.as_ref().map(WitnessDoc::from),
            detail: Some(format!("defect {:e}", v.defect)),
        }
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub order: f64,
    pub commutation: f64,
    pub cluster: f64,
    pub alpha_max: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool: String,
    pub command: Vec<String>,
    pub tolerances: Tolerances,
    pub verdicts: Vec<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<TupleDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn holds(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    pub fn exit_code(&self) -> i32 {
        if self.holds() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let status = if self.holds() { "OK" } else { "FAILED" };
        let _ = writeln!(out, "{}: {status}", self.command.join(" "));
        for v in &self.verdicts {
            let _ = write!(
                out,
                "  [{}] {}",
                if v.holds { "pass" } else { "fail" },
                v.name
            );
            if let Some(d) = &v.detail {
                let _ = write!(out, " ({d})");
            }
            out.push('\n');
            if let Some(w) = &v.witness {
                let _ = writeln!(
                    out,
                    "      witness: {}",
                    serde_json::to_string(w).expect("witness serializes")
                );
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "  time: {ms:.3} ms");
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Human => self.to_human(),
            Format::Json => self.to_json() + "\n",
        }
    }
}

struct Job<'a> {
    cli: &'a Cli,
    tol: f64,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_tuple(path: &Path) -> Result<CommutingTuple, CliError> {
    io::parse_tuple(&read(path)?).map_err(|e| input(&path.display().to_string(), e))
}

fn load_measure(path: &Path) -> Result<AtomicMeasure, CliError> {
    io::parse_measure(&read(path)?).map_err(|e| input(&path.display().to_string(), e))
}

fn numbers<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Input(format!("invalid number {x:?} in function tag")))
        })
        .collect()
}

/// Parses a function tag for a tuple of length `kappa`.
pub fn parse_function(tag: &str, kappa: usize) -> Result<VectorFunction, CliError> {
    let (name, args) = tag.split_once(':').unwrap_or((tag, ""));
    let arity = |n: usize| {
        if n == kappa {
            Ok(())
        } else {
            Err(CliError::Input(format!(
                "{name} needs {kappa} entries, got {n}"
            )))
        }
    };
    let f = match name {
        "monomial" => {
            let alpha: Vec<u32> = numbers(args)?;
            arity(alpha.len())?;
            ScalarFunction::Monomial(alpha).into()
        }
        "fractional" => {
            let beta: Vec<f64> = numbers(args)?;
            arity(beta.len())?;
            if beta.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
                return Err(CliError::Input(
                    "fractional exponents must be nonnegative".into(),
                ));
            }
            ScalarFunction::FractionalPower(beta).into()
        }
        "sum" if args.is_empty() => ScalarFunction::sum(kappa).into(),
        "product" if args.is_empty() => ScalarFunction::product(kappa).into(),
        "parts" => {
            let eps = Sign::parse_vector(args).map_err(|e| input("parts", e))?;
            arity(eps.len())?;
            VectorFunction::parts(&eps)
        }
        "clip" => {
            let (bounds, coeffs) = args
                .split_once(':')
                .ok_or_else(|| CliError::Input("clip needs clip:L,U:C1,..".into()))?;
            let lu: Vec<f64> = numbers(bounds)?;
            let coeffs: Vec<f64> = numbers(coeffs)?;
            arity(coeffs.len())?;
            if lu.len() != 2 || !(lu[0] <= lu[1]) {
                return Err(CliError::Input("clip bounds must be L,U with L ≤ U".into()));
            }
            if coeffs.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
                return Err(CliError::Input(
                    "clip coefficients must be nonnegative".into(),
                ));
            }
            ScalarFunction::Clip {
                lower: lu[0],
                upper: lu[1],
                inner: Box::new(ScalarFunction::Linear {
                    coeffs,
                    offset: 0.0,
                }),
            }
            .into()
        }
        _ => return Err(CliError::Input(format!("unknown function tag {tag:?}"))),
    };
    Ok(f)
}

fn check_order(
    job: &Job,
    a: &Path,
    b: &Path,
    monomials: bool,
) -> Result<(Vec<Verdict>, Vec<String>), CliError> {
    let (ta, tb) = (load_tuple(a)?, load_tuple(b)?);
    if ta.kappa() != tb.kappa() || ta.dim() != tb.dim() {
        return Err(CliError::Input(format!(
            "tuples differ in shape: kappa {} vs {}, dim {} vs {}",
            ta.kappa(),
            tb.kappa(),
            ta.dim(),
            tb.dim()
        )));
    }
    let joint = spectral_leq(&ta, &tb, job.tol).map_err(|e| input("spectral order", e))?;
    let comp = spectral_leq_componentwise(&ta, &tb, job.tol)
        .map_err(|e| input("componentwise order", e))?;
    let mut verdicts = vec![
        Verdict::order("spectral order", &joint),
        Verdict::order("componentwise order", &comp),
    ];
    let mut notes = Vec::new();
    if monomials {
        let positive =
            is_positive_tuple(&ta, job.tol).and_then(|p| Ok(p && is_positive_tuple(&tb, job.tol)?));
        if positive.map_err(|e| input("positivity", e))? {
            let scan = olson_necessity_scan(&ta, &tb, job.cli.alpha_max, job.tol)
                .map_err(|e| input("scan", e))?;
            verdicts.push(Verdict::order(
                &format!("monomials |α| ≤ {}", job.cli.alpha_max),
                &scan,
            ));
        } else {
            notes.push("monomial scan skipped: tuples are not positive".into());
        }
    }
    Ok((verdicts, notes))
}

#[allow(clippy::type_complexity)]
fn calculus(
    path: &Path,
    tag: &str,
    output: Option<&Path>,
    require_monotone: bool,
) -> Result<(Vec<Verdict>, Vec<String>, TupleDoc), CliError> {
    let t = load_tuple(path)?;
    let phi = parse_function(tag, t.kappa())?;
    let e = joint_measure(&t, CLUSTER_TOL).map_err(|e| input("joint spectrum", e))?;
    let points = e.points();
    let mut monotone = true;
    let mut counterexample = None;
    for f in &phi.0 {
        let audit = audit_iota_increasing(|x| f.eval(x), &points, t.kappa())
            .map_err(|e| input("audit", e))?;
        if !audit.holds {
            monotone = false;
            counterexample = counterexample.or(audit.counterexample);
        }
    }
    let mut notes = Vec::new();
    let mut verdicts = Vec::new();
    let audit_text = match &counterexample {
        Some((x, y)) => {
            format!("not increasing on the joint spectrum: {x:?} ≤ {y:?} but the value drops")
        }
        None => "increasing on the joint spectrum".to_string(),
    };
    if require_monotone {
        if !monotone {
            return Err(CliError::Monotonicity(format!("{tag}: {audit_text}")));
        }
        verdicts.push(Verdict::new("monotone on spectrum", true));
    } else {
        notes.push(format!("{tag}: {audit_text}"));
    }
    let result = calculus_vector(&e, &phi).map_err(|e| input("calculus", e))?;
    let doc = TupleDoc::from_tuple(&result);
    if let Some(out) = output {
        std::fs::write(out, io::tuple_to_json(&result))
            .map_err(|e| CliError::Input(format!("{}: {e}", out.display())))?;
        notes.push(format!("wrote {}", out.display()));
    }
    Ok((verdicts, notes, doc))
}

fn measure_check(job: &Job, p1: &Path, p2: &Path) -> Result<(Vec<Verdict>, Vec<String>), CliError> {
    let (mu1, mu2) = (load_measure(p1)?, load_measure(p2)?);
    if mu1.kappa() != mu2.kappa() {
        return Err(CliError::Input(format!(
            "measures differ in kappa: {} vs {}",
            mu1.kappa(),
            mu2.kappa()
        )));
    }
    let iota = job.cli.iota.unwrap_or(mu1.kappa());
    let tol = job.tol;
    let cdf = cdf_leq(&mu1, &mu2, tol).map_err(|e| input("cdf", e))?;
    let mut verdicts = vec![Verdict {
        name: "cdf order".into(),
        holds: cdf.holds,
        witness: cdf.witness.clone().map(|point| WitnessDoc::Point {
            point,
            mass1: cdf.mass1,
            mass2: cdf.mass2,
        }),
        detail: None,
    }];
    let dom = lowerset_dominance(&mu1, &mu2, iota, tol).map_err(|e| input("lower sets", e))?;
    verdicts.push(Verdict {
        name: format!("lower-set dominance (iota {iota})"),
        holds: dom.holds,
        witness: dom.witness.as_ref().map(|w| WitnessDoc::Ideal {
            members: w.members.clone(),
            mass1: w.mass1,
            mass2: w.mass2,
        }),
        detail: Some(format!("{} ideals", dom.ideals_checked)),
    });
    let mut notes = Vec::new();
    if (mu1.total_mass() - mu2.total_mass()).abs() <= tol {
        let r = dominance_equivalence_check(&mu1, &mu2, iota, tol)
            .map_err(|e| input("integrals", e))?;
        verdicts.push(Verdict {
            name: "indicator integrals".into(),
            holds: r.indicator_family,
            witness: r.indicator_witness.as_ref().map(|w| WitnessDoc::Ideal {
                members: w.ideal.clone(),
                mass1: w.integral1,
                mass2: w.integral2,
            }),
            detail: None,
        });
        let molli: Vec<String> = r
            .mollifier_family
            .iter()
            .map(|(n, ok)| format!("n={n}:{}", if *ok { "ok" } else { "fail" }))
            .collect();
        verdicts.push(Verdict::new("dominance agrees with integrals", r.agrees()));
        verdicts.push(
            Verdict::new("mollifiers consistent", r.mollifiers_consistent())
                .detail(molli.join(" ")),
        );
    } else {
        let imp = total_mass_implications(&mu1, &mu2, iota, tol).map_err(|e| input("masses", e))?;
        notes.push(format!(
            "total masses differ: {} vs {}",
            imp.mass1, imp.mass2
        ));
        verdicts.push(
            Verdict::new(
                "mass bounds",
                imp.lower_sets_mass_bound_ok && imp.functions_mass_bound_ok,
            )
            .detail(format!(
                "lower sets {}, increasing functions {}",
                imp.lower_sets_hold, imp.functions_hold
            )),
        );
    }
    Ok((verdicts, notes))
}

fn examples(job: &Job) -> Result<(Vec<Verdict>, Vec<String>), CliError> {
    let mut verdicts = Vec::new();
    let mut notes = Vec::new();
    let fail = |e: specorder::Error| CliError::Input(format!("example failed to run: {e}"));

    let (a, b) = fixtures::lattice_pair();
    let inf = infimum_probe(&a, &b).map_err(fail)?;
    let (m1, m2) = fixtures::lattice_meets();
    let matches = inf.candidate.len() == 2
        && inf.candidate[0].matrix().sub(&m1).max_abs() <= 1e-9
        && inf.candidate[1].matrix().sub(&m2).max_abs() <= 1e-9;
    let defect_ok = (inf.commutator_defect - fixtures::LATTICE_DEFECT).abs() <= 1e-9;
    verdicts.push(
        Verdict::new(
            "lattice: coordinatewise meets do not commute",
            matches && defect_ok && !inf.commuting,
        )
        .detail(format!("commutator defect {:.12}", inf.commutator_defect)),
    );

    let (mu1, mu2) = fixtures::dirac_pair();
    let cdf = cdf_leq(&mu1, &mu2, 0.0).map_err(fail)?;
    let dom = lowerset_dominance(&mu1, &mu2, 2, 0.0).map_err(fail)?;
    let witness = dom.witness.as_ref();
    let expected = witness.is_some_and(|w| {
        w.members == vec![vec![0., 0.], vec![0., 1.], vec![1., 0.]]
            && w.mass1 == 1.0
            && w.mass2 == 2.0
    });
    verdicts.push(Verdict {
        name: "dirac: cdf order without lower-set dominance".into(),
        holds: cdf.holds && !dom.holds && expected,
        witness: witness.map(|w| WitnessDoc::Ideal {
            members: w.members.clone(),
            mass1: w.mass1,
            mass2: w.mass2,
        }),
        detail: None,
    });

    let mut sweep = Vec::new();
    let mut sweep_ok = true;
    for theta in [1.5, 2.0, 3.0] {
        let (a, b) = fixtures::theta_pair(theta);
        let v = spectral_leq(&a, &b, job.tol).map_err(fail)?;
        sweep_ok &= v.holds == (theta == 2.0);
        sweep.push(format!(
            "θ={theta}: {}",
            if v.holds { "holds" } else { "fails" }
        ));
    }
    verdicts
        .push(Verdict::new("theta: order holds exactly at 2", sweep_ok).detail(sweep.join(", ")));
    let (a, b) = fixtures::theta_pair(3.0);
    let scan = olson_necessity_scan(&a, &b, job.cli.alpha_max, job.tol).map_err(fail)?;
    notes.push(match &scan.witness {
        Some(w) => format!("θ=3: first monomial violation {:?}", WitnessDoc::from(w)),
        None => format!(
            "θ=3: no monomial violation with |α| ≤ {}",
            job.cli.alpha_max
        ),
    });
    Ok((verdicts, notes))
}

fn selftest(job: &Job, cases: usize) -> Result<(Vec<Verdict>, Vec<String>), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(job.cli.seed);
    let fail = |e: specorder::Error| CliError::Input(format!("selftest failed to run: {e}"));
    let (mut agree, mut transport, mut trips, mut integrals) = (0, 0, 0, 0);
    for k in 0..cases {
        let kappa = 1 + k % 3;
        let n = rng.gen_range(1..=6);
        let (a, b) = random::mixed_pair(&mut rng, kappa, n);
        let joint = spectral_leq(&a, &b, job.tol).map_err(fail)?.holds;
        agree += usize::from(
            joint
                == spectral_leq_componentwise(&a, &b, job.tol)
                    .map_err(fail)?
                    .holds,
        );

        let (a, b) = random::ordered_pair(
            &mut rng,
            PairShape {
                kappa,
                n,
                lo: -1,
                hi: 3,
            },
        );
        let phi = VectorFunction::from(ScalarFunction::Clip {
            lower: 0.0,
            upper: 2.0,
            inner: Box::new(ScalarFunction::sum(kappa)),
        });
        transport += usize::from(
            monotone_transport_check(&a, &b, &phi, job.tol)
                .map_err(fail)?
                .holds,
        );

        let e = random::joint_measure(&mut rng, kappa, n, 6);
        let back = reconstruct_measure(&ProjValuedStepFunction::from_measure(&e)).map_err(fail)?;
        trips += usize::from(back.points() == e.points());

        let iota = 1 + k % 2;
        let (mu1, mu2) = random::equal_mass_pair(&mut rng, 2, iota, 8);
        let r = dominance_equivalence_check(&mu1, &mu2, iota, 1e-12).map_err(fail)?;
        integrals += usize::from(r.agrees() && r.mollifiers_consistent());
    }
    let count =
        |name: &str, k: usize| Verdict::new(name, k == cases).detail(format!("{k}/{cases}"));
    Ok((
        vec![
            count("joint vs componentwise order", agree),
            count("monotone transport", transport),
            count("resolution round trip", trips),
            count("lower sets vs integrals", integrals),
        ],
        vec![format!("seed {}", job.cli.seed)],
    ))
}

fn command_echo(cmd: &Command) -> Vec<String> {
    let p = |x: &PathBuf| x.display().to_string();
    match cmd {
        Command::CheckOrder { a, b, .. } => vec!["check-order".into(), p(a), p(b)],
        Command::Calculus {
            input, function, ..
        } => vec!["calculus".into(), p(input), function.clone()],
        Command::MeasureCheck { mu1, mu2 } => vec!["measure-check".into(), p(mu1), p(mu2)],
        Command::Examples => vec!["examples".into()],
        Command::Selftest { cases } => vec!["selftest".into(), format!("{cases}")],
    }
}

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let start = Instant::now();
    let tol = cli.tol.unwrap_or(ORDER_TOL);
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Input(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if cli.alpha_max > MAX_ALPHA {
        return Err(CliError::Input(format!(
            "--alpha-max is at most {MAX_ALPHA}, got {}",
            cli.alpha_max
        )));
    }
    if cli.iota == Some(0) {
        return Err(CliError::Input("--iota must be at least 1".into()));
    }
    let job = Job { cli, tol };
    let mut result = None;
    let (verdicts, notes) = match &cli.command {
        Command::CheckOrder { a, b, monomials } => check_order(&job, a, b, *monomials)?,
        Command::Calculus {
            input,
            function,
            output,
            require_monotone,
        } => {
            let (v, n, doc) = calculus(input, function, output.as_deref(), *require_monotone)?;
            result = Some(doc);
            (v, n)
        }
        Command::MeasureCheck { mu1, mu2 } => measure_check(&job, mu1, mu2)?,
        Command::Examples => examples(&job)?,
        Command::Selftest { cases } => selftest(&job, *cases)?,
    };
    Ok(Report {
        schema: REPORT_SCHEMA.into(),
        tool: format!("specorder {}", env!("CARGO_PKG_VERSION")),
        command: command_echo(&cli.command),
        tolerances: Tolerances {
            order: tol,
            commutation: COMM_TOL,
            cluster: CLUSTER_TOL,
            alpha_max: cli.alpha_max,
        },
        verdicts,
        result,
        notes,
        timing_ms: cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_tags() {
        assert_eq!(
            parse_function("sum", 2).unwrap(),
            VectorFunction::from(ScalarFunction::sum(2))
        );
        assert_eq!(
            parse_function("monomial:1,2", 2).unwrap(),
            VectorFunction::from(ScalarFunction::Monomial(vec![1, 2]))
        );
        assert_eq!(
            parse_function("parts:+-", 2).unwrap(),
            VectorFunction::parts(&[Sign::Plus, Sign::Minus])
        );
        assert!(parse_function("clip:0,1:1,1", 2)
            .unwrap()
            .claims_increasing());
        for bad in [
            "monomial:1",
            "monomial:-1,0",
            "fractional:-0.5,1",
            "parts:+x",
            "clip:1,0:1,1",
            "clip:0,1:-1,1",
            "clip:0,1",
            "sum:3",
            "cube",
        ] {
            assert!(
                matches!(parse_function(bad, 2), Err(CliError::Input(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Input(String::new()).exit_code(), 2);
        assert_eq!(CliError::Monotonicity(String::new()).exit_code(), 1);
    }
}
