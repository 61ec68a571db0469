//! Verb dispatch. Every verb returns its full output so runs can be compared byte for byte.

use crate::io::{emit_canonical, emit_presentation, matrix_field, parse_matrix, parse_presentation, render_matrix};
use crate::presets::preset;
use clap::{Parser, Subcommand, ValueEnum};
use qls_core::cohom::{bialgebra_checks, cocomposition, e_marked, end_object, hom_object};
use qls_core::products::{bang, product, ProductKind};
use qls_core::report::{all_passed, CheckItem};
use qls_core::ttp::TwistingMap;
use qls_core::twist::{
    nongraded_counterexample, check_semigroupoid, cocycle_checks, factor_tau, frt_suite, hom_twist_equivalence, hom_upsilon,
    saturate_hom_general, twist_equivalences, NonGradedSetup, Cocycle, FactorizableTwist, GlobalCollectionSample,
};
use qls_core::{Error, FieldSpec, LinearMap, Presentation, Result, Scalar};
use std::fmt::Write as _;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Machine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProductArg {
    Circ,
    Odot,
    Bullet,
    Ttp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SelftestArg {
    Appendix,
}

/// Presentation arguments are `.qls` paths or `@preset` names.
#[derive(Debug, Parser)]
#[command(name = "qls", version, about = "Quantum linear spaces, their coHom objects and twists")]
pub struct Cli {
    /// Degree cap for every truncated computation.
    #[arg(long, global = true, default_value_t = 4)]
    pub degree: usize,
    /// Matrix file: τ̂ for `product ttp` and `saturate`, σ for `end`, `twist-hom`, `cocycle-check`,
    /// `equivalence` and `selftest`, φ for `frt`.
    #[arg(long, global = true)]
    pub twist: Option<PathBuf>,
    #[arg(long = "sigma-a", global = true)]
    pub sigma_a: Option<PathBuf>,
    #[arg(long = "sigma-b", global = true)]
    pub sigma_b: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and print a presentation.
    Parse { file: String },
    /// Hilbert function up to the degree cap.
    Hilbert { file: String },
    /// A∘B, A⊙B, A•B or the twisted product A∘_τB (`--twist` on B₁⊗A₁).
    Product {
        #[arg(value_enum)]
        kind: ProductArg,
        a: String,
        b: String,
    },
    /// The dual A^!.
    Dual { file: String },
    /// hom[B,A].
    Hom { b: String, a: String },
    /// end[A], or its twist when `--twist σ` is given.
    End {
        a: String,
        #[arg(long)]
        check_equivalence: bool,
        #[arg(long)]
        check_bialgebra: bool,
    },
    /// e[A]: end[A] with the relations forced by a simultaneous coaction on the dual.
    Emarked { a: String },
    /// hom[B,A] → hom[C,A]∘hom[B,C].
    Cocompose { b: String, c: String, a: String },
    /// hom^Υ[B,A] for `--sigma-a`/`--sigma-b` (or one `--twist` for both).
    TwistHom { b: String, a: String },
    /// The hom object for a general `τ̂` on B₁⊗E₁ (`--twist`), or the factorizable one from the σ's.
    Saturate { b: String, a: String },
    /// Recover σ from τ = id⊗σ⁻¹⊗σ.
    FactorTau { tau: PathBuf },
    /// Cocycle identities for `--twist σ`.
    CocycleCheck { a: String },
    /// end^Υ[A] = end[A]_χ and A^Υ = A_χ; with B, hom^Υ[B,A] = hom[B_χ, A_χ].
    Equivalence { a: String, b: Option<String> },
    /// R-matrix suite; `--twist φ` twists it.
    Frt,
    /// Built-in negative tests.
    Selftest {
        #[arg(value_enum)]
        name: SelftestArg,
        /// Inhomogeneous constant of the third space; 0 gives the graded control.
        #[arg(long, default_value = "1")]
        lambda: String,
    },
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. } | Error::UnknownParameter(_) | Error::UnknownGenerator(_) | Error::Inhomogeneous(_) => EXIT_PARSE,
        Error::CheckFailed(_) => EXIT_CHECK_FAILED,
        _ => EXIT_PRECONDITION,
    }
}

enum Loaded {
    Pres(String, Presentation),
    Mat(PathBuf),
}

struct Session {
    cap: usize,
    format: Format,
    field: FieldSpec,
    texts: Vec<(PathBuf, String)>,
}

impl Session {
    fn read(path: &PathBuf) -> std::result::Result<String, String> {
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
    }

    fn matrix(&self, path: &PathBuf) -> Result<LinearMap> {
        let text = &self.texts.iter().find(|(p, _)| p == path).expect("matrix text loaded").1;
        parse_matrix(text, &self.field).map_err(|e| tag(e, path))
    }

    fn print(&self, out: &mut String, p: &Presentation) -> Result<()> {
        out.push_str(&match self.format {
            Format::Table => emit_canonical(p)?,
            Format::Machine => emit_presentation(p)?,
        });
        Ok(())
    }

    fn report(&self, out: &mut String, items: &[CheckItem]) {
        for i in items {
            let tag = if i.passed { "PASS" } else { "FAIL" };
            match self.format {
                Format::Table => {
                    let _ = writeln!(out, "{tag}  {:<44} {}", i.name, i.detail);
                }
                Format::Machine => {
                    let _ = writeln!(out, "{tag}\t{}\t{}", i.name, i.detail);
                }
            }
        }
    }
}

fn tag(e: Error, path: &PathBuf) -> Error {
    match e {
        Error::Syntax { line, col, msg } => Error::syntax(line, col, format!("{}: {msg}", path.display())),
        e => e,
    }
}

fn load_presentation(arg: &str, cap: usize) -> std::result::Result<Presentation, (i32, String)> {
    if let Some(name) = arg.strip_prefix('@') {
        return preset(name, cap).map_err(|e| (EXIT_PARSE, e.to_string()));
    }
    let path = PathBuf::from(arg);
    let text = Session::read(&path).map_err(|m| (EXIT_PARSE, m))?;
    parse_presentation(&text, cap).map_err(|e| (exit_code(&e), tag(e, &path).to_string()))
}

fn inputs(cli: &Cli) -> Vec<Loaded> {
    let p = |s: &String| Loaded::Pres(s.clone(), Presentation::trivial_unit(0));
    let mut out: Vec<Loaded> = match &cli.command {
        Command::Parse { file } | Command::Hilbert { file } | Command::Dual { file } => vec![p(file)],
        Command::Product { a, b, .. } => vec![p(a), p(b)],
        Command::Hom { b, a } | Command::TwistHom { b, a } | Command::Saturate { b, a } => vec![p(b), p(a)],
        Command::End { a, .. } | Command::Emarked { a } | Command::CocycleCheck { a } => vec![p(a)],
        Command::Cocompose { b, c, a } => vec![p(b), p(c), p(a)],
        Command::Equivalence { a, b } => std::iter::once(p(a)).chain(b.iter().map(p)).collect(),
        Command::FactorTau { tau } => vec![Loaded::Mat(tau.clone())],
        Command::Frt | Command::Selftest { .. } => vec![],
    };
    out.extend([&cli.twist, &cli.sigma_a, &cli.sigma_b].into_iter().flatten().map(|p| Loaded::Mat(p.clone())));
    out
}

/// Runs one command and captures its output and exit status.
pub fn run(cli: &Cli) -> Outcome {
    let fail = |code: i32, msg: String| Outcome { code, stdout: String::new(), stderr: format!("error: {msg}\n") };
    if cli.degree < 2 {
        return fail(EXIT_PRECONDITION, "--degree must be at least 2".into());
    }
    let mut field = match &cli.command {
        Command::Frt => FieldSpec::new(&["q", "p"]).expect("distinct names"),
        _ => FieldSpec::rationals(),
    };
    let mut loaded = inputs(cli);
    let mut texts = Vec::new();
    for l in &mut loaded {
        match l {
            Loaded::Pres(arg, slot) => match load_presentation(arg, cli.degree) {
                Ok(p) => *slot = p,
                Err((code, msg)) => return fail(code, msg),
            },
            Loaded::Mat(path) => {
                let text = match Session::read(path) {
                    Ok(t) => t,
                    Err(m) => return fail(EXIT_PARSE, m),
                };
                match matrix_field(&text) {
                    Ok(Some(f)) => match field.join(&f) {
                        Ok(j) => field = j,
                        Err(e) => return fail(exit_code(&e), e.to_string()),
                    },
                    Ok(None) => {}
                    Err(e) => return fail(EXIT_PARSE, tag(e, path).to_string()),
                }
                texts.push((path.clone(), text));
            }
        }
    }
    let mut pres = Vec::new();
    for l in loaded {
        if let Loaded::Pres(_, p) = l {
            match field.join(p.field()) {
                Ok(j) => field = j,
                Err(e) => return fail(exit_code(&e), e.to_string()),
            }
            pres.push(p);
        }
    }
    let pres: Vec<Presentation> = match pres.iter().map(|p| p.with_field(field.clone())).collect() {
        Ok(v) => v,
        Err(e) => return fail(exit_code(&e), e.to_string()),
    };
    let session = Session { cap: cli.degree, format: cli.format, field, texts };
    let mut out = String::new();
    match dispatch(cli, &session, &pres, &mut out) {
        Ok(code) => Outcome { code, stdout: out, stderr: String::new() },
        Err(e) => Outcome { code: exit_code(&e), stdout: out, stderr: format!("error: {e}\n") },
    }
}

fn checked(s: &Session, out: &mut String, items: &[CheckItem]) -> i32 {
    s.report(out, items);
    if all_passed(items) {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn require(m: Option<&PathBuf>, flag: &str) -> Result<PathBuf> {
    m.cloned().ok_or_else(|| Error::Precondition(format!("this verb needs {flag}")))
}

/// `(σ_A, σ_B)` from `--sigma-a/--sigma-b`, falling back to `--twist` for both; missing ones are identities.
fn sigmas(cli: &Cli, s: &Session, n: usize, m: usize) -> Result<(LinearMap, LinearMap)> {
    let shared = cli.twist.as_ref().map(|p| s.matrix(p)).transpose()?;
    let pick = |own: &Option<PathBuf>, dim: usize| -> Result<LinearMap> {
        match (own, &shared) {
            (Some(p), _) => s.matrix(p),
            (None, Some(x)) => Ok(x.clone()),
            (None, None) => Ok(LinearMap::identity(dim)),
        }
    };
    if cli.twist.is_none() && cli.sigma_a.is_none() && cli.sigma_b.is_none() {
        return Err(Error::Precondition("this verb needs --twist or --sigma-a/--sigma-b".into()));
    }
    Ok((pick(&cli.sigma_a, n)?, pick(&cli.sigma_b, m)?))
}

fn dispatch(cli: &Cli, s: &Session, pres: &[Presentation], out: &mut String) -> Result<i32> {
    let cap = s.cap;
    match &cli.command {
        Command::Parse { .. } => s.print(out, &pres[0])?,
        Command::Hilbert { .. } => {
            let h = pres[0].hilbert_series()?;
            match s.format {
                Format::Table => {
                    out.push_str("degree  dim\n");
                    for (d, x) in h.iter().enumerate() {
                        let _ = writeln!(out, "{d:>6}  {x}");
                    }
                }
                Format::Machine => {
                    let cells: Vec<String> = h.iter().map(u64::to_string).collect();
                    let _ = writeln!(out, "hilbert\t{}", cells.join("\t"));
                }
            }
        }
        Command::Product { kind, .. } => {
            let (a, b) = (&pres[0], &pres[1]);
            let p = match kind {
                ProductArg::Circ => product(ProductKind::Circ, a, b)?,
                ProductArg::Odot => product(ProductKind::Odot, a, b)?,
                ProductArg::Bullet => product(ProductKind::Bullet(2), a, b)?,
                ProductArg::Ttp => {
                    let tau = s.matrix(&require(cli.twist.as_ref(), "--twist")?)?;
                    let t = TwistingMap::from_matrix(tau, a, b, cap).map_err(|e| match e {
                        Error::CheckFailed(m) => Error::Precondition(m),
                        e => e,
                    })?;
                    t.presentation()?
                }
            };
            s.print(out, &p)?;
        }
        Command::Dual { .. } => s.print(out, &bang(&pres[0])?)?,
        Command::Hom { .. } => s.print(out, &hom_object(&pres[0], &pres[1])?.pres)?,
        Command::End { check_equivalence, check_bialgebra, .. } => {
            let a = &pres[0];
            let sigma = cli.twist.as_ref().map(|p| s.matrix(p)).transpose()?;
            let hom = match &sigma {
                Some(x) => hom_upsilon(a, a, &FactorizableTwist::new(x.clone(), x.clone())?, cap)?,
                None => end_object(a)?,
            };
            let mut items = Vec::new();
            if *check_bialgebra {
                items.extend(bialgebra_checks(&hom, cap.min(3))?);
            }
            if *check_equivalence {
                let x = sigma.ok_or_else(|| Error::Precondition("--check-equivalence needs --twist".into()))?;
                items.extend(twist_equivalences(a, &x, cap)?);
            }
            if items.is_empty() {
                s.print(out, &hom.pres)?;
            } else {
                return Ok(checked(s, out, &items));
            }
        }
        Command::Emarked { .. } => s.print(out, &e_marked(&pres[0], cap)?)?,
        Command::Cocompose { .. } => {
            let c = cocomposition(&pres[0], &pres[1], &pres[2], cap)?;
            return Ok(checked(s, out, &c.items));
        }
        Command::TwistHom { .. } => {
            let (b, a) = (&pres[0], &pres[1]);
            let (sa, sb) = sigmas(cli, s, a.dim(), b.dim())?;
            s.print(out, &hom_upsilon(b, a, &FactorizableTwist::new(sa, sb)?, cap)?.pres)?;
        }
        Command::Saturate { .. } => {
            let (b, a) = (&pres[0], &pres[1]);
            let tau = match (&cli.twist, &cli.sigma_a, &cli.sigma_b) {
                (Some(p), None, None) => s.matrix(p)?,
                _ => {
                    let (sa, sb) = sigmas(cli, s, a.dim(), b.dim())?;
                    FactorizableTwist::new(sa, sb)?.tau_hat()?
                }
            };
            s.print(out, &saturate_hom_general(a, b, &tau, cap)?.pres)?;
        }
        Command::FactorTau { tau } => {
            let t = s.matrix(tau)?;
            let n = (1..=t.rows()).find(|n| n * n * n >= t.rows()).unwrap_or(0);
            if n * n * n != t.rows() {
                return Err(Error::DimensionMismatch(format!("τ has size {}, not a cube", t.rows())));
            }
            let mut g = GlobalCollectionSample::new();
            g.insert(n, n, t.clone())?;
            let items = check_semigroupoid(&g);
            let code = checked(s, out, &items);
            if code != EXIT_OK {
                return Ok(code);
            }
            let sigma = factor_tau(&t, n)?;
            out.push_str("sigma\n");
            out.push_str(&render_matrix(&sigma, &s.field));
        }
        Command::CocycleCheck { .. } => {
            let sigma = s.matrix(&require(cli.twist.as_ref(), "--twist")?)?;
            let chi = Cocycle::pinned(sigma)?.with_powers(cap)?;
            return Ok(checked(s, out, &cocycle_checks(&chi, &pres[0], cap)?));
        }
        Command::Equivalence { b, .. } => {
            let a = &pres[0];
            let items = match b {
                Some(_) => {
                    let b = &pres[1];
                    let (sa, sb) = sigmas(cli, s, a.dim(), b.dim())?;
                    vec![hom_twist_equivalence(b, a, &sb, &sa, cap)?]
                }
                None => {
                    let sigma = s.matrix(&require(cli.twist.as_ref(), "--twist")?)?;
                    twist_equivalences(a, &sigma, cap)?
                }
            };
            return Ok(checked(s, out, &items));
        }
        Command::Frt => {
            let phi = match &cli.twist {
                Some(p) => s.matrix(p)?,
                None => LinearMap::identity(2),
            };
            let rep = frt_suite(&s.field, &s.field.param("q")?, &phi, cap)?;
            return Ok(checked(s, out, &rep.items));
        }
        Command::Selftest { name: SelftestArg::Appendix, lambda } => {
            let lambda = qls_core::expr::parse_scalar(lambda, &s.field)?;
            let mut setup = NonGradedSetup { lambda: lambda.clone(), ..NonGradedSetup::default() };
            if let Some(p) = &cli.twist {
                setup = NonGradedSetup::collection(s.matrix(p)?, lambda.clone(), setup.d);
            }
            let o = nongraded_counterexample(&setup)?;
            s.report(out, &o.items);
            if o.failure_detected {
                out.push_str("FAILURE DETECTED (expected)\n");
            } else if lambda == Scalar::zero() {
                out.push_str("no failure (graded control)\n");
            } else {
                out.push_str("failure NOT detected\n");
                return Ok(EXIT_CHECK_FAILED);
            }
        }
    }
    Ok(EXIT_OK)
}
