//! The `frobgen` command line: generic polynomials, verification runs,
//! Galois orders of specializations and Lang-Steinberg fibers.

pub mod modfile;

use std::collections::HashMap;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use frobgen::frobmod::{CompanionForm, DEFAULT_SEED};
use frobgen::generators::{
    cyclic2_generic_poly, cyclic2_plan, q8_reproduction, sln_generic_poly,
    verify_c8f5_factorization, Cyclic2Poly, C8F5_POLY,
};
use frobgen::gf::{make_field, parse_field_literal, FieldElement, FieldSpec};
use frobgen::langsteinberg::{
    brute_force_fiber, lambda_star_generators, q8_param, torus_param, GroupParam,
};
use frobgen::linpoly::{galois_order_of_specialization, M_CEILING};
use frobgen::matfrob::{parse_matrix, specialize_matrix};
use frobgen::symfield::RatFunc;
use frobgen::tori::weil_restriction;
use frobgen::Error;

use modfile::{parse_module_file, ModuleFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Default sample size per extension field for `q8-verify`.
pub const Q8_EXTRA_POINTS: usize = 8;

#[derive(Parser, Debug)]
#[command(
    name = "frobgen",
    version,
    about = "Generic polynomials via Frobenius modules"
)]
pub struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generic polynomial for the cyclic group of order 2^m over F_p.
    Cyclic2 {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        m: u32,
    },
    /// Generic polynomial for SL_n over F_q.
    Sln {
        #[arg(short)]
        q: u64,
        #[arg(short)]
        n: usize,
    },
    /// Checks the Q_8 example: λ* triple and the printed f(Y) at sample points.
    Q8Verify {
        /// Seeded points over each of F_8 and F_16, on top of all of F_4.
        #[arg(long, default_value_t = Q8_EXTRA_POINTS)]
        extra: usize,
    },
    /// Checks the C_8/F_5 polynomial and its factorization.
    C8f5Verify,
    /// Splitting degree of a module file specialized at a point.
    Galois {
        #[arg(long)]
        module: String,
        /// Assignments such as "s=1,t=2"; values are element indices.
        #[arg(long, default_value = "")]
        xi: String,
        #[arg(long, default_value_t = M_CEILING)]
        mmax: u32,
        /// Field of the point; defaults to F_q.
        #[arg(long)]
        field: Option<String>,
    },
    /// All U in the group of the module file over F_{q^m} with λ(U) = target.
    LsFiber {
        #[arg(long)]
        module: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        m: u32,
    },
    /// λ* generators of a parametrized group.
    LambdaStar {
        #[arg(long, value_enum)]
        group: GroupArg,
        /// Torus field, e.g. "GF(5^2; 3,0,1)".
        #[arg(long)]
        field: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    Q8,
    Torus,
}

#[derive(Serialize, Debug, Default)]
pub struct Metadata {
    pub seed: Option<u64>,
    pub basis: Option<String>,
    pub modulus: Option<Vec<u64>>,
    pub cyclic_vector: Option<Vec<String>>,
}

/// The structured output of one run.
#[derive(Serialize, Debug)]
pub struct Document {
    pub case: String,
    pub params: Value,
    pub polynomial: Option<String>,
    pub metadata: Metadata,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: Value,
}

/// A failed run: exit code plus a one-line `kind: message` reason.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            kind: "usage",
            msg: msg.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Singular => (EXIT_INVALID, "singular specialization"),
            Error::DenominatorVanishes => (EXIT_INVALID, "singular specialization"),
            Error::BudgetExceeded { .. } => (EXIT_INVALID, "budget exceeded"),
            Error::SplittingBoundExceeded(_) => (EXIT_INVALID, "budget exceeded"),
            Error::NoCyclicVector { .. } => (EXIT_INVALID, "no cyclic vector"),
            Error::Inseparable => (EXIT_INVALID, "inseparable"),
            Error::NoExtractionRule(_) => (EXIT_INVALID, "no extraction rule"),
            Error::RouteMismatch(_) => (EXIT_VERIFY, "verification failed"),
            Error::NoWitness(_) => (EXIT_INVALID, "no witness"),
            _ => (EXIT_USAGE, "usage"),
        };
        Failure {
            code,
            kind,
            msg: e.to_string(),
        }
    }
}

/// What a subcommand produced: a document and its text rendering.
struct Outcome {
    doc: Document,
    text: Vec<String>,
    verified: bool,
}

impl Outcome {
    fn new(doc: Document, text: Vec<String>) -> Self {
        Outcome {
            doc,
            text,
            verified: true,
        }
    }
}

fn form_metadata(form: &CompanionForm<RatFunc>, modulus: &[u64]) -> Metadata {
    Metadata {
        seed: Some(form.seed),
        basis: Some(form.basis.to_string()),
        modulus: Some(modulus.to_vec()),
        cyclic_vector: Some(form.cyclic_vector.iter().map(ToString::to_string).collect()),
    }
}

fn cmd_cyclic2(p: u64, m: u32) -> Result<Outcome, Failure> {
    let plan = cyclic2_plan(p, m)?;
    let params = json!({"p": p, "m": m});
    match cyclic2_generic_poly(p, m) {
        Ok(Cyclic2Poly::Kummer { text }) => Ok(Outcome::new(
            Document {
                case: "kummer".into(),
                params: json!({"p": p, "m": m, "vars": ["t"]}),
                polynomial: Some(text.clone()),
                metadata: Metadata::default(),
                result: Value::Null,
            },
            vec![text],
        )),
        Ok(Cyclic2Poly::Torus(t)) => {
            let poly = t.poly.to_string();
            let vars = t.torus.ring.vars().to_vec();
            Ok(Outcome::new(
                Document {
                    case: "torus".into(),
                    params: json!({"p": p, "m": m, "n": t.torus.n, "vars": vars, "q": p}),
                    polynomial: Some(poly.clone()),
                    metadata: form_metadata(&t.form, t.torus.field.modulus()),
                    result: json!({
                        "plan": plan.to_string(),
                        "module_matrix": t.module_matrix.to_string(),
                        "companion": t.form.b.to_string(),
                    }),
                },
                vec![poly],
            ))
        }
        Err(Error::ExistenceOnly(reason)) => Ok(Outcome::new(
            Document {
                case: "minus-one".into(),
                params,
                polynomial: None,
                metadata: Metadata::default(),
                result: json!({"plan": plan.to_string(), "report": reason}),
            },
            vec![format!("existence only: {reason}")],
        )),
        Err(e) => Err(e.into()),
    }
}

fn cmd_sln(q: u64, n: usize) -> Result<Outcome, Failure> {
    let f = sln_generic_poly(q, n)?;
    let param = frobgen::langsteinberg::sln_param(q, n)?;
    let poly = f.to_string();
    Ok(Outcome::new(
        Document {
            case: "sln".into(),
            params: json!({"q": q, "n": n, "vars": param.vars()}),
            polynomial: Some(poly.clone()),
            metadata: Metadata {
                basis: Some("standard".into()),
                ..Metadata::default()
            },
            result: json!({"matrix": param.matrix.to_string()}),
        },
        vec![poly],
    ))
}

fn coords_text(coords: &[FieldElement]) -> String {
    let parts: Vec<String> = coords.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn cmd_q8_verify(extra: usize) -> Result<Outcome, Failure> {
    let report = q8_reproduction(extra)?;
    let mut text = Vec::new();
    let show = |v: &[RatFunc]| {
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    };
    text.push(format!(
        "lambda computed: ({})",
        show(&report.lambda_computed)
    ));
    text.push(format!(
        "lambda printed:  ({})",
        show(&report.lambda_printed)
    ));
    text.push(format!(
        "lambda match: {}{}",
        report.lambda_matches,
        if report.printed_is_product_with_twist {
            " (printed triple = coordinates of A A^(2))"
        } else {
            ""
        }
    ));
    let mut points = Vec::new();
    for c in &report.points {
        let f_degree = c.f_degree.as_ref().map_err(ToString::to_string);
        text.push(format!(
            "{} {} system {} f {} fiber {:?}/{} rho-in-Q8 {} {}",
            c.field,
            coords_text(&c.coords),
            c.system_degree,
            match &f_degree {
                Ok(d) => d.to_string(),
                Err(e) => format!("error({e})"),
            },
            c.fiber_degree,
            c.fiber_size,
            c.rho_in_q8,
            if c.ok() { "ok" } else { "FAIL" }
        ));
        points.push(json!({
            "field": c.field.to_string(),
            "coords": c.coords.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "system_degree": c.system_degree,
            "f_degree": f_degree.ok(),
            "fiber_degree": c.fiber_degree,
            "fiber_size": c.fiber_size,
            "rho_in_q8": c.rho_in_q8,
            "ok": c.ok(),
        }));
    }
    let failures = report.failures().len();
    let verified = report.lambda_matches && failures == 0;
    text.push(format!(
        "points: {}/{} ok; {}",
        report.points.len() - failures,
        report.points.len(),
        if verified {
            "verified"
        } else {
            "verification FAILED"
        }
    ));
    Ok(Outcome {
        doc: Document {
            case: "q8".into(),
            params: json!({"extra": extra, "vars": ["a", "b", "c"], "q": 2}),
            polynomial: Some(report.f_printed.to_string()),
            metadata: Metadata {
                seed: Some(DEFAULT_SEED),
                ..Metadata::default()
            },
            result: json!({
                "lambda_computed": report.lambda_computed.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "lambda_printed": report.lambda_printed.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "lambda_matches": report.lambda_matches,
                "printed_is_product_with_twist": report.printed_is_product_with_twist,
                "points": points,
                "verified": verified,
            }),
        },
        text,
        verified,
    })
}

fn cmd_c8f5_verify() -> Result<Outcome, Failure> {
    let Cyclic2Poly::Torus(t) = cyclic2_generic_poly(5, 3)? else {
        unreachable!("5 is not 1 mod 8")
    };
    let poly = t.poly.to_string();
    let poly_ok = poly == C8F5_POLY;
    let factors_ok = verify_c8f5_factorization()?;
    let verified = poly_ok && factors_ok;
    Ok(Outcome {
        doc: Document {
            case: "c8f5".into(),
            params: json!({"p": 5, "m": 3, "vars": ["s", "t"], "q": 5}),
            polynomial: Some(poly),
            metadata: form_metadata(&t.form, t.torus.field.modulus()),
            result: json!({"polynomial_ok": poly_ok, "factorization_ok": factors_ok, "verified": verified}),
        },
        text: vec![
            format!("polynomial: {}", if poly_ok { "ok" } else { "MISMATCH" }),
            format!(
                "factorization: {}",
                if factors_ok { "ok" } else { "MISMATCH" }
            ),
        ],
        verified,
    })
}

fn load_module(path: &str) -> Result<ModuleFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {path}: {e}")))?;
    parse_module_file(&text).map_err(|e| Failure::usage(format!("{path}: {e}")))
}

fn parse_assignment(xi: &str, field: &FieldSpec) -> Result<HashMap<String, FieldElement>, Failure> {
    let mut out = HashMap::new();
    for part in xi.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("bad assignment `{part}`")))?;
        let index: u64 = value
            .trim()
            .parse()
            .ok()
            .filter(|&v| v < field.order())
            .ok_or_else(|| {
                Failure::usage(format!("`{value}` is not an element index of {field}"))
            })?;
        if out
            .insert(name.trim().to_string(), field.element_from_index(index))
            .is_some()
        {
            return Err(Failure::usage(format!("`{}` assigned twice", name.trim())));
        }
    }
    Ok(out)
}

fn cmd_galois(module: &str, xi: &str, mmax: u32, field: Option<&str>) -> Result<Outcome, Failure> {
    let file = load_module(module)?;
    let q = file.q();
    let field = match field {
        Some(lit) => parse_field_literal(lit)?,
        None => make_field(file.p, file.k as usize, None)?,
    };
    if field.p() != file.p || field.k() % file.k as usize != 0 {
        return Err(Failure::usage(format!("{field} does not contain F_{q}")));
    }
    let assignment = parse_assignment(xi, &field)?;
    if let Some(extra) = assignment.keys().find(|k| file.ring.var_index(k).is_none()) {
        return Err(Error::UnknownVariable(extra.clone()).into());
    }
    let a = specialize_matrix(&file.a, &assignment)?;
    let emb = a.sample().spec().embed_into(&field)?;
    let a = a.map(|x| emb.apply(x));
    let report = galois_order_of_specialization(&a, q, mmax)?;
    let mut names: Vec<&String> = assignment.keys().collect();
    names.sort();
    let point: serde_json::Map<String, Value> = names
        .iter()
        .map(|k| ((*k).clone(), json!(assignment[*k].index())))
        .collect();
    Ok(Outcome::new(
        Document {
            case: "galois".into(),
            params: json!({"module": module, "q": q, "xi": point, "field": field.to_string(), "mmax": mmax}),
            polynomial: None,
            metadata: Metadata {
                modulus: Some(field.modulus().to_vec()),
                ..Metadata::default()
            },
            result: json!({
                "order": report.order,
                "splitting_field": report.field.to_string(),
                "rho": report.rho.to_string(),
            }),
        },
        vec![
            format!("splitting degree: {}", report.order),
            format!("splitting field: {}", report.field),
            format!("rho: {}", report.rho),
        ],
    ))
}

fn cmd_ls_fiber(module: &str, target: &str, m: u32) -> Result<Outcome, Failure> {
    let file = load_module(module)?;
    if m == 0 {
        return Err(Failure::usage("m must be at least 1"));
    }
    let q = file.q();
    let param = GroupParam::from_matrix("module", file.a.clone())?;
    let target_m = specialize_matrix(&parse_matrix(target, &file.ring)?, &HashMap::new())?;
    let big = make_field(file.p, file.k as usize * m as usize, None)?;
    let fiber = brute_force_fiber(&target_m, &param, q, &big)?;
    let mut text = vec![format!("fiber over {big}: {} elements", fiber.len())];
    text.extend(fiber.iter().map(ToString::to_string));
    Ok(Outcome::new(
        Document {
            case: "ls-fiber".into(),
            params: json!({"module": module, "q": q, "target": target_m.to_string(), "m": m}),
            polynomial: None,
            metadata: Metadata {
                modulus: Some(big.modulus().to_vec()),
                ..Metadata::default()
            },
            result: json!({
                "field": big.to_string(),
                "size": fiber.len(),
                "fiber": fiber.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
        },
        text,
    ))
}

fn cmd_lambda_star(group: GroupArg, field: Option<&str>) -> Result<Outcome, Failure> {
    let (param, modulus) = match group {
        GroupArg::Q8 => {
            if field.is_some() {
                return Err(Failure::usage("--field applies to the torus only"));
            }
            (q8_param(), None)
        }
        GroupArg::Torus => {
            let spec = match field {
                Some(lit) => parse_field_literal(lit)?,
                None => make_field(5, 2, Some(&[3, 0, 1]))?,
            };
            if spec.k() < 2 {
                return Err(Failure::usage("torus field must be a proper extension"));
            }
            let n = spec.k();
            let names: Vec<String> = if n == 2 {
                vec!["s".into(), "t".into()]
            } else {
                (1..=n).map(|i| format!("t{i}")).collect()
            };
            let t = weil_restriction(spec.p(), n, Some(spec.modulus()), &names)?;
            (torus_param(&t), Some(spec.modulus().to_vec()))
        }
    };
    let q = param.p();
    let gens = lambda_star_generators(&param, q)?;
    let text: Vec<String> = param
        .vars()
        .iter()
        .zip(&gens)
        .map(|(v, g)| format!("{v} <- {g}"))
        .collect();
    let map: serde_json::Map<String, Value> = param
        .vars()
        .iter()
        .zip(&gens)
        .map(|(v, g)| (v.clone(), json!(g.to_string())))
        .collect();
    Ok(Outcome::new(
        Document {
            case: format!("lambda-star-{}", param.name),
            params: json!({"group": param.name, "q": q, "vars": param.vars()}),
            polynomial: None,
            metadata: Metadata {
                modulus,
                ..Metadata::default()
            },
            result: json!({"generators": map, "matrix": param.matrix.to_string()}),
        },
        text,
    ))
}

fn dispatch(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Cyclic2 { p, m } => cmd_cyclic2(*p, *m),
        Command::Sln { q, n } => cmd_sln(*q, *n),
        Command::Q8Verify { extra } => cmd_q8_verify(*extra),
        Command::C8f5Verify => cmd_c8f5_verify(),
        Command::Galois {
            module,
            xi,
            mmax,
            field,
        } => cmd_galois(module, xi, *mmax, field.as_deref()),
        Command::LsFiber { module, target, m } => cmd_ls_fiber(module, target, *m),
        Command::LambdaStar { group, field } => cmd_lambda_star(*group, field.as_deref()),
    }
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let first = e.to_string();
                    let line = first
                        .lines()
                        .next()
                        .unwrap_or("")
                        .trim_start_matches("error: ");
                    let _ = writeln!(err, "error: usage: {line}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            if cli.json {
                let doc = serde_json::to_string_pretty(&outcome.doc).expect("serializable");
                let _ = writeln!(out, "{doc}");
            } else {
                for line in &outcome.text {
                    let _ = writeln!(out, "{line}");
                }
            }
            if outcome.verified {
                EXIT_OK
            } else {
                let _ = writeln!(err, "error: verification failed: {}", outcome.doc.case);
                EXIT_VERIFY
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}: {}", f.kind, f.msg.replace('\n', " "));
            f.code
        }
    }
}
