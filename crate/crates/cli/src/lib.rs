//! Command-line front end: every command prints one JSON report on stdout.
//!
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage or parse errors.

pub mod json;
pub mod literal;
pub mod poly;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};
use cyperiod::algebra::UniPoly;
use cyperiod::cm::{self, GenusTwoCurve, QuotientReport, SymmetricForm};
use cyperiod::hypergeometric::{
    gauss_from_pf, h3_representation, levelt_monodromy, maximal_unipotent_test, riemann_scheme,
    to_dmatrix, unipotency_class, GaussParameters, MonodromyRep, UnipotencyClass, CLASS_TOL,
};
use cyperiod::periods::{
    on_cut, ode_residual, period_integral, series_2f1, PeriodError, QuadratureSpec,
};
use cyperiod::picard_fuchs::{
    holomorphic_forms, pf_operator, pf_parameters, verify_certificate, CoverSignature,
    FormExponents, PFOperator, PFParameters,
};
use cyperiod::surface::{surface_report, FiberLocation, WeierstrassModel};
use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use json::{complex, float, matrix, object, opt, rational, rationals};
use literal::{parse_complex, parse_tuple};
use poly::{parse_poly, print_poly};

pub const SCHEMA_VERSION: u32 = 1;
/// Finite-difference step of the ODE residual in `periods`.
pub const ODE_STEP: f64 = 1e-3;
const SERIES_TOL: f64 = 1e-15;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "cyperiod", version, about = "Periods, monodromy and CM checks for a K3-fibred Calabi-Yau family")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Singular fibers and Hodge numbers of Y² = X³ + f(t)².
    Surface(SurfaceArgs),
    /// Picard-Fuchs operator and certificate of one form on a cyclic cover.
    Pf(PfArgs),
    /// Monodromy of the holomorphic forms and the maximal-unipotency test.
    Monodromy(MonodromyArgs),
    /// Numerical period, Gauss series and ODE residual at one λ.
    Periods(PeriodsArgs),
    /// Elliptic quotients and CM detection for y² = (x³−a)(x³−b).
    Cm(CmArgs),
}

#[derive(Args, Debug)]
pub struct SurfaceArgs {
    /// f(t), degree 1 to 6.
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// g(t) in f = g·h².
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    /// h(t) in f = g·h².
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<String>,
}

#[derive(Args, Debug)]
pub struct PfArgs {
    /// n,eX,e1,eL for y^n = x^eX (x−1)^e1 (x−λ)^eL.
    #[arg(long, allow_hyphen_values = true)]
    pub cover: String,
    /// α,β,γ,l.
    #[arg(long, allow_hyphen_values = true)]
    pub form: String,
}

#[derive(Args, Debug)]
pub struct MonodromyArgs {
    /// n,eX,e1,eL.
    #[arg(long, allow_hyphen_values = true)]
    pub cover: String,
}

#[derive(Args, Debug)]
pub struct PeriodsArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub cover: String,
    #[arg(long, allow_hyphen_values = true)]
    pub form: String,
    /// Complex λ, e.g. 2 or 1.5+0.5i.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
}

#[derive(Args, Debug)]
pub struct CmArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// m in y² = x⁶ − m x³ + 1.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long, default_value_t = cm::DEFAULT_HEIGHT)]
    pub height: u32,
    #[arg(long, default_value_t = cm::DEFAULT_TOL)]
    pub tol: f64,
}

/// Result of one invocation: exit code and the two output streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { code, stdout, stderr };
        }
    };
    match execute(&cli.command) {
        Ok(report) => Outcome {
            code: 0,
            stdout: format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable")),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

pub fn execute(command: &Command) -> Result<Value, CliError> {
    let (name, input, result) = match command {
        Command::Surface(a) => ("surface", surface_input(a), surface(a)?),
        Command::Pf(a) => ("pf", json!({"cover": a.cover, "form": a.form}), pf(a)?),
        Command::Monodromy(a) => ("monodromy", json!({"cover": a.cover}), monodromy(a)?),
        Command::Periods(a) => (
            "periods",
            json!({"cover": a.cover, "form": a.form, "lambda": a.lambda}),
            periods(a)?,
        ),
        Command::Cm(a) => ("cm", cm_input(a), cm_command(a)?),
    };
    Ok(object([
        ("schemaVersion", json!(SCHEMA_VERSION)),
        ("command", json!(name)),
        ("input", input),
        ("result", result),
    ]))
}

fn parse_poly_arg(flag: &str, text: &str) -> Result<UniPoly, CliError> {
    parse_poly(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn surface_input(a: &SurfaceArgs) -> Value {
    match &a.f {
        Some(f) => json!({"f": f}),
        None => json!({"g": a.g, "h": a.h}),
    }
}

fn surface(a: &SurfaceArgs) -> Result<Value, CliError> {
    let model = match (&a.f, &a.g, &a.h) {
        (Some(f), None, None) => WeierstrassModel::new(parse_poly_arg("f", f)?),
        (None, Some(g), Some(h)) => {
            WeierstrassModel::from_factored(parse_poly_arg("g", g)?, parse_poly_arg("h", h)?)
        }
        _ => return Err(usage("give either --f, or both --g and --h")),
    }
    .map_err(domain)?;
    let r = surface_report(&model);
    let fibers: Vec<Value> = r
        .fibers
        .iter()
        .map(|fib| {
            object([
                (
                    "location",
                    match &fib.location {
                        FiberLocation::Factor(p) => json!(print_poly(p)),
                        FiberLocation::Infinity => json!("infinity"),
                    },
                ),
                ("multiplicity", json!(fib.multiplicity)),
                ("type", json!(fib.kodaira_type.label())),
                ("eulerNumber", json!(fib.euler_number)),
                ("components", json!(fib.components)),
                ("fiberCount", json!(fib.fiber_count)),
                ("nonMinimal", json!(fib.non_minimal)),
            ])
        })
        .collect();
    let hodge = opt(r.hodge, |h| {
        object([
            ("k", json!(h.fixed_curves)),
            ("points", json!(h.fixed_points)),
            ("r", json!(h.h21)),
            ("h21", json!(h.h21)),
            ("h11", json!(h.h11)),
        ])
    });
    Ok(object([
        ("f", json!(print_poly(model.f()))),
        ("degree", json!(model.degree())),
        ("fibers", Value::Array(fibers)),
        ("countIV", json!(r.count_iv)),
        ("countIVstar", json!(r.count_iv_star)),
        ("eulerTotal", json!(r.euler_total)),
        ("isK3", json!(r.is_k3)),
        ("nsLowerBound", json!(r.ns_lower_bound)),
        ("hodge", hodge),
    ]))
}

fn parse_cover(text: &str) -> Result<CoverSignature, CliError> {
    let [n, ex, e1, el] = parse_tuple::<4>(text).map_err(|e| usage(format!("--cover: {e}")))?;
    CoverSignature::new(n, ex, e1, el).map_err(domain)
}

fn parse_form(text: &str, cover: &CoverSignature) -> Result<FormExponents, CliError> {
    let [alpha, beta, gamma, l] = parse_tuple::<4>(text).map_err(|e| usage(format!("--form: {e}")))?;
    let form = FormExponents::new(alpha, beta, gamma, l);
    form.validate(cover).map_err(domain)?;
    Ok(form)
}

fn form_value(f: &FormExponents) -> Value {
    json!([f.alpha, f.beta, f.gamma, f.l])
}

fn parameters_value(p: &PFParameters) -> Value {
    object([
        ("a", rational(&p.a)),
        ("b", rational(&p.b)),
        ("c", rational(&p.c)),
        ("holomorphic", json!(p.is_holomorphic())),
    ])
}

fn operator_value(op: &PFOperator) -> Value {
    object([
        ("variable", json!("lambda")),
        ("coefficientOrder", json!("ascending")),
        ("c2", rationals(op.c2.coeffs())),
        ("c1", rationals(op.c1.coeffs())),
        ("c0", rationals(op.c0.coeffs())),
    ])
}

fn gauss_value(g: &GaussParameters) -> Value {
    let s = riemann_scheme(g);
    object([
        ("A", rational(&g.a)),
        ("B", rational(&g.b)),
        ("C", rational(&g.c)),
        (
            "riemannScheme",
            object([
                ("0", rationals(&s.at_zero)),
                ("1", rationals(&s.at_one)),
                ("infinity", rationals(&s.at_infinity)),
                ("fuchsSum", rational(&s.fuchs_sum())),
            ]),
        ),
    ])
}

fn pf(a: &PfArgs) -> Result<Value, CliError> {
    let cover = parse_cover(&a.cover)?;
    let form = parse_form(&a.form, &cover)?;
    let p = pf_parameters(&cover, &form);
    let op = pf_operator(&p);
    let cert = verify_certificate(&p);
    let (gauss, gauss_error) = match gauss_from_pf(&op) {
        Ok(g) => (gauss_value(&g), Value::Null),
        Err(e) => (Value::Null, json!(e.to_string())),
    };
    Ok(object([
        ("parameters", parameters_value(&p)),
        ("operator", operator_value(&op)),
        ("gauss", gauss),
        ("gaussError", gauss_error),
        ("certificate", object([("holds", json!(cert.holds))])),
    ]))
}

fn class_label(c: UnipotencyClass) -> String {
    match c {
        UnipotencyClass::Identity => "identity".into(),
        UnipotencyClass::UnipotentBlock2 => "unipotent-jordan-block-2".into(),
        UnipotencyClass::Unipotent { index } => format!("unipotent-index-{index}"),
        UnipotencyClass::FiniteOrder(k) => format!("finite-order-{k}"),
        UnipotencyClass::SemisimpleNonUnipotent => "semisimple-non-unipotent".into(),
        UnipotencyClass::Other => "other".into(),
    }
}

fn monodromy_value(rep: &MonodromyRep) -> Value {
    let classes: Vec<Value> = rep
        .matrices()
        .iter()
        .map(|(point, m)| {
            object([
                ("point", json!(point.label())),
                ("matrix", matrix(*m)),
                ("class", json!(class_label(unipotency_class(&to_dmatrix(*m), CLASS_TOL)))),
            ])
        })
        .collect();
    object([
        ("generators", Value::Array(classes)),
        ("relationResidual", float(rep.relation_residual)),
    ])
}

fn monodromy(a: &MonodromyArgs) -> Result<Value, CliError> {
    let cover = parse_cover(&a.cover)?;
    let forms = holomorphic_forms(&cover);
    let mut reps = Vec::new();
    let mut entries = Vec::new();
    for form in &forms {
        let p = pf_parameters(&cover, form);
        let op = pf_operator(&p);
        let g = gauss_from_pf(&op).map_err(|e| {
            domain(format!("form {:?}: {e}", [form.alpha, form.beta, form.gamma, form.l]))
        })?;
        let rep = levelt_monodromy(&g).map_err(|e| {
            domain(format!("form {:?}: {e}", [form.alpha, form.beta, form.gamma, form.l]))
        })?;
        entries.push(object([
            ("form", form_value(form)),
            ("parameters", parameters_value(&p)),
            ("gauss", gauss_value(&g)),
            ("monodromy", monodromy_value(&rep)),
        ]));
        reps.push(rep);
    }
    let rank4 = if let [r1, r2] = reps.as_slice() {
        let rep4 = h3_representation(r1, r2);
        let verdicts: Vec<Value> = maximal_unipotent_test(&rep4)
            .iter()
            .map(|v| {
                object([
                    ("point", json!(v.point.label())),
                    ("unipotent", json!(v.unipotent)),
                    ("nilpotencyOrder", json!(v.nilpotency_order)),
                    ("maximal", json!(v.maximal)),
                ])
            })
            .collect();
        object([
            ("symplecticResidual", float(rep4.symplectic_residual())),
            ("mum", Value::Array(verdicts)),
        ])
    } else {
        Value::Null
    };
    Ok(object([
        ("forms", Value::Array(entries)),
        ("rank4", rank4),
    ]))
}

fn periods(a: &PeriodsArgs) -> Result<Value, CliError> {
    let cover = parse_cover(&a.cover)?;
    let form = parse_form(&a.form, &cover)?;
    let lambda = parse_complex(&a.lambda).map_err(|e| usage(format!("--lambda: {e}")))?;
    let p = pf_parameters(&cover, &form);
    let op = pf_operator(&p);
    let gauss = gauss_from_pf(&op).ok();
    let spec = QuadratureSpec::default();

    let branch_point = lambda == Complex64::new(0.0, 0.0) || lambda == Complex64::new(1.0, 0.0);
    if on_cut(lambda) && !branch_point {
        return Err(domain(PeriodError::BranchCollision(lambda)));
    }
    let series = gauss.as_ref().and_then(|g| series_2f1(g, lambda, SERIES_TOL).ok());
    let (period, residual) = if branch_point {
        (None, None)
    } else {
        let v = period_integral(&p, lambda, &spec).map_err(domain)?;
        let residual = ode_residual(
            &op,
            |z| period_integral(&p, z, &spec).map(|v| v.value),
            lambda,
            ODE_STEP,
        )
        .ok();
        (Some(v), residual)
    };
    if period.is_none() && series.is_none() {
        return Err(domain(format!(
            "no value available at λ = {lambda}: the period is undefined at a branch point and the series does not converge there"
        )));
    }
    Ok(object([
        ("parameters", parameters_value(&p)),
        ("lambda", complex(lambda)),
        (
            "period",
            opt(period, |v| {
                object([("value", complex(v.value)), ("errorEstimate", float(v.error_estimate))])
            }),
        ),
        ("series", opt(series, complex)),
        ("odeResidual", opt(residual, float)),
        ("odeStep", float(ODE_STEP)),
    ]))
}

fn cm_input(a: &CmArgs) -> Value {
    let mut v = match &a.m {
        Some(m) => json!({"m": m}),
        None => json!({"a": a.a, "b": a.b}),
    };
    v["height"] = json!(a.height);
    v["tol"] = float(a.tol);
    v
}

fn quotient_value(q: &QuotientReport) -> Value {
    let c = &q.quotient.cubic;
    let v = &q.verdict;
    object([
        ("sign", json!(q.quotient.sign)),
        ("quartic", Value::Array(q.quotient.quartic.iter().map(|&z| complex(z)).collect())),
        (
            "cubic",
            object([("a", complex(c.a)), ("b", complex(c.b)), ("c", complex(c.c)), ("d", complex(c.d))]),
        ),
        ("j", complex(q.quotient.j)),
        ("tau", complex(v.tau)),
        ("jFromTau", complex(cm::klein_j(v.tau))),
        ("relation", opt(v.relation, |(q, r, s)| json!([q, r, s]))),
        ("discriminant", opt(v.discriminant, |d| json!(d))),
        ("fundamentalDiscriminant", opt(v.fundamental_discriminant, |d| json!(d))),
        ("residual", float(v.residual)),
        ("heightBound", json!(v.height_bound)),
        ("verdict", json!(if v.detected() { "cm-detected" } else { "not-detected" })),
    ])
}

fn cm_command(a: &CmArgs) -> Result<Value, CliError> {
    let complex_arg = |flag: &str, s: &str| {
        parse_complex(s).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
    };
    let form = match (&a.a, &a.b, &a.m) {
        (None, None, Some(m)) => SymmetricForm::new(complex_arg("m", m)?).map_err(domain)?,
        (Some(x), Some(y), None) => {
            let curve = GenusTwoCurve::new(complex_arg("a", x)?, complex_arg("b", y)?).map_err(domain)?;
            cm::reduce_to_symmetric(&curve).map_err(domain)?
        }
        _ => return Err(usage("give either --m, or both --a and --b")),
    };
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(usage("--tol must be a positive number"));
    }
    let reports = cm::analyze(&form, a.height, a.tol, &QuadratureSpec::default()).map_err(domain)?;
    Ok(object([
        ("m", complex(form.m())),
        ("quotients", Value::Array(reports.iter().map(quotient_value).collect())),
    ]))
}
