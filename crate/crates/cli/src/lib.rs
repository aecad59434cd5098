//! Command-line front end: argument parsing into a [`Plan`] and execution
//! into a single JSON document plus an exit code.
//!
//! Exit codes: 0 when every report passes, 1 when some report fails (the
//! report is still printed), 2 on usage or input errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cosan::action::{compose_extract, DEFAULT_CAP};
use cosan::coeff::{all_natural_transformations, find_isomorphism};
use cosan::cosan::{cosan_map, evaluate, tabulate_cosan, tabulate_nat};
use cosan::fixtures::{collapse, neighbourhood_functor, phantom_powerset};
use cosan::json::{
    cosan_elem_to_json, functor_from_input, inj_coeff_from_json, inj_coeff_to_json, inj_nat_to_json,
    san_elem_to_json, sur_coeff_from_json, sur_coeff_to_json, tab_functor_from_json,
    tab_functor_to_json, tab_nat_to_json, NatDoc,
};
use cosan::san::{
    check_algebra_laws, check_exponential_pointwise, check_strength_semicartesian, san_count,
    san_evaluate, san_map,
};
use cosan::verify::{
    boolean_hom_check, check_cocone_colimit, check_phi_iso, check_pullback_preservation,
    check_semicartesian, extract_coefficients, extract_nat, relabel_extraction,
    validate_tab_functor,
};
use cosan::{Algebra, CheckReport, FinFun, InjCoeff, Outcome, SurCoeff, TabFunctor, TabNat};

/// Window used when a command needs one and `--window` is absent.
pub const DEFAULT_WINDOW: usize = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] clap::Error),
    #[error("{0}")]
    Missing(String),
    #[error("{path}: {message}")]
    File { path: PathBuf, message: String },
    #[error(transparent)]
    Core(#[from] cosan::Error),
}

impl CliError {
    fn missing(what: &str) -> Self {
        CliError::Missing(what.to_string())
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) | CliError::Missing(_) => "usage",
            CliError::File { .. } => "input",
            CliError::Core(cosan::Error::ResourceBound { .. }) => "resource",
            CliError::Core(_) => "input",
        }
    }

    /// The JSON document printed for this error.
    pub fn to_json(&self) -> Value {
        json!({"error": {"kind": self.kind(), "message": self.to_string()}})
    }
}

#[derive(Parser, Debug)]
#[command(name = "cosan", version, about = "Co-semi-analytic functors on finite sets")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Debug, Default, Clone)]
struct Inputs {
    /// Injection coefficients: a JSON file or builtin:NAME. Repeat for source and target.
    #[arg(long)]
    coeff: Vec<String>,
    /// Surjection coefficients: a JSON file or builtin:NAME.
    #[arg(long)]
    san: Option<String>,
    /// Tabulated functor: a JSON file or builtin:NAME. Repeat for source and target.
    #[arg(long)]
    tab: Vec<String>,
    /// Tabulated transformation: a JSON file or builtin:collapse.
    #[arg(long)]
    nat: Option<String>,
    #[arg(long)]
    size: Option<usize>,
    /// Level k for the cocone check.
    #[arg(long)]
    at: Option<usize>,
    #[arg(long)]
    window: Option<usize>,
    /// Function literal "m>n:v1,...".
    #[arg(long)]
    fun: Option<FinFun>,
    /// Also write the JSON document to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Bound on composite level sizes.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// List the elements of Ǎ((k]) or F_B((k]).
    Eval(Inputs),
    /// Apply the functor to a function literal.
    Map(Inputs),
    /// Tabulate Ǎ on the window.
    Tabulate(Inputs),
    /// Extract coefficients from a tabulated functor.
    Extract(Inputs),
    /// Extract a coefficient transformation from a tabulated one.
    ExtractNat(Inputs),
    /// Run a verification check.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Tabulate F_B ∘ Ǎ and extract its coefficients.
    Compose(Inputs),
    /// Print a builtin object as JSON.
    Builtin {
        name: String,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Tabulate, extract and compare, for coefficients and transformations.
    Roundtrip(Inputs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Functor,
    Pullbacks,
    Cocone,
    Semicartesian,
    Strength,
    BooleanHom,
    All,
    Algebra,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Eval,
    Map,
    Tabulate,
    Extract,
    ExtractNat,
    Check(CheckKind),
    Compose,
    Builtin(String),
    Roundtrip,
}

/// An injection-coefficient input. Builtins are instantiated at whatever
/// window the command needs.
#[derive(Clone, Debug)]
pub enum CoeffSource {
    Builtin(String),
    Given(InjCoeff),
}

#[derive(Clone, Debug)]
pub enum TabSource {
    Builtin(String),
    Given(TabFunctor),
}

/// A parsed invocation. Every referenced file has already been read and
/// checked against its schema.
#[derive(Clone, Debug)]
pub struct Plan {
    pub command: Command,
    pub coeffs: Vec<CoeffSource>,
    pub san: Option<SurCoeff>,
    pub tabs: Vec<TabSource>,
    pub nat: Option<NatDoc>,
    pub size: Option<usize>,
    pub at: Option<usize>,
    pub window: Option<usize>,
    pub fun: Option<FinFun>,
    pub out: Option<PathBuf>,
    pub cap: usize,
}

/// Outcome of [`execute`]: the exit code and the document to print.
#[derive(Clone, Debug, PartialEq)]
pub struct Execution {
    pub code: i32,
    pub document: Value,
}

fn builtin_name(arg: &str) -> Option<&str> {
    arg.strip_prefix("builtin:")
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let file_err = |message: String| CliError::File {
        path: path.to_path_buf(),
        message,
    };
    let text = std::fs::read_to_string(path).map_err(|e| file_err(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| file_err(e.to_string()))
}

fn with_path<T>(path: &str, r: cosan::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::File {
        path: PathBuf::from(path),
        message: e.to_string(),
    })
}

fn known_tab_builtin(name: &str) -> bool {
    matches!(name, "phantom" | "neighbourhood") || InjCoeff::builtin(name, 0).is_ok()
}

fn resolve_coeff(arg: &str) -> Result<CoeffSource, CliError> {
    match builtin_name(arg) {
        Some(name) => {
            InjCoeff::builtin(name, 0)?;
            Ok(CoeffSource::Builtin(name.to_string()))
        }
        None => {
            let doc = read_json(Path::new(arg))?;
            Ok(CoeffSource::Given(with_path(arg, inj_coeff_from_json(&doc))?))
        }
    }
}

fn resolve_tab(arg: &str) -> Result<TabSource, CliError> {
    match builtin_name(arg) {
        Some(name) if known_tab_builtin(name) => Ok(TabSource::Builtin(name.to_string())),
        Some(name) => Err(cosan::Error::UnknownBuiltin(name.to_string()).into()),
        None => {
            let doc = read_json(Path::new(arg))?;
            Ok(TabSource::Given(with_path(arg, tab_functor_from_json(&doc))?))
        }
    }
}

fn resolve_san(arg: &str) -> Result<SurCoeff, CliError> {
    match builtin_name(arg) {
        Some(name) => Ok(SurCoeff::builtin(name)?),
        None => {
            let doc = read_json(Path::new(arg))?;
            with_path(arg, sur_coeff_from_json(&doc))
        }
    }
}

fn resolve_nat(arg: &str, window: usize) -> Result<NatDoc, CliError> {
    let doc = match builtin_name(arg) {
        Some("collapse") => collapse_doc(window)?,
        Some(name) => return Err(cosan::Error::UnknownBuiltin(name.to_string()).into()),
        None => read_json(Path::new(arg))?,
    };
    with_path(arg, NatDoc::parse(&doc))
}

fn collapse_doc(window: usize) -> cosan::Result<Value> {
    Ok(tab_nat_to_json(
        &collapse(window)?,
        Some((json!("builtin:powerset"), json!("builtin:constant"))),
    ))
}

/// Parses the arguments (without the program name) and loads every input.
pub fn build_plan<I, T>(argv: I) -> Result<Plan, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("cosan")).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args)?;
    let (command, inputs) = match cli.command {
        Cmd::Eval(i) => (Command::Eval, i),
        Cmd::Map(i) => (Command::Map, i),
        Cmd::Tabulate(i) => (Command::Tabulate, i),
        Cmd::Extract(i) => (Command::Extract, i),
        Cmd::ExtractNat(i) => (Command::ExtractNat, i),
        Cmd::Check { kind, inputs } => (Command::Check(kind), inputs),
        Cmd::Compose(i) => (Command::Compose, i),
        Cmd::Builtin { name, inputs } => {
            let name = builtin_name(&name).unwrap_or(&name).to_string();
            (Command::Builtin(name), inputs)
        }
        Cmd::Roundtrip(i) => (Command::Roundtrip, i),
    };
    let window = inputs.window;
    Ok(Plan {
        command,
        coeffs: inputs.coeff.iter().map(|s| resolve_coeff(s)).collect::<Result<_, _>>()?,
        san: inputs.san.as_deref().map(resolve_san).transpose()?,
        tabs: inputs.tab.iter().map(|s| resolve_tab(s)).collect::<Result<_, _>>()?,
        nat: inputs
            .nat
            .as_deref()
            .map(|s| resolve_nat(s, window.unwrap_or(DEFAULT_WINDOW)))
            .transpose()?,
        size: inputs.size,
        at: inputs.at,
        window,
        fun: inputs.fun,
        out: inputs.out,
        cap: inputs.cap.unwrap_or(DEFAULT_CAP),
    })
}

impl Plan {
    fn window(&self) -> usize {
        self.window.unwrap_or(DEFAULT_WINDOW)
    }

    fn coeff(&self, i: usize, window: usize) -> Result<InjCoeff, CliError> {
        match self.coeffs.get(i) {
            Some(CoeffSource::Builtin(name)) => Ok(InjCoeff::builtin(name, window)?),
            Some(CoeffSource::Given(a)) => Ok(a.clone()),
            None if i == 0 => Err(CliError::missing("this command needs --coeff")),
            None => Err(CliError::missing("this command needs a second --coeff")),
        }
    }

    /// Window of the first coefficient input: `--window` for builtins, the
    /// file's own window otherwise.
    fn coeff_window(&self) -> usize {
        match self.coeffs.first() {
            Some(CoeffSource::Given(a)) if self.window.is_none() => a.window(),
            _ => self.window(),
        }
    }

    fn tab(&self, i: usize) -> Result<TabFunctor, CliError> {
        let w = self.window();
        match self.tabs.get(i) {
            Some(TabSource::Builtin(name)) => Ok(match name.as_str() {
                "phantom" => phantom_powerset(w)?,
                "neighbourhood" => neighbourhood_functor(w)?,
                _ => functor_from_input(&json!(name), w)?,
            }),
            Some(TabSource::Given(f)) => Ok(f.clone()),
            None => Err(CliError::missing("this command needs --tab")),
        }
    }

    fn nat(&self) -> Result<(&NatDoc, TabNat), CliError> {
        let doc = self.nat.as_ref().ok_or_else(|| CliError::missing("this command needs --nat"))?;
        let psi = if self.tabs.len() >= 2 {
            doc.build(self.tab(0)?, self.tab(1)?)?
        } else {
            doc.build_embedded()?
        };
        Ok((doc, psi))
    }

    fn san(&self) -> Result<&SurCoeff, CliError> {
        self.san.as_ref().ok_or_else(|| CliError::missing("this command needs --san"))
    }

    fn size(&self) -> Result<usize, CliError> {
        self.size.ok_or_else(|| CliError::missing("this command needs --size"))
    }
}

fn outcome(reports: &[CheckReport]) -> Outcome {
    if reports.iter().any(|r| r.result == Outcome::Error) {
        Outcome::Error
    } else if reports.iter().any(|r| r.result == Outcome::Fail) {
        Outcome::Fail
    } else {
        Outcome::Pass
    }
}

fn exit_code(reports: &[CheckReport]) -> i32 {
    i32::from(outcome(reports) != Outcome::Pass)
}

fn single(report: CheckReport) -> Execution {
    let code = exit_code(std::slice::from_ref(&report));
    Execution {
        code,
        document: serde_json::to_value(report).expect("reports serialize"),
    }
}

/// `{"check","result","witness","reports"}` plus any extra fields; the
/// witness is the first non-passing report's.
fn combined(check: &str, reports: Vec<CheckReport>, extra: Value) -> Execution {
    let witness = reports
        .iter()
        .find(|r| !r.passed())
        .and_then(|r| r.witness.clone());
    let mut document = json!({
        "check": check,
        "result": outcome(&reports),
        "witness": witness,
        "reports": reports,
    });
    if let (Value::Object(doc), Value::Object(extra)) = (&mut document, extra) {
        doc.extend(extra);
    }
    Execution {
        code: exit_code(&reports),
        document,
    }
}

fn success(document: Value) -> Execution {
    Execution { code: 0, document }
}

/// Runs the plan. Errors are input errors (exit 2); check failures are
/// reported inside the returned document.
pub fn execute(plan: &Plan) -> Result<Execution, CliError> {
    match &plan.command {
        Command::Eval => eval(plan),
        Command::Map => map(plan),
        Command::Tabulate => {
            let w = plan.coeff_window();
            let a = plan.coeff(0, w)?;
            Ok(success(tab_functor_to_json(tabulate_cosan(&a, w)?.functor())))
        }
        Command::Extract => extract(plan),
        Command::ExtractNat => extract_nat_cmd(plan),
        Command::Check(kind) => check(plan, *kind),
        Command::Compose => compose(plan),
        Command::Builtin(name) => builtin(plan, name),
        Command::Roundtrip => roundtrip(plan),
    }
}

/// Runs the plan, writes `--out` if requested, and maps errors to their
/// exit-2 document.
pub fn run(plan: &Plan) -> Execution {
    execute(plan)
        .and_then(|exec| write_out(plan, &exec.document).map(|()| exec))
        .unwrap_or_else(|e| Execution {
            code: 2,
            document: e.to_json(),
        })
}

/// The text printed for a document: pretty JSON with a trailing newline.
pub fn render(document: &Value) -> String {
    let mut text = serde_json::to_string_pretty(document).expect("documents serialize");
    text.push('\n');
    text
}

fn eval(plan: &Plan) -> Result<Execution, CliError> {
    let k = plan.size()?;
    if let Some(b) = &plan.san {
        check_cap(b, k, plan.cap)?;
        let elems: Vec<Value> = san_evaluate(b, k)?.iter().map(|e| san_elem_to_json(b, e)).collect();
        return Ok(success(json!({"size": k, "count": elems.len(), "elements": elems})));
    }
    let w = match plan.coeffs.first() {
        Some(CoeffSource::Builtin(_)) => k,
        _ => plan.coeff_window(),
    };
    let a = plan.coeff(0, w)?;
    let elems: Vec<Value> = evaluate(&a, k)?.iter().map(|e| cosan_elem_to_json(&a, e)).collect();
    Ok(success(json!({"size": k, "count": elems.len(), "elements": elems})))
}

fn check_cap(b: &SurCoeff, k: usize, cap: usize) -> Result<(), CliError> {
    let count = san_count(b, k)?;
    if count > cap as u128 {
        return Err(cosan::Error::ResourceBound {
            level: k,
            size: usize::try_from(count).unwrap_or(usize::MAX),
            cap,
        }
        .into());
    }
    Ok(())
}

fn map(plan: &Plan) -> Result<Execution, CliError> {
    let f = plan.fun.as_ref().ok_or_else(|| CliError::missing("map needs --fun"))?;
    let (m, n) = (f.dom(), f.cod());
    let entries: Vec<Value> = if let Some(b) = &plan.san {
        // covariant: F_B((m]) → F_B((n])
        check_cap(b, m.max(n), plan.cap)?;
        san_evaluate(b, m)?
            .iter()
            .map(|e| Ok(json!({"from": san_elem_to_json(b, e), "to": san_elem_to_json(b, &san_map(b, f, e)?)})))
            .collect::<cosan::Result<_>>()?
    } else if !plan.tabs.is_empty() {
        let t = plan.tab(0)?;
        if m.max(n) > t.window() {
            return Err(cosan::Error::OutOfWindow {
                size: m.max(n),
                window: t.window(),
            }
            .into());
        }
        (0..t.size(n))
            .map(|x| json!({"from": t.name(n, x), "to": t.name(m, t.apply(f, x))}))
            .collect()
    } else {
        let w = match plan.coeffs.first() {
            Some(CoeffSource::Builtin(_)) => m.max(n),
            _ => plan.coeff_window(),
        };
        let a = plan.coeff(0, w)?;
        evaluate(&a, n)?
            .iter()
            .map(|e| Ok(json!({"from": cosan_elem_to_json(&a, e), "to": cosan_elem_to_json(&a, &cosan_map(&a, f, e)?)})))
            .collect::<cosan::Result<_>>()?
    };
    Ok(success(json!({"fun": f, "entries": entries})))
}

fn extraction_fields(ext: Option<&cosan::verify::Extraction>) -> Value {
    match ext {
        Some(ext) => {
            let embedding: Vec<Vec<usize>> = ext
                .embedding
                .iter()
                .map(|l| l.iter().map(|&x| x + 1).collect())
                .collect();
            json!({
                "sizes": ext.coeff.sizes(),
                "coefficients": inj_coeff_to_json(&ext.coeff),
                "embedding": embedding,
            })
        }
        None => json!({"sizes": null, "coefficients": null, "embedding": null}),
    }
}

fn extract(plan: &Plan) -> Result<Execution, CliError> {
    let f = plan.tab(0)?;
    let (ext, report) = extract_coefficients(&f);
    let mut reports = vec![report];
    if let Some(ext) = &ext {
        reports.push(check_phi_iso(&f, ext));
    }
    Ok(combined("extract", reports, extraction_fields(ext.as_ref())))
}

/// Coefficients for the endpoints of a transformation: `--coeff` twice, or
/// the builtin names embedded in the transformation document.
fn nat_coeffs(plan: &Plan, doc: &NatDoc, window: usize) -> Result<(InjCoeff, InjCoeff), CliError> {
    if plan.coeffs.len() >= 2 {
        return Ok((plan.coeff(0, window)?, plan.coeff(1, window)?));
    }
    let embedded = |v: &Option<Value>| -> Result<InjCoeff, CliError> {
        match v.as_ref().and_then(Value::as_str) {
            Some(name) => Ok(InjCoeff::builtin(name, window)?),
            None => Err(CliError::missing(
                "extract-nat needs two --coeff unless the transformation names builtin endpoints",
            )),
        }
    };
    Ok((embedded(&doc.source)?, embedded(&doc.target)?))
}

fn extract_nat_cmd(plan: &Plan) -> Result<Execution, CliError> {
    const CHECK: &str = "extract-nat";
    let (doc, psi) = plan.nat()?;
    let (a, b) = nat_coeffs(plan, doc, psi.source().window())?;
    let report = match extract_nat(&a, &b, &psi) {
        Ok(tau) => {
            let mut exec = single(CheckReport::pass(CHECK));
            exec.document["transformation"] = inj_nat_to_json(&tau);
            return Ok(exec);
        }
        Err(cosan::Error::NonSemicartesian { level, witness }) => {
            CheckReport::fail(CHECK, json!({"reason": "not semi-cartesian", "level": level, "p": witness}))
        }
        Err(cosan::Error::NotNatural(w)) => {
            CheckReport::fail(CHECK, json!({"reason": "not natural", "detail": w}))
        }
        Err(cosan::Error::RoundTripMismatch(w)) => {
            CheckReport::fail(CHECK, json!({"reason": "round trip", "detail": w}))
        }
        Err(e) => return Err(e.into()),
    };
    Ok(single(report))
}

fn cocone_reports(f: &TabFunctor, at: Option<usize>) -> Vec<CheckReport> {
    match at {
        Some(k) => vec![check_cocone_colimit(f, k)],
        None => (0..=f.window()).map(|k| check_cocone_colimit(f, k)).collect(),
    }
}

fn check(plan: &Plan, kind: CheckKind) -> Result<Execution, CliError> {
    Ok(match kind {
        CheckKind::Functor => single(validate_tab_functor(&plan.tab(0)?)),
        CheckKind::Pullbacks => single(check_pullback_preservation(&plan.tab(0)?)),
        CheckKind::Cocone => {
            let f = plan.tab(0)?;
            match plan.at {
                Some(k) => single(check_cocone_colimit(&f, k)),
                None => combined("cocone", cocone_reports(&f, None), json!({})),
            }
        }
        CheckKind::Semicartesian => single(check_semicartesian(&plan.nat()?.1)),
        CheckKind::Strength => single(check_strength_semicartesian(plan.san()?, plan.window())),
        CheckKind::BooleanHom => single(boolean_hom_check(plan.window())),
        CheckKind::Algebra => {
            let b = plan.san()?;
            let alg = Algebra::max(b, plan.size()?)?;
            let reports = vec![
                check_algebra_laws(b, &alg),
                check_exponential_pointwise(b, &alg, plan.window.unwrap_or(2)),
            ];
            combined("algebra", reports, json!({"carrier": alg.carrier}))
        }
        CheckKind::All => check_all(plan)?,
    })
}

/// Functor validation, both image conditions, extraction and `φ`. With
/// `--coeff` the extracted coefficients must also match the given ones.
/// Stops after the first report whose result is an error.
fn check_all(plan: &Plan) -> Result<Execution, CliError> {
    let f = plan.tab(0)?;
    let given = if plan.coeffs.is_empty() {
        None
    } else {
        Some(plan.coeff(0, f.window())?)
    };
    let mut reports = Vec::new();
    let stopped = |reports: &[CheckReport]| reports.iter().any(|r| r.result == Outcome::Error);
    reports.push(validate_tab_functor(&f));
    if !stopped(&reports) {
        reports.push(check_pullback_preservation(&f));
    }
    if !stopped(&reports) {
        reports.extend(cocone_reports(&f, plan.at));
    }
    let mut extra = json!({});
    if !stopped(&reports) {
        let (ext, report) = extract_coefficients(&f);
        reports.push(report);
        if let Some(ext) = ext {
            match &given {
                Some(a) => match find_isomorphism(&ext.coeff, a) {
                    Some(iso) => {
                        reports.push(CheckReport::pass("coefficients"));
                        reports.push(check_phi_iso(&f, &relabel_extraction(&ext, a, &iso)));
                    }
                    None => reports.push(CheckReport::fail(
                        "coefficients",
                        json!({"extracted": ext.coeff.sizes(), "given": a.sizes()}),
                    )),
                },
                None => reports.push(check_phi_iso(&f, &ext)),
            }
            extra = json!({"sizes": ext.coeff.sizes()});
        }
    }
    Ok(combined("all", reports, extra))
}

fn compose(plan: &Plan) -> Result<Execution, CliError> {
    let b = plan.san()?;
    let w = plan.window();
    let a = plan.coeff(0, w)?;
    let c = compose_extract(b, &a, w, plan.cap)?;
    let mut extra = extraction_fields(c.extraction.as_ref());
    extra["composite_sizes"] = json!(c.functor.sizes());
    Ok(combined("compose", c.reports, extra))
}

fn builtin(plan: &Plan, name: &str) -> Result<Execution, CliError> {
    let w = plan.window();
    let document = match name {
        "collapse" => collapse_doc(w)?,
        "phantom" => tab_functor_to_json(&phantom_powerset(w)?),
        "neighbourhood" => tab_functor_to_json(&neighbourhood_functor(w)?),
        _ if name.starts_with("max:") => {
            let b = SurCoeff::builtin("pplus")?;
            let alg = Algebra::builtin(&b, name)?;
            json!({"kind": "algebra", "san": "builtin:pplus", "carrier": alg.carrier, "alpha": alg.alpha})
        }
        _ => match SurCoeff::builtin(name) {
            Ok(b) => sur_coeff_to_json(&b),
            Err(_) => inj_coeff_to_json(&InjCoeff::builtin(name, w)?),
        },
    };
    Ok(success(document))
}

/// Tabulates the coefficients, extracts them back and compares up to
/// isomorphism; then does the same for every transformation between the
/// given coefficients (from the first to the second, or endomorphisms).
fn roundtrip(plan: &Plan) -> Result<Execution, CliError> {
    let w = plan.coeff_window();
    let a = plan.coeff(0, w)?;
    let b = if plan.coeffs.len() >= 2 {
        plan.coeff(1, w)?
    } else {
        a.clone()
    };
    let f = tabulate_cosan(&a, w)?.into_functor();
    let (ext, report) = extract_coefficients(&f);
    let mut reports = vec![report];
    let mut extra = extraction_fields(ext.as_ref());
    if let Some(ext) = &ext {
        match find_isomorphism(&ext.coeff, &a) {
            Some(iso) => {
                reports.push(CheckReport::pass("isomorphic"));
                reports.push(check_phi_iso(&f, &relabel_extraction(ext, &a, &iso)));
            }
            None => reports.push(CheckReport::fail(
                "isomorphic",
                json!({"extracted": ext.coeff.sizes(), "given": a.sizes()}),
            )),
        }
    }
    let nats = all_natural_transformations(&a, &b);
    let mut failure = None;
    for (i, tau) in nats.iter().enumerate() {
        let (_, _, psi) = tabulate_nat(tau, w)?;
        match extract_nat(&a, &b, &psi) {
            Ok(back) if back == *tau => {}
            Ok(back) => {
                failure = Some(json!({"index": i, "expected": inj_nat_to_json(tau), "found": inj_nat_to_json(&back)}));
                break;
            }
            Err(e) => {
                failure = Some(json!({"index": i, "expected": inj_nat_to_json(tau), "error": e.to_string()}));
                break;
            }
        }
    }
    reports.push(match failure {
        None => CheckReport::pass("nat-roundtrip").with_detail(json!({"transformations": nats.len()})),
        Some(w) => CheckReport::fail("nat-roundtrip", w),
    });
    extra["tabulated_sizes"] = json!(f.sizes());
    Ok(combined("roundtrip", reports, extra))
}

fn write_out(plan: &Plan, document: &Value) -> Result<(), CliError> {
    if let Some(path) = &plan.out {
        std::fs::write(path, render(document)).map_err(|e| CliError::File {
            path: path.clone(),
            message: e.to_string(),
        })?;
    }
    Ok(())
}
