//! Command-line front end. Every subcommand prints JSON (or SVG) built
//! directly from the library results.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use bulletlab_core::reversibility::{check_theorem_pi, check_theorem_pi2, reverse_under, DEFAULT_TOLERANCE};
use bulletlab_core::verify::{
    verify_density_identity_pi, verify_density_identity_pi2, verify_empty_probability, verify_qr_distribution,
    verify_stationarity,
};
use bulletlab_core::{
    build_diagram, extract_stats, log_density, InitialLaw, Intensities, Parameter, Rectangle, RngStream,
    SymmetryElement, DEFAULT_MAX_EVENTS,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::document::{decode_diagram, encode_diagram, DiagramDocument};
use crate::error::{CliError, CliResult};
use crate::presets::{preset, DEFAULT_ALPHA};
use crate::svg::{render_svg, SvgStyle};

/// Environment variable naming the directory for relative output paths.
pub const OUT_DIR_VAR: &str = "BULLETLAB_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "bulletlab", version, about = "Simulate and check bullet-model space-time diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a diagram.
    Simulate(SimulateArgs),
    /// Point counts and lengths of a diagram document.
    Stats(DocArgs),
    /// Log-density of a diagram document.
    Density(DensityArgs),
    /// Reverse model under a symmetry.
    Reverse(ReverseArgs),
    /// Check the sufficient conditions for a pair of models.
    Check(CheckArgs),
    /// Run a seeded verification suite.
    Verify(VerifyArgs),
    /// Draw a diagram document as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Preset name: cbmc, loop-half, loop, hammersley, bggs, pv, ph.
    #[arg(long, conflicts_with = "params")]
    preset: Option<String>,
    /// Eight numbers lambda0,lambdaV,lambdaH,tauV,tauH,pV,pH,p0.
    #[arg(long, value_parser = parse_tuple, allow_hyphen_values = true)]
    params: Option<[f64; 8]>,
    /// Parameter of the bggs preset.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
}

#[derive(Debug, Args)]
struct NuArgs {
    #[arg(long)]
    nu_h: Option<f64>,
    #[arg(long)]
    nu_v: Option<f64>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    nu: NuArgs,
    /// Rectangle x0,y0,x1,y1.
    #[arg(long, value_parser = parse_rect, allow_hyphen_values = true, default_value = "0,0,5,5")]
    rect: Rectangle,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_EVENTS)]
    max_events: u64,
    /// Include point counts and lengths in the document.
    #[arg(long)]
    with_stats: bool,
    /// Document path; stdout when neither this nor --svg is given.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    style: StyleArgs,
}

#[derive(Debug, Args)]
struct DocArgs {
    document: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DensityArgs {
    document: PathBuf,
    /// Model to score under; defaults to the document's.
    #[command(flatten)]
    model: ModelArgs,
    /// Entry intensities; default to the document's law.
    #[command(flatten)]
    nu: NuArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReverseArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Symmetry: id, r, pi, pi2, pi32, rpi, rpi2, rpi32.
    #[arg(long, default_value = "pi")]
    g: SymmetryElement,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Theorem {
    Pi,
    Pi2,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Forward model: preset name or eight numbers.
    #[arg(long, value_parser = parse_model_spec, allow_hyphen_values = true)]
    p: ModelSpec,
    /// Candidate reverse model: preset name or eight numbers.
    #[arg(long, value_parser = parse_model_spec, allow_hyphen_values = true)]
    pt: ModelSpec,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "pi")]
    theorem: Theorem,
    #[arg(long, default_value_t = 1.0)]
    nu_h: f64,
    #[arg(long, default_value_t = 1.0)]
    nu_v: f64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    DensityPi,
    DensityPi2,
    Empty,
    Stationarity,
    Qr,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    /// Forward model: preset name or eight numbers.
    #[arg(long, value_parser = parse_model_spec, allow_hyphen_values = true)]
    p: ModelSpec,
    /// Reverse model; computed from the invariants when omitted.
    #[arg(long, value_parser = parse_model_spec, allow_hyphen_values = true)]
    pt: Option<ModelSpec>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha_bggs: f64,
    /// Forward intensities; default to the preset law, else 1.
    #[command(flatten)]
    nu: NuArgs,
    /// Reverse intensities for the qr suite; default to the forward ones,
    /// swapped for quarter turns.
    #[arg(long)]
    rev_nu_h: Option<f64>,
    #[arg(long)]
    rev_nu_v: Option<f64>,
    /// Symmetry for the qr suite.
    #[arg(long, default_value = "pi")]
    g: SymmetryElement,
    #[arg(long, value_parser = parse_rect, allow_hyphen_values = true)]
    rect: Option<Rectangle>,
    /// Shift dx,dy of the stationarity window.
    #[arg(long, value_parser = parse_pair, default_value = "1,1")]
    shift: (f64, f64),
    #[arg(long, default_value_t = 1000)]
    n: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1e-3)]
    alpha: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StyleArgs {
    /// Pixels along the longer side.
    #[arg(long, default_value_t = 600.0)]
    size: f64,
    /// Also mark births on segments and turns.
    #[arg(long)]
    all_births: bool,
}

impl StyleArgs {
    fn style(&self) -> SvgStyle {
        SvgStyle { size: self.size, mark_all_births: self.all_births, ..SvgStyle::default() }
    }
}

#[derive(Debug, Args)]
struct RenderArgs {
    document: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    style: StyleArgs,
}

#[derive(Debug, Clone, PartialEq)]
enum ModelSpec {
    Preset(String),
    Tuple([f64; 8]),
}

fn parse_numbers<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v: Vec<f64> =
        s.split(',').map(|t| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"))).collect::<Result<_, _>>()?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))
}

fn parse_tuple(s: &str) -> Result<[f64; 8], String> {
    parse_numbers::<8>(s)
}

fn parse_rect(s: &str) -> Result<Rectangle, String> {
    let [x0, y0, x1, y1] = parse_numbers::<4>(s)?;
    Rectangle::new(x0, y0, x1, y1).map_err(|e| e.to_string())
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let [a, b] = parse_numbers::<2>(s)?;
    Ok((a, b))
}

fn parse_model_spec(s: &str) -> Result<ModelSpec, String> {
    if s.contains(',') {
        parse_tuple(s).map(ModelSpec::Tuple)
    } else {
        Ok(ModelSpec::Preset(s.to_owned()))
    }
}

/// Parameters plus the preset's usual law, if any.
fn resolve(spec: &ModelSpec, alpha: f64) -> CliResult<(Parameter, Option<InitialLaw>)> {
    match spec {
        ModelSpec::Preset(name) => {
            let p = preset(name, alpha)?;
            Ok((p.params, Some(p.default_law)))
        }
        ModelSpec::Tuple(t) => Ok((Parameter::from_tuple(*t)?, None)),
    }
}

impl ModelArgs {
    fn spec(&self) -> Option<ModelSpec> {
        match (&self.preset, self.params) {
            (Some(name), _) => Some(ModelSpec::Preset(name.clone())),
            (None, Some(t)) => Some(ModelSpec::Tuple(t)),
            (None, None) => None,
        }
    }

    fn required(&self) -> CliResult<(Parameter, Option<InitialLaw>)> {
        let spec = self.spec().ok_or_else(|| CliError::Usage("one of --preset or --params is required".into()))?;
        resolve(&spec, self.alpha)
    }
}

impl NuArgs {
    /// Explicit values override the fallback; missing ones default to 1.
    fn intensities(&self, fallback: Option<Intensities>) -> CliResult<Intensities> {
        let base = fallback.unwrap_or(Intensities { nu_h: 1.0, nu_v: 1.0 });
        Ok(Intensities::new(self.nu_h.unwrap_or(base.nu_h), self.nu_v.unwrap_or(base.nu_v))?)
    }
}

fn out_path(p: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if p.is_relative() => Path::new(&dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn read(path: &Path) -> CliResult<Vec<u8>> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    let path = out_path(path);
    std::fs::write(&path, text).map_err(|source| CliError::Io { path, source })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

fn emit(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct NotApplicable {
    element: SymmetryElement,
    not_applicable: String,
}

fn simulate(a: &SimulateArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let (params, preset_law) = a.model.required()?;
    let law = InitialLaw::Ppp(a.nu.intensities(preset_law.and_then(|l| l.intensities()))?);
    let u = build_diagram(&params, &law, &a.rect, &mut RngStream::new(a.seed), a.max_events)?;
    let doc = DiagramDocument::new(&u, params, law, a.seed, a.with_stats)?;
    if a.out.is_some() || a.svg.is_none() {
        emit(&a.out, &encode_diagram(&doc), stdout)?;
    }
    if let Some(svg) = &a.svg {
        write_file(svg, &render_svg(&doc.configuration(), &a.style.style())?)?;
    }
    Ok(EXIT_OK)
}

fn density(a: &DensityArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let doc = decode_diagram(&read(&a.document)?)?;
    let (params, preset_law) = match a.model.spec() {
        Some(spec) => resolve(&spec, a.model.alpha)?,
        None => (doc.params, None),
    };
    let fallback = preset_law.or(Some(doc.law.clone())).and_then(|l| l.intensities());
    let law = InitialLaw::Ppp(a.nu.intensities(fallback)?);
    let d = log_density(&doc.configuration(), &params, &law)?;
    emit(&a.out, &json(&d), stdout)?;
    Ok(EXIT_OK)
}

fn reverse(a: &ReverseArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let (params, _) = a.model.required()?;
    let text = match reverse_under(a.g, &params, a.tol) {
        Ok(pair) => json(&pair),
        Err(e) => json(&NotApplicable { element: a.g, not_applicable: e.reason }),
    };
    emit(&a.out, &text, stdout)?;
    Ok(EXIT_OK)
}

fn check(a: &CheckArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let (p, _) = resolve(&a.p, a.alpha)?;
    let (pt, _) = resolve(&a.pt, a.alpha)?;
    let report = match a.theorem {
        Theorem::Pi => check_theorem_pi(&p, &pt, a.nu_v, a.nu_h, a.tol),
        Theorem::Pi2 => check_theorem_pi2(&p, &pt, a.nu_v, a.tol),
    };
    emit(&a.out, &json(&report), stdout)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_FAIL })
}

fn verify(a: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let (p, preset_law) = resolve(&a.p, a.alpha_bggs)?;
    let nu = a.nu.intensities(preset_law.and_then(|l| l.intensities()))?;
    let g = match a.suite {
        Suite::DensityPi => SymmetryElement::Pi,
        Suite::DensityPi2 => SymmetryElement::Pi2,
        _ => a.g,
    };
    let pt = || -> CliResult<Parameter> {
        match &a.pt {
            Some(spec) => Ok(resolve(spec, a.alpha_bggs)?.0),
            None => reverse_under(g, &p, DEFAULT_TOLERANCE)
                .map(|pair| pair.reverse_params)
                .map_err(|e| CliError::Usage(format!("no --pt given and the reverse is {e}"))),
        }
    };
    let rect = |default: [f64; 4]| -> CliResult<Rectangle> {
        match a.rect {
            Some(r) => Ok(r),
            None => Ok(Rectangle::new(default[0], default[1], default[2], default[3])?),
        }
    };
    let report = match a.suite {
        Suite::DensityPi => verify_density_identity_pi(
            &p,
            &pt()?,
            nu.nu_h,
            nu.nu_v,
            &rect([-1.0, -1.0, 1.0, 1.0])?,
            a.n,
            a.seed,
            a.tol,
        )?,
        Suite::DensityPi2 => verify_density_identity_pi2(
            &p,
            &pt()?,
            nu.nu_h,
            nu.nu_v,
            &rect([-1.0, -1.0, 1.0, 1.0])?,
            a.n,
            a.seed,
            a.tol,
        )?,
        Suite::Empty => verify_empty_probability(&p, nu.nu_h, nu.nu_v, &rect([0.0, 0.0, 1.0, 1.0])?, a.n, a.seed)?,
        Suite::Stationarity => {
            verify_stationarity(&p, nu.nu_h, nu.nu_v, &rect([0.0, 0.0, 2.0, 2.0])?, a.shift, a.n, a.seed, a.alpha)?
        }
        Suite::Qr => {
            let base = if g.swaps_axes() { nu.swapped() } else { nu };
            let rev = Intensities::new(a.rev_nu_h.unwrap_or(base.nu_h), a.rev_nu_v.unwrap_or(base.nu_v))?;
            verify_qr_distribution(g, &p, &pt()?, nu, rev, &rect([-1.0, -1.0, 1.0, 1.0])?, a.n, a.seed, a.alpha)?
        }
    };
    emit(&a.out, &json(&report), stdout)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_FAIL })
}

fn stats(a: &DocArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let doc = decode_diagram(&read(&a.document)?)?;
    emit(&a.out, &json(&extract_stats(&doc.configuration())?), stdout)?;
    Ok(EXIT_OK)
}

fn render(a: &RenderArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let doc = decode_diagram(&read(&a.document)?)?;
    emit(&a.out, &render_svg(&doc.configuration(), &a.style.style())?, stdout)?;
    Ok(EXIT_OK)
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code: 0 on success, 1 when a check or verification fails, 2 on
/// usage, input or validation errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => simulate(a, stdout),
        Command::Stats(a) => stats(a, stdout),
        Command::Density(a) => density(a, stdout),
        Command::Reverse(a) => reverse(a, stdout),
        Command::Check(a) => check(a, stdout),
        Command::Verify(a) => verify(a, stdout),
        Command::Render(a) => render(a, stdout),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(stderr, "error: {e}");
        EXIT_USAGE
    })
}
