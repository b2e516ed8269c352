//! The `laguerre` command-line front end. Every subcommand is a thin wrapper
//! over one library call.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::basis::laguerre_fn_multi_deriv;
use crate::convolution::convolve_coeff;
use crate::decay::decay_report;
use crate::error::{Error, Result};
use crate::extension::{extend_nd, extension_quality, seeley_weights};
use crate::function::{parse_usize_list, FunctionHandle};
use crate::kernel::{kernel_apply, kernel_from_function, KernelMatrix};
use crate::multi_index::{MultiIndex, Point};
use crate::operators::{apply_e_coeff, apply_e_pointwise};
use crate::quadrature::gauss_laguerre_rule;
use crate::samples::{read_points, read_samples, samples_on_grid, write_nodes, write_samples};
use crate::tensor::CoefficientTensor;
use crate::transform::{analyze, analyze_samples, synthesize, uniform_grid};

#[derive(Debug, Parser)]
#[command(name = "laguerre", version, about = "Laguerre spectral analysis on the positive orthant")]
pub struct Cli {
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laguerre coefficients of sampled data or a built-in function.
    Analyze(AnalyzeArgs),
    /// Evaluate a coefficient tensor at points.
    Synth(SynthArgs),
    /// Evaluate one basis function (or a derivative) at one point.
    EvalBasis(EvalBasisArgs),
    /// Convolve two coefficient tensors.
    Convolve(ConvolveArgs),
    /// Extend a built-in function to all of R^d and sample it.
    Extend(ExtendArgs),
    /// Apply the Laguerre operator E to coefficients or to a function.
    ApplyE(ApplyEArgs),
    /// Decay report of a coefficient tensor.
    Classify(ClassifyArgs),
    /// Apply a kernel coefficient matrix to a coefficient tensor.
    KernelApply(KernelApplyArgs),
    /// Run the built-in numerical checks.
    Selftest,
    /// Print the quadrature node grid that sampled input must cover.
    Nodes(NodesArgs),
}

#[derive(Debug, Args)]
pub struct FnArgs {
    /// Built-in function: laguerre:n[,n..], expdecay:alpha or gaussian.
    #[arg(long = "fn")]
    pub func: Option<String>,
    /// Dimension for expdecay and gaussian.
    #[arg(long, default_value_t = 1)]
    pub dims: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// CSV samples at the quadrature nodes (header x1..xd,f).
    #[arg(long, conflicts_with = "func")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub function: FnArgs,
    /// Degree bounds: one value for every axis, or a comma list.
    #[arg(long)]
    pub bounds: String,
    /// Gauss-Laguerre rule size; defaults to the largest bound.
    #[arg(long)]
    pub rule: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// CSV of points (header x1..xd).
    #[arg(long, conflicts_with = "grid")]
    pub points: Option<PathBuf>,
    /// Uniform grid start:stop:count on every axis.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub coeffs: PathBuf,
    #[command(flatten)]
    pub at: PointArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalBasisArgs {
    /// Multi-index, comma separated.
    #[arg(long)]
    pub n: String,
    /// Point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Derivative orders per axis (default: none).
    #[arg(long)]
    pub deriv: Option<String>,
}

#[derive(Debug, Args)]
pub struct ConvolveArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtendArgs {
    #[command(flatten)]
    pub function: FnArgs,
    /// Matched derivative orders 0..N-1.
    #[arg(long, default_value_t = 4)]
    pub order: usize,
    #[arg(long)]
    pub cutoff_width: Option<f64>,
    #[command(flatten)]
    pub at: PointArgs,
    /// Sampled extension as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Boundary mismatch and seminorm report as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ApplyEArgs {
    /// Coefficient tensor; selects coefficient mode.
    #[arg(long, conflicts_with = "func")]
    pub coeffs: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub power: u32,
    #[command(flatten)]
    pub function: FnArgs,
    #[command(flatten)]
    pub at: PointArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub coeffs: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub k_max: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KernelApplyArgs {
    /// Kernel matrix JSON.
    #[arg(long, conflicts_with = "kernel_fn")]
    pub kernel: Option<PathBuf>,
    /// Built-in kernel on R^{m+n}; needs --row-bounds and --col-bounds.
    #[arg(long)]
    pub kernel_fn: Option<String>,
    #[arg(long)]
    pub row_bounds: Option<String>,
    #[arg(long)]
    pub col_bounds: Option<String>,
    #[arg(long)]
    pub rule: Option<usize>,
    /// Also write the kernel matrix built from --kernel-fn.
    #[arg(long)]
    pub save_kernel: Option<PathBuf>,
    #[arg(long)]
    pub coeffs: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NodesArgs {
    #[arg(long)]
    pub rule: usize,
    #[arg(long, default_value_t = 1)]
    pub dims: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command. Returns
/// the process exit status: 0 on success, 2 for usage and validation errors,
/// 1 for parse, I/O and other runtime failures.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => {
                let mut buf: Vec<u8> = Vec::new();
                let r = pool.install(|| execute(&cli.command, &mut buf));
                stdout.write_all(&buf).map_err(Error::from).and(r)
            }
            Err(e) => Err(Error::invalid(format!("cannot start {n} threads: {e}"))),
        },
        None => execute(&cli.command, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                2
            } else {
                1
            }
        }
    }
}

fn execute(cmd: &Command, stdout: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Analyze(a) => {
            let dims = if a.input.is_some() { None } else { fn_dims(&a.function)? };
            let bounds = parse_bounds(&a.bounds, dims)?;
            let rule = gauss_laguerre_rule(a.rule.unwrap_or(bounds.max_entry()))?;
            let c = match (&a.input, &a.function.func) {
                (Some(path), _) => {
                    let s = read_samples(open(path)?)?;
                    let bounds = broadcast(&bounds, s.dims)?;
                    analyze_samples(&samples_on_grid(&s, &rule)?, &bounds, &rule)?
                }
                (None, Some(_)) => analyze(&named(&a.function)?, &bounds, &rule)?,
                (None, None) => return Err(Error::invalid("analyze needs --input or --fn")),
            };
            emit(&a.out, stdout, &c.to_json())
        }
        Command::Synth(a) => {
            let c = read_tensor(&a.coeffs)?;
            let points = points(&a.at, c.dims())?;
            let values = points
                .iter()
                .map(|p| synthesize(&c, &Point::new(p.clone())?))
                .collect::<Result<Vec<f64>>>()?;
            emit_samples(&a.out, stdout, c.dims(), &points, &values)
        }
        Command::EvalBasis(a) => {
            let n = MultiIndex::new(parse_usize_list(&a.n)?)?;
            let x = parse_f64_list(&a.x)?;
            crate::error::check_dims(n.dims(), x.len())?;
            let p = match &a.deriv {
                Some(s) => parse_usize_list(s)?,
                None => vec![0; n.dims()],
            };
            crate::error::check_dims(n.dims(), p.len())?;
            let point = Point::new(x)?;
            if !point.in_closed_orthant() {
                return Err(Error::invalid("basis functions live on the closed orthant"));
            }
            emit(&None, stdout, &laguerre_fn_multi_deriv(&n, &p, &point).to_string())
        }
        Command::Convolve(a) => {
            let conv = convolve_coeff(&read_tensor(&a.a)?, &read_tensor(&a.b)?)?;
            emit(&a.out, stdout, &conv.coefficients.to_json())
        }
        Command::Extend(a) => {
            let f = named(&a.function)?;
            let mut w = seeley_weights(a.order)?;
            if let Some(cw) = a.cutoff_width {
                w = w.with_cutoff_width(cw)?;
            }
            let g = extend_nd(&f, &w);
            let points = points(&a.at, f.dims())?;
            let values: Vec<f64> = points.iter().map(|p| g.eval(p)).collect();
            if let Some(path) = &a.report {
                let boundary = boundary_points(&points, f.dims());
                let grid: Vec<Point> = points.iter().map(|p| Point::new(p.clone())).collect::<Result<_>>()?;
                let q = extension_quality(&f, &g, a.order - 1, &boundary, &grid, (1, 1))?;
                write_file(path, &serde_json::to_string_pretty(&q)?)?;
            }
            emit_samples(&a.out, stdout, f.dims(), &points, &values)
        }
        Command::ApplyE(a) => match (&a.coeffs, &a.function.func) {
            (Some(path), _) => {
                let out = apply_e_coeff(&read_tensor(path)?, a.power)?;
                emit(&a.out, stdout, &out.to_json())
            }
            (None, Some(_)) => {
                if a.power != 1 {
                    return Err(Error::invalid("pointwise mode applies E once; use coefficient mode for powers"));
                }
                let f = named(&a.function)?;
                let points = points(&a.at, f.dims())?;
                let values = points
                    .iter()
                    .map(|p| apply_e_pointwise(&f, &Point::new(p.clone())?))
                    .collect::<Result<Vec<f64>>>()?;
                emit_samples(&a.out, stdout, f.dims(), &points, &values)
            }
            (None, None) => Err(Error::invalid("apply-e needs --coeffs or --fn")),
        },
        Command::Classify(a) => {
            let r = decay_report(&read_tensor(&a.coeffs)?, a.k_max)?;
            emit(&a.out, stdout, &serde_json::to_string_pretty(&r)?)
        }
        Command::KernelApply(a) => {
            let k = match (&a.kernel, &a.kernel_fn) {
                (Some(path), _) => KernelMatrix::from_json(&read_file(path)?)?,
                (None, Some(spec)) => {
                    let (rows, cols) = match (&a.row_bounds, &a.col_bounds) {
                        (Some(r), Some(c)) => (parse_bounds(r, None)?, parse_bounds(c, None)?),
                        _ => return Err(Error::invalid("--kernel-fn needs --row-bounds and --col-bounds")),
                    };
                    let kf = FunctionHandle::named(spec, rows.dims() + cols.dims())?;
                    let rule = gauss_laguerre_rule(a.rule.unwrap_or(rows.max_entry().max(cols.max_entry())))?;
                    kernel_from_function(&kf, &rows, &cols, &rule)?
                }
                (None, None) => return Err(Error::invalid("kernel-apply needs --kernel or --kernel-fn")),
            };
            if let Some(path) = &a.save_kernel {
                write_file(path, &k.to_json())?;
            }
            let out = kernel_apply(&k, &read_tensor(&a.coeffs)?)?;
            emit(&a.out, stdout, &out.to_json())
        }
        Command::Selftest => {
            let checks = crate::selftest::run_all()?;
            for c in &checks {
                writeln!(stdout, "{c}")?;
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            writeln!(stdout, "{} of {} checks passed", checks.len() - failed, checks.len())?;
            if failed > 0 {
                return Err(Error::Runtime(format!("{failed} selftest checks failed")));
            }
            Ok(())
        }
        Command::Nodes(a) => {
            let rule = gauss_laguerre_rule(a.rule)?;
            match &a.out {
                Some(path) => write_nodes(BufWriter::new(File::create(path)?), &rule, a.dims),
                None => write_nodes(stdout, &rule, a.dims),
            }
        }
    }
}

fn named(f: &FnArgs) -> Result<FunctionHandle> {
    let spec = f.func.as_deref().ok_or_else(|| Error::invalid("--fn is required"))?;
    FunctionHandle::named(spec, f.dims)
}

fn fn_dims(f: &FnArgs) -> Result<Option<usize>> {
    Ok(match f.func {
        Some(_) => Some(named(f)?.dims()),
        None => None,
    })
}

/// `"16"` or `"8,4"`; a single value is repeated to `dims` axes when known.
fn parse_bounds(s: &str, dims: Option<usize>) -> Result<MultiIndex> {
    let b = MultiIndex::new(parse_usize_list(s)?)?;
    match dims {
        Some(d) => broadcast(&b, d),
        None => Ok(b),
    }
}

fn broadcast(b: &MultiIndex, dims: usize) -> Result<MultiIndex> {
    if b.dims() == dims {
        Ok(b.clone())
    } else if b.dims() == 1 {
        Ok(MultiIndex::splat(dims, b[0]))
    } else {
        Err(Error::DimensionMismatch { expected: dims, found: b.dims() })
    }
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::invalid(format!("bad number '{t}' in '{s}'"))))
        .collect()
}

fn points(at: &PointArgs, dims: usize) -> Result<Vec<Vec<f64>>> {
    let pts = match (&at.points, &at.grid) {
        (Some(path), _) => read_points(open(path)?)?,
        (None, Some(spec)) => {
            let parts = parse_f64_list(&spec.replace(':', ","))?;
            let [start, stop, count] = parts[..] else {
                return Err(Error::invalid(format!("grid '{spec}' is not start:stop:count")));
            };
            if count < 1.0 || count.fract() != 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
                return Err(Error::invalid(format!("grid '{spec}' needs start <= stop and a positive integer count")));
            }
            uniform_grid(dims, start, stop, count as usize).into_iter().map(Point::into_vec).collect()
        }
        (None, None) => return Err(Error::invalid("points needed: --points or --grid")),
    };
    for p in &pts {
        crate::error::check_dims(dims, p.len())?;
    }
    Ok(pts)
}

// Grid points projected onto each face of the orthant they are close to.
fn boundary_points(points: &[Vec<f64>], dims: usize) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for p in points.iter().filter(|p| p.iter().all(|&v| v >= 0.0)) {
        for axis in 0..dims {
            let mut q = p.clone();
            q[axis] = 0.0;
            let q = Point::from(q);
            if !out.contains(&q) {
                out.push(q);
            }
        }
    }
    out
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read_tensor(path: &Path) -> Result<CoefficientTensor> {
    CoefficientTensor::from_json(&read_file(path)?).map_err(|e| match e {
        Error::Json(j) => Error::Parse(format!("{}: {j}", path.display())),
        other => other,
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    writeln!(f, "{text}")?;
    f.flush()?;
    Ok(())
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, text: &str) -> Result<()> {
    match out {
        Some(path) => write_file(path, text),
        None => Ok(writeln!(stdout, "{text}")?),
    }
}

fn emit_samples(out: &Option<PathBuf>, stdout: &mut dyn Write, dims: usize, points: &[Vec<f64>], values: &[f64]) -> Result<()> {
    match out {
        Some(path) => write_samples(BufWriter::new(File::create(path)?), dims, points, values),
        None => write_samples(stdout, dims, points, values),
    }
}
