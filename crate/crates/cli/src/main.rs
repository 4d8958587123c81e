use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use multibrot_core::constants::{extremal_cycle, extremal_product, mu_bruteforce};
use multibrot_core::dynamics::ComplexPoint;
use multibrot_core::render::{
    compute_grid, write_pgm, Window, DEFAULT_RENDER_ITERS, DEFAULT_RESOLUTION,
};
use multibrot_core::sections::{
    scan_ray_endpoint_with, verify_real_sections, verify_rotation_symmetry, Classifier,
    EndpointReport, RayClass, RealSectionReport, SampleSet, SymmetryReport,
    DEFAULT_BISECTION_STEPS, DEFAULT_TOLERANCE,
};
use multibrot_core::{
    gamma, gamma_asymptotic_deviation, Degree, IterationBudget, SectionConstants,
};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "multibrot",
    version,
    about = "Cross-sections of multibrot sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ray {
    /// omega^(d-1) = 1 (omega = 1)
    Plus,
    /// omega^(d-1) = -1 (omega = -1 for even d, e^(i pi/(d-1)) for odd d)
    Minus,
    /// omega = i, for d - 1 = 2 (mod 4)
    Imaginary,
}

#[derive(Clone, Copy, ValueEnum)]
enum Via {
    Direct,
    Conjugate,
}

#[derive(Subcommand)]
enum Command {
    /// alpha, beta, xi and gamma for one (possibly non-integer) degree
    Constants {
        #[arg(long)]
        d: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
    },
    /// alpha, beta, gamma for a range of integer degrees
    Table {
        #[arg(long, default_value_t = 2)]
        dmin: u32,
        #[arg(long, default_value_t = 12)]
        dmax: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: TableFormat,
        /// Full binary64 values instead of 9 decimals
        #[arg(long)]
        full: bool,
    },
    /// Bisect for the boundary of M_d along a ray
    Endpoint {
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum)]
        ray: Ray,
        #[arg(long, default_value_t = IterationBudget::DEFAULT_MAX_ITERS)]
        budget: u64,
        #[arg(long, default_value_t = DEFAULT_BISECTION_STEPS)]
        steps: u32,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
        #[arg(long, value_enum, default_value = "direct")]
        via: Via,
        #[arg(long, value_enum, default_value = "json")]
        format: TextOrJson,
    },
    /// Escape-time image of M_d as binary PGM
    Render {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        center_re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        center_im: f64,
        #[arg(long, default_value_t = 3.0)]
        width: f64,
        #[arg(long, default_value_t = 3.0)]
        height: f64,
        /// Horizontal resolution in pixels
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        px: u32,
        /// Vertical resolution in pixels (defaults to --px)
        #[arg(long)]
        px_h: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_RENDER_ITERS)]
        budget: u64,
    },
    /// Run every consistency check for one degree
    Verify {
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = IterationBudget::DEFAULT_MAX_ITERS)]
        budget: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<multibrot_core::Error> for Failure {
    fn from(e: multibrot_core::Error) -> Self {
        use multibrot_core::Error::*;
        match e {
            InvalidDegree(_)
            | InvalidRealDegree(_)
            | InvalidBudget(_)
            | InvalidWindow(_)
            | UnsupportedRay { .. }
            | NonFinitePoint { .. }
            | EvenDegree { .. }
            | InvalidParameter(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

type CmdResult = Result<bool, Failure>;

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn budget(max_iters: u64) -> Result<IterationBudget, Failure> {
    Ok(IterationBudget::with_max_iters(max_iters)?)
}

fn cmd_constants(d: f64, format: TextOrJson) -> CmdResult {
    let c = SectionConstants::compute(d)?;
    match format {
        TextOrJson::Json => {
            #[derive(Serialize)]
            struct Out {
                #[serde(flatten)]
                constants: SectionConstants,
                xi_relative_residual: f64,
            }
            println!(
                "{}",
                to_json(&Out {
                    constants: c,
                    xi_relative_residual: c.xi_relative_residual(),
                })
            );
        }
        TextOrJson::Text => {
            println!("d                     {}", c.d);
            println!("alpha                 {}", c.alpha);
            println!("beta                  {}", c.beta);
            println!("xi                    {}", c.xi);
            println!("gamma                 {}", c.gamma);
            println!("xi_residual           {:e}", c.xi_residual);
            println!("xi_relative_residual  {:e}", c.xi_relative_residual());
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct TableRow {
    d: u32,
    alpha: f64,
    beta: f64,
    gamma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    xi: Option<f64>,
}

fn round9(x: f64) -> f64 {
    format!("{x:.9}").parse().expect("formatted float parses")
}

fn cmd_table(dmin: u32, dmax: u32, format: TableFormat, full: bool) -> CmdResult {
    if dmin < 2 {
        return Err(Failure::Usage(format!(
            "--dmin must be at least 2, got {dmin}"
        )));
    }
    if dmin > dmax {
        return Err(Failure::Usage(format!(
            "empty range: --dmin {dmin} exceeds --dmax {dmax}"
        )));
    }
    let rows = (dmin..=dmax)
        .map(|d| SectionConstants::compute(d as f64))
        .collect::<Result<Vec<_>, _>>()?;
    match format {
        TableFormat::Csv => {
            println!("d,alpha,beta,gamma");
            for (d, c) in (dmin..).zip(&rows) {
                if full {
                    println!("{d},{},{},{}", c.alpha, c.beta, c.gamma);
                } else {
                    println!("{d},{:.9},{:.9},{:.9}", c.alpha, c.beta, c.gamma);
                }
            }
        }
        TableFormat::Json => {
            #[derive(Serialize)]
            struct Out {
                dmin: u32,
                dmax: u32,
                precision: &'static str,
                rows: Vec<TableRow>,
            }
            let rows = (dmin..)
                .zip(&rows)
                .map(|(d, c)| {
                    if full {
                        TableRow {
                            d,
                            alpha: c.alpha,
                            beta: c.beta,
                            gamma: c.gamma,
                            xi: Some(c.xi),
                        }
                    } else {
                        TableRow {
                            d,
                            alpha: round9(c.alpha),
                            beta: round9(c.beta),
                            gamma: round9(c.gamma),
                            xi: None,
                        }
                    }
                })
                .collect();
            println!(
                "{}",
                to_json(&Out {
                    dmin,
                    dmax,
                    precision: if full { "full" } else { "9 decimals" },
                    rows,
                })
            );
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn cmd_endpoint(
    d: u32,
    ray: Ray,
    max_iters: u64,
    steps: u32,
    tolerance: f64,
    via: Via,
    format: TextOrJson,
) -> CmdResult {
    let degree = Degree::new(d)?;
    let budget = budget(max_iters)?;
    if steps == 0 {
        return Err(Failure::Usage("--steps must be at least 1".into()));
    }
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Failure::Usage(format!(
            "--tolerance must be positive, got {tolerance}"
        )));
    }
    let ray = match ray {
        Ray::Plus => RayClass::root_of_unity(degree),
        Ray::Minus => RayClass::root_of_minus_unity(degree),
        Ray::Imaginary => RayClass::imaginary_axis(degree)?,
    };
    let classifier = match via {
        Via::Direct => Classifier::Direct,
        Via::Conjugate => Classifier::Conjugate,
    };
    let estimate = scan_ray_endpoint_with(&ray, &budget, steps, classifier)?;
    let report = EndpointReport::new(&ray, classifier, &estimate, tolerance)?;
    match format {
        TextOrJson::Json => println!("{}", to_json(&report)),
        TextOrJson::Text => println!("{report}"),
    }
    Ok(report.pass)
}

#[allow(clippy::too_many_arguments)]
fn cmd_render(
    d: u32,
    out: PathBuf,
    center_re: f64,
    center_im: f64,
    width: f64,
    height: f64,
    px: u32,
    px_h: Option<u32>,
    max_iters: u64,
) -> CmdResult {
    let degree = Degree::new(d)?;
    let budget = budget(max_iters)?;
    let center = ComplexPoint::new(center_re, center_im)?;
    let window = Window::new(center, width, height, px, px_h.unwrap_or(px))?;
    let grid = compute_grid(degree, window, &budget)?;
    write_pgm(&grid, &out)?;
    println!(
        "wrote {} ({}x{}, d = {}, {} iterations)",
        out.display(),
        window.px_w(),
        window.px_h(),
        d,
        max_iters
    );
    Ok(true)
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

#[derive(Serialize)]
struct VerifyReport {
    d: u32,
    budget: IterationBudget,
    bisection_steps: u32,
    tolerance: f64,
    symmetry_samples: usize,
    checks: Vec<Check>,
    real_sections: RealSectionReport<f64>,
    rotation_symmetry: SymmetryReport<f64>,
    pass: bool,
}

const SYMMETRY_SAMPLES: usize = 100;
const ASYMPTOTIC_LADDER: [f64; 4] = [1e2, 1e3, 1e4, 1e5];

fn cmd_verify(d: u32, max_iters: u64, format: TextOrJson) -> CmdResult {
    let degree = Degree::new(d)?;
    let budget = budget(max_iters)?;
    let ds = d as f64;
    let mut checks = Vec::new();

    let constants = SectionConstants::compute(ds)?;
    let rel = constants.xi_relative_residual();
    checks.push(Check {
        name: "xi residual",
        pass: rel <= 1e-9,
        detail: format!("relative residual {rel:.2e} (tol 1e-9)"),
    });
    checks.push(Check {
        name: "gamma > 1",
        pass: constants.gamma > 1.0,
        detail: format!("gamma = {}", constants.gamma),
    });

    let mu = mu_bruteforce(ds)?;
    let mu_err = (mu.mu - constants.gamma).abs();
    let product_err = (mu.a0 * mu.b0 - extremal_product(ds)).abs();
    checks.push(Check {
        name: "oracle equivalence",
        pass: mu_err <= 1e-8 && product_err <= 1e-8 && mu.constraint_residual <= 1e-10,
        detail: format!(
            "|mu - gamma| = {mu_err:.2e}, |a0 b0 - d^(-2/(d-1))| = {product_err:.2e}, constraint residual {:.2e}",
            mu.constraint_residual
        ),
    });

    let cycle = extremal_cycle(ds)?;
    let worst = cycle.residual_at_a.max(cycle.residual_at_minus_b);
    checks.push(Check {
        name: "period-2 cycle",
        pass: worst <= 1e-9,
        detail: format!(
            "max residual {worst:.2e} (tol 1e-9){}",
            if degree.is_odd() {
                ""
            } else {
                "; even d: relations a = c + b^d, b = a^d - c checked algebraically"
            }
        ),
    });

    let real_sections = verify_real_sections::<f64>(degree, &budget)?;
    checks.push(Check {
        name: "real-section sentinels",
        pass: real_sections.pass,
        detail: real_sections
            .sentinels
            .iter()
            .map(|s| format!("{}: {}", s.label, if s.pass { "ok" } else { "FAIL" }))
            .collect::<Vec<_>>()
            .join(", "),
    });

    let samples =
        SampleSet::off_boundary(degree, SYMMETRY_SAMPLES, SampleSet::<f64>::DEFAULT_SEED)?;
    let rotation_symmetry = verify_rotation_symmetry(degree, &samples, &budget)?;
    checks.push(Check {
        name: "rotation symmetry",
        pass: rotation_symmetry.pass,
        detail: format!(
            "{} samples (seed {:#x}) x {} rotations, {} mismatches",
            rotation_symmetry.samples,
            rotation_symmetry.seed,
            rotation_symmetry.rotations,
            rotation_symmetry.mismatches.len()
        ),
    });

    let base = gamma_asymptotic_deviation(ASYMPTOTIC_LADDER[0])?;
    let mut ladder_ok = true;
    let mut parts = Vec::new();
    for x in ASYMPTOTIC_LADDER {
        let dev = gamma_asymptotic_deviation(x)?;
        let scaled = x * gamma(x)?.log2();
        ladder_ok &= dev <= 2.0 * base && (0.9..=1.1).contains(&scaled);
        parts.push(format!("d={x:e}: {dev:.4} / {scaled:.6}"));
    }
    checks.push(Check {
        name: "asymptotic ladder",
        pass: ladder_ok,
        detail: format!("deviation / d log2 gamma: {}", parts.join(", ")),
    });

    let pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        d,
        budget,
        bisection_steps: DEFAULT_BISECTION_STEPS,
        tolerance: DEFAULT_TOLERANCE,
        symmetry_samples: SYMMETRY_SAMPLES,
        checks,
        real_sections,
        rotation_symmetry,
        pass,
    };
    match format {
        TextOrJson::Json => println!("{}", to_json(&report)),
        TextOrJson::Text => {
            for c in &report.checks {
                println!(
                    "[{}] {}: {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            println!(
                "verify d = {}: {}",
                d,
                if pass { "all checks passed" } else { "FAILED" }
            );
        }
    }
    Ok(pass)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Constants { d, format } => {
            if !(d.is_finite() && d >= 2.0) {
                return Err(Failure::Usage(format!("--d must be a real >= 2, got {d}")));
            }
            cmd_constants(d, format)
        }
        Command::Table {
            dmin,
            dmax,
            format,
            full,
        } => cmd_table(dmin, dmax, format, full),
        Command::Endpoint {
            d,
            ray,
            budget,
            steps,
            tolerance,
            via,
            format,
        } => cmd_endpoint(d, ray, budget, steps, tolerance, via, format),
        Command::Render {
            d,
            out,
            center_re,
            center_im,
            width,
            height,
            px,
            px_h,
            budget,
        } => cmd_render(
            d, out, center_re, center_im, width, height, px, px_h, budget,
        ),
        Command::Verify { d, budget, format } => cmd_verify(d, budget, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CHECK_FAILED)
        }
    }
}
