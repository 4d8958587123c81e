//! Empirical cross-sections of `M_d` along the rays `R+ omega`,
//! `omega^(d-1) = +-1`, checked against `alpha`, `beta` and `gamma`.
//!
//! Bisection treats `Undetermined` points as inside. That is only sound on
//! these particular rays, where the bounded set is known to be an interval
//! `[0, endpoint]`; reports carry the assumption as a label.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constants;
use crate::dynamics::{
    iterate_p, iterate_q, orbit, ComplexPoint, Degree, IterationBudget, OrbitVerdict, Parity,
    PolyMap, VerdictKind,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const INSIDE_ASSUMPTION: &str = "undetermined points are treated as inside the set";

pub const DEFAULT_BISECTION_STEPS: u32 = 40;
pub const DEFAULT_TOLERANCE: f64 = 2e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RayKind {
    /// `omega^(d-1) = 1`
    RootOfUnity,
    /// `omega^(d-1) = -1`
    RootOfMinusUnity,
}

impl RayKind {
    fn target(self) -> i8 {
        match self {
            RayKind::RootOfUnity => 1,
            RayKind::RootOfMinusUnity => -1,
        }
    }
}

/// A ray `R+ omega` with `omega^(d-1) = +-1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RayClass<F> {
    kind: RayKind,
    omega: ComplexPoint<F>,
    degree: Degree,
}

impl<F: Scalar> RayClass<F> {
    /// Validates `|omega^(d-1) - (+-1)| <= F::OMEGA_TOL`.
    pub fn with_omega(degree: Degree, kind: RayKind, omega: ComplexPoint<F>) -> Result<Self> {
        let order = degree.get() - 1;
        let power = num_traits::pow(omega.to_complex(), order as usize);
        let target = F::from(kind.target()).expect("+-1 representable");
        let deviation = (power - num_complex::Complex::new(target, F::zero())).norm();
        // also rejects NaN
        if deviation.is_nan() || deviation > F::OMEGA_TOL {
            return Err(Error::InvalidOmega {
                re: omega.re().to_f64_lossy(),
                im: omega.im().to_f64_lossy(),
                target: kind.target(),
                order,
            });
        }
        Ok(RayClass {
            kind,
            omega,
            degree,
        })
    }

    /// The positive real axis, `omega = 1`.
    pub fn root_of_unity(degree: Degree) -> Self {
        RayClass {
            kind: RayKind::RootOfUnity,
            omega: ComplexPoint::one(),
            degree,
        }
    }

    /// `omega = -1` for even `d`, the principal root `e^(i pi/(d-1))` for odd `d`.
    pub fn root_of_minus_unity(degree: Degree) -> Self {
        let omega = match degree.parity() {
            Parity::Even => ComplexPoint::real(-F::one()).expect("finite"),
            Parity::Odd => ComplexPoint::unit(F::PI() / (degree.as_scalar::<F>() - F::one())),
        };
        RayClass {
            kind: RayKind::RootOfMinusUnity,
            omega,
            degree,
        }
    }

    /// `omega = i`, available when `d - 1 = 2 (mod 4)`.
    pub fn imaginary_axis(degree: Degree) -> Result<Self> {
        if (degree.get() - 1) % 4 != 2 {
            return Err(Error::UnsupportedRay {
                ray: "imaginary",
                degree: degree.get(),
                reason: "i^(d-1) = -1 requires d - 1 = 2 (mod 4)",
            });
        }
        Ok(RayClass {
            kind: RayKind::RootOfMinusUnity,
            omega: ComplexPoint::new(F::zero(), F::one()).expect("finite"),
            degree,
        })
    }

    #[inline]
    pub fn kind(&self) -> RayKind {
        self.kind
    }

    #[inline]
    pub fn omega(&self) -> ComplexPoint<F> {
        self.omega
    }

    #[inline]
    pub fn degree(&self) -> Degree {
        self.degree
    }

    /// Endpoint of `M_d` on this ray: `alpha`, `beta` (even `d`) or `gamma`
    /// (odd `d`).
    pub fn predicted_endpoint(&self) -> Result<F> {
        let d = self.degree.as_scalar::<F>();
        Ok(match (self.kind, self.degree.parity()) {
            (RayKind::RootOfUnity, _) => constants::alpha(d),
            (RayKind::RootOfMinusUnity, Parity::Even) => constants::beta(d),
            (RayKind::RootOfMinusUnity, Parity::Odd) => constants::gamma(d)?,
        })
    }

    /// Which constant [`Self::predicted_endpoint`] returns.
    pub fn predicted_name(&self) -> &'static str {
        match (self.kind, self.degree.parity()) {
            (RayKind::RootOfUnity, _) => "alpha",
            (RayKind::RootOfMinusUnity, Parity::Even) => "beta",
            (RayKind::RootOfMinusUnity, Parity::Odd) => "gamma",
        }
    }
}

/// How a point `t omega` of the ray is classified.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classifier {
    /// Iterate `p_c` at `c = t omega`.
    #[default]
    Direct,
    /// Iterate the conjugate real map at `c = t`: `omega^-1 p_c(omega z)` is
    /// `p_(c/omega)` when `omega^(d-1) = 1` and `q_(c/omega)` when
    /// `omega^(d-1) = -1`.
    Conjugate,
}

pub fn classify<F: Scalar>(
    ray: &RayClass<F>,
    t: F,
    budget: &IterationBudget,
    classifier: Classifier,
) -> Result<OrbitVerdict<F>> {
    let d = ray.degree;
    Ok(match classifier {
        Classifier::Direct => iterate_p(d, ray.omega.scale(t)?, budget),
        Classifier::Conjugate => {
            let c = ComplexPoint::real(t)?;
            match ray.kind {
                RayKind::RootOfUnity => iterate_p(d, c, budget),
                RayKind::RootOfMinusUnity => iterate_q(d, c, budget),
            }
        }
    })
}

/// Bracket `[t_low, t_high]` around the ray endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EndpointEstimate<F> {
    /// Largest scanned `t` not classified `Escaped`.
    pub t_low: F,
    /// Smallest scanned `t` classified `Escaped`.
    pub t_high: F,
    pub budget_used: IterationBudget,
    pub bisection_steps: u32,
}

impl<F: Scalar> EndpointEstimate<F> {
    pub fn midpoint(&self) -> F {
        self.t_low + (self.t_high - self.t_low) / F::lit(2.0)
    }

    pub fn width(&self) -> F {
        self.t_high - self.t_low
    }
}

pub fn scan_ray_endpoint<F: Scalar>(
    ray: &RayClass<F>,
    budget: &IterationBudget,
    bisection_steps: u32,
) -> Result<EndpointEstimate<F>> {
    scan_ray_endpoint_with(ray, budget, bisection_steps, Classifier::Direct)
}

/// Bisection for the escape boundary on `t in [0, beta(d) + 0.5]`.
pub fn scan_ray_endpoint_with<F: Scalar>(
    ray: &RayClass<F>,
    budget: &IterationBudget,
    bisection_steps: u32,
    classifier: Classifier,
) -> Result<EndpointEstimate<F>> {
    if bisection_steps == 0 {
        return Err(Error::InvalidBudget(
            "bisection_steps must be at least 1".into(),
        ));
    }
    let mut t_low = F::zero();
    let mut t_high = constants::beta(ray.degree.as_scalar::<F>()) + F::lit(0.5);
    if !classify(ray, t_high, budget, classifier)?.is_escaped() {
        return Err(Error::ScanUpperBoundNotEscaped {
            t: t_high.to_f64_lossy(),
            max_iters: budget.max_iters(),
        });
    }
    for _ in 0..bisection_steps {
        let mid = t_low + (t_high - t_low) / F::lit(2.0);
        if classify(ray, mid, budget, classifier)?.is_escaped() {
            t_high = mid;
        } else {
            t_low = mid;
        }
    }
    Ok(EndpointEstimate {
        t_low,
        t_high,
        budget_used: *budget,
        bisection_steps,
    })
}

/// Machine-readable result of one ray scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EndpointReport<F> {
    pub d: u32,
    pub ray: RayKind,
    pub omega: [F; 2],
    pub classifier: Classifier,
    pub t_low: F,
    pub t_high: F,
    pub midpoint: F,
    pub predicted_constant: &'static str,
    pub predicted: F,
    pub tolerance: F,
    pub budget: IterationBudget,
    pub bisection_steps: u32,
    pub pass: bool,
    pub assumption: &'static str,
}

impl<F: Scalar> EndpointReport<F> {
    pub fn new(
        ray: &RayClass<F>,
        classifier: Classifier,
        estimate: &EndpointEstimate<F>,
        tolerance: F,
    ) -> Result<Self> {
        let predicted = ray.predicted_endpoint()?;
        let midpoint = estimate.midpoint();
        Ok(EndpointReport {
            d: ray.degree.get(),
            ray: ray.kind,
            omega: [ray.omega.re(), ray.omega.im()],
            classifier,
            t_low: estimate.t_low,
            t_high: estimate.t_high,
            midpoint,
            predicted_constant: ray.predicted_name(),
            predicted,
            tolerance,
            budget: estimate.budget_used,
            bisection_steps: estimate.bisection_steps,
            pass: (midpoint - predicted).abs() <= tolerance,
            assumption: INSIDE_ASSUMPTION,
        })
    }
}

impl<F: Scalar> std::fmt::Display for EndpointReport<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "d = {}, ray {:?}, omega = ({}, {})",
            self.d, self.ray, self.omega[0], self.omega[1]
        )?;
        writeln!(f, "  bracket   [{}, {}]", self.t_low, self.t_high)?;
        writeln!(f, "  midpoint  {}", self.midpoint)?;
        writeln!(
            f,
            "  predicted {} = {}",
            self.predicted_constant, self.predicted
        )?;
        writeln!(
            f,
            "  budget {} iterations, {} bisection steps ({})",
            self.budget.max_iters(),
            self.bisection_steps,
            self.assumption
        )?;
        write!(
            f,
            "  {} (|midpoint - predicted| <= {})",
            if self.pass { "PASS" } else { "FAIL" },
            self.tolerance
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SentinelExpectation {
    NotEscaped,
    Escaped,
    /// Orbit `0 -> c -> beta -> beta` at `c = -beta(d)`, `d` even.
    LandsOnFixedPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sentinel<F> {
    pub label: String,
    pub c: F,
    pub expected: SentinelExpectation,
    pub observed: Option<VerdictKind>,
    /// Largest deviation of `z_1, z_2, z_3` from `c, beta, beta`.
    pub landing_error: Option<F>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealSectionReport<F> {
    pub d: u32,
    pub parity: Parity,
    pub budget: IterationBudget,
    pub sentinels: Vec<Sentinel<F>>,
    pub pass: bool,
}

fn verdict_sentinel<F: Scalar>(
    d: Degree,
    label: String,
    c: F,
    expected: SentinelExpectation,
    budget: &IterationBudget,
) -> Result<Sentinel<F>> {
    let verdict = iterate_p(d, ComplexPoint::real(c)?, budget);
    let pass = match expected {
        SentinelExpectation::Escaped => verdict.is_escaped(),
        _ => !verdict.is_escaped(),
    };
    Ok(Sentinel {
        label,
        c,
        expected,
        observed: Some(verdict.kind()),
        landing_error: None,
        pass,
    })
}

/// Sentinels around the real section: `[-alpha, alpha]` for odd `d`,
/// `[-beta, alpha]` for even `d`.
pub fn verify_real_sections<F: Scalar>(
    d: Degree,
    budget: &IterationBudget,
) -> Result<RealSectionReport<F>> {
    let ds = d.as_scalar::<F>();
    let a = constants::alpha(ds);
    let b = constants::beta(ds);
    let inner = F::lit(0.999);
    let outer = F::lit(1.001);
    use SentinelExpectation::*;

    let mut sentinels = vec![
        verdict_sentinel(d, "0.999 alpha".into(), inner * a, NotEscaped, budget)?,
        verdict_sentinel(d, "1.001 alpha".into(), outer * a, Escaped, budget)?,
    ];
    match d.parity() {
        Parity::Even => {
            let c = -b;
            let z = orbit(PolyMap::Plus, d, ComplexPoint::real(c)?, 3);
            let landing_error = [
                (z[0].re - c).abs(),
                (z[1].re - b).abs(),
                (z[2].re - b).abs(),
            ]
            .into_iter()
            .chain(z.iter().map(|w| w.im.abs()))
            .fold(F::zero(), F::max);
            sentinels.push(Sentinel {
                label: "-beta lands on fixed point beta".into(),
                c,
                expected: LandsOnFixedPoint,
                observed: None,
                landing_error: Some(landing_error),
                pass: landing_error <= F::LANDING_TOL,
            });
            sentinels.push(verdict_sentinel(
                d,
                "-1.001 beta".into(),
                -(outer * b),
                Escaped,
                budget,
            )?);
        }
        Parity::Odd => {
            sentinels.push(verdict_sentinel(
                d,
                "-0.999 alpha".into(),
                -(inner * a),
                NotEscaped,
                budget,
            )?);
            sentinels.push(verdict_sentinel(
                d,
                "-1.001 alpha".into(),
                -(outer * a),
                Escaped,
                budget,
            )?);
        }
    }
    let pass = sentinels.iter().all(|s| s.pass);
    Ok(RealSectionReport {
        d: d.get(),
        parity: d.parity(),
        budget: *budget,
        sentinels,
        pass,
    })
}

/// Deterministic sample points kept away from the boundary of `M_d`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleSet<F> {
    pub seed: u64,
    pub points: Vec<ComplexPoint<F>>,
}

/// Escape must happen within this many steps for a middle-band sample.
const MIDDLE_BAND_MAX_STEPS: u64 = 200;

impl<F: Scalar> SampleSet<F> {
    pub const DEFAULT_SEED: u64 = 0x6d75_6c74_6962_726f;

    /// `count` points in three bands: inside the disk of radius
    /// `0.95 alpha(d)` (in `M_d`), in the annulus `[1.05 beta, 2 beta]`
    /// (outside `M_d`), and in `[alpha, beta]` but only when the point escapes
    /// with every iterate at least 1% away from the escape radius, so rounding
    /// cannot move the escape step.
    pub fn off_boundary(d: Degree, count: usize, seed: u64) -> Result<Self> {
        let ds = d.as_scalar::<F>();
        let a = constants::alpha(ds).to_f64_lossy();
        let b = constants::beta(ds).to_f64_lossy();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let probe = IterationBudget::with_max_iters(MIDDLE_BAND_MAX_STEPS)?;
        let mut points = Vec::with_capacity(count);
        while points.len() < count {
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            let u = rng.gen::<f64>();
            let band = points.len() % 5;
            let r = match band {
                0 | 1 => 0.95 * a * u.sqrt(),
                2 | 3 => b * (1.05 + 0.95 * u),
                _ => a + (b - a) * u,
            };
            let c = ComplexPoint::new(F::lit(r * theta.cos()), F::lit(r * theta.sin()))?;
            if band == 4 && !is_stable_escape(d, c, &probe) {
                continue;
            }
            points.push(c);
        }
        Ok(SampleSet { seed, points })
    }
}

fn is_stable_escape<F: Scalar>(d: Degree, c: ComplexPoint<F>, probe: &IterationBudget) -> bool {
    let Some(n) = iterate_p(d, c, probe).escape_steps() else {
        return false;
    };
    let radius = crate::dynamics::escape_radius(d, c);
    let z = orbit(PolyMap::Plus, d, c, n as usize);
    let low = radius * F::lit(0.99);
    let high = radius * F::lit(1.01);
    let last = z[z.len() - 1].norm();
    last >= high && z[..z.len() - 1].iter().all(|w| w.norm() <= low)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryMismatch<F> {
    pub sample: ComplexPoint<F>,
    pub rotation: u32,
    pub base: OrbitVerdict<F>,
    pub rotated: OrbitVerdict<F>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport<F> {
    pub d: u32,
    pub seed: u64,
    pub samples: usize,
    pub rotations: u32,
    pub budget: IterationBudget,
    pub mismatches: Vec<SymmetryMismatch<F>>,
    pub pass: bool,
}

/// The `d - 1` roots of unity `e^(2 pi i k/(d-1))`.
pub fn rotations<F: Scalar>(d: Degree) -> Vec<ComplexPoint<F>> {
    let order = d.get() - 1;
    let n = F::from(order).expect("order representable");
    (0..order)
        .map(|k| {
            let k = F::from(k).expect("index representable");
            ComplexPoint::unit(F::TAU() * k / n)
        })
        .collect()
}

fn verdicts_agree<F>(a: &OrbitVerdict<F>, b: &OrbitVerdict<F>) -> bool {
    match (a.escape_steps(), b.escape_steps()) {
        (Some(m), Some(n)) => m.abs_diff(n) <= 1,
        _ => a.kind() == b.kind(),
    }
}

/// Checks `M_d = omega M_d` for every `(d-1)`-th root of unity on the sample
/// set: verdict kinds must agree and escape steps differ by at most one.
pub fn verify_rotation_symmetry<F: Scalar>(
    d: Degree,
    samples: &SampleSet<F>,
    budget: &IterationBudget,
) -> Result<SymmetryReport<F>> {
    let roots = rotations::<F>(d);
    let mut mismatches = Vec::new();
    for &c in &samples.points {
        let base = iterate_p(d, c, budget);
        for (k, omega) in roots.iter().enumerate().skip(1) {
            let rotated = iterate_p(d, omega.checked_mul(c)?, budget);
            if !verdicts_agree(&base, &rotated) {
                mismatches.push(SymmetryMismatch {
                    sample: c,
                    rotation: k as u32,
                    base,
                    rotated,
                });
            }
        }
    }
    Ok(SymmetryReport {
        d: d.get(),
        seed: samples.seed,
        samples: samples.points.len(),
        rotations: roots.len() as u32,
        budget: *budget,
        pass: mismatches.is_empty(),
        mismatches,
    })
}
