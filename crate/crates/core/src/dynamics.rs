//! Iteration kernels for `p_c(z) = z^d + c` and `q_c(z) = -z^d + c`.
//!
//! Every orbit starts at the critical point `0`. Powers are taken by
//! exponentiation by squaring on the complex value, so orbits are
//! bit-reproducible and never touch `atan2` or trigonometric functions.

use num_complex::Complex;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::constants;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Exponent `d` of the polynomial map, an integer `>= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Degree(u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Degree {
    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDegree(d));
        }
        Ok(Degree(d))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    pub fn parity(self) -> Parity {
        if self.0.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    #[inline]
    pub fn is_odd(self) -> bool {
        self.parity() == Parity::Odd
    }

    #[inline]
    pub fn as_scalar<F: Scalar>(self) -> F {
        F::from(self.0).expect("degree representable in scalar type")
    }
}

impl std::fmt::Display for Degree {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A complex number with finite components.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexPoint<F> {
    re: F,
    im: F,
}

impl<F: Scalar> ComplexPoint<F> {
    pub fn new(re: F, im: F) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::NonFinitePoint {
                re: re.to_f64_lossy(),
                im: im.to_f64_lossy(),
            });
        }
        Ok(ComplexPoint { re, im })
    }

    pub fn real(re: F) -> Result<Self> {
        Self::new(re, F::zero())
    }

    pub fn zero() -> Self {
        ComplexPoint {
            re: F::zero(),
            im: F::zero(),
        }
    }

    pub fn one() -> Self {
        ComplexPoint {
            re: F::one(),
            im: F::zero(),
        }
    }

    /// `e^{i theta}`.
    pub fn unit(theta: F) -> Self {
        ComplexPoint {
            re: theta.cos(),
            im: theta.sin(),
        }
    }

    pub fn from_complex(z: Complex<F>) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    #[inline]
    pub fn re(self) -> F {
        self.re
    }

    #[inline]
    pub fn im(self) -> F {
        self.im
    }

    #[inline]
    pub fn to_complex(self) -> Complex<F> {
        Complex::new(self.re, self.im)
    }

    #[inline]
    pub fn modulus(self) -> F {
        self.to_complex().norm()
    }

    /// Real multiple `t * self`. Fails only if the product overflows.
    pub fn scale(self, t: F) -> Result<Self> {
        Self::new(self.re * t, self.im * t)
    }

    pub fn checked_mul(self, other: Self) -> Result<Self> {
        Self::from_complex(self.to_complex() * other.to_complex())
    }
}

impl<F: Scalar> From<ComplexPoint<F>> for Complex<F> {
    fn from(p: ComplexPoint<F>) -> Self {
        p.to_complex()
    }
}

/// Iteration limits for an orbit run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IterationBudget {
    max_iters: u64,
    escape_margin: f64,
}

impl IterationBudget {
    pub const DEFAULT_MAX_ITERS: u64 = 100_000;
    pub const DEFAULT_ESCAPE_MARGIN: f64 = 1e-9;

    pub fn new(max_iters: u64, escape_margin: f64) -> Result<Self> {
        if max_iters == 0 {
            return Err(Error::InvalidBudget("max_iters must be at least 1".into()));
        }
        if !(escape_margin.is_finite() && escape_margin > 0.0) {
            return Err(Error::InvalidBudget(format!(
                "escape_margin must be finite and positive, got {escape_margin}"
            )));
        }
        Ok(IterationBudget {
            max_iters,
            escape_margin,
        })
    }

    /// Budget with the default escape margin.
    pub fn with_max_iters(max_iters: u64) -> Result<Self> {
        Self::new(max_iters, Self::DEFAULT_ESCAPE_MARGIN)
    }

    #[inline]
    pub fn max_iters(&self) -> u64 {
        self.max_iters
    }

    #[inline]
    pub fn escape_margin(&self) -> f64 {
        self.escape_margin
    }
}

impl Default for IterationBudget {
    fn default() -> Self {
        IterationBudget {
            max_iters: Self::DEFAULT_MAX_ITERS,
            escape_margin: Self::DEFAULT_ESCAPE_MARGIN,
        }
    }
}

/// Closed real interval `[low, high]` that a real map sends into itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvariantInterval<F> {
    pub low: F,
    pub high: F,
}

impl<F: Scalar> InvariantInterval<F> {
    /// Residuals of the invariance check for the decreasing map `q_c`:
    /// `q_c([low, high]) = [q_c(high), q_c(low)]`, so the interval is invariant
    /// iff `q_c(high) >= low` and `q_c(low) <= high`. Returned values are the
    /// amounts by which each inequality is violated (`<= 0` means satisfied).
    pub fn q_violation(&self, d: Degree, c: F) -> (F, F) {
        let lower = self.low - real_q(d, c, self.high);
        let upper = real_q(d, c, self.low) - self.high;
        (lower, upper)
    }

    /// Invariance under `q_c` up to `tol`.
    pub fn is_q_invariant(&self, d: Degree, c: F, tol: F) -> bool {
        let (lower, upper) = self.q_violation(d, c);
        lower <= tol && upper <= tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictKind {
    Escaped,
    Undetermined,
    ProvenBounded,
}

/// Outcome of iterating the critical orbit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum OrbitVerdict<F> {
    /// `|z_steps|` exceeded the escape radius; `modulus` is that final modulus
    /// (`+inf` when the iterate overflowed).
    Escaped { steps: u64, modulus: F },
    /// Budget exhausted without a decision.
    Undetermined { steps: u64 },
    /// Bounded, certified by an invariant interval.
    ProvenBounded {
        steps: u64,
        witness: InvariantInterval<F>,
    },
}

impl<F> OrbitVerdict<F> {
    pub fn kind(&self) -> VerdictKind {
        match self {
            OrbitVerdict::Escaped { .. } => VerdictKind::Escaped,
            OrbitVerdict::Undetermined { .. } => VerdictKind::Undetermined,
            OrbitVerdict::ProvenBounded { .. } => VerdictKind::ProvenBounded,
        }
    }

    pub fn steps(&self) -> u64 {
        match *self {
            OrbitVerdict::Escaped { steps, .. }
            | OrbitVerdict::Undetermined { steps }
            | OrbitVerdict::ProvenBounded { steps, .. } => steps,
        }
    }

    #[inline]
    pub fn is_escaped(&self) -> bool {
        self.kind() == VerdictKind::Escaped
    }

    pub fn escape_steps(&self) -> Option<u64> {
        match *self {
            OrbitVerdict::Escaped { steps, .. } => Some(steps),
            _ => None,
        }
    }
}

/// Which of the two polynomial families is iterated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PolyMap {
    /// `p_c(z) = z^d + c`
    Plus,
    /// `q_c(z) = -z^d + c`
    Minus,
}

impl PolyMap {
    #[inline]
    pub fn apply<F: Scalar>(self, d: Degree, z: Complex<F>, c: Complex<F>) -> Complex<F> {
        let zd = complex_pow(z, d);
        match self {
            PolyMap::Plus => zd + c,
            PolyMap::Minus => c - zd,
        }
    }
}

/// `z^d` by exponentiation by squaring.
#[inline]
pub fn complex_pow<F: Scalar>(z: Complex<F>, d: Degree) -> Complex<F> {
    pow_by_squaring(z, d.get())
}

#[inline]
fn pow_by_squaring<T: Copy + One + std::ops::Mul<Output = T>>(base: T, exp: u32) -> T {
    num_traits::pow(base, exp as usize)
}

/// `q_c(x) = -x^d + c` on the real line.
#[inline]
pub fn real_q<F: Scalar>(d: Degree, c: F, x: F) -> F {
    c - pow_by_squaring(x, d.get())
}

/// `max(|c|, beta(d))`. Beyond this radius `|z^d +- c| >= |z| (|z|^(d-1) - 1) > |z|`,
/// so the orbit diverges.
pub fn escape_radius<F: Scalar>(d: Degree, c: ComplexPoint<F>) -> F {
    c.modulus().max(constants::beta(d.as_scalar::<F>()))
}

fn iterate<F: Scalar>(
    map: PolyMap,
    d: Degree,
    c: ComplexPoint<F>,
    budget: &IterationBudget,
) -> OrbitVerdict<F> {
    let radius = escape_radius(d, c) + F::lit(budget.escape_margin());
    let c = c.to_complex();
    let mut z = Complex::<F>::zero();
    for n in 1..=budget.max_iters() {
        z = map.apply(d, z, c);
        let modulus = z.norm();
        if !modulus.is_finite() {
            return OrbitVerdict::Escaped {
                steps: n,
                modulus: F::infinity(),
            };
        }
        if modulus > radius {
            return OrbitVerdict::Escaped { steps: n, modulus };
        }
    }
    OrbitVerdict::Undetermined {
        steps: budget.max_iters(),
    }
}

/// Iterates `p_c` from `0`. Returns `Escaped` or `Undetermined`, never
/// `ProvenBounded`.
pub fn iterate_p<F: Scalar>(
    d: Degree,
    c: ComplexPoint<F>,
    budget: &IterationBudget,
) -> OrbitVerdict<F> {
    iterate(PolyMap::Plus, d, c, budget)
}

/// Iterates `q_c` from `0` with the same escape radius as [`iterate_p`].
pub fn iterate_q<F: Scalar>(
    d: Degree,
    c: ComplexPoint<F>,
    budget: &IterationBudget,
) -> OrbitVerdict<F> {
    iterate(PolyMap::Minus, d, c, budget)
}

/// The first `n` iterates `z_1, ..., z_n` of `0`, without escape detection.
pub fn orbit<F: Scalar>(map: PolyMap, d: Degree, c: ComplexPoint<F>, n: usize) -> Vec<Complex<F>> {
    let c = c.to_complex();
    let mut z = Complex::<F>::zero();
    (0..n)
        .map(|_| {
            z = map.apply(d, z, c);
            z
        })
        .collect()
}

/// Decides boundedness of the real orbit of `0` under `q_c` for odd `d` and
/// `c >= 0`.
///
/// `q_c` is decreasing on the real line, so for `c > 1` the even iterates
/// decrease and the odd iterates increase. When both subsequences have
/// stalled the limits `-b`, `a` span a 2-cycle of `q_c`; the widened interval
/// `[-b, a]` is then rechecked for invariance and returned as the witness.
pub fn analyze_real_q_orbit<F: Scalar>(
    d: Degree,
    c: F,
    budget: &IterationBudget,
) -> Result<OrbitVerdict<F>> {
    if !d.is_odd() {
        return Err(Error::EvenDegree {
            operation: "analyze_real_q_orbit",
            degree: d.get(),
        });
    }
    if !(c.is_finite() && c >= F::zero()) {
        return Err(Error::InvalidParameter(c.to_f64_lossy()));
    }

    if c <= F::one() {
        // q_c(0) = c and q_c(c) = c - c^d lie in [0, c]; q_c is decreasing.
        return Ok(OrbitVerdict::ProvenBounded {
            steps: 0,
            witness: InvariantInterval {
                low: F::zero(),
                high: c,
            },
        });
    }

    let radius = c.max(constants::beta(d.as_scalar::<F>())) + F::lit(budget.escape_margin());
    let mut x = F::zero();
    let mut last_even = F::zero();
    let mut last_odd: Option<F> = None;
    let mut odd_step = F::infinity();

    for n in 1..=budget.max_iters() {
        x = real_q(d, c, x);
        let modulus = x.abs();
        if !modulus.is_finite() {
            return Ok(OrbitVerdict::Escaped {
                steps: n,
                modulus: F::infinity(),
            });
        }
        if modulus > radius {
            return Ok(OrbitVerdict::Escaped { steps: n, modulus });
        }

        if n % 2 == 1 {
            if let Some(prev) = last_odd {
                odd_step = (x - prev).abs();
            }
            last_odd = Some(x);
            continue;
        }

        let even_step = (x - last_even).abs();
        last_even = x;
        if even_step < F::CONVERGENCE_TOL && odd_step < F::CONVERGENCE_TOL {
            let high = last_odd.expect("odd term precedes every even term");
            let witness = InvariantInterval {
                low: last_even - F::WITNESS_ENLARGEMENT,
                high: high + F::WITNESS_ENLARGEMENT,
            };
            if witness.is_q_invariant(d, c, F::WITNESS_TOL) {
                return Ok(OrbitVerdict::ProvenBounded { steps: n, witness });
            }
        }
    }

    Ok(OrbitVerdict::Undetermined {
        steps: budget.max_iters(),
    })
}
