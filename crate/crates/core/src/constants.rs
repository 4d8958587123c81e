//! Cross-section radii of multibrot sets.
//!
//! * `alpha(d) = (d-1) d^(-d/(d-1))`, radius of the largest disk about 0 in `M_d`;
//! * `beta(d) = 2^(1/(d-1))`, radius of the smallest disk about 0 containing `M_d`;
//! * `gamma(d) = d^(-d/(d-1)) (sinh(d xi) + d sinh(xi))`, where `xi > 0` solves
//!   `cosh(d xi) = d cosh(xi)`; the endpoint of `M_d` on the rays
//!   `omega^(d-1) = -1` for odd `d`.
//!
//! The degree is a real number here; only the dynamics need an integer.
//! [`mu_bruteforce`] recomputes `gamma(d)` as the constrained maximum
//! `max { a - b^d : a, b >= 0, a^d + b^d = a + b }` without using `xi`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const BISECTION_MAX_ITERS: usize = 200;
const NEWTON_POLISH_STEPS: usize = 5;
/// Above this argument `cosh` and `sinh` are replaced by `e^x / 2`.
const LARGE_ARGUMENT: f64 = 30.0;

/// Number of grid cells on `b in [0, 1]` for the brute-force maximization.
pub const MU_GRID_CELLS: usize = 100_000;
const GOLDEN_WIDTH: f64 = 1e-12;

fn check_degree<F: Scalar>(d: F) -> Result<()> {
    if d.is_finite() && d >= F::lit(2.0) {
        Ok(())
    } else {
        Err(Error::InvalidRealDegree(d.to_f64_lossy()))
    }
}

#[inline]
fn cosh<F: Scalar>(x: F) -> F {
    if x.abs() > F::lit(LARGE_ARGUMENT) {
        x.abs().exp() / F::lit(2.0)
    } else {
        x.cosh()
    }
}

#[inline]
fn sinh<F: Scalar>(x: F) -> F {
    if x.abs() > F::lit(LARGE_ARGUMENT) {
        x.signum() * x.abs().exp() / F::lit(2.0)
    } else {
        x.sinh()
    }
}

/// `x^d`, by repeated multiplication when `d` is a small integer.
#[inline]
fn pow_real<F: Scalar>(x: F, d: F) -> F {
    if d.fract() == F::zero() && d <= F::lit(64.0) {
        x.powi(d.to_i32().expect("small integer exponent"))
    } else {
        x.powf(d)
    }
}

/// `d^(-d/(d-1))`
#[inline]
fn inverse_power_scale<F: Scalar>(d: F) -> F {
    d.powf(-(d / (d - F::one())))
}

/// `(d-1) d^(-d/(d-1))`. Requires `d >= 2`.
pub fn alpha<F: Scalar>(d: F) -> F {
    debug_assert!(d >= F::lit(2.0));
    (d - F::one()) * inverse_power_scale(d)
}

/// `2^(1/(d-1))`. Requires `d >= 2`.
pub fn beta<F: Scalar>(d: F) -> F {
    debug_assert!(d >= F::lit(2.0));
    F::lit(2.0).powf((d - F::one()).recip())
}

/// Root of `cosh(d x) = d cosh(x)` and its absolute residual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XiRoot<F> {
    pub xi: F,
    pub residual: F,
}

impl<F: Scalar> XiRoot<F> {
    /// `|cosh(d xi) - d cosh(xi)| / (d cosh(xi))`
    pub fn relative_residual(&self, d: F) -> F {
        self.residual / (d * cosh(self.xi))
    }
}

#[inline]
fn xi_equation<F: Scalar>(d: F, x: F) -> F {
    cosh(d * x) - d * cosh(x)
}

#[inline]
fn xi_equation_derivative<F: Scalar>(d: F, x: F) -> F {
    d * (sinh(d * x) - sinh(x))
}

/// Positive root of `cosh(d x) - d cosh(x)`.
///
/// The root is bracketed by `[ln(d)/d, 2 ln(2d)/d]`: at the lower end
/// `cosh(ln d) = (d + 1/d)/2 < d <= d cosh(ln(d)/d)`, and at the upper end
/// `cosh(2 ln 2d) ~ 2 d^2` dominates. Bisection narrows the bracket to
/// adjacent floats, then a few Newton steps polish the last bits.
pub fn solve_xi<F: Scalar>(d: F) -> Result<XiRoot<F>> {
    if !(d.is_finite() && d > F::one()) {
        return Err(Error::InvalidRealDegree(d.to_f64_lossy()));
    }
    let two = F::lit(2.0);
    let mut lo = d.ln() / d;
    let mut hi = two * (two * d).ln() / d;
    let bracket_failure = || Error::BracketFailure {
        degree: d.to_f64_lossy(),
        lo: lo.to_f64_lossy(),
        hi: hi.to_f64_lossy(),
    };
    if !(xi_equation(d, lo) < F::zero() && xi_equation(d, hi) > F::zero()) {
        return Err(bracket_failure());
    }

    for _ in 0..BISECTION_MAX_ITERS {
        let mid = lo + (hi - lo) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if xi_equation(d, mid) < F::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let (bracket_lo, bracket_hi) = (lo, hi);
    let mut xi = lo + (hi - lo) / two;
    let mut residual = xi_equation(d, xi).abs();
    for _ in 0..NEWTON_POLISH_STEPS {
        let slope = xi_equation_derivative(d, xi);
        if slope == F::zero() {
            break;
        }
        let next = xi - xi_equation(d, xi) / slope;
        // Stay inside the final bisection bracket (widened by one step).
        let width = bracket_hi - bracket_lo;
        if !(next >= bracket_lo - width && next <= bracket_hi + width) {
            break;
        }
        let next_residual = xi_equation(d, next).abs();
        if next_residual < residual {
            xi = next;
            residual = next_residual;
        } else {
            break;
        }
    }

    Ok(XiRoot { xi, residual })
}

fn gamma_from_xi<F: Scalar>(d: F, xi: F) -> F {
    inverse_power_scale(d) * (sinh(d * xi) + d * sinh(xi))
}

/// `gamma(d)`, endpoint of `M_d` along rays with `omega^(d-1) = -1` for odd `d`.
pub fn gamma<F: Scalar>(d: F) -> Result<F> {
    check_degree(d)?;
    let root = solve_xi(d)?;
    Ok(gamma_from_xi(d, root.xi))
}

/// All section constants for one degree.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SectionConstants<F> {
    pub d: F,
    pub alpha: F,
    pub beta: F,
    pub xi: F,
    pub gamma: F,
    /// `|cosh(d xi) - d cosh(xi)|` at the returned root.
    pub xi_residual: F,
}

impl<F: Scalar> SectionConstants<F> {
    pub fn compute(d: F) -> Result<Self> {
        check_degree(d)?;
        let root = solve_xi(d)?;
        Ok(SectionConstants {
            d,
            alpha: alpha(d),
            beta: beta(d),
            xi: root.xi,
            gamma: gamma_from_xi(d, root.xi),
            xi_residual: root.residual,
        })
    }

    pub fn xi_relative_residual(&self) -> F {
        self.xi_residual / (self.d * cosh(self.xi))
    }
}

/// Maximizer of `a - b^d` on the curve `a^d + b^d = a + b`, `a, b >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MuSolution<F> {
    pub a0: F,
    pub b0: F,
    pub mu: F,
    /// `|a0^d + b0^d - a0 - b0|`
    pub constraint_residual: F,
}

/// The branch `a(b) >= 1` of the constraint: the root of
/// `a^d - a = b - b^d` on `[1, 2]`. `x^d - x` increases there from `0` to
/// `2^d - 2 >= 2`, while `b - b^d < 1`.
fn constraint_branch<F: Scalar>(d: F, b: F) -> F {
    let rhs = b - pow_real(b, d);
    let (mut lo, mut hi) = (F::one(), F::lit(2.0));
    for _ in 0..BISECTION_MAX_ITERS {
        let mid = lo + (hi - lo) / F::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if pow_real(mid, d) - mid < rhs {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) / F::lit(2.0)
}

fn mu_objective<F: Scalar>(d: F, b: F) -> F {
    constraint_branch(d, b) - pow_real(b, d)
}

/// Derivative of `b -> a(b) - b^d` along the constraint, by implicit
/// differentiation of `a^d - a = b - b^d`.
fn mu_objective_slope<F: Scalar>(d: F, b: F) -> F {
    let a = constraint_branch(d, b);
    let db = d * pow_real(b, d - F::one());
    (F::one() - db) / (d * pow_real(a, d - F::one()) - F::one()) - db
}

fn golden_section_max<F: Scalar>(f: impl Fn(F) -> F, mut lo: F, mut hi: F) -> F {
    let inv_phi = F::lit((5f64.sqrt() - 1.0) / 2.0);
    let tol = F::lit(GOLDEN_WIDTH);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..BISECTION_MAX_ITERS {
        if hi - lo <= tol {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    lo + (hi - lo) / F::lit(2.0)
}

/// Brute-force value of `max { a - b^d : a, b >= 0, a^d + b^d = a + b }`.
///
/// Independent of [`solve_xi`]: the constraint curve is walked by `b` on a
/// grid of [`MU_GRID_CELLS`] cells, the best cell is refined by golden-section
/// search, and the maximizer is finally pinned by bisection on the sign of
/// the objective's slope (golden section alone cannot locate a flat maximum
/// much better than `sqrt(eps)`).
pub fn mu_bruteforce<F: Scalar>(d: F) -> Result<MuSolution<F>> {
    check_degree(d)?;
    let cells = F::from(MU_GRID_CELLS).expect("grid size representable");
    let values: Vec<F> = (0..=MU_GRID_CELLS)
        .into_par_iter()
        .map(|i| {
            let b = F::from(i).expect("index representable") / cells;
            mu_objective(d, b)
        })
        .collect();
    let best = values
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > values[best] { i } else { best });

    let at = |i: usize| F::from(i).expect("index representable") / cells;
    let lo = at(best.saturating_sub(1));
    let hi = at((best + 1).min(MU_GRID_CELLS));
    let mut b0 = golden_section_max(|b| mu_objective(d, b), lo, hi);

    let (mut s_lo, mut s_hi) = (lo, hi);
    if mu_objective_slope(d, s_lo) > F::zero() && mu_objective_slope(d, s_hi) < F::zero() {
        for _ in 0..BISECTION_MAX_ITERS {
            let mid = s_lo + (s_hi - s_lo) / F::lit(2.0);
            if mid <= s_lo || mid >= s_hi {
                break;
            }
            if mu_objective_slope(d, mid) > F::zero() {
                s_lo = mid;
            } else {
                s_hi = mid;
            }
        }
        b0 = s_lo + (s_hi - s_lo) / F::lit(2.0);
    }

    let a0 = constraint_branch(d, b0);
    let mu = a0 - pow_real(b0, d);
    let constraint_residual = (pow_real(a0, d) + pow_real(b0, d) - a0 - b0).abs();
    Ok(MuSolution {
        a0,
        b0,
        mu,
        constraint_residual,
    })
}

/// `d^(-2/(d-1))`, the product `a0 b0` at the constrained maximum.
pub fn extremal_product<F: Scalar>(d: F) -> F {
    (-(F::lit(2.0) / (d - F::one())) * d.ln()).exp()
}

/// The 2-cycle `{-b0, a0}` of `q_c(z) = -z^d + c` at `c = gamma(d)`, with
/// `a0 = d^(-1/(d-1)) e^xi` and `b0 = d^(-1/(d-1)) e^-xi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExtremalCycle<F> {
    pub c: F,
    pub a0: F,
    pub b0: F,
    /// `|q_c(a0) + b0| = |c - a0^d + b0|`
    pub residual_at_a: F,
    /// `|q_c(-b0) - a0| = |c + b0^d - a0|` (odd `d`: `(-b0)^d = -b0^d`)
    pub residual_at_minus_b: F,
}

pub fn extremal_cycle<F: Scalar>(d: F) -> Result<ExtremalCycle<F>> {
    check_degree(d)?;
    let root = solve_xi(d)?;
    let c = gamma_from_xi(d, root.xi);
    let scale = (-(d - F::one()).recip() * d.ln()).exp();
    let a0 = scale * root.xi.exp();
    let b0 = scale * (-root.xi).exp();
    Ok(ExtremalCycle {
        c,
        a0,
        b0,
        residual_at_a: (c - pow_real(a0, d) + b0).abs(),
        residual_at_minus_b: (c + pow_real(b0, d) - a0).abs(),
    })
}

/// `|d ln gamma(d) - ln 2| d / (ln d)^2`: the remainder of
/// `gamma(d) = 2^(1/d + O((log d)^2 / d^2))` normalized by its order.
pub fn gamma_asymptotic_deviation<F: Scalar>(d: F) -> Result<F> {
    let g = gamma(d)?;
    let ln_d = d.ln();
    Ok((d * g.ln() - F::LN_2()).abs() * d / (ln_d * ln_d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_beta_examples() {
        assert_eq!(alpha(2.0_f64), 0.25);
        assert!((alpha(3.0_f64) - 0.384900179).abs() < 5e-10);
        assert!((alpha(12.0_f64) - 0.731314279).abs() < 5e-10);
        assert_eq!(beta(2.0_f64), 2.0);
        assert_eq!(beta(3.0_f64), 2f64.sqrt());
        assert!((beta(10.0_f64) - 1.080059739).abs() < 5e-10);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn alpha_beta_match_high_precision_references() {
        // 40-digit references
        let refs = [
            (
                4.0_f64,
                0.472470393710577436787704_f64,
                1.259921049894873164767211_f64,
            ),
            (8.0, 0.6501225014974149358499358, 1.104089513673812337649505),
            (12.0, 0.731314278910421557561525, 1.065041089439962678190593),
            (
                17.0,
                0.7884388279875390779171372,
                1.044273782427413840321966,
            ),
        ];
        for (d, a, b) in refs {
            assert!((alpha(d) - a).abs() <= 4.0 * f64::EPSILON * a, "alpha({d})");
            assert!((beta(d) - b).abs() <= 2.0 * f64::EPSILON * b, "beta({d})");
        }
    }

    #[test]
    fn xi_closed_forms() {
        // d = 3: cosh(3x) = 4 cosh^3 x - 3 cosh x gives cosh^2 xi = 3/2.
        let r3 = solve_xi(3.0_f64).unwrap();
        assert!((r3.xi - 1.5f64.sqrt().acosh()).abs() < 1e-14);
        // d = 2: 2 cosh^2 xi - 1 = 2 cosh xi.
        let r2 = solve_xi(2.0_f64).unwrap();
        assert!((r2.xi - ((1.0 + 3f64.sqrt()) / 2.0).acosh()).abs() < 1e-14);
        assert!(r2.residual < 1e-12);
        assert!((r3.xi - 0.658478948).abs() < 1e-9);
        assert!((r2.xi - 0.831442945).abs() < 1e-9);
    }

    #[test]
    fn xi_is_a_sign_change() {
        for &d in &[2.0, 3.0, 4.5, 7.0, 50.0, 1e3, 1e5] {
            let xi = solve_xi(d).unwrap().xi;
            assert!(xi > 0.0);
            assert!(xi_equation(d, xi - 1e-6) < 0.0, "d = {d}");
            assert!(xi_equation(d, xi + 1e-6) > 0.0, "d = {d}");
        }
    }

    #[test]
    fn xi_relative_residual_small() {
        for d in 2..=200 {
            let d = d as f64;
            let r = solve_xi(d).unwrap();
            assert!(r.relative_residual(d) <= 1e-9, "d = {d}");
        }
    }

    #[test]
    fn gamma_examples() {
        assert!((gamma(3.0_f64).unwrap() - (32.0_f64 / 27.0).sqrt()).abs() <= 1e-11);
        assert!((gamma(2.0_f64).unwrap() - 1.100917369).abs() < 5e-10);
        // Table value 1.057591279 is one unit low in the last digit; the
        // 40-digit value is 1.0575912798867325...
        assert!((gamma(7.0_f64).unwrap() - 1.0575912798867325).abs() < 1e-14);
    }

    #[test]
    fn rejects_invalid_degree() {
        assert!(matches!(gamma(1.5_f64), Err(Error::InvalidRealDegree(_))));
        assert!(SectionConstants::compute(f64::NAN).is_err());
        assert!(mu_bruteforce(1.0_f64).is_err());
        assert!(solve_xi(1.0_f64).is_err());
    }

    #[test]
    fn constants_order() {
        for d in 2..=40 {
            let c = SectionConstants::compute(d as f64).unwrap();
            assert!(c.alpha < 1.0 && c.alpha < c.gamma && c.gamma > 1.0);
            assert!(c.xi > 0.0);
            assert!(c.xi_relative_residual() <= 1e-9);
        }
    }

    #[test]
    fn mu_cubic() {
        let s = mu_bruteforce(3.0_f64).unwrap();
        assert!((s.mu - 1.088662108).abs() < 1e-9);
        assert!((s.mu - gamma(3.0_f64).unwrap()).abs() <= 1e-8);
        assert!((s.a0 - 1.115355).abs() < 1e-6, "a0 = {}", s.a0);
        assert!((s.b0 - 0.298858).abs() < 1e-6, "b0 = {}", s.b0);
        assert!(s.constraint_residual < 1e-10);
        assert!((s.a0 * s.b0 - 1.0 / 3.0).abs() < 1e-8);
    }

    #[test]
    fn mu_non_integer_degree() {
        let d = 4.5_f64;
        let s = mu_bruteforce(d).unwrap();
        assert!((s.mu - gamma(d).unwrap()).abs() <= 1e-8);
        assert!(s.mu >= 1.0);
    }

    #[test]
    fn cycle_cubic() {
        let cyc = extremal_cycle(3.0_f64).unwrap();
        assert!(cyc.residual_at_a <= 1e-12);
        assert!(cyc.residual_at_minus_b <= 1e-12);
        assert!((cyc.a0 * cyc.b0 - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn large_argument_branch() {
        assert_eq!(cosh(40.0_f64), 40f64.exp() / 2.0);
        assert_eq!(sinh(-40.0_f64), -(40f64.exp()) / 2.0);
        assert_eq!(cosh(1.0_f64), 1f64.cosh());
    }

    #[test]
    fn deviation_is_finite_at_small_degree() {
        let v = gamma_asymptotic_deviation(3.0_f64).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn single_precision_constants() {
        let c = SectionConstants::<f32>::compute(3.0).unwrap();
        assert!((c.gamma - 1.0886621).abs() < 1e-5);
        assert!((c.alpha - 0.3849002).abs() < 1e-6);
        assert!(c.xi_relative_residual() <= f32::ROOT_REL_RESIDUAL);
    }
}
