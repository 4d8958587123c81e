//! Section constants against 40-digit references computed with mpmath
//! (`findroot` on cosh(d x) = d cosh(x), then the closed forms).

use multibrot_core::constants::{mu_bruteforce, SectionConstants};
use multibrot_core::{extremal_cycle, extremal_product, gamma};

#[allow(clippy::excessive_precision, clippy::approx_constant)]
const REFERENCE: [(u32, f64, f64, f64, f64); 11] = [
    (2, 0.25, 2.0, 1.100917368760402919, 0.83144294552931053783),
    (
        3,
        0.38490017945975050967,
        1.4142135623730950488,
        1.0886621079036347103,
        0.65847894846240835431,
    ),
    (
        4,
        0.47247039371057743679,
        1.2599210498948731648,
        1.0783366512676879087,
        0.55335847079956700892,
    ),
    (
        5,
        0.5349922439811376192,
        1.1892071150027210667,
        1.0699844879622752384,
        0.4812118250596034475,
    ),
    (
        6,
        0.58235593230964937103,
        1.1486983549970350068,
        1.0631922416899613628,
        0.42799416823606075677,
    ),
    (
        7,
        0.6197314511995575225,
        1.1224620483093729814,
        1.0575912798867325322,
        0.38680482494893226624,
    ),
    (
        8,
        0.65012250149741493585,
        1.1040895136738123376,
        1.0529043162387402313,
        0.35380506569751411326,
    ),
    (
        9,
        0.67540949835697115318,
        1.0905077326652576592,
        1.0489285390669142601,
        0.32666824706114485619,
    ),
    (
        10,
        0.69683731441301435375,
        1.0800597388923061699,
        1.0455149708394101221,
        0.30389233736669247795,
    ),
    (
        11,
        0.71526676563342930496,
        1.0717734625362931642,
        1.0425526900841071705,
        0.28445944227954344914,
    ),
    (
        12,
        0.73131427891042155756,
        1.0650410894399626782,
        1.0399577922792661021,
        0.26765264535573074437,
    ),
];

#[test]
fn constants_match_high_precision_references() {
    for (d, alpha, beta, gamma, xi) in REFERENCE {
        let c = SectionConstants::compute(d as f64).unwrap();
        assert!((c.alpha - alpha).abs() < 1e-15, "alpha({d})");
        assert!((c.beta - beta).abs() < 1e-15, "beta({d})");
        assert!((c.gamma - gamma).abs() < 1e-14, "gamma({d}) = {}", c.gamma);
        assert!((c.xi - xi).abs() < 1e-14, "xi({d}) = {}", c.xi);
    }
}

#[test]
fn nine_decimal_rounding_of_references() {
    // Entries where the printed table differs from the correctly rounded value.
    let rounded = |x: f64| format!("{x:.9}");
    let c5 = SectionConstants::compute(5.0).unwrap();
    assert_eq!(rounded(c5.gamma), "1.069984488");
    let c8 = SectionConstants::compute(8.0).unwrap();
    assert_eq!(rounded(c8.alpha), "0.650122501");
    assert_eq!(rounded(c8.gamma), "1.052904316");
}

#[test]
fn trends_over_small_degrees() {
    let rows: Vec<_> = (2..=12)
        .map(|d| SectionConstants::compute(d as f64).unwrap())
        .collect();
    for pair in rows.windows(2) {
        assert!(pair[0].alpha < pair[1].alpha);
        assert!(pair[0].beta > pair[1].beta);
        assert!(pair[0].gamma > pair[1].gamma);
    }
}

#[test]
fn oracle_agrees_on_non_integer_degrees() {
    for d in [2.5_f64, 3.7, 6.25, 11.5] {
        let s = mu_bruteforce(d).unwrap();
        assert!((s.mu - gamma(d).unwrap()).abs() <= 1e-8, "d = {d}");
        assert!((s.a0 * s.b0 - extremal_product(d)).abs() <= 1e-8);
        assert!(s.constraint_residual <= 1e-10);
    }
}

#[test]
fn cycle_residuals_for_real_degrees() {
    for d in [3.0_f64, 4.5, 13.0, 51.0] {
        let cyc = extremal_cycle(d).unwrap();
        assert!(cyc.residual_at_a <= 1e-9, "d = {d}");
        assert!(cyc.residual_at_minus_b <= 1e-9, "d = {d}");
    }
}
