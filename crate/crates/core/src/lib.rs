//! Cross-sections of multibrot sets.
//!
//! The multibrot set `M_d` is the set of parameters `c` for which the orbit
//! of `0` under `z -> z^d + c` stays bounded. Along the rays `R+ omega` with
//! `omega^(d-1) = +-1` its extent is known in closed form:
//!
//! | ray                          | endpoint     |
//! |------------------------------|--------------|
//! | `omega^(d-1) = 1`            | `alpha(d)`   |
//! | `omega^(d-1) = -1`, `d` even | `beta(d)`    |
//! | `omega^(d-1) = -1`, `d` odd  | `gamma(d)`   |
//!
//! This crate computes these constants ([`constants`]), iterates the maps
//! ([`dynamics`]), scans the rays empirically ([`sections`]) and renders the
//! sets as PGM images ([`render`]). Everything is generic over [`Scalar`];
//! the aliases below fix the reference precision `f64`.

pub mod constants;
pub mod dynamics;
pub mod error;
pub mod render;
pub mod scalar;
pub mod sections;

pub use constants::{
    alpha, beta, extremal_cycle, extremal_product, gamma, gamma_asymptotic_deviation,
    mu_bruteforce, solve_xi,
};
pub use dynamics::{
    analyze_real_q_orbit, escape_radius, iterate_p, iterate_q, Degree, IterationBudget, Parity,
    PolyMap, VerdictKind,
};
pub use error::{Error, Result};
pub use scalar::Scalar;

pub type ComplexPoint = dynamics::ComplexPoint<f64>;
pub type OrbitVerdict = dynamics::OrbitVerdict<f64>;
pub type InvariantInterval = dynamics::InvariantInterval<f64>;
pub type SectionConstants = constants::SectionConstants<f64>;
pub type MuSolution = constants::MuSolution<f64>;
pub type ExtremalCycle = constants::ExtremalCycle<f64>;
pub type XiRoot = constants::XiRoot<f64>;
pub type RayClass = sections::RayClass<f64>;
pub type EndpointEstimate = sections::EndpointEstimate<f64>;
pub type Window = render::Window<f64>;
pub type EscapeGrid = render::EscapeGrid<f64>;

pub type ComplexPoint32 = dynamics::ComplexPoint<f32>;
pub type SectionConstants32 = constants::SectionConstants<f32>;
pub type Window32 = render::Window<f32>;
