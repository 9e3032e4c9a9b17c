//! # bubble-lab
//!
//! A numerical laboratory for real scalar fields with a twin-well
//! self-interaction `μ²φ − λ|φ|^{p−1}φ` on two backgrounds:
//!
//! * **flat** (Minkowski): `φ_tt − Δφ = μ²φ − λ|φ|^{p−1}φ`
//! * **expanding** (de Sitter, scale factor `e^t`):
//!   `φ_tt + n φ_t − e^{−2t} Δφ = μ²φ − λ|φ|^{p−1}φ`
//!
//! On the expanding background the substitution `u = e^{nt/2} φ` removes the
//! friction term and produces a Klein–Gordon equation with the *curved mass*
//! `M = √(n²/4 + μ²)` and an exponentially decaying nonlinear coefficient:
//! `u_tt − e^{−2t} Δu − M²u = −λ e^{−n(p−1)t/2} |u|^{p−1}u`.
//! A non-local variant multiplies the nonlinearity by
//! `Γ(t) · |∫ |u|^{p−1}u dy|^β`.
//!
//! The crate provides, as a library with runnable examples per capability:
//!
//! * [`specfun`] — self-contained special functions: Gauss hypergeometric
//!   `₂F₁`, modified Bessel `I₀`, spherical Bessel functions and the positive
//!   zeros of `J_{n+1/2}`, associated Legendre polynomials.
//! * [`quad`] — adaptive Gauss–Kronrod quadrature used by the kernel checks.
//! * [`greens`] — the explicit Duhamel (source-to-solution) kernel of the
//!   linear problem on the expanding background, and the reduced integral
//!   identities it satisfies (`∫ kernel dz = sinh(M(t−b))/M`, the flat-space
//!   layer identity `∫₀^τ I₀(μ√(τ²−r²)) dr = sinh(μτ)/μ`, and the weighted
//!   reduction with the three-case discriminant `μ² + ν`).
//! * [`solver`] — leapfrog time-domain solvers (1D line and 3D radially
//!   symmetric), the spatially homogeneous damped twin-well oscillator,
//!   closed-form solutions (vacua, static and traveling kinks) used as
//!   oracles, independent residual probes, and a light-cone support check.
//! * [`functionals`] — spatial moments `F(t) = ∫ψφ dx`, self-interaction
//!   `S(t) = ∫ψ|φ|^{p−1}φ dx`, energy and its dissipation identity, free
//!   (linear) moment evolution, and the asymptotic signedness fitter.
//! * [`eigen`] — Dirichlet eigenpairs of the Laplacian on a ball in ℝ³ used
//!   as moment weights, and the mass/eigenvalue resonance detector.
//! * [`criteria`] — hypothesis checks for the sign-change/blow-up criteria,
//!   interior zero ("bubble") detection, and ordinary differential
//!   inequality life-span bounds.
//! * [`config`] / [`runner`] — JSON experiment configs, CSV/JSON artifacts,
//!   and the `bubble-lab` command-line entry points.
//!
//! ## Quick start
//!
//! ```
//! use bubble_lab::greens;
//!
//! // The kernel integrated across the shrinking light cone reproduces
//! // sinh(M(t−b))/M.
//! let v = greens::reduced_sinh_integral(1.0, 0.0, 1.0).unwrap();
//! assert!((v - 1.0f64.sinh()).abs() < 1e-8);
//! ```

pub mod config;
pub mod criteria;
pub mod eigen;
pub mod error;
pub mod functionals;
pub mod greens;
pub mod ode;
pub mod quad;
pub mod runner;
pub mod solver;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
