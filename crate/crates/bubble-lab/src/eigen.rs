//! Dirichlet eigenpairs of the Laplacian on a ball in ℝ³, used as
//! spatial weights, and the resonance locator `μ² = −ν`.
//!
//! The eigenfunctions on the ball of radius `R̃` with zero boundary values
//! separate as
//!
//! ```text
//! ψ_{njk}(r, θ, φ) = j_n(ρ_k⁽ⁿ⁾ r / R̃) · P_n^j(cos θ) · {cos(jφ) or sin(jφ)}
//! ```
//!
//! where `j_n` is the spherical Bessel function, `ρ_k⁽ⁿ⁾` its k-th
//! positive zero, and `P_n^j` the associated Legendre polynomial.  (The
//! radial factor is often written `√(πR̃/(2ρr))·J_{n+1/2}(ρr/R̃)`; the
//! half-integer Bessel prefactor cancels to exactly `j_n`, which is the
//! form evaluated here — no additional L² normalization is applied.)
//! The eigenvalue is `ν_{n,k} = −(ρ_k⁽ⁿ⁾/R̃)²`, always negative.

use crate::error::{Error, Result};
use crate::specfun::{assoc_legendre, spherical_bessel_zero, spherical_j};
use serde::{Deserialize, Serialize};

/// Default tolerance on `|μR̃ − ρ|` for declaring a resonance.
pub const DEFAULT_RESONANCE_TOL: f64 = 1e-9;

/// Azimuthal branch of a mode with `j ≥ 1` (the `j = 0` mode has no
/// azimuthal dependence and uses `Cos`, whose factor is 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Azimuthal factor `cos(jφ)`.
    Cos,
    /// Azimuthal factor `sin(jφ)` (requires `j ≥ 1`).
    Sin,
}

/// A single Dirichlet-ball eigenfunction with its eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenmode {
    /// Angular degree `n ≥ 0`.
    pub n: u32,
    /// Azimuthal order `0 ≤ j ≤ n`.
    pub j: u32,
    /// Radial rank `k ≥ 1` (number of the Bessel zero).
    pub k: u32,
    /// Azimuthal branch.
    pub branch: Branch,
    /// Ball radius `R̃ > 0`.
    pub r_tilde: f64,
    /// Eigenvalue `ν = −(ρ_k⁽ⁿ⁾/R̃)² < 0`.
    pub nu: f64,
}

impl Eigenmode {
    /// Build a mode, computing its eigenvalue.
    pub fn new(n: u32, j: u32, k: u32, branch: Branch, r_tilde: f64) -> Result<Self> {
        if j > n {
            return Err(Error::domain("eigenmode", format!("azimuthal order j = {j} exceeds degree n = {n}")));
        }
        if branch == Branch::Sin && j == 0 {
            return Err(Error::domain("eigenmode", "sin branch requires j ≥ 1".to_string()));
        }
        let nu = dirichlet_eigenvalue(n, k, r_tilde)?;
        Ok(Eigenmode { n, j, k, branch, r_tilde, nu })
    }

    /// The Bessel zero `ρ_k⁽ⁿ⁾ = R̃·√(−ν)`.
    pub fn rho(&self) -> f64 {
        self.r_tilde * (-self.nu).sqrt()
    }
}

/// Eigenvalue `ν_{n,k} = −(ρ_k⁽ⁿ⁾/R̃)²` of the Dirichlet Laplacian on
/// the ball of radius `R̃`, where `ρ_k⁽ⁿ⁾` is the k-th positive zero of
/// the spherical Bessel function `j_n`.
pub fn dirichlet_eigenvalue(n: u32, k: u32, r_tilde: f64) -> Result<f64> {
    if !(r_tilde > 0.0) {
        return Err(Error::domain("dirichlet_eigenvalue", format!("ball radius must be positive, got {r_tilde}")));
    }
    let rho = spherical_bessel_zero(n, k)?;
    let ratio = rho / r_tilde;
    Ok(-(ratio * ratio))
}

/// Evaluate the eigenfunction at spherical coordinates `(r, θ, φ)`.
///
/// Finite at `r = 0` (the small-argument series of `j_n`); nonzero there
/// only for `n = 0`.  Vanishes identically at `r = R̃` up to the accuracy
/// of the stored zero.
pub fn eigenfunction_eval(mode: &Eigenmode, r: f64, theta: f64, phi: f64) -> Result<f64> {
    if !(0.0..=mode.r_tilde).contains(&r) {
        return Err(Error::domain(
            "eigenfunction_eval",
            format!("radius {r} outside the ball [0, {}]", mode.r_tilde),
        ));
    }
    let radial = spherical_j(mode.n, mode.rho() * r / mode.r_tilde)?;
    let polar = assoc_legendre(mode.n, mode.j, theta.cos())?;
    let azimuthal = match mode.branch {
        Branch::Cos => (mode.j as f64 * phi).cos(),
        Branch::Sin => (mode.j as f64 * phi).sin(),
    };
    Ok(radial * polar * azimuthal)
}

/// Radial factor `j_n(ρr/R̃)` alone (the form used as a weight on
/// spherically symmetric grids; angular factors integrate to zero
/// against radial fields for `n ≥ 1`).
pub fn radial_profile(mode: &Eigenmode, r: f64) -> Result<f64> {
    if !(0.0..=mode.r_tilde).contains(&r) {
        return Err(Error::domain(
            "radial_profile",
            format!("radius {r} outside the ball [0, {}]", mode.r_tilde),
        ));
    }
    spherical_j(mode.n, mode.rho() * r / mode.r_tilde)
}

/// Sup-norm residual of the discrete radial eigenvalue equation for a
/// sampled radial profile `f`:
///
/// `‖ f'' + (2/r)f' − n(n+1)/r²·f − ν f ‖∞ / ‖f‖∞`
///
/// over interior nodes with `r ≥ R̃/20` (the centrifugal term divides by
/// r², so the innermost nodes amplify rounding noise without adding
/// information).  Second differences are centered, so the residual of a
/// smooth eigenfunction is `O(h²)`.
pub fn radial_operator_residual(values: &[f64], nu: f64, degree: u32, grid: &crate::solver::Grid1D) -> Result<f64> {
    if grid.geometry != crate::solver::Geometry::Radial3d {
        return Err(Error::domain("radial_operator_residual", "requires a radial grid".to_string()));
    }
    if values.len() != grid.len || grid.len < 5 {
        return Err(Error::domain(
            "radial_operator_residual",
            format!("need aligned values on ≥ 5 nodes, got {} on {}", values.len(), grid.len),
        ));
    }
    let h = grid.spacing;
    let r_max = grid.coord(grid.len - 1);
    let r_cut = r_max / 20.0;
    let sup_f = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if sup_f == 0.0 {
        return Ok(0.0);
    }
    let cc = degree as f64 * (degree + 1) as f64;
    let mut worst = 0.0f64;
    for i in 1..grid.len - 1 {
        let r = grid.coord(i);
        if r < r_cut {
            continue;
        }
        let f_rr = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / (h * h);
        let f_r = (values[i + 1] - values[i - 1]) / (2.0 * h);
        let res = f_rr + 2.0 / r * f_r - cc / (r * r) * values[i] - nu * values[i];
        worst = worst.max(res.abs());
    }
    Ok(worst / sup_f)
}

/// Residual of the eigenmode's radial factor under the discrete radial
/// Laplacian on the given grid (which must span `[0, R̃]`).
///
/// # Errors
/// Rejects grids with fewer than 20 nodes per radial oscillation (the
/// mode has `k` radial half-waves) and grids not covering the ball.
pub fn laplacian_residual(mode: &Eigenmode, grid: &crate::solver::Grid1D) -> Result<f64> {
    let r_max = grid.coord(grid.len - 1);
    if (r_max - mode.r_tilde).abs() > 1e-9 * mode.r_tilde || grid.origin != 0.0 {
        return Err(Error::domain(
            "laplacian_residual",
            format!("grid [{}, {r_max}] does not span the ball [0, {}]", grid.origin, mode.r_tilde),
        ));
    }
    let per_oscillation = grid.len / mode.k.max(1) as usize;
    if per_oscillation < 20 {
        return Err(Error::domain(
            "laplacian_residual",
            format!("{} nodes for {} radial oscillations is under-resolved (need ≥ 20 each)", grid.len, mode.k),
        ));
    }
    let values: Result<Vec<f64>> = grid.coords().map(|r| radial_profile(mode, r.min(mode.r_tilde))).collect();
    radial_operator_residual(&values?, mode.nu, mode.n, grid)
}

/// All index pairs `(n, k)` within the given bounds whose Bessel zero
/// matches `μR̃` to within `tol` — i.e. where `μ² = −ν_{n,k}` holds and
/// the zero-mass resonance occurs.  Sorted by increasing mismatch
/// `|μR̃ − ρ_k⁽ⁿ⁾|`.
pub fn find_resonance(mu: f64, r_tilde: f64, max_n: u32, max_k: u32, tol: f64) -> Result<Vec<(u32, u32, f64)>> {
    if !(mu > 0.0) || !(r_tilde > 0.0) || max_k == 0 {
        return Err(Error::domain(
            "find_resonance",
            format!("need μ > 0, R̃ > 0, max_k ≥ 1; got μ = {mu}, R̃ = {r_tilde}, max_k = {max_k}"),
        ));
    }
    let target = mu * r_tilde;
    let mut hits = Vec::new();
    for n in 0..=max_n {
        for k in 1..=max_k {
            let rho = spherical_bessel_zero(n, k)?;
            let mismatch = target - rho;
            if mismatch.abs() <= tol {
                hits.push((n, k, mismatch));
            }
        }
    }
    hits.sort_by(|a, b| a.2.abs().partial_cmp(&b.2.abs()).unwrap());
    Ok(hits)
}

// ─────────────────────────── tests ───────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate;
    use crate::solver::Grid1D;
    use std::f64::consts::PI;

    #[test]
    fn ground_eigenvalue_is_minus_pi_squared() {
        let nu = dirichlet_eigenvalue(0, 1, 1.0).unwrap();
        assert!((nu + PI * PI).abs() <= 1e-10, "ν(0,1,R̃=1) = {nu:.12} vs −π² = {:.12}", -PI * PI);
    }

    #[test]
    fn second_radial_rank_on_doubled_ball_matches_the_ground_value() {
        // ρ₂⁽⁰⁾ = 2π, so on R̃ = 2 the eigenvalue is −(2π/2)² = −π² again.
        let nu = dirichlet_eigenvalue(0, 2, 2.0).unwrap();
        assert!((nu + PI * PI).abs() <= 1e-10, "ν(0,2,R̃=2) = {nu:.12}");
    }

    #[test]
    fn degree_one_eigenvalue_uses_the_tangent_fixed_point() {
        // j₁(x) = 0 ⇔ tan x = x; first positive root by bisection.
        let (mut lo, mut hi) = (PI, 1.5 * PI - 1e-9);
        let g = |x: f64| x.tan() - x;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(lo) * g(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        let nu = dirichlet_eigenvalue(1, 1, 1.0).unwrap();
        assert!(
            (nu + root * root).abs() <= 1e-9,
            "ν(1,1) = {nu:.12} vs −(tan-root)² = {:.12}",
            -root * root
        );
    }

    #[test]
    fn eigenfunction_vanishes_on_the_boundary() {
        for (n, j, k) in [(0u32, 0u32, 1u32), (1, 0, 1), (2, 1, 2), (3, 2, 1)] {
            let mode = Eigenmode::new(n, j, k, Branch::Cos, 1.7).unwrap();
            let v = eigenfunction_eval(&mode, 1.7, 0.7, 1.1).unwrap();
            assert!(v.abs() <= 1e-12, "ψ({n},{j},{k}) at R̃ = {v:.3e}");
        }
    }

    #[test]
    fn ground_mode_matches_the_elementary_sine_form() {
        // j₀(πr) = sin(πr)/(πr): the half-integer Bessel closed form.
        let mode = Eigenmode::new(0, 0, 1, Branch::Cos, 1.0).unwrap();
        for i in 1..20 {
            let r = i as f64 / 20.0;
            let got = eigenfunction_eval(&mode, r, 0.3, 2.0).unwrap();
            let want = (PI * r).sin() / (PI * r);
            assert!((got - want).abs() <= 1e-12, "ψ(r={r}) = {got:.14} vs {want:.14}");
        }
    }

    #[test]
    fn sin_branch_vanishes_on_the_meridian() {
        let mode = Eigenmode::new(1, 1, 1, Branch::Sin, 1.0).unwrap();
        let v = eigenfunction_eval(&mode, 0.5, 0.9, 0.0).unwrap();
        assert_eq!(v, 0.0, "sin branch at φ = 0");
    }

    #[test]
    fn origin_value_is_finite_with_the_right_parity() {
        let ground = Eigenmode::new(0, 0, 1, Branch::Cos, 1.0).unwrap();
        let at0 = eigenfunction_eval(&ground, 0.0, 0.1, 0.2).unwrap();
        assert!((at0 - 1.0).abs() <= 1e-12, "j₀(0) = 1, got {at0}");
        for n in 1..4u32 {
            let mode = Eigenmode::new(n, 0, 1, Branch::Cos, 1.0).unwrap();
            let v = eigenfunction_eval(&mode, 0.0, 0.1, 0.2).unwrap();
            assert_eq!(v, 0.0, "degree-{n} mode must vanish at the origin");
        }
    }

    #[test]
    fn invalid_mode_indices_are_rejected() {
        assert!(Eigenmode::new(1, 2, 1, Branch::Cos, 1.0).is_err(), "j > n");
        assert!(Eigenmode::new(1, 0, 1, Branch::Sin, 1.0).is_err(), "sin with j = 0");
        assert!(Eigenmode::new(0, 0, 1, Branch::Cos, -1.0).is_err(), "negative radius");
        let mode = Eigenmode::new(0, 0, 1, Branch::Cos, 1.0).unwrap();
        assert!(eigenfunction_eval(&mode, 1.5, 0.0, 0.0).is_err(), "radius beyond the ball");
    }

    #[test]
    fn ground_mode_laplacian_residual_is_small_and_second_order() {
        let mode = Eigenmode::new(0, 0, 1, Branch::Cos, 1.0).unwrap();
        let fine = Grid1D::radial(1.0, 1001).unwrap();
        let res_fine = laplacian_residual(&mode, &fine).unwrap();
        assert!(res_fine <= 1e-4, "residual {res_fine:.3e} at h = 1e-3");
        let coarse = Grid1D::radial(1.0, 501).unwrap();
        let res_coarse = laplacian_residual(&mode, &coarse).unwrap();
        let ratio = res_coarse / res_fine;
        assert!(
            (3.5..4.5).contains(&ratio),
            "halving ratio {ratio:.2} outside [3.5, 4.5] ({res_coarse:.3e} → {res_fine:.3e})"
        );
    }

    #[test]
    fn higher_mode_laplacian_residual_is_second_order() {
        let mode = Eigenmode::new(2, 0, 3, Branch::Cos, 1.5).unwrap();
        let fine = Grid1D::radial(1.5, 1201).unwrap();
        let coarse = Grid1D::radial(1.5, 601).unwrap();
        let res_fine = laplacian_residual(&mode, &fine).unwrap();
        let res_coarse = laplacian_residual(&mode, &coarse).unwrap();
        let ratio = res_coarse / res_fine;
        assert!(
            (3.5..4.5).contains(&ratio),
            "halving ratio {ratio:.2} outside [3.5, 4.5] ({res_coarse:.3e} → {res_fine:.3e})"
        );
    }

    #[test]
    fn constant_profile_with_zero_eigenvalue_has_zero_residual() {
        let grid = Grid1D::radial(1.0, 101).unwrap();
        let res = radial_operator_residual(&vec![1.0; grid.len], 0.0, 0, &grid).unwrap();
        assert_eq!(res, 0.0, "a constant is annihilated by the radial operator exactly");
    }

    #[test]
    fn under_resolved_grid_is_rejected() {
        let mode = Eigenmode::new(0, 0, 5, Branch::Cos, 1.0).unwrap();
        let grid = Grid1D::radial(1.0, 60).unwrap(); // 12 nodes per oscillation
        assert!(laplacian_residual(&mode, &grid).is_err());
    }

    #[test]
    fn resonance_at_mu_pi_is_the_ground_mode() {
        let hits = find_resonance(PI, 1.0, 3, 4, DEFAULT_RESONANCE_TOL).unwrap();
        assert_eq!(hits.len(), 1, "exactly one resonance expected, got {hits:?}");
        assert_eq!((hits[0].0, hits[0].1), (0, 1));
        assert!(hits[0].2.abs() <= 1e-10);
    }

    #[test]
    fn resonance_at_two_pi_is_the_second_radial_rank() {
        let hits = find_resonance(2.0 * PI, 1.0, 3, 4, DEFAULT_RESONANCE_TOL).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!((hits[0].0, hits[0].1), (0, 2));
    }

    #[test]
    fn resonance_with_unit_mass_on_a_tuned_ball() {
        // Choosing R̃ = ρ₁⁽¹⁾ makes μ = 1 resonate with the (1,1) mode.
        let rho11 = crate::specfun::spherical_bessel_zero(1, 1).unwrap();
        let hits = find_resonance(1.0, rho11, 3, 4, DEFAULT_RESONANCE_TOL).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!((hits[0].0, hits[0].1), (1, 1));
    }

    #[test]
    fn eigenvalues_order_strictly_along_the_zero_ladder() {
        let nu01 = dirichlet_eigenvalue(0, 1, 1.0).unwrap();
        let nu11 = dirichlet_eigenvalue(1, 1, 1.0).unwrap();
        let nu02 = dirichlet_eigenvalue(0, 2, 1.0).unwrap();
        assert!(
            nu01 > nu11 && nu11 > nu02,
            "expected ν(0,1) > ν(1,1) > ν(0,2), got {nu01:.6} / {nu11:.6} / {nu02:.6}"
        );
    }

    #[test]
    fn first_six_modes_are_mutually_orthogonal() {
        // ∫ψ_A ψ_B dV factorizes into radial × polar × azimuthal 1D
        // integrals; each is evaluated adaptively and the product is
        // compared against the geometric mean of the mode norms.
        let r_tilde = 1.0;
        let modes = [
            Eigenmode::new(0, 0, 1, Branch::Cos, r_tilde).unwrap(),
            Eigenmode::new(1, 0, 1, Branch::Cos, r_tilde).unwrap(),
            Eigenmode::new(1, 1, 1, Branch::Cos, r_tilde).unwrap(),
            Eigenmode::new(1, 1, 1, Branch::Sin, r_tilde).unwrap(),
            Eigenmode::new(2, 0, 1, Branch::Cos, r_tilde).unwrap(),
            Eigenmode::new(0, 0, 2, Branch::Cos, r_tilde).unwrap(),
        ];
        let pair_integral = |a: &Eigenmode, b: &Eigenmode| -> f64 {
            let radial = integrate(
                |r| radial_profile(a, r).unwrap() * radial_profile(b, r).unwrap() * r * r,
                0.0,
                r_tilde,
                1e-11,
            )
            .unwrap()
            .value;
            let polar = integrate(
                |th| {
                    assoc_legendre(a.n, a.j, th.cos()).unwrap()
                        * assoc_legendre(b.n, b.j, th.cos()).unwrap()
                        * th.sin()
                },
                0.0,
                PI,
                1e-11,
            )
            .unwrap()
            .value;
            let az = |m: &Eigenmode, phi: f64| match m.branch {
                Branch::Cos => (m.j as f64 * phi).cos(),
                Branch::Sin => (m.j as f64 * phi).sin(),
            };
            let azimuthal = integrate(|phi| az(a, phi) * az(b, phi), 0.0, 2.0 * PI, 1e-11).unwrap().value;
            radial * polar * azimuthal
        };
        let norms: Vec<f64> = modes.iter().map(|m| pair_integral(m, m)).collect();
        for (ia, a) in modes.iter().enumerate() {
            assert!(norms[ia] > 0.0, "mode {ia} must have positive norm");
            for (ib, b) in modes.iter().enumerate().skip(ia + 1) {
                let cross = pair_integral(a, b);
                let scale = (norms[ia] * norms[ib]).sqrt();
                assert!(
                    cross.abs() <= 1e-6 * scale,
                    "modes {ia} and {ib} not orthogonal: ⟨A,B⟩ = {cross:.3e} vs scale {scale:.3e}"
                );
            }
        }
    }
}
