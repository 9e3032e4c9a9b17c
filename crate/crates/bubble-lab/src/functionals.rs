//! Scalar diagnostics over trajectories: plain and weighted spatial
//! moments, the energy functional and its dissipation identity, initial
//! constants, the free-evolution moment formula, and the asymptotic
//! signedness fitter.
//!
//! The central objects are, per slice,
//!
//! ```text
//! F(t) = ∫ ψ(x)·φ(x,t) dx            (the weighted moment)
//! S(t) = ∫ ψ(x)·sign(φ)|φ(x,t)|^p dx (the weighted self-interaction)
//! ```
//!
//! with `ψ ≡ 1` or a ball eigenfunction, and the energy of the physical
//! field on the expanding background
//!
//! ```text
//! E(t) = e^{nt} ∫ ( ½|φ_t + (n/2)φ|² + ½e^{−2t}|∇φ|²
//!                   − ½(n²/4 + μ²)|φ|² + λ/(p+1)·|φ|^{p+1} ) dx
//! ```
//!
//! which dissipates as
//! `dE/dt = −e^{nt} ∫ ( e^{−2t}|∇φ|² + λn(p−1)/(2(p+1))·|φ|^{p+1} ) dx`.
//!
//! The signedness fitter asks, over a time window, for the smallest
//! `C ≥ 0` with `|F(t)|^p ≤ −σ·C·ν(t)·S(t)` for the weight family
//! `ν(t) = e^{at}·t^b` — the inequality whose failure beyond every
//! window is what the blow-up results exclude.

use crate::eigen::Eigenmode;
use crate::error::{Error, Result};
use crate::solver::{
    odd_power, EquationForm, Field, GammaKind, Geometry, ModelParams, Spacetime, Trajectory,
};
use serde::{Deserialize, Serialize};

/// Denominator floor below which a slice is "indeterminate" for the
/// signedness fit rather than a source of a divided-out constant.
pub const DENOM_FLOOR: f64 = 1e-14;

// ─────────────────────────── weights ───────────────────────────

/// Spatial weight `ψ` for moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WeightDescriptor {
    /// `ψ ≡ 1`.
    One,
    /// A ball eigenfunction, zero outside its ball.
    Mode {
        /// The eigenmode serving as the weight.
        mode: Eigenmode,
    },
}

impl WeightDescriptor {
    /// Check the weight is usable on the given grid and return a sampled
    /// profile.  Eigenmode weights require a radial grid and a
    /// spherically symmetric mode (angular degree 0): a mode with
    /// angular dependence integrates to zero against every radial field,
    /// which would silently produce meaningless moments.
    pub(crate) fn sample(&self, grid: &crate::solver::Grid1D) -> Result<Vec<f64>> {
        match self {
            WeightDescriptor::One => Ok(vec![1.0; grid.len]),
            WeightDescriptor::Mode { mode } => {
                if grid.geometry != Geometry::Radial3d {
                    return Err(Error::mismatch(
                        "weight",
                        "eigenmode weights are ball functions; the grid must be radial".to_string(),
                    ));
                }
                if mode.n != 0 {
                    return Err(Error::mismatch(
                        "weight",
                        format!(
                            "mode with angular degree {} integrates to zero against radial fields",
                            mode.n
                        ),
                    ));
                }
                grid.coords()
                    .map(|r| {
                        if r <= mode.r_tilde {
                            crate::eigen::radial_profile(mode, r)
                        } else {
                            Ok(0.0)
                        }
                    })
                    .collect()
            }
        }
    }
}

/// Trapezoid integral of per-node samples against the grid's volume
/// measure (`dx` on a line, `4πr²dr` on a radial grid).
fn integrate_samples(grid: &crate::solver::Grid1D, f: impl Fn(usize) -> f64) -> f64 {
    let mut acc = 0.0;
    for i in 0..grid.len {
        let trap = if i == 0 || i == grid.len - 1 { 0.5 } else { 1.0 };
        let vol = match grid.geometry {
            Geometry::Line => 1.0,
            Geometry::Radial3d => {
                let r = grid.coord(i);
                4.0 * std::f64::consts::PI * r * r
            }
        };
        acc += trap * vol * f(i);
    }
    acc * grid.spacing
}

// ─────────────────────────── moments ───────────────────────────

/// Per-slice weighted moment `F` and self-interaction `S` of a
/// trajectory, with the exponent and weight they were computed under.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentSeries {
    /// Slice times (strictly increasing, matching the trajectory).
    pub times: Vec<f64>,
    /// `F(t) = ∫ψφ dx` per slice.
    pub f: Vec<f64>,
    /// `S(t) = ∫ψ·sign(φ)|φ|^p dx` per slice.
    pub s: Vec<f64>,
    /// Nonlinearity exponent the `S` integrals used.
    pub p: f64,
    /// The weight `ψ`.
    pub weight: WeightDescriptor,
}

/// Compute the moment series of a trajectory under a weight.
pub fn moments(traj: &Trajectory, weight: &WeightDescriptor) -> Result<MomentSeries> {
    let grid = traj.slices[0].grid;
    let psi = weight.sample(&grid)?;
    let p = traj.params.p;
    let mut times = Vec::with_capacity(traj.slices.len());
    let mut f = Vec::with_capacity(traj.slices.len());
    let mut s = Vec::with_capacity(traj.slices.len());
    for slice in &traj.slices {
        times.push(slice.time);
        f.push(integrate_samples(&grid, |i| psi[i] * slice.values[i]));
        s.push(integrate_samples(&grid, |i| psi[i] * odd_power(slice.values[i], p)));
    }
    Ok(MomentSeries { times, f, s, p, weight: *weight })
}

/// The two constants the free-evolution formula starts from.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct InitialConstants {
    /// `C₀ = ∫ψ·φ(·,0) dx`.
    pub c0: f64,
    /// `C₁ = ∫ψ·∂ₜφ(·,0) dx`.
    pub c1: f64,
    /// The weight both integrals used.
    pub weight: WeightDescriptor,
}

/// Quadrature of the initial slice and initial velocity under a weight.
pub fn initial_constants(traj: &Trajectory, weight: &WeightDescriptor) -> Result<InitialConstants> {
    let grid = traj.slices[0].grid;
    let psi = weight.sample(&grid)?;
    let phi0 = &traj.slices[0].values;
    let v0 = &traj.velocities[0];
    let c0 = integrate_samples(&grid, |i| psi[i] * phi0[i]);
    let c1 = integrate_samples(&grid, |i| psi[i] * v0[i]);
    Ok(InitialConstants { c0, c1, weight: *weight })
}

/// Moment of a *free* (linear) evolution with effective mass `m_eff ≥ 0`:
///
/// `F(t) = C₀·cosh(m_eff·t) + (C₁/m_eff)·sinh(m_eff·t)`
///
/// degenerating to `C₀ + C₁·t` at `m_eff = 0`.  For compactly supported
/// data the Laplacian integrates to zero, so the exact moment of the
/// linear equation obeys `F̈ = m_eff²·F` with these very constants.
pub fn free_moment_formula(c: &InitialConstants, m_eff: f64, t: f64) -> f64 {
    if m_eff == 0.0 {
        c.c0 + c.c1 * t
    } else {
        let (s, ch) = ((m_eff * t).sinh(), (m_eff * t).cosh());
        c.c0 * ch + c.c1 / m_eff * s
    }
}

// ─────────────────────────── energy ───────────────────────────

/// Check that a run is in the regime the energy formulas cover: the
/// physical field on the expanding background with a constant, local
/// nonlinear coefficient.  Returns that coefficient.
fn energy_coefficient(params: &ModelParams) -> Result<f64> {
    if params.spacetime != Spacetime::DeSitter || params.form != EquationForm::PhiForm {
        return Err(Error::mismatch(
            "energy",
            "the energy functional is defined for the physical field on the expanding background".to_string(),
        ));
    }
    if params.beta != 0.0 {
        return Err(Error::mismatch("energy", "the energy identity holds for the local nonlinearity (β = 0)".to_string()));
    }
    match params.gamma_kind {
        GammaKind::Constant { c } => Ok(c),
        GammaKind::ExpDecay { .. } => Err(Error::mismatch(
            "energy",
            "the energy identity needs a time-independent nonlinear coefficient".to_string(),
        )),
    }
}

/// Spatial gradient by centered differences (second-order one-sided at
/// the ends).
fn gradient(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut g = vec![0.0; n];
    for i in 1..n - 1 {
        g[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
    }
    g[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    g[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    g
}

/// Per-node energy density (the `e^{nt}`-weighted integrand of `E`),
/// without the volume measure.
pub fn energy_density(field: &Field, velocity: &[f64], params: &ModelParams) -> Result<Vec<f64>> {
    let lambda = energy_coefficient(params)?;
    if velocity.len() != field.grid.len {
        return Err(Error::Config(format!(
            "velocity has {} samples for a grid of {}",
            velocity.len(),
            field.grid.len
        )));
    }
    let n = params.n as f64;
    let t = field.time;
    let ent = (n * t).exp();
    let e2t = (-2.0 * t).exp();
    let m2 = n * n / 4.0 + params.mu * params.mu;
    let grad = gradient(&field.values, field.grid.spacing);
    Ok((0..field.grid.len)
        .map(|i| {
            let w = field.values[i];
            let shifted = velocity[i] + 0.5 * n * w;
            ent * (0.5 * shifted * shifted + 0.5 * e2t * grad[i] * grad[i] - 0.5 * m2 * w * w
                + lambda / (params.p + 1.0) * w.abs().powf(params.p + 1.0))
        })
        .collect())
}

/// Total energy of a slice: trapezoid of [`energy_density`] over the
/// grid's volume measure.
pub fn energy(field: &Field, velocity: &[f64], params: &ModelParams) -> Result<f64> {
    let density = energy_density(field, velocity, params)?;
    Ok(integrate_samples(&field.grid, |i| density[i]))
}

/// The dissipation identity sampled at slice midpoints.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DissipationSeries {
    /// Midpoint times `(t_j + t_{j+1})/2`.
    pub t_mid: Vec<f64>,
    /// Centered difference `ΔE/Δt` at each midpoint.
    pub de_dt: Vec<f64>,
    /// The identity's right-hand side
    /// `−e^{nt}∫(e^{−2t}|∇φ|² + λn(p−1)/(2(p+1))|φ|^{p+1})dx`,
    /// averaged over the two adjacent slices.
    pub rhs: Vec<f64>,
    /// Energy per stored slice (length = slices).
    pub energy: Vec<f64>,
}

/// Evaluate the energy on every stored slice and compare its increments
/// against the dissipation integral; both sides are second-order
/// accurate, so their gap shrinks as `O(Δt² + dx²)` on converged runs.
pub fn energy_dissipation(traj: &Trajectory) -> Result<DissipationSeries> {
    let lambda = energy_coefficient(&traj.params)?;
    let n = traj.params.n as f64;
    let p = traj.params.p;
    let grid = traj.slices[0].grid;
    let energies: Result<Vec<f64>> = traj
        .slices
        .iter()
        .zip(&traj.velocities)
        .map(|(s, v)| energy(s, v, &traj.params))
        .collect();
    let energies = energies?;
    let rhs_at = |slice: &Field| -> f64 {
        let t = slice.time;
        let ent = (n * t).exp();
        let e2t = (-2.0 * t).exp();
        let grad = gradient(&slice.values, grid.spacing);
        -ent * integrate_samples(&grid, |i| {
            e2t * grad[i] * grad[i]
                + lambda * n * (p - 1.0) / (2.0 * (p + 1.0)) * slice.values[i].abs().powf(p + 1.0)
        })
    };
    let rhs_slices: Vec<f64> = traj.slices.iter().map(rhs_at).collect();
    let mut t_mid = Vec::new();
    let mut de_dt = Vec::new();
    let mut rhs = Vec::new();
    for j in 0..traj.slices.len() - 1 {
        let dt = traj.slices[j + 1].time - traj.slices[j].time;
        t_mid.push(0.5 * (traj.slices[j].time + traj.slices[j + 1].time));
        de_dt.push((energies[j + 1] - energies[j]) / dt);
        rhs.push(0.5 * (rhs_slices[j] + rhs_slices[j + 1]));
    }
    Ok(DissipationSeries { t_mid, de_dt, rhs, energy: energies })
}

// ─────────────────────────── signedness fit ───────────────────────────

/// Outcome of the signedness fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignednessVerdict {
    /// A finite `C ≥ 0` closes the inequality on every usable slice.
    Satisfiable,
    /// Some slice has `−σS(t) ≤ 0` with `|F(t)| > 0`: no constant works.
    Violated,
}

/// Fitted constant and bookkeeping for the window inequality
/// `|F(t)|^p ≤ −σ·C·ν(t)·S(t)`, `ν(t) = e^{at}t^b`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignednessFit {
    /// Exponent `p` (taken from the series).
    pub p: f64,
    /// Orientation `σ = ±1`.
    pub sigma: f64,
    /// Exponential rate of the weight.
    pub a: f64,
    /// Power of the weight.
    pub b: f64,
    /// The minimal constant closing the inequality (0 when `F ≡ 0`).
    pub c: f64,
    /// The window `[t_lo, t_hi]` the fit quantified over.
    pub window: (f64, f64),
    /// Fit outcome.
    pub verdict: SignednessVerdict,
    /// Time of the first violating slice, when violated.
    pub violation_time: Option<f64>,
    /// Slices skipped because both sides were below the floor.
    pub indeterminate: usize,
}

/// Fit the minimal `C ≥ 0` with `|F(t)|^p ≤ −σ·C·ν(t)·S(t)` over the
/// slices inside `window`, for `ν(t) = e^{at}·t^b`.
///
/// Per slice: with `denom = −σ·ν(t)·S(t)`, a candidate `|F|^p / denom`
/// is recorded when `denom > 1e-14`; when `denom` is below the floor the
/// slice is *violated* if `|F|^p` still exceeds the floor and
/// *indeterminate* (skipped, counted) otherwise.  The fitted `C` is the
/// maximum candidate, which is invariant under rescaling `φ → cφ`
/// (both sides scale by `|c|^p`).
pub fn fit_signedness(
    series: &MomentSeries,
    sigma: f64,
    a: f64,
    b: f64,
    window: (f64, f64),
) -> Result<SignednessFit> {
    if sigma != 1.0 && sigma != -1.0 {
        return Err(Error::Config(format!("orientation σ must be ±1, got {sigma}")));
    }
    if !(window.0 > 0.0) || !(window.1 >= window.0) {
        return Err(Error::Config(format!(
            "need a window 0 < t_lo ≤ t_hi (the weight t^b requires t > 0), got [{}, {}]",
            window.0, window.1
        )));
    }
    let mut c = 0.0f64;
    let mut indeterminate = 0usize;
    let mut verdict = SignednessVerdict::Satisfiable;
    let mut violation_time = None;
    let mut used = 0usize;
    for (j, &t) in series.times.iter().enumerate() {
        if t < window.0 || t > window.1 {
            continue;
        }
        used += 1;
        let nu = (a * t).exp() * t.powf(b);
        let lhs = series.f[j].abs().powf(series.p);
        let denom = -sigma * nu * series.s[j];
        if denom > DENOM_FLOOR {
            c = c.max(lhs / denom);
        } else if lhs > DENOM_FLOOR {
            verdict = SignednessVerdict::Violated;
            violation_time.get_or_insert(t);
        } else {
            indeterminate += 1;
        }
    }
    if used == 0 {
        return Err(Error::Config(format!(
            "no slices inside the window [{}, {}] (series spans [{:?}, {:?}])",
            window.0,
            window.1,
            series.times.first(),
            series.times.last()
        )));
    }
    Ok(SignednessFit {
        p: series.p,
        sigma,
        a,
        b,
        c,
        window,
        verdict,
        violation_time,
        indeterminate,
    })
}

// ─────────────────────────── tests ───────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::Branch;
    use crate::solver::{simulate, Grid1D, SimOptions};

    /// A hand-built single-slice trajectory for quadrature tests.
    fn still_trajectory(params: ModelParams, field: Field, velocity: Vec<f64>) -> Trajectory {
        Trajectory { params, slices: vec![field], velocities: vec![velocity], dt: 0.01, blowup: None }
    }

    fn bump(amplitude: f64, width: f64) -> impl Fn(f64) -> f64 {
        move |x: f64| {
            if x.abs() < width {
                amplitude * (-x * x / (width * width - x * x)).exp()
            } else {
                0.0
            }
        }
    }

    // ── moments ──

    #[test]
    fn zero_trajectory_has_zero_moments() {
        let params = ModelParams::minkowski_local(1, 1.0, 1.0, 3.0);
        let grid = Grid1D::line(-5.0, 5.0, 101).unwrap();
        let field = Field::new(grid, vec![0.0; grid.len], 0.0).unwrap();
        let traj = simulate(&params, &field, &vec![0.0; grid.len], 0.5, 0.05, &SimOptions::default()).unwrap();
        let m = moments(&traj, &WeightDescriptor::One).unwrap();
        assert!(m.f.iter().all(|&v| v == 0.0) && m.s.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn clipped_vacuum_moment_is_amplitude_times_quadrature_volume() {
        let params = ModelParams::desitter_phi(3, 1.3, 0.6, 3.0);
        let a = params.vacuum_amplitude();
        let grid = Grid1D::radial(6.0, 601).unwrap();
        let clip_r = 2.0; // node-aligned: 2.0 / 0.01 = cell 200
        let field = Field::from_fn(grid, 0.0, |r| if r <= clip_r { a } else { 0.0 }).unwrap();
        let traj = still_trajectory(params, field, vec![0.0; grid.len]);
        let m = moments(&traj, &WeightDescriptor::One).unwrap();
        // The same trapezoid applied to the indicator gives the measure
        // this rule assigns to the clipped ball; by linearity F = a·V.
        let v_quad = integrate_samples(&grid, |i| if grid.coord(i) <= clip_r { 1.0 } else { 0.0 });
        assert!(
            (m.f[0] - a * v_quad).abs() <= 1e-8 * (a * v_quad).abs(),
            "F(0) = {:.12} vs a·V = {:.12}",
            m.f[0],
            a * v_quad
        );
    }

    #[test]
    fn eigenmode_weight_against_its_own_profile_gives_the_norm() {
        // ∫_ball j₀(πr/R̃)² 4πr² dr = 2R̃³/π exactly (the radial integral
        // ∫₀¹ j₀(πs)² s² ds = 1/(2π²)).
        let r_tilde = 2.0;
        let mode = Eigenmode::new(0, 0, 1, Branch::Cos, r_tilde).unwrap();
        let weight = WeightDescriptor::Mode { mode };
        let params = ModelParams::desitter_phi(3, 1.0, 1.0, 3.0);
        let grid = Grid1D::radial(3.0, 601).unwrap();
        let field = Field::from_fn(grid, 0.0, |r| {
            if r <= r_tilde {
                crate::eigen::radial_profile(&mode, r).unwrap()
            } else {
                0.0
            }
        })
        .unwrap();
        let traj = still_trajectory(params, field, vec![0.0; grid.len]);
        let m = moments(&traj, &weight).unwrap();
        let want = 2.0 * r_tilde.powi(3) / std::f64::consts::PI;
        assert!(m.f[0] > 0.0);
        assert!(
            (m.f[0] - want).abs() <= 1e-4 * want,
            "∫ψ² = {:.8} vs closed form {want:.8}",
            m.f[0]
        );
    }

    #[test]
    fn angular_modes_are_rejected_as_weights_on_radial_grids() {
        let mode = Eigenmode::new(1, 0, 1, Branch::Cos, 1.0).unwrap();
        let params = ModelParams::desitter_phi(3, 1.0, 1.0, 3.0);
        let grid = Grid1D::radial(2.0, 51).unwrap();
        let field = Field::new(grid, vec![0.0; grid.len], 0.0).unwrap();
        let traj = still_trajectory(params, field, vec![0.0; grid.len]);
        assert!(moments(&traj, &WeightDescriptor::Mode { mode }).is_err());
        let line_params = ModelParams::minkowski_local(1, 1.0, 1.0, 3.0);
        let line_grid = Grid1D::line(-1.0, 1.0, 51).unwrap();
        let line_field = Field::new(line_grid, vec![0.0; line_grid.len], 0.0).unwrap();
        let line_traj = still_trajectory(line_params, line_field, vec![0.0; line_grid.len]);
        let ball_mode = Eigenmode::new(0, 0, 1, Branch::Cos, 1.0).unwrap();
        assert!(moments(&line_traj, &WeightDescriptor::Mode { mode: ball_mode }).is_err());
    }

    #[test]
    fn moments_scale_linearly_in_f_and_odd_homogeneously_in_s() {
        let params = ModelParams::minkowski_local(1, 1.0, 1.0, 2.5);
        let grid = Grid1D::line(-5.0, 5.0, 201).unwrap();
        let b = bump(0.7, 2.0);
        let field = Field::from_fn(grid, 0.0, |x| b(x) - 0.3 * b(x - 1.0)).unwrap();
        let traj = still_trajectory(params, field.clone(), vec![0.0; grid.len]);
        let m1 = moments(&traj, &WeightDescriptor::One).unwrap();
        for c in [-2.0f64, 0.5] {
            let scaled = Field::new(grid, field.values.iter().map(|v| c * v).collect(), 0.0).unwrap();
            let traj_c = still_trajectory(params, scaled, vec![0.0; grid.len]);
            let mc = moments(&traj_c, &WeightDescriptor::One).unwrap();
            assert!(
                (mc.f[0] - c * m1.f[0]).abs() <= 1e-12 * m1.f[0].abs().max(1.0),
                "F not linear under c = {c}"
            );
            let want_s = c.signum() * c.abs().powf(params.p) * m1.s[0];
            assert!(
                (mc.s[0] - want_s).abs() <= 1e-10 * want_s.abs().max(1e-30),
                "S[cφ] = {:.14} vs sign(c)|c|^p S = {want_s:.14}",
                mc.s[0]
            );
        }
    }

    // ── initial constants & free formula ──

    #[test]
    fn initial_constants_of_zero_data_vanish() {
        let params = ModelParams::minkowski_local(1, 1.0, 1.0, 3.0);
        let grid = Grid1D::line(-5.0, 5.0, 101).unwrap();
        let field = Field::new(grid, vec![0.0; grid.len], 0.0).unwrap();
        let traj = still_trajectory(params, field, vec![0.0; grid.len]);
        let c = initial_constants(&traj, &WeightDescriptor::One).unwrap();
        assert_eq!((c.c0, c.c1), (0.0, 0.0));
    }

    #[test]
    fn resting_data_has_exactly_zero_c1() {
        let params = ModelParams::minkowski_local(1, 1.0, 1.0, 3.0);
        let grid = Grid1D::line(-5.0, 5.0, 201).unwrap();
        let field = Field::from_fn(grid, 0.0, bump(0.4, 2.0)).unwrap();
        let traj = still_trajectory(params, field, vec![0.0; grid.len]);
        let c = initial_constants(&traj, &WeightDescriptor::One).unwrap();
        assert_eq!(c.c1, 0.0, "zero velocity must give exactly zero C₁");
        assert!(c.c0 > 0.0);
    }

    #[test]
    fn numerically_normalized_bump_has_unit_mass() {
        let params = ModelParams::minkowski_local(1, 1.0, 1.0, 3.0);
        let grid = Grid1D::line(-5.0, 5.0, 201).unwrap();
        let raw = Field::from_fn(grid, 0.0, bump(0.4, 2.0)).unwrap();
        let mass = integrate_samples(&grid, |i| raw.values[i]);
        let normalized =
            Field::new(grid, raw.values.iter().map(|v| v / mass).collect(), 0.0).unwrap();
        let traj = still_trajectory(params, normalized, vec![0.0; grid.len]);
        let c = initial_constants(&traj, &WeightDescriptor::One).unwrap();
        assert!((c.c0 - 1.0).abs() <= 1e-8, "normalized mass C₀ = {:.12}", c.c0);
    }

    #[test]
    fn free_formula_reduces_to_c0_at_zero_and_c1_in_slope() {
        let c = InitialConstants { c0: 0.7, c1: -0.4, weight: WeightDescriptor::One };
        for m_eff in [0.0, 0.5, 2.0] {
            assert_eq!(free_moment_formula(&c, m_eff, 0.0), 0.7, "F(0) at m_eff = {m_eff}");
            let h = 1e-4;
            let slope =
                (free_moment_formula(&c, m_eff, h) - free_moment_formula(&c, m_eff, -h)) / (2.0 * h);
            assert!(
                (slope - c.c1).abs() <= 1e-6,
                "Ḟ(0) = {slope:.8} vs C₁ = {} at m_eff = {m_eff}",
                c.c1
            );
        }
    }

    #[test]
    fn linear_run_moment_tracks_the_hyperbolic_formula() {
        // With the nonlinearity disabled the transformed-variable moment
        // obeys F̈ = M²F exactly (the Laplacian integrates away), so the
        // measured moment must match C₀cosh(Mt) + (C₁/M)sinh(Mt).
        let params = ModelParams {
            spacetime: Spacetime::DeSitter,
            n: 1,
            mu: 1.0,
            lambda: 1.0,
            p: 3.0,
            beta: 0.0,
            gamma_kind: GammaKind::Constant { c: 0.0 },
            form: EquationForm::UForm,
        };
        let grid = Grid1D::line(-8.0, 8.0, 801).unwrap();
        let field = Field::from_fn(grid, 0.0, bump(0.1, 2.0)).unwrap();
        let traj = simulate(&params, &field, &vec![0.0; grid.len], 2.0, 0.015, &SimOptions::default()).unwrap();
        let c = initial_constants(&traj, &WeightDescriptor::One).unwrap();
        let m = moments(&traj, &WeightDescriptor::One).unwrap();
        let m_eff = params.curved_mass();
        let last = m.times.len() - 1;
        let want = free_moment_formula(&c, m_eff, m.times[last]);
        let rel = ((m.f[last] - want) / want).abs();
        assert!(
            rel <= 1e-3,
            "moment at t = {:.2}: measured {:.8} vs formula {want:.8} (rel {rel:.2e})",
            m.times[last],
            m.f[last]
        );
    }

    // ── energy ──

    #[test]
    fn zero_field_has_zero_energy() {
        let params = ModelParams::desitter_phi(3, 1.0, 1.0, 3.0);
        let grid = Grid1D::radial(4.0, 101).unwrap();
        let field = Field::new(grid, vec![0.0; grid.len], 0.3).unwrap();
        let e = energy(&field, &vec![0.0; grid.len], &params).unwrap();
        assert_eq!(e, 0.0);
    }

    #[test]
    fn constant_vacuum_energy_density_matches_the_lagrangian_value() {
        // For φ ≡ μ/√λ at rest: the friction-shifted kinetic term
        // ½(n/2)²φ² cancels against the n²/4 part of the mass term,
        // leaving −½μ²φ² + (λ/4)φ⁴ = −μ⁴/(4λ) times e^{nt}.
        let params = ModelParams::desitter_phi(3, 1.2, 0.7, 3.0);
        let a = params.vacuum_amplitude();
        let grid = Grid1D::radial(5.0, 501).unwrap();
        let t = 0.7;
        let field = Field::from_fn(grid, t, |r| if r <= 2.0 { a } else { 0.0 }).unwrap();
        let density = energy_density(&field, &vec![0.0; grid.len], &params).unwrap();
        let mu4 = params.mu.powi(4);
        let want = (params.n as f64 * t).exp() * (-mu4 / (4.0 * params.lambda));
        // Interior nodes well away from the clip edge at r = 2.
        for i in 10..150 {
            assert!(
                (density[i] - want).abs() <= 1e-8 * want.abs(),
                "density at r = {:.3}: {:.12} vs {want:.12}",
                grid.coord(i),
                density[i]
            );
        }
    }

    #[test]
    fn energy_rejects_regimes_outside_its_identity() {
        let grid = Grid1D::line(-4.0, 4.0, 101).unwrap();
        let field = Field::new(grid, vec![0.0; grid.len], 0.0).unwrap();
        let v = vec![0.0; grid.len];
        let flat = ModelParams::minkowski_local(1, 1.0, 1.0, 3.0);
        assert!(energy(&field, &v, &flat).is_err(), "flat background has no e^{{nt}} energy");
        let u_form = ModelParams::desitter_u(1, 1.0, 1.0, 3.0);
        assert!(energy(&field, &v, &u_form).is_err(), "transformed variable is outside the identity");
        let mut nonlocal = ModelParams::desitter_phi(1, 1.0, 1.0, 3.0);
        nonlocal.beta = 1.0;
        assert!(energy(&field, &v, &nonlocal).is_err(), "non-local coupling breaks the identity");
    }

    #[test]
    fn dissipation_identity_converges_at_second_order() {
        let params = ModelParams::desitter_phi(3, 1.0, 1.0, 3.0);
        let worst_gap = |n_pts: usize, dt: f64| -> f64 {
            let grid = Grid1D::radial(6.0, n_pts).unwrap();
            let b = bump(0.05, 2.0);
            let field = Field::from_fn(grid, 0.0, |r| b(r)).unwrap();
            let traj = simulate(&params, &field, &vec![0.0; grid.len], 1.0, dt, &SimOptions::default()).unwrap();
            let d = energy_dissipation(&traj).unwrap();
            d.de_dt
                .iter()
                .zip(&d.rhs)
                .map(|(l, r)| (l - r).abs())
                .fold(0.0f64, f64::max)
        };
        let coarse = worst_gap(301, 0.016);
        let fine = worst_gap(601, 0.008);
        let slope = (coarse / fine).log2();
        assert!(
            slope >= 1.9,
            "dissipation-gap slope {slope:.2} below 1.9 (coarse {coarse:.3e}, fine {fine:.3e})"
        );
    }

    #[test]
    fn energy_is_nonincreasing_on_a_bump_run() {
        let params = ModelParams::desitter_phi(3, 1.0, 1.0, 3.0);
        let grid = Grid1D::radial(6.0, 481).unwrap();
        let b = bump(0.05, 2.0);
        let field = Field::from_fn(grid, 0.0, |r| b(r)).unwrap();
        let traj = simulate(&params, &field, &vec![0.0; grid.len], 3.0, 0.01, &SimOptions::default()).unwrap();
        let d = energy_dissipation(&traj).unwrap();
        let slack = 1e-8 * d.energy[0].abs().max(1.0);
        for j in 1..d.energy.len() {
            assert!(
                d.energy[j] <= d.energy[j - 1] + slack,
                "energy rose at t = {:.3}: {:.10} → {:.10}",
                traj.slices[j].time,
                d.energy[j - 1],
                d.energy[j]
            );
        }
    }

    // ── signedness fit ──

    #[test]
    fn negative_bump_fits_within_the_hoelder_bound() {
        let params = ModelParams::minkowski_local(1, 1.0, 1.0, 3.0);
        let grid = Grid1D::line(-5.0, 5.0, 401).unwrap();
        let b = bump(0.5, 2.0);
        let field = Field::from_fn(grid, 1.0, |x| -b(x)).unwrap();
        let mut traj = still_trajectory(params, field.clone(), vec![0.0; grid.len]);
        let mut second = field.clone();
        second.time = 2.0;
        traj.slices.push(second);
        traj.velocities.push(vec![0.0; grid.len]);
        let m = moments(&traj, &WeightDescriptor::One).unwrap();
        let fit = fit_signedness(&m, 1.0, 0.0, 0.0, (0.5, 2.5)).unwrap();
        assert_eq!(fit.verdict, SignednessVerdict::Satisfiable);
        // Hölder: |∫φ|^p ≤ measure^{p−1}·∫|φ|^p with measure = support
        // length (4 here, padded by a cell for the quadrature edges).
        let measure = 4.0 + grid.spacing;
        assert!(
            fit.c <= measure.powf(params.p - 1.0),
            "fitted C = {:.6} exceeds the Hölder bound {:.6}",
            fit.c,
            measure.powf(params.p - 1.0)
        );
        assert!(fit.c > 0.0);
    }

    #[test]
    fn zero_moment_series_fits_with_zero_constant() {
        let params = ModelParams::minkowski_local(1, 1.0, 1.0, 3.0);
        let grid = Grid1D::line(-5.0, 5.0, 101).unwrap();
        let field = Field::new(grid, vec![0.0; grid.len], 1.0).unwrap();
        let traj = still_trajectory(params, field, vec![0.0; grid.len]);
        let m = moments(&traj, &WeightDescriptor::One).unwrap();
        let fit = fit_signedness(&m, 1.0, 0.0, 0.0, (0.5, 1.5)).unwrap();
        assert_eq!(fit.verdict, SignednessVerdict::Satisfiable);
        assert_eq!(fit.c, 0.0);
        assert_eq!(fit.indeterminate, 1);
    }

    #[test]
    fn positive_self_interaction_with_positive_sigma_is_violated() {
        let params = ModelParams::minkowski_local(1, 1.0, 1.0, 3.0);
        let grid = Grid1D::line(-5.0, 5.0, 201).unwrap();
        let field = Field::from_fn(grid, 1.0, bump(0.5, 2.0)).unwrap();
        let traj = still_trajectory(params, field, vec![0.0; grid.len]);
        let m = moments(&traj, &WeightDescriptor::One).unwrap();
        let fit = fit_signedness(&m, 1.0, 0.0, 0.0, (0.5, 1.5)).unwrap();
        assert_eq!(fit.verdict, SignednessVerdict::Violated);
        assert_eq!(fit.violation_time, Some(1.0));
        // The mirrored orientation is satisfiable on the same data.
        let flipped = fit_signedness(&m, -1.0, 0.0, 0.0, (0.5, 1.5)).unwrap();
        assert_eq!(flipped.verdict, SignednessVerdict::Satisfiable);
    }

    #[test]
    fn fit_verdict_and_constant_are_scale_invariant() {
        let params = ModelParams::minkowski_local(1, 1.0, 1.0, 3.0);
        let grid = Grid1D::line(-5.0, 5.0, 401).unwrap();
        let b = bump(0.5, 2.0);
        let base = Field::from_fn(grid, 1.0, |x| -b(x)).unwrap();
        let base_traj = still_trajectory(params, base.clone(), vec![0.0; grid.len]);
        let base_fit = fit_signedness(
            &moments(&base_traj, &WeightDescriptor::One).unwrap(),
            1.0,
            0.1,
            -0.5,
            (0.5, 1.5),
        )
        .unwrap();
        for c in [0.1f64, 10.0] {
            let scaled =
                Field::new(grid, base.values.iter().map(|v| c * v).collect(), 1.0).unwrap();
            let traj = still_trajectory(params, scaled, vec![0.0; grid.len]);
            let fit = fit_signedness(
                &moments(&traj, &WeightDescriptor::One).unwrap(),
                1.0,
                0.1,
                -0.5,
                (0.5, 1.5),
            )
            .unwrap();
            assert_eq!(fit.verdict, base_fit.verdict, "verdict changed under φ → {c}φ");
            assert!(
                (fit.c - base_fit.c).abs() <= 1e-10 * base_fit.c,
                "C changed under rescaling: {:.14} vs {:.14}",
                fit.c,
                base_fit.c
            );
        }
    }

    #[test]
    fn hoelder_inequality_holds_on_every_slice_of_a_compact_run() {
        let params = ModelParams::minkowski_local(1, 1.0, 1.0, 3.0);
        let grid = Grid1D::line(-10.0, 10.0, 401).unwrap();
        let b = bump(0.3, 2.0);
        let field = Field::from_fn(grid, 0.0, |x| b(x) - 0.5 * b(x + 0.7)).unwrap();
        let traj = simulate(&params, &field, &vec![0.0; grid.len], 2.0, 0.04, &SimOptions::default()).unwrap();
        let m = moments(&traj, &WeightDescriptor::One).unwrap();
        for (j, slice) in traj.slices.iter().enumerate() {
            let measure = integrate_samples(&grid, |i| if slice.values[i].abs() > 1e-10 { 1.0 } else { 0.0 });
            let abs_p = integrate_samples(&grid, |i| slice.values[i].abs().powf(params.p));
            let lhs = m.f[j].abs().powf(params.p);
            let rhs = measure.powf(params.p - 1.0) * abs_p;
            assert!(
                lhs <= rhs * (1.0 + 1e-8),
                "Hölder violated at t = {:.2}: |F|^p = {lhs:.6e} vs bound {rhs:.6e}",
                slice.time
            );
        }
    }
}
