//! JSON experiment configuration: schema, defaults, validation, and
//! resolution into solver-ready inputs.
//!
//! A configuration document describes at most one simulation — model
//! parameters, named initial-data profiles, a uniform grid, and a time
//! window — plus a list of analyses to evaluate over the resulting
//! trajectory.  Two analysis kinds (`kernel_verify` and `lifespan`) are
//! trajectory-free, so a document containing only those may omit the
//! simulation fields entirely.
//!
//! Everything statically checkable is validated by
//! [`ExperimentConfig::resolve`] **before** any compute or file output:
//! unresolvable weights or modes, profiles incompatible with the grid
//! geometry, analyses referencing result variants the model cannot
//! satisfy, and malformed windows all surface as [`Error::Config`].
//! Dynamic preconditions of the stepper (the CFL bound and the
//! support-margin check) are deliberately left to the solver so that
//! they map to the distinct "precondition violated" exit code.
//!
//! The parsed document, with every defaulted parameter materialized, is
//! echoed verbatim into the run report for provenance.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::criteria::{self, MEffReading, TheoremFamily, DEFAULT_NEIGHBORHOOD_DELTA};
use crate::eigen::{Branch, Eigenmode};
use crate::error::{Error, Result};
use crate::functionals::{self, WeightDescriptor};
use crate::solver::{Field, Geometry, Grid1D, ModelParams};

// ─────────────────────────── defaults ───────────────────────────

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn default_delta() -> f64 {
    DEFAULT_NEIGHBORHOOD_DELTA
}

fn default_store_every() -> usize {
    1
}

fn default_branch() -> Branch {
    Branch::Cos
}

// ─────────────────────────── document schema ───────────────────────────

/// Top-level configuration document (JSON).
///
/// The four simulation fields are jointly optional: either all of
/// `model`, `initial`, `grid`, `time` are present (a simulation runs),
/// or none are (only trajectory-free analyses may appear).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Physical and structural model parameters.
    #[serde(default)]
    pub model: Option<ModelParams>,
    /// Initial field and velocity profiles at `t = 0`.
    #[serde(default)]
    pub initial: Option<InitialSpec>,
    /// Spatial grid extent and spacing.
    #[serde(default)]
    pub grid: Option<GridSpec>,
    /// Time window and step.
    #[serde(default)]
    pub time: Option<TimeSpec>,
    /// Analyses to evaluate, in order.
    #[serde(default)]
    pub analyses: Vec<AnalysisSpec>,
    /// Output directory for artifacts (default `out`; a CLI `--out`
    /// flag overrides it).
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

/// Initial data: a field profile plus an optional velocity profile of
/// the same named family (`null`/absent means identically zero
/// velocity).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    /// Field profile at `t = 0`.
    pub field: ProfileSpec,
    /// Velocity profile at `t = 0`; absent for resting data.
    #[serde(default)]
    pub velocity: Option<ProfileSpec>,
}

/// Grid extent: the segment `[−L, L]` in dimension 1, the radial range
/// `[0, L]` in dimension 3.  `dx` must divide the extent to rounding
/// accuracy.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Half-width (line) or radius (radial ball), `> 0`.
    #[serde(alias = "L")]
    pub l: f64,
    /// Grid spacing, `> 0`.
    pub dx: f64,
}

impl GridSpec {
    /// Build the concrete grid for spatial dimension `n`.
    pub fn build(&self, n: u32) -> Result<Grid1D> {
        if !(self.l > 0.0) || !(self.dx > 0.0) {
            return Err(Error::Config(format!(
                "grid needs L > 0 and dx > 0, got L = {}, dx = {}",
                self.l, self.dx
            )));
        }
        let span = match n {
            1 => 2.0 * self.l,
            3 => self.l,
            _ => {
                return Err(Error::Config(format!(
                    "spatial dimension must be 1 or 3, got {n}"
                )))
            }
        };
        let steps = span / self.dx;
        let rounded = steps.round();
        if (steps - rounded).abs() > 1e-9 * steps.max(1.0) {
            return Err(Error::Config(format!(
                "dx = {} does not divide the grid extent {} (fractional cell count {})",
                self.dx, span, steps
            )));
        }
        let len = rounded as usize + 1;
        match n {
            1 => Grid1D::line(-self.l, self.l, len),
            _ => Grid1D::radial(self.l, len),
        }
    }
}

/// Time window `[0, t_end]` with fixed step `dt`; `store_every` thins
/// the stored slices (the final slice is always stored).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    /// Final time, `> 0`.
    pub t_end: f64,
    /// Time step, `> 0` and within the stability bound of the grid.
    pub dt: f64,
    /// Store every k-th step (default 1 = store all).
    #[serde(default = "default_store_every")]
    pub store_every: usize,
}

// ─────────────────────────── named profiles ───────────────────────────

/// Eigenmode coordinates; the eigenvalue is always recomputed from
/// them, never taken from the document.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    /// Angular degree `n ≥ 0` (0 for spherically symmetric modes).
    pub n: u32,
    /// Azimuthal order `0 ≤ j ≤ n` (default 0).
    #[serde(default)]
    pub j: u32,
    /// Radial rank `k ≥ 1`.
    pub k: u32,
    /// Azimuthal branch (default `cos`).
    #[serde(default = "default_branch")]
    pub branch: Branch,
    /// Ball radius `R̃ > 0`.
    pub r_tilde: f64,
}

impl ModeSpec {
    /// Build the eigenmode, computing its eigenvalue.
    pub fn resolve(&self) -> Result<Eigenmode> {
        Eigenmode::new(self.n, self.j, self.k, self.branch, self.r_tilde)
            .map_err(|e| Error::Config(format!("unresolvable mode: {e}")))
    }
}

/// A named initial-data profile.
///
/// All profiles are functions of the grid coordinate (`x` on a line,
/// `r` on a radial grid):
///
/// * `gaussian_bump` — `A·exp(−(x−center)²/(2·width²))`;
/// * `tanh_kink` — the cubic-well wall `(μ²/λ)^{1/(p−1)}·tanh((μ/√2)(x−x₀))`
///   built from the model's `(μ, λ, p)`; on a radial grid with `x₀ > 0`
///   this is a wall at radius `x₀` separating the two vacua;
/// * `eigenmode_profile` — `A·j₀(ρr/R̃)` inside the ball, zero outside
///   (radial grids and spherically symmetric modes only);
/// * `constant_clipped` — `value` for `|x| ≤ radius`, zero outside
///   (sharp edge; mind the jump when evolving).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "profile")]
pub enum ProfileSpec {
    /// Gaussian of standard deviation `width` centered at `center`.
    GaussianBump {
        /// Peak value.
        amplitude: f64,
        /// Center coordinate.
        center: f64,
        /// Standard deviation, `> 0`.
        width: f64,
    },
    /// The static cubic kink profile of the model's twin well.
    TanhKink {
        /// Wall position.
        x0: f64,
    },
    /// A Dirichlet-ball eigenfunction profile.
    EigenmodeProfile {
        /// Mode coordinates.
        mode: ModeSpec,
        /// Multiplier on the unit-peak radial profile.
        amplitude: f64,
    },
    /// A sharply clipped constant.
    ConstantClipped {
        /// Plateau value.
        value: f64,
        /// Clip radius, `> 0`.
        radius: f64,
    },
}

impl ProfileSpec {
    /// Short name for error messages.
    fn name(&self) -> &'static str {
        match self {
            ProfileSpec::GaussianBump { .. } => "gaussian_bump",
            ProfileSpec::TanhKink { .. } => "tanh_kink",
            ProfileSpec::EigenmodeProfile { .. } => "eigenmode_profile",
            ProfileSpec::ConstantClipped { .. } => "constant_clipped",
        }
    }

    /// Sample the profile on a grid, validating its parameters and its
    /// compatibility with the grid geometry.
    pub fn sample(&self, params: &ModelParams, grid: &Grid1D) -> Result<Vec<f64>> {
        match self {
            ProfileSpec::GaussianBump { amplitude, center, width } => {
                if !(*width > 0.0) {
                    return Err(Error::Config(format!(
                        "gaussian_bump needs width > 0, got {width}"
                    )));
                }
                Ok(grid
                    .coords()
                    .map(|x| {
                        let z = (x - center) / width;
                        amplitude * (-0.5 * z * z).exp()
                    })
                    .collect())
            }
            ProfileSpec::TanhKink { x0 } => {
                let a = params.vacuum_amplitude();
                let kappa = params.mu / std::f64::consts::SQRT_2;
                Ok(grid.coords().map(|x| a * (kappa * (x - x0)).tanh()).collect())
            }
            ProfileSpec::EigenmodeProfile { mode, amplitude } => {
                if grid.geometry != Geometry::Radial3d {
                    return Err(Error::Config(
                        "eigenmode_profile is a ball function; the grid must be radial (n = 3)"
                            .into(),
                    ));
                }
                if mode.n != 0 {
                    return Err(Error::Config(format!(
                        "eigenmode_profile needs a spherically symmetric mode (degree 0), got degree {}",
                        mode.n
                    )));
                }
                let mode = mode.resolve()?;
                grid.coords()
                    .map(|r| {
                        if r <= mode.r_tilde {
                            Ok(amplitude * crate::eigen::radial_profile(&mode, r)?)
                        } else {
                            Ok(0.0)
                        }
                    })
                    .collect()
            }
            ProfileSpec::ConstantClipped { value, radius } => {
                if !(*radius > 0.0) {
                    return Err(Error::Config(format!(
                        "constant_clipped needs radius > 0, got {radius}"
                    )));
                }
                Ok(grid
                    .coords()
                    .map(|x| if x.abs() <= *radius { *value } else { 0.0 })
                    .collect())
            }
        }
    }
}

// ─────────────────────────── weights ───────────────────────────

/// Weight selector for moment-based analyses.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum WeightSpec {
    /// `ψ ≡ 1` (the default).
    #[default]
    One,
    /// A ball-eigenfunction weight.
    Mode {
        /// Mode coordinates.
        mode: ModeSpec,
    },
}

impl WeightSpec {
    /// Resolve into a concrete weight descriptor.
    pub fn resolve(&self) -> Result<WeightDescriptor> {
        Ok(match self {
            WeightSpec::One => WeightDescriptor::One,
            WeightSpec::Mode { mode } => WeightDescriptor::Mode { mode: mode.resolve()? },
        })
    }
}

// ─────────────────────────── analyses ───────────────────────────

/// Life-span analysis parameters (trajectory-free: the comparison ODE
/// is integrated from the given data, not from a simulation).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum LifespanSpec {
    /// Power-law kernel `F̈ = δ₀·t^{−weight_b}·F^p`.
    PowerKernel {
        /// Nonlinearity order `p > 1`.
        p: f64,
        /// Kernel strength `δ₀ > 0`.
        delta0: f64,
        /// Kernel decay power `b`.
        weight_b: f64,
        /// Initial value `F(t₀) > 0`.
        f0: f64,
        /// Initial slope `Ḟ(t₀)`.
        fdot0: f64,
        /// Start time `t₀ > 0`.
        t0: f64,
    },
    /// Exponential kernel `F̈ = γ(t)·A(t)^{−p}·F^p` with `A = e^{at}`
    /// and `γ = c·e^{gt}·t^m`.
    ExpKernel {
        /// Growth rate `a` of the comparison amplitude.
        growth_rate: f64,
        /// Kernel prefactor `c ≥ 0`.
        kernel_coeff: f64,
        /// Kernel exponential rate `g`.
        kernel_rate: f64,
        /// Kernel power `m` of `t`.
        kernel_power: f64,
        /// Nonlinearity order `p > 1`.
        p: f64,
        /// Initial amplitude ratio `c₀ > 0` (data start on `c₀·A`).
        c0: f64,
        /// Integration window `0 < t_lo < t_hi`.
        window: (f64, f64),
    },
}

/// One requested analysis.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "analysis")]
pub enum AnalysisSpec {
    /// Weighted moment series `F(t)`, `S(t)` (columns in
    /// `moments.csv`) and the measured initial constants.
    Moments {
        /// Weight `ψ` (default `ψ ≡ 1`).
        #[serde(default)]
        weight: WeightSpec,
    },
    /// Discrete energy per slice (an `E` column in `moments.csv`) and
    /// its monotonicity summary.  Applies to the physical field on the
    /// expanding background with a constant local coupling.
    Energy,
    /// Fit of the minimal constant closing the asymptotic signedness
    /// inequality `|F(t)|^p ≤ −σ·C·e^{at}t^b·S(t)` over a window.
    Signedness {
        /// Orientation `σ = ±1`.
        sigma: f64,
        /// Exponential rate of the time weight.
        a: f64,
        /// Power of the time weight.
        b: f64,
        /// Window `[t_lo, t_hi]`, `0 < t_lo ≤ t_hi`.
        window: (f64, f64),
        /// Weight `ψ` (default `ψ ≡ 1`).
        #[serde(default)]
        weight: WeightSpec,
    },
    /// Full hypothesis evaluation of one result variant.
    Hypotheses {
        /// Result variant to evaluate.
        family: TheoremFamily,
        /// Orientation `σ = ±1`.
        sigma: f64,
        /// Neighborhood cutoff `δ > 0` for the sign condition.
        #[serde(default = "default_delta")]
        delta: f64,
        /// Weight `ψ` (default `ψ ≡ 1`).
        #[serde(default)]
        weight: WeightSpec,
        /// Effective-mass reading (default `sqrt`).
        #[serde(default)]
        reading: MEffReading,
    },
    /// Interior zero ("bubble wall") detection on every slice.
    Bubbles,
    /// Run the kernel-identity verification suite and embed its table.
    KernelVerify,
    /// Comparison-ODE life-span bound.
    Lifespan {
        /// Mode and parameters.
        #[serde(flatten)]
        spec: LifespanSpec,
    },
}

impl AnalysisSpec {
    /// Short name for error messages and failure entries.
    pub fn name(&self) -> &'static str {
        match self {
            AnalysisSpec::Moments { .. } => "moments",
            AnalysisSpec::Energy => "energy",
            AnalysisSpec::Signedness { .. } => "signedness",
            AnalysisSpec::Hypotheses { .. } => "hypotheses",
            AnalysisSpec::Bubbles => "bubbles",
            AnalysisSpec::KernelVerify => "kernel_verify",
            AnalysisSpec::Lifespan { .. } => "lifespan",
        }
    }

    /// Whether this analysis consumes the simulated trajectory.
    pub fn needs_trajectory(&self) -> bool {
        !matches!(self, AnalysisSpec::KernelVerify | AnalysisSpec::Lifespan { .. })
    }

    /// Start of the time window this analysis draws data from
    /// (trajectory-based analyses only).  A run that diverges before
    /// every requested window start produces the "divergence before any
    /// analysis window" exit code.
    pub fn window_start(&self) -> Option<f64> {
        match self {
            AnalysisSpec::Moments { .. } | AnalysisSpec::Energy | AnalysisSpec::Bubbles => Some(0.0),
            AnalysisSpec::Signedness { window, .. } => Some(window.0),
            AnalysisSpec::Hypotheses { delta, .. } => Some(*delta),
            AnalysisSpec::KernelVerify | AnalysisSpec::Lifespan { .. } => None,
        }
    }

    /// Static validation against the resolved simulation (if any).
    fn validate(&self, sim: Option<&SimSetup>) -> Result<()> {
        if self.needs_trajectory() && sim.is_none() {
            return Err(Error::Config(format!(
                "analysis `{}` needs a simulated trajectory; add model/initial/grid/time",
                self.name()
            )));
        }
        let check_weight = |w: &WeightSpec| -> Result<()> {
            let desc = w.resolve()?;
            if let Some(s) = sim {
                desc.sample(&s.initial.grid)
                    .map(|_| ())
                    .map_err(|e| Error::Config(format!("analysis `{}`: {e}", self.name())))?;
            }
            Ok(())
        };
        match self {
            AnalysisSpec::Moments { weight } => check_weight(weight),
            AnalysisSpec::Energy => {
                let s = sim.expect("checked above");
                functionals::energy(&s.initial, &s.velocity, &s.params)
                    .map(|_| ())
                    .map_err(|e| Error::Config(format!("analysis `energy`: {e}")))
            }
            AnalysisSpec::Signedness { sigma, window, weight, .. } => {
                if *sigma != 1.0 && *sigma != -1.0 {
                    return Err(Error::Config(format!(
                        "analysis `signedness`: orientation σ must be ±1, got {sigma}"
                    )));
                }
                if !(window.0 > 0.0) || !(window.1 >= window.0) {
                    return Err(Error::Config(format!(
                        "analysis `signedness`: need a window 0 < t_lo ≤ t_hi, got [{}, {}]",
                        window.0, window.1
                    )));
                }
                let t_end = sim.expect("checked above").t_end;
                if window.0 > t_end {
                    return Err(Error::Config(format!(
                        "analysis `signedness`: window starts at {} but the run ends at {t_end}",
                        window.0
                    )));
                }
                check_weight(weight)
            }
            AnalysisSpec::Hypotheses { family, sigma, delta, weight, .. } => {
                if *sigma != 1.0 && *sigma != -1.0 {
                    return Err(Error::Config(format!(
                        "analysis `hypotheses`: orientation σ must be ±1, got {sigma}"
                    )));
                }
                let s = sim.expect("checked above");
                if !(*delta > 0.0) || *delta >= s.t_end {
                    return Err(Error::Config(format!(
                        "analysis `hypotheses`: need 0 < δ < t_end, got δ = {delta}, t_end = {}",
                        s.t_end
                    )));
                }
                check_weight(weight)?;
                let desc = weight.resolve()?;
                criteria::validate_family(*family, &s.params, &desc)
                    .map_err(|e| Error::Config(format!("analysis `hypotheses`: {e}")))
            }
            AnalysisSpec::Bubbles => Ok(()),
            AnalysisSpec::KernelVerify => Ok(()),
            AnalysisSpec::Lifespan { spec } => match spec {
                LifespanSpec::PowerKernel { p, delta0, f0, t0, .. } => {
                    if !(*p > 1.0) || !(*delta0 > 0.0) || !(*f0 > 0.0) || !(*t0 > 0.0) {
                        return Err(Error::Config(format!(
                            "analysis `lifespan` (power kernel): need p > 1, δ₀ > 0, F0 > 0, t0 > 0 \
                             (got p = {p}, δ₀ = {delta0}, F0 = {f0}, t0 = {t0})"
                        )));
                    }
                    Ok(())
                }
                LifespanSpec::ExpKernel { p, c0, kernel_coeff, window, .. } => {
                    if !(*p > 1.0) || !(*c0 > 0.0) || *kernel_coeff < 0.0 {
                        return Err(Error::Config(format!(
                            "analysis `lifespan` (exponential kernel): need p > 1, c₀ > 0, c ≥ 0 \
                             (got p = {p}, c₀ = {c0}, c = {kernel_coeff})"
                        )));
                    }
                    if !(window.0 > 0.0) || !(window.1 > window.0) {
                        return Err(Error::Config(format!(
                            "analysis `lifespan` (exponential kernel): need a window 0 < t_lo < t_hi, \
                             got [{}, {}]",
                            window.0, window.1
                        )));
                    }
                    Ok(())
                }
            },
        }
    }
}

// ─────────────────────────── resolution ───────────────────────────

/// Inputs of a configured simulation, ready for the stepper.
#[derive(Debug, Clone)]
pub struct SimSetup {
    /// Validated model parameters.
    pub params: ModelParams,
    /// Initial field at `t = 0`.
    pub initial: Field,
    /// Initial velocity samples.
    pub velocity: Vec<f64>,
    /// Final time.
    pub t_end: f64,
    /// Time step.
    pub dt: f64,
    /// Slice storage stride.
    pub store_every: usize,
}

/// A validated configuration with its simulation inputs built.
#[derive(Debug, Clone)]
pub struct ResolvedExperiment {
    /// The parsed document (defaults materialized) for the provenance
    /// echo.
    pub config: ExperimentConfig,
    /// Simulation inputs, when the document configures one.
    pub sim: Option<SimSetup>,
}

impl ExperimentConfig {
    /// Read and parse a configuration document.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Validate the document and build solver inputs.
    ///
    /// # Errors
    /// [`Error::Config`] for structurally invalid documents: partial
    /// simulation fields, trajectory analyses without a simulation,
    /// unresolvable weights/modes, profiles incompatible with the grid,
    /// result variants the model cannot satisfy, or malformed windows.
    /// The CFL bound and the support margin are left to the solver.
    pub fn resolve(&self) -> Result<ResolvedExperiment> {
        let present = [
            ("model", self.model.is_some()),
            ("initial", self.initial.is_some()),
            ("grid", self.grid.is_some()),
            ("time", self.time.is_some()),
        ];
        let any = present.iter().any(|(_, p)| *p);
        let all = present.iter().all(|(_, p)| *p);
        if any && !all {
            let missing: Vec<&str> =
                present.iter().filter(|(_, p)| !p).map(|(n, _)| *n).collect();
            return Err(Error::Config(format!(
                "a simulation needs model, initial, grid and time together; missing: {}",
                missing.join(", ")
            )));
        }

        let sim = if all {
            let params = self.model.expect("present");
            params.validate()?;
            let grid_spec = self.grid.expect("present");
            let time = self.time.expect("present");
            if !(time.t_end > 0.0) || !(time.dt > 0.0) {
                return Err(Error::Config(format!(
                    "need t_end > 0 and dt > 0, got t_end = {}, dt = {}",
                    time.t_end, time.dt
                )));
            }
            if time.store_every == 0 {
                return Err(Error::Config("store_every must be ≥ 1".into()));
            }
            let grid = grid_spec.build(params.n)?;
            let initial = self.initial.as_ref().expect("present");
            let values = initial
                .field
                .sample(&params, &grid)
                .map_err(|e| Error::Config(format!("initial field ({}): {e}", initial.field.name())))?;
            let velocity = match &initial.velocity {
                Some(p) => p
                    .sample(&params, &grid)
                    .map_err(|e| Error::Config(format!("initial velocity ({}): {e}", p.name())))?,
                None => vec![0.0; grid.len],
            };
            let field = Field::new(grid, values, 0.0)?;
            Some(SimSetup {
                params,
                initial: field,
                velocity,
                t_end: time.t_end,
                dt: time.dt,
                store_every: time.store_every,
            })
        } else {
            None
        };

        for analysis in &self.analyses {
            analysis.validate(sim.as_ref())?;
        }

        Ok(ResolvedExperiment { config: self.clone(), sim })
    }
}

// ─────────────────────────── tests ───────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Spacetime;

    fn full_doc() -> &'static str {
        r#"{
            "model": {
                "spacetime": "de_sitter", "n": 3, "mu": 1.0, "lambda": 1.0,
                "p": 3.0, "beta": 0.0, "gamma_kind": {"kind": "constant", "c": 1.0},
                "form": "phi_form"
            },
            "initial": {
                "field": {"profile": "gaussian_bump", "amplitude": 0.2, "center": 0.0, "width": 1.5}
            },
            "grid": {"L": 8.0, "dx": 0.05},
            "time": {"t_end": 2.0, "dt": 0.04},
            "analyses": [
                {"analysis": "moments"},
                {"analysis": "energy"},
                {"analysis": "bubbles"},
                {"analysis": "hypotheses", "family": "de_sitter_local", "sigma": 1.0}
            ],
            "output": "runs/demo"
        }"#
    }

    #[test]
    fn full_document_parses_and_resolves() {
        let cfg: ExperimentConfig = serde_json::from_str(full_doc()).unwrap();
        let resolved = cfg.resolve().unwrap();
        let sim = resolved.sim.expect("simulation configured");
        assert_eq!(sim.initial.grid.len, 161, "radius 8 at dx 0.05");
        assert_eq!(sim.initial.grid.geometry, Geometry::Radial3d);
        assert_eq!(sim.store_every, 1, "store_every defaults to 1");
        assert!(sim.velocity.iter().all(|v| *v == 0.0), "absent velocity means rest");
        assert_eq!(cfg.analyses.len(), 4);
    }

    #[test]
    fn defaults_are_materialized_in_the_echo() {
        let cfg: ExperimentConfig = serde_json::from_str(full_doc()).unwrap();
        let echo = serde_json::to_value(&cfg).unwrap();
        assert_eq!(echo["output"], "runs/demo");
        // The defaulted hypothesis δ shows up explicitly.
        assert!((echo["analyses"][3]["delta"].as_f64().unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(echo["analyses"][3]["reading"], "sqrt");
        assert_eq!(echo["analyses"][3]["weight"]["kind"], "one");
        assert_eq!(echo["time"]["store_every"], 1);
    }

    #[test]
    fn line_grid_spans_the_symmetric_segment() {
        let grid = GridSpec { l: 5.0, dx: 0.1 }.build(1).unwrap();
        assert_eq!(grid.len, 101);
        assert!((grid.coord(0) + 5.0).abs() < 1e-12);
        assert!((grid.coord(100) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn non_dividing_spacing_is_rejected() {
        let err = GridSpec { l: 1.0, dx: 0.3 }.build(3).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "got {err}");
    }

    #[test]
    fn partial_simulation_fields_are_rejected_with_the_missing_names() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"grid": {"L": 4.0, "dx": 0.1}}"#).unwrap();
        let err = cfg.resolve().unwrap_err();
        let text = err.to_string();
        assert!(text.contains("model") && text.contains("time"), "got: {text}");
    }

    #[test]
    fn trajectory_analyses_without_a_simulation_are_rejected() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"analyses": [{"analysis": "bubbles"}]}"#).unwrap();
        let err = cfg.resolve().unwrap_err();
        assert!(err.to_string().contains("bubbles"), "got: {err}");
    }

    #[test]
    fn verification_only_document_needs_no_simulation() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"analyses": [{"analysis": "kernel_verify"}]}"#).unwrap();
        let resolved = cfg.resolve().unwrap();
        assert!(resolved.sim.is_none());
    }

    #[test]
    fn lifespan_documents_round_trip_in_both_modes() {
        let text = r#"{"analyses": [
            {"analysis": "lifespan", "mode": "power_kernel",
             "p": 3.0, "delta0": 1.0, "weight_b": 0.0, "f0": 1.0, "fdot0": 0.0, "t0": 1.0},
            {"analysis": "lifespan", "mode": "exp_kernel",
             "growth_rate": 1.0, "kernel_coeff": 1.0, "kernel_rate": 2.0, "kernel_power": 0.0,
             "p": 2.0, "c0": 1.0, "window": [0.5, 30.0]}
        ]}"#;
        let cfg: ExperimentConfig = serde_json::from_str(text).unwrap();
        cfg.resolve().unwrap();
        let echo = serde_json::to_value(&cfg).unwrap();
        assert_eq!(echo["analyses"][0]["mode"], "power_kernel");
        assert_eq!(echo["analyses"][1]["mode"], "exp_kernel");
        let back: ExperimentConfig = serde_json::from_value(echo).unwrap();
        assert_eq!(back.analyses.len(), 2);
    }

    #[test]
    fn tanh_kink_profile_matches_the_closed_form() {
        let params = ModelParams::minkowski_local(1, 1.0, 1.0, 3.0);
        let grid = Grid1D::line(-5.0, 5.0, 11).unwrap();
        let vals = ProfileSpec::TanhKink { x0 : 0.5 }.sample(&params, &grid).unwrap();
        for (i, v) in vals.iter().enumerate() {
            let x = grid.coord(i);
            let want = (1.0f64 / std::f64::consts::SQRT_2 * (x - 0.5)).tanh();
            assert!((v - want).abs() < 1e-14, "node {i}: {v} vs {want}");
        }
    }

    #[test]
    fn clipped_constant_has_a_sharp_edge() {
        let params = ModelParams::desitter_phi(3, 1.0, 1.0, 3.0);
        let grid = Grid1D::radial(4.0, 41).unwrap();
        let vals = ProfileSpec::ConstantClipped { value: 2.0, radius: 1.55 }
            .sample(&params, &grid)
            .unwrap();
        assert_eq!(vals[15], 2.0, "r = 1.5 is inside");
        assert_eq!(vals[16], 0.0, "r = 1.6 is outside");
    }

    #[test]
    fn eigenmode_profile_is_rejected_on_line_grids() {
        let params = ModelParams::minkowski_local(1, 1.0, 1.0, 3.0);
        let grid = Grid1D::line(-5.0, 5.0, 11).unwrap();
        let err = ProfileSpec::EigenmodeProfile {
            mode: ModeSpec { n: 0, j: 0, k: 1, branch: Branch::Cos, r_tilde: 1.0 },
            amplitude: 1.0,
        }
        .sample(&params, &grid)
        .unwrap_err();
        assert!(err.to_string().contains("radial"), "got: {err}");
    }

    #[test]
    fn eigenmode_profile_vanishes_outside_its_ball() {
        let params = ModelParams::desitter_phi(3, 1.0, 1.0, 3.0);
        let grid = Grid1D::radial(4.0, 81).unwrap();
        let vals = ProfileSpec::EigenmodeProfile {
            mode: ModeSpec { n: 0, j: 0, k: 1, branch: Branch::Cos, r_tilde: 2.0 },
            amplitude: 0.5,
        }
        .sample(&params, &grid)
        .unwrap();
        assert!((vals[0] - 0.5).abs() < 1e-12, "unit peak at the origin times amplitude");
        assert!(vals[41..].iter().all(|v| *v == 0.0), "zero beyond r̃ = 2");
    }

    #[test]
    fn mismatched_hypothesis_family_is_a_config_error() {
        let mut cfg: ExperimentConfig = serde_json::from_str(full_doc()).unwrap();
        // The document's model is the expanding background; a flat-space
        // family cannot apply.
        cfg.analyses = vec![AnalysisSpec::Hypotheses {
            family: TheoremFamily::MinkowskiLocal,
            sigma: 1.0,
            delta: 0.1,
            weight: WeightSpec::One,
            reading: MEffReading::Sqrt,
        }];
        let err = cfg.resolve().unwrap_err();
        assert!(matches!(err, Error::Config(_)), "got {err}");
        assert!(err.to_string().contains("flat background"), "got: {err}");
    }

    #[test]
    fn energy_analysis_outside_its_identity_is_a_config_error() {
        let mut cfg: ExperimentConfig = serde_json::from_str(full_doc()).unwrap();
        let mut model = cfg.model.unwrap();
        model.spacetime = Spacetime::Minkowski;
        model.n = 1;
        cfg.model = Some(model);
        cfg.grid = Some(GridSpec { l: 8.0, dx: 0.05 });
        cfg.analyses = vec![AnalysisSpec::Energy];
        let err = cfg.resolve().unwrap_err();
        assert!(matches!(err, Error::Config(_)), "got {err}");
    }

    #[test]
    fn cfl_violations_are_left_to_the_solver() {
        let mut cfg: ExperimentConfig = serde_json::from_str(full_doc()).unwrap();
        cfg.time = Some(TimeSpec { t_end: 2.0, dt: 0.2, store_every: 1 });
        // dt = 0.2 > dx = 0.05 violates the CFL bound, but resolution
        // succeeds: the stepper owns that precondition (and its exit code).
        cfg.resolve().unwrap();
    }

    #[test]
    fn unknown_top_level_keys_are_parse_errors() {
        let err = serde_json::from_str::<ExperimentConfig>(r#"{"modle": {}}"#).unwrap_err();
        assert!(err.to_string().contains("modle"), "got: {err}");
    }

    #[test]
    fn velocity_profile_of_the_named_family_is_sampled() {
        let text = r#"{
            "model": {
                "spacetime": "minkowski", "n": 1, "mu": 1.0, "lambda": 1.0,
                "p": 3.0, "beta": 0.0, "gamma_kind": {"kind": "constant", "c": 1.0},
                "form": "phi_form"
            },
            "initial": {
                "field": {"profile": "gaussian_bump", "amplitude": 0.0, "center": 0.0, "width": 1.0},
                "velocity": {"profile": "gaussian_bump", "amplitude": -0.3, "center": 1.0, "width": 0.7}
            },
            "grid": {"L": 6.0, "dx": 0.1},
            "time": {"t_end": 1.0, "dt": 0.05}
        }"#;
        let cfg: ExperimentConfig = serde_json::from_str(text).unwrap();
        let sim = cfg.resolve().unwrap().sim.unwrap();
        let i_peak = 70; // x = 1.0
        assert!((sim.velocity[i_peak] + 0.3).abs() < 1e-12);
        assert!(sim.initial.values.iter().all(|v| *v == 0.0));
    }
}
