//! Hypothesis evaluation and conclusion detection for the blow-up
//! results: initial-constant orientation checks, asymptotic sign
//! conditions, admissible-weight regions, sign-change ("bubble")
//! detection, and ordinary-differential-inequality life-span bounds.
//!
//! The results all share one mechanism.  With `F(t) = ∫ψφ dx` and
//! `S(t) = ∫ψ·sign(φ)|φ|^p dx`, compactly supported solutions obey
//! `F̈ = M_eff²·F − λ·S` (the Laplacian integrates away), so when the
//! data point `F` into orientation `σ` (the initial-constant condition
//! `σ·(M_eff·C₀ + C₁) > 0` in the growing variable) *and* the
//! self-interaction keeps the helping sign (`σ·S(t) ≤ 0` past a small
//! neighborhood of zero), the moment grows at least like `e^{M_eff·t}`
//! and a comparison argument forces one of: a sign change of `φ`, a
//! numerical divergence, or failure of every admissible time-weighted
//! signedness bound.  This module evaluates each ingredient on concrete
//! trajectories and integrates the comparison equations themselves.

use crate::error::{Error, Result};
use crate::functionals::{
    free_moment_formula, initial_constants, moments, InitialConstants, MomentSeries,
    WeightDescriptor, DENOM_FLOOR,
};
use crate::ode::{rkf45_until, StopOutcome};
use crate::solver::{EquationForm, GammaKind, ModelParams, Spacetime, Trajectory};
use serde::{Deserialize, Serialize};

/// Default lower time cutoff for the asymptotic sign condition: slices
/// before this time are exempt ("a sufficiently small neighborhood of
/// zero" made explicit).
pub const DEFAULT_NEIGHBORHOOD_DELTA: f64 = 0.1;

/// Fraction of the run used as the terminal window when the net growth
/// rate vanishes (the resonant / zero-effective-mass cases, where the
/// sign condition is only required "near infinity").
pub const TERMINAL_WINDOW_FRACTION: f64 = 0.25;

/// Comparison-ODE amplitude past which the integration is declared
/// numerically divergent.  For pole-forming comparison solutions the
/// crossing time sits within `O(1/threshold)` of the pole itself, while
/// keeping the adaptive steps comfortably above their floor.
pub const COMPARISON_DIVERGENCE: f64 = 1e8;

/// Node-level amplitude below which a field value is treated as outside
/// the numerical support when flanking sign changes.
pub const BUBBLE_SUPPORT_THRESHOLD: f64 = 1e-10;

// ─────────────────────────── report types ───────────────────────────

/// The seven result variants the laboratory can line up against a run.
///
/// Naming: spacetime first, then the structural twist — `Nonlocal`
/// carries the charge-coupled nonlinearity, `GammaWeighted` a general
/// exponential coefficient in the transformed variable, `Local` /
/// `BallWeighted` the physical-field cubic statements with `ψ ≡ 1` /
/// an eigenfunction weight, and `Resonant` the eigenvalue coincidence
/// `μ² = −ν` that zeroes the net growth rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremFamily {
    /// Flat background, local nonlinearity, unweighted moment.
    MinkowskiLocal,
    /// Flat background, local nonlinearity, ball-eigenfunction weight.
    MinkowskiWeighted,
    /// Expanding background, charge-coupled (non-local) nonlinearity,
    /// transformed variable.
    DeSitterNonlocal,
    /// Expanding background, exponential coefficient family, transformed
    /// variable.
    DeSitterGammaWeighted,
    /// Expanding background, physical field, cubic, unweighted moment.
    DeSitterLocal,
    /// Expanding background, physical field, cubic, eigenfunction weight.
    DeSitterBallWeighted,
    /// [`TheoremFamily::DeSitterBallWeighted`] at the resonance
    /// `μ² = −ν` (zero net growth rate).
    DeSitterResonant,
}

/// Convention for combining the background mass with an eigenvalue
/// shift `ν ≤ 0` into the effective mass.
///
/// The two readings differ only for the transformed-variable families
/// on the expanding background; the physical-field statements fix the
/// quadrature form `√(M² + ν)` outright (their closed-form threshold
/// `√(9 + 4(μ² + ν)) − 3` equals `2√(M² + ν) − 3`), and the flat
/// background uses `√(μ² + ν)` unambiguously.  Reports always echo the
/// reading used; it is never chosen silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MEffReading {
    /// `M_eff = √(M² + ν)` — the reading consistent with the
    /// closed-form physical-field thresholds (default).
    #[default]
    Sqrt,
    /// `M_eff = M + ν` — the alternative linear reading.
    Sum,
}

/// One scalar condition with its measured value and verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionCheck {
    /// What the condition asserts.
    pub description: String,
    /// The measured quantity the verdict was taken on.
    pub value: f64,
    /// Whether the condition holds.
    pub passed: bool,
}

/// Per-slice record of the asymptotic sign condition `σ·S(t) ≤ 0`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SignConditionReport {
    /// Window over which the condition was required.
    pub window: (f64, f64),
    /// The neighborhood-of-zero cutoff used (ignored when `terminal`).
    pub delta: f64,
    /// True when the zero-net-rate terminal window was used instead of
    /// `t ≥ delta`.
    pub terminal: bool,
    /// Slice times inside the window.
    pub times: Vec<f64>,
    /// Per-slice verdicts (`σ·S ≤ 0` up to roundoff floor).
    pub satisfied: Vec<bool>,
    /// True when every slice in the window satisfies the condition.
    pub passed: bool,
}

/// The admissible region of time-weight parameters `(a, b)` for
/// `ν(t) = e^{at}·t^b`, together with the structural hypotheses of the
/// chosen result variant.
///
/// Writing `q = p(β+1) − 1` for the effective nonlinearity order and
/// `k` for the exponential decay rate of the transformed-variable
/// coefficient, the region is: `a(β+1) < M_eff·q − k`, or equality with
/// `b(β+1) < −2`; when the net rate `M_eff·q − k` vanishes the region
/// degenerates to `a = 0`, `b(β+1) ≤ 1 + p(β+1)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightThresholds {
    /// Effective mass under the chosen reading.
    pub m_eff: f64,
    /// Eigenvalue shift contributed by the weight (0 for `ψ ≡ 1`).
    pub nu: f64,
    /// Exponential decay rate `k` of the transformed-variable
    /// nonlinearity coefficient.
    pub decay_rate: f64,
    /// Charge-coupling exponent β (0 for the local variants).
    pub beta: f64,
    /// Nonlinearity exponent p.
    pub p: f64,
    /// The net rate bound `M_eff·(p(β+1)−1) − k` on `a(β+1)`.
    pub rate_bound: f64,
    /// True when the net rate bound vanishes (resonant regime).
    pub zero_rate: bool,
    /// Bound on `b(β+1)` in the zero-rate regime.
    pub b_scaled_max: Option<f64>,
    /// Structural hypotheses of the variant (coefficient positivity,
    /// real effective mass, coupling range, resonance coincidence, …).
    pub structural: Vec<ConditionCheck>,
}

impl WeightThresholds {
    /// Whether the weight `ν(t) = e^{at}t^b` lies in the admissible
    /// region.
    pub fn admissible(&self, a: f64, b: f64) -> bool {
        let s = self.beta + 1.0;
        let tol = 1e-12 * self.rate_bound.abs().max(1.0);
        if self.zero_rate {
            return a == 0.0 && b * s <= 1.0 + self.p * s;
        }
        if self.rate_bound <= 0.0 {
            return false;
        }
        if a * s < self.rate_bound - tol {
            true
        } else if (a * s - self.rate_bound).abs() <= tol {
            b * s < -2.0
        } else {
            false
        }
    }

    /// A small set of representative admissible `(a, b)` pairs spanning
    /// the region: the origin, the interior midpoint, the strict-edge /
    /// zero-rate boundary.  Empty when the region is empty.
    pub fn probe_weights(&self) -> Vec<(f64, f64)> {
        let s = self.beta + 1.0;
        let candidates: Vec<(f64, f64)> = if self.zero_rate {
            let b_max = (1.0 + self.p * s) / s;
            vec![(0.0, 0.0), (0.0, b_max), (0.0, 0.5 * b_max)]
        } else {
            let edge = self.rate_bound / s;
            vec![(0.0, 0.0), (0.5 * edge, 0.0), (edge, -3.0 / s), (0.0, 2.0)]
        };
        candidates.into_iter().filter(|&(a, b)| self.admissible(a, b)).collect()
    }
}

/// Overall verdict of a hypothesis evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverallVerdict {
    /// Every component condition holds on its required window.
    HypothesesMet,
    /// At least one component condition fails.
    NotMet,
    /// The functionals are too small to sign (e.g. zero data).
    Indeterminate,
}

/// Full evaluation of one result variant's hypotheses on a trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// Which variant was evaluated.
    pub family: TheoremFamily,
    /// Orientation σ = ±1.
    pub sigma: f64,
    /// Effective-mass reading used (always echoed).
    pub m_eff_reading: MEffReading,
    /// Measured initial constants (in the stored variable).
    pub constants: InitialConstants,
    /// The orientation condition `σ·(M_eff·C₀ + C₁) > 0` evaluated in
    /// the growing (transformed) variable.
    pub initial_condition: ConditionCheck,
    /// The asymptotic sign condition `σ·S(t) ≤ 0`.
    pub sign_condition: SignConditionReport,
    /// Admissible-weight region and structural hypotheses.
    pub thresholds: WeightThresholds,
    /// Combined verdict.
    pub overall: OverallVerdict,
}

// ─────────────────────────── hypothesis check ───────────────────────────

fn weight_nu(weight: &WeightDescriptor) -> f64 {
    match weight {
        WeightDescriptor::One => 0.0,
        WeightDescriptor::Mode { mode } => mode.nu,
    }
}

fn require(cond: bool, family: TheoremFamily, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::mismatch(
            "hypotheses",
            format!("{family:?} requires {what}"),
        ))
    }
}

/// Validate that trajectory/weight structurally fit the chosen variant
/// (spacetime, variable, coupling, weight kind, and for the cubic
/// physical-field variants the fixed `n = p = 3`).
pub(crate) fn validate_family(
    family: TheoremFamily,
    params: &ModelParams,
    weight: &WeightDescriptor,
) -> Result<()> {
    use TheoremFamily::*;
    let is_mode = matches!(weight, WeightDescriptor::Mode { .. });
    let cubic = (params.p - 3.0).abs() < 1e-12 && params.n == 3;
    match family {
        MinkowskiLocal => {
            require(params.spacetime == Spacetime::Minkowski, family, "a flat background")?;
            require(params.beta == 0.0, family, "a local nonlinearity (β = 0)")?;
            require(!is_mode, family, "the unweighted moment (ψ ≡ 1)")?;
        }
        MinkowskiWeighted => {
            require(params.spacetime == Spacetime::Minkowski, family, "a flat background")?;
            require(params.beta == 0.0, family, "a local nonlinearity (β = 0)")?;
            require(is_mode, family, "an eigenfunction weight")?;
        }
        DeSitterNonlocal => {
            require(params.spacetime == Spacetime::DeSitter, family, "an expanding background")?;
            require(params.form == EquationForm::UForm, family, "the transformed variable")?;
        }
        DeSitterGammaWeighted => {
            require(params.spacetime == Spacetime::DeSitter, family, "an expanding background")?;
            require(params.form == EquationForm::UForm, family, "the transformed variable")?;
            require(params.beta == 0.0, family, "a local nonlinearity (β = 0)")?;
        }
        DeSitterLocal | DeSitterBallWeighted | DeSitterResonant => {
            require(params.spacetime == Spacetime::DeSitter, family, "an expanding background")?;
            require(params.form == EquationForm::PhiForm, family, "the physical field")?;
            require(params.beta == 0.0, family, "a local nonlinearity (β = 0)")?;
            require(cubic, family, "the cubic case n = 3, p = 3")?;
            require(
                matches!(params.gamma_kind, GammaKind::Constant { .. }),
                family,
                "a constant nonlinear coefficient",
            )?;
            if family == DeSitterLocal {
                require(!is_mode, family, "the unweighted moment (ψ ≡ 1)")?;
            } else {
                require(is_mode, family, "an eigenfunction weight")?;
            }
        }
    }
    Ok(())
}

/// Evaluate all hypotheses of `family` on a trajectory: the orientation
/// condition on the initial constants, the asymptotic sign condition on
/// `S(t)` (slices `t ≥ neighborhood_delta`, or the terminal
/// [`TERMINAL_WINDOW_FRACTION`] of the run in the zero-net-rate
/// regime), and the structural parameter hypotheses.  The admissible
/// `(a, b)` region is described in the report; evaluate
/// [`WeightThresholds::admissible`] to query it.
///
/// # Errors
/// [`Error::Mismatch`] when trajectory/weight don't structurally fit
/// the variant; [`Error::Config`] for `σ ∉ {±1}`, a non-positive
/// `neighborhood_delta`, or a run too short to contain any slice of the
/// required sign window.
pub fn check_hypotheses(
    traj: &Trajectory,
    weight: &WeightDescriptor,
    family: TheoremFamily,
    sigma: f64,
    neighborhood_delta: f64,
    reading: MEffReading,
) -> Result<HypothesisReport> {
    if sigma != 1.0 && sigma != -1.0 {
        return Err(Error::Config(format!("orientation σ must be ±1, got {sigma}")));
    }
    if !(neighborhood_delta > 0.0) {
        return Err(Error::Config(format!(
            "neighborhood_delta must be positive, got {neighborhood_delta}"
        )));
    }
    let params = &traj.params;
    validate_family(family, params, weight)?;

    let nu = weight_nu(weight);
    let mut structural: Vec<ConditionCheck> = Vec::new();

    // Effective mass.  Flat background: √(μ² + ν) (unambiguous).
    // Expanding background: the chosen reading of (M, ν).
    let minkowski = params.spacetime == Spacetime::Minkowski;
    let base = if minkowski { params.mu } else { params.curved_mass() };
    let m_eff = match (minkowski, reading) {
        (true, _) | (false, MEffReading::Sqrt) => {
            let sq = base * base + nu;
            structural.push(ConditionCheck {
                description: "squared effective mass is nonnegative (weight eigenvalue does not \
                              overwhelm the mass)"
                    .to_string(),
                value: sq,
                passed: sq >= -1e-12,
            });
            sq.max(0.0).sqrt()
        }
        (false, MEffReading::Sum) => {
            let lin = base + nu;
            structural.push(ConditionCheck {
                description: "effective mass under the linear reading is nonnegative".to_string(),
                value: lin,
                passed: lin >= -1e-12,
            });
            lin.max(0.0)
        }
    };

    // Transformed-variable decay rate of the nonlinearity coefficient.
    let decay_rate = match (params.spacetime, params.form) {
        (Spacetime::Minkowski, _) => 0.0,
        (Spacetime::DeSitter, EquationForm::PhiForm) => {
            params.n as f64 * (params.p - 1.0) / 2.0
        }
        (Spacetime::DeSitter, EquationForm::UForm) => params.gamma_kind.decay_rate(),
    };

    let coeff = params.gamma_kind.coefficient();
    structural.push(ConditionCheck {
        description: "nonlinear coupling is strictly positive".to_string(),
        value: coeff,
        passed: coeff > 0.0,
    });

    if family == TheoremFamily::DeSitterNonlocal {
        let threshold = 1.0 / params.p - 1.0;
        structural.push(ConditionCheck {
            description: "charge-coupling exponent exceeds 1/p − 1 (the comparison argument \
                          needs effective order p(β+1) > 1)"
                .to_string(),
            value: params.beta - threshold,
            passed: params.beta > threshold,
        });
        // The exponential descriptor family is monotone whenever its
        // coefficient keeps one sign; record the rate for the report.
        structural.push(ConditionCheck {
            description: "nonlinearity coefficient is monotone (single-signed exponential \
                          descriptor)"
                .to_string(),
            value: params.gamma_kind.decay_rate(),
            passed: coeff >= 0.0,
        });
    }
    if family == TheoremFamily::DeSitterResonant {
        let coincidence = params.mu * params.mu + nu;
        structural.push(ConditionCheck {
            description: "mass squared matches the negated weight eigenvalue (resonance)"
                .to_string(),
            value: coincidence,
            passed: coincidence.abs() <= 1e-9 * nu.abs().max(1.0),
        });
    }

    let beta = params.beta;
    let p = params.p;
    let s = beta + 1.0;
    let rate_bound = m_eff * (p * s - 1.0) - decay_rate;
    let zero_rate = rate_bound.abs() <= 1e-9 * decay_rate.max(m_eff).max(1.0);

    let thresholds = WeightThresholds {
        m_eff,
        nu,
        decay_rate,
        beta,
        p,
        rate_bound,
        zero_rate,
        b_scaled_max: if zero_rate { Some(1.0 + p * s) } else { None },
        structural,
    };

    // Initial constants, lifted to the growing variable: on the
    // expanding background the physical field's velocity constant picks
    // up the (n/2)C₀ shift from the exponential change of variable.
    let constants = initial_constants(traj, weight)?;
    let (c0, mut c1) = (constants.c0, constants.c1);
    if params.spacetime == Spacetime::DeSitter && params.form == EquationForm::PhiForm {
        c1 += params.n as f64 / 2.0 * c0;
    }
    let value = m_eff * c0 + c1;
    let initial_condition = ConditionCheck {
        description: format!(
            "orientation condition σ·(M_eff·C₀ + C₁) > 0 in the growing variable (σ = {sigma})"
        ),
        value,
        passed: sigma * value > 0.0,
    };

    // Sign condition window.
    let series = moments(traj, weight)?;
    let t0 = series.times[0];
    let t_end = *series.times.last().unwrap();
    let window = if zero_rate {
        (t_end - TERMINAL_WINDOW_FRACTION * (t_end - t0), t_end)
    } else {
        (t0.max(neighborhood_delta), t_end)
    };
    let mut times = Vec::new();
    let mut satisfied = Vec::new();
    for (j, &t) in series.times.iter().enumerate() {
        if t < window.0 || t > window.1 {
            continue;
        }
        times.push(t);
        satisfied.push(sigma * series.s[j] <= DENOM_FLOOR);
    }
    if times.is_empty() {
        return Err(Error::Config(format!(
            "no slices in the sign-condition window [{:.3}, {:.3}] (run spans [{t0:.3}, {t_end:.3}])",
            window.0, window.1
        )));
    }
    let sign_condition = SignConditionReport {
        window,
        delta: neighborhood_delta,
        terminal: zero_rate,
        passed: satisfied.iter().all(|&s| s),
        times,
        satisfied,
    };

    let scale = 1.0 + c0.abs() + c1.abs();
    let overall = if value.abs() <= 1e-14 * scale {
        OverallVerdict::Indeterminate
    } else if initial_condition.passed
        && sign_condition.passed
        && thresholds.structural.iter().all(|c| c.passed)
    {
        OverallVerdict::HypothesesMet
    } else {
        OverallVerdict::NotMet
    };

    Ok(HypothesisReport {
        family,
        sigma,
        m_eff_reading: reading,
        constants,
        initial_condition,
        sign_condition,
        thresholds,
        overall,
    })
}

// ─────────────────────────── bubbles ───────────────────────────

/// Sign changes of the field on one slice: the wall radii/locations of
/// a forming bubble.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BubbleEvent {
    /// Slice time.
    pub time: f64,
    /// Zero-crossing coordinates, interpolated linearly between nodes
    /// and each strictly interior to the numerical support.
    pub locations: Vec<f64>,
}

/// Scan every stored slice for sign changes of the field strictly
/// interior to the numerical support: a crossing counts only when the
/// amplitude exceeds [`BUBBLE_SUPPORT_THRESHOLD`] somewhere on *both*
/// flanks, which discards spurious zeros in the sub-threshold debris
/// beyond the support edge.  Returns one event per slice that has at
/// least one crossing; the event times are the oscillation sequence
/// `{t_k}`.
pub fn detect_bubbles(traj: &Trajectory) -> Vec<BubbleEvent> {
    let grid = traj.slices[0].grid;
    let mut events = Vec::new();
    for slice in &traj.slices {
        let w = &slice.values;
        let n = w.len();
        // prefix_max[i] = max |w| over 0..=i, suffix_max[i] over i..n.
        let mut prefix_max = vec![0.0f64; n];
        let mut suffix_max = vec![0.0f64; n];
        let mut acc = 0.0f64;
        for i in 0..n {
            acc = acc.max(w[i].abs());
            prefix_max[i] = acc;
        }
        acc = 0.0;
        for i in (0..n).rev() {
            acc = acc.max(w[i].abs());
            suffix_max[i] = acc;
        }
        let mut locations = Vec::new();
        for i in 0..n - 1 {
            let (a, b) = (w[i], w[i + 1]);
            if a * b < 0.0 {
                // Strict sign change between nodes i and i+1.
                if prefix_max[i] > BUBBLE_SUPPORT_THRESHOLD
                    && suffix_max[i + 1] > BUBBLE_SUPPORT_THRESHOLD
                {
                    locations.push(grid.coord(i) + grid.spacing * a / (a - b));
                }
            } else if a == 0.0 && i > 0 && w[i - 1] * b < 0.0 {
                // Exact zero at node i with opposite signs around it.
                if prefix_max[i - 1] > BUBBLE_SUPPORT_THRESHOLD
                    && suffix_max[i + 1] > BUBBLE_SUPPORT_THRESHOLD
                {
                    locations.push(grid.coord(i));
                }
            }
        }
        if !locations.is_empty() {
            events.push(BubbleEvent { time: slice.time, locations });
        }
    }
    events
}

// ─────────────────────────── life-span bounds ───────────────────────────

/// Which comparison inequality a [`LifespanEstimate`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LifespanMode {
    /// Power-law kernel `F̈ = δ₀·t^{−b}·F^p` (Kato's lemma regime).
    PowerKernel,
    /// Exponential kernel `F̈ = γ(t)·A(t)^{−p}·F^p` with exponential
    /// descriptors.
    ExpKernel,
}

/// Outcome of a comparison-ODE life-span check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LifespanEstimate {
    /// Which comparison inequality was used.
    pub mode: LifespanMode,
    /// Nonlinearity order of the comparison equation.
    pub p: f64,
    /// Human-readable echo of the kernel/growth descriptors.
    pub kernel: String,
    /// The lemma's side conditions with verdicts.
    pub conditions: Vec<ConditionCheck>,
    /// True when every side condition holds.
    pub admissible: bool,
    /// Time at which the comparison solution crossed
    /// [`COMPARISON_DIVERGENCE`]; present only when `admissible` and the
    /// integration actually diverged.  This witnesses growth numerically
    /// — it is an upper-bound *estimate*, not a proof.
    pub blowup_time_upper: Option<f64>,
}

/// Integrate `F̈ = rhs(t, F)` from `(t0, f0, fdot0)` until the state
/// crosses [`COMPARISON_DIVERGENCE`] or `t_horizon` is reached.
fn second_order_divergence_time(
    rhs: impl Fn(f64, f64) -> f64,
    t0: f64,
    f0: f64,
    fdot0: f64,
    t_horizon: f64,
) -> Result<Option<f64>> {
    let (_, outcome) = rkf45_until(
        |t, y| vec![y[1], rhs(t, y[0])],
        t0,
        &[f0, fdot0],
        t_horizon,
        1e-10,
        1e-10,
        |_, y| y[0].abs() > COMPARISON_DIVERGENCE,
    )?;
    Ok(match outcome {
        StopOutcome::Triggered { time } => Some(time),
        StopOutcome::HorizonReached => None,
    })
}

/// Horizon for the power-kernel comparison integration.
const POWER_KERNEL_HORIZON: f64 = 1e3;

/// Life-span bound from the power-law comparison inequality
/// `F̈ ≥ δ₀·t^{−weight_b}·F^p` (Kato's lemma): admissible when the
/// kernel decays no faster than `t^{−(1+p)}` (`weight_b ≤ 1 + p`), in
/// which case the comparison ODE is integrated from
/// `(t0, F0, Ḟ0)` and the divergence time reported.
///
/// # Errors
/// [`Error::Config`] for `p ≤ 1`, `δ₀ ≤ 0`, `F0 ≤ 0`, or `t0 ≤ 0`.
pub fn kato_lifespan(
    p: f64,
    delta0: f64,
    weight_b: f64,
    f0: f64,
    fdot0: f64,
    t0: f64,
) -> Result<LifespanEstimate> {
    if !(p > 1.0) || !(delta0 > 0.0) || !(f0 > 0.0) || !(t0 > 0.0) {
        return Err(Error::Config(format!(
            "power-kernel lifespan needs p > 1, δ₀ > 0, F0 > 0, t0 > 0 \
             (got p = {p}, δ₀ = {delta0}, F0 = {f0}, t0 = {t0})"
        )));
    }
    let margin = 1.0 + p - weight_b;
    let conditions = vec![ConditionCheck {
        description: "kernel decays no faster than t^{−(1+p)} (weight_b ≤ 1 + p)".to_string(),
        value: margin,
        passed: margin >= 0.0,
    }];
    let admissible = conditions.iter().all(|c| c.passed);
    let blowup_time_upper = if admissible {
        second_order_divergence_time(
            |t, f| delta0 * t.powf(-weight_b) * f.abs().powf(p - 1.0) * f,
            t0,
            f0,
            fdot0,
            t0 + POWER_KERNEL_HORIZON,
        )?
    } else {
        None
    };
    Ok(LifespanEstimate {
        mode: LifespanMode::PowerKernel,
        p,
        kernel: format!("δ₀·t^−b with δ₀ = {delta0}, b = {weight_b}"),
        conditions,
        admissible,
        blowup_time_upper,
    })
}

/// Pure-exponential growth descriptor `A(t) = e^{rate·t}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthDescriptor {
    /// Exponential rate.
    pub rate: f64,
}

/// Kernel descriptor `γ(t) = coeff · e^{rate·t} · t^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelDescriptor {
    /// Nonnegative prefactor.
    pub coeff: f64,
    /// Exponential rate.
    pub rate: f64,
    /// Power of `t`.
    pub power: f64,
}

/// The exact global solution `F(t) = c_F·e^{dt/(p−1)}` of
/// `F̈ = e^{−dt}·F^p`, with `c_F = (d/(p−1))^{2/(p−1)}` — the boundary
/// case showing that exponential kernels decaying at the critical rate
/// admit global solutions, so the domination condition checked by
/// [`exp_kernel_lifespan`] cannot be weakened.
///
/// # Errors
/// [`Error::Config`] for `p ≤ 1` or `d ≤ 0`.
pub fn exp_kernel_global_solution(d: f64, p: f64, t: f64) -> Result<f64> {
    if !(p > 1.0) || !(d > 0.0) {
        return Err(Error::Config(format!(
            "the global boundary solution needs p > 1 and d > 0, got p = {p}, d = {d}"
        )));
    }
    let a = d / (p - 1.0);
    Ok(a.powf(2.0 / (p - 1.0)) * (a * t).exp())
}

/// Life-span check for the exponential-kernel inequality
/// `F̈ = γ(t)·A(t)^{−p}·F^p` with `A = e^{at}` and
/// `γ = c·e^{gt}·t^m`.  Three side conditions are checked symbolically
/// on the descriptor exponents:
///
/// 1. the comparison amplitude grows unboundedly (`a > 0`);
/// 2. the ratio `γ·A^{−p}` is non-increasing (`g < p·a`, or equality
///    with `m ≤ 0`);
/// 3. the kernel dominates the amplitude with a logarithmic margin:
///    `γ(t) ≥ c'·A(t)·(ln A(t))^{2+ε}` for some `ε, c' > 0`, i.e.
///    `g > a`, or `g = a` with `m > 2`.
///
/// When all hold, the ODE is integrated from `F = c₀·A` (value and
/// slope) over the window and the divergence time reported.  Condition
/// 3 is sharp: [`exp_kernel_global_solution`] solves the equation
/// globally exactly when it fails with `g = a`, `m = 0`.
///
/// # Errors
/// [`Error::Config`] for `p ≤ 1`, `c₀ ≤ 0`, a negative kernel
/// prefactor, or a window without `0 < t_lo < t_hi`.
pub fn exp_kernel_lifespan(
    growth: &GrowthDescriptor,
    kernel: &KernelDescriptor,
    p: f64,
    c0: f64,
    window: (f64, f64),
) -> Result<LifespanEstimate> {
    if !(p > 1.0) || !(c0 > 0.0) {
        return Err(Error::Config(format!(
            "exponential-kernel lifespan needs p > 1 and c₀ > 0, got p = {p}, c₀ = {c0}"
        )));
    }
    if kernel.coeff < 0.0 {
        return Err(Error::Config(format!(
            "kernel prefactor must be nonnegative, got {}",
            kernel.coeff
        )));
    }
    if !(window.0 > 0.0) || !(window.1 > window.0) {
        return Err(Error::Config(format!(
            "need a window 0 < t_lo < t_hi, got [{}, {}]",
            window.0, window.1
        )));
    }
    let (a, g, m) = (growth.rate, kernel.rate, kernel.power);
    let ratio_rate = g - p * a;
    let dominates = kernel.coeff > 0.0 && (g > a || (g == a && m > 2.0));
    let conditions = vec![
        ConditionCheck {
            description: "comparison amplitude grows unboundedly (growth rate > 0)".to_string(),
            value: a,
            passed: a > 0.0,
        },
        ConditionCheck {
            description: "kernel-to-amplitude-power ratio γ·A^{−p} is non-increasing".to_string(),
            value: ratio_rate,
            passed: ratio_rate < 0.0 || (ratio_rate == 0.0 && m <= 0.0),
        },
        ConditionCheck {
            description: "kernel dominates the amplitude with a logarithmic margin \
                          (γ ≳ A·(ln A)^{2+ε})"
                .to_string(),
            value: g - a,
            passed: dominates,
        },
    ];
    let admissible = conditions.iter().all(|c| c.passed);
    let blowup_time_upper = if admissible {
        let t0 = window.0;
        let a0 = (a * t0).exp();
        second_order_divergence_time(
            |t, f| kernel.coeff * (g * t).exp() * t.powf(m) * (-p * a * t).exp()
                * f.abs().powf(p - 1.0) * f,
            t0,
            c0 * a0,
            c0 * a * a0,
            window.1,
        )?
    } else {
        None
    };
    Ok(LifespanEstimate {
        mode: LifespanMode::ExpKernel,
        p,
        kernel: format!(
            "γ = {}·e^{{{}t}}·t^{} against A = e^{{{}t}}",
            kernel.coeff, kernel.rate, kernel.power, growth.rate
        ),
        conditions,
        admissible,
        blowup_time_upper,
    })
}

// ─────────────────────────── moment dynamics cross-check ───────────────────────────

/// Predict the moment at slice `j` of a flat-background run from the
/// stored self-interaction series via the variation-of-constants
/// (Duhamel) formula
///
/// `F(t) = C₀·cosh(Mt) + (C₁/M)·sinh(Mt) − λ·∫₀ᵗ S(b)·sinh(M(t−b))/M db`
///
/// with the integral taken by trapezoid over the stored slices up to
/// `j`.  Agreement with the measured `F` at `O(dt²)` cross-checks the
/// moment identity `F̈ = M²F − λS` in integrated form.
///
/// # Errors
/// [`Error::Config`] when `j` is out of range.
pub fn duhamel_moment_prediction(
    constants: &InitialConstants,
    m_eff: f64,
    lambda: f64,
    series: &MomentSeries,
    j: usize,
) -> Result<f64> {
    if j >= series.times.len() {
        return Err(Error::Config(format!(
            "slice index {j} out of range for a series of {} slices",
            series.times.len()
        )));
    }
    let t = series.times[j];
    let kern = |tau: f64| if m_eff == 0.0 { tau } else { (m_eff * tau).sinh() / m_eff };
    let mut integral = 0.0;
    for k in 0..j {
        let (tk, tk1) = (series.times[k], series.times[k + 1]);
        let fk = series.s[k] * kern(t - tk);
        let fk1 = series.s[k + 1] * kern(t - tk1);
        integral += 0.5 * (fk + fk1) * (tk1 - tk);
    }
    Ok(free_moment_formula(constants, m_eff, t - series.times[0]) - lambda * integral)
}

// ─────────────────────────── tests ───────────────────────────
