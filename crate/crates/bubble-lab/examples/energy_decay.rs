//! The energy identity on the expanding background: monotone decay,
//! and the discrete dissipation balance that certifies the stepper.
//!
//! For the physical field on the expanding background with a constant
//! local coupling, the weighted energy
//!
//! `E(t) = e^{nt} ∫ (φ_t²/2 + e^{−2t}|∇φ|²/2 − μ²φ²/2 + λφ^{p+1}/(p+1)) dx`
//!
//! obeys an exact dissipation identity: its derivative equals
//! `−e^{nt} ∫ (e^{−2t}|∇φ|² + λ n(p−1)/(2(p+1)) |φ|^{p+1}) dx ≤ 0`
//! whenever the field sits in the wells' basin, so `E` can only fall.
//! Both sides are measurable on a stored trajectory, which gives a
//! two-sided check: the energy must be non-increasing slice to slice,
//! and the centered difference `ΔE/Δt` must match the dissipation
//! integral to the scheme's second-order accuracy.
//!
//! Note the energy is *not* bounded below by zero: relaxing toward the
//! true vacua makes the potential term negative and the `e^{nt}` volume
//! factor amplifies it, so `E(t) → −∞` — decay, not conservation, is
//! the invariant here.
//!
//! Run with `cargo run --example energy_decay`.

use bubble_lab::functionals::energy_dissipation;
use bubble_lab::solver::{simulate, Field, Grid1D, ModelParams, SimOptions};
use bubble_lab::Result;

fn main() -> Result<()> {
    let params = ModelParams::desitter_phi(3, 1.0, 1.0, 3.0);
    let grid = Grid1D::radial(6.0, 301)?;
    let field = Field::from_fn(grid, 0.0, |r| 0.4 * (-(r * r) / 0.72).exp())?;
    let velocity = vec![0.0; grid.len];
    let traj = simulate(&params, &field, &velocity, 4.0, 0.015, &SimOptions { store_every: 10, ..SimOptions::default() })?;

    let series = energy_dissipation(&traj)?;
    println!("expanding background, Gaussian bump (amplitude 0.4), t ∈ [0, 4]\n");
    println!(
        "{:>6} {:>16} | {:>14} {:>14} {:>10}",
        "t", "E(t)", "ΔE/Δt", "dissipation", "rel gap"
    );
    let stride = (series.t_mid.len() / 10).max(1);
    for j in (0..series.t_mid.len()).step_by(stride) {
        let rel = (series.de_dt[j] - series.rhs[j]).abs() / series.rhs[j].abs();
        println!(
            "{:>6.2} {:>16.9} | {:>14.6} {:>14.6} {:>10.2e}",
            series.t_mid[j], series.energy[j], series.de_dt[j], series.rhs[j], rel
        );
    }

    let max_rise = series
        .energy
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    println!("\nlargest energy increase between stored slices: {max_rise:.3e} (never positive)");
    println!("(E falls without a floor: the e^{{nt}} volume factor amplifies the negative");
    println!(" potential of the relaxing field — decay, not conservation, is the invariant)");

    // Refining dt and dx together shrinks the identity gap at second
    // order — the signature that both sides are discretized
    // consistently.  (Refining dt alone stalls on the fixed-dx floor.)
    println!("\nidentity gap under joint (dt, dx) refinement, t ∈ [0, 2]:");
    println!("{:>8} {:>8} {:>12} {:>8}", "dt", "dx", "worst gap", "ratio");
    let mut prev: Option<f64> = None;
    for k in 0..3 {
        let scale = 1 << k; // 1, 2, 4
        let fine = Grid1D::radial(6.0, 300 * scale + 1)?;
        let f = Field::from_fn(fine, 0.0, |r| 0.4 * (-(r * r) / 0.72).exp())?;
        let vel = vec![0.0; fine.len];
        let dt = 0.012 / scale as f64;
        let traj = simulate(&params, &f, &vel, 2.0, dt, &SimOptions::default())?;
        let s = energy_dissipation(&traj)?;
        let gap = s
            .de_dt
            .iter()
            .zip(&s.rhs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        match prev {
            None => println!("{dt:>8.4} {:>8.4} {gap:>12.3e} {:>8}", fine.spacing, "—"),
            Some(p) => println!("{dt:>8.4} {:>8.4} {gap:>12.3e} {:>8.2}", fine.spacing, p / gap),
        }
        prev = Some(gap);
    }
    println!("(ratio ≈ 4 per halving = second order)");
    Ok(())
}
