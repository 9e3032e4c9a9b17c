//! scratch probe (deleted before commit)
use bubble_lab::criteria::{check_hypotheses, detect_bubbles, MEffReading, TheoremFamily};
use bubble_lab::eigen::{Branch, Eigenmode};
use bubble_lab::functionals::{moments, WeightDescriptor};
use bubble_lab::solver::*;
use bubble_lab::Result;

fn main() -> Result<()> {
    let params = ModelParams::desitter_phi(3, 1.0, 1.0, 3.0);
    let grid = Grid1D::radial(16.0, 641)?;
    for (bulk, wb, kick) in [(0.15, 9.0, 2.5), (0.2, 9.0, 3.5), (0.15, 16.0, 2.5), (0.2, 16.0, 3.0)] {
        let field = Field::from_fn(grid, 0.0, |r| bulk * (-(r * r) / wb).exp())?;
        let velocity: Vec<f64> = grid.coords().map(|r| -kick * (-(r * r) / 2.0).exp()).collect();
        let traj = simulate(&params, &field, &velocity, 3.0, 0.02, &SimOptions { store_every: 15, ..SimOptions::default() })?;
        let mode = Eigenmode::new(0, 0, 1, Branch::Cos, 3.0)?;
        let weight = WeightDescriptor::Mode { mode };
        let m = moments(&traj, &weight)?;
        print!("bulk={bulk}/{wb} kick={kick}: Sψ = ");
        for (t, s) in m.times.iter().zip(&m.s) {
            print!("({t:.1},{s:+.2}) ");
        }
        let rep = check_hypotheses(&traj, &weight, TheoremFamily::DeSitterBallWeighted, 1.0, 0.6, MEffReading::Sqrt)?;
        println!("\n  → init {:+.2} ({}), sign {}, overall {:?}, bubbles {}",
            rep.initial_condition.value, rep.initial_condition.passed,
            rep.sign_condition.passed, rep.overall, detect_bubbles(&traj).len());
    }
    Ok(())
}
