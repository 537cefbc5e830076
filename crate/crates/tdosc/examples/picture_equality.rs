//! Same physics, two operator conventions: the invariant expansion evolves
//! the ladder pair and freezes the state; the Heisenberg expansion evolves
//! q and p over the frozen reference pair. Number-state correlators must
//! agree term by term, and both pairs must stay canonical.
//!
//!   cargo run --release --example picture_equality

use tdosc::mode_solver::{integrate, vacuum_init};
use tdosc::operator_algebra::{
    commutator_residual, correlators_from_expansions, heisenberg_quadratures, lvn_quadratures,
};
use tdosc::profiles::{CoefficientProfile, ReferenceParams};

fn main() -> tdosc::Result<()> {
    let hbar = 1.0;
    let profile = CoefficientProfile::quench([1.0, 0.0, 1.0], [1.0, 0.0, 4.0], 5.0, 1.0)?;
    let refp = ReferenceParams::from_profile(&profile, 0.0, hbar)?;
    let start = vacuum_init(&profile, &refp)?;
    let traj = integrate(&profile, &start, 10.0, 1e-3, 1000)?;

    let n = 2;
    println!("number state n = {n}, quench (1,0,1) -> (1,0,4)\n");
    println!("  t      <q^2> invariant     <q^2> Heisenberg    |diff|      [q,p]-ih (inv)   [q,p]-ih (heis)");
    let mut worst_diff: f64 = 0.0;
    let mut worst_comm: f64 = 0.0;
    for s in traj.samples() {
        let c = profile.eval(s.t)?;
        let (q_l, p_l) = lvn_quadratures(s, c.x, c.y, hbar);
        let (q_h, p_h) = heisenberg_quadratures(s, c.x, c.y, hbar);
        let inv = correlators_from_expansions(&q_l, &p_l, n, s.t)?;
        let heis = correlators_from_expansions(&q_h, &p_h, n, s.t)?;
        let diff = (inv.q2 - heis.q2).abs().max((inv.p2 - heis.p2).abs()).max((inv.cross - heis.cross).abs());
        let comm_inv = commutator_residual(&q_l, &p_l, hbar)?.norm();
        let comm_heis = commutator_residual(&q_h, &p_h, hbar)?.norm();
        println!(
            "{:5.1}    {:.12}     {:.12}     {:.2e}    {:.3e}        {:.3e}",
            s.t, inv.q2, heis.q2, diff, comm_inv, comm_heis
        );
        worst_diff = worst_diff.max(diff);
        worst_comm = worst_comm.max(comm_inv).max(comm_heis);
    }
    println!("\nworst picture disagreement:  {worst_diff:.3e}");
    println!("worst commutator residual:   {worst_comm:.3e}  (canonical pair in both pictures)");
    println!("\nwhy they agree: the pictures share the coefficient magnitudes |u|, |w| and");
    println!("differ only in which side carries the time dependence — operators (Heisenberg)");
    println!("or the ladder pair (invariant).");
    Ok(())
}
