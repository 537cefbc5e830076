//! The closed-form limit: with constant coefficients the mode function is a
//! pure phase, alpha(t) = e^{i w0 t}, beta = 0, and every number-state
//! correlator is frozen. A good first check that the machinery is wired up.
//!
//!   cargo run --release --example constant_oscillator

use tdosc::bogoliubov::{bogoliubov_coeffs, squeeze_params};
use tdosc::mode_solver::{analytic_mode, integrate, vacuum_init};
use tdosc::operator_algebra::correlators;
use tdosc::profiles::{CoefficientProfile, ReferenceParams};
use tdosc::C64;

fn main() -> tdosc::Result<()> {
    // H = p^2 + (pq + qp)/2 + q^2/2: a cross-term oscillator with w0 = 1.
    let (x0, y0, z0) = (2.0, 1.0, 1.0);
    let profile = CoefficientProfile::constant(x0, y0, z0)?;
    let refp = ReferenceParams::from_profile(&profile, 0.0, 1.0)?;
    println!("constant profile (X, Y, Z) = ({x0}, {y0}, {z0}), w0 = {}", refp.omega0);

    let start = vacuum_init(&profile, &refp)?;
    let traj = integrate(&profile, &start, 10.0, 1e-3, 1000)?;

    println!("\n  t      |u_num - u_exact|   |alpha - e^(i w0 t)|   |beta|          <q^2>_n=0");
    let mut worst_mode: f64 = 0.0;
    let mut worst_alpha: f64 = 0.0;
    let mut worst_beta: f64 = 0.0;
    for s in traj.samples() {
        let exact = analytic_mode(&refp, s.t);
        let pair = bogoliubov_coeffs(s, x0, y0, &refp)?;
        let phase = (C64::new(0.0, refp.omega0 * s.t)).exp();
        let mode_err = (s.u - exact.u).norm();
        let alpha_err = (pair.alpha - phase).norm();
        let c = correlators(s, x0, y0, 0, refp.hbar);
        println!(
            "{:5.1}    {:.3e}           {:.3e}              {:.3e}       {:.12}",
            s.t,
            mode_err,
            alpha_err,
            pair.beta.norm(),
            c.q2
        );
        worst_mode = worst_mode.max(mode_err);
        worst_alpha = worst_alpha.max(alpha_err);
        worst_beta = worst_beta.max(pair.beta.norm());
    }

    let last = traj.last();
    let triple = squeeze_params(&bogoliubov_coeffs(last, x0, y0, &refp)?)?;
    println!("\nmax |u - exact|      = {worst_mode:.3e}");
    println!("max |alpha - phase|  = {worst_alpha:.3e}");
    println!("max |beta|           = {worst_beta:.3e}  (no squeezing: r = {:.3e})", triple.r);
    println!("max Wronskian drift  = {:.3e}", traj.max_wronskian_residual());
    println!("\nthe evolution operator reduces to a phase rotation: theta(10) = {:.9} (w0 t mod 2pi = {:.9})",
        triple.theta,
        (refp.omega0 * 10.0) % (2.0 * std::f64::consts::PI));
    Ok(())
}
