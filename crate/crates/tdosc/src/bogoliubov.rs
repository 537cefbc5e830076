//! Bogoliubov coefficients relating the invariant ladder operators to the
//! reference ones, and the phase/squeeze decomposition of the evolution they
//! generate: a_L = alpha a + beta a†, alpha = e^{i theta} cosh r,
//! beta = e^{-i theta} e^{-i phi} sinh r.

use crate::error::{Error, Result};
use crate::mode_solver::ModeState;
use crate::profiles::ReferenceParams;
use crate::C64;

/// Unitarity residual above which a pair is treated as corrupted (signals
/// Wronskian drift upstream, since | |alpha|^2 - |beta|^2 - 1 | is an exact
/// invariant of the construction).
pub const UNITARITY_HARD_LIMIT: f64 = 1e-6;

/// (alpha, beta) at time t; | |alpha|^2 - |beta|^2 | = 1 within tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovPair {
    pub alpha: C64,
    pub beta: C64,
    pub t: f64,
}

/// Phase-rotation angle, squeeze magnitude, and squeeze phase; angles live in
/// (-pi, pi], r >= 0, and phi = 0 by convention when r = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeTriple {
    pub theta: f64,
    pub r: f64,
    pub phi: f64,
    pub t: f64,
}

/// Wrap an angle into (-pi, pi].
pub fn normalize_angle(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut a = a.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    a
}

/// | |alpha|^2 - |beta|^2 - 1 |.
pub fn unitarity_residual(pair: &BogoliubovPair) -> f64 {
    (pair.alpha.norm_sqr() - pair.beta.norm_sqr() - 1.0).abs()
}

/// Bogoliubov coefficients of the mode state against the reference basis:
/// with v = (u'* - Y u*)/X,
///   alpha = -i sqrt(X0/2w0) [ (i w0 + Y0) u*/X0 + v ]
///   beta  = -i sqrt(X0/2w0) [ (-i w0 + Y0) u*/X0 + v ].
/// Vacuum initialization at t0 gives exactly (1, 0).
pub fn bogoliubov_coeffs(state: &ModeState, x: f64, y: f64, refp: &ReferenceParams) -> Result<BogoliubovPair> {
    let pair = bogoliubov_coeffs_raw(state, x, y, refp);
    let residual = unitarity_residual(&pair);
    if residual > UNITARITY_HARD_LIMIT {
        return Err(Error::UnitarityViolation { t: state.t, residual, limit: UNITARITY_HARD_LIMIT });
    }
    Ok(pair)
}

/// As `bogoliubov_coeffs` but without the unitarity gate. Verification paths
/// use this to keep going on a broken trajectory and report the residual
/// instead of failing fast.
pub fn bogoliubov_coeffs_raw(state: &ModeState, x: f64, y: f64, refp: &ReferenceParams) -> BogoliubovPair {
    let i = C64::new(0.0, 1.0);
    let pre = -i * (refp.x0 / (2.0 * refp.omega0)).sqrt();
    let ustar = state.u.conj();
    let v = (state.u_dot.conj() - y * ustar) / x;
    BogoliubovPair {
        alpha: pre * ((C64::new(refp.y0, refp.omega0)) * ustar / refp.x0 + v),
        beta: pre * ((C64::new(refp.y0, -refp.omega0)) * ustar / refp.x0 + v),
        t: state.t,
    }
}

/// Decompose a valid pair into (theta, r, phi). r comes from arcsinh|beta|
/// (precise near r = 0, where arccosh|alpha| is not), theta = arg alpha, and
/// phi = -(arg beta + theta) wrapped into (-pi, pi].
pub fn squeeze_params(pair: &BogoliubovPair) -> Result<SqueezeTriple> {
    let residual = unitarity_residual(pair);
    if residual > UNITARITY_HARD_LIMIT {
        return Err(Error::UnitarityViolation { t: pair.t, residual, limit: UNITARITY_HARD_LIMIT });
    }
    Ok(squeeze_params_raw(pair))
}

/// As `squeeze_params` but without the unitarity gate; the polar decomposition
/// is formulaic and stays finite on non-unitary pairs.
pub fn squeeze_params_raw(pair: &BogoliubovPair) -> SqueezeTriple {
    let theta = normalize_angle(pair.alpha.arg());
    let b = pair.beta.norm();
    let r = b.asinh();
    let phi = if b == 0.0 { 0.0 } else { normalize_angle(-(pair.beta.arg() + theta)) };
    SqueezeTriple { theta, r, phi, t: pair.t }
}

/// Forward map: alpha = e^{i theta} cosh r, beta = e^{-i(theta + phi)} sinh r.
pub fn reconstruct(triple: &SqueezeTriple) -> BogoliubovPair {
    BogoliubovPair {
        alpha: C64::from_polar(triple.r.cosh(), triple.theta),
        beta: C64::from_polar(triple.r.sinh(), -(triple.theta + triple.phi)),
        t: triple.t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode_solver::{integrate, vacuum_init};
    use crate::profiles::CoefficientProfile;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn vacuum_initialization_gives_identity_pair() {
        for (x0, y0, z0) in [(1.0, 0.0, 1.0), (2.0, 1.0, 1.0), (1.5, -0.3, 2.0)] {
            let p = CoefficientProfile::constant(x0, y0, z0).unwrap();
            let r = ReferenceParams::new(x0, y0, z0, 0.0, 1.0).unwrap();
            let s = vacuum_init(&p, &r).unwrap();
            let pair = bogoliubov_coeffs(&s, x0, y0, &r).unwrap();
            assert!((pair.alpha - 1.0).norm() <= 1e-14, "alpha = {}", pair.alpha);
            assert!(pair.beta.norm() <= 1e-14, "beta = {}", pair.beta);
        }
    }

    #[test]
    fn constant_profile_pair_is_a_pure_phase() {
        let p = CoefficientProfile::constant(2.0, 1.0, 1.0).unwrap();
        let r = ReferenceParams::new(2.0, 1.0, 1.0, 0.0, 1.0).unwrap();
        let traj = integrate(&p, &vacuum_init(&p, &r).unwrap(), 10.0, 1e-3, 100).unwrap();
        for s in traj.samples() {
            let pair = bogoliubov_coeffs(s, 2.0, 1.0, &r).unwrap();
            let expect = (C64::new(0.0, 1.0) * r.omega0 * s.t).exp();
            assert!((pair.alpha - expect).norm() <= 1e-8, "t = {}", s.t);
            assert!(pair.beta.norm() <= 1e-9, "t = {}", s.t);
        }
    }

    #[test]
    fn unitarity_residual_examples() {
        let mk = |a: C64, b: C64| BogoliubovPair { alpha: a, beta: b, t: 0.0 };
        assert_eq!(unitarity_residual(&mk(C64::new(1.0, 0.0), C64::new(0.0, 0.0))), 0.0);
        let r = unitarity_residual(&mk(C64::new(1f64.cosh(), 0.0), C64::new(1f64.sinh(), 0.0)));
        assert!(r <= 1e-15);
        assert_abs_diff_eq!(
            unitarity_residual(&mk(C64::new(1.0, 0.0), C64::new(1.0, 0.0))),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn squeeze_params_examples() {
        let mk = |a: C64, b: C64| BogoliubovPair { alpha: a, beta: b, t: 0.0 };
        let s = squeeze_params(&mk(C64::new(1.0, 0.0), C64::new(0.0, 0.0))).unwrap();
        assert_eq!((s.theta, s.r, s.phi), (0.0, 0.0, 0.0));

        let s = squeeze_params(&mk(C64::new(1f64.cosh(), 0.0), C64::new(1f64.sinh(), 0.0))).unwrap();
        assert_abs_diff_eq!(s.r, 1.0, epsilon = 1e-15);
        assert_eq!(s.theta, 0.0);
        assert_eq!(s.phi, 0.0);

        let pair = mk(
            C64::from_polar(0.5f64.cosh(), PI / 3.0),
            C64::from_polar(0.5f64.sinh(), -PI / 3.0 - PI / 4.0),
        );
        let s = squeeze_params(&pair).unwrap();
        assert_abs_diff_eq!(s.theta, PI / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.r, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.phi, PI / 4.0, epsilon = 1e-15);
    }

    #[test]
    fn squeeze_params_reject_invalid_pairs() {
        let bad = BogoliubovPair { alpha: C64::new(1.0, 0.0), beta: C64::new(1.0, 0.0), t: 0.0 };
        assert!(matches!(squeeze_params(&bad), Err(Error::UnitarityViolation { .. })));
    }

    #[test]
    fn reconstruct_examples() {
        let p = reconstruct(&SqueezeTriple { theta: 0.0, r: 0.0, phi: 0.0, t: 0.0 });
        assert_eq!(p.alpha, C64::new(1.0, 0.0));
        assert_eq!(p.beta.norm(), 0.0);

        let p = reconstruct(&SqueezeTriple { theta: PI / 2.0, r: 0.0, phi: 1.7, t: 0.0 });
        assert!((p.alpha - C64::new(0.0, 1.0)).norm() <= 1e-16);
        assert_eq!(p.beta.norm(), 0.0);
    }

    #[test]
    fn round_trip_is_the_identity() {
        let triples = [
            (0.3, 1.2, -2.0),
            (-3.0, 0.01, 3.0),
            (PI, 4.9, -PI / 2.0),
            (0.0, 2.0, PI),
        ];
        for (theta, r, phi) in triples {
            let t = SqueezeTriple { theta, r, phi, t: 1.0 };
            let back = squeeze_params(&reconstruct(&t)).unwrap();
            assert_abs_diff_eq!(back.theta, theta, epsilon = 1e-12 * theta.abs().max(1.0));
            assert_abs_diff_eq!(back.r, r, epsilon = 1e-12 * r.max(1.0));
            assert_abs_diff_eq!(back.phi, phi, epsilon = 1e-12 * phi.abs().max(1.0));
            assert_eq!(back.t, 1.0);
        }
    }

    #[test]
    fn angle_normalization_convention() {
        assert_eq!(normalize_angle(PI), PI);
        assert_eq!(normalize_angle(-PI), PI, "half-open at -pi");
        assert_abs_diff_eq!(normalize_angle(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(normalize_angle(-9.0 * PI / 4.0), -PI / 4.0, epsilon = 1e-14);
        assert_eq!(normalize_angle(0.0), 0.0);
    }

    #[test]
    fn corrupted_state_rejected_via_unitarity() {
        let p = CoefficientProfile::constant(1.0, 0.0, 1.0).unwrap();
        let r = ReferenceParams::new(1.0, 0.0, 1.0, 0.0, 1.0).unwrap();
        let mut s = vacuum_init(&p, &r).unwrap();
        s.u *= 1.1;
        s.u_dot *= 1.1;
        assert!(matches!(
            bogoliubov_coeffs(&s, 1.0, 0.0, &r),
            Err(Error::UnitarityViolation { .. })
        ));
    }
}
