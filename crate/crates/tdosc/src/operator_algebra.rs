//! Linear operator expansions of position/momentum in the invariant and
//! Heisenberg pictures, and number-state correlators built from them.
//!
//! Everything here is algebra over the sampled mode state: with
//! w = (u' - Yu)/X, the position/momentum expansions carry (u, w) or their
//! conjugates, and the correlators reduce to |u|^2, |w|^2, Re(u* w) in either
//! picture.

use crate::error::{Error, Result};
use crate::mode_solver::ModeState;
use crate::C64;

/// Which evolution convention an expansion belongs to. Correlator formulas
/// coincide across pictures; the tag exists for provenance and to catch
/// accidental mixing of expansions over different ladder pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Picture {
    /// Expanded over the invariant ladder pair (evolves as U O U†).
    Invariant,
    /// Expanded over the reference ladder pair (operator evolves as U† O U).
    Heisenberg,
    /// The frozen reference expansion at t0.
    SchroedingerReference,
}

/// An operator linear in a ladder pair: c_a * A + c_adag * A†.
/// Hermitian operators have c_adag = conj(c_a).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureExpansion {
    pub c_a: C64,
    pub c_adag: C64,
    pub picture: Picture,
}

/// An operator linear in (p, q): c_p * p + c_q * q. Used for the invariant
/// ladder operators, which the formalism defines over phase space rather than
/// over another ladder pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSpaceExpansion {
    pub c_p: C64,
    pub c_q: C64,
}

/// Number-state second moments at one instant: q2 = <q^2>, p2 = <p^2>,
/// cross = <(pq + qp)/2> in the state |n>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorSet {
    pub t: f64,
    pub n: u32,
    pub q2: f64,
    pub p2: f64,
    pub cross: f64,
}

/// Hard limit on the Wronskian residual accepted by `invariant_ladder`.
pub const LADDER_WRONSKIAN_LIMIT: f64 = 1e-6;

fn momentum_coefficient(state: &ModeState, x: f64, y: f64) -> C64 {
    (state.u_dot - y * state.u) / x
}

fn expansions_raw(state: &ModeState, x: f64, y: f64, hbar: f64) -> (PhaseSpaceExpansion, PhaseSpaceExpansion) {
    let i = C64::new(0.0, 1.0);
    let s = hbar.sqrt();
    let w = momentum_coefficient(state, x, y);
    let lower = PhaseSpaceExpansion { c_p: i * state.u.conj() / s, c_q: -i * w.conj() / s };
    let raise = PhaseSpaceExpansion { c_p: -i * state.u / s, c_q: i * w / s };
    (lower, raise)
}

/// The invariant (lowering, raising) ladder pair expanded over (p, q):
/// a_L = (i/sqrt(hbar)) [u* p - ((u'* - Y u*)/X) q] and its adjoint.
/// Rejects states whose Wronskian residual exceeds the hard limit, since the
/// pair is canonical only on the Wronskian shell.
pub fn invariant_ladder(
    state: &ModeState,
    x: f64,
    y: f64,
    hbar: f64,
) -> Result<(PhaseSpaceExpansion, PhaseSpaceExpansion)> {
    let residual = state.wronskian_residual(x);
    if residual > LADDER_WRONSKIAN_LIMIT {
        return Err(Error::WronskianDiverged { t: state.t, residual, limit: LADDER_WRONSKIAN_LIMIT });
    }
    Ok(expansions_raw(state, x, y, hbar))
}

/// Commutator [A, B] of two phase-space-linear operators, from coefficients:
/// [A, B] = i hbar (A.c_q B.c_p - A.c_p B.c_q). Equals 1 for a canonical
/// (lowering, raising) pair.
pub fn ladder_commutator(a: &PhaseSpaceExpansion, b: &PhaseSpaceExpansion, hbar: f64) -> C64 {
    C64::new(0.0, hbar) * (a.c_q * b.c_p - a.c_p * b.c_q)
}

/// Position and momentum expanded over the invariant ladder pair:
/// q = sqrt(hbar)(u a_L + u* a_L†), p = sqrt(hbar)(w a_L + w* a_L†).
pub fn lvn_quadratures(state: &ModeState, x: f64, y: f64, hbar: f64) -> (QuadratureExpansion, QuadratureExpansion) {
    let s = hbar.sqrt();
    let w = momentum_coefficient(state, x, y);
    let q = QuadratureExpansion { c_a: s * state.u, c_adag: s * state.u.conj(), picture: Picture::Invariant };
    let p = QuadratureExpansion { c_a: s * w, c_adag: s * w.conj(), picture: Picture::Invariant };
    (q, p)
}

/// Heisenberg position and momentum expanded over the reference ladder pair:
/// q_H = sqrt(hbar)(u a + u* a†), p_H = sqrt(hbar)(w a + w* a†). The
/// coefficient pattern matches `lvn_quadratures` — what changes is the ladder
/// pair underneath, (a, a†) instead of (a_L, a_L†) — because q_H = U† q U and
/// U† a_L U = a. Putting u on the lowering side is what keeps
/// [q_H, p_H] = +i hbar on the Wronskian shell and reproduces the
/// constant-coefficient limit a_H(t) = e^{-i w0 t} a.
pub fn heisenberg_quadratures(
    state: &ModeState,
    x: f64,
    y: f64,
    hbar: f64,
) -> (QuadratureExpansion, QuadratureExpansion) {
    let s = hbar.sqrt();
    let w = momentum_coefficient(state, x, y);
    let q = QuadratureExpansion { c_a: s * state.u, c_adag: s * state.u.conj(), picture: Picture::Heisenberg };
    let p = QuadratureExpansion { c_a: s * w, c_adag: s * w.conj(), picture: Picture::Heisenberg };
    (q, p)
}

/// Number-state correlators from the mode state. One code path serves both
/// pictures: the invariant- and Heisenberg-picture formulas are term-identical,
/// q2 = hbar |u|^2 (2n+1), p2 = hbar |w|^2 (2n+1), cross = hbar Re(u* w)(2n+1).
pub fn correlators(state: &ModeState, x: f64, y: f64, n: u32, hbar: f64) -> CorrelatorSet {
    let w = momentum_coefficient(state, x, y);
    let occ = (2 * n + 1) as f64;
    CorrelatorSet {
        t: state.t,
        n,
        q2: hbar * state.u.norm_sqr() * occ,
        p2: hbar * w.norm_sqr() * occ,
        cross: hbar * (state.u.conj() * w).re * occ,
    }
}

/// Correlators evaluated directly from a (q, p) expansion pair over a
/// canonical ladder basis: q2 = Re(q.c_a q.c_adag)(2n+1), and so on. Used to
/// check that both pictures' expansions reproduce `correlators`.
pub fn correlators_from_expansions(
    q: &QuadratureExpansion,
    p: &QuadratureExpansion,
    n: u32,
    t: f64,
) -> Result<CorrelatorSet> {
    if q.picture != p.picture {
        return Err(Error::PictureMismatch { a: q.picture, b: p.picture });
    }
    let occ = (2 * n + 1) as f64;
    Ok(CorrelatorSet {
        t,
        n,
        q2: (q.c_a * q.c_adag).re * occ,
        p2: (p.c_a * p.c_adag).re * occ,
        cross: (p.c_a * q.c_adag).re * occ,
    })
}

/// ([A, B] - i hbar) for expansions over the same ladder pair, with
/// [A, B] = A.c_a B.c_adag - A.c_adag B.c_a. Zero means the pair is canonical.
pub fn commutator_residual(a: &QuadratureExpansion, b: &QuadratureExpansion, hbar: f64) -> Result<C64> {
    if a.picture != b.picture {
        return Err(Error::PictureMismatch { a: a.picture, b: b.picture });
    }
    Ok(a.c_a * b.c_adag - a.c_adag * b.c_a - C64::new(0.0, hbar))
}

/// q2 p2 - cross^2; equals hbar^2 (2n+1)^2 / 4 on the Wronskian shell, where
/// Im(u* w) = -1/2 exactly.
pub fn uncertainty_product(c: &CorrelatorSet) -> f64 {
    c.q2 * c.p2 - c.cross * c.cross
}

/// |uncertainty_product - hbar^2 (2n+1)^2 / 4|.
pub fn uncertainty_identity_residual(c: &CorrelatorSet, hbar: f64) -> f64 {
    let occ = (2 * c.n + 1) as f64;
    (uncertainty_product(c) - hbar * hbar * occ * occ / 4.0).abs()
}
