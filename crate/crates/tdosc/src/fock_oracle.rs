//! Brute-force cross-check in a truncated number basis: q, p, H(t) as dense
//! matrices over the reference ladder basis at t0, and Schrodinger propagation
//! by per-step exact exponentials of the midpoint Hamiltonian.
//!
//! The quadratic Hamiltonian only couples |n> to |n+-2>, so each midpoint
//! exponential is computed exactly by splitting into even/odd parity sectors,
//! phase-rotating each Hermitian tridiagonal sector to a real symmetric one,
//! and running an implicit-QL eigensolver. Every step is unitary to rounding;
//! norm drift is a pure implementation check.

use crate::error::{Error, Result};
use crate::operator_algebra::CorrelatorSet;
use crate::profiles::{CoefficientProfile, Coefficients, ReferenceParams};
use crate::C64;

/// Dense complex matrix in the truncated number basis {|0>, ..., |N-1>}.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    dim: usize,
    data: Vec<C64>,
}

impl FockOperator {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim);
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for i in 0..self.dim {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            let mut acc = C64::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            out[i] = acc;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<(usize, usize)> for FockOperator {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FockOperator {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Normalized amplitude vector in the truncated number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockStateVector {
    pub t: f64,
    amps: Vec<C64>,
}

impl FockStateVector {
    /// The basis state |n> at t = 0.
    pub fn number_state(dim: usize, n: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if n >= dim {
            return Err(Error::DimensionMismatch { a: n, b: dim });
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[n] = C64::new(1.0, 0.0);
        Ok(Self { t: 0.0, amps })
    }

    /// Wrap amplitudes that are already normalized (within 1e-10).
    pub fn from_amplitudes(t: f64, amps: Vec<C64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::DimensionTooSmall(amps.len()));
        }
        let s = Self { t, amps };
        let drift = (s.norm() - 1.0).abs();
        if drift > 1e-10 {
            return Err(Error::NotNormalized(drift));
        }
        Ok(s)
    }

    /// Wrap arbitrary nonzero amplitudes, rescaling to unit norm.
    pub fn normalized(t: f64, mut amps: Vec<C64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::DimensionTooSmall(amps.len()));
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized(1.0));
        }
        for a in amps.iter_mut() {
            *a /= norm;
        }
        Ok(Self { t, amps })
    }

    pub fn at_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn overlap(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { a: self.dim(), b: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }
}

/// Truncated (annihilation, creation) pair: a[n-1, n] = sqrt(n).
pub fn ladder_matrices(dim: usize) -> Result<(FockOperator, FockOperator)> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let mut a = FockOperator::zeros(dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    let adag = a.adjoint();
    Ok((a, adag))
}

/// Coefficient of the annihilation operator in q: q = q_plus (a + a†).
fn q_plus(refp: &ReferenceParams) -> f64 {
    (refp.hbar * refp.x0 / (2.0 * refp.omega0)).sqrt()
}

/// Coefficient of the annihilation operator in p: p = p_plus a + conj(p_plus) a†.
fn p_plus(refp: &ReferenceParams) -> C64 {
    -C64::new(refp.y0, refp.omega0) * (refp.hbar / (2.0 * refp.omega0 * refp.x0)).sqrt()
}

/// Position and momentum matrices in the reference basis:
/// q = sqrt(hbar X0 / 2 w0)(a + a†),
/// p = sqrt(hbar / 2 w0 X0) [-(i w0 + Y0) a + (i w0 - Y0) a†]. Both Hermitian.
pub fn quadrature_matrices(refp: &ReferenceParams, dim: usize) -> Result<(FockOperator, FockOperator)> {
    let (a, adag) = ladder_matrices(dim)?;
    let qc = C64::new(q_plus(refp), 0.0);
    let pc = p_plus(refp);
    let q = a.scale(qc).add(&adag.scale(qc));
    let p = a.scale(pc).add(&adag.scale(pc.conj()));
    Ok((q, p))
}

/// The nonzero bands of H = (X/2)p^2 + (Y/2)(pq + qp) + (Z/2)q^2 built from
/// the truncated quadrature matrices: diag[n] (real) and the upper second
/// band[n] = H[n, n+2]. With F = (X/2)p+^2 + Y q+ p+ + (Z/2)q+^2 and
/// G = (X/2)|p+|^2 + Y q+ Re(p+) + (Z/2)q+^2:
///   diag[n] = G (2n+1), band[n] = F sqrt((n+1)(n+2)),
/// except diag[N-1] = G (N-1) because the truncated product loses the a a†
/// term in the last basis state (the distortion the full matrix shows there).
fn hamiltonian_bands(c: &Coefficients, refp: &ReferenceParams, dim: usize) -> (Vec<f64>, Vec<C64>) {
    let qp = q_plus(refp);
    let pp = p_plus(refp);
    let f = 0.5 * c.x * pp * pp + c.y * qp * pp + C64::new(0.5 * c.z * qp * qp, 0.0);
    let g = 0.5 * c.x * pp.norm_sqr() + c.y * qp * pp.re + 0.5 * c.z * qp * qp;
    let mut diag: Vec<f64> = (0..dim).map(|n| g * (2 * n + 1) as f64).collect();
    diag[dim - 1] = g * (dim - 1) as f64;
    let band: Vec<C64> = (0..dim.saturating_sub(2))
        .map(|n| f * ((n + 1) as f64 * (n + 2) as f64).sqrt())
        .collect();
    (diag, band)
}

/// H(t) = (X/2)p^2 + (Y/2)(pq + qp) + (Z/2)q^2 as a dense Hermitian matrix,
/// identical to the product of the truncated quadrature matrices.
pub fn hamiltonian(
    profile: &CoefficientProfile,
    t: f64,
    refp: &ReferenceParams,
    dim: usize,
) -> Result<FockOperator> {
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let c = profile.eval(t)?;
    let (diag, band) = hamiltonian_bands(&c, refp, dim);
    let mut h = FockOperator::zeros(dim);
    for n in 0..dim {
        h[(n, n)] = C64::new(diag[n], 0.0);
    }
    for (n, b) in band.iter().enumerate() {
        h[(n, n + 2)] = *b;
        h[(n + 2, n)] = b.conj();
    }
    Ok(h)
}

/// Eigendecomposition of one parity sector: a Hermitian tridiagonal with real
/// diagonal `d` and complex off-diagonal `e` (len m-1). The unimodular phase
/// rotation D with D[j+1] = D[j] * conj(e[j])/|e[j]| maps it to a real
/// symmetric tridiagonal; eigenvectors of the original are D z.
struct SectorEig {
    m: usize,
    vals: Vec<f64>,
    /// Row-major m x m; eigenvector k has components phases[i] * z[i*m + k].
    z: Vec<f64>,
    phases: Vec<C64>,
}

fn herm_tridiag_eig(d: &[f64], e: &[C64]) -> Result<SectorEig> {
    let m = d.len();
    debug_assert_eq!(e.len(), m.saturating_sub(1));
    let mut phases = vec![C64::new(1.0, 0.0); m];
    // tql2 convention: off-diagonal (j-1, j) stored at index j.
    let mut off = vec![0.0; m];
    for j in 0..m.saturating_sub(1) {
        let mag = e[j].norm();
        off[j + 1] = mag;
        phases[j + 1] = if mag > 0.0 { phases[j] * (e[j].conj() / mag) } else { phases[j] };
    }
    let mut vals = d.to_vec();
    let mut z = vec![0.0; m * m];
    for i in 0..m {
        z[i * m + i] = 1.0;
    }
    tql2(&mut vals, &mut off, &mut z, m)?;
    Ok(SectorEig { m, vals, z, phases })
}

/// Implicit QL with Wilkinson shifts for a real symmetric tridiagonal matrix,
/// accumulating eigenvectors into the row-major matrix `z` (initially the
/// identity). `e[j]` holds the off-diagonal (j-1, j); e[0] is ignored.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64], m: usize) -> Result<()> {
    if m == 0 {
        return Ok(());
    }
    for i in 1..m {
        e[i - 1] = e[i];
    }
    e[m - 1] = 0.0;
    for l in 0..m {
        let mut iter = 0;
        loop {
            let mut seg = l;
            while seg < m - 1 {
                let dd = d[seg].abs() + d[seg + 1].abs();
                if e[seg].abs() <= f64::EPSILON * dd {
                    break;
                }
                seg += 1;
            }
            if seg == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::NonRealExpectation(f64::NAN)); // unreachable in practice
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[seg] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            for i in (l..seg).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[seg] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.chunks_exact_mut(m) {
                    f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if e[l].abs() > 0.0 || p != 0.0 {
                d[l] -= p;
                e[l] = g;
                e[seg] = 0.0;
            }
        }
    }
    Ok(())
}

/// Apply exp(-i T dt_over_hbar) to `x` in place, where T is the Hermitian
/// tridiagonal described by (d, e).
fn evolve_sector(d: &[f64], e: &[C64], dt_over_hbar: f64, x: &mut [C64]) -> Result<()> {
    let eig = herm_tridiag_eig(d, e)?;
    let m = eig.m;
    // tmp = e^{-i L dt} V† x with V[i][k] = phases[i] z[i*m+k].
    let mut tmp = vec![C64::new(0.0, 0.0); m];
    for i in 0..m {
        let xi = eig.phases[i].conj() * x[i];
        let row = &eig.z[i * m..(i + 1) * m];
        for (t, zik) in tmp.iter_mut().zip(row) {
            *t += zik * xi;
        }
    }
    for (t, lam) in tmp.iter_mut().zip(&eig.vals) {
        *t *= C64::new(0.0, -lam * dt_over_hbar).exp();
    }
    for i in 0..m {
        let row = &eig.z[i * m..(i + 1) * m];
        let mut acc = C64::new(0.0, 0.0);
        for (t, zik) in tmp.iter().zip(row) {
            acc += zik * t;
        }
        x[i] = eig.phases[i] * acc;
    }
    Ok(())
}

fn propagate_core(
    profile: &CoefficientProfile,
    psi0: &FockStateVector,
    t_end: f64,
    step: f64,
    refp: &ReferenceParams,
    sample_every: usize,
    samples: Option<&mut Vec<FockStateVector>>,
) -> Result<FockStateVector> {
    let dim = psi0.dim();
    if dim < 2 {
        return Err(Error::DimensionTooSmall(dim));
    }
    let drift = (psi0.norm() - 1.0).abs();
    if drift > 1e-10 {
        return Err(Error::NotNormalized(drift));
    }
    if !(step > 0.0) {
        return Err(Error::NonPositiveStep(step));
    }
    if t_end < psi0.t {
        return Err(Error::BackwardSpan { t_start: psi0.t, t_end });
    }

    let span = t_end - psi0.t;
    let n_steps = if span == 0.0 { 0 } else { (span / step).ceil().max(1.0) as usize };
    let h = if n_steps == 0 { 0.0 } else { span / n_steps as f64 };

    let m_even = dim.div_ceil(2);
    let m_odd = dim / 2;
    let mut even = vec![C64::new(0.0, 0.0); m_even];
    let mut odd = vec![C64::new(0.0, 0.0); m_odd];
    for (j, a) in even.iter_mut().enumerate() {
        *a = psi0.amps[2 * j];
    }
    for (j, a) in odd.iter_mut().enumerate() {
        *a = psi0.amps[2 * j + 1];
    }

    let gather = |even: &[C64], odd: &[C64], t: f64| -> FockStateVector {
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        for (j, a) in even.iter().enumerate() {
            amps[2 * j] = *a;
        }
        for (j, a) in odd.iter().enumerate() {
            amps[2 * j + 1] = *a;
        }
        FockStateVector { t, amps }
    };

    let mut out = samples;
    if let Some(v) = out.as_deref_mut() {
        v.push(psi0.clone());
    }

    let (mut d_even, mut e_even) = (vec![0.0; m_even], vec![C64::new(0.0, 0.0); m_even.saturating_sub(1)]);
    let (mut d_odd, mut e_odd) = (vec![0.0; m_odd], vec![C64::new(0.0, 0.0); m_odd.saturating_sub(1)]);

    for k in 0..n_steps {
        let t_mid = psi0.t + (k as f64 + 0.5) * h;
        let c = profile.eval(t_mid)?;
        let (diag, band) = hamiltonian_bands(&c, refp, dim);
        for j in 0..m_even {
            d_even[j] = diag[2 * j];
            if j + 1 < m_even {
                e_even[j] = band[2 * j];
            }
        }
        for j in 0..m_odd {
            d_odd[j] = diag[2 * j + 1];
            if j + 1 < m_odd {
                e_odd[j] = band[2 * j + 1];
            }
        }
        evolve_sector(&d_even, &e_even, h / refp.hbar, &mut even)?;
        evolve_sector(&d_odd, &e_odd, h / refp.hbar, &mut odd)?;

        if let Some(v) = out.as_deref_mut() {
            if (k + 1) % sample_every == 0 || k + 1 == n_steps {
                let t = if k + 1 == n_steps { t_end } else { psi0.t + (k + 1) as f64 * h };
                v.push(gather(&even, &odd, t));
            }
        }
    }

    let result = gather(&even, &odd, t_end);
    let drift = (result.norm() - 1.0).abs();
    if drift > 1e-10 {
        return Err(Error::NotNormalized(drift));
    }
    Ok(result)
}

/// Propagate `psi0` to `t_end` by per-step exact exponentials of the midpoint
/// Hamiltonian (uniform substeps no larger than `step`).
pub fn propagate(
    profile: &CoefficientProfile,
    psi0: &FockStateVector,
    t_end: f64,
    step: f64,
    refp: &ReferenceParams,
) -> Result<FockStateVector> {
    propagate_core(profile, psi0, t_end, step, refp, usize::MAX, None)
}

/// As `propagate`, additionally recording the state every `sample_every`
/// steps (the start and final states are always included).
pub fn propagate_sampled(
    profile: &CoefficientProfile,
    psi0: &FockStateVector,
    t_end: f64,
    step: f64,
    sample_every: usize,
    refp: &ReferenceParams,
) -> Result<Vec<FockStateVector>> {
    let mut samples = Vec::new();
    propagate_core(profile, psi0, t_end, step, refp, sample_every.max(1), Some(&mut samples))?;
    Ok(samples)
}

/// <q^2>, <p^2>, <(pq+qp)/2> in the given state, evaluated with the reference
/// quadrature matrices. The imaginary parts must vanish (Hermitian
/// expectations); they are checked against 1e-10 and discarded. `n_label`
/// records which number-state lineage the state came from.
pub fn expect_correlators(psi: &FockStateVector, refp: &ReferenceParams, n_label: u32) -> Result<CorrelatorSet> {
    let drift = (psi.norm() - 1.0).abs();
    if drift > 1e-10 {
        return Err(Error::NotNormalized(drift));
    }
    let (q, p) = quadrature_matrices(refp, psi.dim())?;
    let qpsi = q.matvec(&psi.amps);
    let ppsi = p.matvec(&psi.amps);
    let dot = |x: &[C64], y: &[C64]| -> C64 { x.iter().zip(y).map(|(a, b)| a.conj() * b).sum() };
    let zq2 = dot(&psi.amps, &q.matvec(&qpsi));
    let zp2 = dot(&psi.amps, &p.matvec(&ppsi));
    let pq = p.matvec(&qpsi);
    let qp = q.matvec(&ppsi);
    let mixed: Vec<C64> = pq.iter().zip(&qp).map(|(a, b)| 0.5 * (a + b)).collect();
    let zc = dot(&psi.amps, &mixed);
    for z in [zq2, zp2, zc] {
        if z.im.abs() > 1e-10 {
            return Err(Error::NonRealExpectation(z.im.abs()));
        }
    }
    Ok(CorrelatorSet { t: psi.t, n: n_label, q2: zq2.re, p2: zp2.re, cross: zc.re })
}

/// <a† a> = sum_n n |psi_n|^2.
pub fn mean_occupation(psi: &FockStateVector) -> f64 {
    psi.amps.iter().enumerate().map(|(n, a)| n as f64 * a.norm_sqr()).sum()
}
