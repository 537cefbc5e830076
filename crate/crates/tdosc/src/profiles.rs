//! Time-dependent Hamiltonian coefficients X(t), Y(t), Z(t) and derived frequencies.
//!
//! The Hamiltonian is H = (X/2) p^2 + (Y/2)(pq + qp) + (Z/2) q^2. A profile
//! supplies the three coefficients, plus the derivatives of X and Y that enter
//! the mode equation bracket XZ - Y^2 + (X'Y - XY')/X.

use crate::error::{Error, Result};

/// Coefficient values and the first derivatives of X and Y at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub x_dot: f64,
    pub y_dot: f64,
}

/// sqrt(X(t) Z(t) - Y(t)^2) when the radicand is positive; otherwise the
/// inverted-regime tag carrying the (non-positive) radicand. The inverted
/// regime is a legitimate dynamical phase, not an error — only the reference
/// ladder basis construction rejects it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InstantaneousFrequency {
    Oscillatory(f64),
    Inverted { radicand: f64 },
}

impl InstantaneousFrequency {
    /// The frequency when oscillatory.
    pub fn oscillatory(self) -> Option<f64> {
        match self {
            InstantaneousFrequency::Oscillatory(w) => Some(w),
            InstantaneousFrequency::Inverted { .. } => None,
        }
    }

    /// X Z - Y^2 regardless of sign.
    pub fn radicand(self) -> f64 {
        match self {
            InstantaneousFrequency::Oscillatory(w) => w * w,
            InstantaneousFrequency::Inverted { radicand } => radicand,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Family {
    Constant {
        x0: f64,
        y0: f64,
        z0: f64,
    },
    /// Z(t) = Z0 (1 + epsilon cos(nu t)); X and Y constant.
    Modulated {
        x0: f64,
        y0: f64,
        z0: f64,
        epsilon: f64,
        nu: f64,
    },
    /// Smooth transition between two constant triples, weighted by
    /// s(t) = (1 + tanh((t - t_c)/tau))/2.
    Quench {
        before: [f64; 3],
        after: [f64; 3],
        t_c: f64,
        tau: f64,
    },
    /// Sampled rows interpolated per coefficient by a monotone cubic (C^1).
    Tabulated {
        x: MonotoneCubic,
        y: MonotoneCubic,
        z: MonotoneCubic,
    },
}

/// One of the built-in coefficient families together with its time domain.
/// Immutable after construction; evaluation is a pure function of t.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientProfile {
    family: Family,
    t_start: f64,
    t_end: f64,
}

impl CoefficientProfile {
    /// X, Y, Z fixed for all time.
    pub fn constant(x0: f64, y0: f64, z0: f64) -> Result<Self> {
        check_x_positive(x0, "constant family")?;
        Ok(Self {
            family: Family::Constant { x0, y0, z0 },
            t_start: f64::NEG_INFINITY,
            t_end: f64::INFINITY,
        })
    }

    /// Z(t) = z0 (1 + epsilon cos(nu t)) with X = x0, Y = y0 held constant.
    pub fn modulated(x0: f64, y0: f64, z0: f64, epsilon: f64, nu: f64) -> Result<Self> {
        check_x_positive(x0, "modulated family")?;
        Ok(Self {
            family: Family::Modulated { x0, y0, z0, epsilon, nu },
            t_start: f64::NEG_INFINITY,
            t_end: f64::INFINITY,
        })
    }

    /// Smooth quench from `before` = [X, Y, Z] to `after`, centered at `t_c`
    /// with transition width `tau`.
    pub fn quench(before: [f64; 3], after: [f64; 3], t_c: f64, tau: f64) -> Result<Self> {
        if tau <= 0.0 {
            return Err(Error::NonPositiveWidth(tau));
        }
        check_x_positive(before[0], "quench `before`")?;
        check_x_positive(after[0], "quench `after`")?;
        Ok(Self {
            family: Family::Quench { before, after, t_c, tau },
            t_start: f64::NEG_INFINITY,
            t_end: f64::INFINITY,
        })
    }

    /// Sampled (t, X, Y, Z) rows with strictly increasing t; the domain is the
    /// sampled range and evaluation uses a monotone cubic interpolant, so the
    /// coefficients are C^1 and never overshoot the local data range.
    pub fn tabulated(rows: &[[f64; 4]]) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::TableTooShort(rows.len()));
        }
        for (i, w) in rows.windows(2).enumerate() {
            if !(w[1][0] > w[0][0]) {
                return Err(Error::NonMonotoneTable { index: i + 1, t: w[1][0] });
            }
        }
        for row in rows {
            check_x_positive(row[1], &format!("tabulated row at t = {}", row[0]))?;
        }
        let t: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let grab = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<f64>>();
        Ok(Self {
            t_start: t[0],
            t_end: t[t.len() - 1],
            family: Family::Tabulated {
                x: MonotoneCubic::new(&t, &grab(1)),
                y: MonotoneCubic::new(&t, &grab(2)),
                z: MonotoneCubic::new(&t, &grab(3)),
            },
        })
    }

    /// Restrict the domain. The new bounds must be ordered and, for tabulated
    /// profiles, lie within the sampled range.
    pub fn with_domain(mut self, t_start: f64, t_end: f64) -> Result<Self> {
        if !(t_end >= t_start) {
            return Err(Error::BackwardSpan { t_start, t_end: t_end });
        }
        if t_start < self.t_start || t_end > self.t_end {
            let t = if t_start < self.t_start { t_start } else { t_end };
            return Err(Error::OutsideDomain { t, start: self.t_start, end: self.t_end });
        }
        self.t_start = t_start;
        self.t_end = t_end;
        Ok(self)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.t_start, self.t_end)
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Constant { .. } => "constant",
            Family::Modulated { .. } => "modulated",
            Family::Quench { .. } => "quench",
            Family::Tabulated { .. } => "tabulated",
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        // Tiny slack so a final integrator step landing one rounding unit past
        // the boundary does not spuriously error.
        let scale = self.t_start.abs().max(self.t_end.abs()).max(1.0);
        let slack = if scale.is_finite() { 1e-9 * scale } else { 0.0 };
        if t < self.t_start - slack || t > self.t_end + slack {
            return Err(Error::OutsideDomain { t, start: self.t_start, end: self.t_end });
        }
        Ok(())
    }

    /// Coefficients and derivatives at t. Built-in analytic families return
    /// exact derivatives; tabulated profiles return the interpolant's.
    pub fn eval(&self, t: f64) -> Result<Coefficients> {
        self.check_domain(t)?;
        Ok(match &self.family {
            Family::Constant { x0, y0, z0 } => Coefficients {
                x: *x0,
                y: *y0,
                z: *z0,
                x_dot: 0.0,
                y_dot: 0.0,
            },
            Family::Modulated { x0, y0, z0, epsilon, nu } => Coefficients {
                x: *x0,
                y: *y0,
                z: z0 * (1.0 + epsilon * (nu * t).cos()),
                x_dot: 0.0,
                y_dot: 0.0,
            },
            Family::Quench { before, after, t_c, tau } => {
                let arg = (t - t_c) / tau;
                let s = 0.5 * (1.0 + arg.tanh());
                let sech2 = {
                    let c = arg.cosh();
                    1.0 / (c * c)
                };
                let s_dot = sech2 / (2.0 * tau);
                let mix = |b: f64, a: f64| b + (a - b) * s;
                Coefficients {
                    x: mix(before[0], after[0]),
                    y: mix(before[1], after[1]),
                    z: mix(before[2], after[2]),
                    x_dot: (after[0] - before[0]) * s_dot,
                    y_dot: (after[1] - before[1]) * s_dot,
                }
            }
            Family::Tabulated { x, y, z } => {
                let (xv, xd) = x.eval(t);
                let (yv, yd) = y.eval(t);
                let (zv, _) = z.eval(t);
                Coefficients { x: xv, y: yv, z: zv, x_dot: xd, y_dot: yd }
            }
        })
    }

    /// sqrt(XZ - Y^2) at t, or the inverted-regime tag when the radicand is
    /// not positive.
    pub fn instantaneous_frequency(&self, t: f64) -> Result<InstantaneousFrequency> {
        let c = self.eval(t)?;
        let radicand = c.x * c.z - c.y * c.y;
        Ok(if radicand > 0.0 {
            InstantaneousFrequency::Oscillatory(radicand.sqrt())
        } else {
            InstantaneousFrequency::Inverted { radicand }
        })
    }

    /// The bracket XZ - Y^2 + (X'Y - XY')/X driving the mode equation.
    pub fn effective_frequency_squared(&self, t: f64) -> Result<f64> {
        let c = self.eval(t)?;
        Ok(c.x * c.z - c.y * c.y + (c.x_dot * c.y - c.x * c.y_dot) / c.x)
    }
}

fn check_x_positive(x: f64, context: &str) -> Result<()> {
    if !(x > 0.0) {
        return Err(Error::NonPositiveX { x, context: context.to_string() });
    }
    Ok(())
}

/// Reference (time-independent) oscillator data frozen at t0: the basis in
/// which ladder operators, Bogoliubov coefficients, and the Fock oracle are
/// expressed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceParams {
    pub t0: f64,
    pub x0: f64,
    pub y0: f64,
    pub z0: f64,
    /// sqrt(x0 z0 - y0^2), strictly positive.
    pub omega0: f64,
    pub hbar: f64,
}

impl ReferenceParams {
    pub fn new(x0: f64, y0: f64, z0: f64, t0: f64, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0) {
            return Err(Error::NonPositiveHbar(hbar));
        }
        check_x_positive(x0, "reference params")?;
        let radicand = x0 * z0 - y0 * y0;
        if !(radicand > 0.0) {
            return Err(Error::DegenerateReference { t0, radicand });
        }
        Ok(Self { t0, x0, y0, z0, omega0: radicand.sqrt(), hbar })
    }

    /// Freeze the profile's coefficients at t0.
    pub fn from_profile(profile: &CoefficientProfile, t0: f64, hbar: f64) -> Result<Self> {
        let c = profile.eval(t0)?;
        Self::new(c.x, c.y, c.z, t0, hbar)
    }
}

/// Shape-preserving piecewise cubic (Fritsch-Carlson slopes, the PCHIP
/// scheme): C^1, interpolates the knots, and is monotone wherever the data
/// is, so it never overshoots — constant data segments stay exactly constant.
#[derive(Debug, Clone, PartialEq)]
struct MonotoneCubic {
    t: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    /// Knots must be strictly increasing (validated by the caller).
    fn new(t: &[f64], y: &[f64]) -> Self {
        let n = t.len();
        let h: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = delta[0];
            d[1] = delta[0];
        } else {
            for k in 1..n - 1 {
                if delta[k - 1] * delta[k] > 0.0 {
                    // Weighted harmonic mean of the neighboring secants.
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
                }
            }
            d[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
            d[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Self { t: t.to_vec(), y: y.to_vec(), d }
    }

    /// Value and derivative at t; t at most a rounding slack outside the knot
    /// range (callers enforce the domain), clamped to the end intervals.
    fn eval(&self, t: f64) -> (f64, f64) {
        let n = self.t.len();
        let k = self.t.partition_point(|&knot| knot <= t).clamp(1, n - 1) - 1;
        let h = self.t[k + 1] - self.t[k];
        let s = t - self.t[k];
        let delta = (self.y[k + 1] - self.y[k]) / h;
        let (d0, d1) = (self.d[k], self.d[k + 1]);
        let c2 = (3.0 * delta - 2.0 * d0 - d1) / h;
        let c3 = (d0 + d1 - 2.0 * delta) / (h * h);
        let value = self.y[k] + s * (d0 + s * (c2 + s * c3));
        let deriv = d0 + s * (2.0 * c2 + 3.0 * s * c3);
        (value, deriv)
    }
}

/// Non-centered three-point end slope with the shape-preserving clamps.
fn edge_slope(h0: f64, h1: f64, delta0: f64, delta1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * delta0 - h0 * delta1) / (h0 + h1);
    if d * delta0 <= 0.0 {
        0.0
    } else if delta0 * delta1 < 0.0 && d.abs() > 3.0 * delta0.abs() {
        3.0 * delta0
    } else {
        d
    }
}
