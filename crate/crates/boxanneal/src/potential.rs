//! Multi-well cost-function landscapes.
//!
//! Two families are provided: the box potential
//! `V_box(x) = ½[1 − cos(μπx/L)] + a[1 − cos(2πx/L)]` defined on `[0, L]`
//! (a sinusoidal comb whose envelope is flat, concave, or convex depending on
//! the sign of `a`), and the Rastrigin potential
//! `V(x) = ½kx² + (h₀/2)[1 − cos(2πx/w₀)]` defined on the whole line.

use crate::error::{domain, Result};

/// Box landscape: a μ-period cosine comb with an `a`-weighted envelope.
///
/// `mu` must be a positive multiple of four so that the envelope extrema line
/// up with comb minima; the landscape then has exactly `μ/2 + 1` minima
/// (including the two box walls).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxPotential {
    pub mu: u32,
    pub a: f64,
    pub l: f64,
}

/// Rastrigin landscape: harmonic basin with cosine ripple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RastriginPotential {
    pub k: f64,
    pub h0: f64,
    pub w0: f64,
}

/// One minimum of a box landscape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    /// Second derivative of the potential at the minimizer. For wall minima
    /// this is the one-sided curvature.
    pub curvature: f64,
    /// True for the two wall minima at x = 0 and x = L, which behave as half
    /// harmonic oscillators (ground energy 3/2 quanta instead of 1/2).
    pub at_wall: bool,
}

impl BoxPotential {
    pub fn new(mu: u32, a: f64, l: f64) -> Result<Self> {
        if mu < 4 || mu % 4 != 0 {
            return Err(domain(format!(
                "mu must be a positive multiple of four, got {mu}"
            )));
        }
        if !(l > 0.0) {
            return Err(domain(format!("box width must be positive, got {l}")));
        }
        Ok(Self { mu, a, l })
    }

    /// Number of potential minima, counting the two walls.
    pub fn minima_count(&self) -> usize {
        self.mu as usize / 2 + 1
    }

    /// Evaluates the potential at `x ∈ [0, L]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=self.l).contains(&x) {
            return Err(domain(format!("x = {x} outside the box [0, {}]", self.l)));
        }
        Ok(self.eval_unchecked(x))
    }

    #[inline]
    pub fn eval_unchecked(&self, x: f64) -> f64 {
        let u = std::f64::consts::PI * x / self.l;
        0.5 * (1.0 - (self.mu as f64 * u).cos()) + self.a * (1.0 - (2.0 * u).cos())
    }

    /// First derivative dV/dx.
    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        let pi = std::f64::consts::PI;
        let u = pi * x / self.l;
        let mu = self.mu as f64;
        0.5 * mu * pi / self.l * (mu * u).sin() + 2.0 * self.a * pi / self.l * (2.0 * u).sin()
    }

    /// Second derivative d²V/dx².
    #[inline]
    pub fn second_derivative(&self, x: f64) -> f64 {
        let pi = std::f64::consts::PI;
        let u = pi * x / self.l;
        let mu = self.mu as f64;
        let w_mu = mu * pi / self.l;
        let w_a = 2.0 * pi / self.l;
        0.5 * w_mu * w_mu * (mu * u).cos() + self.a * w_a * w_a * (2.0 * u).cos()
    }

    /// Approximate location `2L/μ` of the interior minimum nearest the left
    /// wall. The exact minimizer is displaced slightly when `a ≠ 0`.
    pub fn adjacent_minimum_x(&self) -> f64 {
        2.0 * self.l / self.mu as f64
    }

    /// All `μ/2 + 1` minima, sorted by position. Interior minimizers are
    /// refined from the comb seeds `x = 2kL/μ` by derivative bisection to
    /// 1e-12 in x; curvatures come from the closed-form second derivative.
    pub fn minima(&self) -> Vec<Minimum> {
        let half_period = self.l / self.mu as f64;
        let mut out = Vec::with_capacity(self.minima_count());
        out.push(Minimum {
            x: 0.0,
            value: self.eval_unchecked(0.0),
            curvature: self.second_derivative(0.0),
            at_wall: true,
        });
        for k in 1..self.mu / 2 {
            let seed = 2.0 * k as f64 * half_period;
            // Keep the bracket off the neighboring comb maxima, where the
            // derivative vanishes and its sign is numerical noise.
            let x = self.refine_minimum(seed - 0.5 * half_period, seed + 0.5 * half_period);
            out.push(Minimum {
                x,
                value: self.eval_unchecked(x),
                curvature: self.second_derivative(x),
                at_wall: false,
            });
        }
        out.push(Minimum {
            x: self.l,
            value: self.eval_unchecked(self.l),
            curvature: self.second_derivative(self.l),
            at_wall: true,
        });
        out
    }

    /// Bisection on dV/dx over a bracket known to contain one sign change.
    fn refine_minimum(&self, mut lo: f64, mut hi: f64) -> f64 {
        // Shrink the bracket until the derivative changes sign across it; the
        // seed midpoint is within a half period of the true minimizer.
        let mut f_lo = self.derivative(lo);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            let f_mid = self.derivative(mid);
            if (f_lo < 0.0) == (f_mid < 0.0) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

impl RastriginPotential {
    pub fn new(k: f64, h0: f64, w0: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(domain(format!("spring constant must be positive, got {k}")));
        }
        if h0 < 0.0 {
            return Err(domain(format!("ripple amplitude must be >= 0, got {h0}")));
        }
        if !(w0 > 0.0) {
            return Err(domain(format!("ripple wavelength must be positive, got {w0}")));
        }
        Ok(Self { k, h0, w0 })
    }

    /// The parameters used throughout the variational analysis.
    pub fn standard() -> Self {
        Self { k: 1.0, h0: 0.2, w0: 0.2 }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        let tau = 2.0 * std::f64::consts::PI * x / self.w0;
        0.5 * self.k * x * x + 0.5 * self.h0 * (1.0 - tau.cos())
    }
}
