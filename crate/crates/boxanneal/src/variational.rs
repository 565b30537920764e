//! Gaussian-ansatz variational analysis of the Rastrigin system.
//!
//! The trial state `ψ(x; α, x₀) = (α/π)^{1/4} exp[−α(x−x₀)²/2]` gives the
//! closed-form energy surface
//!
//! `E(α, x₀) = ħ²α/(4m) + (k/2)[1/(2α) + x₀²]
//!            + (h₀/2)[1 − cos(2πx₀/w₀)·e^{−β/α}]`, `β = (π/w₀)²`.
//!
//! Its minima track the annealing story: a single delocalized solution at
//! small mass, a second center-localized solution appearing as the mass
//! grows, a first-order ground-state swap between the two, and a third
//! solution in the nearest ripple minimum whose energy offset from the
//! center solution is the variational image of the flat gap.

use crate::error::{domain, Error, Result};
use crate::hamiltonian::{build_from_cosine_moments, BasisSpec};
use crate::linalg;
use crate::potential::RastriginPotential;

/// A stationary minimum of the variational surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalPoint {
    pub alpha: f64,
    pub x0: f64,
    pub energy: f64,
    pub kind: BranchKind,
    pub mass: f64,
}

/// Structural identity of a branch (by geometry, not by energy ordering —
/// the ordering of the two center branches swaps at the transition mass).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchKind {
    /// Wide gaussian that ignores the ripple (small α).
    DelocalizedCenter,
    /// Narrow gaussian in the central ripple well (large α).
    LocalizedCenter,
    /// Gaussian in a neighboring ripple minimum (x₀ ≈ w₀ + y).
    LocalMinimum,
}

#[inline]
fn beta(p: &RastriginPotential) -> f64 {
    let b = std::f64::consts::PI / p.w0;
    b * b
}

/// Variational energy `E(α, x₀)`.
pub fn evar(alpha: f64, x0: f64, mass: f64, p: &RastriginPotential, hbar: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(domain(format!("gaussian width parameter must be positive, got {alpha}")));
    }
    let b = beta(p);
    let tau = 2.0 * std::f64::consts::PI * x0 / p.w0;
    Ok(hbar * hbar * alpha / (4.0 * mass)
        + 0.5 * p.k * (0.5 / alpha + x0 * x0)
        + 0.5 * p.h0 * (1.0 - tau.cos() * (-b / alpha).exp()))
}

/// Analytic gradient `(∂E/∂α, ∂E/∂x₀)`.
pub fn evar_gradient(
    alpha: f64,
    x0: f64,
    mass: f64,
    p: &RastriginPotential,
    hbar: f64,
) -> (f64, f64) {
    let b = beta(p);
    let two_pi_w = 2.0 * std::f64::consts::PI / p.w0;
    let tau = two_pi_w * x0;
    let damp = (-b / alpha).exp();
    let d_alpha = hbar * hbar / (4.0 * mass) - 0.25 * p.k / (alpha * alpha)
        - 0.5 * p.h0 * tau.cos() * damp * b / (alpha * alpha);
    let d_x0 = p.k * x0 + 0.5 * p.h0 * two_pi_w * tau.sin() * damp;
    (d_alpha, d_x0)
}

/// Analytic Hessian `(∂²E/∂α², ∂²E/∂α∂x₀, ∂²E/∂x₀²)`.
fn evar_hessian(alpha: f64, x0: f64, mass: f64, p: &RastriginPotential, _hbar: f64) -> (f64, f64, f64) {
    let _ = mass;
    let b = beta(p);
    let two_pi_w = 2.0 * std::f64::consts::PI / p.w0;
    let tau = two_pi_w * x0;
    let damp = (-b / alpha).exp();
    let a2 = alpha * alpha;
    let h_aa = 0.5 * p.k / (a2 * alpha)
        - 0.5 * p.h0 * tau.cos() * damp * (b * b / (a2 * a2) - 2.0 * b / (a2 * alpha));
    let h_ax = 0.5 * p.h0 * two_pi_w * tau.sin() * damp * b / a2;
    let h_xx = p.k + 0.5 * p.h0 * two_pi_w * two_pi_w * tau.cos() * damp;
    (h_aa, h_ax, h_xx)
}

/// Damped Newton refinement from a seed; falls back to gradient descent with
/// backtracking when the Hessian is indefinite. Converges to gradient norm
/// < 1e-10 or errs.
fn refine(
    mut alpha: f64,
    mut x0: f64,
    mass: f64,
    p: &RastriginPotential,
    hbar: f64,
) -> Option<(f64, f64)> {
    for _ in 0..200 {
        let (ga, gx) = evar_gradient(alpha, x0, mass, p, hbar);
        let gnorm = (ga * ga + gx * gx).sqrt();
        if gnorm < 1e-12 {
            return Some((alpha, x0));
        }
        let (haa, hax, hxx) = evar_hessian(alpha, x0, mass, p, hbar);
        let det = haa * hxx - hax * hax;
        let (mut da, mut dx) = if det > 0.0 && haa > 0.0 {
            // Newton step on the positive-definite Hessian.
            ((-ga * hxx + gx * hax) / det, (-gx * haa + ga * hax) / det)
        } else {
            // Steepest descent scaled to the local curvature magnitude.
            let scale = haa.abs().max(hxx.abs()).max(1e-10);
            (-ga / scale, -gx / scale)
        };
        // Keep alpha positive.
        while alpha + da <= 0.0 {
            da *= 0.5;
            dx *= 0.5;
        }
        // Backtracking on the energy.
        let e0 = evar(alpha, x0, mass, p, hbar).ok()?;
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let (na, nx) = (alpha + step * da, x0 + step * dx);
            if let Ok(e1) = evar(na, nx, mass, p, hbar) {
                if e1 <= e0 + 1e-18 {
                    alpha = na;
                    x0 = nx;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let (ga, gx) = evar_gradient(alpha, x0, mass, p, hbar);
    if (ga * ga + gx * gx).sqrt() < 1e-10 {
        Some((alpha, x0))
    } else {
        None
    }
}

fn classify(alpha: f64, x0: f64, mass: f64, p: &RastriginPotential, hbar: f64) -> BranchKind {
    if x0.abs() > 0.5 * p.w0 {
        return BranchKind::LocalMinimum;
    }
    if p.h0 == 0.0 {
        return BranchKind::DelocalizedCenter;
    }
    // The delocalized width sits near the ripple-blind √(km)/ħ, the localized
    // one near the deep-ripple √(k_deep·m)/ħ; their geometric mean separates
    // the two at every mass (both scale as √m).
    let k_deep = p.k + 0.5 * p.h0 * (2.0 * std::f64::consts::PI / p.w0).powi(2);
    let threshold = (p.k * k_deep).powf(0.25) * mass.sqrt() / hbar;
    if alpha > threshold {
        BranchKind::LocalizedCenter
    } else {
        BranchKind::DelocalizedCenter
    }
}

/// All distinct minima of the variational surface at mass `m`, found by
/// damped Newton from a fixed seed grid and deduplicated. Only true minima
/// (positive-definite Hessian) are returned, sorted by energy.
pub fn find_stationary_points(
    mass: f64,
    p: &RastriginPotential,
    hbar: f64,
) -> Result<Vec<VariationalPoint>> {
    if !(mass > 0.0) {
        return Err(domain(format!("mass must be positive, got {mass}")));
    }
    let k_deep = p.k + 0.5 * p.h0 * (2.0 * std::f64::consts::PI / p.w0).powi(2);
    let alpha_seeds = [
        (p.k * mass).sqrt() / hbar,          // harmonic (ripple-blind) width
        (k_deep * mass).sqrt() / hbar,       // deep-ripple width
        beta(p),                             // damping crossover scale
        0.3 * beta(p),
    ];
    let x0_seeds = [0.0, p.w0];
    let mut found: Vec<VariationalPoint> = Vec::new();
    for &a0 in &alpha_seeds {
        for &x0 in &x0_seeds {
            if let Some((alpha, x0)) = refine(a0, x0, mass, p, hbar) {
                let (haa, hax, hxx) = evar_hessian(alpha, x0, mass, p, hbar);
                if !(haa > 0.0 && haa * hxx - hax * hax > 0.0) {
                    continue; // saddle or maximum
                }
                let duplicate = found.iter().any(|f| {
                    (f.alpha - alpha).abs() < 1e-6 * alpha.max(f.alpha)
                        && (f.x0 - x0).abs() < 1e-8 * p.w0.max(1.0)
                });
                if !duplicate {
                    found.push(VariationalPoint {
                        alpha,
                        x0,
                        energy: evar(alpha, x0, mass, p, hbar)?,
                        kind: classify(alpha, x0, mass, p, hbar),
                        mass,
                    });
                }
            }
        }
    }
    if found.is_empty() {
        return Err(Error::NoConvergence(format!(
            "no variational minimum found at mass {mass} from {} seeds",
            alpha_seeds.len() * x0_seeds.len()
        )));
    }
    found.sort_by(|a, b| a.energy.partial_cmp(&b.energy).unwrap());
    Ok(found)
}

fn branch(points: &[VariationalPoint], kind: BranchKind) -> Option<VariationalPoint> {
    points.iter().copied().find(|pt| pt.kind == kind)
}

/// Mass at which the localized-center branch energy crosses below the
/// delocalized branch — the first-order transition of the variational ground
/// state. Returned as the mass itself (not its log).
pub fn ground_state_transition_mass(p: &RastriginPotential, hbar: f64) -> Result<f64> {
    let split = |mass: f64| -> Result<f64> {
        let pts = find_stationary_points(mass, p, hbar)?;
        let del = branch(&pts, BranchKind::DelocalizedCenter);
        let loc = branch(&pts, BranchKind::LocalizedCenter);
        match (del, loc) {
            (Some(d), Some(l)) => Ok(l.energy - d.energy),
            _ => Err(Error::NotFound(
                "both center branches must coexist to bracket the transition".to_string(),
            )),
        }
    };
    // Bracket in log10 m around the coexistence window.
    let mut lo = 3.03;
    let mut hi = 3.15;
    let f_lo = split(10f64.powf(lo))?;
    let f_hi = split(10f64.powf(hi))?;
    if f_lo <= 0.0 || f_hi >= 0.0 {
        return Err(Error::NotFound(format!(
            "transition not bracketed: split({lo}) = {f_lo}, split({hi}) = {f_hi}"
        )));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if split(10f64.powf(mid))? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(10f64.powf(0.5 * (lo + hi)))
}

/// Variational flat gap `Δ^var = Ẽ(local minimum) − Ẽ(localized center)`.
pub fn variational_gap(mass: f64, p: &RastriginPotential, hbar: f64) -> Result<f64> {
    let pts = find_stationary_points(mass, p, hbar)?;
    let loc = branch(&pts, BranchKind::LocalizedCenter)
        .ok_or_else(|| Error::NotFound("localized-center branch absent".to_string()))?;
    let side = branch(&pts, BranchKind::LocalMinimum)
        .ok_or_else(|| Error::NotFound("local-minimum branch absent".to_string()))?;
    Ok(side.energy - loc.energy)
}

/// Closed-form gap gradient `dΔ^var/dm = −ħ²[α̃(1) − α̃(0)]/(4m²)`, where
/// `α̃(0)` and `α̃(1)` are the optimal widths of the localized-center and
/// local-minimum branches. The potential-energy terms cancel, which is why
/// the gap is nearly flat in m.
pub fn gap_gradient_dm(mass: f64, p: &RastriginPotential, hbar: f64) -> Result<f64> {
    let pts = find_stationary_points(mass, p, hbar)?;
    let loc = branch(&pts, BranchKind::LocalizedCenter)
        .ok_or_else(|| Error::NotFound("localized-center branch absent".to_string()))?;
    let side = branch(&pts, BranchKind::LocalMinimum)
        .ok_or_else(|| Error::NotFound("local-minimum branch absent".to_string()))?;
    Ok(-hbar * hbar * (side.alpha - loc.alpha) / (4.0 * mass * mass))
}

/// Residual of the width condition shared by all nearly-cosine-aligned
/// stationary points (the x₀-independent part of ∂E/∂α = 0):
/// `ħ²/(4m) − k/(4α²) − (h₀β/(2α²))e^{−β/α}`.
pub fn width_condition_residual(alpha: f64, mass: f64, p: &RastriginPotential, hbar: f64) -> f64 {
    let b = beta(p);
    hbar * hbar / (4.0 * mass)
        - 0.25 * p.k / (alpha * alpha)
        - 0.5 * p.h0 * b / (alpha * alpha) * (-b / alpha).exp()
}

/// Shift of the side-well minimizer off the ripple minimum `x₀ = w₀`:
/// `y = −k w₀ / [k + (h₀/2)(2π/w₀)² e^{−β/α}]`.
pub fn x0_shift_y(alpha: f64, p: &RastriginPotential) -> f64 {
    let two_pi_w = 2.0 * std::f64::consts::PI / p.w0;
    -p.k * p.w0 / (p.k + 0.5 * p.h0 * two_pi_w * two_pi_w * (-beta(p) / alpha).exp())
}

/// Exact low levels of the Rastrigin system, obtained by recentering it in a
/// wide box and diagonalizing with the sine-basis machinery. Serves as the
/// ground truth that the variational energies upper-bound.
///
/// The potential's cosine moments over the box are computed in closed form;
/// the convergence guard doubles `n_dim` and requires `E_0` to move by less
/// than 1e-9.
pub fn box_embedding_crosscheck(
    mass: f64,
    p: &RastriginPotential,
    hbar: f64,
    l_big: f64,
    n_dim: usize,
    levels: usize,
) -> Result<Vec<f64>> {
    let solve = |n_dim: usize| -> Result<Vec<f64>> {
        let basis = BasisSpec::new(n_dim, l_big, mass, hbar)?;
        let moments = rastrigin_cosine_moments(p, l_big, 2 * n_dim);
        let h = build_from_cosine_moments(&moments, 1.0, &basis, n_dim - 1)?;
        linalg::lowest_eigenvalues(&h.matrix, levels)
    };
    let coarse = solve(n_dim)?;
    let fine = solve(2 * n_dim)?;
    if (coarse[0] - fine[0]).abs() > 1e-9 {
        return Err(Error::NoConvergence(format!(
            "embedding not converged: doubling the basis moved E_0 by {:.3e}",
            (coarse[0] - fine[0]).abs()
        )));
    }
    Ok(fine)
}

/// Cosine moments `C(r) = (1/L)∫₀^L U(x) cos(rπx/L) dx` of the Rastrigin
/// potential recentered at `L/2`.
fn rastrigin_cosine_moments(p: &RastriginPotential, l: f64, max_r: usize) -> Vec<f64> {
    let pi = std::f64::consts::PI;
    let mut out = Vec::with_capacity(max_r + 1);
    let b = 2.0 * pi / p.w0;
    for r in 0..=max_r {
        // Quadratic part: odd r vanishes by symmetry about L/2.
        let quad = if r == 0 {
            p.k * l * l / 24.0
        } else if r % 2 == 0 {
            // The two (−1)^q factors (phase shift and endpoint) cancel.
            let q = (r / 2) as f64;
            p.k * l * l / (4.0 * q * q * pi * pi)
        } else {
            0.0
        };
        // Ripple part: −(h0/2)(1/L)∫ cos(b(x−L/2)) cos(rπx/L) dx, plus the
        // constant h0/2 at r = 0.
        let q = r as f64 * pi / l;
        let phi = -b * l / 2.0;
        let cos_int = 0.5 * (cos_integral(b + q, phi, l) + cos_integral(b - q, phi, l));
        let ripple = if r == 0 { 0.5 * p.h0 } else { 0.0 } - 0.5 * p.h0 * cos_int / l;
        out.push(quad + ripple);
    }
    out
}

/// `∫₀^L cos(a x + φ) dx`, stable for small `a`.
fn cos_integral(a: f64, phi: f64, l: f64) -> f64 {
    let half = 0.5 * a * l;
    // (sin(aL+φ) − sin(φ))/a = L·cos(φ + aL/2)·sinc(aL/2)
    let sinc = if half.abs() < 1e-8 { 1.0 - half * half / 6.0 } else { half.sin() / half };
    l * (phi + half).cos() * sinc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std_p() -> RastriginPotential {
        RastriginPotential::standard()
    }

    #[test]
    fn harmonic_limit_exact() {
        // With no ripple the minimum is the exact oscillator ground state.
        let p = RastriginPotential::new(1.0, 0.0, 0.2).unwrap();
        let m = 100.0;
        let pts = find_stationary_points(m, &p, 1.0).unwrap();
        assert_eq!(pts.len(), 1);
        let pt = pts[0];
        assert!((pt.alpha - (p.k * m).sqrt()).abs() < 1e-6);
        assert!(pt.x0.abs() < 1e-10);
        assert!((pt.energy - 0.5 * (p.k / m).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let p = std_p();
        for &(alpha, x0, m) in
            &[(30.0, 0.05, 500.0), (300.0, 0.0, 1500.0), (400.0, 0.19, 3000.0), (50.0, -0.1, 800.0)]
        {
            let (ga, gx) = evar_gradient(alpha, x0, m, &p, 1.0);
            let h = 1e-6;
            let fd_a = (evar(alpha * (1.0 + h), x0, m, &p, 1.0).unwrap()
                - evar(alpha * (1.0 - h), x0, m, &p, 1.0).unwrap())
                / (2.0 * alpha * h);
            let fd_x = (evar(alpha, x0 + h, m, &p, 1.0).unwrap()
                - evar(alpha, x0 - h, m, &p, 1.0).unwrap())
                / (2.0 * h);
            assert!((ga - fd_a).abs() < 1e-6 * ga.abs().max(1e-4), "{ga} vs {fd_a}");
            assert!((gx - fd_x).abs() < 1e-6 * gx.abs().max(1e-4), "{gx} vs {fd_x}");
        }
    }

    #[test]
    fn branch_structure_vs_mass() {
        let p = std_p();
        // log m = 2.9: only the delocalized solution.
        let pts = find_stationary_points(10f64.powf(2.9), &p, 1.0).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].kind, BranchKind::DelocalizedCenter);
        // log m = 3.04: both center solutions.
        let pts = find_stationary_points(10f64.powf(3.04), &p, 1.0).unwrap();
        assert!(branch(&pts, BranchKind::DelocalizedCenter).is_some());
        assert!(branch(&pts, BranchKind::LocalizedCenter).is_some());
        // log m = 3.1: third solution near the first ripple minimum w0,
        // displaced inward by the closed-form shift y ≈ −0.008.
        let pts = find_stationary_points(10f64.powf(3.1), &p, 1.0).unwrap();
        let side = branch(&pts, BranchKind::LocalMinimum).expect("side branch");
        assert!((side.x0 - 0.2).abs() < 0.01, "x0 = {}", side.x0);
        let predicted = p.w0 + x0_shift_y(side.alpha, &p);
        assert!((side.x0 - predicted).abs() < 2e-4, "{} vs {predicted}", side.x0);
    }

    #[test]
    fn transition_mass_value() {
        let m_star = ground_state_transition_mass(&std_p(), 1.0).unwrap();
        assert!((m_star.log10() - 3.07).abs() < 0.02, "log m* = {}", m_star.log10());
    }

    #[test]
    fn gap_gradient_matches_finite_differences() {
        let p = std_p();
        for logm in [3.2, 3.5, 3.8] {
            let m = 10f64.powf(logm);
            let grad = gap_gradient_dm(m, &p, 1.0).unwrap();
            let h = 0.005 * m;
            let fd = (variational_gap(m + h, &p, 1.0).unwrap()
                - variational_gap(m - h, &p, 1.0).unwrap())
                / (2.0 * h);
            assert!(
                (grad - fd).abs() < 1e-3 * grad.abs(),
                "log m = {logm}: {grad} vs {fd}"
            );
        }
    }

    #[test]
    fn width_condition_holds_at_both_branches() {
        let p = std_p();
        let m = 10f64.powf(3.5);
        let pts = find_stationary_points(m, &p, 1.0).unwrap();
        // The condition is exact for the center branch. The side branch obeys
        // it only up to the dropped 1 − cos(2πy/w₀) factor, which contributes
        // (h₀/2)(β/α²)e^{−β/α}(2πy/w₀)²/2 ≈ 5e-7 here.
        let pt = branch(&pts, BranchKind::LocalizedCenter).unwrap();
        assert!(width_condition_residual(pt.alpha, m, &p, 1.0).abs() < 1e-12);
        let pt = branch(&pts, BranchKind::LocalMinimum).unwrap();
        assert!(width_condition_residual(pt.alpha, m, &p, 1.0).abs() < 1e-6);
    }

    #[test]
    fn minimized_energy_mass_derivative_identity() {
        // The total m-derivative of each branch's minimized energy equals
        // −ħ²α̃/(4m²): the implicit dα/dm and dx₀/dm contributions cancel at
        // a stationary point, leaving only the explicit kinetic term.
        let p = std_p();
        for logm in [3.2, 3.6] {
            let m = 10f64.powf(logm);
            let h = 5e-4 * m;
            let pts = find_stationary_points(m, &p, 1.0).unwrap();
            for pt in pts {
                let up = branch(&find_stationary_points(m + h, &p, 1.0).unwrap(), pt.kind)
                    .expect("branch persists under a small mass change");
                let dn = branch(&find_stationary_points(m - h, &p, 1.0).unwrap(), pt.kind)
                    .expect("branch persists under a small mass change");
                let fd = (up.energy - dn.energy) / (2.0 * h);
                let pred = -pt.alpha / (4.0 * m * m);
                assert!(
                    (fd - pred).abs() < 1e-6 * pred.abs(),
                    "{:?} at log m = {logm}: {fd} vs {pred}",
                    pt.kind
                );
            }
        }
    }

    #[test]
    fn x0_shift_reference() {
        let p = std_p();
        // Deep-well limit: exponential factor → 1.
        let y = x0_shift_y(1e12, &p);
        assert!((y + 2.006e-3).abs() < 2e-6, "y = {y}");
        // No ripple: the side minimum collapses to the origin.
        let p0 = RastriginPotential::new(1.0, 0.0, 0.2).unwrap();
        assert!((x0_shift_y(100.0, &p0) + p0.w0).abs() < 1e-12);
    }

    #[test]
    fn embedding_harmonic_reference() {
        // Pure harmonic oscillator in a wide box reproduces ħω/2.
        let p = RastriginPotential::new(1.0, 0.0, 0.2).unwrap();
        let m = 100.0;
        let sigma = (0.5 / (p.k * m).sqrt()).sqrt();
        let l = 40.0 * sigma;
        let e = box_embedding_crosscheck(m, &p, 1.0, l, 64, 2).unwrap();
        let expect = 0.5 * (p.k / m).sqrt();
        assert!((e[0] - expect).abs() < 1e-6, "{} vs {expect}", e[0]);
        assert!((e[1] - 3.0 * expect).abs() < 1e-5);
    }

    #[test]
    fn variational_upper_bounds_exact() {
        let p = std_p();
        let m = 10f64.powf(3.1);
        let sigma = (0.5 / (p.k * m).sqrt()).sqrt();
        let l = 40.0 * sigma;
        let e = box_embedding_crosscheck(m, &p, 1.0, l, 192, 2).unwrap();
        let pts = find_stationary_points(m, &p, 1.0).unwrap();
        let ground = pts[0].energy;
        assert!(ground >= e[0] - 1e-6, "variational {ground} below exact {}", e[0]);
    }
}
