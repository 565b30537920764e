//! Hamiltonian assembly in the kinetic-energy (sine) basis.
//!
//! The box eigenfunctions `φ_n(x) = √(2/L) sin[(n+1)πx/L]` diagonalize the
//! kinetic term with eigenvalues `K_n = (n+1)²π²ħ²/(2mL²)`. Cosine potentials
//! have exact matrix elements built from three Kronecker deltas, so the
//! truncated matrix of `H(s) = p²/(2ms) + V_box(x)` is sparse: the only
//! nonzero entries are the diagonal, the bands `|n−m| ∈ {2, μ}`, and the
//! anti-band `n+m+2 = μ`. Since `μ` never exceeds the band extent needed
//! anyway, the whole matrix fits in symmetric banded storage with
//! half-bandwidth `max(2, μ)`.

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::linalg::SymBanded;
use crate::potential::BoxPotential;

/// Truncation and physical constants of the sine basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    pub n_dim: usize,
    pub l: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl BasisSpec {
    pub fn new(n_dim: usize, l: f64, mass: f64, hbar: f64) -> Result<Self> {
        if n_dim < 2 {
            return Err(domain(format!("basis needs at least 2 functions, got {n_dim}")));
        }
        if !(l > 0.0 && mass > 0.0 && hbar > 0.0) {
            return Err(domain("physical constants must be positive".to_string()));
        }
        Ok(Self { n_dim, l, mass, hbar })
    }

    /// Default units of the model: ħ = m = L = 1.
    pub fn natural(n_dim: usize) -> Self {
        Self { n_dim, l: 1.0, mass: 1.0, hbar: 1.0 }
    }

    /// Kinetic eigenvalue `K_n = (n+1)²π²ħ²/(2mL²)`.
    pub fn kinetic_eigenvalue(&self, n: usize) -> f64 {
        let q = (n + 1) as f64 * std::f64::consts::PI * self.hbar / self.l;
        q * q / (2.0 * self.mass)
    }

    /// Basis function `φ_n(x) = √(2/L) sin[(n+1)πx/L]`.
    pub fn basis_function(&self, n: usize, x: f64) -> Result<f64> {
        if !(0.0..=self.l).contains(&x) {
            return Err(domain(format!("x = {x} outside the box [0, {}]", self.l)));
        }
        let arg = (n + 1) as f64 * std::f64::consts::PI * x / self.l;
        Ok((2.0 / self.l).sqrt() * arg.sin())
    }
}

/// Exact sine-basis matrix element of `cos(lπx/L)`:
/// `∫ φ_n φ_m cos(lπx/L) dx = ½(δ_{n−m+l} + δ_{n−m−l} − δ_{n+m+2−l})`.
pub fn cosine_matrix_element(n: usize, m: usize, l: u32) -> f64 {
    let d = |p: i64| -> f64 {
        if p == 0 { 1.0 } else { 0.0 }
    };
    let n = n as i64;
    let m = m as i64;
    let l = l as i64;
    0.5 * (d(n - m + l) + d(n - m - l) - d(n + m + 2 - l))
}

/// Symmetric matrix of `H(s)` in the truncated sine basis.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    pub basis: BasisSpec,
    pub s: f64,
    pub matrix: SymBanded,
}

/// Builds the matrix of `H(s) = p²/(2ms) + V_box(x)`:
/// `H_nm = δ_nm (K_n/s + ½ + a) − ½ cme(n,m,μ) − a cme(n,m,2)`.
pub fn build_hamiltonian(p: &BoxPotential, s: f64, basis: &BasisSpec) -> Result<HamiltonianMatrix> {
    if !(s > 0.0) {
        return Err(domain(format!("annealing parameter must be positive, got {s}")));
    }
    let n_dim = basis.n_dim;
    let bw = (p.mu as usize).max(2);
    let mut m = SymBanded::zeros(n_dim, bw.min(n_dim - 1));
    for i in 0..n_dim {
        let lo = i.saturating_sub(m.bandwidth);
        for j in lo..=i {
            let mut v = -0.5 * cosine_matrix_element(i, j, p.mu) - p.a * cosine_matrix_element(i, j, 2);
            if i == j {
                v += basis.kinetic_eigenvalue(i) / s + 0.5 + p.a;
            }
            m.set(i, j, v);
        }
    }
    Ok(HamiltonianMatrix { basis: *basis, s, matrix: m })
}

/// Builds the convex-combination interpolation `H̃(τ) = (1−τ)K + τV`.
/// Included for completeness; its ground state barely moves until τ → 1.
pub fn build_convex_combination_hamiltonian(
    p: &BoxPotential,
    tau: f64,
    basis: &BasisSpec,
) -> Result<HamiltonianMatrix> {
    if !(0.0..=1.0).contains(&tau) {
        return Err(domain(format!("tau must lie in [0, 1], got {tau}")));
    }
    let n_dim = basis.n_dim;
    let bw = (p.mu as usize).max(2);
    let mut m = SymBanded::zeros(n_dim, bw.min(n_dim - 1));
    for i in 0..n_dim {
        let lo = i.saturating_sub(m.bandwidth);
        for j in lo..=i {
            let mut v = tau
                * (-0.5 * cosine_matrix_element(i, j, p.mu) - p.a * cosine_matrix_element(i, j, 2));
            if i == j {
                v += (1.0 - tau) * basis.kinetic_eigenvalue(i) + tau * (0.5 + p.a);
            }
            m.set(i, j, v);
        }
    }
    Ok(HamiltonianMatrix { basis: *basis, s: f64::NAN, matrix: m })
}

/// Builds the sine-basis matrix of `p²/(2ms) + U(x)` for an arbitrary
/// potential supplied through its cosine moments
/// `C(r) = (1/L)∫ U(x) cos(rπx/L) dx` (so `C(0)` is the mean of `U`).
/// The matrix element is `U_nm = C(n−m) − C(n+m+2)`.
///
/// `moments[r]` must cover `r = 0 ..= 2·n_dim`; higher moments are treated as
/// zero, which is exact when `U` is a finite cosine series and a truncation
/// otherwise.
pub fn build_from_cosine_moments(
    moments: &[f64],
    s: f64,
    basis: &BasisSpec,
    bandwidth: usize,
) -> Result<HamiltonianMatrix> {
    if !(s > 0.0) {
        return Err(domain(format!("annealing parameter must be positive, got {s}")));
    }
    let n_dim = basis.n_dim;
    let c = |r: usize| -> f64 { moments.get(r).copied().unwrap_or(0.0) };
    let mut m = SymBanded::zeros(n_dim, bandwidth.min(n_dim - 1));
    for i in 0..n_dim {
        let lo = i.saturating_sub(m.bandwidth);
        for j in lo..=i {
            let mut v = c(i - j) - c(i + j + 2);
            if i == j {
                v += basis.kinetic_eigenvalue(i) / s;
            }
            m.set(i, j, v);
        }
    }
    Ok(HamiltonianMatrix { basis: *basis, s, matrix: m })
}

/// A truncated coefficient vector `c_n` in the sine basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub coefficients: Vec<Complex64>,
    pub basis: BasisSpec,
}

impl StateVector {
    /// Wraps real coefficients (e.g. an eigenvector) and normalizes.
    pub fn from_real(coefficients: &[f64], basis: BasisSpec) -> Self {
        let mut c: Vec<Complex64> =
            coefficients.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut c {
            *z /= norm;
        }
        Self { coefficients: c, basis }
    }

    pub fn norm(&self) -> f64 {
        self.coefficients.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Position-space amplitude `ψ(x) = Σ c_n φ_n(x)` at each grid point.
    pub fn to_position(&self, grid: &[f64]) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(grid.len());
        for &x in grid {
            if !(0.0..=self.basis.l).contains(&x) {
                return Err(domain(format!("x = {x} outside the box")));
            }
            let mut psi = Complex64::new(0.0, 0.0);
            let scale = (2.0 / self.basis.l).sqrt();
            let u = std::f64::consts::PI * x / self.basis.l;
            for (n, &c) in self.coefficients.iter().enumerate() {
                psi += c * (scale * ((n + 1) as f64 * u).sin());
            }
            out.push(psi);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinetic_eigenvalues() {
        let b = BasisSpec::natural(16);
        let k0 = std::f64::consts::PI.powi(2) / 2.0;
        assert!((b.kinetic_eigenvalue(0) - k0).abs() < 1e-12);
        assert!((b.kinetic_eigenvalue(1) - 4.0 * k0).abs() < 1e-12);
        assert!((b.kinetic_eigenvalue(9) - 100.0 * k0).abs() < 1e-12);
    }

    #[test]
    fn basis_function_values() {
        let b = BasisSpec::natural(4);
        assert_eq!(b.basis_function(0, 0.0).unwrap(), 0.0);
        assert!((b.basis_function(0, 0.5).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!(b.basis_function(1, 0.5).unwrap().abs() < 1e-12);
        assert!(b.basis_function(0, 1.5).is_err());
    }

    #[test]
    fn cosine_element_deltas() {
        assert_eq!(cosine_matrix_element(0, 0, 2), -0.5);
        assert_eq!(cosine_matrix_element(2, 0, 2), 0.5);
        assert_eq!(cosine_matrix_element(0, 1, 2), 0.0);
        // Symmetric in n, m.
        for l in [2u32, 8, 12] {
            for n in 0..20 {
                for m in 0..20 {
                    assert_eq!(
                        cosine_matrix_element(n, m, l),
                        cosine_matrix_element(m, n, l)
                    );
                }
            }
        }
    }

    /// Adaptive Simpson quadrature of ∫ φ_n φ_m cos(lπx/L) dx used as an
    /// independent oracle for the delta formula.
    fn quad_element(n: usize, m: usize, l: u32, a: f64, b: f64, fa: f64, fm: f64, fb: f64, tol: f64) -> f64 {
        let f = |x: f64| {
            let pi = std::f64::consts::PI;
            2.0 * ((n + 1) as f64 * pi * x).sin()
                * ((m + 1) as f64 * pi * x).sin()
                * (l as f64 * pi * x).cos()
        };
        let mid = 0.5 * (a + b);
        let lm = 0.5 * (a + mid);
        let rm = 0.5 * (mid + b);
        let flm = f(lm);
        let frm = f(rm);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        let left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
        if (left + right - whole).abs() < 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            quad_element(n, m, l, a, mid, fa, flm, fm, tol / 2.0)
                + quad_element(n, m, l, mid, b, fm, frm, fb, tol / 2.0)
        }
    }

    fn quad_oracle(n: usize, m: usize, l: u32) -> f64 {
        let f = |x: f64| {
            let pi = std::f64::consts::PI;
            2.0 * ((n + 1) as f64 * pi * x).sin()
                * ((m + 1) as f64 * pi * x).sin()
                * (l as f64 * pi * x).cos()
        };
        // Integrate over subpanels no wider than one oscillation so adaptive
        // refinement cannot be fooled by cancellation.
        let pieces = (n + m + l as usize + 2).max(8);
        let mut total = 0.0;
        for p in 0..pieces {
            let a = p as f64 / pieces as f64;
            let b = (p + 1) as f64 / pieces as f64;
            let mid = 0.5 * (a + b);
            total += quad_element(n, m, l, a, b, f(a), f(mid), f(b), 1e-13);
        }
        total
    }

    #[test]
    fn cosine_element_matches_quadrature() {
        for l in (2..=30).step_by(4) {
            for n in (0..=50).step_by(7) {
                for m in (0..=50).step_by(7) {
                    let exact = cosine_matrix_element(n, m, l);
                    let quad = quad_oracle(n, m, l);
                    assert!(
                        (exact - quad).abs() < 1e-10,
                        "n={n} m={m} l={l}: {exact} vs {quad}"
                    );
                }
            }
        }
    }

    #[test]
    fn hamiltonian_reference_entries() {
        let b = BasisSpec::natural(32);
        let p = BoxPotential::new(8, 0.0, 1.0).unwrap();
        let h = build_hamiltonian(&p, 1.0, &b).unwrap();
        let expect = std::f64::consts::PI.powi(2) / 2.0 + 0.5;
        assert!((h.matrix.get(0, 0) - expect).abs() < 1e-12);

        let pa = BoxPotential::new(8, 0.2, 1.0).unwrap();
        let ha = build_hamiltonian(&pa, 1.0, &b).unwrap();
        // a-term adds a − a·(−½) = 0.3 on the (0,0) entry.
        assert!((ha.matrix.get(0, 0) - (expect + 0.3)).abs() < 1e-12);
    }

    #[test]
    fn hamiltonian_linear_in_a_and_inverse_s() {
        let b = BasisSpec::natural(48);
        let p0 = BoxPotential::new(12, 0.0, 1.0).unwrap();
        let p1 = BoxPotential::new(12, 0.3, 1.0).unwrap();
        let p2 = BoxPotential::new(12, 0.6, 1.0).unwrap();
        let h0 = build_hamiltonian(&p0, 1.0, &b).unwrap();
        let h1 = build_hamiltonian(&p1, 1.0, &b).unwrap();
        let h2 = build_hamiltonian(&p2, 1.0, &b).unwrap();
        for i in 0usize..48 {
            for j in i.saturating_sub(12)..=i {
                let lin = 2.0 * h1.matrix.get(i, j) - h0.matrix.get(i, j);
                let v = h2.matrix.get(i, j);
                assert!((lin - v).abs() < 1e-12 * (1.0 + v.abs()));
            }
        }
        // Kinetic part scales as 1/s.
        let hs = build_hamiltonian(&p0, 4.0, &b).unwrap();
        for i in 0usize..48 {
            let diff = h0.matrix.get(i, i) - hs.matrix.get(i, i);
            let expect = b.kinetic_eigenvalue(i) * (1.0 - 0.25);
            assert!((diff - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn convex_combination_endpoints() {
        let b = BasisSpec::natural(24);
        let p = BoxPotential::new(8, 0.2, 1.0).unwrap();
        let h0 = build_convex_combination_hamiltonian(&p, 0.0, &b).unwrap();
        for i in 0usize..24 {
            assert!((h0.matrix.get(i, i) - b.kinetic_eigenvalue(i)).abs() < 1e-12);
            if i > 0 {
                assert_eq!(h0.matrix.get(i, i - 2.min(i)), if i >= 2 { 0.0 } else { h0.matrix.get(i, 0) });
            }
        }
        let h1 = build_convex_combination_hamiltonian(&p, 1.0, &b).unwrap();
        let hs = build_hamiltonian(&p, 1e30, &b).unwrap();
        for i in 0usize..24 {
            for j in i.saturating_sub(8)..=i {
                assert!((h1.matrix.get(i, j) - hs.matrix.get(i, j)).abs() < 1e-9);
            }
        }
        assert!(build_convex_combination_hamiltonian(&p, 1.5, &b).is_err());
    }

    #[test]
    fn moments_route_matches_direct_assembly() {
        // V_box expressed through its cosine moments must reproduce
        // build_hamiltonian exactly.
        let b = BasisSpec::natural(40);
        let p = BoxPotential::new(12, 0.2, 1.0).unwrap();
        let mut moments = vec![0.0; 81];
        moments[0] = 0.5 + p.a;
        moments[2] = -0.5 * p.a; // (1/L)∫ a(1−cos 2u)cos(2u): -a/2
        moments[12] = -0.25; // (1/L)∫ ½(1−cos 12u)cos(12u): -1/4
        let hm = build_from_cosine_moments(&moments, 3.0, &b, 12).unwrap();
        let hd = build_hamiltonian(&p, 3.0, &b).unwrap();
        for i in 0usize..40 {
            for j in i.saturating_sub(12)..=i {
                assert!(
                    (hm.matrix.get(i, j) - hd.matrix.get(i, j)).abs() < 1e-12,
                    "mismatch at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn to_position_reference() {
        let b = BasisSpec::natural(8);
        let mut c = vec![0.0; 8];
        c[0] = 1.0;
        let st = StateVector::from_real(&c, b);
        let psi = st.to_position(&[0.0, 0.5, 1.0]).unwrap();
        assert!(psi[0].norm() < 1e-12);
        assert!((psi[1].re - 2f64.sqrt()).abs() < 1e-12);
        assert!(psi[2].norm() < 1e-12);
    }

    #[test]
    fn to_position_total_probability() {
        let b = BasisSpec::natural(12);
        let c: Vec<f64> = (0..12).map(|n| 1.0 / (n + 1) as f64).collect();
        let st = StateVector::from_real(&c, b);
        let n_grid = 4096;
        let grid: Vec<f64> = (0..=n_grid).map(|i| i as f64 / n_grid as f64).collect();
        let psi = st.to_position(&grid).unwrap();
        // Trapezoid rule; endpoints vanish.
        let total: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>() / n_grid as f64;
        assert!((total - 1.0).abs() < 1e-6, "total probability {total}");
    }
}
