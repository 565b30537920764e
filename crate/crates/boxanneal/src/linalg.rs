//! Banded symmetric linear algebra.
//!
//! The sine-basis Hamiltonians are symmetric with a small half-bandwidth
//! (max(2, μ) ≤ 28), so everything here works on banded storage:
//!
//! * Sturm-sequence eigenvalue counting via the `LDLᵀ` factorization of
//!   shifted matrices, driving a bisection solver for the lowest eigenvalues;
//! * banded `LU` with partial pivoting, driving inverse iteration for the
//!   corresponding eigenvectors (with in-cluster orthogonalization for
//!   near-degenerate levels);
//! * a cyclic Jacobi solver for the small dense matrices that appear when
//!   rotating inside a degenerate block.
//!
//! Eigenpairs are certified by the residual bound `‖Av − λv‖ ≤ tol·‖A‖` before
//! being returned.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Symmetric banded matrix. `data[d * n + j]` holds `A(j+d, j)` for
/// subdiagonal offset `d = 0..=bandwidth`.
#[derive(Debug, Clone)]
pub struct SymBanded {
    pub n: usize,
    pub bandwidth: usize,
    data: Vec<f64>,
}

impl SymBanded {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        Self { n, bandwidth, data: vec![0.0; (bandwidth + 1) * n] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d > self.bandwidth {
            0.0
        } else {
            self.data[d * self.n + lo]
        }
    }

    /// Sets the entry (i, j) (and by symmetry (j, i)); (i, j) must lie within
    /// the band.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (hi, lo) = if i >= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        assert!(d <= self.bandwidth, "entry ({i}, {j}) outside bandwidth {}", self.bandwidth);
        self.data[d * self.n + lo] = v;
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        let mut sums = vec![0.0; self.n];
        for d in 0..=self.bandwidth {
            for j in 0..self.n - d {
                let v = self.data[d * self.n + j].abs();
                sums[j + d] += v;
                if d > 0 {
                    sums[j] += v;
                }
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// `y = A x` for real vectors.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        y.fill(0.0);
        for d in 0..=self.bandwidth {
            let row = &self.data[d * self.n..d * self.n + self.n - d];
            if d == 0 {
                for (j, &v) in row.iter().enumerate() {
                    y[j] += v * x[j];
                }
            } else {
                for (j, &v) in row.iter().enumerate() {
                    y[j + d] += v * x[j];
                    y[j] += v * x[j + d];
                }
            }
        }
    }

    /// `y = A x` for complex vectors (A is real symmetric).
    pub fn matvec_complex(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.fill(Complex64::new(0.0, 0.0));
        for d in 0..=self.bandwidth {
            let row = &self.data[d * self.n..d * self.n + self.n - d];
            if d == 0 {
                for (j, &v) in row.iter().enumerate() {
                    y[j] += v * x[j];
                }
            } else {
                for (j, &v) in row.iter().enumerate() {
                    y[j + d] += v * x[j];
                    y[j] += v * x[j + d];
                }
            }
        }
    }

    /// Gershgorin bounds on the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let d = self.get(i, i);
            let mut r = 0.0;
            let from = i.saturating_sub(self.bandwidth);
            let to = (i + self.bandwidth).min(self.n - 1);
            for j in from..=to {
                if j != i {
                    r += self.get(i, j).abs();
                }
            }
            lo = lo.min(d - r);
            hi = hi.max(d + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `sigma`, from the inertia of the
    /// `LDLᵀ` factorization of `A − σI` (Sturm count). Elimination without
    /// pivoting is adequate here: a vanishing pivot is replaced by a tiny
    /// value of the same role, which perturbs the count by at most the number
    /// of floored pivots — and bisection tolerates off-by-epsilon shifts.
    pub fn count_below(&self, sigma: f64) -> usize {
        let n = self.n;
        let bw = self.bandwidth;
        let floor = f64::EPSILON * self.norm_inf().max(f64::MIN_POSITIVE);
        // Working band of the active trailing submatrix, column-compressed:
        // work[d][j] mirrors the storage layout but is destroyed in place.
        let mut work = self.data.clone();
        for j in 0..n {
            work[j] -= sigma;
        }
        let mut negatives = 0;
        for j in 0..n {
            let mut pivot = work[j];
            if pivot.abs() < floor {
                pivot = if pivot < 0.0 { -floor } else { floor };
            }
            if pivot < 0.0 {
                negatives += 1;
            }
            let reach = bw.min(n - 1 - j);
            // Rank-one update of the trailing (reach × reach) block.
            for di in 1..=reach {
                let li = work[di * n + j] / pivot;
                for dj in di..=reach {
                    // Entry (j+dj, j+di) of the trailing block.
                    work[(dj - di) * n + (j + di)] -= li * work[dj * n + j];
                }
            }
            for di in 1..=reach {
                work[di * n + j] /= pivot;
            }
        }
        negatives
    }
}

/// Eigenvalues and eigenvectors returned by [`lowest_eigenpairs`].
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    /// Column-major: `vectors[k]` is the unit eigenvector of `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Lowest `k` eigenvalues by Sturm bisection, each resolved to an absolute
/// tolerance of `‖A‖·1e-14` (or machine-limited).
pub fn lowest_eigenvalues(a: &SymBanded, k: usize) -> Result<Vec<f64>> {
    if k == 0 || k > a.n {
        return Err(Error::Domain(format!("requested {k} of {} eigenvalues", a.n)));
    }
    let (mut glo, ghi) = a.gershgorin();
    let scale = a.norm_inf().max(f64::MIN_POSITIVE);
    let tol = scale * 1e-14;
    // Upper edge for the k-th eigenvalue: bisect for count >= k.
    let mut values = Vec::with_capacity(k);
    for idx in 0..k {
        // Invariant: all eigenvalues below index idx are < glo is false in
        // general, so bracket each eigenvalue separately from the global
        // bounds; reuse the previous eigenvalue as the lower edge.
        let mut lo = if idx == 0 { glo } else { values[idx - 1] - tol };
        let mut hi = ghi;
        while hi - lo > tol + f64::EPSILON * (lo.abs() + hi.abs()) {
            let mid = 0.5 * (lo + hi);
            if a.count_below(mid) > idx {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        values.push(0.5 * (lo + hi));
        glo = glo.min(values[idx]);
    }
    Ok(values)
}

/// Banded LU factorization with partial pivoting (LAPACK `dgbtrf` layout) of
/// `A − σI`. Fill-in widens the upper band to `2·bw`.
struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    /// `ab[r * n + j]` holds entry (r + j − ku_ext, j) of the working matrix,
    /// rows r = 0..kl+ku_ext, ku_ext = kl + ku.
    ab: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    fn factor(a: &SymBanded, sigma: f64) -> Self {
        let n = a.n;
        let kl = a.bandwidth;
        let ku = a.bandwidth;
        let ku_ext = kl + ku;
        let rows = kl + ku_ext + 1;
        let mut ab = vec![0.0; rows * n];
        for j in 0..n {
            let from = j.saturating_sub(ku);
            let to = (j + kl).min(n - 1);
            for i in from..=to {
                let mut v = a.get(i, j);
                if i == j {
                    v -= sigma;
                }
                ab[(i + ku_ext - j) * n + j] = v;
            }
        }
        let floor = f64::EPSILON * a.norm_inf().max(f64::MIN_POSITIVE);
        let mut pivots = vec![0usize; n];
        for col in 0..n {
            // Pivot search within the kl rows below the diagonal.
            let reach = kl.min(n - 1 - col);
            let mut p = 0;
            let mut best = ab[(ku_ext) * n + col].abs();
            for r in 1..=reach {
                let v = ab[(ku_ext + r) * n + col].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            pivots[col] = col + p;
            if p != 0 {
                // Swap rows col and col+p across the affected columns.
                let width = (ku_ext).min(n - 1 - col);
                for c in 0..=width {
                    let j = col + c;
                    let r1 = (col + ku_ext - j) * n + j;
                    let r2 = (col + p + ku_ext - j) * n + j;
                    ab.swap(r1, r2);
                }
            }
            let mut pivot = ab[ku_ext * n + col];
            if pivot.abs() < floor {
                // Keep the factorization usable for inverse iteration even at
                // a numerically exact eigenvalue shift.
                pivot = if pivot < 0.0 { -floor } else { floor };
                ab[ku_ext * n + col] = pivot;
            }
            for r in 1..=reach {
                let idx = (ku_ext + r) * n + col;
                let l = ab[idx] / pivot;
                ab[idx] = l;
                let width = (ku_ext).min(n - 1 - col);
                for c in 1..=width {
                    let j = col + c;
                    let up = (col + ku_ext - j) * n + j;
                    let lo_idx = (col + r + ku_ext - j) * n + j;
                    ab[lo_idx] -= l * ab[up];
                }
            }
        }
        Self { n, kl, ku: ku_ext, ab, pivots }
    }

    /// Solves `(A − σI) x = b` in place.
    fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        // Forward: apply permutations and L.
        for col in 0..n {
            let p = self.pivots[col];
            if p != col {
                b.swap(col, p);
            }
            let reach = self.kl.min(n - 1 - col);
            for r in 1..=reach {
                b[col + r] -= self.ab[(self.ku + r) * n + col] * b[col];
            }
        }
        // Backward: solve U.
        for col in (0..n).rev() {
            let from = col.saturating_sub(self.ku);
            b[col] /= self.ab[self.ku * n + col];
            let x = b[col];
            for i in from..col {
                b[i] -= self.ab[(i + self.ku - col) * n + col] * x;
            }
        }
    }
}

/// Lowest `k` eigenpairs: Sturm bisection for values, inverse iteration for
/// vectors. Near-degenerate clusters (spacing below 1e-10·‖A‖) share a single
/// factorization and are orthogonalized against each other every iteration.
///
/// Each returned pair is certified to satisfy `‖Av − λv‖ < 1e-10·‖A‖`; a pair
/// that fails after the iteration cap is a hard error.
pub fn lowest_eigenpairs(a: &SymBanded, k: usize) -> Result<EigenPairs> {
    let values = lowest_eigenvalues(a, k)?;
    let scale = a.norm_inf().max(f64::MIN_POSITIVE);
    let cluster_tol = scale * 1e-10;
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);

    let mut idx = 0;
    while idx < k {
        // Group eigenvalues into a cluster sharing one shift.
        let mut end = idx + 1;
        while end < k && values[end] - values[end - 1] < cluster_tol {
            end += 1;
        }
        let shift = values[idx];
        let lu = BandedLu::factor(a, shift);
        for member in idx..end {
            let mut v = deterministic_unit_vector(a.n, member);
            for _ in 0..50 {
                lu.solve(&mut v);
                // Orthogonalize against the cluster members already locked in.
                for prev in &vectors[idx..] {
                    let dot: f64 = prev.iter().zip(&v).map(|(p, x)| p * x).sum();
                    for (x, p) in v.iter_mut().zip(prev) {
                        *x -= dot * p;
                    }
                }
                normalize(&mut v);
                if residual_norm(a, &v, values[member]) < 1e-10 * scale {
                    break;
                }
            }
            if residual_norm(a, &v, values[member]) >= 1e-10 * scale {
                return Err(Error::NoConvergence(format!(
                    "inverse iteration for eigenvalue {member} (λ = {}) left residual {:.3e} > {:.3e}",
                    values[member],
                    residual_norm(a, &v, values[member]),
                    1e-10 * scale
                )));
            }
            canonical_sign(&mut v);
            vectors.push(v);
        }
        idx = end;
    }
    Ok(EigenPairs { values, vectors })
}

fn deterministic_unit_vector(n: usize, seed: usize) -> Vec<f64> {
    // Quasi-random but reproducible start: avoids accidental orthogonality to
    // the target eigenvector.
    let mut state = 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(seed as u64 + 1);
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
        .collect();
    normalize(&mut v);
    v
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}

/// Deterministic sign: the largest-magnitude component is made positive.
pub fn canonical_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

fn residual_norm(a: &SymBanded, v: &[f64], lambda: f64) -> f64 {
    let mut av = vec![0.0; a.n];
    a.matvec(v, &mut av);
    av.iter()
        .zip(v)
        .map(|(y, x)| {
            let r = y - lambda * x;
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

/// Cyclic Jacobi eigensolver for small dense symmetric matrices, used to
/// rotate inside degenerate blocks. `m` is row-major `dim × dim`. Returns
/// (eigenvalues ascending, row-major eigenvector matrix with eigenvectors in
/// columns).
pub fn jacobi_small(m: &[f64], dim: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = m.to_vec();
    let mut v = vec![0.0; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..dim {
            for q in p + 1..dim {
                off += a[p * dim + q] * a[p * dim + q];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..dim {
                    let aip = a[i * dim + p];
                    let aiq = a[i * dim + q];
                    a[i * dim + p] = c * aip - s * aiq;
                    a[i * dim + q] = s * aip + c * aiq;
                }
                for j in 0..dim {
                    let apj = a[p * dim + j];
                    let aqj = a[q * dim + j];
                    a[p * dim + j] = c * apj - s * aqj;
                    a[q * dim + j] = s * apj + c * aqj;
                }
                for i in 0..dim {
                    let vip = v[i * dim + p];
                    let viq = v[i * dim + q];
                    v[i * dim + p] = c * vip - s * viq;
                    v[i * dim + q] = s * vip + c * viq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| a[i * dim + i].partial_cmp(&a[j * dim + j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[i * dim + i]).collect();
    let mut vectors = vec![0.0; dim * dim];
    for (newcol, &oldcol) in order.iter().enumerate() {
        for i in 0..dim {
            vectors[i * dim + newcol] = v[i * dim + oldcol];
        }
    }
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag_toeplitz(n: usize, diag: f64, off: f64) -> SymBanded {
        let mut m = SymBanded::zeros(n, 1);
        for i in 0..n {
            m.set(i, i, diag);
            if i > 0 {
                m.set(i, i - 1, off);
            }
        }
        m
    }

    /// Eigenvalues of the (diag, off) tridiagonal Toeplitz matrix are
    /// diag + 2·off·cos(kπ/(n+1)).
    fn toeplitz_eigs(n: usize, diag: f64, off: f64) -> Vec<f64> {
        let mut e: Vec<f64> = (1..=n)
            .map(|k| diag + 2.0 * off * (k as f64 * std::f64::consts::PI / (n + 1) as f64).cos())
            .collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e
    }

    #[test]
    fn count_below_toeplitz() {
        let n = 50;
        let m = tridiag_toeplitz(n, 2.0, -1.0);
        let exact = toeplitz_eigs(n, 2.0, -1.0);
        for sigma in [0.01, 0.5, 1.0, 2.0, 3.9, 4.5] {
            let count = m.count_below(sigma);
            let expect = exact.iter().filter(|&&e| e < sigma).count();
            assert_eq!(count, expect, "sigma = {sigma}");
        }
    }

    #[test]
    fn lowest_eigenvalues_toeplitz() {
        let n = 80;
        let m = tridiag_toeplitz(n, 2.0, -1.0);
        let exact = toeplitz_eigs(n, 2.0, -1.0);
        let vals = lowest_eigenvalues(&m, 5).unwrap();
        for (v, e) in vals.iter().zip(&exact) {
            assert!((v - e).abs() < 1e-12, "{v} vs {e}");
        }
    }

    #[test]
    fn eigenpairs_certified_toeplitz() {
        let n = 120;
        let m = tridiag_toeplitz(n, 2.0, -1.0);
        let pairs = lowest_eigenpairs(&m, 4).unwrap();
        let scale = m.norm_inf();
        for (lam, v) in pairs.values.iter().zip(&pairs.vectors) {
            assert!(residual_norm(&m, v, *lam) < 1e-10 * scale);
        }
        // Orthonormality.
        for i in 0..4 {
            for j in 0..4 {
                let dot: f64 = pairs.vectors[i].iter().zip(&pairs.vectors[j]).map(|(a, b)| a * b).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-9, "({i},{j}) dot = {dot}");
            }
        }
    }

    #[test]
    fn eigenpairs_degenerate_block() {
        // 2x2 identity blocks produce exactly degenerate eigenvalues; the
        // solver must still return an orthonormal set.
        let n = 40;
        let mut m = SymBanded::zeros(n, 2);
        for i in 0..n {
            m.set(i, i, (i / 2) as f64);
        }
        let pairs = lowest_eigenpairs(&m, 4).unwrap();
        assert!((pairs.values[0] - 0.0).abs() < 1e-12);
        assert!((pairs.values[1] - 0.0).abs() < 1e-12);
        assert!((pairs.values[2] - 1.0).abs() < 1e-12);
        for i in 0..4 {
            for j in i + 1..4 {
                let dot: f64 = pairs.vectors[i].iter().zip(&pairs.vectors[j]).map(|(a, b)| a * b).sum();
                assert!(dot.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn banded_lu_solves() {
        let n = 30;
        let m = tridiag_toeplitz(n, 4.0, 1.0);
        let lu = BandedLu::factor(&m, 0.7);
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut b = vec![0.0; n];
        m.matvec(&x_true, &mut b);
        for (bi, xi) in b.iter_mut().zip(&x_true) {
            *bi -= 0.7 * xi;
        }
        lu.solve(&mut b);
        for (xs, xt) in b.iter().zip(&x_true) {
            assert!((xs - xt).abs() < 1e-10);
        }
    }

    #[test]
    fn jacobi_small_known() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3.
        let (vals, vecs) = jacobi_small(&[2.0, 1.0, 1.0, 2.0], 2);
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 3.0).abs() < 1e-12);
        // Eigenvector of 1 is (1, -1)/√2 up to sign.
        assert!((vecs[0].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn norm_and_matvec_consistency() {
        let mut m = SymBanded::zeros(6, 2);
        for i in 0..6 {
            m.set(i, i, i as f64 + 1.0);
            if i >= 1 {
                m.set(i, i - 1, 0.5);
            }
            if i >= 2 {
                m.set(i, i - 2, -0.25);
            }
        }
        let x = [1.0, -1.0, 2.0, 0.0, 1.0, -2.0];
        let mut y = [0.0; 6];
        m.matvec(&x, &mut y);
        // Dense reference.
        for i in 0..6 {
            let mut expect = 0.0;
            for j in 0..6 {
                expect += m.get(i, j) * x[j];
            }
            assert!((y[i] - expect).abs() < 1e-14);
        }
        assert!(m.norm_inf() >= 6.0);
    }
}
