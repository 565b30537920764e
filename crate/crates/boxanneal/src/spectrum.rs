//! Low-lying spectra over the annealing parameter and their features:
//! degenerate-level merging, gap closures (first-order transitions), and
//! flat-gap plateaus.

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::hamiltonian::{build_hamiltonian, BasisSpec, HamiltonianMatrix, StateVector};
use crate::linalg::{self, canonical_sign, jacobi_small, EigenPairs};
use crate::potential::BoxPotential;

/// Lowest-k levels (and optionally eigenvectors) over an s-grid.
#[derive(Debug, Clone)]
pub struct SpectrumSweep {
    pub s_grid: Vec<f64>,
    /// `levels[i][n]` = E_n at `s_grid[i]`, ascending in n.
    pub levels: Vec<Vec<f64>>,
    /// Per grid point, per level, the coefficient vector (when requested).
    pub eigenvectors: Option<Vec<Vec<Vec<f64>>>>,
}

/// A detected spectral feature.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GapFeature {
    pub kind: FeatureKind,
    pub level: usize,
    pub s_lo: f64,
    pub s_hi: f64,
    /// Gap magnitude at the feature (median over a plateau, minimum at a
    /// closure).
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureKind {
    Closure,
    FlatPlateau,
    Merge,
}

/// Lowest `k` eigenpairs of `H`, energies ascending, eigenvectors unit-norm
/// with the largest-magnitude coefficient positive. Degenerate blocks
/// (relative splitting below 1e-12) are rotated to localize each member on
/// the position coordinate, making the returned basis deterministic and
/// physically readable (one vector per well).
pub fn eigensolve(h: &HamiltonianMatrix, k: usize) -> Result<EigenPairs> {
    let mut pairs = linalg::lowest_eigenpairs(&h.matrix, k)?;
    localize_degenerate_blocks(&mut pairs, &h.basis);
    Ok(pairs)
}

/// Eigenvalues only (cheaper when vectors are not needed).
pub fn eigenvalues(h: &HamiltonianMatrix, k: usize) -> Result<Vec<f64>> {
    linalg::lowest_eigenvalues(&h.matrix, k)
}

/// Exact sine-basis matrix element of the position operator,
/// `⟨φ_p|x|φ_q⟩ = (1/L)[J(p−q) − J(p+q+2)]` with
/// `J(r) = L²((−1)^r − 1)/(rπ)²` and `J(0) = L²/2`.
fn position_element(p: usize, q: usize, l: f64) -> f64 {
    let j = |r: i64| -> f64 {
        if r == 0 {
            l * l / 2.0
        } else {
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            l * l * (sign - 1.0) / (r as f64 * std::f64::consts::PI).powi(2)
        }
    };
    (j(p as i64 - q as i64) - j((p + q + 2) as i64)) / l
}

fn localize_degenerate_blocks(pairs: &mut EigenPairs, basis: &BasisSpec) {
    let k = pairs.values.len();
    let scale = pairs.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = scale * 1e-12;
    let mut i = 0;
    while i < k {
        let mut j = i + 1;
        while j < k && pairs.values[j] - pairs.values[j - 1] < tol {
            j += 1;
        }
        let dim = j - i;
        if dim > 1 {
            // Project x onto the block and diagonalize; the rotated vectors
            // are the maximally localized combinations.
            let n = basis.n_dim;
            let mut xblock = vec![0.0; dim * dim];
            for bi in 0..dim {
                for bj in bi..dim {
                    let mut acc = 0.0;
                    let vi = &pairs.vectors[i + bi];
                    let vj = &pairs.vectors[i + bj];
                    for p in 0..n {
                        for q in 0..n {
                            acc += vi[p] * position_element(p, q, basis.l) * vj[q];
                        }
                    }
                    xblock[bi * dim + bj] = acc;
                    xblock[bj * dim + bi] = acc;
                }
            }
            let (_xs, rot) = jacobi_small(&xblock, dim);
            let old: Vec<Vec<f64>> = (i..j).map(|c| pairs.vectors[c].clone()).collect();
            for col in 0..dim {
                let dst = &mut pairs.vectors[i + col];
                for x in dst.iter_mut() {
                    *x = 0.0;
                }
                for (row, src) in old.iter().enumerate() {
                    let w = rot[row * dim + col];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += w * s;
                    }
                }
                canonical_sign(dst);
            }
        }
        i = j;
    }
}

/// Eigensolve at every point of an increasing `s_grid`. Grid points run in
/// parallel; a sequential post-pass flips eigenvector signs for continuity
/// along the sweep.
pub fn sweep(
    p: &BoxPotential,
    s_grid: &[f64],
    k: usize,
    basis: &BasisSpec,
    keep_vectors: bool,
) -> Result<SpectrumSweep> {
    if s_grid.is_empty() {
        return Err(domain("empty s grid".to_string()));
    }
    if s_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("s grid must be strictly increasing".to_string()));
    }
    let solved: Result<Vec<EigenPairs>> = s_grid
        .par_iter()
        .map(|&s| {
            let h = build_hamiltonian(p, s, basis)?;
            if keep_vectors {
                eigensolve(&h, k)
            } else {
                Ok(EigenPairs { values: eigenvalues(&h, k)?, vectors: Vec::new() })
            }
        })
        .collect();
    let mut solved = solved?;

    if keep_vectors {
        // Sign continuity: match each vector against the previous grid point.
        for i in 1..solved.len() {
            let (prev, cur) = solved.split_at_mut(i);
            let prev = &prev[i - 1];
            for (n, v) in cur[0].vectors.iter_mut().enumerate() {
                if n < prev.vectors.len() {
                    let dot: f64 = prev.vectors[n].iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                    if dot < 0.0 {
                        for x in v.iter_mut() {
                            *x = -*x;
                        }
                    }
                }
            }
        }
    }

    let levels = solved.iter().map(|e| e.values.clone()).collect();
    let eigenvectors = keep_vectors.then(|| solved.into_iter().map(|e| e.vectors).collect());
    Ok(SpectrumSweep { s_grid: s_grid.to_vec(), levels, eigenvectors })
}

/// Gap series `Δ_n(s) = E_n(s) − E_0(s)` along a sweep.
pub fn gaps(sw: &SpectrumSweep, n: usize) -> Result<Vec<f64>> {
    if sw.levels.iter().any(|l| n >= l.len()) {
        return Err(domain(format!("level {n} not present in the sweep")));
    }
    Ok(sw.levels.iter().map(|l| (l[n] - l[0]).max(0.0)).collect())
}

/// Searches a sweep for the first point where `Δ_n(s)` dips below `tol` and
/// refines its location. A closure usually lies between grid points with the
/// on-grid gap well above `tol`, so grid minima of the gap are refined by
/// golden-section search in log s (fresh eigensolves) before the threshold
/// test. Returns the refined `s*`, or `None` if no dip reaches `tol`.
pub fn detect_gap_closure(
    sw: &SpectrumSweep,
    p: &BoxPotential,
    basis: &BasisSpec,
    n: usize,
    tol: f64,
) -> Result<Option<f64>> {
    if !(tol > 0.0) {
        return Err(domain("closure tolerance must be positive".to_string()));
    }
    let g = gaps(sw, n)?;
    let m = g.len();
    let gap_at = |s: f64| -> Result<f64> {
        let h = build_hamiltonian(p, s, basis)?;
        let e = eigenvalues(&h, n + 1)?;
        Ok(e[n] - e[0])
    };
    for i in 0..m {
        let is_local_min = (i == 0 || g[i] <= g[i - 1]) && (i + 1 == m || g[i] <= g[i + 1]);
        if g[i] < tol {
            return Ok(Some(sw.s_grid[i]));
        }
        if !is_local_min || i == 0 || i + 1 == m {
            continue;
        }
        // Golden-section minimization of the gap in log s over the bracket.
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut lo = sw.s_grid[i - 1].ln();
        let mut hi = sw.s_grid[i + 1].ln();
        let mut x1 = hi - phi * (hi - lo);
        let mut x2 = lo + phi * (hi - lo);
        let mut f1 = gap_at(x1.exp())?;
        let mut f2 = gap_at(x2.exp())?;
        for _ in 0..40 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = gap_at(x1.exp())?;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = gap_at(x2.exp())?;
            }
        }
        let s_star = (0.5 * (lo + hi)).exp();
        if gap_at(s_star)? < tol {
            return Ok(Some(s_star));
        }
    }
    Ok(None)
}

/// Maximal s-intervals where the relative slope
/// `|d ln Δ_n / d(log₁₀ s)|` stays below `slope_tol` while the gap itself
/// stays open (above `min_gap`). The logarithmic derivative makes the
/// criterion scale-invariant: a plateau is a stretch where the gap changes
/// by less than a `slope_tol` fraction per decade of s, regardless of its
/// magnitude. Reports each interval with the median gap over it.
pub fn detect_flat_gaps(
    sw: &SpectrumSweep,
    n: usize,
    slope_tol: f64,
    min_gap: f64,
) -> Result<Vec<GapFeature>> {
    if sw.s_grid.len() < 3 {
        return Err(domain("flat-gap detection needs at least 3 grid points".to_string()));
    }
    let g = gaps(sw, n)?;
    let logs: Vec<f64> = sw.s_grid.iter().map(|s| s.log10()).collect();
    let m = g.len();
    // Central-difference slope; one-sided at the edges.
    let slope = |i: usize| -> f64 {
        let (lo, hi) = if i == 0 {
            (0, 1)
        } else if i + 1 == m {
            (m - 2, m - 1)
        } else {
            (i - 1, i + 1)
        };
        if g[hi] <= 0.0 || g[lo] <= 0.0 {
            return f64::INFINITY;
        }
        (g[hi].ln() - g[lo].ln()) / (logs[hi] - logs[lo])
    };
    let flat: Vec<bool> = (0..m).map(|i| slope(i).abs() < slope_tol && g[i] > min_gap).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < m {
        if flat[i] {
            let start = i;
            while i < m && flat[i] {
                i += 1;
            }
            let mut vals: Vec<f64> = g[start..i].to_vec();
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            out.push(GapFeature {
                kind: FeatureKind::FlatPlateau,
                level: n,
                s_lo: sw.s_grid[start],
                s_hi: sw.s_grid[i - 1],
                value: vals[vals.len() / 2],
            });
        } else {
            i += 1;
        }
    }
    Ok(out)
}

/// Number of levels within `tol` of the ground energy (the ground level
/// itself included).
pub fn degenerate_with_ground(energies: &[f64], tol: f64) -> usize {
    energies.iter().take_while(|&&e| e - energies[0] < tol).count()
}

/// Identifies the lowest level whose density concentrates at the two interior
/// minima adjacent to the walls (x ≈ 2L/μ and L − 2L/μ). Used to pick the
/// reference level for residual energies in the concave landscape, where the
/// target state is not the global ground state.
pub fn find_adjacent_level(
    p: &BoxPotential,
    pairs: &EigenPairs,
    basis: &BasisSpec,
    min_fraction: f64,
) -> Result<usize> {
    let x_adj = p.adjacent_minimum_x();
    let window = 0.55 * p.l / p.mu as f64;
    let n_grid = 2048;
    let grid: Vec<f64> = (1..n_grid).map(|i| i as f64 * p.l / n_grid as f64).collect();
    for (idx, v) in pairs.vectors.iter().enumerate() {
        let st = StateVector::from_real(v, *basis);
        let psi = st.to_position(&grid)?;
        let mut inside = 0.0;
        let mut total = 0.0;
        for (x, amp) in grid.iter().zip(&psi) {
            let d = amp.norm_sqr();
            total += d;
            if (x - x_adj).abs() < window || (x - (p.l - x_adj)).abs() < window {
                inside += d;
            }
        }
        if inside / total > min_fraction {
            return Ok(idx);
        }
    }
    Err(Error::NotFound(format!(
        "no level among the lowest {} localizes at the adjacent minima",
        pairs.vectors.len()
    )))
}

/// Log-uniform grid helper: `count` points from `10^lo` to `10^hi`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![10f64.powf(lo)];
    }
    (0..count)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (count - 1) as f64))
        .collect()
}
