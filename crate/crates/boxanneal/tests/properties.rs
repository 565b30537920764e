//! Randomized invariant checks over the admissible parameter space.

use boxanneal::dst::DstPlan;
use boxanneal::hamiltonian::{build_hamiltonian, BasisSpec};
use boxanneal::potential::BoxPotential;
use boxanneal::spectrum;
use num_complex::Complex64;
use proptest::prelude::*;

fn mu_strategy() -> impl Strategy<Value = u32> {
    (1u32..=7).prop_map(|k| 4 * k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Comb and envelope bound the potential: each term lies in [0, its own
    /// amplitude], shifted by 2a when the envelope is attractive.
    #[test]
    fn potential_bounded(mu in mu_strategy(), a in -0.5f64..0.5, x in 0.0f64..1.0) {
        let p = BoxPotential::new(mu, a, 1.0).unwrap();
        let v = p.eval(x).unwrap();
        prop_assert!(v >= 2.0 * a.min(0.0) - 1e-12);
        prop_assert!(v <= 1.0 + 2.0 * a.max(0.0) + 1e-12);
    }

    /// A comb of period 4L/μ folded by the envelope keeps μ/2 + 1 minima.
    #[test]
    fn minima_count(mu in mu_strategy(), a in -0.4f64..0.4) {
        let p = BoxPotential::new(mu, a, 1.0).unwrap();
        prop_assert_eq!(p.minima().len(), mu as usize / 2 + 1);
    }

    /// H(s) stays symmetric and banded with half-bandwidth max(2, μ).
    #[test]
    fn hamiltonian_symmetric_banded(
        mu in mu_strategy(),
        a in -0.4f64..0.4,
        log_s in 0.0f64..6.0,
        n_dim in 40usize..120,
    ) {
        let p = BoxPotential::new(mu, a, 1.0).unwrap();
        let basis = BasisSpec::natural(n_dim);
        let h = build_hamiltonian(&p, 10f64.powf(log_s), &basis).unwrap();
        let bw = (mu as usize).max(2);
        for i in 0..n_dim {
            for j in i..n_dim {
                let hij = h.matrix.get(i, j);
                prop_assert!((hij - h.matrix.get(j, i)).abs() < 1e-14 * (1.0 + hij.abs()));
                if j - i > bw {
                    prop_assert_eq!(hij, 0.0);
                }
            }
        }
    }

    /// Eigenvalues come out ascending and certified.
    #[test]
    fn eigenvalues_ascending(
        mu in mu_strategy(),
        a in -0.4f64..0.4,
        log_s in 0.0f64..5.0,
    ) {
        let p = BoxPotential::new(mu, a, 1.0).unwrap();
        let basis = BasisSpec::natural(160);
        let h = build_hamiltonian(&p, 10f64.powf(log_s), &basis).unwrap();
        let e = spectrum::eigenvalues(&h, 6).unwrap();
        for w in e.windows(2) {
            prop_assert!(w[0] <= w[1] + 1e-12);
        }
    }

    /// The unitary sine transform is an exact involution.
    #[test]
    fn dst_involution(n in 8usize..200, seed in any::<u64>()) {
        let mut state = seed | 1;
        let mut rand = move || {
            // xorshift64*: cheap deterministic reals in [-1, 1]
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64
                / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let mut plan = DstPlan::new(n);
        let original: Vec<Complex64> =
            (0..n).map(|_| Complex64::new(rand(), rand())).collect();
        let mut buf = original.clone();
        plan.apply(&mut buf);
        plan.apply(&mut buf);
        for (a, b) in original.iter().zip(&buf) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    /// Gaps of a sweep are nonnegative and Δ_0 = 0.
    #[test]
    fn sweep_gaps_nonnegative(mu in mu_strategy(), a in -0.3f64..0.3) {
        let p = BoxPotential::new(mu, a, 1.0).unwrap();
        let basis = BasisSpec::natural(120);
        let grid = spectrum::log_grid(1.0, 3.0, 5);
        let sw = spectrum::sweep(&p, &grid, 3, &basis, false).unwrap();
        prop_assert!(spectrum::gaps(&sw, 0).unwrap().iter().all(|&g| g == 0.0));
        prop_assert!(spectrum::gaps(&sw, 2).unwrap().iter().all(|&g| g >= 0.0));
    }
}

/// Small-s limit: kinetic term dominates and E_n → K_n/s.
#[test]
fn kinetic_limit() {
    let p = BoxPotential::new(8, 0.2, 1.0).unwrap();
    let basis = BasisSpec::natural(200);
    let s = 1e-2;
    let h = build_hamiltonian(&p, s, &basis).unwrap();
    let e = spectrum::eigenvalues(&h, 4).unwrap();
    for (n, &en) in e.iter().enumerate() {
        let k_n = basis.kinetic_eigenvalue(n) / s;
        assert!(
            ((en - k_n) / k_n).abs() < 0.01,
            "level {n}: {en} vs kinetic {k_n}"
        );
    }
}
