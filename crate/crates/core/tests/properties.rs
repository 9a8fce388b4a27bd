use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hyperlap::diffusion::euler_update;
use hyperlap::hypergraph::{discrepancy_ratio, random};
use hyperlap::operator::{apply_operator, rayleigh_quotient, DEFAULT_TOL};
use hyperlap::verify::brute_force_operator;
use hyperlap::{Hypergraph, StateVector};

fn instance(seed: u64, max_n: usize) -> (Hypergraph, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 2 + (seed % (max_n as u64 - 1)) as usize;
    let h = random::hypergraph(&mut rng, n, 1 + (seed as usize / 7) % (2 * n), n.min(4));
    let f = random::vector_with_ties(&mut rng, n);
    (h, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rayleigh_equals_discrepancy(seed in any::<u64>()) {
        let (h, f) = instance(seed, 7);
        prop_assume!(f.iter().any(|&v| v != 0.0));
        let v = StateVector::weighted(f);
        let r = rayleigh_quotient(&h, &v).unwrap();
        let d = discrepancy_ratio(&h, &v).unwrap();
        prop_assert!((r - d).abs() <= 1e-9 * d.max(1.0));
    }

    #[test]
    fn flow_is_conservative_and_energy_holds(seed in any::<u64>()) {
        let (h, f) = instance(seed, 7);
        let res = apply_operator(&h, &StateVector::weighted(f), DEFAULT_TOL).unwrap();
        prop_assert!(res.net_flow().abs() <= 1e-10);
        prop_assert!(res.energy_residual(&h) <= 1e-8);
    }

    #[test]
    fn operator_commutes_with_shift_and_scale(seed in any::<u64>(), c in -5.0f64..5.0, s in 0.1f64..10.0) {
        let (h, f) = instance(seed, 6);
        let base = apply_operator(&h, &StateVector::weighted(f.clone()), DEFAULT_TOL).unwrap().r;
        let g: Vec<f64> = f.iter().map(|v| s * v + c).collect();
        let moved = apply_operator(&h, &StateVector::weighted(g), DEFAULT_TOL).unwrap().r;
        for (a, b) in base.iter().zip(&moved) {
            prop_assert!((s * a - b).abs() <= 1e-8 * s.max(1.0));
        }
    }

    #[test]
    fn matches_brute_force(seed in any::<u64>()) {
        let (h, f) = instance(seed, 6);
        let main = apply_operator(&h, &StateVector::weighted(f.clone()), DEFAULT_TOL).unwrap().r;
        let brute = brute_force_operator(&h, &f, DEFAULT_TOL).unwrap().r;
        for (a, b) in main.iter().zip(&brute) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }

    #[test]
    fn euler_step_preserves_total_measure(seed in any::<u64>(), dt in 1e-4f64..1e-1) {
        let (h, f) = instance(seed, 7);
        let mut phi: Vec<f64> = f.iter().zip(h.node_weights()).map(|(v, w)| v * w).collect();
        let before: f64 = phi.iter().sum();
        let r = apply_operator(&h, &StateVector::measure(phi.clone()), DEFAULT_TOL).unwrap().r;
        euler_update(&h, &mut phi, &r, dt);
        let after: f64 = phi.iter().sum();
        prop_assert!((after - before).abs() <= 1e-10 * before.abs().max(1.0));
    }
}
