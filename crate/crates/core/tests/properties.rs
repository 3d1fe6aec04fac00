use proptest::prelude::*;
use rand::Rng;

use haarquench::bounds::expected_purity;
use haarquench::dynamics::{distance_to_maximally_mixed, evolve, partial_trace_b, purity, trace_distance};
use haarquench::haar::{haar_unitary_from_rng, randomized_hamiltonian, sample_haar_unitary, unitarity_defect, SeedStream};
use haarquench::model::{
    pure_product_state, random_local_hamiltonian, separable_mixture, spectrum_from_solvable, DensityMatrix, LatticeSpec,
    SeparableComponent, SolvableSpectrumSpec, SpectrumTable, SubsystemSplit,
};
use haarquench::partition::{ball_constant, beta_r, build_partition};
use haarquench::spectral::{exact_spectrum_local, phi_direct, phi_solvable_abs, sigma2_from_spectrum, sigma2_local_contraction};
use haarquench::{CMatrix, CVector, Cplx};

fn random_state(d: usize, rng: &mut impl Rng) -> DensityMatrix<f64> {
    let u: CMatrix<f64> = haar_unitary_from_rng(d, rng).unwrap();
    let w: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..1.0)).collect();
    let total: f64 = w.iter().sum();
    let mut m = u.clone();
    for j in 0..d {
        for i in 0..d {
            m[(i, j)] *= w[j] / total;
        }
    }
    DensityMatrix::new(m * u.adjoint()).unwrap()
}

fn random_unit(d: usize, rng: &mut impl Rng) -> CVector<f64> {
    let v = CVector::from_fn(d, |_, _| Cplx::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let n = v.norm();
    v.unscale(n)
}

fn random_spectrum(d: usize, rng: &mut impl Rng) -> SpectrumTable<f64> {
    SpectrumTable::new((0..d).map(|_| rng.random_range(-2.0..2.0)).collect()).unwrap()
}

fn separable(ds: usize, db: usize, rng: &mut impl Rng) -> DensityMatrix<f64> {
    let comps: Vec<SeparableComponent<f64>> = [0.6, 0.4]
        .iter()
        .map(|&weight| SeparableComponent {
            weight,
            rho_s: random_state(ds, rng),
            rho_b: random_state(db, rng),
        })
        .collect();
    separable_mixture(&comps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constructors_pass_density_checks(seed in any::<u64>(), ds in 1usize..5, db in 1usize..5) {
        let mut rng = SeedStream::new(seed).auxiliary(0);
        let prod = pure_product_state(&random_unit(ds, &mut rng), &random_unit(db, &mut rng)).unwrap();
        prop_assert!(prod.validate().is_ok());
        prop_assert!(separable(ds, db, &mut rng).validate().is_ok());
    }

    #[test]
    fn solvable_mean_and_variance(eps in prop::collection::vec(-2.0f64..2.0, 1..=10)) {
        let spec = SolvableSpectrumSpec::new(eps.clone()).unwrap();
        let table = spectrum_from_solvable(&spec).unwrap();
        let mean = 0.5 * eps.iter().sum::<f64>();
        let var = 0.25 * eps.iter().map(|e| e * e).sum::<f64>();
        prop_assert!((table.mean() - mean).abs() < 1e-10);
        prop_assert!((sigma2_from_spectrum(&table).sigma2 - var).abs() < 1e-10);
    }

    #[test]
    fn haar_unitarity_and_determinism(seed in any::<u64>(), k in 1u32..5, index in 0u64..1000) {
        let d = 1usize << k;
        let s = SeedStream::new(seed).sample(index);
        let u: CMatrix<f64> = sample_haar_unitary(d, &s).unwrap();
        prop_assert!(unitarity_defect(&u) < 1e-10);
        let again: CMatrix<f64> = sample_haar_unitary(d, &s).unwrap();
        prop_assert_eq!(u, again);
    }

    #[test]
    fn spectrum_is_preserved(seed in any::<u64>(), d in 2usize..12) {
        let mut rng = SeedStream::new(seed).auxiliary(1);
        let spec = random_spectrum(d, &mut rng);
        let h = randomized_hamiltonian(&spec, &SeedStream::new(seed).sample(0)).unwrap();
        let mut ev: Vec<f64> = h.materialize().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(spec.sorted()) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn evolution_keeps_spectrum_and_purity(seed in any::<u64>(), d in 2usize..10, t in -20.0f64..20.0) {
        let mut rng = SeedStream::new(seed).auxiliary(2);
        let spec = random_spectrum(d, &mut rng);
        let rho = random_state(d, &mut rng);
        let h = randomized_hamiltonian(&spec, &SeedStream::new(seed).sample(1)).unwrap();
        let out = evolve(&h, &rho, t).unwrap();
        prop_assert!((purity(&out) - purity(&rho)).abs() < 1e-10);
        for (a, b) in out.eigenvalues().iter().zip(rho.eigenvalues()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn trace_distance_is_a_metric(seed in any::<u64>(), d in 2usize..8) {
        let mut rng = SeedStream::new(seed).auxiliary(3);
        let (a, b, c) = (random_state(d, &mut rng), random_state(d, &mut rng), random_state(d, &mut rng));
        let ab = trace_distance(&a, &b).unwrap();
        prop_assert_eq!(ab, trace_distance(&b, &a).unwrap());
        let ac = trace_distance(&a, &c).unwrap();
        let cb = trace_distance(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-12);
    }

    #[test]
    fn quenched_separable_distance_is_bounded(seed in any::<u64>(), ds in 2usize..4, db in 2usize..4, t in 0.0f64..10.0) {
        let mut rng = SeedStream::new(seed).auxiliary(4);
        let split = SubsystemSplit::new(ds, db).unwrap();
        let spec = random_spectrum(split.d(), &mut rng);
        let rho = separable(ds, db, &mut rng);
        let h = randomized_hamiltonian(&spec, &SeedStream::new(seed).sample(2)).unwrap();
        let rs = partial_trace_b(&evolve(&h, &rho, t).unwrap(), &split).unwrap();
        prop_assert!(distance_to_maximally_mixed(&rs) <= 2.0 * (1.0 - 1.0 / ds as f64) + 1e-12);
    }

    #[test]
    fn pure_product_reduces_to_pure(seed in any::<u64>(), ds in 1usize..5, db in 1usize..5) {
        let mut rng = SeedStream::new(seed).auxiliary(5);
        let split = SubsystemSplit::new(ds, db).unwrap();
        let rho = pure_product_state(&random_unit(ds, &mut rng), &random_unit(db, &mut rng)).unwrap();
        prop_assert!((purity(&partial_trace_b(&rho, &split).unwrap()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn phi_modulus_and_conjugation(seed in any::<u64>(), d in 1usize..40, t in -50.0f64..50.0) {
        let mut rng = SeedStream::new(seed).auxiliary(6);
        let spec = random_spectrum(d, &mut rng);
        let p = phi_direct(&spec, t);
        prop_assert!(p.norm() <= 1.0 + 1e-12);
        prop_assert!((phi_direct(&spec, -t) - p.conj()).norm() <= 1e-12);
    }

    #[test]
    fn product_form_matches_direct(eps in prop::collection::vec(-2.0f64..2.0, 1..=12), t in -30.0f64..30.0) {
        let spec = SolvableSpectrumSpec::new(eps).unwrap();
        let table = spectrum_from_solvable(&spec).unwrap();
        prop_assert!((phi_solvable_abs(&spec, t) - phi_direct(&table, t).norm()).abs() <= 1e-12);
    }

    #[test]
    fn expected_purity_stays_physical(seed in any::<u64>(), ds in 2usize..9, db in 1usize..9, t in 0.0f64..20.0) {
        let mut rng = SeedStream::new(seed).auxiliary(7);
        let split = SubsystemSplit::new(ds, db).unwrap();
        let spec = random_spectrum(split.d(), &mut rng);
        let p = expected_purity(&split, phi_direct(&spec, t), phi_direct(&spec, 2.0 * t)).unwrap();
        prop_assert!(p >= 1.0 / ds as f64 - 1e-12 && p <= 1.0 + 1e-12);
    }

    #[test]
    fn partition_invariants(dim in 1usize..=2, m in 10usize..=64, r in 1usize..=2) {
        let lat = LatticeSpec::new(dim, m, r).unwrap();
        if let Ok(p) = build_partition(lat) {
            let c = p.check();
            prop_assert!(c.disjoint_cover && c.separated && c.min_block_distance > 2 * r);
            if c.applicable {
                prop_assert!(c.block_lower && c.block_upper && c.buffer_upper);
            }
            if c.k_window_preconditions {
                prop_assert!(c.k_lower && c.k_upper);
            }
        }
    }

    #[test]
    fn beta_monotone_and_dominated(dim in 1usize..=3, big_r in 1usize..=3) {
        let c = ball_constant(dim, 4 * big_r);
        for r in 1..=4 * big_r {
            prop_assert!(beta_r(dim, r) < beta_r(dim, r + 1));
            prop_assert!(beta_r(dim, r) < beta_r(dim + 1, r));
            prop_assert!(beta_r(dim, r) as f64 <= 1.0 + c * (r as f64).powi(dim as i32) + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn contraction_variance_matches_exact(seed in any::<u64>(), n in 3usize..=8, real in any::<bool>()) {
        let mut rng = SeedStream::new(seed).auxiliary(8);
        let spec = random_local_hamiltonian(LatticeSpec::chain(n, 1).unwrap(), 1.0f64, real, &mut rng).unwrap();
        let contraction = sigma2_local_contraction(&spec).unwrap().sigma2;
        let exact = sigma2_from_spectrum(&exact_spectrum_local(&spec).unwrap()).sigma2;
        prop_assert!((contraction - exact).abs() <= 1e-9 * exact.abs().max(1e-300));
    }
}
