use holoform::hilbert::{Embedding, Form, HilbertSpace};
use holoform::holo::{perturbation_radius, FormFamily};
use holoform::laxmilgram::{accretivity_margin, associated_operator, coercivity_constant};
use holoform::linalg::{self, cr};
use holoform::sampling::Sampler;
use holoform::scenario::{parse_config, Scenario};
use holoform::sector::{min_semiangle, sector_check};
use holoform::semigroup::{euler_iterate, matrix_exponential, operator_at, time_grid, SemigroupSnapshot, GrowthBound};
use proptest::prelude::*;

fn random_family(seed: u64, n: usize, degree: usize) -> FormFamily {
    let mut rng = Sampler::new(seed);
    let v = HilbertSpace::new(rng.pd_matrix(n, 0.4)).unwrap();
    let h = HilbertSpace::new(rng.pd_matrix(n, 0.4)).unwrap();
    let emb = Embedding::new(v, h, rng.invertible(n)).unwrap();
    let mut coeffs = vec![rng.coercive_matrix(n, 0.2, 2.0)];
    for _ in 0..degree {
        coeffs.push(rng.matrix(n).scale(0.3));
    }
    FormFamily::new(emb, coeffs, 5.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normalization_puts_vertex_at_one(seed in 0u64..10_000, n in 1usize..7) {
        let fam = random_family(seed, n, 1);
        let norm = fam.shifted(fam.normalizing_shift().unwrap());
        prop_assert!((norm.vertex_at_zero().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn minimal_slope_is_a_sector_and_minimal(seed in 0u64..10_000, n in 1usize..7) {
        let fam = random_family(seed, n, 0);
        let fam = fam.shifted(fam.normalizing_shift().unwrap());
        let form = fam.eval(cr(0.0)).unwrap();
        let emb = fam.embedding();
        let slope = min_semiangle(&form, emb, 0.0).unwrap().slope;
        prop_assert!(sector_check(&form, emb, 0.0, slope).unwrap().holds);
        if slope > 1e-6 {
            prop_assert!(!sector_check(&form, emb, 0.0, 0.99 * slope).unwrap().holds);
        }
    }

    #[test]
    fn accretivity_dominates_coercivity(seed in 0u64..10_000, n in 1usize..7) {
        let mut rng = Sampler::new(seed);
        let v = HilbertSpace::new(rng.pd_matrix(n, 0.3)).unwrap();
        let h = HilbertSpace::new(rng.pd_matrix(n, 0.3)).unwrap();
        let emb = Embedding::new(v.clone(), h, rng.invertible(n)).unwrap();
        let form = Form::new(v, rng.coercive_matrix(n, 0.2, 1.0)).unwrap();
        let alpha = coercivity_constant(&form).unwrap().alpha;
        let op = associated_operator(&form, &emb).unwrap();
        let c = emb.bound();
        prop_assert!(accretivity_margin(&op) >= alpha / (c * c) - 1e-10);
    }

    #[test]
    fn certificate_invariants_hold_inside_the_disc(seed in 0u64..10_000, n in 1usize..6, frac in 0.0f64..1.0, angle in 0.0f64..6.3) {
        let fam = random_family(seed, n, 2);
        let fam = fam.shifted(fam.normalizing_shift().unwrap());
        let cert = perturbation_radius(&fam, 1e-9).unwrap();
        let z = num_complex::Complex64::from_polar(frac * cert.radius, angle);
        let a0 = fam.eval(cr(0.0)).unwrap();
        let az = fam.eval(z).unwrap();
        // Re a_z >= Re a_0 / 2 as Hermitian matrices
        let diff = az.real_part() - a0.real_part().scale(0.5);
        let (eigs, _) = linalg::eigh(&diff);
        prop_assert!(eigs[0] >= -1e-10 * linalg::spectral_norm(&a0.real_part()));
        prop_assert!(sector_check(&az, fam.embedding(), 0.0, cert.slope_bound).unwrap().holds);
    }

    #[test]
    fn semigroups_of_normalized_operators_contract(seed in 0u64..10_000, n in 1usize..6) {
        let fam = random_family(seed, n, 0);
        let fam = fam.shifted(fam.normalizing_shift().unwrap());
        let a = operator_at(&fam, cr(0.0)).unwrap();
        let h = fam.embedding().codomain();
        let snap = SemigroupSnapshot::new(&a, time_grid(2.0, 11), GrowthBound::CONTRACTION);
        prop_assert!(snap.identity_defect() <= 1e-12);
        prop_assert!(snap.semigroup_law_defect() <= 1e-9);
        prop_assert!(snap.growth_excess(h) <= 1e-12);
    }

    #[test]
    fn euler_iterate_commutes_with_exponential(seed in 0u64..10_000, n in 1usize..6, t in 0.01f64..3.0) {
        let mut rng = Sampler::new(seed);
        let a = rng.accretive_matrix(n, 0.1, 1.0);
        let it = euler_iterate(&a, t, 16).unwrap();
        let e = matrix_exponential(&a, cr(t));
        let comm = &it * &e - &e * &it;
        prop_assert!(linalg::spectral_norm(&comm) <= 1e-12);
    }

    #[test]
    fn scenario_round_trip(seed in 0u64..10_000, n in 1usize..5, shift in proptest::option::of(-2.0f64..2.0)) {
        let fam = random_family(seed, n, 2);
        let mut s = Scenario::new(fam);
        s.seed = seed;
        s.shift = shift;
        let again = parse_config(&s.to_json()).unwrap();
        prop_assert_eq!(again, s);
    }
}
