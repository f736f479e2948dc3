mod common;

use common::*;
use ndarray::{Array1, Array2, Array3};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use submersion_core::framealg::{adapt_frame_data, frobenius, householder_reflector};
use submersion_core::*;

fn raw_data() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>, Vec<f64>)> {
    (2usize..=6).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(-3.0..3.0f64, n * n * n),
            prop::collection::vec(-3.0..3.0f64, n),
            prop::collection::vec(-3.0..3.0f64, n * n),
        )
    })
}

proptest! {
    #[test]
    fn constructor_accepts_exactly_antisymmetric_input((n, fv, kv, sv) in raw_data()) {
        let f = antisym3(n, |k, i, j| fv[(k * n + i) * n + j]);
        let sigma = antisym2(n, |i, j| sv[i * n + j]);
        let d = IntegrabilityData::new(n, f, Array1::from(kv), sigma).unwrap();
        prop_assert_eq!(d.symmetrize_check(), 0.0);
    }

    #[test]
    fn constructor_rejects_raw_input((n, fv, kv, sv) in raw_data()) {
        let f = Array3::from_shape_vec((n, n, n), fv).unwrap();
        let sigma = Array2::from_shape_vec((n, n), sv).unwrap();
        let defect = data::antisymmetry_defect(&f, &sigma);
        let result = IntegrabilityData::new(n, f, Array1::from(kv), sigma);
        if defect > 0.0 {
            let rejected = matches!(result, Err(GeometryError::AntisymmetryViolation { .. }));
            prop_assert!(rejected);
        } else {
            prop_assert!(result.is_ok());
        }
    }

    #[test]
    fn p_is_metric_compatible_in_floats((n, fv, kv, sv) in raw_data()) {
        let f = antisym3(n, |k, i, j| fv[(k * n + i) * n + j]);
        let d = IntegrabilityData::new(n, f, Array1::from(kv), antisym2(n, |i, j| sv[i * n + j])).unwrap();
        prop_assert_eq!(compute_p(&d).metric_defect(), 0.0);
    }

    #[test]
    fn p_is_torsion_free_exactly(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_exact_f(&mut rng, n);
        let d = IntegrabilityData::new(n, f, Array1::from_elem(n, Exact::from_integer(0)), Array2::from_elem((n, n), Exact::from_integer(0))).unwrap();
        let p = compute_p(&d);
        prop_assert!(num_traits::Zero::is_zero(&p.torsion_defect(&d)));
        prop_assert!(num_traits::Zero::is_zero(&p.metric_defect()));
    }

    #[test]
    fn curvature_residuals_are_affine_in_derivatives(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_exact_f(&mut rng, n);
        let sv: Vec<Exact> = (0..n * n).map(|_| small_rational(&mut rng)).collect();
        let base = IntegrabilityData::new(n, f, Array1::from_shape_fn(n, |_| small_rational(&mut rng)), antisym2(n, |i, j| sv[i * n + j])).unwrap();
        let mut d_f = ndarray::Array4::from_elem((n + 1, n, n, n), Exact::from_integer(0));
        for a in 0..=n {
            d_f.index_axis_mut(ndarray::Axis(0), a).assign(&random_exact_f(&mut rng, n));
        }
        let d_kappa = Array2::from_shape_fn((n + 1, n), |_| small_rational(&mut rng));
        let d_sigma = ndarray::Array3::from_shape_fn((n + 1, n, n), |(_, i, j)| if i == j { Exact::from_integer(0) } else if i < j { Exact::new((i * 3 + j) as i64, 5) } else { -Exact::new((j * 3 + i) as i64, 5) });
        let dd = Array2::from_shape_fn((n + 1, n), |_| small_rational(&mut rng));
        let jet = IntegrabilityJet::new(base, d_f, d_kappa, d_sigma, dd).unwrap();
        let c = small_rational(&mut rng);
        let r0 = curvature_residuals(&jet.with_scaled_derivatives(Exact::from_integer(0)), c);
        let r1 = curvature_residuals(&jet, c);
        let r2 = curvature_residuals(&jet.with_scaled_derivatives(Exact::from_integer(2)), c);
        let two = Exact::from_integer(2);
        for (a, (b, z)) in r2.r1.iter().zip(r1.r1.iter().zip(r0.r1.iter())) {
            prop_assert_eq!(*a - *z, two * (*b - *z));
        }
        for (a, (b, z)) in r2.r2.iter().zip(r1.r2.iter().zip(r0.r2.iter())) {
            prop_assert_eq!(*a - *z, two * (*b - *z));
        }
        for (a, (b, z)) in r2.r3.iter().zip(r1.r3.iter().zip(r0.r3.iter())) {
            prop_assert_eq!(*a - *z, two * (*b - *z));
        }
        for (a, (b, z)) in r2.r4.iter().zip(r1.r4.iter().zip(r0.r4.iter())) {
            prop_assert_eq!(*a - *z, two * (*b - *z));
        }
    }

    #[test]
    fn harmonic_jets_have_zero_bitension(seed in any::<u64>(), n in 2usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_data(&mut rng, n, 2.0);
        let d = IntegrabilityData::new(n, d.f().clone(), Array1::zeros(n), d.sigma().clone()).unwrap();
        let jet = random_jet(&mut rng, d);
        let jet = IntegrabilityJet::new(jet.base().clone(), jet.d_f().clone(), Array2::zeros((n + 1, n)), jet.d_sigma().clone(), Array2::zeros((n + 1, n))).unwrap();
        let ric = BaseRicci::from_symmetric_part(&Array2::from_shape_fn((n, n), |(i, j)| (i + 2 * j) as f64));
        let b = bitension_residual(&jet, &ric).unwrap();
        prop_assert!(b.residuals.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn householder_is_a_symmetric_involution(x in prop::collection::vec(-5.0..5.0f64, 1..10)) {
        let x = Array1::from(x);
        let h = householder_reflector(&x);
        let m = x.len();
        let hx = h.dot(&x);
        let norm = x.dot(&x).sqrt();
        prop_assert!((hx[0] - norm).abs() <= 1e-12 * norm.max(1.0));
        prop_assert!(hx.iter().skip(1).all(|v| v.abs() <= 1e-12 * norm.max(1.0)));
        let hh = h.dot(&h);
        for i in 0..m {
            for j in 0..m {
                prop_assert_eq!(h[[i, j]], h[[j, i]]);
                let t = if i == j { 1.0 } else { 0.0 };
                prop_assert!((hh[[i, j]] - t).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn adapted_form_invariants(seed in any::<u64>(), n in 1usize..=10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = random_skew(&mut rng, n);
        let kappa = Array1::from_shape_fn(n, |_| rand::Rng::gen_range(&mut rng, -1.0..1.0));
        let red = adapt_frame_data(&kappa, &sigma).unwrap();
        let fro = frobenius(&sigma);
        prop_assert!(red.orthogonality_defect() <= 1e-12 * n as f64);
        prop_assert!(red.tridiagonality_defect() <= 1e-11 * fro.max(f64::MIN_POSITIVE));
        prop_assert!(red.kappa_defect() <= 1e-12 * kappa.dot(&kappa).sqrt().max(1e-300));
        prop_assert!((frobenius(&red.sigma_out) - fro).abs() <= 1e-12 * fro.max(1.0));
        let t = &red.sigma_out + &red.sigma_out.t();
        prop_assert!(max_abs(t.iter()) <= 1e-12);
        // recomputable from the inputs
        let again = red.k.dot(&sigma).dot(&red.k.t());
        prop_assert!(max_abs((&again - &red.sigma_out).iter()) <= 1e-12);
        prop_assert_eq!(red.stages, 1 + n.saturating_sub(2));
        prop_assert_eq!(adapt_frame_data(&kappa, &sigma).unwrap(), red);
    }
}
