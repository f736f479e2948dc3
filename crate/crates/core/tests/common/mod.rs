#![allow(dead_code)]

use ndarray::{Array1, Array2, Array3, Array4};
use num_traits::Zero;
use rand::Rng;
use submersion_core::{Exact, IntegrabilityData, IntegrabilityJet, Scalar};

/// Antisymmetric `f[[k, i, j]]` from the upper triangle of `raw`.
pub fn antisym3<T: Scalar>(n: usize, raw: impl Fn(usize, usize, usize) -> T) -> Array3<T> {
    Array3::from_shape_fn((n, n, n), |(k, i, j)| {
        if i < j {
            raw(k, i, j)
        } else if i > j {
            -raw(k, j, i)
        } else {
            T::zero()
        }
    })
}

pub fn antisym2<T: Scalar>(n: usize, raw: impl Fn(usize, usize) -> T) -> Array2<T> {
    Array2::from_shape_fn((n, n), |(i, j)| {
        if i < j {
            raw(i, j)
        } else if i > j {
            -raw(j, i)
        } else {
            T::zero()
        }
    })
}

pub fn random_data<R: Rng>(rng: &mut R, n: usize, scale: f64) -> IntegrabilityData<f64> {
    let fv: Vec<f64> = (0..n * n * n).map(|_| rng.gen_range(-scale..scale)).collect();
    let sv: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-scale..scale)).collect();
    let kappa = Array1::from_shape_fn(n, |_| rng.gen_range(-scale..scale));
    IntegrabilityData::new(
        n,
        antisym3(n, |k, i, j| fv[(k * n + i) * n + j]),
        kappa,
        antisym2(n, |i, j| sv[i * n + j]),
    )
    .unwrap()
}

/// Random jet; derivative slots filled independently of the base values.
pub fn random_jet<R: Rng>(rng: &mut R, base: IntegrabilityData<f64>) -> IntegrabilityJet<f64> {
    let n = base.n();
    let mut d_f = Array4::zeros((n + 1, n, n, n));
    let mut d_sigma = Array3::zeros((n + 1, n, n));
    for a in 0..=n {
        let other = random_data(rng, n, 1.0);
        d_f.index_axis_mut(ndarray::Axis(0), a).assign(other.f());
        d_sigma.index_axis_mut(ndarray::Axis(0), a).assign(other.sigma());
    }
    let d_kappa = Array2::from_shape_fn((n + 1, n), |_| rng.gen_range(-1.0..1.0));
    let dd = Array2::from_shape_fn((n + 1, n), |_| rng.gen_range(-1.0..1.0));
    IntegrabilityJet::new(base, d_f, d_kappa, d_sigma, dd).unwrap()
}

/// `p / q` with `|p| <= 12`, `1 <= q <= 8`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Exact {
    Exact::new(rng.gen_range(-12..=12), rng.gen_range(1..=8))
}

pub fn random_exact_f<R: Rng>(rng: &mut R, n: usize) -> Array3<Exact> {
    let fv: Vec<Exact> = (0..n * n * n).map(|_| small_rational(rng)).collect();
    antisym3(n, |k, i, j| fv[(k * n + i) * n + j])
}

/// Dyadic `m / 2^e` with small `m` and `e`; sums and halvings stay exact in f64.
pub fn dyadic<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(-1024i32..=1024) as f64 / f64::from(1u32 << rng.gen_range(0..10))
}

pub fn random_skew<R: Rng>(rng: &mut R, n: usize) -> Array2<f64> {
    let sv: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    antisym2(n, |i, j| sv[i * n + j])
}

/// Frame-constant data in adapted shape: `kappa = (k1, 0, ..)`, tridiagonal
/// `sigma`, arbitrary `f`.
pub fn random_adapted<R: Rng>(rng: &mut R, n: usize) -> IntegrabilityData<f64> {
    let generic = random_data(rng, n, 1.0);
    let mut kappa = Array1::zeros(n);
    kappa[0] = rng.gen_range(0.1..2.0);
    let sup: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let sigma = antisym2(n, |i, j| if j == i + 1 { sup[i] } else { 0.0 });
    IntegrabilityData::new(n, generic.f().clone(), kappa, sigma).unwrap()
}

pub fn max_abs<'a>(it: impl IntoIterator<Item = &'a f64>) -> f64 {
    it.into_iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

pub fn is_zero_exact(it: impl IntoIterator<Item = Exact>) -> bool {
    it.into_iter().all(|v| v.is_zero())
}
