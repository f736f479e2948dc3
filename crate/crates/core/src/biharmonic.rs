//! Tension and bitension of a Riemannian submersion with one-dimensional fibres.
//!
//! The submersion is biharmonic iff for every `k`
//!
//! ```text
//!   sum_{i=1}^{n+1} e_i e_i(kappa_k) - sum_{i,j} P^j_ii e_j(kappa_k) - sum_i kappa_i e_i(kappa_k)
//! + sum_{i,j} [ 2 e_i(kappa_j) P^k_ij + kappa_j e_i(P^k_ij) + kappa_j P^l_ij P^k_il
//!             - kappa_i kappa_j P^k_ij - kappa_j P^l_ii P^k_lj ]
//! + Ricci^N(dphi(mu), dphi(e_k)) = 0,       mu = sum_i kappa_i e_i.
//! ```
//!
//! The tension field is `tau = -sum_i kappa_i eps_i`.

use crate::connection::{
    christoffel_from_structure, default_tol, require_kappa1, require_n_at_least_2,
};
use crate::data::{BaseRicci, IntegrabilityData, IntegrabilityJet};
use crate::error::{GeometryError, Result};
use crate::scalar::{max_abs, RealScalar, Scalar};
use ndarray::{Array1, Array3};

/// Coefficients of `tau(phi)` in the base frame.
pub fn tension<T: Scalar>(data: &IntegrabilityData<T>) -> Array1<T> {
    data.kappa().mapv(|k| -k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BitensionResult<T> {
    pub tension: Array1<T>,
    /// Left side of the biharmonic equation for each `k`.
    pub residuals: Array1<T>,
    /// The part of `residuals` not involving the base Ricci tensor.
    pub ricci_free: Array1<T>,
    /// `Ricci^N(dphi(mu), dphi(e_k))`.
    pub ricci_part: Array1<T>,
    pub tension_norm_sq: T,
}

impl<T: RealScalar> BitensionResult<T> {
    pub fn tension_norm(&self) -> T {
        self.tension_norm_sq.sqrt()
    }
}

impl<T: Scalar> BitensionResult<T> {
    pub fn max_residual(&self) -> T {
        max_abs(self.residuals.iter().copied())
    }
}

pub fn bitension_residual<T: Scalar>(
    jet: &IntegrabilityJet<T>,
    ricci: &BaseRicci<T>,
) -> Result<BitensionResult<T>> {
    let data = jet.base();
    let n = data.n();
    if ricci.n() != n {
        return Err(GeometryError::dims("ricci", n, ricci.n()));
    }
    let p = christoffel_from_structure(data.f());
    let kappa = data.kappa();
    let (dk, ddk) = (jet.d_kappa(), jet.dd_kappa_diag());
    let dp: Vec<Array3<T>> = (0..n).map(|a| jet.d_p(a)).collect();
    let rv = ricci.values();
    let two = T::int(2);

    let ricci_free = Array1::from_shape_fn(n, |k| {
        let mut s = T::zero();
        for i in 0..=n {
            s = s + ddk[[i, k]];
        }
        for i in 0..n {
            s = s - kappa[i] * dk[[i, k]];
            for j in 0..n {
                s = s - p[[j, i, i]] * dk[[j, k]];
            }
        }
        for i in 0..n {
            for j in 0..n {
                let mut t = two * dk[[i, j]] * p[[k, i, j]] + kappa[j] * dp[i][[k, i, j]]
                    - kappa[i] * kappa[j] * p[[k, i, j]];
                for l in 0..n {
                    t = t + kappa[j] * p[[l, i, j]] * p[[k, i, l]]
                        - kappa[j] * p[[l, i, i]] * p[[k, l, j]];
                }
                s = s + t;
            }
        }
        s
    });
    let ricci_part = Array1::from_shape_fn(n, |k| {
        (0..n).fold(T::zero(), |s, l| s + kappa[l] * rv[[l, k]])
    });
    let residuals = &ricci_free + &ricci_part;
    let tension_norm_sq = kappa.iter().fold(T::zero(), |s, &k| s + k * k);
    Ok(BitensionResult {
        tension: tension(data),
        residuals,
        ricci_free,
        ricci_part,
        tension_norm_sq,
    })
}

/// The biharmonic system in an adapted frame on a space of constant curvature `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplifiedResiduals<T> {
    /// The `k = 1` equation.
    pub first: T,
    /// The equations for `k = 2..n`.
    pub rest: Array1<T>,
}

impl<T: Scalar> SimplifiedResiduals<T> {
    /// All `n` entries in `k` order.
    pub fn to_vec(&self) -> Vec<T> {
        std::iter::once(self.first)
            .chain(self.rest.iter().copied())
            .collect()
    }
}

pub fn simplified_residuals<T: Scalar>(
    jet: &IntegrabilityJet<T>,
    c: T,
) -> Result<SimplifiedResiduals<T>> {
    simplified_residuals_tol(jet, c, default_tol(jet.base()))
}

/// `k = 1`:
/// `Delta kappa_1 - sum_{i,l} kappa_1 (P^l_i1)^2 + 3 kappa_1 sigma_12^2 + (n-1) kappa_1 c`
/// with `Delta kappa_1 = sum_{i<=n} e_i e_i(kappa_1) - sum_{i,j} P^j_ii e_j(kappa_1)
/// - kappa_1 e_1(kappa_1)`.
///
/// `k != 1`:
/// `sum_i (2 e_i(kappa_1) P^k_i1 + kappa_1 e_i(P^k_i1) + kappa_1 P^l_i1 P^k_il
/// - kappa_i kappa_1 P^k_i1 - kappa_1 P^l_ii P^k_l1) + 3 kappa_1 sigma_12 sigma_k2`.
///
/// The last term is the base Ricci contribution `Ricci^N(dphi(mu), dphi(e_k))`
/// for tridiagonal `sigma`; it only survives for `k = 3`.
pub fn simplified_residuals_tol<T: Scalar>(
    jet: &IntegrabilityJet<T>,
    c: T,
    tol: T,
) -> Result<SimplifiedResiduals<T>> {
    let data = jet.base();
    require_n_at_least_2(data)?;
    data.check_adapted(tol)?;
    let n = data.n();
    let p = christoffel_from_structure(data.f());
    let (kappa, sigma) = (data.kappa(), data.sigma());
    let (dk, ddk) = (jet.d_kappa(), jet.dd_kappa_diag());
    let k1 = kappa[0];
    let s12 = sigma[[0, 1]];
    let two = T::int(2);
    let three = T::int(3);
    let nm1 = T::from_usize(n - 1).expect("dimension fits scalar");

    let mut laplacian = -k1 * dk[[0, 0]];
    for i in 0..n {
        laplacian = laplacian + ddk[[i, 0]];
        for j in 0..n {
            laplacian = laplacian - p[[j, i, i]] * dk[[j, 0]];
        }
    }
    let mut p_sq = T::zero();
    for i in 0..n {
        for l in 0..n {
            p_sq = p_sq + p[[l, i, 0]] * p[[l, i, 0]];
        }
    }
    let first = laplacian - k1 * p_sq + three * k1 * s12 * s12 + nm1 * k1 * c;

    let dp: Vec<Array3<T>> = (0..n).map(|a| jet.d_p(a)).collect();
    let rest = Array1::from_shape_fn(n - 1, |m| {
        let k = m + 1;
        let mut s = three * k1 * s12 * sigma[[k, 1]];
        for i in 0..n {
            let mut t = two * dk[[i, 0]] * p[[k, i, 0]] + k1 * dp[i][[k, i, 0]]
                - kappa[i] * k1 * p[[k, i, 0]];
            for l in 0..n {
                t = t + k1 * p[[l, i, 0]] * p[[k, i, l]] - k1 * p[[l, i, i]] * p[[k, l, 0]];
            }
            s = s + t;
        }
        s
    });
    Ok(SimplifiedResiduals { first, rest })
}

/// `kappa_1^2 + sigma_12^2 - 2 sum_{i,m} sigma_im^2 + (2n - 1) c`.
pub fn key_identity_residual<T: Scalar>(data: &IntegrabilityData<T>, c: T) -> Result<T> {
    key_identity_residual_tol(data, c, default_tol(data))
}

pub fn key_identity_residual_tol<T: Scalar>(
    data: &IntegrabilityData<T>,
    c: T,
    tol: T,
) -> Result<T> {
    require_n_at_least_2(data)?;
    data.check_adapted(tol)?;
    let n = data.n();
    let k1 = data.kappa()[0];
    let sigma = data.sigma();
    let s12 = sigma[[0, 1]];
    let total = sigma.iter().fold(T::zero(), |s, &v| s + v * v);
    let two_n_m1 = T::from_usize(2 * n - 1).expect("dimension fits scalar");
    Ok(k1 * k1 + s12 * s12 - T::int(2) * total + two_n_m1 * c)
}

/// `4 sigma_12^2 + (sigma_12^2 / kappa_1^2) sum_{l>=2} sigma_l2^2 + (2n - 2) c`.
pub fn e1_identity_residual<T: Scalar>(data: &IntegrabilityData<T>, c: T) -> Result<T> {
    e1_identity_residual_tol(data, c, default_tol(data))
}

pub fn e1_identity_residual_tol<T: Scalar>(
    data: &IntegrabilityData<T>,
    c: T,
    tol: T,
) -> Result<T> {
    require_n_at_least_2(data)?;
    data.check_adapted(tol)?;
    let k1 = require_kappa1(data)?;
    let n = data.n();
    let sigma = data.sigma();
    let s12_sq = sigma[[0, 1]] * sigma[[0, 1]];
    let tail = (1..n).fold(T::zero(), |s, l| s + sigma[[l, 1]] * sigma[[l, 1]]);
    let two_n_m2 = T::from_usize(2 * n - 2).expect("dimension fits scalar");
    Ok(T::int(4) * s12_sq + s12_sq / (k1 * k1) * tail + two_n_m2 * c)
}

/// `e_{n+1} e_{n+1}(kappa_a) + kappa_a (sum_i kappa_i^2 + (2n - 1) c)` for a
/// 0-based horizontal index `a`.
pub fn eek_identity_residual<T: Scalar>(jet: &IntegrabilityJet<T>, c: T, a: usize) -> Result<T> {
    let n = jet.n();
    if a >= n {
        return Err(GeometryError::dims("horizontal index", format!("< {n}"), a));
    }
    let kappa = jet.base().kappa();
    let sq = kappa.iter().fold(T::zero(), |s, &k| s + k * k);
    let two_n_m1 = T::from_usize(2 * n - 1).expect("dimension fits scalar");
    Ok(jet.dd_kappa_diag()[[n, a]] + kappa[a] * (sq + two_n_m1 * c))
}

/// Largest derivatives of the integrability data along the vertical field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberConstancy<T> {
    pub max_d_f: T,
    pub max_d_kappa: T,
    pub max_d_sigma: T,
}

impl<T: Scalar> FiberConstancy<T> {
    pub fn max_abs(&self) -> T {
        max_abs([self.max_d_f, self.max_d_kappa, self.max_d_sigma])
    }
}

pub fn fiber_constancy_report<'a, T: Scalar>(
    jets: impl IntoIterator<Item = &'a IntegrabilityJet<T>>,
) -> FiberConstancy<T> {
    let mut out = FiberConstancy {
        max_d_f: T::zero(),
        max_d_kappa: T::zero(),
        max_d_sigma: T::zero(),
    };
    for jet in jets {
        let v = jet.n();
        let upd = |acc: &mut T, x: T| {
            if x > *acc {
                *acc = x
            }
        };
        upd(
            &mut out.max_d_f,
            max_abs(jet.d_f().index_axis(ndarray::Axis(0), v).iter().copied()),
        );
        upd(
            &mut out.max_d_kappa,
            max_abs(jet.d_kappa().row(v).iter().copied()),
        );
        upd(
            &mut out.max_d_sigma,
            max_abs(jet.d_sigma().index_axis(ndarray::Axis(0), v).iter().copied()),
        );
    }
    out
}
