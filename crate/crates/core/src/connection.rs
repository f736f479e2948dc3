//! Levi-Civita connection of an adapted frame and constant-curvature residuals.
//!
//! With `P^k_ij = 1/2 (f^k_ij - f^j_ik - f^i_jk)` the covariant derivatives of
//! the frame are
//!
//! ```text
//! nabla_{e_i} e_j         = P^k_ij e_k - sigma_ij e_{n+1}
//! nabla_{e_{n+1}} e_{n+1} = kappa_i e_i
//! nabla_{e_i} e_{n+1}     = sigma_ij e_j
//! nabla_{e_{n+1}} e_i     = sigma_ij e_j - kappa_i e_{n+1}
//! ```
//!
//! Curvature uses `R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z`.
//! Summed indices run over the horizontal range `1..n`.

use crate::data::{IntegrabilityData, IntegrabilityJet, ADAPTED_TOL};
use crate::error::{GeometryError, Result};
use crate::scalar::{max_abs, Scalar};
use ndarray::{Array1, Array2, Array3};

/// Threshold on `|kappa_1|` below which relations dividing by it are refused.
pub const KAPPA_DEGENERACY: f64 = 1e-12;

/// `P[[k, i, j]] = P^k_ij` from `f[[k, i, j]] = f^k_ij`.
///
/// The subtraction order makes `P^k_ij = -P^j_ik` hold bit for bit in floating
/// point whenever `f` is exactly antisymmetric.
pub fn christoffel_from_structure<T: Scalar>(f: &Array3<T>) -> Array3<T> {
    let half = T::half();
    Array3::from_shape_fn(f.dim(), |(k, i, j)| {
        ((f[[k, i, j]] - f[[j, i, k]]) - f[[i, j, k]]) * half
    })
}

/// Horizontal connection coefficients `P^k_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionCoeffs<T> {
    p: Array3<T>,
}

impl<T: Scalar> ConnectionCoeffs<T> {
    /// `p()[[k, i, j]] = P^k_ij`.
    pub fn p(&self) -> &Array3<T> {
        &self.p
    }

    pub fn n(&self) -> usize {
        self.p.dim().0
    }

    /// `max |P^k_ij + P^j_ik|`.
    pub fn metric_defect(&self) -> T {
        let n = self.n();
        let mut worst = T::zero();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let v = (self.p[[k, i, j]] + self.p[[j, i, k]]).magnitude();
                    if v > worst {
                        worst = v;
                    }
                }
            }
        }
        worst
    }

    /// `max |P^k_ij - P^k_ji - f^k_ij|`.
    pub fn torsion_defect(&self, data: &IntegrabilityData<T>) -> T {
        let n = self.n();
        let f = data.f();
        let mut worst = T::zero();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let v = (self.p[[k, i, j]] - self.p[[k, j, i]] - f[[k, i, j]]).magnitude();
                    if v > worst {
                        worst = v;
                    }
                }
            }
        }
        worst
    }
}

pub fn compute_p<T: Scalar>(data: &IntegrabilityData<T>) -> ConnectionCoeffs<T> {
    ConnectionCoeffs {
        p: christoffel_from_structure(data.f()),
    }
}

/// Frame components `table[[a, b, c]] = <nabla_{e_a} e_b, e_c>` for
/// `a, b, c` in `0..=n`, index `n` being the vertical field.
#[derive(Debug, Clone, PartialEq)]
pub struct NablaTable<T> {
    table: Array3<T>,
}

impl<T: Scalar> NablaTable<T> {
    pub fn table(&self) -> &Array3<T> {
        &self.table
    }

    /// Coefficients of `nabla_{e_a} e_b` in the frame.
    pub fn covariant(&self, a: usize, b: usize) -> Array1<T> {
        self.table.slice(ndarray::s![a, b, ..]).to_owned()
    }
}

pub fn nabla_coeffs<T: Scalar>(
    data: &IntegrabilityData<T>,
    coeffs: &ConnectionCoeffs<T>,
) -> NablaTable<T> {
    let n = data.n();
    let p = coeffs.p();
    let (kappa, sigma) = (data.kappa(), data.sigma());
    let mut table = Array3::zeros((n + 1, n + 1, n + 1));
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                table[[a, b, c]] = p[[c, a, b]];
            }
            table[[a, b, n]] = -sigma[[a, b]];
            // nabla_{e_a} e_{n+1}
            table[[a, n, b]] = sigma[[a, b]];
            // nabla_{e_{n+1}} e_a
            table[[n, a, b]] = sigma[[a, b]];
        }
        table[[n, a, n]] = -kappa[a];
        table[[n, n, a]] = kappa[a];
    }
    NablaTable { table }
}

/// Frame components of the brackets, `table[[a, b, c]] = <[e_a, e_b], e_c>`.
pub fn bracket_table<T: Scalar>(data: &IntegrabilityData<T>) -> Array3<T> {
    let n = data.n();
    let (f, kappa, sigma) = (data.f(), data.kappa(), data.sigma());
    let two = T::int(2);
    let mut table = Array3::zeros((n + 1, n + 1, n + 1));
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                table[[i, j, k]] = f[[k, i, j]];
            }
            table[[i, j, n]] = -two * sigma[[i, j]];
        }
        table[[i, n, n]] = kappa[i];
        table[[n, i, n]] = -kappa[i];
    }
    table
}

/// Left side minus constant-curvature target for each of the four identity
/// families.
///
/// * `r1[[a, c, d]]`: `e_a(sigma_cd) + P^d_al sigma_cl - P^l_ac sigma_ld
///   - kappa_c sigma_ad + kappa_d sigma_ac - kappa_a sigma_cd`, target 0
/// * `r2[[a, b]]`, `a != b`: `-R(e_a, e_b, e_a, e_b)` in frame terms, target `-c`
/// * `r3[a]`: `-sigma_al^2 - e_a(kappa_a) + P^l_aa kappa_l + kappa_a^2`, target `-c`
/// * `r4[[a, c]]`, `a != c`: `-sigma_cl sigma_al - e_a(kappa_c) + P^l_ac kappa_l
///   + kappa_a kappa_c + e_{n+1}(sigma_ac)`, target 0
///
/// Diagonal entries of `r2` and `r4` are not part of the identities and are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureResiduals<T> {
    pub r1: Array3<T>,
    pub r2: Array2<T>,
    pub r3: Array1<T>,
    pub r4: Array2<T>,
    pub c: T,
}

impl<T: Scalar> CurvatureResiduals<T> {
    /// Max absolute residual of each family, in order `r1..r4`.
    pub fn family_maxima(&self) -> [T; 4] {
        [
            max_abs(self.r1.iter().copied()),
            max_abs(self.r2.iter().copied()),
            max_abs(self.r3.iter().copied()),
            max_abs(self.r4.iter().copied()),
        ]
    }

    pub fn max_abs(&self) -> T {
        max_abs(self.family_maxima())
    }
}

pub fn curvature_residuals<T: Scalar>(jet: &IntegrabilityJet<T>, c: T) -> CurvatureResiduals<T> {
    let data = jet.base();
    let n = data.n();
    let p = christoffel_from_structure(data.f());
    let (f, kappa, sigma) = (data.f(), data.kappa(), data.sigma());
    let (dk, ds) = (jet.d_kappa(), jet.d_sigma());
    let dp: Vec<Array3<T>> = (0..n).map(|a| jet.d_p(a)).collect();
    let three = T::int(3);

    let r1 = Array3::from_shape_fn((n, n, n), |(a, cc, d)| {
        let mut s = ds[[a, cc, d]];
        for l in 0..n {
            s = s + p[[d, a, l]] * sigma[[cc, l]] - p[[l, a, cc]] * sigma[[l, d]];
        }
        s - kappa[cc] * sigma[[a, d]] + kappa[d] * sigma[[a, cc]] - kappa[a] * sigma[[cc, d]]
    });

    let r2 = Array2::from_shape_fn((n, n), |(a, b)| {
        if a == b {
            return T::zero();
        }
        let mut s = dp[a][[b, b, a]] - dp[b][[b, a, a]] + three * sigma[[a, b]] * sigma[[a, b]];
        for l in 0..n {
            s = s + p[[l, b, a]] * p[[b, a, l]]
                - p[[l, a, a]] * p[[b, b, l]]
                - f[[l, a, b]] * p[[b, l, a]];
        }
        s + c
    });

    let r3 = Array1::from_shape_fn(n, |a| {
        let mut s = kappa[a] * kappa[a] - dk[[a, a]];
        for l in 0..n {
            s = s - sigma[[a, l]] * sigma[[a, l]] + p[[l, a, a]] * kappa[l];
        }
        s + c
    });

    let r4 = Array2::from_shape_fn((n, n), |(a, cc)| {
        if a == cc {
            return T::zero();
        }
        let mut s = kappa[a] * kappa[cc] - dk[[a, cc]] + ds[[n, a, cc]];
        for l in 0..n {
            s = s - sigma[[cc, l]] * sigma[[a, l]] + p[[l, a, cc]] * kappa[l];
        }
        s
    });

    CurvatureResiduals { r1, r2, r3, r4, c }
}

/// Residuals of the curvature relations in an adapted frame
/// (`kappa_2 = .. = kappa_n = 0`, tridiagonal `sigma`), each as left side minus
/// right side. Indices are 0-based; entries outside a relation's index range
/// are 0.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedRelations<T> {
    /// `e_i(kappa_1) = -sigma_12 sigma_i2 + delta_1i (kappa_1^2 + c)`
    pub kappa1_gradient: Array1<T>,
    /// `e_1(kappa_1) = -sigma_12^2 + kappa_1^2 + c`
    pub kappa1_along_e1: T,
    /// `e_i(sigma_12) = P^l_i1 sigma_l2 + kappa_1 sigma_i2 + delta_i1 kappa_1 sigma_12`
    pub sigma12_gradient: Array1<T>,
    /// `P^1_im = (sigma_ml sigma_il - delta_mi c) / kappa_1` for `m != 1`
    pub p1_relation: Array2<T>,
    /// `P^2_ij sigma_12 = P^1_il sigma_lj - kappa_1 sigma_ij` for `j >= 3`
    pub p2_relation: Array2<T>,
    /// `e_1(sigma_2m) = P^l_12 sigma_lm - P^l_1m sigma_l2 - kappa_m sigma_12 + kappa_1 sigma_2m`
    pub e1_sigma_row2: Array1<T>,
    /// `e_1(sigma_im) = -P^l_1m sigma_li + P^l_1i sigma_lm - kappa_m sigma_1i
    ///  + kappa_1 sigma_im + kappa_i sigma_1m`
    pub e1_sigma: Array2<T>,
    /// `e_1(sigma_im) = -P^l_1m sigma_li + P^l_1i sigma_lm + kappa_1 sigma_im`
    /// for `i, m >= 3`
    pub e1_sigma_tail: Array2<T>,
}

impl<T: Scalar> AdaptedRelations<T> {
    pub fn max_abs(&self) -> T {
        max_abs(
            self.kappa1_gradient
                .iter()
                .chain(std::iter::once(&self.kappa1_along_e1))
                .chain(self.sigma12_gradient.iter())
                .chain(self.p1_relation.iter())
                .chain(self.p2_relation.iter())
                .chain(self.e1_sigma_row2.iter())
                .chain(self.e1_sigma.iter())
                .chain(self.e1_sigma_tail.iter())
                .copied(),
        )
    }

    /// `(name, max |residual|)` per relation, in declaration order.
    pub fn named_maxima(&self) -> Vec<(&'static str, T)> {
        vec![
            ("kappa1_gradient", max_abs(self.kappa1_gradient.iter().copied())),
            ("kappa1_along_e1", self.kappa1_along_e1.magnitude()),
            ("sigma12_gradient", max_abs(self.sigma12_gradient.iter().copied())),
            ("p1_relation", max_abs(self.p1_relation.iter().copied())),
            ("p2_relation", max_abs(self.p2_relation.iter().copied())),
            ("e1_sigma_row2", max_abs(self.e1_sigma_row2.iter().copied())),
            ("e1_sigma", max_abs(self.e1_sigma.iter().copied())),
            ("e1_sigma_tail", max_abs(self.e1_sigma_tail.iter().copied())),
        ]
    }
}

pub(crate) fn default_tol<T: Scalar>(data: &IntegrabilityData<T>) -> T {
    let one = T::one();
    let scale = data.scale();
    let tol = T::from_f64(ADAPTED_TOL).expect("tolerance representable");
    tol * if scale > one { scale } else { one }
}

pub(crate) fn require_n_at_least_2<T: Scalar>(data: &IntegrabilityData<T>) -> Result<()> {
    if data.n() < 2 {
        return Err(GeometryError::dims("n", ">= 2", data.n()));
    }
    Ok(())
}

pub(crate) fn require_kappa1<T: Scalar>(data: &IntegrabilityData<T>) -> Result<T> {
    let k1 = data.kappa()[0];
    if k1.magnitude().to_f64() < KAPPA_DEGENERACY {
        return Err(GeometryError::DegenerateKappa { value: k1.to_f64() });
    }
    Ok(k1)
}

/// Adapted-frame curvature relations with the default adaptedness tolerance.
pub fn adapted_curvature_relations<T: Scalar>(
    jet: &IntegrabilityJet<T>,
    c: T,
) -> Result<AdaptedRelations<T>> {
    adapted_curvature_relations_tol(jet, c, default_tol(jet.base()))
}

pub fn adapted_curvature_relations_tol<T: Scalar>(
    jet: &IntegrabilityJet<T>,
    c: T,
    tol: T,
) -> Result<AdaptedRelations<T>> {
    let data = jet.base();
    require_n_at_least_2(data)?;
    data.check_adapted(tol)?;
    let k1 = require_kappa1(data)?;
    let n = data.n();
    let p = christoffel_from_structure(data.f());
    let (kappa, sigma) = (data.kappa(), data.sigma());
    let (dk, ds) = (jet.d_kappa(), jet.d_sigma());
    let s12 = sigma[[0, 1]];
    let delta = |a: usize, b: usize| if a == b { T::one() } else { T::zero() };

    let kappa1_gradient = Array1::from_shape_fn(n, |i| {
        dk[[i, 0]] - (-s12 * sigma[[i, 1]] + delta(0, i) * (k1 * k1 + c))
    });
    let kappa1_along_e1 = dk[[0, 0]] - (-s12 * s12 + k1 * k1 + c);

    let sigma12_gradient = Array1::from_shape_fn(n, |i| {
        let mut rhs = k1 * sigma[[i, 1]] + delta(i, 0) * k1 * s12;
        for l in 0..n {
            rhs = rhs + p[[l, i, 0]] * sigma[[l, 1]];
        }
        ds[[i, 0, 1]] - rhs
    });

    let p1_relation = Array2::from_shape_fn((n, n), |(i, m)| {
        if m == 0 {
            return T::zero();
        }
        let mut num = -delta(m, i) * c;
        for l in 0..n {
            num = num + sigma[[m, l]] * sigma[[i, l]];
        }
        p[[0, i, m]] - num / k1
    });

    let p2_relation = Array2::from_shape_fn((n, n), |(i, j)| {
        if j < 2 {
            return T::zero();
        }
        let mut rhs = -k1 * sigma[[i, j]];
        for l in 0..n {
            rhs = rhs + p[[0, i, l]] * sigma[[l, j]];
        }
        p[[1, i, j]] * s12 - rhs
    });

    let e1_sigma_row2 = Array1::from_shape_fn(n, |m| {
        let mut rhs = -kappa[m] * s12 + k1 * sigma[[1, m]];
        for l in 0..n {
            rhs = rhs + p[[l, 0, 1]] * sigma[[l, m]] - p[[l, 0, m]] * sigma[[l, 1]];
        }
        ds[[0, 1, m]] - rhs
    });

    let e1_rhs_common = |i: usize, m: usize| {
        let mut rhs = k1 * sigma[[i, m]];
        for l in 0..n {
            rhs = rhs - p[[l, 0, m]] * sigma[[l, i]] + p[[l, 0, i]] * sigma[[l, m]];
        }
        rhs
    };
    let e1_sigma = Array2::from_shape_fn((n, n), |(i, m)| {
        let rhs = e1_rhs_common(i, m) - kappa[m] * sigma[[0, i]] + kappa[i] * sigma[[0, m]];
        ds[[0, i, m]] - rhs
    });
    let e1_sigma_tail = Array2::from_shape_fn((n, n), |(i, m)| {
        if i < 2 || m < 2 {
            return T::zero();
        }
        ds[[0, i, m]] - e1_rhs_common(i, m)
    });

    Ok(AdaptedRelations {
        kappa1_gradient,
        kappa1_along_e1,
        sigma12_gradient,
        p1_relation,
        p2_relation,
        e1_sigma_row2,
        e1_sigma,
        e1_sigma_tail,
    })
}
