//! Integrability data of an adapted frame and its frame derivatives.
//!
//! For an adapted orthonormal frame `{e_1, .., e_n, e_{n+1}}` of a Riemannian
//! submersion (horizontal lifts of a base frame plus a unit vertical field)
//!
//! ```text
//! [e_i, e_{n+1}] = kappa_i e_{n+1}
//! [e_i, e_j]     = f^k_ij e_k - 2 sigma_ij e_{n+1}
//! ```
//!
//! Storage is 0-based; documentation and error messages use 1-based indices.
//! `f` is stored as `f[[k, i, j]] = f^k_ij`.

use crate::connection::christoffel_from_structure;
use crate::error::{GeometryError, Result};
use crate::scalar::{max_abs, Scalar};
use ndarray::{Array1, Array2, Array3, Array4, Axis};

/// Default tolerance for the adapted-shape checks on floating point data.
pub const ADAPTED_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct IntegrabilityData<T> {
    n: usize,
    f: Array3<T>,
    kappa: Array1<T>,
    sigma: Array2<T>,
}

/// Largest violation of `x^k_ij = -x^k_ji` in a structure array, with its location.
fn worst_structure_violation<T: Scalar>(f: &Array3<T>, name: &str) -> Option<(String, T)> {
    let (nk, n, _) = f.dim();
    let mut worst: Option<(String, T)> = None;
    for k in 0..nk {
        for i in 0..n {
            for j in 0..=i {
                let v = (f[[k, i, j]] + f[[k, j, i]]).magnitude();
                if v > T::zero() && worst.as_ref().is_none_or(|(_, w)| v > *w) {
                    worst = Some((format!("{name}[{}][{}][{}]", i + 1, j + 1, k + 1), v));
                }
            }
        }
    }
    worst
}

fn worst_skew_violation<T: Scalar>(m: &Array2<T>, name: &str) -> Option<(String, T)> {
    let n = m.nrows();
    let mut worst: Option<(String, T)> = None;
    for i in 0..n {
        for j in 0..=i {
            let v = (m[[i, j]] + m[[j, i]]).magnitude();
            if v > T::zero() && worst.as_ref().is_none_or(|(_, w)| v > *w) {
                worst = Some((format!("{name}[{}][{}]", i + 1, j + 1), v));
            }
        }
    }
    worst
}

/// `max |f^k_ij + f^k_ji|` and `max |sigma_ij + sigma_ji|` over raw arrays.
pub fn antisymmetry_defect<T: Scalar>(f: &Array3<T>, sigma: &Array2<T>) -> T {
    let fd = worst_structure_violation(f, "f").map_or(T::zero(), |(_, v)| v);
    let sd = worst_skew_violation(sigma, "sigma").map_or(T::zero(), |(_, v)| v);
    if fd > sd {
        fd
    } else {
        sd
    }
}

fn reject_worst<T: Scalar>(candidates: Vec<Option<(String, T)>>) -> Result<()> {
    let worst = candidates
        .into_iter()
        .flatten()
        .fold(None::<(String, T)>, |acc, c| match acc {
            Some(a) if a.1 >= c.1 => Some(a),
            _ => Some(c),
        });
    match worst {
        None => Ok(()),
        Some((location, v)) => Err(GeometryError::AntisymmetryViolation {
            location,
            magnitude: v.to_f64(),
        }),
    }
}

fn check_shape(what: &str, expected: &[usize], found: &[usize]) -> Result<()> {
    if expected != found {
        return Err(GeometryError::dims(
            what,
            format!("{expected:?}"),
            format!("{found:?}"),
        ));
    }
    Ok(())
}

impl<T: Scalar> IntegrabilityData<T> {
    /// Validates dimensions and the exact antisymmetries of `f` and `sigma`.
    ///
    /// Invalid input is rejected, never repaired; the error names the worst entry.
    pub fn new(n: usize, f: Array3<T>, kappa: Array1<T>, sigma: Array2<T>) -> Result<Self> {
        if n == 0 {
            return Err(GeometryError::dims("n", ">= 1", 0));
        }
        check_shape("f", &[n, n, n], f.shape())?;
        check_shape("kappa", &[n], kappa.shape())?;
        check_shape("sigma", &[n, n], sigma.shape())?;
        reject_worst(vec![
            worst_structure_violation(&f, "f"),
            worst_skew_violation(&sigma, "sigma"),
        ])?;
        Ok(Self { n, f, kappa, sigma })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            f: Array3::zeros((n, n, n)),
            kappa: Array1::zeros(n),
            sigma: Array2::zeros((n, n)),
        }
    }

    pub fn builder(n: usize) -> DataBuilder<T> {
        DataBuilder {
            n,
            f: Array3::zeros((n, n, n)),
            kappa: Array1::zeros(n),
            sigma: Array2::zeros((n, n)),
        }
    }

    /// Replaces `f` and `sigma` by their antisymmetric parts.
    ///
    /// Only for numerically extracted data, whose antisymmetry holds up to
    /// discretisation error. Returns the defect that was removed.
    pub fn antisymmetrized(
        n: usize,
        f: Array3<T>,
        kappa: Array1<T>,
        sigma: Array2<T>,
    ) -> Result<(Self, T)> {
        check_shape("f", &[n, n, n], f.shape())?;
        check_shape("kappa", &[n], kappa.shape())?;
        check_shape("sigma", &[n, n], sigma.shape())?;
        let defect = antisymmetry_defect(&f, &sigma);
        let f = antisymmetric_part3(&f);
        let sigma = antisymmetric_part2(&sigma);
        Ok((Self { n, f, kappa, sigma }, defect))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Structure functions, `f()[[k, i, j]] = f^k_ij`.
    pub fn f(&self) -> &Array3<T> {
        &self.f
    }

    pub fn kappa(&self) -> &Array1<T> {
        &self.kappa
    }

    pub fn sigma(&self) -> &Array2<T> {
        &self.sigma
    }

    /// Max antisymmetry defect; zero for every constructed value.
    pub fn symmetrize_check(&self) -> T {
        antisymmetry_defect(&self.f, &self.sigma)
    }

    /// `(max_{i>=2} |kappa_i|, max_{j>=i+2} |sigma_ij|)`.
    pub fn adapted_defect(&self) -> (T, T) {
        let kd = max_abs(self.kappa.iter().skip(1).copied());
        let mut sd = T::zero();
        for i in 0..self.n {
            for j in (i + 2)..self.n {
                let v = self.sigma[[i, j]].magnitude();
                if v > sd {
                    sd = v;
                }
            }
        }
        (kd, sd)
    }

    /// Checks `kappa_2 = .. = kappa_n = 0` and tridiagonal `sigma` within `tol`.
    pub fn check_adapted(&self, tol: T) -> Result<()> {
        let (kd, sd) = self.adapted_defect();
        if kd > tol {
            return Err(GeometryError::NotAdapted {
                detail: format!("max |kappa_i| for i >= 2 is {:e}", kd.to_f64()),
            });
        }
        if sd > tol {
            return Err(GeometryError::NotAdapted {
                detail: format!("sigma has off-tridiagonal entries up to {:e}", sd.to_f64()),
            });
        }
        Ok(())
    }

    /// Largest magnitude among all entries, used to scale tolerances.
    pub fn scale(&self) -> T {
        let a = max_abs(self.f.iter().copied());
        let b = max_abs(self.kappa.iter().copied());
        let c = max_abs(self.sigma.iter().copied());
        [a, b, c]
            .into_iter()
            .fold(T::zero(), |m, v| if v > m { v } else { m })
    }
}

/// Builder taking 1-based indices and writing both antisymmetric partners.
#[derive(Debug, Clone)]
pub struct DataBuilder<T> {
    n: usize,
    f: Array3<T>,
    kappa: Array1<T>,
    sigma: Array2<T>,
}

impl<T: Scalar> DataBuilder<T> {
    /// Sets `f^k_ij = value` and `f^k_ji = -value`.
    pub fn structure(mut self, i: usize, j: usize, k: usize, value: T) -> Self {
        self.f[[k - 1, i - 1, j - 1]] = value;
        self.f[[k - 1, j - 1, i - 1]] = -value;
        self
    }

    pub fn kappa(mut self, i: usize, value: T) -> Self {
        self.kappa[i - 1] = value;
        self
    }

    /// Sets `sigma_ij = value` and `sigma_ji = -value`.
    pub fn sigma(mut self, i: usize, j: usize, value: T) -> Self {
        self.sigma[[i - 1, j - 1]] = value;
        self.sigma[[j - 1, i - 1]] = -value;
        self
    }

    pub fn build(self) -> Result<IntegrabilityData<T>> {
        IntegrabilityData::new(self.n, self.f, self.kappa, self.sigma)
    }
}

fn antisymmetric_part2<T: Scalar>(m: &Array2<T>) -> Array2<T> {
    let half = T::half();
    Array2::from_shape_fn(m.dim(), |(i, j)| (m[[i, j]] - m[[j, i]]) * half)
}

fn antisymmetric_part3<T: Scalar>(f: &Array3<T>) -> Array3<T> {
    let half = T::half();
    Array3::from_shape_fn(f.dim(), |(k, i, j)| (f[[k, i, j]] - f[[k, j, i]]) * half)
}

/// Integrability data plus its derivatives along the frame.
///
/// Index `a` of the derivative arrays runs over all `n + 1` frame directions;
/// `a = n` (0-based) is the vertical direction `e_{n+1}`.
///
/// * `d_f[[a, k, i, j]] = e_a(f^k_ij)`
/// * `d_kappa[[a, i]] = e_a(kappa_i)`
/// * `d_sigma[[a, i, j]] = e_a(sigma_ij)`
/// * `dd_kappa_diag[[a, i]] = e_a e_a(kappa_i)`
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrabilityJet<T> {
    base: IntegrabilityData<T>,
    d_f: Array4<T>,
    d_kappa: Array2<T>,
    d_sigma: Array3<T>,
    dd_kappa_diag: Array2<T>,
}

impl<T: Scalar> IntegrabilityJet<T> {
    pub fn new(
        base: IntegrabilityData<T>,
        d_f: Array4<T>,
        d_kappa: Array2<T>,
        d_sigma: Array3<T>,
        dd_kappa_diag: Array2<T>,
    ) -> Result<Self> {
        let n = base.n;
        check_shape("d_f", &[n + 1, n, n, n], d_f.shape())?;
        check_shape("d_kappa", &[n + 1, n], d_kappa.shape())?;
        check_shape("d_sigma", &[n + 1, n, n], d_sigma.shape())?;
        check_shape("dd_kappa_diag", &[n + 1, n], dd_kappa_diag.shape())?;
        let mut candidates = Vec::new();
        for a in 0..=n {
            candidates.push(worst_structure_violation(
                &d_f.index_axis(Axis(0), a).to_owned(),
                &format!("d_f[{}]", a + 1),
            ));
            candidates.push(worst_skew_violation(
                &d_sigma.index_axis(Axis(0), a).to_owned(),
                &format!("d_sigma[{}]", a + 1),
            ));
        }
        reject_worst(candidates)?;
        Ok(Self {
            base,
            d_f,
            d_kappa,
            d_sigma,
            dd_kappa_diag,
        })
    }

    /// Frame-constant jet: every derivative slot is zero.
    pub fn constant(base: IntegrabilityData<T>) -> Self {
        let n = base.n;
        Self {
            base,
            d_f: Array4::zeros((n + 1, n, n, n)),
            d_kappa: Array2::zeros((n + 1, n)),
            d_sigma: Array3::zeros((n + 1, n, n)),
            dd_kappa_diag: Array2::zeros((n + 1, n)),
        }
    }

    /// Numerically sampled derivatives; antisymmetric parts are taken slot by
    /// slot. Returns the removed defect.
    pub fn antisymmetrized(
        base: IntegrabilityData<T>,
        d_f: Array4<T>,
        d_kappa: Array2<T>,
        d_sigma: Array3<T>,
        dd_kappa_diag: Array2<T>,
    ) -> Result<(Self, T)> {
        let n = base.n;
        check_shape("d_f", &[n + 1, n, n, n], d_f.shape())?;
        check_shape("d_sigma", &[n + 1, n, n], d_sigma.shape())?;
        let half = T::half();
        let mut defect = T::zero();
        for a in 0..=n {
            let fa = d_f.index_axis(Axis(0), a).to_owned();
            let sa = d_sigma.index_axis(Axis(0), a).to_owned();
            let d = antisymmetry_defect(&fa, &sa);
            if d > defect {
                defect = d;
            }
        }
        let d_f = Array4::from_shape_fn(d_f.dim(), |(a, k, i, j)| {
            (d_f[[a, k, i, j]] - d_f[[a, k, j, i]]) * half
        });
        let d_sigma = Array3::from_shape_fn(d_sigma.dim(), |(a, i, j)| {
            (d_sigma[[a, i, j]] - d_sigma[[a, j, i]]) * half
        });
        let jet = Self::new(base, d_f, d_kappa, d_sigma, dd_kappa_diag)?;
        Ok((jet, defect))
    }

    pub fn base(&self) -> &IntegrabilityData<T> {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n
    }

    pub fn d_f(&self) -> &Array4<T> {
        &self.d_f
    }

    pub fn d_kappa(&self) -> &Array2<T> {
        &self.d_kappa
    }

    pub fn d_sigma(&self) -> &Array3<T> {
        &self.d_sigma
    }

    pub fn dd_kappa_diag(&self) -> &Array2<T> {
        &self.dd_kappa_diag
    }

    /// `e_a(P^k_ij)` for all `k, i, j`, obtained from `d_f` through the linear
    /// formula for `P`.
    pub fn d_p(&self, a: usize) -> Array3<T> {
        christoffel_from_structure(&self.d_f.index_axis(Axis(0), a).to_owned())
    }

    /// Same base data, every derivative slot multiplied by `s`.
    pub fn with_scaled_derivatives(&self, s: T) -> Self {
        Self {
            base: self.base.clone(),
            d_f: self.d_f.mapv(|v| v * s),
            d_kappa: self.d_kappa.mapv(|v| v * s),
            d_sigma: self.d_sigma.mapv(|v| v * s),
            dd_kappa_diag: self.dd_kappa_diag.mapv(|v| v * s),
        }
    }
}

/// Ricci tensor of the base in the frame `{epsilon_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseRicci<T> {
    values: Array2<T>,
}

impl<T: Scalar> BaseRicci<T> {
    /// Requires an exactly symmetric square matrix.
    pub fn new(values: Array2<T>) -> Result<Self> {
        let (r, c) = values.dim();
        if r != c {
            return Err(GeometryError::dims("ricci", format!("[{r}, {r}]"), format!("[{r}, {c}]")));
        }
        for i in 0..r {
            for j in 0..i {
                let d = (values[[i, j]] - values[[j, i]]).magnitude();
                if d > T::zero() {
                    return Err(GeometryError::NotSymmetric {
                        location: format!("ricci[{}][{}]", i + 1, j + 1),
                        magnitude: d.to_f64(),
                    });
                }
            }
        }
        Ok(Self { values })
    }

    /// Symmetric part of a sampled matrix.
    pub fn from_symmetric_part(m: &Array2<T>) -> Self {
        let half = T::half();
        Self {
            values: Array2::from_shape_fn(m.dim(), |(i, j)| (m[[i, j]] + m[[j, i]]) * half),
        }
    }

    /// `value * identity`, e.g. `-(n-1) I` for the hyperbolic space `H^n(-1)`.
    pub fn scalar(n: usize, value: T) -> Self {
        Self {
            values: Array2::from_shape_fn((n, n), |(i, j)| if i == j { value } else { T::zero() }),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::scalar(n, T::zero())
    }

    /// Base Ricci of a submersion with one-dimensional fibres from a space of
    /// constant curvature `c`:
    /// `Ric(eps_k, eps_l) = (n-1) c delta_kl + 3 sum_j sigma_kj sigma_lj`.
    pub fn space_form(sigma: &Array2<T>, c: T) -> Self {
        let n = sigma.nrows();
        let nm1 = T::from_usize(n - 1).expect("dimension fits scalar");
        let three = T::int(3);
        let values = Array2::from_shape_fn((n, n), |(k, l)| {
            let mut s = T::zero();
            for j in 0..n {
                s = s + sigma[[k, j]] * sigma[[l, j]];
            }
            let diag = if k == l { nm1 * c } else { T::zero() };
            diag + three * s
        });
        Self { values }
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn values(&self) -> &Array2<T> {
        &self.values
    }
}
