//! Pointwise normal form of `(kappa, sigma)` under orthogonal frame changes.
//!
//! A first Householder reflector `K0` rotates `kappa` onto `||kappa|| e_1`.
//! The chain then reduces `S = K0 sigma K0^T` column by column: for
//! `p = 0..n-3` the slice of column `p + 1` below the subdiagonal,
//! `(s_{p+2,p+1}, .., s_{n,p+1})`, is reflected onto its first coordinate by
//! `H = I - 2 u u^T`, `u = (x - ||x|| e_1) / ||x - ||x|| e_1||`, embedded as
//! `Q = diag(I_{p+1}, H)`. The reflector leaves a vector already on the
//! positive first axis alone and maps everything else onto it, without the
//! usual sign flip.

use crate::error::{GeometryError, Result};
use crate::scalar::RealScalar;
use ndarray::{s, Array1, Array2};

/// Relative size of `||x - ||x|| e_1||` below which the identity is used.
pub const ALIGNMENT_EPS: f64 = 1e-14;
/// Skewness tolerance, relative to `max(1, ||sigma||_F)`.
pub const SKEW_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalReduction<T> {
    /// Accumulated orthogonal matrix; rows are the new frame in terms of the old.
    pub k: Array2<T>,
    pub kappa_out: Array1<T>,
    pub sigma_out: Array2<T>,
    /// Reflectors that were not the identity.
    pub steps: usize,
    /// All stages of the chain, identity stages included.
    pub stages: usize,
}

impl<T: RealScalar> OrthogonalReduction<T> {
    /// `max |K K^T - I|`.
    pub fn orthogonality_defect(&self) -> T {
        let kkt = self.k.dot(&self.k.t());
        let n = kkt.nrows();
        let mut worst = T::zero();
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((kkt[[i, j]] - target).magnitude());
            }
        }
        worst
    }

    /// `max_{j >= i+2} |sigma_out[i][j]|`, both triangles.
    pub fn tridiagonality_defect(&self) -> T {
        let n = self.sigma_out.nrows();
        let mut worst = T::zero();
        for i in 0..n {
            for j in (i + 2)..n {
                worst = worst
                    .max(self.sigma_out[[i, j]].magnitude())
                    .max(self.sigma_out[[j, i]].magnitude());
            }
        }
        worst
    }

    /// `max_{i >= 2} |kappa_out_i|`.
    pub fn kappa_defect(&self) -> T {
        self.kappa_out
            .iter()
            .skip(1)
            .fold(T::zero(), |m, v| m.max(v.magnitude()))
    }
}

pub fn frobenius<T: RealScalar>(m: &Array2<T>) -> T {
    m.iter().fold(T::zero(), |s, &v| s + v * v).sqrt()
}

fn norm<T: RealScalar>(x: &Array1<T>) -> T {
    x.iter().fold(T::zero(), |s, &v| s + v * v).sqrt()
}

fn identity<T: RealScalar>(m: usize) -> Array2<T> {
    Array2::from_shape_fn((m, m), |(i, j)| if i == j { T::one() } else { T::zero() })
}

/// Unit Householder vector `u` with `(I - 2uu^T) x = ||x|| e_1`, or `None` when
/// `x` is already (numerically) on the positive first axis, including `x = 0`.
fn householder_vector<T: RealScalar>(x: &Array1<T>) -> Option<Array1<T>> {
    let nx = norm(x);
    let mut v = x.clone();
    v[0] = v[0] - nx;
    let nv = norm(&v);
    if nx == T::zero() || nv <= T::lit(ALIGNMENT_EPS) * nx {
        return None;
    }
    Some(v.mapv(|c| c / nv))
}

/// `H = I - 2 u u^T` mapping `x` to `(||x||, 0, .., 0)`.
pub fn householder_reflector<T: RealScalar>(x: &Array1<T>) -> Array2<T> {
    let m = x.len();
    let mut h = identity(m);
    if let Some(u) = householder_vector(x) {
        let two = T::lit(2.0);
        for i in 0..m {
            for j in 0..m {
                h[[i, j]] = h[[i, j]] - two * u[i] * u[j];
            }
        }
    }
    h
}

/// `(K0, K0 kappa)` with `K0 kappa = (||kappa||, 0, .., 0)`.
pub fn normalize_kappa<T: RealScalar>(kappa: &Array1<T>) -> (Array2<T>, Array1<T>) {
    let k0 = householder_reflector(kappa);
    let mut out = Array1::zeros(kappa.len());
    if !out.is_empty() {
        out[0] = norm(kappa);
    }
    (k0, out)
}

fn skew_defect<T: RealScalar>(m: &Array2<T>) -> T {
    let n = m.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in 0..=i {
            worst = worst.max((m[[i, j]] + m[[j, i]]).magnitude());
        }
    }
    worst
}

fn check_skew<T: RealScalar>(sigma: &Array2<T>) -> Result<()> {
    let (r, c) = sigma.dim();
    if r != c {
        return Err(GeometryError::dims("sigma", format!("[{r}, {r}]"), format!("[{r}, {c}]")));
    }
    let defect = skew_defect(sigma);
    if defect > T::lit(SKEW_TOL) * frobenius(sigma).max(T::one()) {
        return Err(GeometryError::NotSkew {
            defect: defect.to_f64(),
        });
    }
    Ok(())
}

/// Runs the reduction chain on `sigma` starting from the orthogonal matrix
/// `k0`. The caller fills `kappa_out`; it is left as zeros here.
pub fn skew_tridiagonalize<T: RealScalar>(
    sigma: &Array2<T>,
    k0: &Array2<T>,
) -> Result<OrthogonalReduction<T>> {
    check_skew(sigma)?;
    let n = sigma.nrows();
    if k0.dim() != (n, n) {
        return Err(GeometryError::dims("K0", format!("[{n}, {n}]"), format!("{:?}", k0.dim())));
    }
    let mut k = k0.clone();
    let mut s = k.dot(sigma).dot(&k.t());
    let mut steps = 0;
    for p in 0..n.saturating_sub(2) {
        let x = s.slice(s![p + 1.., p]).to_owned();
        let Some(u) = householder_vector(&x) else {
            continue;
        };
        steps += 1;
        // Q = diag(I_{p+1}, I - 2uu^T) applied as a rank-one update.
        apply_left(&mut k, &u, p + 1);
        apply_left(&mut s, &u, p + 1);
        apply_right(&mut s, &u, p + 1);
    }
    Ok(OrthogonalReduction {
        k,
        kappa_out: Array1::zeros(n),
        sigma_out: s,
        steps,
        stages: chain_length(n) - 1,
    })
}

/// `m <- Q m` with `Q = diag(I_offset, I - 2uu^T)`.
fn apply_left<T: RealScalar>(m: &mut Array2<T>, u: &Array1<T>, offset: usize) {
    let two = T::lit(2.0);
    for col in 0..m.ncols() {
        let mut dot = T::zero();
        for (r, &ur) in u.iter().enumerate() {
            dot = dot + ur * m[[offset + r, col]];
        }
        for (r, &ur) in u.iter().enumerate() {
            m[[offset + r, col]] = m[[offset + r, col]] - two * ur * dot;
        }
    }
}

/// `m <- m Q^T` (`Q` is symmetric).
fn apply_right<T: RealScalar>(m: &mut Array2<T>, u: &Array1<T>, offset: usize) {
    let two = T::lit(2.0);
    for row in 0..m.nrows() {
        let mut dot = T::zero();
        for (c, &uc) in u.iter().enumerate() {
            dot = dot + m[[row, offset + c]] * uc;
        }
        for (c, &uc) in u.iter().enumerate() {
            m[[row, offset + c]] = m[[row, offset + c]] - two * dot * uc;
        }
    }
}

/// Number of stages in the chain for dimension `n`: the initial reflector plus
/// `n - 2` column reductions.
pub fn chain_length(n: usize) -> usize {
    1 + n.saturating_sub(2)
}

/// Full pointwise adaptation: `kappa_out = (||kappa||, 0, ..)` and tridiagonal
/// `sigma_out = K sigma K^T`.
pub fn adapt_frame_data<T: RealScalar>(
    kappa: &Array1<T>,
    sigma: &Array2<T>,
) -> Result<OrthogonalReduction<T>> {
    if sigma.nrows() != kappa.len() {
        return Err(GeometryError::dims("sigma", kappa.len(), sigma.nrows()));
    }
    check_skew(sigma)?;
    let (k0, _) = normalize_kappa(kappa);
    let initial = usize::from(householder_vector(kappa).is_some());
    let mut red = skew_tridiagonalize(sigma, &k0)?;
    red.kappa_out = red.k.dot(kappa);
    red.steps += initial;
    red.stages += 1;
    Ok(red)
}
