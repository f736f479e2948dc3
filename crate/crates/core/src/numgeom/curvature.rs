use super::chart::ChartSubmersion;
use super::linalg;
use crate::data::BaseRicci;
use crate::error::{GeometryError, Result};
use ndarray::{Array2, Array3, Array4};

fn unit_shift(p: &[f64], axis: usize, t: f64) -> Vec<f64> {
    let mut q = p.to_vec();
    q[axis] += t;
    q
}

/// `gamma[[c, a, b]] = Gamma^c_ab = 1/2 g^{cd} (d_a g_bd + d_b g_ad - d_d g_ab)`
/// with central differences of the metric.
pub fn christoffel_fd<M>(metric: M, p: &[f64], h: f64) -> Result<Array3<f64>>
where
    M: Fn(&[f64]) -> Array2<f64>,
{
    let dim = p.len();
    let g = metric(p);
    let ginv = linalg::inverse(&g).ok_or_else(|| GeometryError::SingularMetric { point: p.to_vec() })?;
    let mut dg = Array3::zeros((dim, dim, dim));
    for x in 0..dim {
        let diff = (metric(&unit_shift(p, x, h)) - metric(&unit_shift(p, x, -h))) / (2.0 * h);
        dg.index_axis_mut(ndarray::Axis(0), x).assign(&diff);
    }
    let mut lowered = Array3::zeros((dim, dim, dim));
    for d in 0..dim {
        for a in 0..dim {
            for b in 0..dim {
                lowered[[d, a, b]] = 0.5 * (dg[[a, b, d]] + dg[[b, a, d]] - dg[[d, a, b]]);
            }
        }
    }
    let mut gamma = Array3::zeros((dim, dim, dim));
    for c in 0..dim {
        for a in 0..dim {
            for b in 0..dim {
                gamma[[c, a, b]] = (0..dim).map(|d| ginv[[c, d]] * lowered[[d, a, b]]).sum();
            }
        }
    }
    Ok(gamma)
}

/// Coordinate curvature of a metric for `R(X,Y)Z = nabla_X nabla_Y Z -
/// nabla_Y nabla_X Z - nabla_[X,Y] Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Riemann {
    /// `mixed[[d, c, a, b]]`: component `d` of `R(d_a, d_b) d_c`.
    pub mixed: Array4<f64>,
    /// `lowered[[a, b, c, d]] = <R(d_a, d_b) d_c, d_d>`.
    pub lowered: Array4<f64>,
    pub metric: Array2<f64>,
}

/// Curvature from `Gamma` and central differences of `Gamma` (nested
/// differencing).
pub fn riemann_fd<M>(metric: M, p: &[f64], h: f64) -> Result<Riemann>
where
    M: Fn(&[f64]) -> Array2<f64>,
{
    let dim = p.len();
    let gamma = christoffel_fd(&metric, p, h)?;
    let mut dgamma = Array4::zeros((dim, dim, dim, dim));
    for x in 0..dim {
        let plus = christoffel_fd(&metric, &unit_shift(p, x, h), h)?;
        let minus = christoffel_fd(&metric, &unit_shift(p, x, -h), h)?;
        dgamma
            .index_axis_mut(ndarray::Axis(0), x)
            .assign(&((plus - minus) / (2.0 * h)));
    }
    let mut mixed = Array4::zeros((dim, dim, dim, dim));
    for d in 0..dim {
        for c in 0..dim {
            for a in 0..dim {
                for b in 0..dim {
                    let mut r = dgamma[[a, d, b, c]] - dgamma[[b, d, a, c]];
                    for e in 0..dim {
                        r += gamma[[e, b, c]] * gamma[[d, a, e]] - gamma[[e, a, c]] * gamma[[d, b, e]];
                    }
                    mixed[[d, c, a, b]] = r;
                }
            }
        }
    }
    let g = metric(p);
    let lowered = Array4::from_shape_fn((dim, dim, dim, dim), |(a, b, c, d)| {
        (0..dim).map(|e| g[[d, e]] * mixed[[e, c, a, b]]).sum()
    });
    Ok(Riemann {
        mixed,
        lowered,
        metric: g,
    })
}

impl Riemann {
    pub fn dim(&self) -> usize {
        self.metric.nrows()
    }

    /// `R(E_a, E_b, E_c, E_d)` for the columns of `frame`.
    pub fn frame_components(&self, frame: &Array2<f64>) -> Array4<f64> {
        let dim = self.dim();
        let mut t = self.lowered.clone();
        // Contract one slot at a time.
        for slot in 0..4 {
            let mut next = Array4::zeros((dim, dim, dim, dim));
            for idx in ndarray::indices((dim, dim, dim, dim)) {
                let (i0, i1, i2, i3) = idx;
                let mut s = 0.0;
                for x in 0..dim {
                    let (v, f) = match slot {
                        0 => (t[[x, i1, i2, i3]], frame[[x, i0]]),
                        1 => (t[[i0, x, i2, i3]], frame[[x, i1]]),
                        2 => (t[[i0, i1, x, i3]], frame[[x, i2]]),
                        _ => (t[[i0, i1, i2, x]], frame[[x, i3]]),
                    };
                    s += v * f;
                }
                next[[i0, i1, i2, i3]] = s;
            }
            t = next;
        }
        t
    }

    /// `Ric(d_b, d_c) = trace(X -> R(X, d_b) d_c)`.
    pub fn ricci(&self) -> Array2<f64> {
        let dim = self.dim();
        Array2::from_shape_fn((dim, dim), |(b, c)| (0..dim).map(|a| self.mixed[[a, c, a, b]]).sum())
    }

    /// `K(X, Y) = <R(X,Y)Y, X> / (|X|^2 |Y|^2 - <X,Y>^2)`.
    pub fn sectional(&self, x: &[f64], y: &[f64]) -> f64 {
        let dim = self.dim();
        let mut num = 0.0;
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    for d in 0..dim {
                        num += self.lowered[[a, b, c, d]] * x[a] * y[b] * y[c] * x[d];
                    }
                }
            }
        }
        let ip = |u: &[f64], v: &[f64]| -> f64 {
            let mut s = 0.0;
            for a in 0..dim {
                for b in 0..dim {
                    s += u[a] * self.metric[[a, b]] * v[b];
                }
            }
            s
        };
        num / (ip(x, x) * ip(y, y) - ip(x, y).powi(2))
    }

    /// Largest violations of `R_abcd = -R_bacd`, `R_abcd = -R_abdc`,
    /// `R_abcd = R_cdab` and the first Bianchi identity.
    pub fn symmetry_defects(&self) -> [f64; 4] {
        let r = &self.lowered;
        let mut out = [0.0f64; 4];
        for (a, b, c, d) in ndarray::indices(r.dim()) {
            let v = r[[a, b, c, d]];
            out[0] = out[0].max((v + r[[b, a, c, d]]).abs());
            out[1] = out[1].max((v + r[[a, b, d, c]]).abs());
            out[2] = out[2].max((v - r[[c, d, a, b]]).abs());
            out[3] = out[3].max((v + r[[b, c, a, d]] + r[[c, a, b, d]]).abs());
        }
        out
    }
}

/// `K[[a, b]]` = sectional curvature of the plane `e_a ^ e_b` of the adapted
/// frame, diagonal left zero.
pub fn frame_sectional_curvatures(cs: &ChartSubmersion, p: &[f64], h: f64) -> Result<Array2<f64>> {
    cs.check_domain(p)?;
    let riem = riemann_fd(|q: &[f64]| (cs.metric_total)(q), p, h)?;
    let frame = cs.horizontal_lift(p)?;
    let dim = cs.dim_total();
    let mut k = Array2::zeros((dim, dim));
    for a in 0..dim {
        for b in 0..dim {
            if a != b {
                let x = frame.column(a).to_vec();
                let y = frame.column(b).to_vec();
                k[[a, b]] = riem.sectional(&x, &y);
            }
        }
    }
    Ok(k)
}

/// Maximum of `|K(e_a ^ e_b) - c|` over all frame planes and points.
pub fn sectional_curvature_check(
    cs: &ChartSubmersion,
    c: f64,
    points: &[ndarray::Array1<f64>],
    h: f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in points {
        let k = frame_sectional_curvatures(cs, p.as_slice().unwrap(), h)?;
        for (a, b) in ndarray::indices(k.dim()) {
            if a != b {
                worst = worst.max((k[[a, b]] - c).abs());
            }
        }
    }
    Ok(worst)
}

/// Ricci tensor of the base at `phi(p)` in the base frame, by finite
/// differences of the base metric.
pub fn base_ricci_fd(cs: &ChartSubmersion, p: &[f64], h: f64) -> Result<BaseRicci<f64>> {
    let y = cs.project(p)?;
    let riem = riemann_fd(|q: &[f64]| (cs.metric_base)(q), y.as_slice().unwrap(), h)?;
    let eps = (cs.frame_base)(y.as_slice().unwrap());
    let ric = eps.t().dot(&riem.ricci()).dot(&eps);
    Ok(BaseRicci::from_symmetric_part(&ric))
}

/// Sectional curvature of the base plane `eps_a ^ eps_b` at `phi(p)`.
pub fn base_sectional_fd(cs: &ChartSubmersion, p: &[f64], a: usize, b: usize, h: f64) -> Result<f64> {
    let y = cs.project(p)?;
    let riem = riemann_fd(|q: &[f64]| (cs.metric_base)(q), y.as_slice().unwrap(), h)?;
    let eps = (cs.frame_base)(y.as_slice().unwrap());
    Ok(riem.sectional(&eps.column(a).to_vec(), &eps.column(b).to_vec()))
}
