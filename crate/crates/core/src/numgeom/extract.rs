use super::chart::{shifted, ChartSubmersion};
use super::curvature::christoffel_fd;
use crate::data::{IntegrabilityData, IntegrabilityJet};
use crate::error::Result;
use ndarray::{Array1, Array2, Array3, Array4};

/// `[V, W](p) = V(W) - W(V)` with both directional derivatives taken as
/// `(W(p + hV(p)) - W(p - hV(p))) / 2h`.
pub fn lie_bracket_fd<V, W>(v: V, w: W, p: &[f64], h: f64) -> Result<Array1<f64>>
where
    V: Fn(&[f64]) -> Result<Array1<f64>>,
    W: Fn(&[f64]) -> Result<Array1<f64>>,
{
    let vp = v(p)?;
    let wp = w(p)?;
    let v_w = (w(&shifted(p, vp.view(), h))? - w(&shifted(p, vp.view(), -h))?) / (2.0 * h);
    let w_v = (v(&shifted(p, wp.view(), h))? - v(&shifted(p, wp.view(), -h))?) / (2.0 * h);
    Ok(v_w - w_v)
}

/// Adapted frame at `p` and `d[[a, b, ..]] = D_{e_a} e_b`, the coordinate
/// derivative of field `b` along field `a`.
pub fn frame_derivatives(
    cs: &ChartSubmersion,
    p: &[f64],
    h: f64,
) -> Result<(Array2<f64>, Array3<f64>)> {
    let dim = cs.dim_total();
    let frame = cs.horizontal_lift(p)?;
    let mut d = Array3::zeros((dim, dim, dim));
    for a in 0..dim {
        let plus = cs.horizontal_lift(&shifted(p, frame.column(a), h))?;
        let minus = cs.horizontal_lift(&shifted(p, frame.column(a), -h))?;
        let diff = (plus - minus) / (2.0 * h);
        for b in 0..dim {
            for x in 0..dim {
                d[[a, b, x]] = diff[[x, b]];
            }
        }
    }
    Ok((frame, d))
}

/// Frame components of all brackets: `table[[a, b, c]] = <[e_a, e_b], e_c>`.
pub fn bracket_table_fd(cs: &ChartSubmersion, p: &[f64], h: f64) -> Result<Array3<f64>> {
    let (frame, d) = frame_derivatives(cs, p, h)?;
    let g = cs.metric(p)?;
    let gframe = g.dot(&frame);
    let dim = cs.dim_total();
    let mut table = Array3::zeros((dim, dim, dim));
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                let mut s = 0.0;
                for x in 0..dim {
                    s += (d[[a, b, x]] - d[[b, a, x]]) * gframe[[x, c]];
                }
                table[[a, b, c]] = s;
            }
        }
    }
    Ok(table)
}

/// Raw extracted data and the antisymmetry defect that was removed.
pub fn extract_with_defect(
    cs: &ChartSubmersion,
    p: &[f64],
    h: f64,
) -> Result<(IntegrabilityData<f64>, f64)> {
    let n = cs.n;
    let br = bracket_table_fd(cs, p, h)?;
    let kappa = Array1::from_shape_fn(n, |i| br[[i, n, n]]);
    let f = Array3::from_shape_fn((n, n, n), |(k, i, j)| br[[i, j, k]]);
    let sigma = Array2::from_shape_fn((n, n), |(i, j)| -0.5 * br[[i, j, n]]);
    let (data, defect) = IntegrabilityData::antisymmetrized(n, f, kappa, sigma)?;
    log::debug!("{}: antisymmetrised extracted data at {p:?}, defect {defect:e}", cs.name);
    Ok((data, defect))
}

/// `kappa_i = <[e_i, e_{n+1}], e_{n+1}>`, `f^k_ij = <[e_i, e_j], e_k>`,
/// `sigma_ij = -1/2 <[e_i, e_j], e_{n+1}>`.
pub fn extract_integrability_data(
    cs: &ChartSubmersion,
    p: &[f64],
    h: f64,
) -> Result<IntegrabilityData<f64>> {
    extract_with_defect(cs, p, h).map(|(d, _)| d)
}

/// One classical Runge-Kutta step of length `t` along frame field `a`.
pub fn flow_step(cs: &ChartSubmersion, p: &[f64], a: usize, t: f64) -> Result<Vec<f64>> {
    let field = |q: &[f64]| -> Result<Array1<f64>> { Ok(cs.horizontal_lift(q)?.column(a).to_owned()) };
    let k1 = field(p)?;
    let k2 = field(&shifted(p, k1.view(), 0.5 * t))?;
    let k3 = field(&shifted(p, k2.view(), 0.5 * t))?;
    let k4 = field(&shifted(p, k3.view(), t))?;
    let incr = (k1 + k2 * 2.0 + k3 * 2.0 + k4) / 6.0;
    Ok(shifted(p, incr.view(), t))
}

/// Frame derivatives of the extracted data.
///
/// First derivatives: `(u(p + h e_a) - u(p - h e_a)) / 2h` along straight
/// lines. Second derivatives `e_a e_a(kappa)`: second difference along the
/// flow of `e_a`, integrated by one Runge-Kutta step each way.
pub fn extract_jet(cs: &ChartSubmersion, p: &[f64], h: f64) -> Result<IntegrabilityJet<f64>> {
    let n = cs.n;
    let base = extract_integrability_data(cs, p, h)?;
    let frame = cs.horizontal_lift(p)?;
    let mut d_f = Array4::zeros((n + 1, n, n, n));
    let mut d_kappa = Array2::zeros((n + 1, n));
    let mut d_sigma = Array3::zeros((n + 1, n, n));
    let mut dd = Array2::zeros((n + 1, n));
    for a in 0..=n {
        let up = extract_integrability_data(cs, &shifted(p, frame.column(a), h), h)?;
        let um = extract_integrability_data(cs, &shifted(p, frame.column(a), -h), h)?;
        let scale = 1.0 / (2.0 * h);
        d_f.index_axis_mut(ndarray::Axis(0), a)
            .assign(&((up.f() - um.f()) * scale));
        d_kappa
            .row_mut(a)
            .assign(&((up.kappa() - um.kappa()) * scale));
        d_sigma
            .index_axis_mut(ndarray::Axis(0), a)
            .assign(&((up.sigma() - um.sigma()) * scale));

        let fp = extract_integrability_data(cs, &flow_step(cs, p, a, h)?, h)?;
        let fm = extract_integrability_data(cs, &flow_step(cs, p, a, -h)?, h)?;
        let second = (fp.kappa() - base.kappa() * 2.0 + fm.kappa()) / (h * h);
        dd.row_mut(a).assign(&second);
    }
    let (jet, defect) = IntegrabilityJet::antisymmetrized(base, d_f, d_kappa, d_sigma, dd)?;
    log::debug!("{}: antisymmetrised jet at {p:?}, defect {defect:e}", cs.name);
    Ok(jet)
}

/// An extracted jet with the point and step it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct GridJet {
    pub point: Array1<f64>,
    pub jet: IntegrabilityJet<f64>,
    pub h: f64,
}

impl GridJet {
    pub fn extract(cs: &ChartSubmersion, point: &[f64], h: f64) -> Result<Self> {
        Ok(Self {
            point: Array1::from(point.to_vec()),
            jet: extract_jet(cs, point, h)?,
            h,
        })
    }
}

/// `table[[a, b, c]] = <nabla_{e_a} e_b, e_c>` from the Levi-Civita
/// connection of the chart metric, `nabla_X Y = D_X Y + Gamma(X, Y)`.
pub fn connection_oracle(cs: &ChartSubmersion, p: &[f64], h: f64) -> Result<Array3<f64>> {
    let dim = cs.dim_total();
    let (frame, d) = frame_derivatives(cs, p, h)?;
    let g = cs.metric(p)?;
    let gamma = christoffel_fd(|q: &[f64]| (cs.metric_total)(q), p, h)?;
    let gframe = g.dot(&frame);
    let mut table = Array3::zeros((dim, dim, dim));
    for a in 0..dim {
        for b in 0..dim {
            let mut cov = Array1::<f64>::zeros(dim);
            for x in 0..dim {
                let mut s = d[[a, b, x]];
                for y in 0..dim {
                    for z in 0..dim {
                        s += gamma[[x, y, z]] * frame[[y, a]] * frame[[z, b]];
                    }
                }
                cov[x] = s;
            }
            for c in 0..dim {
                table[[a, b, c]] = cov.dot(&gframe.column(c));
            }
        }
    }
    Ok(table)
}
