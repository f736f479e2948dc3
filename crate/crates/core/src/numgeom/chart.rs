use super::linalg;
use crate::error::{GeometryError, Result};
use ndarray::{s, Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;

pub type MatrixField = Arc<dyn Fn(&[f64]) -> Array2<f64> + Send + Sync>;
pub type VectorField = Arc<dyn Fn(&[f64]) -> Array1<f64> + Send + Sync>;

/// Fraction of each side of the domain box kept free of sample points, so
/// that finite-difference stencils stay inside the chart.
pub const SAMPLE_MARGIN: f64 = 0.1;

/// A Riemannian submersion `M^{n+1} -> N^n` written in a single chart of each
/// side.
///
/// `frame_base` returns an `n x n` matrix whose columns are the orthonormal
/// base fields `eps_i` in base coordinates; `projection_jacobian` returns the
/// `n x (n+1)` differential of `projection`.
#[derive(Clone)]
pub struct ChartSubmersion {
    pub name: String,
    pub n: usize,
    pub metric_total: MatrixField,
    pub metric_base: MatrixField,
    pub projection: VectorField,
    pub projection_jacobian: MatrixField,
    pub frame_base: MatrixField,
    /// Per-coordinate bounds of the chart, total-space coordinates.
    pub domain_box: Vec<(f64, f64)>,
    /// Sectional curvature of the total space, when it is constant.
    pub total_curvature: Option<f64>,
}

impl fmt::Debug for ChartSubmersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartSubmersion")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("domain_box", &self.domain_box)
            .field("total_curvature", &self.total_curvature)
            .finish_non_exhaustive()
    }
}

/// Pointwise quality of an adapted frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftDefects {
    /// `max |<e_a, e_b> - delta_ab|`.
    pub orthonormality: f64,
    /// `max |dphi(e_i) - eps_i|` in base coordinates.
    pub projectability: f64,
    /// `max |dphi(e_{n+1})|`.
    pub verticality: f64,
    /// `max |h(dphi X, dphi Y) - g(X, Y)|` over the horizontal frame.
    pub isometry: f64,
}

impl LiftDefects {
    pub fn max(&self) -> f64 {
        self.orthonormality
            .max(self.projectability)
            .max(self.verticality)
            .max(self.isometry)
    }
}

impl ChartSubmersion {
    pub fn dim_total(&self) -> usize {
        self.n + 1
    }

    pub fn dim_base(&self) -> usize {
        self.n
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.check_domain(p).is_ok()
    }

    pub fn check_domain(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.n + 1 {
            return Err(GeometryError::dims("point", self.n + 1, p.len()));
        }
        for (i, (&x, &(lo, hi))) in p.iter().zip(&self.domain_box).enumerate() {
            if !(lo..=hi).contains(&x) {
                return Err(GeometryError::OutOfDomain {
                    point: p.to_vec(),
                    coordinate: i + 1,
                });
            }
        }
        Ok(())
    }

    pub fn metric(&self, p: &[f64]) -> Result<Array2<f64>> {
        self.check_domain(p)?;
        Ok((self.metric_total)(p))
    }

    pub fn project(&self, p: &[f64]) -> Result<Array1<f64>> {
        self.check_domain(p)?;
        Ok((self.projection)(p))
    }

    /// Adapted frame at `p`: columns `e_1 .. e_n` are horizontal lifts of the
    /// base frame, column `n` is the unit vertical field.
    ///
    /// The vertical direction is the generalised cross product of the rows of
    /// `dphi`, so its sign is fixed by the orientation of the chart.
    pub fn horizontal_lift(&self, p: &[f64]) -> Result<Array2<f64>> {
        self.check_domain(p)?;
        let n = self.n;
        let g = (self.metric_total)(p);
        let jac = (self.projection_jacobian)(p);
        let eps = (self.frame_base)((self.projection)(p).as_slice().unwrap());

        let mut v = Array1::zeros(n + 1);
        for a in 0..=n {
            let sign = if (n + a).is_multiple_of(2) { 1.0 } else { -1.0 };
            v[a] = sign * linalg::det(&linalg::drop_column(&jac, a));
        }
        let row_scale: f64 = jac.rows().into_iter().map(|r| r.dot(&r).sqrt()).product();
        let v_len = v.dot(&v).sqrt();
        if !(v_len > 1e-12 * row_scale) {
            return Err(GeometryError::RankDeficient { point: p.to_vec() });
        }
        let gv = g.dot(&v);
        let norm_sq = v.dot(&gv);
        if !(norm_sq > 0.0) || !norm_sq.is_finite() {
            return Err(GeometryError::SingularMetric { point: p.to_vec() });
        }
        let v = v / norm_sq.sqrt();
        let gv = g.dot(&v);

        let mut system = Array2::zeros((n + 1, n + 1));
        system.slice_mut(s![..n, ..]).assign(&jac);
        system.row_mut(n).assign(&gv);
        let mut rhs = Array2::zeros((n + 1, n));
        rhs.slice_mut(s![..n, ..]).assign(&eps);
        let lifts = linalg::solve(&system, &rhs)
            .ok_or_else(|| GeometryError::RankDeficient { point: p.to_vec() })?;

        let mut frame = Array2::zeros((n + 1, n + 1));
        frame.slice_mut(s![.., ..n]).assign(&lifts);
        frame.column_mut(n).assign(&v);
        Ok(frame)
    }

    pub fn lift_defects(&self, p: &[f64]) -> Result<LiftDefects> {
        let n = self.n;
        let frame = self.horizontal_lift(p)?;
        let g = (self.metric_total)(p);
        let y = (self.projection)(p);
        let jac = (self.projection_jacobian)(p);
        let eps = (self.frame_base)(y.as_slice().unwrap());
        let hb = (self.metric_base)(y.as_slice().unwrap());

        let gram = frame.t().dot(&g).dot(&frame);
        let pushed = jac.dot(&frame);
        let pushed_gram = pushed.t().dot(&hb).dot(&pushed);
        let mut d = LiftDefects {
            orthonormality: 0.0,
            projectability: 0.0,
            verticality: 0.0,
            isometry: 0.0,
        };
        for a in 0..=n {
            for b in 0..=n {
                let target = if a == b { 1.0 } else { 0.0 };
                d.orthonormality = d.orthonormality.max((gram[[a, b]] - target).abs());
                if a < n && b < n {
                    d.isometry = d.isometry.max((pushed_gram[[a, b]] - gram[[a, b]]).abs());
                }
            }
        }
        for r in 0..n {
            for i in 0..n {
                d.projectability = d.projectability.max((pushed[[r, i]] - eps[[r, i]]).abs());
            }
            d.verticality = d.verticality.max(pushed[[r, n]].abs());
        }
        Ok(d)
    }

    /// Uniform points in the domain box with a `SAMPLE_MARGIN` border removed.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<Array1<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                self.domain_box
                    .iter()
                    .map(|&(lo, hi)| {
                        let m = SAMPLE_MARGIN * (hi - lo);
                        rng.gen_range((lo + m)..=(hi - m))
                    })
                    .collect()
            })
            .collect()
    }

    /// Centre of the domain box.
    pub fn centre(&self) -> Array1<f64> {
        self.domain_box.iter().map(|&(lo, hi)| 0.5 * (lo + hi)).collect()
    }

    /// The same submersion in the coordinates `u` with
    /// `x_a = u_a + alpha sin(u_{a+1 mod n+1})`.
    ///
    /// Native catalog charts often make finite differences exact (fields
    /// linear in the coordinates, or independent of the fibre coordinate);
    /// the sheared chart exposes the truncation error.
    pub fn sheared(&self, alpha: f64) -> ChartSubmersion {
        let dim = self.n + 1;
        let psi = move |u: &[f64]| -> Array1<f64> {
            (0..dim).map(|a| u[a] + alpha * u[(a + 1) % dim].sin()).collect()
        };
        let dpsi = move |u: &[f64]| -> Array2<f64> {
            let mut m = Array2::eye(dim);
            for a in 0..dim {
                let b = (a + 1) % dim;
                m[[a, b]] += alpha * u[b].cos();
            }
            m
        };
        let g = self.metric_total.clone();
        let proj = self.projection.clone();
        let jac = self.projection_jacobian.clone();
        let domain_box = self
            .domain_box
            .iter()
            .map(|&(lo, hi)| {
                assert!(hi - lo > 2.0 * alpha.abs(), "shear larger than the domain");
                (lo + alpha.abs(), hi - alpha.abs())
            })
            .collect();
        ChartSubmersion {
            name: format!("{}-sheared", self.name),
            n: self.n,
            metric_total: Arc::new(move |u| {
                let d = dpsi(u);
                d.t().dot(&g(psi(u).as_slice().unwrap())).dot(&d)
            }),
            metric_base: self.metric_base.clone(),
            projection: {
                let proj = proj.clone();
                Arc::new(move |u| proj(psi(u).as_slice().unwrap()))
            },
            projection_jacobian: Arc::new(move |u| jac(psi(u).as_slice().unwrap()).dot(&dpsi(u))),
            frame_base: self.frame_base.clone(),
            domain_box,
            total_curvature: self.total_curvature,
        }
    }
}

/// `p + t v`.
pub(crate) fn shifted(p: &[f64], v: ndarray::ArrayView1<f64>, t: f64) -> Vec<f64> {
    p.iter().zip(v.iter()).map(|(x, d)| x + t * d).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numgeom::catalog::{flat, hopf, hyperbolic_slice, nil3};

    #[test]
    fn flat_lift_is_identity() {
        let cs = flat(3);
        assert_eq!(cs.horizontal_lift(&[0.1, 0.2, -0.3, 0.4]).unwrap(), Array2::eye(4));
    }

    #[test]
    fn hyperbolic_lift_at_unit_height() {
        let frame = hyperbolic_slice(2).horizontal_lift(&[0.0, 0.0, 1.0]).unwrap();
        // e_1 = d_y, e_2 = d_{x_2}, e_3 = d_{x_1}
        let expected = ndarray::array![[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 0.0]];
        assert_eq!(frame, expected);
    }

    #[test]
    fn hyperbolic_lift_scales_with_height() {
        let frame = hyperbolic_slice(3).horizontal_lift(&[0.2, -0.1, 0.3, 1.5]).unwrap();
        assert!((frame[[3, 0]] - 1.5).abs() < 1e-15);
        assert!((frame[[1, 1]] - 1.5).abs() < 1e-15);
        assert!((frame[[2, 2]] - 1.5).abs() < 1e-15);
        assert!((frame[[0, 3]].abs() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn catalog_lifts_are_adapted() {
        for cs in [flat(2), hyperbolic_slice(4), hopf(), nil3(), hopf().sheared(0.2)] {
            for p in cs.sample_points(20, 7) {
                let d = cs.lift_defects(p.as_slice().unwrap()).unwrap();
                assert!(d.max() < 1e-10, "{}: {d:?}", cs.name);
            }
        }
    }

    #[test]
    fn hopf_lift_matches_closed_form() {
        let eta: f64 = 0.7;
        let frame = hopf().horizontal_lift(&[eta, 0.3, -0.4]).unwrap();
        let expected = ndarray::array![
            [1.0, 0.0, 0.0],
            [0.0, eta.tan(), 1.0],
            [0.0, -1.0 / eta.tan(), 1.0]
        ];
        for (a, b) in frame.iter().zip(expected.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn out_of_domain_names_coordinate() {
        let err = hyperbolic_slice(2).horizontal_lift(&[0.0, 0.0, 0.1]).unwrap_err();
        assert_eq!(
            err,
            GeometryError::OutOfDomain {
                point: vec![0.0, 0.0, 0.1],
                coordinate: 3
            }
        );
        assert!(matches!(
            flat(2).horizontal_lift(&[0.0, 0.0]),
            Err(GeometryError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rank_deficient_projection() {
        let mut cs = flat(2);
        cs.projection_jacobian = Arc::new(|_| ndarray::array![[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]]);
        assert!(matches!(
            cs.horizontal_lift(&[0.0, 0.0, 0.0]),
            Err(GeometryError::RankDeficient { .. })
        ));
    }

    #[test]
    fn sample_points_are_deterministic_and_inside() {
        let cs = hopf();
        let a = cs.sample_points(50, 3);
        assert_eq!(a, cs.sample_points(50, 3));
        assert_ne!(a, cs.sample_points(50, 4));
        assert!(a.iter().all(|p| cs.contains(p.as_slice().unwrap())));
    }

    #[test]
    fn shear_keeps_projection() {
        let base = hyperbolic_slice(2);
        let sheared = base.sheared(0.2);
        let u = [0.1f64, -0.2, 1.0];
        let x: Vec<f64> = (0..3).map(|a| u[a] + 0.2 * u[(a + 1) % 3].sin()).collect();
        assert_eq!((sheared.projection)(&u), (base.projection)(&x));
        assert_eq!(sheared.domain_box[2], (0.7, 1.8));
    }
}
