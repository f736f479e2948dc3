//! Explicit submersions with documented base frames.
//!
//! | name               | total space          | base       | base frame                                  |
//! |--------------------|----------------------|------------|---------------------------------------------|
//! | `flat`             | `R^{n+1}`            | `R^n`      | coordinate fields                           |
//! | `hyperbolic-slice` | `H^{n+1}(-1)`        | `H^n(-1)`  | `eps_1 = y d_y`, `eps_k = y d_{x_k}`        |
//! | `hopf`             | `S^3(1)`             | `S^2(1/2)` | `eps_1 = d_eta`, `eps_2 = d_psi / (sin cos)`|
//! | `nil3`             | `Nil_3`              | `R^2`      | `d_x`, `d_y`                                |
//!
//! Each name with `-sheared` appended gives the same submersion in the
//! sheared chart of [`ChartSubmersion::sheared`].

use super::chart::ChartSubmersion;
use crate::error::{GeometryError, Result};
use ndarray::{Array1, Array2};
use std::sync::Arc;

/// Shear amplitude of the `-sheared` catalog entries.
pub const SHEAR: f64 = 0.2;

/// `R^{n+1} -> R^n`, dropping the last coordinate.
pub fn flat(n: usize) -> ChartSubmersion {
    assert!(n >= 1);
    ChartSubmersion {
        name: "flat".into(),
        n,
        metric_total: Arc::new(move |_| Array2::eye(n + 1)),
        metric_base: Arc::new(move |_| Array2::eye(n)),
        projection: Arc::new(move |p| Array1::from(p[..n].to_vec())),
        projection_jacobian: Arc::new(move |_| Array2::from_shape_fn((n, n + 1), |(i, j)| f64::from(u8::from(i == j)))),
        frame_base: Arc::new(move |_| Array2::eye(n)),
        domain_box: vec![(-1.0, 1.0); n + 1],
        total_curvature: Some(0.0),
    }
}

/// Half-space model `(x_1, .., x_n, y)`, metric `(|dx|^2 + dy^2) / y^2`,
/// projecting to `(x_2, .., x_n, y)`. The lifts are `e_1 = y d_y`,
/// `e_k = y d_{x_k}` and `e_{n+1} = +-y d_{x_1}`.
pub fn hyperbolic_slice(n: usize) -> ChartSubmersion {
    assert!(n >= 1);
    let base_frame = move |q: &[f64]| {
        let y = q[n - 1];
        let mut m = Array2::zeros((n, n));
        m[[n - 1, 0]] = y;
        for k in 1..n {
            m[[k - 1, k]] = y;
        }
        m
    };
    let mut domain_box = vec![(-1.0, 1.0); n];
    domain_box.push((0.5, 2.0));
    ChartSubmersion {
        name: "hyperbolic-slice".into(),
        n,
        metric_total: Arc::new(move |p| Array2::eye(n + 1) / (p[n] * p[n])),
        metric_base: Arc::new(move |q| Array2::eye(n) / (q[n - 1] * q[n - 1])),
        projection: Arc::new(move |p| Array1::from(p[1..].to_vec())),
        projection_jacobian: Arc::new(move |_| Array2::from_shape_fn((n, n + 1), |(i, j)| f64::from(u8::from(j == i + 1)))),
        frame_base: Arc::new(base_frame),
        domain_box,
        total_curvature: Some(-1.0),
    }
}

/// `(eta, xi_1, xi_2) -> (cos eta e^{i xi_1}, sin eta e^{i xi_2})` on the unit
/// sphere, projected to `(eta, psi = xi_1 - xi_2)` on the sphere of radius
/// 1/2, metric `d eta^2 + sin^2 cos^2 d psi^2`. The lifts are `e_1 = d_eta`,
/// `e_2 = tan eta d_{xi_1} - cot eta d_{xi_2}`, `e_3 = d_{xi_1} + d_{xi_2}`.
pub fn hopf() -> ChartSubmersion {
    ChartSubmersion {
        name: "hopf".into(),
        n: 2,
        metric_total: Arc::new(|p| {
            let (s, c) = p[0].sin_cos();
            Array2::from_diag(&Array1::from(vec![1.0, c * c, s * s]))
        }),
        metric_base: Arc::new(|q| {
            let (s, c) = q[0].sin_cos();
            Array2::from_diag(&Array1::from(vec![1.0, s * s * c * c]))
        }),
        projection: Arc::new(|p| Array1::from(vec![p[0], p[1] - p[2]])),
        projection_jacobian: Arc::new(|_| ndarray::array![[1.0, 0.0, 0.0], [0.0, 1.0, -1.0]]),
        frame_base: Arc::new(|q| {
            let (s, c) = q[0].sin_cos();
            Array2::from_diag(&Array1::from(vec![1.0, 1.0 / (s * c)]))
        }),
        domain_box: vec![(0.3, 1.27), (-3.0, 3.0), (-3.0, 3.0)],
        total_curvature: Some(1.0),
    }
}

/// Heisenberg group, metric `dx^2 + dy^2 + (dz - x dy)^2`, projected to
/// `(x, y)`. The lifts are `e_1 = d_x`, `e_2 = d_y + x d_z`, `e_3 = d_z`.
pub fn nil3() -> ChartSubmersion {
    ChartSubmersion {
        name: "nil3".into(),
        n: 2,
        metric_total: Arc::new(|p| {
            let x = p[0];
            ndarray::array![[1.0, 0.0, 0.0], [0.0, 1.0 + x * x, -x], [0.0, -x, 1.0]]
        }),
        metric_base: Arc::new(|_| Array2::eye(2)),
        projection: Arc::new(|p| Array1::from(vec![p[0], p[1]])),
        projection_jacobian: Arc::new(|_| ndarray::array![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
        frame_base: Arc::new(|_| Array2::eye(2)),
        domain_box: vec![(-1.0, 1.0); 3],
        total_curvature: None,
    }
}

pub const EXAMPLE_NAMES: [&str; 4] = ["flat", "hyperbolic-slice", "hopf", "nil3"];

/// Looks up a catalog entry; `n` is used by the dimension-generic examples.
pub fn example_by_name(name: &str, n: usize) -> Result<ChartSubmersion> {
    let (stem, sheared) = match name.strip_suffix("-sheared") {
        Some(stem) => (stem, true),
        None => (name, false),
    };
    let cs = match stem {
        "flat" if n >= 1 => flat(n),
        "hyperbolic-slice" if n >= 1 => hyperbolic_slice(n),
        "hopf" => hopf(),
        "nil3" => nil3(),
        _ => return Err(GeometryError::UnknownExample(name.to_string())),
    };
    Ok(if sheared { cs.sheared(SHEAR) } else { cs })
}

/// All native examples, plus sheared hyperbolic slice and Hopf.
pub fn example_catalog(n: usize) -> Vec<ChartSubmersion> {
    vec![
        flat(n),
        hyperbolic_slice(n),
        hopf(),
        nil3(),
        hyperbolic_slice(n).sheared(SHEAR),
        hopf().sheared(SHEAR),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biharmonic::tension;
    use crate::numgeom::extract::extract_integrability_data;

    #[test]
    fn catalog_has_named_examples() {
        let cat = example_catalog(3);
        assert!(cat.len() >= 4);
        for name in EXAMPLE_NAMES {
            assert!(cat.iter().any(|c| c.name == name));
            assert_eq!(example_by_name(name, 3).unwrap().name, name);
        }
        assert_eq!(example_by_name("hopf-sheared", 2).unwrap().name, "hopf-sheared");
        assert_eq!(
            example_by_name("torus", 2).unwrap_err(),
            GeometryError::UnknownExample("torus".into())
        );
    }

    #[test]
    fn examples_are_riemannian_submersions() {
        for cs in example_catalog(3) {
            for p in cs.sample_points(100, 42) {
                let d = cs.lift_defects(p.as_slice().unwrap()).unwrap();
                assert!(d.isometry < 1e-10 && d.orthonormality < 1e-10, "{}", cs.name);
            }
        }
    }

    #[test]
    fn hyperbolic_slice_has_unit_tension() {
        let cs = hyperbolic_slice(4);
        for p in cs.sample_points(20, 9) {
            let d = extract_integrability_data(&cs, p.as_slice().unwrap(), 1e-3).unwrap();
            let t = tension(&d);
            assert!((t.dot(&t).sqrt() - 1.0).abs() < 1e-9);
        }
    }
}
