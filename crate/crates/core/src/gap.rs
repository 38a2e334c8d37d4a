//! First-order stationarity gaps.
//!
//! `G_X(x, y) = sup_{u in X} <grad_x L(x, y), x - u>` is always evaluated with
//! the primal LMO. The dual gap has two forms:
//!
//! * LMO form: `G_Y = sup_{v in Y} <grad_y L(x, y), v - y>`;
//! * PO form: `G_Y = ||y - P_Y(y + sigma grad_y L(x, y))|| / sigma`.
//!
//! The two forms are not comparable numerically and are never mixed in one trace.

use crate::error::{Error, Result};
use crate::linalg::{dist, dot, sub};
use crate::objective::{checked_grads, SaddleObjective};
use crate::scalar::Scalar;
use crate::sets::{FeasibleSet, FEASIBILITY_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DualGapMode {
    Lmo,
    Projection,
}

impl DualGapMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DualGapMode::Lmo => "LMO_FORM",
            DualGapMode::Projection => "PO_FORM",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport<T> {
    pub gap_x: T,
    pub gap_y: T,
    pub gap_z: T,
    pub mode: DualGapMode,
    /// Step used by the PO form; `None` for the LMO form.
    pub sigma: Option<T>,
}

impl<T: Scalar> GapReport<T> {
    /// `true` iff `gap_z <= epsilon`.
    pub fn is_epsilon_stationary(&self, epsilon: T) -> Result<bool> {
        is_epsilon_stationary(self, epsilon)
    }
}

pub fn is_epsilon_stationary<T: Scalar>(report: &GapReport<T>, epsilon: T) -> Result<bool> {
    if !(epsilon > T::zero()) {
        return Err(Error::invalid("epsilon", "must be positive"));
    }
    Ok(report.gap_z <= epsilon)
}

fn require_feasible<T: Scalar>(set: &dyn FeasibleSet<T>, p: &[T]) -> Result<()> {
    if !set.contains(p, T::lit(FEASIBILITY_TOL)) {
        return Err(Error::Infeasible {
            set: set.name(),
            violation: set.violation(p).as_f64(),
        });
    }
    Ok(())
}

/// `<g, x - lmo_X(g)>`, clamped at zero against roundoff.
fn primal_gap<T: Scalar>(x_set: &dyn FeasibleSet<T>, x: &[T], gx: &[T]) -> Result<T> {
    let s = x_set.lmo(gx)?;
    Ok(dot(gx, &sub(x, &s)).max(T::zero()))
}

/// Gap with the LMO-form dual component.
pub fn gap_lmo<T, O>(
    obj: &O,
    x_set: &dyn FeasibleSet<T>,
    y_set: &dyn FeasibleSet<T>,
    x: &[T],
    y: &[T],
) -> Result<GapReport<T>>
where
    T: Scalar,
    O: SaddleObjective<T> + ?Sized,
{
    let (gx, gy) = checked_grads(obj, x, y)?;
    require_feasible(x_set, x)?;
    require_feasible(y_set, y)?;
    let gap_x = primal_gap(x_set, x, &gx)?;
    let neg: Vec<T> = gy.iter().map(|&v| -v).collect();
    let p = y_set.lmo(&neg)?;
    let gap_y = dot(&gy, &sub(&p, y)).max(T::zero());
    Ok(GapReport {
        gap_x,
        gap_y,
        gap_z: gap_x + gap_y,
        mode: DualGapMode::Lmo,
        sigma: None,
    })
}

/// Gap with the PO-form dual component for step `sigma`.
pub fn gap_po<T, O>(
    obj: &O,
    x_set: &dyn FeasibleSet<T>,
    y_set: &dyn FeasibleSet<T>,
    sigma: T,
    x: &[T],
    y: &[T],
) -> Result<GapReport<T>>
where
    T: Scalar,
    O: SaddleObjective<T> + ?Sized,
{
    if !(sigma > T::zero()) || !sigma.is_finite() {
        return Err(Error::invalid("sigma", "must be finite and positive"));
    }
    if !y_set.has_projection() {
        return Err(Error::NoProjection(y_set.name()));
    }
    let (gx, gy) = checked_grads(obj, x, y)?;
    require_feasible(x_set, x)?;
    require_feasible(y_set, y)?;
    let gap_x = primal_gap(x_set, x, &gx)?;
    let stepped: Vec<T> = y.iter().zip(&gy).map(|(&yi, &gi)| yi + sigma * gi).collect();
    let p = y_set.project(&stepped)?;
    let gap_y = dist(y, &p) / sigma;
    Ok(GapReport {
        gap_x,
        gap_y,
        gap_z: gap_x + gap_y,
        mode: DualGapMode::Projection,
        sigma: Some(sigma),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::testing::Bilinear;
    use crate::objective::Smoothness;
    use crate::sets::L2Ball;

    /// Objective with a prescribed constant dual gradient.
    struct ConstDual(Vec<f64>);

    impl SaddleObjective<f64> for ConstDual {
        fn dim_x(&self) -> usize {
            1
        }
        fn dim_y(&self) -> usize {
            self.0.len()
        }
        fn value(&self, _x: &[f64], y: &[f64]) -> f64 {
            dot(&self.0, y)
        }
        fn grad_x(&self, _x: &[f64], _y: &[f64]) -> Vec<f64> {
            vec![0.0]
        }
        fn grad_y(&self, _x: &[f64], _y: &[f64]) -> Vec<f64> {
            self.0.clone()
        }
        fn smoothness(&self) -> Smoothness<f64> {
            Smoothness {
                l_xx: 0.0,
                l_yx: 1.0,
                l_yy: 0.0,
                mu_tilde: 0.0,
            }
        }
    }

    fn unit_disc() -> L2Ball<f64> {
        L2Ball::centered(2, 1.0).unwrap()
    }

    /// Brute-force sup over a dense angular grid of the unit circle (the sup of
    /// a linear function over the disc is attained on the circle).
    fn grid_sup(f: impl Fn(&[f64]) -> f64) -> f64 {
        (0..100_000)
            .map(|i| {
                let t = i as f64 * std::f64::consts::TAU / 100_000.0;
                f(&[t.cos(), t.sin()])
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn bilinear_at_e1_matches_grid() {
        let obj = Bilinear { dim: 2 };
        let x = [1.0, 0.0];
        let y = [1.0, 0.0];
        let gx = obj.grad_x(&x, &y);
        let gy = obj.grad_y(&x, &y);
        let gx_ref = grid_sup(|u| dot(&gx, &sub(&x, u)));
        let gy_ref = grid_sup(|v| dot(&gy, &sub(v, &y)));
        assert!((gx_ref - 2.0).abs() < 1e-8 && gy_ref.abs() < 1e-8);
        let r = gap_lmo(&obj, &unit_disc(), &unit_disc(), &x, &y).unwrap();
        assert!((r.gap_x - 2.0).abs() < 1e-12);
        assert!(r.gap_y.abs() < 1e-12);
        assert!((r.gap_z - 2.0).abs() < 1e-12);
        assert_eq!(r.mode, DualGapMode::Lmo);
        assert_eq!(r.sigma, None);
    }

    #[test]
    fn interior_saddle_has_zero_gap() {
        let obj = Bilinear { dim: 2 };
        let r = gap_lmo(&obj, &unit_disc(), &unit_disc(), &[0.0, 0.0], &[0.0, 0.0]).unwrap();
        assert_eq!((r.gap_x, r.gap_y, r.gap_z), (0.0, 0.0, 0.0));
        let p = gap_po(&obj, &unit_disc(), &unit_disc(), 0.7, &[0.0, 0.0], &[0.0, 0.0]).unwrap();
        assert_eq!(p.gap_z, 0.0);
    }

    #[test]
    fn po_form_projection_cases() {
        let obj = ConstDual(vec![2.0, 0.0]);
        let x_set = L2Ball::centered(1, 1.0).unwrap();
        let r = gap_po(&obj, &x_set, &unit_disc(), 1.0, &[0.0], &[0.0, 0.0]).unwrap();
        assert!((r.gap_y - 1.0).abs() < 1e-15);
        assert_eq!(r.mode, DualGapMode::Projection);
        assert_eq!(r.sigma, Some(1.0));

        // Boundary point, inward gradient keeps the step feasible.
        let g = vec![-0.6, -0.2];
        let obj = ConstDual(g.clone());
        let r = gap_po(&obj, &x_set, &unit_disc(), 0.5, &[0.0], &[1.0, 0.0]).unwrap();
        assert!((r.gap_y - crate::linalg::norm(&g)).abs() < 1e-12);
    }

    #[test]
    fn po_form_errors() {
        let obj = Bilinear { dim: 2 };
        let s = crate::sets::Simplex::new(2).unwrap();
        let disc = unit_disc();
        assert!(matches!(
            gap_po(&obj, &disc, &disc, 0.0, &[0.0, 0.0], &[0.0, 0.0]),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(gap_po(&obj, &disc, &s, 1.0, &[0.0, 0.0], &[0.5, 0.5]).is_ok());
        let nuclear = crate::sets::NuclearBall::new(1, 2, 1.0).unwrap();
        assert!(gap_po(&obj, &disc, &nuclear, 1.0, &[0.0, 0.0], &[0.5, 0.0]).is_ok());
    }

    #[test]
    fn infeasible_point_rejected() {
        let obj = Bilinear { dim: 2 };
        let err = gap_lmo(&obj, &unit_disc(), &unit_disc(), &[2.0, 0.0], &[0.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::Infeasible { .. }));
    }

    #[test]
    fn epsilon_stationarity() {
        let mk = |z: f64| GapReport {
            gap_x: z,
            gap_y: 0.0,
            gap_z: z,
            mode: DualGapMode::Lmo,
            sigma: None,
        };
        assert!(mk(0.0).is_epsilon_stationary(1e-6).unwrap());
        assert!(!mk(2.0).is_epsilon_stationary(1.0).unwrap());
        assert!(mk(1.0).is_epsilon_stationary(1.0).unwrap());
        assert!(mk(1.0).is_epsilon_stationary(0.0).is_err());
    }
}
