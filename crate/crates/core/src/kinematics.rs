//! Velocity, rapidity and acceleration conversions in 1+1 Minkowski space
//! with metric `diag(+1, -1)` and `c = 1`.

use crate::error::{Error, Result};

/// Speeds at or above `1 - VELOCITY_MARGIN` are rejected rather than clamped.
pub const VELOCITY_MARGIN: f64 = 1e-12;

fn check_velocity(v: f64) -> Result<()> {
    if v.is_finite() && v.abs() < 1.0 - VELOCITY_MARGIN {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "|v| = {} is not below the speed of light",
            v.abs()
        )))
    }
}

/// A two-component Minkowski vector stored in light-cone components
/// `plus = t + x`, `minus = t - x`.
///
/// In these components a boost is a pair of scalings, so `u = (e^θ, e^-θ)`
/// keeps `u·u = 1` to rounding even at large rapidity, where `cosh² - sinh²`
/// in Cartesian components cancels catastrophically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector {
    pub plus: f64,
    pub minus: f64,
}

impl FourVector {
    pub fn from_components(t: f64, x: f64) -> Self {
        FourVector { plus: t + x, minus: t - x }
    }

    pub fn t(self) -> f64 {
        0.5 * (self.plus + self.minus)
    }

    pub fn x(self) -> f64 {
        0.5 * (self.plus - self.minus)
    }

    /// Minkowski inner product `a_t b_t - a_x b_x` under `diag(+1, -1)`.
    pub fn dot(self, other: FourVector) -> f64 {
        0.5 * (self.plus * other.minus + self.minus * other.plus)
    }
}

/// Kinematic views derived from a single rapidity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicState {
    pub theta: f64,
    pub v: f64,
    pub gamma: f64,
    /// Four-velocity `(cosh θ, sinh θ)`.
    pub u: FourVector,
    /// Unit spacelike vector `(sinh θ, cosh θ)` orthogonal to `u`, pointing right.
    pub w: FourVector,
}

impl KinematicState {
    pub fn from_rapidity(theta: f64) -> Self {
        let (ep, em) = (theta.exp(), (-theta).exp());
        KinematicState {
            theta,
            v: theta.tanh(),
            gamma: theta.cosh(),
            u: FourVector { plus: ep, minus: em },
            w: FourVector { plus: ep, minus: -em },
        }
    }

    pub fn from_velocity(v: f64) -> Result<Self> {
        Ok(Self::from_rapidity(rapidity_from_velocity(v)?))
    }
}

pub fn rapidity_from_velocity(v: f64) -> Result<f64> {
    check_velocity(v)?;
    Ok(v.atanh())
}

pub fn velocity_from_rapidity(theta: f64) -> f64 {
    theta.tanh()
}

/// Lorentz factor `(1 - v²)^(-1/2)`.
pub fn gamma_of(v: f64) -> Result<f64> {
    check_velocity(v)?;
    Ok(1.0 / (1.0 - v * v).sqrt())
}

/// Coordinate acceleration `dv/dt = A (1 - v²)^(3/2)` from proper acceleration `A`.
pub fn coord_accel_from_proper(a: f64, v: f64) -> Result<f64> {
    check_velocity(v)?;
    Ok(a * (1.0 - v * v).powf(1.5))
}

pub fn proper_accel_from_coord(a_c: f64, v: f64) -> Result<f64> {
    check_velocity(v)?;
    Ok(a_c / (1.0 - v * v).powf(1.5))
}

/// `A γ^-3` written in terms of rapidity, valid for any finite θ.
///
/// `1 - tanh²θ` loses all precision once `|θ|` passes ~19, while
/// `cosh(θ)^-3` stays accurate until it underflows.
pub fn coord_accel_from_rapidity(a: f64, theta: f64) -> f64 {
    a / theta.cosh().powi(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn rapidity_examples() {
        assert_eq!(rapidity_from_velocity(0.0).unwrap(), 0.0);
        assert_relative_eq!(
            rapidity_from_velocity(0.6).unwrap(),
            0.5 * (1.6f64 / 0.4).ln(),
            max_relative = 1e-15
        );
        for v in [-0.9, -0.5, 0.0, 0.5, 0.9] {
            let back = velocity_from_rapidity(rapidity_from_velocity(v).unwrap());
            assert!((back - v).abs() <= 1e-12);
        }
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_of(0.0).unwrap(), 1.0);
        assert_relative_eq!(gamma_of(0.6).unwrap(), 1.25, max_relative = 1e-15);
        for v in [0.1, 0.37, 0.99] {
            assert_eq!(gamma_of(v).unwrap(), gamma_of(-v).unwrap());
        }
    }

    #[test]
    fn superluminal_rejected() {
        for v in [1.0, -1.0, 1.5, 1.0 - 1e-13, f64::NAN] {
            assert!(rapidity_from_velocity(v).is_err());
            assert!(gamma_of(v).is_err());
            assert!(coord_accel_from_proper(1.0, v).is_err());
            assert!(proper_accel_from_coord(1.0, v).is_err());
        }
    }

    #[test]
    fn acceleration_examples() {
        assert_eq!(coord_accel_from_proper(2.0, 0.0).unwrap(), 2.0);
        assert_relative_eq!(coord_accel_from_proper(1.0, 0.6).unwrap(), 0.512, max_relative = 1e-15);
        assert_eq!(coord_accel_from_proper(0.0, 0.8).unwrap(), 0.0);
        assert_eq!(proper_accel_from_coord(2.0, 0.0).unwrap(), 2.0);
        assert_relative_eq!(proper_accel_from_coord(0.512, 0.6).unwrap(), 1.0, max_relative = 1e-15);
        assert!(coord_accel_from_proper(-3.0, 0.4).unwrap() < 0.0);
    }

    #[test]
    fn acceleration_round_trip_grid() {
        for v in [0.0, 0.3, -0.3, 0.9, -0.9] {
            for a in -5..=5 {
                let a = a as f64;
                let back =
                    proper_accel_from_coord(coord_accel_from_proper(a, v).unwrap(), v).unwrap();
                assert!((back - a).abs() <= 1e-12 * a.abs().max(1.0));
            }
        }
    }

    #[test]
    fn rapidity_form_agrees_with_velocity_form() {
        for theta in [-3.0, -0.2, 0.0, 0.7, 2.5] {
            let v = velocity_from_rapidity(theta);
            assert_relative_eq!(
                coord_accel_from_rapidity(-1.7, theta),
                coord_accel_from_proper(-1.7, v).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn v_gamma_strictly_increasing() {
        let n = 1000;
        let vals: Vec<f64> = (1..n)
            .map(|i| -1.0 + 2.0 * i as f64 / n as f64)
            .map(|v| v * gamma_of(v).unwrap())
            .collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
    }

    proptest! {
        #[test]
        fn frame_vectors_are_orthonormal(theta in -10.0f64..10.0) {
            let k = KinematicState::from_rapidity(theta);
            prop_assert!((k.u.dot(k.u) - 1.0).abs() <= 1e-9);
            prop_assert!((k.w.dot(k.w) + 1.0).abs() <= 1e-9);
            prop_assert!(k.u.dot(k.w).abs() <= 1e-9);
            prop_assert!((k.u.t() - theta.cosh()).abs() <= 1e-12 * theta.cosh());
            prop_assert!((k.w.t() - theta.sinh()).abs() <= 1e-12 * theta.cosh());
        }

        #[test]
        fn accel_round_trip(a in -50.0f64..50.0, v in -0.99f64..0.99) {
            let back = proper_accel_from_coord(coord_accel_from_proper(a, v).unwrap(), v).unwrap();
            prop_assert!((back - a).abs() <= 1e-12 * a.abs().max(1e-300));
        }
    }
}
