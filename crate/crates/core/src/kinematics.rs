//! Planar frame rotations and the transport theorems resolved in the body frame.
//!
//! The Earth frame `F_E` is inertial and its origin is the radar target. The
//! body frame `F_B` is fixed to the vehicle with `x` forward, `y` out the right
//! side and `z` down. Because the vehicle stays level, the attitude reduces to
//! a single azimuth angle `theta` about the common `z` axis.
//!
//! With `r` the vehicle position relative to the target resolved in `F_B`, the
//! three consistency relations checked by the detector are
//!
//! ```text
//! V = r' + w x r                                   (single transport)
//! A = r'' + 2 w x r' + w' x r + w x (w x r)        (double transport)
//! A = O_B/E(theta) R''                             (Earth-frame acceleration)
//! ```
//!
//! where primes are derivatives taken in the body frame, `R = O_E/B(theta) r`
//! is the position resolved in `F_E`, and `V = O_B/E(theta) R'`.
//!
//! Everything here is a pure function over plain values.

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};

/// A physical vector resolved in some frame. Units depend on context.
pub type Vec3 = Vector3<f64>;

/// Orthonormality tolerance for [`OrientationMatrix::is_orthonormal`].
pub const ORTHONORMAL_TOL: f64 = 1e-12;

/// Orientation matrix `O_E/B(theta)`: maps body-resolved components to
/// Earth-resolved components. Its transpose is `O_B/E(theta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientationMatrix(Matrix3<f64>);

impl OrientationMatrix {
    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// Body-to-Earth: `O_E/B * v`.
    pub fn apply(&self, v: &Vec3) -> Vec3 {
        self.0 * v
    }

    /// Earth-to-body: `O_E/B^T * v`.
    pub fn apply_transpose(&self, v: &Vec3) -> Vec3 {
        self.0.tr_mul(v)
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self(self.0 * other.0)
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn is_orthonormal(&self) -> bool {
        let err = self.0.transpose() * self.0 - Matrix3::identity();
        err.amax() <= ORTHONORMAL_TOL && (self.determinant() - 1.0).abs() <= ORTHONORMAL_TOL
    }
}

fn check_finite(what: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{what} must be finite, got {x}"
        )))
    }
}

fn check_finite_vec(what: &str, v: &Vec3) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{what} has a non-finite component: {v:?}"
        )))
    }
}

/// Right-hand rotation about `z` by `theta`, i.e. `O_E/B(theta)`.
///
/// The third row and column are written out literally so that planar
/// rotations never leak into the `z` channel.
pub fn rotation_about_z(theta: f64) -> Result<OrientationMatrix> {
    check_finite("theta", theta)?;
    let (s, c) = theta.sin_cos();
    #[rustfmt::skip]
    let m = Matrix3::new(
        c,  -s,  0.0,
        s,   c,  0.0,
        0.0, 0.0, 1.0,
    );
    Ok(OrientationMatrix(m))
}

/// `R = O_E/B(theta) r`.
pub fn body_to_earth_position(theta: f64, r_body: &Vec3) -> Result<Vec3> {
    check_finite_vec("r_body", r_body)?;
    Ok(rotation_about_z(theta)?.apply(r_body))
}

/// `O_B/E(theta) R''`: Earth-frame acceleration resolved in the body frame.
pub fn resolve_earth_accel_in_body(theta: f64, r_ddot_earth: &Vec3) -> Result<Vec3> {
    check_finite_vec("R_ddot", r_ddot_earth)?;
    Ok(rotation_about_z(theta)?.apply_transpose(r_ddot_earth))
}

/// Right-hand side of the single transport theorem, `r' + w x r`.
pub fn single_transport_rhs(r: &Vec3, r_dot: &Vec3, omega: &Vec3) -> Vec3 {
    r_dot + omega.cross(r)
}

/// Right-hand side of the double transport theorem,
/// `r'' + 2 w x r' + w' x r + w x (w x r)`.
pub fn double_transport_rhs(
    r: &Vec3,
    r_dot: &Vec3,
    r_ddot: &Vec3,
    omega: &Vec3,
    omega_dot: &Vec3,
) -> Vec3 {
    let coriolis = 2.0 * omega.cross(r_dot);
    let euler = omega_dot.cross(r);
    let centripetal = omega.cross(&omega.cross(r));
    r_ddot + coriolis + euler + centripetal
}
