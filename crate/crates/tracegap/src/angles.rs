//! Canonical angles between equal-dimension subspaces and the distances
//! derived from them.
//!
//! For frames `x` and `y` spanning k-dimensional subspaces of C^n, the
//! cosines are the singular values of `x^H y`, and the sines are the
//! singular values of the projected residual `y - x (x^H y)`, which equal
//! the singular values of `x_perp^H y` padded with zeros to length k. The
//! sine route is the numerically trustworthy one at small angles, so every
//! distance here is derived from the sines.

use serde::Serialize;

use crate::decomp::{singular_values, StiefelFrame};
use crate::error::{Error, Result};

/// Canonical angles of a subspace pair, sorted descending, with the
/// distances derived from them.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalAngleSet {
    /// Angles in radians, descending, each in [0, pi/2].
    pub thetas: Vec<f64>,
    /// Sines of the angles, descending; singular values of the projected
    /// residual, clamped to [0, 1].
    pub sines: Vec<f64>,
    /// Cosines aligned with `thetas` (ascending); singular values of
    /// `x^H y`, clamped to [0, 1].
    pub cosines: Vec<f64>,
    /// Spectral subspace distance: sine of the largest angle.
    pub dist_2: f64,
    /// Frobenius subspace distance: `||sin Theta||_F`.
    pub dist_f: f64,
    /// Half-angle aggregate: `||sin(Theta / 2)||_F`.
    pub half_angle_dist_f: f64,
}

impl CanonicalAngleSet {
    /// Number of angles (the common subspace dimension).
    pub fn k(&self) -> usize {
        self.thetas.len()
    }
}

/// Canonical angles between the column spans of two frames of equal
/// dimension in the same ambient space.
pub fn canonical_angles(x: &StiefelFrame, y: &StiefelFrame) -> Result<CanonicalAngleSet> {
    if x.n() != y.n() || x.k() != y.k() {
        return Err(Error::DimensionMismatch {
            context: "canonical_angles".into(),
            expected: format!("{} x {}", x.n(), x.k()),
            found: format!("{} x {}", y.n(), y.k()),
        });
    }
    let k = x.k();
    if k == 0 {
        return Ok(CanonicalAngleSet {
            thetas: Vec::new(),
            sines: Vec::new(),
            cosines: Vec::new(),
            dist_2: 0.0,
            dist_f: 0.0,
            half_angle_dist_f: 0.0,
        });
    }

    let m = &x.matrix().adjoint() * y.matrix();
    let mut cosines = singular_values(&m);
    for c in &mut cosines {
        *c = c.clamp(0.0, 1.0);
    }

    let z = y.matrix() - &(x.matrix() * &m);
    let mut sines = singular_values(&z);
    for s in &mut sines {
        *s = s.clamp(0.0, 1.0);
    }

    // Pair the largest sine with the smallest cosine: both lists are
    // descending, so angle i takes sines[i] and cosines[k - 1 - i].
    let thetas: Vec<f64> = (0..k)
        .map(|i| sines[i].atan2(cosines[k - 1 - i]))
        .collect();
    cosines.reverse();

    let dist_2 = sines[0];
    let dist_f = sines.iter().map(|s| s * s).sum::<f64>().sqrt();
    let half_angle_dist_f = thetas
        .iter()
        .map(|t| {
            let h = (t / 2.0).sin();
            h * h
        })
        .sum::<f64>()
        .sqrt();

    Ok(CanonicalAngleSet {
        thetas,
        sines,
        cosines,
        dist_2,
        dist_f,
        half_angle_dist_f,
    })
}

/// Spectral subspace distance `sin(theta_max)`.
pub fn subspace_dist_2(x: &StiefelFrame, y: &StiefelFrame) -> Result<f64> {
    Ok(canonical_angles(x, y)?.dist_2)
}

/// Frobenius subspace distance `||sin Theta||_F`.
pub fn subspace_dist_f(x: &StiefelFrame, y: &StiefelFrame) -> Result<f64> {
    Ok(canonical_angles(x, y)?.dist_f)
}
