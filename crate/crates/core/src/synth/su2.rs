//! Unit quaternions standing in for SU(2) matrices.
//!
//! `q = (a, b, c, d)` represents `a·I − i(b·X + c·Y + d·Z)`, so the Hamilton
//! product of quaternions matches matrix multiplication and `q`, `−q` are the
//! same gate up to global phase.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::statevec::{c, UnitaryMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su2(pub [f64; 4]);

impl Su2 {
    pub const IDENTITY: Su2 = Su2([1.0, 0.0, 0.0, 0.0]);

    /// Rotation by `angle` about the unit vector `axis`.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Su2 {
        let (s, co) = (angle / 2.0).sin_cos();
        Su2([co, s * axis[0], s * axis[1], s * axis[2]])
    }

    pub fn random(rng: &mut impl Rng) -> Su2 {
        let v: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
        Su2(v).normalized()
    }

    /// Projects a 2×2 unitary onto SU(2) by removing the determinant phase.
    pub fn from_matrix(u: &UnitaryMatrix) -> Result<Su2> {
        if u.dim() != 2 {
            return Err(Error::Dimension {
                expected: 2,
                actual: u.dim(),
            });
        }
        let root = u.determinant().sqrt();
        let m = |r, col| u.get(r, col) / root;
        let a = (m(0, 0) + m(1, 1)).re / 2.0;
        let d = (m(1, 1) - m(0, 0)).im / 2.0;
        let b = -(m(0, 1) + m(1, 0)).im / 2.0;
        let cc = (m(1, 0) - m(0, 1)).re / 2.0;
        Ok(Su2([a, b, cc, d]).normalized())
    }

    pub fn to_matrix(self) -> UnitaryMatrix {
        let [a, b, cc, d] = self.0;
        UnitaryMatrix::from_raw_unchecked(
            2,
            vec![c(a, -d), c(-cc, -b), c(cc, -b), c(a, d)],
        )
    }

    pub fn normalized(self) -> Su2 {
        let n = self.0.iter().map(|x| x * x).sum::<f64>().sqrt();
        Su2(self.0.map(|x| x / n))
    }

    /// Matrix product `self · rhs`.
    pub fn mul(self, rhs: Su2) -> Su2 {
        let [a1, b1, c1, d1] = self.0;
        let [a2, b2, c2, d2] = rhs.0;
        Su2([
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 + c1 * a2 + d1 * b2 - b1 * d2,
            a1 * d2 + d1 * a2 + b1 * c2 - c1 * b2,
        ])
    }

    pub fn adjoint(self) -> Su2 {
        let [a, b, cc, d] = self.0;
        Su2([a, -b, -cc, -d])
    }

    pub fn dot(self, other: Su2) -> f64 {
        self.0.iter().zip(other.0).map(|(x, y)| x * y).sum()
    }

    /// Phase-insensitive distance `2·sin(α/4)` for relative rotation angle α.
    pub fn distance(self, other: Su2) -> f64 {
        // chord length between the nearer of ±other and self; stable near zero
        let sign = if self.dot(other) < 0.0 { -1.0 } else { 1.0 };
        self.0
            .iter()
            .zip(other.0)
            .map(|(x, y)| (x - sign * y).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Rotation angle in `[0, π]` and unit axis, after choosing the sign with `a ≥ 0`.
    pub fn angle_axis(self) -> (f64, [f64; 3]) {
        let q = if self.0[0] < 0.0 { Su2(self.0.map(|x| -x)) } else { self };
        let [a, b, cc, d] = q.0;
        let s = (b * b + cc * cc + d * d).sqrt();
        let angle = 2.0 * s.atan2(a);
        if s < 1e-300 {
            (0.0, [0.0, 0.0, 1.0])
        } else {
            (angle, [b / s, cc / s, d / s])
        }
    }
}
