//! SU(2) as unit quaternions and su(2) as imaginary quaternions.
//!
//! An algebra vector `X = (v1, v2, v3)` is the imaginary quaternion
//! `v1 i + v2 j + v3 k`, and `exp(X) = cos|X| + sin|X| X/|X|`. With this
//! convention `Ad(exp(X))` is the rotation by `2|X|` about `X`. The basis
//! `(i, j, k)` is declared orthonormal; that is the bi-invariant metric used
//! everywhere torsion and volumes are reported.

use core::ops::{Add, Mul, Neg, Sub};

use libm::{atan2, cos, sin, sqrt};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tol;

/// Imaginary quaternion, i.e. an element of su(2).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Alg(pub [f64; 3]);

impl Alg {
    pub const ZERO: Alg = Alg([0.0; 3]);

    pub fn new(v1: f64, v2: f64, v3: f64) -> Self {
        Alg([v1, v2, v3])
    }

    /// `e_k`, `k in 0..3`.
    pub fn basis(k: usize) -> Self {
        let mut v = [0.0; 3];
        v[k] = 1.0;
        Alg(v)
    }

    pub fn dot(self, other: Alg) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn cross(self, o: Alg) -> Alg {
        let [a, b, c] = self.0;
        let [x, y, z] = o.0;
        Alg([b * z - c * y, c * x - a * z, a * y - b * x])
    }

    pub fn norm(self) -> f64 {
        sqrt(self.dot(self))
    }

    pub fn scale(self, s: f64) -> Alg {
        Alg([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn from_slice(s: &[f64]) -> Alg {
        Alg([s[0], s[1], s[2]])
    }
}

impl Add for Alg {
    type Output = Alg;
    fn add(self, o: Alg) -> Alg {
        Alg([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Alg {
    type Output = Alg;
    fn sub(self, o: Alg) -> Alg {
        Alg([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Alg {
    type Output = Alg;
    fn neg(self) -> Alg {
        self.scale(-1.0)
    }
}

/// The bi-invariant inner product: the dot product in the `(i, j, k)` basis.
pub fn inner(x: Alg, y: Alg) -> f64 {
    x.dot(y)
}

/// Unit quaternion `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2 {
    w: f64,
    x: f64,
    y: f64,
    z: f64,
}

impl Su2 {
    pub const IDENTITY: Su2 = Su2 { w: 1.0, x: 0.0, y: 0.0, z: 0.0 };
    pub const MINUS_IDENTITY: Su2 = Su2 { w: -1.0, x: 0.0, y: 0.0, z: 0.0 };

    /// Normalizes `(w, x, y, z)` onto the unit sphere.
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Result<Su2> {
        let n = sqrt(w * w + x * x + y * y + z * z);
        if !n.is_finite() || n < 1e-150 {
            return Err(Error::DegenerateQuaternion);
        }
        Ok(Su2 { w: w / n, x: x / n, y: y / n, z: z / n })
    }

    pub fn from_array(q: [f64; 4]) -> Result<Su2> {
        Su2::new(q[0], q[1], q[2], q[3])
    }

    pub fn components(&self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Real part.
    pub fn w(&self) -> f64 {
        self.w
    }

    /// Imaginary part as an algebra vector.
    pub fn vector(&self) -> Alg {
        Alg([self.x, self.y, self.z])
    }

    fn renormalized(self) -> Su2 {
        let n = sqrt(self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z);
        Su2 { w: self.w / n, x: self.x / n, y: self.y / n, z: self.z / n }
    }

    /// Inverse, i.e. the quaternion conjugate.
    pub fn inverse(&self) -> Su2 {
        Su2 { w: self.w, x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn exp(v: Alg) -> Su2 {
        let theta = v.norm();
        // sin(t)/t, series below 1e-4 is exact to double precision
        let sinc = if theta < 1e-4 { 1.0 - theta * theta / 6.0 } else { sin(theta) / theta };
        Su2 { w: cos(theta), x: v.0[0] * sinc, y: v.0[1] * sinc, z: v.0[2] * sinc }.renormalized()
    }

    /// Principal logarithm with `|log a|` in `[0, pi)`. Fails at `-1`.
    pub fn log(&self) -> Result<Alg> {
        let v = self.vector();
        let s = v.norm();
        if s < tol::ALGEBRAIC && self.w < 0.0 {
            return Err(Error::LogBranchCut);
        }
        let angle = atan2(s, self.w);
        if s < 1e-300 {
            return Ok(Alg::ZERO);
        }
        Ok(v.scale(angle / s))
    }

    /// Adjoint action on su(2), as a rotation matrix.
    pub fn ad(&self) -> AdjointMatrix {
        let Su2 { w, x, y, z } = *self;
        AdjointMatrix([
            [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
            [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
            [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
        ])
    }

    /// `a X a^{-1}` computed by quaternion products, independent of [`Su2::ad`].
    pub fn conjugate_vector(&self, v: Alg) -> Alg {
        let p = quat_mul([self.w, self.x, self.y, self.z], [0.0, v.0[0], v.0[1], v.0[2]]);
        let q = quat_mul(p, [self.w, -self.x, -self.y, -self.z]);
        Alg([q[1], q[2], q[3]])
    }

    /// Trace of the 2x2 unitary matrix, `2 w`.
    pub fn trace(&self) -> f64 {
        2.0 * self.w
    }

    /// Euclidean distance in R^4.
    pub fn distance(&self, o: &Su2) -> f64 {
        let d = [self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z];
        sqrt(d.iter().map(|t| t * t).sum())
    }

    /// Within `tol` of `+1` or `-1`.
    pub fn is_central(&self, tol: f64) -> bool {
        self.vector().norm() <= tol
    }

    pub fn pow(&self, n: i64) -> Su2 {
        let base = if n < 0 { self.inverse() } else { *self };
        (0..n.unsigned_abs()).fold(Su2::IDENTITY, |acc, _| acc * base)
    }
}

fn quat_mul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

impl Mul for Su2 {
    type Output = Su2;
    fn mul(self, b: Su2) -> Su2 {
        let [w, x, y, z] = quat_mul(self.components(), b.components());
        Su2 { w, x, y, z }.renormalized()
    }
}

/// `d/dt|_0 trace(exp(t X) a) = -2 <X, Im a>`, the trace pairing of `X` with `a`.
pub fn trace_pairing(x: Alg, a: &Su2) -> f64 {
    -2.0 * x.dot(a.vector())
}

/// Element of SO(3), the image of SU(2) under `Ad`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdjointMatrix(pub [[f64; 3]; 3]);

impl AdjointMatrix {
    pub const IDENTITY: AdjointMatrix =
        AdjointMatrix([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn apply(&self, v: Alg) -> Alg {
        let m = &self.0;
        Alg([
            m[0][0] * v.0[0] + m[0][1] * v.0[1] + m[0][2] * v.0[2],
            m[1][0] * v.0[0] + m[1][1] * v.0[1] + m[1][2] * v.0[2],
            m[2][0] * v.0[0] + m[2][1] * v.0[1] + m[2][2] * v.0[2],
        ])
    }

    pub fn compose(&self, o: &AdjointMatrix) -> AdjointMatrix {
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        AdjointMatrix(out)
    }

    pub fn transpose(&self) -> AdjointMatrix {
        let m = &self.0;
        AdjointMatrix([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn determinant(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_fn(3, 3, |r, c| self.0[r][c])
    }

    /// Max entry of `|m^T m - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let p = self.transpose().compose(self);
        let mut d: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                d = d.max((p.0[i][j] - e).abs());
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Rng;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn close(a: &Su2, b: &Su2, eps: f64) -> bool {
        a.distance(b) < eps
    }

    #[test]
    fn identity_is_neutral() {
        let b = Su2::new(0.3, -0.1, 0.5, 0.7).unwrap();
        assert!(close(&(Su2::IDENTITY * b), &b, 1e-15));
    }

    #[test]
    fn i_times_j_is_k() {
        let i = Su2::new(0.0, 1.0, 0.0, 0.0).unwrap();
        let j = Su2::new(0.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!((i * j).components(), [0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn inverse_and_exp_round_trip() {
        let mut rng = Rng::new(11);
        for _ in 0..1000 {
            let a = rng.haar_su2();
            assert!(close(&(a * a.inverse()), &Su2::IDENTITY, tol::ALGEBRAIC));
            let x = rng.gaussian_alg();
            assert!(close(&(Su2::exp(x) * Su2::exp(-x)), &Su2::IDENTITY, tol::ALGEBRAIC));
            let b = rng.haar_su2();
            let c = rng.haar_su2();
            assert!(close(&((a * b) * c), &(a * (b * c)), tol::ALGEBRAIC));
            let n = (a * b).components().iter().map(|t| t * t).sum::<f64>();
            assert!((n - 1.0).abs() < tol::ALGEBRAIC);
        }
    }

    #[test]
    fn exp_examples() {
        assert_eq!(Su2::exp(Alg::ZERO), Su2::IDENTITY);
        let h = Su2::exp(Alg::new(PI, 0.0, 0.0));
        assert!(close(&h, &Su2::MINUS_IDENTITY, 1e-15));
        let tiny = Su2::exp(Alg::new(1e-13, 0.0, 0.0));
        assert!((tiny.vector().0[0] - 1e-13).abs() < 1e-28);
    }

    #[test]
    fn log_examples() {
        assert_eq!(Su2::IDENTITY.log().unwrap(), Alg::ZERO);
        let i = Su2::new(0.0, 1.0, 0.0, 0.0).unwrap();
        let l = i.log().unwrap();
        assert!((l.0[0] - FRAC_PI_2).abs() < 1e-15 && l.0[1] == 0.0 && l.0[2] == 0.0);
        assert_eq!(Su2::MINUS_IDENTITY.log(), Err(Error::LogBranchCut));
        let mut rng = Rng::new(5);
        for _ in 0..1000 {
            let a = rng.haar_su2();
            let x = a.log().unwrap();
            assert!(x.norm() < PI);
            assert!(close(&Su2::exp(x), &a, tol::DERIVED));
        }
    }

    #[test]
    fn ad_examples() {
        assert_eq!(Su2::IDENTITY.ad(), AdjointMatrix::IDENTITY);
        assert_eq!(Su2::MINUS_IDENTITY.ad(), AdjointMatrix::IDENTITY);
        // quarter rotation of the (2,3) plane, computed by direct conjugation
        let a = Su2::exp(Alg::new(FRAC_PI_4, 0.0, 0.0));
        let e2 = a.conjugate_vector(Alg::basis(1));
        let e3 = a.conjugate_vector(Alg::basis(2));
        assert!((e2 - Alg::basis(2)).norm() < 1e-15);
        assert!((e3 + Alg::basis(1)).norm() < 1e-15);
        let m = a.ad();
        assert!((m.apply(Alg::basis(1)) - e2).norm() < 1e-15);
        assert!((m.apply(Alg::basis(0)) - Alg::basis(0)).norm() < 1e-15);
    }

    #[test]
    fn ad_is_a_homomorphism_into_so3() {
        let mut rng = Rng::new(17);
        for _ in 0..1000 {
            let a = rng.haar_su2();
            let b = rng.haar_su2();
            let lhs = (a * b).ad().to_matrix();
            let rhs = a.ad().compose(&b.ad()).to_matrix();
            assert!(lhs.max_abs_diff(&rhs) < tol::DERIVED);
            assert!(a.ad().orthogonality_defect() < tol::DERIVED);
            assert!((a.ad().determinant() - 1.0).abs() < tol::DERIVED);
            let x = rng.gaussian_alg();
            assert!((a.ad().apply(x) - a.conjugate_vector(x)).norm() < tol::DERIVED);
        }
    }

    #[test]
    fn inner_examples_and_invariance() {
        assert_eq!(inner(Alg::basis(0), Alg::basis(0)), 1.0);
        assert_eq!(inner(Alg::basis(0), Alg::basis(1)), 0.0);
        let mut rng = Rng::new(23);
        for _ in 0..500 {
            let a = rng.haar_su2().ad();
            let (x, y) = (rng.gaussian_alg(), rng.gaussian_alg());
            assert!((inner(a.apply(x), a.apply(y)) - inner(x, y)).abs() < tol::DERIVED);
        }
    }

    #[test]
    fn trace_examples() {
        assert_eq!(Su2::IDENTITY.trace(), 2.0);
        assert_eq!(Su2::MINUS_IDENTITY.trace(), -2.0);
        let mut rng = Rng::new(29);
        for _ in 0..500 {
            let (a, b) = (rng.haar_su2(), rng.haar_su2());
            assert!(((b * a * b.inverse()).trace() - a.trace()).abs() < tol::ALGEBRAIC);
            assert!(a.trace().abs() <= 2.0);
        }
    }

    #[test]
    fn trace_pairing_matches_central_differences() {
        let mut rng = Rng::new(31);
        let h = 1e-5;
        for _ in 0..200 {
            let a = rng.haar_su2();
            let x = rng.gaussian_alg();
            let plus = (Su2::exp(x.scale(h)) * a).trace();
            let minus = (Su2::exp(x.scale(-h)) * a).trace();
            let fd = (plus - minus) / (2.0 * h);
            assert!((fd - trace_pairing(x, &a)).abs() < 1e-7);
        }
    }

    #[test]
    fn degenerate_quaternion_rejected() {
        assert_eq!(Su2::new(0.0, 0.0, 0.0, 0.0), Err(Error::DegenerateQuaternion));
        assert_eq!(Su2::new(f64::NAN, 0.0, 0.0, 0.0), Err(Error::DegenerateQuaternion));
    }
}
