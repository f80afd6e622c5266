//! Small fixed-size vector and tensor types.
//!
//! Everything here is 3-dimensional and stack allocated. Real vectors carry
//! positions, dipoles and forces; complex tensors carry the Green dyadics.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const ZERO: Vector3 = Vector3::new(0.0, 0.0, 0.0);
    pub const X: Vector3 = Vector3::new(1.0, 0.0, 0.0);
    pub const Y: Vector3 = Vector3::new(0.0, 1.0, 0.0);
    pub const Z: Vector3 = Vector3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vector3 { x, y, z }
    }

    /// Checked constructor rejecting NaN and infinite components.
    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Vector3 { x, y, z };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::invalid(format!("non-finite vector ({x}, {y}, {z})")))
        }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vector3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, o: Vector3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vector3) -> Vector3 {
        Vector3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_sqr(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Vector3 {
        Vector3::new(self.x * s, self.y * s, self.z * s)
    }

    /// Unit vector along `self`; `None` for the zero vector.
    pub fn normalized(self) -> Option<Vector3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale(1.0 / n))
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

impl Index<usize> for Vector3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vector3 index {i} out of range"),
        }
    }
}

impl Add for Vector3 {
    type Output = Vector3;
    fn add(self, o: Vector3) -> Vector3 {
        Vector3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vector3 {
    fn add_assign(&mut self, o: Vector3) {
        *self = *self + o;
    }
}

impl Sub for Vector3 {
    type Output = Vector3;
    fn sub(self, o: Vector3) -> Vector3 {
        Vector3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vector3 {
    type Output = Vector3;
    fn neg(self) -> Vector3 {
        Vector3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vector3 {
    type Output = Vector3;
    fn mul(self, s: f64) -> Vector3 {
        self.scale(s)
    }
}

impl Mul<Vector3> for f64 {
    type Output = Vector3;
    fn mul(self, v: Vector3) -> Vector3 {
        v.scale(self)
    }
}

impl std::iter::Sum for Vector3 {
    fn sum<I: Iterator<Item = Vector3>>(iter: I) -> Vector3 {
        iter.fold(Vector3::ZERO, |a, b| a + b)
    }
}

/// Complex 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CVector3(pub [Complex64; 3]);

impl CVector3 {
    pub fn from_real(v: Vector3, s: Complex64) -> Self {
        CVector3([s * v.x, s * v.y, s * v.z])
    }

    pub fn re(&self) -> Vector3 {
        Vector3::new(self.0[0].re, self.0[1].re, self.0[2].re)
    }

    pub fn im(&self) -> Vector3 {
        Vector3::new(self.0[0].im, self.0[1].im, self.0[2].im)
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `a x self` for a real vector `a`.
    pub fn cross_from_left(&self, a: Vector3) -> CVector3 {
        let b = &self.0;
        CVector3([
            b[2] * a.y - b[1] * a.z,
            b[0] * a.z - b[2] * a.x,
            b[1] * a.x - b[0] * a.y,
        ])
    }
}

impl Sub for CVector3 {
    type Output = CVector3;
    fn sub(self, o: CVector3) -> CVector3 {
        CVector3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

/// Levi-Civita symbol.
pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Real 3x3 tensor, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RealTensor3(pub [[f64; 3]; 3]);

impl RealTensor3 {
    pub fn zero() -> Self {
        RealTensor3([[0.0; 3]; 3])
    }

    pub fn identity() -> Self {
        let mut t = Self::zero();
        for i in 0..3 {
            t.0[i][i] = 1.0;
        }
        t
    }

    pub fn outer(a: Vector3, b: Vector3) -> Self {
        let (a, b) = (a.to_array(), b.to_array());
        let mut t = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = a[i] * b[j];
            }
        }
        t
    }

    /// `alpha = I - r r` for a unit vector `r`.
    pub fn transverse_projector(rhat: Vector3) -> Self {
        Self::identity().axpy(-1.0, &Self::outer(rhat, rhat))
    }

    /// `beta = I - 3 r r` for a unit vector `r`.
    pub fn dipolar(rhat: Vector3) -> Self {
        Self::identity().axpy(-3.0, &Self::outer(rhat, rhat))
    }

    /// `(E . r)_{ij} = eps_{ijl} r_l`.
    pub fn levi_civita_dot(r: Vector3) -> Self {
        let r = r.to_array();
        let mut t = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = (0..3).map(|l| levi_civita(i, j, l) * r[l]).sum();
            }
        }
        t
    }

    /// `self + s * other`.
    pub fn axpy(mut self, s: f64, other: &RealTensor3) -> Self {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] += s * other.0[i][j];
            }
        }
        self
    }

    pub fn scale(mut self, s: f64) -> Self {
        self.0.iter_mut().flatten().for_each(|x| *x *= s);
        self
    }

    pub fn mul_vec(&self, v: Vector3) -> Vector3 {
        let r = |i: usize| self.0[i][0] * v.x + self.0[i][1] * v.y + self.0[i][2] * v.z;
        Vector3::new(r(0), r(1), r(2))
    }

    /// `u . T . v`
    pub fn bilinear(&self, u: Vector3, v: Vector3) -> f64 {
        u.dot(self.mul_vec(v))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut m = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                m = m.max((self.0[i][j] - self.0[j][i]).abs());
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }
}

/// Complex 3x3 tensor, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexTensor3(pub [[Complex64; 3]; 3]);

impl ComplexTensor3 {
    pub fn zero() -> Self {
        ComplexTensor3([[Complex64::new(0.0, 0.0); 3]; 3])
    }

    /// `a * A + b * B` for real tensors `A`, `B` and complex weights.
    pub fn combine(a: Complex64, ta: &RealTensor3, b: Complex64, tb: &RealTensor3) -> Self {
        let mut t = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = a * ta.0[i][j] + b * tb.0[i][j];
            }
        }
        t
    }

    pub fn from_real(r: &RealTensor3, s: Complex64) -> Self {
        Self::combine(s, r, Complex64::new(0.0, 0.0), &RealTensor3::zero())
    }

    pub fn re(&self) -> RealTensor3 {
        let mut t = RealTensor3::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[i][j].re;
            }
        }
        t
    }

    pub fn im(&self) -> RealTensor3 {
        let mut t = RealTensor3::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[i][j].im;
            }
        }
        t
    }

    pub fn scale(mut self, s: Complex64) -> Self {
        self.0.iter_mut().flatten().for_each(|x| *x *= s);
        self
    }

    pub fn add(mut self, o: &ComplexTensor3) -> Self {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] += o.0[i][j];
            }
        }
        self
    }

    pub fn sub(mut self, o: &ComplexTensor3) -> Self {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] -= o.0[i][j];
            }
        }
        self
    }

    pub fn mul_vec(&self, v: Vector3) -> CVector3 {
        let r = |i: usize| self.0[i][0] * v.x + self.0[i][1] * v.y + self.0[i][2] * v.z;
        CVector3([r(0), r(1), r(2)])
    }

    /// `u . T . v` for real vectors.
    pub fn bilinear(&self, u: Vector3, v: Vector3) -> Complex64 {
        let w = self.mul_vec(v).0;
        w[0] * u.x + w[1] * u.y + w[2] * u.z
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero();
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .fold(0.0_f64, |m, x| m.max(x.norm()))
    }

    /// Largest `|T_ij - T_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut m = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                m = m.max((self.0[i][j] - self.0[j][i]).norm());
            }
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|x| x.re.is_finite() && x.im.is_finite())
    }
}
