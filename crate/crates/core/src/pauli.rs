//! Dense 2x2 complex linear algebra and Bloch-vector calculus.
//!
//! Everything here is a small `Copy` value type. Operators on the qubit are
//! written in the Pauli basis: any Hermitian 2x2 matrix is `c I + v . sigma`
//! for a real scalar `c` and a real 3-vector `v`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

/// Tolerance on `|v| = 1` for caller-supplied axes.
pub const UNIT_TOLERANCE: f64 = 1e-9;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[inline]
fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Real 3-vector. Used both for Hamiltonian axes (unit length) and state
/// Bloch vectors (length at most one).
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize, serde::Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 3]> for BlochVector {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(v: BlochVector) -> Self {
        [v.x, v.y, v.z]
    }
}

impl BlochVector {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);
    pub const X: Self = Self::new(1.0, 0.0, 0.0);
    pub const Y: Self = Self::new(0.0, 1.0, 0.0);
    pub const Z: Self = Self::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Unit vector from polar angle (measured from +z) and azimuth.
    pub fn from_spherical(polar: f64, azimuth: f64) -> Self {
        let (sp, cp) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        Self::new(sp * ca, sp * sa, cp)
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(s * self.x, s * self.y, s * self.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Explicit renormalization. Nothing in the library calls this on
    /// caller input; use it when you know the vector is only off by round-off.
    pub fn normalized(self) -> Result<Self> {
        let n = self.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::AxisNotNormalized { norm: n });
        }
        Ok(self.scale(1.0 / n))
    }

    /// Fails with [`Error::AxisNotNormalized`] unless `|v| = 1` within
    /// [`UNIT_TOLERANCE`].
    pub fn ensure_unit(self) -> Result<Self> {
        let n = self.norm();
        if !n.is_finite() || (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::AxisNotNormalized { norm: n });
        }
        Ok(self)
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

impl Add for BlochVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for BlochVector {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for BlochVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// Row-major 2x2 complex matrix `[[m00, m01], [m10, m11]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [Complex64; 4]);

impl Matrix2 {
    pub const ZERO: Self = Self([Complex64 { re: 0.0, im: 0.0 }; 4]);

    pub const IDENTITY: Self = Self([
        Complex64 { re: 1.0, im: 0.0 },
        Complex64 { re: 0.0, im: 0.0 },
        Complex64 { re: 0.0, im: 0.0 },
        Complex64 { re: 1.0, im: 0.0 },
    ]);

    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Self([m00, m01, m10, m11])
    }

    pub fn sigma_x() -> Self {
        Self::new(c(0.0), c(1.0), c(1.0), c(0.0))
    }

    pub fn sigma_y() -> Self {
        Self::new(c(0.0), -I, I, c(0.0))
    }

    pub fn sigma_z() -> Self {
        Self::new(c(1.0), c(0.0), c(0.0), c(-1.0))
    }

    /// Entry at (row, col).
    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.0[2 * row + col]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, cc, d] = self.0;
        Self::new(a.conj(), cc.conj(), b.conj(), d.conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.map(|e| e * s))
    }

    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(c(0.5))
    }

    pub fn antihermitian_part(&self) -> Self {
        (*self - self.adjoint()).scale(c(0.5))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|e| e.re.is_finite() && e.im.is_finite())
    }
}

impl Add for Matrix2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
}

impl Sub for Matrix2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }
}

impl Mul for Matrix2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let [a, b, cc, d] = self.0;
        let [e, f, g, h] = o.0;
        Self::new(a * e + b * g, a * f + b * h, cc * e + d * g, cc * f + d * h)
    }
}

/// `v . sigma = v_x sigma_x + v_y sigma_y + v_z sigma_z`.
pub fn pauli_dot(v: BlochVector) -> Matrix2 {
    Matrix2::new(
        c(v.z),
        Complex64::new(v.x, -v.y),
        Complex64::new(v.x, v.y),
        c(-v.z),
    )
}

/// `exp(-i phi v . sigma) = cos(phi) I - i sin(phi) v . sigma` for unit `v`.
pub fn su2_exp(v: BlochVector, phi: f64) -> Result<Matrix2> {
    let v = v.ensure_unit()?;
    let (s, co) = phi.sin_cos();
    Ok(Matrix2::IDENTITY.scale(c(co)) - pauli_dot(v).scale(Complex64::new(0.0, s)))
}

/// Projector onto the `sign` eigenspace of `v . sigma`: `(I + sign v . sigma) / 2`.
pub fn projector(v: BlochVector, sign: Sign) -> Result<Matrix2> {
    let v = v.ensure_unit()?;
    Ok((Matrix2::IDENTITY + pauli_dot(v).scale(c(sign.value()))).scale(c(0.5)))
}

/// Symmetric Jordan product `(AB + BA) / 2`.
pub fn jordan_product(a: Matrix2, b: Matrix2) -> Matrix2 {
    (a * b + b * a).scale(c(0.5))
}

/// `Tr[AB]`.
pub fn trace_inner(a: Matrix2, b: Matrix2) -> ComplexScalar {
    let [a00, a01, a10, a11] = a.0;
    let [b00, b01, b10, b11] = b.0;
    a00 * b00 + a01 * b10 + a10 * b01 + a11 * b11
}

/// Energy outcome `+eps/2` or `-eps/2`; doubles as the eigenvalue sign of an
/// axis projector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}
