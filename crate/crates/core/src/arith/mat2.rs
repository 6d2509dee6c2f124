//! 2×2 integer matrices.
//!
//! `Mat2<T>` is generic over the entry type so the enumeration kernels can run
//! on machine integers while exact verification uses [`BigInt`]. Entries are
//! stored row-major as `(a b; c d)`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

pub type BigMat2 = Mat2<BigInt>;

impl<T> Mat2<T> {
    pub const fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn map<U>(self, f: impl Fn(T) -> U) -> Mat2<U> {
        Mat2 {
            a: f(self.a),
            b: f(self.b),
            c: f(self.c),
            d: f(self.d),
        }
    }
}

impl<T> Mat2<T>
where
    T: Clone + Zero + One + Mul<Output = T> + std::ops::Sub<Output = T>,
{
    pub fn identity() -> Self {
        Mat2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    /// Continued-fraction generator `(a 1; 1 0)`.
    pub fn generator(a: T) -> Self {
        Mat2::new(a, T::one(), T::one(), T::zero())
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn trace(&self) -> T {
        self.a.clone() + self.d.clone()
    }

    /// Squared Frobenius norm `a² + b² + c² + d²`, i.e. `tr(M ᵗM)`.
    pub fn norm_sq(&self) -> T {
        self.a.clone() * self.a.clone()
            + self.b.clone() * self.b.clone()
            + self.c.clone() * self.c.clone()
            + self.d.clone() * self.d.clone()
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(
            self.a.clone(),
            self.c.clone(),
            self.b.clone(),
            self.d.clone(),
        )
    }

    /// Dot product in ℤ⁴, equal to `tr(ᵗself · other)`.
    pub fn dot(&self, other: &Self) -> T {
        self.a.clone() * other.a.clone()
            + self.b.clone() * other.b.clone()
            + self.c.clone() * other.c.clone()
            + self.d.clone() * other.d.clone()
    }

    /// Trace of `self · other` without forming the product.
    pub fn trace_of_product(&self, other: &Self) -> T {
        self.a.clone() * other.a.clone()
            + self.b.clone() * other.c.clone()
            + self.c.clone() * other.b.clone()
            + self.d.clone() * other.d.clone()
    }

    pub fn mul_ref(&self, rhs: &Self) -> Self {
        Mat2::new(
            self.a.clone() * rhs.a.clone() + self.b.clone() * rhs.c.clone(),
            self.a.clone() * rhs.b.clone() + self.b.clone() * rhs.d.clone(),
            self.c.clone() * rhs.a.clone() + self.d.clone() * rhs.c.clone(),
            self.c.clone() * rhs.b.clone() + self.d.clone() * rhs.d.clone(),
        )
    }

    /// Right-multiplication by the generator `(x 1; 1 0)`.
    pub fn mul_generator(&self, x: T) -> Self {
        Mat2::new(
            self.a.clone() * x.clone() + self.b.clone(),
            self.a.clone(),
            self.c.clone() * x + self.d.clone(),
            self.c.clone(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }
}

impl<T> Mul for Mat2<T>
where
    T: Clone + Zero + One + Mul<Output = T> + std::ops::Sub<Output = T>,
{
    type Output = Mat2<T>;

    fn mul(self, rhs: Self) -> Self::Output {
        self.mul_ref(&rhs)
    }
}

impl<'a, T> Mul<&'a Mat2<T>> for &'a Mat2<T>
where
    T: Clone + Zero + One + Mul<Output = T> + std::ops::Sub<Output = T>,
{
    type Output = Mat2<T>;

    fn mul(self, rhs: &'a Mat2<T>) -> Self::Output {
        self.mul_ref(rhs)
    }
}

impl Mat2<i64> {
    pub fn norm(&self) -> f64 {
        (self.norm_sq_wide() as f64).sqrt()
    }

    /// Squared norm computed in 128 bits.
    pub fn norm_sq_wide(&self) -> i128 {
        let sq = |x: i64| (x as i128) * (x as i128);
        sq(self.a) + sq(self.b) + sq(self.c) + sq(self.d)
    }

    pub fn to_big(&self) -> BigMat2 {
        self.map(BigInt::from)
    }

    /// Entrywise reduction into `[0, q)`.
    pub fn reduce(&self, q: u64) -> [u32; 4] {
        let q = q as i64;
        [
            self.a.rem_euclid(q) as u32,
            self.b.rem_euclid(q) as u32,
            self.c.rem_euclid(q) as u32,
            self.d.rem_euclid(q) as u32,
        ]
    }

    /// Checked product, `None` on overflow.
    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        let e = |x: i64, y: i64, u: i64, v: i64| x.checked_mul(y)?.checked_add(u.checked_mul(v)?);
        Some(Mat2::new(
            e(self.a, rhs.a, self.b, rhs.c)?,
            e(self.a, rhs.b, self.b, rhs.d)?,
            e(self.c, rhs.a, self.d, rhs.c)?,
            e(self.c, rhs.b, self.d, rhs.d)?,
        ))
    }
}

impl BigMat2 {
    pub fn norm(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.norm_sq())
            .unwrap_or(f64::INFINITY)
            .sqrt()
    }

    pub fn to_i64(&self) -> Option<Mat2<i64>> {
        use num_traits::ToPrimitive;
        Some(Mat2::new(
            self.a.to_i64()?,
            self.b.to_i64()?,
            self.c.to_i64()?,
            self.d.to_i64()?,
        ))
    }
}

impl<T: fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}
