//! The prime field `F_p` with `p = 2^64 - 2^32 + 1`, coefficient domain of the NTT.

use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::Error;

/// The field modulus `2^64 - 2^32 + 1`.
pub const MODULUS: u64 = 0xFFFF_FFFF_0000_0001;

/// `2^64 mod p = 2^32 - 1`.
const EPSILON: u64 = 0xFFFF_FFFF;

/// Primitive 65536-th root of unity.
pub const ROOT_65536: u64 = 0xed33_6546_9864_f124;

/// log2 of the largest supported power-of-two root order.
pub const MAX_ROOT_LOG2: u32 = 16;

/// An element of `F_p`, always held in canonical form `[0, p)`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem(u64);

impl FieldElem {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);
    pub const NEG_ONE: Self = Self(MODULUS - 1);

    /// Builds an element from any `u64`, reducing it into `[0, p)`.
    #[inline]
    pub const fn new(value: u64) -> Self {
        if value >= MODULUS {
            Self(value - MODULUS)
        } else {
            Self(value)
        }
    }

    #[inline]
    pub const fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Reduces a full 128-bit value modulo `p`.
    ///
    /// With the product written as `2^96 a + 2^64 b + 2^32 c + d` in 32-bit
    /// digits, the congruences `2^96 = -1` and `2^64 = 2^32 - 1` give
    /// `2^32 (b + c) - a - b + d`, evaluated here as `(2^32 c + d) - a + (2^32 - 1) b`
    /// with wraparound corrections, followed by a final normalization.
    #[inline]
    pub fn reduce128(x: u128) -> Self {
        let low = x as u64;
        let high = (x >> 64) as u64;
        let a = high >> 32;
        let b = high & EPSILON;

        let (mut t0, borrow) = low.overflowing_sub(a);
        if borrow {
            // t0 holds low - a + 2^64; 2^64 = 2^32 - 1
            t0 = t0.wrapping_sub(EPSILON);
        }
        let t1 = b * EPSILON;
        let (mut r, carry) = t0.overflowing_add(t1);
        if carry {
            r = r.wrapping_add(EPSILON);
        }
        Self::new(r)
    }

    /// Reference reduction through native 128-bit remainder.
    #[inline]
    pub fn reduce128_wide(x: u128) -> Self {
        Self((x % MODULUS as u128) as u64)
    }

    #[inline]
    pub fn double(self) -> Self {
        self + self
    }

    #[inline]
    pub fn square(self) -> Self {
        self * self
    }

    /// Multiplies by `2^shift`. `2` has multiplicative order 192, so the shift
    /// is taken modulo 192 and `2^96 = -1` folds the upper half.
    #[inline(always)]
    pub fn mul_pow2(self, shift: u32) -> Self {
        let s = shift % 192;
        let (s, negate) = if s >= 96 { (s - 96, true) } else { (s, false) };
        let r = if s < 64 {
            Self::reduce128((self.0 as u128) << s)
        } else {
            // 2^s = 2^(s-64) (2^32 - 1) fits in 64 bits
            let factor = ((1u64 << (s - 64)) << 32) - (1u64 << (s - 64));
            Self::reduce128(self.0 as u128 * factor as u128)
        };
        if negate {
            -r
        } else {
            r
        }
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Self::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base = base.square();
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat, `a^(p-2)`.
    pub fn inv(self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(MODULUS - 2))
    }

    /// Primitive root of unity of order `2^log2_order`, obtained by squaring
    /// the order-65536 root down the chain.
    pub fn root_of_unity(log2_order: u32) -> Result<Self, Error> {
        if log2_order > MAX_ROOT_LOG2 {
            return Err(Error::RootOrder(log2_order));
        }
        let mut w = Self(ROOT_65536);
        for _ in log2_order..MAX_ROOT_LOG2 {
            w = w.square();
        }
        Ok(w)
    }
}

impl From<u64> for FieldElem {
    fn from(value: u64) -> Self {
        Self::new(value)
    }
}

impl From<u32> for FieldElem {
    fn from(value: u32) -> Self {
        Self(value as u64)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#018x}", self.0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Add for FieldElem {
    type Output = Self;

    #[inline]
    fn add(self, rhs: Self) -> Self {
        let (sum, over) = self.0.overflowing_add(rhs.0);
        if over {
            // sum + 2^64 with both inputs canonical stays below p after folding
            Self(sum + EPSILON)
        } else {
            Self::new(sum)
        }
    }
}

impl Sub for FieldElem {
    type Output = Self;

    #[inline]
    fn sub(self, rhs: Self) -> Self {
        let (diff, under) = self.0.overflowing_sub(rhs.0);
        if under {
            Self(diff.wrapping_add(MODULUS))
        } else {
            Self(diff)
        }
    }
}

impl Neg for FieldElem {
    type Output = Self;

    #[inline]
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Self(MODULUS - self.0)
        }
    }
}

impl Mul for FieldElem {
    type Output = Self;

    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Self::reduce128(self.0 as u128 * rhs.0 as u128)
    }
}

impl AddAssign for FieldElem {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElem {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for FieldElem {
    #[inline]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}
