//! Scalar fields used throughout the crate.
//!
//! Everything algebraic is generic over [`Field`]. Exact work happens over
//! [`Rational`] and the prime fields [`Fp`]; the float impls exist for quick
//! numerical experiments and use a tolerance in [`Field::is_negligible`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(n: i64) -> Self;

    /// Image of an exact rational; fails when the denominator is not invertible.
    fn from_rational(q: &Rational) -> Result<Self>;

    /// Exact zero test for exact fields, tolerance test for floats.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// Pivot preference during elimination. Larger is better.
    fn pivot_weight(&self) -> f64 {
        if self.is_negligible() {
            0.0
        } else {
            1.0
        }
    }

    fn characteristic() -> u64 {
        0
    }

    /// A random element; small integers for characteristic zero.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// All elements, when the field is finite.
    fn elements() -> Option<Vec<Self>> {
        None
    }

    fn to_text(&self) -> String {
        self.to_string()
    }

    fn parse_text(s: &str) -> Option<Self>;
}

impl Field for Rational {
    fn from_i64(n: i64) -> Self {
        Rational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &Rational) -> Result<Self> {
        Ok(q.clone())
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_i64(rng.gen_range(-3..=3))
    }

    fn parse_text(s: &str) -> Option<Self> {
        Rational::from_str(s.trim()).ok()
    }
}

macro_rules! float_field {
    ($t:ty, $tol:expr) => {
        impl Field for $t {
            fn from_i64(n: i64) -> Self {
                n as $t
            }

            fn from_rational(q: &Rational) -> Result<Self> {
                q.to_f64()
                    .map(|x| x as $t)
                    .ok_or_else(|| Error::Parse(format!("rational {q} out of float range")))
            }

            fn is_negligible(&self) -> bool {
                self.abs() < $tol
            }

            fn pivot_weight(&self) -> f64 {
                self.abs() as f64
            }

            fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
                rng.gen_range(-1.0..1.0)
            }

            fn parse_text(s: &str) -> Option<Self> {
                let s = s.trim();
                s.parse::<$t>()
                    .ok()
                    .or_else(|| Rational::parse_text(s).and_then(|q| Self::from_rational(&q).ok()))
            }
        }
    };
}

float_field!(f64, 1e-9);
float_field!(f32, 1e-4);

/// The prime field of order `P`. `P` must be prime; this is checked on
/// construction in debug builds.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

pub type F2 = Fp<2>;
pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

impl<const P: u32> Fp<P> {
    pub fn new(v: i64) -> Self {
        debug_assert!(is_prime(P as u64), "Fp modulus {P} is not prime");
        Fp(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P as u64 - 2))
        }
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_F{}", self.0, P)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Fp(((self.0 as u64 + o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Fp(((self.0 as u64 + P as u64 - o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Fp(((self.0 as u64 * o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.inv().expect("division by zero in Fp")
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp((P - self.0) % P)
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn from_i64(n: i64) -> Self {
        Fp::new(n)
    }

    fn from_rational(q: &Rational) -> Result<Self> {
        let p = BigInt::from(P);
        let den = (q.denom() % &p).to_i64().unwrap_or(0);
        if den == 0 {
            return Err(Error::BadPrime(P as u64));
        }
        let num = (q.numer() % &p).to_i64().unwrap_or(0);
        Ok(Fp::new(num) / Fp::new(den))
    }

    fn characteristic() -> u64 {
        P as u64
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..P))
    }

    fn elements() -> Option<Vec<Self>> {
        Some((0..P).map(Fp).collect())
    }

    fn parse_text(s: &str) -> Option<Self> {
        Rational::parse_text(s).and_then(|q| Self::from_rational(&q).ok())
    }
}
