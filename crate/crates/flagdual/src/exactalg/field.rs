//! Scalar fields: prime fields `Fp<P>`, the four-element field `Gf4`, and `BigRational`.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::AlgError;

/// A commutative ring with the operations the matrix and polynomial code needs.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = Self>
        + Sub<Output = Self>
        + Mul<Output = Self>
        + Neg<Output = Self>
        + Send
        + Sync
{
}

/// An exact field. Division is only available through `try_inv` / `try_div`.
pub trait Field: Ring + Eq + Hash + Display + AddAssign + SubAssign + MulAssign + 'static {
    fn try_inv(&self) -> Result<Self, AlgError>;

    fn try_div(&self, rhs: &Self) -> Result<Self, AlgError> {
        Ok(self.clone() * rhs.try_inv()?)
    }

    /// 0 for the rationals.
    fn characteristic() -> u64;

    fn from_i64(n: i64) -> Self;

    fn from_bigint(n: &BigInt) -> Self;

    /// A uniformly random element for finite fields, a small random rational otherwise.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn field_name() -> String;

    fn from_ratio(num: &BigInt, den: &BigInt) -> Result<Self, AlgError> {
        Self::from_bigint(num).try_div(&Self::from_bigint(den))
    }

    /// Parses an integer or `a/b`.
    fn parse_entry(s: &str) -> Result<Self, AlgError> {
        let bad = || AlgError::Parse(s.to_string());
        match s.split_once('/') {
            Some((a, b)) => {
                let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                if b.is_zero() {
                    return Err(AlgError::DivisionByZero);
                }
                Self::from_ratio(&a, &b)
            }
            None => {
                let a: BigInt = s.trim().parse().map_err(|_| bad())?;
                Ok(Self::from_bigint(&a))
            }
        }
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

/// Finite fields with an explicit element list, used for enumeration.
pub trait FiniteField: Field + Copy {
    fn order() -> u64;
    fn elements() -> Vec<Self>;
}

// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    pub const fn new(v: u32) -> Self {
        Fp(v % P)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    /// Representative in (-P/2, P/2].
    pub fn signed(self) -> i64 {
        let v = self.0 as i64;
        if v > P as i64 / 2 {
            v - P as i64
        } else {
            v
        }
    }
}

impl<const P: u32> Debug for Fp<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.signed())
    }
}

impl<const P: u32> Display for Fp<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.signed())
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

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let s = self.0 as u64 + rhs.0 as u64;
        Fp((s % P as u64) as u32)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        let s = self.0 as u64 + P as u64 - rhs.0 as u64;
        Fp((s % P as u64) as u32)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u32> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u32> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u32> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u32> Field for Fp<P> {
    fn try_inv(&self) -> Result<Self, AlgError> {
        if self.0 == 0 {
            return Err(AlgError::DivisionByZero);
        }
        // extended Euclid on (a, P)
        let (mut r0, mut r1) = (P as i64, self.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(Fp(t0.rem_euclid(P as i64) as u32))
    }

    fn characteristic() -> u64 {
        P as u64
    }

    fn from_i64(n: i64) -> Self {
        Fp(n.rem_euclid(P as i64) as u32)
    }

    fn from_bigint(n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(P));
        Fp(r.to_u32().unwrap())
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Fp(rng.gen_range(0..P))
    }

    fn field_name() -> String {
        format!("GF({P})")
    }
}

impl<const P: u32> FiniteField for Fp<P> {
    fn order() -> u64 {
        P as u64
    }
    fn elements() -> Vec<Self> {
        (0..P).map(Fp).collect()
    }
}

// ---------------------------------------------------------------------------

/// GF(4) = GF(2)[a]/(a^2 + a + 1); bit 0 is the constant part, bit 1 the coefficient of a.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf4(u8);

const GF4_MUL: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
const GF4_INV: [u8; 4] = [0, 1, 3, 2];

impl Gf4 {
    pub const fn new(bits: u8) -> Self {
        Gf4(bits & 3)
    }
    pub fn bits(self) -> u8 {
        self.0
    }
}

impl Debug for Gf4 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        Display::fmt(self, f)
    }
}

impl Display for Gf4 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = ["0", "1", "a", "a+1"][self.0 as usize];
        write!(f, "{s}")
    }
}

impl Zero for Gf4 {
    fn zero() -> Self {
        Gf4(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Gf4 {
    fn one() -> Self {
        Gf4(1)
    }
}

impl Add for Gf4 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Gf4(self.0 ^ rhs.0)
    }
}

impl Sub for Gf4 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gf4(self.0 ^ rhs.0)
    }
}

impl Mul for Gf4 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Gf4(GF4_MUL[self.0 as usize][rhs.0 as usize])
    }
}

impl Neg for Gf4 {
    type Output = Self;
    fn neg(self) -> Self {
        self
    }
}

impl AddAssign for Gf4 {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Gf4 {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for Gf4 {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl Field for Gf4 {
    fn try_inv(&self) -> Result<Self, AlgError> {
        if self.0 == 0 {
            Err(AlgError::DivisionByZero)
        } else {
            Ok(Gf4(GF4_INV[self.0 as usize]))
        }
    }
    fn characteristic() -> u64 {
        2
    }
    fn from_i64(n: i64) -> Self {
        Gf4((n.rem_euclid(2)) as u8)
    }
    fn from_bigint(n: &BigInt) -> Self {
        Gf4(if n.is_odd() { 1 } else { 0 })
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Gf4(rng.gen_range(0..4))
    }
    fn field_name() -> String {
        "GF(4)".to_string()
    }
}

impl FiniteField for Gf4 {
    fn order() -> u64 {
        4
    }
    fn elements() -> Vec<Self> {
        (0..4).map(Gf4).collect()
    }
}

// ---------------------------------------------------------------------------

impl Field for BigRational {
    fn try_inv(&self) -> Result<Self, AlgError> {
        if self.is_zero() {
            Err(AlgError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn characteristic() -> u64 {
        0
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn from_ratio(num: &BigInt, den: &BigInt) -> Result<Self, AlgError> {
        if den.is_zero() {
            return Err(AlgError::DivisionByZero);
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let n: i64 = rng.gen_range(-9..=9);
        let d: i64 = rng.gen_range(1..=3);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }
    fn field_name() -> String {
        "QQ".to_string()
    }
}

/// Integer value of a rational if it is one.
pub fn rational_to_i64(q: &BigRational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

/// Magnitude bound used when printing; keeps JSON output stable.
pub fn rational_is_small(q: &BigRational) -> bool {
    q.numer().abs() < BigInt::from(1i64 << 40) && q.denom().abs() < BigInt::from(1i64 << 40)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type F17 = Fp<17>;

    #[test]
    fn inverse_times_self_is_one_mod_17() {
        for a in F17::elements().into_iter().skip(1) {
            assert_eq!(a * a.try_inv().unwrap(), F17::one());
        }
        assert!(F17::zero().try_inv().is_err());
    }

    #[test]
    fn gf4_is_a_field() {
        let el = Gf4::elements();
        for &a in &el {
            for &b in &el {
                for &c in &el {
                    assert_eq!(a * (b + c), a * b + a * c);
                    assert_eq!((a * b) * c, a * (b * c));
                }
            }
            if !a.is_zero() {
                assert_eq!(a * a.try_inv().unwrap(), Gf4::one());
            }
        }
        // a^2 = a + 1
        let a = Gf4::new(2);
        assert_eq!(a * a, a + Gf4::one());
    }

    #[test]
    fn parse_rational_entries() {
        let q = BigRational::parse_entry("-3/6").unwrap();
        assert_eq!(q, BigRational::new((-1).into(), 2.into()));
        assert_eq!(F17::parse_entry("1/2").unwrap(), F17::new(9));
        assert_eq!(F17::parse_entry("-1").unwrap(), F17::new(16));
        assert!(F17::parse_entry("1/17").is_err());
        assert!(F17::parse_entry("x").is_err());
    }

    #[test]
    fn fermat_little() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let a = Fp::<13>::random(&mut rng);
            assert_eq!(a.pow(13), a);
        }
    }
}
