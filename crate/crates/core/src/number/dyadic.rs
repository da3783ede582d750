//! Exact dyadic numbers `m * 2^e`, the midpoint and radius type of complex balls.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `man * 2^exp`, normalized so that `man` is odd (or the value is zero with `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        if man.is_zero() {
            return Dyadic { man, exp: 0 };
        }
        let tz = man.trailing_zeros().unwrap_or(0);
        if tz == 0 {
            Dyadic { man, exp }
        } else {
            Dyadic { man: man >> tz, exp: exp + tz as i64 }
        }
    }

    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(BigInt::from(n), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic { man: BigInt::one(), exp: k }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    /// Number of significant mantissa bits.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn log2_floor(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.man.bits() as i64 - 1)
        }
    }

    /// Rounds to at most `prec` mantissa bits. Returns the rounded value and a bound on the error.
    pub fn round(&self, prec: u32) -> (Dyadic, Dyadic) {
        let b = self.man.bits();
        if b <= prec as u64 {
            return (self.clone(), Dyadic::zero());
        }
        let shift = b - prec as u64;
        let q: BigInt = &self.man >> shift;
        (Dyadic::new(q, self.exp + shift as i64), Dyadic::pow2(self.exp + shift as i64))
    }

    /// Rounds a nonnegative value upward to at most `prec` mantissa bits.
    pub fn round_up(&self, prec: u32) -> Dyadic {
        debug_assert!(!self.is_negative());
        let b = self.man.bits();
        if b <= prec as u64 {
            return self.clone();
        }
        let shift = b - prec as u64;
        let q: BigInt = (&self.man >> shift) + 1u32;
        Dyadic::new(q, self.exp + shift as i64)
    }

    /// Approximates `1/self` with about `prec` bits. Returns the value and an error bound.
    pub fn recip(&self, prec: u32) -> Option<(Dyadic, Dyadic)> {
        if self.is_zero() {
            return None;
        }
        let s = prec as u64 + self.man.bits();
        let q = (BigInt::one() << s) / &self.man;
        let e = -(s as i64) - self.exp;
        Some((Dyadic::new(q, e), Dyadic::pow2(e)))
    }

    /// Approximates a rational with about `prec` bits. Returns the value and an error bound.
    pub fn from_rational(q: &BigRational, prec: u32) -> (Dyadic, Dyadic) {
        if q.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let num = q.numer();
        let den = q.denom();
        if den.is_one() {
            return (Dyadic::new(num.clone(), 0), Dyadic::zero());
        }
        let s = prec as i64 + den.bits() as i64 - num.bits() as i64 + 2;
        let (n, d) = if s >= 0 {
            (num << (s as u64), den.clone())
        } else {
            (num.clone(), den << ((-s) as u64))
        };
        let (quot, rem) = n.div_rem(&d);
        let err = if rem.is_zero() { Dyadic::zero() } else { Dyadic::pow2(-s) };
        (Dyadic::new(quot, -s), err)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << (self.exp as u64))
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.man.bits();
        let (m, e) = if b > 60 {
            let sh = b - 60;
            ((&self.man >> sh).to_f64().unwrap_or(0.0), self.exp + sh as i64)
        } else {
            (self.man.to_f64().unwrap_or(0.0), self.exp)
        };
        let e = e.clamp(-2000, 2000) as i32;
        m * 2f64.powi(e)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64) -> Option<Dyadic> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Dyadic::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { Sign::Plus } else { Sign::Minus };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_bits - 1075)
        };
        Some(Dyadic::new(BigInt::from_biguint(sign, m.into()), e))
    }

    pub fn max(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.man.sign(), other.man.sign()) {
            (a, b) if a != b => return sign_rank(a).cmp(&sign_rank(b)),
            (Sign::NoSign, _) => return Ordering::Equal,
            _ => {}
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << ((self.exp - e) as u64);
        let b = &other.man << ((other.exp - e) as u64);
        a.cmp(&b)
    }
}

fn sign_rank(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(o.exp);
        let a = &self.man << ((self.exp - e) as u64);
        let b = &o.man << ((o.exp - e) as u64);
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, o: &Dyadic) -> Dyadic {
        self + &(-o)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, o: &Dyadic) -> Dyadic {
        if self.is_zero() || o.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: &self.man * &o.man, exp: self.exp + o.exp }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { man: -self.man.clone(), exp: self.exp }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_ops() {
        let a = Dyadic::from_f64(0.75).unwrap();
        let b = Dyadic::from_f64(-2.5).unwrap();
        assert_eq!((&a + &b).to_rational(), rat(-7, 4));
        assert_eq!((&a * &b).to_rational(), rat(-15, 8));
        assert!(b < a);
    }

    #[test]
    fn rational_approximation_error_is_bounded() {
        let q = rat(1, 3);
        let (d, err) = Dyadic::from_rational(&q, 80);
        let diff = (d.to_rational() - &q).abs();
        assert!(diff <= err.to_rational());
        assert!(err.to_rational() < rat(1, 1 << 40) * rat(1, 1 << 40));
    }

    #[test]
    fn reciprocal_error_is_bounded() {
        let x = Dyadic::from_int(7);
        let (r, err) = x.recip(100).unwrap();
        let diff = (r.to_rational() - rat(1, 7)).abs();
        assert!(diff <= err.to_rational());
    }

    #[test]
    fn rounding_error_is_bounded() {
        let x = Dyadic::from_rational(&rat(22, 7), 200).0;
        let (r, err) = x.round(30);
        assert!((r.to_rational() - x.to_rational()).abs() <= err.to_rational());
        assert!(r.bits() <= 30);
    }
}
