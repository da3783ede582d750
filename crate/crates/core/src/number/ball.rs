//! Complex midpoint-radius balls with dyadic midpoints.
//!
//! A ball `(re + im*i, rad)` encloses every complex number within distance `rad` of the
//! midpoint. Every operation returns a ball containing all possible results.

use std::fmt;

use super::dyadic::Dyadic;
use super::gauss::GaussRat;

/// Radius mantissas are kept short; they only need to be upper bounds.
const RAD_BITS: u32 = 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    pub re: Dyadic,
    pub im: Dyadic,
    pub rad: Dyadic,
    pub prec: u32,
}

/// Outcome of testing a ball against zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroTest {
    Zero,
    NonZero,
    Ambiguous,
}

impl ComplexBall {
    pub fn new(re: Dyadic, im: Dyadic, rad: Dyadic, prec: u32) -> Self {
        ComplexBall { re, im, rad: rad.round_up(RAD_BITS), prec }
    }

    pub fn exact(re: Dyadic, im: Dyadic, prec: u32) -> Self {
        ComplexBall::new(re, im, Dyadic::zero(), prec)
    }

    pub fn from_gauss(q: &GaussRat, prec: u32) -> Self {
        let (re, e1) = Dyadic::from_rational(&q.re, prec);
        let (im, e2) = Dyadic::from_rational(&q.im, prec);
        ComplexBall::new(re, im, &e1 + &e2, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Option<Self> {
        Some(ComplexBall::exact(Dyadic::from_f64(re)?, Dyadic::from_f64(im)?, prec))
    }

    /// Upper bound on `|mid|`.
    pub fn mid_abs_upper(&self) -> Dyadic {
        &self.re.abs() + &self.im.abs()
    }

    /// Lower bound on `|mid|`.
    pub fn mid_abs_lower(&self) -> Dyadic {
        Dyadic::max(&self.re.abs(), &self.im.abs())
    }

    /// Upper bound on the modulus of every point in the ball.
    pub fn abs_upper(&self) -> Dyadic {
        &self.mid_abs_upper() + &self.rad
    }

    pub fn contains_zero(&self) -> bool {
        self.re.abs() <= self.rad && self.im.abs() <= self.rad
    }

    /// Decides whether the enclosed value is zero.
    ///
    /// A ball that excludes zero is nonzero. A ball around zero whose radius is below
    /// `2^(-prec/2)` is taken to be zero. Anything else is ambiguous at this precision.
    pub fn zero_test(&self) -> ZeroTest {
        if !self.contains_zero() {
            return ZeroTest::NonZero;
        }
        if self.rad <= Dyadic::pow2(-(self.prec as i64) / 2) {
            ZeroTest::Zero
        } else {
            ZeroTest::Ambiguous
        }
    }

    fn rounded(re: Dyadic, im: Dyadic, rad: Dyadic, prec: u32) -> Self {
        let (re, e1) = re.round(prec);
        let (im, e2) = im.round(prec);
        ComplexBall::new(re, im, &(&rad + &e1) + &e2, prec)
    }

    pub fn add(&self, o: &ComplexBall) -> ComplexBall {
        let prec = self.prec.max(o.prec);
        ComplexBall::rounded(&self.re + &o.re, &self.im + &o.im, &self.rad + &o.rad, prec)
    }

    pub fn sub(&self, o: &ComplexBall) -> ComplexBall {
        let prec = self.prec.max(o.prec);
        ComplexBall::rounded(&self.re - &o.re, &self.im - &o.im, &self.rad + &o.rad, prec)
    }

    pub fn neg(&self) -> ComplexBall {
        ComplexBall { re: -&self.re, im: -&self.im, rad: self.rad.clone(), prec: self.prec }
    }

    pub fn mul(&self, o: &ComplexBall) -> ComplexBall {
        let prec = self.prec.max(o.prec);
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        let a = self.mid_abs_upper();
        let b = o.mid_abs_upper();
        let rad = &(&(&a * &o.rad) + &(&b * &self.rad)) + &(&self.rad * &o.rad);
        ComplexBall::rounded(re, im, rad, prec)
    }

    /// Multiplication by an exact Gaussian rational.
    pub fn mul_gauss(&self, q: &GaussRat) -> ComplexBall {
        self.mul(&ComplexBall::from_gauss(q, self.prec))
    }

    /// Enclosure of `1/z`; `None` when the ball may contain zero.
    pub fn inv(&self) -> Option<ComplexBall> {
        let lower = self.mid_abs_lower();
        if lower <= self.rad {
            return None;
        }
        let prec = self.prec;
        let norm = &(&self.re * &self.re) + &(&self.im * &self.im);
        let (rn, en) = norm.recip(prec + 8)?;
        let re = &self.re * &rn;
        let im = -&(&self.im * &rn);
        let mut rad = &self.mid_abs_upper() * &en;
        if !self.rad.is_zero() {
            // |1/z - 1/m| <= r / (|m| (|m| - r)) for |z - m| <= r < |m|.
            let gap = &lower - &self.rad;
            let t = &lower * &gap;
            let (tr, te) = t.recip(RAD_BITS)?;
            rad = &rad + &(&self.rad * &(&tr + &te));
        }
        Some(ComplexBall::rounded(re, im, rad, prec))
    }

    pub fn with_prec(&self, prec: u32) -> ComplexBall {
        if prec >= self.prec {
            ComplexBall { prec, ..self.clone() }
        } else {
            ComplexBall::rounded(self.re.clone(), self.im.clone(), self.rad.clone(), prec)
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Whether the two balls share no point.
    pub fn disjoint(&self, o: &ComplexBall) -> bool {
        let dre = (&self.re - &o.re).abs();
        let dim = (&self.im - &o.im).abs();
        let r = &self.rad + &o.rad;
        dre > r || dim > r
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        write!(f, "[{:.15e}{:+.15e}i +/- {:.3e}]", re, im, self.rad.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn g(n: i64, d: i64) -> GaussRat {
        GaussRat::from_ratio(n, d)
    }

    fn contains(b: &ComplexBall, q: &GaussRat) -> bool {
        let dre = (b.re.to_rational() - &q.re).abs();
        let dim = (b.im.to_rational() - &q.im).abs();
        let r = b.rad.to_rational();
        dre <= r && dim <= r
    }

    use num_traits::Signed;

    #[test]
    fn arithmetic_encloses_exact_results() {
        let a = GaussRat::new(BigRational::new(1.into(), 3.into()), BigRational::new((-2).into(), 7.into()));
        let b = g(5, 11);
        let ba = ComplexBall::from_gauss(&a, 64);
        let bb = ComplexBall::from_gauss(&b, 64);
        assert!(contains(&ba.add(&bb), &(&a + &b)));
        assert!(contains(&ba.mul(&bb), &(&a * &b)));
        assert!(contains(&ba.inv().unwrap(), &a.inv().unwrap()));
    }

    #[test]
    fn cancellation_is_zero() {
        let a = ComplexBall::from_gauss(&g(1, 3), 128);
        let d = a.sub(&a);
        assert_eq!(d.zero_test(), ZeroTest::Zero);
        assert_eq!(a.zero_test(), ZeroTest::NonZero);
    }

    #[test]
    fn wide_ball_is_ambiguous() {
        let b = ComplexBall::new(Dyadic::zero(), Dyadic::zero(), Dyadic::pow2(-4), 128);
        assert_eq!(b.zero_test(), ZeroTest::Ambiguous);
        assert!(b.inv().is_none());
    }
}
