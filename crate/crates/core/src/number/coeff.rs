//! Series coefficients: exact Gaussian rationals or certified complex balls.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;

use super::ball::{ComplexBall, ZeroTest};
use super::dyadic::Dyadic;
use super::gauss::GaussRat;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficient {
    Exact(GaussRat),
    Ball(ComplexBall),
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::Exact(GaussRat::zero())
    }

    pub fn one() -> Self {
        Coefficient::Exact(GaussRat::one())
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient::Exact(GaussRat::from_int(n))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coefficient::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&GaussRat> {
        match self {
            Coefficient::Exact(q) => Some(q),
            Coefficient::Ball(_) => None,
        }
    }

    pub fn to_ball(&self, prec: u32) -> ComplexBall {
        match self {
            Coefficient::Exact(q) => ComplexBall::from_gauss(q, prec),
            Coefficient::Ball(b) => b.clone(),
        }
    }

    fn binary(
        &self,
        o: &Coefficient,
        exact: impl Fn(&GaussRat, &GaussRat) -> GaussRat,
        ball: impl Fn(&ComplexBall, &ComplexBall) -> ComplexBall,
    ) -> Coefficient {
        match (self, o) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => Coefficient::Exact(exact(a, b)),
            (Coefficient::Ball(a), Coefficient::Ball(b)) => Coefficient::Ball(ball(a, b)),
            (Coefficient::Ball(a), Coefficient::Exact(b)) => {
                Coefficient::Ball(ball(a, &ComplexBall::from_gauss(b, a.prec)))
            }
            (Coefficient::Exact(a), Coefficient::Ball(b)) => {
                Coefficient::Ball(ball(&ComplexBall::from_gauss(a, b.prec), b))
            }
        }
    }

    pub fn add(&self, o: &Coefficient) -> Coefficient {
        if self.is_structural_zero() {
            return o.clone();
        }
        if o.is_structural_zero() {
            return self.clone();
        }
        self.binary(o, |a, b| a + b, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Coefficient) -> Coefficient {
        self.binary(o, |a, b| a - b, |a, b| a.sub(b))
    }

    pub fn mul(&self, o: &Coefficient) -> Coefficient {
        if self.is_structural_zero() || o.is_structural_zero() {
            return Coefficient::zero();
        }
        if let Coefficient::Exact(q) = self {
            if q.is_one() {
                return o.clone();
            }
        }
        if let Coefficient::Exact(q) = o {
            if q.is_one() {
                return self.clone();
            }
        }
        self.binary(o, |a, b| a * b, |a, b| a.mul(b))
    }

    pub fn neg(&self) -> Coefficient {
        match self {
            Coefficient::Exact(q) => Coefficient::Exact(-q),
            Coefficient::Ball(b) => Coefficient::Ball(b.neg()),
        }
    }

    pub fn inv(&self) -> Result<Coefficient> {
        match self {
            Coefficient::Exact(q) => q
                .inv()
                .map(Coefficient::Exact)
                .ok_or_else(|| Error::InvalidInput("division by zero".into())),
            Coefficient::Ball(b) => b.inv().map(Coefficient::Ball).ok_or(Error::PrecisionExhausted),
        }
    }

    pub fn div(&self, o: &Coefficient) -> Result<Coefficient> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Coefficient {
        if let Coefficient::Exact(q) = self {
            return Coefficient::Exact(q.pow(e));
        }
        let mut base = self.clone();
        let mut acc = Coefficient::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// An exact zero, as opposed to a ball that happens to contain zero.
    pub fn is_structural_zero(&self) -> bool {
        matches!(self, Coefficient::Exact(q) if q.is_zero())
    }

    pub fn zero_test(&self) -> ZeroTest {
        match self {
            Coefficient::Exact(q) => {
                if q.is_zero() {
                    ZeroTest::Zero
                } else {
                    ZeroTest::NonZero
                }
            }
            Coefficient::Ball(b) => b.zero_test(),
        }
    }

    /// Zero test that escalates ambiguity to [`Error::PrecisionExhausted`].
    pub fn is_zero(&self) -> Result<bool> {
        match self.zero_test() {
            ZeroTest::Zero => Ok(true),
            ZeroTest::NonZero => Ok(false),
            ZeroTest::Ambiguous => Err(Error::PrecisionExhausted),
        }
    }

    pub fn prec(&self) -> Option<u32> {
        match self {
            Coefficient::Exact(_) => None,
            Coefficient::Ball(b) => Some(b.prec),
        }
    }

    fn midpoint(&self) -> (Dyadic, Dyadic, Dyadic) {
        match self {
            Coefficient::Exact(q) => {
                let (re, e1) = Dyadic::from_rational(&q.re, 512);
                let (im, e2) = Dyadic::from_rational(&q.im, 512);
                (re, im, &e1 + &e2)
            }
            Coefficient::Ball(b) => (b.re.clone(), b.im.clone(), b.rad.clone()),
        }
    }

    /// Lexicographic order on `(re, im)`. Components whose enclosures overlap compare equal,
    /// so conjugate balls with a common real part are ordered by their imaginary parts.
    pub fn cmp_lex(&self, o: &Coefficient) -> Ordering {
        if let (Coefficient::Exact(a), Coefficient::Exact(b)) = (self, o) {
            return a.cmp_lex(b);
        }
        let (ar, ai, arad) = self.midpoint();
        let (br, bi, brad) = o.midpoint();
        let tol = &(&arad + &brad) + &Dyadic::pow2(-64);
        let cmp_tol = |x: &Dyadic, y: &Dyadic| {
            if (x - y).abs() <= tol {
                Ordering::Equal
            } else {
                x.cmp(y)
            }
        };
        cmp_tol(&ar, &br).then_with(|| cmp_tol(&ai, &bi))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        match self {
            Coefficient::Exact(q) => q.to_f64_pair(),
            Coefficient::Ball(b) => b.to_f64_pair(),
        }
    }

    /// Whether `self` and `o` certainly differ, or certainly coincide.
    pub fn equals(&self, o: &Coefficient) -> Result<bool> {
        self.sub(o).is_zero()
    }

    /// `exp(2 pi i j / n)`, exact when it lies in Q(i).
    pub fn root_of_unity(j: i64, n: u64, prec: u32) -> Coefficient {
        let n_i = n as i64;
        let j = j.rem_euclid(n_i);
        let g = j.gcd(&n_i).max(1);
        let (j, n) = (j / g, (n_i / g) as u64);
        if (4 * j) % n as i64 == 0 {
            return Coefficient::Exact(GaussRat::i_pow(4 * j / n as i64));
        }
        let key = (j, n, prec);
        if let Some(c) = UNITY_CACHE.with(|m| m.borrow().get(&key).cloned()) {
            return c;
        }
        let c = Coefficient::Ball(unity_ball(j, n, prec));
        UNITY_CACHE.with(|m| m.borrow_mut().insert(key, c.clone()));
        c
    }
}

thread_local! {
    static UNITY_CACHE: RefCell<HashMap<(i64, u64, u32), Coefficient>> = RefCell::new(HashMap::new());
}

/// Newton refinement of a primitive root of unity followed by a Kantorovich-style enclosure.
fn unity_ball(j: i64, n: u64, prec: u32) -> ComplexBall {
    let angle = 2.0 * std::f64::consts::PI * (j as f64) / (n as f64);
    let wp = prec + 32;
    let mut z = ComplexBall::from_f64(angle.cos(), angle.sin(), wp).expect("finite");
    let one = ComplexBall::exact(Dyadic::one(), Dyadic::zero(), wp);
    let nb = ComplexBall::exact(Dyadic::from_int(n as i64), Dyadic::zero(), wp);
    let mut bits = 50u32;
    loop {
        let zn1 = pow_ball(&z, n - 1);
        let p = zn1.mul(&z).sub(&one);
        let dp = nb.mul(&zn1);
        let step = p.mul(&dp.inv().expect("nonzero derivative"));
        z = z.sub(&step);
        z = ComplexBall::exact(z.re.clone(), z.im.clone(), wp);
        if bits > wp {
            break;
        }
        bits *= 2;
    }
    let zn1 = pow_ball(&z, n - 1);
    let p = zn1.mul(&z).sub(&one);
    let dp = nb.mul(&zn1);
    // Some root of z^n - 1 lies within n |p(z)| / |p'(z)| of z; roots are far apart.
    let num = &p.abs_upper() * &Dyadic::from_int(n as i64);
    let den_lower = &dp.mid_abs_lower() - &dp.rad;
    let (inv, err) = den_lower.recip(40).expect("nonzero");
    let rad = &num * &(&inv + &err);
    let (re, e1) = z.re.round(prec + 8);
    let (im, e2) = z.im.round(prec + 8);
    ComplexBall::new(re, im, &(&rad + &e1) + &e2, prec)
}

fn pow_ball(z: &ComplexBall, mut e: u64) -> ComplexBall {
    let mut acc = ComplexBall::exact(Dyadic::one(), Dyadic::zero(), z.prec);
    let mut base = z.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    acc
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Exact(q) => write!(f, "{}", q),
            Coefficient::Ball(b) => {
                let (re, im) = b.to_f64_pair();
                let re = if re.abs() < 1e-300 || b.re.abs() <= b.rad { 0.0 } else { re };
                let im = if im.abs() < 1e-300 || b.im.abs() <= b.rad { 0.0 } else { im };
                if im == 0.0 {
                    write!(f, "~{}", fmt_float(re))
                } else if re == 0.0 {
                    write!(f, "~{}*i", fmt_float(im))
                } else {
                    let sign = if im < 0.0 { "-" } else { "+" };
                    write!(f, "~({}{}{}*i)", fmt_float(re), sign, fmt_float(im.abs()))
                }
            }
        }
    }
}

fn fmt_float(x: f64) -> String {
    let s = format!("{:.15}", x);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

impl From<GaussRat> for Coefficient {
    fn from(q: GaussRat) -> Self {
        Coefficient::Exact(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_in_gaussian_field_are_exact() {
        assert_eq!(Coefficient::root_of_unity(1, 4, 128), Coefficient::Exact(GaussRat::i()));
        assert_eq!(Coefficient::root_of_unity(3, 6, 128), Coefficient::from_int(-1));
        assert_eq!(Coefficient::root_of_unity(6, 3, 128), Coefficient::one());
    }

    #[test]
    fn cube_root_of_unity_is_certified() {
        let w = Coefficient::root_of_unity(1, 3, 200);
        assert!(!w.is_exact());
        let cube = w.pow(3);
        assert!(cube.equals(&Coefficient::one()).unwrap());
        let (re, im) = w.to_f64_pair();
        assert!((re + 0.5).abs() < 1e-15 && (im - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn lexicographic_order_of_conjugate_balls() {
        let a = Coefficient::root_of_unity(1, 3, 128);
        let b = Coefficient::root_of_unity(2, 3, 128);
        assert_eq!(b.cmp_lex(&a), Ordering::Less);
    }
}
