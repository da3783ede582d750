//! Univariate polynomials over [`Coefficient`] and certified root isolation.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::ComplexBall;
use super::coeff::Coefficient;
use super::dyadic::Dyadic;
use super::gauss::GaussRat;
use crate::error::{Error, Result};

/// Dense polynomial, coefficients in ascending degree order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    pub coeffs: Vec<Coefficient>,
}

/// A root together with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub value: Coefficient,
    pub multiplicity: usize,
}

impl UniPoly {
    /// Builds a polynomial and drops leading zeros.
    pub fn new(coeffs: Vec<Coefficient>) -> Result<Self> {
        let mut p = UniPoly { coeffs };
        p.trim()?;
        Ok(p)
    }

    pub fn from_exact(coeffs: Vec<GaussRat>) -> Self {
        UniPoly::new(coeffs.into_iter().map(Coefficient::Exact).collect()).expect("exact")
    }

    pub fn constant(c: Coefficient) -> Result<Self> {
        UniPoly::new(vec![c])
    }

    fn trim(&mut self) -> Result<()> {
        while let Some(c) = self.coeffs.last() {
            if c.is_zero()? {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial has degree 0 by convention here.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&Coefficient> {
        self.coeffs.last()
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Coefficient::is_exact)
    }

    pub fn derivative(&self) -> Result<UniPoly> {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&Coefficient::from_int(k as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, z: &Coefficient) -> Coefficient {
        let mut acc = Coefficient::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    pub fn sub(&self, o: &UniPoly) -> Result<UniPoly> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = Coefficient::zero();
        UniPoly::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).unwrap_or(&zero);
                    let b = o.coeffs.get(k).unwrap_or(&zero);
                    a.sub(b)
                })
                .collect(),
        )
    }

    pub fn monic(&self) -> Result<UniPoly> {
        let Some(lc) = self.leading() else {
            return Ok(self.clone());
        };
        let inv = lc.inv()?;
        let mut coeffs: Vec<Coefficient> = self.coeffs.iter().map(|c| c.mul(&inv)).collect();
        *coeffs.last_mut().unwrap() = Coefficient::one();
        Ok(UniPoly { coeffs })
    }

    /// Euclidean division.
    pub fn divrem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let Some(lc) = d.leading() else {
            return Err(Error::InvalidInput("division by the zero polynomial".into()));
        };
        let inv = lc.inv()?;
        let dd = d.degree();
        let mut r = self.coeffs.clone();
        if r.len() < d.coeffs.len() {
            return Ok((UniPoly { coeffs: vec![] }, self.clone()));
        }
        let mut q = vec![Coefficient::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let t = r[k].mul(&inv);
            for j in 0..dd {
                r[k - dd + j] = r[k - dd + j].sub(&t.mul(&d.coeffs[j]));
            }
            r[k] = Coefficient::zero();
            q[k - dd] = t;
        }
        r.truncate(dd);
        Ok((UniPoly::new(q)?, UniPoly::new(r)?))
    }

    pub fn gcd(&self, o: &UniPoly) -> Result<UniPoly> {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free decomposition by Yun's algorithm: `self = lc * prod a_i^i`.
    pub fn squarefree(&self) -> Result<Vec<(UniPoly, usize)>> {
        let f = self.monic()?;
        if f.degree() == 0 {
            return Ok(vec![]);
        }
        let fp = f.derivative()?;
        let a0 = f.gcd(&fp)?;
        let mut b = f.divrem(&a0)?.0;
        let c = fp.divrem(&a0)?.0;
        let mut d = c.sub(&b.derivative()?)?;
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d)?;
            let nb = b.divrem(&a)?.0;
            let nc = d.divrem(&a)?.0;
            if a.degree() > 0 {
                out.push((a, i));
            }
            b = nb;
            d = nc.sub(&b.derivative()?)?;
            i += 1;
            if i > self.coeffs.len() + 1 {
                return Err(Error::PrecisionExhausted);
            }
        }
        Ok(out)
    }

    /// Degree of the square-free part, i.e. the number of distinct roots.
    pub fn distinct_root_count(&self) -> Result<usize> {
        Ok(self.squarefree()?.iter().map(|(a, _)| a.degree()).sum())
    }

    /// All complex roots with multiplicities, sorted lexicographically by `(re, im)`.
    ///
    /// Roots in Q(i) of exact polynomials are returned exactly; every other root is a ball
    /// certified to contain exactly one root of its square-free factor.
    pub fn roots(&self, prec: u32) -> Result<Vec<Root>> {
        let mut out = Vec::new();
        for (factor, mult) in self.squarefree()? {
            for value in squarefree_roots(&factor, prec)? {
                out.push(Root { value, multiplicity: mult });
            }
        }
        out.sort_by(|a, b| a.value.cmp_lex(&b.value));
        Ok(out)
    }
}

fn squarefree_roots(q: &UniPoly, prec: u32) -> Result<Vec<Coefficient>> {
    let n = q.degree();
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![q.coeffs[0].neg().div(&q.coeffs[1])?]);
    }
    let wp = prec + 64;
    let approx = aberth(q, wp)?;
    let exact = q.is_exact();
    let mut values = Vec::with_capacity(n);
    let mut balls = Vec::with_capacity(n);
    for z in &approx {
        if exact {
            if let Some(r) = reconstruct(z, wp) {
                let rc = Coefficient::Exact(r.clone());
                if q.eval(&rc).is_structural_zero() {
                    values.push(rc);
                    balls.push(ComplexBall::from_gauss(&r, wp));
                    continue;
                }
            }
        }
        let rad = inclusion_radius(q, z, wp)?;
        let ball = ComplexBall::new(z.re.clone(), z.im.clone(), rad, prec);
        values.push(Coefficient::Ball(ball.clone()));
        balls.push(ball);
    }
    for i in 0..n {
        for j in i + 1..n {
            let exact_pair = values[i].is_exact() && values[j].is_exact();
            if exact_pair {
                if values[i] == values[j] {
                    return Err(Error::PrecisionExhausted);
                }
            } else if !balls[i].disjoint(&balls[j]) {
                return Err(Error::PrecisionExhausted);
            }
        }
    }
    Ok(values)
}

/// `n |q(z)| / |q'(z)|`, a radius around `z` that contains a root of `q`.
fn inclusion_radius(q: &UniPoly, z: &ComplexBall, prec: u32) -> Result<Dyadic> {
    let zb = Coefficient::Ball(ComplexBall::exact(z.re.clone(), z.im.clone(), prec));
    let p = q.eval(&zb).to_ball(prec);
    let dp = q.derivative()?.eval(&zb).to_ball(prec);
    let lower = &dp.mid_abs_lower() - &dp.rad;
    if lower <= Dyadic::zero() {
        return Err(Error::PrecisionExhausted);
    }
    let (inv, err) = lower.recip(40).expect("positive");
    let n = Dyadic::from_int(q.degree() as i64);
    Ok(&(&n * &p.abs_upper()) * &(&inv + &err))
}

fn to_c64(c: &Coefficient) -> Complex64 {
    let (re, im) = c.to_f64_pair();
    Complex64::new(re, im)
}

/// Simultaneous root approximation: a double-precision pass followed by refinement at `wp` bits.
fn aberth(q: &UniPoly, wp: u32) -> Result<Vec<ComplexBall>> {
    let n = q.degree();
    let c64: Vec<Complex64> = q.coeffs.iter().map(to_c64).collect();
    let finite = c64.iter().all(|c| c.re.is_finite() && c.im.is_finite()) && c64[n].norm() > 0.0;
    let start: Vec<Complex64> = if finite {
        aberth_f64(&c64)
    } else {
        (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
            .collect()
    };
    let mut z: Vec<ComplexBall> = Vec::with_capacity(n);
    for s in &start {
        let (re, im) = if s.re.is_finite() && s.im.is_finite() { (s.re, s.im) } else { (1.0, 0.5) };
        z.push(ComplexBall::from_f64(re, im, wp).expect("finite"));
    }
    let coeffs: Vec<ComplexBall> = q.coeffs.iter().map(|c| strip(&c.to_ball(wp))).collect();
    let dcoeffs: Vec<ComplexBall> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.mul(&ComplexBall::exact(Dyadic::from_int(k as i64), Dyadic::zero(), wp)))
        .collect();
    let one = ComplexBall::exact(Dyadic::one(), Dyadic::zero(), wp);
    let target = Dyadic::pow2(-(wp as i64) + 16);
    for _ in 0..200 {
        let mut converged = true;
        for k in 0..n {
            let p = horner(&coeffs, &z[k]);
            if p.re.is_zero() && p.im.is_zero() {
                continue;
            }
            let dp = horner(&dcoeffs, &z[k]);
            let Some(dpi) = strip(&dp).inv() else {
                converged = false;
                z[k] = strip(&z[k].add(&ComplexBall::from_f64(1e-3, 1e-3, wp).unwrap()));
                continue;
            };
            let w = strip(&p.mul(&dpi));
            let mut s = ComplexBall::exact(Dyadic::zero(), Dyadic::zero(), wp);
            for j in 0..n {
                if j != k {
                    if let Some(inv) = strip(&z[k].sub(&z[j])).inv() {
                        s = strip(&s.add(&strip(&inv)));
                    }
                }
            }
            let denom = strip(&one.sub(&w.mul(&s)));
            let corr = match denom.inv() {
                Some(di) => strip(&w.mul(&strip(&di))),
                None => w,
            };
            z[k] = strip(&z[k].sub(&corr));
            let scale = Dyadic::max(&Dyadic::one(), &z[k].mid_abs_upper());
            if corr.mid_abs_upper() > &target * &scale {
                converged = false;
            }
        }
        if converged {
            return Ok(z);
        }
    }
    Err(Error::PrecisionExhausted)
}

fn strip(b: &ComplexBall) -> ComplexBall {
    ComplexBall::exact(b.re.clone(), b.im.clone(), b.prec)
}

fn horner(coeffs: &[ComplexBall], z: &ComplexBall) -> ComplexBall {
    let mut acc = ComplexBall::exact(Dyadic::zero(), Dyadic::zero(), z.prec);
    for c in coeffs.iter().rev() {
        acc = strip(&acc.mul(z).add(c));
    }
    acc
}

fn aberth_f64(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let mut bound: f64 = 0.0;
    for (k, ck) in c.iter().enumerate().take(n) {
        let v = (ck / lead).norm();
        if v > 0.0 {
            bound = bound.max(v.powf(1.0 / (n - k) as f64));
        }
    }
    let radius = if bound > 0.0 { bound } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for ck in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + ck;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = false;
        for k in 0..n {
            let (p, dp) = eval(z[k]);
            if p.norm() == 0.0 || dp.norm() == 0.0 {
                continue;
            }
            let w = p / dp;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let corr = w / (1.0 - w * s);
            if corr.re.is_finite() && corr.im.is_finite() {
                z[k] -= corr;
                if corr.norm() > 1e-15 * (1.0 + z[k].norm()) {
                    moved = true;
                }
            }
        }
        if !moved {
            break;
        }
    }
    z
}

/// Rational reconstruction of a ball midpoint by continued fractions.
fn reconstruct(z: &ComplexBall, wp: u32) -> Option<GaussRat> {
    let tol = Dyadic::pow2(-(wp as i64) / 2).to_rational();
    let max_den = BigInt::one() << (wp as u64 / 4);
    let re = simplest_near(&z.re.to_rational(), &tol, &max_den)?;
    let im = simplest_near(&z.im.to_rational(), &tol, &max_den)?;
    Some(GaussRat::new(re, im))
}

fn simplest_near(x: &BigRational, tol: &BigRational, max_den: &BigInt) -> Option<BigRational> {
    if x.abs() <= *tol {
        return Some(BigRational::zero());
    }
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    for _ in 0..200 {
        let a = rest.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > *max_den {
            return None;
        }
        let cand = BigRational::new(p2.clone(), q2.clone());
        if (&cand - x).abs() <= *tol {
            return Some(cand);
        }
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            return Some(cand);
        }
        rest = frac.recip();
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    None
}

/// Lexicographic comparison helper for sorting roots.
pub fn cmp_roots(a: &Root, b: &Root) -> Ordering {
    a.value.cmp_lex(&b.value)
}
