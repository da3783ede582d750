//! Truncated Puiseux series in one variable with exact rational exponents.
//!
//! A series stores its known terms below a horizon `H`; every coefficient of an exponent
//! `< H` that is not stored is zero. A series without a horizon is exact: it is the finite
//! sum of its terms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::number::{Coefficient, ZeroTest};

/// A rational exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponent(pub Rational64);

impl Exponent {
    pub fn new(num: i64, den: i64) -> Self {
        Exponent(Rational64::new(num, den))
    }

    pub fn int(n: i64) -> Self {
        Exponent(Rational64::from_integer(n))
    }

    pub fn zero() -> Self {
        Exponent::int(0)
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> i64 {
        self.0.ceil().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn max(self, o: Exponent) -> Exponent {
        if self >= o {
            self
        } else {
            o
        }
    }

    pub fn min(self, o: Exponent) -> Exponent {
        if self <= o {
            self
        } else {
            o
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("invalid exponent '{}'", s));
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Exponent::new(n, d))
            }
            None => Ok(Exponent::int(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, o: Exponent) -> Exponent {
        Exponent(self.0 + o.0)
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, o: Exponent) -> Exponent {
        Exponent(self.0 - o.0)
    }
}

impl Mul for Exponent {
    type Output = Exponent;
    fn mul(self, o: Exponent) -> Exponent {
        Exponent(self.0 * o.0)
    }
}

impl Div for Exponent {
    type Output = Exponent;
    fn div(self, o: Exponent) -> Exponent {
        Exponent(self.0 / o.0)
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::int(n)
    }
}

/// An order of vanishing; `Infinite` is the order of the zero series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Order {
    Finite(Exponent),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<Exponent> {
        match self {
            Order::Finite(e) => Some(e),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Order::Infinite)
    }
}

impl Ord for Order {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Order::Finite(a), Order::Finite(b)) => a.cmp(b),
            (Order::Finite(_), Order::Infinite) => Ordering::Less,
            (Order::Infinite, Order::Finite(_)) => Ordering::Greater,
            (Order::Infinite, Order::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Order {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(e) => write!(f, "{}", e),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl From<Exponent> for Order {
    fn from(e: Exponent) -> Self {
        Order::Finite(e)
    }
}

/// Contact between two arcs, possibly only bounded below because of truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Contact {
    Exactly(Order),
    /// The arcs agree on every known term; the true contact is at least this value.
    AtLeast(Exponent),
}

impl Contact {
    pub fn at_least(&self, d: Exponent) -> bool {
        match self {
            Contact::Exactly(o) => *o >= Order::Finite(d),
            Contact::AtLeast(h) => *h >= d,
        }
    }

    /// The exact contact order.
    pub fn value(&self) -> Result<Order> {
        match self {
            Contact::Exactly(o) => Ok(*o),
            Contact::AtLeast(h) => Err(Error::IndeterminateOrder { needed: *h + *h }),
        }
    }

    fn rank(&self) -> Order {
        match self {
            Contact::Exactly(o) => *o,
            Contact::AtLeast(h) => Order::Finite(*h),
        }
    }
}

/// A Puiseux series `sum c_e y^e`, truncated at an optional horizon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSeries {
    terms: Vec<(Exponent, Coefficient)>,
    horizon: Option<Exponent>,
}

impl PuiseuxSeries {
    /// Collects terms (summing repeated exponents), drops terms at or beyond the horizon and
    /// terms that are certainly zero.
    pub fn new(terms: impl IntoIterator<Item = (Exponent, Coefficient)>, horizon: Option<Exponent>) -> Self {
        let mut map: BTreeMap<Exponent, Coefficient> = BTreeMap::new();
        for (e, c) in terms {
            if let Some(h) = horizon {
                if e >= h {
                    continue;
                }
            }
            match map.get_mut(&e) {
                Some(acc) => *acc = acc.add(&c),
                None => {
                    map.insert(e, c);
                }
            }
        }
        PuiseuxSeries::from_sorted(map.into_iter().collect(), horizon)
    }

    fn from_sorted(mut terms: Vec<(Exponent, Coefficient)>, horizon: Option<Exponent>) -> Self {
        terms.retain(|(_, c)| c.zero_test() != ZeroTest::Zero);
        PuiseuxSeries { terms, horizon }
    }

    /// The exact zero series.
    pub fn zero() -> Self {
        PuiseuxSeries { terms: vec![], horizon: None }
    }

    /// A series known to vanish below `h`.
    pub fn truncated_zero(h: Exponent) -> Self {
        PuiseuxSeries { terms: vec![], horizon: Some(h) }
    }

    pub fn constant(c: Coefficient) -> Self {
        PuiseuxSeries::monomial(c, Exponent::zero())
    }

    pub fn monomial(c: Coefficient, e: Exponent) -> Self {
        PuiseuxSeries::from_sorted(vec![(e, c)], None)
    }

    pub fn terms(&self) -> &[(Exponent, Coefficient)] {
        &self.terms
    }

    pub fn horizon(&self) -> Option<Exponent> {
        self.horizon
    }

    pub fn is_exact(&self) -> bool {
        self.horizon.is_none()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.horizon.is_none()
    }

    /// True when every coefficient is an exact Gaussian rational.
    pub fn has_exact_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_exact())
    }

    /// Coefficient of `y^e`; zero if absent. Fails beyond the horizon.
    pub fn coefficient(&self, e: Exponent) -> Result<Coefficient> {
        if let Some(h) = self.horizon {
            if e >= h {
                return Err(Error::HorizonExceeded { requested: e, horizon: h });
            }
        }
        Ok(self
            .terms
            .iter()
            .find(|(x, _)| *x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Coefficient::zero))
    }

    /// Order of vanishing.
    pub fn ord(&self) -> Result<Order> {
        match self.terms.first() {
            Some((e, c)) => match c.zero_test() {
                ZeroTest::NonZero => Ok(Order::Finite(*e)),
                _ => Err(Error::PrecisionExhausted),
            },
            None => match self.horizon {
                None => Ok(Order::Infinite),
                Some(h) => Err(Error::IndeterminateOrder { needed: h + h }),
            },
        }
    }

    /// Leading term `(ord, coefficient)`, `None` for the exact zero series.
    pub fn leading(&self) -> Result<Option<(Exponent, Coefficient)>> {
        match self.ord()? {
            Order::Infinite => Ok(None),
            Order::Finite(_) => Ok(Some(self.terms[0].clone())),
        }
    }

    /// A lower bound for the order; `None` for the exact zero series.
    pub fn ord_lower_bound(&self) -> Option<Exponent> {
        self.terms.first().map(|(e, _)| *e).or(self.horizon)
    }

    /// Puiseux multiplicity: the least common multiple of the exponent denominators.
    pub fn puiseux_mult(&self) -> u64 {
        self.terms.iter().fold(1i64, |acc, (e, _)| acc.lcm(&e.denom())) as u64
    }

    /// The jet `J^(e)`: the exact finite sum of the terms with exponent `<= e`.
    pub fn jet(&self, e: Exponent) -> Result<PuiseuxSeries> {
        if let Some(h) = self.horizon {
            if e >= h {
                return Err(Error::HorizonExceeded { requested: e, horizon: h });
            }
        }
        Ok(PuiseuxSeries {
            terms: self.terms.iter().filter(|(x, _)| *x <= e).cloned().collect(),
            horizon: None,
        })
    }

    /// Forgets every term at or beyond `h`.
    pub fn truncate(&self, h: Exponent) -> PuiseuxSeries {
        let horizon = Some(self.horizon.map_or(h, |x| x.min(h)));
        PuiseuxSeries {
            terms: self.terms.iter().filter(|(x, _)| *x < h).cloned().collect(),
            horizon,
        }
    }

    pub fn neg(&self) -> PuiseuxSeries {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
            horizon: self.horizon,
        }
    }

    pub fn add(&self, o: &PuiseuxSeries) -> PuiseuxSeries {
        let horizon = min_horizon(self.horizon, o.horizon);
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let next = match (self.terms.get(i), o.terms.get(j)) {
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Less => {
                        i += 1;
                        a.clone()
                    }
                    Ordering::Greater => {
                        j += 1;
                        b.clone()
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (a.0, a.1.add(&b.1))
                    }
                },
                (Some(a), None) => {
                    i += 1;
                    a.clone()
                }
                (None, Some(b)) => {
                    j += 1;
                    b.clone()
                }
                (None, None) => unreachable!(),
            };
            if horizon.is_none_or(|h| next.0 < h) {
                out.push(next);
            }
        }
        PuiseuxSeries::from_sorted(out, horizon)
    }

    pub fn sub(&self, o: &PuiseuxSeries) -> PuiseuxSeries {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &PuiseuxSeries) -> PuiseuxSeries {
        if self.is_exact_zero() || o.is_exact_zero() {
            return PuiseuxSeries::zero();
        }
        let h1 = self.horizon.map(|h| h + o.ord_lower_bound().unwrap());
        let h2 = o.horizon.map(|h| h + self.ord_lower_bound().unwrap());
        let horizon = min_horizon(h1, h2);
        let mut map: BTreeMap<Exponent, Coefficient> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = *ea + *eb;
                if horizon.is_some_and(|h| e >= h) {
                    break;
                }
                let p = ca.mul(cb);
                match map.get_mut(&e) {
                    Some(acc) => *acc = acc.add(&p),
                    None => {
                        map.insert(e, p);
                    }
                }
            }
        }
        PuiseuxSeries::from_sorted(map.into_iter().collect(), horizon)
    }

    pub fn scale(&self, c: &Coefficient) -> PuiseuxSeries {
        if c.is_structural_zero() {
            return PuiseuxSeries::zero();
        }
        PuiseuxSeries::from_sorted(self.terms.iter().map(|(e, x)| (*e, x.mul(c))).collect(), self.horizon)
    }

    /// Multiplication by `y^e`.
    pub fn shift(&self, e: Exponent) -> PuiseuxSeries {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(x, c)| (*x + e, c.clone())).collect(),
            horizon: self.horizon.map(|h| h + e),
        }
    }

    pub fn pow(&self, k: u32) -> PuiseuxSeries {
        let mut acc = PuiseuxSeries::constant(Coefficient::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitution `y -> y^k` for a positive rational `k`.
    pub fn compose_power(&self, k: Exponent) -> PuiseuxSeries {
        assert!(k > Exponent::zero());
        PuiseuxSeries {
            terms: self.terms.iter().map(|(e, c)| (*e * k, c.clone())).collect(),
            horizon: self.horizon.map(|h| h * k),
        }
    }

    /// The conjugate obtained by `y^(1/n) -> theta_n^k y^(1/n)`, where `n` is a multiple of
    /// the Puiseux multiplicity.
    pub fn conjugate(&self, k: u64, n: u64, prec: u32) -> PuiseuxSeries {
        assert!(n % self.puiseux_mult() == 0, "conjugation order must be a multiple of the Puiseux multiplicity");
        if k % n == 0 {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let num = e.numer() * (n as i64 / e.denom());
                let u = Coefficient::root_of_unity((k as i64 * num).rem_euclid(n as i64), n, prec);
                (*e, c.mul(&u))
            })
            .collect();
        PuiseuxSeries::from_sorted(terms, self.horizon)
    }

    /// All `N` conjugates, `N` the Puiseux multiplicity; index 0 is `self`.
    pub fn conjugates(&self, prec: u32) -> Vec<PuiseuxSeries> {
        let n = self.puiseux_mult();
        (0..n).map(|k| self.conjugate(k, n, prec)).collect()
    }

    fn difference_order(&self, o: &PuiseuxSeries) -> Result<Contact> {
        let d = self.sub(o);
        match d.terms.first() {
            Some((e, c)) => match c.zero_test() {
                ZeroTest::NonZero => Ok(Contact::Exactly(Order::Finite(*e))),
                _ => Err(Error::PrecisionExhausted),
            },
            None => Ok(match d.horizon {
                None => Contact::Exactly(Order::Infinite),
                Some(h) => Contact::AtLeast(h),
            }),
        }
    }

    /// Contact order `max_k ord(self - conj_k(o))` with the maximizing conjugate index `k`
    /// relative to `N = lcm` of both Puiseux multiplicities.
    pub fn contact_with_index(&self, o: &PuiseuxSeries, prec: u32) -> Result<(Contact, u64, u64)> {
        let n = (self.puiseux_mult() as i64).lcm(&(o.puiseux_mult() as i64)) as u64;
        let mut best: Option<(Contact, u64)> = None;
        for k in 0..n {
            let c = self.difference_order(&o.conjugate(k, n, prec))?;
            if best.as_ref().is_none_or(|(b, _)| c.rank() > b.rank()) {
                best = Some((c, k));
            }
        }
        let (c, k) = best.expect("at least one conjugate");
        Ok((c, k, n))
    }

    /// Contact order between two arcs, maximized over conjugates.
    pub fn contact(&self, o: &PuiseuxSeries, prec: u32) -> Result<Contact> {
        Ok(self.contact_with_index(o, prec)?.0)
    }

    /// Canonical comparison: term by term on `(exponent, re, im)`, shorter prefix first.
    pub fn cmp_canonical(&self, o: &PuiseuxSeries) -> Ordering {
        for (a, b) in self.terms.iter().zip(o.terms.iter()) {
            // A smaller first differing exponent means a nonzero coefficient where the other
            // has zero; compare against zero there.
            let ord = match a.0.cmp(&b.0) {
                Ordering::Equal => a.1.cmp_lex(&b.1),
                Ordering::Less => a.1.cmp_lex(&Coefficient::zero()),
                Ordering::Greater => Coefficient::zero().cmp_lex(&b.1),
            };
            if ord != Ordering::Equal {
                return ord;
            }
            if a.0 != b.0 {
                return a.0.cmp(&b.0);
            }
        }
        self.terms.len().cmp(&o.terms.len())
    }

    /// Renders the series with the given variable name.
    pub fn render(&self, var: &str) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in &self.terms {
            let mono = if *e == Exponent::zero() {
                String::new()
            } else if e.is_integer() && e.numer() == 1 {
                var.to_string()
            } else if e.is_integer() {
                format!("{}^{}", var, e)
            } else {
                format!("{}^({})", var, e)
            };
            let cs = c.to_string();
            let term = if mono.is_empty() {
                cs
            } else if c.as_exact().is_some_and(|q| q.is_one()) {
                mono
            } else if c.as_exact().is_some_and(|q| (-q).is_one()) {
                format!("-{}", mono)
            } else {
                format!("{}*{}", cs, mono)
            };
            parts.push(term);
        }
        let mut s = String::new();
        for (k, p) in parts.iter().enumerate() {
            if k > 0 {
                if let Some(rest) = p.strip_prefix('-') {
                    s.push_str(" - ");
                    s.push_str(rest);
                    continue;
                }
                s.push_str(" + ");
            }
            s.push_str(p);
        }
        if let Some(h) = self.horizon {
            let o = if h.is_integer() { format!("O({}^{})", var, h) } else { format!("O({}^({}))", var, h) };
            if s.is_empty() {
                s = o;
            } else {
                s.push_str(" + ");
                s.push_str(&o);
            }
        } else if s.is_empty() {
            s = "0".into();
        }
        s
    }
}

fn min_horizon(a: Option<Exponent>, b: Option<Exponent>) -> Option<Exponent> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("y"))
    }
}

/// One branch of a conjugate family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcBranch {
    pub series: PuiseuxSeries,
    pub conjugate_index: u64,
}

impl ArcBranch {
    /// The family of all conjugates of `series`.
    pub fn family(series: &PuiseuxSeries, prec: u32) -> Vec<ArcBranch> {
        series
            .conjugates(prec)
            .into_iter()
            .enumerate()
            .map(|(k, s)| ArcBranch { series: s, conjugate_index: k as u64 })
            .collect()
    }
}

/// `Exponent` helper: `1` as an exponent.
pub fn one() -> Exponent {
    Exponent(Rational64::one())
}

/// Least common multiple helper on Puiseux multiplicities.
pub fn lcm(a: u64, b: u64) -> u64 {
    (a as i64).lcm(&(b as i64)) as u64
}

impl Zero for Exponent {
    fn zero() -> Self {
        Exponent::int(0)
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::GaussRat;

    fn q(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    fn c(n: i64) -> Coefficient {
        Coefficient::from_int(n)
    }

    #[test]
    fn jet_and_mult() {
        let s = PuiseuxSeries::new(vec![(q(3, 2), c(1)), (q(11, 2), c(-1))], None);
        assert_eq!(s.puiseux_mult(), 2);
        assert_eq!(s.jet(q(11, 2)).unwrap(), s);
        assert_eq!(s.jet(q(2, 1)).unwrap(), PuiseuxSeries::monomial(c(1), q(3, 2)));
    }

    #[test]
    fn contact_of_conjugate_square_roots() {
        let a = PuiseuxSeries::monomial(c(1), q(1, 2));
        let b = PuiseuxSeries::monomial(c(-1), q(1, 2));
        assert_eq!(a.contact(&b, 128).unwrap(), Contact::Exactly(Order::Infinite));
        let d = PuiseuxSeries::monomial(c(1), q(2, 1));
        assert_eq!(a.contact(&d, 128).unwrap(), Contact::Exactly(Order::Finite(q(1, 2))));
    }

    #[test]
    fn contact_is_symmetric_with_different_multiplicities() {
        let a = PuiseuxSeries::new(vec![(q(1, 1), c(1)), (q(3, 2), c(2))], None);
        let b = PuiseuxSeries::new(vec![(q(1, 1), c(1)), (q(4, 3), c(5))], None);
        assert_eq!(a.contact(&b, 128).unwrap(), b.contact(&a, 128).unwrap());
        assert_eq!(a.contact(&b, 128).unwrap(), Contact::Exactly(Order::Finite(q(4, 3))));
    }

    #[test]
    fn truncated_multiplication_tracks_horizon() {
        let a = PuiseuxSeries::new(vec![(q(1, 1), c(1))], Some(q(5, 1)));
        let b = PuiseuxSeries::new(vec![(q(2, 1), c(1))], Some(q(4, 1)));
        let p = a.mul(&b);
        assert_eq!(p.horizon(), Some(q(5, 1)));
        assert_eq!(p.terms().len(), 1);
    }

    #[test]
    fn conjugation_is_a_group_action() {
        let s = PuiseuxSeries::new(
            vec![(q(1, 3), Coefficient::Exact(GaussRat::from_ratio(2, 3))), (q(5, 6), c(1))],
            None,
        );
        let n = s.puiseux_mult();
        assert_eq!(n, 6);
        let a = s.conjugate(2, n, 200).conjugate(3, n, 200);
        let b = s.conjugate(5, n, 200);
        assert_eq!(a.contact(&b, 200).unwrap().value().unwrap(), Order::Infinite);
        assert_eq!(a.difference_order(&b).unwrap(), Contact::Exactly(Order::Infinite));
    }

    #[test]
    fn render_forms() {
        let s = PuiseuxSeries::new(vec![(q(6, 1), c(-6)), (q(11, 2), c(1))], Some(q(8, 1)));
        assert_eq!(s.render("y"), "y^(11/2) - 6*y^6 + O(y^8)");
    }
}
