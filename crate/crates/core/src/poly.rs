//! Bivariate polynomials over Q(i).

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::number::{Coefficient, GaussRat, UniPoly};
use crate::series::{Exponent, PuiseuxSeries};

/// A polynomial `sum c_ij x^i y^j` with Gaussian rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<(u32, u32), GaussRat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((u32, u32), GaussRat)>) -> Self {
        let mut p = Poly::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, &c);
        }
        p
    }

    pub fn monomial(c: GaussRat, i: u32, j: u32) -> Self {
        Poly::from_terms([((i, j), c)])
    }

    pub fn constant(c: GaussRat) -> Self {
        Poly::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Poly::monomial(GaussRat::one(), 1, 0)
    }

    pub fn y() -> Self {
        Poly::monomial(GaussRat::one(), 0, 1)
    }

    fn add_term(&mut self, i: u32, j: u32, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(GaussRat::zero);
        *e = &*e + c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> GaussRat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    /// Multiplicity at the origin: the least total degree of a monomial.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|(i, j)| i + j).min().unwrap_or(0)
    }

    pub fn x_degree(&self) -> u32 {
        self.terms.keys().map(|(i, _)| *i).max().unwrap_or(0)
    }

    pub fn y_degree(&self) -> u32 {
        self.terms.keys().map(|(_, j)| *j).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for ((i, j), c) in &o.terms {
            p.add_term(*i, *j, c);
        }
        p
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(k, x)| (*k, x * c)))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut p = Poly::zero();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &o.terms {
                p.add_term(i1 + i2, j1 + j2, &(c1 * c2));
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::constant(GaussRat::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn deriv_x(&self) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|((i, j), c)| ((i - 1, *j), c * &GaussRat::from_int(*i as i64))),
        )
    }

    pub fn deriv_y(&self) -> Poly {
        Poly::from_terms(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|((i, j), c)| ((*i, j - 1), c * &GaussRat::from_int(*j as i64))),
        )
    }

    /// Coefficients of `x^i y^(k-i)` for `i = 0..=k`.
    pub fn homogeneous_part(&self, k: u32) -> Vec<GaussRat> {
        (0..=k).map(|i| self.coeff(i, k - i)).collect()
    }

    /// Substitution `x -> a x + b y`, `y -> c x + d y`.
    pub fn compose_linear(&self, a: &GaussRat, b: &GaussRat, c: &GaussRat, d: &GaussRat) -> Poly {
        let lx = Poly::from_terms([((1, 0), a.clone()), ((0, 1), b.clone())]);
        let ly = Poly::from_terms([((1, 0), c.clone()), ((0, 1), d.clone())]);
        let mut px: HashMap<u32, Poly> = HashMap::new();
        let mut py: HashMap<u32, Poly> = HashMap::new();
        let mut out = Poly::zero();
        for ((i, j), coef) in &self.terms {
            let xi = power_cached(&mut px, &lx, *i);
            let yj = power_cached(&mut py, &ly, *j);
            out = out.add(&xi.mul(&yj).scale(coef));
        }
        out
    }

    /// The shear `y -> y + t x`.
    pub fn shear(&self, t: &GaussRat) -> Poly {
        self.compose_linear(&GaussRat::one(), &GaussRat::zero(), t, &GaussRat::one())
    }

    /// Swaps the roles of `x` and `y`.
    pub fn swap(&self) -> Poly {
        Poly::from_terms(self.terms.iter().map(|((i, j), c)| ((*j, *i), c.clone())))
    }

    /// The coefficient of `x^i`, as an exact series in `y`.
    pub fn x_row(&self, i: u32) -> PuiseuxSeries {
        PuiseuxSeries::new(
            self.terms
                .iter()
                .filter(|((a, _), _)| *a == i)
                .map(|((_, j), c)| (Exponent::int(*j as i64), Coefficient::Exact(c.clone()))),
            None,
        )
    }

    /// `P(alpha(y), y)`.
    pub fn eval_x(&self, alpha: &PuiseuxSeries) -> PuiseuxSeries {
        let deg = self.x_degree();
        let mut acc = PuiseuxSeries::zero();
        for i in (0..=deg).rev() {
            acc = acc.mul(alpha).add(&self.x_row(i));
        }
        acc
    }

    /// Rows `F_i(W)` of `F(Z, W) = P(Z + alpha(W), W) = sum_i Z^i F_i(W)`.
    pub fn relative_transform(&self, alpha: &PuiseuxSeries) -> Vec<PuiseuxSeries> {
        let deg = self.x_degree() as usize;
        let rows: Vec<PuiseuxSeries> = (0..=deg as u32).map(|i| self.x_row(i)).collect();
        let mut powers = vec![PuiseuxSeries::constant(Coefficient::one())];
        for k in 1..=deg {
            let next = powers[k - 1].mul(alpha);
            powers.push(next);
        }
        (0..=deg)
            .map(|i| {
                let mut acc = PuiseuxSeries::zero();
                for (j, row) in rows.iter().enumerate().skip(i) {
                    if row.is_exact_zero() {
                        continue;
                    }
                    let b = Coefficient::Exact(GaussRat::binomial(j as u64, i as u64));
                    acc = acc.add(&powers[j - i].mul(row).scale(&b));
                }
                acc
            })
            .collect()
    }

    /// `P(x, y0)` as a univariate polynomial in `x`.
    pub fn specialize_y(&self, y0: &GaussRat) -> UniPoly {
        let deg = self.x_degree() as usize;
        let mut coeffs = vec![GaussRat::zero(); deg + 1];
        for ((i, j), c) in &self.terms {
            coeffs[*i as usize] = &coeffs[*i as usize] + &(c * &y0.pow(*j as u64));
        }
        UniPoly::from_exact(coeffs)
    }

    /// Renders with the given variable names; the output is accepted by the parser.
    pub fn render(&self, xv: &str, yv: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut s = String::new();
        for (n, k) in keys.iter().enumerate() {
            let c = &self.terms[k];
            let mono = monomial_str(k.0, k.1, xv, yv);
            let (neg, body) = if mono.is_empty() {
                let cs = c.to_string();
                match cs.strip_prefix('-') {
                    Some(r) => (true, r.to_string()),
                    None => (false, cs),
                }
            } else if c.is_one() {
                (false, mono)
            } else if (-c).is_one() {
                (true, mono)
            } else {
                let cs = c.to_string();
                match cs.strip_prefix('-') {
                    Some(r) => (true, format!("{}*{}", r, mono)),
                    None => (false, format!("{}*{}", cs, mono)),
                }
            };
            match (n, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&body);
        }
        s
    }
}

fn monomial_str(i: u32, j: u32, xv: &str, yv: &str) -> String {
    let part = |v: &str, e: u32| match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{}^{}", v, e),
    };
    match (part(xv, i), part(yv, j)) {
        (a, b) if a.is_empty() => b,
        (a, b) if b.is_empty() => a,
        (a, b) => format!("{}*{}", a, b),
    }
}

fn power_cached(cache: &mut HashMap<u32, Poly>, base: &Poly, k: u32) -> Poly {
    if let Some(p) = cache.get(&k) {
        return p.clone();
    }
    let p = if k == 0 { Poly::constant(GaussRat::one()) } else { power_cached(cache, base, k - 1).mul(base) };
    cache.insert(k, p.clone());
    p
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x", "y"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: i64) -> GaussRat {
        GaussRat::from_int(n)
    }

    #[test]
    fn derivatives_and_degrees() {
        let f = Poly::from_terms([((3, 0), g(1)), ((0, 12), g(1)), ((2, 5), g(1))]);
        assert_eq!(f.order(), 3);
        assert_eq!(f.total_degree(), 12);
        assert_eq!(f.deriv_x(), Poly::from_terms([((2, 0), g(3)), ((1, 5), g(2))]));
        assert_eq!(f.render("x", "y"), "x^3 + x^2*y^5 + y^12");
    }

    #[test]
    fn shear_moves_the_tangent() {
        let f = Poly::from_terms([((0, 3), g(1)), ((12, 0), g(1))]);
        let s = f.shear(&g(1));
        assert_eq!(s.coeff(3, 0), g(1));
        assert_eq!(s.coeff(0, 3), g(1));
        assert_eq!(s.coeff(1, 2), g(3));
    }

    #[test]
    fn relative_transform_matches_direct_substitution() {
        let f = Poly::from_terms([((3, 0), g(1)), ((0, 12), g(1))]);
        let alpha = PuiseuxSeries::monomial(Coefficient::from_int(1), Exponent::int(6));
        let rows = f.relative_transform(&alpha);
        assert_eq!(rows[0], f.eval_x(&alpha));
        assert_eq!(rows[1], PuiseuxSeries::monomial(Coefficient::from_int(3), Exponent::int(12)));
        assert_eq!(rows[2], PuiseuxSeries::monomial(Coefficient::from_int(3), Exponent::int(6)));
        assert_eq!(rows[3], PuiseuxSeries::constant(Coefficient::from_int(1)));
    }
}
