//! Milnor number from resultants, independent of the Newton–Puiseux machinery.
//!
//! `mu = dim O / (f_x, f_y)` is the intersection multiplicity of the two partials at the
//! origin. For a shear `f_t(x, y) = f(x, y + t x)` the order at `y = 0` of
//! `Res_x(d f_t / dx, d f_t / dy)` is at least `mu`, with equality unless another common zero
//! lies on the line `y = 0`. The minimum over several shears is returned.
//!
//! Resultants are computed modulo primes `p = 1 mod 4`, with `i` mapped to a square root of
//! `-1`, by evaluation at `y = 1, 2, ...` and interpolation. Reduction can only raise the
//! order, so the minimum over the primes is taken.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::number::GaussRat;
use crate::poly::Poly;

const PRIMES: [u64; 3] = [998_244_353, 1_000_000_009, 469_762_049];

struct Field {
    p: u64,
    i: u64,
}

impl Field {
    fn new(p: u64) -> Self {
        let mut f = Field { p, i: 0 };
        let mut c = 2;
        loop {
            let r = f.pow(c, (p - 1) / 4);
            if f.mul(r, r) == p - 1 {
                f.i = r;
                return f;
            }
            c += 1;
        }
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(&self, a: u64) -> Option<u64> {
        (a != 0).then(|| self.pow(a, self.p - 2))
    }

    fn rational(&self, q: &BigRational) -> Option<u64> {
        let p = BigInt::from(self.p);
        let reduce = |x: &BigInt| -> u64 {
            let r = x % &p;
            let r = if r < BigInt::from(0) { r + &p } else { r };
            r.to_u64().expect("reduced residue")
        };
        Some(self.mul(reduce(q.numer()), self.inv(reduce(q.denom()))?))
    }

    fn gauss(&self, c: &GaussRat) -> Option<u64> {
        Some(self.add(self.rational(&c.re)?, self.mul(self.i, self.rational(&c.im)?)))
    }

    fn det(&self, mut m: Vec<Vec<u64>>) -> u64 {
        let n = m.len();
        let mut d = 1;
        for k in 0..n {
            let Some(piv) = (k..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            if piv != k {
                m.swap(piv, k);
                d = self.sub(0, d);
            }
            d = self.mul(d, m[k][k]);
            let inv = self.inv(m[k][k]).expect("nonzero pivot");
            for i in k + 1..n {
                let factor = self.mul(m[i][k], inv);
                if factor == 0 {
                    continue;
                }
                for j in k..n {
                    let t = self.mul(factor, m[k][j]);
                    m[i][j] = self.sub(m[i][j], t);
                }
            }
        }
        d
    }
}

/// Coefficients of `p` reduced mod a prime, indexed `[x-degree][y-degree]`.
fn reduce(f: &Field, p: &Poly) -> Option<Vec<Vec<u64>>> {
    let mut out = vec![vec![0; p.y_degree() as usize + 1]; p.x_degree() as usize + 1];
    for ((i, j), c) in p.terms() {
        out[*i as usize][*j as usize] = f.gauss(c)?;
    }
    Some(out)
}

fn eval_y(f: &Field, rows: &[Vec<u64>], y: u64) -> Vec<u64> {
    rows.iter()
        .map(|row| row.iter().rev().fold(0, |acc, c| f.add(f.mul(acc, y), *c)))
        .collect()
}

fn sylvester(a: &[u64], b: &[u64]) -> Vec<Vec<u64>> {
    let (da, db) = (a.len() - 1, b.len() - 1);
    let n = da + db;
    let mut m = vec![vec![0; n]; n];
    for r in 0..db {
        for (k, c) in a.iter().rev().enumerate() {
            m[r][r + k] = *c;
        }
    }
    for r in 0..da {
        for (k, c) in b.iter().rev().enumerate() {
            m[db + r][r + k] = *c;
        }
    }
    m
}

/// Coefficients of the polynomial through `(x_k, v_k)`, by Newton interpolation.
fn interpolate(f: &Field, xs: &[u64], vs: &[u64]) -> Vec<u64> {
    let n = xs.len();
    let mut dd = vs.to_vec();
    for level in 1..n {
        for k in (level..n).rev() {
            let num = f.sub(dd[k], dd[k - 1]);
            let den = f.inv(f.sub(xs[k], xs[k - level])).expect("distinct nodes");
            dd[k] = f.mul(num, den);
        }
    }
    let mut coeffs = vec![0; n];
    for k in (0..n).rev() {
        // coeffs = coeffs * (y - xs[k]) + dd[k]
        let mut next = vec![0; n];
        for j in 0..n {
            if coeffs[j] == 0 {
                continue;
            }
            if j + 1 < n {
                next[j + 1] = f.add(next[j + 1], coeffs[j]);
            }
            next[j] = f.sub(next[j], f.mul(coeffs[j], xs[k]));
        }
        next[0] = f.add(next[0], dd[k]);
        coeffs = next;
    }
    coeffs
}

/// `ord_y Res_x(a, b)` modulo the prime; `None` when the reduced resultant vanishes or the
/// reduction is undefined.
fn resultant_order(f: &Field, a: &Poly, b: &Poly) -> Option<usize> {
    let ra = reduce(f, a)?;
    let rb = reduce(f, b)?;
    let bound = (a.x_degree() * b.y_degree() + b.x_degree() * a.y_degree()) as usize;
    let xs: Vec<u64> = (1..=bound as u64 + 1).collect();
    let vs: Vec<u64> = xs
        .iter()
        .map(|&y| f.det(sylvester(&eval_y(f, &ra, y), &eval_y(f, &rb, y))))
        .collect();
    interpolate(f, &xs, &vs).iter().position(|c| *c != 0)
}

/// The Milnor number at the origin, or `None` when the singularity is not isolated.
pub fn milnor_oracle(f: &Poly) -> Option<u64> {
    let shears = [
        GaussRat::from_int(1),
        GaussRat::from_ratio(-2, 3),
        GaussRat::new(GaussRat::from_ratio(3, 7).re, GaussRat::from_ratio(1, 2).re),
        GaussRat::from_int(5),
    ];
    let fields: Vec<Field> = PRIMES.iter().map(|&p| Field::new(p)).collect();
    let mut best: Option<u64> = None;
    for t in &shears {
        let g = f.shear(t);
        let (gx, gy) = (g.deriv_x(), g.deriv_y());
        if gx.is_zero() || gy.is_zero() {
            continue;
        }
        for field in &fields {
            if let Some(ord) = resultant_order(field, &gx, &gy) {
                best = Some(best.map_or(ord as u64, |b| b.min(ord as u64)));
            }
        }
    }
    best
}
