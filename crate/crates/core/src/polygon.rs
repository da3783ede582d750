//! Newton polygons of relative transforms and the canyon-degree construction.
//!
//! A relative transform `F(Z, W) = sum_i Z^i F_i(W)` is stored as its rows `F_i`. Each term
//! `c W^q` of `F_i` is a Newton dot `(i, q)`.

use crate::error::{Error, Result};
use crate::number::{Coefficient, UniPoly, ZeroTest};
use crate::series::{Exponent, Order, PuiseuxSeries};

/// A Newton dot with its coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dot {
    pub i: u32,
    pub q: Exponent,
    pub coeff: Coefficient,
}

/// The rows of a relative transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DotSet {
    rows: Vec<PuiseuxSeries>,
}

impl DotSet {
    pub fn from_rows(rows: Vec<PuiseuxSeries>) -> Self {
        DotSet { rows }
    }

    /// Builds an exact dot set from explicit dots.
    pub fn from_dots(dots: impl IntoIterator<Item = (u32, Exponent, Coefficient)>) -> Self {
        let mut rows: Vec<Vec<(Exponent, Coefficient)>> = Vec::new();
        for (i, q, c) in dots {
            if rows.len() <= i as usize {
                rows.resize(i as usize + 1, Vec::new());
            }
            rows[i as usize].push((q, c));
        }
        DotSet { rows: rows.into_iter().map(|r| PuiseuxSeries::new(r, None)).collect() }
    }

    pub fn rows(&self) -> &[PuiseuxSeries] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> PuiseuxSeries {
        self.rows.get(i).cloned().unwrap_or_else(PuiseuxSeries::zero)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Every stored dot whose coefficient is not certainly zero.
    pub fn dots(&self) -> Vec<Dot> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            for (q, c) in row.terms() {
                out.push(Dot { i: i as u32, q: *q, coeff: c.clone() });
            }
        }
        out
    }

    /// Dots of `F_W = dF/dW`.
    pub fn w_derivative_dots(&self) -> Vec<(u32, Exponent)> {
        self.dots()
            .into_iter()
            .filter(|d| d.q > Exponent::zero())
            .map(|d| (d.i, d.q - Exponent::int(1)))
            .collect()
    }
}

/// An edge between two consecutive vertices, left to right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub left: (u32, Exponent),
    pub right: (u32, Exponent),
}

impl Edge {
    /// `(q_left - q_right) / (i_right - i_left)`.
    pub fn coslope(&self) -> Exponent {
        (self.left.1 - self.right.1) / Exponent::int((self.right.0 - self.left.0) as i64)
    }

    pub fn contains(&self, i: u32, q: Exponent) -> bool {
        i >= self.left.0 && i <= self.right.0 && q == self.height_at(i)
    }

    pub fn height_at(&self, i: u32) -> Exponent {
        self.left.1 - self.coslope() * Exponent::int((i - self.left.0) as i64)
    }

    pub fn length(&self) -> u32 {
        self.right.0 - self.left.0
    }
}

/// The lower-left boundary of the convex hull of a dot set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(u32, Exponent)>,
}

impl NewtonPolygon {
    /// Computes the polygon from points; it runs from the leftmost column down to the first
    /// point of least height.
    pub fn from_points(points: impl IntoIterator<Item = (u32, Exponent)>) -> Self {
        let mut lowest: std::collections::BTreeMap<u32, Exponent> = std::collections::BTreeMap::new();
        for (i, q) in points {
            lowest.entry(i).and_modify(|x| *x = (*x).min(q)).or_insert(q);
        }
        let Some(qmin) = lowest.values().copied().min() else {
            return NewtonPolygon { vertices: vec![] };
        };
        let mut hull: Vec<(u32, Exponent)> = Vec::new();
        for (i, q) in lowest {
            while hull.len() >= 2 {
                let (i1, q1) = hull[hull.len() - 2];
                let (i2, q2) = hull[hull.len() - 1];
                // Pop the middle point unless it lies strictly below the chord.
                let lhs = (q2 - q1) * Exponent::int(i as i64 - i1 as i64);
                let rhs = (q - q1) * Exponent::int(i2 as i64 - i1 as i64);
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push((i, q));
            if q == qmin {
                break;
            }
        }
        NewtonPolygon { vertices: hull }
    }

    pub fn from_dots(dots: &[Dot]) -> Self {
        NewtonPolygon::from_points(dots.iter().map(|d| (d.i, d.q)))
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.vertices.windows(2).map(|w| Edge { left: w[0], right: w[1] }).collect()
    }

    pub fn top_edge(&self) -> Option<Edge> {
        self.edges().into_iter().next()
    }

    /// Height of the polygon above column `i`, if `i` is within its range.
    pub fn height_at(&self, i: u32) -> Option<Exponent> {
        for e in self.edges() {
            if i >= e.left.0 && i <= e.right.0 {
                return Some(e.height_at(i));
            }
        }
        match self.vertices.as_slice() {
            [(vi, q)] if *vi == i => Some(*q),
            _ => None,
        }
    }
}

/// `phi(c) = sum a_i c^(i - i_left)` over the dots on `edge`.
pub fn edge_polynomial(dots: &[Dot], edge: &Edge) -> Result<UniPoly> {
    let mut coeffs = vec![Coefficient::zero(); edge.length() as usize + 1];
    for d in dots {
        if edge.contains(d.i, d.q) {
            let k = (d.i - edge.left.0) as usize;
            coeffs[k] = coeffs[k].add(&d.coeff);
        }
    }
    for end in [0, edge.length() as usize] {
        if coeffs[end].zero_test() != ZeroTest::NonZero {
            return Err(Error::PrecisionExhausted);
        }
    }
    UniPoly::new(coeffs)
}

/// The data of the canyon-degree construction along an arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaStar {
    /// The canyon degree `sigma*`.
    pub sigma: Exponent,
    /// `h = ord F(0, W)` (the virtual top height when the arc is a root).
    pub h: Exponent,
    /// `min(ord F_Z(0, W), h - 1)`.
    pub h_alpha: Exponent,
    /// The lowest dot on the line of co-slope `sigma` through `(0, h_alpha)`.
    pub witness: (u32, Exponent),
    /// Co-slope of the top edge.
    pub top_coslope: Exponent,
    /// Width of the top edge: the number of roots of `F` of greatest order.
    pub top_length: u32,
    /// Whether the top vertex is virtual.
    pub virtual_top: bool,
}

impl SigmaStar {
    /// Whether `(1, h_alpha)` lies on the top edge.
    pub fn on_top_edge(&self) -> bool {
        self.h_alpha == self.h - self.top_coslope
    }
}

fn first_dot(row: &PuiseuxSeries) -> Result<Option<Exponent>> {
    match row.terms().first() {
        Some((q, c)) => match c.zero_test() {
            ZeroTest::NonZero => Ok(Some(*q)),
            _ => Err(Error::PrecisionExhausted),
        },
        None => Ok(None),
    }
}

/// Horizon of a row, `None` when the row is exact.
fn row_horizon(row: &PuiseuxSeries) -> Option<Exponent> {
    row.horizon()
}

/// The canyon degree of a relative transform.
pub fn sigma_star(dots: &DotSet) -> Result<SigmaStar> {
    let rows = dots.rows();
    if rows.len() < 3 {
        return Err(Error::InvalidInput("the relative transform has no dot with i >= 2".into()));
    }
    let f0 = &rows[0];
    let f1 = &rows[1];
    let visible = dots.dots();
    let (h, top_coslope, top_length, virtual_top) = match f0.ord() {
        Ok(Order::Finite(h)) => {
            let poly = NewtonPolygon::from_points(visible.iter().map(|d| (d.i, d.q)));
            let top = poly.top_edge().ok_or_else(|| Error::InvalidInput("degenerate polygon".into()))?;
            check_hidden_above(rows, |i| top.left.1 - top.coslope() * Exponent::int(i as i64))?;
            check_boundary(&visible, &poly)?;
            (h, top.coslope(), top.length(), false)
        }
        Ok(Order::Infinite) => {
            if f1.ord()?.is_infinite() {
                return Err(Error::MultipleRoot);
            }
            let poly = NewtonPolygon::from_points(visible.iter().filter(|d| d.i >= 1).map(|d| (d.i, d.q)));
            let top = poly.top_edge().ok_or_else(|| Error::InvalidInput("degenerate polygon".into()))?;
            check_hidden_above(rows, |i| top.left.1 - top.coslope() * Exponent::int(i as i64 - 1))?;
            check_boundary(&visible, &poly)?;
            let theta = top.coslope();
            (top.left.1 + theta, theta, top.right.0, true)
        }
        Err(e) => return Err(e),
    };
    let one = Exponent::int(1);
    let h_alpha = match first_dot(f1)? {
        Some(q) => q.min(h - one),
        None => match row_horizon(f1) {
            None => h - one,
            Some(hz) if hz >= h - one => h - one,
            Some(hz) => return Err(Error::IndeterminateOrder { needed: hz + hz }),
        },
    };
    let mut best: Option<(Exponent, u32, Exponent, bool)> = None;
    for d in visible.iter().filter(|d| d.i >= 2) {
        let v = (h_alpha - d.q) / Exponent::int(d.i as i64 - 1);
        let ambiguous = d.coeff.zero_test() != ZeroTest::NonZero;
        let better = match &best {
            None => true,
            Some((b, bi, _, _)) => v > *b || (v == *b && d.i > *bi),
        };
        if better {
            best = Some((v, d.i, d.q, ambiguous));
        }
    }
    let (sigma, wi, wq, ambiguous) = best.ok_or_else(|| Error::InvalidInput("no dot with i >= 2".into()))?;
    if ambiguous {
        return Err(Error::PrecisionExhausted);
    }
    // Terms beyond a row's horizon must not reach the line L.
    for (i, row) in rows.iter().enumerate().skip(2) {
        if let Some(hz) = row_horizon(row) {
            let v = (h_alpha - hz) / Exponent::int(i as i64 - 1);
            if v >= sigma {
                return Err(Error::IndeterminateOrder { needed: hz + hz });
            }
        }
    }
    // Every dot of F_W lies on or above the line through (0, h_alpha) with co-slope sigma.
    for (i, q) in dots.w_derivative_dots() {
        if i >= 1 && q < h_alpha - sigma * Exponent::int(i as i64) {
            return Err(Error::StructureViolation(format!(
                "dot ({}, {}) of the W-derivative lies below the canyon line",
                i, q
            )));
        }
    }
    Ok(SigmaStar { sigma, h, h_alpha, witness: (wi, wq), top_coslope, top_length, virtual_top })
}

/// Fails when a row's horizon is below the given boundary line, i.e. when unknown terms could
/// still lower the polygon.
fn check_hidden_above(rows: &[PuiseuxSeries], line: impl Fn(u32) -> Exponent) -> Result<()> {
    for (i, row) in rows.iter().enumerate() {
        if let Some(hz) = row.horizon() {
            if hz <= line(i as u32) {
                return Err(Error::IndeterminateOrder { needed: hz + hz });
            }
        }
    }
    Ok(())
}

/// Fails when an ambiguous coefficient sits on the polygon boundary.
pub fn check_boundary(dots: &[Dot], poly: &NewtonPolygon) -> Result<()> {
    for d in dots {
        if d.coeff.zero_test() != ZeroTest::NonZero {
            if let Some(hq) = poly.height_at(d.i) {
                if d.q <= hq {
                    return Err(Error::PrecisionExhausted);
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: i64) -> Exponent {
        Exponent::int(n)
    }

    fn dots(list: &[(u32, i64, i64)]) -> DotSet {
        DotSet::from_dots(list.iter().map(|&(i, q, c)| (i, e(q), Coefficient::from_int(c))))
    }

    #[test]
    fn polygon_of_quartic_example() {
        let f = dots(&[(4, 0, 1), (3, 27, 1), (2, 63, 1), (0, 100, -1)]);
        let poly = NewtonPolygon::from_dots(&f.dots());
        assert_eq!(poly.vertices, vec![(0, e(100)), (4, e(0))]);
        assert_eq!(poly.top_edge().unwrap().coslope(), e(25));
    }

    #[test]
    fn sigma_star_of_quartic_example() {
        let f = dots(&[(4, 0, 1), (3, 27, 1), (2, 63, 1), (0, 100, -1)]);
        let s = sigma_star(&f).unwrap();
        assert_eq!(s.h, e(100));
        assert_eq!(s.h_alpha, e(99));
        assert_eq!(s.sigma, e(36));
        assert_eq!(s.witness, (3, e(27)));
        assert!(!s.on_top_edge());
    }

    #[test]
    fn virtual_top_vertex() {
        // F = Z^2 + Z W^3: the arc is a simple root, top edge from (1, 3) to (2, 0).
        let f = dots(&[(2, 0, 1), (1, 3, 1)]);
        let s = sigma_star(&f).unwrap();
        assert!(s.virtual_top);
        assert_eq!(s.h, e(6));
        assert_eq!(s.h_alpha, e(3));
        assert_eq!(s.sigma, e(3));
        assert!(s.on_top_edge());
    }

    #[test]
    fn multiple_root_is_reported() {
        let f = dots(&[(2, 0, 1)]);
        assert_eq!(sigma_star(&f), Err(Error::MultipleRoot));
    }

    #[test]
    fn edge_polynomial_collects_edge_dots() {
        let f = dots(&[(0, 2, 2), (2, 0, 4), (1, 5, 7)]);
        let poly = NewtonPolygon::from_dots(&f.dots());
        let edge = poly.top_edge().unwrap();
        assert_eq!(edge.coslope(), e(1));
        let phi = edge_polynomial(&f.dots(), &edge).unwrap();
        assert_eq!(phi.coeffs, vec![Coefficient::from_int(2), Coefficient::zero(), Coefficient::from_int(4)]);
    }
}
