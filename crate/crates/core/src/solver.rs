//! Newton–Puiseux expansion of the roots of a bivariate polynomial near the origin, and the
//! polar curves built from it.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::number::{Coefficient, GaussRat, ZeroTest};
use crate::polygon::{check_boundary, edge_polynomial, Dot, NewtonPolygon};
use crate::poly::Poly;
use crate::series::{lcm, ArcBranch, Exponent, PuiseuxSeries};

/// Working parameters shared by every stage of an analysis run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    /// Ball precision in bits.
    pub precision: u32,
    /// Truncation horizon for root expansions.
    pub horizon: Exponent,
    /// Horizon beyond which unresolved clusters are accepted as multiple roots.
    pub horizon_cap: Exponent,
}

impl Context {
    pub fn new(precision: u32, horizon: Exponent, horizon_cap: Exponent) -> Self {
        Context { precision, horizon, horizon_cap }
    }

    pub fn at_cap(&self) -> bool {
        self.horizon >= self.horizon_cap
    }

    fn more_horizon(&self) -> Error {
        Error::IndeterminateOrder { needed: self.horizon + self.horizon }
    }
}

/// One conjugacy class of roots `x = zeta(y)`, reported through a representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootClass {
    /// The representative, exact or truncated at the accuracy to which it is known.
    pub series: PuiseuxSeries,
    /// Multiplicity of each conjugate as a root.
    pub multiplicity: usize,
    /// Number of conjugates.
    pub puiseux_mult: u64,
    /// Whether `series` is an exact root.
    pub exact: bool,
    /// False when roots that agree up to the horizon cap were merged into one class.
    pub separated: bool,
}

impl RootClass {
    /// Number of roots in the class, counted with multiplicity and conjugates.
    pub fn weight(&self) -> usize {
        self.multiplicity * self.puiseux_mult as usize
    }
}

/// All roots through the origin, grouped into conjugacy classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    pub branches: Vec<RootClass>,
    /// Number of roots through the origin, `ord_x p(x, 0)`.
    pub total_degree: usize,
}

/// Which polynomial a polar is a root of.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolarSource {
    Fx,
    Generic(GaussRat),
}

/// A polar curve: a root class of `f_x` or of `f_x + tau f_y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarBranch {
    /// The canonical representative of the conjugate family.
    pub arc: ArcBranch,
    /// Number of conjugate parametrizations.
    pub branch_mult: u64,
    /// Multiplicity as a root.
    pub multiplicity: usize,
    pub exact: bool,
    pub separated: bool,
    pub source: PolarSource,
}

impl PolarBranch {
    fn new(class: RootClass, source: PolarSource) -> Self {
        PolarBranch {
            arc: ArcBranch { series: class.series, conjugate_index: 0 },
            branch_mult: class.puiseux_mult,
            multiplicity: class.multiplicity,
            exact: class.exact,
            separated: class.separated,
            source,
        }
    }

    pub fn series(&self) -> &PuiseuxSeries {
        &self.arc.series
    }

    /// Number of polar parametrizations represented, counted with multiplicity.
    pub fn weight(&self) -> usize {
        self.multiplicity * self.branch_mult as usize
    }
}

struct Cluster {
    base: PuiseuxSeries,
    rows: Vec<PuiseuxSeries>,
    last: Exponent,
    inclusive: bool,
    size: Option<usize>,
    n: u64,
}

struct Expansion<'a> {
    p: &'a Poly,
    ctx: &'a Context,
    out: Vec<RootClass>,
    stop_at_first: bool,
}

/// `ord_x p(x, 0)`, the number of roots through the origin.
pub fn local_degree(p: &Poly) -> Result<usize> {
    (0..=p.x_degree())
        .find(|&i| !p.coeff(i, 0).is_zero())
        .map(|i| i as usize)
        .ok_or(Error::NotMiniregular)
}

/// Newton–Puiseux roots of `p` with positive order, expanded to the context horizon.
pub fn puiseux_roots(p: &Poly, ctx: &Context) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::EmptyInput);
    }
    let size = local_degree(p)?;
    if size == 0 {
        return Ok(RootSet { branches: vec![], total_degree: 0 });
    }
    let rows: Vec<PuiseuxSeries> = (0..=p.x_degree()).map(|i| p.x_row(i).truncate(ctx.horizon)).collect();
    let start = Cluster {
        base: PuiseuxSeries::zero(),
        rows,
        last: Exponent::zero(),
        inclusive: false,
        size: Some(size),
        n: 1,
    };
    let mut ex = Expansion { p, ctx, out: vec![], stop_at_first: false };
    ex.run(start)?;
    let mut classes = ex.out;
    classes.sort_by(|a, b| a.series.cmp_canonical(&b.series));
    let total: usize = classes.iter().map(RootClass::weight).sum();
    if total != size {
        return Err(Error::StructureViolation(format!(
            "root count {} differs from the local degree {}",
            total, size
        )));
    }
    Ok(RootSet { branches: classes, total_degree: size })
}

/// The polars of `f`: the roots of `f_x` through the origin.
pub fn polars(f: &Poly, ctx: &Context) -> Result<Vec<PolarBranch>> {
    let roots = puiseux_roots(&f.deriv_x(), ctx)?;
    Ok(roots.branches.into_iter().map(|c| PolarBranch::new(c, PolarSource::Fx)).collect())
}

/// `f_x + tau f_y`, the polynomial whose roots are the generic polars of direction `tau`.
pub fn generic_polar_equation(f: &Poly, tau: &GaussRat) -> Poly {
    f.deriv_x().add(&f.deriv_y().scale(tau))
}

/// Generic polars of direction `tau`. Fails with `NotMiniregular` when `tau` is special, i.e.
/// when `f_x + tau f_y` has fewer than `m - 1` roots through the origin.
pub fn generic_polars(f: &Poly, tau: &GaussRat, ctx: &Context) -> Result<Vec<PolarBranch>> {
    let p = generic_polar_equation(f, tau);
    let m = f.order() as usize;
    if local_degree(&p)? != m.saturating_sub(1) {
        return Err(Error::NotMiniregular);
    }
    let roots = puiseux_roots(&p, ctx)?;
    Ok(roots
        .branches
        .into_iter()
        .map(|c| PolarBranch::new(c, PolarSource::Generic(tau.clone())))
        .collect())
}

/// A polar `gamma` with contact at least `d` with the arc `alpha`, found by continuing the
/// Newton–Puiseux expansion of `f_x` along `alpha` from exponent `d` on. Among several
/// candidates the first in canonical order is returned.
pub fn push_forward_polar(f: &Poly, alpha: &PuiseuxSeries, d: Exponent, ctx: &Context) -> Result<PolarBranch> {
    let fx = f.deriv_x();
    let rows = fx.relative_transform(alpha);
    let start = Cluster {
        base: alpha.clone(),
        n: alpha.puiseux_mult(),
        rows,
        last: d,
        inclusive: true,
        size: None,
    };
    let mut ex = Expansion { p: &fx, ctx, out: vec![], stop_at_first: true };
    ex.run(start)?;
    let class = ex.out.into_iter().next().ok_or_else(|| {
        Error::StructureViolation("no polar found along the arc".into())
    })?;
    Ok(PolarBranch::new(class, PolarSource::Fx))
}

impl Expansion<'_> {
    fn run(&mut self, start: Cluster) -> Result<()> {
        let mut stack = vec![start];
        while let Some(cl) = stack.pop() {
            let children = self.step(cl)?;
            if self.stop_at_first && !self.out.is_empty() {
                return Ok(());
            }
            stack.extend(children.into_iter().rev());
        }
        Ok(())
    }

    fn step(&mut self, cl: Cluster) -> Result<Vec<Cluster>> {
        let h = self.ctx.horizon;
        let i_min = first_visible_row(&cl.rows)?;
        if i_min == Some(0) {
            return self.expand_edges(&cl, 0, None);
        }
        if let Some((mu, exact_rows)) = exact_root(self.p, &cl.base, h) {
            self.out.push(RootClass {
                series: cl.base.clone(),
                multiplicity: mu,
                puiseux_mult: cl.n,
                exact: true,
                separated: true,
            });
            if cl.size == Some(mu) || exact_rows.len() <= mu + 1 && cl.size.is_none() {
                return Ok(vec![]);
            }
            let rows: Vec<PuiseuxSeries> = exact_rows[mu..]
                .iter()
                .enumerate()
                .map(|(i, r)| r.truncate(h - cl.last * Exponent::int(i as i64)))
                .collect();
            let rest = Cluster { rows, size: cl.size.map(|s| s - mu), ..cl };
            return Ok(vec![rest]);
        }
        let Some(i_min) = i_min else {
            return Err(self.ctx.more_horizon());
        };
        let q = cl.rows[i_min].ord()?.finite().expect("visible row");
        let h0 = cl.rows[0].horizon().ok_or_else(|| self.ctx.more_horizon())?;
        let kappa = (h0 - q) / Exponent::int(i_min as i64);
        if kappa <= cl.last {
            return Err(self.ctx.more_horizon());
        }
        if i_min > 1 && !self.ctx.at_cap() {
            return Err(self.ctx.more_horizon());
        }
        self.out.push(RootClass {
            series: cl.base.truncate(kappa),
            multiplicity: i_min,
            puiseux_mult: cl.n,
            exact: false,
            separated: i_min == 1,
        });
        if self.stop_at_first {
            return Ok(vec![]);
        }
        self.expand_edges(&cl, i_min, Some(kappa))
    }

    fn expand_edges(&mut self, cl: &Cluster, start: usize, kappa: Option<Exponent>) -> Result<Vec<Cluster>> {
        let h = self.ctx.horizon;
        let prec = self.ctx.precision;
        let mut dots: Vec<Dot> = Vec::new();
        for (i, row) in cl.rows.iter().enumerate().skip(start) {
            for (q, c) in row.terms() {
                dots.push(Dot { i: i as u32, q: *q, coeff: c.clone() });
            }
        }
        let poly = NewtonPolygon::from_dots(&dots);
        check_boundary(&dots, &poly)?;
        let relevant: Vec<_> = poly
            .edges()
            .into_iter()
            .filter(|e| if cl.inclusive { e.coslope() >= cl.last } else { e.coslope() > cl.last })
            .collect();
        let count = start + relevant.iter().map(|e| e.length() as usize).sum::<usize>();
        if let Some(size) = cl.size {
            if count != size {
                return Err(self.ctx.more_horizon());
            }
        }
        if let Some(k) = kappa {
            if relevant.iter().any(|e| e.coslope() >= k) {
                return Err(self.ctx.more_horizon());
            }
        }
        let mut children = Vec::new();
        for edge in relevant {
            let s = edge.coslope();
            let phi = edge_polynomial(&dots, &edge)?;
            let roots = phi.roots(prec)?;
            let n_new = lcm(cl.n, s.denom() as u64);
            let r = n_new / cl.n;
            for (rep, mult) in conjugate_orbits(&roots, r)? {
                let rows = shift_rows(&cl.rows, &rep, s, h);
                let base = cl.base.add(&PuiseuxSeries::monomial(rep, s));
                children.push(Cluster { base, rows, last: s, inclusive: false, size: Some(mult), n: n_new });
            }
        }
        Ok(children)
    }
}

/// Index of the first row with a known nonzero term.
fn first_visible_row(rows: &[PuiseuxSeries]) -> Result<Option<usize>> {
    for (i, row) in rows.iter().enumerate() {
        if let Some((_, c)) = row.terms().first() {
            return match c.zero_test() {
                ZeroTest::NonZero => Ok(Some(i)),
                _ => Err(Error::PrecisionExhausted),
            };
        }
    }
    Ok(None)
}

/// Whether `base` is an exact root of `p`; returns its multiplicity and the exact rows of the
/// relative transform. Skipped when the substitution would be too large to expand exactly.
fn exact_root(p: &Poly, base: &PuiseuxSeries, h: Exponent) -> Option<(usize, Vec<PuiseuxSeries>)> {
    if !base.is_exact() || !base.has_exact_coefficients() {
        return None;
    }
    let top = base.terms().last().map(|(e, _)| *e).unwrap_or_else(Exponent::zero);
    let emax = p
        .terms()
        .map(|((i, j), _)| Exponent::int(*j as i64) + top * Exponent::int(*i as i64))
        .max()
        .unwrap_or_else(Exponent::zero);
    if emax > h * Exponent::int(8) {
        return None;
    }
    if !p.eval_x(base).is_exact_zero() {
        return None;
    }
    let rows = p.relative_transform(base);
    let mu = rows.iter().position(|r| !r.is_exact_zero())?;
    Some((mu, rows))
}

/// Groups the roots of an edge polynomial into orbits under `c -> theta_r c`; returns one
/// canonical representative (least in `(re, im)` order) per orbit with its multiplicity.
fn conjugate_orbits(roots: &[crate::number::Root], r: u64) -> Result<Vec<(Coefficient, usize)>> {
    let powers: Vec<Coefficient> = roots.iter().map(|x| x.value.pow(r)).collect();
    let mut assigned = vec![false; roots.len()];
    let mut out = Vec::new();
    for i in 0..roots.len() {
        if assigned[i] {
            continue;
        }
        let mut members = vec![i];
        assigned[i] = true;
        for j in i + 1..roots.len() {
            if !assigned[j] && powers[i].equals(&powers[j])? {
                assigned[j] = true;
                members.push(j);
            }
        }
        if members.len() as u64 != r || members.iter().any(|&k| roots[k].multiplicity != roots[i].multiplicity) {
            return Err(Error::PrecisionExhausted);
        }
        let rep = members
            .iter()
            .map(|&k| &roots[k].value)
            .min_by(|a, b| a.cmp_lex(b))
            .expect("nonempty orbit")
            .clone();
        out.push((rep, roots[i].multiplicity));
    }
    out.sort_by(|a, b| a.0.cmp_lex(&b.0).then(Ordering::Equal));
    Ok(out)
}

/// Rows of `F(Z + c W^s, W)`, each truncated at `h - i s`.
fn shift_rows(rows: &[PuiseuxSeries], c: &Coefficient, s: Exponent, h: Exponent) -> Vec<PuiseuxSeries> {
    let deg = rows.len().saturating_sub(1);
    let mut cpow = vec![Coefficient::one()];
    for k in 1..=deg {
        cpow.push(cpow[k - 1].mul(c));
    }
    let mut out: Vec<PuiseuxSeries> = (0..=deg)
        .map(|i| {
            let limit = h - s * Exponent::int(i as i64);
            let mut acc = PuiseuxSeries::truncated_zero(limit);
            for (j, row) in rows.iter().enumerate().skip(i) {
                if row.is_exact_zero() {
                    continue;
                }
                let k = (j - i) as i64;
                let shift = s * Exponent::int(k);
                let b = Coefficient::Exact(GaussRat::binomial(j as u64, i as u64));
                let term = row.truncate(limit - shift).scale(&cpow[j - i].mul(&b)).shift(shift);
                acc = acc.add(&term);
            }
            acc
        })
        .collect();
    while out.len() > 1 && out.last().is_some_and(|r| r.terms().is_empty()) {
        out.pop();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Context {
        Context::new(256, Exponent::int(16), Exponent::int(200))
    }

    fn poly(terms: &[((u32, u32), i64)]) -> Poly {
        Poly::from_terms(terms.iter().map(|(k, c)| (*k, GaussRat::from_int(*c))))
    }

    #[test]
    fn cusp_has_one_class_of_two_conjugates() {
        let p = poly(&[((2, 0), 1), ((0, 3), -1)]);
        let roots = puiseux_roots(&p, &ctx()).unwrap();
        assert_eq!(roots.branches.len(), 1);
        let c = &roots.branches[0];
        assert_eq!(c.puiseux_mult, 2);
        assert_eq!(c.multiplicity, 1);
        assert!(c.exact);
        assert_eq!(c.series.terms()[0].0, Exponent::new(3, 2));
    }

    #[test]
    fn polars_of_example_two() {
        let g = poly(&[((3, 0), 1), ((0, 12), 1), ((2, 5), 1)]);
        let ps = polars(&g, &ctx()).unwrap();
        assert_eq!(ps.len(), 2);
        assert!(ps[0].series().is_exact_zero());
        let second = PuiseuxSeries::monomial(Coefficient::Exact(GaussRat::from_ratio(-2, 3)), Exponent::int(5));
        assert_eq!(ps[1].series(), &second);
    }

    #[test]
    fn double_polar() {
        let f = poly(&[((3, 0), 1), ((0, 12), 1)]);
        let ps = polars(&f, &ctx()).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].multiplicity, 2);
    }

    #[test]
    fn irrational_polars_are_certified() {
        let f = poly(&[((4, 0), 1), ((2, 2), 1), ((0, 4), 1)]);
        let ps = polars(&f, &ctx()).unwrap();
        assert_eq!(ps.len(), 3);
        let weights: usize = ps.iter().map(|p| p.weight()).sum();
        assert_eq!(weights, 3);
        for p in &ps[1..] {
            let (re, im) = p.series().terms()[0].1.to_f64_pair();
            assert!(re.abs() < 1e-20 && (im.abs() - 0.5f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn generic_polar_of_a_quasihomogeneous_germ() {
        let f = poly(&[((3, 0), 1), ((0, 12), 1)]);
        let ps = generic_polars(&f, &GaussRat::one(), &ctx()).unwrap();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].branch_mult, 2);
        let (e, c) = ps[0].series().terms()[0].clone();
        assert_eq!(e, Exponent::new(11, 2));
        assert_eq!(c.pow(2), Coefficient::from_int(-4));
    }

    #[test]
    fn push_forward_reaches_the_polar() {
        let f = poly(&[((3, 0), 1), ((0, 12), 1)]);
        let alpha = PuiseuxSeries::monomial(Coefficient::one(), Exponent::int(6));
        let gamma = push_forward_polar(&f, &alpha, Exponent::new(11, 2), &ctx()).unwrap();
        assert!(gamma.series().is_exact_zero());
    }
}
