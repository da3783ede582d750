//! Gradient degrees, gradient canyons and their numerical data.

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::number::{Coefficient, GaussRat, Root, UniPoly};
use crate::poly::Poly;
use crate::polygon::{sigma_star, DotSet, SigmaStar};
use crate::series::{lcm, Contact, Exponent, Order, PuiseuxSeries};
use crate::solver::{generic_polars, Context, PolarBranch};

/// A germ in coordinates where `f_m(1, 0) != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MiniregularForm {
    /// `f(x, y + t x)`.
    pub f_normalized: Poly,
    /// The shear parameter `t`.
    pub shear: GaussRat,
    /// Matrix `[[a, b], [c, d]]` of the substitution `x -> a x + b y`, `y -> c x + d y`.
    pub change: [[GaussRat; 2]; 2],
    /// Multiplicity `ord f`.
    pub m: u32,
    /// Roots `x_i` of `f_m(x, 1)` with multiplicities.
    pub initial_factors: Vec<Root>,
    /// Number of distinct tangent directions.
    pub r: usize,
}

/// A gradient canyon, represented through its polars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientCanyon {
    /// The terms of a member polar below the degree; the zero series for the degree-1 canyon.
    pub jet: PuiseuxSeries,
    pub degree: Order,
    pub members: Vec<PolarBranch>,
    /// Number of polar parametrizations in the canyon, with multiplicity.
    pub multiplicity: usize,
    /// `ord_y f(gamma(y), y)` along any member.
    pub h: Order,
    /// Leading coefficient of `f(gamma(y), y)` along the first member.
    pub leading_coeff: Option<Coefficient>,
    pub partial_milnor: i64,
    /// Total curvature of the canyon in units of `2 pi`.
    pub curvature_units: i64,
}

impl GradientCanyon {
    pub fn is_enriched(&self) -> bool {
        self.degree == Order::Finite(Exponent::int(1))
    }

    pub fn finite_degree(&self) -> Option<Exponent> {
        self.degree.finite()
    }
}

/// Exponents of the disks cut out by a canyon on the Milnor fibre `f = lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskGeometry {
    pub disk_count: i64,
    pub radius_exponent: Exponent,
    pub separation_exponent: Exponent,
    pub center_truncation_exponent: Exponent,
}

/// Outcome of the structural checks on the canyon decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureReport {
    pub r: usize,
    pub degree_one_polars: usize,
    pub disjoint: bool,
    /// Whether the degree-1 canyon is minimal; `None` when there is no degree-1 canyon.
    pub enr_minimal: Option<bool>,
    pub distinct_roots: usize,
}

/// Per-canyon outcome of the direction test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauCanyonCheck {
    pub degree: Exponent,
    pub multiplicity: usize,
    /// Weight of the generic polars landing in the canyon, one entry per accepted sample.
    pub landed: Vec<usize>,
    /// Contact between generic polars of different samples.
    pub divergence: Exponent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauReport {
    pub samples: Vec<GaussRat>,
    /// Samples along a tangent of `f`, or for which `f_x + tau f_y` was not miniregular.
    pub skipped: Vec<GaussRat>,
    pub canyons: Vec<TauCanyonCheck>,
}

fn trial_shears() -> impl Iterator<Item = i64> {
    (0..).map(|k: i64| if k % 2 == 1 { k / 2 + 1 } else { -(k / 2) })
}

/// Applies the first shear `y -> y + t x` from `0, 1, -1, 2, ...` making `f` miniregular.
pub fn miniregularize(f: &Poly, prec: u32) -> Result<MiniregularForm> {
    if f.is_zero() {
        return Err(Error::EmptyInput);
    }
    if !f.coeff(0, 0).is_zero() {
        return Err(Error::NotVanishingAtOrigin);
    }
    check_reduced(f)?;
    let m = f.order();
    let initial = f.homogeneous_part(m);
    let value_at = |t: &GaussRat| {
        initial
            .iter()
            .enumerate()
            .fold(GaussRat::zero(), |acc, (i, c)| &acc + &(c * &t.pow((m as usize - i) as u64)))
    };
    let t = trial_shears()
        .take(m as usize + 2)
        .map(GaussRat::from_int)
        .find(|t| !value_at(t).is_zero())
        .ok_or(Error::NoValidShear)?;
    let g = f.shear(&t);
    let tangent = UniPoly::from_exact(g.homogeneous_part(m));
    let r = tangent.distinct_root_count()?;
    let initial_factors = tangent.roots(prec)?;
    Ok(MiniregularForm {
        f_normalized: g,
        change: [[GaussRat::one(), GaussRat::zero()], [t.clone(), GaussRat::one()]],
        shear: t,
        m,
        initial_factors,
        r,
    })
}

fn trial_points() -> Vec<GaussRat> {
    (1..=24i64)
        .map(|k| {
            GaussRat::new(
                BigRational::new(BigInt::from(3 * k + 1), BigInt::from(k + 2)),
                BigRational::new(BigInt::from(k - 1), BigInt::from(2 * k + 3)),
            )
        })
        .collect()
}

fn squarefree_specialization(p: &Poly) -> Result<bool> {
    let deg = p.x_degree() as usize;
    if deg <= 1 {
        return Ok(true);
    }
    for y0 in trial_points() {
        let u = p.specialize_y(&y0);
        if u.degree() != deg {
            continue;
        }
        if u.squarefree()?.iter().all(|(_, k)| *k == 1) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Rejects polynomials with a repeated factor. A squarefree specialization in each variable
/// that keeps the full degree certifies that no factor is repeated.
pub fn check_reduced(f: &Poly) -> Result<()> {
    if squarefree_specialization(f)? && squarefree_specialization(&f.swap())? {
        Ok(())
    } else {
        Err(Error::NotReduced)
    }
}

/// The canyon-degree data of `f` along `alpha`; `None` when `alpha` is a multiple root of `f`.
pub fn valley_data(f: &Poly, alpha: &PuiseuxSeries) -> Result<Option<SigmaStar>> {
    let rows = f.relative_transform(alpha);
    match sigma_star(&DotSet::from_rows(rows)) {
        Ok(s) => Ok(Some(s)),
        Err(Error::MultipleRoot) => Ok(None),
        Err(e) => Err(e),
    }
}

/// The valley degree `d_alpha` of an arc.
pub fn valley_degree(form: &MiniregularForm, alpha: &PuiseuxSeries) -> Result<Order> {
    Ok(match valley_data(&form.f_normalized, alpha)? {
        Some(s) => Order::Finite(s.sigma),
        None => Order::Infinite,
    })
}

/// The gradient degree of a polar.
pub fn gradient_degree(form: &MiniregularForm, gamma: &PolarBranch) -> Result<Order> {
    valley_degree(form, gamma.series())
}

/// Whether the contact of `a` and `b` reaches `d`.
pub fn contact_reaches(a: &PuiseuxSeries, b: &PuiseuxSeries, d: Order, prec: u32) -> Result<bool> {
    let c = a.contact(b, prec)?;
    match (c, d) {
        (Contact::Exactly(o), d) => Ok(o >= d),
        (Contact::AtLeast(h), Order::Finite(d)) if h >= d => Ok(true),
        (Contact::AtLeast(h), _) => Err(Error::IndeterminateOrder { needed: h + h }),
    }
}

/// The exact finite part of `s` below exponent `d`.
fn below(s: &PuiseuxSeries, d: Exponent) -> Result<PuiseuxSeries> {
    if let Some(hz) = s.horizon() {
        if hz < d {
            return Err(Error::IndeterminateOrder { needed: d + d });
        }
    }
    Ok(PuiseuxSeries::new(s.terms().iter().filter(|(e, _)| *e < d).cloned(), None))
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn find(&mut self, i: usize) -> usize {
        let p = self.0[i];
        if p == i {
            return i;
        }
        let r = self.find(p);
        self.0[i] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Groups polars into gradient canyons and computes their data, in canonical order.
pub fn group_canyons(form: &MiniregularForm, polars: &[PolarBranch], ctx: &Context) -> Result<Vec<GradientCanyon>> {
    let degrees: Vec<Order> = polars
        .par_iter()
        .map(|p| gradient_degree(form, p))
        .collect::<Result<_>>()?;
    let one = Order::Finite(Exponent::int(1));
    let n = polars.len();
    let mut sets = DisjointSets((0..n).collect());
    for i in 0..n {
        for j in i + 1..n {
            if degrees[i] != degrees[j] {
                continue;
            }
            let joined = degrees[i] == one
                || contact_reaches(polars[i].series(), polars[j].series(), degrees[i], ctx.precision)?;
            if joined {
                sets.union(i, j);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let root = sets.find(i);
        match groups.iter_mut().find(|g| sets.0[g[0]] == root) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    let mut canyons = groups
        .into_par_iter()
        .map(|g| {
            let mut members: Vec<PolarBranch> = g.iter().map(|&i| polars[i].clone()).collect();
            members.sort_by(|a, b| a.series().cmp_canonical(b.series()));
            build_canyon(form, members, degrees[g[0]], ctx)
        })
        .collect::<Result<Vec<_>>>()?;
    canyons.sort_by(|a, b| a.degree.cmp(&b.degree).then_with(|| a.jet.cmp_canonical(&b.jet)));
    Ok(canyons)
}

fn build_canyon(form: &MiniregularForm, members: Vec<PolarBranch>, degree: Order, ctx: &Context) -> Result<GradientCanyon> {
    let jet = match degree {
        Order::Finite(d) if d == Exponent::int(1) => PuiseuxSeries::zero(),
        Order::Finite(d) => below(members[0].series(), d)?,
        Order::Infinite => members[0].series().clone(),
    };
    let multiplicity = members.iter().map(PolarBranch::weight).sum();
    let mut c = GradientCanyon {
        jet,
        degree,
        members,
        multiplicity,
        h: Order::Infinite,
        leading_coeff: None,
        partial_milnor: 0,
        curvature_units: 0,
    };
    if degree.is_infinite() {
        return Ok(c);
    }
    let (a, h) = h_and_leading(form, &c, ctx.precision)?;
    c.h = Order::Finite(h);
    c.leading_coeff = Some(a);
    c.partial_milnor = partial_milnor(&c)?;
    c.curvature_units = curvature_units(&c);
    Ok(c)
}

/// Order and leading coefficient of `f` along the members of a canyon.
///
/// Fails with `InconsistentCanyon` when two members disagree. On the degree-1 canyon only
/// the order is compared, since the leading coefficient there depends on the tangent.
pub fn h_and_leading(form: &MiniregularForm, c: &GradientCanyon, prec: u32) -> Result<(Coefficient, Exponent)> {
    let f = &form.f_normalized;
    let lead = |s: &PuiseuxSeries| -> Result<(Exponent, Coefficient)> {
        match f.eval_x(s).leading()? {
            Some(x) => Ok(x),
            None => Err(Error::InconsistentCanyon("a member polar is a root of f".into())),
        }
    };
    let rep = c.members[0].series();
    let (h, a) = lead(rep)?;
    for m in &c.members[1..] {
        let (h2, a2) = lead(m.series())?;
        if h2 != h {
            return Err(Error::InconsistentCanyon(format!("orders {} and {} along one canyon", h, h2)));
        }
        if c.is_enriched() {
            continue;
        }
        let (_, k, n) = rep.contact_with_index(m.series(), prec)?;
        let j = (k as i64 * (h * Exponent::int(n as i64)).numer()).rem_euclid(n as i64);
        let aligned = a2.mul(&Coefficient::root_of_unity(j, n, prec));
        if !aligned.equals(&a)? {
            return Err(Error::InconsistentCanyon(format!("leading coefficients {} and {} along one canyon", a, aligned)));
        }
    }
    Ok((a, h))
}

/// `sum (ord f(gamma_j) - 1)` over the polar parametrizations of a canyon.
pub fn partial_milnor(c: &GradientCanyon) -> Result<i64> {
    let h = c.h.finite().ok_or_else(|| Error::NonIntegerMilnor("canyon of infinite degree".into()))?;
    let total = Exponent::int(c.multiplicity as i64) * (h - Exponent::int(1));
    if !total.is_integer() {
        return Err(Error::NonIntegerMilnor(format!("{} for the canyon of degree {}", total, c.degree)));
    }
    Ok(total.numer())
}

/// Total curvature in units of `2 pi`; zero outside `1 < d < infinity`.
pub fn curvature_units(c: &GradientCanyon) -> i64 {
    match c.degree {
        Order::Finite(d) if d > Exponent::int(1) => c.partial_milnor + c.multiplicity as i64,
        _ => 0,
    }
}

/// The Milnor number as the sum of the partial Milnor numbers.
pub fn milnor_total(canyons: &[GradientCanyon]) -> Result<i64> {
    if canyons.iter().any(|c| c.degree.is_infinite()) {
        return Err(Error::NotReduced);
    }
    Ok(canyons.iter().map(|c| c.partial_milnor).sum())
}

/// Checks the count of degree-1 polars, the disjointness of the canyons of degree above 1 and
/// the minimality criterion for the degree-1 canyon.
pub fn structure_report(form: &MiniregularForm, canyons: &[GradientCanyon], prec: u32) -> Result<StructureReport> {
    let degree_one_polars: usize = canyons.iter().filter(|c| c.is_enriched()).map(|c| c.multiplicity).sum();
    if degree_one_polars + 1 != form.r {
        return Err(Error::StructureViolation(format!(
            "{} polars of degree 1 for {} tangent directions",
            degree_one_polars, form.r
        )));
    }
    let high: Vec<&GradientCanyon> = canyons
        .iter()
        .filter(|c| c.finite_degree().is_some_and(|d| d > Exponent::int(1)))
        .collect();
    for (i, a) in high.iter().enumerate() {
        for b in &high[i + 1..] {
            let d = a.degree.min(b.degree);
            if contact_reaches(a.members[0].series(), b.members[0].series(), d, prec)? {
                return Err(Error::StructureViolation(format!(
                    "canyons of degrees {} and {} overlap",
                    a.degree, b.degree
                )));
            }
        }
    }
    // A reduced germ of order m has m distinct Newton-Puiseux roots.
    let distinct_roots = form.m as usize;
    let enr_minimal = if degree_one_polars > 0 {
        let by_roots = distinct_roots == form.r;
        let by_canyons = high.is_empty() && !canyons.iter().any(|c| c.degree.is_infinite());
        if by_roots != by_canyons {
            return Err(Error::StructureViolation("minimality of the degree-1 canyon is inconsistent".into()));
        }
        Some(by_roots)
    } else {
        None
    };
    Ok(StructureReport { r: form.r, degree_one_polars, disjoint: true, enr_minimal, distinct_roots })
}

/// The default directions for generic polars.
pub fn default_taus() -> Vec<GaussRat> {
    vec![GaussRat::from_int(1), GaussRat::from_int(-1), GaussRat::from_int(2)]
}

/// Whether the direction `(1, tau)` is tangent to `f`; derivatives along tangents are not generic.
fn on_tangent_cone(form: &MiniregularForm, tau: &GaussRat) -> bool {
    let m = form.m as usize;
    form.f_normalized
        .homogeneous_part(form.m)
        .iter()
        .enumerate()
        .fold(GaussRat::zero(), |acc, (i, c)| &acc + &(c * &tau.pow((m - i) as u64)))
        .is_zero()
}

/// Checks that generic polars of every sampled direction land in the canyons of degree above 1
/// with the canyon's multiplicity, and that different directions diverge exactly at the degree.
pub fn tau_independence_check(
    form: &MiniregularForm,
    canyons: &[GradientCanyon],
    taus: &[GaussRat],
    ctx: &Context,
) -> Result<TauReport> {
    let mut samples = Vec::new();
    let mut skipped = Vec::new();
    let mut families = Vec::new();
    for tau in taus {
        if tau.is_zero() {
            return Err(Error::InvalidInput("direction samples must be nonzero".into()));
        }
        if on_tangent_cone(form, tau) {
            skipped.push(tau.clone());
            continue;
        }
        match generic_polars(&form.f_normalized, tau, ctx) {
            Ok(ps) => {
                samples.push(tau.clone());
                families.push(ps);
            }
            Err(Error::NotMiniregular) => skipped.push(tau.clone()),
            Err(e) => return Err(e),
        }
    }
    if samples.len() < 2 {
        return Err(Error::InvalidInput("fewer than two usable direction samples".into()));
    }
    let mut checks = Vec::new();
    for c in canyons {
        let Some(d) = c.finite_degree().filter(|d| *d > Exponent::int(1)) else {
            continue;
        };
        let rep = c.members[0].series();
        let mut landed = Vec::new();
        let mut landing: Vec<Vec<&PolarBranch>> = Vec::new();
        for fam in &families {
            let mut inside = Vec::new();
            for p in fam {
                if contact_reaches(rep, p.series(), c.degree, ctx.precision)? {
                    inside.push(p);
                }
            }
            landed.push(inside.iter().map(|p| p.weight()).sum());
            landing.push(inside);
        }
        if landed.iter().any(|&w| w != c.multiplicity) {
            return Err(Error::StructureViolation(format!(
                "generic polars in the canyon of degree {} have weights {:?}, expected {}",
                d, landed, c.multiplicity
            )));
        }
        for (i, a) in landing.iter().enumerate() {
            for b in &landing[i + 1..] {
                for pa in a {
                    for pb in b {
                        let contact = pa.series().contact(pb.series(), ctx.precision)?;
                        match contact {
                            Contact::Exactly(Order::Finite(e)) if e == d => {}
                            Contact::AtLeast(h) if h <= d => {
                                return Err(Error::IndeterminateOrder { needed: d + d });
                            }
                            other => {
                                return Err(Error::StructureViolation(format!(
                                    "generic polars of the canyon of degree {} diverge at {:?}",
                                    d, other
                                )));
                            }
                        }
                    }
                }
            }
        }
        checks.push(TauCanyonCheck { degree: d, multiplicity: c.multiplicity, landed, divergence: d });
    }
    Ok(TauReport { samples, skipped, canyons: checks })
}

/// Disk exponents of a canyon of degree `1 < d < infinity`. `m` is the Puiseux multiplicity
/// of a polar truncated at order `d`.
pub fn disk_geometry(c: &GradientCanyon) -> Option<DiskGeometry> {
    let d = c.finite_degree().filter(|d| *d > Exponent::int(1))?;
    let h = c.h.finite()?;
    let m = Exponent::int(lcm(c.jet.puiseux_mult(), d.denom() as u64) as i64);
    let count = m * h;
    Some(DiskGeometry {
        disk_count: count.floor(),
        radius_exponent: d / h,
        separation_exponent: Exponent::int(1) / h,
        center_truncation_exponent: (m * d - Exponent::int(1)) / count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[((u32, u32), i64)]) -> Poly {
        Poly::from_terms(terms.iter().map(|(k, c)| (*k, GaussRat::from_int(*c))))
    }

    fn ctx() -> Context {
        Context::new(256, Exponent::int(24), Exponent::int(200))
    }

    fn canyons_of(f: &Poly) -> (MiniregularForm, Vec<GradientCanyon>) {
        let form = miniregularize(f, 256).unwrap();
        let ps = crate::solver::polars(&form.f_normalized, &ctx()).unwrap();
        let cs = group_canyons(&form, &ps, &ctx()).unwrap();
        (form, cs)
    }

    #[test]
    fn shear_for_a_vertical_tangent() {
        let f = poly(&[((0, 3), 1), ((12, 0), 1)]);
        let form = miniregularize(&f, 256).unwrap();
        assert_eq!(form.shear, GaussRat::one());
        assert_eq!(form.r, 1);
        let q = poly(&[((4, 0), 1), ((2, 2), 1), ((0, 4), 1)]);
        assert_eq!(miniregularize(&q, 256).unwrap().r, 4);
    }

    #[test]
    fn non_reduced_is_rejected() {
        let f = poly(&[((2, 0), 1), ((1, 2), 2), ((0, 4), 1)]);
        assert_eq!(miniregularize(&f, 256), Err(Error::NotReduced));
    }

    #[test]
    fn quasihomogeneous_canyon() {
        let (_, cs) = canyons_of(&poly(&[((3, 0), 1), ((0, 12), 1)]));
        assert_eq!(cs.len(), 1);
        let c = &cs[0];
        assert_eq!(c.degree, Order::Finite(Exponent::new(11, 2)));
        assert_eq!(c.multiplicity, 2);
        assert_eq!(c.h, Order::Finite(Exponent::int(12)));
        assert_eq!(c.partial_milnor, 22);
        assert_eq!(c.curvature_units, 24);
        let disks = disk_geometry(c).unwrap();
        assert_eq!(disks.disk_count, 24);
        assert_eq!(disks.radius_exponent, Exponent::new(11, 24));
        assert_eq!(disks.separation_exponent, Exponent::new(1, 12));
        assert_eq!(disks.center_truncation_exponent, Exponent::new(5, 12));
    }

    #[test]
    fn two_disjoint_canyons() {
        let (form, cs) = canyons_of(&poly(&[((3, 0), 1), ((0, 12), 1), ((2, 5), 1)]));
        assert_eq!(cs.len(), 2);
        for c in &cs {
            assert_eq!(c.degree, Order::Finite(Exponent::int(6)));
            assert_eq!(c.multiplicity, 1);
            assert_eq!(c.partial_milnor, 11);
            assert_eq!(c.curvature_units, 12);
        }
        assert_eq!(milnor_total(&cs).unwrap(), 22);
        let report = structure_report(&form, &cs, 256).unwrap();
        assert_eq!(report.degree_one_polars, 0);
        let tau = tau_independence_check(&form, &cs, &default_taus(), &ctx()).unwrap();
        assert_eq!(tau.canyons.len(), 2);
    }

    #[test]
    fn enriched_canyon() {
        let (form, cs) = canyons_of(&poly(&[((4, 0), 1), ((2, 2), 1), ((0, 4), 1)]));
        assert_eq!(cs.len(), 1);
        assert!(cs[0].is_enriched());
        assert_eq!(cs[0].multiplicity, 3);
        assert_eq!(milnor_total(&cs).unwrap(), 9);
        let report = structure_report(&form, &cs, 256).unwrap();
        assert_eq!(report.enr_minimal, Some(true));
    }

    #[test]
    fn cusp_degree() {
        let (_, cs) = canyons_of(&poly(&[((2, 0), 1), ((0, 3), 1)]));
        assert_eq!(cs[0].degree, Order::Finite(Exponent::int(2)));
        assert_eq!(cs[0].partial_milnor, 2);
    }
}
