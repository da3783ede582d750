use proptest::prelude::*;

use canyons::analysis::{analyze, escalate, signature_of, Settings};
use canyons::canyon::{check_reduced, valley_data, valley_degree};
use canyons::number::{Coefficient, GaussRat, ZeroTest};
use canyons::poly::Poly;
use canyons::polygon::NewtonPolygon;
use canyons::series::{Contact, Exponent, Order, PuiseuxSeries};
use canyons::solver::{local_degree, push_forward_polar, puiseux_roots};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, failure_persistence: None, ..ProptestConfig::default() }
}

fn gauss(re: i64, im: i64) -> GaussRat {
    &GaussRat::from_int(re) + &(&GaussRat::from_int(im) * &GaussRat::i())
}

fn coeff() -> impl Strategy<Value = Coefficient> {
    (-3i64..=3, -2i64..=2)
        .prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0)
        .prop_map(|(a, b)| Coefficient::from(gauss(a, b)))
}

/// Exact series of order at least 1 with Puiseux multiplicity dividing 4, so that every
/// conjugate stays in Q(i).
fn series_with(n: i64) -> impl Strategy<Value = PuiseuxSeries> {
    prop::collection::btree_map(n..=6 * n, coeff(), 1..5)
        .prop_map(move |m| PuiseuxSeries::new(m.into_iter().map(|(k, c)| (Exponent::new(k, n), c)), None))
}

fn series() -> impl Strategy<Value = PuiseuxSeries> {
    prop_oneof![Just(1i64), Just(2i64), Just(4i64)].prop_flat_map(series_with)
}

fn exponent() -> impl Strategy<Value = Exponent> {
    (1i64..=24, 1i64..=4).prop_map(|(a, b)| Exponent::new(a, b))
}

/// Reduced germs of order at least 2: pure powers of both variables plus mixed terms.
fn germ() -> impl Strategy<Value = Poly> {
    (
        2u32..=5,
        2u32..=9,
        prop::collection::vec(((1u32..=4, 1u32..=6), -2i64..=2), 0..3),
        prop::sample::select(vec![1i64, -1, 2, 3]),
    )
        .prop_map(|(a, b, mixed, c)| {
            let mut terms = vec![((a, 0), GaussRat::one()), ((0, b), GaussRat::from_int(c))];
            terms.extend(mixed.into_iter().filter(|(_, k)| *k != 0).map(|(e, k)| (e, GaussRat::from_int(k))));
            Poly::from_terms(terms)
        })
        .prop_filter("reduced of order >= 2", |f| f.order() >= 2 && check_reduced(f).is_ok())
}

fn contact(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Order {
    match a.contact(b, 256).unwrap() {
        Contact::Exactly(o) => o,
        Contact::AtLeast(h) => panic!("undecided contact at {}", h),
    }
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn jet_remainder_lies_above(s in series(), e in exponent()) {
        let j = s.jet(e).unwrap();
        let rest = s.sub(&j);
        match rest.ord().unwrap() {
            Order::Infinite => prop_assert_eq!(s.terms(), j.terms()),
            Order::Finite(o) => prop_assert!(o > e),
        }
    }

    #[test]
    fn conjugation_is_a_group_action(s in series_with(4), k in 0u64..4, l in 0u64..4) {
        let twice = s.conjugate(k, 4, 256).conjugate(l, 4, 256);
        prop_assert_eq!(twice, s.conjugate((k + l) % 4, 4, 256));
        prop_assert_eq!(s.conjugate(0, 4, 256), s);
    }

    #[test]
    fn contact_is_symmetric_and_ultrametric(a in series(), b in series(), c in series()) {
        let (ab, ba) = (contact(&a, &b), contact(&b, &a));
        prop_assert_eq!(ab, ba);
        let (bc, ac) = (contact(&b, &c), contact(&a, &c));
        prop_assert!(ac >= ab.min(bc));
    }

    #[test]
    fn truncation_never_changes_reported_terms(a in series(), b in series(), h1 in 2i64..8, extra in 1i64..6) {
        let h2 = h1 + extra;
        let low = a.truncate(Exponent::int(h1)).mul(&b.truncate(Exponent::int(h1)));
        let high = a.truncate(Exponent::int(h2)).mul(&b.truncate(Exponent::int(h2)));
        let bound = low.horizon().expect("truncated product");
        prop_assert!(high.horizon().is_none_or(|h| h >= bound));
        let below = |s: &PuiseuxSeries| s.terms().iter().filter(|(e, _)| *e < bound).cloned().collect::<Vec<_>>();
        prop_assert_eq!(below(&low), below(&high));
    }

    #[test]
    fn newton_polygon_is_lower_convex(points in prop::collection::vec((0u32..8, 0i64..30), 1..12)) {
        let pts: Vec<(u32, Exponent)> = points.iter().map(|(i, q)| (*i, Exponent::int(*q))).collect();
        let poly = NewtonPolygon::from_points(pts.clone());
        // Vertices run from the top (leftmost column) down to the lowest dot.
        for w in poly.vertices.windows(2) {
            prop_assert!(w[0].0 < w[1].0 && w[0].1 > w[1].1);
        }
        let edges = poly.edges();
        for w in edges.windows(2) {
            prop_assert!(w[0].coslope() > w[1].coslope());
        }
        let lowest = pts.iter().map(|p| p.1).min().unwrap();
        prop_assert_eq!(poly.vertices.last().unwrap().1, lowest);
        for (i, q) in &pts {
            if let Some(h) = poly.height_at(*i) {
                prop_assert!(*q >= h);
            }
        }
    }
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn roots_satisfy_the_equation_and_account_for_the_local_degree(f in germ()) {
        let settings = Settings::default();
        let fx = f.deriv_x();
        let Ok(deg) = local_degree(&fx) else { return Ok(()) };
        let (roots, _) = escalate(&fx, &settings, |ctx| puiseux_roots(&fx, ctx)).unwrap();
        prop_assert_eq!(roots.branches.iter().map(|r| r.weight()).sum::<usize>(), deg);
        prop_assert_eq!(roots.total_degree, deg);
        for r in &roots.branches {
            let residual = fx.eval_x(&r.series);
            for (e, c) in residual.terms() {
                prop_assert!(c.zero_test() != ZeroTest::NonZero, "residual term at {}", e);
            }
        }
    }

    #[test]
    fn canyons_partition_the_polars(f in germ()) {
        let a = analyze(&f, &Settings::default()).unwrap();
        let total: usize = a.polars.iter().map(|p| p.weight()).sum();
        prop_assert_eq!(total as u32, a.form.m - 1);
        prop_assert_eq!(a.canyons.iter().map(|c| c.multiplicity).sum::<usize>(), total);
        for p in &a.polars {
            prop_assert_eq!(a.canyons.iter().filter(|c| c.members.contains(p)).count(), 1);
        }
        for c in &a.canyons {
            prop_assert_eq!(c.members.iter().map(|p| p.weight()).sum::<usize>(), c.multiplicity);
        }
        // Canyons of one degree above 1 are disjoint: members of different canyons meet below it.
        for (i, x) in a.canyons.iter().enumerate() {
            for y in &a.canyons[i + 1..] {
                if x.degree == y.degree && x.finite_degree().is_some_and(|d| d > Exponent::int(1)) {
                    prop_assert!(contact(x.members[0].series(), y.members[0].series()) < x.degree);
                }
            }
        }
    }

    #[test]
    fn arcs_in_a_canyon_share_degree_and_leading_term(f in germ(), u in (1i64..5, -2i64..3), v in -3i64..4) {
        let a = analyze(&f, &Settings::default()).unwrap();
        let g = &a.form.f_normalized;
        for c in a.canyons.iter().filter(|c| c.finite_degree().is_some_and(|d| d > Exponent::int(1))) {
            let d = c.finite_degree().unwrap();
            let perturbation = PuiseuxSeries::new(
                [
                    (d, Coefficient::from(gauss(u.0, u.1))),
                    (d + Exponent::int(1), Coefficient::from(GaussRat::from_int(v))),
                ]
                .into_iter()
                .filter(|(_, c)| !c.as_exact().is_some_and(|x| x.is_zero())),
                None,
            );
            let beta = c.members[0].series().truncate(d + Exponent::int(2)).add(&perturbation);
            prop_assert_eq!(valley_degree(&a.form, &beta).unwrap(), c.degree);
            let s = valley_data(g, &beta).unwrap().unwrap();
            prop_assert_eq!(Order::Finite(s.h), c.h);
        }
    }

    #[test]
    fn pushing_forward_reaches_a_polar_of_larger_degree(f in germ(), alpha in series_with(2)) {
        let a = analyze(&f, &Settings::default()).unwrap();
        let g = &a.form.f_normalized;
        let Some(s) = valley_data(g, &alpha).unwrap() else { return Ok(()) };
        let (gamma, ctx) = escalate(g, &Settings::default(), |ctx| push_forward_polar(g, &alpha, s.sigma, ctx)).unwrap();
        match alpha.contact(gamma.series(), ctx.precision).unwrap() {
            Contact::Exactly(o) => prop_assert!(o >= Order::Finite(s.sigma)),
            Contact::AtLeast(h) => prop_assert!(h >= s.sigma),
        }
        let d_gamma = valley_degree(&a.form, gamma.series()).unwrap();
        prop_assert!(d_gamma >= Order::Finite(s.sigma));
    }

    #[test]
    fn signature_is_invariant_under_linear_changes(f in germ(), e in prop::array::uniform4(-3i64..=3)) {
        prop_assume!(e[0] * e[3] != e[1] * e[2]);
        let [a, b, c, d] = e.map(GaussRat::from_int);
        let g = f.compose_linear(&a, &b, &c, &d);
        prop_assume!(!g.coeff(f.order(), 0).is_zero());
        let settings = Settings::default();
        prop_assert_eq!(signature_of(&f, &settings).unwrap().to_json(), signature_of(&g, &settings).unwrap().to_json());
    }

    #[test]
    fn signature_is_invariant_under_rescaling_y(f in germ(), lambda in prop::sample::select(vec![(2, 0), (-3, 0), (0, 1), (1, 1)])) {
        let l = gauss(lambda.0, lambda.1);
        let g = f.compose_linear(&GaussRat::one(), &GaussRat::zero(), &GaussRat::zero(), &l);
        let settings = Settings::default();
        prop_assert_eq!(signature_of(&f, &settings).unwrap().to_json(), signature_of(&g, &settings).unwrap().to_json());
    }
}
