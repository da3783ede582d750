//! Gradient degrees against a brute-force search over perturbation exponents: the degree is
//! the least `q` for which `ord |grad f|` along `gamma + u y^q` equals its value along
//! `gamma` for a generic `u`.

use canyons::analysis::{analyze, Settings};
use canyons::corpus::CORPUS;
use canyons::number::{Coefficient, GaussRat};
use canyons::parse::parse;
use canyons::poly::Poly;
use canyons::series::{Exponent, Order, PuiseuxSeries};

const STEPS_PER_UNIT: i64 = 12;
const MAX_EXPONENT: i64 = 24;

fn gradient_order(f: &Poly, alpha: &PuiseuxSeries) -> Order {
    let fx = f.deriv_x().eval_x(alpha).ord().expect("exact");
    let fy = f.deriv_y().eval_x(alpha).ord().expect("exact");
    fx.min(fy)
}

fn brute_force_degree(f: &Poly, gamma: &PuiseuxSeries) -> Option<Exponent> {
    let u = Coefficient::from(&GaussRat::from_ratio(3, 7) + &(&GaussRat::from_ratio(2, 5) * &GaussRat::i()));
    let base = gradient_order(f, gamma);
    let holds = |k: i64| {
        let q = Exponent::new(k, STEPS_PER_UNIT);
        gradient_order(f, &gamma.add(&PuiseuxSeries::monomial(u.clone(), q))) == base
    };
    let ks: Vec<i64> = (1..=MAX_EXPONENT * STEPS_PER_UNIT).collect();
    let first = ks.iter().copied().find(|&k| holds(k))?;
    // Once it holds it keeps holding.
    assert!(ks.iter().filter(|&&k| k > first).all(|&k| holds(k)));
    Some(Exponent::new(first, STEPS_PER_UNIT))
}

#[test]
fn exact_polars_match_the_brute_force_degree() {
    let extra = ["x^3 + y^7", "x^4 + x^2*y^5 + y^12", "x^3 + x^2*y^4 + y^10", "x^5 + y^8 + x^3*y^3"];
    let mut checked = 0;
    for text in CORPUS.iter().map(|(_, t)| *t).chain(extra) {
        let a = analyze(&parse(text).unwrap(), &Settings::default()).unwrap();
        let g = &a.form.f_normalized;
        for (k, p) in a.polars.iter().enumerate() {
            if !p.exact || !p.series().has_exact_coefficients() {
                continue;
            }
            let d = a.polar_degree(k).finite().expect("reduced germs have finite degrees");
            if d.denom() > STEPS_PER_UNIT || STEPS_PER_UNIT % d.denom() != 0 || d > Exponent::int(MAX_EXPONENT) {
                continue;
            }
            assert_eq!(brute_force_degree(g, p.series()), Some(d), "{}: polar {}", text, p.series().render("y"));
            checked += 1;
        }
    }
    assert!(checked >= 10, "only {} exact polars", checked);
}
