//! Acceptance criteria 1 to 9, one line each.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use canyons::analysis::{analyze, escalate, generic_polars_of, milnor_of, signature_of, Analysis, Settings};
use canyons::canyon::{check_reduced, contact_reaches};
use canyons::cluster::{compare, Verdict};
use canyons::corpus::CORPUS;
use canyons::number::{Coefficient, GaussRat};
use canyons::oracle::milnor_oracle;
use canyons::parse::parse;
use canyons::poly::Poly;
use canyons::polygon::{sigma_star, DotSet};
use canyons::selftest;
use canyons::series::{Contact, Exponent, Order};
use canyons::solver::{puiseux_roots, PolarBranch};
use canyons::Error;

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Exponent {
    Exponent::new(n, d)
}

fn int(n: i64) -> Exponent {
    Exponent::int(n)
}

fn analyzed(text: &str) -> Result<Analysis, String> {
    let f = parse(text).map_err(|e| format!("{}: {}", text, e))?;
    analyze(&f, &Settings::default()).map_err(|e| format!("{}: {}", text, e))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn criterion_1() -> Outcome {
    let c = |n: i64| Coefficient::from(GaussRat::from_int(n));
    let dots = DotSet::from_dots([(4, int(0), c(1)), (3, int(27), c(1)), (2, int(63), c(1)), (0, int(100), c(-1))]);
    let s = sigma_star(&dots).map_err(|e| e.to_string())?;
    ensure(s.h == int(100), format!("h = {}", s.h))?;
    ensure(s.sigma == int(36), format!("sigma* = {}", s.sigma))?;
    Ok("h = 100, sigma* = 36".into())
}

fn criterion_2() -> Outcome {
    let f = analyzed("x^3 + y^12")?;
    ensure(f.canyons.len() == 1, format!("{} canyons for x^3 + y^12", f.canyons.len()))?;
    ensure(f.canyons[0].degree == Order::Finite(q(11, 2)), "degree of the x^3 + y^12 canyon")?;
    ensure(f.canyons[0].multiplicity == 2, "multiplicity of the x^3 + y^12 canyon")?;
    let g = analyzed("x^3 + y^12 + x^2*y^5")?;
    ensure(g.canyons.len() == 2, format!("{} canyons for the deformation", g.canyons.len()))?;
    for c in &g.canyons {
        ensure(c.degree == Order::Finite(int(6)), format!("degree {} in the deformation", c.degree))?;
    }
    let (a, b) = (g.canyons[0].members[0].series(), g.canyons[1].members[0].series());
    let contact = a.contact(b, 256).map_err(|e| e.to_string())?;
    ensure(contact == Contact::Exactly(Order::Finite(int(5))), format!("mutual contact {:?}", contact))?;
    match compare(&f.signature, &g.signature) {
        Verdict::Distinguished { witness } => Ok(format!("DISTINGUISHED, {}", witness)),
        Verdict::Indistinguishable => Err("the pair compares INDISTINGUISHABLE".into()),
    }
}

fn polar_weight(ps: &[PolarBranch]) -> usize {
    ps.iter().map(|p| p.weight()).sum()
}

fn criterion_3() -> Outcome {
    let f = analyzed("z^4 + z^2*w^2 + w^4")?;
    ensure(polar_weight(&f.polars) == 3, "polar count of z^4 + z^2*w^2 + w^4")?;
    ensure(f.canyons.len() == 1 && f.canyons[0].multiplicity == 3, "one canyon of multiplicity 3")?;
    ensure((0..f.polars.len()).all(|k| f.polar_degree(k) == Order::Finite(int(1))), "polar degrees")?;
    let g = analyzed("z^4 + w^4")?;
    ensure(g.polars.len() == 1 && g.polars[0].multiplicity == 3, "one polar class of multiplicity 3")?;
    ensure(g.polar_degree(0) == Order::Finite(int(1)), "degree of the z^4 + w^4 polar")?;
    match compare(&f.signature, &g.signature) {
        Verdict::Indistinguishable => Ok("INDISTINGUISHABLE".into()),
        Verdict::Distinguished { witness } => Err(format!("distinguished by {}", witness)),
    }
}

/// Random germ of total degree at most 8 with 2 to 6 monomials and small rational coefficients.
fn random_germ(rng: &mut ChaCha8Rng) -> Poly {
    loop {
        let n = rng.random_range(2..=6);
        let terms: Vec<((u32, u32), GaussRat)> = (0..n)
            .map(|_| {
                let deg = rng.random_range(2..=8);
                let i = rng.random_range(0..=deg);
                let num = rng.random_range(1..=4) * if rng.random_bool(0.5) { 1 } else { -1 };
                let den = rng.random_range(1..=3);
                ((i, deg - i), GaussRat::from_ratio(num, den))
            })
            .collect();
        let f = Poly::from_terms(terms);
        if !f.is_zero() && f.order() >= 2 && check_reduced(&f).is_ok() {
            return f;
        }
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let settings = Settings::default();
    let mut checked = 0;
    let mut attempts = 0;
    while checked < 30 && attempts < 400 {
        attempts += 1;
        let f = random_germ(&mut rng);
        let Some(expected) = milnor_oracle(&f) else {
            continue;
        };
        let mu = milnor_of(&f, &settings).map_err(|e| format!("{}: {}", f.render("x", "y"), e))?;
        ensure(mu == expected as i64, format!("{}: {} against resultant {}", f.render("x", "y"), mu, expected))?;
        checked += 1;
    }
    ensure(checked >= 25, format!("only {} isolated germs generated", checked))?;
    Ok(format!("{} random germs, zero failures", checked))
}

fn corpus() -> Result<Vec<(&'static str, Analysis)>, String> {
    CORPUS.iter().map(|(name, text)| Ok((*name, analyzed(text)?))).collect()
}

fn tangent_direction(f: &Poly, tau: &GaussRat) -> bool {
    let m = f.order();
    let mut value = GaussRat::zero();
    for i in 0..=m {
        value = &value + &(&f.coeff(i, m - i) * &tau.pow((m - i) as u64));
    }
    value.is_zero()
}

fn criterion_5(all: &[(&str, Analysis)]) -> Outcome {
    let taus = [GaussRat::from_int(1), GaussRat::from_int(-1), GaussRat::from_int(2)];
    let mut checked = 0;
    for (name, a) in all {
        let g = &a.form.f_normalized;
        let mut families = Vec::new();
        for tau in &taus {
            if tangent_direction(g, tau) {
                continue;
            }
            match generic_polars_of(&a.input, tau, &Settings::default()) {
                Ok((_, ps, _)) => families.push(ps),
                Err(Error::NotMiniregular) => continue,
                Err(e) => return Err(format!("{}: {}", name, e)),
            }
        }
        ensure(families.len() >= 2, format!("{}: fewer than two generic directions", name))?;
        for c in &a.canyons {
            let Some(d) = c.finite_degree().filter(|d| *d > int(1)) else {
                continue;
            };
            let rep = c.members[0].series();
            let mut inside: Vec<Vec<&PolarBranch>> = Vec::new();
            for fam in &families {
                let mut here = Vec::new();
                for p in fam {
                    if contact_reaches(rep, p.series(), c.degree, 256).map_err(|e| e.to_string())? {
                        here.push(p);
                    }
                }
                ensure(
                    here.iter().map(|p| p.weight()).sum::<usize>() == c.multiplicity,
                    format!("{}: generic polars in the canyon of degree {} miss its multiplicity", name, d),
                )?;
                inside.push(here);
            }
            for (i, x) in inside.iter().enumerate() {
                for y in &inside[i + 1..] {
                    for p in x {
                        for r in y {
                            let contact = p.series().contact(r.series(), 256).map_err(|e| e.to_string())?;
                            ensure(
                                contact == Contact::Exactly(Order::Finite(d)),
                                format!("{}: directions diverge at {:?}, degree {}", name, contact, d),
                            )?;
                        }
                    }
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{} canyons over {} germs", checked, all.len()))
}

fn distinct_roots(a: &Analysis) -> Result<usize, String> {
    let g = &a.form.f_normalized;
    let (roots, _) = escalate(g, &Settings::default(), |ctx| puiseux_roots(g, ctx)).map_err(|e| e.to_string())?;
    Ok(roots.branches.iter().map(|b| b.puiseux_mult as usize).sum())
}

fn criterion_6(all: &[(&str, Analysis)]) -> Outcome {
    for (name, a) in all {
        let r = a.form.r;
        let degree_one: usize = a
            .polars
            .iter()
            .enumerate()
            .filter(|(k, _)| a.polar_degree(*k) == Order::Finite(int(1)))
            .map(|(_, p)| p.weight())
            .sum();
        ensure(degree_one + 1 == r, format!("{}: {} degree-1 polars, r = {}", name, degree_one, r))?;
        let high: Vec<_> = a.canyons.iter().filter(|c| c.finite_degree().is_some_and(|d| d > int(1))).collect();
        for (i, x) in high.iter().enumerate() {
            for y in &high[i + 1..] {
                let d = x.degree.min(y.degree);
                let contact = x.members[0].series().contact(y.members[0].series(), 256).map_err(|e| e.to_string())?;
                let Contact::Exactly(o) = contact else {
                    return Err(format!("{}: contact not decided", name));
                };
                ensure(o < d, format!("{}: canyons of degrees {} and {} overlap", name, x.degree, y.degree))?;
            }
        }
        if degree_one > 0 {
            let precisely_r = distinct_roots(a)? == r;
            ensure(a.structure.enr_minimal == Some(precisely_r), format!("{}: minimality verdict", name))?;
            ensure(precisely_r == high.is_empty(), format!("{}: minimality against the canyon list", name))?;
        }
    }
    Ok(format!("{} germs, zero violations", all.len()))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let settings = Settings::default();
    let mut checked = 0;
    for (name, text) in CORPUS {
        let f = parse(text).map_err(|e| e.to_string())?;
        let base = signature_of(&f, &settings).map_err(|e| format!("{}: {}", name, e))?.to_json();
        let m = f.order();
        let mut done = 0;
        while done < 10 {
            let entries: [i64; 4] = std::array::from_fn(|_| rng.random_range(-4..=4));
            if entries[0] * entries[3] == entries[1] * entries[2] {
                continue;
            }
            let [a, b, c, d] = entries.map(GaussRat::from_int);
            let g = f.compose_linear(&a, &b, &c, &d);
            if g.coeff(m, 0).is_zero() {
                continue;
            }
            let s = signature_of(&g, &settings).map_err(|e| format!("{} under {:?}: {}", name, entries, e))?;
            ensure(s.to_json() == base, format!("{}: signature changes under {:?}", name, entries))?;
            done += 1;
            checked += 1;
        }
    }
    Ok(format!("{} transformed germs, identical signatures", checked))
}

fn criterion_8(all: &[(&str, Analysis)]) -> Outcome {
    let mut checked = 0;
    for (name, a) in all {
        for c in &a.canyons {
            if c.finite_degree().is_none_or(|d| d <= int(1)) {
                continue;
            }
            let h = c.h.finite().ok_or(format!("{}: infinite h", name))?;
            let mu = Exponent::int(c.multiplicity as i64) * (h - int(1));
            ensure(mu == int(c.partial_milnor), format!("{}: partial Milnor {} != {}", name, c.partial_milnor, mu))?;
            ensure(
                c.curvature_units == c.partial_milnor + c.multiplicity as i64,
                format!("{}: curvature {} for degree {}", name, c.curvature_units, c.degree),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{} canyons", checked))
}

fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

const BENCHMARK: &str = "x^7 + x^5*y^2 + 2*x^3*y^5 + x*y^9 + y^12 + x^2*y^10";

/// Timing and memory of one analysis; run before anything else.
fn criterion_9_envelope() -> Outcome {
    let f = parse(BENCHMARK).map_err(|e| e.to_string())?;
    ensure(f.total_degree() == 12 && f.num_terms() == 6, "benchmark germ shape")?;
    let start = Instant::now();
    let a = analyze(&f, &Settings::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(2), format!("analyze took {:?}", elapsed))?;
    let rss = peak_rss_kb();
    if let Some(kb) = rss {
        ensure(kb <= 256 * 1024, format!("peak resident memory {} KB", kb))?;
    }
    ensure(Some(a.milnor as u64) == milnor_oracle(&f), "benchmark Milnor number")?;
    Ok(format!("analyze {:?}, peak memory {} KB", elapsed, rss.map_or("unknown".to_string(), |k| k.to_string())))
}

fn criterion_9_selftest() -> Outcome {
    let start = Instant::now();
    let outcomes = selftest::run(&Settings::default());
    let failed: Vec<String> = outcomes.iter().filter(|o| !o.passed).map(|o| o.criterion.to_string()).collect();
    ensure(outcomes.len() == 8, "selftest does not cover criteria 1-8")?;
    ensure(failed.is_empty(), format!("selftest fails criteria {}", failed.join(", ")))?;
    Ok(format!("selftest 8/8 in {:?}", start.elapsed()))
}

fn main() {
    // Measured first so that the peak memory reflects this germ alone.
    let envelope = criterion_9_envelope();
    let mut results: Vec<(u8, &str, Outcome)> = vec![
        (1, "sigma* of the four-dot polygon", criterion_1()),
        (2, "x^3 + y^12 and its deformation", criterion_2()),
        (3, "z^4 + z^2*w^2 + w^4 and z^4 + w^4", criterion_3()),
        (4, "Milnor number against the resultant oracle", criterion_4()),
    ];
    match corpus() {
        Ok(all) => {
            results.push((5, "generic polars for tau in {1, -1, 2}", criterion_5(&all)));
            results.push((6, "structure of the canyon decomposition", criterion_6(&all)));
            results.push((7, "signature under linear coordinate changes", criterion_7()));
            results.push((8, "curvature identity", criterion_8(&all)));
        }
        Err(e) => {
            for (k, title) in [
                (5, "generic polars for tau in {1, -1, 2}"),
                (6, "structure of the canyon decomposition"),
                (7, "signature under linear coordinate changes"),
                (8, "curvature identity"),
            ] {
                results.push((k, title, Err(e.clone())));
            }
        }
    }
    let nine = envelope.and_then(|a| criterion_9_selftest().map(|b| format!("{}, {}", a, b)));
    results.push((9, "performance envelope", nine));

    let mut failed = 0;
    for (k, title, r) in &results {
        match r {
            Ok(detail) => println!("criterion {}: PASS {} ({})", k, title, detail),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {} ({})", k, title, detail);
            }
        }
    }
    if failed > 0 {
        eprintln!("{} acceptance criteria failed", failed);
        std::process::exit(1);
    }
}
