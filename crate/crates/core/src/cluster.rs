//! Clustering of gradient canyons by degree, bar and contact profile, and the resulting
//! signature used to tell germs apart.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::canyon::{contact_reaches, valley_data, GradientCanyon, MiniregularForm};
use crate::error::{Error, Result};
use crate::series::{Exponent, Order};
use crate::solver::Context;

pub const SCHEMA_VERSION: u32 = 1;

/// Identifies the bar of the root tree of `f` from which a canyon departs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct BarKey {
    /// `ord f` along the canyon's polars.
    pub h: Exponent,
    /// Height of the bar: the greatest contact of the polars with a root of `f`.
    pub bar_co_slope: Exponent,
    /// Number of roots of `f` through the bar, counted with conjugates.
    pub root_count: u32,
}

/// Contact orders from one canyon to the others of its bar, with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ContactProfile(pub Vec<(Exponent, usize)>);

impl fmt::Display for ContactProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(e, k)| format!("({}, {})", e, k)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CanyonSummary {
    pub multiplicity: usize,
    pub h: Exponent,
    pub partial_milnor: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileClass {
    pub profile: ContactProfile,
    pub canyons: Vec<CanyonSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BarCluster {
    pub key: BarKey,
    pub classes: Vec<ProfileClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeCluster {
    pub degree: Exponent,
    pub bars: Vec<BarCluster>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnrData {
    /// Number of polars of degree 1, with multiplicity; `r - 1`.
    pub degree_one_polars: usize,
    pub multiplicity: usize,
    pub partial_milnor: i64,
}

/// Position of a profile class in the signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ClassRef {
    pub cluster: usize,
    pub bar: usize,
    pub class: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct InterContact {
    pub a: ClassRef,
    pub b: ClassRef,
    pub contact: Exponent,
}

/// The invariant data of the canyon decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanyonSignature {
    pub schema_version: u32,
    pub enr_data: EnrData,
    pub clusters: Vec<DegreeCluster>,
    /// Contacts between canyons of different profile classes, as a sorted multiset.
    pub inter_cluster_contacts: Vec<InterContact>,
}

impl CanyonSignature {
    /// Canonical JSON; equal signatures serialize to identical bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("signature serializes")
    }

    pub fn degrees(&self) -> Vec<Exponent> {
        self.clusters
            .iter()
            .flat_map(|c| {
                let n: usize = c.bars.iter().flat_map(|b| &b.classes).map(|k| k.canyons.len()).sum();
                std::iter::repeat_n(c.degree, n)
            })
            .collect()
    }
}

/// Outcome of comparing two germs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The signatures differ; the germs are not bi-Lipschitz equivalent.
    Distinguished { witness: String },
    /// Every compared invariant agrees. This does not prove equivalence.
    Indistinguishable,
}

/// The canyons of degree above 1, grouped by degree.
pub fn cluster_by_degree(canyons: &[GradientCanyon]) -> BTreeMap<Exponent, Vec<&GradientCanyon>> {
    let mut out: BTreeMap<Exponent, Vec<&GradientCanyon>> = BTreeMap::new();
    for c in canyons {
        if let Some(d) = c.finite_degree().filter(|d| *d > Exponent::int(1)) {
            out.entry(d).or_default().push(c);
        }
    }
    out
}

fn h_of(c: &GradientCanyon) -> Result<Exponent> {
    c.h.finite().ok_or_else(|| Error::InvalidInput("canyon without a finite h".into()))
}

/// Splits a degree cluster into bars: canyons with the same `h` and the same top edge of the
/// relative Newton polygon, connected by contact at least the bar height.
pub fn cluster_by_bar<'a>(
    form: &MiniregularForm,
    g_d: &[&'a GradientCanyon],
    ctx: &Context,
) -> Result<Vec<(BarKey, Vec<&'a GradientCanyon>)>> {
    let mut keys = Vec::with_capacity(g_d.len());
    for c in g_d {
        let data = valley_data(&form.f_normalized, c.members[0].series())?
            .ok_or_else(|| Error::InvalidInput("canyon of infinite degree".into()))?;
        keys.push(BarKey { h: h_of(c)?, bar_co_slope: data.top_coslope, root_count: data.top_length });
    }
    let mut bars: Vec<(BarKey, Vec<usize>)> = Vec::new();
    for (i, key) in keys.iter().enumerate() {
        let mut home = None;
        for (b, (bk, members)) in bars.iter().enumerate() {
            if bk != key {
                continue;
            }
            let rep = g_d[members[0]].members[0].series();
            let theta = Order::Finite(key.bar_co_slope);
            if contact_reaches(rep, g_d[i].members[0].series(), theta, ctx.precision)? {
                home = Some(b);
                break;
            }
        }
        match home {
            Some(b) => bars[b].1.push(i),
            None => bars.push((key.clone(), vec![i])),
        }
    }
    Ok(bars.into_iter().map(|(k, idx)| (k, idx.into_iter().map(|i| g_d[i]).collect())).collect())
}

/// Contact orders from `c` to the other canyons of its bar.
pub fn contact_profile(c: &GradientCanyon, cluster: &[&GradientCanyon], prec: u32) -> Result<ContactProfile> {
    let d = c.degree;
    let mut counts: BTreeMap<Exponent, usize> = BTreeMap::new();
    for o in cluster {
        if std::ptr::eq(*o, c) {
            continue;
        }
        let k = c.members[0].series().contact(o.members[0].series(), prec)?.value()?;
        match k {
            Order::Finite(e) if Order::Finite(e) < d => *counts.entry(e).or_default() += 1,
            _ => {
                return Err(Error::StructureViolation(format!(
                    "two canyons of degree {} have contact {}",
                    d, k
                )))
            }
        }
    }
    Ok(ContactProfile(counts.into_iter().collect()))
}

/// Groups the canyons of a bar by their contact profiles.
pub fn refine_by_profile<'a>(
    cluster: &[&'a GradientCanyon],
    prec: u32,
) -> Result<Vec<(ContactProfile, Vec<&'a GradientCanyon>)>> {
    let mut out: BTreeMap<ContactProfile, Vec<&'a GradientCanyon>> = BTreeMap::new();
    for c in cluster {
        out.entry(contact_profile(c, cluster, prec)?).or_default().push(c);
    }
    Ok(out.into_iter().collect())
}

fn summary(c: &GradientCanyon) -> Result<CanyonSummary> {
    Ok(CanyonSummary { multiplicity: c.multiplicity, h: h_of(c)?, partial_milnor: c.partial_milnor })
}

/// Builds the signature from a canyon decomposition.
pub fn signature(form: &MiniregularForm, canyons: &[GradientCanyon], ctx: &Context) -> Result<CanyonSignature> {
    if canyons.iter().any(|c| c.degree.is_infinite()) {
        return Err(Error::NotReduced);
    }
    let enr = canyons.iter().find(|c| c.is_enriched());
    let enr_data = EnrData {
        degree_one_polars: enr.map_or(0, |c| c.multiplicity),
        multiplicity: enr.map_or(0, |c| c.multiplicity),
        partial_milnor: enr.map_or(0, |c| c.partial_milnor),
    };

    // Each profile class keeps its canyons so that inter-class contacts can be computed after
    // the canonical order is fixed.
    struct Class<'a> {
        profile: ContactProfile,
        canyons: Vec<(CanyonSummary, &'a GradientCanyon)>,
    }
    struct Bar<'a> {
        key: BarKey,
        classes: Vec<Class<'a>>,
    }

    let mut clusters: Vec<(Exponent, Vec<Bar>)> = Vec::new();
    for (d, g_d) in cluster_by_degree(canyons) {
        let mut bars = Vec::new();
        for (key, members) in cluster_by_bar(form, &g_d, ctx)? {
            let mut classes = Vec::new();
            for (profile, cs) in refine_by_profile(&members, ctx.precision)? {
                let mut canyons = cs.into_iter().map(|c| Ok((summary(c)?, c))).collect::<Result<Vec<_>>>()?;
                canyons.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.jet.cmp_canonical(&b.1.jet)));
                classes.push(Class { profile, canyons });
            }
            classes.sort_by(|a, b| {
                a.profile.cmp(&b.profile).then_with(|| {
                    let sa: Vec<_> = a.canyons.iter().map(|x| &x.0).collect();
                    let sb: Vec<_> = b.canyons.iter().map(|x| &x.0).collect();
                    sa.cmp(&sb)
                })
            });
            bars.push(Bar { key, classes });
        }
        bars.sort_by(|a, b| {
            a.key.cmp(&b.key).then_with(|| {
                let sa: Vec<_> = a.classes.iter().map(|c| (&c.profile, c.canyons.iter().map(|x| &x.0).collect::<Vec<_>>())).collect();
                let sb: Vec<_> = b.classes.iter().map(|c| (&c.profile, c.canyons.iter().map(|x| &x.0).collect::<Vec<_>>())).collect();
                sa.cmp(&sb)
            })
        });
        clusters.push((d, bars));
    }

    let mut located: Vec<(ClassRef, &GradientCanyon)> = Vec::new();
    for (ci, (_, bars)) in clusters.iter().enumerate() {
        for (bi, bar) in bars.iter().enumerate() {
            for (ki, class) in bar.classes.iter().enumerate() {
                for (_, c) in &class.canyons {
                    located.push((ClassRef { cluster: ci, bar: bi, class: ki }, *c));
                }
            }
        }
    }
    let mut inter = Vec::new();
    for (i, (ra, ca)) in located.iter().enumerate() {
        for (rb, cb) in &located[i + 1..] {
            if ra == rb {
                continue;
            }
            let k = ca.members[0].series().contact(cb.members[0].series(), ctx.precision)?.value()?;
            let contact = k.finite().ok_or_else(|| Error::StructureViolation("distinct canyons with equal polars".into()))?;
            if contact >= ca.degree.finite().unwrap_or(contact).min(cb.degree.finite().unwrap_or(contact)) {
                return Err(Error::StructureViolation(format!("canyons of degrees {} and {} overlap", ca.degree, cb.degree)));
            }
            let (a, b) = if ra <= rb { (*ra, *rb) } else { (*rb, *ra) };
            inter.push(InterContact { a, b, contact });
        }
    }
    inter.sort();

    let clusters = clusters
        .into_iter()
        .map(|(degree, bars)| DegreeCluster {
            degree,
            bars: bars
                .into_iter()
                .map(|b| BarCluster {
                    key: b.key,
                    classes: b
                        .classes
                        .into_iter()
                        .map(|c| ProfileClass { profile: c.profile, canyons: c.canyons.into_iter().map(|x| x.0).collect() })
                        .collect(),
                })
                .collect(),
        })
        .collect();
    Ok(CanyonSignature { schema_version: SCHEMA_VERSION, enr_data, clusters, inter_cluster_contacts: inter })
}

fn fmt_degrees(d: &[Exponent]) -> String {
    let parts: Vec<String> = d.iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Compares two signatures layer by layer and reports the first difference.
pub fn compare(a: &CanyonSignature, b: &CanyonSignature) -> Verdict {
    let distinguished = |w: String| Verdict::Distinguished { witness: w };
    if a.enr_data != b.enr_data {
        return distinguished(format!(
            "degree-1 canyon data (polars {}, multiplicity {}, partial Milnor {}) != ({}, {}, {})",
            a.enr_data.degree_one_polars,
            a.enr_data.multiplicity,
            a.enr_data.partial_milnor,
            b.enr_data.degree_one_polars,
            b.enr_data.multiplicity,
            b.enr_data.partial_milnor
        ));
    }
    let (da, db) = (a.degrees(), b.degrees());
    if da != db {
        return distinguished(format!("canyon degree multiset {} != {}", fmt_degrees(&da), fmt_degrees(&db)));
    }
    for (ca, cb) in a.clusters.iter().zip(&b.clusters) {
        let ka: Vec<&BarKey> = ca.bars.iter().map(|x| &x.key).collect();
        let kb: Vec<&BarKey> = cb.bars.iter().map(|x| &x.key).collect();
        if ka != kb {
            return distinguished(format!("bars of the degree {} cluster differ: {:?} != {:?}", ca.degree, ka, kb));
        }
        for (ba, bb) in ca.bars.iter().zip(&cb.bars) {
            let pa: Vec<&ContactProfile> = ba.classes.iter().map(|c| &c.profile).collect();
            let pb: Vec<&ContactProfile> = bb.classes.iter().map(|c| &c.profile).collect();
            if pa != pb {
                let show = |p: &[&ContactProfile]| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
                return distinguished(format!(
                    "contact profiles in the degree {} cluster differ: {} != {}",
                    ca.degree,
                    show(&pa),
                    show(&pb)
                ));
            }
            for (xa, xb) in ba.classes.iter().zip(&bb.classes) {
                if xa.canyons != xb.canyons {
                    return distinguished(format!(
                        "canyons (multiplicity, h, partial Milnor) in the degree {} cluster differ: {:?} != {:?}",
                        ca.degree,
                        xa.canyons.iter().map(|c| (c.multiplicity, c.h.to_string(), c.partial_milnor)).collect::<Vec<_>>(),
                        xb.canyons.iter().map(|c| (c.multiplicity, c.h.to_string(), c.partial_milnor)).collect::<Vec<_>>()
                    ));
                }
            }
        }
    }
    if a.inter_cluster_contacts != b.inter_cluster_contacts {
        let first = a
            .inter_cluster_contacts
            .iter()
            .zip(&b.inter_cluster_contacts)
            .find(|(x, y)| x.cmp(y) != Ordering::Equal)
            .map(|(x, y)| format!("{} != {}", x.contact, y.contact))
            .unwrap_or_else(|| "different number of entries".into());
        return distinguished(format!("contact orders between clusters differ: {}", first));
    }
    Verdict::Indistinguishable
}
