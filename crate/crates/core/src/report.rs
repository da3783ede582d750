//! Text and JSON reports. JSON field order is fixed by the struct definitions and every
//! rational is a `"p/q"` string, so identical runs give identical bytes.

use std::fmt::Write as _;

use serde::Serialize;

use crate::analysis::Analysis;
use crate::canyon::{disk_geometry, GradientCanyon, MiniregularForm};
use crate::cluster::{CanyonSignature, Verdict, SCHEMA_VERSION};
use crate::number::Coefficient;
use crate::series::{Exponent, Order};
use crate::solver::{Context, PolarBranch, PolarSource};

#[derive(Clone, Debug, Serialize)]
pub struct GermJson {
    pub expression: String,
    pub x: String,
    pub y: String,
    pub polynomial: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizationJson {
    pub shear: String,
    pub polynomial: String,
    pub m: u32,
    pub r: usize,
    pub tangents: Vec<TangentJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentJson {
    pub root: String,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SettingsJson {
    pub precision: u32,
    pub horizon: Exponent,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarJson {
    pub series: String,
    pub multiplicity: usize,
    pub puiseux_multiplicity: u64,
    pub exact: bool,
    pub separated: bool,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<Order>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiskJson {
    pub disk_count: i64,
    pub radius_exponent: Exponent,
    pub separation_exponent: Exponent,
    pub center_truncation_exponent: Exponent,
}

#[derive(Clone, Debug, Serialize)]
pub struct CanyonJson {
    pub degree: Order,
    pub jet: String,
    pub multiplicity: usize,
    pub h: Order,
    pub a: Option<String>,
    pub partial_milnor: i64,
    pub curvature_units: i64,
    pub members: Vec<usize>,
    pub disk_geometry: Option<DiskJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureJson {
    pub r: usize,
    pub degree_one_polars: usize,
    pub disjoint: bool,
    pub enr_minimal: Option<bool>,
    pub distinct_roots: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TauCanyonJson {
    pub degree: Exponent,
    pub multiplicity: usize,
    pub landed: Vec<usize>,
    pub divergence: Exponent,
}

#[derive(Clone, Debug, Serialize)]
pub struct TauJson {
    pub samples: Vec<String>,
    pub skipped: Vec<String>,
    pub canyons: Vec<TauCanyonJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalyzeJson {
    pub schema_version: u32,
    pub command: &'static str,
    pub input: GermJson,
    pub normalization: NormalizationJson,
    pub settings: SettingsJson,
    pub polars: Vec<PolarJson>,
    pub canyons: Vec<CanyonJson>,
    pub milnor: i64,
    pub structure: StructureJson,
    pub tau_check: Option<TauJson>,
    pub signature: CanyonSignature,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarsJson {
    pub schema_version: u32,
    pub command: &'static str,
    pub input: GermJson,
    pub normalization: NormalizationJson,
    pub settings: SettingsJson,
    pub polars: Vec<PolarJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MilnorJson {
    pub schema_version: u32,
    pub command: &'static str,
    pub input: GermJson,
    pub milnor: i64,
    pub resultant_oracle: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SignatureJson {
    pub schema_version: u32,
    pub command: &'static str,
    pub input: GermJson,
    pub signature: CanyonSignature,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareJson {
    pub schema_version: u32,
    pub command: &'static str,
    pub inputs: [GermJson; 2],
    pub verdict: &'static str,
    pub witness: Option<String>,
    pub signatures: [CanyonSignature; 2],
}

/// Variable names and source text of a germ, for labelling output.
#[derive(Clone, Debug)]
pub struct Labels {
    pub expression: String,
    pub x: String,
    pub y: String,
}

impl Labels {
    fn germ(&self, poly: &crate::poly::Poly) -> GermJson {
        GermJson {
            expression: self.expression.clone(),
            x: self.x.clone(),
            y: self.y.clone(),
            polynomial: poly.render(&self.x, &self.y),
        }
    }
}

fn normalization(form: &MiniregularForm, l: &Labels) -> NormalizationJson {
    NormalizationJson {
        shear: form.shear.to_string(),
        polynomial: form.f_normalized.render(&l.x, &l.y),
        m: form.m,
        r: form.r,
        tangents: form
            .initial_factors
            .iter()
            .map(|t| TangentJson { root: t.value.to_string(), multiplicity: t.multiplicity })
            .collect(),
    }
}

fn settings(ctx: &Context) -> SettingsJson {
    SettingsJson { precision: ctx.precision, horizon: ctx.horizon }
}

fn source(p: &PolarBranch) -> String {
    match &p.source {
        PolarSource::Fx => "fx".into(),
        PolarSource::Generic(t) => format!("generic({})", t),
    }
}

fn polar_json(p: &PolarBranch, degree: Option<Order>, l: &Labels) -> PolarJson {
    PolarJson {
        series: p.series().render(&l.y),
        multiplicity: p.multiplicity,
        puiseux_multiplicity: p.branch_mult,
        exact: p.exact,
        separated: p.separated,
        source: source(p),
        degree,
    }
}

fn canyon_json(c: &GradientCanyon, polars: &[PolarBranch], l: &Labels) -> CanyonJson {
    CanyonJson {
        degree: c.degree,
        jet: c.jet.render(&l.y),
        multiplicity: c.multiplicity,
        h: c.h,
        a: c.leading_coeff.as_ref().map(Coefficient::to_string),
        partial_milnor: c.partial_milnor,
        curvature_units: c.curvature_units,
        members: c.members.iter().filter_map(|m| polars.iter().position(|p| p == m)).collect(),
        disk_geometry: disk_geometry(c).map(|d| DiskJson {
            disk_count: d.disk_count,
            radius_exponent: d.radius_exponent,
            separation_exponent: d.separation_exponent,
            center_truncation_exponent: d.center_truncation_exponent,
        }),
    }
}

pub fn analyze_json(a: &Analysis, l: &Labels) -> AnalyzeJson {
    AnalyzeJson {
        schema_version: SCHEMA_VERSION,
        command: "analyze",
        input: l.germ(&a.input),
        normalization: normalization(&a.form, l),
        settings: settings(&a.context),
        polars: a.polars.iter().enumerate().map(|(k, p)| polar_json(p, Some(a.polar_degree(k)), l)).collect(),
        canyons: a.canyons.iter().map(|c| canyon_json(c, &a.polars, l)).collect(),
        milnor: a.milnor,
        structure: StructureJson {
            r: a.structure.r,
            degree_one_polars: a.structure.degree_one_polars,
            disjoint: a.structure.disjoint,
            enr_minimal: a.structure.enr_minimal,
            distinct_roots: a.structure.distinct_roots,
        },
        tau_check: a.tau.as_ref().map(|t| TauJson {
            samples: t.samples.iter().map(|x| x.to_string()).collect(),
            skipped: t.skipped.iter().map(|x| x.to_string()).collect(),
            canyons: t
                .canyons
                .iter()
                .map(|c| TauCanyonJson {
                    degree: c.degree,
                    multiplicity: c.multiplicity,
                    landed: c.landed.clone(),
                    divergence: c.divergence,
                })
                .collect(),
        }),
        signature: a.signature.clone(),
    }
}

pub fn polars_json(
    command: &'static str,
    input: &crate::poly::Poly,
    form: &MiniregularForm,
    polars: &[PolarBranch],
    ctx: &Context,
    l: &Labels,
) -> PolarsJson {
    PolarsJson {
        schema_version: SCHEMA_VERSION,
        command,
        input: l.germ(input),
        normalization: normalization(form, l),
        settings: settings(ctx),
        polars: polars.iter().map(|p| polar_json(p, None, l)).collect(),
    }
}

pub fn milnor_json(input: &crate::poly::Poly, milnor: i64, oracle: Option<u64>, l: &Labels) -> MilnorJson {
    MilnorJson { schema_version: SCHEMA_VERSION, command: "milnor", input: l.germ(input), milnor, resultant_oracle: oracle }
}

pub fn signature_json(input: &crate::poly::Poly, s: &CanyonSignature, l: &Labels) -> SignatureJson {
    SignatureJson { schema_version: SCHEMA_VERSION, command: "signature", input: l.germ(input), signature: s.clone() }
}

pub fn compare_json(
    inputs: [(&crate::poly::Poly, &Labels); 2],
    verdict: &Verdict,
    sigs: [&CanyonSignature; 2],
) -> CompareJson {
    let (v, w) = match verdict {
        Verdict::Distinguished { witness } => ("DISTINGUISHED", Some(witness.clone())),
        Verdict::Indistinguishable => ("INDISTINGUISHABLE", None),
    };
    CompareJson {
        schema_version: SCHEMA_VERSION,
        command: "compare",
        inputs: [inputs[0].1.germ(inputs[0].0), inputs[1].1.germ(inputs[1].0)],
        verdict: v,
        witness: w,
        signatures: [sigs[0].clone(), sigs[1].clone()],
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn header(out: &mut String, input: &crate::poly::Poly, form: &MiniregularForm, ctx: &Context, l: &Labels) {
    let _ = writeln!(out, "germ: {}", input.render(&l.x, &l.y));
    if !form.shear.is_zero() {
        let _ = writeln!(
            out,
            "coordinates: {} -> {} + {}*{}, giving {}",
            l.y,
            l.y,
            form.shear,
            l.x,
            form.f_normalized.render(&l.x, &l.y)
        );
    }
    let _ = writeln!(out, "multiplicity m = {}, tangent directions r = {}", form.m, form.r);
    let _ = writeln!(out, "horizon {}, precision {} bits", ctx.horizon, ctx.precision);
}

fn polar_line(p: &PolarBranch, l: &Labels) -> String {
    let mut s = format!("{} = {}", l.x, p.series().render(&l.y));
    let _ = write!(s, "   multiplicity {}", p.multiplicity);
    if p.branch_mult > 1 {
        let _ = write!(s, ", {} conjugates", p.branch_mult);
    }
    if !p.separated {
        s.push_str(", not separated at the horizon cap");
    }
    s
}

pub fn analyze_text(a: &Analysis, l: &Labels) -> String {
    let mut out = String::new();
    header(&mut out, &a.input, &a.form, &a.context, l);
    let _ = writeln!(out, "polars:");
    if a.polars.is_empty() {
        let _ = writeln!(out, "  none");
    }
    for (k, p) in a.polars.iter().enumerate() {
        let _ = writeln!(out, "  {}, degree {}", polar_line(p, l), a.polar_degree(k));
    }
    let _ = writeln!(out, "canyons:");
    if a.canyons.is_empty() {
        let _ = writeln!(out, "  none");
    }
    for (k, c) in a.canyons.iter().enumerate() {
        let a_str = c.leading_coeff.as_ref().map_or("-".to_string(), |x| x.to_string());
        let _ = writeln!(
            out,
            "  [{}] degree {}, jet {}, multiplicity {}, h = {}, a = {}, partial Milnor {}, curvature {}*(2pi)",
            k + 1,
            c.degree,
            c.jet.render(&l.y),
            c.multiplicity,
            c.h,
            a_str,
            c.partial_milnor,
            c.curvature_units
        );
        if let Some(d) = disk_geometry(c) {
            let _ = writeln!(
                out,
                "      disks: {}, radius |lambda|^({}), separation |lambda|^({}), centers to order {}",
                d.disk_count, d.radius_exponent, d.separation_exponent, d.center_truncation_exponent
            );
        }
    }
    let _ = writeln!(out, "Milnor number: {}", a.milnor);
    let s = &a.structure;
    let minimal = match s.enr_minimal {
        Some(true) => "minimal",
        Some(false) => "not minimal",
        None => "absent",
    };
    let _ = writeln!(
        out,
        "structure: {} polars of degree 1 (r - 1 = {}), canyons of degree > 1 pairwise disjoint, degree-1 canyon {}",
        s.degree_one_polars,
        s.r - 1,
        minimal
    );
    match &a.tau {
        Some(t) => {
            let samples: Vec<String> = t.samples.iter().map(|x| x.to_string()).collect();
            let _ = write!(out, "generic directions {}: canyon multiplicities agree, divergence at the degree", samples.join(", "));
            if !t.skipped.is_empty() {
                let skipped: Vec<String> = t.skipped.iter().map(|x| x.to_string()).collect();
                let _ = write!(out, " (skipped non-generic {})", skipped.join(", "));
            }
            out.push('\n');
        }
        None => {
            let _ = writeln!(out, "generic directions: fewer than two usable samples");
        }
    }
    out
}

pub fn polars_text(input: &crate::poly::Poly, form: &MiniregularForm, polars: &[PolarBranch], ctx: &Context, l: &Labels) -> String {
    let mut out = String::new();
    header(&mut out, input, form, ctx, l);
    let _ = writeln!(out, "polars:");
    if polars.is_empty() {
        let _ = writeln!(out, "  none");
    }
    for p in polars {
        let _ = writeln!(out, "  {}", polar_line(p, l));
    }
    out
}

pub fn signature_text(s: &CanyonSignature) -> String {
    let mut out = String::new();
    let e = &s.enr_data;
    let _ = writeln!(
        out,
        "degree-1 canyon: {} polars, multiplicity {}, partial Milnor {}",
        e.degree_one_polars, e.multiplicity, e.partial_milnor
    );
    for c in &s.clusters {
        let _ = writeln!(out, "degree {}:", c.degree);
        for (bi, b) in c.bars.iter().enumerate() {
            let _ = writeln!(
                out,
                "  bar {}: h = {}, height {}, {} roots",
                bi + 1,
                b.key.h,
                b.key.bar_co_slope,
                b.key.root_count
            );
            for class in &b.classes {
                let summaries: Vec<String> = class
                    .canyons
                    .iter()
                    .map(|x| format!("(multiplicity {}, h = {}, partial Milnor {})", x.multiplicity, x.h, x.partial_milnor))
                    .collect();
                let _ = writeln!(out, "    profile {}: {}", class.profile, summaries.join(" "));
            }
        }
    }
    let contacts = &s.inter_cluster_contacts;
    let mut k = 0;
    while k < contacts.len() {
        let ic = &contacts[k];
        let n = contacts[k..].iter().take_while(|o| *o == ic).count();
        let _ = write!(
            out,
            "contact {} between classes {}.{}.{} and {}.{}.{}",
            ic.contact,
            ic.a.cluster + 1,
            ic.a.bar + 1,
            ic.a.class + 1,
            ic.b.cluster + 1,
            ic.b.bar + 1,
            ic.b.class + 1
        );
        if n > 1 {
            let _ = write!(out, " ({} pairs)", n);
        }
        out.push('\n');
        k += n;
    }
    out
}
