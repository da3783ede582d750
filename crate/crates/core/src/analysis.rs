//! The analysis pipeline: normalization, polars, canyons, checks and signature, with
//! automatic escalation of the truncation horizon and the ball precision.

use crate::canyon::{
    group_canyons, milnor_total, miniregularize, tau_independence_check, structure_report, GradientCanyon,
    MiniregularForm, TauReport, StructureReport,
};
use crate::cluster::{compare, signature, CanyonSignature, Verdict};
use crate::error::{Error, Result};
use crate::number::GaussRat;
use crate::poly::Poly;
use crate::series::{Exponent, Order};
use crate::solver::{generic_polars, polars, Context, PolarBranch};

pub const DEFAULT_PRECISION: u32 = 256;
pub const MAX_PRECISION: u32 = 4096;
const INITIAL_HORIZON: i64 = 16;

/// User-facing settings of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    pub precision: u32,
    /// A fixed horizon; when absent the horizon is raised on demand.
    pub horizon: Option<Exponent>,
    pub taus: Vec<GaussRat>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { precision: DEFAULT_PRECISION, horizon: None, taus: crate::canyon::default_taus() }
    }
}

/// Horizon past which clusters of roots that have not separated are taken to be multiple roots:
/// `(n - 1)^2 + n + 1` for a germ of degree `n`. Distinct roots of `f_x` separate below the
/// order of the discriminant, which this bounds.
pub fn horizon_cap(f: &Poly) -> Exponent {
    let n = f.total_degree() as i64;
    Exponent::int((n - 1) * (n - 1) + n + 1)
}

/// Runs `step`, doubling the horizon on `IndeterminateOrder` (up to the cap) and the
/// precision on `PrecisionExhausted` (up to `MAX_PRECISION`).
pub fn escalate<T>(f: &Poly, settings: &Settings, mut step: impl FnMut(&Context) -> Result<T>) -> Result<(T, Context)> {
    let cap = horizon_cap(f);
    let fixed = settings.horizon.is_some();
    let start = settings.horizon.unwrap_or_else(|| cap.min(Exponent::int(INITIAL_HORIZON)));
    let mut ctx = Context::new(settings.precision, start, cap);
    loop {
        let needed = match step(&ctx) {
            Ok(t) => return Ok((t, ctx)),
            Err(Error::IndeterminateOrder { needed }) => needed,
            Err(Error::HorizonExceeded { requested, .. }) => requested + Exponent::int(1),
            Err(Error::PrecisionExhausted) if ctx.precision < MAX_PRECISION => {
                ctx.precision *= 2;
                continue;
            }
            Err(e) => return Err(e),
        };
        if fixed || ctx.horizon >= cap {
            return Err(Error::IndeterminateOrder { needed: needed.max(ctx.horizon + ctx.horizon) });
        }
        ctx.horizon = cap.min(needed.max(ctx.horizon + ctx.horizon));
    }
}

/// Everything computed about one germ.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub input: Poly,
    pub form: MiniregularForm,
    pub context: Context,
    pub polars: Vec<PolarBranch>,
    pub canyons: Vec<GradientCanyon>,
    pub milnor: i64,
    pub structure: StructureReport,
    /// `None` when fewer than two direction samples were usable.
    pub tau: Option<TauReport>,
    pub signature: CanyonSignature,
}

impl Analysis {
    /// Gradient degree of each polar, read off its canyon.
    pub fn polar_degree(&self, k: usize) -> Order {
        let p = &self.polars[k];
        self.canyons
            .iter()
            .find(|c| c.members.iter().any(|m| m == p))
            .map(|c| c.degree)
            .expect("every polar lies in a canyon")
    }
}

fn normalize(f: &Poly, settings: &Settings) -> Result<MiniregularForm> {
    let mut prec = settings.precision;
    loop {
        match miniregularize(f, prec) {
            Err(Error::PrecisionExhausted) if prec < MAX_PRECISION => prec *= 2,
            other => return other,
        }
    }
}

/// Runs the full pipeline on a germ.
pub fn analyze(f: &Poly, settings: &Settings) -> Result<Analysis> {
    let form = normalize(f, settings)?;
    let g = &form.f_normalized;
    let ((polars, canyons, milnor, structure, tau, signature), context) = escalate(g, settings, |ctx| {
        let polars = polars(g, ctx)?;
        let canyons = group_canyons(&form, &polars, ctx)?;
        let milnor = milnor_total(&canyons)?;
        let structure = structure_report(&form, &canyons, ctx.precision)?;
        let tau = match tau_independence_check(&form, &canyons, &settings.taus, ctx) {
            Ok(t) => Some(t),
            Err(Error::InvalidInput(_)) => None,
            Err(e) => return Err(e),
        };
        let signature = signature(&form, &canyons, ctx)?;
        Ok((polars, canyons, milnor, structure, tau, signature))
    })?;
    Ok(Analysis { input: f.clone(), form, context, polars, canyons, milnor, structure, tau, signature })
}

/// Polars of a germ in its normalized coordinates.
pub fn polars_of(f: &Poly, settings: &Settings) -> Result<(MiniregularForm, Vec<PolarBranch>, Context)> {
    let form = normalize(f, settings)?;
    let (ps, ctx) = escalate(&form.f_normalized, settings, |ctx| polars(&form.f_normalized, ctx))?;
    Ok((form, ps, ctx))
}

/// Generic polars of direction `tau` in normalized coordinates.
pub fn generic_polars_of(
    f: &Poly,
    tau: &GaussRat,
    settings: &Settings,
) -> Result<(MiniregularForm, Vec<PolarBranch>, Context)> {
    let form = normalize(f, settings)?;
    let (ps, ctx) = escalate(&form.f_normalized, settings, |ctx| generic_polars(&form.f_normalized, tau, ctx))?;
    Ok((form, ps, ctx))
}

/// The signature of a germ.
pub fn signature_of(f: &Poly, settings: &Settings) -> Result<CanyonSignature> {
    Ok(analyze(f, settings)?.signature)
}

/// Compares the signatures of two germs.
pub fn compare_germs(f: &Poly, g: &Poly, settings: &Settings) -> Result<(Verdict, CanyonSignature, CanyonSignature)> {
    let a = signature_of(f, settings)?;
    let b = signature_of(g, settings)?;
    Ok((compare(&a, &b), a, b))
}

/// The Milnor number as the sum of partial Milnor numbers, without the checks of `analyze`.
pub fn milnor_of(f: &Poly, settings: &Settings) -> Result<i64> {
    let form = normalize(f, settings)?;
    let g = &form.f_normalized;
    let (mu, _) = escalate(g, settings, |ctx| {
        let ps = polars(g, ctx)?;
        milnor_total(&group_canyons(&form, &ps, ctx)?)
    })?;
    Ok(mu)
}
