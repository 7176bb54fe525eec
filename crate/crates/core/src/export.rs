//! Plot data: CSV curves with fixed headers and LF line endings, and JSON
//! sidecars.

use serde::Serialize;

use crate::descsys::{DescriptionSystem, KraftReport};
use crate::logbits::LogBits;
use crate::predict::SnoopPoint;
use crate::structfn::{StructureProfile, SufficientStatistic, Triple};

pub const PROFILE_HEADER: &str = "alpha,h,lambda,beta,witness_program,is_critical";

fn cell(v: LogBits) -> String {
    v.to_string()
}

fn rows(p: &StructureProfile, prefix: &str, out: &mut String) {
    for a in 0..=p.alpha_max {
        let i = a as usize;
        let witness = p.lambda_witness[i]
            .as_ref()
            .map_or(String::new(), |w| w.program.to_token());
        out.push_str(&format!(
            "{prefix}{a},{},{},{},{witness},{}\n",
            cell(p.h[i]),
            cell(p.lambda[i]),
            cell(p.beta[i]),
            p.critical.contains(&a)
        ));
    }
}

/// One profile as CSV; the witness column is the MDL witness program.
pub fn profile_csv(p: &StructureProfile) -> String {
    let mut out = format!("{PROFILE_HEADER}\n");
    rows(p, "", &mut out);
    out
}

/// Several profiles in one CSV with a leading `x` column.
pub fn profiles_csv(ps: &[StructureProfile]) -> String {
    let mut out = format!("x,{PROFILE_HEADER}\n");
    for p in ps {
        rows(p, &format!("{},", p.x.to_token()), &mut out);
    }
    out
}

/// What the CSV leaves out.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileSidecar<'a> {
    pub x: String,
    pub k_x: u32,
    pub c_sub: i64,
    pub kraft: &'a KraftReport,
    pub critical: &'a [u32],
    pub mss: &'a Option<SufficientStatistic>,
    pub triples: &'a [Triple],
    pub infeasible: bool,
}

pub fn profile_sidecar<'a>(sys: &'a DescriptionSystem, p: &'a StructureProfile) -> ProfileSidecar<'a> {
    ProfileSidecar {
        x: p.x.to_token(),
        k_x: p.k_x,
        c_sub: sys.c_sub(),
        kraft: sys.kraft(),
        critical: &p.critical,
        mss: &p.mss,
        triples: &p.triples,
        infeasible: p.infeasible,
    }
}

pub const SNOOP_HEADER: &str = "alpha,loss,witness_program";

/// Losses print exactly when they are logarithms of dyadic rationals,
/// otherwise to six decimals; `inf` for an empty class or a zero product.
pub fn snoop_csv(curve: &[SnoopPoint]) -> String {
    let mut out = format!("{SNOOP_HEADER}\n");
    for pt in curve {
        let loss = match &pt.loss {
            None => "inf".to_string(),
            Some(l) => match l.exact() {
                Some(v) => v.to_string(),
                None => format!("{:.6}", l.bits()),
            },
        };
        let w = pt.witness_program.as_ref().map_or(String::new(), |p| p.to_token());
        out.push_str(&format!("{},{loss},{w}\n", pt.alpha));
    }
    out
}

/// `alpha,value` rows for any curve.
pub fn curve_csv(name: &str, values: &[LogBits]) -> String {
    let mut out = format!("alpha,{name}\n");
    for (a, v) in values.iter().enumerate() {
        out.push_str(&format!("{a},{v}\n"));
    }
    out
}
