//! Machine-readable facet summaries of a model's rows and cuts.

use serde::Serialize;

use super::oracle::{self, MAX_GUARDS};
use super::{check_ec_facet, check_sc_facet, check_trivial_facets, is_full_circulant, EcFailure, ScFailure, TrivialReport};
use crate::geom::GeomError;
use crate::model::{CutKind, Model};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Failure {
    Sc(ScFailure),
    Ec(EcFailure),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutReport {
    pub kind: CutKind,
    /// Witness ids of the cut.
    pub witnesses: Vec<usize>,
    pub rhs: u32,
    /// Verdict of the combinatorial conditions; null when they do not apply.
    pub facet: Option<bool>,
    pub failure: Option<Failure>,
    /// Why the conditions do not apply.
    pub error: Option<String>,
    /// Verdict of exhaustive enumeration, when the guard set is small enough.
    pub oracle: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleTrivial {
    pub lower: Vec<bool>,
    pub upper: Vec<bool>,
    pub witness: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetReport {
    pub num_guards: usize,
    pub num_witnesses: usize,
    pub trivial: TrivialReport,
    pub trivial_oracle: Option<OracleTrivial>,
    pub cuts: Vec<CutReport>,
    pub full_circulant: Option<bool>,
}

/// Checks every bound, witness row and cut of `model`. The exhaustive
/// oracle runs when `oracle` is set and the model has at most
/// [`MAX_GUARDS`] guards.
pub fn facet_report(model: &Model, oracle: bool) -> FacetReport {
    let m = model.matrix();
    let ng = m.num_guards();
    let use_oracle = oracle && ng <= MAX_GUARDS;
    let trivial_oracle = use_oracle.then(|| OracleTrivial {
        lower: (0..ng).map(|g| oracle::lower_bound_is_facet(m, g)).collect(),
        upper: (0..ng).map(|g| oracle::upper_bound_is_facet(m, g)).collect(),
        witness: (0..m.num_witnesses())
            .map(|w| oracle::is_facet(m, &oracle::witness_coefficients(m, w), 1))
            .collect(),
    });
    let cuts = model
        .cuts()
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            let ids: Vec<usize> = c
                .witnesses
                .iter()
                .filter_map(|p| model.witnesses().id_of(p))
                .collect();
            let verdict = match c.kind {
                CutKind::Sc => check_sc_facet(m, &ids).map(|v| (v.facet, v.failure.map(Failure::Sc))),
                CutKind::Ec => check_ec_facet(m, &ids).map(|v| (v.facet, v.failure.map(Failure::Ec))),
            };
            let coefs: Vec<u32> = (0..ng).map(|g| model.cut_coef(ci, g)).collect();
            let (facet, failure, error) = match verdict {
                Ok((f, fail)) => (Some(f), fail, None),
                Err(e) => (None, None, Some(e.to_string())),
            };
            CutReport {
                kind: c.kind,
                witnesses: ids,
                rhs: c.rhs,
                facet,
                failure,
                error,
                oracle: use_oracle.then(|| oracle::is_facet(m, &coefs, c.rhs)),
            }
        })
        .collect();
    FacetReport {
        num_guards: ng,
        num_witnesses: m.num_witnesses(),
        trivial: check_trivial_facets(m),
        trivial_oracle,
        cuts,
        full_circulant: None,
    }
}

/// [`facet_report`] plus the full-circulant test.
pub fn facet_report_with_circulant(model: &Model, oracle: bool) -> Result<FacetReport, GeomError> {
    let mut r = facet_report(model, oracle);
    r.full_circulant = Some(is_full_circulant(model)?);
    Ok(r)
}
