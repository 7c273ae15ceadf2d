//! Exhaustive catalogs of `eps`-lc cone surface singularities with bounded
//! isotropy.
//!
//! Up to isomorphism a couple over `P^1` with at most three fractional
//! points is determined by its fractional parts and its degree, since any
//! three points can be moved to `0, 1, inf`. Candidates are generated in
//! that normal form and filtered with the resolution oracle.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::demazure::{embedding_dimension, hilbert_series};
use crate::divisor::{coordinate_sequence, CurveCouple, NormalFormKey, QDivisorP1};
use crate::error::{ConeError, Result};
use crate::quotient::{
    cartier_index_of_kx, check_epsilon, necessary_eps_conditions, vertex_log_discrepancy,
};
use crate::resolution::{build_graph, is_eps_lc_x, link_determinant, mld_vertex, summarize, GraphSummary};
use crate::scalar::{floor_i64, format_rational, int, qstr, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchParams {
    #[serde(with = "qstr")]
    pub epsilon: Rational,
    #[serde(rename = "N")]
    pub isotropy_bound: u64,
}

impl SearchParams {
    pub fn new(epsilon: Rational, isotropy_bound: u64) -> Result<Self> {
        check_epsilon(&epsilon)?;
        if isotropy_bound == 0 {
            return Err(ConeError::BadIsotropyBound);
        }
        Ok(SearchParams {
            epsilon,
            isotropy_bound,
        })
    }

    fn validate(&self) -> Result<()> {
        check_epsilon(&self.epsilon)?;
        if self.isotropy_bound == 0 {
            return Err(ConeError::BadIsotropyBound);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    /// Most fractional points a log Fano quotient can carry, or 0 when no
    /// denominator is admissible.
    pub k_max: usize,
    pub q_min: i64,
    pub q_max: i64,
    #[serde(with = "qstr")]
    pub degree_max: Rational,
    /// Degrees available to integral divisors.
    pub integral_degrees: Vec<i64>,
}

impl SearchBounds {
    pub fn q_values(&self) -> std::ops::RangeInclusive<i64> {
        self.q_min..=self.q_max
    }
}

pub fn search_bounds(params: &SearchParams) -> Result<SearchBounds> {
    params.validate()?;
    let n = params.isotropy_bound as i64;
    let by_eps = floor_i64(&(int(n) / &params.epsilon));
    let q_max = n.min(by_eps);
    let degree_max = int(2) / &params.epsilon;
    Ok(SearchBounds {
        k_max: if q_max >= 2 { 3 } else { 0 },
        q_min: 2,
        q_max,
        integral_degrees: (1..=floor_i64(&degree_max)).collect(),
        degree_max,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub key: NormalFormKey,
    pub couple: CurveCouple,
    #[serde(with = "qstr")]
    pub degree: Rational,
    /// `(p, q)` of each fractional part, in key order.
    pub fractional: Vec<(i64, i64)>,
    #[serde(with = "qstr")]
    pub a_e0: Rational,
    #[serde(with = "qstr")]
    pub mld: Rational,
    pub cartier_index_kx: i64,
    pub max_isotropy: u64,
    pub link_determinant: i64,
    pub hilbert_numerator: Vec<i64>,
    #[serde(rename = "L")]
    pub hilbert_period: i64,
    pub embedding_dimension: usize,
    pub graph: GraphSummary,
}

/// Reduced fractions `p/q` with `q` in range, largest first.
fn fractions(bounds: &SearchBounds) -> Vec<(i64, i64)> {
    let mut out: Vec<(i64, i64)> = bounds
        .q_values()
        .flat_map(|q| (1..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q)))
        .collect();
    out.sort_by(|a, b| rat(b.0, b.1).cmp(&rat(a.0, a.1)));
    out
}

/// Non-increasing index sequences of length `0..=k_max` into `fr`.
fn fractional_types(fr: &[(i64, i64)], k_max: usize) -> Vec<Vec<(i64, i64)>> {
    fn extend(fr: &[(i64, i64)], start: usize, left: usize, cur: &mut Vec<(i64, i64)>, out: &mut Vec<Vec<(i64, i64)>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for i in start..fr.len() {
            cur.push(fr[i]);
            extend(fr, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(fr, 0, k_max, &mut Vec::new(), &mut out);
    out.retain(|t| {
        t.iter()
            .fold(Rational::zero(), |a, &(_, q)| a + Rational::one() - rat(1, q))
            < int(2)
    });
    out
}

/// Every normal-form couple within the bounds, before the `eps`-lc filter.
pub fn candidates(params: &SearchParams) -> Result<Vec<CurveCouple>> {
    let bounds = search_bounds(params)?;
    let mut out = Vec::new();
    for t in fractional_types(&fractions(&bounds), bounds.k_max) {
        let s = t.iter().fold(Rational::zero(), |a, &(p, q)| a + rat(p, q));
        let lo = floor_i64(&-&s) + 1;
        let hi = floor_i64(&(&bounds.degree_max - &s));
        for j in lo..=hi {
            let mut terms: Vec<(crate::MarkedPoint, Rational)> = coordinate_sequence()
                .zip(t.iter())
                .map(|(pt, &(p, q))| (pt, rat(p, q)))
                .collect();
            match terms.first_mut() {
                Some((_, c)) => *c += int(j),
                None => terms.push((crate::MarkedPoint::at(0), int(j))),
            }
            out.push(CurveCouple::new(QDivisorP1::from_terms(terms)?)?);
        }
    }
    Ok(out)
}

pub fn catalog_entry(c: &CurveCouple) -> Result<CatalogEntry> {
    let nf = c.normal_form();
    let c = nf.couple;
    let g = build_graph(&c)?;
    let hs = hilbert_series(&c);
    Ok(CatalogEntry {
        fractional: nf
            .key
            .fractional
            .iter()
            .map(|x| (crate::scalar::numer_i64(x), crate::scalar::denom_i64(x)))
            .collect(),
        degree: c.degree(),
        a_e0: vertex_log_discrepancy(&c)?,
        mld: mld_vertex(&c)?,
        cartier_index_kx: cartier_index_of_kx(&c)?,
        max_isotropy: c.max_isotropy(),
        link_determinant: link_determinant(&g),
        hilbert_numerator: hs.numerator,
        hilbert_period: hs.period,
        embedding_dimension: embedding_dimension(&c)?,
        graph: summarize(&g),
        key: nf.key,
        couple: c,
    })
}

/// All isomorphism classes of `eps`-lc cones with isotropy at most `N`,
/// sorted by degree and then by key.
pub fn enumerate(params: &SearchParams) -> Result<Vec<CatalogEntry>> {
    let cands = candidates(params)?;
    let kept: Vec<Option<CatalogEntry>> = cands
        .par_iter()
        .map(|c| {
            if c.max_isotropy() > params.isotropy_bound || !is_eps_lc_x(c, &params.epsilon)? {
                return Ok(None);
            }
            catalog_entry(c).map(Some)
        })
        .collect::<Result<_>>()?;
    let mut entries: Vec<CatalogEntry> = kept.into_iter().flatten().collect();
    entries.sort_by(|a, b| a.degree.cmp(&b.degree).then_with(|| a.key.cmp(&b.key)));
    entries.dedup_by(|a, b| a.key == b.key);
    Ok(entries)
}

pub fn mld_spectrum(catalog: &[CatalogEntry]) -> Vec<Rational> {
    catalog
        .iter()
        .map(|e| e.mld.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditFailure {
    pub key: String,
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub entries: usize,
    pub failures: Vec<AuditFailure>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

fn audit_entry(e: &CatalogEntry, params: &SearchParams) -> Vec<String> {
    let mut why = Vec::new();
    let c = &e.couple;
    let eps = &params.epsilon;
    let n = params.isotropy_bound;
    let nf = c.normal_form();
    if nf.key != e.key {
        why.push(format!("stored key {} differs from {}", e.key, nf.key));
    }
    if nf.key.fractional.len() > 3 {
        why.push("more than three fractional points".into());
    }
    if c.max_isotropy() > n {
        why.push(format!("isotropy {} exceeds {n}", c.max_isotropy()));
    }
    if c.max_isotropy() != e.max_isotropy {
        why.push("stored isotropy is stale".into());
    }
    match necessary_eps_conditions(c, eps, n) {
        Ok(cond) => {
            if !cond.vertex_ok {
                why.push(format!("a_E0 = {} below eps", format_rational(&cond.vertex_log_discrepancy)));
            }
            if !cond.pair_ok {
                why.push(format!("quotient is not {}-lc", format_rational(&cond.pair_threshold)));
            }
        }
        Err(err) => why.push(err.to_string()),
    }
    match is_eps_lc_x(c, eps) {
        Ok(true) => {}
        Ok(false) => why.push("resolution oracle rejects eps-lc".into()),
        Err(err) => why.push(err.to_string()),
    }
    match (vertex_log_discrepancy(c), build_graph(c)) {
        (Ok(a), Ok(g)) => {
            if a != e.a_e0 {
                why.push("stored a_E0 is stale".into());
            }
            if a != g.central_log_discrepancy() {
                why.push("a_E0 disagrees with the resolution graph".into());
            }
            if &a * c.degree() > int(2) {
                why.push("a_E0 * degree exceeds 2".into());
            }
        }
        (Err(err), _) | (_, Err(err)) => why.push(err.to_string()),
    }
    why
}

/// Re-checks every entry against the necessary conditions and the
/// resolution oracle; one failure per offending entry.
pub fn audit_catalog(catalog: &[CatalogEntry], params: &SearchParams) -> AuditReport {
    let mut failures: Vec<AuditFailure> = catalog
        .par_iter()
        .filter_map(|e| {
            let reasons = audit_entry(e, params);
            (!reasons.is_empty()).then(|| AuditFailure {
                key: e.key.to_string(),
                reasons,
            })
        })
        .collect();
    let mut seen = BTreeSet::new();
    for e in catalog {
        if !seen.insert(&e.key) {
            failures.push(AuditFailure {
                key: e.key.to_string(),
                reasons: vec!["duplicate key".into()],
            });
        }
    }
    AuditReport {
        entries: catalog.len(),
        failures,
    }
}

/// `true` when every key of `small` occurs in `large`.
pub fn is_contained(small: &[CatalogEntry], large: &[CatalogEntry]) -> bool {
    let keys: BTreeSet<&NormalFormKey> = large.iter().map(|e| &e.key).collect();
    small.iter().all(|e| keys.contains(&e.key))
}

/// `min mld >= eps` and `a_E0 * degree <= 2` across a catalog.
pub fn spectrum_is_bounded(catalog: &[CatalogEntry], eps: &Rational) -> bool {
    catalog.iter().all(|e| {
        e.mld.clone().min(int(1)) >= *eps && !(&e.a_e0 * &e.degree - int(2)).is_positive()
    })
}
