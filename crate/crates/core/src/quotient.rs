//! The log Fano quotient `(P^1, B)` of a cone and the discrepancy calculus
//! that links it to the cone: the decomposition `m(K + B) - uD = H` and the
//! resulting log discrepancy of the exceptional divisor over the vertex.

use num_traits::{One, Signed};
use serde::Serialize;

use crate::divisor::{canonical_p1, CurveCouple, IntegralDivisorP1, MarkedPoint, QDivisorP1};
use crate::error::{ConeError, Result};
use crate::scalar::{as_integer, denom_i64, format_rational, int, lcm_all, qstr, rat, Rational};

/// A boundary on `P^1` with standard coefficients `1 - 1/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandardPair {
    pub boundary: QDivisorP1,
}

impl StandardPair {
    /// Fails unless every coefficient is `1 - 1/q` for an integer `q >= 1`.
    pub fn new(boundary: QDivisorP1) -> Result<Self> {
        for (p, c) in boundary.terms() {
            let r = Rational::one() - c;
            if !r.is_positive() || !r.recip().is_integer() {
                return Err(ConeError::InvalidDivisor(format!(
                    "coefficient {} at {p} is not standard",
                    format_rational(c)
                )));
            }
        }
        Ok(StandardPair { boundary })
    }

    pub fn coeff(&self, p: &MarkedPoint) -> Rational {
        self.boundary.coeff(p)
    }

    /// `deg(K + B)`.
    pub fn log_canonical_degree(&self) -> Rational {
        self.boundary.degree() - int(2)
    }
}

pub fn log_fano_quotient(c: &CurveCouple) -> StandardPair {
    let terms = c
        .divisor()
        .terms()
        .iter()
        .filter(|(_, x)| !x.is_integer())
        .map(|(p, x)| (p.clone(), Rational::one() - rat(1, denom_i64(x))));
    StandardPair {
        boundary: QDivisorP1::from_terms(terms).expect("distinct points"),
    }
}

pub fn curve_log_discrepancy(pair: &StandardPair, p: &MarkedPoint) -> Rational {
    Rational::one() - pair.coeff(p)
}

pub fn check_epsilon(eps: &Rational) -> Result<()> {
    if eps.is_positive() && *eps <= Rational::one() {
        Ok(())
    } else {
        Err(ConeError::BadEpsilon(format_rational(eps)))
    }
}

pub fn is_eps_lc_pair(pair: &StandardPair, eps: &Rational) -> Result<bool> {
    check_epsilon(eps)?;
    let bound = Rational::one() - eps;
    Ok(pair.boundary.terms().values().all(|c| *c <= bound))
}

pub fn is_log_fano(pair: &StandardPair) -> bool {
    pair.boundary.terms().values().all(|c| *c < Rational::one())
        && pair.log_canonical_degree().is_negative()
}

/// `m (K + B) - u D = H` with `m > 0` minimal, `u < 0` and `H` integral of
/// degree zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexData {
    pub m: i64,
    pub u: i64,
    pub h: IntegralDivisorP1,
}

/// `m (K + B) - u D` as a Q-divisor.
pub fn decomposition_residual(c: &CurveCouple, m: i64, u: i64) -> QDivisorP1 {
    let c = c.with_coordinates();
    let kb = canonical_p1()
        .to_rational()
        .add(&log_fano_quotient(&c).boundary);
    kb.scale(&int(m)).add(&c.divisor().scale(&int(-u)))
}

fn require_log_fano(c: &CurveCouple) -> Result<StandardPair> {
    let pair = log_fano_quotient(c);
    if !is_log_fano(&pair) {
        return Err(ConeError::NotLogFano(format_rational(&pair.log_canonical_degree())));
    }
    Ok(pair)
}

/// Scans `m = 1, 2, ...` and returns the first `m` for which `u = m deg(K+B)
/// / deg D` is an integer and the residual is integral.
pub fn vertex_decomposition(c: &CurveCouple) -> Result<VertexData> {
    let pair = require_log_fano(c)?;
    let ratio = pair.log_canonical_degree() / c.degree();
    // m = lcm(q_i) * den(ratio) always works
    let limit = c.period() * denom_i64(&ratio);
    for m in 1..=limit {
        let Some(u) = as_integer(&(&ratio * int(m))) else {
            continue;
        };
        if let Some(h) = decomposition_residual(c, m, u).to_integral() {
            debug_assert_eq!(h.degree(), 0);
            return Ok(VertexData { m, u, h });
        }
    }
    Err(ConeError::Internal(format!(
        "no vertex decomposition found for m <= {limit}"
    )))
}

/// Log discrepancy of `E_0`, that is `-u/m = -deg(K+B)/deg D`.
pub fn vertex_log_discrepancy(c: &CurveCouple) -> Result<Rational> {
    let v = vertex_decomposition(c)?;
    Ok(rat(-v.u, v.m))
}

/// Log discrepancy of the invariant divisor of the cone over a point of
/// `P^1`, computed as `W (1 - b)`. Always 1.
pub fn horizontal_log_discrepancy(c: &CurveCouple, p: &MarkedPoint) -> Result<Rational> {
    let pair = require_log_fano(c)?;
    let w = int(c.divisor().weil_index_at(p) as i64);
    let a = w * curve_log_discrepancy(&pair, p);
    if !a.is_one() {
        return Err(ConeError::Internal(format!(
            "horizontal log discrepancy {} at {p}",
            format_rational(&a)
        )));
    }
    Ok(a)
}

pub fn cartier_index_of_kx(c: &CurveCouple) -> Result<i64> {
    Ok(vertex_decomposition(c)?.m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpsConditions {
    #[serde(with = "qstr")]
    pub vertex_log_discrepancy: Rational,
    pub vertex_ok: bool,
    #[serde(with = "qstr")]
    pub pair_threshold: Rational,
    pub pair_ok: bool,
    pub max_isotropy: u64,
    pub isotropy_ok: bool,
}

impl EpsConditions {
    pub fn all(&self) -> bool {
        self.vertex_ok && self.pair_ok && self.isotropy_ok
    }
}

/// Conditions every member of the class of `eps`-lc cones with isotropy at
/// most `n` satisfies. They are not sufficient.
pub fn necessary_eps_conditions(c: &CurveCouple, eps: &Rational, n: u64) -> Result<EpsConditions> {
    check_epsilon(eps)?;
    if n == 0 {
        return Err(ConeError::BadIsotropyBound);
    }
    let a = vertex_log_discrepancy(c)?;
    let threshold = eps / int(n as i64);
    let pair = log_fano_quotient(c);
    let iso = c.max_isotropy();
    Ok(EpsConditions {
        vertex_ok: a >= *eps,
        vertex_log_discrepancy: a,
        pair_ok: is_eps_lc_pair(&pair, &threshold)?,
        pair_threshold: threshold,
        max_isotropy: iso,
        isotropy_ok: iso <= n,
    })
}

/// `lcm` of the denominators of `D`, for callers that only hold the pair.
pub fn boundary_period(pair: &StandardPair) -> i64 {
    lcm_all(
        pair.boundary
            .terms()
            .values()
            .map(|b| as_integer(&(Rational::one() - b).recip()).expect("standard coefficient")),
    )
}

/// `true` when `D` is integral, so that `B` vanishes.
pub fn is_trivial(pair: &StandardPair) -> bool {
    pair.boundary.is_empty()
}
