//! Q-divisors on the projective line and the couple `(P^1, D)`.
//!
//! A cone surface singularity with an effective `k*`-action is determined by
//! an ample Q-divisor `D = sum (p_i/q_i) D_i` on `P^1`; this module holds that
//! data together with the pointwise index calculus (Weil index, Cartier
//! index, isotropy order), the canonical divisor of the partial resolution
//! and the principal divisors `div(f chi^u)` on the cone.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ConeError, Result};
use crate::scalar::{
    as_integer, denom_i64, floor_i64, format_rational, frac, int, numer_i64, qstr, Rational,
};

/// A point of `P^1`: a finite coordinate, infinity, or a named point that
/// receives a coordinate later.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "PointRepr", into = "PointRepr")]
pub enum MarkedPoint {
    Finite(Rational),
    Infinity,
    Label(String),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "t")]
enum PointRepr {
    #[serde(rename = "fin")]
    Fin {
        #[serde(with = "qstr")]
        x: Rational,
    },
    #[serde(rename = "inf")]
    Inf,
    #[serde(rename = "lbl")]
    Lbl { name: String },
}

impl From<PointRepr> for MarkedPoint {
    fn from(r: PointRepr) -> Self {
        match r {
            PointRepr::Fin { x } => MarkedPoint::Finite(x),
            PointRepr::Inf => MarkedPoint::Infinity,
            PointRepr::Lbl { name } => MarkedPoint::Label(name),
        }
    }
}

impl From<MarkedPoint> for PointRepr {
    fn from(p: MarkedPoint) -> Self {
        match p {
            MarkedPoint::Finite(x) => PointRepr::Fin { x },
            MarkedPoint::Infinity => PointRepr::Inf,
            MarkedPoint::Label(name) => PointRepr::Lbl { name },
        }
    }
}

impl MarkedPoint {
    pub fn at(x: i64) -> Self {
        MarkedPoint::Finite(int(x))
    }

    pub fn label(name: &str) -> Self {
        MarkedPoint::Label(name.to_string())
    }

    pub fn is_label(&self) -> bool {
        matches!(self, MarkedPoint::Label(_))
    }
}

impl fmt::Display for MarkedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarkedPoint::Finite(x) => write!(f, "[{}]", format_rational(x)),
            MarkedPoint::Infinity => write!(f, "[inf]"),
            MarkedPoint::Label(n) => write!(f, "[{n}]"),
        }
    }
}

/// The coordinate sequence `0, 1, inf, 2, 3, ...`.
pub fn coordinate_sequence() -> impl Iterator<Item = MarkedPoint> {
    [MarkedPoint::at(0), MarkedPoint::at(1), MarkedPoint::Infinity]
        .into_iter()
        .chain((2..).map(MarkedPoint::at))
}

#[derive(Serialize, Deserialize)]
struct TermRepr<C> {
    point: MarkedPoint,
    coeff: C,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct QCoeff(#[serde(with = "qstr")] Rational);

/// `sum c_P [P]` with rational coefficients; zero coefficients are never
/// stored, and `Rational` keeps every coefficient reduced with positive
/// denominator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QDivisorP1 {
    terms: BTreeMap<MarkedPoint, Rational>,
}

impl QDivisorP1 {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fails if a point appears twice.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MarkedPoint, Rational)>,
    {
        let mut map = BTreeMap::new();
        for (p, c) in terms {
            if map.contains_key(&p) {
                return Err(ConeError::InvalidDivisor(format!("point {p} appears twice")));
            }
            map.insert(p, c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(QDivisorP1 { terms: map })
    }

    pub fn single(p: MarkedPoint, c: Rational) -> Self {
        Self::from_terms([(p, c)]).expect("one term")
    }

    pub fn terms(&self) -> &BTreeMap<MarkedPoint, Rational> {
        &self.terms
    }

    pub fn coeff(&self, p: &MarkedPoint) -> Rational {
        self.terms.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = &MarkedPoint> {
        self.terms.keys()
    }

    pub fn degree(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, c| a + c)
    }

    /// `floor(n D)` taken pointwise.
    pub fn floor_multiple(&self, n: u64) -> IntegralDivisorP1 {
        let n = int(n as i64);
        IntegralDivisorP1::from_terms(
            self.terms
                .iter()
                .map(|(p, c)| (p.clone(), floor_i64(&(c * &n)))),
        )
    }

    pub fn add(&self, other: &QDivisorP1) -> QDivisorP1 {
        let mut terms = self.terms.clone();
        for (p, c) in &other.terms {
            let e = terms.entry(p.clone()).or_insert_with(Rational::zero);
            *e += c;
        }
        terms.retain(|_, c| !c.is_zero());
        QDivisorP1 { terms }
    }

    pub fn scale(&self, k: &Rational) -> QDivisorP1 {
        let mut terms: BTreeMap<_, _> = self
            .terms
            .iter()
            .map(|(p, c)| (p.clone(), c * k))
            .collect();
        terms.retain(|_, c| !c.is_zero());
        QDivisorP1 { terms }
    }

    /// `None` unless every coefficient is an integer.
    pub fn to_integral(&self) -> Option<IntegralDivisorP1> {
        let mut out = BTreeMap::new();
        for (p, c) in &self.terms {
            out.insert(p.clone(), as_integer(c)?);
        }
        Some(IntegralDivisorP1 { terms: out })
    }

    pub fn weil_index_at(&self, p: &MarkedPoint) -> u64 {
        self.terms.get(p).map_or(1, |c| denom_i64(c) as u64)
    }

    /// On a smooth curve every Weil divisor is Cartier, so the local Cartier
    /// index of `D` is the denominator of its coefficient.
    pub fn cartier_index_at(&self, p: &MarkedPoint) -> u64 {
        self.weil_index_at(p)
    }

    /// Points whose coefficient is not an integer.
    pub fn fractional_points(&self) -> impl Iterator<Item = (&MarkedPoint, &Rational)> {
        self.terms.iter().filter(|(_, c)| !c.is_integer())
    }

    pub fn has_labels(&self) -> bool {
        self.terms.keys().any(MarkedPoint::is_label)
    }

    /// Replaces labels, in sorted order, by the first unused coordinates of
    /// `0, 1, inf, 2, 3, ...`.
    pub fn with_coordinates(&self) -> QDivisorP1 {
        if !self.has_labels() {
            return self.clone();
        }
        let used: BTreeSet<&MarkedPoint> = self.terms.keys().filter(|p| !p.is_label()).collect();
        let mut free = coordinate_sequence().filter(|p| !used.contains(p));
        let mut terms = BTreeMap::new();
        for (p, c) in &self.terms {
            let q = if p.is_label() {
                free.next().expect("infinite sequence")
            } else {
                p.clone()
            };
            terms.insert(q, c.clone());
        }
        QDivisorP1 { terms }
    }
}

impl fmt::Display for QDivisorP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({}){}", format_rational(c), p)?;
        }
        Ok(())
    }
}

impl Serialize for QDivisorP1 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermRepr<QCoeff>> = self
            .terms
            .iter()
            .map(|(p, c)| TermRepr {
                point: p.clone(),
                coeff: QCoeff(c.clone()),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QDivisorP1 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<TermRepr<QCoeff>>::deserialize(d)?;
        QDivisorP1::from_terms(v.into_iter().map(|t| (t.point, t.coeff.0)))
            .map_err(serde::de::Error::custom)
    }
}

/// An integral divisor on `P^1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<TermRepr<i64>>", into = "Vec<TermRepr<i64>>")]
pub struct IntegralDivisorP1 {
    terms: BTreeMap<MarkedPoint, i64>,
}

impl From<Vec<TermRepr<i64>>> for IntegralDivisorP1 {
    fn from(v: Vec<TermRepr<i64>>) -> Self {
        IntegralDivisorP1::from_terms(v.into_iter().map(|t| (t.point, t.coeff)))
    }
}

impl From<IntegralDivisorP1> for Vec<TermRepr<i64>> {
    fn from(d: IntegralDivisorP1) -> Self {
        d.terms
            .into_iter()
            .map(|(point, coeff)| TermRepr { point, coeff })
            .collect()
    }
}

impl IntegralDivisorP1 {
    /// Repeated points are summed and zero coefficients dropped.
    pub fn from_terms<I: IntoIterator<Item = (MarkedPoint, i64)>>(terms: I) -> Self {
        let mut map = BTreeMap::new();
        for (p, c) in terms {
            *map.entry(p).or_insert(0) += c;
        }
        map.retain(|_, c| *c != 0);
        IntegralDivisorP1 { terms: map }
    }

    pub fn terms(&self) -> &BTreeMap<MarkedPoint, i64> {
        &self.terms
    }

    pub fn coeff(&self, p: &MarkedPoint) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn to_rational(&self) -> QDivisorP1 {
        QDivisorP1::from_terms(self.terms.iter().map(|(p, c)| (p.clone(), int(*c))))
            .expect("distinct points")
    }
}

impl fmt::Display for IntegralDivisorP1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_rational().fmt(f)
    }
}

/// The canonical divisor of `P^1`, fixed as `-2[inf]`.
pub fn canonical_p1() -> IntegralDivisorP1 {
    IntegralDivisorP1::from_terms([(MarkedPoint::Infinity, -2)])
}

/// The couple `(P^1, D)` with `D` ample, i.e. of positive degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CurveCouple {
    divisor: QDivisorP1,
}

impl<'de> Deserialize<'de> for CurveCouple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            divisor: QDivisorP1,
        }
        let raw = Raw::deserialize(d)?;
        CurveCouple::new(raw.divisor).map_err(serde::de::Error::custom)
    }
}

impl CurveCouple {
    pub fn new(divisor: QDivisorP1) -> Result<Self> {
        let deg = divisor.degree();
        if !deg.is_positive() {
            return Err(ConeError::NotAmple(format!("degree {} is not positive", format_rational(&deg))));
        }
        Ok(CurveCouple { divisor })
    }

    /// Convenience constructor from `(point, p, q)` triples.
    pub fn from_fractions(terms: &[(MarkedPoint, i64, i64)]) -> Result<Self> {
        let d = QDivisorP1::from_terms(
            terms
                .iter()
                .map(|(pt, p, q)| (pt.clone(), Rational::new((*p).into(), (*q).into()))),
        )?;
        CurveCouple::new(d)
    }

    pub fn divisor(&self) -> &QDivisorP1 {
        &self.divisor
    }

    pub fn degree(&self) -> Rational {
        self.divisor.degree()
    }

    pub fn with_coordinates(&self) -> CurveCouple {
        CurveCouple {
            divisor: self.divisor.with_coordinates(),
        }
    }

    /// Order of the stabilizer of a non-vertex point lying over `p`.
    pub fn isotropy_order(&self, p: &MarkedPoint) -> u64 {
        self.divisor.cartier_index_at(p)
    }

    pub fn max_isotropy(&self) -> u64 {
        self.divisor
            .terms()
            .values()
            .map(|c| denom_i64(c) as u64)
            .max()
            .unwrap_or(1)
    }

    /// lcm of the denominators `q_i`.
    pub fn period(&self) -> i64 {
        crate::scalar::lcm_all(self.divisor.terms().values().map(denom_i64))
    }

    /// `(point, p, q)` for every point with non-integral coefficient, with
    /// `p/q` the fractional part.
    pub fn fractional_data(&self) -> Vec<(MarkedPoint, i64, i64)> {
        self.divisor
            .fractional_points()
            .map(|(pt, c)| {
                let f = frac(c);
                (pt.clone(), numer_i64(&f), denom_i64(&f))
            })
            .collect()
    }

    pub fn normal_form(&self) -> NormalForm {
        normal_form(self)
    }

    pub fn canonical_data_on_tilde(&self) -> TildeCanonical {
        TildeCanonical {
            strict_transforms: self
                .divisor
                .terms()
                .iter()
                .map(|(p, c)| (p.clone(), denom_i64(c) - 1))
                .collect(),
            exceptional: -1,
            base_canonical: canonical_p1(),
        }
    }

    /// `div(f chi^u)` on the partial resolution, where `div_Y(f) = h`.
    pub fn principal_divisor_on_cone(&self, h: &IntegralDivisorP1, u: i64) -> Result<ConePrincipalDivisor> {
        if h.degree() != 0 {
            return Err(ConeError::NonPrincipal(h.degree().to_string()));
        }
        let points: BTreeSet<&MarkedPoint> = self.divisor.points().chain(h.terms().keys()).collect();
        let mut strict = BTreeMap::new();
        for p in points {
            let c = self.divisor.coeff(p);
            let q = int(denom_i64(&c));
            let value = &q * (&c * int(u) + int(h.coeff(p)));
            let v = as_integer(&value).ok_or_else(|| {
                ConeError::Internal(format!("non-integral coefficient {value} over {p}"))
            })?;
            if v != 0 {
                strict.insert(p.clone(), v);
            }
        }
        Ok(ConePrincipalDivisor {
            exceptional: u,
            strict_transforms: strict,
        })
    }
}

impl fmt::Display for CurveCouple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.divisor.fmt(f)
    }
}

/// Coefficients of `K` on the partial resolution `X~ -> X`: `q_i - 1` on the
/// strict transform over each point of `D`, `-1` on `E_0`, plus the pullback
/// of `K_{P^1}` (represented by `base_canonical`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TildeCanonical {
    pub strict_transforms: BTreeMap<MarkedPoint, i64>,
    pub exceptional: i64,
    pub base_canonical: IntegralDivisorP1,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConePrincipalDivisor {
    /// Coefficient on `E_0`.
    pub exceptional: i64,
    pub strict_transforms: BTreeMap<MarkedPoint, i64>,
}

/// Linear-equivalence invariant of a couple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NormalFormKey {
    /// Fractional parts in `(0, 1)`, descending.
    #[serde(with = "crate::scalar::qstr_vec")]
    pub fractional: Vec<Rational>,
    #[serde(with = "qstr")]
    pub degree: Rational,
}

impl fmt::Display for NormalFormKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fr: Vec<String> = self.fractional.iter().map(format_rational).collect();
        write!(f, "({}; {})", fr.join(","), format_rational(&self.degree))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub couple: CurveCouple,
    pub key: NormalFormKey,
    /// More than three fractional points: positions carry cross-ratio moduli
    /// and the key no longer determines the isomorphism class.
    pub moduli_present: bool,
}

fn normal_form(c: &CurveCouple) -> NormalForm {
    let degree = c.degree();
    let mut fracs: Vec<(MarkedPoint, Rational)> = c
        .divisor
        .fractional_points()
        .map(|(p, x)| (p.clone(), frac(x)))
        .collect();
    // descending fractional part, then denominator, then numerator
    fracs.sort_by(|(pa, a), (pb, b)| {
        b.cmp(a)
            .then_with(|| b.denom().cmp(a.denom()))
            .then_with(|| b.numer().cmp(a.numer()))
            .then_with(|| pa.cmp(pb))
    });
    let moduli_present = fracs.len() > 3;
    let key = NormalFormKey {
        fractional: fracs.iter().map(|(_, f)| f.clone()).collect(),
        degree: degree.clone(),
    };
    let integral_part = &degree - key.fractional.iter().fold(Rational::zero(), |a, f| a + f);
    let positions: Vec<MarkedPoint> = if moduli_present {
        fracs.iter().map(|(p, _)| p.clone()).collect()
    } else {
        coordinate_sequence().take(fracs.len()).collect()
    };
    let anchor = positions.first().cloned().unwrap_or_else(|| MarkedPoint::at(0));
    let mut terms: BTreeMap<MarkedPoint, Rational> = positions
        .into_iter()
        .zip(key.fractional.iter().cloned())
        .collect();
    *terms.entry(anchor).or_insert_with(Rational::zero) += integral_part;
    let divisor = QDivisorP1::from_terms(terms).expect("distinct positions");
    NormalForm {
        couple: CurveCouple::new(divisor).expect("degree preserved"),
        key,
        moduli_present,
    }
}

/// `1` when `x` is an integer.
pub fn denominator(x: &Rational) -> u64 {
    if x.is_integer() {
        1
    } else {
        denom_i64(x) as u64
    }
}
