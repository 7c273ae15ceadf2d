//! The graded ring `R = sum_n H^0(P^1, floor(nD)) chi^n` of a couple.
//!
//! With `E_n = floor(nD)` a section of degree `n` is `P(t) / prod (t - y_i)^{e_i}`
//! over the finite points, where `P` has degree at most `deg E_n`; the
//! condition at infinity is exactly that degree bound. Sections are stored
//! as the polynomial `P`, and the product of `P_a` and `P_b` is
//! `P_a P_b prod (t - y_i)^{delta_i}` with
//! `delta_i = e_i(a+b) - e_i(a) - e_i(b)` in `{0, 1}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::divisor::{CurveCouple, MarkedPoint};
use crate::error::{ConeError, Result};
use crate::linalg::{Echelon, Matrix};
use crate::scalar::{ceil_i64, denom_i64, numer_i64, Rational};
use crate::QPoly;

/// Exponent pattern of the correction factor `prod (t - y_i)^{delta_i}`.
type Pattern = Vec<u8>;

/// The section ring of a couple with all points given coordinates.
#[derive(Clone, Debug)]
pub struct SectionRing {
    /// `(y, p, q)` for each finite point with coefficient `p/q`.
    finite: Vec<(Rational, i64, i64)>,
    infinity: (i64, i64),
    period: i64,
    degree: Rational,
}

impl SectionRing {
    pub fn new(c: &CurveCouple) -> Self {
        let c = c.with_coordinates();
        let mut finite = Vec::new();
        let mut infinity = (0, 1);
        for (p, x) in c.divisor().terms() {
            let pq = (numer_i64(x), denom_i64(x));
            match p {
                MarkedPoint::Finite(y) => finite.push((y.clone(), pq.0, pq.1)),
                MarkedPoint::Infinity => infinity = pq,
                MarkedPoint::Label(_) => unreachable!("coordinates assigned"),
            }
        }
        SectionRing {
            finite,
            infinity,
            period: c.period(),
            degree: c.degree(),
        }
    }

    pub fn period(&self) -> i64 {
        self.period
    }

    pub fn degree(&self) -> &Rational {
        &self.degree
    }

    fn floors(&self, n: usize) -> impl Iterator<Item = i64> + '_ {
        let n = n as i64;
        self.finite.iter().map(move |(_, p, q)| Integer::div_floor(&(n * p), q))
    }

    /// `deg floor(nD)`.
    pub fn floor_degree(&self, n: usize) -> i64 {
        let (p, q) = self.infinity;
        self.floors(n).sum::<i64>() + Integer::div_floor(&(n as i64 * p), &q)
    }

    pub fn h0(&self, n: usize) -> usize {
        (self.floor_degree(n) + 1).max(0) as usize
    }

    fn pattern(&self, a: usize, b: usize) -> Pattern {
        let ea = self.floors(a);
        let eb = self.floors(b);
        let eab = self.floors(a + b);
        eab.zip(ea.zip(eb))
            .map(|(s, (x, y))| {
                let d = s - x - y;
                debug_assert!(d == 0 || d == 1);
                d as u8
            })
            .collect()
    }

    fn factor(&self, pattern: &[u8]) -> QPoly {
        pattern
            .iter()
            .zip(&self.finite)
            .filter(|(d, _)| **d == 1)
            .fold(QPoly::one(), |acc, (_, (y, _, _))| &acc * &QPoly::linear_root(y.clone()))
    }

    /// Product of a degree-`a` and a degree-`b` section.
    pub fn multiply(&self, pa: &QPoly, a: usize, pb: &QPoly, b: usize) -> QPoly {
        let out = &(pa * pb) * &self.factor(&self.pattern(a, b));
        debug_assert!(out.degree().map_or(true, |d| d as i64 <= self.floor_degree(a + b)));
        out
    }

    /// Largest `m` with `h0(m) = 0`, or 0 when there is none.
    pub fn last_gap(&self) -> usize {
        let k = self.finite.len() as i64 + 1;
        // floor(mD) has degree > m deg D - k, so no gaps once m deg D >= k - 1
        let horizon = ceil_i64(&(Rational::from_integer(BigInt::from(k)) / &self.degree)).max(0) as usize + 1;
        (1..=horizon).rev().find(|&m| self.h0(m) == 0).unwrap_or(0)
    }

    /// Beyond this degree `R_n = R_{n-L} R_L`, so no generator can appear.
    pub fn generator_certificate(&self) -> usize {
        self.period as usize + self.last_gap()
    }
}

pub fn h0(c: &CurveCouple, n: usize) -> usize {
    SectionRing::new(c).h0(n)
}

/// Hilbert function and its rational generating function
/// `N(T) / ((1 - T)(1 - T^L))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertData {
    pub values: Vec<usize>,
    #[serde(rename = "L")]
    pub period: i64,
    pub numerator: Vec<i64>,
}

impl HilbertData {
    /// Coefficients `0..=n` of the power series of `N(T) / ((1-T)(1-T^L))`.
    pub fn expand(&self, n: usize) -> Vec<i64> {
        let l = self.period as usize;
        // divide by (1 - T): prefix sums; then by (1 - T^L): strided sums
        let mut a = vec![0i64; n + 1];
        for (k, c) in self.numerator.iter().enumerate().take(n + 1) {
            a[k] = *c;
        }
        for k in 1..=n {
            a[k] += a[k - 1];
        }
        for k in l..=n {
            a[k] += a[k - l];
        }
        a
    }
}

pub fn hilbert_series(c: &CurveCouple) -> HilbertData {
    hilbert_series_through(c, 0)
}

/// Same as [`hilbert_series`] with `values` covering at least `0..=n`.
pub fn hilbert_series_through(c: &CurveCouple, n: usize) -> HilbertData {
    let ring = SectionRing::new(c);
    let l = ring.period as usize;
    let horizon = ring.last_gap() + 2 * l + 2;
    let values: Vec<usize> = (0..=horizon.max(n)).map(|k| ring.h0(k)).collect();
    let h = |k: isize| if k < 0 { 0 } else { values[k as usize] as i64 };
    let mut numerator: Vec<i64> = (0..=horizon as isize)
        .map(|k| h(k) - h(k - 1) - h(k - l as isize) + h(k - l as isize - 1))
        .collect();
    while numerator.last() == Some(&0) {
        numerator.pop();
    }
    HilbertData {
        values,
        period: ring.period,
        numerator,
    }
}

/// A section `P(t) / prod (t - y_i)^{e_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    #[serde(with = "crate::scalar::qstr_vec")]
    pub numerator: Vec<Rational>,
    pub poles: Vec<(MarkedPoint, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionBasis {
    pub degree: usize,
    pub elements: Vec<Section>,
}

pub fn section_basis(c: &CurveCouple, n: usize) -> SectionBasis {
    let ring = SectionRing::new(c);
    let poles: Vec<(MarkedPoint, i64)> = ring
        .finite
        .iter()
        .zip(ring.floors(n))
        .filter(|(_, e)| *e != 0)
        .map(|((y, _, _), e)| (MarkedPoint::Finite(y.clone()), e))
        .collect();
    let elements = (0..ring.h0(n))
        .map(|j| Section {
            numerator: QPoly::monomial(j).coeffs().to_vec(),
            poles: poles.clone(),
        })
        .collect();
    SectionBasis { degree: n, elements }
}

/// Rank and cokernel of `R_a x R_b -> R_{a+b}` by elimination over all
/// products of basis elements.
pub fn multiplication_rank(c: &CurveCouple, a: usize, b: usize) -> (usize, usize) {
    let ring = SectionRing::new(c);
    let target = ring.h0(a + b);
    let mut span = Echelon::new(target);
    for i in 0..ring.h0(a) {
        for j in 0..ring.h0(b) {
            let p = ring.multiply(&QPoly::monomial(i), a, &QPoly::monomial(j), b);
            span.insert(p.to_vec(target));
        }
    }
    (span.rank(), target - span.rank())
}

/// Minimal homogeneous generators, each a monomial `t^j` in the numerator
/// coordinates of its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub degrees: Vec<usize>,
    pub sections: Vec<QPoly>,
    /// Generators were searched through this degree; none exist beyond.
    pub certified_through: usize,
}

/// Span of `R_a R_{n-a}` for `0 < a < n`.
fn decomposable_part(ring: &SectionRing, n: usize) -> Echelon<Rational> {
    let dim = ring.h0(n);
    let mut span = Echelon::new(dim);
    if dim == 0 {
        return span;
    }
    // products of polynomials of degree <= d_a and <= d_b span degree <= d_a + d_b
    let mut best: BTreeMap<Pattern, i64> = BTreeMap::new();
    for a in 1..=n / 2 {
        if ring.h0(a) == 0 || ring.h0(n - a) == 0 {
            continue;
        }
        let bound = ring.floor_degree(a) + ring.floor_degree(n - a);
        let e = best.entry(ring.pattern(a, n - a)).or_insert(bound);
        *e = (*e).max(bound);
    }
    if best.iter().any(|(p, &b)| p.iter().all(|&d| d == 0) && b + 1 == dim as i64) {
        for j in 0..dim {
            let mut v = vec![Rational::zero(); dim];
            v[j] = Rational::one();
            span.insert(v);
        }
        return span;
    }
    for (pattern, bound) in best {
        let f = ring.factor(&pattern);
        for j in 0..=bound as usize {
            span.insert(f.shift(j).to_vec(dim));
            if span.is_full() {
                return span;
            }
        }
    }
    span
}

pub fn generators(c: &CurveCouple, gen_bound: usize) -> Result<Generators> {
    let ring = SectionRing::new(c);
    let cert = ring.generator_certificate();
    let mut degrees = Vec::new();
    let mut sections = Vec::new();
    for n in 1..=cert {
        let span = decomposable_part(&ring, n);
        let new = span.non_pivots();
        if !new.is_empty() && n > gen_bound {
            return Err(ConeError::BoundTooSmall {
                degree: n as u64,
                bound: gen_bound as u64,
            });
        }
        for j in new {
            degrees.push(n);
            sections.push(QPoly::monomial(j));
        }
    }
    Ok(Generators {
        degrees,
        sections,
        certified_through: cert,
    })
}

pub fn default_bound(c: &CurveCouple) -> usize {
    let inv = ceil_i64(&c.degree().recip()).max(1);
    (4 * c.period() * inv) as usize
}

/// A polynomial in the generators with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equation {
    /// `(coefficient, exponents)`, exponents lexicographically descending.
    pub terms: Vec<(i64, Vec<u32>)>,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (c, e)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { format!("x{i}") } else { format!("x{i}^{x}") })
                .collect();
            let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
            let abs = c.abs();
            let body = if abs == 1 { mono } else { format!("{abs}*{mono}") };
            match (k, *c < 0) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

impl Equation {
    /// Clears denominators and content; the first term gets a positive sign.
    fn from_rational(terms: Vec<(Rational, Vec<u32>)>) -> Self {
        let lcm = terms
            .iter()
            .fold(BigInt::one(), |acc, (c, _)| acc.lcm(c.denom()));
        let ints: Vec<(BigInt, Vec<u32>)> = terms
            .into_iter()
            .map(|(c, e)| ((c * Rational::from_integer(lcm.clone())).to_integer(), e))
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, (c, _)| acc.gcd(c));
        if ints.first().is_some_and(|(c, _)| c.is_negative()) {
            g = -g;
        }
        Equation {
            terms: ints
                .into_iter()
                .map(|(c, e)| (crate::scalar::big_to_i64(&(c / &g)), e))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generator_degrees: Vec<usize>,
    pub relation_degrees: Vec<usize>,
    pub equations: Option<Vec<String>>,
    pub search_bound: usize,
    pub relation_bound: usize,
    pub verified_through: usize,
    /// No generator exists above this degree.
    pub generators_certified_through: usize,
}

/// Exponent vectors of weighted degree `n`, lexicographically descending.
fn monomials(weights: &[usize], n: usize) -> Vec<Vec<u32>> {
    fn rec(w: &[usize], n: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if w.is_empty() {
            if n == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        if w.len() == 1 {
            if n % w[0] == 0 {
                prefix.push((n / w[0]) as u32);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        for k in (0..=n / w[0]).rev() {
            prefix.push(k as u32);
            rec(&w[1..], n - k * w[0], prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(weights, n, &mut Vec::new(), &mut out);
    out
}

/// Evaluates monomials in the generators, memoized across degrees.
struct Evaluator<'a> {
    ring: &'a SectionRing,
    gens: &'a Generators,
    memo: HashMap<Vec<u32>, QPoly>,
}

impl<'a> Evaluator<'a> {
    fn new(ring: &'a SectionRing, gens: &'a Generators) -> Self {
        let mut memo = HashMap::new();
        memo.insert(vec![0; gens.degrees.len()], QPoly::one());
        Evaluator { ring, gens, memo }
    }

    fn weight(&self, e: &[u32]) -> usize {
        e.iter().zip(&self.gens.degrees).map(|(k, d)| *k as usize * d).sum()
    }

    fn eval(&mut self, e: &[u32]) -> QPoly {
        if let Some(p) = self.memo.get(e) {
            return p.clone();
        }
        let i = e.iter().rposition(|&k| k > 0).expect("nonzero monomial");
        let mut rest = e.to_vec();
        rest[i] -= 1;
        let base = self.eval(&rest);
        let w = self.weight(&rest);
        let d = self.gens.degrees[i];
        let p = self.ring.multiply(&base, w, &self.gens.sections[i], d);
        self.memo.insert(e.to_vec(), p.clone());
        p
    }
}

/// Minimal relations among at most four generators, found as kernel
/// elements of the evaluation map on monomials modulo multiples of lower
/// relations.
fn monomial_relations(
    ring: &SectionRing,
    gens: &Generators,
    through: usize,
) -> Vec<(usize, Equation)> {
    let g = gens.degrees.len();
    let mut found: Vec<(usize, Vec<(Rational, Vec<u32>)>)> = Vec::new();
    if g <= 2 {
        return Vec::new();
    }
    let mut ev = Evaluator::new(ring, gens);
    for n in 1..=through {
        let monos = monomials(&gens.degrees, n);
        if monos.is_empty() {
            continue;
        }
        let index: HashMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let dim = ring.h0(n);
        let cols: Vec<Vec<Rational>> = monos.iter().map(|m| ev.eval(m).to_vec(dim)).collect();
        let eval = Matrix::from_fn(dim, monos.len(), |i, j| cols[j][i].clone());
        let kernel = eval.nullspace();
        if kernel.is_empty() {
            continue;
        }
        let mut lower = Echelon::new(monos.len());
        for (deg, rel) in &found {
            for mult in monomials(&gens.degrees, n - deg) {
                let mut v = vec![Rational::zero(); monos.len()];
                for (c, e) in rel {
                    let prod: Vec<u32> = e.iter().zip(&mult).map(|(a, b)| a + b).collect();
                    v[index[&prod]] += c;
                }
                lower.insert(v);
            }
        }
        // reduced rows lead with the lexicographically largest monomial
        let (basis, _) = Matrix::from_rows(kernel).rref();
        for row in basis.to_rows() {
            if lower.insert(row.clone()) {
                let terms = row
                    .into_iter()
                    .zip(&monos)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(c, m)| (c, m.clone()))
                    .collect();
                found.push((n, terms));
            }
        }
        // a prime of height one in a polynomial ring is principal
        if g == 3 && !found.is_empty() {
            break;
        }
    }
    found
        .into_iter()
        .map(|(n, terms)| (n, Equation::from_rational(terms)))
        .collect()
}

/// Relation counts per degree from the first Koszul homology:
/// `r_n = sum_i h(n - d_i) - h(n) - rank(d_2)_n` for `n >= 1`.
pub fn koszul_relation_counts(c: &CurveCouple, gens: &Generators, through: usize) -> Vec<usize> {
    let ring = SectionRing::new(c);
    let g = gens.degrees.len();
    let mut counts = vec![0usize; through + 1];
    for (n, slot) in counts.iter_mut().enumerate().skip(1) {
        let blocks: Vec<usize> = gens
            .degrees
            .iter()
            .map(|&d| if n >= d { ring.h0(n - d) } else { 0 })
            .collect();
        let total: usize = blocks.iter().sum();
        let offsets: Vec<usize> = blocks
            .iter()
            .scan(0, |acc, b| {
                let o = *acc;
                *acc += b;
                Some(o)
            })
            .collect();
        let mut image = Echelon::new(total);
        'pairs: for i in 0..g {
            for j in i + 1..g {
                let (di, dj) = (gens.degrees[i], gens.degrees[j]);
                if n < di + dj {
                    continue;
                }
                let m = n - di - dj;
                for k in 0..ring.h0(m) {
                    let r = QPoly::monomial(k);
                    let mut v = vec![Rational::zero(); total];
                    // e_j x_i r - e_i x_j r
                    let xi_r = ring.multiply(&r, m, &gens.sections[i], di);
                    let xj_r = ring.multiply(&r, m, &gens.sections[j], dj);
                    for (t, c) in xi_r.to_vec(blocks[j]).into_iter().enumerate() {
                        v[offsets[j] + t] += c;
                    }
                    for (t, c) in xj_r.to_vec(blocks[i]).into_iter().enumerate() {
                        v[offsets[i] + t] -= c;
                    }
                    image.insert(v);
                    if image.is_full() {
                        break 'pairs;
                    }
                }
            }
        }
        *slot = total - ring.h0(n) - image.rank();
    }
    counts
}

pub fn presentation(c: &CurveCouple, gen_bound: usize, rel_bound: usize) -> Result<Presentation> {
    let ring = SectionRing::new(c);
    let gens = generators(c, gen_bound)?;
    let g = gens.degrees.len();
    let (relation_degrees, equations) = if g <= 4 {
        let rels = monomial_relations(&ring, &gens, rel_bound);
        let degrees = rels.iter().map(|(n, _)| *n).collect();
        let eqs = rels.iter().map(|(_, e)| e.to_string()).collect();
        (degrees, Some(eqs))
    } else {
        let counts = koszul_relation_counts(c, &gens, rel_bound);
        let degrees = counts
            .iter()
            .enumerate()
            .flat_map(|(n, &k)| std::iter::repeat(n).take(k))
            .collect();
        (degrees, None)
    };
    Ok(Presentation {
        generator_degrees: gens.degrees,
        relation_degrees,
        equations,
        search_bound: gen_bound,
        relation_bound: rel_bound,
        verified_through: 2 * gen_bound.max(rel_bound),
        generators_certified_through: gens.certified_through,
    })
}

/// Minimal relations with their equations, at most four generators.
pub fn equations(c: &CurveCouple, gen_bound: usize, rel_bound: usize) -> Result<Vec<(usize, Equation)>> {
    let ring = SectionRing::new(c);
    let gens = generators(c, gen_bound)?;
    if gens.degrees.len() > 4 {
        return Err(ConeError::Internal("explicit equations need at most four generators".into()));
    }
    Ok(monomial_relations(&ring, &gens, rel_bound))
}

pub fn embedding_dimension(c: &CurveCouple) -> Result<usize> {
    Ok(generators(c, default_bound(c))?.degrees.len())
}

pub fn is_smooth(c: &CurveCouple) -> Result<bool> {
    Ok(embedding_dimension(c)? == 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn pt(x: i64) -> MarkedPoint {
        MarkedPoint::at(x)
    }

    fn couple(terms: &[(MarkedPoint, i64, i64)]) -> CurveCouple {
        CurveCouple::from_fractions(terms).unwrap()
    }

    fn a3() -> CurveCouple {
        couple(&[(pt(0), 1, 2), (pt(1), 1, 2)])
    }

    #[test]
    fn h0_examples() {
        for n in 0..20 {
            assert_eq!(h0(&couple(&[(pt(0), 1, 1)]), n), n + 1);
            assert_eq!(h0(&a3(), n), 2 * (n / 2) + 1);
        }
        let c = couple(&[(pt(0), 1, 2), (MarkedPoint::Infinity, -1, 1), (pt(1), 3, 4)]);
        assert_eq!(h0(&c, 1), 0);
        assert_eq!(h0(&c, 0), 1);
    }

    #[test]
    fn series_examples() {
        assert_eq!(hilbert_series(&couple(&[(pt(0), 1, 1)])).numerator, vec![1]);
        let h = hilbert_series(&a3());
        assert_eq!((h.numerator.clone(), h.period), (vec![1, 0, 1], 2));
        assert_eq!(hilbert_series(&couple(&[(pt(0), 2, 1)])).numerator, vec![1, 1]);
        let c = couple(&[(pt(0), 1, 2), (MarkedPoint::Infinity, -1, 1), (pt(1), 3, 4)]);
        let h = hilbert_series_through(&c, 60);
        let e = h.expand(60);
        for n in 0..=60 {
            assert_eq!(e[n], h.values[n] as i64);
        }
    }

    #[test]
    fn basis_examples() {
        let b = section_basis(&couple(&[(MarkedPoint::Infinity, 1, 1)]), 1);
        assert_eq!(b.elements.len(), 2);
        assert!(b.elements[0].poles.is_empty());
        let b = section_basis(&couple(&[(pt(0), 1, 2)]), 2);
        assert_eq!(b.elements.len(), 2);
        assert_eq!(b.elements[0].poles, vec![(pt(0), 1)]);
        let b = section_basis(&a3(), 2);
        assert_eq!(b.elements.len(), 3);
        assert_eq!(b.elements[2].numerator, vec![rat(0, 1), rat(0, 1), rat(1, 1)]);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(multiplication_rank(&couple(&[(pt(0), 1, 1)]), 1, 1), (3, 0));
        assert_eq!(multiplication_rank(&a3(), 1, 1), (1, 2));
        assert_eq!(multiplication_rank(&couple(&[(pt(0), 2, 1)]), 1, 1), (5, 0));
    }

    #[test]
    fn plane_and_quadric_cone() {
        let p = presentation(&couple(&[(pt(0), 1, 1)]), 4, 4).unwrap();
        assert_eq!(p.generator_degrees, vec![1, 1]);
        assert!(p.relation_degrees.is_empty());
        let p = presentation(&couple(&[(pt(0), 2, 1)]), 4, 4).unwrap();
        assert_eq!(p.generator_degrees, vec![1, 1, 1]);
        assert_eq!(p.relation_degrees, vec![2]);
        assert_eq!(p.equations.unwrap(), vec!["x0*x2 - x1^2".to_string()]);
    }

    #[test]
    fn a_odd_presentations() {
        for n in 2..=4 {
            let c = couple(&[(pt(0), 1, n), (MarkedPoint::Infinity, 1, n)]);
            let p = presentation(&c, default_bound(&c), default_bound(&c)).unwrap();
            let n = n as usize;
            assert_eq!(p.generator_degrees, vec![1, n, n]);
            assert_eq!(p.relation_degrees, vec![2 * n]);
            assert_eq!(p.equations.unwrap(), vec![format!("x0^{} - x1*x2", 2 * n)]);
        }
    }

    #[test]
    fn koszul_agrees_on_a3() {
        let c = a3();
        let gens = generators(&c, 8).unwrap();
        assert_eq!(gens.degrees, vec![1, 2, 2]);
        let counts = koszul_relation_counts(&c, &gens, 8);
        assert_eq!(counts.iter().sum::<usize>(), 1);
        assert_eq!(counts[4], 1);
    }

    #[test]
    fn bound_too_small() {
        let c = couple(&[(pt(0), 1, 5)]);
        assert!(matches!(generators(&c, 1), Err(ConeError::BoundTooSmall { .. })));
    }

    #[test]
    fn embedding_dimension_examples() {
        assert_eq!(embedding_dimension(&couple(&[(pt(0), 1, 1)])).unwrap(), 2);
        assert!(is_smooth(&couple(&[(pt(0), 1, 1)])).unwrap());
        assert_eq!(embedding_dimension(&couple(&[(pt(0), 2, 1)])).unwrap(), 3);
        assert_eq!(embedding_dimension(&a3()).unwrap(), 3);
        assert!(is_smooth(&couple(&[(pt(0), 1, 2)])).unwrap());
    }

    #[test]
    fn equation_text() {
        let e = Equation::from_rational(vec![
            (rat(-1, 2), vec![2, 0]),
            (rat(3, 4), vec![0, 1]),
        ]);
        assert_eq!(e.to_string(), "2*x0^2 - 3*x1");
        assert_eq!(monomials(&[1, 2], 4), vec![vec![4, 0], vec![2, 1], vec![0, 2]]);
    }
}
