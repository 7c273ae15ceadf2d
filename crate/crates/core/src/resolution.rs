//! Star-shaped resolution of a cone surface singularity.
//!
//! The partial resolution `X~` has cyclic quotient singularities on `E_0`,
//! one over each point with non-integral coefficient. Resolving those by
//! Hirzebruch-Jung chains gives a star graph whose central self-intersection
//! is forced by `E_0^2 = -deg D` in the rational sense. Discrepancies then
//! come from adjunction on the graph.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::divisor::{CurveCouple, MarkedPoint};
use crate::error::{ConeError, Result};
use crate::linalg::Matrix;
use crate::quotient::{check_epsilon, is_log_fano, log_fano_quotient};
use crate::scalar::{as_integer, denom_i64, format_rational, frac, int, numer_i64, qstr, qstr_vec, rat, Rational};
use crate::QMatrix;

/// The cone `<(0,1), (q,p)>` with `0 < p <= q` coprime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeCone2 {
    q: i64,
    p: i64,
}

impl Serialize for LatticeCone2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.generators().serialize(s)
    }
}

impl LatticeCone2 {
    pub fn new(q: i64, p: i64) -> Result<Self> {
        if q < 1 || p < 1 || p > q || num_integer::gcd(p, q) != 1 {
            return Err(ConeError::InvalidDivisor(format!("cone <(0,1),({q},{p})> not in normal form")));
        }
        Ok(LatticeCone2 { q, p })
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn generators(&self) -> [[i64; 2]; 2] {
        [[0, 1], [self.q, self.p]]
    }

    pub fn is_smooth(&self) -> bool {
        self.q == 1
    }

    /// Rays of the minimal resolution, from `(0,1)` to `(q,p)` inclusive.
    pub fn resolution_rays(&self) -> Vec<[i64; 2]> {
        let mut rays = vec![[0, 1]];
        if self.is_smooth() {
            rays.push([self.q, self.p]);
            return rays;
        }
        // first interior ray sits at x = 1
        rays.push([1, ceil_div(self.p, self.q)]);
        for c in hj_numbers(self) {
            let n = rays.len();
            let (a, b) = (rays[n - 2], rays[n - 1]);
            rays.push([c * b[0] - a[0], c * b[1] - a[1]]);
        }
        rays
    }

    /// `min <A, v>` over nonzero lattice points `v` of the cone, where `A` is
    /// the linear form equal to 1 on both generators.
    pub fn lattice_mld(&self) -> Rational {
        let slope = rat(1 - self.p, self.q);
        (1..self.q)
            .map(|i| &slope * int(i) + int(ceil_div(i * self.p, self.q)))
            .fold(Rational::one(), |m, a| if a < m { a } else { m })
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    num_integer::Integer::div_ceil(&a, &b)
}

/// The continued fraction `q/(q-p) = c_1 - 1/(c_2 - ...)` with `c_j >= 2`.
fn hj_numbers(cone: &LatticeCone2) -> Vec<i64> {
    let (mut a, mut b) = (cone.q, cone.q - cone.p);
    let mut out = Vec::new();
    while b != 0 {
        let c = ceil_div(a, b);
        out.push(c);
        (a, b) = (b, c * b - a);
    }
    out
}

/// Local chart of `X~` over a point of `D`.
pub fn local_cone_at(c: &CurveCouple, p: &MarkedPoint) -> Result<LatticeCone2> {
    let x = frac(&c.divisor().coeff(p));
    if x.is_zero() {
        return Err(ConeError::IntegralPoint(p.to_string()));
    }
    LatticeCone2::new(denom_i64(&x), numer_i64(&x))
}

/// Self-intersections `[-c_1, ..., -c_k]` of the resolution chain of a cone,
/// listed from the `(0,1)` side. Empty for a smooth cone.
pub fn hj_chain(cone: &LatticeCone2) -> Vec<i64> {
    if cone.is_smooth() {
        return Vec::new();
    }
    hj_numbers(cone).into_iter().map(|c| -c).collect()
}

fn chain_matrix(chain: &[i64]) -> QMatrix {
    let k = chain.len();
    Matrix::from_fn(k, k, |i, j| {
        if i == j {
            int(chain[i])
        } else if i.abs_diff(j) == 1 {
            int(1)
        } else {
            Rational::zero()
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionGraph {
    /// Self-intersection of `E_0`.
    pub center: i64,
    pub chain_points: Vec<MarkedPoint>,
    pub chains: Vec<Vec<i64>>,
    /// Vertex 0 is `E_0`, chains follow in order.
    pub matrix: Vec<Vec<i64>>,
    #[serde(with = "qstr_vec")]
    pub discrepancies: Vec<Rational>,
    pub determinant: i64,
}

impl ResolutionGraph {
    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn log_discrepancies(&self) -> Vec<Rational> {
        self.discrepancies.iter().map(|d| d + int(1)).collect()
    }

    pub fn central_log_discrepancy(&self) -> Rational {
        &self.discrepancies[0] + int(1)
    }

    pub fn self_intersections(&self) -> Vec<i64> {
        (0..self.len()).map(|i| self.matrix[i][i]).collect()
    }

    fn qmatrix(&self) -> QMatrix {
        to_qmatrix(&self.matrix)
    }
}

fn to_qmatrix(m: &[Vec<i64>]) -> QMatrix {
    Matrix::from_fn(m.len(), m.len(), |i, j| int(m[i][j]))
}

/// Fractional points in coordinate order, paired with their cones.
fn chart_data(c: &CurveCouple) -> Vec<(MarkedPoint, LatticeCone2)> {
    c.divisor()
        .fractional_points()
        .map(|(p, _)| (p.clone(), local_cone_at(c, p).expect("fractional point")))
        .collect()
}

pub fn build_graph(c: &CurveCouple) -> Result<ResolutionGraph> {
    let c = c.with_coordinates();
    if !is_log_fano(&log_fano_quotient(&c)) {
        return Err(ConeError::NotKlt);
    }
    let charts = chart_data(&c);
    let chains: Vec<Vec<i64>> = charts.iter().map(|(_, cone)| hj_chain(cone)).collect();

    let mut b0 = c.degree();
    for chain in &chains {
        let mut rhs = vec![Rational::zero(); chain.len()];
        rhs[0] = -Rational::one();
        let x = chain_matrix(chain)
            .solve_unique(&rhs)
            .ok_or(ConeError::SingularMatrix)?;
        b0 += &x[0];
    }
    let b0 = as_integer(&b0).ok_or_else(|| {
        ConeError::Internal(format!("central self-intersection {} not integral", format_rational(&b0)))
    })?;

    let n = 1 + chains.iter().map(Vec::len).sum::<usize>();
    let mut m = vec![vec![0i64; n]; n];
    m[0][0] = -b0;
    let mut at = 1;
    for chain in &chains {
        for (j, &s) in chain.iter().enumerate() {
            let v = at + j;
            m[v][v] = s;
            let prev = if j == 0 { 0 } else { v - 1 };
            m[v][prev] = 1;
            m[prev][v] = 1;
        }
        at += chain.len();
    }

    let q = to_qmatrix(&m);
    if !q.is_negative_definite() {
        return Err(ConeError::Internal("intersection matrix is not negative definite".into()));
    }
    let discrepancies = graph_discrepancies(&m)?;
    let determinant = q.determinant().abs();
    let determinant = as_integer(&determinant).expect("integer matrix");
    Ok(ResolutionGraph {
        center: -b0,
        chain_points: charts.into_iter().map(|(p, _)| p).collect(),
        chains,
        matrix: m,
        discrepancies,
        determinant,
    })
}

/// Solves `M d = k` with `k_j = -E_j^2 - 2`.
fn graph_discrepancies(m: &[Vec<i64>]) -> Result<Vec<Rational>> {
    let k: Vec<Rational> = (0..m.len()).map(|i| int(-m[i][i] - 2)).collect();
    to_qmatrix(m).solve_unique(&k).ok_or(ConeError::SingularMatrix)
}

pub fn discrepancies(g: &ResolutionGraph) -> Result<Vec<Rational>> {
    graph_discrepancies(&g.matrix)
}

/// Graph left after contracting every `(-1)`-curve, repeatedly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlownDown {
    pub matrix: Vec<Vec<i64>>,
    #[serde(with = "qstr_vec")]
    pub discrepancies: Vec<Rational>,
    /// Indices into the original graph.
    pub survivors: Vec<usize>,
}

impl BlownDown {
    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn self_intersections(&self) -> Vec<i64> {
        (0..self.matrix.len()).map(|i| self.matrix[i][i]).collect()
    }
}

/// Contracting a `(-1)`-curve `E` replaces the form by `M' = M_rest + v v^T`
/// with `v` the intersections with `E`. Discrepancies of the remaining
/// curves do not change.
pub fn blow_down(g: &ResolutionGraph) -> BlownDown {
    let mut m = g.matrix.clone();
    let mut d = g.discrepancies.clone();
    let mut idx: Vec<usize> = (0..m.len()).collect();
    while let Some(e) = (0..m.len()).find(|&i| m[i][i] == -1) {
        let v: Vec<i64> = (0..m.len()).filter(|&j| j != e).map(|j| m[e][j]).collect();
        let rest: Vec<usize> = (0..m.len()).filter(|&j| j != e).collect();
        m = rest
            .iter()
            .enumerate()
            .map(|(a, &i)| rest.iter().enumerate().map(|(b, &j)| m[i][j] + v[a] * v[b]).collect())
            .collect();
        d.remove(e);
        idx.remove(e);
    }
    BlownDown {
        matrix: m,
        discrepancies: d,
        survivors: idx,
    }
}

/// `2` on an empty configuration, else the least log discrepancy.
pub fn configuration_mld(discrepancies: &[Rational]) -> Rational {
    discrepancies
        .iter()
        .map(|d| d + int(1))
        .min()
        .unwrap_or_else(|| int(2))
}

/// Minimal log discrepancy of the vertex.
pub fn mld_vertex(c: &CurveCouple) -> Result<Rational> {
    let g = build_graph(c)?;
    Ok(configuration_mld(&blow_down(&g).discrepancies))
}

/// Same as [`mld_vertex`] but read off the unreduced star graph.
pub fn mld_vertex_raw(c: &CurveCouple) -> Result<Rational> {
    let g = build_graph(c)?;
    Ok(configuration_mld(&g.discrepancies))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransverseType {
    pub point: MarkedPoint,
    pub cone: LatticeCone2,
    #[serde(with = "qstr")]
    pub mld: Rational,
}

pub fn transverse_types(c: &CurveCouple) -> Result<Vec<TransverseType>> {
    let c = c.with_coordinates();
    if !is_log_fano(&log_fano_quotient(&c)) {
        return Err(ConeError::NotKlt);
    }
    Ok(chart_data(&c)
        .into_iter()
        .map(|(point, cone)| TransverseType {
            point,
            mld: cone.lattice_mld(),
            cone,
        })
        .collect())
}

/// `min(mld_vertex, 1) >= eps`. Away from the vertex a normal surface with
/// this action is smooth, so the vertex decides.
pub fn is_eps_lc_x(c: &CurveCouple, eps: &Rational) -> Result<bool> {
    check_epsilon(eps)?;
    match mld_vertex(c) {
        Ok(mld) => Ok(mld.min(int(1)) >= *eps),
        Err(ConeError::NotKlt) => Ok(false),
        Err(e) => Err(e),
    }
}

pub fn link_determinant(g: &ResolutionGraph) -> i64 {
    let d = g.qmatrix().determinant().abs();
    as_integer(&d).expect("integer matrix")
}

/// Compact description of the graph for catalogs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub center: i64,
    pub chains: Vec<Vec<i64>>,
    pub minimal_self_intersections: Vec<i64>,
    pub smooth: bool,
}

pub fn summarize(g: &ResolutionGraph) -> GraphSummary {
    let bd = blow_down(g);
    GraphSummary {
        center: g.center,
        chains: g.chains.clone(),
        minimal_self_intersections: bd.self_intersections(),
        smooth: bd.is_empty(),
    }
}

/// Multiplicity of each fractional type, for diagnostics.
pub fn chain_census(g: &ResolutionGraph) -> BTreeMap<Vec<i64>, usize> {
    let mut out = BTreeMap::new();
    for c in &g.chains {
        *out.entry(c.clone()).or_insert(0) += 1;
    }
    out
}
