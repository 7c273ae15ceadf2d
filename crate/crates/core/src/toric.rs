//! Toric bases: complete fans with invariant Q-divisors, the cone `sigma_X`
//! of the cone singularity over them, and the lattice formulas for log
//! discrepancies on both sides.
//!
//! Conventions: the support function `phi` of `D = sum c_rho D_rho` takes
//! the value `c_rho` at `v_rho` and is linear on each maximal cone. `D` is
//! ample when `phi` is strictly convex. Then `sigma_X` is spanned by the
//! points `(v_rho, c_rho)` and `(0, ..., 0, 1)` is the valuation of `E_0`.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::divisor::{CurveCouple, MarkedPoint};
use crate::error::{ConeError, Result};
use crate::linalg::{dot, Matrix};
use crate::scalar::{as_integer, denom_i64, format_rational, frac, gcd_all, int, lcm_all, qstr_vec, rat, Rational};
use crate::QMatrix;

pub const DEFAULT_SEED: u64 = 0x636f_6e65;

fn qvec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

pub fn is_primitive(v: &[i64]) -> bool {
    gcd_all(v.iter().copied()) == 1
}

/// The primitive lattice vector on the ray through a nonzero rational vector.
pub fn primitive(v: &[Rational]) -> Vec<i64> {
    let l = lcm_all(v.iter().map(denom_i64));
    let ints: Vec<i64> = v
        .iter()
        .map(|x| as_integer(&(x * int(l))).expect("cleared denominators"))
        .collect();
    let g = gcd_all(ints.iter().copied());
    ints.into_iter().map(|x| x / g).collect()
}

/// Inward normals of the facets of a full-dimensional cone.
fn facet_normals(rays: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    if dim == 1 {
        return vec![vec![if rays[0][0].is_positive() { int(1) } else { int(-1) }]];
    }
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let n = rays.len();
    let mut subset: Vec<usize> = (0..dim - 1).collect();
    loop {
        let m = Matrix::from_rows(subset.iter().map(|&i| rays[i].clone()).collect());
        let ns = m.nullspace();
        if ns.len() == 1 {
            let mut normal = ns[0].clone();
            let vals: Vec<Rational> = rays.iter().map(|r| dot(r, &normal)).collect();
            let pos = vals.iter().any(Signed::is_positive);
            let neg = vals.iter().any(Signed::is_negative);
            if pos != neg {
                if neg {
                    normal = normal.into_iter().map(|x| -x).collect();
                }
                let normal = qvec(&primitive(&normal));
                if !out.contains(&normal) {
                    out.push(normal);
                }
            }
        }
        // next (dim-1)-subset in lexicographic order
        let k = dim - 1;
        let Some(i) = (0..k).rev().find(|&i| subset[i] < n - k + i) else {
            break;
        };
        subset[i] += 1;
        for j in i + 1..k {
            subset[j] = subset[j - 1] + 1;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ConeGeometry {
    normals: Vec<Vec<Rational>>,
}

impl ConeGeometry {
    fn new(rays: &[Vec<Rational>], dim: usize) -> Result<Self> {
        let m = Matrix::from_rows(rays.to_vec());
        if m.rank() != dim {
            return Err(ConeError::InvalidFan("cone is not full-dimensional".into()));
        }
        let normals = facet_normals(rays, dim);
        if normals.is_empty() || Matrix::from_rows(normals.clone()).rank() != dim {
            return Err(ConeError::InvalidFan("cone is not strictly convex".into()));
        }
        Ok(ConeGeometry { normals })
    }

    fn contains(&self, v: &[Rational]) -> bool {
        self.normals.iter().all(|n| !dot(n, v).is_negative())
    }

    fn contains_interior(&self, v: &[Rational]) -> bool {
        self.normals.iter().all(|n| dot(n, v).is_positive())
    }
}

/// A complete fan in `Z^rank`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
    #[serde(skip)]
    geometry: Vec<ConeGeometry>,
}

#[derive(Deserialize)]
struct FanRepr {
    rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
}

impl<'de> Deserialize<'de> for Fan {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FanRepr::deserialize(d)?;
        Fan::new(r.rank, r.rays, r.cones).map_err(serde::de::Error::custom)
    }
}

impl Fan {
    /// Validates primitivity, distinctness, strict convexity and, by
    /// probing every lattice point of a box, completeness and that no two
    /// cones overlap in their interiors.
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        if rank == 0 {
            return Err(ConeError::InvalidFan("rank must be positive".into()));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(ConeError::InvalidFan(format!("ray {i} has wrong length")));
            }
            if !is_primitive(r) {
                return Err(ConeError::NotPrimitive(r.clone()));
            }
            if rays[..i].contains(r) {
                return Err(ConeError::InvalidFan(format!("ray {r:?} repeated")));
            }
        }
        let mut geometry = Vec::new();
        for c in &cones {
            if c.iter().any(|&i| i >= rays.len()) {
                return Err(ConeError::InvalidFan("cone refers to a missing ray".into()));
            }
            let rs: Vec<Vec<Rational>> = c.iter().map(|&i| qvec(&rays[i])).collect();
            geometry.push(ConeGeometry::new(&rs, rank)?);
        }
        if (0..rays.len()).any(|i| !cones.iter().any(|c| c.contains(&i))) {
            return Err(ConeError::InvalidFan("ray not used by any cone".into()));
        }
        let fan = Fan {
            rank,
            rays,
            cones,
            geometry,
        };
        fan.probe()?;
        Ok(fan)
    }

    fn probe(&self) -> Result<()> {
        let radius: i64 = match self.rank {
            1 | 2 => 9,
            3 => 5,
            _ => 2,
        };
        let side = (2 * radius + 1) as usize;
        let total = side.pow(self.rank as u32);
        for idx in 0..total {
            let mut k = idx;
            let v: Vec<i64> = (0..self.rank)
                .map(|_| {
                    let x = (k % side) as i64 - radius;
                    k /= side;
                    x
                })
                .collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let q = qvec(&v);
            let closed = self.geometry.iter().filter(|g| g.contains(&q)).count();
            let open = self.geometry.iter().filter(|g| g.contains_interior(&q)).count();
            if closed == 0 {
                return Err(ConeError::InvalidFan(format!("{v:?} not covered")));
            }
            if open > 1 || (open == 1 && closed > 1) {
                return Err(ConeError::InvalidFan(format!("cones overlap at {v:?}")));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    /// First maximal cone containing `v`.
    pub fn containing_cone(&self, v: &[i64]) -> Result<usize> {
        let q = qvec(v);
        self.geometry
            .iter()
            .position(|g| g.contains(&q))
            .ok_or_else(|| ConeError::NotInSupport(v.to_vec()))
    }

    fn cone_rays(&self, sigma: usize) -> Vec<Vec<Rational>> {
        self.cones[sigma].iter().map(|&i| qvec(&self.rays[i])).collect()
    }

    /// `u` with `<u, v_rho> = values[rho]` on the rays of `sigma`.
    fn linear_form(&self, values: &[Rational], sigma: usize) -> Option<Vec<Rational>> {
        let m = Matrix::from_rows(self.cone_rays(sigma));
        let rhs: Vec<Rational> = self.cones[sigma].iter().map(|&i| values[i].clone()).collect();
        m.solve(&rhs)
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.len() == self.rank)
    }
}

pub fn p1() -> Fan {
    Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).expect("valid fan")
}

/// The fan of `P^d`: rays `e_1, ..., e_d, -(e_1 + ... + e_d)`.
pub fn projective_space(d: usize) -> Fan {
    let mut rays: Vec<Vec<i64>> = (0..d)
        .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
        .collect();
    rays.push(vec![-1; d]);
    let cones = (0..=d)
        .map(|skip| (0..=d).filter(|&i| i != skip).collect())
        .collect();
    Fan::new(d, rays, cones).expect("valid fan")
}

pub fn p1xp1() -> Fan {
    Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
    .expect("valid fan")
}

/// Rays `(1,0), (0,1), (-a,-b)`: the weighted plane `P(a, b, 1)`.
pub fn weighted_plane(a: i64, b: i64) -> Result<Fan> {
    Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![-a, -b]],
        vec![vec![0, 1], vec![1, 2], vec![2, 0]],
    )
}

/// Coefficients `c_rho`, aligned with the rays of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ToricDivisor {
    #[serde(with = "qstr_vec")]
    pub coeffs: Vec<Rational>,
}

impl ToricDivisor {
    pub fn new(fan: &Fan, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != fan.rays.len() {
            return Err(ConeError::InvalidToricDivisor(format!(
                "{} coefficients for {} rays",
                coeffs.len(),
                fan.rays.len()
            )));
        }
        Ok(ToricDivisor { coeffs })
    }

    fn check(&self, fan: &Fan) -> Result<()> {
        if self.coeffs.len() != fan.rays.len() {
            return Err(ConeError::InvalidToricDivisor("length mismatch".into()));
        }
        Ok(())
    }
}

fn form_on(fan: &Fan, values: &[Rational], sigma: usize) -> Result<Vec<Rational>> {
    fan.linear_form(values, sigma)
        .ok_or(ConeError::NonCartierOnCone(sigma))
}

pub fn support_value(fan: &Fan, d: &ToricDivisor, v: &[i64]) -> Result<Rational> {
    d.check(fan)?;
    if v.iter().all(|&x| x == 0) {
        return Ok(Rational::zero());
    }
    let sigma = fan.containing_cone(v)?;
    let u = form_on(fan, &d.coeffs, sigma)?;
    Ok(dot(&u, &qvec(v)))
}

/// Strict convexity of the support function across every wall.
pub fn is_ample(fan: &Fan, d: &ToricDivisor) -> Result<bool> {
    d.check(fan)?;
    for sigma in 0..fan.cones.len() {
        let u = form_on(fan, &d.coeffs, sigma)?;
        for (i, r) in fan.rays.iter().enumerate() {
            if !fan.cones[sigma].contains(&i) && dot(&u, &qvec(r)) >= d.coeffs[i] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn weil_index(fan: &Fan, d: &ToricDivisor, v: &[i64]) -> Result<i64> {
    Ok(denom_i64(&support_value(fan, d, v)?))
}

/// Least `mu` with `mu * u_sigma` integral.
pub fn cartier_index_on_cone(fan: &Fan, d: &ToricDivisor, sigma: usize) -> Result<i64> {
    d.check(fan)?;
    Ok(lcm_all(form_on(fan, &d.coeffs, sigma)?.iter().map(denom_i64)))
}

pub fn cartier_index(fan: &Fan, d: &ToricDivisor) -> Result<i64> {
    (0..fan.cones.len()).try_fold(1, |acc: i64, s| Ok(acc.lcm(&cartier_index_on_cone(fan, d, s)?)))
}

/// `b_rho = 1 - 1/q_rho`.
pub fn quotient_boundary(fan: &Fan, d: &ToricDivisor) -> ToricDivisor {
    ToricDivisor {
        coeffs: d
            .coeffs
            .iter()
            .take(fan.rays.len())
            .map(|c| Rational::one() - rat(1, denom_i64(c)))
            .collect(),
    }
}

/// Log discrepancy of `(Y, B)` at the toric valuation `v`: the piecewise
/// linear function with value `1 - b_rho` at `v_rho`.
pub fn log_discrepancy_y(fan: &Fan, b: &ToricDivisor, v: &[i64]) -> Result<Rational> {
    b.check(fan)?;
    let values: Vec<Rational> = b.coeffs.iter().map(|x| Rational::one() - x).collect();
    let sigma = fan.containing_cone(v)?;
    let u = fan
        .linear_form(&values, sigma)
        .ok_or(ConeError::NotQCartierPair(sigma))?;
    Ok(dot(&u, &qvec(v)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeOfX {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    /// Weil index of `D` at each ray of the fan.
    pub weil: Vec<i64>,
    /// `m` with `<m, r> = 1` on every ray, when it exists.
    #[serde(with = "opt_qvec")]
    pub qgorenstein_form: Option<Vec<Rational>>,
}

mod opt_qvec {
    use serde::Serializer;

    use crate::scalar::{format_rational, Rational};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_seq(v.iter().map(format_rational)),
            None => s.serialize_none(),
        }
    }
}

impl ConeOfX {
    pub fn vertex_valuation(&self) -> Vec<i64> {
        let mut e = vec![0; self.dim];
        e[self.dim - 1] = 1;
        e
    }

    fn ray_matrix(&self) -> QMatrix {
        Matrix::from_rows(self.rays.iter().map(|r| qvec(r)).collect())
    }

    pub fn contains(&self, w: &[i64]) -> bool {
        let rays: Vec<Vec<Rational>> = self.rays.iter().map(|r| qvec(r)).collect();
        facet_normals(&rays, self.dim)
            .iter()
            .all(|n| !dot(n, &qvec(w)).is_negative())
    }

    pub fn contains_interior(&self, w: &[i64]) -> bool {
        let rays: Vec<Vec<Rational>> = self.rays.iter().map(|r| qvec(r)).collect();
        facet_normals(&rays, self.dim)
            .iter()
            .all(|n| dot(n, &qvec(w)).is_positive())
    }
}

pub fn cone_of_x(fan: &Fan, d: &ToricDivisor) -> Result<ConeOfX> {
    if !is_ample(fan, d)? {
        return Err(ConeError::NotAmple("support function is not strictly convex".into()));
    }
    let dim = fan.rank + 1;
    let mut rays = Vec::new();
    let mut weil = Vec::new();
    for (i, v) in fan.rays.iter().enumerate() {
        let c = &d.coeffs[i];
        let mut lifted = qvec(v);
        lifted.push(c.clone());
        let prim = primitive(&lifted);
        let w = weil_index(fan, d, v)?;
        let scaled: Vec<Rational> = lifted.iter().map(|x| x * int(w)).collect();
        if qvec(&prim) != scaled {
            return Err(ConeError::Internal(format!(
                "primitive generator {prim:?} differs from {w} * ({v:?}, {})",
                format_rational(c)
            )));
        }
        rays.push(prim);
        weil.push(w);
    }
    let mut cone = ConeOfX {
        dim,
        rays,
        weil,
        qgorenstein_form: None,
    };
    if !cone.contains_interior(&cone.vertex_valuation()) {
        return Err(ConeError::Internal("vertex valuation not interior to the cone".into()));
    }
    let ones = vec![Rational::one(); cone.rays.len()];
    cone.qgorenstein_form = cone.ray_matrix().solve(&ones);
    Ok(cone)
}

pub fn log_discrepancy_x(k: &ConeOfX, w: &[i64]) -> Result<Rational> {
    let m = k.qgorenstein_form.as_ref().ok_or(ConeError::NotQGorenstein)?;
    Ok(dot(m, &qvec(w)))
}

/// `sum lambda_rho v_rho = 0` with every `lambda_rho > 0`, built from
/// writing each `-v_rho` inside its containing cone.
pub fn positive_relation(fan: &Fan) -> Result<Vec<Rational>> {
    let mut lambda = vec![Rational::zero(); fan.rays.len()];
    for (i, v) in fan.rays.iter().enumerate() {
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        let sigma = fan.containing_cone(&neg)?;
        let m = Matrix::from_rows(fan.cone_rays(sigma)).transpose();
        let mu = m
            .solve(&qvec(&neg))
            .ok_or_else(|| ConeError::Internal("containing cone does not span".into()))?;
        // solutions may be non-unique on non-simplicial cones; pick the
        // nonnegative one by retrying on simplicial sub-cones if needed
        let mu = if mu.iter().any(Signed::is_negative) {
            nonnegative_combination(fan, sigma, &neg)?
        } else {
            mu
        };
        lambda[i] += Rational::one();
        for (k, &j) in fan.cones[sigma].iter().enumerate() {
            lambda[j] += &mu[k];
        }
    }
    Ok(lambda)
}

fn nonnegative_combination(fan: &Fan, sigma: usize, v: &[i64]) -> Result<Vec<Rational>> {
    let idx = &fan.cones[sigma];
    let n = idx.len();
    let r = fan.rank;
    let mut subset: Vec<usize> = (0..r).collect();
    loop {
        let rows: Vec<Vec<Rational>> = subset.iter().map(|&k| qvec(&fan.rays[idx[k]])).collect();
        let m = Matrix::from_rows(rows).transpose();
        if let Some(x) = m.solve_unique(&qvec(v)) {
            if x.iter().all(|t| !t.is_negative()) {
                let mut out = vec![Rational::zero(); n];
                for (k, &s) in subset.iter().enumerate() {
                    out[s] = x[k].clone();
                }
                return Ok(out);
            }
        }
        let Some(i) = (0..r).rev().find(|&i| subset[i] < n - r + i) else {
            break;
        };
        subset[i] += 1;
        for j in i + 1..r {
            subset[j] = subset[j - 1] + 1;
        }
    }
    Err(ConeError::Internal("no nonnegative combination".into()))
}

/// `sum lambda / q  /  sum lambda c` for a positive relation `lambda`, the
/// toric analogue of `-deg(K + B) / deg D`.
pub fn vertex_degree_ratio(fan: &Fan, d: &ToricDivisor) -> Result<Rational> {
    let lambda = positive_relation(fan)?;
    let mut num = Rational::zero();
    let mut den = Rational::zero();
    for (l, c) in lambda.iter().zip(&d.coeffs) {
        num += l * rat(1, denom_i64(c));
        den += l * c;
    }
    Ok(num / den)
}

/// `K_Y + B` and `D` proportional in the rational class group: some `r`
/// and `m` with `-1/q_rho = -r c_rho + <m, v_rho>` for every ray.
pub fn proportionality_ratio(fan: &Fan, d: &ToricDivisor) -> Option<Rational> {
    let rows: Vec<Vec<Rational>> = fan
        .rays
        .iter()
        .zip(&d.coeffs)
        .map(|(v, c)| {
            let mut row = vec![-c.clone()];
            row.extend(qvec(v));
            row
        })
        .collect();
    let rhs: Vec<Rational> = d.coeffs.iter().map(|c| -rat(1, denom_i64(c))).collect();
    Matrix::from_rows(rows).solve(&rhs).map(|x| x[0].clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleCheck {
    pub v: Vec<i64>,
    pub lifted: Vec<i64>,
    pub weil: i64,
    pub cartier: i64,
    #[serde(with = "crate::scalar::qstr")]
    pub a_x: Rational,
    #[serde(with = "crate::scalar::qstr")]
    pub a_y: Rational,
    pub comparison_ok: bool,
    pub weil_le_cartier: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCheck {
    #[serde(with = "crate::scalar::qstr")]
    pub a_x: Rational,
    #[serde(with = "crate::scalar::qstr")]
    pub degree_ratio: Rational,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub samples: Vec<SampleCheck>,
    pub violations: usize,
    pub weil_cartier_violations: usize,
    pub vertex: Option<VertexCheck>,
}

impl ComparisonReport {
    pub fn is_clean(&self) -> bool {
        self.violations == 0
            && self.weil_cartier_violations == 0
            && self.vertex.as_ref().is_none_or(|v| v.ok)
    }
}

pub fn verify_comparison(fan: &Fan, d: &ToricDivisor, samples: &[Vec<i64>]) -> Result<ComparisonReport> {
    let k = cone_of_x(fan, d)?;
    if k.qgorenstein_form.is_none() {
        return Err(ConeError::NotQGorenstein);
    }
    let b = quotient_boundary(fan, d);
    let mut checks = Vec::new();
    for v in samples {
        if !is_primitive(v) {
            return Err(ConeError::NotPrimitive(v.clone()));
        }
        let phi = support_value(fan, d, v)?;
        let weil = denom_i64(&phi);
        let mut lifted = qvec(v);
        lifted.push(phi);
        let w = primitive(&lifted);
        let a_x = log_discrepancy_x(&k, &w)?;
        let a_y = log_discrepancy_y(fan, &b, v)?;
        let cartier = cartier_index_on_cone(fan, d, fan.containing_cone(v)?)?;
        checks.push(SampleCheck {
            comparison_ok: a_x == int(weil) * &a_y,
            weil_le_cartier: cartier % weil == 0 && weil <= cartier,
            v: v.clone(),
            lifted: w,
            weil,
            cartier,
            a_x,
            a_y,
        });
    }
    let vertex = match proportionality_ratio(fan, d) {
        Some(_) => {
            let a_x = log_discrepancy_x(&k, &k.vertex_valuation())?;
            let ratio = vertex_degree_ratio(fan, d)?;
            Some(VertexCheck {
                ok: a_x == ratio,
                a_x,
                degree_ratio: ratio,
            })
        }
        None => None,
    };
    Ok(ComparisonReport {
        violations: checks.iter().filter(|c| !c.comparison_ok).count(),
        weil_cartier_violations: checks.iter().filter(|c| !c.weil_le_cartier).count(),
        samples: checks,
        vertex,
    })
}

/// Minimal log discrepancy at the vertex of a 2-dimensional Q-Gorenstein
/// cone: the least value of the form over interior lattice points, capped
/// at 2. Interior points either lie in the half-open fundamental
/// parallelogram or dominate `r_1 + r_2`, whose value is 2.
pub fn toric_mld_2d(k: &ConeOfX) -> Result<Rational> {
    if k.dim != 2 || k.rays.len() != 2 {
        return Err(ConeError::Internal("toric mld needs a 2-dimensional simplicial cone".into()));
    }
    let m = k.qgorenstein_form.as_ref().ok_or(ConeError::NotQGorenstein)?;
    let (r1, r2) = (&k.rays[0], &k.rays[1]);
    let det = (r1[0] * r2[1] - r1[1] * r2[0]).abs();
    let basis = Matrix::from_rows(vec![qvec(r1), qvec(r2)]).transpose();
    let mut best = int(2);
    let xs = [0, r1[0], r2[0], r1[0] + r2[0]];
    let ys = [0, r1[1], r2[1], r1[1] + r2[1]];
    let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
    let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
    let mut found = 0;
    for x in x0..=x1 {
        for y in y0..=y1 {
            let coords = basis.solve_unique(&[int(x), int(y)]).expect("independent rays");
            let inside = coords.iter().all(|c| c.is_positive() && *c < Rational::one());
            if inside {
                found += 1;
                let a = dot(m, &[int(x), int(y)]);
                if a < best {
                    best = a;
                }
            }
        }
    }
    debug_assert_eq!(found + 1, det);
    Ok(best)
}

/// Moves at most two fractional points of a couple to `0` and `inf` and
/// the integral remainder to `0`, giving the same cone over `P^1`.
pub fn curve_to_toric(c: &CurveCouple) -> Option<(Fan, ToricDivisor)> {
    let fr: Vec<Rational> = c
        .divisor()
        .fractional_points()
        .map(|(_, x)| frac(x))
        .collect();
    if fr.len() > 2 {
        return None;
    }
    let zero = fr.first().cloned().unwrap_or_else(Rational::zero);
    let inf = fr.get(1).cloned().unwrap_or_else(Rational::zero);
    let zero = &zero + (c.degree() - &zero - &inf);
    let fan = p1();
    let d = ToricDivisor::new(&fan, vec![zero, inf]).expect("two rays");
    Some((fan, d))
}

/// The couple over `P^1` read off a rank-1 toric divisor.
pub fn toric_to_curve(fan: &Fan, d: &ToricDivisor) -> Result<CurveCouple> {
    if fan.rank != 1 {
        return Err(ConeError::InvalidFan("not a fan of P^1".into()));
    }
    let terms = fan.rays.iter().zip(&d.coeffs).map(|(r, c)| {
        let p = if r[0] > 0 { MarkedPoint::at(0) } else { MarkedPoint::Infinity };
        (p, c.clone())
    });
    CurveCouple::new(crate::divisor::QDivisorP1::from_terms(terms)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ToricInstance {
    pub name: String,
    pub fan: Fan,
    pub divisor: ToricDivisor,
}

fn random_coefficient(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(-q..=3 * q);
    rat(p, q)
}

/// Pairs `(c_+, c_-)` on `P^1` grouped by `sum 1/q / sum c`.
fn p1_factors(max_den: i64) -> BTreeMap<Rational, Vec<(Rational, Rational)>> {
    let mut out: BTreeMap<Rational, Vec<(Rational, Rational)>> = BTreeMap::new();
    let mut coeffs = Vec::new();
    for q in 1..=max_den {
        for p in -q..=2 * q {
            if p.gcd(&q) == 1 {
                coeffs.push(rat(p, q));
            }
        }
    }
    for a in &coeffs {
        for b in &coeffs {
            let s = a + b;
            if s.is_positive() {
                let r = (rat(1, denom_i64(a)) + rat(1, denom_i64(b))) / s;
                out.entry(r).or_default().push((a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Seeded ample instances with `sigma_X` Q-Gorenstein, cycling through
/// `P^1`, `P^2`, `P^1 x P^1` and weighted planes.
pub fn sample_instances(seed: u64, count: usize, max_den: i64) -> Vec<ToricInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factors = p1_factors(max_den);
    let shared: Vec<&Vec<(Rational, Rational)>> = factors.values().filter(|v| v.len() > 1).collect();
    let weights = [(1, 2), (2, 3), (1, 3), (3, 5), (2, 5)];
    let mut out = Vec::new();
    let mut attempt = 0usize;
    while out.len() < count {
        let kind = attempt % 4;
        attempt += 1;
        let (name, fan) = match kind {
            0 => ("P1".to_string(), p1()),
            1 => ("P2".to_string(), projective_space(2)),
            2 => ("P1xP1".to_string(), p1xp1()),
            _ => {
                let (a, b) = weights[rng.gen_range(0..weights.len())];
                (format!("P({a},{b},1)"), weighted_plane(a, b).expect("coprime weights"))
            }
        };
        let coeffs = if kind == 2 {
            let class = shared[rng.gen_range(0..shared.len())];
            let (a, b) = &class[rng.gen_range(0..class.len())];
            let (c, d) = &class[rng.gen_range(0..class.len())];
            vec![a.clone(), c.clone(), b.clone(), d.clone()]
        } else {
            (0..fan.rays.len()).map(|_| random_coefficient(&mut rng, max_den)).collect()
        };
        let divisor = ToricDivisor::new(&fan, coeffs).expect("aligned");
        if !is_ample(&fan, &divisor).unwrap_or(false) {
            continue;
        }
        match cone_of_x(&fan, &divisor) {
            Ok(k) if k.qgorenstein_form.is_some() => out.push(ToricInstance { name, fan, divisor }),
            _ => continue,
        }
    }
    out
}

/// Random primitive nonzero vectors with entries in `[-bound, bound]`.
pub fn random_valuations(rng: &mut ChaCha8Rng, rank: usize, count: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    while out.len() < count {
        let v: Vec<i64> = (0..rank).map(|_| rng.gen_range(-bound..=bound)).collect();
        if is_primitive(&v) {
            out.push(v);
        }
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
