//! Independent recomputations of the core quantities.

mod common;

use common::{couple, sample_couples};
use conesing_core::demazure::{
    embedding_dimension, generators, hilbert_series_through, koszul_relation_counts, multiplication_rank,
    presentation, SectionRing,
};
use conesing_core::linalg::Echelon;
use conesing_core::quotient::{cartier_index_of_kx, log_fano_quotient, vertex_log_discrepancy};
use conesing_core::resolution::{blow_down, build_graph, hj_chain, mld_vertex, LatticeCone2};
use conesing_core::scalar::{floor_i64, int, rat};
use conesing_core::toric::{cone_of_x, curve_to_toric, toric_mld_2d};
use conesing_core::{CurveCouple, MarkedPoint, QPoly, Rational};
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Every lattice point on the compact boundary of the convex hull of the
/// nonzero lattice points of `<(0,1), (q,p)>`.
fn hull_boundary(q: i64, p: i64) -> Vec<[i64; 2]> {
    let lows: Vec<[i64; 2]> = (0..=q)
        .map(|x| [x, if x == 0 { 1 } else { Integer::div_ceil(&(x * p), &q) }])
        .collect();
    let mut hull: Vec<[i64; 2]> = Vec::new();
    for pnt in lows {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b[0] - a[0]) * (pnt[1] - a[1]) - (b[1] - a[1]) * (pnt[0] - a[0]);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pnt);
    }
    let mut out = vec![hull[0]];
    for w in hull.windows(2) {
        let (dx, dy) = (w[1][0] - w[0][0], w[1][1] - w[0][1]);
        let g = dx.gcd(&dy);
        for k in 1..=g {
            out.push([w[0][0] + k * dx / g, w[0][1] + k * dy / g]);
        }
    }
    out
}

#[test]
fn resolution_rays_follow_the_lattice_hull() {
    for q in 2..=30 {
        for p in 1..q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let cone = LatticeCone2::new(q, p).unwrap();
            let rays = cone.resolution_rays();
            assert_eq!(rays, hull_boundary(q, p), "q={q} p={p}");
            let chain = hj_chain(&cone);
            assert_eq!(chain.len() + 2, rays.len());
            for (j, c) in chain.iter().enumerate() {
                let (a, b, d) = (rays[j], rays[j + 1], rays[j + 2]);
                assert_eq!([a[0] + d[0], a[1] + d[1]], [-c * b[0], -c * b[1]]);
            }
        }
    }
}

/// Least `m` with `m (K + B) - u D` integral of degree 0; the degree
/// condition pins `u = m deg(K+B) / deg D`.
fn brute_cartier_index(c: &CurveCouple) -> i64 {
    let pair = log_fano_quotient(c);
    let mut pts: Vec<_> = c.divisor().points().cloned().collect();
    pts.extend(pair.boundary.points().cloned());
    pts.push(MarkedPoint::Infinity);
    let ratio = pair.log_canonical_degree() / c.degree();
    for m in 1..=100_000i64 {
        let u = &ratio * int(m);
        if !u.is_integer() {
            continue;
        }
        let ok = pts.iter().all(|p| {
            let k = if *p == MarkedPoint::Infinity { int(-2) } else { int(0) };
            ((k + pair.boundary.coeff(p)) * int(m) - c.divisor().coeff(p) * &u).is_integer()
        });
        if ok {
            return m;
        }
    }
    panic!("no index found for {c:?}");
}

#[test]
fn cartier_index_against_scan() {
    for c in sample_couples() {
        assert_eq!(cartier_index_of_kx(&c).unwrap(), brute_cartier_index(&c), "{:?}", c);
    }
    for m in 1..=12 {
        let c = couple(&[], m).unwrap();
        assert_eq!(cartier_index_of_kx(&c).unwrap(), m / m.gcd(&2));
    }
}

#[test]
fn vertex_discrepancy_by_degree_ratio_and_graph() {
    for c in sample_couples() {
        let ratio = -log_fano_quotient(&c).log_canonical_degree() / c.degree();
        let a = vertex_log_discrepancy(&c).unwrap();
        assert_eq!(a, ratio);
        let g = build_graph(&c).unwrap();
        assert_eq!(g.central_log_discrepancy(), a);
    }
}

fn h0_closed_form(c: &CurveCouple, n: i64) -> i64 {
    let d: i64 = c.divisor().terms().values().map(|x| floor_i64(&(x * int(n)))).sum();
    (d + 1).max(0)
}

#[test]
fn hilbert_function_through_200() {
    for c in sample_couples() {
        let h = hilbert_series_through(&c, 200);
        let series = h.expand(200);
        for n in 0..=200 {
            let expect = h0_closed_form(&c, n as i64);
            assert_eq!(h.values[n] as i64, expect);
            assert_eq!(series[n], expect, "{c:?} n={n}");
        }
    }
}

#[test]
fn multiplication_rank_on_monomial_couples() {
    // points at 0 and inf only: sections are monomials and products fill an
    // interval of exponents
    for (c0, cinf) in [((1, 2), (1, 2)), ((2, 3), (1, 3)), ((5, 4), (1, 6)), ((0, 1), (3, 1)), ((3, 5), (4, 7))] {
        let c = CurveCouple::from_fractions(&[
            (MarkedPoint::at(0), c0.0, c0.1),
            (MarkedPoint::Infinity, cinf.0, cinf.1),
        ])
        .unwrap();
        let fl = |n: i64| {
            (
                floor_i64(&(rat(c0.0, c0.1) * int(n))),
                floor_i64(&(rat(cinf.0, cinf.1) * int(n))),
            )
        };
        for a in 1..=7 {
            for b in 1..=7 {
                let (x0, y0) = fl(a);
                let (x1, y1) = fl(b);
                let ha = x0 + y0 + 1;
                let hb = x1 + y1 + 1;
                let expect = if ha > 0 && hb > 0 { x0 + y0 + x1 + y1 + 1 } else { 0 };
                let (rank, coker) = multiplication_rank(&c, a as usize, b as usize);
                assert_eq!(rank as i64, expect, "{c0:?} {cinf:?} a={a} b={b}");
                assert_eq!((rank + coker) as i64, h0_closed_form(&c, a + b));
            }
        }
    }
}

/// Laufer's fundamental cycle on a negative definite graph; returns `Z^2`.
fn fundamental_cycle_square(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut z = vec![1i64; n];
    loop {
        let bump = (0..n).find(|&i| (0..n).map(|j| m[i][j] * z[j]).sum::<i64>() > 0);
        match bump {
            Some(i) => z[i] += 1,
            None => break,
        }
    }
    (0..n).map(|i| z[i] * (0..n).map(|j| m[i][j] * z[j]).sum::<i64>()).sum()
}

#[test]
fn embedding_dimension_matches_fundamental_cycle() {
    // rational surface singularities have embedding dimension -Z^2 + 1
    for c in sample_couples() {
        let g = build_graph(&c).unwrap();
        let bd = blow_down(&g);
        let expect = if bd.is_empty() {
            2
        } else {
            (-fundamental_cycle_square(&bd.matrix) + 1).max(3) as usize
        };
        assert_eq!(embedding_dimension(&c).unwrap(), expect, "{c:?}");
    }
}

/// Brute-force least value of the Gorenstein form over interior lattice
/// points of a 2-dimensional cone.
fn brute_toric_mld(rays: &[Vec<i64>], m: &[Rational]) -> Rational {
    let b = rays.iter().flatten().map(|x| x.abs()).max().unwrap() * 2 + 1;
    let (r1, r2) = (&rays[0], &rays[1]);
    let det = r1[0] * r2[1] - r1[1] * r2[0];
    let mut best: Option<Rational> = None;
    for x in -b..=b {
        for y in -b..=b {
            // coordinates in the ray basis, scaled by det
            let l1 = (x * r2[1] - y * r2[0]) * det.signum();
            let l2 = (r1[0] * y - r1[1] * x) * det.signum();
            if l1 > 0 && l2 > 0 {
                let a = &m[0] * int(x) + &m[1] * int(y);
                if best.as_ref().is_none_or(|v| a < *v) {
                    best = Some(a);
                }
            }
        }
    }
    best.unwrap()
}

#[test]
fn toric_mld_agrees_with_resolution() {
    let mut checked = 0;
    for c in sample_couples() {
        let Some((fan, d)) = curve_to_toric(&c) else { continue };
        let k = cone_of_x(&fan, &d).unwrap();
        let m = k.qgorenstein_form.clone().unwrap();
        let lattice = toric_mld_2d(&k).unwrap();
        assert_eq!(lattice, brute_toric_mld(&k.rays, &m));
        assert_eq!(lattice, mld_vertex(&c).unwrap(), "{c:?}");
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn koszul_counts_match_monomial_relations() {
    let mut checked = 0;
    for c in sample_couples().into_iter().filter(|c| c.period() <= 6 && c.degree() >= int(1)) {
        let gens = generators(&c, 60).unwrap();
        if gens.degrees.len() > 4 {
            continue;
        }
        let through = 2 * gens.certified_through;
        let pres = presentation(&c, gens.certified_through, through).unwrap();
        let counts = koszul_relation_counts(&c, &gens, through);
        let mut from_counts = Vec::new();
        for (n, k) in counts.iter().enumerate() {
            from_counts.extend(std::iter::repeat_n(n, *k));
        }
        assert_eq!(from_counts, pres.relation_degrees, "{c:?}");
        checked += 1;
    }
    assert!(checked > 20);
}

/// Monomials in the generators span every graded piece they should.
#[test]
fn generators_saturate() {
    for c in sample_couples().into_iter().filter(|c| c.period() <= 10) {
        let ring = SectionRing::new(&c);
        let gens = generators(&c, 60).unwrap();
        let top = 2 * gens.certified_through.max(1);
        // spans[n] = span of degree-n monomials, built degree by degree
        let mut spans: Vec<Vec<QPoly>> = vec![vec![QPoly::one()]];
        for n in 1..=top {
            let dim = ring.h0(n);
            let mut ech = Echelon::<Rational>::new(dim);
            let mut basis = Vec::new();
            for (g, &dg) in gens.sections.iter().zip(&gens.degrees) {
                if dg > n {
                    continue;
                }
                for s in &spans[n - dg] {
                    let prod = ring.multiply(g, dg, s, n - dg);
                    if ech.insert(prod.to_vec(dim)) {
                        basis.push(prod);
                    }
                }
            }
            assert_eq!(ech.rank(), dim, "{c:?} degree {n}");
            spans.push(basis);
        }
    }
}

#[test]
fn graph_matrices_are_negative_definite() {
    for c in sample_couples() {
        let g = build_graph(&c).unwrap();
        let m = conesing_core::QMatrix::from_rows(
            g.matrix.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
        );
        assert!(m.is_negative_definite());
        assert!(g.determinant.is_positive());
    }
}
