mod common;

use common::{couple, is_log_fano_type};
use conesing_core::counterexamples::{an_action_weights, AnActionParams};
use conesing_core::demazure::{default_bound, hilbert_series_through, multiplication_rank, presentation, SectionRing};
use conesing_core::quotient::{
    decomposition_residual, horizontal_log_discrepancy, log_fano_quotient, vertex_decomposition,
    vertex_log_discrepancy,
};
use conesing_core::resolution::{blow_down, build_graph, is_eps_lc_x, mld_vertex, mld_vertex_raw};
use conesing_core::scalar::{int, rat};
use conesing_core::toric::{
    cartier_index_on_cone, cone_of_x, curve_to_toric, log_discrepancy_x, random_valuations, rng,
    sample_instances, toric_mld_2d, verify_comparison,
};
use conesing_core::{CurveCouple, IntegralDivisorP1, MarkedPoint, QDivisorP1};
use num_integer::Integer;
use proptest::prelude::*;

fn fraction(max_q: i64) -> impl Strategy<Value = (i64, i64)> {
    (2..=max_q)
        .prop_flat_map(|q| (1..q, Just(q)))
        .prop_filter("reduced", |(p, q)| p.gcd(q) == 1)
}

/// Log Fano couples with up to three fractional points at `0, 1, inf`.
fn klt_couple(max_q: i64) -> impl Strategy<Value = CurveCouple> {
    (prop::collection::vec(fraction(max_q), 0..=3), -2i64..=6)
        .prop_filter_map("log Fano, ample", |(fr, shift)| {
            if is_log_fano_type(&fr) {
                couple(&fr, shift)
            } else {
                None
            }
        })
}

/// Any ample couple, including ones whose quotient is not log Fano.
fn any_couple() -> impl Strategy<Value = CurveCouple> {
    (prop::collection::vec((-7i64..=7, 1i64..=9), 1..=5), -2i64..=4).prop_filter_map("ample", |(terms, shift)| {
        let mut d: Vec<(MarkedPoint, conesing_core::Rational)> = terms
            .iter()
            .enumerate()
            .map(|(i, &(p, q))| (common::pt(i), rat(p, q)))
            .collect();
        d[0].1 += int(shift);
        CurveCouple::new(QDivisorP1::from_terms(d).ok()?).ok()
    })
}

/// A degree-zero integral divisor supported on the first few points.
fn degree_zero() -> impl Strategy<Value = IntegralDivisorP1> {
    prop::collection::vec(-3i64..=3, 1..=4).prop_map(|cs| {
        let total: i64 = cs.iter().sum();
        let mut terms: Vec<(MarkedPoint, i64)> = cs.iter().enumerate().map(|(i, &c)| (common::pt(i), c)).collect();
        terms.push((MarkedPoint::at(7), -total));
        IntegralDivisorP1::from_terms(terms)
    })
}

fn plus(c: &CurveCouple, h: &IntegralDivisorP1) -> CurveCouple {
    CurveCouple::new(c.divisor().add(&h.to_rational())).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn weil_equals_cartier_on_the_line(c in any_couple()) {
        for p in c.divisor().points() {
            let w = c.divisor().weil_index_at(p);
            prop_assert!(w <= c.divisor().cartier_index_at(p));
            prop_assert_eq!(w, c.divisor().cartier_index_at(p));
        }
    }

    #[test]
    fn floors_are_superadditive(c in any_couple(), a in 0u64..30, b in 0u64..30) {
        let fa = c.divisor().floor_multiple(a);
        let fb = c.divisor().floor_multiple(b);
        let fab = c.divisor().floor_multiple(a + b);
        for p in c.divisor().points() {
            prop_assert!(fab.coeff(p) >= fa.coeff(p) + fb.coeff(p));
        }
    }

    #[test]
    fn floor_degree_is_exact_on_periods(c in any_couple(), k in 1u64..6, n in 1u64..60) {
        let l = c.period() as u64;
        prop_assert_eq!(int(c.divisor().floor_multiple(k * l).degree()), c.degree() * int((k * l) as i64));
        prop_assert!(int(c.divisor().floor_multiple(n).degree()) <= c.degree() * int(n as i64));
    }

    #[test]
    fn normal_form_is_idempotent_and_invariant(c in any_couple(), h in degree_zero()) {
        let nf = c.normal_form();
        prop_assert_eq!(&nf.couple.normal_form(), &nf);
        prop_assert_eq!(plus(&c, &h).normal_form().key, nf.key);
    }

    #[test]
    fn principal_divisors_are_integral(c in any_couple(), h in degree_zero(), u in -20i64..20) {
        let div = c.principal_divisor_on_cone(&h, u).unwrap();
        prop_assert_eq!(div.exceptional, u);
    }

    #[test]
    fn horizontal_discrepancy_is_one(c in klt_couple(12)) {
        for p in c.divisor().points() {
            prop_assert_eq!(horizontal_log_discrepancy(&c, p).unwrap(), int(1));
        }
    }

    #[test]
    fn vertex_formula(c in klt_couple(12), h in degree_zero()) {
        let a = vertex_log_discrepancy(&c).unwrap();
        prop_assert_eq!(&a * c.degree(), -log_fano_quotient(&c).log_canonical_degree());
        prop_assert_eq!(vertex_log_discrepancy(&c.normal_form().couple).unwrap(), a.clone());
        prop_assert_eq!(vertex_log_discrepancy(&plus(&c, &h)).unwrap(), a);
    }

    #[test]
    fn vertex_decomposition_is_minimal(c in klt_couple(12)) {
        let v = vertex_decomposition(&c).unwrap();
        let r = decomposition_residual(&c, v.m, v.u);
        prop_assert!(r.to_integral().is_some());
        prop_assert_eq!(r.degree(), int(0));
        let ratio = log_fano_quotient(&c).log_canonical_degree() / c.degree();
        for m in 1..v.m {
            let u = &ratio * int(m);
            if u.is_integer() {
                let r = decomposition_residual(&c, m, u.to_integer().try_into().unwrap());
                prop_assert!(r.to_integral().is_none());
            }
        }
    }

    #[test]
    fn graph_agrees_with_vertex_formula(c in klt_couple(12)) {
        let g = build_graph(&c).unwrap();
        prop_assert_eq!(g.central_log_discrepancy(), vertex_log_discrepancy(&c).unwrap());
        prop_assert!(g.determinant > 0);
        prop_assert_eq!(mld_vertex_raw(&c).unwrap(), mld_vertex(&c).unwrap());
    }

    #[test]
    fn canonical_cones_are_du_val(c in klt_couple(8)) {
        if is_eps_lc_x(&c, &int(1)).unwrap() {
            let bd = blow_down(&build_graph(&c).unwrap());
            prop_assert!(bd.self_intersections().iter().all(|&s| s == -2));
        }
    }

    #[test]
    fn two_mld_oracles_agree(c in klt_couple(12)) {
        if let Some((fan, d)) = curve_to_toric(&c) {
            let k = cone_of_x(&fan, &d).unwrap();
            prop_assert_eq!(toric_mld_2d(&k).unwrap(), mld_vertex(&c).unwrap());
            prop_assert_eq!(log_discrepancy_x(&k, &k.vertex_valuation()).unwrap(), vertex_log_discrepancy(&c).unwrap());
        }
    }

    #[test]
    fn hilbert_series_matches_h0(c in klt_couple(12)) {
        let ring = SectionRing::new(&c);
        let h = hilbert_series_through(&c, 200);
        let s = h.expand(200);
        for (n, v) in s.iter().enumerate() {
            prop_assert_eq!(*v, ring.h0(n) as i64);
        }
    }

    #[test]
    fn products_land_in_sections(c in klt_couple(8), a in 1usize..8, b in 1usize..8) {
        let (rank, coker) = multiplication_rank(&c, a, b);
        prop_assert_eq!(rank + coker, SectionRing::new(&c).h0(a + b));
    }

    #[test]
    fn triangle_inequality(n in 1i64..300, a in -600i64..600, b in -600i64..600) {
        prop_assume!(b != 0);
        let (x, y, _) = an_action_weights(AnActionParams { n, a, b });
        prop_assert!(x.abs() + y.abs() >= 2 * b.abs() * n);
        prop_assert!(x.abs().max(y.abs()) >= n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn presentation_depends_on_linear_equivalence_class(c in klt_couple(5), h in degree_zero()) {
        prop_assume!(c.degree() >= int(1) && c.period() <= 4);
        let other = plus(&c, &h).normal_form().couple;
        let bound = default_bound(&c);
        prop_assert_eq!(default_bound(&other), bound);
        let p1 = presentation(&c, bound, bound).unwrap();
        let p2 = presentation(&other, bound, bound).unwrap();
        prop_assert_eq!(p1.generator_degrees, p2.generator_degrees);
        prop_assert_eq!(p1.relation_degrees, p2.relation_degrees);
    }

    #[test]
    fn toric_comparison_on_seeded_instances(seed in 0u64..1000) {
        let mut g = rng(seed ^ 0x5eed);
        for inst in sample_instances(seed, 4, 6) {
            let mut vs = inst.fan.rays().to_vec();
            vs.extend(random_valuations(&mut g, inst.fan.rank(), 20, 9));
            let report = verify_comparison(&inst.fan, &inst.divisor, &vs).unwrap();
            prop_assert!(report.is_clean());
            let k = cone_of_x(&inst.fan, &inst.divisor).unwrap();
            for r in &k.rays {
                prop_assert_eq!(log_discrepancy_x(&k, r).unwrap(), int(1));
            }
            for s in &report.samples {
                let sigma = inst.fan.containing_cone(&s.v).unwrap();
                prop_assert_eq!(cartier_index_on_cone(&inst.fan, &inst.divisor, sigma).unwrap() % s.weil, 0);
            }
        }
    }
}
