mod common;

use std::collections::BTreeMap;

use common::*;
use hyperloc::arith::{format_q, parse_q, q, Gq, Q};
use hyperloc::charcycle::characteristic_cycle;
use hyperloc::conic::{all_valid_pairs, localization_trace, localization_trace_with, LocalizationOptions};
use hyperloc::euler::{euler_integral, CellComplex};
use hyperloc::fan::adapted_subspaces;
use hyperloc::lefschetz::{local_contribution, local_trace_function, CellNormalData, FixedComponentModel};
use hyperloc::matrix::QMatrix;
use hyperloc::par::Exec;
use hyperloc::spectral::{minimal_shrinking, validate_shrinking};
use hyperloc::suite::{base_change, random_complex, random_conic_instance, random_function, rng, ConicInstance};
use proptest::prelude::*;
use rand::Rng;

fn instance(seed: u64) -> ConicInstance {
    random_conic_instance(&mut rng(seed), false)
}

fn point_model(inst: &ConicInstance) -> FixedComponentModel {
    let cell = CellNormalData::new(inst.sheaf.clone(), inst.eta.clone());
    FixedComponentModel::new("p", CellComplex::point(), vec![cell], None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn shift_negates_trace(seed in any::<u64>()) {
        let i = instance(seed);
        let v = localization_trace(&i.sheaf, &i.eta).unwrap();
        let w = localization_trace(&i.sheaf.shifted(1), &i.eta.shifted(1)).unwrap();
        prop_assert_eq!(w, -v);
    }

    #[test]
    fn direct_sum_adds_contributions(seed in any::<u64>()) {
        let i = instance(seed);
        let m = point_model(&i);
        let mut two = m.direct_sum(&m).unwrap();
        let single = local_contribution(&m).unwrap();
        prop_assert_eq!(local_contribution(&two).unwrap(), &single + &single);
        two = two.direct_sum(&m).unwrap();
        prop_assert_eq!(local_contribution(&two).unwrap(), &(&single + &single) + &single);
    }

    #[test]
    fn base_change_preserves_trace(seed in any::<u64>()) {
        let i = instance(seed);
        let mut r = rng(seed ^ 0x5a5a);
        let mut p = BTreeMap::new();
        for c in 0..i.sheaf.fan().num_cones() {
            for (&d, &n) in &i.sheaf.stalks()[c] {
                let mut m = QMatrix::identity(n);
                for a in 0..n {
                    for b in a + 1..n {
                        m[(a, b)] = q(r.gen_range(-3..=3));
                    }
                }
                p.insert((c, d), m);
            }
        }
        let (g, e) = base_change(&i.sheaf, &i.eta, &p).unwrap();
        prop_assert_eq!(localization_trace(&g, &e).unwrap(), localization_trace(&i.sheaf, &i.eta).unwrap());
    }

    #[test]
    fn choice_of_subspaces_does_not_change_theta(seed in any::<u64>()) {
        let i = instance(seed);
        let m = point_model(&i);
        let theta = local_trace_function(&m).unwrap();
        let pairs = all_valid_pairs(&i.sheaf, &i.eta, &LocalizationOptions::default()).unwrap();
        for (s, _) in &pairs.shrinking {
            let alt = m.with_subspaces(0, None, Some(s.clone()));
            prop_assert_eq!(local_trace_function(&alt).unwrap(), theta.clone());
        }
        if pairs.expanding_scale.is_none() {
            for (e, _) in &pairs.expanding {
                let alt = m.with_subspaces(0, Some(e.clone()), None);
                prop_assert_eq!(local_trace_function(&alt).unwrap(), theta.clone());
            }
        }
    }

    #[test]
    fn execution_policy_does_not_change_values(seed in any::<u64>()) {
        let i = instance(seed);
        let seq = LocalizationOptions { exec: Exec::Sequential, ..Default::default() };
        let par = LocalizationOptions { exec: Exec::Parallel, ..Default::default() };
        prop_assert_eq!(
            localization_trace_with(&i.sheaf, &i.eta, &seq).unwrap(),
            localization_trace_with(&i.sheaf, &i.eta, &par).unwrap()
        );
    }

    #[test]
    fn minimal_shrinking_is_valid_and_smallest(seed in any::<u64>()) {
        let i = instance(seed);
        let a = i.eta.map();
        let m = minimal_shrinking(a).unwrap();
        prop_assert!(validate_shrinking(a, &m).unwrap());
        for s in adapted_subspaces(i.sheaf.fan()) {
            if validate_shrinking(a, &s).unwrap() {
                prop_assert!(s.contains(&m, 1e-9));
            }
        }
    }

    #[test]
    fn euler_integral_is_linear_and_subdivision_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let cx = random_complex(&mut r);
        let f = random_function(&mut r, &cx);
        let g = random_function(&mut r, &cx);
        let (a, b) = (Gq::int(r.gen_range(-5..=5)), Gq::new(q(1), q(r.gen_range(-2..=2))));
        let lhs = euler_integral(&f.combine(&a, &g, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, &a * &euler_integral(&f).unwrap() + &b * &euler_integral(&g).unwrap());
        let (sd, parent) = cx.barycentric_subdivision();
        prop_assert_eq!(euler_integral(&f.pull_back(sd, &parent).unwrap()).unwrap(), euler_integral(&f).unwrap());
    }

    #[test]
    fn characteristic_cycle_is_linear(seed in any::<u64>(), which in 0usize..12) {
        let mut r = rng(seed);
        let complexes = oracle_complexes();
        let (_, x) = &complexes[which % complexes.len()];
        let f = random_int_function(&mut r, x.complex());
        let g = random_int_function(&mut r, x.complex());
        let (a, b) = (Gq::int(r.gen_range(-3..=3)), Gq::int(r.gen_range(-3..=3)));
        let h = f.combine(&a, &g, &b).unwrap();
        let (cf, cg, ch) = (characteristic_cycle(x, &f).unwrap(), characteristic_cycle(x, &g).unwrap(), characteristic_cycle(x, &h).unwrap());
        for ((sf, sg), sh) in cf.strata.iter().zip(&cg.strata).zip(&ch.strata) {
            for ((cf, cg), ch) in sf.chambers.iter().zip(&sg.chambers).zip(&sh.chambers) {
                prop_assert_eq!(&ch.sample, &cf.sample);
                prop_assert_eq!(ch.multiplicity.clone(), &a * &cf.multiplicity + &b * &cg.multiplicity);
            }
        }
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = Q::new(n.into(), d.into());
        prop_assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
    }
}
