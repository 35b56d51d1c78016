//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Tolerances and limits are fixed here.

mod common;

use std::time::{Duration, Instant};

use common::*;
use hyperloc::arith::{Gq, Q};
use hyperloc::charcycle::{characteristic_cycle, microlocal_index, morse_multiplicity, CharCycleError, Covector};
use hyperloc::conic::{all_valid_pairs, localization_trace, ConicSheaf, Equivariant, LocalizationOptions};
use hyperloc::euler::{euler_integral, hopf_global_trace};
use hyperloc::fixtures::{admissible_heights, expected_line_trace, expected_projective, projective, twisted, ProjectiveMap};
use hyperloc::lefschetz::{
    embedded_index, local_contribution, local_trace_function, verify_fixed_point_formula, CellNormalData,
    FixedComponentModel,
};
use hyperloc::euler::CellComplex;
use hyperloc::par::Exec;
use hyperloc::suite::{check_perturbation, conic_instances, euler_suite, random_map, rng, FanKind};
use rand::seq::SliceRandom;

const SEED: u64 = 20_261_014;
const RANDOM_INSTANCES: usize = 500;
const HYPERBOLIC_INSTANCES: usize = 150;
const EULER_CASES: usize = 200;
const MIN_ORACLE_CASES: usize = 50;

struct Outcome {
    ok: bool,
    detail: String,
}

fn run(name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = f();
    report(name, limit, t.elapsed(), o)
}

fn report(name: &str, limit: Duration, el: Duration, o: Outcome) -> bool {
    let ok = o.ok && el <= limit;
    let status = if ok { "PASS" } else { "FAIL" };
    let over = if el > limit { format!(", over the {:.0?} limit", limit) } else { String::new() };
    println!("{status} {name}: {} ({:.3} s{over})", o.detail, el.as_secs_f64());
    ok
}

fn fmt(v: &[Gq]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn projective_case(map: ProjectiveMap) -> Outcome {
    let f = projective(map);
    let theta = local_trace_function(&f.line).unwrap();
    let ([line, point], global) = expected_projective(map);
    let r = verify_fixed_point_formula(&f.global, &f.components()).unwrap();
    let locals: Vec<Gq> = r.locals.iter().map(|(_, v)| v.clone()).collect();
    let ok = theta.values() == expected_line_trace(map).as_slice()
        && locals == [line, point]
        && r.global == global
        && hopf_global_trace(&f.global).unwrap() == global
        && r.residual == Gq::int(0)
        && r.pass;
    Outcome {
        ok,
        detail: format!(
            "theta = [{}], locals = [{}], global = {}, residual = {}",
            fmt(theta.values()),
            fmt(&locals),
            r.global,
            r.residual
        ),
    }
}

fn twisted_cases() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for k in 1..=6usize {
        let t = Instant::now();
        let f = twisted(k);
        let theta = local_trace_function(&f.component).unwrap();
        let c = local_contribution(&f.component).unwrap();
        let kk = k as i64;
        let diff = f.chi_difference();
        let r = verify_fixed_point_formula(&f.global, std::slice::from_ref(&f.component)).unwrap();
        let good = theta.values() == [Gq::int(kk), Gq::int(1)]
            && c == Gq::int(kk - 1)
            && diff == Q::from_integer((kk - 1).into())
            && r.pass
            && t.elapsed() < Duration::from_secs(1);
        ok &= good;
        parts.push(format!("k={k}: theta=({}), c={c}, chi_c(Y)-chi_c(Z)={diff}", fmt(theta.values())));
    }
    Outcome { ok, detail: parts.join("; ") }
}

fn pair_suites() -> (Outcome, Outcome) {
    let insts = conic_instances(SEED, RANDOM_INSTANCES, false);
    let opts = LocalizationOptions { exec: Exec::Sequential, ..Default::default() };
    let reports = Exec::Parallel.map(&insts, |i| all_valid_pairs(&i.sheaf, &i.eta, &opts));
    let mut mismatches = 0;
    let mut errors = 0;
    let mut pairs = 0;
    let mut side_variation = 0;
    let mut subspaces = 0;
    for r in &reports {
        let Ok(r) = r else {
            errors += 1;
            continue;
        };
        if r.expanding.is_empty() || r.shrinking.is_empty() {
            errors += 1;
            continue;
        }
        for (_, e) in &r.expanding {
            for (_, s) in &r.shrinking {
                pairs += 1;
                if e != s {
                    mismatches += 1;
                }
            }
        }
        subspaces += r.expanding.len() + r.shrinking.len();
        let same = |v: &[(hyperloc::spectral::Subspace, Gq)]| v.windows(2).all(|w| w[0].1 == w[1].1);
        if !same(&r.expanding) || !same(&r.shrinking) {
            side_variation += 1;
        }
    }
    let a = Outcome {
        ok: mismatches == 0 && errors == 0 && insts.len() >= 500,
        detail: format!("{} instances, {pairs} (E, S) pairs, {mismatches} mismatches, {errors} errors", insts.len()),
    };
    let b = Outcome {
        ok: side_variation == 0 && errors == 0,
        detail: format!("{subspaces} valid subspaces over {} instances, {side_variation} instances with varying values", insts.len()),
    };
    (a, b)
}

fn hyperbolic_oracle() -> Outcome {
    let mut r = rng(SEED + 1);
    let kinds = FanKind::all();
    let mut bad = 0;
    for _ in 0..HYPERBOLIC_INSTANCES {
        let kind = *kinds.choose(&mut r).unwrap();
        let a = random_map(&mut r, kind, true);
        let g = ConicSheaf::constant(kind.fan(), 0);
        let eta = Equivariant::scalar(&g, a.clone(), Gq::int(1)).unwrap();
        if localization_trace(&g, &eta).unwrap() != Gq::int(det_sign_oracle(&a)) {
            bad += 1;
        }
    }
    Outcome { ok: bad == 0, detail: format!("{HYPERBOLIC_INSTANCES} hyperbolic maps, {bad} disagree with sign det(I - A)") }
}

fn perturbation() -> Outcome {
    let mut models: Vec<FixedComponentModel> = Vec::new();
    for map in ProjectiveMap::all() {
        models.extend(projective(map).components());
    }
    models.extend((1..=6).map(|k| twisted(k).component));
    for inst in conic_instances(SEED + 2, 60, false) {
        let cell = CellNormalData::new(inst.sheaf, inst.eta);
        models.push(FixedComponentModel::new("random", CellComplex::point(), vec![cell], None).unwrap());
    }
    let results = Exec::Parallel.map(&models, check_perturbation);
    let compared: usize = results.iter().filter_map(|r| r.as_ref().ok()).sum();
    let failures: Vec<&String> = results.iter().filter_map(|r| r.as_ref().err()).collect();
    Outcome {
        ok: failures.is_empty() && compared > 0,
        detail: format!("{} models, {compared} admissible rescalings compared, {} changes", models.len(), failures.len()),
    }
}

fn euler() -> Outcome {
    let s = euler_suite(SEED + 3, EULER_CASES, Exec::Parallel);
    Outcome { ok: s.pass() && s.instances >= 200, detail: format!("{} random functions, {} failures", s.instances, s.failures.len()) }
}

fn charcycle() -> Outcome {
    let mut r = rng(SEED + 4);
    let mut oracle_cases = 0;
    let mut oracle_bad = 0;
    let complexes = oracle_complexes();
    for (_, x) in &complexes {
        for _ in 0..2 {
            let phi = random_int_function(&mut r, x.complex());
            let cc = characteristic_cycle(x, &phi).unwrap();
            for s in 0..x.complex().len() {
                let mut covs: Vec<_> = cc.strata[s].chambers.iter().map(|c| c.sample.clone()).collect();
                covs.push(random_conormal(&mut r, x, s));
                for xi in covs {
                    match morse_multiplicity(x, &phi, &Covector { cell: s, xi: xi.clone() }) {
                        Ok(m) => {
                            oracle_cases += 1;
                            if m != brute_force_morse(x, &phi, s, &xi) {
                                oracle_bad += 1;
                            }
                        }
                        Err(CharCycleError::NonGenericCovector { .. }) => {}
                        Err(_) => oracle_bad += 1,
                    }
                }
            }
        }
    }
    let mut index_cases = 0;
    let mut index_bad = 0;
    let mut compact: Vec<_> = complexes.iter().filter(|(_, x)| x.complex().is_compact()).map(|(_, x)| x.clone()).collect();
    for map in ProjectiveMap::all() {
        compact.extend(projective(map).components().iter().filter_map(|m| m.embedding().map(|e| e.complex.clone())));
    }
    for x in &compact {
        let phi = random_int_function(&mut r, x.complex());
        let want = euler_integral(&phi).unwrap();
        for f in admissible_heights() {
            let f = match f {
                hyperloc::charcycle::TestFunction::Height(l) => hyperloc::charcycle::TestFunction::Height(l[..x.ambient_dim()].to_vec()),
                other => other,
            };
            match microlocal_index(x, &phi, &f) {
                Ok(v) => {
                    index_cases += 1;
                    if v != want {
                        index_bad += 1;
                    }
                }
                Err(CharCycleError::NonGenericSection { .. }) => {}
                Err(_) => index_bad += 1,
            }
        }
    }
    let mut pipeline_cases = 0;
    let mut pipeline_bad = 0;
    let mut components: Vec<FixedComponentModel> = ProjectiveMap::all().iter().map(|&m| projective(m).line).collect();
    components.extend((1..=6).map(|k| twisted(k).component));
    for m in &components {
        let want = local_contribution(m).unwrap();
        for f in admissible_heights() {
            pipeline_cases += 1;
            if embedded_index(m, &f).map_or(true, |v| v != want) {
                pipeline_bad += 1;
            }
        }
    }
    Outcome {
        ok: oracle_bad == 0 && oracle_cases >= MIN_ORACLE_CASES && index_bad == 0 && index_cases > 0 && pipeline_bad == 0,
        detail: format!(
            "oracle {oracle_cases} cases / {oracle_bad} mismatches; index theorem {index_cases} / {index_bad}; pipeline identity {pipeline_cases} / {pipeline_bad}"
        ),
    }
}

fn main() {
    let mut all = true;
    all &= run("projective plane, y scaled by 2", Duration::from_secs(1), || projective_case(ProjectiveMap::Stretch));
    all &= run("projective plane, y scaled by 1/2", Duration::from_secs(1), || projective_case(ProjectiveMap::Shrink));
    all &= run("twisted sectors, k = 1..6", Duration::from_secs(6), twisted_cases);
    let t = Instant::now();
    let (agree, independent) = pair_suites();
    let el = t.elapsed();
    all &= report("expanding and shrinking traces agree", Duration::from_secs(30), el, agree);
    all &= report("traces independent of the chosen subspace", Duration::from_secs(30), el, independent);
    all &= run("hyperbolic point index equals sign det(I - A)", Duration::from_secs(30), hyperbolic_oracle);
    all &= run("rescaling invariance of local traces", Duration::from_secs(30), perturbation);
    all &= run("Euler integral linearity and subdivision invariance", Duration::from_secs(30), euler);
    all &= run("characteristic cycle oracles and index identities", Duration::from_secs(60), charcycle);
    if !all {
        std::process::exit(1);
    }
}
