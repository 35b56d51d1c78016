//! Command dispatch. Every command builds its human report and its JSON
//! report from the same values.

use std::path::Path;

use hyperloc::arith::{format_q, q, q_to_f64, Gq, Q};
use hyperloc::charcycle::{characteristic_cycle, microlocal_index, TestFunction};
use hyperloc::conic::{localization_trace_with, ConicError, LocalizationOptions};
use hyperloc::euler::{euler_integral, hopf_global_trace, CellComplex, CellularSheafModel};
use hyperloc::fixtures::{admissible_heights, expected_projective, twisted, ProjectiveMap};
use hyperloc::lefschetz::{
    embedded_index, local_contribution_with, local_trace_reports, verify_fixed_point_formula_with, CellNormalData,
    FixedComponentModel, TraceOptions,
};
use hyperloc::par::Exec;
use hyperloc::spectral::{SpectralConfig, Subspace};
use hyperloc::suite::{check_perturbation, euler_suite, localization_suite};
use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{CliError, EXIT_FAIL, EXIT_OK};
use crate::examples::{example_files, projective_problem, render_file};
use crate::schema::{Family, Problem, ProblemFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Localize,
    LocalTrace,
    Contribution,
    GlobalTrace,
    Verify,
    Cc,
    Index,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Localize => "localize",
            Command::LocalTrace => "local-trace",
            Command::Contribution => "contribution",
            Command::GlobalTrace => "global-trace",
            Command::Verify => "verify",
            Command::Cc => "cc",
            Command::Index => "index",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub json: bool,
    /// Overrides the parameter of a parametric fixture.
    pub k: Option<usize>,
    /// Spectral residual tolerance.
    pub tolerance: Option<Q>,
}

impl Flags {
    fn trace_options(&self) -> Result<TraceOptions, CliError> {
        let mut spectral = SpectralConfig::default();
        if let Some(t) = &self.tolerance {
            if !t.is_positive() {
                return Err(CliError::Usage(format!("--tolerance must be positive, got {}", format_q(t))));
            }
            spectral.tolerance = q_to_f64(t);
        }
        Ok(TraceOptions { spectral, exec: Exec::default() })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub lines: Vec<String>,
    pub json: Value,
    pub pass: bool,
}

impl Report {
    pub fn exit_code(&self) -> u8 {
        if self.pass {
            EXIT_OK
        } else {
            EXIT_FAIL
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            serde_json::to_string_pretty(&self.json).expect("values serialize") + "\n"
        } else {
            self.lines.iter().map(|l| format!("{l}\n")).collect()
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn s(x: &Gq) -> String {
    x.to_string()
}

fn list(v: &[Gq]) -> String {
    format!("[{}]", v.iter().map(s).collect::<Vec<_>>().join(", "))
}

fn vector(v: &[Q]) -> String {
    format!("({})", v.iter().map(format_q).collect::<Vec<_>>().join(", "))
}

fn vector_json(v: &[Q]) -> Value {
    v.iter().map(format_q).collect()
}

/// Human form and JSON form of a subspace. Numerical bases are printed with
/// the shortest representation that round-trips the `f64`.
fn subspace(x: &Subspace) -> (String, Value) {
    match x.exact_basis() {
        Some([]) => ("0".into(), json!({ "dim": 0, "exact": true, "basis": [] })),
        Some(b) => {
            let h = format!("span{{{}}}", b.iter().map(|v| vector(v)).collect::<Vec<_>>().join(", "));
            let j: Vec<Value> = b.iter().map(|v| vector_json(v)).collect();
            (h, json!({ "dim": b.len(), "exact": true, "basis": j }))
        }
        None => {
            let b = x.float_basis();
            let fmt = |v: &Vec<f64>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
            let h = format!(
                "numerical span{{{}}}",
                b.iter().map(|v| format!("({})", fmt(v).join(", "))).collect::<Vec<_>>().join(", ")
            );
            let j: Vec<Value> = b.iter().map(|v| json!(fmt(v))).collect();
            (h, json!({ "dim": b.len(), "exact": false, "basis": j }))
        }
    }
}

pub fn read_problem(path: &Path) -> Result<ProblemFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(serde_json::from_str(&text)?)
}

/// Reads, validates and applies `--k`.
pub fn load(path: &Path, flags: &Flags) -> Result<Problem, CliError> {
    let file = read_problem(path)?;
    let p = Problem::from_file(&file)?;
    match (p, flags.k) {
        (Problem::Family(f), Some(k)) => {
            let f = f.with_k(k);
            let file = Problem::Family(f).to_file(None)?;
            Problem::from_file(&file)
        }
        (p, None) => Ok(p),
        (p, Some(_)) => Err(CliError::Usage(format!("--k applies only to parametric fixtures, not to a {} problem", p.kind()))),
    }
}

pub fn run(cmd: Command, path: &Path, flags: &Flags) -> Result<Report, CliError> {
    let p = load(path, flags)?;
    run_problem(cmd, &p, flags)
}

pub fn run_problem(cmd: Command, p: &Problem, flags: &Flags) -> Result<Report, CliError> {
    let opts = flags.trace_options()?;
    let wrong = || CliError::WrongKind { command: cmd.name(), kind: p.kind() };
    match cmd {
        Command::Validate => validate(p),
        Command::Localize => match p {
            Problem::Localization(d) => localize(d, opts),
            _ => Err(wrong()),
        },
        Command::LocalTrace => local_trace(&components(p).ok_or_else(wrong)?, opts),
        Command::Contribution => contribution(&components(p).ok_or_else(wrong)?, family(p), opts),
        Command::GlobalTrace => {
            let (global, _) = verification(p).ok_or_else(wrong)?;
            let g = hopf_global_trace(&global).map_err(|e| CliError::engine("global", e))?;
            Ok(Report { lines: vec![format!("global = {g}")], json: json!({ "global": s(&g) }), pass: true })
        }
        Command::Verify => {
            let (global, comps) = verification(p).ok_or_else(wrong)?;
            verify(&global, &comps, opts)
        }
        Command::Cc => match p {
            Problem::CharCycle { complex, function, .. } => {
                let cc = characteristic_cycle(complex, function).map_err(|e| CliError::engine("charcycle", e))?;
                Ok(cc_report(complex.complex(), &cc))
            }
            _ => Err(wrong()),
        },
        Command::Index => match p {
            Problem::CharCycle { complex, function, test } => {
                let f = test
                    .as_ref()
                    .ok_or_else(|| CliError::Schema { at: "charcycle".into(), reason: "index needs a test_function".into() })?;
                let index = microlocal_index(complex, function, f).map_err(|e| CliError::engine("charcycle", e))?;
                let integral = euler_integral(function).map_err(|e| CliError::engine("charcycle.function", e))?;
                let pass = index == integral;
                Ok(Report {
                    lines: vec![format!("index = {index}"), format!("euler integral = {integral}"), verdict(pass).into()],
                    json: json!({ "index": s(&index), "euler_integral": s(&integral), "pass": pass }),
                    pass,
                })
            }
            _ => Err(wrong()),
        },
    }
}

fn family(p: &Problem) -> Option<&Family> {
    match p {
        Problem::Family(f) => Some(f),
        _ => None,
    }
}

fn components(p: &Problem) -> Option<Vec<FixedComponentModel>> {
    match p {
        Problem::Contribution(m) => Some(vec![m.clone()]),
        Problem::Verification { components, .. } => Some(components.clone()),
        Problem::Family(f) => Some(f.verification().1),
        _ => None,
    }
}

fn verification(p: &Problem) -> Option<(CellularSheafModel, Vec<FixedComponentModel>)> {
    match p {
        Problem::Verification { global, components } => Some((global.clone(), components.clone())),
        Problem::Family(f) => Some(f.verification()),
        _ => None,
    }
}

fn validate(p: &Problem) -> Result<Report, CliError> {
    let detail = match p {
        Problem::Localization(d) => {
            let fan = d.sheaf.fan();
            format!("fan in dimension {} with {} rays and {} cones", fan.ambient_dim(), fan.rays().len(), fan.num_cones())
        }
        Problem::Contribution(m) => format!("component `{}` with {} cells", m.name(), m.complex().len()),
        Problem::Verification { global, components } => {
            format!("global complex with {} cells, {} components", global.complex().len(), components.len())
        }
        Problem::CharCycle { complex, .. } => {
            format!("{} cells in dimension {}", complex.complex().len(), complex.ambient_dim())
        }
        Problem::Family(f) => {
            let (global, comps) = f.verification();
            format!("k = {}, global complex with {} cells, {} components", f.k(), global.complex().len(), comps.len())
        }
    };
    Ok(Report {
        lines: vec![format!("valid {} problem: {detail}", p.kind())],
        json: json!({ "valid": true, "kind": p.kind(), "detail": detail }),
        pass: true,
    })
}

fn localize(d: &CellNormalData, opts: TraceOptions) -> Result<Report, CliError> {
    let lo = LocalizationOptions {
        expanding: d.expanding.clone(),
        shrinking: d.shrinking.clone(),
        spectral: opts.spectral,
        exec: opts.exec,
    };
    let fixed: Vec<Value> =
        d.eta.analysis().fixed_cones().iter().map(|&c| json!(d.sheaf.fan().cone(c))).collect();
    let fixed_h = format!("fixed cones = {}", serde_json::to_string(&fixed).expect("serializes"));
    match localization_trace_with(&d.sheaf, &d.eta, &lo) {
        Ok(r) => {
            let (eh, ej) = subspace(&r.expanding);
            let (sh, sj) = subspace(&r.shrinking);
            let mut lines = vec![fixed_h, format!("expanding subspace = {eh}")];
            if let Some(t) = &r.expanding_scale {
                lines.push(format!("expanding scale = {}", format_q(t)));
            }
            lines.push(format!("shrinking subspace = {sh}"));
            lines.push(format!("trace_expanding = {}", r.value));
            lines.push(format!("trace_shrinking = {}", r.value));
            lines.push(format!("localization trace = {}, PASS", r.value));
            let json = json!({
                "fixed_cones": fixed,
                "expanding": ej,
                "expanding_scale": r.expanding_scale.as_ref().map(format_q),
                "shrinking": sj,
                "trace_expanding": s(&r.value),
                "trace_shrinking": s(&r.value),
                "value": s(&r.value),
                "pass": true,
            });
            Ok(Report { lines, json, pass: true })
        }
        Err(ConicError::LocalizationMismatch { expanding, shrinking }) => Ok(Report {
            lines: vec![
                fixed_h,
                format!("trace_expanding = {expanding}"),
                format!("trace_shrinking = {shrinking}"),
                "FAIL".into(),
            ],
            json: json!({
                "fixed_cones": fixed,
                "trace_expanding": s(&expanding),
                "trace_shrinking": s(&shrinking),
                "pass": false,
            }),
            pass: false,
        }),
        Err(e) => Err(CliError::engine("localization", e)),
    }
}

fn local_trace(comps: &[FixedComponentModel], opts: TraceOptions) -> Result<Report, CliError> {
    let mut lines = Vec::new();
    let mut out = Vec::new();
    for m in comps {
        let reports = local_trace_reports(m, opts).map_err(|e| CliError::engine(&format!("component `{}`", m.name()), e))?;
        lines.push(format!("component {}: cell | dim | theta | dim E | dim S", m.name()));
        let mut rows = Vec::new();
        for (c, r) in reports.iter().enumerate() {
            let dim = m.complex().dim(c);
            let scale = r.expanding_scale.as_ref().map(format_q);
            let suffix = scale.as_ref().map_or(String::new(), |t| format!(" (E for {t}A)"));
            lines.push(format!("  {c} | {dim} | {} | {} | {}{suffix}", r.value, r.expanding.dim(), r.shrinking.dim()));
            rows.push(json!({
                "cell": c,
                "dim": dim,
                "theta": s(&r.value),
                "expanding_dim": r.expanding.dim(),
                "shrinking_dim": r.shrinking.dim(),
                "expanding_scale": scale,
            }));
        }
        out.push(json!({ "name": m.name(), "cells": rows }));
    }
    Ok(Report { lines, json: json!({ "components": out }), pass: true })
}

fn contribution(comps: &[FixedComponentModel], fam: Option<&Family>, opts: TraceOptions) -> Result<Report, CliError> {
    let mut lines = Vec::new();
    let mut out = Vec::new();
    for m in comps {
        let c = local_contribution_with(m, opts).map_err(|e| CliError::engine(&format!("component `{}`", m.name()), e))?;
        lines.push(format!("contribution {} = {c}", m.name()));
        out.push(json!({ "name": m.name(), "value": s(&c) }));
    }
    let mut json = json!({ "contributions": out });
    if let (Some(Family::TwistedSectors { k }), [m]) = (fam, comps) {
        let c = local_contribution_with(m, opts).map_err(|e| CliError::engine("family", e))?;
        lines.push(format!("k-1 = {c}"));
        json["family"] = json!({ "name": "twisted_sectors", "k": k, "k-1": s(&c) });
    }
    Ok(Report { lines, json, pass: true })
}

fn verify(global: &CellularSheafModel, comps: &[FixedComponentModel], opts: TraceOptions) -> Result<Report, CliError> {
    let r = verify_fixed_point_formula_with(global, comps, opts).map_err(|e| CliError::engine("verification", e))?;
    let values: Vec<Gq> = r.locals.iter().map(|(_, v)| v.clone()).collect();
    let mut lines = vec![format!(
        "global = {}, locals = {}, residual = {}, {}",
        r.global,
        list(&values),
        r.residual,
        verdict(r.pass)
    )];
    lines.extend(r.locals.iter().map(|(n, v)| format!("  local {n} = {v}")));
    let locals: Vec<Value> = r.locals.iter().map(|(n, v)| json!({ "name": n, "value": s(v) })).collect();
    let json = json!({ "global": s(&r.global), "locals": locals, "residual": s(&r.residual), "pass": r.pass });
    Ok(Report { lines, json, pass: r.pass })
}

fn cc_report(complex: &CellComplex, cc: &hyperloc::charcycle::LagrangianCycle) -> Report {
    let mut lines = Vec::new();
    let mut strata = Vec::new();
    for st in &cc.strata {
        lines.push(format!(
            "cell {} (dim {}): {} walls, {} chambers",
            st.cell,
            complex.dim(st.cell),
            st.walls.len(),
            st.chambers.len()
        ));
        let mut chambers = Vec::new();
        for ch in &st.chambers {
            let signs: String = ch.signs.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect();
            lines.push(format!("  xi = {}  signs = [{signs}]  m = {}", vector(&ch.sample), ch.multiplicity));
            chambers.push(json!({ "sample": vector_json(&ch.sample), "signs": signs, "multiplicity": s(&ch.multiplicity) }));
        }
        let walls: Vec<Value> = st.walls.iter().map(|w| vector_json(w)).collect();
        strata.push(json!({ "cell": st.cell, "dim": complex.dim(st.cell), "walls": walls, "chambers": chambers }));
    }
    Report { lines, json: json!({ "strata": strata }), pass: true }
}

struct Check {
    name: String,
    ok: bool,
    detail: String,
}

fn check(name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String), String>) -> Check {
    let (ok, detail) = f().unwrap_or_else(|e| (false, e));
    Check { name: name.into(), ok, detail }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn round_trips(p: &Problem) -> Result<bool, String> {
    let text = render_file(&p.to_file(None).map_err(err)?).map_err(err)?;
    let back = Problem::from_file(&serde_json::from_str(&text).map_err(err)?).map_err(err)?;
    Ok(&back == p)
}

/// Every worked example and the randomized suites, at reduced sizes.
pub fn selftest(flags: &Flags) -> Result<Report, CliError> {
    let opts = flags.trace_options()?;
    let mut checks = Vec::new();
    for map in ProjectiveMap::all() {
        let label = match map {
            ProjectiveMap::Stretch => "projective plane, y scaled by 2",
            ProjectiveMap::Shrink => "projective plane, y scaled by 1/2",
        };
        checks.push(check(label, || {
            let p = projective_problem(map);
            let Problem::Verification { global, components } = &p else { unreachable!() };
            let r = verify_fixed_point_formula_with(global, components, opts).map_err(err)?;
            let ([l, pt], g) = expected_projective(map);
            let locals: Vec<Gq> = r.locals.iter().map(|(_, v)| v.clone()).collect();
            let ok = r.pass && r.global == g && locals == [l, pt] && round_trips(&p)?;
            Ok((ok, format!("global = {}, locals = {}, residual = {}", r.global, list(&locals), r.residual)))
        }));
    }
    checks.push(check("twisted sectors, k = 1..6", || {
        let mut ok = true;
        let mut parts = Vec::new();
        for k in 1..=6 {
            let f = Family::TwistedSectors { k };
            let (global, comps) = f.verification();
            let c = local_contribution_with(&comps[0], opts).map_err(err)?;
            let r = verify_fixed_point_formula_with(&global, &comps, opts).map_err(err)?;
            let diff = twisted(k).chi_difference();
            ok &= c == Gq::int(k as i64 - 1) && r.pass && diff == q(k as i64 - 1) && round_trips(&Problem::Family(f))?;
            parts.push(format!("k={k}: {c}"));
        }
        Ok((ok, parts.join(", ")))
    }));
    checks.push(check("index of theta equals the contribution on embedded components", || {
        let mut models: Vec<FixedComponentModel> =
            ProjectiveMap::all().iter().flat_map(|&m| hyperloc::fixtures::projective(m).components()).collect();
        models.extend((1..=6).map(|k| twisted(k).component));
        let mut n = 0;
        let mut bad = 0;
        for m in &models {
            let want = local_contribution_with(m, opts).map_err(err)?;
            for f in admissible_heights() {
                let f = match f {
                    TestFunction::Height(l) => TestFunction::Height(l[..m.embedding().map_or(0, |e| e.complex.ambient_dim())].to_vec()),
                    other => other,
                };
                n += 1;
                if embedded_index(m, &f).map_or(true, |v| v != want) {
                    bad += 1;
                }
            }
        }
        Ok((bad == 0, format!("{n} cases, {bad} mismatches")))
    }));
    checks.push(check("expanding and shrinking traces agree on random instances", || {
        let r = localization_suite(20_261_014, 100, opts.exec);
        Ok((r.pass(), format!("{} instances, {} pairs, {} failures", r.instances, r.pairs, r.failures.len())))
    }));
    checks.push(check("Euler integral linearity and subdivision invariance", || {
        let r = euler_suite(20_261_015, 100, opts.exec);
        Ok((r.pass(), format!("{} functions, {} failures", r.instances, r.failures.len())))
    }));
    checks.push(check("rescaling invariance on the worked components", || {
        let mut models: Vec<FixedComponentModel> =
            ProjectiveMap::all().iter().flat_map(|&m| hyperloc::fixtures::projective(m).components()).collect();
        models.extend((1..=6).map(|k| twisted(k).component));
        let mut n = 0;
        for m in &models {
            n += check_perturbation(m)?;
        }
        Ok((true, format!("{} models, {n} rescalings", models.len())))
    }));
    checks.push(check("shipped problem files match the builders", || {
        let files = example_files().map_err(err)?;
        let mut ok = true;
        for (_, f) in &files {
            ok &= round_trips(&Problem::from_file(f).map_err(err)?)?;
        }
        Ok((ok, format!("{} files", files.len())))
    }));
    let pass = checks.iter().all(|c| c.ok);
    let mut lines: Vec<String> = checks.iter().map(|c| format!("{} {}: {}", verdict(c.ok), c.name, c.detail)).collect();
    lines.push(format!("selftest {}", verdict(pass)));
    let json = json!({
        "checks": checks.iter().map(|c| json!({ "name": c.name, "pass": c.ok, "detail": c.detail })).collect::<Vec<_>>(),
        "pass": pass,
    });
    Ok(Report { lines, json, pass })
}

/// Writes the shipped problem files into `dir`.
pub fn export_fixtures(dir: &Path) -> Result<Report, CliError> {
    let io = |source| CliError::Io { path: dir.display().to_string(), source };
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut lines = Vec::new();
    let mut written = Vec::new();
    for (name, f) in example_files()? {
        let path = dir.join(name);
        std::fs::write(&path, render_file(&f)?).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        lines.push(format!("wrote {}", path.display()));
        written.push(path.display().to_string());
    }
    Ok(Report { lines, json: json!({ "written": written }), pass: true })
}
