use std::fmt::Write as _;
use std::io::BufReader;

use serde::Serialize;
use shearlet_analysis::amalgam::amalgam_norm;
use shearlet_analysis::b0::{b0_check, B0Report, B0Spec};
use shearlet_analysis::decay::{decay_study, held_out_dominance, DecayGrid, DecayReport, Dominance};
use shearlet_analysis::frame::{frame_bounds, Band, IterationBudget, Surrogate};
use shearlet_analysis::hap::{hap_profile, ElementSampler, HapSystem, SpanKind, TailSpec};
use shearlet_analysis::transform::{admissibility, isometry_check, transform_point, AdmissibilityConstants, IsometrySpec, QuadratureTransform};
use shearlet_analysis::witness::{unit_probe, upper_bound_witness, WitnessSpec};
use shearlet_analysis::{BumpSpectrum, GeneratorParams, GridFunction, ShearletGenerator, Spectrum};
use shearlet_core::boxes::{box_contains, cover_bounds, cover_intersection_count, lattice_point, locate_in_cover};
use shearlet_core::density::analytic_density;
use shearlet_core::params::{generate, read_paramset, scatter_csv, write_paramset, DiagonalRule};
use shearlet_core::{
    estimate_density, AnalyticDensity, CenterSpec, DensityEstimate, FamilyKind, FamilySpec, GroupElement, ParamSet, Source, Window,
};

use crate::args::*;
use crate::error::CliError;
use crate::Report;

type Result<T> = std::result::Result<T, CliError>;

pub fn dispatch(cli: &Cli) -> Result<Report> {
    let weak = cli.global.allow_weak_beta;
    match &cli.cmd {
        Cmd::Group(a) => group(a),
        Cmd::Params(a) => params(a),
        Cmd::Density(a) => density(a),
        Cmd::Covering(a) => covering(a),
        Cmd::Admissibility(a) => admissibility_cmd(a, weak),
        Cmd::Transform(a) => transform(a, weak),
        Cmd::Isometry(a) => isometry(a, weak),
        Cmd::Decay(a) => decay(a, weak),
        Cmd::Amalgam(a) => amalgam(a, weak),
        Cmd::Hap(a) => hap(a, weak),
        Cmd::FrameBounds(a) => frame(a, weak),
        Cmd::Witness(a) => witness(a, weak),
        Cmd::PlotData(a) => plot(a),
    }
}

fn json<T: Serialize + ?Sized>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Validation(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn kv_csv(pairs: &[(&str, String)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in pairs {
        let _ = writeln!(out, "{k},{v}");
    }
    out
}

fn family(a: &FamilyArgs) -> Result<FamilySpec> {
    let kind = FamilyKind::parse(&a.family)?;
    let spec = FamilySpec::new(kind, a.a, a.b, a.c)?;
    if kind == FamilyKind::OversampledDiagonal {
        return Ok(spec.with_diagonal(DiagonalRule::Constant { r1: a.r1, r2: a.r2 })?);
    }
    Ok(spec)
}

fn generator(g: &GenArgs, weak: bool) -> Result<ShearletGenerator> {
    let params = GeneratorParams { alpha: g.alpha, beta: g.beta, ..GeneratorParams::default() };
    Ok(ShearletGenerator::with_options(params, weak)?)
}

fn test_function(kind: TestFn, gen: &ShearletGenerator) -> Result<Box<dyn Spectrum>> {
    Ok(match kind {
        TestFn::Psi => Box::new(gen.clone()),
        TestFn::Bump => Box::new(unit_probe()?),
        TestFn::BumpMirrored => Box::new(BumpSpectrum::new((0.6, 2.4), (-1.5, 1.5), true, 1.0)?),
    })
}

fn range(v: &Option<Vec<i64>>, w: i64) -> (i64, i64) {
    v.as_ref().map(|r| (r[0], r[1])).unwrap_or((-w, w))
}

fn window(a: &WindowArgs) -> Result<Window> {
    if a.window < 0 {
        return Err(CliError::Validation(format!("--window must be non-negative, got {}", a.window)));
    }
    Ok(Window::new(
        range(&a.j_range, a.window),
        range(&a.k_range, a.window),
        range(&a.m1_range, a.window),
        range(&a.m2_range, a.window),
    )?)
}

fn pair(v: &[f64], what: &str) -> Result<(f64, f64)> {
    match v {
        [lo, hi] if lo < hi => Ok((*lo, *hi)),
        _ => Err(CliError::Validation(format!("{what} needs \"lo,hi\" with lo < hi, got {v:?}"))),
    }
}

fn element(text: &str) -> Result<GroupElement> {
    Ok(GroupElement::parse(text)?)
}

fn read_points(path: &std::path::Path) -> Result<ParamSet> {
    let f = std::fs::File::open(path).map_err(|e| CliError::Validation(format!("cannot open {}: {e}", path.display())))?;
    Ok(read_paramset(BufReader::new(f))?)
}

fn surrogate(a: &SurrogateArgs, default_band: [f64; 3]) -> Result<Surrogate> {
    let b = a.band.clone().unwrap_or(default_band.to_vec());
    Ok(Surrogate::new(a.l, a.n, Band { xi1_min: b[0], xi1_max: b[1], xi2_max: b[2] })?)
}

fn budget(a: &SurrogateArgs, samples: usize, seed: u64) -> IterationBudget {
    IterationBudget { max_iter: a.max_iter, tol: a.tol, samples, seed }
}

fn group(a: &GroupArgs) -> Result<Report> {
    let ops = [a.compose.is_some(), a.inverse.is_some(), a.act.is_some(), a.phi.is_some(), a.haar_volume.is_some()];
    if ops.iter().filter(|&&o| o).count() != 1 {
        return Err(CliError::Validation("give exactly one of --compose, --inverse, --act, --phi, --haar-volume".into()));
    }
    let elem = |g: GroupElement| -> Result<Report> {
        Ok(Report::new(format!("a,s,t1,t2\n{g}\n"), json(&g)?))
    };
    if let Some(list) = &a.compose {
        let mut acc = element(&list[0])?;
        for t in &list[1..] {
            acc = acc.compose(&element(t)?);
        }
        return elem(acc);
    }
    if let Some(t) = &a.inverse {
        return elem(element(t)?.inverse());
    }
    if let Some(t) = &a.act {
        let x = a.x.as_deref().ok_or_else(|| CliError::Validation("--act needs --x \"x1,x2\"".into()))?;
        let v: Vec<f64> = x
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| CliError::Validation(format!("--x expects \"x1,x2\", got {x:?}")))?;
        if v.len() != 2 {
            return Err(CliError::Validation(format!("--x expects two coordinates, got {x:?}")));
        }
        let y = element(t)?.act([v[0], v[1]]);
        return Ok(Report::new(format!("x1,x2\n{},{}\n", y[0], y[1]), json(&y)?));
    }
    if let Some(t) = &a.phi {
        let p = element(t)?.phi();
        return Ok(Report::new(format!("a,s,t1,t2\n{},{},{},{}\n", p.a, p.s, p.t[0], p.t[1]), json(&p)?));
    }
    let h = a.haar_volume.expect("checked above");
    let v = shearlet_core::group::haar_box_volume(h)?;
    #[derive(Serialize)]
    struct Volume {
        h: f64,
        volume: f64,
    }
    Ok(Report::new(format!("h,volume\n{h},{v}\n"), json(&Volume { h, volume: v })?))
}

fn points_csv(ps: &ParamSet) -> String {
    let mut out = String::from("a,s,t1,t2,w\n");
    for p in &ps.points {
        let t = p.g.t();
        let _ = writeln!(out, "{},{},{},{},{}", p.g.a(), p.g.s(), t[0], t[1], p.w);
    }
    out
}

fn params(a: &ParamsArgs) -> Result<Report> {
    let ps = generate(&family(&a.family)?, &window(&a.window)?)?;
    let mut text = Vec::new();
    write_paramset(&ps, &mut text)?;
    let mut r = Report::new(points_csv(&ps), json(&ps)?);
    r.text = Some(String::from_utf8(text).expect("ascii output"));
    Ok(r)
}

fn plot(a: &PlotArgs) -> Result<Report> {
    let ps = generate(&family(&a.family)?, &window(&a.window)?)?;
    let mut csv = Vec::new();
    scatter_csv(&ps, &mut csv)?;
    Ok(Report::new(String::from_utf8(csv).expect("ascii output"), json(&ps.points)?))
}

fn density(a: &DensityArgs) -> Result<Report> {
    #[derive(Serialize)]
    struct Out {
        estimate: DensityEstimate,
        analytic: Option<AnalyticDensity>,
    }
    let fam = family(&a.family)?;
    let file = a.points.as_deref().map(read_points).transpose()?;
    let source = match &file {
        Some(ps) => Source::Points(ps),
        None => Source::Family(&fam),
    };
    let centers = match a.ladder_steps {
        Some(k) if k >= 0 => {
            CenterSpec::Ladder { ln_x: (-k..=k).map(|i| i as f64 * fam.a.ln()).collect(), per_scale: a.centers, seed: a.seed }
        }
        Some(k) => return Err(CliError::Validation(format!("--ladder-steps must be non-negative, got {k}"))),
        None => CenterSpec::Random { count: a.centers, seed: a.seed },
    };
    let estimate = estimate_density(source, &a.h, &centers)?;
    let analytic = if file.is_none() { Some(analytic_density(&fam)?) } else { None };
    Ok(Report::new(estimate.to_csv(), json(&Out { estimate, analytic })?))
}

#[derive(Debug, Clone, Serialize)]
struct CoveringRow {
    check: &'static str,
    h: f64,
    r: Option<f64>,
    samples: usize,
    passed: usize,
    min_count: Option<u64>,
    max_count: Option<u64>,
    lower_bound: Option<f64>,
    upper_bound: Option<f64>,
}

fn covering(a: &CoveringArgs) -> Result<Report> {
    let sampler = ElementSampler { ln_a: (-3.0, 3.0), s: (-3.0, 3.0), t: (-5.0, 5.0) };
    let mut rows = Vec::new();
    for (hi, &h) in a.h.iter().enumerate() {
        let pts = sampler.sample(a.points, a.seed.wrapping_add(1000 * hi as u64));
        let mut passed = 0;
        for g in &pts {
            if let Ok(c) = locate_in_cover(g, h) {
                if box_contains(&lattice_point(c.j, c.k, c.m, h), h, g) {
                    passed += 1;
                }
            }
        }
        rows.push(CoveringRow {
            check: "locate",
            h,
            r: None,
            samples: a.points,
            passed,
            min_count: None,
            max_count: None,
            lower_bound: None,
            upper_bound: None,
        });
        for (ri, &r) in a.r.iter().enumerate() {
            let (n_r, n_tilde) = cover_bounds(r, h)?;
            let centers = sampler.sample(a.boxes, a.seed.wrapping_add(1000 * hi as u64 + 1 + ri as u64));
            let counts: Vec<u64> = centers.iter().map(|c| cover_intersection_count(c, r, h)).collect();
            let passed = counts.iter().filter(|&&n| n_tilde <= n as f64 && n as f64 <= n_r).count();
            rows.push(CoveringRow {
                check: "intersect",
                h,
                r: Some(r),
                samples: a.boxes,
                passed,
                min_count: counts.iter().copied().min(),
                max_count: counts.iter().copied().max(),
                lower_bound: Some(n_tilde),
                upper_bound: Some(n_r),
            });
        }
    }
    let opt = |v: Option<String>| v.unwrap_or_default();
    let mut csv = String::from("check,h,r,samples,passed,min_count,max_count,lower_bound,upper_bound\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            r.check,
            r.h,
            opt(r.r.map(|v| v.to_string())),
            r.samples,
            r.passed,
            opt(r.min_count.map(|v| v.to_string())),
            opt(r.max_count.map(|v| v.to_string())),
            opt(r.lower_bound.map(|v| v.to_string())),
            opt(r.upper_bound.map(|v| v.to_string())),
        );
    }
    Ok(Report::new(csv, json(&rows)?))
}

fn admissibility_cmd(a: &AdmissibilityArgs, weak: bool) -> Result<Report> {
    #[derive(Serialize)]
    struct Out {
        constants: AdmissibilityConstants,
        refined: AdmissibilityConstants,
        asymmetry: f64,
        refinement_change: f64,
        b0: Option<B0Report>,
    }
    let gen = generator(&a.gen, weak)?;
    let constants = admissibility(&gen, a.nodes)?;
    let refined = admissibility(&gen, 2 * a.nodes)?;
    let b0 = if a.b0 {
        Some(b0_check(&gen, &B0Spec { l: a.b0_l, n: a.b0_n, alpha: a.b0_alpha, ..B0Spec::default() })?)
    } else {
        None
    };
    let out = Out {
        constants,
        refined,
        asymmetry: (constants.c_minus - constants.c_plus).abs() / constants.c_plus,
        refinement_change: (constants.c_plus - refined.c_plus).abs() / refined.c_plus,
        b0,
    };
    let mut pairs = vec![
        ("c_minus", format!("{:e}", out.constants.c_minus)),
        ("c_plus", format!("{:e}", out.constants.c_plus)),
        ("c_minus_refined", format!("{:e}", out.refined.c_minus)),
        ("c_plus_refined", format!("{:e}", out.refined.c_plus)),
        ("asymmetry", format!("{:e}", out.asymmetry)),
        ("refinement_change", format!("{:e}", out.refinement_change)),
    ];
    if let Some(b) = &out.b0 {
        pairs.extend([
            ("b0_alpha", b.alpha.to_string()),
            ("b0_c_spatial", format!("{:e}", b.c_spatial)),
            ("b0_spatial_growth", b.spatial_growth.to_string()),
            ("b0_frequency_margin", format!("{:e}", b.frequency_margin)),
            ("b0_relative_margin", b.relative_margin.to_string()),
            ("b0_report_only_alpha", b.report_only_alpha.to_string()),
            ("b0_pass", b.pass.to_string()),
        ]);
    }
    let mut r = Report::new(kv_csv(&pairs), json(&out)?);
    if out.b0.is_some_and(|b| !b.pass) {
        r.exit = 3;
        r.note = Some("diagnostic: generator-class check failed".into());
    }
    Ok(r)
}

fn transform(a: &TransformArgs, weak: bool) -> Result<Report> {
    #[derive(Serialize)]
    struct Row {
        g: GroupElement,
        re: f64,
        im: f64,
    }
    let gen = generator(&a.gen, weak)?;
    let gs: Vec<GroupElement> = a.g.iter().map(|t| element(t)).collect::<Result<_>>()?;
    let vals = match &a.grid {
        Some(path) => {
            let file = std::fs::File::open(path).map_err(|e| CliError::Validation(format!("cannot open {}: {e}", path.display())))?;
            let f = GridFunction::read_binary(BufReader::new(file))?;
            gs.iter().map(|g| transform_point(&gen, &f, g)).collect::<std::result::Result<Vec<_>, _>>()?
        }
        None => {
            let f = test_function(a.f, &gen)?;
            QuadratureTransform::new(&gen, f.as_ref()).batch(&gs)
        }
    };
    let mut csv = String::from("a,s,t1,t2,re,im\n");
    let mut rows = Vec::with_capacity(gs.len());
    for (g, v) in gs.iter().zip(&vals) {
        let _ = writeln!(csv, "{g},{:e},{:e}", v.re, v.im);
        rows.push(Row { g: *g, re: v.re, im: v.im });
    }
    Ok(Report::new(csv, json(&rows)?))
}

fn isometry(a: &IsometryArgs, weak: bool) -> Result<Report> {
    let gen = generator(&a.gen, weak)?;
    let f = GridFunction::render(a.l, a.n, test_function(a.f, &gen)?.as_ref())?;
    let spec = IsometrySpec { ln_a_nodes: a.ln_a_nodes, s_nodes: a.s_nodes, admissibility_nodes: a.nodes };
    let r = isometry_check(&gen, &f, &spec)?;
    let pairs = [
        ("lhs", format!("{:e}", r.lhs)),
        ("rhs", format!("{:e}", r.rhs)),
        ("rel_err", format!("{:e}", r.rel_err)),
        ("c_minus", format!("{:e}", r.constants.c_minus)),
        ("c_plus", format!("{:e}", r.constants.c_plus)),
    ];
    Ok(Report::new(kv_csv(&pairs), json(&r)?))
}

fn decay(a: &DecayArgs, weak: bool) -> Result<Report> {
    #[derive(Serialize)]
    struct Out {
        grid: DecayGrid,
        report: DecayReport,
        dominance: Dominance,
    }
    let gen = generator(&a.gen, weak)?;
    let grid = DecayGrid {
        a_range: pair(&a.a_range, "--a-range")?,
        s_max: a.s_max,
        t_max: a.t_max,
        n_a: a.n_a,
        n_s: a.n_s,
        n_t: a.n_t,
    };
    let q = QuadratureTransform::new(&gen, &gen);
    let report = decay_study(&q, gen.params(), &grid)?;
    let dominance = held_out_dominance(&q, gen.params(), &report, &grid, a.samples, a.seed)?;
    let pairs = [
        ("c_spatial_coarse", report.coarse.c_spatial.to_string()),
        ("c_spatial_refined", report.refined.c_spatial.to_string()),
        ("c_frequency_coarse", report.coarse.c_frequency.to_string()),
        ("c_frequency_refined", report.refined.c_frequency.to_string()),
        ("growth_spatial", report.growth_spatial.to_string()),
        ("growth_frequency", report.growth_frequency.to_string()),
        ("stable", report.stable.to_string()),
        ("dominance_samples", dominance.samples.to_string()),
        ("dominance_violations", dominance.violations.to_string()),
        ("dominance_worst_ratio", dominance.worst_ratio.to_string()),
    ];
    Ok(Report::new(kv_csv(&pairs), json(&Out { grid, report, dominance })?))
}

fn amalgam(a: &AmalgamArgs, weak: bool) -> Result<Report> {
    let gen = generator(&a.gen, weak)?;
    let f = test_function(a.f, &gen)?;
    let r = amalgam_norm(&QuadratureTransform::new(&gen, f.as_ref()), a.radius)?;
    Ok(Report::new(r.to_csv(), json(&r)?))
}

fn hap(a: &HapArgs, weak: bool) -> Result<Report> {
    let fam = family(&a.family)?;
    let gen = generator(&a.gen, weak)?;
    let f = test_function(a.f, &gen)?;
    let sampler = ElementSampler {
        ln_a: pair(&a.ln_a_range, "--ln-a-range")?,
        s: pair(&a.s_range, "--s-range")?,
        t: pair(&a.t_range, "--t-range")?,
    };
    let ps = sampler.sample(a.samples, a.seed);
    let spec = TailSpec { reach: a.reach, shell: a.shell, floor: a.floor };
    let system = if a.no_distance {
        None
    } else {
        let sur = surrogate(&a.surrogate, [0.875, 2.25, 1.5])?;
        let points = sur.family_points(&gen, &fam)?.points;
        Some(HapSystem::new(sur, &gen, points, &budget(&a.surrogate, 64, a.seed))?)
    };
    let kind = match a.span {
        Span::Dual => SpanKind::Dual,
        Span::Primal => SpanKind::Primal,
    };
    let prof = hap_profile(&gen, f.as_ref(), &fam, &ps, &a.r, &spec, system.as_ref().map(|s| (s, kind)))?;
    Ok(Report::new(prof.to_csv(), json(&prof)?))
}

fn frame(a: &FrameArgs, weak: bool) -> Result<Report> {
    let gen = generator(&a.gen, weak)?;
    let sur = surrogate(&a.surrogate, [1.0, 2.5, 1.5])?;
    let points = match &a.points {
        Some(p) => read_points(p)?.points,
        None => sur.family_points(&gen, &family(&a.family)?)?.points,
    };
    let est = frame_bounds(&sur.frame_operator(&gen, &points), &budget(&a.surrogate, a.samples, a.seed))?;
    let pairs = [
        ("a_est", format!("{:e}", est.a_est)),
        ("b_est", format!("{:e}", est.b_est)),
        ("ratio", if est.a_est > 0.0 { (est.b_est / est.a_est).to_string() } else { "inf".into() }),
        ("dim", est.dim.to_string()),
        ("points", points.len().to_string()),
        ("b_iterations", est.b_iterations.to_string()),
        ("b_residual", format!("{:e}", est.b_residual)),
        ("b_converged", est.b_converged.to_string()),
        ("a_iterations", est.a_iterations.to_string()),
        ("a_residual", format!("{:e}", est.a_residual)),
        ("a_converged", est.a_converged.to_string()),
        ("a_random_min", format!("{:e}", est.a_random_min)),
        ("positive_definite", est.positive_definite.to_string()),
    ];
    let mut r = Report::new(kv_csv(&pairs), json(&est)?);
    if !est.converged() {
        r.exit = 3;
        r.note = Some("diagnostic: frame-bound iterations did not converge within the budget".into());
    }
    Ok(r)
}

fn witness(a: &WitnessArgs, weak: bool) -> Result<Report> {
    let gen = generator(&a.gen, weak)?;
    let fam = family(&a.family)?;
    let eta = unit_probe()?;
    let spec = WitnessSpec { samples_per_axis: a.samples_per_axis, max_steps: a.max_steps, ..WitnessSpec::default() };
    let r = upper_bound_witness(&gen, &eta, &fam, &element(&a.p)?, a.h, a.target, &spec)?;
    let ladder: Vec<String> = r.ladder.iter().map(|s| s.count.to_string()).collect();
    let pairs = [
        ("h", r.h.to_string()),
        ("target", r.target.to_string()),
        ("delta", format!("{:e}", r.delta)),
        ("reached", r.reached.to_string()),
        ("center", format!("\"{}\"", r.center)),
        ("witness", format!("\"{}\"", r.witness)),
        ("count", r.count.to_string()),
        ("best_count", r.best_count.to_string()),
        ("energy", format!("{:e}", r.energy)),
        ("energy_ratio", r.energy_ratio.to_string()),
        ("ladder_counts", ladder.join(";")),
    ];
    let mut out = Report::new(kv_csv(&pairs), json(&r)?);
    if !r.reached {
        out.exit = 3;
        out.note = Some(format!("diagnostic: target {} not reached; best count {}", r.target, r.best_count));
    }
    Ok(out)
}
