use std::path::PathBuf;

use rayon::prelude::*;
use rayon::ThreadPool;
use reflect_core::constants::{merge_restarts, run_restart, sweep_c_lp_by, CConfig, CEstimate};
use reflect_core::coxeter::{
    build_graph, classify_component, classify_family, connectivity, sign_change_extension_probe, Classification,
    Family, RootSystem, TypeLabel,
};
use reflect_core::decomposition::{
    coordinate_reflections, decompose, strip_projection_bounds, supported_pairs, DecompositionReport, StripKind,
    StripTestConfig,
};
use reflect_core::fixtures::{self, fixture, Entry, CATALOGUE};
use reflect_core::group::four_squares_residual;
use reflect_core::polytope::Membership;
use reflect_core::rational::{format_rational, q, QVector};
use reflect_core::reflections::{is_isometric, orthogonal_reflection, sign_change, Isometry, Reflection};
use reflect_core::spaces::{norm_axioms_check, sample_sphere, Exponent, NormKind, NormSpec};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::io::{self, Input};
use crate::report::{self, fmt_num, weight_json, CommandResult, Status};

/// Group cap used when labelling components (large enough for H4).
pub const LABEL_GROUP_CAP: usize = 20_000;

/// Thread pool capped by `REFLECT_THREADS` when set.
pub fn thread_pool() -> CliResult<ThreadPool> {
    let threads = match std::env::var("REFLECT_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| CliError::input(format!("REFLECT_THREADS=`{v}` is not a count")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::input(format!("thread pool: {e}")))
}

fn indices_json(ix: &[usize]) -> Value {
    json!(ix.iter().map(|i| i + 1).collect::<Vec<_>>())
}

fn nested_indices_json(v: &[Vec<usize>]) -> Value {
    Value::Array(v.iter().map(|s| indices_json(s)).collect())
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn analyze(input: &str, samples: usize, seed: u64) -> CliResult<CommandResult> {
    if samples == 0 {
        return Err(CliError::input("--samples must be positive"));
    }
    let spec = io::load(input)?.into_spec()?;
    let sample = sample_sphere(&spec, samples, seed);
    let axioms = norm_axioms_check(&spec, &sample);
    let mut signs = Vec::new();
    let mut count = 0;
    for i in 0..spec.dim() {
        let verdict = is_isometric(&sign_change(spec.dim(), i), &spec, &sample)?;
        let (isometric, violation, exact) = match verdict {
            Isometry::Exact(b) => (b, Value::Null, true),
            Isometry::Sampled { max_violation } => (verdict.holds(1e-9), finite_or_null(max_violation), false),
        };
        count += usize::from(isometric);
        signs.push(json!({"coordinate": i + 1, "isometric": isometric, "exact": exact, "max_violation": violation}));
    }
    let payload = json!({
        "spec": io::spec_to_json(&spec),
        "samples": samples,
        "seed": seed,
        "axioms": {
            "homogeneity": axioms.homogeneity,
            "triangle": axioms.triangle,
            "symmetry": axioms.symmetry,
            "monotonicity": axioms.monotonicity,
            "pairs": axioms.pairs,
        },
        "ideal": spec.is_ideal(),
        "isometric_sign_changes": count,
        "sign_changes": signs,
    });
    let mut result = CommandResult::ok("analyze", payload);
    if axioms.max_violation() > 1e-9 {
        result.status = Status::InvariantViolation;
        result.diagnostics.push(format!("norm axioms violated by {:.3e}", axioms.max_violation()));
    }
    Ok(result)
}

fn root_reflections(r: &RootSystem) -> CliResult<Vec<Reflection>> {
    Ok(r.positive_representatives().iter().map(|v| orthogonal_reflection(v)).collect::<Result<_, _>>()?)
}

/// Components of the graph of `refl` with their classifications.
pub fn label_components(refl: &[Reflection], order_cap: u64) -> CliResult<Vec<(Vec<usize>, Classification)>> {
    let graph = build_graph(refl, order_cap)?;
    graph
        .components
        .iter()
        .map(|c| Ok((c.clone(), classify_component(&graph, c, LABEL_GROUP_CAP)?)))
        .collect()
}

pub fn coxeter(input: &str, order_cap: u64, dot: Option<PathBuf>, seed: u64) -> CliResult<CommandResult> {
    if order_cap < 2 {
        return Err(CliError::input("--order-cap must be at least 2"));
    }
    let (source, refl) = match io::load(input)? {
        Input::Spec(spec) => {
            let cfg = StripTestConfig { seed, ..StripTestConfig::default() };
            ("norm", coordinate_reflections(&spec, &cfg)?)
        }
        Input::Reflections(r) => ("reflections", r),
        Input::Roots(r) => ("roots", root_reflections(&r)?),
    };
    if refl.is_empty() {
        return Err(CliError::input("the norm has no isometric coordinate reflections"));
    }
    let graph = build_graph(&refl, order_cap)?;
    let conn = connectivity(&graph)?;
    let mut components = Vec::new();
    let mut labels = Vec::new();
    for c in &graph.components {
        let cls = classify_component(&graph, c, LABEL_GROUP_CAP)?;
        labels.push(cls.label.to_string());
        components.push(json!({
            "vertices": indices_json(c),
            "label": cls.label.to_string(),
            "cosine_finite": cls.cosine_finite,
            "diagram": cls.diagram.map(|d| d.to_string()),
            "group_order": cls.group_order,
            "notes": cls.notes,
        }));
    }
    let edges: Vec<Value> = graph
        .edges
        .iter()
        .map(|e| json!({"i": e.i + 1, "j": e.j + 1, "weight": weight_json(e.weight)}))
        .collect();
    let reflections: Vec<Value> = refl
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let mut v = io::reflection_to_json(r);
            v.as_object_mut().expect("object").insert("id".into(), json!(k + 1));
            v
        })
        .collect();
    if let Some(path) = &dot {
        std::fs::write(path, report::dot(&graph, &labels))?;
    }
    let payload = json!({
        "source": source,
        "dim": graph.dim(),
        "order_cap": order_cap,
        "reflections": reflections,
        "edges": edges,
        "connectivity": {
            "connected": conn.connected,
            "fixed_dim": conn.fixed_dim,
            "irreducible": conn.irreducible,
            "axes_complete": conn.axes_complete,
        },
        "components": components,
        "dot": dot.map(|p| p.display().to_string()),
    });
    Ok(CommandResult::ok("coxeter", payload))
}

fn strip_cfg(tolerance: f64, seed: u64) -> CliResult<StripTestConfig> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(CliError::input("--tolerance must be positive"));
    }
    Ok(StripTestConfig { tolerance, seed, ..StripTestConfig::default() })
}

pub fn decomposition_json(spec: &NormSpec, r: &DecompositionReport, cfg: &StripTestConfig) -> CliResult<Value> {
    let bounds = strip_projection_bounds(spec, r, &sample_sphere(spec, cfg.sample_count, cfg.seed))?;
    let hilbert: Vec<Value> = r
        .hilbert_strips
        .iter()
        .map(|s| {
            json!({
                "indices": indices_json(&s.indices),
                "four_squares_residual": s.four_squares_residual,
                "rotation_residual": s.rotation_residual,
            })
        })
        .collect();
    let coxeter: Vec<Value> = r
        .coxeter_strips
        .iter()
        .map(|s| {
            let found: Vec<Value> = s
                .found
                .iter()
                .map(|&(i, j, sign)| json!({"axis": [i + 1, j + 1], "sign": if sign > 0 { "-" } else { "+" }}))
                .collect();
            json!({"indices": indices_json(&s.indices), "label": s.label.to_string(), "swaps": found})
        })
        .collect();
    let projections: Vec<Value> = r
        .projections
        .iter()
        .zip(&bounds)
        .map(|(p, b)| {
            json!({
                "kind": match p.kind { StripKind::Hilbert => "hilbert", StripKind::Coxeter => "coxeter" },
                "indices": indices_json(&p.indices),
                "matrix": p.cert.matrix.to_rows(),
                "norm_p": p.cert.norm_p,
                "norm_complement": p.cert.norm_complement,
                "idempotency_defect": p.cert.idempotency_defect(),
                "within_bounds": b.within_bounds,
            })
        })
        .collect();
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "pair": [w.pair.0 + 1, w.pair.1 + 1],
                "angle": w.angle,
                "point": w.point.0,
                "residual": w.residual,
                "pair_four_squares": w.pair_four_squares,
            })
        })
        .collect();
    Ok(json!({
        "dim": r.dim,
        "ideal": r.ideal,
        "tolerance": cfg.tolerance,
        "seed": cfg.seed,
        "hilbert": nested_indices_json(&r.hilbert_indices()),
        "coxeter": nested_indices_json(&r.coxeter_indices()),
        "uncovered": indices_json(&r.uncovered),
        "hilbert_strips": hilbert,
        "coxeter_strips": coxeter,
        "projections": projections,
        "witnesses": witnesses,
        "partition_preserved": r.partition_preserved,
        "surrogate_criterion": r.surrogate_criterion,
        "diagnostics": r.diagnostics,
    }))
}

pub fn decompose_cmd(input: &str, tolerance: f64, seed: u64) -> CliResult<CommandResult> {
    let cfg = strip_cfg(tolerance, seed)?;
    let spec = io::load(input)?.into_spec()?;
    let r = decompose(&spec, &cfg)?;
    let mut result = CommandResult::ok("decompose", decomposition_json(&spec, &r, &cfg)?);
    result.diagnostics = r.diagnostics.clone();
    Ok(result)
}

/// Restarts run on the pool; the merge is ordered by restart index.
pub fn estimate_parallel(pool: &ThreadPool, spec: &NormSpec, restarts: usize, seed: u64) -> reflect_core::Result<CEstimate> {
    let cfg = CConfig::default();
    let results = pool.install(|| (0..restarts).into_par_iter().map(|k| run_restart(spec, k, seed, &cfg)).collect());
    merge_restarts(results, seed)
}

pub fn parse_p_list(s: &str) -> CliResult<Vec<f64>> {
    let ps = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|p| *p >= 1.0 && p.is_finite())
                .ok_or_else(|| CliError::input(format!("bad exponent `{t}` in --lp-sweep")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if ps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::input("--lp-sweep values must be increasing"));
    }
    Ok(ps)
}

pub struct ConstantArgs {
    pub input: Option<String>,
    pub lp_sweep: Option<String>,
    pub dim: Option<usize>,
    pub restarts: usize,
    pub seed: u64,
    pub csv: Option<PathBuf>,
}

pub fn constant(args: ConstantArgs) -> CliResult<CommandResult> {
    if args.restarts == 0 {
        return Err(CliError::input("--restarts must be positive"));
    }
    let pool = thread_pool()?;
    match (&args.input, &args.lp_sweep) {
        (Some(input), None) => {
            if args.csv.is_some() {
                return Err(CliError::input("--csv needs --lp-sweep"));
            }
            let spec = io::load(input)?.into_spec()?;
            let est = estimate_parallel(&pool, &spec, args.restarts, args.seed)?;
            let finals: Vec<Value> = est.traces.iter().map(|t| finite_or_null(*t.last().unwrap_or(&f64::NAN))).collect();
            let payload = json!({
                "spec": io::spec_to_json(&spec),
                "value": est.value,
                "upper_bound": true,
                "argmin_e": est.argmin_e.0,
                "argmin_e_star": est.argmin_e_star.0,
                "restarts": est.restarts,
                "seed": est.seed,
                "restart_values": finals,
                "traces": est.traces,
            });
            Ok(CommandResult::ok("constant", payload))
        }
        (None, Some(list)) => {
            let dim = args.dim.ok_or_else(|| CliError::input("--lp-sweep needs --dim"))?;
            if dim == 0 {
                return Err(CliError::input("--dim must be positive"));
            }
            let ps = parse_p_list(list)?;
            let sweep =
                sweep_c_lp_by(&ps, dim, args.restarts, args.seed, |s| estimate_parallel(&pool, s, args.restarts, args.seed))?;
            if let Some(path) = &args.csv {
                std::fs::write(path, report::sweep_csv(&sweep))?;
            }
            let min = sweep.rows.iter().fold(f64::INFINITY, |m, r| m.min(r.c));
            let argmin: Vec<f64> = sweep.rows.iter().filter(|r| r.c <= min + 1e-9).map(|r| r.p).collect();
            let payload = json!({
                "dim": sweep.dim,
                "restarts": sweep.restarts,
                "seed": sweep.seed,
                "rows": sweep.rows.iter().map(|r| json!({"p": r.p, "c": r.c})).collect::<Vec<_>>(),
                "second_differences": sweep.second_differences,
                "minimising_p": argmin,
                "csv": args.csv.as_ref().map(|p| p.display().to_string()),
            });
            Ok(CommandResult::ok("constant", payload))
        }
        _ => Err(CliError::input("give either a norm file or --lp-sweep with --dim")),
    }
}

#[derive(Debug, Clone)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

fn fmt_sets(v: &[Vec<usize>]) -> String {
    let inner: Vec<String> = v
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", inner.join(", "))
}

fn polytope_checks(spec: &NormSpec, n: usize) -> CliResult<Vec<Check>> {
    let poly = spec.as_polytope().expect("polytope fixture");
    let v0: Vec<i64> = (1..=n as i64).collect();
    let mut image = v0.clone();
    image[n - 1] = -image[n - 1];
    let image = QVector::from_ints(&image);
    let probe = sign_change_extension_probe(spec, n - 1, &fixtures::roots_d(n))?;
    let mut checks = Vec::new();
    if n.is_multiple_of(2) {
        let mut phi = vec![1i64; n];
        phi[n - 1] = -1;
        let phi = QVector::from_ints(&phi);
        let value = phi.dot(&image);
        let vmax = poly.vertices().iter().map(|v| phi.dot(v)).max().expect("vertices");
        let expected = q((n * (n + 1) / 2) as i64);
        let membership = spec.polytope_membership(&image)?;
        let shown: Vec<String> = image.0.iter().map(format_rational).collect();
        let detail = match &membership {
            Membership::Outside(sep) => format!(
                "({}) separated: {} > {}",
                shown.join(","),
                format_rational(&sep.value_at_point),
                format_rational(&sep.max_on_vertices)
            ),
            m => format!("({}) {m:?}", shown.join(",")),
        };
        checks.push(check("s_n(v0) outside the ball", matches!(membership, Membership::Outside(_)), detail));
        checks.push(check(
            "functional value at s_n(v0)",
            value == expected,
            format!("{} (expected {})", format_rational(&value), format_rational(&expected)),
        ));
        checks.push(check(
            "vertex maximum below the value",
            vmax < value,
            format!("max over {} vertices = {}", poly.vertices().len(), format_rational(&vmax)),
        ));
        checks.push(check("sign change is not isometric", !probe, format!("probe = {probe}")));
    } else {
        let boundary = spec.polytope_membership(&image)? == Membership::Boundary;
        checks.push(check("s_n(v0) on the sphere", boundary, "odd n: the ball is closed under sign changes"));
        checks.push(check("sign change is isometric", probe, format!("probe = {probe}")));
    }
    Ok(checks)
}

fn decomposition_checks(
    spec: &NormSpec,
    cfg: &StripTestConfig,
    hilbert: Vec<Vec<usize>>,
    coxeter: Vec<(Vec<usize>, TypeLabel)>,
) -> CliResult<Vec<Check>> {
    let r = decompose(spec, cfg)?;
    let mut checks = Vec::new();
    let got_h = r.hilbert_indices();
    checks.push(check("hilbert strips", got_h == hilbert, format!("{} (expected {})", fmt_sets(&got_h), fmt_sets(&hilbert))));
    let got_c: Vec<(Vec<usize>, TypeLabel)> = r.coxeter_strips.iter().map(|s| (s.indices.clone(), s.label)).collect();
    let show = |v: &[(Vec<usize>, TypeLabel)]| {
        v.iter().map(|(s, l)| format!("{} {l}", fmt_sets(std::slice::from_ref(s)))).collect::<Vec<_>>().join(", ")
    };
    checks.push(check("coxeter strips", got_c == coxeter, format!("{} (expected {})", show(&got_c), show(&coxeter))));
    checks.push(check("uncovered", r.uncovered.is_empty() || !spec.is_ideal(), fmt_sets(std::slice::from_ref(&r.uncovered))));
    checks.push(check("partition preserved", r.partition_preserved, ""));
    let bounds = strip_projection_bounds(spec, &r, &sample_sphere(spec, cfg.sample_count, cfg.seed))?;
    let worst = bounds.iter().map(|b| format!("({}, {})", fmt_num(b.norm_p), fmt_num(b.norm_complement))).collect::<Vec<_>>();
    checks.push(check("strip projection norms", bounds.iter().all(|b| b.within_bounds), worst.join(" ")));
    Ok(checks)
}

fn axiom_check(spec: &NormSpec, seed: u64) -> Check {
    let a = norm_axioms_check(spec, &sample_sphere(spec, 256, seed));
    check("norm axioms", a.max_violation() <= 1e-9, format!("max violation {:.3e}", a.max_violation()))
}

fn label_checks(refl: &[Reflection], expected: &[TypeLabel]) -> CliResult<Vec<Check>> {
    let comps = label_components(refl, reflect_core::coxeter::DEFAULT_ORDER_CAP)?;
    let labels: Vec<TypeLabel> = comps.iter().map(|(_, c)| c.label).collect();
    let show = |v: &[TypeLabel]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    let mut checks = vec![check("labels", labels == expected, format!("{} (expected {})", show(&labels), show(expected)))];
    for (comp, c) in &comps {
        if let (Some(k), Some(o)) = (c.group_order, c.label.order()) {
            checks.push(check(
                "enumerated group order",
                k as u128 == o,
                format!("component {}: {k} elements, {} expects {o}", fmt_sets(std::slice::from_ref(comp)), c.label),
            ));
        }
    }
    Ok(checks)
}

fn expected_orlicz(ps: &[f64]) -> (Vec<Vec<usize>>, Vec<(Vec<usize>, TypeLabel)>) {
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, &p) in ps.iter().enumerate() {
        match groups.iter_mut().find(|(q, _)| *q == p) {
            Some((_, g)) => g.push(i),
            None => groups.push((p, vec![i])),
        }
    }
    let mut hilbert = Vec::new();
    let mut coxeter = Vec::new();
    for (p, g) in groups {
        if p == 2.0 && g.len() >= 2 {
            hilbert.push(g);
        } else {
            let k = g.len();
            coxeter.push((g, TypeLabel::new(Family::B, k)));
        }
    }
    hilbert.sort();
    coxeter.sort_by(|a, b| a.0.cmp(&b.0));
    (hilbert, coxeter)
}

fn dihedral_label(m: u64) -> Vec<TypeLabel> {
    match m {
        1 => vec![TypeLabel::new(Family::B, 1)],
        2 => vec![TypeLabel::new(Family::B, 1); 2],
        3 => vec![TypeLabel::new(Family::A, 2)],
        4 => vec![TypeLabel::new(Family::B, 2)],
        m => vec![TypeLabel::new(Family::I2(m), 2)],
    }
}

fn family_label(letter: char, n: usize) -> Vec<TypeLabel> {
    match (letter, n) {
        ('A', n) => vec![TypeLabel::new(Family::A, n)],
        ('B', 1) | ('D', 1) => vec![TypeLabel::new(Family::B, 1)],
        ('B', n) => vec![TypeLabel::new(Family::B, n)],
        ('D', 2) => vec![TypeLabel::new(Family::B, 1); 2],
        ('D', 3) => vec![TypeLabel::new(Family::A, 3)],
        (_, n) => vec![TypeLabel::new(Family::D, n)],
    }
}

fn args_of(name: &str) -> Vec<String> {
    name.split_once('(')
        .and_then(|(_, r)| r.strip_suffix(')'))
        .map(|r| r.split(',').map(|a| a.rsplit('=').next().unwrap_or(a).trim().to_string()).collect())
        .unwrap_or_default()
}

pub fn verify(name: &str, seed: u64) -> CliResult<CommandResult> {
    let f = fixture(name)?;
    let head = f.name.split('(').next().unwrap_or_default().to_string();
    let args = args_of(&f.name);
    let int_arg = || args.first().and_then(|a| a.parse::<usize>().ok()).unwrap_or(0);
    let cfg = StripTestConfig { seed, ..StripTestConfig::default() };
    let checks: Vec<Check> = match (&f.entry, head.as_str()) {
        (Entry::Norm(spec), "remark_4_7") => {
            let mut c = vec![axiom_check(spec, seed)];
            c.extend(polytope_checks(spec, spec.dim())?);
            c
        }
        (Entry::Norm(spec), "example_6_8_3") => {
            let mut c = vec![axiom_check(spec, seed)];
            c.extend(decomposition_checks(
                spec,
                &cfg,
                vec![vec![0, 1]],
                vec![(vec![2], TypeLabel::new(Family::B, 1)), (vec![3], TypeLabel::new(Family::B, 1))],
            )?);
            let pairs = supported_pairs(4, &[2, 3], 100, seed);
            let fs = four_squares_residual(spec, &pairs);
            c.push(check("strip {3,4} is euclidean as a subspace", fs <= 1e-9, format!("four-squares residual {fs:.3e}")));
            let r = decompose(spec, &cfg)?;
            let w = r.witnesses.iter().find(|w| w.pair == (2, 3));
            c.push(check(
                "strip {3,4} is not a Hilbert strip",
                w.is_some_and(|w| w.residual > 10.0 * cfg.tolerance),
                w.map(|w| format!("rotation by {} moves the norm by {:.3e}", fmt_num(w.angle), w.residual))
                    .unwrap_or_else(|| "no rotation witness".into()),
            ));
            c
        }
        (Entry::Norm(spec), "example_6_8_4") => {
            let mut c = vec![axiom_check(spec, seed)];
            c.extend(decomposition_checks(
                spec,
                &cfg,
                vec![vec![0, 1], vec![2, 3]],
                vec![(vec![4], TypeLabel::new(Family::B, 1)), (vec![5], TypeLabel::new(Family::B, 1))],
            )?);
            c
        }
        (Entry::Norm(spec), "orlicz_nakano") => {
            let NormKind::OrliczNakano(ps) = spec.kind() else { unreachable!("orlicz fixture") };
            let (h, x) = expected_orlicz(ps);
            let mut c = vec![axiom_check(spec, seed)];
            c.extend(decomposition_checks(spec, &cfg, h, x)?);
            c
        }
        (Entry::Norm(spec), _) => {
            let n = spec.dim();
            let euclid = matches!(spec.kind(), NormKind::Lp(Exponent::Finite(p)) if *p == 2.0);
            let (h, x) = if euclid && n >= 2 {
                (vec![(0..n).collect()], Vec::new())
            } else {
                (Vec::new(), vec![((0..n).collect(), TypeLabel::new(Family::B, n))])
            };
            let mut c = vec![axiom_check(spec, seed)];
            c.extend(decomposition_checks(spec, &cfg, h, x)?);
            c
        }
        (Entry::Roots(roots), _) => {
            let letter = head.chars().last().unwrap_or('A');
            let n = roots.rank();
            if n >= reflect_core::coxeter::FAMILY_MIN_RANK {
                let v = classify_family(roots)?;
                let want = match letter {
                    'A' => reflect_core::coxeter::RootFamily::ADelta,
                    'B' => reflect_core::coxeter::RootFamily::BDelta,
                    _ => reflect_core::coxeter::RootFamily::DDelta,
                };
                let fired = v.fired.iter().filter(|&&b| b).count();
                vec![
                    check("family", v.family == want, format!("{} (expected {want})", v.family)),
                    check("exactly one criterion fires", fired == 1, format!("{fired} fired")),
                ]
            } else {
                let expected = match letter {
                    'A' => family_label('A', n - 1),
                    l => family_label(l, n),
                };
                label_checks(&root_reflections(roots)?, &expected)?
            }
        }
        (Entry::Reflections(refl), _) => {
            let expected: Vec<TypeLabel> = match head.as_str() {
                "simple_A" => family_label('A', int_arg()),
                "simple_B" => family_label('B', int_arg()),
                "simple_D" => family_label('D', int_arg()),
                "I2" => dihedral_label(int_arg() as u64),
                "H3" => vec![TypeLabel::new(Family::H3, 3)],
                "H4" => vec![TypeLabel::new(Family::H4, 4)],
                "F4" => vec![TypeLabel::new(Family::F4, 4)],
                "sign_changes" => vec![TypeLabel::new(Family::B, 1); int_arg()],
                _ => vec![TypeLabel::INFINITE],
            };
            label_checks(refl, &expected)?
        }
    };
    let failing: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| format!("check failed: {}: {}", c.name, c.detail)).collect();
    let payload = json!({
        "fixture": f.name,
        "description": f.description,
        "checks": checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
    });
    let mut result = CommandResult::ok("verify", payload);
    if !failing.is_empty() {
        result.status = Status::InvariantViolation;
        result.diagnostics = failing;
    }
    Ok(result)
}

pub fn fixtures_list() -> CommandResult {
    let items: Vec<Value> = CATALOGUE.iter().map(|(n, d)| json!({"name": n, "description": d})).collect();
    CommandResult::ok("fixtures", json!({"fixtures": items}))
}

pub fn fixtures_show(name: &str) -> CliResult<CommandResult> {
    let f = fixture(name)?;
    let payload = json!({
        "name": f.name,
        "description": f.description,
        "kind": io::entry_kind(&f),
        "value": io::entry_to_json(&f),
    });
    Ok(CommandResult::ok("fixtures", payload))
}

/// Canonical document of a fixture, as accepted by every input argument.
pub fn fixture_document(name: &str) -> CliResult<String> {
    let f = fixture(name)?;
    let mut s = serde_json::to_string_pretty(&io::entry_to_json(&f))?;
    s.push('\n');
    Ok(s)
}
