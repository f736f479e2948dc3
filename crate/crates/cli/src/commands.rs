//! The four subcommands.

use crate::config::{Command, RunConfig, Source};
use crate::error::CliError;
use crate::numfmt::nums;
use crate::report::{AdaptedOutput, Block, Inputs, Run};
use crate::spec::{parse_spec, ParsedSpec};
use ndarray::{Array1, Array2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use submersion_core::biharmonic::{
    e1_identity_residual_tol, key_identity_residual_tol, simplified_residuals_tol,
};
use submersion_core::connection::adapted_curvature_relations_tol;
use submersion_core::framealg::frobenius;
use submersion_core::numgeom::{
    base_ricci_fd, connection_oracle, example_by_name, extract_integrability_data, extract_jet,
    riemann_fd, sectional_curvature_check, ChartSubmersion,
};
use submersion_core::{
    adapt_frame_data, bitension_residual, compute_p, curvature_residuals, eek_identity_residual,
    nabla_coeffs, BaseRicci, GeometryError, IntegrabilityJet, ReportMetadata, ResidualReport,
    Verdict,
};

/// Sample points drawn in addition to the domain centre.
pub const EXTRA_POINTS: usize = 4;
/// Connection oracle agreement, in units of `h^2`.
pub const CONNECTION_CONSTANT: f64 = 50.0;
/// Lift conditions are solved exactly up to rounding.
pub const LIFT_TOL: f64 = 1e-10;
/// Adaptation defects, before scaling by the input size.
pub const ADAPT_TOL: f64 = 1e-11;
/// Below this the three-step extraction difference is rounding only.
pub const EXACT_STEP_TOL: f64 = 1e-9;
/// Allowed deviation of the observed convergence order from 2.
pub const ORDER_TOL: f64 = 0.25;
/// Range and step of the curvature-constant scan.
pub const SCAN: (f64, f64, f64) = (-5.0, 5.0, 1e-2);

pub fn run(cfg: &RunConfig) -> Result<Run, CliError> {
    cfg.validate()?;
    match cfg.command {
        Command::Check => check(cfg),
        Command::Adapt => adapt(cfg),
        Command::Oracle => oracle(cfg),
        Command::Identities => identities(cfg),
    }
}

enum Loaded {
    Chart(Box<ChartSubmersion>),
    Spec(String, Box<ParsedSpec>),
}

fn load(cfg: &RunConfig) -> Result<Loaded, CliError> {
    match &cfg.source {
        Source::Example(name) => {
            let cs = example_by_name(name, cfg.n.unwrap_or(2))?;
            if let Some(n) = cfg.n {
                if n != cs.n {
                    return Err(CliError::Usage(format!("example {name} has n = {}, not {n}", cs.n)));
                }
            }
            Ok(Loaded::Chart(Box::new(cs)))
        }
        Source::Spec(path) => {
            let spec = parse_spec(path)?;
            if let Some(n) = cfg.n {
                if n != spec.data.n() {
                    return Err(CliError::Usage(format!(
                        "--n {n} disagrees with n = {} in {}",
                        spec.data.n(),
                        path.display()
                    )));
                }
            }
            Ok(Loaded::Spec(path.display().to_string(), Box::new(spec)))
        }
        Source::None => Err(CliError::Usage(format!(
            "{} needs --example NAME or --spec PATH",
            cfg.command.as_str()
        ))),
    }
}

fn new_run(cfg: &RunConfig, inputs: Inputs) -> Run {
    let report = ResidualReport::new(ReportMetadata {
        command: cfg.command.as_str().into(),
        example: inputs.example.clone(),
        n: inputs.n,
        c: inputs.c.map(|c| c.0),
        h: inputs.h.map(|h| h.0),
    });
    Run {
        report,
        inputs,
        quantities: BTreeMap::new(),
        adapted: None,
        notes: Vec::new(),
    }
}

fn chart_inputs(cfg: &RunConfig, cs: &ChartSubmersion, c: Option<f64>, points: &[Array1<f64>]) -> Inputs {
    Inputs {
        example: Some(cs.name.clone()),
        spec: None,
        n: cs.n,
        c: c.map(Into::into),
        h: Some(cfg.h.into()),
        seed: Some(cfg.seed),
        points: points.iter().map(|p| nums(p.iter().copied())).collect(),
    }
}

fn spec_inputs(path: &str, spec: &ParsedSpec, c: Option<f64>) -> Inputs {
    Inputs {
        spec: Some(path.to_string()),
        n: spec.data.n(),
        c: c.map(Into::into),
        ..Inputs::default()
    }
}

fn points(cs: &ChartSubmersion, seed: u64) -> Vec<Array1<f64>> {
    let mut pts = vec![cs.centre()];
    pts.extend(cs.sample_points(EXTRA_POINTS, seed));
    pts
}

fn max_abs<'a>(values: impl IntoIterator<Item = &'a f64>) -> f64 {
    values.into_iter().fold(0.0, |m: f64, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

/// Per-point residual arrays stacked along a leading axis.
#[derive(Default)]
struct Stack {
    shape: Vec<usize>,
    values: Vec<f64>,
    count: usize,
}

impl Stack {
    fn push<'a>(&mut self, shape: &[usize], values: impl IntoIterator<Item = &'a f64>) {
        self.shape = shape.to_vec();
        self.values.extend(values);
        self.count += 1;
    }

    fn into_parts(self) -> (Vec<usize>, Vec<f64>) {
        let mut shape = vec![self.count];
        shape.extend(self.shape);
        (shape, self.values)
    }
}

fn push_stack(run: &mut Run, name: &str, stack: Stack, tol: f64) {
    let (shape, values) = stack.into_parts();
    run.report.push(name, shape, values, tol);
}

fn verdict(run: &Run, max_tension: f64, tol: f64) -> Verdict {
    let curvature_ok = run
        .report
        .families
        .iter()
        .filter(|f| f.name.starts_with("curvature_"))
        .all(|f| f.pass());
    let bitension_ok = run.report.family("bitension").is_some_and(|f| f.pass());
    if !curvature_ok {
        Verdict::InconsistentInputs
    } else if max_tension <= tol {
        Verdict::Harmonic
    } else if bitension_ok {
        Verdict::BiharmonicNontrivialCandidate
    } else {
        Verdict::NotBiharmonic
    }
}

const CURVATURE_FAMILIES: [&str; 4] = ["curvature_r1", "curvature_r2", "curvature_r3", "curvature_r4"];

fn vertical_slices(jet: &IntegrabilityJet<f64>) -> [(String, Vec<usize>, Vec<f64>); 3] {
    let n = jet.n();
    [
        ("fiber_d_f".into(), vec![n, n, n], jet.d_f().index_axis(Axis(0), n).iter().copied().collect()),
        ("fiber_d_kappa".into(), vec![n], jet.d_kappa().row(n).to_vec()),
        ("fiber_d_sigma".into(), vec![n, n], jet.d_sigma().index_axis(Axis(0), n).iter().copied().collect()),
    ]
}

/// Bitension, curvature identities and fibre constancy for each jet.
fn push_check_families(
    run: &mut Run,
    jets: &[(IntegrabilityJet<f64>, BaseRicci<f64>)],
    c: Option<f64>,
    tol: f64,
) -> Result<f64, CliError> {
    let n = jets[0].0.n();
    let (mut bit, mut tension, mut norms) = (Stack::default(), Stack::default(), Stack::default());
    let mut curv: [Stack; 4] = Default::default();
    let mut fiber: [Stack; 3] = Default::default();
    let mut names = Vec::new();
    let mut max_tension = 0.0f64;
    for (jet, ricci) in jets {
        let b = bitension_residual(jet, ricci)?;
        bit.push(&[n], b.residuals.iter());
        tension.push(&[n], b.tension.iter());
        norms.push(&[], [b.tension_norm()].iter());
        max_tension = max_tension.max(b.tension_norm());
        if let Some(c) = c {
            let r = curvature_residuals(jet, c);
            curv[0].push(&[n, n, n], r.r1.iter());
            curv[1].push(&[n, n], r.r2.iter());
            curv[2].push(&[n], r.r3.iter());
            curv[3].push(&[n, n], r.r4.iter());
        }
        names.clear();
        for (slot, (name, shape, values)) in fiber.iter_mut().zip(vertical_slices(jet)) {
            slot.push(&shape, values.iter());
            names.push(name);
        }
    }
    push_stack(run, "bitension", bit, tol);
    if c.is_some() {
        for (name, stack) in CURVATURE_FAMILIES.iter().zip(curv) {
            push_stack(run, name, stack, tol);
        }
    } else {
        run.notes.push("no curvature constant given; curvature identities skipped".into());
    }
    for (name, stack) in names.iter().zip(fiber) {
        push_stack(run, name, stack, tol);
    }
    for (name, stack) in [("tension", tension), ("tension_norm", norms)] {
        let (shape, values) = stack.into_parts();
        run.quantities.insert(name.into(), Block::new(shape, values));
    }
    Ok(max_tension)
}

fn check(cfg: &RunConfig) -> Result<Run, CliError> {
    match load(cfg)? {
        Loaded::Chart(cs) => {
            let c = cfg.c.or(cs.total_curvature);
            let pts = points(&cs, cfg.seed);
            let mut run = new_run(cfg, chart_inputs(cfg, &cs, c, &pts));
            let jets = pts
                .iter()
                .map(|p| {
                    let p = p.as_slice().expect("contiguous point");
                    Ok((extract_jet(&cs, p, cfg.h)?, base_ricci_fd(&cs, p, cfg.h)?))
                })
                .collect::<Result<Vec<_>, GeometryError>>()?;
            let tol = cfg.tol_grid();
            let max_tension = push_check_families(&mut run, &jets, c, tol)?;
            run.report.verdict = Some(verdict(&run, max_tension, tol));
            Ok(run)
        }
        Loaded::Spec(path, spec) => {
            let c = cfg.c.or(spec.c);
            let ricci = match (&spec.ricci, c) {
                (Some(r), _) => r.clone(),
                (None, Some(c)) => BaseRicci::space_form(spec.data.sigma(), c),
                (None, None) => {
                    return Err(CliError::field("ricci", "spec gives neither ricci nor c"));
                }
            };
            let mut run = new_run(cfg, spec_inputs(&path, &spec, c));
            if spec.ricci.is_none() {
                run.notes.push("base Ricci from the space-form formula".into());
            }
            let tol = cfg.tol_algebraic() * spec.data.scale().max(1.0);
            let max_tension = push_check_families(&mut run, &[(spec.jet_or_constant(), ricci)], c, tol)?;
            run.report.verdict = Some(verdict(&run, max_tension, tol));
            Ok(run)
        }
    }
}

fn random_input(n: usize, seed: u64) -> (Array1<f64>, Array2<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kappa = Array1::from_shape_fn(n, |_| rng.gen_range(-1.0..1.0));
    let mut sigma = Array2::zeros((n, n));
    for i in 0..n {
        for j in (i + 1)..n {
            let v: f64 = rng.gen_range(-1.0..1.0);
            sigma[[i, j]] = v;
            sigma[[j, i]] = -v;
        }
    }
    (kappa, sigma)
}

fn adapt(cfg: &RunConfig) -> Result<Run, CliError> {
    let (kappa, sigma, inputs, note) = match &cfg.source {
        Source::None => {
            let n = cfg.n.unwrap_or(2);
            let (kappa, sigma) = random_input(n, cfg.seed);
            let inputs = Inputs {
                n,
                seed: Some(cfg.seed),
                ..Inputs::default()
            };
            (kappa, sigma, inputs, format!("random input from seed {}", cfg.seed))
        }
        _ => match load(cfg)? {
            Loaded::Spec(path, spec) => {
                let inputs = spec_inputs(&path, &spec, None);
                (spec.data.kappa().clone(), spec.data.sigma().clone(), inputs, String::new())
            }
            Loaded::Chart(cs) => {
                let p = cs.centre();
                let d = extract_integrability_data(&cs, p.as_slice().expect("contiguous point"), cfg.h)?;
                let inputs = chart_inputs(cfg, &cs, None, std::slice::from_ref(&p));
                (d.kappa().clone(), d.sigma().clone(), inputs, "data extracted at the domain centre".into())
            }
        },
    };
    let mut run = new_run(cfg, inputs);
    if !note.is_empty() {
        run.notes.push(note);
    }
    let red = adapt_frame_data(&kappa, &sigma)?;
    let base = cfg.tol.unwrap_or(ADAPT_TOL);
    let n = kappa.len();
    run.report
        .push_scalar("orthogonality_defect", red.orthogonality_defect(), base * (n as f64).max(1.0))
        .push_scalar("tridiagonality_defect", red.tridiagonality_defect(), base * frobenius(&sigma).max(1.0))
        .push_scalar("kappa_defect", red.kappa_defect(), base * frobenius(&kappa.clone().insert_axis(Axis(0))).max(1.0));
    let rows = |m: &Array2<f64>| m.rows().into_iter().map(|r| nums(r.iter().copied())).collect();
    run.adapted = Some(AdaptedOutput {
        k: rows(&red.k),
        kappa_out: nums(red.kappa_out.iter().copied()),
        sigma_out: rows(&red.sigma_out),
        steps: red.steps,
        stages: red.stages,
    });
    Ok(run)
}

/// Flattened `(f, kappa, sigma)` extracted with step `h`.
fn extraction_vector(cs: &ChartSubmersion, p: &[f64], h: f64) -> Result<Vec<f64>, GeometryError> {
    let d = extract_integrability_data(cs, p, h)?;
    Ok(d.f().iter().chain(d.kappa().iter()).chain(d.sigma().iter()).copied().collect())
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

fn oracle(cfg: &RunConfig) -> Result<Run, CliError> {
    let cs = match load(cfg)? {
        Loaded::Chart(cs) => cs,
        Loaded::Spec(..) => return Err(CliError::Usage("oracle needs --example NAME".into())),
    };
    let h = cfg.h;
    let c = cfg.c.or(cs.total_curvature);
    let pts = points(&cs, cfg.seed);
    let mut run = new_run(cfg, chart_inputs(cfg, &cs, c, &pts));
    let tol = cfg.tol_grid();

    let (mut conn, mut lift, mut sym) = (Vec::new(), Vec::new(), Vec::new());
    let mut jets = Vec::new();
    for p in &pts {
        let p = p.as_slice().expect("contiguous point");
        let d = extract_integrability_data(&cs, p, h)?;
        let table = nabla_coeffs(&d, &compute_p(&d));
        conn.push(max_abs((&connection_oracle(&cs, p, h)? - table.table()).iter()));
        lift.push(cs.lift_defects(p)?.max());
        let riem = riemann_fd(|q: &[f64]| (cs.metric_total)(q), p, h)?;
        sym.push(riem.symmetry_defects().into_iter().fold(0.0, f64::max));
        jets.push(extract_jet(&cs, p, h)?);
    }
    let count = pts.len();
    run.report
        .push("connection", vec![count], conn, CONNECTION_CONSTANT * h * h)
        .push("lift_defects", vec![count], lift, LIFT_TOL)
        .push("riemann_symmetries", vec![count], sym, tol);

    match c {
        Some(c) => {
            let mut fams: [Vec<f64>; 4] = Default::default();
            let mut sect = Vec::new();
            for (jet, p) in jets.iter().zip(&pts) {
                let r = curvature_residuals(jet, c);
                for (slot, m) in fams.iter_mut().zip(r.family_maxima()) {
                    slot.push(m);
                }
                sect.push(sectional_curvature_check(&cs, c, std::slice::from_ref(p), h)?);
            }
            for (name, values) in CURVATURE_FAMILIES.iter().zip(fams) {
                run.report.push(*name, vec![count], values, tol);
            }
            run.report.push("sectional_curvature", vec![count], sect, tol);
        }
        None => {
            let (lo, hi, step) = SCAN;
            let steps = ((hi - lo) / step).round() as usize;
            let mut best = (f64::INFINITY, lo);
            for s in 0..=steps {
                let c = lo + s as f64 * step;
                let worst = jets
                    .iter()
                    .map(|j| curvature_residuals(j, c).max_abs())
                    .fold(0.0, f64::max);
                if worst < best.0 {
                    best = (worst, c);
                }
            }
            run.report.push_scalar("constant_curvature_scan", best.0, tol);
            run.quantities.insert("scan_best_c".into(), Block::new(vec![], [best.1]));
            run.notes.push(format!(
                "no constant c in [{lo}, {hi}] satisfies the curvature identities; best c = {:.2}",
                best.1
            ));
        }
    }

    // Richardson: differences of extractions at h, h/2, h/4 shrink by 4.
    let p0 = pts[0].as_slice().expect("contiguous point");
    let u = [h, h / 2.0, h / 4.0]
        .iter()
        .map(|&s| extraction_vector(&cs, p0, s))
        .collect::<Result<Vec<_>, _>>()?;
    let (d1, d2) = (sup_diff(&u[0], &u[1]), sup_diff(&u[1], &u[2]));
    if d1 > EXACT_STEP_TOL {
        let order = (d1 / d2).log2();
        run.report.push_scalar("convergence_order", (order - 2.0).abs(), ORDER_TOL);
        run.quantities.insert("observed_order".into(), Block::new(vec![], [order]));
    } else {
        run.report.push_scalar("convergence_step_difference", d1, EXACT_STEP_TOL);
        run.notes.push("extraction is exact up to rounding; no order to measure".into());
    }
    Ok(run)
}

fn identities(cfg: &RunConfig) -> Result<Run, CliError> {
    let (jet, c, mut run, tol) = match load(cfg)? {
        Loaded::Chart(cs) => {
            let c = cfg.c.or(cs.total_curvature).ok_or_else(|| {
                CliError::Usage(format!("example {} has no curvature constant; pass --c", cs.name))
            })?;
            let p = cs.centre();
            let jet = extract_jet(&cs, p.as_slice().expect("contiguous point"), cfg.h)?;
            let run = new_run(cfg, chart_inputs(cfg, &cs, Some(c), std::slice::from_ref(&p)));
            (jet, c, run, cfg.tol_grid())
        }
        Loaded::Spec(path, spec) => {
            let c = cfg
                .c
                .or(spec.c)
                .ok_or_else(|| CliError::field("c", "identities need a curvature constant"))?;
            let tol = cfg.tol_algebraic() * spec.data.scale().max(1.0);
            let run = new_run(cfg, spec_inputs(&path, &spec, Some(c)));
            (spec.jet_or_constant(), c, run, tol)
        }
    };
    let data = jet.base();
    let n = data.n();
    let skipped = |run: &mut Run, name: &str, e: GeometryError| {
        run.notes.push(format!("{name} skipped: {e}"));
    };
    match key_identity_residual_tol(data, c, tol) {
        Ok(v) => {
            run.report.push_scalar("key_identity", v, tol);
        }
        Err(e) => skipped(&mut run, "key_identity", e),
    }
    match e1_identity_residual_tol(data, c, tol) {
        Ok(v) => {
            run.report.push_scalar("e1_identity", v, tol);
        }
        Err(e) => skipped(&mut run, "e1_identity", e),
    }
    let eek = (0..n)
        .map(|a| eek_identity_residual(&jet, c, a))
        .collect::<Result<Vec<_>, _>>()?;
    run.report.push("eek_identity", vec![n], eek, tol);
    match adapted_curvature_relations_tol(&jet, c, tol) {
        Ok(rel) => {
            for (name, v) in rel.named_maxima() {
                run.report.push_scalar(format!("adapted_{name}"), v, tol);
            }
        }
        Err(e) => skipped(&mut run, "adapted relations", e),
    }
    match simplified_residuals_tol(&jet, c, tol) {
        Ok(s) => {
            run.report.push("simplified_system", vec![n], s.to_vec(), tol);
        }
        Err(e) => skipped(&mut run, "simplified_system", e),
    }
    Ok(run)
}
