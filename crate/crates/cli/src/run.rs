//! Runs a scenario and writes its CSV artifacts.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use qtcurv::builtins::SolveMode;
use qtcurv::energy::{energy, energy_grad, CurvaturePair};
use qtcurv::geometry::{
    build_covering, grid_hash, write_covering_csv, write_grid_csv, CoverRegion, CoveringConfig, FixedSetKind,
    QuadratureGrid,
};
use qtcurv::solver::{recover_solution, BetaSample, SolverOptions, SymmetricSolver};
use qtcurv::spectral::write_coefficients_csv;
use qtcurv::verify::{
    check_gbc, global_deficit_sweep, local_cutoffs, local_deficit_sweep, mass_distribution, residual_interior,
    region_label, residual_interior_layer_free, standard_lambdas, write_deficit_csv, write_mass_csv, ConstantKind, DeficitRow,
};
use qtcurv::{Basis, Field, Group, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{CurvatureSource, GroupSpec, Scenario};
use crate::samples::load_samples;
use crate::CliError;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the scenario's output directory.
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub degree: Option<usize>,
    /// Reload `coefficients.csv` from the output directory instead of solving.
    pub verify_only: bool,
}

#[derive(Debug, Clone)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub degree: usize,
    pub resolution: usize,
    pub beta: f64,
    pub energy: f64,
    pub grad_norm: f64,
    pub converged: bool,
    pub gbc_defect: f64,
    pub residual: Option<f64>,
    pub interior_case: Option<String>,
    pub boundary_case: Option<String>,
    /// `(key, value)` rows of manifest.csv, in order.
    pub manifest: Vec<(String, String)>,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

pub fn build_group(spec: &GroupSpec) -> Result<Group, CliError> {
    Ok(match spec {
        GroupSpec::Builtin(name) => Group::builtin(name)?,
        GroupSpec::Generators { spec, cap } => Group::parse("custom", spec, *cap)?,
    })
}

pub(crate) fn fixed_label(k: FixedSetKind) -> &'static str {
    match k {
        FixedSetKind::Empty => "empty",
        FixedSetKind::S0 => "S0",
        FixedSetKind::S1 => "S1",
        FixedSetKind::S2 => "S2",
        FixedSetKind::S3 => "S3",
    }
}

struct Solved {
    u: Field,
    beta: f64,
    energy: f64,
    grad_norm: f64,
    iterations: usize,
    converged: bool,
    beta_derivative: Option<f64>,
    scan: Vec<BetaSample<f64>>,
    outer: Option<qtcurv::solver::OuterResult<f64>>,
}

fn solve(
    basis: &Basis,
    group: &Group,
    curv: &CurvaturePair<f64>,
    sc: &Scenario,
    seed: u64,
) -> Result<Solved, CliError> {
    let solver = SymmetricSolver::new(basis, group);
    let opts = SolverOptions { n_beta: sc.n_beta, ..SolverOptions::default() };
    match sc.mode {
        SolveMode::Outer => {
            let r = solver.minimize_outer(curv, &opts)?;
            Ok(Solved {
                u: r.best.u.clone(),
                beta: r.best.beta,
                energy: r.best.energy,
                grad_norm: r.best.grad_norm,
                iterations: r.best.iterations,
                converged: r.best.converged,
                beta_derivative: r.beta_derivative,
                scan: r.scan(),
                outer: Some(r),
            })
        }
        mode => {
            let beta = mode.fixed_beta().expect("fixed-beta mode");
            let start = (sc.start_amplitude != 0.0).then(|| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut c: Vec<f64> = basis
                    .modes()
                    .iter()
                    .map(|m| sc.start_amplitude * rng.gen_range(-1.0..1.0) / ((1 + m.k) as f64).powi(2))
                    .collect();
                solver.project(&mut c);
                Field::from_coefficients(c)
            });
            let r = solver.minimize_inner(beta, curv, start.as_ref(), opts.final_tol, &opts)?;
            Ok(Solved {
                u: r.u,
                beta,
                energy: r.energy,
                grad_norm: r.grad_norm,
                iterations: r.iterations,
                converged: r.converged,
                beta_derivative: None,
                scan: Vec::new(),
                outer: None,
            })
        }
    }
}

/// Reads a field written by a previous run; the `# beta` comment holds `β`.
fn load_coefficients(path: &Path, basis: &Basis) -> Result<(Field, f64), CliError> {
    let bad = |line: usize, message: String| CliError::Samples { path: path.display().to_string(), line, message };
    let f = File::open(path)?;
    let mut beta = None;
    let mut header: Option<Vec<String>> = None;
    for (k, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        let l = line.trim();
        if let Some(c) = l.strip_prefix('#') {
            if let Some(b) = c.trim().strip_prefix("beta ") {
                beta = Some(b.trim().parse::<f64>().map_err(|_| bad(k + 1, format!("bad beta `{b}`")))?);
            }
            continue;
        }
        if l.is_empty() {
            continue;
        }
        match &header {
            None => {
                let want: Vec<String> = basis.modes().iter().map(|m| m.label()).collect();
                let got: Vec<String> = l.split(',').map(|s| s.trim().to_string()).collect();
                if got != want {
                    return Err(bad(k + 1, format!("mode columns do not match a degree-{} basis", basis.max_degree())));
                }
                header = Some(got);
            }
            Some(_) => {
                let c = l
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad(k + 1, "unparsable coefficient".into()))?;
                let beta = beta.ok_or_else(|| bad(k + 1, "missing `# beta` line".into()))?;
                return Ok((Field::from_coefficients(c), beta));
            }
        }
    }
    Err(bad(1, "no coefficient row".into()))
}

/// A boundary node closest to the fixed set of the group.
fn fixed_set_point(grid: &QuadratureGrid<f64>, group: &Group) -> Point {
    *grid
        .boundary_nodes()
        .iter()
        .min_by(|a, b| group.distance_to_fixed(a).total_cmp(&group.distance_to_fixed(b)))
        .expect("grid has boundary nodes")
}

fn deficit_rows(
    basis: &Basis,
    group: &Group,
    cov: Option<&CoveringConfig<f64>>,
    sc: &Scenario,
    warnings: &mut Vec<String>,
) -> Result<Vec<DeficitRow>, CliError> {
    let lambdas = standard_lambdas();
    let mut rows = global_deficit_sweep(basis, Point::on_equator([1.0, 0.0, 0.0, 0.0]), &lambdas, sc.verify.probe_scale)?;
    let Some(cov) = cov else { return Ok(rows) };
    let cuts = local_cutoffs::<f64>();
    let mut cases = vec![(CoverRegion::Omega, ConstantKind::Interior, Point::north_pole())];
    if cov.n_balls() > 0 {
        cases.push((CoverRegion::Ball(0), ConstantKind::Touching, cov.centers[0]));
        cases.push((CoverRegion::Ball(0), ConstantKind::Boundary, cov.centers[0]));
    }
    if cov.has_fixed_set() {
        let p = fixed_set_point(basis.grid(), group);
        cases.push((CoverRegion::Fixed, ConstantKind::Touching, p));
        cases.push((CoverRegion::Fixed, ConstantKind::Boundary, p));
    }
    for (region, kind, center) in cases {
        match local_deficit_sweep(basis, cov, region, kind, center, &lambdas, &cuts, sc.verify.local_eps) {
            Ok(r) => rows.extend(r),
            // A coarse grid may leave a region without nodes.
            Err(e @ qtcurv::Error::Domain { .. }) => warnings.push(format!(
                "local deficits in {} ({}) skipped: {e}",
                region_label(region),
                kind.as_str()
            )),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(rows)
}

fn create(dir: &Path, name: &str, files: &mut Vec<PathBuf>) -> Result<BufWriter<File>, CliError> {
    let p = dir.join(name);
    files.push(p.clone());
    Ok(BufWriter::new(File::create(p)?))
}

fn fmt(v: f64) -> String {
    format!("{v:e}")
}

pub fn run(sc: &Scenario, opts: &RunOptions) -> Result<RunSummary, CliError> {
    let degree = opts.degree.unwrap_or(sc.degree);
    let resolution = sc.resolution.unwrap_or(degree);
    let seed = opts.seed.unwrap_or(sc.seed);
    let out_dir = opts
        .out
        .clone()
        .or_else(|| sc.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&sc.name));
    std::fs::create_dir_all(&out_dir)?;
    let comments = vec![format!("scenario {} degree {degree} resolution {resolution}", sc.name)];
    let mut warnings = Vec::new();
    let mut files = Vec::new();

    let grid = QuadratureGrid::new(resolution)?;
    let basis = Basis::new(degree, &grid)?;
    let group = build_group(&sc.group)?;
    let curv = match &sc.curvature {
        CurvatureSource::Family(spec) => spec.build(&grid, &group),
        CurvatureSource::Samples(path) => {
            let (c, w) = load_samples(path, &basis, &group)?;
            warnings.extend(w);
            c
        }
    };
    let cov = if sc.verify.mass || sc.verify.deficits {
        match build_covering(&group, &grid, sc.covering[0], sc.covering[1], sc.covering[2]) {
            Ok(c) => Some(c),
            Err(e) => {
                warnings.push(format!("covering unavailable, mass report and local deficits skipped: {e}"));
                None
            }
        }
    } else {
        None
    };

    let coeff_path = out_dir.join("coefficients.csv");
    let solved = if opts.verify_only {
        let (u, beta) = load_coefficients(&coeff_path, &basis)?;
        let e = energy(&basis, &u, beta, &curv)?;
        let mut g = energy_grad(&basis, &u, beta, &curv)?.coefficients;
        SymmetricSolver::new(&basis, &group).project(&mut g);
        Solved {
            u,
            beta,
            energy: e,
            grad_norm: g.iter().map(|v| v * v).sum::<f64>().sqrt(),
            iterations: 0,
            converged: true,
            beta_derivative: None,
            scan: Vec::new(),
            outer: None,
        }
    } else {
        solve(&basis, &group, &curv, sc, seed)?
    };
    if !solved.converged {
        warnings.push(format!("solver stopped before reaching tolerance (gradient norm {:.3e})", solved.grad_norm));
    }
    let (u, rec) = recover_solution(&basis, &solved.u, solved.beta, &curv)?;
    let gbc = check_gbc(&basis, &u, &curv);

    let mut m: Vec<(String, String)> = Vec::new();
    let mut put = |k: &str, v: String| m.push((k.to_string(), v));
    put("scenario", sc.name.clone());
    put("mode", sc.mode.as_str().into());
    put("group", group.name().to_string());
    put("group_order", group.len().to_string());
    put("fixed_set", fixed_label(group.fixed_set_kind()).into());
    put(
        "curvature",
        match &sc.curvature {
            CurvatureSource::Family(s) => s.family().into(),
            CurvatureSource::Samples(_) => "samples".into(),
        },
    );
    put("degree", degree.to_string());
    put("resolution", resolution.to_string());
    put("n_modes", basis.len().to_string());
    put("seed", seed.to_string());
    put("grid_hash", grid_hash(&grid));
    put("verify_only", opts.verify_only.to_string());
    put("beta", fmt(solved.beta));
    put("beta_fraction", fmt(solved.beta / (4.0 * std::f64::consts::PI.powi(2))));
    put("energy", fmt(solved.energy));
    put("grad_norm", fmt(solved.grad_norm));
    put("iterations", solved.iterations.to_string());
    put("converged", solved.converged.to_string());
    put("beta_derivative", solved.beta_derivative.map_or("none".into(), fmt));
    if let Some(best_scan) = solved.scan.iter().filter_map(|s| s.m.map(|v| (s.beta, v))).min_by(|a, b| a.1.total_cmp(&b.1)) {
        put("scan_min_beta", fmt(best_scan.0));
        put("scan_min_m", fmt(best_scan.1));
    }
    put("shift", fmt(rec.shift));
    put("interior_integral", fmt(rec.interior_integral));
    put("boundary_integral", fmt(rec.boundary_integral));
    put("compatibility_defect", fmt(rec.compatibility_defect));
    put("interior_defect", fmt(rec.interior_defect));
    put("boundary_defect", fmt(rec.boundary_defect));
    put("gbc_defect", fmt(gbc));

    let residual = sc.verify.residual.then(|| residual_interior(&basis, &u, &curv, sc.verify.margin));
    if let Some(r) = residual {
        put("residual", fmt(r));
        put("residual_layer_free", fmt(residual_interior_layer_free(&basis, &u, &curv, sc.verify.margin)));
    }

    let mut interior_case = None;
    let mut boundary_case = None;
    let report = match (sc.verify.mass, cov.as_ref()) {
        (true, Some(cov)) => match mass_distribution(&basis, &u, &curv, cov) {
            Ok(rep) => Some((cov, rep)),
            Err(e @ qtcurv::Error::Admissibility { .. }) => {
                warnings.push(format!("mass report skipped: {e}"));
                None
            }
            Err(e) => return Err(e.into()),
        },
        _ => None,
    };
    if let Some((cov, rep)) = report {
        put("covering_balls", cov.n_balls().to_string());
        put("interior_case", rep.interior_case.to_string());
        put("boundary_case", rep.boundary_case.to_string());
        put("mass_pair_defect", fmt(rep.pair_defect()));
        interior_case = Some(rep.interior_case.to_string());
        boundary_case = Some(rep.boundary_case.to_string());
        write_mass_csv(&rep, &comments, create(&out_dir, "mass.csv", &mut files)?)?;
        write_covering_csv(cov, &comments, create(&out_dir, "covering.csv", &mut files)?)?;
    }

    if sc.verify.deficits {
        let rows = deficit_rows(&basis, &group, cov.as_ref(), sc, &mut warnings)?;
        let sup = rows
            .iter()
            .filter(|r| r.variant == "projected")
            .fold(f64::NEG_INFINITY, |a, r| a.max(r.deficit));
        put("deficit_projected_max", fmt(sup));
        write_deficit_csv(&rows, &comments, create(&out_dir, "deficits.csv", &mut files)?)?;
    }

    if !sc.verify.refinement.is_empty() {
        let mut w = create(&out_dir, "refinement.csv", &mut files)?;
        for c in &comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "degree,resolution,beta,residual,residual_layer_free,gbc_defect")?;
        for &l in &sc.verify.refinement {
            let res = sc.resolution.map_or(l, |r| r.max(l));
            let g = QuadratureGrid::new(res)?;
            let b = Basis::new(l, &g)?;
            let c = match &sc.curvature {
                CurvatureSource::Family(spec) => spec.build(&g, &group),
                CurvatureSource::Samples(path) => load_samples(path, &b, &group)?.0,
            };
            let s = solve(&b, &group, &c, sc, seed)?;
            let (v, _) = recover_solution(&b, &s.u, s.beta, &c)?;
            writeln!(
                w,
                "{l},{res},{},{},{},{}",
                fmt(s.beta),
                fmt(residual_interior(&b, &v, &c, sc.verify.margin)),
                fmt(residual_interior_layer_free(&b, &v, &c, sc.verify.margin)),
                fmt(check_gbc(&b, &v, &c))
            )?;
        }
        w.flush()?;
    }

    if let Some(outer) = &solved.outer {
        outer.write_csv(&comments, create(&out_dir, "beta_scan.csv", &mut files)?)?;
    }
    write_grid_csv(&grid, &comments, create(&out_dir, "grid.csv", &mut files)?)?;
    if !opts.verify_only {
        let mut cc = comments.clone();
        cc.push(format!("beta {}", fmt(solved.beta)));
        files.push(coeff_path.clone());
        write_coefficients_csv(&basis, std::slice::from_ref(&u), &cc, BufWriter::new(File::create(&coeff_path)?))?;
    }

    let mut w = create(&out_dir, "manifest.csv", &mut files)?;
    for c in &comments {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "key,value")?;
    for (k, v) in &m {
        writeln!(w, "{k},{v}")?;
    }
    w.flush()?;

    Ok(RunSummary {
        out_dir,
        degree,
        resolution,
        beta: solved.beta,
        energy: solved.energy,
        grad_norm: solved.grad_norm,
        converged: solved.converged,
        gbc_defect: gbc,
        residual,
        interior_case,
        boundary_case,
        manifest: m,
        files,
        warnings,
    })
}
