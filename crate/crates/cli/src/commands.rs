use std::time::Instant;

use loggap::stats::histogram_density;
use loggap::superposition::{e_conv_distribution, gap_exceedance_rate, mc_count_distribution, random_phases};
use loggap::{
    compare, enumerate_gaps, family_e, gap_density_omega, generate_raw, generate_shifted, order_and_gaps,
    sup_distance_to_cdf, unfold, CountingModel64, EmpiricalCdf64, FamilyStats64, GapSample64, LimitLaw64,
    MixedDensity64, Provenance,
};
use serde_json::json;

use crate::config::{
    parse_base, parse_interval, parse_k_range, BaseArgs, BaseSpec, CompareArgs, EmpiricalArgs, Format, RunConfig,
    SimulateArgs, TheoryArgs, What,
};
use crate::output::{Document, Table};
use crate::CliError;

/// Resolution of the grid used for the distance to the exponential law.
const REFERENCE_RESOLUTION: usize = 20_000;

/// Relative offsets at which the theory grid is refined around each jump.
const REFINE: [f64; 6] = [1e-6, 1e-4, 1e-3, 3e-3, 1e-2, 3e-2];

pub struct Outcome {
    pub document: Document,
    pub format: Format,
    /// False when a comparison threshold was breached.
    pub passed: bool,
}

fn base_and_law(args: &BaseArgs) -> Result<(BaseSpec, LimitLaw64), CliError> {
    let spec = parse_base(&args.base).map_err(CliError::Usage)?;
    let law = LimitLaw64::with_eps(spec.base, args.eps)?;
    Ok((spec, law))
}

fn law_for(law: &LimitLaw64, what: What) -> loggap::Result<MixedDensity64> {
    match what {
        What::Raw => law.gap_density(),
        What::Rescaled => law.rescaled_density(),
    }
}

fn sample(spec: &BaseSpec, n: usize, what: What) -> loggap::Result<GapSample64> {
    let (_, gaps) = match what {
        What::Raw => order_and_gaps(generate_raw(&spec.base, n)?, Provenance::Raw)?,
        What::Rescaled => {
            let etas = generate_shifted(&spec.base, n)?;
            order_and_gaps(unfold(&etas, &spec.base)?, Provenance::Unfolded)?
        }
    };
    Ok(gaps)
}

fn default_s_max(law: &MixedDensity64) -> f64 {
    law.support_end() * 1.05
}

fn check_positive(name: &str, x: f64) -> Result<(), CliError> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(CliError::Usage(format!("--{name} must be positive, got {x}")));
    }
    Ok(())
}

fn check_bins(bins: usize) -> Result<(), CliError> {
    if bins == 0 {
        return Err(CliError::Usage("--bins must be at least 1".into()));
    }
    Ok(())
}

fn base_config(cfg: &mut RunConfig, spec: &BaseSpec, eps: f64) {
    cfg.push("base", &spec.text);
    cfg.push("base_kind", format!("{:?}", spec.base.kind()));
    cfg.push("base_value", spec.base.value());
    cfg.push("eps", eps);
}

pub fn empirical(args: &EmpiricalArgs) -> Result<Outcome, CliError> {
    let (spec, law) = base_and_law(&args.base)?;
    check_bins(args.bins)?;
    let theory = law_for(&law, args.what)?;
    let s_max = args.s_max.unwrap_or_else(|| default_s_max(&theory));
    check_positive("s-max", s_max)?;
    let gaps = sample(&spec, args.n, args.what)?;
    let emp = EmpiricalCdf64::from_values(gaps.scaled_gaps.clone())?;
    let hist = histogram_density(&gaps.scaled_gaps, args.bins, s_max);

    let mut cfg = RunConfig::default();
    base_config(&mut cfg, &spec, args.base.eps);
    cfg.push("n", args.n);
    cfg.push("what", args.what.name());
    cfg.push("bins", args.bins);
    cfg.push("s_max", s_max);
    cfg.push("seed", args.common.seed);
    let mut doc = Document::new("empirical", cfg);
    let mean = gaps.scaled_gaps.iter().sum::<f64>() / gaps.len() as f64;
    let max = gaps.scaled_gaps.iter().cloned().fold(0.0, f64::max);
    doc.summary.push("sample_size", gaps.len());
    doc.summary.push("zero_fraction", emp.zero_fraction());
    doc.summary.push("zero_fraction_theory", spec.base.zero_gap_mass());
    doc.summary.push("mean_gap", mean);
    doc.summary.push("max_gap", max);

    let width = s_max / args.bins as f64;
    let mut table = Table::new("gaps", &["s", "ecdf", "hist_density"]);
    for (i, h) in hist.iter().enumerate() {
        let s = (i as f64 + 0.5) * width;
        table.push(vec![s.into(), emp.eval(s).into(), (*h).into()]);
    }
    doc.tables.push(table);
    Ok(Outcome { document: doc, format: args.common.format.unwrap_or(Format::Csv), passed: true })
}

/// Uniform grid on `(0, s_max]` refined on both sides of every jump.
fn theory_grid(points: usize, s_max: f64, jumps: &[f64]) -> Vec<f64> {
    let h = s_max / points as f64;
    let mut grid: Vec<f64> = (1..=points).map(|i| i as f64 * h).collect();
    grid.push(h * 1e-3);
    for &c in jumps.iter().filter(|&&c| c > 0.0) {
        grid.push(c);
        for d in REFINE {
            grid.push(c * (1.0 - d));
            grid.push(c * (1.0 + d));
        }
    }
    grid.retain(|&s| s > 0.0 && s <= s_max);
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();
    grid
}

pub fn theory(args: &TheoryArgs) -> Result<Outcome, CliError> {
    let (spec, law) = base_and_law(&args.base)?;
    check_bins(args.bins)?;
    let theory = law_for(&law, args.what)?;
    let s_max = args.s_max.unwrap_or_else(|| default_s_max(&theory));
    check_positive("s-max", s_max)?;

    let mut cfg = RunConfig::default();
    base_config(&mut cfg, &spec, args.base.eps);
    cfg.push("what", args.what.name());
    cfg.push("bins", args.bins);
    cfg.push("s_max", s_max);
    cfg.push("seed", args.common.seed);
    let mut doc = Document::new("theory", cfg);
    doc.summary.push("total_mass", theory.total_mass());
    doc.summary.push("mean", theory.mean()?);
    doc.summary.push(
        "sup_distance_to_exponential",
        sup_distance_to_cdf(&theory, |s| -(-s).exp_m1(), REFERENCE_RESOLUTION),
    );

    let grid = theory_grid(args.bins, s_max, &theory.breakpoints());
    let cdf = theory.cdf_sorted(&grid);
    let mut curve = Table::new("curve", &["s", "density", "cdf", "exp_ref", "exp_ref_cdf"]);
    for (&s, &f) in grid.iter().zip(&cdf) {
        let e = (-s).exp();
        curve.push(vec![s.into(), theory.density(s).into(), f.into(), e.into(), (-(-s).exp_m1()).into()]);
    }
    let mut atoms = Table::new("atoms", &["location", "mass"]);
    for a in theory.atoms() {
        atoms.push(vec![a.location.into(), a.mass.into()]);
    }
    doc.tables.push(curve);
    doc.tables.push(atoms);
    Ok(Outcome { document: doc, format: args.common.format.unwrap_or(Format::Csv), passed: true })
}

pub fn compare_cmd(args: &CompareArgs) -> Result<Outcome, CliError> {
    let started = Instant::now();
    let (spec, law) = base_and_law(&args.base)?;
    check_bins(args.bins)?;
    let theory = law_for(&law, args.what)?;
    let s_max = args.s_max.unwrap_or_else(|| default_s_max(&theory));
    check_positive("s-max", s_max)?;
    let gaps = sample(&spec, args.n, args.what)?;
    let emp = EmpiricalCdf64::from_values(gaps.scaled_gaps)?;
    let report = compare(&emp, &theory, args.bins, s_max)?;
    let worst_atom = report.atom_mass_errors.iter().map(|a| a.abs_error).fold(0.0, f64::max);
    let passed = report.sup_cdf_distance_off_atoms <= args.threshold && worst_atom <= args.atom_threshold;
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    eprintln!("runtime_ms={elapsed_ms:.1}");

    let mut cfg = RunConfig::default();
    base_config(&mut cfg, &spec, args.base.eps);
    cfg.push("n", args.n);
    cfg.push("what", args.what.name());
    cfg.push("bins", args.bins);
    cfg.push("s_max", s_max);
    cfg.push("threshold", args.threshold);
    cfg.push("atom_threshold", args.atom_threshold);
    cfg.push("seed", args.common.seed);
    let mut doc = Document::new("compare", cfg);
    doc.summary.push("pass", passed);
    if args.timing {
        doc.summary.push("runtime_ms", elapsed_ms);
    }

    let mut metrics = Table::new("metrics", &["metric", "value"]);
    for (name, value) in [
        ("sup_cdf_distance", report.sup_cdf_distance),
        ("sup_cdf_distance_off_atoms", report.sup_cdf_distance_off_atoms),
        ("l1_density_distance", report.l1_density_distance),
        ("zero_fraction", report.zero_fraction),
        ("max_atom_error", worst_atom),
    ] {
        metrics.push(vec![name.into(), value.into()]);
    }
    metrics.push(vec!["sample_size".into(), report.sample_size.into()]);
    let mut atoms = Table::new("atoms", &["location", "theoretical", "empirical", "abs_error"]);
    for a in &report.atom_mass_errors {
        atoms.push(vec![a.location.into(), a.theoretical.into(), a.empirical.into(), a.abs_error.into()]);
    }
    doc.tables.push(metrics);
    doc.tables.push(atoms);
    doc.report = Some(json!(report));
    Ok(Outcome { document: doc, format: args.common.format.unwrap_or(Format::Json), passed })
}

fn parse_betas(args: &SimulateArgs) -> Result<Vec<f64>, CliError> {
    match args.betas.as_deref() {
        None => Ok(vec![0.0; args.omegas.len()]),
        Some("random") => Ok(random_phases(&args.omegas, args.common.seed)),
        Some(list) => list
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("invalid phase `{s}`"))))
            .collect(),
    }
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

pub fn simulate(args: &SimulateArgs) -> Result<Outcome, CliError> {
    let ks = parse_k_range(&args.k).map_err(CliError::Usage)?;
    for &l in &args.lengths {
        if !(l >= 0.0 && l.is_finite()) {
            return Err(CliError::Usage(format!("window lengths must be >= 0, got {l}")));
        }
    }
    let mut cfg = RunConfig::default();
    cfg.push("seed", args.common.seed);
    cfg.push("L", join(&args.lengths));
    cfg.push("k", format!("{}..{}", ks.start(), ks.end()));

    if let Some(b) = args.family_b {
        let family = FamilyStats64::new(b)?;
        let start = args.terms.unwrap_or(family.default_terms());
        cfg.push("family_b", b);
        cfg.push("j", start);
        let mut doc = Document::new("simulate", cfg);
        let mut table = Table::new("family", &["L", "k", "family", "poisson", "abs_diff", "terms", "tail_estimate"]);
        for &l in &args.lengths {
            for k in ks.clone() {
                let v = family_e(b, k, l, start)?;
                let poisson = poisson(k, l);
                table.push(vec![
                    l.into(),
                    k.into(),
                    v.value.into(),
                    poisson.into(),
                    (v.value - poisson).abs().into(),
                    v.terms.into(),
                    v.tail_estimate.into(),
                ]);
            }
        }
        doc.tables.push(table);
        return Ok(Outcome { document: doc, format: args.common.format.unwrap_or(Format::Csv), passed: true });
    }

    if args.omegas.is_empty() {
        return Err(CliError::Usage("simulate needs --omegas or --family-b".into()));
    }
    let betas = parse_betas(args)?;
    let model = CountingModel64::new(args.omegas.clone(), betas.clone())?;
    cfg.push("omegas", join(&args.omegas));
    cfg.push("betas", join(&betas));

    if let Some(text) = &args.enumerate {
        let (lo, hi) = parse_interval(text).map_err(CliError::Usage)?;
        check_bins(args.bins)?;
        let mut sorted = args.omegas.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite frequencies"));
        let law = gap_density_omega(&sorted)?;
        let gaps = enumerate_gaps(&model, (lo, hi));
        let intensity = model.intensity();
        cfg.push("enumerate", format!("{lo}:{hi}"));
        cfg.push("bins", args.bins);
        let mut doc = Document::new("simulate", cfg);
        doc.summary.push("gap_count", gaps.len());
        doc.summary.push("zero_gaps", gaps.iter().filter(|&&g| g == 0.0).count());
        let edge = 1.0 / sorted[0];
        let mut table = Table::new("ccdf", &["s", "empirical", "theory"]);
        for i in 1..=args.bins {
            let s = 1.1 * edge * i as f64 / args.bins as f64;
            let emp = gap_exceedance_rate(&gaps, s, hi - lo) / intensity;
            let th = (intensity - law.cdf(s)) / intensity;
            table.push(vec![s.into(), emp.into(), th.into()]);
        }
        doc.tables.push(table);
        return Ok(Outcome { document: doc, format: args.common.format.unwrap_or(Format::Csv), passed: true });
    }

    check_positive("T", args.horizon)?;
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    cfg.push("samples", args.samples);
    cfg.push("T", args.horizon);
    let mut doc = Document::new("simulate", cfg);
    let mut table = Table::new("counts", &["L", "k", "mc", "std_err", "formula", "z"]);
    let k_max = *ks.end();
    for &l in &args.lengths {
        let mc = mc_count_distribution(&model, l, (0.0, 1.0), args.horizon, args.samples, args.common.seed, k_max)?;
        let formula = e_conv_distribution(k_max, l, model.omegas());
        for k in ks.clone() {
            let est = &mc[k];
            let z = if est.std_err > 0.0 { (est.estimate - formula[k]) / est.std_err } else { 0.0 };
            table.push(vec![
                l.into(),
                k.into(),
                est.estimate.into(),
                est.std_err.into(),
                formula[k].into(),
                z.into(),
            ]);
        }
    }
    doc.tables.push(table);
    Ok(Outcome { document: doc, format: args.common.format.unwrap_or(Format::Csv), passed: true })
}

fn poisson(k: usize, l: f64) -> f64 {
    let log = k as f64 * l.ln() - l - (1..=k).map(|i| (i as f64).ln()).sum::<f64>();
    if l == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    log.exp()
}
