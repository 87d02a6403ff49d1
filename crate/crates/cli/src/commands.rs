use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use scurve::data::{
    auto_histogram, build_ecdf, gen_erf_target, gen_sigmoid_target, linspace, parse_csv, CsvSchema,
    EmpiricalCdf, HistogramSpec, SampleColumn, Strategy, TargetTable, IRIS_CSV,
};
use scurve::fit::{fit_samples, measure_interval, InflectionSource};
use scurve::{FitConfig, InitMode, Superposition};

use crate::args::{
    Emit, FitArgs, FitCdfArgs, InitModeArg, ReportArgs, StrategyArg, Target, TargetArgs,
};
use crate::error::CliError;
use crate::run::{self, CommandKind, FitRecord, Input, RunFile, RunManifest, Source};
use crate::svg::{self, Mark, Panel, Series, PALETTE};
use crate::tables;

const CURVE_POINTS: usize = 400;

/// Collects artifacts in memory, then writes them in one pass so nothing is
/// created when an earlier step fails.
struct Artifacts {
    out: PathBuf,
    emit: Vec<Emit>,
    files: Vec<(String, String)>,
}

impl Artifacts {
    fn new(out: &Path, emit: &[Emit]) -> Self {
        Self {
            out: out.to_path_buf(),
            emit: emit.to_vec(),
            files: Vec::new(),
        }
    }

    fn add(&mut self, kind: Emit, name: String, content: impl FnOnce() -> String) {
        if self.emit.contains(&kind) {
            self.files.push((name, content()));
        }
    }

    fn write(self) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(&self.out)
            .map_err(|e| CliError::Output(format!("{}: {e}", self.out.display())))?;
        let mut written = Vec::new();
        for (name, content) in self.files {
            let path = self.out.join(name);
            std::fs::write(&path, content)
                .map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Lowercase with `-` and spaces folded to `_`.
fn normalize(s: &str) -> String {
    s.trim().to_lowercase().replace(['-', ' '], "_")
}

/// A file name fragment safe on every platform.
fn slug(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn strategy(s: StrategyArg) -> Strategy {
    match s {
        StrategyArg::Slope => Strategy::SlopeMidpoint,
        StrategyArg::Mode => Strategy::ModeFrequency,
    }
}

fn n_values(fit: &FitArgs) -> Result<Vec<usize>, CliError> {
    let mut ns = match &fit.sweep {
        Some(s) => {
            let (lo, hi) = crate::args::parse_pair::<usize>(s)
                .ok_or_else(|| CliError::Usage(format!("--sweep expects LO:HI, got {s:?}")))?;
            if lo == 0 || lo > hi {
                return Err(CliError::Usage(format!(
                    "--sweep range {lo}:{hi} is empty or starts at 0"
                )));
            }
            (lo..=hi).collect()
        }
        None if fit.n.is_empty() => vec![1],
        None => fit.n.clone(),
    };
    ns.sort_unstable();
    ns.dedup();
    if ns.contains(&0) {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    Ok(ns)
}

/// The template configuration, checked against every requested `n`.
fn fit_config(fit: &FitArgs, ns: &[usize]) -> Result<FitConfig, CliError> {
    let cfg = FitConfig {
        n: ns[0],
        init_a: fit.init_a,
        init_m: (!fit.init_m.is_empty()).then(|| fit.init_m.clone()),
        init_p: (!fit.init_p.is_empty()).then(|| fit.init_p.clone()),
        init_mode: match fit.init_mode {
            InitModeArg::Constant => InitMode::Constant,
            InitModeArg::Slope => InitMode::SlopeAtInflection,
        },
        a_lower_bound: fit.a_bound,
        max_iterations: fit.max_iterations,
        ..FitConfig::default()
    };
    for &n in ns {
        FitConfig { n, ..cfg.clone() }
            .validate()
            .map_err(|e| CliError::Usage(format!("n = {n}: {e}")))?;
    }
    Ok(cfg)
}

fn load_columns(input: Option<&Path>) -> Result<Vec<SampleColumn>, CliError> {
    let Some(path) = input else {
        return Ok(parse_csv(IRIS_CSV.as_bytes(), &CsvSchema::iris())?);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    let fields: Vec<&str> = first.split(',').map(str::trim).collect();
    if fields.len() < 2 {
        return Err(CliError::Input(format!(
            "{}: expected numeric columns followed by a class label",
            path.display()
        )));
    }
    let width = fields.len() - 1;
    let schema = if fields[0].parse::<f64>().is_err() {
        CsvSchema {
            attributes: fields[..width].iter().map(|f| normalize(f)).collect(),
            classes: Vec::new(),
        }
    } else if width == 4 {
        CsvSchema {
            classes: Vec::new(),
            ..CsvSchema::iris()
        }
    } else {
        CsvSchema {
            attributes: (1..=width).map(|i| format!("x{i}")).collect(),
            classes: Vec::new(),
        }
    };
    parse_csv(text.as_bytes(), &schema)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Columns matching the selectors, in file order. Species match on the full
/// label or its last `-`/`_` separated word (`setosa` for `Iris-setosa`).
fn select<'a>(
    columns: &'a [SampleColumn],
    attributes: &[String],
    species: &[String],
) -> Result<Vec<&'a SampleColumn>, CliError> {
    let species_matches = |label: &str, want: &str| {
        let label = normalize(label);
        let want = normalize(want);
        label == want || label.rsplit('_').next() == Some(want.as_str())
    };
    for a in attributes {
        if !columns.iter().any(|c| c.label == normalize(a)) {
            let mut known: Vec<&str> = columns.iter().map(|c| c.label.as_str()).collect();
            known.dedup();
            return Err(CliError::Usage(format!(
                "unknown attribute {a:?} (available: {})",
                known.join(", ")
            )));
        }
    }
    for s in species {
        if !columns.iter().any(|c| species_matches(&c.group, s)) {
            let mut known: Vec<&str> = columns.iter().map(|c| c.group.as_str()).collect();
            known.sort_unstable();
            known.dedup();
            return Err(CliError::Usage(format!(
                "unknown species {s:?} (available: {})",
                known.join(", ")
            )));
        }
    }
    Ok(columns
        .iter()
        .filter(|c| attributes.is_empty() || attributes.iter().any(|a| normalize(a) == c.label))
        .filter(|c| species.is_empty() || species.iter().any(|s| species_matches(&c.group, s)))
        .collect())
}

fn config_for(template: &FitConfig, n: usize) -> FitConfig {
    FitConfig {
        n,
        ..template.clone()
    }
}

fn summary(r: &FitRecord) -> String {
    match &r.report {
        Some(rep) => format!(
            "{:<32} n={:<2} a={:<12.6} m={:<10.6} NL={:<10} SSE={:.6e} {}",
            r.source.label(),
            r.n,
            rep.params.a,
            rep.measures.m_max,
            rep.measures
                .nl_percent
                .map_or("-".into(), |v| format!("{v:.4}")),
            rep.sse,
            if rep.converged {
                "converged"
            } else {
                "NOT converged"
            }
        ),
        None => format!(
            "{:<32} n={:<2} error: {}",
            r.source.label(),
            r.n,
            r.error.as_deref().unwrap_or("")
        ),
    }
}

fn curve(sup: &Superposition, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let xs = linspace(lo, hi, CURVE_POINTS);
    let ys = sup.eval_many(&xs).unwrap_or_default();
    xs.into_iter().zip(ys).collect()
}

/// Bell curve scaled the same way as the normalized peak: divided by its sum
/// over the histogram edges.
fn normalized_density(
    sup: &Superposition,
    hist: &HistogramSpec,
    lo: f64,
    hi: f64,
) -> Vec<(f64, f64)> {
    let denom: f64 = sup
        .derivative_many(&hist.edges)
        .map(|d| d.iter().sum())
        .unwrap_or(f64::NAN);
    let xs = linspace(lo, hi, CURVE_POINTS);
    let ds = sup.derivative_many(&xs).unwrap_or_default();
    xs.into_iter()
        .zip(ds)
        .map(|(x, d)| (x, d / denom))
        .collect()
}

fn histogram_steps(hist: &HistogramSpec) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = hist
        .edges
        .iter()
        .zip(&hist.masses)
        .map(|(&e, &m)| (e, m))
        .collect();
    if let (Some(&last), Some(&m)) = (hist.edges.last(), hist.masses.last()) {
        pts.push((last, m));
    }
    pts
}

fn cdf_plot(r: &FitRecord, cdf: &EmpiricalCdf, hist: Option<&HistogramSpec>) -> String {
    let (lo, hi) = measure_interval(cdf);
    let mut top = Panel {
        title: format!("{} ECDF, n = {}", r.source.label(), r.n),
        x_label: "x".into(),
        y_label: "cumulative fraction".into(),
        series: vec![Series::new(
            "ECDF",
            Mark::Points,
            PALETTE[0],
            cdf.xs
                .iter()
                .copied()
                .zip(cdf.fractions.iter().copied())
                .collect(),
        )],
    };
    let mut bottom = Panel {
        title: "density".into(),
        x_label: "x".into(),
        y_label: "relative frequency".into(),
        series: Vec::new(),
    };
    if let Some(h) = hist {
        bottom.series.push(Series::new(
            "histogram",
            Mark::Steps,
            PALETTE[0],
            histogram_steps(h),
        ));
    }
    if let Some(rep) = &r.report {
        top.series.push(Series::new(
            "fit",
            Mark::Line,
            PALETTE[1],
            curve(&rep.params, lo, hi),
        ));
        if let Some(h) = hist {
            bottom.series.push(Series::new(
                "normalized bell",
                Mark::Line,
                PALETTE[1],
                normalized_density(&rep.params, h, lo, hi),
            ));
        }
    }
    svg::render(&r.source.label(), &[top, bottom])
}

fn target_table(
    target: Target,
    interval: (f64, f64),
    points: usize,
) -> scurve::Result<TargetTable> {
    match target {
        Target::Sigmoid => gen_sigmoid_target(interval, points),
        Target::Erf => gen_erf_target(interval, points),
    }
}

fn target_density(target: Target, x: f64) -> f64 {
    match target {
        Target::Sigmoid => {
            let s = 1.0 / (1.0 + (-x).exp());
            s * (1.0 - s)
        }
        Target::Erf => (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
    }
}

fn target_plot(r: &FitRecord, table: &TargetTable, target: Target) -> String {
    let (lo, hi) = (table.xs[0], table.xs[table.xs.len() - 1]);
    let name = run::target_name(target);
    let mut top = Panel {
        title: format!("{} and fit, n = {}", name, r.n),
        x_label: "x".into(),
        y_label: "y".into(),
        series: vec![Series::new(
            name,
            Mark::Dashed,
            PALETTE[0],
            table
                .xs
                .iter()
                .copied()
                .zip(table.ys.iter().copied())
                .collect(),
        )],
    };
    let mut bottom = Panel {
        title: "derivatives".into(),
        x_label: "x".into(),
        y_label: "dy/dx".into(),
        series: vec![Series::new(
            format!("{name}'"),
            Mark::Dashed,
            PALETTE[0],
            linspace(lo, hi, CURVE_POINTS)
                .into_iter()
                .map(|x| (x, target_density(target, x)))
                .collect(),
        )],
    };
    if let Some(rep) = &r.report {
        top.series.push(Series::new(
            "fit",
            Mark::Line,
            PALETTE[1],
            curve(&rep.params, lo, hi),
        ));
        let xs = linspace(lo, hi, CURVE_POINTS);
        let ds = rep.params.derivative_many(&xs).unwrap_or_default();
        bottom.series.push(Series::new(
            "fit'",
            Mark::Line,
            PALETTE[1],
            xs.into_iter().zip(ds).collect(),
        ));
    }
    svg::render(&r.source.label(), &[top, bottom])
}

/// Records grouped by `Source::group` and `n`, each group in record order.
fn grouped<'a>(
    records: impl Iterator<Item = &'a FitRecord>,
) -> BTreeMap<(String, usize), Vec<&'a FitRecord>> {
    let mut groups: BTreeMap<(String, usize), Vec<&FitRecord>> = BTreeMap::new();
    for r in records {
        groups.entry((r.source.group(), r.n)).or_default().push(r);
    }
    groups
}

fn add_dataset_tables(art: &mut Artifacts, records: &[FitRecord], prefix: &str) {
    for ((group, n), recs) in grouped(
        records
            .iter()
            .filter(|r| matches!(r.source, Source::Dataset { .. })),
    ) {
        let headers: Vec<String> = recs.iter().map(|r| r.source.member()).collect();
        art.add(
            Emit::Csv,
            format!("{prefix}{}_n{n}.csv", slug(&group)),
            || tables::quantity_table(&headers, &recs),
        );
    }
}

/// One table per target and interval, with a column per `n`.
fn add_target_tables(art: &mut Artifacts, records: &[FitRecord], prefix: &str) {
    let mut groups: BTreeMap<String, Vec<&FitRecord>> = BTreeMap::new();
    for r in records
        .iter()
        .filter(|r| matches!(r.source, Source::Target { .. }))
    {
        groups.entry(r.source.group()).or_default().push(r);
    }
    for (group, recs) in groups {
        let headers: Vec<String> = recs.iter().map(|r| format!("n={}", r.n)).collect();
        art.add(Emit::Csv, format!("{prefix}{}.csv", slug(&group)), || {
            tables::quantity_table(&headers, &recs)
        });
    }
}

fn finish(art: Artifacts, records: &[FitRecord]) -> Result<(), CliError> {
    for r in records {
        println!("{}", summary(r));
    }
    for path in art.write()? {
        println!("wrote {}", path.display());
    }
    Ok(())
}

pub fn fit_cdf(args: &FitCdfArgs) -> Result<(), CliError> {
    let ns = n_values(&args.fit)?;
    let config = fit_config(&args.fit, &ns)?;
    let columns = load_columns(args.input.as_deref())?;
    let selected = select(&columns, &args.attribute, &args.species)?;
    let strategy = strategy(args.strategy);

    let jobs: Vec<(&SampleColumn, usize)> = selected
        .iter()
        .flat_map(|&c| ns.iter().map(move |&n| (c, n)))
        .collect();
    let results: Vec<(FitRecord, Option<EmpiricalCdf>, Option<HistogramSpec>)> = jobs
        .par_iter()
        .map(|&(col, n)| {
            let source = Source::Dataset {
                attribute: col.label.clone(),
                species: col.group.clone(),
                zero_points: args.inject_zero_point.clone(),
            };
            match fit_samples(
                col,
                strategy,
                &config_for(&config, n),
                &args.inject_zero_point,
            ) {
                Ok(cf) => (
                    FitRecord {
                        source,
                        n,
                        inflections: cf.inflections.points,
                        report: Some(cf.report),
                        error: None,
                    },
                    Some(cf.cdf),
                    cf.histogram,
                ),
                Err(e) => {
                    let cdf = build_ecdf(col).ok();
                    let hist = auto_histogram(col).ok();
                    let rec = FitRecord {
                        source,
                        n,
                        inflections: Vec::new(),
                        report: None,
                        error: Some(e.to_string()),
                    };
                    (rec, cdf, hist)
                }
            }
        })
        .collect();

    let manifest = RunManifest {
        command: CommandKind::FitCdf,
        input: match &args.input {
            Some(p) => Input::File { path: p.clone() },
            None => Input::BundledIris,
        },
        attributes: args.attribute.clone(),
        species: args.species.clone(),
        strategy,
        zero_points: args.inject_zero_point.clone(),
        n_values: ns,
        config,
        out: args.fit.out.clone(),
        emit: args.fit.emit.clone(),
    };
    let records: Vec<FitRecord> = results.iter().map(|(r, _, _)| r.clone()).collect();
    let mut art = Artifacts::new(&args.fit.out, &args.fit.emit);
    let run = RunFile {
        manifest,
        fits: records.clone(),
    };
    art.add(Emit::Json, run::REPORT_FILE.into(), || run.to_json());
    add_dataset_tables(&mut art, &records, "");
    for (r, cdf, hist) in &results {
        if let (
            Source::Dataset {
                attribute, species, ..
            },
            Some(cdf),
        ) = (&r.source, cdf)
        {
            art.add(
                Emit::Svg,
                format!("{}_{}_n{}.svg", slug(attribute), slug(species), r.n),
                || cdf_plot(r, cdf, hist.as_ref()),
            );
        }
    }
    finish(art, &records)
}

fn parse_intervals(raw: &[String]) -> Result<Vec<(f64, f64)>, CliError> {
    raw.iter()
        .map(|s| {
            let (lo, hi) = crate::args::parse_pair::<f64>(s)
                .ok_or_else(|| CliError::Usage(format!("--interval expects LO:HI, got {s:?}")))?;
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CliError::Usage(format!("--interval {s:?} is empty")));
            }
            Ok((lo, hi))
        })
        .collect()
}

/// Shared by `fit-target` and `sweep`: every (interval, n) fit of one target.
fn fit_targets(
    args: &TargetArgs,
    kind: CommandKind,
) -> Result<(RunFile, Vec<TargetTable>), CliError> {
    let ns = n_values(&args.fit)?;
    let config = fit_config(&args.fit, &ns)?;
    let intervals = parse_intervals(&args.interval)?;
    let tables = intervals
        .iter()
        .map(|&iv| {
            target_table(args.target, iv, args.points).map_err(|e| CliError::Usage(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let jobs: Vec<(usize, usize)> = (0..intervals.len())
        .flat_map(|k| ns.iter().map(move |&n| (k, n)))
        .collect();
    let fits: Vec<FitRecord> = jobs
        .par_iter()
        .map(|&(k, n)| {
            let table = &tables[k];
            let source = Source::Target {
                target: args.target,
                interval: intervals[k],
                points: args.points,
            };
            let outcome = table
                .inflections(Strategy::SlopeMidpoint, n)
                .and_then(|infl| Ok((scurve::fit(table, &infl, &config_for(&config, n))?, infl)));
            match outcome {
                Ok((report, infl)) => FitRecord {
                    source,
                    n,
                    inflections: infl.points,
                    report: Some(report),
                    error: None,
                },
                Err(e) => FitRecord {
                    source,
                    n,
                    inflections: Vec::new(),
                    report: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let manifest = RunManifest {
        command: kind,
        input: Input::Target {
            target: args.target,
            intervals,
            points: args.points,
        },
        attributes: Vec::new(),
        species: Vec::new(),
        strategy: Strategy::SlopeMidpoint,
        zero_points: Vec::new(),
        n_values: ns,
        config,
        out: args.fit.out.clone(),
        emit: args.fit.emit.clone(),
    };
    Ok((RunFile { manifest, fits }, tables))
}

pub fn fit_target(args: &TargetArgs) -> Result<(), CliError> {
    let (run, tables) = fit_targets(args, CommandKind::FitTarget)?;
    let mut art = Artifacts::new(&args.fit.out, &args.fit.emit);
    art.add(Emit::Json, run::REPORT_FILE.into(), || run.to_json());
    add_target_tables(&mut art, &run.fits, "");
    let per_table = run.fits.len() / tables.len();
    for (i, r) in run.fits.iter().enumerate() {
        let table = &tables[i / per_table];
        art.add(
            Emit::Svg,
            format!("{}_n{}.svg", slug(&r.source.group()), r.n),
            || target_plot(r, table, args.target),
        );
    }
    finish(art, &run.fits)
}

/// Series label for NL-vs-n style plots: the source group, plus the
/// initialization when it is not the constant default.
fn series_label(r: &FitRecord) -> String {
    let base = r.source.label();
    match r.report.as_ref().map(|rep| rep.config.init_mode) {
        Some(InitMode::SlopeAtInflection) => format!("{base} slope-init"),
        _ => base,
    }
}

type SeriesMap = BTreeMap<String, Vec<(f64, f64)>>;

fn series_by<F: Fn(&scurve::FitReport) -> Option<f64>>(records: &[&FitRecord], f: F) -> SeriesMap {
    let mut map: SeriesMap = BTreeMap::new();
    for r in records {
        if let Some(v) = r.report.as_ref().and_then(&f) {
            map.entry(series_label(r))
                .or_default()
                .push((r.n as f64, v));
        }
    }
    for pts in map.values_mut() {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    map
}

fn panel(title: &str, y_label: &str, map: &SeriesMap) -> Panel {
    Panel {
        title: title.into(),
        x_label: "n".into(),
        y_label: y_label.into(),
        series: map
            .iter()
            .enumerate()
            .map(|(i, (label, pts))| {
                Series::new(
                    label.clone(),
                    Mark::Line,
                    PALETTE[i % PALETTE.len()],
                    pts.clone(),
                )
            })
            .collect(),
    }
}

fn nl_csv(map: &SeriesMap) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["series", "n", "NL"])
        .expect("in-memory write");
    for (label, pts) in map {
        for (n, v) in pts {
            w.write_record([label.clone(), n.to_string(), format!("{v}")])
                .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn sweep(args: &TargetArgs) -> Result<(), CliError> {
    let (run, _) = fit_targets(args, CommandKind::Sweep)?;
    let mut art = Artifacts::new(&args.fit.out, &args.fit.emit);
    art.add(Emit::Json, run::REPORT_FILE.into(), || run.to_json());
    add_target_tables(&mut art, &run.fits, "");
    let refs: Vec<&FitRecord> = run.fits.iter().collect();
    let labelled: Vec<(String, &FitRecord)> = refs.iter().map(|r| (String::new(), *r)).collect();
    art.add(Emit::Csv, "sweep.csv".into(), || {
        tables::measures_table(&labelled)
    });
    let nl = series_by(&refs, |rep| rep.measures.nl_percent);
    art.add(Emit::Csv, "nl_vs_n.csv".into(), || nl_csv(&nl));
    art.add(Emit::Svg, "sweep.svg".into(), || {
        svg::render(
            &format!("{} sweep", run::target_name(args.target)),
            &[
                panel(
                    "log10 a",
                    "log10 a",
                    &series_by(&refs, |rep| Some(rep.params.a.log10())),
                ),
                panel(
                    "peak slope m",
                    "m",
                    &series_by(&refs, |rep| Some(rep.measures.m_max)),
                ),
                panel("nonlinearity NL", "NL %", &nl),
            ],
        )
    });
    finish(art, &run.fits)
}

pub fn report(args: &ReportArgs) -> Result<(), CliError> {
    let mut paths = Vec::new();
    for dir in &args.input {
        paths.extend(run::find_reports(dir)?);
    }
    if paths.is_empty() {
        return Err(CliError::Input(format!(
            "no {} found under {}",
            run::REPORT_FILE,
            args.input
                .iter()
                .map(|p| p.display().to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )));
    }
    let runs = paths
        .iter()
        .map(|p| RunFile::load(p))
        .collect::<Result<Vec<_>, _>>()?;

    let labelled: Vec<(String, &FitRecord)> = paths
        .iter()
        .zip(&runs)
        .flat_map(|(p, run)| {
            let name = p.parent().unwrap_or(p).display().to_string();
            run.fits.iter().map(move |r| (name.clone(), r))
        })
        .collect();
    let all: Vec<FitRecord> = labelled.iter().map(|(_, r)| (*r).clone()).collect();
    let refs: Vec<&FitRecord> = all.iter().collect();

    let merged = serde_json::json!({
        "runs": paths.iter().zip(&runs).map(|(p, r)| serde_json::json!({
            "path": p.display().to_string(),
            "manifest": r.manifest,
        })).collect::<Vec<_>>(),
        "fits": all,
    });
    let mut art = Artifacts::new(&args.out, &args.emit);
    art.add(Emit::Json, "report.json".into(), || {
        let mut s = serde_json::to_string_pretty(&merged).expect("report serializes");
        s.push('\n');
        s
    });
    art.add(Emit::Csv, "comparison.csv".into(), || {
        tables::measures_table(&labelled)
    });
    add_dataset_tables(&mut art, &all, "comparison_");
    add_target_tables(&mut art, &all, "comparison_");
    let nl = series_by(&refs, |rep| rep.measures.nl_percent);
    art.add(Emit::Csv, "nl_vs_n.csv".into(), || nl_csv(&nl));
    art.add(Emit::Svg, "nl_vs_n.svg".into(), || {
        svg::render("NL against n", &[panel("nonlinearity NL", "NL %", &nl)])
    });
    println!("{} runs, {} fits", runs.len(), all.len());
    finish(art, &all)
}
