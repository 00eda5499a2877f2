use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use mosaic_core::analysis::{
    pcf, pcf_distance, radial_spectrum, sort_rows, PcfParams, RegularityRow, SAME_DISTRIBUTION_THRESHOLD,
};
use mosaic_core::format::{write_pcf_curve, write_point_file, write_spectrum, PointFileHeader};
use mosaic_core::samplers::{SamplerConfig, SamplerKind, RNG_ALGORITHM};
use mosaic_core::{Error, Topology};
use rayon::prelude::*;

use crate::input::{load, LoadedSet};
use crate::manifest::{default_manifest_path, write_file, RunManifest};
use crate::{
    AnalyzeArgs, CliError, CompareArgs, GenerateArgs, LoadArgs, PcfArgs, ReportArgs, RowOrder, SpectrumArgs,
    TableFormat,
};

fn usage_or_data(e: Error) -> CliError {
    match e {
        Error::InvalidArgument(msg) => CliError::Usage(msg),
        other => CliError::Data(other),
    }
}

pub fn generate(args: &GenerateArgs, argv: &[String]) -> Result<(), CliError> {
    let kind = SamplerKind::from(args.kind);
    let config = SamplerConfig {
        kind,
        n: args.n,
        seed: args.seed,
        min_dist: args.min_dist,
        iterations: args.iterations,
        round_to_square: args.round_to_square,
        max_attempts: args.max_attempts,
    };
    config.validate().map_err(usage_or_data)?;

    let started = Instant::now();
    let generated = config.generate::<f64>().map_err(usage_or_data)?;
    let elapsed = started.elapsed();

    let ps = &generated.points;
    let mut header = PointFileHeader::describing(ps);
    header.kind = Some(kind.name().to_owned());
    header.seed = Some(args.seed);
    header.rng = Some(RNG_ALGORITHM.to_owned());
    header.requested = Some(generated.requested);
    header.saturated = Some(generated.saturated);
    match kind {
        SamplerKind::DartThrowing | SamplerKind::FastPoissonDisk => header.min_dist = args.min_dist,
        SamplerKind::BlueNoiseOpt => header.iterations = Some(args.iterations),
        _ => {}
    }
    let text = write_point_file(ps, &header);
    write_file(&args.out, text.as_bytes())?;

    let mut manifest = RunManifest::new("generate", argv, Some(args.seed));
    manifest.record(&args.out, text.as_bytes());
    let manifest_path = args
        .manifest
        .clone()
        .unwrap_or_else(|| default_manifest_path(&args.out));
    manifest.write(&manifest_path)?;

    println!(
        "generated {} points ({}, seed {}) -> {} in {:.3} s",
        ps.len(),
        kind.name(),
        args.seed,
        args.out.display(),
        elapsed.as_secs_f64()
    );
    if generated.saturated {
        println!(
            "warning: saturated after {} of {} requested points",
            ps.len(),
            generated.requested
        );
    }
    Ok(())
}

fn pcf_params(args: &PcfArgs) -> Result<PcfParams<f64>, CliError> {
    let params = PcfParams {
        r_min: args.r_min,
        r_max: args.r_max,
        bins: args.bins,
        sigma_smooth: args.sigma,
        mode: args.mode.into(),
    };
    params.validate().map_err(usage_or_data)?;
    Ok(params)
}

fn load_checked(path: &Path, load_args: &LoadArgs) -> Result<LoadedSet, CliError> {
    if !(load_args.scale.is_finite() && load_args.scale > 0.0) {
        return Err(CliError::Usage(format!(
            "--scale must be positive, got {}",
            load_args.scale
        )));
    }
    let set = load(path, load_args.scale)?;
    if set.native.len() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            found: set.native.len(),
        }
        .into());
    }
    Ok(set)
}

fn display_label(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn topology_name(t: Option<Topology>) -> &'static str {
    match t {
        Some(Topology::Toroidal) => "toroidal",
        Some(Topology::Bounded) => "bounded",
        None => "-",
    }
}

fn print_table(rows: &[RegularityRow<f64>], format: TableFormat) {
    match format {
        TableFormat::Tsv => {
            println!("label\tn\tmu\tsigma\tri\ttopology\tstatus");
            for row in rows {
                match &row.outcome {
                    Ok(o) => println!(
                        "{}\t{}\t{:.8}\t{:.8}\t{:.6}\t{}\tok",
                        row.label,
                        o.n,
                        o.mu,
                        o.sigma,
                        o.ri,
                        topology_name(row.topology)
                    ),
                    Err(msg) => println!(
                        "{}\t-\t-\t-\t-\t{}\tfailed: {}",
                        row.label,
                        topology_name(row.topology),
                        msg.replace(['\t', '\n'], " ")
                    ),
                }
            }
        }
        TableFormat::Json => {
            println!("{}", serde_json::to_string_pretty(rows).expect("rows serialize"));
        }
    }
}

fn order_rows(rows: &mut [RegularityRow<f64>], order: RowOrder) {
    if order == RowOrder::Ri {
        sort_rows(rows);
    }
}

fn finish_table(rows: &[RegularityRow<f64>]) -> Result<(), CliError> {
    if !rows.is_empty() && rows.iter().all(|r| r.outcome.is_err()) {
        return Err(CliError::AllFailed(rows.len()));
    }
    Ok(())
}

fn curve_paths(inputs: &[PathBuf], out_dir: &Path) -> Vec<PathBuf> {
    let mut taken = HashSet::new();
    inputs
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let stem = display_label(p);
            let name = if taken.insert(stem.clone()) {
                format!("{stem}.pcf.txt")
            } else {
                format!("{stem}-{k}.pcf.txt")
            };
            out_dir.join(name)
        })
        .collect()
}

/// A curve file that was written, with its contents for the manifest.
type WrittenCurve = (PathBuf, String);

pub fn analyze(args: &AnalyzeArgs, argv: &[String]) -> Result<(), CliError> {
    let params = pcf_params(&args.pcf)?;
    std::fs::create_dir_all(&args.out_dir).map_err(|source| CliError::File {
        path: args.out_dir.clone(),
        source,
    })?;
    let targets = curve_paths(&args.inputs, &args.out_dir);

    // rows are collected in argument order whatever the completion order
    let results: Vec<(RegularityRow<f64>, Option<WrittenCurve>)> = args
        .inputs
        .par_iter()
        .zip(targets.par_iter())
        .map(|(path, target)| {
            let set = match load_checked(path, &args.load) {
                Ok(set) => set,
                Err(e) => return (RegularityRow::failed(display_label(path), e.to_string()), None),
            };
            let row = RegularityRow::for_set(&set.native);
            if row.outcome.is_err() {
                return (row, None);
            }
            match pcf(&set.unit, &params) {
                Ok(curve) => {
                    let text = write_pcf_curve(&curve, &set.label);
                    match write_file(target, text.as_bytes()) {
                        Ok(()) => (row, Some((target.clone(), text))),
                        Err(e) => (RegularityRow::failed(set.label, e.to_string()), None),
                    }
                }
                Err(e) => (RegularityRow::failed(set.label, e.to_string()), None),
            }
        })
        .collect();

    let mut manifest = RunManifest::new("analyze", argv, None);
    let mut rows = Vec::with_capacity(results.len());
    for (row, written) in results {
        if let Some((path, text)) = written {
            manifest.record(&path, text.as_bytes());
        }
        rows.push(row);
    }
    order_rows(&mut rows, args.order);
    print_table(&rows, args.format);
    if let Some(path) = &args.manifest {
        manifest.write(path)?;
    }
    finish_table(&rows)
}

pub fn report(args: &ReportArgs) -> Result<(), CliError> {
    let mut rows: Vec<RegularityRow<f64>> = args
        .inputs
        .par_iter()
        .map(|path| match load_checked(path, &args.load) {
            Ok(set) => RegularityRow::for_set(&set.native),
            Err(e) => RegularityRow::failed(display_label(path), e.to_string()),
        })
        .collect();
    order_rows(&mut rows, args.order);
    print_table(&rows, args.format);
    finish_table(&rows)
}

pub fn compare(args: &CompareArgs) -> Result<(), CliError> {
    let params = pcf_params(&args.pcf)?;
    let a = load_checked(&args.a, &args.load)?;
    let b = load_checked(&args.b, &args.load)?;
    let ca = pcf(&a.unit, &params)?;
    let cb = pcf(&b.unit, &params)?;
    let linf = pcf_distance(&ca, &cb)?;
    let verdict = if linf < SAME_DISTRIBUTION_THRESHOLD {
        "SAME"
    } else {
        "DIFFERENT"
    };
    println!("a\tb\tlinf\tverdict");
    println!("{}\t{}\t{:.6}\t{}", a.label, b.label, linf, verdict);
    Ok(())
}

pub fn spectrum(args: &SpectrumArgs, argv: &[String]) -> Result<(), CliError> {
    if args.max_freq < 2 {
        return Err(CliError::Usage(format!(
            "--max-freq must be at least 2, got {}",
            args.max_freq
        )));
    }
    let set = load_checked(&args.input, &args.load)?;
    let spectrum = radial_spectrum(&set.unit, args.max_freq)?;
    let text = write_spectrum(&spectrum, &set.label, set.unit.len());
    write_file(&args.out, text.as_bytes())?;
    if let Some(path) = &args.manifest {
        let mut manifest = RunManifest::new("spectrum", argv, None);
        manifest.record(&args.out, text.as_bytes());
        manifest.write(path)?;
    }
    println!(
        "spectrum of {} ({} points, {} annuli) -> {}",
        set.label,
        set.unit.len(),
        spectrum.freqs.len(),
        args.out.display()
    );
    Ok(())
}
