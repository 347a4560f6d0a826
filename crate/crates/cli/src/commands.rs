use std::io::Write;
use std::path::Path;

use serde::Serialize;

use coarray_core::coarray::write_weights_csv;
use coarray_core::coupling::write_magnitude_csv;
use coarray_core::doa::scenario::{
    write_estimates_csv, write_spectrum_csv, ArraySpec, ScenarioFile,
};
use coarray_core::geometry::io::{read_array, NamedArray};
use coarray_core::oracle::{
    min_aperture_search, verify_closed_forms, write_mra_summary_csv, MraSummary,
};
use coarray_core::sweep::{default_doas, run_sweep, FamilyAtN, SweepAxis, SweepSpec};
use coarray_core::{
    analyze, build_coupling_matrix, coupling_leakage, difference_coarray, ArrayFamily,
    CoarrayReport, CouplingModel, SensorArray,
};

use crate::args::{
    ArraySource, AxisArg, Command, CouplingArgs, Format, OptionalArraySource, OutputArgs, Switch,
};
use crate::error::{CliError, CliResult};
use crate::output;

pub fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Generate { family, n, out } => generate(&family, n, &out),
        Command::Analyze {
            array,
            weights,
            coupling,
            out,
        } => analyze_cmd(&array, weights, &coupling, &out),
        Command::Compare {
            n,
            families,
            coupling,
            out,
        } => compare(n, families.as_deref(), &coupling, &out),
        Command::CouplingMatrix {
            array,
            coupling,
            out,
        } => coupling_matrix(&array, &coupling, &out),
        Command::Spectrum {
            scenario,
            array,
            k,
            snr,
            snapshots,
            seed,
            coupling,
            grid,
            peaks,
            out,
        } => {
            let file = match scenario {
                Some(path) => ScenarioFile::load(&path)?,
                None => inline_scenario(&array, k, snr, snapshots, seed, coupling, grid)?,
            };
            spectrum(&file, peaks.as_deref(), &out)
        }
        Command::Rmse {
            spec,
            axis,
            values,
            families,
            n,
            trials,
            seed,
            k,
            snr,
            snapshots,
            coupling,
            out,
        } => {
            let spec = match spec {
                Some(path) => SweepSpec::from_json(
                    &std::fs::read_to_string(path).map_err(coarray_core::Error::from)?,
                )?,
                None => {
                    let axis = axis.ok_or_else(|| {
                        CliError::Usage("--axis is required without --spec".into())
                    })?;
                    let families = parse_families(families.as_deref())?
                        .into_iter()
                        .map(|family| FamilyAtN { family, n })
                        .collect();
                    let mut s = SweepSpec::new(families, sweep_axis(axis), values);
                    s.trials = trials;
                    s.base_seed = seed;
                    s.source_count = k;
                    s.snr_db = snr;
                    s.snapshots = snapshots;
                    if coupling == Switch::Off {
                        s.coupling = None;
                    }
                    s
                }
            };
            rmse(&spec, &out)
        }
        Command::SearchMra {
            n,
            max_aperture,
            out,
        } => search_mra(n, max_aperture, &out),
        Command::Verify { n_min, n_max, out } => verify(n_min, n_max, &out),
    }
}

fn family(id: &str) -> CliResult<ArrayFamily> {
    Ok(ArrayFamily::from_id(id)?)
}

/// `None` or empty selects the six comparison arrays; `all` selects every family.
fn parse_families(spec: Option<&str>) -> CliResult<Vec<ArrayFamily>> {
    match spec.map(str::trim) {
        None | Some("") => Ok(ArrayFamily::comparison_set().to_vec()),
        Some("all") => Ok(ArrayFamily::all()),
        Some(list) => list.split(',').map(|id| family(id.trim())).collect(),
    }
}

fn sweep_axis(a: AxisArg) -> SweepAxis {
    match a {
        AxisArg::SnrDb => SweepAxis::SnrDb,
        AxisArg::Snapshots => SweepAxis::Snapshots,
        AxisArg::C1Magnitude => SweepAxis::C1Magnitude,
        AxisArg::SourceCount => SweepAxis::SourceCount,
    }
}

fn coupling_model(c: &CouplingArgs) -> CliResult<CouplingModel> {
    if !(c.c1_mag.is_finite() && c.c1_mag >= 0.0 && c.c1_phase.is_finite() && c.step.is_finite()) {
        return Err(CliError::Usage(
            "coupling parameters must be finite with --c1-mag >= 0".into(),
        ));
    }
    Ok(CouplingModel {
        c1_magnitude: c.c1_mag,
        c1_phase: c.c1_phase,
        band: c.band,
        decay_phase_step: c.step,
    })
}

/// The array and a display name for it.
fn resolve_array(src: &ArraySource) -> CliResult<(String, SensorArray)> {
    match (&src.family, &src.positions) {
        (Some(id), _) => {
            let n = src
                .n
                .ok_or_else(|| CliError::Usage("--family needs --n".into()))?;
            Ok((id.clone(), family(id)?.generate(n)?))
        }
        (None, Some(path)) => Ok((file_name(path), read_array(path)?)),
        (None, None) => Err(CliError::Usage(
            "give --family with --n, or --positions".into(),
        )),
    }
}

fn file_name(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| "array".into(), |s| s.to_string_lossy().into_owned())
}

fn generate(id: &str, n: usize, out: &OutputArgs) -> CliResult<()> {
    let fmt = output::format(
        out,
        Format::Text,
        &[Format::Text, Format::Json, Format::Csv],
    )?;
    let arr = family(id)?.generate(n)?;
    let mut w = output::open(out.out.as_deref())?;
    match fmt {
        Format::Json => output::json(&NamedArray::new(format!("{id}-{n}"), &arr), &mut w)?,
        Format::Text => write!(w, "{}", coarray_core::geometry::io::to_text(&arr))
            .map_err(coarray_core::Error::from)?,
        Format::Csv => {
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(["index", "position"])
                .map_err(coarray_core::Error::from)?;
            for (i, p) in arr.positions().iter().enumerate() {
                c.write_record([i.to_string(), p.to_string()])
                    .map_err(coarray_core::Error::from)?;
            }
            c.flush().map_err(coarray_core::Error::from)?;
        }
    }
    output::finish(w)
}

#[derive(Serialize)]
struct AnalyzeRow {
    array: String,
    #[serde(flatten)]
    report: CoarrayReport,
    coupling_leakage: f64,
    coupling: CouplingModel,
}

fn analyze_cmd(
    src: &ArraySource,
    weights: bool,
    c: &CouplingArgs,
    out: &OutputArgs,
) -> CliResult<()> {
    let fmt = output::format(out, Format::Csv, &[Format::Csv, Format::Json])?;
    let (name, arr) = resolve_array(src)?;
    let model = coupling_model(c)?;
    let mut w = output::open(out.out.as_deref())?;
    if weights {
        let dc = difference_coarray(&arr);
        match fmt {
            Format::Json => output::json(&dc.weights(), &mut w)?,
            _ => write_weights_csv(&dc, &mut w)?,
        }
        return output::finish(w);
    }
    let row = AnalyzeRow {
        array: name,
        report: analyze(&arr),
        coupling_leakage: coupling_leakage(&build_coupling_matrix(&arr, &model)),
        coupling: model,
    };
    match fmt {
        Format::Json => output::json(&row, &mut w)?,
        _ => {
            let r = &row.report;
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record([
                "array",
                "n",
                "aperture",
                "udof",
                "hole_free",
                "w1",
                "w2",
                "w3",
                "R",
                "Lc",
            ])
            .map_err(coarray_core::Error::from)?;
            c.write_record([
                row.array.clone(),
                r.n.to_string(),
                r.aperture.to_string(),
                r.udof.to_string(),
                r.hole_free.to_string(),
                r.weights[0].to_string(),
                r.weights[1].to_string(),
                r.weights[2].to_string(),
                format!("{:.6}", r.redundancy_f64()),
                format!("{:.6}", row.coupling_leakage),
            ])
            .map_err(coarray_core::Error::from)?;
            c.flush().map_err(coarray_core::Error::from)?;
        }
    }
    output::finish(w)
}

#[derive(Serialize)]
struct CompareRow {
    family: String,
    udof: Option<usize>,
    w1: Option<i64>,
    w2: Option<i64>,
    w3: Option<i64>,
    #[serde(rename = "R")]
    r: Option<f64>,
    #[serde(rename = "Lc")]
    lc: Option<f64>,
    status: String,
}

fn compare(n: usize, families: Option<&str>, c: &CouplingArgs, out: &OutputArgs) -> CliResult<()> {
    let fmt = output::format(out, Format::Csv, &[Format::Csv, Format::Json])?;
    let model = coupling_model(c)?;
    let rows: Vec<CompareRow> = parse_families(families)?
        .into_iter()
        .map(|fam| match fam.generate(n) {
            Ok(arr) => {
                let rep = analyze(&arr);
                CompareRow {
                    family: fam.id().into(),
                    udof: Some(rep.udof),
                    w1: Some(rep.weights[0]),
                    w2: Some(rep.weights[1]),
                    w3: Some(rep.weights[2]),
                    r: Some(rep.redundancy_f64()),
                    lc: Some(coupling_leakage(&build_coupling_matrix(&arr, &model))),
                    status: "ok".into(),
                }
            }
            Err(e) => CompareRow {
                family: fam.id().into(),
                udof: None,
                w1: None,
                w2: None,
                w3: None,
                r: None,
                lc: None,
                status: format!("unsupported: {}", e.code()),
            },
        })
        .collect();
    let mut w = output::open(out.out.as_deref())?;
    match fmt {
        Format::Json => output::json(&rows, &mut w)?,
        _ => {
            let opt = |v: Option<String>| v.unwrap_or_default();
            let mut c = csv::Writer::from_writer(&mut w);
            c.write_record(["family", "udof", "w1", "w2", "w3", "R", "Lc", "status"])
                .map_err(coarray_core::Error::from)?;
            for r in &rows {
                c.write_record([
                    r.family.clone(),
                    opt(r.udof.map(|v| v.to_string())),
                    opt(r.w1.map(|v| v.to_string())),
                    opt(r.w2.map(|v| v.to_string())),
                    opt(r.w3.map(|v| v.to_string())),
                    opt(r.r.map(|v| format!("{v:.6}"))),
                    opt(r.lc.map(|v| format!("{v:.6}"))),
                    r.status.clone(),
                ])
                .map_err(coarray_core::Error::from)?;
            }
            c.flush().map_err(coarray_core::Error::from)?;
        }
    }
    output::finish(w)
}

#[derive(Serialize)]
struct CouplingOut {
    array: String,
    n: usize,
    leakage: f64,
    model: CouplingModel,
    magnitude: Vec<Vec<f64>>,
}

fn coupling_matrix(src: &ArraySource, c: &CouplingArgs, out: &OutputArgs) -> CliResult<()> {
    let fmt = output::format(out, Format::Csv, &[Format::Csv, Format::Json])?;
    let (name, arr) = resolve_array(src)?;
    let cm = build_coupling_matrix(&arr, &coupling_model(c)?);
    let mut w = output::open(out.out.as_deref())?;
    match fmt {
        Format::Json => {
            let magnitude = (0..cm.dim())
                .map(|i| (0..cm.dim()).map(|j| cm.entries[(i, j)].norm()).collect())
                .collect();
            let body = CouplingOut {
                array: name,
                n: cm.dim(),
                leakage: coupling_leakage(&cm),
                model: cm.model,
                magnitude,
            };
            output::json(&body, &mut w)?;
        }
        _ => write_magnitude_csv(&cm, &mut w)?,
    }
    output::finish(w)
}

fn inline_scenario(
    src: &OptionalArraySource,
    k: usize,
    snr: f64,
    snapshots: usize,
    seed: u64,
    coupling: Switch,
    grid: usize,
) -> CliResult<ScenarioFile> {
    let array = match (&src.family, &src.positions) {
        (_, Some(path)) => ArraySpec::Named(NamedArray::new(file_name(path), &read_array(path)?)),
        (Some(id), None) => ArraySpec::Family {
            family: family(id)?,
            n: src.n,
        },
        (None, None) => ArraySpec::Family {
            family: family("four-r-1")?,
            n: src.n,
        },
    };
    Ok(ScenarioFile {
        array,
        doas: default_doas(k)?,
        snr_db: snr,
        snapshots,
        coupling: (coupling == Switch::On).then(CouplingModel::default),
        seed,
        grid_points: grid,
        toeplitz: true,
        refine: false,
    })
}

#[derive(Serialize)]
struct SpectrumOut<'a> {
    theta: &'a [f64],
    value: &'a [f64],
    doas: &'a [f64],
    estimates: &'a [f64],
    complete: bool,
}

fn spectrum(file: &ScenarioFile, peaks: Option<&Path>, out: &OutputArgs) -> CliResult<()> {
    let fmt = output::format(out, Format::Csv, &[Format::Csv, Format::Json])?;
    let (spec, est) = file.run()?;
    let mut w = output::open(out.out.as_deref())?;
    match fmt {
        Format::Json => output::json(
            &SpectrumOut {
                theta: &spec.grid,
                value: &spec.values,
                doas: &file.doas,
                estimates: &est.estimates,
                complete: est.complete,
            },
            &mut w,
        )?,
        _ => write_spectrum_csv(&spec, &mut w)?,
    }
    output::finish(w)?;
    if let Some(path) = peaks {
        let f = std::fs::File::create(path).map_err(coarray_core::Error::from)?;
        write_estimates_csv(&file.doas, &est, std::io::BufWriter::new(f))?;
    }
    if !est.complete {
        eprintln!(
            "warning: found {} of {} peaks",
            est.estimates.len(),
            file.doas.len()
        );
    }
    Ok(())
}

fn rmse(spec: &SweepSpec, out: &OutputArgs) -> CliResult<()> {
    let fmt = output::format(out, Format::Csv, &[Format::Csv, Format::Json])?;
    let report = run_sweep(spec)?;
    let mut w = output::open(out.out.as_deref())?;
    match fmt {
        Format::Json => output::json(&report, &mut w)?,
        _ => report.write_csv(&mut w)?,
    }
    output::finish(w)
}

#[derive(Serialize)]
struct MraOut {
    summary: MraSummary,
    arrays: Vec<NamedArray>,
}

fn search_mra(n: usize, max_aperture: usize, out: &OutputArgs) -> CliResult<()> {
    let fmt = output::format(out, Format::Csv, &[Format::Csv, Format::Json])?;
    let arrays = min_aperture_search(n, max_aperture)?;
    let summary = MraSummary::from_results(n, &arrays);
    let mut w = output::open(out.out.as_deref())?;
    match fmt {
        Format::Json => {
            let arrays = arrays
                .iter()
                .enumerate()
                .map(|(i, a)| NamedArray::new(format!("mra-{n}-{}", i + 1), a))
                .collect();
            output::json(&MraOut { summary, arrays }, &mut w)?;
        }
        _ => write_mra_summary_csv(&[summary], &mut w)?,
    }
    output::finish(w)
}

fn verify(n_min: usize, n_max: usize, out: &OutputArgs) -> CliResult<()> {
    let fmt = output::format(out, Format::Csv, &[Format::Csv, Format::Json])?;
    let report = verify_closed_forms(n_min, n_max)?;
    let mut w = output::open(out.out.as_deref())?;
    match fmt {
        Format::Json => output::json(&report, &mut w)?,
        _ => report.write_csv(&mut w)?,
    }
    output::finish(w)?;
    if report.is_clean() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed {
            mismatches: report.mismatches.len(),
            instances: report.instances_checked,
        })
    }
}
