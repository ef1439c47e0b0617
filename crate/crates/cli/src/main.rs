use clap::{Args, Parser, Subcommand, ValueEnum};
use islsim::config::{self, RunSetup, PRESET_NAMES};
use islsim::{driver, report, CliError};
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Inter-satellite link channel simulator.
#[derive(Parser)]
#[command(name = "islsim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a time-varying scenario and write CSV reports.
    Run(RunArgs),
    /// Sweep the SEP angle over a grid of single-state links.
    Sweep(RunArgs),
    /// List the built-in presets.
    Presets,
}

#[derive(Args)]
struct RunArgs {
    /// Built-in preset supplying the base configuration.
    #[arg(long)]
    preset: Option<String>,
    /// Flat JSON configuration file; keys override the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Root seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Power allocation selection.
    #[arg(long, value_enum, default_value_t = SbpaMode::Both)]
    sbpa: SbpaMode,
    /// SNR grid override, as start:stop:step in dB.
    #[arg(long, value_name = "A:B:STEP")]
    snr_db: Option<String>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Also dump the channel coefficient series (waveform.bin and
    /// waveform.csv) into the output directory.
    #[arg(long)]
    dump_waveform: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SbpaMode {
    On,
    Off,
    Both,
}

fn assemble(args: &RunArgs) -> Result<RunSetup, CliError> {
    // Base keys from the preset, or the common parameter block for bare
    // config files; file keys override preset keys, flags override both.
    let mut map = match &args.preset {
        Some(name) => config::preset(name)?,
        None => {
            if args.config.is_none() {
                return Err(CliError::Config(
                    "provide --preset, --config, or both".into(),
                ));
            }
            config::defaults()
        }
    };
    if let Some(path) = &args.config {
        let file = config::load_file(path)?;
        config::merge(&mut map, file);
    }
    if let Some(seed) = args.seed {
        map.insert("seed".into(), Value::from(seed));
    }
    if let Some(snr) = &args.snr_db {
        map.insert("snr_db".into(), Value::String(snr.clone()));
    }
    config::build(&map)
}

fn run_command(args: &RunArgs) -> Result<(), CliError> {
    let setup = assemble(args)?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", args.out.display())))?;
    let derived = report::derive(&setup)?;

    let mut runs: Vec<(&str, islsim_core::sim::LinkRunResult)> = Vec::new();
    if args.sbpa != SbpaMode::On {
        println!("running case {} (conventional) ...", setup.case.case_id);
        runs.push((
            "conventional",
            driver::run_case(&setup.cfg, &setup.case, false, args.workers)?,
        ));
    }
    if args.sbpa != SbpaMode::Off {
        println!("running case {} (sbpa) ...", setup.case.case_id);
        runs.push((
            "sbpa",
            driver::run_case(&setup.cfg, &setup.case, true, args.workers)?,
        ));
    }

    let run_refs: Vec<(&str, &islsim_core::sim::LinkRunResult)> =
        runs.iter().map(|(m, r)| (*m, r)).collect();
    report::write_results_csv(&args.out.join("results.csv"), &setup, &derived, &run_refs)?;

    // The channel realization is identical across modes; trace the first.
    let trace_run = &run_refs[0].1;
    report::write_state_trace_csv(&args.out.join("state_trace.csv"), &setup, &derived, trace_run)?;

    // Prefer the allocation-bearing run for the allocation report.
    let alloc_run = run_refs
        .iter()
        .find(|(_, r)| r.alloc.is_some())
        .map(|(_, r)| *r)
        .unwrap_or(trace_run);
    report::write_allocation_csv(&args.out.join("allocation.csv"), &setup, &derived, alloc_run)?;
    report::write_metadata_json(&args.out.join("metadata.json"), &setup, &derived, &run_refs)?;

    if args.dump_waveform {
        let series = driver::channel_series(&setup.cfg, &setup.case)?;
        report::write_waveform_bin(&args.out.join("waveform.bin"), &series)?;
        report::write_waveform_csv(&args.out.join("waveform.csv"), &setup, &series)?;
    }
    print_summary(&args.out, &run_refs);
    Ok(())
}

fn sweep_command(args: &RunArgs) -> Result<(), CliError> {
    let setup = assemble(args)?;
    if setup.angles.is_empty() {
        return Err(CliError::Config(
            "sweep needs angle_min_deg / angle_max_deg / angle_step_deg (try --preset angle_sweep)"
                .into(),
        ));
    }
    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", args.out.display())))?;
    let derived = report::derive(&setup)?;
    println!(
        "sweeping {} angles in [{}, {}] deg ...",
        setup.angles.len(),
        setup.angles.first().unwrap(),
        setup.angles.last().unwrap()
    );
    let points = driver::run_sweep(&setup.cfg, &setup.angles, args.workers)?;
    report::write_sweep_csv(&args.out.join("sweep_results.csv"), &setup, &derived, &points)?;
    report::write_metadata_json(&args.out.join("metadata.json"), &setup, &derived, &[])?;
    println!("wrote {}", args.out.join("sweep_results.csv").display());
    Ok(())
}

fn print_summary(out: &Path, runs: &[(&str, &islsim_core::sim::LinkRunResult)]) {
    for (mode, result) in runs {
        if let (Some(first), Some(last)) = (result.points.first(), result.points.last()) {
            println!(
                "{mode}: ber {:.3e} -> {:.3e}, op {:.3} -> {:.3}, capacity {:.2} -> {:.2} b/s/Hz",
                first.ber,
                last.ber,
                first.outage_probability,
                last.outage_probability,
                first.capacity_bps_hz,
                last.capacity_bps_hz
            );
        }
    }
    println!("wrote {}", out.join("results.csv").display());
}

fn presets_command() {
    println!("available presets:");
    for name in PRESET_NAMES {
        let what = match *name {
            "case1" => "time-varying, 2 km/s at 30 deg, pure line of sight",
            "case2" => "time-varying, 2 km/s at 2 deg, K-factor 8.6193",
            "case3" => "time-varying, 2 km/s at 0 deg, Rayleigh eclipse",
            "case4" => "time-varying, 4 km/s at 30 deg, pure line of sight",
            "angle_sweep" => "single-state sweep over -3..3 deg at 0.1 km/s",
            "fig4_state_trace" => "100 s state trajectory with fading gain trace",
            _ => "",
        };
        println!("  {name:<18} {what}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run(args) => run_command(args),
        Command::Sweep(args) => sweep_command(args),
        Command::Presets => {
            presets_command();
            Ok(())
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
