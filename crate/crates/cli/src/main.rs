use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use twoqubit::{steady_state_microscopic, steady_state_phenom, steady_state_phenom_dressed, Tolerances};

use twoqubit_cli::config::{Model, ScenarioConfig, TMax};
use twoqubit_cli::report::{report_from_run, sweep, SweepAxis};
use twoqubit_cli::scenario::{ensure_dir, write_file, MetricView};
use twoqubit_cli::selftest::ORACLE_TOLERANCE;
use twoqubit_cli::{compare_report, figure_preset, run_scenario, selftest, write_outputs, CliError};

#[derive(Parser, Debug)]
#[command(version, about = "Two coupled qubits with one of them in a thermal bath: microscopic vs phenomenological dynamics")]
struct Cli {
    /// Scenario file with `key = value` lines
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Use the parameters of a reference figure (1-10)
    #[arg(long, global = true)]
    figure: Option<usize>,

    /// Output directory for CSV files
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// micro, phenom or both
    #[arg(long, global = true)]
    model: Option<String>,

    /// Time window in seconds, or `auto`
    #[arg(long, global = true)]
    tmax: Option<String>,

    /// Number of grid points
    #[arg(long, global = true)]
    points: Option<usize>,

    /// Bath temperature in kelvin
    #[arg(long, global = true)]
    temp: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print dressed energies, mixing coefficients, rates and the fairness check
    Spectrum,
    /// Evolve the scenario and write one CSV per model
    Evolve,
    /// Print the closed-form stationary states and their correlations
    Steady,
    /// Run the preset(s) of figure N and write their CSV files
    #[command(name = "figure")]
    Figure { n: usize },
    /// Compare stationary correlations of the two models
    Compare,
    /// Repeat the comparison over values of one parameter
    Sweep {
        /// temperature, lambda or gamma0
        #[arg(long)]
        axis: String,
        /// Comma-separated values
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<f64>,
    },
    /// Check closed-form against numerically integrated microscopic dynamics
    Selftest,
}

fn load(cli: &Cli, figure: Option<usize>) -> Result<Vec<ScenarioConfig>, CliError> {
    let mut configs = match (&cli.config, figure.or(cli.figure)) {
        (Some(path), None) => vec![ScenarioConfig::from_file(path)?],
        (None, Some(n)) => figure_preset(n)?,
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --config or --figure, not both".into())),
        (None, None) => return Err(CliError::Usage("a scenario is needed: --config PATH or --figure N".into())),
    };
    for cfg in &mut configs {
        if let Some(m) = &cli.model {
            cfg.models = Model::parse(m).ok_or_else(|| CliError::Usage(format!("--model: unknown model '{m}'")))?;
        }
        if let Some(t) = &cli.tmax {
            cfg.t_max = TMax::parse(t).map_err(CliError::Usage)?;
        }
        if let Some(n) = cli.points {
            cfg.n_points = n;
        }
        if let Some(t) = cli.temp {
            cfg.params.temperature = t;
        }
        cfg.validate()?;
    }
    Ok(configs)
}

fn out_dir(cli: &Cli) -> &Path {
    cli.out.as_deref().unwrap_or(Path::new("."))
}

fn spectrum(cfg: &ScenarioConfig) {
    let p = &cfg.params;
    let f = p.dressed_frame();
    let r = p.rate_set();
    println!("scenario {}", cfg.name);
    println!("  energies a,b,c,d = {:.10e} {:.10e} {:.10e} {:.10e}", f.energies[0], f.energies[1], f.energies[2], f.energies[3]);
    println!("  alpha+ = {:.12} alpha- = {:.12} alpha = {:.12} eta = {:.12}", f.alpha_plus, f.alpha_minus, f.alpha, f.eta);
    println!("  omega_I = {:.10e} omega_II = {:.10e}", f.bohr_i, f.bohr_ii);
    println!("  gamma(omega_I) = {:.6e} gamma(omega_II) = {:.6e}", r.gamma_i, r.gamma_ii);
    println!("  gamma_bar(omega_I) = {:.6e} gamma_bar(omega_II) = {:.6e}", r.gamma_bar_i, r.gamma_bar_ii);
    println!("  c_I = {:.6e} c_II = {:.6e} c_bar_I = {:.6e} c_bar_II = {:.6e}", r.c_i, r.c_ii, r.c_bar_i, r.c_bar_ii);
    println!("  phenomenological gamma = {:.6e} gamma_bar = {:.6e}", r.gamma_phen, r.gamma_bar_phen);
    for line in twoqubit::fairness_check(p, cfg.fairness_threshold).summary_lines() {
        println!("  {line}");
    }
}

fn print_view(label: &str, view: &MetricView) -> Result<(), CliError> {
    let pop = view.populations();
    println!(
        "  {label}: concurrence {:.8} discord {:.8} linear_entropy {:.8}",
        view.concurrence()?,
        view.discord()?,
        view.linear_entropy()?
    );
    println!("    populations 00,01,10,11 = {:.8e} {:.8e} {:.8e} {:.8e}", pop[0], pop[1], pop[2], pop[3]);
    Ok(())
}

fn steady(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let p = &cfg.params;
    let frame = p.dressed_frame();
    let rates = p.rate_set();
    println!("scenario {}", cfg.name);
    let micro = steady_state_microscopic(&rates, &frame, p.temperature);
    println!(
        "  microscopic dressed populations a,b,c,d = {:.8e} {:.8e} {:.8e} {:.8e}",
        micro.populations[0], micro.populations[1], micro.populations[2], micro.populations[3]
    );
    let micro = micro.to_density(&Tolerances::STATE)?;
    print_view("microscopic", &MetricView::from_dressed(&micro, &frame)?)?;
    match steady_state_phenom(p, &rates) {
        Ok(s) => {
            print_view("phenomenological", &MetricView::from_computational(&s.to_density(&Tolerances::STATE)?)?)?;
            let d = steady_state_phenom_dressed(p, &rates, &frame)?;
            println!(
                "    dressed coherences |bc| = {:.6e} |ad| = {:.6e}",
                d.element(1, 2).norm(),
                d.element(0, 3).norm()
            );
        }
        Err(twoqubit::Error::DegenerateRates) => println!("  phenomenological: no dissipation, no unique stationary state"),
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Spectrum => load(cli, None)?.iter().for_each(spectrum),
        Command::Steady => {
            for cfg in load(cli, None)? {
                steady(&cfg)?;
            }
        }
        Command::Evolve | Command::Figure { .. } => {
            let figure = match cli.command {
                Command::Figure { n } => Some(n),
                _ => None,
            };
            let configs = load(cli, figure)?;
            let runs = configs.par_iter().map(run_scenario).collect::<Result<Vec<_>, _>>()?;
            for r in &runs {
                for path in write_outputs(r, out_dir(cli))? {
                    println!("{}", path.display());
                }
                if figure.is_some() && r.series.len() == 2 {
                    print!("{}", report_from_run(r)?.text());
                }
            }
        }
        Command::Compare => {
            let configs = load(cli, None)?;
            let reports = configs.par_iter().map(compare_report).collect::<Result<Vec<_>, _>>()?;
            for r in &reports {
                print!("{}", r.text());
                if let Some(dir) = &cli.out {
                    ensure_dir(dir)?;
                    write_file(&dir.join(format!("{}_compare.csv", r.name)), &r.csv())?;
                }
            }
        }
        Command::Sweep { axis, values } => {
            let axis = SweepAxis::parse(axis).ok_or_else(|| CliError::Usage(format!("--axis: unknown axis '{axis}'")))?;
            for cfg in load(cli, None)? {
                let result = sweep(&cfg, axis, values)?;
                match &cli.out {
                    Some(dir) => {
                        ensure_dir(dir)?;
                        let path = dir.join(format!("{}_sweep_{}.csv", cfg.name, axis.name()));
                        write_file(&path, &result.csv())?;
                        println!("{}", path.display());
                    }
                    None => print!("{}", result.csv()),
                }
            }
        }
        Command::Selftest => {
            let checks = selftest(cli.points.unwrap_or(2000))?;
            let mut failed = None;
            for c in &checks {
                println!(
                    "figure {}: max deviation {:.3e} over {} points in {:.2} s {}",
                    c.figure,
                    c.max_deviation,
                    c.n_points,
                    c.elapsed.as_secs_f64(),
                    if c.passed() { "ok" } else { "FAILED" }
                );
                if !c.passed() {
                    failed = Some(c);
                }
            }
            if let Some(c) = failed {
                return Err(CliError::Numerical(twoqubit::Error::InvalidParams(format!(
                    "oracle deviation {:.3e} exceeds {ORACLE_TOLERANCE:e} for figure {}",
                    c.max_deviation, c.figure
                ))));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
