//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twoqubit::metrics::{discord_approx_q2, discord_oracle_q2, x_state_eigenvalues};
use twoqubit::microscopic::{gibbs_populations, rate_steady_populations};
use twoqubit::{
    build_dissipator_oracle, concurrence_general, concurrence_x, hermitian_eigs, linear_entropy_q1_x,
    propagate_analytic, propagate_numeric, propagate_phenom, steady_state_phenom, steady_state_phenom_dressed,
    validate_density, x_elements_from_dressed, Basis, DensityMatrix4, DressedStateVector, SystemParams,
    Tolerances, XStateElements, KB_OVER_HBAR,
};
use twoqubit_cli::config::{auto_t_max, Metric, ScenarioConfig};
use twoqubit_cli::report::{first_sustained_zero, report_from_run, tail_mean};
use twoqubit_cli::scenario::ScenarioRun;
use twoqubit_cli::selftest::ORACLE_TOLERANCE;
use twoqubit_cli::{figure_preset, oracle_check, run_scenario, CliError};

type Outcome = Result<(bool, String), CliError>;

/// Every snapshot emitted by the scenario runs made here.
#[derive(Default)]
struct Audit {
    checked: usize,
    failures: Vec<String>,
}

impl Audit {
    fn record(&mut self, run: &ScenarioRun) {
        for s in &run.series {
            for (t, rho) in s.trajectory.iter() {
                self.checked += 1;
                if let Err(e) = rho.validate(&Tolerances::EVOLVED) {
                    self.failures.push(format!("{} {} t={t:e}: {e}", run.config.name, s.model.short()));
                }
            }
        }
    }
}

fn preset(n: usize) -> ScenarioConfig {
    figure_preset(n).expect("preset exists").remove(0)
}

fn run_all(configs: Vec<ScenarioConfig>, audit: &mut Audit) -> Result<Vec<ScenarioRun>, CliError> {
    use rayon::prelude::*;
    let runs = configs.par_iter().map(run_scenario).collect::<Result<Vec<_>, _>>()?;
    runs.iter().for_each(|r| audit.record(r));
    Ok(runs)
}

fn oracle_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut slowest: f64 = 0.0;
    let mut ok = true;
    for n in 1..=7 {
        let c = oracle_check(n, 2000)?;
        worst = worst.max(c.max_deviation);
        slowest = slowest.max(c.elapsed.as_secs_f64());
        ok &= c.passed() && c.elapsed.as_secs_f64() < 10.0;
    }
    Ok((ok, format!("figs 1-7, max deviation {worst:.2e} (limit {ORACLE_TOLERANCE:e}), slowest {slowest:.2} s")))
}

fn gibbs_detailed_balance() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        let p = preset(n).params;
        let f = p.dressed_frame();
        let kt = KB_OVER_HBAR * p.temperature;
        let expected = [(-f.bohr_i / kt).exp(), (-f.bohr_ii / kt).exp(), (-(f.bohr_i + f.bohr_ii) / kt).exp()];
        for pops in [rate_steady_populations(&p.rate_set())?, gibbs_populations(&f, p.temperature)] {
            for k in 0..3 {
                let ratio = pops[k + 1] / pops[0];
                worst = worst.max((ratio - expected[k]).abs() / expected[k]);
            }
        }
    }
    Ok((worst <= 1e-10, format!("T = 5e-4, 1.5e-2 K, worst relative ratio error {worst:.2e}")))
}

fn phenomenological_steady_state() -> Outcome {
    let mut worst_entry: f64 = 0.0;
    let mut weakest_coherence = f64::INFINITY;
    for n in [2, 3] {
        let p = preset(n).params;
        let rates = p.rate_set();
        let t_end = 50.0 / (rates.gamma_phen + rates.gamma_bar_phen);
        let traj = propagate_phenom(&DensityMatrix4::product(1, 0), &p, &rates, &[0.0, t_end])?;
        let closed = steady_state_phenom(&p, &rates)?.to_density(&Tolerances::STATE)?;
        worst_entry = worst_entry.max(traj.last().unwrap().matrix().max_abs_diff(closed.matrix()));
        let d = steady_state_phenom_dressed(&p, &rates, &p.dressed_frame())?;
        let max_pop = d.populations().into_iter().fold(0.0, f64::max);
        let coh = d.element(1, 2).norm().min(d.element(0, 3).norm());
        weakest_coherence = weakest_coherence.min(coh / max_pop);
    }
    Ok((
        worst_entry <= 1e-6 && weakest_coherence > 1e-4,
        format!("long-run vs closed form {worst_entry:.2e}, smallest dressed coherence / max population {weakest_coherence:.2e}"),
    ))
}

fn strong_coupling_concurrence(audit: &mut Audit) -> Outcome {
    let runs = run_all(vec![preset(1)], audit)?;
    let r = report_from_run(&runs[0])?;
    let c = r.metric(Metric::Concurrence).expect("concurrence is evaluated");
    let p = &runs[0].config.params;
    let derived = p.lambda / (p.lambda * p.lambda + 4.0 * p.omega * p.omega).sqrt();
    Ok((
        (c.micro_stationary - 0.9806).abs() <= 0.005 && c.phenom_stationary <= 1e-3,
        format!(
            "micro {:.5} (2 alpha+ alpha- = {derived:.5}), phenom {:.2e}",
            c.micro_stationary, c.phenom_stationary
        ),
    ))
}

fn discrepancy_percentages(audit: &mut Audit) -> Outcome {
    // (figure, metric, expected relative difference in percent)
    let targets = [(2, Metric::Concurrence, -33.0), (3, Metric::Concurrence, -51.0), (4, Metric::Discord, -42.0), (5, Metric::Discord, 20.0)];
    let runs = run_all(targets.iter().map(|t| preset(t.0)).collect(), audit)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for ((n, m, want), run) in targets.iter().zip(&runs) {
        let r = report_from_run(run)?;
        let got = 100.0 * r.metric(*m).expect("metric is evaluated").relative_difference;
        ok &= (got - want).abs() <= 5.0;
        parts.push(format!("fig{n} {} {got:+.1}% (target {want:+.0}%)", m.name()));
    }
    Ok((ok, parts.join(", ")))
}

fn weak_coupling(audit: &mut Audit) -> Outcome {
    let mut configs = figure_preset(8)?;
    configs.extend(figure_preset(9)?);
    configs.extend(figure_preset(10)?);
    let runs = run_all(configs, audit)?;
    let (fig8, rest) = runs.split_at(3);
    let (fig9, fig10) = rest.split_at(3);
    let mut parts = Vec::new();

    // (a) exact zero sustained over at least five samples
    let mut a = true;
    for run in &fig8[1..] {
        for s in &run.series {
            let c = s.series(Metric::Concurrence).expect("concurrence is evaluated");
            a &= first_sustained_zero(&s.trajectory.times, c, 0.0, 5).is_some();
        }
    }
    parts.push(format!("(a) sudden death at 0.05/0.15 K {}", if a { "yes" } else { "no" }));

    // (b) oscillating, decaying, never stuck at zero before dropping below 1e-3
    let mut b = true;
    for run in fig9 {
        for s in &run.series {
            let d = s.series(Metric::Discord).expect("discord is evaluated");
            let Some(end) = d.iter().rposition(|&x| x >= 1e-3) else {
                b = false;
                continue;
            };
            let head = &d[..=end];
            let stuck = first_sustained_zero(&s.trajectory.times[..=end], head, 1e-12, 5).is_some();
            // at least one revival, each lobe lower than the first
            let peaks: Vec<f64> = head.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).map(|w| w[1]).collect();
            let damped = peaks.len() >= 2 && peaks[1..].iter().all(|&h| h < peaks[0]);
            b &= !stuck && damped;
        }
    }
    parts.push(format!("(b) discord oscillates without sustained zero {}", if b { "yes" } else { "no" }));

    // (c) opposite temperature trends of the linear entropy early in the transient
    let probe = auto_t_max(&fig10[0].config.params) / 64.0;
    let mut micro = Vec::new();
    let mut phenom = Vec::new();
    for run in fig10 {
        let p = &run.config.params;
        let frame = p.dressed_frame();
        let rates = p.rate_set();
        let s = propagate_analytic(&DressedStateVector::initial_ket10(&frame), &rates, &frame, probe)?;
        micro.push(linear_entropy_q1_x(&x_elements_from_dressed(&s, &frame)?));
        let traj = propagate_phenom(&DensityMatrix4::product(1, 0), p, &rates, &[0.0, probe])?;
        phenom.push(linear_entropy_q1_x(&XStateElements::from_density(traj.last().unwrap())?));
    }
    let c = micro.windows(2).all(|w| w[1] > w[0]) && phenom.windows(2).all(|w| w[1] < w[0]);
    parts.push(format!(
        "(c) at t = {probe:.3e} s micro {:.4}/{:.4}/{:.4} phenom {:.4}/{:.4}/{:.4}",
        micro[0], micro[1], micro[2], phenom[0], phenom[1], phenom[2]
    ));

    // (d) both models end maximally mixed on qubit 1
    let mut worst: f64 = 0.0;
    for run in fig10 {
        for s in &run.series {
            worst = worst.max((tail_mean(s.series(Metric::LinearEntropy).expect("evaluated")) - 0.5).abs());
        }
        let r = report_from_run(run)?;
        let m = r.metric(Metric::LinearEntropy).expect("evaluated");
        worst = worst.max((m.micro_closed_form - 0.5).abs());
        worst = worst.max((m.phenom_closed_form.unwrap_or(f64::NAN) - 0.5).abs());
    }
    let d = worst <= 1e-3;
    parts.push(format!("(d) linear entropy within {worst:.1e} of 0.5"));

    Ok((a && b && c && d, parts.join("; ")))
}

fn random_x_state(rng: &mut ChaCha8Rng) -> XStateElements {
    let mut q = [0.0; 4].map(|_| rng.gen_range(0.0..1.0));
    let sum: f64 = q.iter().sum();
    q.iter_mut().for_each(|x| *x /= sum);
    let mut coherence = |a: f64, b: f64| C64::from_polar((a * b).sqrt() * rng.gen_range(0.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
    let q14 = coherence(q[0], q[3]);
    let q23 = coherence(q[1], q[2]);
    XStateElements { q11: q[0], q22: q[1], q33: q[2], q44: q[3], q14, q23 }
}

fn metric_properties(audit: &Audit) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut conc, mut spectrum, mut discord) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..1000 {
        let x = random_x_state(&mut rng);
        let rho = validate_density(x.to_matrix(), Basis::Computational, &Tolerances::STATE)?;
        conc = conc.max((concurrence_x(&x) - concurrence_general(&rho)?).abs());
        let mut closed = x_state_eigenvalues(&x);
        closed.sort_by(f64::total_cmp);
        let numeric = hermitian_eigs(rho.matrix())?.values;
        spectrum = spectrum.max(closed.iter().zip(&numeric).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
        if i < 200 {
            discord = discord.max((discord_approx_q2(&x) - discord_oracle_q2(&rho, 1024)?).abs());
        }
    }
    let ok = conc <= 1e-8 && spectrum <= 1e-10 && discord <= 0.02 && audit.failures.is_empty() && audit.checked > 0;
    let mut detail = format!(
        "concurrence routes {conc:.1e}, spectrum {spectrum:.1e}, discord vs search {discord:.1e}, {} snapshots checked, {} invalid",
        audit.checked,
        audit.failures.len()
    );
    if let Some(f) = audit.failures.first() {
        detail.push_str(&format!(" (first: {f})"));
    }
    Ok((ok, detail))
}

fn ground_state_relaxation() -> Outcome {
    let p: SystemParams = preset(1).params;
    let frame = p.dressed_frame();
    let rates = p.rate_set();
    let rho0 = DressedStateVector::initial_ket10(&frame);
    let t = 40.0 / rates.relax_i().min(rates.relax_ii());
    let analytic = propagate_analytic(&rho0, &rates, &frame, t)?.populations[0];
    let gen = build_dissipator_oracle(&p, &rates, &frame);
    let numeric = propagate_numeric(&rho0.to_density(&Tolerances::STATE)?, &gen, &[0.0, t])?;
    let numeric = numeric.last().unwrap().element(0, 0).re;
    let fidelity = analytic.min(numeric);
    Ok((
        fidelity >= 1.0 - 1e-6,
        format!("<a|rho|a> at t = {t:.3e} s: closed form {analytic:.9}, integrated {numeric:.9}"),
    ))
}

fn main() -> ExitCode {
    let mut audit = Audit::default();
    let mut criteria: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut timed = |n, name, f: &mut dyn FnMut(&mut Audit) -> Outcome| {
        let start = Instant::now();
        let outcome = f(&mut audit);
        criteria.push((n, name, outcome, start.elapsed().as_secs_f64()));
    };
    timed(1, "oracle equivalence", &mut |_| oracle_equivalence());
    timed(2, "Gibbs steady state", &mut |_| gibbs_detailed_balance());
    timed(3, "phenomenological steady state", &mut |_| phenomenological_steady_state());
    timed(4, "strong-coupling concurrence", &mut strong_coupling_concurrence);
    timed(5, "discrepancy percentages", &mut discrepancy_percentages);
    timed(6, "weak-coupling behaviour", &mut weak_coupling);
    timed(8, "ground-state relaxation", &mut |_| ground_state_relaxation());
    timed(7, "metric properties", &mut |a| metric_properties(a));
    criteria.sort_by_key(|c| c.0);

    let mut failed = 0;
    for (n, name, outcome, secs) in criteria {
        let (ok, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        if !ok {
            failed += 1;
        }
        println!("{} {n} {name}: {detail} [{secs:.1} s]", if ok { "PASS" } else { "FAIL" });
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
