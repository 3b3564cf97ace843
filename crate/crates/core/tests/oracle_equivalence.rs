//! Closed-form dressed-basis propagation against RK4 integration of the
//! independently assembled Lindblad generator.

use twoqubit::integrate::uniform_grid;
use twoqubit::microscopic::{analytic_trajectory, DressedStateVector};
use twoqubit::{build_dissipator_oracle, propagate_analytic, propagate_numeric, SystemParams, Tolerances};

fn max_deviation(p: &SystemParams, n_points: usize) -> f64 {
    let frame = p.dressed_frame();
    let rates = p.rate_set();
    let rho0 = DressedStateVector::initial_ket10(&frame);
    let t_max = 10.0 / rates.relax_i().min(rates.relax_ii());
    let times = uniform_grid(t_max, n_points).unwrap();
    let gen = build_dissipator_oracle(p, &rates, &frame);
    let numeric = propagate_numeric(&rho0.to_density(&Tolerances::STATE).unwrap(), &gen, &times).unwrap();
    numeric
        .iter()
        .map(|(t, s)| {
            let a = propagate_analytic(&rho0, &rates, &frame, t).unwrap();
            s.matrix().max_abs_diff(&a.to_matrix())
        })
        .fold(0.0, f64::max)
}

#[test]
fn very_strong_coupling_at_zero_temperature() {
    let p = SystemParams::new(4e8, 4e9, 5e8, 5e10, 8e8, 0.0).unwrap();
    let dev = max_deviation(&p, 2000);
    assert!(dev <= 1e-7, "deviation {dev:.3e}");
}

#[test]
fn equal_coupling_cold_bath() {
    let p = SystemParams::new(4e9, 4e9, 5e7, 5e10, 8e9, 5e-4).unwrap();
    let dev = max_deviation(&p, 2000);
    assert!(dev <= 1e-7, "deviation {dev:.3e}");
}

#[test]
fn equal_coupling_warm_bath() {
    let p = SystemParams::new(4e9, 4e9, 5e7, 5e10, 8e9, 1.5e-2).unwrap();
    let dev = max_deviation(&p, 2000);
    assert!(dev <= 1e-7, "deviation {dev:.3e}");
}

#[test]
fn weak_coupling_warm_bath() {
    let p = SystemParams::new(5e6, 4e4, 5e2, 5e5, 1e7, 0.05).unwrap();
    let dev = max_deviation(&p, 200);
    assert!(dev <= 1e-7, "deviation {dev:.3e}");
}

#[test]
fn analytic_trajectory_passes_state_checks() {
    let p = SystemParams::new(4e9, 4e9, 5e7, 5e10, 8e9, 1.5e-2).unwrap();
    let frame = p.dressed_frame();
    let rates = p.rate_set();
    let rho0 = DressedStateVector::initial_ket10(&frame);
    let times = uniform_grid(1e-6, 500).unwrap();
    let traj = analytic_trajectory(&rho0, &rates, &frame, &times).unwrap();
    assert_eq!(traj.len(), 500);
    for (_, s) in traj.iter() {
        s.validate(&Tolerances::EVOLVED).unwrap();
        // ρad starts at zero and is never fed
        assert!(s.element(0, 3).norm() < 1e-15);
    }
}

#[test]
fn ground_state_reached_from_ket10_at_zero_temperature() {
    let p = SystemParams::new(4e8, 4e9, 5e8, 5e10, 8e8, 0.0).unwrap();
    let frame = p.dressed_frame();
    let rates = p.rate_set();
    let rho0 = DressedStateVector::initial_ket10(&frame);
    let t = 40.0 / rates.relax_i().min(rates.relax_ii());
    let s = propagate_analytic(&rho0, &rates, &frame, t).unwrap();
    assert!(s.populations[0] >= 1.0 - 1e-6);
}
