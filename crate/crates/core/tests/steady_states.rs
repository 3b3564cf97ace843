use twoqubit::integrate::uniform_grid;
use twoqubit::phenomenological::PhenomStateVector;
use twoqubit::{
    propagate_phenom, steady_state_phenom, steady_state_phenom_dressed, Basis, DensityMatrix4, SystemParams,
    Tolerances,
};

fn long_run_deviation(p: &SystemParams, t_max: f64) -> f64 {
    let rates = p.rate_set();
    let times = uniform_grid(t_max, 50).unwrap();
    let traj = propagate_phenom(&DensityMatrix4::product(1, 0), p, &rates, &times).unwrap();
    let closed = steady_state_phenom(p, &rates).unwrap().to_density(&Tolerances::STATE).unwrap();
    traj.last().unwrap().matrix().max_abs_diff(closed.matrix())
}

#[test]
fn phenomenological_relaxation_reaches_closed_form() {
    for &temp in &[5e-4, 1.5e-2] {
        let p = SystemParams::new(4e9, 4e9, 5e7, 5e10, 8e9, temp).unwrap();
        let rates = p.rate_set();
        let dev = long_run_deviation(&p, 50.0 / rates.phen_total());
        println!("T = {temp}: deviation {dev:.3e}");
        assert!(dev <= 1e-6, "T = {temp}: deviation {dev:.3e}");
    }
}

#[test]
fn phenomenological_state_is_not_thermal() {
    for &temp in &[0.0, 5e-4, 1.5e-2] {
        let p = SystemParams::new(4e9, 4e9, 5e7, 5e10, 8e9, temp).unwrap();
        let rates = p.rate_set();
        let frame = p.dressed_frame();
        let d = steady_state_phenom_dressed(&p, &rates, &frame).unwrap();
        assert_eq!(d.basis(), Basis::Dressed);
        let max_pop = d.populations().into_iter().fold(0.0, f64::max);
        assert!(d.element(1, 2).norm() > 1e-4 * max_pop);
        assert!(d.element(0, 3).norm() > 1e-4 * max_pop);
    }
}

#[test]
fn steady_state_round_trips_through_state_vector() {
    let p = SystemParams::new(4e9, 4e9, 5e7, 5e10, 8e9, 1.5e-2).unwrap();
    let s = steady_state_phenom(&p, &p.rate_set()).unwrap();
    let rho = s.to_density(&Tolerances::STATE).unwrap();
    assert_eq!(PhenomStateVector::from_density(&rho).unwrap(), s);
}
