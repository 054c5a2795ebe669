use super::periodic::PeriodicOperators;
use super::*;
use crate::discretization::{dirac_initial, Grid2D};
use crate::fourier::{amplification_r, euler_factor, symbols, FourierPoint};
use crate::model::{exact_solution, ModelParams};
use proptest::prelude::*;

fn model_grid(inv_h: usize) -> Grid2D {
    Grid2D::truncated((-10.0, 10.0), 1.0 / inv_h as f64, 1.0).unwrap()
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

#[test]
fn scheme_params_step_count() {
    let sp = SchemeParams::new(1.0 / 3.0, 0.4, 1.0, 2, 1.0 / 64.0).unwrap();
    assert_eq!(sp.n_steps, 160);
    assert!((sp.dt - 1.0 / 160.0).abs() < 1e-16);
    let err = SchemeParams::new(1.0 / 3.0, 0.3, 1.0, 2, 1.0 / 8.0).unwrap_err().to_string();
    assert!(err.contains("nearest valid lambda"), "{err}");
    assert!(SchemeParams::with_steps(0.5, 3, 4, 1.0, 0.1, 1.0).is_err());
    assert!(!sp.stability_warning(-0.7));
    assert!(SchemeParams::new(0.2, 0.4, 1.0, 2, 1.0 / 64.0).unwrap().stability_warning(0.0));
}

#[test]
fn constants_are_fixed_points() {
    let grid = model_grid(4);
    let ops = StencilOperators::model(grid, &ModelParams::reference());
    let sp = SchemeParams::new(1.0 / 3.0, 0.5, 1.0, 0, 0.25).unwrap();
    let u = GridField::from_fn(grid, |_, _| 2.5);
    let v = mcs_step(&u, &ops, &sp).unwrap();
    assert!(max_rel(&v.values, &u.values) < 1e-14);
    let (w, _) = nine_point_solve(&ops, sp.dt, &u, 1e-13).unwrap();
    assert!(max_rel(&w.values, &u.values) < 1e-12);
}

#[test]
fn boundary_values_pass_through() {
    let grid = model_grid(4);
    let ops = StencilOperators::model(grid, &ModelParams::reference());
    let sp = SchemeParams::new(0.5, 0.5, 1.0, 1, 0.25).unwrap();
    let u = GridField::from_fn(grid, |x, y| (0.3 * x).sin() + 0.1 * y + 1.0);
    let (v, _) = integrate(&u, &ops, &sp).unwrap();
    for j in 0..grid.nx {
        for k in 0..grid.ny {
            if !grid.is_interior(j, k) {
                assert_eq!(v.get(j, k), u.get(j, k));
            }
        }
    }
}

/// Every lattice mode of the periodic grid is an eigenvector of the stepper with
/// eigenvalue `R`, and of an implicit Euler half step with eigenvalue `1 / (1 - z/2)`.
#[test]
fn periodic_modes_reproduce_symbols() {
    let mp = ModelParams::reference();
    let m = 16;
    let h = 20.0 / m as f64;
    for &theta in &[1.0 / 3.0, 0.5, 1.0] {
        let sp = SchemeParams::with_steps(theta, 8, 0, 1.0, h, 1.0).unwrap();
        let ops = PeriodicOperators::new(m, h, h, &mp).unwrap();
        let mut stepper = Stepper::new(&ops, sp).unwrap().with_euler_tolerance(1e-14);
        for &(l1, l2) in &[(0, 0), (1, 0), (3, 5), (8, 8), (15, 2), (7, 12)] {
            let fp = FourierPoint::new(ops.angle(l1), ops.angle(l2)).unwrap();
            let sym = symbols(fp, &mp, &sp);
            let (re, im) = ops.mode(l1, l2);
            for (factor, euler) in [(amplification_r(&sym, theta), false), (euler_factor(&sym), true)] {
                let (mut a, mut b) = (re.clone(), im.clone());
                if euler {
                    stepper.euler_half_step(&mut a).unwrap();
                    stepper.euler_half_step(&mut b).unwrap();
                } else {
                    stepper.mcs_step(&mut a).unwrap();
                    stepper.mcs_step(&mut b).unwrap();
                }
                for i in 0..m * m {
                    let want_re = factor.re * re[i] - factor.im * im[i];
                    let want_im = factor.re * im[i] + factor.im * re[i];
                    assert!((a[i] - want_re).abs() < 1e-12, "theta {theta} mode ({l1},{l2})");
                    assert!((b[i] - want_im).abs() < 1e-12, "theta {theta} mode ({l1},{l2})");
                }
            }
        }
    }
}

#[test]
fn startup_work_counts() {
    let grid = model_grid(4);
    let ops = StencilOperators::model(grid, &ModelParams::reference());
    let sp = SchemeParams::new(1.0 / 3.0, 0.5, 1.0, 2, 0.25).unwrap();
    let u0 = dirac_initial(grid).unwrap();
    let (_, report) = integrate(&u0, &ops, &sp).unwrap();
    assert_eq!(report.euler_half_steps, 4);
    assert_eq!(report.mcs_steps, sp.n_steps - 2);
    assert_eq!(report.line_solves, 4 * (sp.n_steps - 2));
    assert!(report.euler_max_residual <= EULER_TOLERANCE);
    let (_, report) = rannacher_startup(&u0, &ops, &sp).unwrap();
    assert_eq!(report.euler_half_steps, 4);
    assert_eq!(report.mcs_steps, 0);
}

#[test]
fn mass_is_preserved() {
    let grid = model_grid(16);
    let ops = StencilOperators::model(grid, &ModelParams::reference());
    let sp = SchemeParams::new(1.0 / 3.0, 0.4, 1.0, 2, 1.0 / 16.0).unwrap();
    let (u, _) = integrate(&dirac_initial(grid).unwrap(), &ops, &sp).unwrap();
    assert!((u.mass() - 1.0).abs() < 1e-6, "mass {}", u.mass());
    assert!(u.mass() <= 1.0 + 1e-12);
}

#[test]
fn smooth_data_second_order() {
    // Start from the exact solution at t = 0.5 and step to t = 1.
    let mp = ModelParams::reference();
    let mut errors = Vec::new();
    for inv_h in [8, 16, 32] {
        let h = 1.0 / inv_h as f64;
        let grid = model_grid(inv_h);
        let ops = StencilOperators::model(grid, &mp);
        let sp = SchemeParams::with_steps(1.0 / 3.0, inv_h, 0, 0.5, h, 1.0).unwrap();
        let u0 = GridField::from_fn(grid, |x, y| exact_solution(x, y, 0.5, &mp).unwrap());
        let (u, _) = integrate(&u0, &ops, &sp).unwrap();
        let exact = GridField::from_fn(grid, |x, y| exact_solution(x, y, 1.0, &mp).unwrap());
        errors.push(u.max_abs_diff_interior(&exact).unwrap().0);
    }
    for w in errors.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((1.8..2.3).contains(&order), "orders from {errors:?}");
    }
}

#[test]
fn rejects_wrong_length() {
    let grid = model_grid(2);
    let ops = StencilOperators::model(grid, &ModelParams::reference());
    let sp = SchemeParams::new(0.5, 0.5, 1.0, 0, 0.5).unwrap();
    let mut stepper = Stepper::new(&ops, sp).unwrap();
    assert!(stepper.mcs_step(&mut [0.0; 3]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn step_is_linear(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0, theta in 0.3f64..1.0) {
        let grid = model_grid(2);
        let ops = StencilOperators::model(grid, &ModelParams::reference());
        let sp = SchemeParams::with_steps(theta, 4, 1, 1.0, 0.5, 1.0).unwrap();
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let u = GridField::from_fn(grid, |_, _| next());
        let v = GridField::from_fn(grid, |_, _| next());
        let w = GridField::from_values(
            grid,
            u.values.iter().zip(&v.values).map(|(x, y)| a * x + b * y).collect(),
        ).unwrap();
        let mut stepper = Stepper::new(&ops, sp).unwrap().with_euler_tolerance(1e-14);
        let run = |f: &GridField, s: &mut Stepper<StencilOperators>| {
            let mut x = f.values.clone();
            s.integrate(&mut x).unwrap();
            x
        };
        let (su, sv, sw) = (run(&u, &mut stepper), run(&v, &mut stepper), run(&w, &mut stepper));
        let combo: Vec<f64> = su.iter().zip(&sv).map(|(x, y)| a * x + b * y).collect();
        let scale = combo.iter().chain(&sw).fold(1e-300f64, |m, x| m.max(x.abs()));
        let diff = sw.iter().zip(&combo).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        prop_assert!(diff <= 1e-11 * scale);
    }
}
