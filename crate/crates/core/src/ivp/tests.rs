use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::geometry::{sphere, stiefel, DiagonalTensor, RicciTables};
use crate::Error;

/// Taylor coefficients of `tanh` from `a' = 1 - a²`.
fn tanh_taylor(n: usize) -> Vec<f64> {
    let mut a = vec![0.0; n + 1];
    a[1] = 1.0;
    for k in 1..n {
        let sq: f64 = (0..=k).map(|i| a[i] * a[k - i]).sum();
        a[k + 1] = -sq / (k + 1) as f64;
    }
    a
}

fn sin_over_t(n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n + 1];
    let mut term = 1.0;
    for j in 0..=n / 2 {
        c[2 * j] = term;
        term *= -1.0 / ((2 * j + 2) * (2 * j + 3)) as f64;
    }
    c
}

fn square(c: &[f64]) -> Vec<f64> {
    (0..c.len())
        .map(|k| (0..=k).map(|i| c[i] * c[k - i]).sum())
        .collect()
}

fn solve(g: &crate::GeometrySpec, eps: f64, u2: f64, order: usize) -> SeriesSolution {
    let data = InitialData::totally_geodesic(g, eps, u2, order).unwrap();
    solve_series(g, &data).unwrap()
}

#[test]
fn cigar_matches_tanh() {
    let g = sphere(1).unwrap();
    let sol = solve(&g, 0.0, -2.0, 12);
    let th = tanh_taylor(14);
    let x_oracle = square(&th[1..]);
    // u' = -2 tanh.
    let u_oracle: Vec<f64> = (0..=12)
        .map(|m| {
            if m == 0 {
                0.0
            } else {
                -2.0 * th[m - 1] / m as f64
            }
        })
        .collect();
    for m in 0..=10 {
        assert!((sol.x_coeff(m).get(0) - x_oracle[m]).abs() < 1e-9, "x_{m}");
        assert!((sol.u_coeff(m) - u_oracle[m]).abs() < 1e-9, "u_{m}");
    }
    assert!((sol.x_jet[2].get(0) + 4.0 / 3.0).abs() < 1e-12);
    assert!((sol.x_coeff(4).get(0) - 17.0 / 45.0).abs() < 1e-12);
    assert!((sol.u_jet[4] - 4.0).abs() < 1e-12);
}

#[test]
fn sine_cone_is_einstein() {
    for n in [2, 3] {
        let g = sphere(n).unwrap();
        let sol = solve(&g, -2.0 * n as f64, 0.0, 12);
        let oracle = square(&sin_over_t(12));
        for m in 0..=10 {
            assert!((sol.x_coeff(m).get(0) - oracle[m]).abs() < 1e-9);
        }
        assert!(sol.u_jet.iter().all(|&u| u == 0.0));
        assert!((sol.x_jet[2].get(0) + 2.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn gaussian_is_flat() {
    for k in 1..=3 {
        for eps in [-2.0, 2.0] {
            let g = sphere(k).unwrap();
            let sol = solve(&g, eps, -0.5 * eps, 12);
            assert!(sol.x_jet[1..].iter().all(|x| x.max_abs() == 0.0));
            for (m, &u) in sol.u_jet.iter().enumerate() {
                assert_eq!(u, if m == 2 { -0.5 * eps } else { 0.0 });
            }
        }
    }
}

#[test]
fn gaussian_order_zero_right_side_vanishes() {
    let g = sphere(3).unwrap();
    let tables = RicciTables::new(&g).unwrap();
    let (d, _) = compute_d(
        &g,
        &tables,
        2.0,
        &[vec![1.0], vec![0.0]],
        &[0.0, 0.0, -0.5],
        0,
    )
    .unwrap();
    assert_eq!(d.max_abs(), 0.0);
    assert!(compute_d(&g, &tables, 2.0, &[vec![1.0]], &[0.0, 0.0, -0.5], 0).is_err());
}

#[test]
fn cigar_order_zero_fixes_odd_potential() {
    let g = sphere(1).unwrap();
    let tables = RicciTables::new(&g).unwrap();
    let (_, d_tilde) = compute_d(
        &g,
        &tables,
        0.0,
        &[vec![1.0], vec![0.0]],
        &[0.0, 0.0, -1.0],
        0,
    )
    .unwrap();
    assert_eq!(d_tilde, 0.0);
}

#[test]
fn bryant_certificates() {
    let g = sphere(3).unwrap();
    for u2 in [-0.5, -1.0] {
        let data = InitialData::totally_geodesic(&g, 0.0, u2, 12).unwrap();
        assert!(check_initial_conditions(&g, &data).unwrap().passed());
        let sol = solve_series(&g, &data).unwrap();
        assert!(sol.max_consistency_residual() <= 1e-8);
        assert!(sol.u_jet.iter().skip(1).step_by(2).all(|&u| u == 0.0));
        let contact = contact_orders(&g, &data, &sol, 1e-9).unwrap();
        for c in [contact.x, contact.u, contact.tt].into_iter().flatten() {
            assert!(c >= 11, "{contact:?}");
        }
    }
}

#[test]
fn stiefel_contact_order() {
    let g = stiefel(2).unwrap();
    let data = InitialData::totally_geodesic(&g, -1.0, -0.3, 8)
        .unwrap()
        .with_kernel_params(0, vec![0.25]);
    let sol = solve_series(&g, &data).unwrap();
    let contact = contact_orders(&g, &data, &sol, 1e-9).unwrap();
    for c in [contact.x, contact.u, contact.tt].into_iter().flatten() {
        assert!(c >= 7, "{contact:?}");
    }
}

#[test]
fn solve_is_deterministic() {
    let g = stiefel(2).unwrap();
    let data = InitialData::totally_geodesic(&g, 0.0, -1.0, 10).unwrap();
    let a = solve_series(&g, &data).unwrap();
    let b = solve_series(&g, &data).unwrap();
    assert_eq!(a, b);
}

#[test]
fn kernel_injection_is_linear_at_its_order() {
    let g = stiefel(2).unwrap();
    let basis = kernel_basis(&g, 0).unwrap();
    assert_eq!(basis.len(), 1);
    let run = |c: f64| {
        let data = InitialData::totally_geodesic(&g, 0.0, -1.0, 10)
            .unwrap()
            .with_kernel_params(0, vec![c]);
        solve_series(&g, &data).unwrap()
    };
    let (a, b) = (run(0.3), run(-0.1));
    let diff = a.x_jet[2].sub(&b.x_jet[2]).sub(&basis[0].scale(0.4));
    assert!(diff.max_abs() < 1e-14);
    assert_eq!(a.x_jet[1], b.x_jet[1]);
    assert!(a.max_consistency_residual() <= 1e-8 && b.max_consistency_residual() <= 1e-8);
}

#[test]
fn kernel_parameter_count_is_checked() {
    let g = stiefel(2).unwrap();
    let data = InitialData::totally_geodesic(&g, 0.0, -1.0, 8)
        .unwrap()
        .with_kernel_params(0, vec![1.0, 2.0]);
    assert!(matches!(
        solve_series(&g, &data),
        Err(Error::InvalidData(_))
    ));
    let beyond = InitialData::totally_geodesic(&g, 0.0, -1.0, 8)
        .unwrap()
        .with_kernel_params(7, vec![1.0]);
    assert!(matches!(
        solve_series(&g, &beyond),
        Err(Error::InvalidData(_))
    ));
}

#[test]
fn stiefel_second_fundamental_form_must_vanish() {
    // No Casimir eigenvalue on the singular orbit equals k, so the t⁻¹
    // condition leaves no room for L₁.
    let g = stiefel(2).unwrap();
    let zero = InitialData::totally_geodesic(&g, 0.0, -1.0, 8).unwrap();
    assert!(check_initial_conditions(&g, &zero).unwrap().max() <= 1e-8);
    let bent =
        InitialData::new(&g, 0.0, DiagonalTensor::new(vec![0.0, 1.0, -2.0]), -1.0, 8).unwrap();
    assert!(matches!(
        check_initial_conditions(&g, &bent),
        Err(Error::InitialConditionViolated { .. })
    ));
    assert!(solve_series(&g, &bent).is_err());
}

#[cfg(feature = "exact")]
mod exact {
    use super::*;
    use crate::series::{Coeff, Rational};

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn tanh_exact(n: usize) -> Vec<Rational> {
        let mut a = vec![Rational::zero(); n + 1];
        a[1] = Rational::one();
        for k in 1..n {
            let sq = (0..=k).fold(Rational::zero(), |s, i| s.add(&a[i].mul(&a[k - i])));
            a[k + 1] = sq.neg().div(&Rational::from_i64(k as i64 + 1));
        }
        a
    }

    fn square_exact(c: &[Rational]) -> Vec<Rational> {
        (0..c.len())
            .map(|k| (0..=k).fold(Rational::zero(), |s, i| s.add(&c[i].mul(&c[k - i]))))
            .collect()
    }

    #[test]
    fn cigar_is_exact() {
        let g = sphere(1).unwrap();
        let jet =
            solve_series_exact(&g, Rational::zero(), &[Rational::zero()], r(-2, 1), 10).unwrap();
        let th = tanh_exact(12);
        let x = square_exact(&th[1..]);
        for m in 0..=10 {
            assert_eq!(jet.x[m][0], x[m], "x_{m}");
        }
        for m in 1..=11 {
            assert_eq!(jet.u[m], th[m - 1].mul(&r(-2, m as i128)), "u_{m}");
        }
        assert_eq!(jet.x[4][0], r(17, 45));
    }

    #[test]
    fn sine_cone_is_exact() {
        let g = sphere(2).unwrap();
        let jet =
            solve_series_exact(&g, r(-4, 1), &[Rational::zero()], Rational::zero(), 10).unwrap();
        let mut c = vec![Rational::zero(); 11];
        let mut term = Rational::one();
        for j in 0..=5 {
            c[2 * j] = term;
            term = term.div(&Rational::from_i64(-(((2 * j + 2) * (2 * j + 3)) as i64)));
        }
        let x = square_exact(&c);
        for m in 0..=10 {
            assert_eq!(jet.x[m][0], x[m]);
        }
        assert!(jet.u.iter().all(|u| u.is_zero()));
    }

    #[test]
    fn bryant_agrees_with_floating_point() {
        let g = sphere(3).unwrap();
        let jet =
            solve_series_exact(&g, Rational::zero(), &[Rational::zero()], r(-1, 1), 8).unwrap();
        let sol = solve(&g, 0.0, -1.0, 8);
        for m in 0..=8 {
            assert!((jet.x[m][0].to_f64() - sol.x_coeff(m).get(0)).abs() < 1e-13);
            assert!((jet.u[m].to_f64() - sol.u_coeff(m)).abs() < 1e-13);
        }
    }

    #[test]
    fn kernel_blocks_exact_mode() {
        let g = stiefel(2).unwrap();
        let z = vec![Rational::zero(); 3];
        assert!(solve_series_exact(&g, Rational::zero(), &z, r(-1, 1), 4).is_err());
    }
}
