use std::f64::consts::{LN_2, PI};

use faer::Mat;
use proptest::prelude::*;
use spindemag_core::entanglement::{
    concurrence, reduce, spin_flip, ReducedDensity, SpinPair, ENTANGLEMENT_THRESHOLD,
};
use spindemag_core::hamiltonian::{build_h, build_hdd, ChainGeometry, FieldSpec};
use spindemag_core::isentrope::{
    run_ad, solve_beta, AdSchedule, GridSpacing, ISENTROPY_TOL_PER_SPIN,
};
use spindemag_core::spectrum::{diagonalize, Spectrum};
use spindemag_core::spin::{embed, single_spin_ops, OperatorMatrix};
use spindemag_core::thermo::{entropy, gibbs_weights, heat_capacity, log_partition};
use spindemag_core::Complex64;

fn spectrum(n: usize, theta: f64, phi: f64, omega0: f64) -> Spectrum {
    let g = ChainGeometry::new(n, theta, phi).unwrap();
    diagonalize(&build_h(&g, FieldSpec::new(omega0).unwrap())).unwrap()
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn amplitudes() -> impl Strategy<Value = [Complex64; 4]> {
    prop::array::uniform4((-1.0f64..1.0, -1.0f64..1.0))
        .prop_filter("non-zero", |a| a.iter().any(|(r, i)| r.abs() + i.abs() > 1e-3))
        .prop_map(|a| {
            let v = a.map(|(r, i)| c64(r, i));
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.map(|z| z / norm)
        })
}

/// Random mixture of up to four pure states.
fn mixed_state() -> impl Strategy<Value = ReducedDensity> {
    prop::collection::vec((amplitudes(), 0.01f64..1.0), 1..5).prop_map(|parts| {
        let total: f64 = parts.iter().map(|(_, w)| w).sum();
        let mut e = [[c64(0.0, 0.0); 4]; 4];
        for (v, w) in &parts {
            for i in 0..4 {
                for j in 0..4 {
                    e[i][j] += v[i] * v[j].conj() * (w / total);
                }
            }
        }
        ReducedDensity::new(SpinPair::new(1, 2).unwrap(), e).unwrap()
    })
}

fn random_unitary(seed: &[(f64, f64)], dim: usize) -> Mat<Complex64> {
    let m = Mat::<Complex64>::from_fn(dim, dim, |i, j| {
        let (a, b) = seed[(i * dim + j) % seed.len()];
        c64(a + 0.1 * i as f64, b - 0.07 * j as f64)
    });
    m.qr().compute_Q()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn embedded_operators_on_distinct_sites_commute(
        n in 2usize..6,
        (a, b) in (1usize..6, 1usize..6),
    ) {
        prop_assume!(a <= n && b <= n && a != b);
        let ops = single_spin_ops();
        let x = embed(&ops.iplus, a, n).unwrap();
        let y = embed(&ops.iz, b, n).unwrap();
        prop_assert!(x.commutator(&y).max_abs() == 0.0);
        let z = embed(&ops.iz, a, n).unwrap();
        // [Iz, I+] = I+ on the same site
        prop_assert!(z.commutator(&x).max_abs_diff(&x) == 0.0);
        let id = OperatorMatrix::identity(2);
        let lifted = embed(&id, a, n).unwrap();
        prop_assert!((lifted.trace().re - (1usize << n) as f64).abs() == 0.0);
    }

    #[test]
    fn hamiltonian_is_hermitian_and_traceless(
        n in 2usize..6,
        theta in 0.0..PI,
        phi in 0.0..(2.0 * PI),
        omega0 in 0.0f64..20.0,
    ) {
        let g = ChainGeometry::new(n, theta, phi).unwrap();
        let h = build_h(&g, FieldSpec::new(omega0).unwrap());
        prop_assert!(h.hermiticity_defect() <= 1e-14);
        prop_assert!(h.trace().norm() <= 1e-12);
        prop_assert!(build_hdd(&g).trace().norm() <= 1e-12);
    }

    #[test]
    fn spectrum_independent_of_azimuth_and_mirror_angle(
        n in 2usize..5,
        theta in 0.0..PI,
        (phi1, phi2) in (0.0..(2.0 * PI), 0.0..(2.0 * PI)),
        omega0 in 0.0f64..5.0,
    ) {
        let a = spectrum(n, theta, phi1, omega0);
        let b = spectrum(n, theta, phi2, omega0);
        let c = spectrum(n, PI - theta, phi1, omega0);
        prop_assert!(max_diff(a.eigenvalues(), b.eigenvalues()) <= 1e-12);
        prop_assert!(max_diff(a.eigenvalues(), c.eigenvalues()) <= 1e-12);
    }

    #[test]
    fn diagonalization_is_basis_independent(
        n in 2usize..5,
        theta in 0.0..PI,
        omega0 in 0.0f64..5.0,
        seed in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8),
    ) {
        let g = ChainGeometry::new(n, theta, 0.7).unwrap();
        let h = build_h(&g, FieldSpec::new(omega0).unwrap());
        let u = random_unitary(&seed, h.dim());
        let rotated = OperatorMatrix::from_mat(&u * h.as_mat() * u.adjoint()).unwrap();
        // restore exact Hermiticity lost to rounding
        let rotated = (&rotated + &rotated.adjoint()).scale_real(0.5);
        let a = diagonalize(&h).unwrap();
        let b = diagonalize(&rotated).unwrap();
        prop_assert!(max_diff(a.eigenvalues(), b.eigenvalues()) <= 1e-11);
        prop_assert!(b.max_residual(&rotated) <= 1e-11);
        for beta in [0.3, 2.0] {
            let da = entropy(&a, beta).unwrap() - entropy(&b, beta).unwrap();
            prop_assert!(da.abs() <= 1e-10);
        }
    }

    #[test]
    fn entropy_decreases_with_beta_within_bounds(
        n in 2usize..6,
        theta in 0.0..PI,
        omega0 in 0.0f64..10.0,
        (b1, b2) in (0.0f64..20.0, 0.0f64..20.0),
    ) {
        let s = spectrum(n, theta, 0.3, omega0);
        let (lo, hi) = if b1 < b2 { (b1, b2) } else { (b2, b1) };
        let (s_lo, s_hi) = (entropy(&s, lo).unwrap(), entropy(&s, hi).unwrap());
        let max = n as f64 * LN_2;
        prop_assert!(s_hi <= s_lo + 1e-12);
        prop_assert!(s_lo <= max + 1e-12 && s_hi >= -1e-12);
        let w = gibbs_weights(&s, hi).unwrap();
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn entropy_slope_is_minus_heat_capacity_over_beta(
        n in 2usize..5,
        theta in 0.0..PI,
        omega0 in 0.0f64..5.0,
        beta in 0.05f64..5.0,
    ) {
        let s = spectrum(n, theta, 1.1, omega0);
        let h = 1e-4 * beta;
        let slope = (entropy(&s, beta + h).unwrap() - entropy(&s, beta - h).unwrap()) / (2.0 * h);
        let c = heat_capacity(&s, beta).unwrap();
        prop_assert!(c >= 0.0);
        prop_assert!((slope + c / beta).abs() <= 1e-6 * (1.0 + c / beta));
        // ln Z shifts by -β c under H -> H + c
        let shifted: Vec<f64> = s.eigenvalues().iter().map(|e| e + 0.75).collect();
        let sd = Spectrum::from_diagonal(&shifted).unwrap();
        let d = log_partition(&sd, beta).unwrap() - log_partition(&s, beta).unwrap() + 0.75 * beta;
        prop_assert!(d.abs() <= 1e-11 * (1.0 + beta));
    }

    #[test]
    fn solve_beta_inverts_entropy(
        n in 2usize..5,
        theta in 0.2f64..1.4,
        omega0 in 0.5f64..5.0,
        beta in 0.01f64..3.0,
    ) {
        let s = spectrum(n, theta, 0.0, omega0);
        let target = entropy(&s, beta).unwrap();
        let b = solve_beta(&s, target).unwrap();
        prop_assert!((entropy(&s, b).unwrap() - target).abs() <= 1e-12 * n as f64);
        prop_assert!((b - beta).abs() <= 1e-6 * beta);
    }

    #[test]
    fn pure_state_concurrence(v in amplitudes()) {
        let rho = ReducedDensity::pure(SpinPair::new(1, 2).unwrap(), v).unwrap();
        let expected = 2.0 * (v[0] * v[3] - v[1] * v[2]).norm();
        prop_assert!((concurrence(&rho).unwrap().value - expected).abs() <= 1e-10);
    }

    #[test]
    fn concurrence_contract(rho in mixed_state()) {
        let c = concurrence(&rho).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&c.value));
        prop_assert_eq!(c.value, c.q.max(0.0));
        prop_assert!(c.lambdas.windows(2).all(|w| w[0] >= w[1]) && c.lambdas[3] >= 0.0);
        // λ² are the eigenvalues of R (trace check)
        let flipped = spin_flip(&rho);
        let tr_r: Complex64 = (0..4)
            .flat_map(|i| (0..4).map(move |k| (i, k)))
            .map(|(i, k)| rho.get(i, k) * flipped[k][i])
            .sum();
        let sum_sq: f64 = c.lambdas.iter().map(|l| l * l).sum();
        prop_assert!((tr_r.re - sum_sq).abs() <= 1e-12 && tr_r.im.abs() <= 1e-12);
    }

    #[test]
    fn concurrence_invariant_under_local_unitaries(
        rho in mixed_state(),
        (a, b, c) in (0.0..PI, 0.0..PI, 0.0..PI),
    ) {
        let u1 = [[c64(a.cos(), 0.0), c64(0.0, a.sin())], [c64(0.0, a.sin()), c64(a.cos(), 0.0)]];
        let p = Complex64::from_polar(1.0, c);
        let u2 = [[c64(b.cos(), 0.0), -c64(b.sin(), 0.0) * p], [c64(b.sin(), 0.0) * p.conj(), c64(b.cos(), 0.0)]];
        let u = |i: usize, j: usize| u1[i >> 1][j >> 1] * u2[i & 1][j & 1];
        let mut e = [[c64(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        e[i][j] += u(i, k) * rho.get(k, l) * u(j, l).conj();
                    }
                }
            }
        }
        let rotated = ReducedDensity::new(rho.pair(), e).unwrap();
        let d = concurrence(&rho).unwrap().value - concurrence(&rotated).unwrap().value;
        prop_assert!(d.abs() <= 1e-10);
    }

    #[test]
    fn reduced_states_are_valid_densities(
        n in 2usize..7,
        theta in 0.0..PI,
        phi in 0.0..(2.0 * PI),
        omega0 in 0.0f64..5.0,
        beta in 0.0f64..10.0,
        (m, k) in (1usize..7, 1usize..7),
    ) {
        prop_assume!(m < k && k <= n);
        let s = spectrum(n, theta, phi, omega0);
        let rho = reduce(&s, beta, SpinPair::new(m, k).unwrap()).unwrap();
        prop_assert!(rho.eigenvalues().unwrap().iter().all(|&x| x >= -1e-12));
        prop_assert!((rho.trace() - c64(1.0, 0.0)).norm() <= 1e-12);
    }

    #[test]
    fn isentrope_conserves_entropy_and_cools(
        n in 2usize..6,
        omega_in in 2.0f64..20.0,
        beta_in in 0.01f64..1.0,
    ) {
        let g = ChainGeometry::perpendicular(n).unwrap();
        let sched = AdSchedule::with_spacing(omega_in, beta_in, 0.05, 40, GridSpacing::Logarithmic).unwrap();
        let t = run_ad(&g, &sched, &[]).unwrap();
        for p in &t.points {
            prop_assert!((p.entropy - t.initial_entropy).abs() <= ISENTROPY_TOL_PER_SPIN * n as f64);
        }
        prop_assert!(t.points.windows(2).all(|w| w[1].beta >= w[0].beta));
    }
}

#[test]
fn parallel_and_antiparallel_fields_never_entangle() {
    for n in 2..=4 {
        for theta in [0.0, PI] {
            let g = ChainGeometry::new(n, theta, 0.0).unwrap();
            for omega0 in [0.1, 1.0, 3.0] {
                let s = diagonalize(&build_h(&g, FieldSpec::new(omega0).unwrap())).unwrap();
                for beta in [0.5, 2.0, 8.0] {
                    for k in 2..=n {
                        let rho = reduce(&s, beta, SpinPair::new(1, k).unwrap()).unwrap();
                        let c = concurrence(&rho).unwrap();
                        assert!(!c.is_entangled(), "N={n} theta={theta} C1{k}={}", c.value);
                    }
                }
            }
        }
    }
}

#[test]
fn perpendicular_field_maximizes_nearest_neighbour_concurrence() {
    let thetas = [0.2, 0.5, 0.9, 1.2, 1.4, 1.7, 2.2, 2.8];
    for n in 2..=4 {
        for omega0 in [0.3, 1.0, 2.5] {
            let at = |theta: f64, beta: f64| {
                let s = spectrum(n, theta, 0.0, omega0);
                concurrence(&reduce(&s, beta, SpinPair::new(1, 2).unwrap()).unwrap())
                    .unwrap()
                    .value
            };
            for beta in [1.0, 3.0, 8.0] {
                let best = at(PI / 2.0, beta);
                for &theta in &thetas {
                    let c = at(theta, beta);
                    assert!(
                        c <= best + ENTANGLEMENT_THRESHOLD,
                        "N={n} omega0={omega0} beta={beta} theta={theta}: {c} > {best}"
                    );
                }
            }
        }
    }
}
