use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use approx::assert_abs_diff_eq;
use blochring::analysis::{
    autocorrelation, autocorrelation_series, bloch_vector, fringe_measure, fringe_predict, revival_detect,
    revival_predict, spin_reduced_state, transfer_fidelity, FringeMeasureOptions, QubitTransfer, Regime,
    RevivalMechanism, TimeSeries,
};
use blochring::lattice::{build_hamiltonian, dispersion, eigensystem, quantized_flux, resonant_velocity};
use blochring::propagator::{
    analytic_spread_packet, evolve_dense_oracle, reflect_map, translate, AnalyticSpreadParams,
};
use blochring::wavepacket::{encode_qubit, gaussian_packet, momentum_boost, width_check, DEFAULT_WIDTH_STRICTNESS};
use blochring::{Complex64, Error, HamiltonianMatrix, LatticeSpec, PacketSpec, SpectralPropagator, SpinState};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> SpinState {
    let mut draw = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let up: Vec<Complex64> = (0..n).map(|_| draw()).collect();
    let down: Vec<Complex64> = (0..n).map(|_| draw()).collect();
    let norm = up.iter().chain(&down).map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    SpinState::new(
        DVector::from_iterator(n, up.into_iter().map(|z| z / norm)),
        DVector::from_iterator(n, down.into_iter().map(|z| z / norm)),
    )
    .unwrap()
}

#[test]
fn lattice_rejects_invalid_parameters() {
    assert_eq!(LatticeSpec::ring(2, 1.0, 0.0), Err(Error::TooFewSites(2)));
    assert!(matches!(LatticeSpec::ring(10, 0.0, 0.0), Err(Error::InvalidHopping(_))));
    assert!(matches!(
        LatticeSpec::ring(10, 1.0, f64::NAN),
        Err(Error::InvalidFlux(_))
    ));
    assert!(matches!(
        LatticeSpec::new(blochring::Topology::Chain, 10, 1.0, 3.0),
        Err(Error::FluxOnChain(_))
    ));
}

#[test]
fn four_site_ring_hamiltonian() {
    let h = build_hamiltonian(&LatticeSpec::ring(4, 1.0, 0.0).unwrap());
    for a in 0..4 {
        for b in 0..4 {
            let expected = if (a + 1) % 4 == b || (b + 1) % 4 == a {
                -1.0
            } else {
                0.0
            };
            assert_abs_diff_eq!(h.matrix()[(a, b)].re, expected, epsilon = 1e-15);
            assert_abs_diff_eq!(h.matrix()[(a, b)].im, 0.0, epsilon = 1e-15);
        }
    }
}

#[test]
fn quarter_flux_puts_i_on_forward_bonds() {
    let h = build_hamiltonian(&LatticeSpec::ring(100, 1.0, 25.0).unwrap());
    // −J e^{iπ/2} = −i on every forward bond, including the wrap-around one
    for a in 0..100 {
        let z = h.matrix()[(a, (a + 1) % 100)];
        assert_abs_diff_eq!(z.re, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(z.im, -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(z.norm(), 1.0, epsilon = 1e-14);
    }
    assert!(h.hermiticity_defect() < 1e-14);
}

#[test]
fn three_site_chain_spectrum() {
    let l = LatticeSpec::chain(3, 1.0).unwrap();
    let analytic = sorted(eigensystem(&l).energies().to_vec());
    let expected = [-SQRT_2, 0.0, SQRT_2];
    for (e, x) in analytic.iter().zip(expected) {
        assert_abs_diff_eq!(*e, x, epsilon = 1e-14);
    }
    // independent route: roots of the characteristic polynomial −λ³ + 2λ
    for e in analytic {
        assert_abs_diff_eq!(-e.powi(3) + 2.0 * e, 0.0, epsilon = 1e-12);
    }
    let h = build_hamiltonian(&l);
    for i in 0..3usize {
        for j in 0..3 {
            let expected = if i.abs_diff(j) == 1 { -1.0 } else { 0.0 };
            assert_eq!(h.matrix()[(i, j)], Complex64::new(expected, 0.0));
        }
    }
}

#[test]
fn dispersion_examples() {
    let bare = LatticeSpec::ring(100, 1.0, 0.0).unwrap();
    let quarter = LatticeSpec::ring(100, 1.0, 25.0).unwrap();
    assert_abs_diff_eq!(dispersion(&bare, 0.0).unwrap(), -2.0, epsilon = 1e-15);
    assert_abs_diff_eq!(dispersion(&quarter, 0.0).unwrap(), 0.0, epsilon = 1e-14);
    let k = 2.0 * PI / 100.0;
    let e = dispersion(&quarter, k).unwrap();
    assert_abs_diff_eq!(e, 2.0 * k.sin(), epsilon = 1e-14);
    assert_abs_diff_eq!(e, 0.12558, epsilon = 1e-5);
    assert_abs_diff_eq!(e / k, 2.0, epsilon = 3e-3);
    assert!(matches!(dispersion(&bare, 0.01), Err(Error::OffGrid { .. })));
}

#[test]
fn eigensystem_examples() {
    let four = sorted(
        eigensystem(&LatticeSpec::ring(4, 1.0, 0.0).unwrap())
            .energies()
            .to_vec(),
    );
    for (e, x) in four.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
        assert_abs_diff_eq!(*e, x, epsilon = 1e-14);
    }

    let basis = eigensystem(&LatticeSpec::ring(100, 1.0, 25.0).unwrap());
    let energy_of = |m: i64| {
        let a = basis.labels().iter().position(|&l| l == m).unwrap();
        basis.energies()[a]
    };
    assert_abs_diff_eq!(energy_of(0), 0.0, epsilon = 1e-14);
    for m in 1..50 {
        assert_abs_diff_eq!(energy_of(m), -energy_of(-m), epsilon = 1e-13);
    }
}

#[test]
fn eigenmodes_are_exact_for_resonant_ring_and_chain() {
    for l in [
        LatticeSpec::ring(100, 1.0, 25.0).unwrap(),
        LatticeSpec::chain(100, 1.3).unwrap(),
    ] {
        let basis = eigensystem(&l);
        assert!(basis.orthonormality_defect() < 1e-12);
        assert!(basis.residual(&build_hamiltonian(&l)) < 1e-10);
    }
}

#[test]
fn quantized_flux_examples() {
    assert_eq!(quantized_flux(0, 100), 25.0);
    assert_eq!(quantized_flux(1, 100), 75.0);
    assert_eq!(quantized_flux(0, 8), 2.0);
    assert_eq!(resonant_velocity(0, 1.0), 2.0);
    assert_eq!(resonant_velocity(1, 1.0), -2.0);
}

#[test]
fn gaussian_packet_examples() {
    let l = LatticeSpec::ring(100, 1.0, 0.0).unwrap();
    let psi = gaussian_packet(&l, &PacketSpec::new(0.1, 0.0, 50.0)).unwrap();
    assert_abs_diff_eq!(psi.norm_sqr(), 1.0, epsilon = 1e-12);
    assert!(psi.down.iter().all(|z| *z == Complex64::new(0.0, 0.0)));
    assert!(psi.up.iter().all(|z| z.re > 0.0 && z.im == 0.0));

    let sharp = gaussian_packet(&l, &PacketSpec::new(10.0, 0.0, 50.0)).unwrap();
    assert_abs_diff_eq!(sharp.up[49].norm(), 1.0, epsilon = 1e-12);
    assert!(sharp.up[48].norm() <= (-50.0f64).exp() * (1.0 + 1e-12));
    assert!(sharp.up[50].norm() <= (-50.0f64).exp() * (1.0 + 1e-12));

    assert!(matches!(
        gaussian_packet(&l, &PacketSpec::new(-0.1, 0.0, 50.0)),
        Err(Error::NonPositiveAlpha(_))
    ));
    assert!(matches!(
        gaussian_packet(&l, &PacketSpec::new(0.1, 0.0, 101.0)),
        Err(Error::CenterOutOfRange { .. })
    ));
}

#[test]
fn moving_packet_is_gaussian_in_momentum_space() {
    let l = LatticeSpec::ring(100, 1.0, 0.0).unwrap();
    let psi = gaussian_packet(&l, &PacketSpec::new(0.1, PI / 2.0, 50.0)).unwrap();
    // direct DFT, independent of any FFT library
    let weight = |m: i64| {
        let k = 2.0 * PI * m as f64 / 100.0;
        psi.up
            .iter()
            .enumerate()
            .map(|(j, a)| a * Complex64::from_polar(1.0, -k * (j + 1) as f64))
            .sum::<Complex64>()
            .norm()
    };
    let peak = (-50..50).max_by(|&a, &b| weight(a).total_cmp(&weight(b))).unwrap();
    assert_eq!(peak, 25);
    // |ψ̃(k)| ∝ exp(−(k − k₀)²/(2α²)): one grid step away drops by exp(−δk²/(2α²))
    let dk = 2.0 * PI / 100.0;
    let ratio = weight(26) / weight(25);
    assert_abs_diff_eq!(ratio, (-dk * dk / (2.0 * 0.01)).exp(), epsilon = 1e-5);
}

#[test]
fn width_check_examples() {
    let w = width_check(0.1, 100, DEFAULT_WIDTH_STRICTNESS);
    assert!(!w.ok);
    assert_abs_diff_eq!(w.half_width, 16.651, epsilon = 1e-3);
    assert_abs_diff_eq!(w.margin, 6.0, epsilon = 0.01);
    let w = width_check(0.3, 100, DEFAULT_WIDTH_STRICTNESS);
    assert!(w.ok);
    assert_abs_diff_eq!(w.half_width, 5.55, epsilon = 0.01);
    assert_abs_diff_eq!(w.margin, 18.0, epsilon = 0.05);
    let w = width_check(1.0, 10, DEFAULT_WIDTH_STRICTNESS);
    assert_abs_diff_eq!(w.half_width, 1.665, epsilon = 1e-3);
    assert_abs_diff_eq!(w.margin, 6.0, epsilon = 0.01);
}

#[test]
fn qubit_encoding_examples() {
    let l = LatticeSpec::ring(100, 1.0, 0.0).unwrap();
    let up = encode_qubit(0.0, 1.3, &l, 0.1, 50.0).unwrap();
    assert!(up.down.iter().all(|z| z.norm() == 0.0));
    let down = encode_qubit(PI, 0.0, &l, 0.1, 50.0).unwrap();
    assert!(down.up.iter().all(|z| z.norm() < 1e-16));

    let y = encode_qubit(PI / 2.0, PI / 2.0, &l, 0.1, 50.0).unwrap();
    let b = bloch_vector(&spin_reduced_state(&y));
    assert_abs_diff_eq!(b[0], 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(b[1], 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(b[2], 0.0, epsilon = 1e-12);
    let ratio = y.down[40] / y.up[40];
    assert_abs_diff_eq!(ratio.re, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(ratio.im, 1.0, epsilon = 1e-12);

    let x = encode_qubit(PI / 2.0, 0.0, &l, 0.1, 50.0).unwrap();
    for z in spin_reduced_state(&x).iter() {
        assert_abs_diff_eq!(z.re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-12);
    }
    let up_rho = spin_reduced_state(&up);
    assert_abs_diff_eq!(up_rho[(0, 0)].re, 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(up_rho[(1, 1)].norm(), 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(up_rho[(0, 1)].norm(), 0.0, epsilon = 1e-12);
}

#[test]
fn boost_examples() {
    let l = LatticeSpec::chain(30, 1.0).unwrap();
    let psi = gaussian_packet(&l, &PacketSpec::new(0.3, 0.4, 12.0)).unwrap();
    assert_eq!(momentum_boost(&psi, 0.0), psi);
    let twice = momentum_boost(&momentum_boost(&psi, 0.3), 0.5);
    assert!(twice.distance(&momentum_boost(&psi, 0.8)).unwrap() < 1e-14);
}

#[test]
fn boosted_packet_matches_threaded_ring_densities() {
    let bare = LatticeSpec::ring(100, 1.0, 0.0).unwrap();
    let threaded = LatticeSpec::ring(100, 1.0, 25.0).unwrap();
    let psi = gaussian_packet(&bare, &PacketSpec::new(0.1, 0.0, 50.0)).unwrap();
    let boosted = momentum_boost(&psi, threaded.phase());
    let p0 = SpectralPropagator::new(&bare);
    let p25 = SpectralPropagator::new(&threaded);
    for t in [0.0, 7.5, 33.0, 120.0] {
        let a = p0.evolve(&boosted, t).unwrap().density();
        let b = p25.evolve(&psi, t).unwrap().density();
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }
}

#[test]
fn evolve_examples() {
    let l = LatticeSpec::ring(8, 1.0, 2.0).unwrap();
    let prop = SpectralPropagator::new(&l);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let psi = random_state(&mut rng, 8);
    assert_eq!(prop.evolve(&psi, 0.0).unwrap(), psi);

    let dense = evolve_dense_oracle(&build_hamiltonian(&l), &psi, 3.7).unwrap();
    assert!(prop.evolve(&psi, 3.7).unwrap().distance(&dense).unwrap() < 1e-10);

    let a = 3;
    let mode = SpinState::new(prop.basis().mode(a), DVector::zeros(8)).unwrap();
    let out = prop.evolve(&mode, 5.0).unwrap();
    let phase = Complex64::from_polar(1.0, -prop.basis().energies()[a] * 5.0);
    assert!(
        out.distance(&SpinState::new(prop.basis().mode(a) * phase, DVector::zeros(8)).unwrap())
            .unwrap()
            < 1e-12
    );
    for (x, y) in out.density().iter().zip(mode.density()) {
        assert_abs_diff_eq!(*x, y, epsilon = 1e-14);
    }
}

#[test]
fn dense_oracle_two_site_rabi() {
    let h = HamiltonianMatrix::from_matrix(DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ],
    ))
    .unwrap();
    let psi = SpinState::site(2, 1);
    let out = evolve_dense_oracle(&h, &psi, PI / 2.0).unwrap();
    assert_abs_diff_eq!(out.up[0].norm(), 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(out.up[1].norm_sqr(), 1.0, epsilon = 1e-14);
    assert_eq!(evolve_dense_oracle(&h, &psi, 0.0).unwrap(), psi);

    let big = build_hamiltonian(&LatticeSpec::ring(65, 1.0, 0.0).unwrap());
    assert_eq!(
        evolve_dense_oracle(&big, &SpinState::site(65, 1), 1.0),
        Err(Error::OracleTooLarge(65))
    );
}

#[test]
fn dense_oracle_agrees_with_spectral_on_random_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 3..=12 {
        for l in [
            LatticeSpec::ring(n, 1.0, rng.random_range(-5.0..5.0)).unwrap(),
            LatticeSpec::chain(n, rng.random_range(0.5..2.0)).unwrap(),
        ] {
            let prop = SpectralPropagator::new(&l);
            let h = build_hamiltonian(&l);
            for _ in 0..5 {
                let psi = random_state(&mut rng, n);
                let t = rng.random_range(0.0..20.0);
                let err = prop
                    .evolve(&psi, t)
                    .unwrap()
                    .distance(&evolve_dense_oracle(&h, &psi, t).unwrap())
                    .unwrap();
                assert!(err < 1e-10, "n={n} t={t} err={err}");
            }
        }
    }
}

#[test]
fn translate_examples() {
    let l = LatticeSpec::ring(20, 1.0, 0.0).unwrap();
    let psi = gaussian_packet(&l, &PacketSpec::new(0.4, 0.9, 7.3)).unwrap();
    assert!(translate(&psi, &l, 20.0).unwrap().distance(&psi).unwrap() < 1e-12);
    let moved = translate(&SpinState::site(20, 5), &l, 3.0).unwrap();
    assert!(moved.distance(&SpinState::site(20, 8)).unwrap() < 1e-12);
    let chain = LatticeSpec::chain(20, 1.0).unwrap();
    assert_eq!(translate(&psi, &chain, 1.0), Err(Error::RequiresRing));
}

#[test]
fn resonant_packet_is_translated_rigidly() {
    let l = LatticeSpec::ring(100, 1.0, 25.0).unwrap();
    let prop = SpectralPropagator::new(&l);
    let psi = gaussian_packet(&l, &PacketSpec::new(0.1, 0.0, 50.0)).unwrap();
    let v = resonant_velocity(0, 1.0);
    for step in 0..=50 {
        let t = step as f64;
        let overlap = translate(&psi, &l, v * t)
            .unwrap()
            .inner(&prop.evolve(&psi, t).unwrap())
            .unwrap()
            .norm();
        assert!(overlap >= 0.99, "t={t} overlap={overlap}");
    }
}

#[test]
fn analytic_spread_examples() {
    let params = AnalyticSpreadParams {
        alpha0: 0.3,
        k0: 0.05 * PI,
        center0: 50.0,
        hopping: 1.0,
    };
    assert_abs_diff_eq!(params.width_at(90.0), 0.3 / 263.44f64.sqrt(), epsilon = 1e-6);
    assert_abs_diff_eq!(params.width_at(90.0), 0.018485, epsilon = 5e-6);

    let ring = LatticeSpec::ring(100, 1.0, 0.0).unwrap();
    let at_zero = analytic_spread_packet(&params, 100, 0.0);
    let direct = gaussian_packet(&ring, &PacketSpec::new(0.3, 0.05 * PI, 50.0)).unwrap();
    assert!(at_zero.distance(&direct).unwrap() < 1e-12);
}

#[test]
fn analytic_spread_tracks_exact_evolution_before_wrapping() {
    let l = LatticeSpec::ring(400, 1.0, 0.0).unwrap();
    let psi = gaussian_packet(&l, &PacketSpec::new(0.1, 0.05 * PI, 50.0)).unwrap();
    let exact = SpectralPropagator::new(&l).evolve(&psi, 30.0).unwrap().density();
    let params = AnalyticSpreadParams {
        alpha0: 0.1,
        k0: 0.05 * PI,
        center0: 50.0,
        hopping: 1.0,
    };
    let approx = analytic_spread_packet(&params, 400, 30.0).density();
    let err = exact
        .iter()
        .zip(&approx)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(err <= 5e-3, "max density error {err}");
}

#[test]
fn reflect_map_examples() {
    assert_eq!(reflect_map(101.0, 100), (101.0, true));
    assert_eq!(reflect_map(105.0, 100), (97.0, true));
    assert_eq!(reflect_map(40.0, 100), (40.0, false));
    assert_eq!(reflect_map(-3.0, 100), (3.0, true));
}

#[test]
fn autocorrelation_examples() {
    let l = LatticeSpec::ring(100, 1.0, 25.0).unwrap();
    let psi = gaussian_packet(&l, &PacketSpec::new(0.1, 0.0, 50.0)).unwrap();
    assert_abs_diff_eq!(autocorrelation(&psi, &psi).unwrap(), 1.0, epsilon = 1e-14);
    assert_eq!(
        autocorrelation(&SpinState::site(10, 3), &SpinState::site(10, 7)).unwrap(),
        0.0
    );
    let prop = SpectralPropagator::new(&l);
    assert!(autocorrelation(&psi, &prop.evolve(&psi, 50.0).unwrap()).unwrap() >= 0.95);

    let series = autocorrelation_series(&prop, &psi, &[0.0]).unwrap();
    assert_abs_diff_eq!(series.values()[0], 1.0, epsilon = 1e-14);

    let mode = SpinState::new(prop.basis().mode(17), DVector::zeros(100)).unwrap();
    let flat = autocorrelation_series(&prop, &mode, &[0.0, 3.0, 77.0, 900.0]).unwrap();
    for v in flat.values() {
        assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-12);
    }
}

#[test]
fn fringe_prediction_examples() {
    let ring = LatticeSpec::ring(100, 1.0, 0.0).unwrap();
    let f = fringe_predict(0.3, 0.05 * PI, 50.0, &ring, 90.0).unwrap();
    assert_abs_diff_eq!(f.wavevector, 0.5534, epsilon = 5e-4);
    assert_abs_diff_eq!(f.period, 11.35, epsilon = 0.01);
    assert_abs_diff_eq!(f.density.iter().sum::<f64>(), 1.0, epsilon = 1e-12);

    let early = fringe_predict(0.3, 0.05 * PI, 50.0, &ring, 1e-6).unwrap();
    assert!(early.wavevector < 1e-5 && early.period > 1e5);

    // doubling N at fixed α, α' and δτ doubles K
    let wide = LatticeSpec::ring(200, 1.0, 0.0).unwrap();
    let f2 = fringe_predict(0.3, 0.05 * PI, 50.0, &wide, 90.0).unwrap();
    assert_abs_diff_eq!(f2.wavevector, 2.0 * f.wavevector, epsilon = 1e-12);
    assert_abs_diff_eq!(f2.period, f.period / 2.0, epsilon = 1e-12);
}

#[test]
fn fringe_measure_examples() {
    let synthetic: Vec<f64> = (1..=100)
        .map(|j| 1.0 + 0.5 * (2.0 * PI * j as f64 / 10.0).cos())
        .collect();
    let m = fringe_measure(&synthetic, FringeMeasureOptions::default()).unwrap();
    assert_abs_diff_eq!(m.period.unwrap(), 10.0, epsilon = 0.2);
    let flat = fringe_measure(&[0.01; 100], FringeMeasureOptions::default()).unwrap();
    assert_eq!(flat.period, None);
    assert!(matches!(
        fringe_measure(&[1.0; 8], FringeMeasureOptions::default()),
        Err(Error::ProfileTooShort(8))
    ));
}

#[test]
fn measured_fringe_period_matches_prediction() {
    let ring = LatticeSpec::ring(100, 1.0, 0.0).unwrap();
    let psi = gaussian_packet(&ring, &PacketSpec::new(0.3, 0.05 * PI, 50.0)).unwrap();
    let density = SpectralPropagator::new(&ring).evolve(&psi, 90.0).unwrap().density();
    let measured = fringe_measure(&density, FringeMeasureOptions::default())
        .unwrap()
        .period
        .unwrap();
    let predicted = fringe_predict(0.3, 0.05 * PI, 50.0, &ring, 90.0).unwrap().period;
    assert!((measured / predicted - 1.0).abs() <= 0.15, "{measured} vs {predicted}");
}

#[test]
fn revival_prediction_examples() {
    let ring = LatticeSpec::ring(100, 1.0, 0.0).unwrap();
    let chain = LatticeSpec::chain(100, 1.0).unwrap();
    assert_abs_diff_eq!(
        revival_predict(&ring, Regime::Linear, false).time,
        50.0,
        epsilon = 1e-12
    );
    assert_abs_diff_eq!(
        revival_predict(&ring, Regime::Quadratic, false).time,
        1591.55,
        epsilon = 0.01
    );
    let centered = revival_predict(&chain, Regime::Quadratic, true);
    assert_eq!(centered.mechanism, RevivalMechanism::ParityReducedRevival);
    assert_abs_diff_eq!(centered.time, 811.77, epsilon = 0.01);
    assert_abs_diff_eq!(
        revival_predict(&chain, Regime::Quadratic, false).time,
        2.0 * 101.0 * 101.0 / PI,
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(
        revival_predict(&chain, Regime::Linear, false).time,
        101.0,
        epsilon = 1e-12
    );
    assert!(revival_predict(&ring, Regime::Quadratic, true).centered_ignored);
}

#[test]
fn revival_detect_examples() {
    let times: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.01).collect();
    let values = times.iter().map(|t| t.cos().abs()).collect();
    let peaks = revival_detect(&TimeSeries::new(times, values).unwrap(), 0.8);
    let expected = [PI, 2.0 * PI, 3.0 * PI];
    assert_eq!(peaks.len(), expected.len());
    for (p, e) in peaks.iter().zip(expected) {
        assert_abs_diff_eq!(p.time, e, epsilon = 0.01);
        assert!(p.value > 0.99);
    }

    let flat = TimeSeries::new((0..50).map(f64::from).collect(), vec![0.5; 50]).unwrap();
    assert!(revival_detect(&flat, 0.8).is_empty());
}

#[test]
fn spin_state_is_frozen_under_evolution() {
    let l = LatticeSpec::chain(40, 1.0).unwrap();
    let psi = encode_qubit(1.1, 0.4, &l, 0.2, 20.0).unwrap();
    let prop = SpectralPropagator::new(&l);
    let before = spin_reduced_state(&psi);
    for t in [0.5, 17.0, 3000.0] {
        let after = spin_reduced_state(&prop.evolve(&psi, t).unwrap());
        for (a, b) in after.iter().zip(before.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn transfer_fidelity_examples() {
    let ring = LatticeSpec::ring(100, 1.0, 25.0).unwrap();
    let prop = SpectralPropagator::new(&ring);
    let stay = QubitTransfer {
        theta: 0.7,
        phi_angle: 0.2,
        alpha: 0.1,
        k0: 0.0,
        source: 40.0,
        target: 40.0,
        time: 0.0,
    };
    assert_abs_diff_eq!(transfer_fidelity(&stay, &ring, &prop).unwrap(), 1.0, epsilon = 1e-12);

    let hop = QubitTransfer {
        source: 25.0,
        target: 75.0,
        time: 25.0,
        ..stay
    };
    let on_resonance = transfer_fidelity(&hop, &ring, &prop).unwrap();
    assert!(on_resonance >= 0.95);

    let detuned = LatticeSpec::ring(100, 1.0, 20.0).unwrap();
    let off_resonance = transfer_fidelity(&hop, &detuned, &SpectralPropagator::new(&detuned)).unwrap();
    assert!(off_resonance < on_resonance);
}

#[test]
fn spin_weights_reject_unnormalised_input() {
    let bad = blochring::SpinWeights::new(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    assert!(matches!(bad, Err(Error::SpinNotNormalized(_))));
    let ok = blochring::SpinWeights::new(Complex64::new(FRAC_1_SQRT_2, 0.0), Complex64::new(0.0, FRAC_1_SQRT_2));
    assert!(ok.is_ok());
}
