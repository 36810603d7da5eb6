//! Cross-module properties checked on randomized instances.
//!
//! Each property is an identity or invariance the public API promises.
//! Expected values come from an independent route (a second formula, a
//! reconstruction, or a closed form), never from the code under test.

use proptest::prelude::*;

use tracegap::angles::{canonical_angles, subspace_dist_f};
use tracegap::decomp::{
    orthonormal_complement, polar_decompose, singular_values, thin_svd, StiefelFrame,
};
use tracegap::eig::{certify_eigenspace, trace_objective_eig};
use tracegap::harness::gen::{
    complement_directions, gen_gaussian, gen_hermitian, gen_stiefel, gen_with_singular_values,
    haar_unitary, polar_maximizer_completion, rotate_frame,
};
use tracegap::harness::{
    run_fuzz, AngleStyle, CheckTarget, FuzzConfig, SpectrumStyle, ALL_CHECK_IDS,
};
use tracegap::polar::{certify_polar, trace_objective, von_neumann_check};
use tracegap::{DenseMatrix, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Ambient and subspace dimension with 1 <= k <= n.
fn dims(n_max: usize) -> impl Strategy<Value = (usize, usize)> {
    (1..=n_max).prop_flat_map(|n| (Just(n), 1..=n))
}

/// Strictly tall shapes with 1 <= k < n, so complements are nonempty.
fn tall_dims(n_max: usize) -> impl Strategy<Value = (usize, usize)> {
    (2..=n_max).prop_flat_map(|n| (Just(n), 1..n))
}

/// Descending spectrum with a gap of at least 1 at the split index.
fn gapped_spectrum(n: usize, k: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (n - i) as f64 * 0.3 + if i < k { 1.0 } else { 0.0 })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    /// Angle sets are well formed: descending thetas in [0, pi/2], and every
    /// derived distance matches its definition recomputed from the thetas.
    #[test]
    fn angle_sets_are_well_formed((n, k) in dims(10), sa in any::<u64>(), sb in any::<u64>()) {
        let t = tol();
        let x = gen_stiefel(n, k, sa, &t).unwrap();
        let y = gen_stiefel(n, k, sb, &t).unwrap();
        let set = canonical_angles(&x, &y).unwrap();
        prop_assert_eq!(set.k(), k);
        for w in set.thetas.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        for (i, th) in set.thetas.iter().enumerate() {
            prop_assert!((0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(th));
            prop_assert!((set.sines[i] - th.sin()).abs() < 1e-12);
            prop_assert!((set.cosines[i] - th.cos()).abs() < 1e-12);
        }
        let dist_f = set.thetas.iter().map(|t| t.sin().powi(2)).sum::<f64>().sqrt();
        let half = set.thetas.iter().map(|t| (0.5 * t).sin().powi(2)).sum::<f64>().sqrt();
        prop_assert!((set.dist_2 - set.thetas[0].sin()).abs() < 1e-12);
        prop_assert!((set.dist_f - dist_f).abs() < 1e-12);
        prop_assert!((set.half_angle_dist_f - half).abs() < 1e-12);
        // Swapping the arguments cannot change the spectrum.
        let swapped = canonical_angles(&y, &x).unwrap();
        for (a, b) in set.thetas.iter().zip(&swapped.thetas) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    /// The Frobenius subspace distance satisfies the triangle inequality.
    #[test]
    fn subspace_distance_triangle((n, k) in dims(9), sa in any::<u64>(), sb in any::<u64>(), sc in any::<u64>()) {
        let t = tol();
        let x = gen_stiefel(n, k, sa, &t).unwrap();
        let y = gen_stiefel(n, k, sb, &t).unwrap();
        let z = gen_stiefel(n, k, sc, &t).unwrap();
        let xy = subspace_dist_f(&x, &y).unwrap();
        let xz = subspace_dist_f(&x, &z).unwrap();
        let zy = subspace_dist_f(&z, &y).unwrap();
        prop_assert!(xy <= xz + zy + 1e-10);
    }

    /// Angles are invariant under a common unitary rotation of both frames.
    #[test]
    fn angles_ignore_common_rotation((n, k) in dims(8), sa in any::<u64>(), sb in any::<u64>(), su in any::<u64>()) {
        let t = tol();
        let x = gen_stiefel(n, k, sa, &t).unwrap();
        let y = gen_stiefel(n, k, sb, &t).unwrap();
        let u = haar_unitary(n, su, &t).unwrap();
        let ux = StiefelFrame::new(u.matrix() * x.matrix(), &t).unwrap();
        let uy = StiefelFrame::new(u.matrix() * y.matrix(), &t).unwrap();
        let before = canonical_angles(&x, &y).unwrap();
        let after = canonical_angles(&ux, &uy).unwrap();
        for (a, b) in before.thetas.iter().zip(&after.thetas) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    /// A prescribed rotation realizes exactly the prescribed angle multiset.
    #[test]
    fn rotations_realize_prescribed_angles((n, k) in tall_dims(9), seed in any::<u64>(), raw in proptest::collection::vec(0.0f64..1.5, 1..=8)) {
        let t = tol();
        prop_assume!(k <= 8);
        let mut thetas: Vec<f64> = raw.into_iter().take(k).collect();
        thetas.resize(k, 0.0);
        let nonzero = thetas.iter().filter(|x| **x > 0.0).count();
        prop_assume!(nonzero <= n - k);
        let p = gen_stiefel(n, k, seed, &t).unwrap();
        let q = rotate_frame(&p, &thetas, seed ^ 0x9E37, &t).unwrap();
        let mut expected = thetas.clone();
        expected.sort_by(|a, b| b.total_cmp(a));
        let set = canonical_angles(&p, &q).unwrap();
        for (m, e) in set.thetas.iter().zip(&expected) {
            prop_assert!((m - e).abs() < 1e-10, "measured {m} expected {e}");
        }
    }

    /// Thin SVD reconstructs its input, and its singular values agree with
    /// the values-only routine.
    #[test]
    fn thin_svd_reconstructs((n, k) in dims(10), seed in any::<u64>()) {
        let t = tol();
        let b = gen_gaussian(n, k, seed).unwrap();
        let svd = thin_svd(&b, &t).unwrap();
        let recon = svd.reconstruct().unwrap();
        let scale = b.norm_fro().max(1.0);
        prop_assert!((&recon - &b).norm_fro() <= 1e-12 * scale);
        let direct = singular_values(&b);
        prop_assert_eq!(direct.len(), svd.singular_values().len());
        for (a, b) in direct.iter().zip(svd.singular_values()) {
            prop_assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    /// The polar factor of a full-rank tall matrix equals the product of the
    /// SVD outer frames, and the Hermitian factor reconstructs the input.
    #[test]
    fn polar_factorization_is_consistent((n, k) in dims(9), seed in any::<u64>()) {
        let t = tol();
        let sigma: Vec<f64> = (0..k).map(|i| 2.0 - 1.5 * i as f64 / k as f64).collect();
        let b = gen_with_singular_values(n, k, &sigma, seed, &t).unwrap();
        let polar = polar_decompose(&b, &t).unwrap();
        prop_assert!(polar.unique());
        let recon = polar.orthonormal().matrix() * polar.hermitian();
        prop_assert!((&recon - &b).norm_fro() <= 1e-10 * b.norm_fro().max(1.0));
        let svd = thin_svd(&b, &t).unwrap();
        let vh = svd.v().matrix().adjoint();
        let uv = StiefelFrame::new(svd.u().matrix() * &vh, &t).unwrap();
        prop_assert!(subspace_dist_f(polar.orthonormal(), &uv).unwrap() < 1e-10);
        prop_assert!((polar.orthonormal().matrix() - uv.matrix()).norm_fro() < 1e-8);
    }

    /// Complement frames close the space: [P | C] is unitary and the
    /// projected residual can be computed through either factor.
    #[test]
    fn complements_close_the_space((n, k) in tall_dims(9), seed in any::<u64>()) {
        let t = tol();
        let p = gen_stiefel(n, k, seed, &t).unwrap();
        let c = orthonormal_complement(&p, &t);
        prop_assert_eq!(c.k(), n - k);
        let full = StiefelFrame::new(p.matrix().hcat(c.matrix()).unwrap(), &t).unwrap();
        prop_assert!(full.defect() < 1e-12);
        // Two routes to the same residual norm.
        let b = gen_gaussian(n, k, seed ^ 0xABCD).unwrap();
        let ch = c.matrix().adjoint();
        let through_c = (&ch * &b).norm_fro();
        let ph = p.matrix().adjoint();
        let coords = &ph * &b;
        let proj = p.matrix() * &coords;
        let direct = (&b - &proj).norm_fro();
        prop_assert!((through_c - direct).abs() <= 1e-10 * b.norm_fro().max(1.0));
    }

    /// Rayleigh trace objective never exceeds the top eigenvalue sum, and
    /// equality holds on the dominant eigenframe.
    #[test]
    fn trace_objective_respects_the_eigenvalue_sum((n, k) in dims(9), seed in any::<u64>()) {
        let t = tol();
        let spectrum = gapped_spectrum(n, k);
        let h = gen_hermitian(n, &spectrum, seed, &t).unwrap();
        let top: f64 = spectrum.iter().take(k).sum();
        let random = gen_stiefel(n, k, seed ^ 0x55AA, &t).unwrap();
        prop_assert!(trace_objective_eig(&h, &random, &t).unwrap() <= top + 1e-9 * top.abs().max(1.0));
    }

    /// Eigenspace certificates sandwich the measured distance and are gauge
    /// invariant: multiplying the frame by a unitary on the right changes
    /// nothing a certificate reports.
    #[test]
    fn eig_certificates_sandwich_and_ignore_gauge((n, k) in tall_dims(8), seed in any::<u64>()) {
        let t = tol();
        let spectrum = gapped_spectrum(n, k);
        let h = gen_hermitian(n, &spectrum, seed, &t).unwrap();
        let p = gen_stiefel(n, k, seed ^ 0x1234, &t).unwrap();
        let cert = certify_eigenspace(&h, &p, &t).unwrap();
        prop_assert!(cert.chain_verified);
        prop_assert!(cert.eta >= -1e-10);
        prop_assert!(cert.lower_bound <= cert.sin_theta_f + 1e-9);
        prop_assert!(cert.sin_theta_f <= cert.epsilon + 1e-9);

        let q = haar_unitary(k, seed ^ 0x77, &t).unwrap();
        let pq = StiefelFrame::new(p.matrix() * q.matrix(), &t).unwrap();
        let gauged = certify_eigenspace(&h, &pq, &t).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(1.0);
        prop_assert!(close(cert.eta, gauged.eta));
        prop_assert!(close(cert.epsilon, gauged.epsilon));
        prop_assert!(close(cert.residual_f, gauged.residual_f));
        prop_assert!(close(cert.sin_theta_f, gauged.sin_theta_f));
    }

    /// Shifting a Hermitian matrix by a multiple of the identity moves its
    /// spectrum but no part of the certificate.
    #[test]
    fn eig_certificates_ignore_spectral_shift((n, k) in tall_dims(8), seed in any::<u64>(), c in -5.0f64..5.0) {
        let t = tol();
        let spectrum = gapped_spectrum(n, k);
        let h = gen_hermitian(n, &spectrum, seed, &t).unwrap();
        let p = gen_stiefel(n, k, seed ^ 0x4321, &t).unwrap();
        let shift = DenseMatrix::identity(n).scale(c);
        let shifted = &h + &shift;
        let a = certify_eigenspace(&h, &p, &t).unwrap();
        let b = certify_eigenspace(&shifted, &p, &t).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-8 * x.abs().max(1.0);
        prop_assert!(close(a.eta, b.eta));
        prop_assert!(close(a.gap, b.gap));
        prop_assert!(close(a.spread, b.spread));
        prop_assert!(close(a.epsilon, b.epsilon));
        prop_assert!(close(a.residual_f, b.residual_f));
        prop_assert!(close(a.sin_theta_f, b.sin_theta_f));
    }

    /// Polar certificates sandwich the distance; scaling the matrix by a
    /// positive factor rescales the trace data but not one of the bounds.
    #[test]
    fn polar_certificates_sandwich_and_scale((n, k) in dims(8), seed in any::<u64>(), s in 0.1f64..10.0) {
        let t = tol();
        let sigma: Vec<f64> = (0..k).map(|i| 2.0 - 1.2 * i as f64 / k as f64).collect();
        let b = gen_with_singular_values(n, k, &sigma, seed, &t).unwrap();
        let p = gen_stiefel(n, k, seed ^ 0xBEEF, &t).unwrap();
        let cert = certify_polar(&b, &p, &t).unwrap();
        prop_assert!(cert.chain_verified);
        prop_assert!(cert.eta >= -1e-10);
        prop_assert!(cert.lower_bound <= cert.sin_theta_f + 1e-9);
        prop_assert!(cert.sin_theta_f <= cert.epsilon + 1e-9);
        prop_assert!(2.0 * cert.half_angle_f <= cert.epsilon + 1e-9);
        prop_assert!(cert.eta_variant <= cert.eta + 1e-12);

        let scaled = certify_polar(&b.scale(s), &p, &t).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-8 * x.abs().max(1.0);
        prop_assert!(close(s * cert.eta, scaled.eta));
        prop_assert!(close(s * cert.trace_norm, scaled.trace_norm));
        prop_assert!(close(s * cert.sigma_min, scaled.sigma_min));
        prop_assert!(close(cert.epsilon, scaled.epsilon));
        prop_assert!(close(cert.lower_bound, scaled.lower_bound));
        prop_assert!(close(cert.sin_theta_f, scaled.sin_theta_f));
    }

    /// Polar certificates are invariant under a left unitary applied to both
    /// the matrix and the frame.
    #[test]
    fn polar_certificates_ignore_left_rotation((n, k) in dims(7), seed in any::<u64>()) {
        let t = tol();
        let sigma: Vec<f64> = (0..k).map(|i| 1.5 - i as f64 / (k as f64 + 1.0)).collect();
        let b = gen_with_singular_values(n, k, &sigma, seed, &t).unwrap();
        let p = gen_stiefel(n, k, seed ^ 0xD00D, &t).unwrap();
        let u = haar_unitary(n, seed ^ 0xF00D, &t).unwrap();
        let a = certify_polar(&b, &p, &t).unwrap();
        let rotated = certify_polar(
            &(u.matrix() * &b),
            &StiefelFrame::new(u.matrix() * p.matrix(), &t).unwrap(),
            &t,
        ).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-8 * x.abs().max(1.0);
        prop_assert!(close(a.eta, rotated.eta));
        prop_assert!(close(a.epsilon, rotated.epsilon));
        prop_assert!(close(a.sin_theta_f, rotated.sin_theta_f));
        prop_assert!(close(a.frob_dist, rotated.frob_dist));
    }

    /// The trace objective over frames is maximized by the polar factor,
    /// including rank-deficient inputs where a completion is required.
    #[test]
    fn polar_maximizer_attains_the_trace_norm((n, k) in dims(8), seed in any::<u64>(), drop in 0usize..3) {
        let t = tol();
        let drop = drop.min(k);
        let sigma: Vec<f64> = (0..k)
            .map(|i| if i < k - drop { 1.0 + i as f64 } else { 0.0 })
            .collect();
        let mut sorted = sigma.clone();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let b = gen_with_singular_values(n, k, &sorted, seed, &t).unwrap();
        let best = polar_maximizer_completion(&b, seed ^ 0xC0DE, &t).unwrap();
        let tn: f64 = sorted.iter().sum();
        let attained = trace_objective(&b, &best).unwrap();
        prop_assert!((attained - tn).abs() <= 1e-9 * tn.max(1.0));
        let other = gen_stiefel(n, k, seed ^ 0xFACE, &t).unwrap();
        prop_assert!(trace_objective(&b, &other).unwrap() <= tn + 1e-9 * tn.max(1.0));
    }

    /// The trace inner product never exceeds the singular value pairing.
    #[test]
    fn von_neumann_bound_holds((n, k) in dims(9), sa in any::<u64>(), sb in any::<u64>()) {
        let b = gen_gaussian(n, k, sa).unwrap();
        let c = gen_gaussian(n, k, sb).unwrap();
        let (lhs, rhs) = von_neumann_check(&b, &c).unwrap();
        prop_assert!(lhs <= rhs + 1e-9 * rhs.max(1.0));
    }

    /// Campaign configurations survive the key = value round trip.
    #[test]
    fn fuzz_config_kv_round_trips(
        seed in any::<u64>(),
        trials in 1u64..1000,
        raw_dims in proptest::collection::vec((1usize..=12).prop_flat_map(|n| (Just(n), 1..=n)), 1..4),
        spectrum_pick in 0usize..4,
        gap in 0.001f64..10.0,
        angles_pick in 0usize..4,
        target_mask in 1u8..32,
    ) {
        let spectrum = match spectrum_pick {
            0 => SpectrumStyle::Uniform,
            1 => SpectrumStyle::Clustered,
            2 => SpectrumStyle::Geometric,
            _ => SpectrumStyle::PrescribedGap(gap),
        };
        let angles = match angles_pick {
            0 => AngleStyle::Tiny,
            1 => AngleStyle::Moderate,
            2 => AngleStyle::NearOrthogonal,
            _ => AngleStyle::Antipodal,
        };
        let targets = CheckTarget::ALL
            .iter()
            .enumerate()
            .filter(|(i, _)| target_mask & (1 << i) != 0)
            .map(|(_, t)| *t)
            .collect();
        let cfg = FuzzConfig { seed, trials, dims: raw_dims, spectrum, angles, targets };
        cfg.validate().unwrap();
        let back = FuzzConfig::from_kv(&cfg.to_kv()).unwrap();
        prop_assert_eq!(cfg, back);
    }
}

/// Fan's bound on the dominant eigenframe itself: equality.
#[test]
fn trace_objective_attains_the_sum_on_the_eigenframe() {
    let t = tol();
    for seed in 0..20u64 {
        let (n, k) = (7, 3);
        let spectrum = gapped_spectrum(n, k);
        let u = haar_unitary(n, seed, &t).unwrap();
        let h = tracegap::harness::gen::hermitian_from_unitary(&u, &spectrum).unwrap();
        let p_star = u.columns(0, k, &t).unwrap();
        let top: f64 = spectrum.iter().take(k).sum();
        let attained = trace_objective_eig(&h, &p_star, &t).unwrap();
        assert!((attained - top).abs() <= 1e-9 * top.max(1.0));
    }
}

/// Two campaigns with the same configuration serialize identically once the
/// wall time is removed, across every style combination.
#[test]
fn fuzz_reports_replay_bit_for_bit() {
    let t = tol();
    for (spectrum, angles) in [
        (SpectrumStyle::Uniform, AngleStyle::Moderate),
        (SpectrumStyle::Clustered, AngleStyle::NearOrthogonal),
        (SpectrumStyle::Geometric, AngleStyle::Tiny),
        (SpectrumStyle::PrescribedGap(0.25), AngleStyle::Antipodal),
    ] {
        let cfg = FuzzConfig {
            seed: 0xFEED,
            trials: 120,
            dims: vec![(10, 3), (6, 2)],
            spectrum,
            angles,
            ..FuzzConfig::default()
        };
        let a = run_fuzz(&cfg, &t).unwrap();
        let b = run_fuzz(&cfg, &t).unwrap();
        assert!(a.violations.is_empty(), "{spectrum:?}/{angles:?}: {:?}", a.violations.first());
        let ja = serde_json::to_string(&a.normalized()).unwrap();
        let jb = serde_json::to_string(&b.normalized()).unwrap();
        assert_eq!(ja, jb);
    }
}

/// Every advertised check id fires in some cheap campaign.
#[test]
fn every_check_id_is_reachable() {
    let t = tol();
    let mut covered = std::collections::BTreeSet::new();
    for (seed, angles) in [(1u64, AngleStyle::Moderate), (2, AngleStyle::Antipodal)] {
        let cfg = FuzzConfig {
            seed,
            trials: 200,
            dims: vec![(9, 3)],
            angles,
            ..FuzzConfig::default()
        };
        let report = run_fuzz(&cfg, &t).unwrap();
        assert!(report.violations.is_empty());
        covered.extend(report.checks.keys().cloned());
    }
    for id in ALL_CHECK_IDS {
        assert!(covered.contains(id), "check {id} unreachable");
    }
}

/// Forcing an impossible slack tolerance flags every evaluated check, so a
/// campaign cannot pass by silently skipping its checks.
#[test]
fn impossible_slack_tolerance_fails_everything() {
    let mut t = tol();
    t.set("slack_tol", -1e30).unwrap();
    let cfg = FuzzConfig {
        seed: 3,
        trials: 10,
        dims: vec![(6, 2)],
        ..FuzzConfig::default()
    };
    let report = run_fuzz(&cfg, &t).unwrap();
    assert_eq!(report.violations.len() as u64, report.checks_evaluated);
    for v in &report.violations {
        assert_eq!(v.slack, v.rhs - v.lhs);
        assert!(!v.instance.is_empty());
    }
}

/// Complement directions are orthonormal, orthogonal to the base frame, and
/// refuse to exceed the ambient dimension.
#[test]
fn complement_directions_are_orthogonal() {
    let t = tol();
    let p = gen_stiefel(8, 3, 11, &t).unwrap();
    let c = complement_directions(&p, 4, 12, &t).unwrap();
    assert_eq!((c.n(), c.k()), (8, 4));
    let ph = p.matrix().adjoint();
    let cross = (&ph * c.matrix()).norm_fro();
    assert!(cross < 1e-12);
    assert!(complement_directions(&p, 6, 12, &t).is_err());
}
