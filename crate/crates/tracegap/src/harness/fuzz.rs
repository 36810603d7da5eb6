//! Campaign driver: constructs random instances with known structure, runs
//! the certificates on them, and checks every proved inequality.
//!
//! Each trial derives independent sub-seeds per check family, so enabling or
//! disabling one family never changes the instances another family sees.
//! Checks are recorded under stable ids (see [`ALL_CHECK_IDS`]); a violation
//! stores the instance coordinates needed to rebuild the exact matrices.

use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::angles::canonical_angles;
use crate::decomp::StiefelFrame;
use crate::eig::{certify_eigenspace, certify_eigenspace_against};
use crate::error::{Error, Result};
use crate::polar::{
    align_factor, certify_polar, is_polar_maximizer, trace_objective, von_neumann_check,
    PolarCertificate,
};
use crate::tol::Tolerances;

use super::gen::{
    compose_svd, gen_gaussian, gen_stiefel, haar_unitary, hermitian_from_unitary,
    polar_maximizer_completion, rotate_frame, splitmix64,
};
use super::{
    AngleStyle, CheckTarget, FuzzConfig, FuzzReport, SpectrumStyle, Tightness, Violation,
};

/// Every check id a campaign can emit. `harness.error` is reserved for
/// instances where certification itself failed.
pub const ALL_CHECK_IDS: [&str; 24] = [
    "angles.half_lower",
    "angles.half_upper",
    "angles.triangle",
    "eig.fan",
    "eig.lower",
    "eig.upper",
    "eig.lower_invariant",
    "polar.lemma_a",
    "polar.lower",
    "polar.upper",
    "polar.half_angle",
    "polar.chain_eta",
    "polar.chain_half",
    "polar.chain_min",
    "polar.case_b",
    "polar.case_c",
    "corollary.eta",
    "corollary.epsilon",
    "corollary.upper",
    "corollary.aligned",
    "lemma.objective",
    "lemma.maximizer",
    "lemma.characterization",
    "vonneumann.trace",
];

const SALT_EIG: u64 = 0x4549_4721_0001_77AA;
const SALT_POLAR: u64 = 0x504F_4C41_0002_77AB;
const SALT_LEMMA: u64 = 0x4C45_4D4D_0003_77AC;
const SALT_VN: u64 = 0x564E_5654_0004_77AD;

/// Accumulates check outcomes: every evaluation either passes or becomes a
/// [`Violation`], and the sharpest `lhs/rhs` ratio per check is kept.
struct Recorder {
    slack_tol: f64,
    checks: std::collections::BTreeMap<String, u64>,
    violations: Vec<Violation>,
    tightness: std::collections::BTreeMap<String, Tightness>,
    total: u64,
}

impl Recorder {
    fn new(slack_tol: f64) -> Self {
        Self {
            slack_tol,
            checks: Default::default(),
            violations: Vec::new(),
            tightness: Default::default(),
            total: 0,
        }
    }

    /// Checks `lhs <= rhs` with slack proportional to `scale`.
    fn record(&mut self, id: &str, trial: u64, instance: &str, lhs: f64, rhs: f64, scale: f64) {
        self.total += 1;
        *self.checks.entry(id.to_string()).or_insert(0) += 1;
        // Negated form on purpose: a NaN on either side must count as a
        // violation, not slip through as "not greater".
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(lhs <= rhs + self.slack_tol * scale) {
            self.violations.push(Violation {
                check_id: id.to_string(),
                trial,
                instance: instance.to_string(),
                lhs,
                rhs,
                slack: rhs - lhs,
            });
        }
        // Ratios only make sense against a solidly positive right side.
        if rhs > 1e-12 {
            let ratio = lhs / rhs;
            let better = match self.tightness.get(id) {
                None => true,
                Some(t) => ratio > t.max_ratio,
            };
            if better {
                self.tightness.insert(
                    id.to_string(),
                    Tightness {
                        max_ratio: ratio,
                        trial,
                        instance: instance.to_string(),
                    },
                );
            }
        }
    }

    /// Certification failed outright on a constructed instance.
    fn fail(&mut self, trial: u64, instance: &str, err: &Error) {
        self.total += 1;
        *self.checks.entry("harness.error".to_string()).or_insert(0) += 1;
        self.violations.push(Violation {
            check_id: "harness.error".to_string(),
            trial,
            instance: format!("{instance} ({err})"),
            lhs: 1.0,
            rhs: 0.0,
            slack: -1.0,
        });
    }
}

/// Eigenvalue draw for Hermitian instances: descending, with the top-k block
/// structurally separated from the rest so the certified gap is the real
/// split the instance was built around.
fn draw_spectrum<R: Rng>(style: SpectrumStyle, n: usize, k: usize, rng: &mut R) -> Vec<f64> {
    let bot = n - k;
    let sort_desc = |v: &mut Vec<f64>| v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    match style {
        SpectrumStyle::Uniform => {
            let mut top: Vec<f64> = (0..k).map(|_| 0.1 + rng.gen::<f64>()).collect();
            let mut low: Vec<f64> = (0..bot).map(|_| -0.1 - rng.gen::<f64>()).collect();
            sort_desc(&mut top);
            sort_desc(&mut low);
            top.extend(low);
            top
        }
        SpectrumStyle::Clustered => {
            let mut top: Vec<f64> = (0..k).map(|_| 1.0 + 0.02 * rng.gen::<f64>()).collect();
            let mut low: Vec<f64> = (0..bot).map(|_| -0.02 * rng.gen::<f64>()).collect();
            sort_desc(&mut top);
            sort_desc(&mut low);
            top.extend(low);
            top
        }
        SpectrumStyle::Geometric => {
            if n == 1 {
                return vec![1.0];
            }
            (0..n)
                .map(|i| 10f64.powf(-4.0 * i as f64 / (n - 1) as f64))
                .collect()
        }
        SpectrumStyle::PrescribedGap(g) => {
            let raw: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
            let min = raw.iter().cloned().fold(f64::INFINITY, f64::min);
            let mut top: Vec<f64> = raw.iter().map(|x| x - min + g).collect();
            let raw: Vec<f64> = (0..bot).map(|_| rng.gen::<f64>()).collect();
            let max = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut low: Vec<f64> = raw.iter().map(|x| x - max).collect();
            sort_desc(&mut top);
            sort_desc(&mut low);
            // Gap across the split is exactly g: min(top) = g, max(low) = 0.
            top.extend(low);
            top
        }
    }
}

/// Singular value draw: descending and strictly positive.
fn draw_sigma<R: Rng>(style: SpectrumStyle, k: usize, rng: &mut R) -> Vec<f64> {
    let sort_desc = |v: &mut Vec<f64>| v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    match style {
        SpectrumStyle::Uniform => {
            let mut s: Vec<f64> = (0..k).map(|_| 0.5 + rng.gen::<f64>()).collect();
            sort_desc(&mut s);
            s
        }
        SpectrumStyle::Clustered => {
            let mut s: Vec<f64> = (0..k).map(|_| 1.0 + 0.01 * rng.gen::<f64>()).collect();
            sort_desc(&mut s);
            s
        }
        SpectrumStyle::Geometric => (0..k)
            .map(|i| 10f64.powf(-4.0 * i as f64 / (k - 1).max(1) as f64))
            .collect(),
        SpectrumStyle::PrescribedGap(g) => {
            let mut s: Vec<f64> = (0..k).map(|_| g + rng.gen::<f64>()).collect();
            sort_desc(&mut s);
            // Smallest singular value is exactly the prescribed value.
            s[k - 1] = g;
            s
        }
    }
}

/// Angles to rotate a reference frame by; `None` requests the antipodal
/// frame (negation: same subspace, opposite basis). At most `budget`
/// directions can leave the subspace, so only that many angles are nonzero.
fn draw_thetas<R: Rng>(
    style: AngleStyle,
    k: usize,
    budget: usize,
    rng: &mut R,
) -> Option<Vec<f64>> {
    let m = k.min(budget);
    let mut t = vec![0.0; k];
    match style {
        AngleStyle::Tiny => {
            for slot in t.iter_mut().take(m) {
                *slot = 0.9e-5 + 1.0e-6 * rng.gen::<f64>();
            }
        }
        AngleStyle::Moderate => {
            for slot in t.iter_mut().take(m) {
                *slot = 0.05 + 0.75 * rng.gen::<f64>();
            }
        }
        AngleStyle::NearOrthogonal => {
            for slot in t.iter_mut().take(m) {
                *slot = std::f64::consts::FRAC_PI_2 - 0.1 * rng.gen::<f64>();
            }
        }
        AngleStyle::Antipodal => return None,
    }
    Some(t)
}

/// Reference frame displaced according to the angle style.
fn displace<R: Rng>(
    p_star: &StiefelFrame,
    style: AngleStyle,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<StiefelFrame> {
    let budget = p_star.n() - p_star.k();
    match draw_thetas(style, p_star.k(), budget, rng) {
        Some(thetas) => rotate_frame(p_star, &thetas, rng.next_u64(), tol),
        None => StiefelFrame::new(p_star.matrix().scale(-1.0), tol),
    }
}

fn scale_of(x: f64) -> f64 {
    x.abs().max(1.0)
}

fn eig_trial(
    rec: &mut Recorder,
    tol: &Tolerances,
    cfg: &FuzzConfig,
    trial: u64,
    seed: u64,
    n: usize,
    k: usize,
) {
    let coords = format!("eig:t{trial}:n{n}:k{k}:s{seed:016x}");
    let mut body = || -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spectrum = draw_spectrum(cfg.spectrum, n, k, &mut rng);
        let u = haar_unitary(n, rng.next_u64(), tol)?;
        let h = hermitian_from_unitary(&u, &spectrum)?;
        let p_star = u.columns(0, k, tol)?;
        let p = displace(&p_star, cfg.angles, &mut rng, tol)?;

        let cert = certify_eigenspace(&h, &p, tol)?;
        rec.record("eig.fan", trial, &coords, -cert.eta, 0.0, 1.0);
        rec.record(
            "eig.lower",
            trial,
            &coords,
            cert.lower_bound,
            cert.sin_theta_f,
            scale_of(cert.sin_theta_f),
        );
        if cert.upper_applicable {
            rec.record(
                "eig.upper",
                trial,
                &coords,
                cert.sin_theta_f,
                cert.epsilon,
                scale_of(cert.epsilon),
            );
        }

        let ang = canonical_angles(&p, &p_star)?;
        rec.record(
            "angles.half_lower",
            trial,
            &coords,
            ang.half_angle_dist_f,
            ang.dist_f,
            scale_of(ang.dist_f),
        );
        rec.record(
            "angles.half_upper",
            trial,
            &coords,
            ang.dist_f,
            2.0 * ang.half_angle_dist_f,
            scale_of(2.0 * ang.half_angle_dist_f),
        );
        let z = displace(&p_star, cfg.angles, &mut rng, tol)?;
        let pz = canonical_angles(&p, &z)?;
        let sz = canonical_angles(&p_star, &z)?;
        let rhs = ang.dist_f + sz.dist_f;
        rec.record("angles.triangle", trial, &coords, pz.dist_f, rhs, scale_of(rhs));

        // The lower bound also holds against interior invariant subspaces:
        // pick a window of eigenvectors that is not the dominant one.
        if k < n {
            let window = 1 + (rng.next_u64() as usize) % (n - k);
            let p_inv = u.columns(window, k, tol)?;
            let p2 = displace(&p_inv, cfg.angles, &mut rng, tol)?;
            let cert2 = certify_eigenspace_against(&h, &p2, &p_inv, tol)?;
            rec.record(
                "eig.lower_invariant",
                trial,
                &coords,
                cert2.lower_bound,
                cert2.sin_theta_f,
                scale_of(cert2.sin_theta_f),
            );
        }
        Ok(())
    };
    if let Err(e) = body() {
        rec.fail(trial, &coords, &e);
    }
}

fn emit_polar_cert(rec: &mut Recorder, trial: u64, coords: &str, cert: &PolarCertificate) {
    rec.record("polar.lemma_a", trial, coords, -cert.eta, 0.0, 1.0);
    rec.record(
        "polar.lower",
        trial,
        coords,
        cert.lower_bound,
        cert.sin_theta_f,
        scale_of(cert.sin_theta_f),
    );
    rec.record(
        "polar.upper",
        trial,
        coords,
        cert.sin_theta_f,
        cert.epsilon,
        scale_of(cert.epsilon),
    );
    rec.record(
        "polar.half_angle",
        trial,
        coords,
        2.0 * cert.half_angle_f,
        cert.epsilon,
        scale_of(cert.epsilon),
    );
    if let Some(bound) = cert.case_b_bound {
        rec.record("polar.case_b", trial, coords, cert.frob_dist, bound, scale_of(bound));
    }
    if cert.case_c_applicable {
        rec.record(
            "polar.case_c",
            trial,
            coords,
            cert.frob_dist,
            cert.epsilon,
            scale_of(cert.epsilon),
        );
    }
}

fn polar_trial(
    rec: &mut Recorder,
    tol: &Tolerances,
    cfg: &FuzzConfig,
    trial: u64,
    seed: u64,
    n: usize,
    k: usize,
) {
    let coords = format!("polar:t{trial}:n{n}:k{k}:s{seed:016x}");
    let polar_on = cfg.targets.contains(&CheckTarget::Polar);
    let corollary_on = cfg.targets.contains(&CheckTarget::Corollary);
    let mut body = || -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = draw_sigma(cfg.spectrum, k, &mut rng);
        let u = gen_stiefel(n, k, rng.next_u64(), tol)?;
        let v = haar_unitary(k, rng.next_u64(), tol)?;
        let b = compose_svd(&u, &sigma, &v)?;
        let p_star = StiefelFrame::new(u.matrix() * &v.matrix().adjoint(), tol)?;
        let p0 = displace(&p_star, cfg.angles, &mut rng, tol)?;

        let cert = certify_polar(&b, &p0, tol)?;
        if polar_on {
            emit_polar_cert(rec, trial, &coords, &cert);

            // The proof chain behind the upper bound, on the known instance:
            // eta dominates the half-angle form, which dominates the sine
            // form, which dominates sigma_min times the angle mass. Largest
            // singular values pair with smallest angles.
            let ang = canonical_angles(&p0, &p_star)?;
            let (mut s1, mut s2) = (0.0, 0.0);
            for (i, sig) in sigma.iter().enumerate().take(k) {
                let th = ang.thetas[k - 1 - i];
                let half = (0.5 * th).sin();
                s1 += sig * 2.0 * half * half;
                s2 += 0.5 * sig * th.sin().powi(2);
            }
            let s3 = 0.5 * sigma[k - 1] * ang.dist_f * ang.dist_f;
            rec.record("polar.chain_eta", trial, &coords, s1, cert.eta, scale_of(cert.eta));
            rec.record("polar.chain_half", trial, &coords, s2, s1, scale_of(s1));
            rec.record("polar.chain_min", trial, &coords, s3, s2, scale_of(s2));
        }
        if corollary_on {
            rec.record(
                "corollary.eta",
                trial,
                &coords,
                cert.eta_variant,
                cert.eta,
                scale_of(cert.eta),
            );
            rec.record(
                "corollary.epsilon",
                trial,
                &coords,
                cert.epsilon_variant,
                cert.epsilon,
                scale_of(cert.epsilon),
            );
            rec.record(
                "corollary.upper",
                trial,
                &coords,
                cert.sin_theta_f,
                cert.epsilon_variant,
                scale_of(cert.epsilon_variant),
            );
            if let (Some(aligned), Some(bound)) = (cert.aligned_frob_dist, cert.corollary_bound) {
                rec.record("corollary.aligned", trial, &coords, aligned, bound, scale_of(bound));
            }
        }

        // Re-certify the gauge-aligned frame: same subspace, case (b) basis.
        if polar_on {
            if let Ok(q) = align_factor(&b, &p0, tol) {
                let p1 = StiefelFrame::new(p0.matrix() * q.matrix(), tol)?;
                let cert1 = certify_polar(&b, &p1, tol)?;
                emit_polar_cert(rec, trial, &coords, &cert1);
            }
        }
        Ok(())
    };
    if let Err(e) = body() {
        rec.fail(trial, &coords, &e);
    }
}

fn lemma_trial(
    rec: &mut Recorder,
    tol: &Tolerances,
    cfg: &FuzzConfig,
    trial: u64,
    seed: u64,
    n: usize,
    k: usize,
) {
    let coords = format!("lemma:t{trial}:n{n}:k{k}:s{seed:016x}");
    let mut body = || -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sigma = draw_sigma(cfg.spectrum, k, &mut rng);
        // A fifth of the instances are rank-deficient: the maximizer is then
        // a completion, not a polar factor.
        if rng.gen_ratio(1, 5) {
            let zeros = k.div_ceil(2);
            for s in sigma.iter_mut().skip(k - zeros) {
                *s = 0.0;
            }
        }
        let u = gen_stiefel(n, k, rng.next_u64(), tol)?;
        let v = haar_unitary(k, rng.next_u64(), tol)?;
        let b = compose_svd(&u, &sigma, &v)?;

        let pmax = polar_maximizer_completion(&b, rng.next_u64(), tol)?;
        let trace_norm = b.trace_norm();
        let objective = trace_objective(&b, &pmax)?;
        rec.record(
            "lemma.maximizer",
            trial,
            &coords,
            trace_norm,
            objective,
            scale_of(trace_norm),
        );
        rec.record(
            "lemma.objective",
            trial,
            &coords,
            objective,
            trace_norm,
            scale_of(trace_norm),
        );
        let recognized = is_polar_maximizer(&b, &pmax, tol)?;
        rec.record(
            "lemma.characterization",
            trial,
            &coords,
            if recognized { 0.0 } else { 1.0 },
            0.0,
            1.0,
        );

        let p_rand = gen_stiefel(n, k, rng.next_u64(), tol)?;
        let objective_rand = trace_objective(&b, &p_rand)?;
        rec.record(
            "lemma.objective",
            trial,
            &coords,
            objective_rand,
            trace_norm,
            scale_of(trace_norm),
        );
        Ok(())
    };
    if let Err(e) = body() {
        rec.fail(trial, &coords, &e);
    }
}

fn von_neumann_trial(rec: &mut Recorder, trial: u64, seed: u64, n: usize, k: usize) {
    let coords = format!("vonneumann:t{trial}:n{n}:k{k}:s{seed:016x}");
    let mut body = || -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = gen_gaussian(n, k, rng.next_u64())?;
        // A quarter of the pairs are positive multiples of each other, where
        // the inequality is an equality.
        let c = if rng.gen_ratio(1, 4) {
            b.scale(0.1 + 1.9 * rng.gen::<f64>())
        } else {
            gen_gaussian(n, k, rng.next_u64())?
        };
        let (lhs, rhs) = von_neumann_check(&b, &c)?;
        rec.record("vonneumann.trace", trial, &coords, lhs, rhs, scale_of(rhs));
        Ok(())
    };
    if let Err(e) = body() {
        rec.fail(trial, &coords, &e);
    }
}

/// Runs a campaign. The report is a pure function of the config and
/// tolerances apart from `elapsed_seconds`.
pub fn run_fuzz(cfg: &FuzzConfig, tol: &Tolerances) -> Result<FuzzReport> {
    cfg.validate()?;
    let start = Instant::now();
    let mut rec = Recorder::new(tol.slack_tol);
    for trial in 0..cfg.trials {
        let (n, k) = cfg.dims[(trial as usize) % cfg.dims.len()];
        let trial_seed = splitmix64(cfg.seed ^ splitmix64(trial));
        if cfg.targets.contains(&CheckTarget::Eig) {
            eig_trial(&mut rec, tol, cfg, trial, splitmix64(trial_seed ^ SALT_EIG), n, k);
        }
        if cfg.targets.contains(&CheckTarget::Polar)
            || cfg.targets.contains(&CheckTarget::Corollary)
        {
            polar_trial(&mut rec, tol, cfg, trial, splitmix64(trial_seed ^ SALT_POLAR), n, k);
        }
        if cfg.targets.contains(&CheckTarget::Lemma) {
            lemma_trial(&mut rec, tol, cfg, trial, splitmix64(trial_seed ^ SALT_LEMMA), n, k);
        }
        if cfg.targets.contains(&CheckTarget::VonNeumann) {
            von_neumann_trial(&mut rec, trial, splitmix64(trial_seed ^ SALT_VN), n, k);
        }
    }
    Ok(FuzzReport {
        config: cfg.echo(),
        trials: cfg.trials,
        checks_evaluated: rec.total,
        checks: rec.checks,
        violations: rec.violations,
        tightness: rec.tightness,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}
