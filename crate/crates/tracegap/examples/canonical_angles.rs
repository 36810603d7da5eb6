//! Canonical angles between two subspaces of C^n.
//!
//! Builds a frame Q by rotating each column of a random frame P by a
//! prescribed angle into the orthogonal complement, then measures the
//! canonical angles back. The measured spectrum must equal the prescribed
//! one, and every derived distance must match its closed form.

use tracegap::angles::canonical_angles;
use tracegap::harness::gen::{gen_stiefel, rotate_frame};
use tracegap::Tolerances;

fn main() -> tracegap::Result<()> {
    let tol = Tolerances::default();
    let (n, k) = (9, 3);

    let p = gen_stiefel(n, k, 7, &tol)?;
    // Prescribed in ascending order; the measured set comes back descending.
    let prescribed = [0.02, 0.35, 0.90];
    let q = rotate_frame(&p, &prescribed, 8, &tol)?;

    let set = canonical_angles(&p, &q)?;
    println!("canonical angles between a frame and its prescribed rotation");
    println!("  n = {n}, k = {k}");
    for (i, theta) in set.thetas.iter().enumerate() {
        println!("  theta_{} = {theta:.12}", i + 1);
    }

    // The largest angle drives the 2-norm distance, the whole spectrum the
    // Frobenius one.
    let expect_f: f64 = prescribed.iter().map(|t| t.sin().powi(2)).sum::<f64>().sqrt();
    let expect_half: f64 = prescribed
        .iter()
        .map(|t| (0.5 * t).sin().powi(2))
        .sum::<f64>()
        .sqrt();
    println!("  dist_2        = {:.12} (sin of largest angle)", set.dist_2);
    println!("  dist_F        = {:.12}", set.dist_f);
    println!("  half-angle dF = {:.12}", set.half_angle_dist_f);

    for (measured, expected) in set.thetas.iter().zip(prescribed.iter().rev()) {
        assert!((measured - expected).abs() < 1e-12, "angle drifted");
    }
    assert!((set.dist_2 - 0.90f64.sin()).abs() < 1e-12);
    assert!((set.dist_f - expect_f).abs() < 1e-12);
    assert!((set.half_angle_dist_f - expect_half).abs() < 1e-12);

    // Identical spans give the zero spectrum.
    let same = canonical_angles(&p, &p)?;
    assert!(same.dist_f < 1e-12);

    // The Frobenius distance is a metric on the Grassmannian: third frame,
    // triangle inequality.
    let z = gen_stiefel(n, k, 99, &tol)?;
    let pz = canonical_angles(&p, &z)?;
    let qz = canonical_angles(&q, &z)?;
    assert!(set.dist_f <= pz.dist_f + qz.dist_f + 1e-12);
    println!("  triangle: {:.6} <= {:.6} + {:.6}", set.dist_f, pz.dist_f, qz.dist_f);

    println!("all angle identities verified");
    Ok(())
}
