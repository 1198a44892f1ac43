//! Randomized frame-model sweeps: the comparison identities and the dim-4
//! torsion split must hold on arbitrary almost Hermitian structures, not just
//! the named corpus. Models are generated as (a) one-bracket nilpotent
//! algebras and (b) orthogonally conjugated copies of the corpus algebras,
//! both with randomly conjugated orthogonal complex structures.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use chernscal::frame::{
    chern_connection, compute_report, curvature, lefschetz_trace, ricci_forms,
    third_scalar_complex, third_scalar_real, LieAlgebraModel,
};
use chernscal::linalg::Mat;

fn standard_j4() -> Mat {
    Mat::from_rows(&[
        vec![0.0, -1.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, -1.0],
        vec![0.0, 0.0, 1.0, 0.0],
    ])
}

/// Product of random Givens rotations: exactly orthogonal up to roundoff.
fn random_orthogonal(rng: &mut StdRng, m: usize) -> Mat {
    let mut q = Mat::identity(m);
    for _ in 0..8 {
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m);
        while j == i {
            j = rng.gen_range(0..m);
        }
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let (s, c) = theta.sin_cos();
        let mut g = Mat::identity(m);
        g[(i, i)] = c;
        g[(j, j)] = c;
        g[(i, j)] = -s;
        g[(j, i)] = s;
        q = q.matmul(&g);
    }
    q
}

fn conjugated_j(rng: &mut StdRng, m: usize) -> Mat {
    let q = random_orthogonal(rng, m);
    q.matmul(&standard_j4()).matmul(&q.transpose())
}

/// Entries (i < j, 1-based) of a structure-constant tensor.
fn entries_from_tensor(m: usize, c: &[f64]) -> Vec<(usize, usize, usize, f64)> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in (i + 1)..m {
            for k in 0..m {
                let v = c[(i * m + j) * m + k];
                if v != 0.0 {
                    out.push((i + 1, j + 1, k + 1, v));
                }
            }
        }
    }
    out
}

fn one_bracket_model(rng: &mut StdRng) -> LieAlgebraModel {
    // [e1, e2] = α e3 + β e4 satisfies Jacobi for any α, β
    let alpha: f64 = rng.gen_range(-1.0..1.0);
    let beta: f64 = rng.gen_range(-1.0..1.0);
    LieAlgebraModel::new(
        "random-nilpotent",
        4,
        &[(1, 2, 3, alpha), (1, 2, 4, beta)],
        Mat::identity(4),
        conjugated_j(rng, 4),
    )
    .expect("valid random model")
}

fn conjugated_corpus_model(rng: &mut StdRng) -> LieAlgebraModel {
    // su(2)⊕ℝ brackets pushed through a random orthogonal frame change
    let m = 4;
    let mut c = vec![0.0; m * m * m];
    let mut set = |i: usize, j: usize, k: usize, v: f64| {
        c[(i * m + j) * m + k] = v;
        c[(j * m + i) * m + k] = -v;
    };
    set(0, 1, 2, 2.0);
    set(1, 2, 0, 2.0);
    set(0, 2, 1, -2.0);
    let q = random_orthogonal(rng, m);
    let mut rotated = vec![0.0; m * m * m];
    for a in 0..m {
        for b in 0..m {
            for e in 0..m {
                let mut acc = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        for k in 0..m {
                            acc += q[(i, a)] * q[(j, b)] * q[(k, e)] * c[(i * m + j) * m + k];
                        }
                    }
                }
                rotated[(a * m + b) * m + e] = acc;
            }
        }
    }
    LieAlgebraModel::new(
        "random-conjugated",
        4,
        &entries_from_tensor(m, &rotated),
        Mat::identity(4),
        conjugated_j(rng, 4),
    )
    .expect("rotation preserves Jacobi")
}

#[test]
fn random_dim4_models_satisfy_all_identities() {
    let mut rng = StdRng::seed_from_u64(0xdecafbad);
    for round in 0..24 {
        let model = if round % 2 == 0 {
            one_bracket_model(&mut rng)
        } else {
            conjugated_corpus_model(&mut rng)
        };
        let report = compute_report(&model).unwrap();
        let r = &report.residuals;
        assert!(
            r.chern_vs_third <= 1e-9
                && r.third_vs_riemannian <= 1e-9
                && r.hermitian_vs_riemannian <= 1e-9,
            "round {round}: comparison identities {:?}",
            r
        );
        assert!(
            r.torsion_norm_contraction <= 1e-10,
            "round {round}: contraction {:?}",
            r.torsion_norm_contraction
        );
        let split = r.dim4_torsion_split.expect("dim 4");
        assert!(split <= 1e-10, "round {round}: dim-4 split {split}");
        assert!(
            report.chern_scalar_cross_residual <= 1e-10,
            "round {round}: scalar route disagreement {}",
            report.chern_scalar_cross_residual
        );
        // third Ricci form: Lefschetz trace and both component routes agree
        let frame = model.adapted().unwrap();
        let chern = chern_connection(&frame);
        let r = curvature(&frame, &chern);
        let (_, _, sigma) = ricci_forms(&frame, &r);
        let s_real = third_scalar_real(&r);
        assert!(
            (lefschetz_trace(&frame, &sigma) - s_real).abs() <= 1e-10,
            "round {round}: trace of the third Ricci form"
        );
        assert!(
            (third_scalar_complex(&frame, &r) - s_real).abs() <= 1e-10,
            "round {round}: complex third-scalar route"
        );
    }
}

#[test]
fn scaled_random_model_scalars_transform_conformally() {
    let mut rng = StdRng::seed_from_u64(7);
    let model = conjugated_corpus_model(&mut rng);
    let base = compute_report(&model).unwrap();
    for kappa in [-0.7, 0.3, 1.1] {
        let scaled = chernscal::frame::conformal_scale_constant(&model, kappa).unwrap();
        let factor = (-2.0_f64 * kappa).exp();
        for (s, b) in [
            (scaled.s_chern, base.s_chern),
            (scaled.s_third, base.s_third),
            (scaled.s_riemannian, base.s_riemannian),
        ] {
            assert!(
                (s - factor * b).abs() <= 1e-9 * b.abs().max(1.0),
                "kappa {kappa}: {s} vs {}",
                factor * b
            );
        }
    }
}
