//! Scalar curvature report of a model and the pointwise comparison
//! identities between the Chern, third, and Riemannian scalar curvatures:
//!
//! ```text
//! s^C − s   = ½|θ|² + ½δθ − (9/2)|t|² + ½|T|²
//! 2s − s^g  = |T|² − (9/2)|t|² − 2δθ − |θ|²
//! s^H − s^g = −δθ − (27/2)|t|² + 2|T|²
//! 9|t|² − |T|² = Σ T_ijk T_jki
//! dim 4:  |T|² − (9/2)|t|² = |N|² + ½|(d^cF)^{2,0}|²
//! ```

use serde::Serialize;

use crate::frame::connection::{chern_connection, levi_civita};
use crate::frame::curvature::{
    chern_scalar_complex, curvature, lefschetz_trace, ricci_forms, riemannian_scalar,
    third_scalar_real,
};
use crate::frame::model::{FrameError, LieAlgebraModel};
use crate::frame::torsion::{torsion_package, TorsionData};
use crate::linalg::Mat;

/// Squared norms in the conventions used throughout: TM-valued 2-forms carry
/// the 1/2! normalization, 3-forms the 1/3! one.
#[derive(Debug, Clone, Serialize)]
pub struct Norms {
    pub torsion2: f64,
    pub t_form2: f64,
    pub theta2: f64,
    pub nijenhuis2: f64,
    pub df2: f64,
    pub dcf2: f64,
    pub dcf20_2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityResiduals {
    /// s^C − s against its torsion expression.
    pub chern_vs_third: f64,
    /// 2s − s^g against its torsion expression.
    pub third_vs_riemannian: f64,
    /// s^H − s^g against its torsion expression.
    pub hermitian_vs_riemannian: f64,
    /// 9|t|² − |T|² − Σ T_ijk T_jki.
    pub torsion_norm_contraction: f64,
    /// |T|² − (9/2)|t|² − |N|² − ½|(d^cF)^{2,0}|², dimension 4 only.
    pub dim4_torsion_split: Option<f64>,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.chern_vs_third
            .max(self.third_vs_riemannian)
            .max(self.hermitian_vs_riemannian)
            .max(self.torsion_norm_contraction)
            .max(self.dim4_torsion_split.unwrap_or(0.0))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarReport {
    pub name: String,
    pub dim: usize,
    pub s_chern: f64,
    /// s^H = 2 s^C by definition.
    pub s_hermitian: f64,
    pub s_third: f64,
    pub s_riemannian: f64,
    pub delta_theta: f64,
    pub norms: Norms,
    /// Σ T_ijk T_jki, the contraction appearing in the norm identity.
    pub torsion_cross: f64,
    pub residuals: IdentityResiduals,
    /// |s^C(real-frame route) − s^C(complex-component route)|.
    pub chern_scalar_cross_residual: f64,
    /// s^g ≤ 2s ≤ s^H (almost Kähler direction), with 1e−9 slack.
    pub almost_kaehler_chain: bool,
    /// s^H ≤ 2s ≤ s^g (nearly Kähler direction), with 1e−9 slack.
    pub nearly_kaehler_chain: bool,
    pub ricci_first: Vec<Vec<f64>>,
    pub ricci_second: Vec<Vec<f64>>,
    pub ricci_third: Vec<Vec<f64>>,
}

fn mat_rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.rows)
        .map(|i| (0..m.cols).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Residuals of the comparison identities, recomputed from a report's
/// scalar and norm data.
pub fn verify_identities(report: &ScalarReport) -> IdentityResiduals {
    identity_residuals(
        report.s_chern,
        report.s_third,
        report.s_riemannian,
        report.delta_theta,
        &report.norms,
        report.torsion_cross,
        report.dim,
    )
}

fn identity_residuals(
    s_chern: f64,
    s_third: f64,
    s_riemannian: f64,
    delta_theta: f64,
    norms: &Norms,
    torsion_cross: f64,
    dim: usize,
) -> IdentityResiduals {
    let t2 = norms.torsion2;
    let tf2 = norms.t_form2;
    let th2 = norms.theta2;
    let chern_vs_third =
        (s_chern - s_third - (0.5 * th2 + 0.5 * delta_theta - 4.5 * tf2 + 0.5 * t2)).abs();
    let third_vs_riemannian =
        (2.0 * s_third - s_riemannian - (t2 - 4.5 * tf2 - 2.0 * delta_theta - th2)).abs();
    let hermitian_vs_riemannian =
        (2.0 * s_chern - s_riemannian - (-delta_theta - 13.5 * tf2 + 2.0 * t2)).abs();
    let torsion_norm_contraction = (9.0 * tf2 - t2 - torsion_cross).abs();
    let dim4_torsion_split = if dim == 4 {
        Some((t2 - 4.5 * tf2 - norms.nijenhuis2 - 0.5 * norms.dcf20_2).abs())
    } else {
        None
    };
    IdentityResiduals {
        chern_vs_third,
        third_vs_riemannian,
        hermitian_vs_riemannian,
        torsion_norm_contraction,
        dim4_torsion_split,
    }
}

/// Full pipeline: adapted frame, both connections, torsion package, both
/// curvatures, Ricci forms, scalars, norms, and identity residuals.
pub fn compute_report(model: &LieAlgebraModel) -> Result<ScalarReport, FrameError> {
    let frame = model.adapted()?;
    let lc = levi_civita(&frame);
    let chern = chern_connection(&frame);
    let torsion = torsion_package(&frame, &chern);
    let r_chern = curvature(&frame, &chern);
    let r_lc = curvature(&frame, &lc);
    let (rho, second, sigma) = ricci_forms(&frame, &r_chern);

    let s_chern = lefschetz_trace(&frame, &rho);
    let s_hermitian = 2.0 * s_chern;
    let s_third = third_scalar_real(&r_chern);
    let s_riemannian = riemannian_scalar(&r_lc);
    let chern_scalar_cross_residual = (s_chern - chern_scalar_complex(&frame, &r_chern)).abs();

    // δθ = Σ_i θ(D_{e_i} e_i), invariant codifferential over Levi-Civita
    let m = frame.dim;
    let mut delta_theta = 0.0;
    for i in 0..m {
        for k in 0..m {
            delta_theta += lc.g(i, i, k) * torsion.theta[k];
        }
    }

    let norms = Norms {
        torsion2: TorsionData::norm2_tm2(&torsion.t),
        t_form2: TorsionData::norm2_form3(&torsion.t_form),
        theta2: torsion.theta_norm2(),
        nijenhuis2: TorsionData::norm2_tm2(&torsion.nijenhuis),
        df2: TorsionData::norm2_form3(&torsion.df),
        dcf2: TorsionData::norm2_form3(&torsion.dcf),
        dcf20_2: TorsionData::norm2_tm2(&torsion.dcf20),
    };
    let torsion_cross = torsion.torsion_cross_contraction();
    let residuals = identity_residuals(
        s_chern,
        s_third,
        s_riemannian,
        delta_theta,
        &norms,
        torsion_cross,
        m,
    );

    let scale = s_chern
        .abs()
        .max(s_third.abs())
        .max(s_riemannian.abs())
        .max(1.0);
    let slack = 1e-9 * scale;
    let almost_kaehler_chain =
        s_riemannian <= 2.0 * s_third + slack && 2.0 * s_third <= s_hermitian + slack;
    let nearly_kaehler_chain =
        s_hermitian <= 2.0 * s_third + slack && 2.0 * s_third <= s_riemannian + slack;

    Ok(ScalarReport {
        name: model.name.clone(),
        dim: m,
        s_chern,
        s_hermitian,
        s_third,
        s_riemannian,
        delta_theta,
        norms,
        torsion_cross,
        residuals,
        chern_scalar_cross_residual,
        almost_kaehler_chain,
        nearly_kaehler_chain,
        ricci_first: mat_rows(&rho),
        ricci_second: mat_rows(&second),
        ricci_third: mat_rows(&sigma),
    })
}

/// Report of the rescaled structure g̃ = e^{2κ}g, recomputed from scratch on
/// the scaled model. All scalars obey s̃ = e^{−2κ}s.
pub fn conformal_scale_constant(
    model: &LieAlgebraModel,
    kappa: f64,
) -> Result<ScalarReport, FrameError> {
    compute_report(&model.scaled(kappa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::builtin::{builtin_model, builtin_model_names};

    fn report(name: &str) -> ScalarReport {
        compute_report(&LieAlgebraModel::from_json(builtin_model(name).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn flat_torus_all_scalars_zero() {
        let r = report("torus4");
        assert!(r.s_chern.abs() < 1e-14);
        assert!(r.s_hermitian.abs() < 1e-14);
        assert!(r.s_third.abs() < 1e-14);
        assert!(r.s_riemannian.abs() < 1e-14);
    }

    #[test]
    fn identity_residuals_small_on_corpus() {
        for name in builtin_model_names() {
            let r = report(name);
            assert!(r.residuals.max() < 1e-9, "{name}: {:?}", r.residuals);
            assert!(r.chern_scalar_cross_residual < 1e-10, "{name}");
        }
    }

    #[test]
    fn kodaira_thurston_gap_identities() {
        let r = report("kodaira-thurston");
        let n2 = r.norms.nijenhuis2;
        assert!(n2 > 1e-4, "strictly non-Kähler");
        assert!((2.0 * r.s_third - r.s_riemannian - n2).abs() < 1e-10);
        assert!((r.s_hermitian - 2.0 * r.s_third - n2).abs() < 1e-10);
        assert!(r.almost_kaehler_chain);
        assert!(!r.nearly_kaehler_chain);
    }

    #[test]
    fn hopf_integrable_reductions() {
        // integrable: 9|t|² = |T|², and the reductions
        // 2s − s^g = ½|dF|² − 2δθ − |θ|², s^H − 2s = |θ|² + δθ.
        let r = report("hopf");
        assert!((9.0 * r.norms.t_form2 - r.norms.torsion2).abs() < 1e-10);
        let lhs = 2.0 * r.s_third - r.s_riemannian;
        let rhs = 0.5 * r.norms.df2 - 2.0 * r.delta_theta - r.norms.theta2;
        assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
        let lhs = r.s_hermitian - 2.0 * r.s_third;
        let rhs = r.norms.theta2 + r.delta_theta;
        assert!((lhs - rhs).abs() < 1e-9, "{lhs} vs {rhs}");
        // |(d^cF)^{2,0}|² = |dF|² in the integrable case
        assert!((r.norms.dcf20_2 - r.norms.df2).abs() < 1e-9);
    }

    #[test]
    fn nearly_kaehler_gap_identities() {
        let r = report("s3s3-nk");
        let g = r.norms.dcf2;
        assert!(g > 1e-3, "d^cF ≠ 0");
        assert!(
            (r.norms.dcf2 - r.norms.df2).abs() < 1e-10,
            "J-twist isometry"
        );
        assert!(
            (2.0 * r.s_third - r.s_riemannian + g / 6.0).abs() < 1e-9,
            "2s − s^g = −|d^cF|²/6: {} vs {}",
            2.0 * r.s_third - r.s_riemannian,
            -g / 6.0
        );
        assert!(
            (r.s_hermitian - 2.0 * r.s_third + 2.0 * g / 3.0).abs() < 1e-9,
            "s^H − 2s = −(2/3)|d^cF|²"
        );
        assert!(r.nearly_kaehler_chain);
        // strictness
        assert!(r.s_hermitian < 2.0 * r.s_third - 1e-6);
        assert!(2.0 * r.s_third < r.s_riemannian - 1e-6);
    }

    #[test]
    fn verify_identities_matches_stored_residuals() {
        for name in builtin_model_names() {
            let r = report(name);
            let again = verify_identities(&r);
            assert_eq!(again.chern_vs_third, r.residuals.chern_vs_third);
            assert_eq!(again.third_vs_riemannian, r.residuals.third_vs_riemannian);
            assert_eq!(
                again.hermitian_vs_riemannian,
                r.residuals.hermitian_vs_riemannian
            );
            assert_eq!(again.dim4_torsion_split, r.residuals.dim4_torsion_split);
        }
    }

    #[test]
    fn conformal_scaling_of_scalars_and_norms() {
        let model = LieAlgebraModel::from_json(builtin_model("kodaira-thurston").unwrap()).unwrap();
        let base = compute_report(&model).unwrap();
        let kappa = std::f64::consts::LN_2;
        let scaled = conformal_scale_constant(&model, kappa).unwrap();
        let factor = (-2.0 * kappa).exp(); // = 1/4
        for (a, b) in [
            (scaled.s_chern, base.s_chern),
            (scaled.s_third, base.s_third),
            (scaled.s_riemannian, base.s_riemannian),
            (scaled.s_hermitian, base.s_hermitian),
        ] {
            assert!((a - factor * b).abs() < 1e-10, "{a} vs {}", factor * b);
        }
        assert!(
            (scaled.norms.nijenhuis2 - factor * base.norms.nijenhuis2).abs() < 1e-10,
            "|N|² scales like e^{{−2κ}}"
        );
        // κ = 0 is the identity
        let same = conformal_scale_constant(&model, 0.0).unwrap();
        assert!((same.s_chern - base.s_chern).abs() < 1e-12);
    }
}
