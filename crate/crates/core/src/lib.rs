//! Fractional k-positivity: admissible vectors at a real level `α ∈ [1, d]`,
//! the cones they generate, their thresholds on the depolarizing ray and
//! the isotropic slice, and constructive counterexamples.
//!
//! ```
//! use fracpos::{t_star, f_d, FractionalLevel};
//!
//! let level = FractionalLevel::new(1.5, 3)?;
//! assert!((t_star(&level) - 5.0 / 9.0).abs() < 1e-15);
//! assert!((f_d(3, &level) - 0.6).abs() < 1e-15);
//! # Ok::<(), fracpos::Error>(())
//! ```

pub mod admissibility;
pub mod choi;
pub mod cones;
pub mod counterexamples;
pub mod error;
pub mod json;
pub mod linalg;
pub mod oracles;
pub mod sample;
pub mod thresholds;

pub use admissibility::{
    extremal_vector, is_admissible_matrix, is_admissible_vector, ky_fan_ratio, ky_fan_ratio_check,
    strict_inclusion_pair, AdmissibilityReport, FractionalLevel,
};
pub use choi::{
    choi_depolarizing, choi_from_action, choi_from_kraus, choi_postcompose, choi_to_kraus, omega, p_omega,
    verify_fractional_kraus, ChoiMatrix, HermitianOperator, KrausCertificate, KrausList,
};
pub use cones::{
    isotropic_bp_membership, isotropic_k_membership, lambda_depolarizing_closed_form, lambda_numeric,
    mu_alpha_pomega, twirl_isotropic, witness_operator, IsotropicCoefficients, LambdaConfig, LambdaEstimate,
};
pub use counterexamples::{demo_cp_failure, demo_strict_inclusion, CpFailureCertificate, StrictInclusionReport};
pub use error::{Error, Result};
pub use linalg::{BipartiteDims, BipartiteVector, CMatrix, CVector, SchmidtSpectrum};
pub use oracles::{lambda_bruteforce_2x2, max_overlap_bruteforce, GridSpec};
pub use thresholds::{f_d, fsn_isotropic, profile_sweep, t_star, tau_depolarizing, ThresholdProfile};

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/levels.md")]
    pub mod levels {}
    #[doc = include_str!("../../../book/src/maps.md")]
    pub mod maps {}
    #[doc = include_str!("../../../book/src/thresholds.md")]
    pub mod thresholds {}
    #[doc = include_str!("../../../book/src/cones.md")]
    pub mod cones {}
    #[doc = include_str!("../../../book/src/lambda.md")]
    pub mod lambda {}
    #[doc = include_str!("../../../book/src/counterexamples.md")]
    pub mod counterexamples {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
