//! Exact computations around the weight 3/2 mock Eisenstein series
//! `E_{3/2} = 1 - 12 sum H(n) q^n` and its p-adic completion.
//!
//! * [`numtheory`]: factorization, Kronecker symbol, Bernoulli numbers, L-values.
//! * [`qseries`]: sparse truncated q-expansions and their residues mod `p^l`.
//! * [`eisenstein`]: Cohen Eisenstein series, Hurwitz class numbers, Koblitz checks.
//! * [`padic`]: residues, Teichmuller lifts, Kubota-Leopoldt special values and
//!   the intermediate congruences of the completion argument.
//! * [`completion`]: correction coefficients `a_m` and the completion verifier.
//! * [`cache`]: on-disk Bernoulli cache used by the command line tool.

pub mod cache;
pub mod certificate;
pub mod completion;
pub mod eisenstein;
pub mod error;
pub mod numtheory;
pub mod padic;
pub mod qseries;

pub use certificate::{CongruenceCertificate, Diff, Verdict};
pub use completion::{
    completed_series, correction_coefficient, difference_support, is_neg_square_mod,
    verify_completion, CorrectionRule, CorrectionSeries,
};
pub use eisenstein::{
    cohen_coefficient, cohen_series, hurwitz_forms, hurwitz_l, koblitz_congruence_check,
    koblitz_negative_control, zagier_series, HalfIntWeight, HurwitzValue,
};
pub use error::{Error, Result};
pub use numtheory::{QuadraticCharacter, Rational};
pub use qseries::{QExpansion, ResidueSeries};
