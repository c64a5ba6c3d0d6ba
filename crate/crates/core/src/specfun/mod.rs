//! Scalar special-function kernel: gamma machinery, Pochhammer symbols, and
//! terminating hypergeometric sums at unit argument.

pub(crate) mod dd;
mod gamma;
mod hyp;

pub use gamma::{
    gamma_abs_complex, gamma_ratio, is_gamma_pole, ln_abs_gamma_complex, ln_gamma_real,
    ln_gamma_signed_real,
};
pub(crate) use hyp::hyp3f2_conjugate_dd;
pub use hyp::{
    hyp3f2_conjugate_real, hyp3f2_terminating, hyp_pfq_terminating, kernel_sum_identity_check,
    pochhammer, pochhammer_complex, thomae_transform, Hyp3F2Params,
};
