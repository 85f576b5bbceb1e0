//! Dilogarithm, Clausen function, branch-tracked log line integrals, and the
//! membrane integral giving the limit Abel–Jacobi value.

mod dilog;
mod membrane;
mod quad;

use num::complex::Complex64;

pub use dilog::{
    accept_sample, bernoulli, check_functional_equations, clausen, clog, dilog, fe1_residual,
    fe2_residual, mu_complex, FunctionalEquationReport, CUT_MARGIN, ZETA2,
};
pub use membrane::{
    log_antiderivative, log_line_integral, log_line_integral_from, log_line_integral_quadrature,
    membrane_integral, membrane_quadrature, Edge, Membrane, MembraneIntegral, Mobius, Segment,
    PATH_CLEARANCE,
};
pub use quad::{integrate, integrate_2d, QuadOptions};

use crate::arrangement::tempered_arrangement;
use crate::error::Result;

/// AJ = −(3(Li₂(−μ) − conj Li₂(−μ)) + ζ(2)) = −(6i·Im Li₂(−μ) + π²/6).
/// The membrane integral over the tempered triangle equals −AJ.
pub fn aj_closed_form() -> Complex64 {
    let li = dilog(-mu_complex());
    -(3.0 * (li - li.conj()) + ZETA2)
}

/// The boundary of δ_{4,123} on the plane L_4 of the tempered arrangement.
pub fn tempered_membrane() -> Result<Membrane> {
    Membrane::klm_chain(&tempered_arrangement(), 4, 1, 2, 3)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests;
