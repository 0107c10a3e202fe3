use crate::arith::PrecisionContext;
use crate::error::{Error, Result};
use crate::forms::FourierExpansion;
use crate::periodpoly::{
    build_correction_p, build_eisenstein_family, build_q, build_r, parity_part, sigma_ss_formula, EisensteinFamily,
    LaurentPoly, Parity,
};

/// Families that need a form; the rest are determined by `k` and `m`.
pub const FORM_FAMILIES: [&str; 3] = ["r", "q", "sigma-ss"];

/// Builds a polynomial by family name.
///
/// `r`, `q` and `sigma-ss` read `form`; `correction-p` uses `(k, m)`, `p-m`
/// uses `m`, and the Bernoulli families use `k`.
pub fn build_family(
    family: &str,
    form: Option<&FourierExpansion>,
    k: u32,
    m: u32,
    parity: Option<&str>,
    ctx: &PrecisionContext,
) -> Result<LaurentPoly> {
    let need = || form.ok_or_else(|| Error::invalid(format!("family `{family}` needs a form")));
    let p = match family {
        "r" => build_r(need()?, ctx)?,
        "q" => build_q(need()?, m, ctx)?.with_family(format!("q-m{m}")),
        "sigma-ss" => sigma_ss_formula(need()?, m, ctx)?,
        "correction-p" => build_correction_p(k, m, ctx)?,
        "p-m" => build_eisenstein_family(EisensteinFamily::PM, m, ctx)?,
        other => build_eisenstein_family(EisensteinFamily::parse(other)?, k, ctx)?,
    };
    Ok(match parity {
        None => p,
        Some("odd") => parity_part(&p, Parity::Odd),
        Some("even") => parity_part(&p, Parity::Even),
        Some(other) => return Err(Error::invalid(format!("parity must be odd or even, got `{other}`"))),
    })
}
