//! Point counts on X_λ^d : x_1^d + … + x_d^d = dλ x_1⋯x_d and the checks built on them.

mod general;
mod k3;
mod koblitz;
mod naive;
mod period;
pub mod verify;

pub use general::{count_general_greene, GeneralGreene};
pub use k3::{count_k3_greene, count_k3_padic, trace_frobenius_k3, K3Greene, K3Padic};
pub use koblitz::{coset_labels, coset_term, count_koblitz, n0_term, CosetLabel, KoblitzCount, KoblitzEvaluator, N0Term};
pub use naive::{count_naive, count_naive_with_budget, DEFAULT_NAIVE_BUDGET};
pub use period::period_value;

use crate::error::{Error, Result};
use crate::finite_field::{FieldContext, FieldElement};

#[derive(Clone, Copy, Debug)]
pub struct DworkParams<'a> {
    pub ctx: &'a FieldContext,
    pub d: u32,
    pub lambda: &'a FieldElement,
}

impl<'a> DworkParams<'a> {
    pub fn new(ctx: &'a FieldContext, d: u32, lambda: &'a FieldElement) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("degree d = {d} must be at least 2")));
        }
        Ok(DworkParams { ctx, d, lambda })
    }

    pub fn lambda_idx(&self) -> u32 {
        self.ctx.index(self.lambda)
    }
}

/// Character-sum formulas need q ≡ 1 (mod d).
pub(crate) fn require_split(ctx: &FieldContext, d: u32) -> Result<u64> {
    if d < 2 || ctx.n() % d as u64 != 0 {
        return Err(Error::Domain(format!("q = {} is not 1 mod d = {d}", ctx.q())));
    }
    Ok(ctx.n() / d as u64)
}

pub(crate) fn require_nonzero(lambda: u32) -> Result<()> {
    if lambda == 0 {
        return Err(Error::Domain("λ = 0 is excluded".into()));
    }
    Ok(())
}

/// (q^{m} - 1)/(q - 1) = 1 + q + … + q^{m-1}.
pub(crate) fn projective_count(q: u64, m: u32) -> i128 {
    (0..m).map(|i| (q as i128).pow(i)).sum()
}
