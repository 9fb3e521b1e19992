use super::context::FormalContext;
use crate::error::Result;
use crate::scaling::{check_layout, SymbolicView};

/// Drops the complement attributes `n̄_1..n̄_h`, keeping `n_1..n_h`.
pub fn positive_part(ctx: &FormalContext) -> Result<FormalContext> {
    let h = check_layout(ctx)?;
    ctx.select_attributes(&(0..h).collect::<Vec<_>>())
}

/// `(object context, class context)` restricted to the positive neuron attributes.
pub fn restrict_to_positive(sv: &SymbolicView) -> Result<(FormalContext, FormalContext)> {
    Ok((positive_part(&sv.object_context)?, positive_part(&sv.class_context)?))
}
