use rand::Rng;
use serde::Serialize;

use super::{Context, Psa};
use crate::error::{Error, Result};
use crate::haar::rng_from_seed;
use crate::tolerance::Tolerances;

/// One draw of a context-relative random variable that marks exactly one
/// node true.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveValuation {
    pub context: Vec<usize>,
    /// Graph index of the node valued 1.
    pub selected: usize,
    pub seed: u64,
}

impl EffectiveValuation {
    pub fn value(&self, node: usize) -> u8 {
        u8::from(node == self.selected)
    }
}

/// Selects node `k` of `c` with probability `Ψ(P_k)`, after absorbing the
/// numerical slack of the context sum.
pub fn sample_effective_valuation(
    psa: &Psa<'_>,
    c: &Context,
    seed: u64,
    tol: &Tolerances,
) -> Result<EffectiveValuation> {
    if !c.resolves_identity || c.is_empty() {
        return Err(Error::Unsupported(
            "effective valuations need an identity-resolving context".into(),
        ));
    }
    let d = psa.graph().dim() as f64;
    let sum = psa.context_sum(c);
    if (sum - 1.0).abs() > d * tol.trace {
        return Err(Error::Validation(format!(
            "PSA values over the context sum to {sum}, expected 1 within {:.1e}",
            d * tol.trace
        )));
    }
    let u: f64 = rng_from_seed(seed).random::<f64>() * sum;
    let mut acc = 0.0;
    let mut selected = *c.nodes.last().expect("non-empty context");
    for &i in &c.nodes {
        acc += psa.value(i);
        if u < acc {
            selected = i;
            break;
        }
    }
    // a zero-potentia tail node can only be reached through rounding; skip it
    if psa.value(selected) == 0.0 {
        selected = *c.nodes.iter().rev().find(|&&i| psa.value(i) > 0.0).unwrap_or(&selected);
    }
    Ok(EffectiveValuation {
        context: c.nodes.clone(),
        selected,
        seed,
    })
}
