//! Artin conductor exponents from ramification profiles.
//!
//! ```text
//! a(V) = dim V - dim V^I + Σ_{k≥1} dim(V / V^{I_k}) / [I : I_k]
//! ```
//!
//! Unramified twists fix every `V^{I_k}`, so nothing here takes a twist
//! parameter: the conductor of `V ⊗ ω_s` is the conductor of `V`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::model::{GaloisBlock, RamificationProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConductorError {
    #[error("conductor sum {0} is not an integer")]
    NonIntegralConductor(String),
    #[error("invalid ramification profile: {0}")]
    InvalidProfile(String),
    #[error("declared conductor {declared} disagrees with profile conductor {computed}")]
    ProfileMismatch { declared: u32, computed: u64 },
}

/// The conductor as an exact rational, before the integrality check.
pub fn conductor_sum(p: &RamificationProfile) -> BigRational {
    let dim = p.dim();
    let fixed = p.fixed_dims();
    let mut sum = BigRational::from_integer(BigInt::from(dim - fixed[0]));
    for (index, &fixed_k) in p.indices().iter().zip(&fixed[1..]) {
        sum += BigRational::new(BigInt::from(dim - fixed_k), BigInt::from(*index));
    }
    sum
}

pub fn artin_conductor(p: &RamificationProfile) -> Result<u64, ConductorError> {
    let sum = conductor_sum(p);
    if !sum.is_integer() {
        return Err(ConductorError::NonIntegralConductor(sum.to_string()));
    }
    // each term is nonnegative, so the sum is too
    debug_assert!(sum >= BigRational::zero());
    sum.to_integer()
        .to_u64()
        .ok_or_else(|| ConductorError::NonIntegralConductor(sum.to_string()))
}

/// `a(V)` for a block, recomputed from its profile when one is attached.
pub fn conductor_of_block(b: &GaloisBlock) -> Result<u32, ConductorError> {
    if let Some(p) = &b.profile {
        let computed = artin_conductor(p)?;
        if computed != u64::from(b.a) {
            return Err(ConductorError::ProfileMismatch {
                declared: b.a,
                computed,
            });
        }
    }
    Ok(b.a)
}
