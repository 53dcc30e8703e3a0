//! Constructions between probabilistic and classical ω-automata.

mod breakpoint;
mod embed;
pub mod gadgets;
mod threshold;
mod weak;

pub use breakpoint::{almost_sure_to_dba, AlmostSureMode};
pub use embed::{dba_to_pba, ldba_to_pba, parity_to_unambiguous_ldba, positive_to_nba, positive_to_threshold};
pub use threshold::{
    compute_epsilon, compute_value_set, threshold_to_gnba, threshold_to_gnba_unchecked, EpsilonLadder, TupleValue,
};
pub use weak::{complement_pwa, pca_to_pwa, pfa_to_pwa_value1};

use crate::error::{Error, Result};
use crate::rational::Rational;
use num_traits::{One, Zero};

pub(crate) fn check_threshold(lambda: &Rational) -> Result<()> {
    if lambda > &Rational::zero() && lambda < &Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidThreshold(lambda.clone()))
    }
}
