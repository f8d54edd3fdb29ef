//! Zero-delay second-order correlation `g²(0)` of single- and two-mode
//! Gaussian states, evaluated from the covariance matrix and first moments.
//!
//! The same quantity is reachable four ways, and they are kept in agreement:
//! closed forms for displaced squeezed thermal states ([`g2`]), the moment
//! pipeline through symmetrically ordered moments ([`moments`]), estimation
//! from homodyne samples ([`homodyne`], [`estimator`]) and a brute-force
//! truncated Fock-space computation ([`fock`]).
//!
//! ```
//! use std::f64::consts::PI;
//! use homodyne_g2::g2::{alpha_threshold_pi, g2_single_state};
//! use homodyne_g2::gaussian::SingleModeState;
//!
//! let state = SingleModeState::real(2.0, 0.5, PI, 0.14).unwrap();
//! assert!(g2_single_state(&state).unwrap().value < 1.0);
//! let th = alpha_threshold_pi(0.5, 0.14).unwrap();
//! assert!(th.alpha_th.unwrap() < 2.0);
//! ```

// `!(x >= min)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod estimator;
pub mod fock;
pub mod g2;
pub mod gaussian;
pub mod homodyne;
pub mod moments;
pub mod scan;

pub use error::{Error, Result};
pub use gaussian::{CovarianceMatrix, FirstMoments, SingleModeState, SqueezingParam, TwoModeState};
