//! The single sign/ordering configuration shared by every module.
//!
//! No operation accepts a per-call override of these values; the
//! calibration suite checks all downstream identities against this one set.

use serde::Serialize;

/// Sign `s` in `x_i * xi_i - xi_i * x_i = s t`.
pub const MOYAL_SIGN: i64 = 1;

/// Order of the symplectic coordinates fed into the fundamental class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoordinateOrder {
    /// `x_1, ..., x_d, xi_1, ..., xi_d`
    Block,
    /// `xi_1, x_1, xi_2, x_2, ...`
    MomentumFirstPairs,
}

pub const FUNDAMENTAL_ORDER: CoordinateOrder = CoordinateOrder::MomentumFirstPairs;

/// Overall sign of the chain-level extension of an algebra differential.
/// `-1` means slot 0 contributes `-(delta a_0) ⊗ ...`.
pub const CHAIN_DELTA_SIGN: i64 = -1;

/// Sign of the `c_1`-insertion term in the differential of the
/// `c_1`/`theta`-extended complex.
pub const EXTENDED_INSERTION_SIGN: i64 = -1;

#[derive(Clone, Debug, Serialize)]
pub struct ConventionReport {
    pub moyal_sign: i64,
    pub fundamental_order: CoordinateOrder,
    pub chain_delta_sign: i64,
    pub extended_insertion_sign: i64,
}

pub fn active() -> ConventionReport {
    ConventionReport {
        moyal_sign: MOYAL_SIGN,
        fundamental_order: FUNDAMENTAL_ORDER,
        chain_delta_sign: CHAIN_DELTA_SIGN,
        extended_insertion_sign: EXTENDED_INSERTION_SIGN,
    }
}
