//! Exact arithmetic in finite rings and construction of units by lifting
//! inverses from quotient rings along chains of nilpotent ideals.
//!
//! Supported rings are `Z_m`, the Gaussian integers `Z_{p^k}[i]`, Galois
//! rings `GR(p^k, r)`, and matrix and group rings over them (nested at most
//! twice). Everything runs without `std`; only `alloc` is required.
//!
//! ```
//! use unitlift_core::{CncChain, Element, Ring, lift_inverse};
//!
//! let z27 = Ring::zmod(27).unwrap();
//! let chain = CncChain::power(&z27, &Element::from_int(&z27, 3), 3, 3).unwrap();
//! let x = Element::from_int(&z27, 10);
//! let cert = lift_inverse(&x, &Element::one(&z27), &chain).unwrap();
//! assert_eq!(cert.inverse().coords(), &[19]);
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arith;
pub mod chain;
pub mod crt;
mod error;
pub mod group;
pub mod group_ring;
pub mod lift;
pub mod matrix;
pub mod oracle;
pub mod ring;

pub use chain::{
    lifting_exponent, make_power_chain, residue_map, validate_cnc, CncChain, ConditionResult, Ideal, LiftingExponent,
    ValidationReport,
};
pub use crt::{crt_combine, crt_split, CrtBasis, CrtComponent};
pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupSpec};
pub use group_ring::{
    chain_ring_units, count_group_ring_units, group_ring_mul, invert_zmg_crt, invert_zmg_radical, invert_zmg_unit,
    lift_inverse_group_ring, zmg_unit_count, ZmgCertificate,
};
pub use lift::{
    binomial_inverse, is_unit_via_quotient, lift_inverse, lift_inverse_commutative, power_reduction_witness,
    quotient_inverse, unit_class, UnitCertificate,
};
pub use matrix::{
    count_matrix_units, invert_matrix_crt, invert_matrix_prime_power, invert_mod_prime, mat_det, CrtInverse, ModMatrix,
    OpCount,
};
pub use oracle::{brute_inverse, enumerate_units, infer_indices, verify_cardinality, EnumerableRing};
pub use ring::{element_arithmetic, same_shape, ArithOp, Element, Ring, RingKind};
