//! Checks tying critical points to their fundamental operators: the
//! off-diagonal conditions, the polynomial form of the Bethe ansatz
//! equations, exponents, the quasi-polynomial flag and the auxiliary
//! Wronskian identities.

mod critical;
mod exponents;
mod flag;
mod ode;
mod offdiag;
mod wronskian;

pub use critical::{bae_polynomial, bae_remainders, is_critical_exact, operator_to_critical_point};
pub use exponents::{
    check_conjugated_exponents, check_exponents, ConjugatedReport, ExponentReport, EXPONENT_TOL,
};
pub use flag::{
    check_flag, check_tilde_identities, flag_witness, op_to_c64, tilde_report, FlagWitness,
    TildeReport, FLAG_TOL, PROBE_POINTS, SAMPLE_COUNT,
};
pub use ode::{integrate_segment, OdeOptions};
pub use offdiag::{check_coords_off_diagonal, check_off_diagonal, PolyTuple, ROOT_SEPARATION};
pub use wronskian::{wronskian, wronskian_rows, wronskian_scale};
