//! Root tuples, circumferences and heights of admissible solutions, and the
//! enumeration over moduli dividing 56 or 72.

mod candidate;
mod enumerate;
mod tuple;

pub use candidate::{
    chain_lengths, check_asymmetric, check_symmetric, circumference_ratios, compute_s, evaluate_asymmetric, evaluate_symmetric,
    thetas, verify_relations, Candidate, ChainAudit, Reason, Verdict,
};
pub use enumerate::{enumerate_candidates, run_order_scan, scan_moduli, ModulusReport, OrderScan, TupleVerdict, EXPECTED_MODULI};
pub use tuple::{cross_sum, cross_sums, RootTuple};
