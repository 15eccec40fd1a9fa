//! Twist parameters: the rationality constraint on vertical moduli, elimination
//! of u, bounded integer solving, and the final classification.

mod case;
mod classify;
mod elim;
mod poly;
mod reverse;
mod solve;

pub use case::{build_case, dependence_lambda, primitive_direction, CaseData};
pub use classify::{
    absolute_t3, classify_all, classify_candidates, CandidateVerdict, ClassificationReport, DirectionReport, Survivor,
    VEECH_14GON,
};
pub use elim::{eliminate_u, AffineRelation, Elimination};
pub use poly::{rat_sqrt, PolyPQ, UPoly};
pub use reverse::{reverse_chain, same_chain};
pub use solve::{
    direct_route, floor_qs, integer_solutions, vertical_ratio, ConstraintBound, DirectHit, SolveReport, TwistSolution,
};
