//! Regular elementary abelian subgroups of order p³ inside the transitive
//! p-groups Γ(I_k) acting on the p³ points α x^i y^j of F_p[x, y]/(x^p - 1, y^p - 1).
//!
//! - [`fpring`]: arithmetic in F_p and the group algebra, echelon subspaces and the ideals I_k.
//! - [`permrep`]: the permutations σ_f, τ_x, τ_y, t_{g,x} and small group-theoretic predicates.
//! - [`census`]: canonical parameters (g, h) of the regular subgroups and the counting report.
//! - [`conj`]: the conjugation action on parameters, orbit counts, bounds, and the brute-force oracle.
//! - [`suite`]: the named verification checks run by `regsub verify`.

pub mod census;
pub mod conj;
pub mod error;
pub mod fpring;
pub mod permrep;
pub mod suite;

pub use error::{Error, Result};
pub use fpring::{Context, FpScalar, IdealBasis, RingElem};
