//! Formal solutions at the irregular singular point at infinity.

pub mod hille;
pub mod newton;
pub mod parts;
pub mod roots;
pub mod series;
pub mod solution;
pub mod wronskian;

pub use hille::{hille_second_order, CriticalRayData};
pub use newton::{conjugate_by_exp, exponential_parts, ApproxPart, ExpParts};
pub use parts::{abel_defect_approx, check_abel, classify_parts_on_ray, shifted_parts, ExpPart, RayClass};
pub use series::PSeries;
pub use solution::{formal_solution, solution_residual, FormalSol, Residual, DEFAULT_TRUNC};
pub use wronskian::{formal_wronskian, wronskian_leading};
