//! Weighted isoperimetric profiles on the hyperbolic disc for radial
//! log-convex densities, with numerical checks of the comparison inequalities
//! behind the minimality of centred balls.

pub mod comparison;
pub mod competitors;
pub mod curvature_ode;
pub mod density;
pub mod error;
pub mod invariants;
pub mod numerics;
pub mod profile;
pub mod report;

pub use comparison::DistributionFunction;
pub use curvature_ode::{BvpSolution, Eta, RiccatiSolution};
pub use density::{DensitySpec, Side};
pub use error::{Error, Result};
pub use profile::{AnnulusUnion, CapSymmetricProfile, Competitor, Profile};
pub use report::{Check, Verdict, VerificationReport};
