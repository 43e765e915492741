//! Moment maps, Kempf-Ness functions and momentum polytopes for diagonal
//! torus actions on complex projective space.

pub mod error;
pub mod hull;
pub mod kempfness;
pub mod linalg;
pub mod measures;
mod newton;
pub mod orbitgeom;
pub mod rational;
pub mod report;
mod sampling;
pub mod scalar;
pub mod tolerances;
pub mod weights;

pub use error::{Error, Result};
pub use hull::{Face, Membership, Polytope};
pub use kempfness::{KnEvaluation, PropertyReport};
pub use measures::DiscreteMeasure;
pub use orbitgeom::{CriticalData, DensityReport, FlowResult, InversionResult, SampleSpace};
pub use rational::{Rational, RationalVec};
pub use report::InvariantCheck;
pub use scalar::Real;
pub use weights::{ProjPoint, StabilizerAlgebra, Subalgebra, WeightSystem};

/// Concrete aliases at the default `f64` precision.
pub type ProjPoint64 = weights::ProjPoint<f64>;
pub type DiscreteMeasure64 = measures::DiscreteMeasure<f64>;
pub type KnEvaluation64 = kempfness::KnEvaluation<f64>;
pub type FlowResult64 = orbitgeom::FlowResult<f64>;
