pub mod angle;
pub mod antirational;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod mating;
pub mod group;
pub mod packing;
pub mod poly;
pub mod scalar;

pub use error::{Error, GraphError, GroupError, PackingError};
pub use graph::{GraphClassification, GraphDocument, PlaneGraph};
pub use group::{KissingGroup, Word};
pub use packing::CirclePacking;
pub use angle::{Angle, Lamination, Leaf};
pub use antirational::AntiRationalMap;
pub use error::{AngleError, MapError, MatingError};

pub type Circle = geometry::Circle<f64>;
pub type Circle32 = geometry::Circle<f32>;
pub type SpherePoint = geometry::SpherePoint<f64>;
pub type SpherePoint32 = geometry::SpherePoint<f32>;
pub type Mobius = geometry::Mobius<f64>;
pub type AntiMobius = geometry::AntiMobius<f64>;
pub type Isometry = geometry::Isometry<f64>;
pub type Form = poly::CoefficientForm<f64>;
