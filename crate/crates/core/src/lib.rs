//! Fenchel-Nielsen coordinates on Teichmüller spaces of infinite-type surfaces.
//!
//! * [`hyptrig`]: right-angled hexagons, quadrilaterals and collar widths.
//! * [`holonomy`]: matrix representations of pants and X-pieces, curve lengths from
//!   traces, Dehn twists on words.
//! * [`surface`]: pants graphs (finite, ladder, flute) and base structures.
//! * [`coords`]: coordinate vectors, their sequence images, distances, classification.
//! * [`deform`]: twists, length changes, Dehn twists, the non-discreteness experiment.
//! * [`qc`]: dilatation of the collar twist map and related bounds.
//! * [`document`]: the JSON spec format.

pub mod coords;
pub mod deform;
pub mod document;
pub mod error;
pub mod exec;
pub mod holonomy;
pub mod hyptrig;
pub mod qc;
pub mod surface;

pub use error::{Error, Result};
pub use exec::Exec;
