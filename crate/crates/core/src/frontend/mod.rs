//! Complexes coming from links: the closed 2-braid family for general `N`, and
//! a cube of resolutions for `N = 2`.

pub mod delta;
pub mod pd;
pub mod sl2;
pub mod twobraid;

pub use delta::{delta_battery, DeltaReport};
pub use pd::{Crossing, LinkDiagram, PdError};
pub use sl2::{build_sl2_cube, Sl2Potential};
pub use twobraid::{build_twobraid, build_twobraid_unreduced, TwoBraidSpec};
