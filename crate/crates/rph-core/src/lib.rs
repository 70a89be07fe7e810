//! Construction and analysis of the RPH family of ternary decagonal
//! quasiperiodic tilings.
//!
//! The crate builds tilings of a 36° rhombus (R), a regular pentagon (P)
//! and a barrel-shaped hexagon (H) by iterated point substitution:
//! expand by τ², decorate every vertex with a centred-decagon motif, then
//! eliminate excess candidates at the acute apexes of expanded rhombi
//! according to per-orientation chirality flags (wheel diagrams) or
//! per-rhombus random rules. On top of the generator sit
//! perpendicular-space window analytics, point-group classification,
//! tile/vertex statistics and simpleton-flip Monte Carlo dynamics.

pub mod bravais;
pub mod error;
pub mod flips;
pub mod golden;
pub mod gpsp;
pub mod io;
pub mod stats;
pub mod symmetry;
pub mod tiling;
pub mod window;

pub use bravais::Index4;
pub use error::{Error, Result};
pub use golden::{GoldenCoord, GoldenInt, GoldenScalar};
pub use gpsp::{RuleSource, Schedule, ScheduleEntry, WheelDiagram};
pub use tiling::{Face, FaceKind, Tiling};
