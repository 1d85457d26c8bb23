//! Discretized higher gauge theory for finite crossed modules.

pub mod assign;
pub mod catalog;
pub mod complex;
pub mod conn;
pub mod crossed_module;
pub mod double;
pub mod error;
pub mod format;
pub mod gauge;
pub mod group;
pub mod laws;
pub mod moduli;
pub mod rediscretize;
pub mod report;

pub use assign::Budget;
pub use complex::{Direction, Discretization, DiscretizationDef, EdgeWord, Step};
pub use conn::{Conn, ConnMorphism, ConnObject};
pub use crossed_module::{CrossedModule, CrossedModuleDef, GElem, HElem, Square};
pub use double::{DGSquare, DoubleGroupoid, VertMorphism};
pub use error::{Error, Result};
pub use gauge::{Gauge, GaugeMorphism, GaugeObject};
pub use group::{FiniteGroup, GroupDef};
pub use moduli::{EquivalenceMode, Example};
pub use rediscretize::{ChangeSpec, Script};
pub use report::{Issue, IssueClass, Report};
