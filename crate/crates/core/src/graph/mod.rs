//! Graphs: CW graphs, (𝒜,n)-graphs with wedge cycles, collapsed graphs, marked
//! metric points, dimension counts and enumeration of maximal shapes.

pub mod agraph;
pub mod cw;
pub mod dims;
pub mod enumerate;
pub mod point;

pub use agraph::{AGraph, Clause, CollapsedGraph, ValidationReport, WedgeCycle};
pub use cw::{CWGraph, Edge, EdgeRef, SpanningTree};
pub use dims::{dimension_report, DimensionReport};
pub use enumerate::{enumerate_maximal, Budget, Enumeration, Shape};
pub use point::{Lengths, MarkedMetricAGraph};
