//! Explicit graphs for the families of geometric distance-regular graphs
//! and a brute-force oracle for their structural properties.

pub mod families;
pub mod gf;
pub mod graph;
pub mod oracle;
