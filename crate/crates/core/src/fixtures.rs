//! Bundled edge-list fixtures.

/// The 7-vertex worked example: two triangles sharing an edge, closed into a
/// loop through vertices 5 and 6, with a pendant vertex 7.
pub const EXAMPLE_EDGES: &str = include_str!("../fixtures/example.edges");
pub const C4_EDGES: &str = include_str!("../fixtures/c4.edges");
pub const C5_EDGES: &str = include_str!("../fixtures/c5.edges");
pub const C4_CHORD_EDGES: &str = include_str!("../fixtures/c4_chord.edges");
pub const K5_EDGES: &str = include_str!("../fixtures/k5.edges");
