//! The square complex: corner completion, apartment tilings, min-sets and
//! their drawings.

mod corner;
mod minset;
mod render;
mod tile;

pub use corner::{Corner, CornerTable};
pub use minset::{minset_region, MinsetRegion};
pub use render::{Diagram, Edge, Format, Node};
pub use tile::{tile_apartment, TileGrid};
