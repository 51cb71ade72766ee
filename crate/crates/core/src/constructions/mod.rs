//! Concrete objects: Singer covers, the split Cayley hexagon, the field-reduction
//! spread bundle, and the self-polar simplex tight sets.

pub mod singer;
pub mod spread;
pub mod hexagon;
pub mod dye;
pub mod simplex;
