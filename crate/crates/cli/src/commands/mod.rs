pub mod density;
pub mod gaussian;
pub mod multi;
pub mod pair;
pub mod sample;
