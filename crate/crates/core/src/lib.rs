pub mod analysis;
pub mod catalog;
pub mod dsl;
pub mod geometry;
pub mod immersion;
pub mod jets;
pub mod tensor;
