pub mod algebra;
pub mod engines;
pub mod error;
pub mod gen;
pub mod model;
pub mod pipeline;
pub mod verify;
