pub mod calculus;
pub mod independent;
pub mod linear;
pub mod rcf;
