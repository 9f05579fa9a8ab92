//! Exact arithmetic: rationals, real algebraic numbers, polynomials over a
//! generic field, rational functions, root isolation and the monomial order.

pub mod algebraic;
pub mod field;
pub mod mpoly;
pub mod order;
pub mod parampoly;
pub mod parse;
pub mod ratfunc;
pub mod rational;
pub mod roots;
pub mod upoly;

pub use algebraic::AlgebraicReal;
pub use field::Field;
pub use mpoly::MPoly;
pub use order::{monomial_order, precedes, sigma, sigma_inv, OrderIndex};
pub use parampoly::ParamPoly;
pub use parse::parse_qpoly;
pub use ratfunc::{QPoly, RatFunc};
pub use rational::Rational;
pub use roots::{root_isolate, SturmSequence};
pub use upoly::UPoly;
