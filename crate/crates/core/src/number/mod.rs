//! Exact and certified-numeric coefficient arithmetic.

pub mod ball;
pub mod coeff;
pub mod dyadic;
pub mod gauss;
pub mod unipoly;

pub use ball::{ComplexBall, ZeroTest};
pub use coeff::Coefficient;
pub use dyadic::Dyadic;
pub use gauss::GaussRat;
pub use unipoly::{Root, UniPoly};
