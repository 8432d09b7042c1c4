//! Toric fans of iterated blowups of projective space, Klyachko filtrations,
//! equivariant Chern data, and the compilation of rank-three moduli
//! conditions into point/line incidence equations, checked against direct
//! enumeration of incidence schemes over small prime fields.

pub mod chern;
pub mod divisor;
pub mod error;
pub mod exact;
pub mod fan;
pub mod incidence;
pub mod io;
pub mod klyachko;
pub mod moduli;
pub mod murphy_fan;
pub mod poly;

pub use error::{Error, Result};
