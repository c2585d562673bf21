pub mod cli;
pub mod critical;
pub mod error;
pub mod flowcc;
pub mod geometry;
pub mod jacobian;
pub mod ks333;
pub mod linalg;
pub mod novikov;
pub mod potential;
pub mod tate;

pub use error::{Error, Result};
pub use novikov::{parse_q, q, qr, NovikovScalar, Q};
pub use tate::{Frame, Mono, TateSeries, Var};
