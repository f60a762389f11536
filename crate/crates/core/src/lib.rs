pub mod cli;
pub mod dmod;
pub mod error;
pub mod foliation;
pub mod hyperbolic;
pub mod liecalc;
pub mod linalg;
pub mod par;
pub mod planar;
pub mod poly;
pub mod sample;

pub use error::{Error, Result};
