pub mod cli;
pub mod corpus;
pub mod error;
pub mod gamma_geom;
pub mod interplay;
pub mod io;
pub mod joint_spectrum;
pub mod numerics;
pub mod op_theory;
pub mod variety;
pub mod vn_check;

pub use error::{Error, Result};
