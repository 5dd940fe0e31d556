pub mod cli;
pub mod commpoly;
pub mod error;
pub mod exactnum;
pub mod freepoly;
pub mod io;
pub mod lrs;
pub mod matrix;
pub mod reductions;
pub mod ring;
pub mod deciders;
pub mod spectra;

pub use error::{Error, Result};
