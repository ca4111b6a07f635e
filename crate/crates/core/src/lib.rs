pub mod channels;
pub mod cli;
pub mod depol;
pub mod error;
pub mod export;
pub mod qnum;
pub mod region;
pub mod verify;

pub use error::{Error, Result};
