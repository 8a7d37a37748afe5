pub mod actions;
pub mod builder;
pub mod classd;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod perms;
pub mod structure;
pub mod witness;

pub use error::{Error, Result};
