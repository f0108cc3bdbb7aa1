pub mod algebras;
pub mod category;
pub mod crosscheck;
pub mod error;
pub mod io;
pub mod linalg;
pub mod localization;
pub mod monoid;
pub mod oracle;
pub mod quotient;
pub mod ring;
pub mod scheme;

pub use error::{Error, Result};
