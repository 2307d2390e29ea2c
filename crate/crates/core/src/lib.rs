//! Exact character tables of finite permutation groups.

pub(crate) mod chain;
pub mod brauer;
pub mod charstore;
pub mod character;
pub mod class_data;
pub mod cyclotomic;
pub mod error;
pub mod exec;
pub mod group;
pub mod groups;
pub mod hybrid;
pub mod lll;
pub mod oracle;
pub mod perm;
pub mod pgroup;
pub mod table;

pub use error::{Error, Result};
pub use group::PermGroup;
pub use perm::Permutation;
