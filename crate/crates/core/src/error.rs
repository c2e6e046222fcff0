// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent input (unknown letters, bad indices, ...).
    #[error("input error: {0}")]
    Input(String),

    /// A JSON document does not match the expected shape.
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    /// A JSON document is well-shaped but refers to something undeclared.
    #[error("integrity error at {path}: {message}")]
    Integrity { path: String, message: String },

    /// An exploration or enumeration outgrew its configured cap.
    #[error("resource limit: {what} exceeded the cap of {cap}")]
    Resource { what: String, cap: usize },

    /// A translation that needs a function met a relation.
    #[error("nondeterminism: {0}")]
    Nondeterminism(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn resource(what: impl Into<String>, cap: usize) -> Self {
        Error::Resource {
            what: what.into(),
            cap,
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}
