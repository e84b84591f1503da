//! Library half of the `crumby` binary: graph specifier parsing and the
//! reproduction suite, shared between the binary and the acceptance tests.

pub mod graphspec;
pub mod repro;
