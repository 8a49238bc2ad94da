#![allow(clippy::needless_range_loop)]

pub mod corpus;
pub mod coxeter;
pub mod field;
pub mod io;
pub mod matrix;
pub mod quiver;
pub mod reflection;
pub mod rep;
pub mod roots;
pub mod selftest;
pub mod serre;
