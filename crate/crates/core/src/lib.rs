pub mod cats;
pub mod cli;
pub mod dynamics;
pub mod gaussian;
pub mod grid;
pub mod hermite;
pub mod linalg;
pub mod ode;
pub mod parametric;
pub mod tomography;
pub mod units;
pub mod verify;
