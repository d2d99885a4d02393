//! Equivariant chain complexes over `Q[a]`, their decomposition into elementary
//! pieces, and the spectral sequences and exact couples they produce.

pub mod algebra;
pub mod complex;
pub mod corpus;
pub mod couple;
pub mod decomposition;
pub mod frontend;
pub mod json;
pub mod recovery;
pub mod spectral;
pub mod verify;
