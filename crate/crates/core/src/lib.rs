//! Exact symbolic engine for the derived KZ connection, the KZ-Chevalley
//! complex, logarithmic forms on discriminantal arrangements and the derived
//! Gauss-Manin filtration.

pub mod scalars;
pub mod liealg;
pub mod chevalley;
pub mod logforms;
pub mod connections;
pub mod oracle;
