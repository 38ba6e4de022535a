pub mod analysis;
pub mod classify;
pub mod concordance;
pub mod curvature;
pub mod exec;
pub mod exprparse;
pub mod geodesic;
pub mod symcore;
pub mod tables;
pub mod walker;
