pub mod catalog;
pub mod certify;
pub mod cli;
pub mod factor_set;
pub mod group;
pub mod patterns;
pub mod perm;
pub mod report;
pub mod repro;
pub mod search;
pub mod structure;
