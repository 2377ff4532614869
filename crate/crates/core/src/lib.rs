pub mod casimir;
pub mod catalog;
pub mod file;
pub mod graded;
pub mod invariants;
pub mod linalg;
pub mod quasihopf;
pub mod report;
pub mod representations;
pub mod scalars;
pub mod twisting;
pub mod uqsl2;
