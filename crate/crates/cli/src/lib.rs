//! Scenario files, the shipped corpus and the battery runner behind the
//! `qharm` command.

pub mod corpus;
pub mod report;
pub mod run;
pub mod schema;

pub use report::{BatteryReport, Entry};
pub use run::{run, Options, Source};
pub use schema::{load_scenario, LoadError, ScenarioFile};
