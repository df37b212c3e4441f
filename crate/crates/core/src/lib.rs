//! Energy-minimizing deadline scheduling on parallel processors with
//! power-down.
//!
//! Jobs have integer release times, deadlines and volumes and may be
//! preempted and migrated freely. A processor costs one unit per slot while on
//! and `q` per wake-up. [`pltr::run`] computes per-slot processor bounds with
//! the parallel left-to-right greedy, [`schedule_build::realize`] turns them
//! into a schedule, and [`oracle`] provides brute-force optima to compare
//! against on small instances.
//!
//! ```
//! use pltr_core::model::{compute_cost, Instance, Job};
//! use pltr_core::{pltr, schedule_build};
//!
//! let instance = Instance::new(vec![Job::new("j1", 0, 4, 2)], 1, 2).unwrap();
//! let result = pltr::run(&instance).unwrap();
//! let schedule = schedule_build::realize(&instance, &result.final_bounds).unwrap();
//! assert_eq!(schedule.job_slots(0), vec![3, 4]);
//! assert_eq!(compute_cost(&schedule, instance.q()).total, 4);
//! ```

pub mod error;
pub mod flow;
pub mod gantt;
pub mod generate;
pub mod io;
pub mod model;
pub mod oracle;
pub mod pltr;
pub mod schedule_build;
pub mod search;
pub mod volume;

pub use error::{Error, Result};
