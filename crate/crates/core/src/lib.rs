//! Travelling Thief Problem solver.
//!
//! A thief visits every city once on a cyclic tour and may collect items
//! into a rented knapsack whose load slows travel. The solver interleaves
//! tour search (2-opt) and packing search (bit flips) and, after each tour
//! move, repairs the collection plan with one of several coordination
//! heuristics so that tour moves are judged together with a plan that suits
//! them.
//!
//! Module map:
//! - [`instance`], [`tour`], [`plan`], [`eval`]: data model and exact or
//!   incremental objective evaluation.
//! - [`io`]: benchmark instance files and solution records.
//! - [`construct`]: initial tours, neighbour lists, constructive packing.
//! - [`coordination`]: profitability trend lines and the NOCH, SGCH, PGCH
//!   coordination functions plus marginal item selection.
//! - [`learning`]: the classifier behind LGCH and its boundary ratio table.
//! - [`search`]: packing search, tour search and the restart driver.
//! - [`harness`]: experiments, RDI, exhaustive oracle, instance generation.

pub mod construct;
pub mod coordination;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod harness;
pub mod instance;
pub mod io;
pub mod learning;
pub mod plan;
pub mod search;
pub mod tour;

pub use error::{Result, TtpError};
pub use eval::{evaluate, EvalState};
pub use instance::{CityId, Instance, InstanceSpec, Item, ItemId, Metric};
pub use plan::CollectionPlan;
pub use tour::Tour;
