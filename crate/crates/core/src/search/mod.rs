//! Packing search, tour search and the restart driver.

mod clock;
mod kps;
mod tsps;
mod ttps;

pub use clock::{Clock, ClockKind, TICKS_PER_MS};
pub use kps::{kps, kps_sas, kps_sas_with_temperature, kps_with_state, segment_items, ItemSelector, SAS_COOLING, SAS_FROZEN};
pub use tsps::{continue_passes, tsps, Coordination};
pub use ttps::{ttps, ttps_with, KpsMode, SearchConfig, SearchStats, Solution, TimelinePoint, TrainingSummary};
