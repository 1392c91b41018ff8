//! Descriptive statistics of a deleted-question corpus.
//!
//! Every operation here is a pure function of immutable inputs and produces
//! a plot-ready table; [`report`] serializes the tables to a fixed set of
//! CSV files. Identical inputs yield byte-identical reports.

mod distribution;
mod edits;
mod initiator;
mod quality;
pub mod report;
mod tags;
mod temporal;
mod undelete;
mod votes;

pub use distribution::{LatencyDistribution, SampleDistribution};
pub use edits::{edit_summary, parse_close_reason, CloseReason, CloseReasonCounts, PartitionEditStats};
pub use initiator::{initiator_comparison, AttributeDistributions, ComparisonInputs, ComparisonReport};
pub use quality::{quality_indicators, QualityIndicators};
pub use tags::{tag_algebra, TagAlgebraReport, TagRegions};
pub use temporal::{cumulative_deleted, monthly_deletion_ratio, Month, TimeSeriesRow};
pub use undelete::{undelete_latency, UndeleteReport};
pub use votes::{delete_vote_histogram, first_delete_vote_latency, VoteBucket, VoteHistogram, VoteLatencyReport};
