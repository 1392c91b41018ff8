//! Toolkit for studying question deletion on Stack Exchange style Q&A sites.
//!
//! The pipeline has three stages, each usable on its own:
//!
//! 1. **Corpus reconstruction** — [`dump`] stream-parses data-dump files into
//!    typed records; [`snapshot`] builds per-snapshot question catalogs and
//!    recovers the deleted-question corpus by set difference against the most
//!    recent snapshot.
//! 2. **Characterization** — [`characterize`] computes the descriptive
//!    statistics of the corpus (deletion ratios over time, delete-vote
//!    latencies, initiator comparisons, quality indicators, tag algebra,
//!    edit histories, undeletion latencies) as plot-ready tables.
//! 3. **Prediction** — [`lexicon`] scores text against a pluggable category
//!    dictionary, [`features`] extracts the 47 creation-time features per
//!    question, and [`learn`] trains and evaluates an AdaBoost (SAMME.R)
//!    classifier over balanced samples of the corpus.
//!
//! The [`cli`] module wires the stages into reproducible, manifest-writing
//! commands; the `chaff` binary is a thin wrapper around it. [`synth`]
//! generates small synthetic dump corpora with known ground truth, used by
//! the test suite and the runnable examples.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod characterize;
mod util;
pub mod cli;
pub mod dump;
pub mod features;
pub mod learn;
pub mod lexicon;
pub mod snapshot;
pub mod synth;
