//! Experiment runner pieces used by the CLI: the trade-off and adversarial
//! experiments with CSV output, a seeded Markov test source, and a
//! sliding-window LZ77 baseline.

pub mod experiment;
pub mod lz77;
pub mod markov;

pub use experiment::{
    experiment_adversarial, experiment_tradeoff, fit_beta, write_csv, AdversarialReport,
    ExperimentRow, GrowthStep, TradeoffReport,
};
pub use lz77::{lz77_window_encode, Lz77Encoding};
pub use markov::{markov_corpus, MarkovSource};
