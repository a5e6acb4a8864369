pub mod campaign;
pub mod cli;
pub mod exact;
pub mod generate;
pub mod hypergraph;
pub mod instance;
pub mod matching;
pub mod report;
