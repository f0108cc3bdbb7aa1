//! Workspace files, certificate reports and test corpora.

mod commands;
mod corpus;
mod report;
mod workspace;

pub use commands::{run_command, RunOptions, VERBS};
pub use corpus::{classical, corpus_generate, curated_rationals, CorpusEntry};
pub use report::{digest, matrix_rows, strings, verify_report, CertificateReport, Table, Verdict, Witness, ENGINE};
pub use workspace::{
    format_matrix, parse_matrix, Component, Decl, ElementDecl, IdealsDecl, MapDecl, ModuleDecl, MonoidDecl,
    ObjectDecl, OverlapDecl, SchemeDecl, SpaceDecl, Workspace,
};

#[cfg(test)]
mod tests;
