//! The checked library: manifest handling, loading, checking, reference
//! scans and proof mutations.

mod check;
mod load;
mod manifest;
mod mutate;
mod scan;

use thiserror::Error;

use crate::parser::ParseError;

pub use check::{check_corpus, check_scripts, check_scripts_with, describe_kernel_error, CorpusReport, ExportReport, Status, StepKind, StepReport};
pub use load::{embedded_file, embedded_manifest, load_corpus, load_embedded, load_with, LoadedScript, MANIFEST_FILE};
pub use manifest::{CorpusManifest, ManifestEntry, MANIFEST_VERSION};
pub use mutate::{mutate, standard_mutations, Mutation, MutationOp};
pub use scan::{primitive_census, reference_graph, reachable_users};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("manifest line {line}: {message}")]
    ManifestSyntax { line: usize, message: String },
    #[error("missing script `{0}`")]
    MissingScript(String),
    #[error("cyclic dependency among {}", .0.join(", "))]
    CyclicDependency(Vec<String>),
    #[error("{path}: {error}")]
    Parse { path: String, error: ParseError },
}
