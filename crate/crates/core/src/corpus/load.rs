use std::path::Path;

use super::manifest::CorpusManifest;
use super::CorpusError;
use crate::parser::{parse_script, SurfaceScript};

/// A parsed script together with its source text.
#[derive(Debug, Clone)]
pub struct LoadedScript {
    pub path: String,
    pub source: String,
    pub script: SurfaceScript,
}

/// Name of the manifest file inside a corpus directory.
pub const MANIFEST_FILE: &str = "manifest.txt";

const EMBEDDED: &[(&str, &str)] = &[
    (MANIFEST_FILE, include_str!("../../corpus/manifest.txt")),
    ("logic.ld", include_str!("../../corpus/logic.ld")),
    ("classical.ld", include_str!("../../corpus/classical.ld")),
    ("sets.ld", include_str!("../../corpus/sets.ld")),
    ("equality.ld", include_str!("../../corpus/equality.ld")),
    ("relations.ld", include_str!("../../corpus/relations.ld")),
    ("rel_thms.ld", include_str!("../../corpus/rel_thms.ld")),
    ("properties.ld", include_str!("../../corpus/properties.ld")),
    ("special.ld", include_str!("../../corpus/special.ld")),
];

/// Source text of a file of the built-in corpus.
pub fn embedded_file(name: &str) -> Option<&'static str> {
    EMBEDDED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn embedded_manifest() -> CorpusManifest {
    CorpusManifest::parse(embedded_file(MANIFEST_FILE).unwrap()).expect("built-in manifest parses")
}

/// Loads the built-in corpus in dependency order.
pub fn load_embedded() -> Result<(CorpusManifest, Vec<LoadedScript>), CorpusError> {
    let manifest = embedded_manifest();
    let scripts = load_with(&manifest, |p| embedded_file(p).map(str::to_string))?;
    Ok((manifest, scripts))
}

/// Loads every script named by the manifest at `manifest_path`; script
/// paths are relative to the manifest's directory.
pub fn load_corpus(manifest_path: &Path) -> Result<(CorpusManifest, Vec<LoadedScript>), CorpusError> {
    let text = std::fs::read_to_string(manifest_path)
        .map_err(|_| CorpusError::MissingScript(manifest_path.display().to_string()))?;
    let manifest = CorpusManifest::parse(&text)?;
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let scripts = load_with(&manifest, |p| std::fs::read_to_string(dir.join(p)).ok())?;
    Ok((manifest, scripts))
}

/// Loads scripts through `read`, returning them in dependency order.
pub fn load_with(manifest: &CorpusManifest, read: impl Fn(&str) -> Option<String>) -> Result<Vec<LoadedScript>, CorpusError> {
    let order = manifest.load_order()?;
    let mut out = Vec::with_capacity(order.len());
    for entry in order {
        let source = read(&entry.path).ok_or_else(|| CorpusError::MissingScript(entry.path.clone()))?;
        let script = parse_script(&source).map_err(|error| CorpusError::Parse { path: entry.path.clone(), error })?;
        out.push(LoadedScript { path: entry.path.clone(), source, script });
    }
    Ok(out)
}
