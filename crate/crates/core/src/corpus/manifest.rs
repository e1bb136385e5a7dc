use std::collections::{HashMap, HashSet};

use super::CorpusError;

/// Current manifest format version.
pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: String,
    pub deps: Vec<String>,
    /// `(definition name, anchor)` pairs.
    pub exports: Vec<(String, String)>,
}

/// Ordered list of scripts with their dependencies and exported names.
///
/// ```text
/// version 1
/// logic.ld : ;
///   export and-in "2.3 conjunction"
/// classical.ld : logic.ld ;
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusManifest {
    pub version: u32,
    pub entries: Vec<ManifestEntry>,
}

impl CorpusManifest {
    pub fn parse(text: &str) -> Result<CorpusManifest, CorpusError> {
        let mut version = None;
        let mut entries: Vec<ManifestEntry> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| CorpusError::ManifestSyntax { line: line_no, message: msg.to_string() };
            if let Some(rest) = line.strip_prefix("version ") {
                let v: u32 = rest.trim().parse().map_err(|_| bad("version must be a number"))?;
                if v != MANIFEST_VERSION {
                    return Err(bad(&format!("unsupported manifest version {v}")));
                }
                version = Some(v);
                continue;
            }
            if version.is_none() {
                return Err(bad("manifest must start with `version 1`"));
            }
            if let Some(rest) = line.strip_prefix("export ") {
                let entry = entries.last_mut().ok_or_else(|| bad("export before any script entry"))?;
                let (name, anchor) = rest.split_once(' ').ok_or_else(|| bad("expected `export name \"anchor\"`"))?;
                let anchor = anchor.trim();
                let anchor = anchor
                    .strip_prefix('"')
                    .and_then(|a| a.strip_suffix('"'))
                    .ok_or_else(|| bad("anchor must be quoted"))?;
                entry.exports.push((name.trim().to_string(), anchor.to_string()));
                continue;
            }
            let body = line.strip_suffix(';').ok_or_else(|| bad("entry must end with `;`"))?;
            let (path, deps) = body.split_once(':').ok_or_else(|| bad("expected `path : deps ;`"))?;
            entries.push(ManifestEntry {
                path: path.trim().to_string(),
                deps: deps.split_whitespace().map(str::to_string).collect(),
                exports: Vec::new(),
            });
        }
        let version = version.ok_or(CorpusError::ManifestSyntax { line: 0, message: "empty manifest".into() })?;
        Ok(CorpusManifest { version, entries })
    }

    pub fn render(&self) -> String {
        let mut out = format!("version {}\n", self.version);
        for e in &self.entries {
            out.push_str(&format!("{} : {} ;\n", e.path, e.deps.join(" ")).replace(" :  ;", " : ;"));
            for (name, anchor) in &e.exports {
                out.push_str(&format!("  export {name} \"{anchor}\"\n"));
            }
        }
        out
    }

    /// Entries in dependency order. Ties keep manifest order.
    pub fn load_order(&self) -> Result<Vec<&ManifestEntry>, CorpusError> {
        let index: HashMap<&str, usize> = self.entries.iter().enumerate().map(|(i, e)| (e.path.as_str(), i)).collect();
        for e in &self.entries {
            for d in &e.deps {
                if !index.contains_key(d.as_str()) {
                    return Err(CorpusError::MissingScript(d.clone()));
                }
            }
        }
        let mut done: HashSet<usize> = HashSet::new();
        let mut order = Vec::new();
        while order.len() < self.entries.len() {
            let next = self.entries.iter().enumerate().find(|(i, e)| {
                !done.contains(i) && e.deps.iter().all(|d| done.contains(&index[d.as_str()]))
            });
            match next {
                Some((i, e)) => {
                    done.insert(i);
                    order.push(e);
                }
                None => {
                    let stuck = self.entries.iter().enumerate().filter(|(i, _)| !done.contains(i)).map(|(_, e)| e.path.clone()).collect();
                    return Err(CorpusError::CyclicDependency(stuck));
                }
            }
        }
        Ok(order)
    }

    /// All exports, in manifest order, with the script that exports them.
    pub fn exports(&self) -> Vec<(&str, &str, &str)> {
        self.entries
            .iter()
            .flat_map(|e| e.exports.iter().map(move |(n, a)| (n.as_str(), a.as_str(), e.path.as_str())))
            .collect()
    }

    /// The manifest with one script removed, together with its exports and
    /// every dependency edge pointing at it.
    pub fn without(&self, path: &str) -> CorpusManifest {
        let entries = self
            .entries
            .iter()
            .filter(|e| e.path != path)
            .map(|e| ManifestEntry { deps: e.deps.iter().filter(|d| *d != path).cloned().collect(), ..e.clone() })
            .collect();
        CorpusManifest { version: self.version, entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "version 1\n# comment\na.ld : ;\n  export x \"one\"\nb.ld : a.ld ;\n  export y \"two\"\n";

    #[test]
    fn parses_and_renders() {
        let m = CorpusManifest::parse(SAMPLE).unwrap();
        assert_eq!(m.entries.len(), 2);
        assert_eq!(m.entries[1].deps, vec!["a.ld"]);
        assert_eq!(m.exports(), vec![("x", "one", "a.ld"), ("y", "two", "b.ld")]);
        assert_eq!(CorpusManifest::parse(&m.render()).unwrap(), m);
    }

    #[test]
    fn dependency_order_and_cycles() {
        let m = CorpusManifest::parse("version 1\nb.ld : a.ld ;\na.ld : ;\n").unwrap();
        let order: Vec<&str> = m.load_order().unwrap().iter().map(|e| e.path.as_str()).collect();
        assert_eq!(order, vec!["a.ld", "b.ld"]);
        let cyc = CorpusManifest::parse("version 1\nb.ld : a.ld ;\na.ld : b.ld ;\n").unwrap();
        assert!(matches!(cyc.load_order(), Err(CorpusError::CyclicDependency(_))));
        let missing = CorpusManifest::parse("version 1\nb.ld : gone.ld ;\n").unwrap();
        assert!(matches!(missing.load_order(), Err(CorpusError::MissingScript(p)) if p == "gone.ld"));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(CorpusManifest::parse("a.ld : ;\n").is_err());
        assert!(CorpusManifest::parse("version 2\n").is_err());
        assert!(CorpusManifest::parse("version 1\na.ld : \n").is_err());
    }
}
