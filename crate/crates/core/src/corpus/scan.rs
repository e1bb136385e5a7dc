use std::collections::{BTreeSet, HashMap};

use super::check::{StepKind, StepReport};

/// Constant name to the constants its step mentions.
pub fn reference_graph(steps: &[StepReport]) -> HashMap<&str, Vec<&str>> {
    steps
        .iter()
        .filter(|s| s.kind != StepKind::Statement)
        .map(|s| (s.name.as_str(), s.references.iter().map(String::as_str).collect()))
        .collect()
}

/// Every step that mentions `target` directly or through other steps.
pub fn reachable_users<'a>(steps: &'a [StepReport], target: &str) -> BTreeSet<&'a str> {
    let mut users = BTreeSet::new();
    let mut frontier = vec![target.to_string()];
    while let Some(t) = frontier.pop() {
        for s in steps {
            if s.references.contains(&t) && users.insert(s.name.as_str()) {
                frontier.push(s.name.clone());
            }
        }
    }
    users
}

/// Names of all primitive definitions.
pub fn primitive_census(steps: &[StepReport]) -> Vec<&str> {
    steps.iter().filter(|s| s.kind == StepKind::Primitive).map(|s| s.name.as_str()).collect()
}
