use std::collections::BTreeMap;

use super::config::parse_entries;

const REFERENCE_TEXT: &str = include_str!("../../data/reference_values.cfg");

/// Published values shipped with the crate for side-by-side columns.
#[derive(Debug, Clone)]
pub struct ReferenceValues {
    values: BTreeMap<String, String>,
}

impl ReferenceValues {
    pub fn builtin() -> Self {
        let entries = parse_entries(REFERENCE_TEXT).expect("bundled reference file parses");
        Self {
            values: entries.into_iter().map(|e| (e.key, e.value)).collect(),
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn num(&self, key: &str) -> Option<f64> {
        self.text(key)?.parse().ok()
    }

    pub fn list(&self, key: &str) -> Vec<f64> {
        self.text(key)
            .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect())
            .unwrap_or_default()
    }

    /// `|`-separated groups of comma-separated numbers.
    pub fn groups(&self, key: &str) -> Vec<Vec<f64>> {
        self.text(key)
            .map(|v| {
                v.split('|')
                    .map(|g| g.split(',').filter_map(|x| x.trim().parse().ok()).collect())
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn names(&self, key: &str) -> Vec<String> {
        self.text(key)
            .map(|v| v.split(',').map(|x| x.trim().to_string()).collect())
            .unwrap_or_default()
    }
}
