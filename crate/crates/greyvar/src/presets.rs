//! Configurations shipped with the tool, also available as files under
//! `presets/`.

/// `(name, JSON)` for every preset.
pub const PRESETS: [(&str, &str); 4] = [
    ("prop7-trichotomy", include_str!("../presets/prop7-trichotomy.json")),
    ("thm10-grid", include_str!("../presets/thm10-grid.json")),
    ("fbm-singularity", include_str!("../presets/fbm-singularity.json")),
    ("validate-all", include_str!("../presets/validate-all.json")),
];

pub fn get(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, json)| *json)
}

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentConfig;

    #[test]
    fn presets_resolve() {
        for (name, json) in PRESETS {
            let c = ExperimentConfig::from_json(json).unwrap_or_else(|e| panic!("{name}: {e}"));
            let cmd = c.command.unwrap_or_else(|| panic!("{name} names no command"));
            c.resolve(cmd).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(get("validate-all").is_some());
        assert!(get("nope").is_none());
    }
}
