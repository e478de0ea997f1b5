use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::analogy::AnalogyCounters;
use crate::network::Filament;

/// An exact mean, shown with two decimals (half-up).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Average {
    pub total: u64,
    pub count: u64,
}

impl fmt::Display for Average {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.count == 0 {
            return f.write_str("0.00");
        }
        let (t, n) = (self.total as u128, self.count as u128);
        let hundredths = (200 * t + n) / (2 * n);
        write!(f, "{}.{:02}", hundredths / 100, hundredths % 100)
    }
}

impl Serialize for Average {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Sizes of the intermediate relation sets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct GraphCounters {
    pub edges: usize,
    pub family_candidates: usize,
    pub reliable_families: usize,
    pub induced_series: usize,
    pub seed_family: usize,
    pub seed_series: usize,
    /// Number of extension steps before the fixed point.
    pub bootstrap_iterations: usize,
    pub extension_analogies: usize,
    pub network_family: usize,
    pub network_series: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NetworkStats {
    pub lexicon_size: usize,
    /// Words with at least one filament.
    pub entries: usize,
    pub filaments: usize,
    /// Sum of the sub-series sizes.
    pub serial_relations: usize,
    pub serial_relations_per_filament: Average,
    pub filaments_per_entry: Average,
    pub analogies: AnalogyCounters,
    pub graph: GraphCounters,
}

/// Resource figures of a filament set; the stage counters are left empty.
pub fn compute_stats(lexicon_size: usize, filaments: &[Filament]) -> NetworkStats {
    let entries: BTreeSet<_> = filaments.iter().map(|f| f.entry).collect();
    let serial_relations: usize = filaments.iter().map(|f| f.sub_series.len()).sum();
    NetworkStats {
        lexicon_size,
        entries: entries.len(),
        filaments: filaments.len(),
        serial_relations,
        serial_relations_per_filament: Average {
            total: serial_relations as u64,
            count: filaments.len() as u64,
        },
        filaments_per_entry: Average {
            total: filaments.len() as u64,
            count: entries.len() as u64,
        },
        analogies: AnalogyCounters::default(),
        graph: GraphCounters::default(),
    }
}

/// Pretty JSON with a trailing newline.
pub fn render_stats(stats: &NetworkStats) -> String {
    let mut text = serde_json::to_string_pretty(stats).expect("plain struct");
    text.push('\n');
    text
}
