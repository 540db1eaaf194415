use std::fmt::Display;
use std::io::{self, Write};

use rhoshift::classify::SearchConfig;

/// Ordered `key=value` pairs; keys may repeat (one line per item).
#[derive(Debug, Default)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn put(&mut self, key: impl Into<String>, value: impl Display) -> &mut Self {
        // values are single-line by construction
        let value = value.to_string().replace('\n', " ");
        self.entries.push((key.into(), value));
        self
    }

    pub fn echo_config(&mut self, config: &SearchConfig, seed: u64) -> &mut Self {
        self.put("config.n_max", config.n_max)
            .put("config.coloring_budget", config.coloring_budget)
            .put("config.subset_budget", config.subset_budget)
            .put("config.persistent_budget", config.persistent_budget)
            .put("config.d_max", config.d_max)
            .put("config.jobs", config.jobs)
            .put("config.seed", seed)
            .put("config.accept_budgeted", config.accept_budgeted_minimality)
            .put(
                "config.time_limit_ms",
                config.time_limit.map_or("none".to_string(), |t| t.as_millis().to_string()),
            )
    }

    pub fn write(&self, machine: bool, out: &mut impl Write) -> io::Result<()> {
        let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &self.entries {
            if machine {
                writeln!(out, "{k}={v}")?;
            } else {
                writeln!(out, "{k:<width$}  {v}")?;
            }
        }
        Ok(())
    }
}
