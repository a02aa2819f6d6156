//! JSON-lines run log: a config record, one record per outcome, an end record.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use crate::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "kebab-case")]
pub enum Record {
    Config {
        version: String,
        started: String,
        config: RunConfig,
    },
    Graph {
        code: String,
        flags: String,
        min_weight: Option<f64>,
    },
    Enumeration {
        states: usize,
        terminals: usize,
        graphs: usize,
        partial: bool,
    },
    Node {
        id: usize,
        parent: Option<usize>,
        depth: usize,
        label: String,
        bound: String,
        status: String,
    },
    Lp {
        status: String,
        value: Option<String>,
    },
    Spec {
        id: String,
        status: String,
        cells: usize,
        seconds: f64,
    },
    End {
        seconds: f64,
    },
}

pub struct RunLog {
    file: Option<File>,
    start: Instant,
}

impl RunLog {
    pub fn open(cfg: &RunConfig, started: &str) -> Result<RunLog> {
        let file = match &cfg.log {
            Some(p) => Some(
                OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(p)
                    .with_context(|| format!("opening log {p}"))?,
            ),
            None => None,
        };
        let mut log = RunLog {
            file,
            start: Instant::now(),
        };
        log.record(Record::Config {
            version: env!("CARGO_PKG_VERSION").to_string(),
            started: started.to_string(),
            config: cfg.clone(),
        })?;
        Ok(log)
    }

    pub fn record(&mut self, r: Record) -> Result<()> {
        if let Some(f) = &mut self.file {
            let line = serde_json::to_string(&r)?;
            writeln!(f, "{line}")?;
        }
        Ok(())
    }

    pub fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    pub fn finish(mut self) -> Result<()> {
        let seconds = self.elapsed();
        self.record(Record::End { seconds })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    #[test]
    fn records_roundtrip() {
        let cfg = RunConfig::parse_from(["tamegraph", "--jobs", "2", "verify", "run", "a.specs"]);
        let rs = vec![
            Record::Config {
                version: "0".into(),
                started: "now".into(),
                config: cfg,
            },
            Record::Node {
                id: 0,
                parent: None,
                depth: 0,
                label: "root".into(),
                bound: "-inf".into(),
                status: "eliminated".into(),
            },
            Record::End { seconds: 0.5 },
        ];
        for r in rs {
            let s = serde_json::to_string(&r).unwrap();
            assert_eq!(serde_json::from_str::<Record>(&s).unwrap(), r);
        }
    }
}
