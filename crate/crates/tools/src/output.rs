use serde::{Deserialize, Serialize};
use snc_core::GameValue;

pub const TSV_HEADER: &str = "family\tparameters\twinner\tp1\tp2\tdifferential\tnodes\tmemo_hits\telapsed_ms";

/// One solved position as reported on standard output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRow {
    pub family: String,
    pub parameters: Vec<u32>,
    pub winner: String,
    pub p1: u32,
    pub p2: u32,
    pub differential: i32,
    pub nodes: u64,
    pub memo_hits: u64,
    pub elapsed_ms: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Tsv,
}

impl OutputRow {
    pub fn new(family: &str, parameters: Vec<u32>, v: &GameValue) -> Self {
        OutputRow {
            family: family.to_string(),
            parameters,
            winner: v.winner.token().to_string(),
            p1: v.p1_score,
            p2: v.p2_score,
            differential: v.differential,
            nodes: v.stats.nodes,
            memo_hits: v.stats.memo_hits,
            elapsed_ms: v.stats.elapsed_ms,
        }
    }

    fn parameter_text(&self) -> String {
        if self.parameters.is_empty() {
            "-".to_string()
        } else {
            self.parameters.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn to_tsv(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.family,
            self.parameter_text(),
            self.winner,
            self.p1,
            self.p2,
            self.differential,
            self.nodes,
            self.memo_hits,
            self.elapsed_ms
        )
    }

    /// Parses a line produced by [`to_tsv`](Self::to_tsv).
    pub fn from_tsv(line: &str) -> Option<Self> {
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 9 {
            return None;
        }
        let parameters = if f[1] == "-" {
            Vec::new()
        } else {
            f[1].split(',').map(|p| p.parse().ok()).collect::<Option<_>>()?
        };
        Some(OutputRow {
            family: f[0].to_string(),
            parameters,
            winner: f[2].to_string(),
            p1: f[3].parse().ok()?,
            p2: f[4].parse().ok()?,
            differential: f[5].parse().ok()?,
            nodes: f[6].parse().ok()?,
            memo_hits: f[7].parse().ok()?,
            elapsed_ms: f[8].parse().ok()?,
        })
    }

    pub fn to_text(&self) -> String {
        let params = self.parameter_text().replace(',', " ");
        format!(
            "{} {}: {} ({} - {})  differential {:+}  nodes {}  memo hits {}  {} ms",
            self.family, params, self.winner, self.p1, self.p2, self.differential, self.nodes, self.memo_hits, self.elapsed_ms
        )
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
            Format::Tsv => self.to_tsv(),
        }
    }
}
