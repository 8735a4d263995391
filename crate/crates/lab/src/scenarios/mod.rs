//! Scenario registry.

use std::fmt::Display;

use crate::config::{Config, Param};
use crate::error::{LabError, Result};
use crate::model::PRESET_SOURCES;
use crate::table::Table;

mod fig3;
mod fig4;
mod fig5;
mod fig6;
mod oracle;
mod supplement;

pub(crate) use fig3::reported_n1;
pub use fig3::{rate_map, width_rates, RateMapPoint, WidthRate};
pub use fig4::mwi_rates;
pub use fig5::{i_pointer_resolutions, IResolution};
pub use fig6::k31_scan;
pub use oracle::{oracle_matrix, OracleCase};
pub use supplement::weak_value_at_inferred_rho;

/// Ordered `key=value` lines printed after a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    lines: Vec<(String, String)>,
}

impl Summary {
    pub fn put(&mut self, key: impl Into<String>, value: impl Display) {
        self.lines.push((key.into(), value.to_string()));
    }

    /// Shortest round-trip form of a float.
    pub fn num(&mut self, key: impl Into<String>, value: f64) {
        self.put(key, format!("{value:?}"));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn lines(&self) -> impl Iterator<Item = String> + '_ {
        self.lines.iter().map(|(k, v)| format!("{k}={v}"))
    }
}

pub struct Outcome {
    pub table: Table,
    pub summary: Summary,
}

pub struct Scenario {
    pub id: &'static str,
    pub reproduces: &'static str,
    pub description: &'static str,
    pub params: &'static [Param],
    run: fn(&Config) -> Result<Outcome>,
}

impl Scenario {
    pub fn default_config(&self) -> Config {
        Config::from_params(self.params)
    }

    /// Runs, sorts rows by input coordinates, checks the schema and appends
    /// preset provenance to the summary.
    pub fn run(&self, cfg: &Config) -> Result<Outcome> {
        let mut out = (self.run)(cfg)?;
        out.table.sort_rows();
        out.table.validate()?;
        for (key, source) in PRESET_SOURCES {
            if let Ok(v) = cfg.text(key) {
                out.summary
                    .put(format!("preset.{key}"), format!("{v} ({source})"));
            }
        }
        Ok(out)
    }

    /// CSV with the provenance header for `cfg`.
    pub fn render(&self, cfg: &Config, outcome: &Outcome) -> String {
        let mut prov = vec![
            format!("wva-lab {}", env!("CARGO_PKG_VERSION")),
            format!("scenario={}", self.id),
            format!("reproduces={}", self.reproduces),
        ];
        prov.extend(cfg.entries().map(|(k, v)| format!("config {k}={v}")));
        outcome.table.to_csv(&prov)
    }
}

pub fn registry() -> &'static [Scenario] {
    REGISTRY
}

pub fn find(id: &str) -> Result<&'static Scenario> {
    REGISTRY
        .iter()
        .find(|s| s.id == id)
        .ok_or_else(|| LabError::UnknownScenario(id.to_string()))
}

static REGISTRY: &[Scenario] = &[
    Scenario {
        id: "fig3a",
        reproduces: "Fig. 3(a)",
        description: "P-pointer shift vs time difference for four broadband widths, N=1",
        params: fig3::FIG3A_PARAMS,
        run: fig3::run_fig3a,
    },
    Scenario {
        id: "fig3b",
        reproduces: "Fig. 3(b)",
        description: "map of the P-pointer shift rate over time difference and width up to 300 nm",
        params: fig3::FIG3B_PARAMS,
        run: fig3::run_fig3b,
    },
    Scenario {
        id: "fig4",
        reproduces: "Fig. 4",
        description: "P-pointer shift and precision with N=1,2,3 interactions",
        params: fig4::PARAMS,
        run: fig4::run,
    },
    Scenario {
        id: "fig5",
        reproduces: "Fig. 5",
        description: "I-pointer shift vs displacement and resolution scaling with N",
        params: fig5::PARAMS,
        run: fig5::run,
    },
    Scenario {
        id: "fig6",
        reproduces: "Fig. 6",
        description: "Leggett-Garg K31 and weak value vs postselection angle",
        params: fig6::PARAMS,
        run: fig6::run,
    },
    Scenario {
        id: "s2_spectrum_evolution",
        reproduces: "Fig. S2",
        description: "normalized postselected spectrum as the time difference grows, N=1",
        params: supplement::S2_PARAMS,
        run: supplement::run_s2,
    },
    Scenario {
        id: "s3_intensity",
        reproduces: "Fig. S3",
        description: "postselected intensity, I-pointer shift and SNR per source, N=1",
        params: supplement::S3_PARAMS,
        run: supplement::run_s3,
    },
    Scenario {
        id: "s4_weak_values",
        reproduces: "Fig. S4",
        description: "anomalous weak value and SNR vs postselection angle for N=1 and N=3",
        params: supplement::S4_PARAMS,
        run: supplement::run_s4,
    },
    Scenario {
        id: "oracle_suite",
        reproduces: "model check",
        description: "joint-state oracle vs collapsed density over shapes, N, k, rho and gamma",
        params: oracle::PARAMS,
        run: oracle::run,
    },
];
