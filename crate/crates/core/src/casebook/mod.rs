//! End-to-end verification scenarios with machine-readable reports.
//!
//! Every check is an exact zero test in a differential tower; nothing here
//! compares floats.

mod chain;
mod example1;
mod example2;
mod example3;
mod reps;

pub use chain::verify_elimination_chain;
pub use example1::verify_example1;
pub use example2::{verify_example2, Example2Target};
pub use example3::verify_example3;
pub use reps::verify_theorem_reps;

use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::field::gauss::fmt_gauss;
use crate::field::{Poly, RatFun};
use crate::sample::{self, SampleRng};
use crate::tower::{Tower, TowerElem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "EXACT-PASS")]
    ExactPass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIPPED")]
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    /// A constant or coefficient extracted by the check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

impl Check {
    /// Passes iff `residual` is zero in `tw`.
    pub fn zero(tw: &Tower, label: impl Into<String>, anchor: &str, residual: &TowerElem) -> Check {
        let ok = tw.is_zero(residual);
        Check {
            label: label.into(),
            anchor: anchor.into(),
            status: if ok { Status::ExactPass } else { Status::Fail },
            residual: (!ok).then(|| tw.render(residual)),
            value: None,
        }
    }

    /// A boolean check; `detail` is reported as the residual on failure.
    pub fn holds(label: impl Into<String>, anchor: &str, ok: bool, detail: impl FnOnce() -> String) -> Check {
        Check {
            label: label.into(),
            anchor: anchor.into(),
            status: if ok { Status::ExactPass } else { Status::Fail },
            residual: (!ok).then(detail),
            value: None,
        }
    }

    pub fn skipped(label: impl Into<String>, anchor: &str, why: &str) -> Check {
        Check {
            label: label.into(),
            anchor: anchor.into(),
            status: Status::Skipped,
            residual: None,
            value: Some(why.into()),
        }
    }

    pub fn with_value(mut self, v: impl Into<String>) -> Check {
        self.value = Some(v.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn new(scenario: impl Into<String>) -> Report {
        Report { scenario: scenario.into(), checks: Vec::new(), seed: None, elapsed_ms: None }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn count(&self, s: Status) -> usize {
        self.checks.iter().filter(|c| c.status == s).count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    /// One line per check, for `--format text`.
    pub fn render_text(&self) -> String {
        let mut out = format!("== {} ==\n", self.scenario);
        for c in &self.checks {
            let status = match c.status {
                Status::ExactPass => "EXACT-PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIPPED",
            };
            out.push_str(&format!("{status:<10} {} [{}]", c.label, c.anchor));
            if let Some(v) = &c.value {
                out.push_str(&format!(" = {v}"));
            }
            if let Some(r) = &c.residual {
                out.push_str(&format!("\n           residual: {r}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Settings for [`run_all`]. Parsed from TOML; every key is optional.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CasebookConfig {
    pub seed: u64,
    /// Scenario name prefixes to run; empty means all.
    pub scenarios: Vec<String>,
    /// Random trials per parameter combination.
    pub trials: usize,
    /// Record wall time in the reports (breaks byte-identical output).
    pub timings: bool,
}

impl Default for CasebookConfig {
    fn default() -> Self {
        CasebookConfig { seed: 1, scenarios: Vec::new(), trials: 5, timings: false }
    }
}

impl CasebookConfig {
    pub fn parse(text: &str) -> Result<CasebookConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    fn selects(&self, name: &str) -> bool {
        self.scenarios.is_empty() || self.scenarios.iter().any(|s| name.starts_with(s.as_str()))
    }
}

pub const SCENARIOS: [&str; 5] = ["elimination-chain", "example1", "example2", "example3", "theorem-reps"];

/// Aggregate outcome of [`run_all`], ordered by scenario name.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Suite {
    pub seed: u64,
    pub reports: Vec<Report>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(Report::passed)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "seed": self.seed,
            "verdict": if self.passed() { "PASS" } else { "FAIL" },
            "reports": self.reports,
        })
    }
}

/// Per-scenario stream, so filtering never changes what a scenario draws.
fn scenario_rng(seed: u64, name: &str) -> SampleRng {
    let h = name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    sample::rng(seed ^ h)
}

fn nonzero_delta(rng: &mut SampleRng) -> Poly {
    use rand::Rng;
    let deg = rng.gen_range(0..=2);
    sample::poly(rng, 1, deg, 3)
}

fn scenario(name: &str, cfg: &CasebookConfig) -> Result<Report> {
    use rand::Rng;
    let mut rng = scenario_rng(cfg.seed, name);
    let mut rep = Report::new(name);
    match name {
        "example1" => {
            for k in 1..=5 {
                for m in 1..=3 {
                    for _ in 0..cfg.trials {
                        let delta = nonzero_delta(&mut rng);
                        let p = sample::poly_upto(&mut rng, 1, k - 1, 5);
                        rep.extend(verify_example1(&delta, k, m, &[p])?);
                    }
                }
            }
        }
        "example2" => {
            for _ in 0..4 * cfg.trials {
                let deg = rng.gen_range(1..=4);
                let p = sample::poly(&mut rng, 1, deg, 4);
                for target in Example2Target::ALL {
                    rep.extend(verify_example2(&p, target)?.report);
                }
            }
        }
        "example3" => {
            for m in 1..=3 {
                for _ in 0..cfg.trials {
                    let p1 = sample::even_poly(&mut rng, 4, 3);
                    rep.extend(verify_example3(m, &p1)?);
                }
            }
        }
        "theorem-reps" => {
            for k in 3..=5 {
                for _ in 0..cfg.trials.div_ceil(2) {
                    let delta = nonzero_delta(&mut rng);
                    let m = rng.gen_range(1..=3);
                    let alpha = decaying_ratfun(&mut rng);
                    rep.extend(verify_theorem_reps(k, &delta, m, &alpha)?);
                }
            }
        }
        "elimination-chain" => {
            for k in 3..=6 {
                rep.extend(verify_elimination_chain(k, &mut rng)?);
            }
        }
        _ => return Err(Error::Config(format!("unknown scenario `{name}`"))),
    }
    Ok(rep)
}

/// `p/q` with `deg p < deg q`, so that it vanishes at infinity.
pub(crate) fn decaying_ratfun(rng: &mut SampleRng) -> RatFun {
    use rand::Rng;
    let dq = rng.gen_range(1..=2);
    let q = sample::poly(rng, 1, dq, 3);
    let p = sample::poly_upto(rng, 1, dq - 1, 3);
    RatFun::new(p, q).expect("nonzero denominator")
}

/// Run every selected scenario. Scenarios run on separate threads; the
/// result is ordered by name and, without timings, depends only on the
/// configuration.
pub fn run_all(cfg: &CasebookConfig) -> Result<Suite> {
    let names: Vec<&str> = SCENARIOS.iter().copied().filter(|n| cfg.selects(n)).collect();
    if names.is_empty() {
        return Err(Error::Config(format!("no scenario matches {:?}", cfg.scenarios)));
    }
    let results: Vec<Result<Report>> = std::thread::scope(|s| {
        let handles: Vec<_> = names
            .iter()
            .map(|name| {
                s.spawn(move || {
                    let start = Instant::now();
                    let mut rep = scenario(name, cfg)?;
                    rep.seed = Some(cfg.seed);
                    if cfg.timings {
                        rep.elapsed_ms = Some(start.elapsed().as_millis() as u64);
                    }
                    Ok(rep)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
    });
    let mut reports = results.into_iter().collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.scenario.cmp(&b.scenario));
    Ok(Suite { seed: cfg.seed, reports })
}

pub(crate) fn gauss_str(e: &TowerElem) -> String {
    e.as_constant().map(|c| fmt_gauss(&c)).unwrap_or_else(|| "<non-constant>".into())
}
