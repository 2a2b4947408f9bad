//! Named property suites behind `riesz-limits verify`.
//!
//! Each suite runs its trials serially; trial `i` draws from its own
//! generator seeded by `(seed, i)`, and a property keeps the counterexample
//! of its first failing trial. The report is therefore a function of the
//! configuration alone.

mod carrier;
mod duality;
mod functoriality;
mod homs;
pub mod oracle;

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Adjoints,
    IntervalOracle,
    ColimitDuality,
    LimitDuality,
    PmScenarios,
    Disjointify,
    SumProductDuality,
    FiniteCarrierIso,
    Functoriality,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Adjoints,
        Suite::IntervalOracle,
        Suite::ColimitDuality,
        Suite::LimitDuality,
        Suite::PmScenarios,
        Suite::Disjointify,
        Suite::SumProductDuality,
        Suite::FiniteCarrierIso,
        Suite::Functoriality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Adjoints => "adjoints",
            Suite::IntervalOracle => "interval-oracle",
            Suite::ColimitDuality => "colimit-duality",
            Suite::LimitDuality => "limit-duality",
            Suite::PmScenarios => "pm-scenarios",
            Suite::Disjointify => "disjointify",
            Suite::SumProductDuality => "sum-product-duality",
            Suite::FiniteCarrierIso => "finite-carrier-iso",
            Suite::Functoriality => "functoriality",
        }
    }

    pub fn from_name(name: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| Error::UnknownSuite(name.to_string()))
    }

    /// The statement under test.
    pub fn claim(self) -> &'static str {
        match self {
            Suite::Adjoints => {
                "Adjoints of positive maps are positive; the adjoint of an interval preserving map is a lattice \
                 homomorphism and the adjoint of a lattice homomorphism is interval preserving."
            }
            Suite::IntervalOracle => {
                "A canonical lattice homomorphism is interval preserving exactly when its index map is injective on \
                 the cozero rows; an injective interval preserving map is a lattice isomorphism onto a band."
            }
            Suite::ColimitDuality => {
                "For a direct system with injective interval preserving steps, functionals on the direct limit are \
                 exactly the threads of the dual inverse system, and this correspondence is a lattice isomorphism."
            }
            Suite::LimitDuality => {
                "For a sequential inverse system with surjective steps, functionals on the inverse limit are exactly \
                 the germs of the dual direct system; positive sections realise every component."
            }
            Suite::PmScenarios => {
                "Band projections onto the sets {1..k} map all sequences onto the compatible families, while the \
                 finitely supported sequences form a proper order dense sublattice of them."
            }
            Suite::Disjointify => {
                "Two positive functionals can be replaced by disjoint smaller ones with the same supremum."
            }
            Suite::SumProductDuality => {
                "The order dual of a finite direct sum is the product of the order duals via mutually inverse \
                 lattice isomorphisms."
            }
            Suite::FiniteCarrierIso => {
                "A space with a separating family of order continuous functionals is the inverse limit of the \
                 carriers of those functionals."
            }
            Suite::Functoriality => {
                "A levelwise isomorphism of systems induces isomorphisms of the direct and inverse limits that \
                 commute with the canonical embeddings and projections."
            }
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::Adjoints | Suite::Disjointify => 500,
            Suite::IntervalOracle => 200,
            Suite::ColimitDuality | Suite::LimitDuality | Suite::SumProductDuality => 50,
            Suite::PmScenarios => 50,
            Suite::FiniteCarrierIso => 1,
            Suite::Functoriality => 100,
        }
    }

    pub fn default_depth(self) -> usize {
        match self {
            Suite::Functoriality => 6,
            _ => 8,
        }
    }
}

/// The order dual and the order continuous dual of a finite-dimensional
/// component coincide.
pub const ORDER_CONTINUITY_NOTE: &str = "every positive functional on a finite-dimensional component is order \
     continuous, so the order continuous dual coincides with the order dual and the normal-dual variant of this \
     suite is the same check";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub depth: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub status: Status,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub suite: &'static str,
    pub claim: &'static str,
    pub seed: u64,
    pub depth: usize,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
    pub results: Vec<PropertyResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumeration: Option<Value>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "suite {} (seed {}, depth {}, trials {})",
            self.suite, self.seed, self.depth, self.trials
        );
        let _ = writeln!(out, "claim: {}", self.claim);
        if let Some(note) = self.note {
            let _ = writeln!(out, "note: {note}");
        }
        for r in &self.results {
            let status = match r.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let _ = writeln!(out, "{status} {} ({} cases)", r.name, r.cases);
            if let Some(ce) = &r.counterexample {
                let _ = writeln!(out, "  counterexample: {ce}");
            }
        }
        let _ = writeln!(
            out,
            "{}",
            if self.passed() {
                "all properties hold"
            } else {
                "some properties failed"
            }
        );
        out
    }
}

/// Outcome of one case: `None` passes, `Some` is a counterexample.
pub(crate) type Outcome = Result<Option<Value>>;

pub(crate) fn ensure(ok: bool, counterexample: impl FnOnce() -> Value) -> Outcome {
    Ok(if ok { None } else { Some(counterexample()) })
}

pub(crate) struct Prop {
    name: &'static str,
    cases: usize,
    counterexample: Option<Value>,
}

impl Prop {
    pub(crate) fn new(name: &'static str) -> Prop {
        Prop {
            name,
            cases: 0,
            counterexample: None,
        }
    }

    pub(crate) fn record(&mut self, outcome: Outcome) {
        self.cases += 1;
        if self.counterexample.is_some() {
            return;
        }
        match outcome {
            Ok(None) => {}
            Ok(Some(ce)) => self.counterexample = Some(ce),
            Err(e) => self.counterexample = Some(json!({ "error": e.to_string() })),
        }
    }

    pub(crate) fn finish(self) -> PropertyResult {
        PropertyResult {
            name: self.name,
            status: if self.counterexample.is_none() {
                Status::Pass
            } else {
                Status::Fail
            },
            cases: self.cases,
            counterexample: self.counterexample,
        }
    }
}

pub fn run(suite: Suite, cfg: &Config) -> Result<Report> {
    if cfg.depth == 0 || cfg.trials == 0 {
        return Err(Error::PreconditionViolated(
            "depth and trials must be at least 1".into(),
        ));
    }
    let mut enumeration = None;
    let results = match suite {
        Suite::Adjoints => homs::adjoints(cfg),
        Suite::IntervalOracle => homs::interval_oracle(cfg),
        Suite::ColimitDuality => duality::colimit(cfg),
        Suite::LimitDuality => duality::limit(cfg),
        Suite::SumProductDuality => duality::sum_product(cfg),
        Suite::PmScenarios => carrier::pm_scenarios(cfg),
        Suite::Disjointify => carrier::disjointify(cfg),
        Suite::FiniteCarrierIso => {
            let (results, table) = carrier::finite_iso()?;
            enumeration = Some(table);
            results
        }
        Suite::Functoriality => functoriality::run(cfg),
    };
    let note = matches!(suite, Suite::ColimitDuality | Suite::LimitDuality)
        .then_some(ORDER_CONTINUITY_NOTE);
    Ok(Report {
        command: "verify",
        suite: suite.name(),
        claim: suite.claim(),
        seed: cfg.seed,
        depth: cfg.depth,
        trials: cfg.trials,
        note,
        results: results.into_iter().map(Prop::finish).collect(),
        enumeration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()).unwrap(), s);
        }
        assert_eq!(
            Suite::from_name("nosuch").unwrap_err(),
            Error::UnknownSuite("nosuch".into())
        );
    }

    #[test]
    fn props_keep_first_counterexample() {
        let mut p = Prop::new("p");
        p.record(ensure(true, || json!(0)));
        p.record(ensure(false, || json!(1)));
        p.record(ensure(false, || json!(2)));
        let r = p.finish();
        assert_eq!(
            (r.status, r.cases, r.counterexample),
            (Status::Fail, 3, Some(json!(1)))
        );
    }
}
