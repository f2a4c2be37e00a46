//! End-to-end runs: spec file, simples, universe, system, series, annihilator
//! and the brute-force cross-check.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::class::{
    enumerate_simples, is_wreath_closed, oracle_count, Caps, ClassError, ClassSpec, Mode, SideCondition, SimpleSet,
};
use crate::eliminate::{eliminate, ElimOptions};
use crate::perm::Permutation;
use crate::property::{Origin, Property, PropertyError, PropertyUniverse};
use crate::solver::{solve_auto, SolveError};
use crate::system::{AlgebraicSystem, SystemError};

pub const DEFAULT_ORDER: usize = 20;
pub const DEFAULT_ORACLE_LENGTH: usize = 8;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("spec: {0}")]
    Spec(String),
    #[error("class may contain infinitely many simple permutations; raise --max-simple-length")]
    InfiniteSimples,
    #[error("class: {0}")]
    Class(#[from] ClassError),
    #[error("universe: {0}")]
    Universe(#[from] PropertyError),
    #[error("system: {0}")]
    System(#[from] SystemError),
    #[error("solve: {0}")]
    Solve(#[from] SolveError),
}

/// The on-disk class description.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default)]
    pub basis: Vec<String>,
    #[serde(default)]
    pub properties: Vec<String>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub caps: Caps,
}

impl FromStr for SpecFile {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        toml::from_str(s).map_err(|e| PipelineError::Spec(e.to_string()))
    }
}

impl SpecFile {
    pub fn class_spec(&self) -> Result<ClassSpec, PipelineError> {
        let basis = self
            .basis
            .iter()
            .map(|b| b.parse::<Permutation>().map_err(|e| PipelineError::Spec(format!("basis `{b}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let conditions = self
            .properties
            .iter()
            .map(|p| p.parse::<SideCondition>().map_err(|e| PipelineError::Spec(format!("property `{p}`: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let mut spec = ClassSpec::new(basis, conditions, self.mode);
        spec.caps = self.caps;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub order: usize,
    /// Count involutions even without an `involution` property.
    pub involutions: bool,
    pub eliminate: bool,
    /// Compare against the oracle for `n ≤` this.
    pub oracle_check: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { order: DEFAULT_ORDER, involutions: false, eliminate: false, oracle_check: None }
    }
}

/// Everything but the series: the class, its simples, universe and system.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub spec: ClassSpec,
    pub simples: SimpleSet,
    pub wreath_closed: bool,
    pub involutions: bool,
    pub query: Vec<Property>,
    pub universe: Arc<PropertyUniverse>,
    pub system: AlgebraicSystem,
}

/// Target properties: the non-simple basis elements in class mode (the
/// simple ones are already excluded by the choice of simples) plus the
/// property side conditions.
pub fn target_query(spec: &ClassSpec) -> Vec<Property> {
    let mut q: Vec<Property> = Vec::new();
    if spec.mode == Mode::Class {
        q.extend(spec.basis().iter().filter(|b| !b.is_simple()).map(|b| Property::Avoid(b.clone())));
    }
    for p in spec.properties() {
        if !q.contains(&p) {
            q.push(p);
        }
    }
    q
}

pub fn prepare(spec: &ClassSpec, involutions: bool) -> Result<Prepared, PipelineError> {
    if let Some(SideCondition::Barred(b)) = spec.conditions.iter().find(|c| matches!(c, SideCondition::Barred(_))) {
        return Err(PropertyError::BarredUnsupported(b.to_string()).into());
    }
    let involutions = involutions || spec.involutions_only();
    let simples = enumerate_simples(spec);
    if !simples.complete {
        return Err(PipelineError::InfiniteSimples);
    }
    let query = target_query(spec);
    let mut sigmas: Vec<Permutation> = ["12", "21"].iter().map(|s| s.parse().expect("valid")).collect();
    if involutions {
        sigmas.push("321".parse().expect("valid"));
    }
    sigmas.extend(simples.long());
    let closed = PropertyUniverse::close(&query, involutions)?;
    let universe = Arc::new(closed.restrict(&query, &sigmas)?);
    let full = if involutions {
        AlgebraicSystem::build_involution(&simples, universe.clone())?
    } else {
        AlgebraicSystem::build(&simples, universe.clone())?
    };
    let system = full.restrict_to(&query)?;
    let check = system.properness_check();
    if !check.proper {
        return Err(SolveError::Improper(check.diagnostics.join("; ")).into());
    }
    Ok(Prepared {
        spec: spec.clone(),
        wreath_closed: is_wreath_closed(spec),
        simples,
        involutions,
        query,
        universe,
        system,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniverseEntry {
    pub property: String,
    pub origin: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRow {
    pub n: usize,
    pub computed: String,
    pub oracle: u64,
    pub status: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTime {
    pub stage: String,
    pub millis: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnihilatorReport {
    pub polynomial: String,
    /// The cofactor in the eliminated polynomial is nonzero on the series.
    pub certified: bool,
    pub verified_order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub spec: SpecFile,
    pub involutions: bool,
    pub order: usize,
    /// Simple counts for lengths 1, 2, ...
    pub simples: Vec<usize>,
    pub long_simples: Vec<String>,
    pub wreath_closed: bool,
    pub query: Vec<String>,
    pub universe: Vec<UniverseEntry>,
    pub unknowns: usize,
    pub system: String,
    /// Coefficients of `x^1 .. x^order`.
    pub sequence: Vec<String>,
    pub annihilator: Option<AnnihilatorReport>,
    /// Why no annihilator was produced when one was asked for.
    pub elimination_error: Option<String>,
    pub oracle: Vec<OracleRow>,
    pub timing: Vec<StageTime>,
}

impl RunReport {
    pub fn all_match(&self) -> bool {
        self.oracle.iter().all(|r| r.status == Verdict::Match)
    }

    /// The report without timing, for comparing runs.
    pub fn without_timing(&self) -> RunReport {
        RunReport { timing: Vec::new(), ..self.clone() }
    }
}

fn origin_text(o: &Origin) -> String {
    match o {
        Origin::Requested => "requested".to_string(),
        Origin::Adjoined => "adjoined".to_string(),
        Origin::InducedBy(p) => format!("induced by {p}"),
        Origin::InverseOf(p) => format!("inverse of {p}"),
    }
}

fn spec_echo(spec: &ClassSpec) -> SpecFile {
    SpecFile {
        basis: spec.basis().iter().map(ToString::to_string).collect(),
        properties: spec.conditions.iter().map(ToString::to_string).collect(),
        mode: spec.mode,
        caps: spec.caps,
    }
}

/// The full pipeline on `spec`.
pub fn run(spec: &ClassSpec, opts: &RunOptions) -> Result<RunReport, PipelineError> {
    let mut timing = Vec::new();
    let mut stage = |name: &str, start: Instant| {
        timing.push(StageTime { stage: name.to_string(), millis: start.elapsed().as_secs_f64() * 1e3 });
    };

    let t = Instant::now();
    let prep = prepare(spec, opts.involutions)?;
    stage("prepare", t);

    let t = Instant::now();
    let sol = solve_auto::<BigInt>(&prep.system, opts.order)?;
    let f = sol.aggregate(&prep.query)?;
    stage("solve", t);
    let sequence: Vec<String> = (1..=opts.order).map(|n| f.coeff(n).to_string()).collect();

    let (mut annihilator, mut elimination_error) = (None, None);
    if opts.eliminate {
        let t = Instant::now();
        let elim = if prep.involutions {
            ElimOptions { max_terms: 50_000, max_degree: 200, ..ElimOptions::default() }
        } else {
            ElimOptions::default()
        };
        match eliminate::<BigInt>(&prep.system, &prep.query, &elim) {
            Ok(e) => {
                annihilator = Some(AnnihilatorReport {
                    polynomial: e.annihilator.to_string(),
                    certified: e.certified,
                    verified_order: e.order,
                })
            }
            Err(e) => elimination_error = Some(format!("series only: {e}")),
        }
        stage("eliminate", t);
    }

    let mut oracle = Vec::new();
    if let Some(limit) = opts.oracle_check {
        let t = Instant::now();
        let mut ospec = spec.clone();
        if prep.involutions && !ospec.involutions_only() {
            ospec.conditions.push(SideCondition::Involution);
        }
        for n in 1..=limit.min(opts.order) {
            let expected = oracle_count(&ospec, n)?;
            let computed = f.coeff(n);
            let status = if computed == BigInt::from(expected) { Verdict::Match } else { Verdict::Mismatch };
            oracle.push(OracleRow { n, computed: computed.to_string(), oracle: expected, status });
        }
        stage("oracle", t);
    }

    Ok(RunReport {
        spec: spec_echo(spec),
        involutions: prep.involutions,
        order: opts.order,
        simples: prep.simples.counts(),
        long_simples: prep.simples.long().iter().map(ToString::to_string).collect(),
        wreath_closed: prep.wreath_closed,
        query: prep.query.iter().map(ToString::to_string).collect(),
        universe: prep
            .universe
            .properties()
            .iter()
            .enumerate()
            .map(|(i, p)| UniverseEntry { property: p.to_string(), origin: origin_text(prep.universe.origin(i)) })
            .collect(),
        unknowns: prep.system.len(),
        system: prep.system.to_string(),
        sequence,
        annihilator,
        elimination_error,
        oracle,
        timing,
    })
}

fn list_or_none(items: &[String]) -> String {
    if items.is_empty() {
        "(none)".to_string()
    } else {
        items.join(", ")
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "basis: {}", list_or_none(&self.spec.basis))?;
        writeln!(f, "properties: {}", list_or_none(&self.spec.properties))?;
        let mode = match self.spec.mode {
            Mode::Class => "class",
            Mode::WreathClosure => "wreath_closure",
        };
        writeln!(f, "mode: {mode}{}", if self.involutions { " (involutions)" } else { "" })?;
        let counts: Vec<String> = self.simples.iter().map(ToString::to_string).collect();
        writeln!(f, "simples by length: {}", counts.join(", "))?;
        writeln!(f, "wreath-closed: {}", if self.wreath_closed { "yes" } else { "no" })?;
        writeln!(f, "query: {}", list_or_none(&self.query))?;
        let props: Vec<String> = self.universe.iter().map(|u| u.property.clone()).collect();
        writeln!(f, "universe: {}", props.join(", "))?;
        writeln!(f, "unknowns: {}", self.unknowns)?;
        writeln!(f, "sequence: {}", self.sequence.join(", "))?;
        if let Some(a) = &self.annihilator {
            let cert = if a.certified { "certified" } else { "not certified" };
            writeln!(f, "annihilator: {} = 0 ({cert}, checked through x^{})", a.polynomial, a.verified_order)?;
        }
        if let Some(e) = &self.elimination_error {
            writeln!(f, "annihilator: {e}")?;
        }
        if !self.oracle.is_empty() {
            writeln!(f, "oracle check:")?;
            for r in &self.oracle {
                let status = match r.status {
                    Verdict::Match => "MATCH",
                    Verdict::Mismatch => "MISMATCH",
                };
                writeln!(f, "  n={:<2} computed={} oracle={} {status}", r.n, r.computed, r.oracle)?;
            }
        }
        Ok(())
    }
}
