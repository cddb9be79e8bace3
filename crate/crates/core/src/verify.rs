//! Oracle-equivalence harness: compile random games and check every gadget
//! value against brute force.

use std::time::Instant;

use serde::Serialize;

use crate::corpus::{corpus, CorpusCaps};
use crate::error::Result;
use crate::files::GameFile;
use crate::game::{build_dag, nimber_of, Budget, Nimber};
use crate::geography::geography_nimber;
use crate::reduction::{build_t_chain, reduce_dag, OracleMode};

/// Value of `b_i` when the input game has value `*n`.
pub fn expected_b(n: u32, i: u32) -> Nimber {
    if n == i {
        Nimber::STAR
    } else {
        Nimber::ZERO
    }
}

/// Value of `c_i`. The option set is `{b_i, t_1, .., t_{i-2}}`, so for
/// `i = 1` and `n != 1` the value is `*1`, not `*(i-1) = 0`.
pub fn expected_c(n: u32, i: u32) -> Nimber {
    if n == i {
        Nimber::ZERO
    } else {
        Nimber::new(i.saturating_sub(1).max(1))
    }
}

/// Value of `d_i`: `*i` when `n = 0` or `i < n`, else `*(n-1)`.
pub fn expected_d(n: u32, i: u32) -> Nimber {
    if n == 0 || i < n {
        Nimber::new(i)
    } else {
        Nimber::new(n - 1)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub count: usize,
    pub seed: u64,
    pub caps: CorpusCaps,
    pub modes: Vec<OracleMode>,
    pub budget_nodes: usize,
    /// Record wall-clock time per instance (makes reports non-reproducible).
    pub timings: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            count: 200,
            seed: 0,
            caps: CorpusCaps::default(),
            modes: OracleMode::ALL.to_vec(),
            budget_nodes: Budget::DEFAULT_NODES,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub index: usize,
    pub name: String,
    pub ruleset: String,
    pub mode: OracleMode,
    pub input_positions: usize,
    pub g: u32,
    pub input_nimber: Nimber,
    pub output_nimber: Nimber,
    pub output_vertices: usize,
    pub output_edges: usize,
    pub size_bound: usize,
    pub lemma_checks: usize,
    pub failures: Vec<String>,
    /// `|input - output|` as integers.
    pub discrepancy: u32,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub micros: Option<u64>,
    /// The input, embedded when the instance fails so it can be replayed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<GameFile>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifySummary {
    pub instances: usize,
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_discrepancy: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub count: usize,
    pub caps: CorpusCaps,
    pub modes: Vec<OracleMode>,
    pub records: Vec<InstanceRecord>,
    pub summary: VerifySummary,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn failures(&self) -> impl Iterator<Item = &InstanceRecord> {
        self.records.iter().filter(|r| !r.passed)
    }
}

/// Compiles one game and checks the start value, every b/c/d/t vertex,
/// acyclicity, the nimber bound and the size bound.
pub fn verify_instance(
    file: &GameFile,
    index: usize,
    mode: OracleMode,
    budget: &Budget,
) -> Result<InstanceRecord> {
    let started = Instant::now();
    let game = file.to_game()?;
    let input_nimber = nimber_of(&game, budget)?;
    let dag = build_dag(&game, budget)?;
    let red = reduce_dag(&dag, mode, budget)?;
    let graph = &red.graph;
    let n = input_nimber.value();
    let mut ck = Checker::default();

    let output_nimber = geography_nimber(graph, budget)?;
    ck.expect("start".into(), output_nimber, input_nimber);
    if !graph.is_acyclic() {
        ck.failures.push("output graph has a cycle".into());
    }
    if n > red.g {
        ck.failures
            .push(format!("nimber {n} exceeds bound g = {}", red.g));
    }
    if graph.vertices().len() > red.size_bound {
        ck.failures.push(format!(
            "{} vertices exceed bound {}",
            graph.vertices().len(),
            red.size_bound
        ));
    }

    if graph.is_acyclic() {
        let values = graph.static_values()?;
        for (i, &b) in red.roles.b.iter().enumerate() {
            ck.expect(format!("b_{i}"), values[&b], expected_b(n, i as u32));
        }
        for (&i, &c) in &red.roles.c {
            ck.expect(format!("c_{i}"), values[&c], expected_c(n, i));
        }
        for (&i, &d) in &red.roles.d {
            ck.expect(format!("d_{i}"), values[&d], expected_d(n, i));
        }
        for (i, &t) in red.roles.t.iter().enumerate() {
            ck.expect(format!("t_{i}"), values[&t], Nimber::new(i as u32));
        }
    }

    let Checker { checks, failures } = ck;
    let passed = failures.is_empty();
    Ok(InstanceRecord {
        index,
        name: file
            .name
            .clone()
            .unwrap_or_else(|| format!("instance-{index}")),
        ruleset: file.ruleset().to_string(),
        mode,
        input_positions: dag.len(),
        g: red.g,
        input_nimber,
        output_nimber,
        output_vertices: graph.vertices().len(),
        output_edges: graph.edges().len(),
        size_bound: red.size_bound,
        lemma_checks: checks,
        discrepancy: n.abs_diff(output_nimber.value()),
        failures,
        passed,
        micros: None,
        replay: (!passed).then(|| file.clone()),
    }
    .with_time(started))
}

#[derive(Default)]
struct Checker {
    checks: usize,
    failures: Vec<String>,
}

impl Checker {
    fn expect(&mut self, what: String, got: Nimber, want: Nimber) {
        self.checks += 1;
        if got != want {
            self.failures
                .push(format!("{what}: got {got}, expected {want}"));
        }
    }
}

impl InstanceRecord {
    fn with_time(mut self, started: Instant) -> Self {
        self.micros = Some(started.elapsed().as_micros() as u64);
        self
    }
}

/// Every `t_i` of a standalone chain for `g` has value `*i`. Returns failures.
pub fn check_t_chain(g: u32) -> Result<Vec<String>> {
    let Some(chain) = build_t_chain(g) else {
        return Ok(Vec::new());
    };
    let values = chain.graph.static_values()?;
    let mut failures = Vec::new();
    for i in 0..g.saturating_sub(1) {
        let v = chain
            .graph
            .vertex_with_label(&format!("t_{i}"))
            .expect("chain labels every t vertex");
        if values[&v] != Nimber::new(i) {
            failures.push(format!("g={g} t_{i}: got {}", values[&v]));
        }
    }
    Ok(failures)
}

/// Runs the seeded corpus through every requested mode. Records are ordered
/// by instance index, then mode.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport> {
    let files = corpus(config.count, config.seed, &config.caps)?;
    let mut records = Vec::with_capacity(files.len() * config.modes.len());
    for (index, file) in files.iter().enumerate() {
        for &mode in &config.modes {
            let budget = Budget::nodes(config.budget_nodes);
            let mut record = verify_instance(file, index, mode, &budget)?;
            if !config.timings {
                record.micros = None;
            }
            records.push(record);
        }
    }
    let summary = summarize(&records);
    Ok(VerifyReport {
        seed: config.seed,
        count: config.count,
        caps: config.caps,
        modes: config.modes.clone(),
        records,
        summary,
    })
}

fn summarize(records: &[InstanceRecord]) -> VerifySummary {
    VerifySummary {
        instances: records.len(),
        checks: records.iter().map(|r| r.lemma_checks).sum(),
        passed: records.iter().filter(|r| r.passed).count(),
        failed: records.iter().filter(|r| !r.passed).count(),
        max_discrepancy: records.iter().map(|r| r.discrepancy).max().unwrap_or(0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_run_passes() {
        let report = run_verify(&VerifyConfig {
            count: 0,
            ..VerifyConfig::default()
        })
        .unwrap();
        assert!(report.all_passed());
        assert_eq!(report.summary, VerifySummary::default());
    }

    #[test]
    fn small_run_is_reproducible_and_passes() {
        let config = VerifyConfig {
            count: 9,
            seed: 5,
            ..VerifyConfig::default()
        };
        let a = run_verify(&config).unwrap();
        let b = run_verify(&config).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.all_passed(), "{:#?}", a.failures().collect::<Vec<_>>());
        assert_eq!(a.records.len(), 18);
    }

    #[test]
    fn lemma_tables() {
        // d_i for n = 3: *2 below, *2 from i = 3 on.
        let d: Vec<u32> = (2..6).map(|i| expected_d(3, i).value()).collect();
        assert_eq!(d, vec![2, 2, 2, 2]);
        assert_eq!(expected_d(0, 4), Nimber::new(4));
        assert_eq!(expected_c(2, 2), Nimber::ZERO);
        assert_eq!(expected_c(0, 1), Nimber::STAR);
        assert_eq!(expected_c(0, 5), Nimber::new(4));
    }

    #[test]
    fn t_chains_up_to_twelve() {
        for g in 0..=12 {
            assert!(check_t_chain(g).unwrap().is_empty());
        }
    }

    #[test]
    fn single_instance_record() {
        let r = verify_instance(
            &GameFile::star(2),
            0,
            OracleMode::Trusted,
            &Budget::default(),
        )
        .unwrap();
        assert!(r.passed && r.replay.is_none());
        assert_eq!(
            (r.g, r.input_nimber, r.output_nimber),
            (2, Nimber::new(2), Nimber::new(2))
        );
        // b_0..b_2, c_1, c_2, d_2 and the start vertex.
        assert_eq!(r.lemma_checks, 7);
        assert!(r.micros.is_some());
    }
}
