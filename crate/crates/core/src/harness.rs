//! Batch runs over generated instances with every invariant checked.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arrangement::{planarize_components, Arrangement};
use crate::bipartite::bipartite_pipeline;
use crate::error::Result;
use crate::generate::{bilaminar_polygon, generate, Family, GeneratorSpec};
use crate::net::{check_pseudosegments, net_of, DualNet};
use crate::oracle::verify::{verify_inequalities, RunSummary};
use crate::oracle::{brute_force_min_rectangulation, DEFAULT_CAP};
use crate::rectangulation::{
    extract_rectangulation, gamma_checks, greedy_rectangulate, is_saturating, to_bundling, CutSet,
    VertexOrder,
};

/// A run of `count` seeds of one family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Suite {
    pub family: String,
    pub count: u64,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub suites: Vec<Suite>,
    #[serde(default = "default_cap")]
    pub oracle_cap: usize,
    #[serde(default = "yes")]
    pub bipartite: bool,
    #[serde(default)]
    pub random_order: bool,
}

fn default_cap() -> usize {
    DEFAULT_CAP
}

fn yes() -> bool {
    true
}

impl HarnessConfig {
    /// 1000 circular instances with 3 to 8 chords.
    pub fn circular_default() -> HarnessConfig {
        HarnessConfig {
            suites: (3..=8)
                .map(|n| Suite {
                    family: format!("circular:{n}"),
                    count: if n == 8 { 170 } else { 166 },
                    seed: 0,
                })
                .collect(),
            oracle_cap: DEFAULT_CAP,
            bipartite: true,
            random_order: false,
        }
    }

    pub fn specs(&self) -> Result<Vec<GeneratorSpec>> {
        let mut out = Vec::new();
        for s in &self.suites {
            let family: Family = s.family.parse()?;
            out.extend((0..s.count).map(|i| GeneratorSpec {
                family: family.clone(),
                seed: s.seed + i,
            }));
        }
        Ok(out)
    }
}

/// Measurements on one connected component.
#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub squares: usize,
    pub h: usize,
    pub t: usize,
    pub exp: usize,
    pub r_greedy: usize,
    pub s_greedy: usize,
    pub bundles: usize,
    pub bipartite: Option<(usize, usize)>,
    pub r_opt: Option<usize>,
    pub s_opt: Option<usize>,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub enum Outcome {
    Solved(Vec<ComponentReport>),
    Rejected(String),
    Error(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub spec: String,
    pub seed: u64,
    pub outcome: Outcome,
}

impl InstanceReport {
    /// Invariant failures, including unexpected acceptance or rejection.
    pub fn failures(&self) -> Vec<String> {
        let negative = is_negative(&self.spec);
        match &self.outcome {
            Outcome::Rejected(why) if !negative => vec![format!("unexpected rejection: {why}")],
            Outcome::Rejected(_) => vec![],
            Outcome::Error(e) => vec![format!("error: {e}")],
            Outcome::Solved(_) if negative => vec!["forbidden pattern accepted".into()],
            Outcome::Solved(cs) => cs.iter().flat_map(|c| c.failures.clone()).collect(),
        }
    }
}

fn is_negative(family: &str) -> bool {
    ["ring", "loop", "lens"]
        .iter()
        .any(|p| family.starts_with(p))
}

/// Builds, validates, solves and checks one instance.
pub fn run_instance(
    spec: &GeneratorSpec,
    cap: usize,
    order: VertexOrder,
    bipartite: bool,
) -> InstanceReport {
    let outcome = match generate(spec) {
        Ok(arr) => run_arrangement(spec, &arr, cap, order, bipartite),
        Err(e) => Outcome::Error(e.to_string()),
    };
    InstanceReport {
        spec: spec.family.to_string(),
        seed: spec.seed,
        outcome,
    }
}

fn run_arrangement(
    spec: &GeneratorSpec,
    arr: &Arrangement,
    cap: usize,
    order: VertexOrder,
    bipartite: bool,
) -> Outcome {
    let parts = match planarize_components(arr) {
        Ok(p) => p,
        Err(e) => return Outcome::Rejected(e.to_string()),
    };
    let mut reports = Vec::new();
    for p in &parts {
        let violations = check_pseudosegments(p);
        if !violations.is_empty() {
            return Outcome::Rejected(format!("{:?}", violations.violations));
        }
        let net = match net_of(p) {
            Ok(n) => n,
            Err(e) => return Outcome::Error(e.to_string()),
        };
        let mut rep =
            match check_component(&net, cap, order, bipartite && p.arrangement.is_bipartite()) {
                Ok(r) => r,
                Err(e) => return Outcome::Error(e.to_string()),
            };
        if matches!(spec.family, Family::Circular { .. }) && rep.t != 0 {
            rep.failures
                .push(format!("circular instance with t = {}", rep.t));
        }
        reports.push(rep);
    }
    if let (Some(poly), [rep]) = (bilaminar_polygon(spec), reports.as_mut_slice()) {
        if let (Ok(sol), Some(r_opt)) = (poly.exact(), rep.r_opt) {
            if sol.rectangles != r_opt {
                rep.failures.push(format!(
                    "ortho exact R {} vs net R_opt {}",
                    sol.rectangles, r_opt
                ));
            }
        }
    }
    Outcome::Solved(reports)
}

/// Greedy, bipartite pipeline, Gamma, oracle and bound checks on one net.
pub fn check_component(
    net: &DualNet,
    cap: usize,
    order: VertexOrder,
    bipartite: bool,
) -> Result<ComponentReport> {
    let mut failures = Vec::new();
    let cutset = greedy_rectangulate(net, &CutSet::default(), order);
    if !is_saturating(net, &cutset) {
        failures.push("greedy cut-set not saturating".into());
    }
    let rect = extract_rectangulation(net, &cutset)?;
    if rect.euler() != 2 {
        failures.push(format!("Euler identity gives {}", rect.euler()));
    }
    let gamma = gamma_checks(net, &rect);
    if !gamma.passed() {
        failures.push(format!("Gamma checks: {gamma:?}"));
    }
    let bundles = to_bundling(net, &rect)?.count();
    let bip = if bipartite {
        let b = bipartite_pipeline(net, order)?;
        if b.rectangulation.euler() != 2 {
            failures.push("bipartite rectangulation breaks Euler identity".into());
        }
        Some((b.rectangulation.r, b.rectangulation.s))
    } else {
        None
    };
    let mut rep = ComponentReport {
        squares: net.num_squares(),
        h: net.hole_count(),
        t: net.toothed_count(),
        exp: net.total_exponent(),
        r_greedy: rect.r,
        s_greedy: rect.s,
        bundles,
        bipartite: bip,
        r_opt: None,
        s_opt: None,
        failures,
    };
    if net.num_squares() <= cap {
        let opt = brute_force_min_rectangulation(net, cap)?;
        let report = verify_inequalities(
            &opt,
            rep.exp,
            RunSummary {
                r: rect.r,
                s: rect.s,
            },
            bip.map(|(r, s)| RunSummary { r, s }),
        );
        rep.failures.extend(
            report
                .failures()
                .iter()
                .map(|c| format!("bound {} ({} > {})", c.name, c.lhs, c.rhs)),
        );
        rep.r_opt = Some(opt.r_opt);
        rep.s_opt = Some(opt.s_opt);
    }
    Ok(rep)
}

/// Worst observed approximation ratios.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Ratios {
    pub r_greedy: f64,
    pub s_greedy: f64,
    pub s_bipartite: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HarnessReport {
    pub instances: Vec<InstanceReport>,
    pub worst: Ratios,
}

impl HarnessReport {
    pub fn failures(&self) -> Vec<(String, u64, String)> {
        self.instances
            .iter()
            .flat_map(|i| {
                i.failures()
                    .into_iter()
                    .map(move |f| (i.spec.clone(), i.seed, f))
            })
            .collect()
    }

    pub fn count(&self, pred: impl Fn(&Outcome) -> bool) -> usize {
        self.instances.iter().filter(|i| pred(&i.outcome)).count()
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let solved = self.count(|o| matches!(o, Outcome::Solved(_)));
        let rejected = self.count(|o| matches!(o, Outcome::Rejected(_)));
        let _ = writeln!(
            out,
            "instances {}  solved {}  rejected {}  failures {}",
            self.instances.len(),
            solved,
            rejected,
            self.failures().len()
        );
        let _ = writeln!(
            out,
            "worst R_greedy/R_opt {:.3}  S_greedy/S_opt {:.3}  S_bip/S_opt {:.3}",
            self.worst.r_greedy, self.worst.s_greedy, self.worst.s_bipartite
        );
        for (spec, seed, f) in self.failures().iter().take(20) {
            let _ = writeln!(out, "FAIL {spec} seed {seed}: {f}");
        }
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("spec\tseed\tcomponent\tsquares\tH\tt\texp\tR\tS\tbundles\tR_opt\tS_opt\tR_bip\tS_bip\tstatus\n");
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        for i in &self.instances {
            match &i.outcome {
                Outcome::Solved(cs) => {
                    for (k, c) in cs.iter().enumerate() {
                        let _ = writeln!(
                            out,
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            i.spec,
                            i.seed,
                            k,
                            c.squares,
                            c.h,
                            c.t,
                            c.exp,
                            c.r_greedy,
                            c.s_greedy,
                            c.bundles,
                            opt(c.r_opt),
                            opt(c.s_opt),
                            opt(c.bipartite.map(|b| b.0)),
                            opt(c.bipartite.map(|b| b.1)),
                            if c.failures.is_empty() { "ok" } else { "FAIL" }
                        );
                    }
                }
                Outcome::Rejected(_) => {
                    let _ = writeln!(
                        out,
                        "{}\t{}\t-\t-\t-\t-\t-\t-\t-\t-\t-\t-\t-\t-\trejected",
                        i.spec, i.seed
                    );
                }
                Outcome::Error(_) => {
                    let _ = writeln!(
                        out,
                        "{}\t{}\t-\t-\t-\t-\t-\t-\t-\t-\t-\t-\t-\t-\terror",
                        i.spec, i.seed
                    );
                }
            }
        }
        out
    }
}

/// Runs every instance of the config in parallel.
pub fn run_harness(cfg: &HarnessConfig) -> Result<HarnessReport> {
    let specs = cfg.specs()?;
    let instances: Vec<InstanceReport> = specs
        .par_iter()
        .map(|spec| {
            let order = if cfg.random_order {
                VertexOrder::Random(spec.seed)
            } else {
                VertexOrder::ById
            };
            run_instance(spec, cfg.oracle_cap, order, cfg.bipartite)
        })
        .collect();
    let mut worst = Ratios::default();
    for i in &instances {
        let Outcome::Solved(cs) = &i.outcome else {
            continue;
        };
        for c in cs {
            if let (Some(r), Some(s)) = (c.r_opt, c.s_opt) {
                worst.r_greedy = worst.r_greedy.max(c.r_greedy as f64 / r as f64);
                if s > 0 {
                    worst.s_greedy = worst.s_greedy.max(c.s_greedy as f64 / s as f64);
                    if let Some((_, sb)) = c.bipartite {
                        worst.s_bipartite = worst.s_bipartite.max(sb as f64 / s as f64);
                    }
                }
            }
        }
    }
    Ok(HarnessReport { instances, worst })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_family_is_rejected() {
        let spec = GeneratorSpec {
            family: Family::Ring { m: 3 },
            seed: 0,
        };
        let rep = run_instance(&spec, 20, VertexOrder::ById, true);
        assert!(matches!(rep.outcome, Outcome::Rejected(_)));
        assert!(rep.failures().is_empty());
    }

    #[test]
    fn small_suite_runs_clean() {
        let cfg = HarnessConfig {
            suites: vec![Suite {
                family: "circular:5".into(),
                count: 10,
                seed: 0,
            }],
            oracle_cap: 20,
            bipartite: true,
            random_order: false,
        };
        let rep = run_harness(&cfg).unwrap();
        assert_eq!(rep.instances.len(), 10);
        assert!(rep.failures().is_empty(), "{}", rep.summary());
    }
}
