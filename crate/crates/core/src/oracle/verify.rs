//! Bound checks against oracle values.

use std::fmt::Write as _;

use super::OptStats;

/// Counts of one algorithm run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunSummary {
    pub r: usize,
    pub s: usize,
}

/// `lhs <= rhs`, both scaled by the same positive denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub lhs: i64,
    pub rhs: i64,
    pub scale: i64,
    /// False when the hypothesis of the bound does not hold.
    pub applies: bool,
}

impl Check {
    fn new(name: &'static str, lhs: i64, rhs: i64) -> Self {
        Check {
            name,
            lhs,
            rhs,
            scale: 1,
            applies: true,
        }
    }

    fn scaled(mut self, scale: i64) -> Self {
        self.scale = scale;
        self
    }

    fn when(mut self, applies: bool) -> Self {
        self.applies = applies;
        self
    }

    pub fn holds(&self) -> bool {
        !self.applies || self.lhs <= self.rhs
    }

    pub fn slack(&self) -> f64 {
        (self.rhs - self.lhs) as f64 / self.scale as f64
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(Check::holds)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.holds()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per check: name, applies, lhs, rhs, verdict.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("check\tapplies\tlhs\trhs\tresult\n");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                c.name,
                c.applies,
                c.lhs as f64 / c.scale as f64,
                c.rhs as f64 / c.scale as f64,
                if c.holds() { "pass" } else { "FAIL" }
            );
        }
        out
    }
}

/// Evaluates every bound that relates the runs to the optimum.
pub fn verify_inequalities(
    opt: &OptStats,
    exp_total: usize,
    greedy: RunSummary,
    bipartite: Option<RunSummary>,
) -> VerifyReport {
    let r_opt = opt.r_opt as i64;
    let s_opt = opt.s_opt as i64;
    let h = opt.h as i64;
    let t = opt.t as i64;
    let rg = greedy.r as i64;
    let sg = greedy.s as i64;
    let delta3 = opt.delta >= 3;
    let mut checks = vec![
        Check::new("s_greedy_le_exp", sg, exp_total as i64),
        Check::new("exp_le_2s_opt", exp_total as i64, 2 * s_opt),
        Check::new("s_greedy_le_2s_opt", sg, 2 * s_opt),
        Check::new("r_greedy_le_2r_opt_h_2", rg, 2 * r_opt + h - 2),
        Check::new("h_odd_le_4r_opt", opt.h_odd as i64, 4 * r_opt),
        Check::new("delta3_h_le_2r_opt", h, 2 * r_opt).when(delta3),
        Check::new("delta3_r_greedy_le_4r_opt_2", rg, 4 * r_opt - 2).when(delta3),
        Check::new("h2_le_4r_opt_t", opt.h2 as i64, 4 * r_opt + t),
        Check::new("holes_meet_two_segments", i64::from(!opt.holes_meet_two), 0)
            .when(opt.r_opt >= 2),
        Check::new("h_le_s_opt", h, s_opt).when(opt.r_opt >= 2),
        Check::new("h_le_6r_opt_t_4", h, 6 * r_opt + t - 4).when(opt.r_opt >= 2),
        Check::new("r_greedy_le_8r_opt_t_6", rg, 8 * r_opt + t - 6),
        Check::new("bundles_le_8bc_t", rg, 8 * r_opt + t),
        Check::new("witness_euler_gap", (r_opt - s_opt + h - 2).abs(), 0),
        Check::new("greedy_euler_gap", (rg - sg + h - 2).abs(), 0),
    ];
    if let Some(b) = bipartite {
        // ceil(3/2 S_opt) compared in halves
        let bound = (3 * s_opt + 1) / 2;
        checks.push(Check::new("s_bip_le_ceil_1_5_s_opt", b.s as i64, bound));
        checks.push(Check::new("r_bip_le_4_5r_opt_t_2", 2 * b.r as i64, 9 * r_opt + t).scaled(2));
        checks.push(Check::new(
            "bipartite_euler_gap",
            (b.r as i64 - b.s as i64 + h - 2).abs(),
            0,
        ));
    }
    VerifyReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inapplicable_checks_hold() {
        let c = Check::new("x", 5, 1).when(false);
        assert!(c.holds());
        assert!(!Check::new("y", 5, 1).holds());
        assert_eq!(Check::new("z", 3, 9).scaled(2).slack(), 3.0);
    }
}
