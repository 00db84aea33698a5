use serde::{Deserialize, Serialize};

use crate::embedding::DemandRobustEmbedding;
use crate::error::{invalid, Result};
use crate::graph::{components, sets_connected, EdgeSet, WeightedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    /// Group Steiner tree: every group reaches the root.
    Tree,
    /// Group Steiner forest: every pair `(A, B)` is joined.
    Forest,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Demands {
    Groups { groups: Vec<Vec<usize>> },
    Pairs { pairs: Vec<(Vec<usize>, Vec<usize>)> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub sigma: f64,
    #[serde(flatten)]
    pub demands: Demands,
}

impl Scenario {
    pub fn groups(sigma: f64, groups: Vec<Vec<usize>>) -> Self {
        Self { sigma, demands: Demands::Groups { groups } }
    }

    pub fn pairs(sigma: f64, pairs: Vec<(Vec<usize>, Vec<usize>)>) -> Self {
        Self { sigma, demands: Demands::Pairs { pairs } }
    }

    pub fn kind(&self) -> ProblemKind {
        match self.demands {
            Demands::Groups { .. } => ProblemKind::Tree,
            Demands::Pairs { .. } => ProblemKind::Forest,
        }
    }

    /// Whether `X_0 + X_i` (given as component labels) serves this scenario.
    pub fn served(&self, labels: &[usize], root: usize) -> bool {
        match &self.demands {
            Demands::Groups { groups } => groups.iter().all(|g| sets_connected(labels, g, &[root])),
            Demands::Pairs { pairs } => pairs.iter().all(|(a, b)| sets_connected(labels, a, b)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RobustInstance {
    pub scenarios: Vec<Scenario>,
}

impl RobustInstance {
    pub fn new(scenarios: Vec<Scenario>) -> Self {
        Self { scenarios }
    }

    pub fn m(&self) -> usize {
        self.scenarios.len()
    }

    /// `None` for an empty scenario list.
    pub fn kind(&self) -> Option<ProblemKind> {
        self.scenarios.first().map(Scenario::kind)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let kind = self.kind();
        for (i, s) in self.scenarios.iter().enumerate() {
            if !(s.sigma >= 1.0 && s.sigma.is_finite()) {
                return invalid(format!("scenario {i}: sigma {} must be at least 1", s.sigma));
            }
            if Some(s.kind()) != kind {
                return invalid(format!("scenario {i} mixes groups and pairs"));
            }
            let sets: Vec<&Vec<usize>> = match &s.demands {
                Demands::Groups { groups } => groups.iter().collect(),
                Demands::Pairs { pairs } => pairs.iter().flat_map(|(a, b)| [a, b]).collect(),
            };
            for set in sets {
                if set.is_empty() {
                    return invalid(format!("scenario {i} has an empty vertex set"));
                }
                if let Some(v) = set.iter().find(|&&v| v >= n) {
                    return invalid(format!("scenario {i}: vertex {v} out of range"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RobustSolution {
    pub first_stage: EdgeSet,
    pub second_stage: Vec<EdgeSet>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobustEvaluation {
    pub worst_case: f64,
    pub per_scenario: Vec<f64>,
    pub feasible: Vec<bool>,
}

impl RobustEvaluation {
    pub fn all_feasible(&self) -> bool {
        self.feasible.iter().all(|&b| b)
    }
}

/// `max_i w(X_0) + sigma_i w(X_i)` plus per-scenario feasibility.
pub fn evaluate_robust(g: &WeightedGraph, root: usize, sol: &RobustSolution, inst: &RobustInstance) -> Result<RobustEvaluation> {
    if sol.second_stage.len() != inst.m() {
        return invalid(format!("solution has {} second stages for {} scenarios", sol.second_stage.len(), inst.m()));
    }
    sol.first_stage.validate(g)?;
    let w0 = sol.first_stage.weight(g);
    let mut per_scenario = Vec::with_capacity(inst.m());
    let mut feasible = Vec::with_capacity(inst.m());
    for (s, xi) in inst.scenarios.iter().zip(&sol.second_stage) {
        xi.validate(g)?;
        per_scenario.push(w0 + s.sigma * xi.weight(g));
        feasible.push(s.served(&components(g, &sol.first_stage.union(xi)), root));
    }
    let worst_case = per_scenario.iter().copied().fold(0.0, f64::max);
    Ok(RobustEvaluation { worst_case, per_scenario, feasible })
}

/// Replaces every vertex set by the union of its copies.
pub fn map_robust_instance(inst: &RobustInstance, d: &DemandRobustEmbedding) -> Result<RobustInstance> {
    if inst.m() > d.scenarios {
        return invalid(format!("embedding sized for {} scenarios, instance has {}", d.scenarios, inst.m()));
    }
    inst.validate(d.embedding.graph().n())?;
    let e = &d.embedding;
    let scenarios = inst
        .scenarios
        .iter()
        .map(|s| Scenario {
            sigma: s.sigma,
            demands: match &s.demands {
                Demands::Groups { groups } => Demands::Groups { groups: groups.iter().map(|g| e.lift(g)).collect() },
                Demands::Pairs { pairs } => {
                    Demands::Pairs { pairs: pairs.iter().map(|(a, b)| (e.lift(a), e.lift(b))).collect() }
                }
            },
        })
        .collect();
    Ok(RobustInstance { scenarios })
}
