//! Scenario files: a JSON description of an algebra, named densities and
//! elements, and a list of analyses to run against them.
//!
//! Complex scalars are `[re, im]` pairs; a matrix is an array of rows; a
//! block-diagonal element is an array of matrices ordered like
//! `algebra.block_dims`. Named partitions list the names of their atom
//! elements.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use bures_core::algebra::{Algebra, Element};
use bures_core::forms::PositiveForm;
use bures_core::subalgebras::AbelianSubalgebra;

use crate::CliError;

pub type WireElement = Vec<Vec<Vec<[f64; 2]>>>;

pub fn to_wire(el: &Element) -> WireElement {
    el.to_complex_rows()
        .into_iter()
        .map(|rows| {
            rows.into_iter()
                .map(|row| row.into_iter().map(|(re, im)| [re, im]).collect())
                .collect()
        })
        .collect()
}

fn from_wire(algebra: &Algebra, wire: &WireElement, what: &str) -> Result<Element, CliError> {
    let rows: Vec<Vec<Vec<(f64, f64)>>> = wire
        .iter()
        .map(|block| {
            block
                .iter()
                .map(|row| row.iter().map(|e| (e[0], e[1])).collect())
                .collect()
        })
        .collect();
    Element::from_complex_rows(algebra.clone(), rows)
        .map_err(|e| CliError::Validation(format!("{what}: {e}")))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub block_dims: Vec<usize>,
}

/// Tolerance overrides; anything omitted keeps its default.
#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Comparisons of computed values against expectations or each other.
    pub check: f64,
    /// Gap bound of the minimizing-subalgebra verdict.
    pub minimizing: f64,
    /// Residual bound of the minimizing-element criterion.
    pub minimizing_element: f64,
    /// Attainment tolerance of the sequence criterion.
    pub sequence: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            check: 1e-9,
            minimizing: 1e-7,
            minimizing_element: 1e-9,
            sequence: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub algebra: AlgebraSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    #[serde(default)]
    pub forms: BTreeMap<String, WireElement>,
    #[serde(default)]
    pub elements: BTreeMap<String, WireElement>,
    #[serde(default)]
    pub partitions: BTreeMap<String, Vec<String>>,
    pub analyses: Vec<serde_json::Value>,
}

/// Probe material for the least-algebra analysis, by name.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeSpec {
    #[serde(default)]
    pub generator: Option<String>,
    #[serde(default)]
    pub kernel_elements: Vec<String>,
    #[serde(default)]
    pub automorphisms: Vec<AutomorphismSpec>,
    #[serde(default)]
    pub shifts: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismSpec {
    #[serde(default)]
    pub unitary: Option<String>,
    #[serde(default)]
    pub permutation: Option<Vec<usize>>,
    pub k: String,
}

/// One requested analysis. The `op` tag selects the computation; all other
/// fields name scenario objects or carry parameters.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum AnalysisRequest {
    Fidelity {
        nu: String,
        rho: String,
        #[serde(default)]
        expect_sqrt_p: Option<f64>,
    },
    GammaSup {
        nu: String,
        rho: String,
        z: String,
    },
    Uhlmann {
        mu: String,
        a: String,
        b: String,
    },
    Bounds {
        nu: String,
        rho: String,
        a: String,
        #[serde(default)]
        f_value: Option<f64>,
    },
    GeometricMean {
        nu: String,
        rho: String,
        x: String,
    },
    ArithmeticMean {
        nu: String,
        rho: String,
        x: String,
    },
    Minimize {
        nu: String,
        rho: String,
        #[serde(default)]
        max_iters: Option<usize>,
        #[serde(default)]
        tol: Option<f64>,
        #[serde(default)]
        initial_step: Option<f64>,
    },
    DecompositionValue {
        nu: String,
        rho: String,
        partition: String,
    },
    DoubleSystemValue {
        nu: String,
        rho: String,
        pairs: Vec<(String, String)>,
    },
    Sequence {
        nu: String,
        rho: String,
        xs: Vec<String>,
    },
    Tau {
        nu: String,
        rho: String,
        z: String,
    },
    FactorizationFidelity {
        nu: String,
        rho: String,
        a: String,
        b: String,
    },
    BuresVariational {
        nu: String,
        rho: String,
        a: String,
        b: String,
        witnesses: Vec<String>,
    },
    Subadditivity {
        nu: String,
        rho: String,
        a: String,
        b: String,
        split: Vec<(String, String)>,
    },
    Minset {
        nu: String,
        rho: String,
        #[serde(default)]
        expect: Option<MinsetExpectation>,
    },
    MinimizingElement {
        nu: String,
        rho: String,
        x: String,
        #[serde(default)]
        expect: Option<bool>,
    },
    InverseIdentity {
        nu: String,
        rho: String,
        z: String,
        x: String,
    },
    RestrictedP {
        nu: String,
        rho: String,
        partition: String,
    },
    MinimizingSubalgebra {
        nu: String,
        rho: String,
        partition: String,
        #[serde(default)]
        expect: Option<bool>,
    },
    Projective {
        nu: String,
        rho: String,
        partition: String,
        #[serde(default)]
        expect: Option<bool>,
    },
    RelativeRn {
        nu: String,
        rho: String,
        partition: String,
    },
    CompressionIdentity {
        nu: String,
        rho: String,
        partition: String,
        p: String,
    },
    Intersect {
        r1: String,
        r2: String,
    },
    LeastAlgebra {
        nu: String,
        rho: String,
        #[serde(default)]
        probes: Option<ProbeSpec>,
        #[serde(default)]
        expect: Option<LeastExpectation>,
    },
    Hereditary {
        nu: String,
        rho: String,
    },
    SupportCase {
        x: String,
    },
    ProjectiveEquivalence {
        nu: String,
        rho: String,
        partition: String,
    },
    Sweep {
        nu: String,
        rho: String,
        grid: usize,
        #[serde(default)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinsetExpectation {
    NonEmpty,
    OrthogonalForms,
    FaithfulnessMismatch,
    SupportMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeastExpectation {
    Exists,
    NotExists,
    Undecided,
}

const KNOWN_OPS: &[&str] = &[
    "fidelity",
    "gamma_sup",
    "uhlmann",
    "bounds",
    "geometric_mean",
    "arithmetic_mean",
    "minimize",
    "decomposition_value",
    "double_system_value",
    "sequence",
    "tau",
    "factorization_fidelity",
    "bures_variational",
    "subadditivity",
    "minset",
    "minimizing_element",
    "inverse_identity",
    "restricted_p",
    "minimizing_subalgebra",
    "projective",
    "relative_rn",
    "compression_identity",
    "intersect",
    "least_algebra",
    "hereditary",
    "support_case",
    "projective_equivalence",
    "sweep",
];

/// A parsed and validated scenario.
pub struct Scenario {
    pub algebra: Algebra,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub forms: BTreeMap<String, PositiveForm>,
    pub elements: BTreeMap<String, Element>,
    pub partitions: BTreeMap<String, AbelianSubalgebra>,
    pub analyses: Vec<AnalysisRequest>,
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, CliError> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| {
            CliError::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        let algebra = Algebra::new(file.algebra.block_dims.clone())
            .map_err(|e| CliError::Validation(format!("algebra: {e}")))?;

        let mut elements = BTreeMap::new();
        for (name, wire) in &file.elements {
            elements.insert(
                name.clone(),
                from_wire(&algebra, wire, &format!("element `{name}`"))?,
            );
        }

        let mut forms = BTreeMap::new();
        for (name, wire) in &file.forms {
            let density = from_wire(&algebra, wire, &format!("form `{name}`"))?;
            let form = PositiveForm::new(density)
                .map_err(|e| CliError::Validation(format!("form `{name}`: {e}")))?;
            forms.insert(name.clone(), form);
        }

        let mut partitions = BTreeMap::new();
        for (name, atom_names) in &file.partitions {
            let mut atoms = Vec::new();
            for atom in atom_names {
                let el = elements.get(atom).ok_or_else(|| {
                    CliError::Validation(format!("partition `{name}`: unknown element `{atom}`"))
                })?;
                atoms.push(el.clone());
            }
            let partition = AbelianSubalgebra::new(atoms)
                .map_err(|e| CliError::Validation(format!("partition `{name}`: {e}")))?;
            partitions.insert(name.clone(), partition);
        }

        let mut analyses = Vec::with_capacity(file.analyses.len());
        for (i, raw) in file.analyses.iter().enumerate() {
            let op = raw
                .get("op")
                .and_then(|v| v.as_str())
                .ok_or_else(|| CliError::Parse(format!("analysis {i}: missing `op` field")))?;
            if !KNOWN_OPS.contains(&op) {
                return Err(CliError::UnknownAnalysis(op.to_string()));
            }
            let parsed: AnalysisRequest = serde_json::from_value(raw.clone())
                .map_err(|e| CliError::Parse(format!("analysis {i} (`{op}`): {e}")))?;
            analyses.push(parsed);
        }

        Ok(Scenario {
            algebra,
            seed: file.seed,
            tolerances: file.tolerances.unwrap_or_default(),
            forms,
            elements,
            partitions,
            analyses,
        })
    }

    pub fn form(&self, name: &str) -> Result<&PositiveForm, CliError> {
        self.forms
            .get(name)
            .ok_or_else(|| CliError::Validation(format!("unknown form `{name}`")))
    }

    pub fn element(&self, name: &str) -> Result<&Element, CliError> {
        self.elements
            .get(name)
            .ok_or_else(|| CliError::Validation(format!("unknown element `{name}`")))
    }

    pub fn partition(&self, name: &str) -> Result<&AbelianSubalgebra, CliError> {
        self.partitions
            .get(name)
            .ok_or_else(|| CliError::Validation(format!("unknown partition `{name}`")))
    }
}
