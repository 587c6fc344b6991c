//! Registry of experiments with their parameter schemas.

use crate::config::{param, ExperimentConfig, Kind, Param};
use crate::error::Result;
use crate::experiments as ex;
use crate::table::ResultTable;

pub struct Experiment {
    pub name: &'static str,
    pub description: &'static str,
    pub params: &'static [Param],
    pub run: fn(&ExperimentConfig) -> Result<ResultTable>,
}

const POS: Kind = Kind::Positive;
const NONNEG: Kind = Kind::NonNegative;
const REAL: Kind = Kind::Real;
const LIST: Kind = Kind::RealList;
const COUNT: Kind = Kind::Int { min: 1 };
const SEED: Kind = Kind::Int { min: 0 };

const LATTICE: [Param; 3] = [
    param("d", COUNT, "1", "lattice dimension"),
    param("n_per_side", COUNT, "64", "sites per side"),
    param("spacing", POS, "1", "lattice spacing"),
];

macro_rules! with_lattice {
    ($($p:expr),* $(,)?) => {
        &[LATTICE[0], LATTICE[1], LATTICE[2], $($p),*]
    };
}

pub const EXPERIMENTS: &[Experiment] = &[
    Experiment {
        name: "particle-spectrum",
        description: "Relevance spectrum of Gaussian smearing on a 1D Gaussian prior: closed form vs kernel eigensolve",
        params: &[
            param("tau", POS, "1", "prior standard deviation"),
            param("sigma", POS, "1", "smearing width"),
            param("n_max", COUNT, "6", "number of eigenpairs, n = 0..n_max-1"),
            param("grid_lo", REAL, "-10", "grid lower end"),
            param("grid_hi", REAL, "10", "grid upper end"),
            param("grid_points", Kind::Int { min: 2 }, "2001", "grid points"),
        ],
        run: ex::particle_spectrum,
    },
    Experiment {
        name: "ptrace-relevance",
        description: "Eigenrelevances of a partial trace at the maximally mixed bipartite state",
        params: &[
            param("dim_a", COUNT, "2", "dimension of factor A"),
            param("dim_b", COUNT, "2", "dimension of factor B"),
            param("traced", Kind::Choice(&["A", "B"]), "B", "factor traced out"),
            param("tol", POS, "1e-10", "grouping tolerance for multiplicities"),
        ],
        run: ex::ptrace_relevance,
    },
    Experiment {
        name: "qft-flow",
        description: "Regulated quartic coupling flow and drift of the relevant expectations",
        params: &[
            param("tau_phys", POS, "1", "physical width"),
            param("lam_phys", NONNEG, "1e-3", "physical quartic coupling"),
            param("eps", LIST, "0,5e-4,1e-3", "regulator values"),
        ],
        run: ex::qft_flow,
    },
    Experiment {
        name: "stat-flow",
        description: "Second moment of the quartic model against the flowed Gaussian",
        params: &[
            param("tau", POS, "1", "Gaussian width"),
            param("lam", LIST, "1e-2,1e-3", "quartic couplings"),
        ],
        run: ex::stat_flow,
    },
    Experiment {
        name: "generating-function",
        description: "Max-norm error of the smearing kernel on exponential generating functions",
        params: &[
            param("tau", POS, "1", "prior standard deviation"),
            param("sigma", POS, "1", "smearing width"),
            param("t", LIST, "0.25,0.5,1", "generating-function parameters"),
            param("grid_lo", REAL, "-20", "grid lower end"),
            param("grid_hi", REAL, "20", "grid upper end"),
            param("grid_points", Kind::Int { min: 2 }, "4001", "grid points"),
        ],
        run: ex::generating_function,
    },
    Experiment {
        name: "field-mode-relevance",
        description: "Per-mode relevance of a lattice free field against the particle closed form",
        params: with_lattice![
            param("beta", POS, "1", "inverse temperature"),
            param("mass", NONNEG, "1", "mass; zero drops the zero mode"),
            param("h", POS, "0.5", "field-value precision"),
            param("sigma", POS, "0.5", "distance precision"),
            param("degree", SEED, "1", "Hermite degree"),
        ],
        run: ex::field_mode_relevance,
    },
    Experiment {
        name: "quadratic-relevance",
        description: "Relevance of the quadratic field observable summed over lattice modes",
        params: with_lattice![
            param("beta", POS, "1", "inverse temperature"),
            param("mass", NONNEG, "1", "mass; zero drops the zero mode"),
            param("h", POS, "0.5", "field-value precision"),
            param("sigma", POS, "0.5", "distance precision"),
        ],
        run: ex::quadratic_relevance,
    },
    Experiment {
        name: "h-operator",
        description: "H-operator symmetry and A-orthonormal eigenbasis on random positive triples",
        params: &[
            param("n", COUNT, "4", "matrix size"),
            param("instances", COUNT, "20", "number of random triples"),
            param("seed", SEED, "2024", "random seed"),
        ],
        run: ex::h_operator,
    },
    Experiment {
        name: "quantum-particle",
        description: "Position and momentum relevance of a thermal mode under classical noise: closed forms vs Fock basis",
        params: &[
            param("u", POS, "2", "mode parameter u"),
            param("v", POS, "1", "mode parameter v"),
            param("sigma_x", NONNEG, "1", "position noise variance"),
            param("sigma_p", NONNEG, "1", "momentum noise variance"),
            param("fock_levels", COUNT, "60", "retained number states"),
            param("fock_work", COUNT, "200", "working number states"),
            param("grid_nodes", COUNT, "21", "displacement grid nodes per axis"),
            param("grid_span", POS, "5", "displacement grid half-width in standard deviations"),
            param("mixing", NONNEG, "1e-9", "maximally mixed admixture"),
            param("match_tol", POS, "1e-2", "agreement tolerance for the matches column"),
        ],
        run: ex::quantum_particle,
    },
    Experiment {
        name: "quantum-field-mode",
        description: "Field and momentum relevance of free quantum field modes",
        params: &[
            param("k", LIST, "0,0.5,1,2", "wavenumbers"),
            param("mass", NONNEG, "1", "mass"),
            param("beta", POS, "1", "inverse temperature"),
            param("y_phi", NONNEG, "1", "field noise variance"),
            param("y_pi", NONNEG, "1", "momentum noise variance"),
            param("sigma", NONNEG, "0", "smearing width"),
        ],
        run: ex::quantum_field_mode,
    },
    Experiment {
        name: "cutoff-equivalence",
        description: "Thermal states of two momentum-cutoff Hamiltonians compared below the coarse scale",
        params: with_lattice![
            param("beta", POS, "1", "inverse temperature"),
            param("mass", POS, "1", "mass"),
            param("sigma", POS, "1.4", "coarse scale"),
            param("eps_cut", POS, "0.35", "fine cutoff"),
            param("relevant_order", COUNT, "2", "largest correlation order compared"),
        ],
        run: ex::cutoff,
    },
    Experiment {
        name: "metric-suite",
        description: "Monotonicity, relevance bounds and metric identities on random states and channels",
        params: &[
            param("instances", COUNT, "100", "number of random instances"),
            param("seed", SEED, "9", "random seed"),
        ],
        run: ex::metric_suite,
    },
];

pub fn find(name: &str) -> Option<&'static Experiment> {
    EXPERIMENTS.iter().find(|e| e.name == name)
}

/// Human-readable catalog for `list`.
pub fn render() -> String {
    let mut out = String::new();
    for e in EXPERIMENTS {
        out.push_str(&format!("{}\n    {}\n", e.name, e.description));
        for p in e.params {
            let default = p.default.unwrap_or("(required)");
            out.push_str(&format!(
                "    {:<16} {:<22} default {:<14} {}\n",
                p.name,
                p.kind.describe(),
                default,
                p.help
            ));
        }
    }
    out
}
