//! Every runnable scenario and checker, with its parameter schema.

use qsplit_core::acceptance::{run_criterion, CRITERIA};
use qsplit_core::fieldnum::{commutator_functions_with, delta_plus_with, IntervalKind, IntervalPoint, Method, QuadratureConfig};
use qsplit_core::qcore::gates::{cnot, cz, j_squared_basis, bell_basis, sigma_z, swap};
use qsplit_core::qcore::{random_unitary, spectral_decomposition, Basis, CompositeSpace, Operator, DEFAULT_CLUSTER_TOL};
use qsplit_core::relcheck::{mc_implies_f_witness, signaling_game, Channel};
use qsplit_core::scenarios::{
    aharonov_albert_jz, bell_recording, coherence_revival, explorer_report, jsq_signaling, jx_then_jz_split, two_spin_state,
    wigner_friend, BellRecordingParams, ExplorerParams, FriendParams, JsqParams, ScenarioReport,
};
use qsplit_core::seed::derive_seed;

use crate::error::CliError;
use crate::params::{Kind, ParamSpec, Params};

pub struct Context {
    pub seed: u64,
    pub tol: f64,
}

/// A finished run: the report plus free-text notes for the summary.
pub struct Outcome {
    pub report: ScenarioReport,
    pub notes: Vec<String>,
}

impl From<ScenarioReport> for Outcome {
    fn from(report: ScenarioReport) -> Self {
        Outcome { report, notes: Vec::new() }
    }
}

pub struct Entry {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: &'static [ParamSpec],
    pub run: fn(&Params, &Context) -> Result<Outcome, CliError>,
}

const fn p(key: &'static str, kind: Kind, default: &'static str, help: &'static str) -> ParamSpec {
    ParamSpec { key, kind, default, help }
}

const HALF: &str = "0.7071067811865476,0";

pub const CATALOG: &[Entry] = &[
    Entry {
        name: "acceptance_suite",
        summary: "every acceptance criterion, one quantity per criterion",
        params: &[p("criteria", Kind::IntList, "1,2,3,4,5,6,7,8,9,10,11", "criterion ids to run")],
        run: run_acceptance,
    },
    Entry {
        name: "aharonov_albert_jz",
        summary: "nonlocal J_z measurement with two local pointer couplings",
        params: &[
            p("state", Kind::Text, "triplet0", "uu, ud, du, dd, singlet, triplet0, phi_plus, phi_minus or random:SEED"),
            p("pointer_dim", Kind::Int, "5", "odd pointer dimension, at least 5"),
        ],
        run: |p, c| Ok(aharonov_albert_jz(&two_spin_state(p.text("state"))?, p.usize("pointer_dim")?, c.seed, c.tol)?.into()),
    },
    Entry {
        name: "bell_recording",
        summary: "both spins of an entangled pair recorded in conserved bases",
        params: &[
            p("c1", Kind::Complex, HALF, "amplitude of |up,down>"),
            p("c2", Kind::Complex, HALF, "amplitude of |down,up>"),
            p("basis_b", Kind::Basis, "z", "recording basis of spin 1"),
            p("basis_b2", Kind::Basis, "z", "recording basis of spin 2"),
            p("env_dim", Kind::Int, "2", "environment dimension per side"),
            p("nonconserved_angle", Kind::Real, "0", "rotation after each coupling; nonzero reports observations only"),
        ],
        run: |p, c| {
            let params = BellRecordingParams {
                c1: p.complex("c1"),
                c2: p.complex("c2"),
                basis_b: p.basis("basis_b"),
                basis_b2: p.basis("basis_b2"),
                env_dim: p.usize("env_dim")?,
                nonconserved_angle: p.real("nonconserved_angle"),
            };
            Ok(bell_recording(&params, c.tol)?.into())
        },
    },
    Entry {
        name: "coherence_revival",
        summary: "C-NOT recording chain followed by its inverse",
        params: &[
            p("n", Kind::Int, "3", "environment spins, 1..=12"),
            p("collapse", Kind::Bool, "false", "treat the z record as a physical collapse"),
        ],
        run: |p, c| Ok(coherence_revival(p.usize("n")?, p.bool("collapse"), c.seed, c.tol)?.into()),
    },
    Entry {
        name: "commutator_functions",
        summary: "commutator and anticommutator combinations of the free-field two-point function",
        params: &[
            p("t", Kind::Real, "0.5", "time separation"),
            p("r", Kind::Real, "1.5", "spatial separation"),
            p("m", Kind::Real, "1", "mass"),
            p("eps", Kind::Real, "0.01", "largest damping factor of the quadrature ladder"),
        ],
        run: run_commutator,
    },
    Entry {
        name: "jsq_signaling",
        summary: "signaling with an ideal J^2 measurement versus the local J_x-then-J_z channel",
        params: &[
            p("n_pairs", Kind::Int, "100", "pairs per round"),
            p("n_rounds", Kind::Int, "2000", "rounds of the game"),
            p("pointer_dim", Kind::Int, "5", "pointer dimension of the local channel"),
        ],
        run: |p, c| {
            let params = JsqParams {
                n_pairs: p.usize("n_pairs")?,
                n_rounds: p.usize("n_rounds")?,
                pointer_dim: p.usize("pointer_dim")?,
                seed: c.seed,
            };
            Ok(jsq_signaling(&params, c.tol)?.into())
        },
    },
    Entry {
        name: "jx_then_jz_split",
        summary: "local J_x then J_z couplings split histories in the J^2 basis",
        params: &[
            p("state", Kind::Text, "singlet", "initial two-spin state"),
            p("pointer_dim", Kind::Int, "5", "odd pointer dimension, at least 5"),
            p("samples", Kind::Int, "4", "Haar-random probe states"),
        ],
        run: |p, c| {
            let psi = two_spin_state(p.text("state"))?;
            Ok(jx_then_jz_split(&psi, p.usize("pointer_dim")?, p.usize("samples")?, c.seed, c.tol)?.into())
        },
    },
    Entry {
        name: "mc_witness",
        summary: "factorize a two-qubit unitary and search for an Alice-side measurement that moves Bob's marginal",
        params: &[
            p("unitary", Kind::Text, "cnot", "cnot, cz, swap, identity or random:SEED"),
            p("trials", Kind::Int, "100", "random (state, projector) pairs"),
        ],
        run: run_witness,
    },
    Entry {
        name: "no_communication",
        summary: "Alice's nonselective measurement on an entangled pair, then local unitaries",
        params: &[
            p("state", Kind::Text, "phi_plus", "shared two-spin state"),
            p("n_pairs", Kind::Int, "200", "pairs per round"),
            p("n_rounds", Kind::Int, "2000", "rounds of the game"),
        ],
        run: run_no_communication,
    },
    Entry {
        name: "recordable_basis_explorer",
        summary: "search for local couplings that record a two-spin basis",
        params: &[
            p("target", Kind::Text, "j_squared", "j_squared, product or bell"),
            p("trials", Kind::Int, "8", "random candidates"),
            p("refine_steps", Kind::Int, "20", "coordinate-descent sweeps per candidate"),
            p("conserved", Kind::Bool, "false", "also require the basis to be conserved"),
            p("pointer_dim", Kind::Int, "5", "pointer dimension of the seeded candidate"),
        ],
        run: |p, c| {
            let target = match p.text("target") {
                "j_squared" => j_squared_basis(),
                "bell" => bell_basis(),
                "product" => Basis::z().tensor(&Basis::z()),
                other => return Err(CliError::Config(format!("parameter target: unknown basis {other:?}"))),
            };
            let params = ExplorerParams {
                target,
                trials: p.usize("trials")?,
                refine_steps: p.usize("refine_steps")?,
                conserved_constraint: p.bool("conserved"),
                pointer_dim: p.usize("pointer_dim")?,
                seed: c.seed,
                ..ExplorerParams::default()
            };
            Ok(explorer_report(&params)?.into())
        },
    },
    Entry {
        name: "wigner_friend",
        summary: "Wigner's friend, variants 1 to 4",
        params: &[
            p("variant", Kind::Int, "1", "1, 2, 3 or 4"),
            p("c1", Kind::Complex, HALF, "amplitude of |up> (variant 1)"),
            p("c2", Kind::Complex, HALF, "amplitude of |down> (variant 1)"),
            p("alpha", Kind::Complex, "0.9238795325112867,0", "|up> = alpha|up_u> + beta|down_u> (variant 1)"),
            p("beta", Kind::Complex, "0.3826834323650898,0", "see alpha"),
        ],
        run: |p, c| {
            let variant = u8::try_from(p.int("variant")).map_err(|_| CliError::Config("parameter variant: out of range".into()))?;
            let params = FriendParams { c1: p.complex("c1"), c2: p.complex("c2"), alpha: p.complex("alpha"), beta: p.complex("beta") };
            Ok(wigner_friend(variant, &params, c.tol)?.into())
        },
    },
];

pub fn find(name: &str) -> Option<&'static Entry> {
    CATALOG.iter().find(|e| e.name == name)
}

fn run_acceptance(p: &Params, c: &Context) -> Result<Outcome, CliError> {
    let mut report = ScenarioReport::new("acceptance_suite");
    let mut notes = Vec::new();
    for &id in p.int_list("criteria") {
        let outcome = u8::try_from(id)
            .ok()
            .and_then(|id| run_criterion(id, c.seed))
            .ok_or_else(|| {
                let known: Vec<String> = CRITERIA.iter().map(|(i, n)| format!("{i} ({n})")).collect();
                CliError::Config(format!("parameter criteria: unknown criterion {id}; known: {}", known.join(", ")))
            })?;
        report.expect(format!("criterion_{:02}_{}", outcome.id, outcome.name), f64::from(u8::from(outcome.pass)), 1.0, 0.0);
        notes.push(outcome.to_string());
    }
    Ok(Outcome { report, notes })
}

fn run_commutator(p: &Params, c: &Context) -> Result<Outcome, CliError> {
    let point = IntervalPoint::new(p.real("t"), p.real("r"), p.real("m"))?;
    let cfg = QuadratureConfig::with_eps(p.real("eps"));
    let q = commutator_functions_with(&point, Method::Quadrature, &cfg)?;
    let mut r = ScenarioReport::new("commutator_functions");
    r.observe("s2", point.interval_sq());
    r.observe("antisym.re", q.antisym.re);
    r.observe("antisym.im", q.antisym.im);
    r.observe("sym.re", q.sym.re);
    r.observe("sym.im", q.sym.im);
    if point.kind() == IntervalKind::Spacelike {
        r.expect_at_most("antisym_abs", q.antisym.norm(), 0.0, c.tol.max(1e-8));
        r.expect_at_least("sym_abs", q.sym.norm(), 1e-300);
    }
    let notes = match delta_plus_with(&point, Method::ClosedForm, &cfg) {
        Ok(closed) => {
            let quad = (q.sym + q.antisym) * 0.5;
            r.expect("closed_form_relative_gap", (quad - closed).norm() / closed.norm(), 0.0, 1e-6);
            Vec::new()
        }
        Err(e) => vec![format!("no closed form here: {e}")],
    };
    Ok(Outcome { report: r, notes })
}

fn run_witness(p: &Params, c: &Context) -> Result<Outcome, CliError> {
    let name = p.text("unitary");
    let u = match name {
        "cnot" => cnot(),
        "cz" => cz(),
        "swap" => swap(),
        "identity" => Operator::identity(CompositeSpace::qubits(2)),
        other => match other.strip_prefix("random:").map(str::parse::<u64>) {
            Some(Ok(seed)) => random_unitary(CompositeSpace::qubits(2), seed),
            _ => return Err(CliError::Config(format!("parameter unitary: unknown unitary {other:?}"))),
        },
    };
    let w = mc_implies_f_witness(&u, 2, 2, p.usize("trials")?, derive_seed(c.seed, "mc_witness"))?;
    let mut r = ScenarioReport::new("mc_witness");
    r.observe("factorization_residual", w.residual);
    let magnitude = w.witness.as_ref().map_or(0.0, |v| v.magnitude);
    if w.factorized {
        r.expect("witness_magnitude", magnitude, 0.0, c.tol);
    } else {
        r.expect_at_least("witness_magnitude", magnitude, 1e-3);
    }
    let verdict = if w.factorized { "product: no Alice-side measurement can reach Bob" } else { "not a product" };
    Ok(Outcome { report: r, notes: vec![format!("{name}: {verdict}")] })
}

fn run_no_communication(p: &Params, c: &Context) -> Result<Outcome, CliError> {
    let rho = two_spin_state(p.text("state"))?.density();
    let u1 = random_unitary(CompositeSpace::single(2), derive_seed(c.seed, "no_communication/u1"));
    let u2 = random_unitary(CompositeSpace::single(2), derive_seed(c.seed, "no_communication/u2"));
    let local = u1.tensor(&u2);
    let sz = spectral_decomposition(&sigma_z(), DEFAULT_CLUSTER_TOL)?;
    let bit0 = Channel::identity().unitary(local.clone(), &[0, 1]);
    let bit1 = Channel::identity().nonselective(sz.clone(), &[0]).unitary(local, &[0, 1]);
    let g = signaling_game(
        &bit0,
        &bit1,
        &sz,
        &[1],
        &rho,
        p.usize("n_pairs")?,
        p.usize("n_rounds")?,
        derive_seed(c.seed, "no_communication/game"),
    )?;
    let mut r = ScenarioReport::new("no_communication");
    r.expect("tv_distance", g.tv_distance, 0.0, c.tol.max(1e-10));
    r.expect("empirical_error", g.empirical_error, 0.5, 3.0 * g.chance_sigma);
    r.observe("chance_sigma", g.chance_sigma);
    Ok(r.into())
}
