//! Graph equation systems and the construction of the new labeling
//! `η′ = (τ₁g)(τ₂g)(τ₃g)` from a `V∗D_k`-solution `η′_k`.

pub mod context;
pub mod graph;
pub mod simplify;
pub mod tau;

pub use context::{compute_context, BorderPolicy, ConfinalClass, Constants, ReductionContext};
pub use graph::{Edge, GraphElement, GraphSystem, Labeling};
pub use simplify::{simplify, Lift, LiftRecipe};
pub use tau::{build_eta_prime, tau_edge, tau_vertex, validate_eta_k, EdgeTau, TauDecomposition};

use crate::error::Result;
use crate::verify::{self, Report, Variety};

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub variety: Variety,
    pub policy: BorderPolicy,
    pub ecap: Option<usize>,
    /// Largest `k′` for the `V∗D_{k′}` checks; defaults to `2k`.
    pub kmax: Option<usize>,
    /// Replacement for `η′_k` on the simplified graph; defaults to `η`.
    pub eta_k: Option<Labeling>,
    pub trace: bool,
}

impl PipelineOptions {
    pub fn new(variety: Variety) -> Self {
        PipelineOptions {
            variety,
            policy: BorderPolicy::Periodic,
            ecap: None,
            kmax: None,
            eta_k: None,
            trace: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub simplified: GraphSystem,
    pub recipe: LiftRecipe,
    pub context: ReductionContext,
    /// Absent when `η′_k` failed validation.
    pub tau: Option<TauDecomposition>,
    /// `η′` on the original graph.
    pub eta_prime: Option<Labeling>,
    pub report: Report,
    pub trace: String,
}

/// Longest finite label of the system.
pub fn ell_eta(g: &GraphSystem) -> usize {
    g.elements()
        .filter_map(|el| g.eta.get(el).as_word().map(|w| w.len()))
        .max()
        .unwrap_or(0)
}

/// Simplify, compute borders and constants, validate `η′_k`, build `η′`,
/// lift it to the original graph and verify it there.
pub fn pipeline(g: &GraphSystem, opts: &PipelineOptions) -> Result<PipelineOutput> {
    let alphabet = g.delta.alphabet().clone();
    let (simplified, recipe) = simplify(g).map_err(|e| e.in_stage("simplify"))?;
    let context = compute_context(&simplified, ell_eta(g), opts.policy, opts.ecap)
        .map_err(|e| e.in_stage("constants"))?;
    let mut trace = String::new();
    if opts.trace {
        trace.push_str(&format!(
            "simplified graph: {} vertices, {} edges\n",
            simplified.vertices.len(),
            simplified.edges.len()
        ));
        trace.push_str(&context.describe(&alphabet));
    }
    let eta_k = opts.eta_k.clone().unwrap_or_else(|| simplified.eta.clone());
    let k = context.k();
    let mut report = validate_eta_k(&simplified, &eta_k, &context, &opts.variety)
        .map_err(|e| e.in_stage("validate"))?;
    let mut out = PipelineOutput {
        simplified,
        recipe,
        context,
        tau: None,
        eta_prime: None,
        report: Report::default(),
        trace,
    };
    if !report.passed() {
        out.report = report;
        return Ok(out);
    }
    let (tau, checks) = build_eta_prime(
        &out.simplified,
        &eta_k,
        &out.context,
        opts.trace.then_some(&mut out.trace),
    )
    .map_err(|e| e.in_stage("build"))?;
    report.extend(checks);
    let lifted = out
        .recipe
        .apply(&tau.eta_prime)
        .map_err(|e| e.in_stage("lift"))?;
    report.extend(verify::check_delta(g, &lifted));
    report.extend(verify::check_c1(g, &lifted));
    report.extend(verify::check_c2(g, &lifted));
    report.extend(verify::check_c3(g, &lifted, out.context.l()));
    report.extend(verify::check_equations(
        g,
        &lifted,
        &opts.variety,
        opts.kmax.unwrap_or(2 * k),
    ));
    out.tau = Some(tau);
    out.eta_prime = Some(lifted);
    out.report = report;
    Ok(out)
}
