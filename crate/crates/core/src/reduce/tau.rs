//! Validation of `η′_k` and the components `τ₁, τ₂, τ₃` of `η′`.

use crate::error::{Error, Result};
use crate::kterm::KTerm;
use crate::reduce::context::ReductionContext;
use crate::reduce::graph::{GraphElement, GraphSystem, Labeling};
use crate::superpose::{self, lambda_k, reduced_form, rho_k, theta_k, theta_k_word, ReducedTheta};
use crate::verify::{self, Report, Variety, Verdict};
use crate::wordkit::Word;

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Checks the properties `η′_k` is assumed to have: same prefixes and
/// suffixes of length `k` as `η`, infinite where `η` is, equal on letter
/// edges, `δ∘η′_k = φ`, the shape `t_v = x_v y_v z_v` with
/// `1 ≤ |x_v| = Q − |z_v|` and `r_{t_v} = z_v`, and `V∗D_k` satisfaction.
pub fn validate_eta_k(
    g: &GraphSystem,
    eta_k: &Labeling,
    ctx: &ReductionContext,
    v: &Variety,
) -> Result<Report> {
    g.check_labeling(eta_k)?;
    let k = ctx.k();
    let a = g.delta.alphabet();
    let mut r = Report::default();
    for el in g.elements() {
        let name = g.name(el);
        let old = g.eta.get(el);
        let new = eta_k.get(el);
        let same_ends = old.i_k(k) == new.i_k(k) && old.t_k(k) == new.t_k(k);
        r.push(
            "eta_k",
            name,
            Some(k),
            verdict(same_ends),
            (!same_ends).then(|| "prefix or suffix of length k differs".to_string()),
        );
        if old.is_finite() {
            let ok = old == new;
            r.push(
                "eta_k",
                name,
                None,
                verdict(ok),
                (!ok).then(|| format!("letter label became {}", new.show(a))),
            );
        } else if new.is_finite() {
            r.push(
                "eta_k",
                name,
                None,
                Verdict::Fail,
                Some("infinite label became finite".into()),
            );
        }
    }
    for mut e in verify::check_delta(g, eta_k).entries {
        e.check = "eta_k".into();
        r.entries.push(e);
    }
    let q = ctx.constants.q;
    for (i, name) in g.vertices.iter().enumerate() {
        let t = Word::from(eta_k.vertices[i].t_k(k));
        let y = &ctx.border_of(i).word;
        let z = &ctx.z[i];
        let witness = if t.len() != k {
            Some("t_v is shorter than k".to_string())
        } else if z.len() >= q || !t.ends_with(&y.concat(z)) {
            Some(format!("t_v = {} does not end with y_v z_v", a.show(&t)))
        } else if superpose::split(&t, &ctx.split)?.right != *z {
            Some(format!(
                "right-hand of t_v = {} is not z_v = {}",
                a.show(&t),
                a.show(z)
            ))
        } else {
            None
        };
        r.push("eq2", name, Some(k), verdict(witness.is_none()), witness);
    }
    for mut e in verify::check_equations(g, eta_k, v, k)
        .entries
        .into_iter()
        .filter(|e| e.k == Some(k))
    {
        e.check = "eta_k".into();
        r.entries.push(e);
    }
    Ok(r)
}

/// `(τ₁v, τ₃v) = (λ_k i_v, ϱ_k t_v)`.
pub fn tau_vertex(eta_k: &KTerm, ctx: &ReductionContext) -> Result<(KTerm, KTerm)> {
    let k = ctx.k();
    let i = eta_k.i_k(k);
    let t = eta_k.t_k(k);
    Ok((lambda_k(&i, &ctx.split)?, rho_k(&t, &ctx.split)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTau {
    pub tau1: KTerm,
    pub tau3: KTerm,
    /// `β₁`, the part of `θ_k(t_v i_e)` over `t_v`; empty for letter edges.
    pub beta1: KTerm,
    /// Reduced form of `θ_k(t_v i_e)` and the block holding position `k+1`.
    pub reduced: Option<(ReducedTheta, usize)>,
}

/// `τ₁e, τ₃e` for an edge leaving a vertex whose `η′_k` label is `source`.
pub fn tau_edge(label: &KTerm, source: &KTerm, ctx: &ReductionContext) -> Result<EdgeTau> {
    let k = ctx.k();
    if let Some(w) = label.as_word() {
        if w.len() != 1 {
            return Err(Error::input("finite edges must be labeled by letters"));
        }
        return Ok(EdgeTau {
            tau1: label.clone(),
            tau3: KTerm::empty(),
            beta1: KTerm::empty(),
            reduced: None,
        });
    }
    let mut w = source.t_k(k);
    w.extend(label.i_k(k));
    let rf = reduced_form(&w, &ctx.split)?;
    let m = rf
        .blocks
        .iter()
        .position(|b| b.j <= k && k < b.f_end())
        .ok_or_else(|| Error::internal("no block of the reduced form straddles position k+1"))?;
    let mut beta1 = KTerm::empty();
    let mut beta2 = KTerm::empty();
    for (p, b) in rf.blocks.iter().enumerate() {
        let omega = KTerm::omega(KTerm::word(&b.e));
        if p < m {
            beta1.append(omega);
            beta1.append(KTerm::word(&b.f));
        } else if p == m {
            let cut = k - b.j;
            beta1.append(omega);
            beta1.append(KTerm::word(&b.f[..cut]));
            beta2.append(KTerm::word(&b.f[cut..]));
        } else {
            beta2.append(omega);
            beta2.append(KTerm::word(&b.f));
        }
    }
    Ok(EdgeTau {
        tau1: beta2,
        tau3: rho_k(&label.t_k(k), &ctx.split)?,
        beta1,
        reduced: Some((rf, m)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauDecomposition {
    pub tau1: Labeling,
    pub tau2: Labeling,
    pub tau3: Labeling,
    pub eta_prime: Labeling,
}

/// Builds `η′` on a simplified graph and checks Lemma 2, `τ₃e = τ₃ωe` and
/// the letter-edge identities on the way.
pub fn build_eta_prime(
    g: &GraphSystem,
    eta_k: &Labeling,
    ctx: &ReductionContext,
    mut trace: Option<&mut String>,
) -> Result<(TauDecomposition, Report)> {
    let a = g.delta.alphabet();
    let k = ctx.k();
    let mut r = Report::default();
    let mut tau1 = Labeling::default();
    let mut tau2 = Labeling::default();
    let mut tau3 = Labeling::default();
    for (i, t) in eta_k.vertices.iter().enumerate() {
        let (t1, t3) = tau_vertex(t, ctx)?;
        if let Some(out) = trace.as_deref_mut() {
            out.push_str(&format!("vertex {}:\n", g.vertices[i]));
            for w in [t.i_k(k), t.t_k(k)] {
                out.push_str(&format!("  {}\n", superpose::describe(&w, &ctx.split)?));
            }
        }
        tau1.vertices.push(t1);
        tau2.vertices.push(theta_k(t, &ctx.split)?);
        tau3.vertices.push(t3);
    }
    for (i, e) in g.edges.iter().enumerate() {
        let label = &eta_k.edges[i];
        let et = tau_edge(label, &eta_k.vertices[e.from], ctx)?;
        tau2.edges.push(if label.is_finite() {
            KTerm::empty()
        } else {
            theta_k(label, &ctx.split)?
        });
        if let Some((rf, m)) = &et.reduced {
            if let Some(out) = trace.as_deref_mut() {
                out.push_str(&format!(
                    "edge {} (split block {}):\n{}",
                    e.name,
                    m + 1,
                    rf.dump(a)
                ));
            }
            lemma2(g, i, eta_k, &et, &tau3.vertices[e.from], ctx, &mut r)?;
            let ok = et.tau3 == tau3.vertices[e.to];
            r.push(
                "tau3",
                &e.name,
                None,
                verdict(ok),
                (!ok).then(|| "tau3(e) differs from tau3(omega e)".into()),
            );
        } else {
            letter_edge(
                g,
                i,
                &tau3.vertices[e.from],
                &tau3.vertices[e.to],
                ctx,
                &mut r,
            )?;
        }
        tau1.edges.push(et.tau1);
        tau3.edges.push(et.tau3);
    }
    let assemble =
        |g: GraphElement| KTerm::product([tau1.get(g), tau2.get(g), tau3.get(g)]).normalize();
    let eta_prime = Labeling {
        vertices: (0..g.vertices.len())
            .map(|i| assemble(GraphElement::Vertex(i)))
            .collect(),
        edges: (0..g.edges.len())
            .map(|i| assemble(GraphElement::Edge(i)))
            .collect(),
    };
    Ok((
        TauDecomposition {
            tau1,
            tau2,
            tau3,
            eta_prime,
        },
        r,
    ))
}

fn lemma2(
    g: &GraphSystem,
    i: usize,
    eta_k: &Labeling,
    et: &EdgeTau,
    tau3_v: &KTerm,
    ctx: &ReductionContext,
    r: &mut Report,
) -> Result<()> {
    let a = g.delta.alphabet();
    let k = ctx.k();
    let name = &g.edges[i].name;
    let ok = et.beta1.normalize() == tau3_v.normalize();
    let witness =
        (!ok).then(|| format!("beta1 = {}, tau3(v) = {}", et.beta1.show(a), tau3_v.show(a)));
    r.push("lemma2", name, Some(k), verdict(ok), witness);

    let mut w = eta_k.vertices[g.edges[i].from].t_k(k);
    let i_e = eta_k.edges[i].i_k(k);
    w.extend(i_e.iter().copied());
    let lhs = theta_k_word(&w, &ctx.split)?;
    let rhs = tau3_v.clone().mul(&et.tau1).normalize();
    let ok = lhs.normalize() == rhs;
    let witness = (!ok).then(|| {
        format!(
            "theta_k(t_v i_e) = {}, tau3(v) tau1(e) = {}",
            lhs.show(a),
            rhs.show(a)
        )
    });
    r.push("lemma2", name, Some(k), verdict(ok), witness);

    let d1 = g.delta.eval_monoid(&et.tau1)?;
    let d2 = g.delta.eval_monoid(&lambda_k(&i_e, &ctx.split)?)?;
    r.push(
        "lemma2",
        name,
        Some(k),
        verdict(d1 == d2),
        (d1 != d2).then(|| "delta(tau1 e) differs from delta(lambda_k i_e)".into()),
    );
    Ok(())
}

/// The two shapes of a letter edge `v →a w`: `z_v a = z_w`, where
/// `θ_k(t_v a)` is a single `e^ω` and `τ₃w = (τ₃v)a`; or `z_v a = u` and
/// `z_w = 1` for the root `u`, where `τ₃v·a = (u^{n_S})^ω u` and
/// `τ₃w = (u^{n_S})^ω`, so that `u·τ₃w = τ₃v·a`.
fn letter_edge(
    g: &GraphSystem,
    i: usize,
    tau3_v: &KTerm,
    tau3_w: &KTerm,
    ctx: &ReductionContext,
    r: &mut Report,
) -> Result<()> {
    let e = &g.edges[i];
    let letter = g.eta.edges[i].as_word().expect("letter edge");
    let a = g.delta.alphabet();
    let zv_a = ctx.z[e.from].concat(&letter);
    let zw = &ctx.z[e.to];
    let tv_a = tau3_v.clone().mul(&KTerm::word(&letter));
    let witness = if &zv_a == zw {
        let mut w = g.eta.vertices[e.from].t_k(ctx.k());
        w.extend(letter.iter().copied());
        let th = theta_k_word(&w, &ctx.split)?;
        let single = matches!(th.factors(), [crate::kterm::Factor::Pow(x), rest @ ..] if rest == x.factors());
        if !single {
            Some(format!(
                "theta_k(t_v a) = {} is not a single omega power",
                th.show(a)
            ))
        } else if tau3_w.normalize() != tv_a.normalize() {
            Some(format!(
                "tau3(w) = {} but tau3(v) a = {}",
                tau3_w.show(a),
                tv_a.show(a)
            ))
        } else {
            None
        }
    } else {
        let class = ctx.class(e.from);
        let u = class.root();
        if !class.is_periodic() || zv_a != *u || !zw.is_empty() {
            Some(format!(
                "z_v a = {} is neither z_w nor the root",
                a.show(&zv_a)
            ))
        } else {
            let un = KTerm::omega(KTerm::word(&u.pow(ctx.constants.n_s)));
            if tv_a.normalize() != un.clone().mul(&KTerm::word(u)) || tau3_w.normalize() != un {
                Some(format!(
                    "tau3(v) a = {}, tau3(w) = {}",
                    tv_a.show(a),
                    tau3_w.show(a)
                ))
            } else {
                None
            }
        }
    };
    r.push(
        "letter",
        &e.name,
        Some(ctx.k()),
        verdict(witness.is_none()),
        witness,
    );
    Ok(())
}
