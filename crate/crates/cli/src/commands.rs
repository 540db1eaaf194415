use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use rhoshift::classify::{
    canonical_form, common_extension_shifts, extensions_equivalent, parse_certificate, shifts_isomorphic, IsoStatus,
    SearchConfig,
};
use rhoshift::contraction::{degree, hom_degree};
use rhoshift::extension::emit_gsp;
use rhoshift::graph::sgf::emit_sgf;
use rhoshift::homo::{coloring, coloring_count, enumerate_colorings, ColoringBudget, GraphHom, LetterMaps};
use rhoshift::reduction::reduce_to_irreducible;
use rhoshift::simulate::sample;
use rhoshift::{Rho, StochasticGraph};

use crate::input::{common_rho, Input};
use crate::report::Report;

/// How a command ended, independent of errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    No,
    Unknown,
    Invalid,
}

impl Outcome {
    pub fn code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::No | Outcome::Invalid => 2,
            Outcome::Unknown => 3,
        }
    }
}

pub struct Ctx {
    pub config: SearchConfig,
    pub seed: u64,
}

impl Ctx {
    fn report(&self) -> Report {
        let mut r = Report::new();
        r.echo_config(&self.config, self.seed);
        r
    }

    fn coloring_budget(&self) -> ColoringBudget {
        ColoringBudget {
            max_colorings: self.config.coloring_budget,
            time_limit: self.config.time_limit,
        }
    }
}

fn join_rats(v: &[rhoshift::Rational]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn rho_text(rho: &Rho) -> String {
    rho.letters()
        .iter()
        .zip(rho.weights())
        .map(|(l, w)| format!("{l}:{w}"))
        .collect::<Vec<_>>()
        .join(",")
}

/// `<dir>/<stem of path><suffix>`.
fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map_or("out".into(), |s| s.to_string_lossy().into_owned());
    path.with_file_name(format!("{stem}{suffix}"))
}

pub fn validate(ctx: &Ctx, file: &Path) -> Result<(Report, Outcome)> {
    let mut r = ctx.report();
    r.put("file", file.display());
    let input = match Input::load(file, ctx.config.subset_budget) {
        Ok(i) => i,
        Err(e) => match e.downcast_ref::<rhoshift::Error>() {
            Some(err) => {
                r.put("valid", false);
                if let rhoshift::Error::Parse { line, .. } = err {
                    r.put("line", line);
                }
                r.put("error", err).put("budget-exhausted", false);
                return Ok((r, Outcome::Invalid));
            }
            None => return Err(e),
        },
    };
    let g = input.graph();
    let rho = input.rho();
    let irreducible = g.is_irreducible();
    let uniform = rho.as_ref().is_ok_and(|rho| g.is_rho_uniform(rho));
    r.put("kind", if matches!(input, Input::Extension(_)) { "extension" } else { "graph" })
        .put("vertices", g.vertex_count())
        .put("edges", g.edge_count())
        .put("row-stochastic", true)
        .put("irreducible", irreducible);
    match &rho {
        Ok(rho) => r.put("rho", rho_text(rho)),
        Err(e) => r.put("rho-error", e),
    };
    r.put("rho-declared", input.declared_rho().is_some())
        .put("rho-uniform", uniform)
        .put("labeled", input.labels().is_some())
        .put("valid", irreducible && uniform)
        .put("budget-exhausted", false);
    let outcome = if irreducible && uniform { Outcome::Success } else { Outcome::Invalid };
    Ok((r, outcome))
}

pub fn info(ctx: &Ctx, file: &Path) -> Result<(Report, Outcome)> {
    let input = Input::load(file, ctx.config.subset_budget)?;
    let g = input.graph();
    let mut r = ctx.report();
    r.put("file", file.display())
        .put("vertices", g.vertex_count())
        .put("edges", g.edge_count())
        .put("irreducible", g.is_irreducible());
    if g.is_irreducible() {
        r.put("period", g.period()?)
            .put("stationary", join_rats(&g.stationary_distribution()?));
    }
    if let Ok(rho) = input.rho() {
        let uniform = g.is_rho_uniform(&rho);
        r.put("rho", rho_text(&rho))
            .put("rho-uniform", uniform)
            .put("absolutely-nonhomogeneous", rho.is_absolutely_nonhomogeneous());
        if uniform {
            r.put("colorings", coloring_count(&g, &rho));
        }
    }
    r.put("budget-exhausted", false);
    Ok((r, Outcome::Success))
}

pub fn degree_cmd(ctx: &Ctx, file: &Path) -> Result<(Report, Outcome)> {
    let input = Input::load(file, ctx.config.subset_budget)?;
    let g = input.graph();
    let rho = input.rho()?;
    let mut r = ctx.report();
    r.put("file", file.display());
    let labels = match input.labels() {
        Some(l) => {
            r.put("coloring", "file");
            l
        }
        None => {
            r.put("coloring", "first");
            enumerate_colorings(&g, &rho, ctx.coloring_budget())?
                .next()
                .ok_or(rhoshift::Error::NotRhoUniform)?
        }
    };
    let phi = coloring(Arc::new(g), &rho, labels)?;
    let lm = LetterMaps::from_coloring(&phi)?;
    let rep = degree(&lm, ctx.config.subset_budget);
    r.put("degree", rep.degree).put("witness", rep.witness.display(&rho));
    for set in &rep.persistent_sets {
        let names: Vec<&str> = set.iter().map(|&u| lm.vertex_name(u)).collect();
        r.put("persistent", format!("{{{}}}", names.join(",")));
    }
    r.put("exhausted", rep.exhausted)
        .put("budget-exhausted", !rep.exhausted);
    Ok((r, Outcome::Success))
}

pub fn canon(ctx: &Ctx, file: &Path, out: Option<&Path>) -> Result<(Report, Outcome)> {
    let input = Input::load(file, ctx.config.subset_budget)?;
    let g = input.graph();
    let rho = input.rho()?;
    let c = canonical_form(&g, &rho, &ctx.config)?;
    let path = out.map_or_else(|| sidecar(file, ".canon.gsp"), Path::to_path_buf);
    let mut text = String::from("# canonical extension\n");
    text.push_str(&emit_gsp(&c.extension));
    fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;

    let truncated = c.index.search_log.iter().any(|e| e.truncated);
    let mut r = ctx.report();
    r.put("file", file.display())
        .put("d", c.d())
        .put("n", c.index.achieved_at.0)
        .put("coloring-id", c.index.achieved_at.1)
        .put("period", c.index.period)
        .put("certified", c.certified())
        .put("certification", c.index.certification.as_str())
        .put("base-vertices", c.extension.j_count())
        .put("lift-base-vertices", c.lift.extension.j_count())
        .put("lift-irreducible", c.reduction.irreducible);
    for e in &c.index.search_log {
        r.put(
            "search",
            format!(
                "n={} tried={} best={} truncated={}",
                e.n,
                e.colorings_tried,
                e.best_d.map_or("-".into(), |d| d.to_string()),
                e.truncated
            ),
        );
    }
    if let Input::Extension(e) = &input {
        let own = reduce_to_irreducible(e, ctx.config.persistent_budget)?;
        r.put("input-irreducible", own.irreducible);
        if e.d() == c.d() {
            r.put("input-equivalent", extensions_equivalent(e, &c.extension).is_some());
        }
    }
    r.put("canon-file", path.display()).put("budget-exhausted", truncated);
    Ok((r, Outcome::Success))
}

pub fn iso(ctx: &Ctx, f1: &Path, f2: &Path, cert: Option<&Path>) -> Result<(Report, Outcome)> {
    let (a, b) = (
        Input::load(f1, ctx.config.subset_budget)?,
        Input::load(f2, ctx.config.subset_budget)?,
    );
    let rho = common_rho(&a, &b)?;
    let v = shifts_isomorphic(&a.graph(), &b.graph(), &rho, &ctx.config)?;
    let mut r = ctx.report();
    r.put("file1", f1.display()).put("file2", f2.display()).put("verdict", v.status.as_str());
    for k in 0..2 {
        r.put(format!("d{}", k + 1), v.d(k).map_or("-".into(), |d| d.to_string()));
    }
    r.put("certified", v.certified());
    if let Some(d) = &v.distinguisher {
        r.put("distinguisher", d.as_str());
    }
    for c in &v.caveats {
        r.put("caveat", c);
    }
    if let Some(c) = &v.certificate {
        let path = cert.map_or_else(|| sidecar(f1, ".iso.cert"), Path::to_path_buf);
        fs::write(&path, c.to_text()).with_context(|| format!("cannot write {}", path.display()))?;
        r.put("certificate-file", path.display());
    }
    let truncated = v
        .canon
        .iter()
        .flatten()
        .any(|c| c.index.search_log.iter().any(|e| e.truncated))
        || !v.caveats.is_empty();
    r.put("budget-exhausted", truncated);
    let outcome = match v.status {
        IsoStatus::Yes => Outcome::Success,
        IsoStatus::No => Outcome::No,
        IsoStatus::Unknown => Outcome::Unknown,
    };
    Ok((r, outcome))
}

fn first_coloring(g: &Arc<StochasticGraph>, rho: &Rho, budget: ColoringBudget) -> Result<GraphHom> {
    let labels = enumerate_colorings(g, rho, budget)?
        .next()
        .ok_or(rhoshift::Error::NotRhoUniform)?;
    Ok(coloring(g.clone(), rho, labels)?)
}

pub fn common_ext(ctx: &Ctx, f1: &Path, f2: &Path, out: Option<&Path>) -> Result<(Report, Outcome)> {
    let (a, b) = (
        Input::load(f1, ctx.config.subset_budget)?,
        Input::load(f2, ctx.config.subset_budget)?,
    );
    let rho = common_rho(&a, &b)?;
    let (g1, g2) = (a.graph(), b.graph());
    let mut r = ctx.report();
    r.put("file1", f1.display()).put("file2", f2.display());
    let verdict = shifts_isomorphic(&g1, &g2, &rho, &ctx.config)?;
    if verdict.status != IsoStatus::Yes {
        r.put("verdict", verdict.status.as_str())
            .put("budget-exhausted", !verdict.caveats.is_empty());
        let outcome = if verdict.status == IsoStatus::No { Outcome::No } else { Outcome::Unknown };
        return Ok((r, outcome));
    }
    let ce = common_extension_shifts(&g1, &g2, &rho, &ctx.config)?;
    let mut text = String::from("# common extension\n");
    text.push_str(&emit_sgf(&ce.graph, Some(&rho), Some(&ce.labels)));
    for (k, (to, g)) in ce.to.iter().zip([&g1, &g2]).enumerate() {
        for (e, &t) in to.edge_map().iter().enumerate() {
            let _ = writeln!(text, "# map{} {} {}", k + 1, ce.graph.edge(e).id, g.edge(t).id);
        }
    }
    let path = out.map_or_else(|| sidecar(f1, ".common.sgf"), Path::to_path_buf);
    fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;

    r.put("verdict", "yes")
        .put("vertices", ce.graph.vertex_count())
        .put("edges", ce.graph.edge_count())
        .put("d", ce.extension.d());
    for (k, (to, g)) in ce.to.iter().zip([g1, g2]).enumerate() {
        let chi = first_coloring(&Arc::new(g), &rho, ctx.coloring_budget())?;
        r.put(format!("degree{}", k + 1), hom_degree(to, &chi, ctx.config.subset_budget)?);
    }
    r.put("common-file", path.display()).put("budget-exhausted", false);
    Ok((r, Outcome::Success))
}

/// Human mode prints bare edge ids; report mode prefixes them with `edge=`.
pub fn sample_cmd(ctx: &Ctx, file: &Path, length: usize, machine: bool, out: &mut impl Write) -> Result<Outcome> {
    let input = Input::load(file, ctx.config.subset_budget)?;
    let g = input.graph();
    let s = sample(&g, ctx.seed, length)?;
    if machine {
        let mut r = ctx.report();
        r.put("file", file.display())
            .put("length", length)
            .put("start", g.vertex_name(s.start))
            .put("budget-exhausted", false);
        r.write(true, out)?;
    }
    for &e in &s.traversal {
        if machine {
            writeln!(out, "edge={}", g.edge(e).id)?;
        } else {
            writeln!(out, "{}", g.edge(e).id)?;
        }
    }
    Ok(Outcome::Success)
}

/// Re-checks a certificate; with the original graphs, also that each side is their canonical form.
pub fn verify_cert(ctx: &Ctx, cert: &Path, graphs: Option<(&Path, &Path)>) -> Result<(Report, Outcome)> {
    let text = fs::read_to_string(cert).with_context(|| format!("cannot read {}", cert.display()))?;
    let mut r = ctx.report();
    r.put("certificate-file", cert.display());
    let c = match parse_certificate(&text, ctx.config.subset_budget) {
        Ok(c) => c,
        Err(e) => {
            r.put("verified", false).put("error", e).put("budget-exhausted", false);
            return Ok((r, Outcome::Invalid));
        }
    };
    let mut ok = c.verify();
    r.put("equivalence-valid", ok);
    if let Some((f1, f2)) = graphs {
        let (a, b) = (
            Input::load(f1, ctx.config.subset_budget)?,
            Input::load(f2, ctx.config.subset_budget)?,
        );
        let rho = common_rho(&a, &b)?;
        for (k, input) in [a, b].iter().enumerate() {
            let canon = canonical_form(&input.graph(), &rho, &ctx.config)?;
            let same = canon.d() == c.extensions[k].d()
                && extensions_equivalent(&canon.extension, &c.extensions[k]).is_some();
            r.put(format!("graph{}-matches", k + 1), same);
            ok &= same;
        }
    }
    r.put("verified", ok).put("budget-exhausted", false);
    Ok((r, if ok { Outcome::Success } else { Outcome::Invalid }))
}
