//! Minimal index, canonical forms and the isomorphism verdict.

mod certificate;
mod cohomology;
mod common;

use std::sync::Arc;
use std::time::Duration;

use rayon::prelude::*;

pub use certificate::{parse_certificate, IsoCertificate};
pub use cohomology::{
    base_isomorphisms, cohomologous, extensions_equivalent, solves_cohomology, verify_equivalence, Equivalence,
};
pub use common::{common_extension_degree1, common_extension_shifts, CommonBase, CommonExtension};

use crate::contraction::{self, DEFAULT_SUBSET_BUDGET};
use crate::error::{Error, Result};
use crate::extension::{lift_phi_bar, Lift, DEFAULT_PERSISTENT_BUDGET};
use crate::graph::{Rho, StochasticGraph, StringedGraph};
use crate::homo::{check_hom, coloring, enumerate_colorings, ColoringBudget, GraphHom, LetterMaps};
use crate::reduction::{quotient_homs, reduce_to_irreducible, ReductionResult};

pub const DEFAULT_N_MAX: usize = 8;
pub const DEFAULT_D_MAX: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub n_max: usize,
    pub coloring_budget: usize,
    pub subset_budget: usize,
    pub persistent_budget: usize,
    pub d_max: usize,
    /// Worker threads for the coloring grid; 0 uses the global pool.
    pub jobs: usize,
    /// Treat an exhausted search up to `n_max` as proof of minimality.
    pub accept_budgeted_minimality: bool,
    /// Per-stringing time limit for coloring enumeration.
    pub time_limit: Option<Duration>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            n_max: DEFAULT_N_MAX,
            coloring_budget: 1_000_000,
            subset_budget: DEFAULT_SUBSET_BUDGET,
            persistent_budget: DEFAULT_PERSISTENT_BUDGET,
            d_max: DEFAULT_D_MAX,
            jobs: 0,
            accept_budgeted_minimality: false,
            time_limit: None,
        }
    }
}

/// Why a found index is known to be minimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certification {
    /// `d = 1`.
    Trivial,
    /// `d` equals the period, a lower bound for every coloring of every stringing.
    Period,
    /// No two letters share a weight: every stringing has one coloring, all of the same degree.
    UniqueColoring,
    /// Exhaustive up to `n_max`, accepted by configuration.
    Budgeted,
    Uncertified,
}

impl Certification {
    pub fn is_certified(self) -> bool {
        self != Certification::Uncertified
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Certification::Trivial => "trivial",
            Certification::Period => "period",
            Certification::UniqueColoring => "unique-coloring",
            Certification::Budgeted => "budgeted",
            Certification::Uncertified => "none",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchLogEntry {
    pub n: usize,
    pub colorings_tried: usize,
    pub best_d: Option<usize>,
    /// Coloring enumeration or some subset search hit its budget.
    pub truncated: bool,
}

#[derive(Debug, Clone)]
pub struct MinimalIndexReport {
    pub d_found: usize,
    /// `(n, coloring id)`, the id counting from 0 in enumeration order.
    pub achieved_at: (usize, usize),
    pub labels: Vec<usize>,
    pub certification: Certification,
    pub certified_minimal: bool,
    pub period: usize,
    pub search_log: Vec<SearchLogEntry>,
}

fn pool(jobs: usize) -> Option<rayon::ThreadPool> {
    (jobs > 0).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool")
    })
}

fn install<T: Send>(pool: &Option<rayon::ThreadPool>, f: impl FnOnce() -> T + Send) -> T {
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

fn letter_maps(g: &StochasticGraph, rho: &Rho, labels: &[usize]) -> LetterMaps {
    let mut maps = vec![vec![0; g.vertex_count()]; rho.len()];
    for (e, &i) in labels.iter().enumerate() {
        maps[i][g.edge(e).src] = g.edge(e).dst;
    }
    LetterMaps::new(rho.clone(), g.vertices().to_vec(), maps).expect("a coloring defines total maps")
}

const CHUNK: usize = 1024;

/// Searches colorings of `G^(n)`, `n = 1..n_max`, for the smallest degree.
pub fn minimal_index(g: &StochasticGraph, rho: &Rho, config: &SearchConfig) -> Result<MinimalIndexReport> {
    if !g.is_irreducible() {
        return Err(Error::NotIrreducible);
    }
    if !g.is_rho_uniform(rho) {
        return Err(Error::NotRhoUniform);
    }
    let period = g.period()?;
    let unique = rho.is_absolutely_nonhomogeneous();
    let workers = pool(config.jobs);
    let mut best: Option<(usize, usize, usize, Vec<usize>)> = None;
    let mut log = Vec::new();
    let mut any_truncation = false;

    'grid: for n in 1..=config.n_max.max(1) {
        let stringed = g.stringing(n)?;
        let gn = &stringed.graph;
        let mut stream = enumerate_colorings(
            gn,
            rho,
            ColoringBudget {
                max_colorings: config.coloring_budget,
                time_limit: config.time_limit,
            },
        )?;
        let mut entry = SearchLogEntry {
            n,
            colorings_tried: 0,
            best_d: None,
            truncated: false,
        };
        loop {
            let chunk: Vec<Vec<usize>> = stream.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            let first_id = entry.colorings_tried;
            entry.colorings_tried += chunk.len();
            let degrees: Vec<(usize, bool)> = install(&workers, || {
                chunk
                    .par_iter()
                    .map(|labels| {
                        let rep = contraction::degree(&letter_maps(gn, rho, labels), config.subset_budget);
                        (rep.degree, rep.exhausted)
                    })
                    .collect()
            });
            for (k, (labels, (d, exhausted))) in chunk.into_iter().zip(degrees).enumerate() {
                if !exhausted {
                    // only an upper bound for this coloring; not a realized index
                    entry.truncated = true;
                    continue;
                }
                entry.best_d = Some(entry.best_d.map_or(d, |b: usize| b.min(d)));
                if best.as_ref().is_none_or(|b| d < b.0) {
                    best = Some((d, n, first_id + k, labels));
                }
                if d == period {
                    log.push(entry);
                    break 'grid;
                }
            }
        }
        entry.truncated |= stream.truncated();
        any_truncation |= entry.truncated;
        log.push(entry);
        // every stringing has a single coloring of the same degree
        if unique && best.is_some() {
            break;
        }
    }

    let (d_found, n, id, labels) =
        best.ok_or(Error::BudgetExceeded {
            what: "subset",
            limit: config.subset_budget,
        })?;
    let certification = if d_found == 1 {
        Certification::Trivial
    } else if d_found == period {
        Certification::Period
    } else if unique && !any_truncation {
        Certification::UniqueColoring
    } else if config.accept_budgeted_minimality && !any_truncation {
        Certification::Budgeted
    } else {
        Certification::Uncertified
    };
    Ok(MinimalIndexReport {
        d_found,
        achieved_at: (n, id),
        labels,
        certification,
        certified_minimal: certification.is_certified(),
        period,
        search_log: log,
    })
}

/// The irreducible pair at the minimal index found, with the homs linking it to `G`.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub extension: crate::extension::GspExtension,
    pub index: MinimalIndexReport,
    pub stringed: StringedGraph,
    /// The achieving coloring `φ : G^(n) → I`.
    pub phi: GraphHom,
    /// `π^(n) : G^(n) → G`.
    pub pi_n: GraphHom,
    pub lift: Lift,
    pub reduction: ReductionResult,
}

impl CanonicalForm {
    pub fn certified(&self) -> bool {
        self.index.certified_minimal
    }

    pub fn d(&self) -> usize {
        self.extension.d()
    }
}

/// minimal index → lift → reduction, with every link checked to have degree 1.
pub fn canonical_form(g: &StochasticGraph, rho: &Rho, config: &SearchConfig) -> Result<CanonicalForm> {
    let index = minimal_index(g, rho, config)?;
    if index.d_found > config.d_max {
        return Err(Error::Unsupported(format!(
            "index {} exceeds the configured maximum {}",
            index.d_found, config.d_max
        )));
    }
    let stringed = g.stringing(index.achieved_at.0)?;
    let gn = Arc::new(stringed.graph.clone());
    let phi = coloring(gn.clone(), rho, index.labels.clone())?;
    let g_arc = Arc::new(g.clone());
    let pi_n = check_hom(stringed.projection_edge_map(), gn, g_arc.clone())?;

    // π^(n) has degree 1: compare against any coloring of G
    let chi_labels = enumerate_colorings(g, rho, ColoringBudget::default())?
        .next()
        .ok_or(Error::NotRhoUniform)?;
    let chi = coloring(g_arc, rho, chi_labels)?;
    check_degree_one(&pi_n, &chi, config.subset_budget, "stringing projection")?;

    let lift = lift_phi_bar(&phi, config.subset_budget)?;
    check_degree_one(&lift.psi_bar, &phi, config.subset_budget, "lift")?;
    let reduction = reduce_to_irreducible(&lift.extension, config.persistent_budget)?;
    let (kappa, kappa_bar) = quotient_homs(&reduction.recoordinatized, &reduction.xi_star, &reduction.quotient)?;
    check_degree_one(&kappa, &reduction.quotient.base_coloring(), config.subset_budget, "quotient base")?;
    let top = {
        let (t, labels) = reduction.quotient.total_graph();
        coloring(Arc::new(t), rho, labels)?
    };
    check_degree_one(&kappa_bar, &top, config.subset_budget, "quotient")?;
    Ok(CanonicalForm {
        extension: reduction.quotient.clone(),
        index,
        stringed,
        phi,
        pi_n,
        lift,
        reduction,
    })
}

fn check_degree_one(alpha: &GraphHom, chi: &GraphHom, budget: usize, what: &str) -> Result<()> {
    match contraction::hom_degree(alpha, chi, budget)? {
        1 => Ok(()),
        d => Err(Error::Invariant(format!("{what} homomorphism has degree {d}, expected 1"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoStatus {
    Yes,
    No,
    Unknown,
}

impl IsoStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            IsoStatus::Yes => "yes",
            IsoStatus::No => "no",
            IsoStatus::Unknown => "unknown",
        }
    }
}

/// The invariant separating two shifts (or, under UNKNOWN, the one that would).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Distinguisher {
    PeriodMismatch { p1: usize, p2: usize },
    MinimalIndexMismatch { d1: usize, d2: usize },
    CanonicalBaseMismatch,
    CohomologyObstruction,
}

impl Distinguisher {
    pub fn as_str(&self) -> &'static str {
        match self {
            Distinguisher::PeriodMismatch { .. } => "period",
            Distinguisher::MinimalIndexMismatch { .. } => "minimal-index",
            Distinguisher::CanonicalBaseMismatch => "canonical-base",
            Distinguisher::CohomologyObstruction => "cohomology",
        }
    }
}

#[derive(Debug, Clone)]
pub struct IsoVerdict {
    pub status: IsoStatus,
    pub certificate: Option<IsoCertificate>,
    pub distinguisher: Option<Distinguisher>,
    pub caveats: Vec<String>,
    pub canon: [Option<Box<CanonicalForm>>; 2],
}

impl IsoVerdict {
    pub fn d(&self, k: usize) -> Option<usize> {
        self.canon[k].as_ref().map(|c| c.d())
    }

    pub fn certified(&self) -> bool {
        self.canon.iter().all(|c| c.as_ref().is_some_and(|c| c.certified()))
    }
}

/// Decides `T_{g1} ≅ T_{g2}`; NO only when every invariant it relies on is certified.
pub fn shifts_isomorphic(g1: &StochasticGraph, g2: &StochasticGraph, rho: &Rho, config: &SearchConfig) -> Result<IsoVerdict> {
    for g in [g1, g2] {
        if !g.is_irreducible() {
            return Err(Error::NotIrreducible);
        }
        if !g.is_rho_uniform(rho) {
            return Err(Error::NotRhoUniform);
        }
    }
    let mut verdict = IsoVerdict {
        status: IsoStatus::Unknown,
        certificate: None,
        distinguisher: None,
        caveats: Vec::new(),
        canon: [None, None],
    };
    let (p1, p2) = (g1.period()?, g2.period()?);
    if p1 != p2 {
        verdict.status = IsoStatus::No;
        verdict.distinguisher = Some(Distinguisher::PeriodMismatch { p1, p2 });
        return Ok(verdict);
    }

    let (c1, c2) = match rayon::join(|| canonical_form(g1, rho, config), || canonical_form(g2, rho, config)) {
        (Ok(a), Ok(b)) => (a, b),
        (a, b) => {
            for (k, r) in [(1, a.err()), (2, b.err())] {
                if let Some(e) = r {
                    match e {
                        Error::BudgetExceeded { .. } | Error::Unsupported(_) => {
                            verdict.caveats.push(format!("input {k}: {e}"))
                        }
                        other => return Err(other),
                    }
                }
            }
            return Ok(verdict);
        }
    };
    for (k, c) in [(1, &c1), (2, &c2)] {
        if !c.certified() {
            verdict
                .caveats
                .push(format!("input {k}: minimality of index {} not certified", c.d()));
        }
    }
    let both_certified = c1.certified() && c2.certified();
    let (d1, d2) = (c1.d(), c2.d());
    verdict.canon = [Some(Box::new(c1)), Some(Box::new(c2))];
    let (c1, c2) = (verdict.canon[0].as_ref().unwrap(), verdict.canon[1].as_ref().unwrap());

    if d1 != d2 {
        verdict.distinguisher = Some(Distinguisher::MinimalIndexMismatch { d1, d2 });
        verdict.status = if both_certified { IsoStatus::No } else { IsoStatus::Unknown };
        return Ok(verdict);
    }
    match extensions_equivalent(&c1.extension, &c2.extension) {
        Some(eq) => {
            let cert = IsoCertificate {
                extensions: [c1.extension.clone(), c2.extension.clone()],
                index: [
                    (c1.index.achieved_at.0, c1.index.d_found),
                    (c2.index.achieved_at.0, c2.index.d_found),
                ],
                equivalence: eq,
            };
            if !cert.verify() {
                return Err(Error::Invariant("equivalence certificate failed re-validation".into()));
            }
            verdict.status = IsoStatus::Yes;
            verdict.certificate = Some(cert);
        }
        None => {
            let bases_match = !base_isomorphisms(c1.extension.base(), c2.extension.base()).is_empty();
            verdict.distinguisher = Some(if bases_match {
                Distinguisher::CohomologyObstruction
            } else {
                Distinguisher::CanonicalBaseMismatch
            });
            verdict.status = if both_certified { IsoStatus::No } else { IsoStatus::Unknown };
        }
    }
    Ok(verdict)
}
