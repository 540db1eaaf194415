//! Writes the fixture graphs as SGF / extension files: `emit_fixtures <dir>`.

use std::fs;
use std::path::PathBuf;

use rhoshift::extension::emit_gsp;
use rhoshift::fixtures;
use rhoshift::graph::sgf::emit_sgf;
use rhoshift::{Permutation, Rational};

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    fs::create_dir_all(&dir)?;
    let third = Rational::new(1.into(), 3.into());
    for n in [3, 4] {
        let fdr = fixtures::drunkard_ruin(n, third.clone());
        fs::write(
            dir.join(format!("drunkard{n}.sgf")),
            emit_sgf(&fdr.graph, Some(&fdr.rho), Some(&fdr.labels)),
        )?;
        fs::write(
            dir.join(format!("drunkard{n}_z2.gsp")),
            emit_gsp(&fixtures::drunkard_z2(n, third.clone())),
        )?;
    }
    let rho = fixtures::rho_pq(third.clone());
    fs::write(dir.join("bernoulli.sgf"), emit_sgf(&rho.bernoulli_graph(), Some(&rho), None))?;
    let half = fixtures::rho_pq(Rational::new(1.into(), 2.into()));
    let recolored = fixtures::bernoulli_extension(&half, vec![Permutation::identity(2), Permutation::transposition(2, 0, 1)]);
    fs::write(dir.join("recolored_half.gsp"), emit_gsp(&recolored))?;
    fs::write(dir.join("two_cycle.sgf"), emit_sgf(&fixtures::two_cycle(), None, None))?;
    Ok(())
}
