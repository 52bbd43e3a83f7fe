//! Pick the winning reranking metric from a saved hit-rate grid. With no
//! argument the bundled published grid is replayed.
//!
//!     cargo run --example replay_winner -- [report.tsv]

use affectrec::eval::{pick_winner_by, EvalReport, WinnerRule};

const PUBLISHED: &str = include_str!("../data/published_grid.tsv");

fn main() -> affectrec::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(p) => std::fs::read_to_string(&p).map_err(|e| affectrec::Error::Config(format!("{p}: {e}")))?,
        None => PUBLISHED.to_string(),
    };
    let report = EvalReport::from_tsv(&text)?;
    print!("{}", report.to_table());
    for (rule, name) in [(WinnerRule::RowWins, "row wins"), (WinnerRule::MeanHit, "mean hit%")] {
        println!("winner by {name}: {}", pick_winner_by(&report, rule).label());
    }
    Ok(())
}
