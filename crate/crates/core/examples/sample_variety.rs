//! Samples a variety over the disc and writes plot data.
//!
//!     cargo run --example sample_variety -- [out.csv]

use gammalab::cli::plot_data_csv;
use gammalab::corpus::corpus;
use gammalab::variety::{component_count, polydisc_sample_from, sample_variety, DiscGrid};

fn main() -> gammalab::Result<()> {
    let out = std::env::args().nth(1);
    let grid = DiscGrid::new(12, 48);
    for e in corpus() {
        let s = sample_variety(&e.pencil, &grid, 0)?;
        let pts: usize = s.records.iter().map(|r| r.fiber.len()).sum();
        let bad = s
            .records
            .iter()
            .flat_map(|r| &r.residual_ok)
            .filter(|ok| !**ok)
            .count();
        let worst = s
            .records
            .iter()
            .flat_map(|r| r.det_residuals.iter().copied())
            .fold(0.0, f64::max);
        println!(
            "{:<22} {pts:>5} points  worst residual {worst:.1e}  over tol {bad}  components {}",
            e.name,
            component_count(&s)
        );
    }

    let pick = corpus()
        .into_iter()
        .find(|e| e.name == "g3-nilpotent-twisted")
        .unwrap();
    let s = sample_variety(&pick.pencil, &grid, 0)?;
    let lift = polydisc_sample_from(&pick.pencil, &s)?;
    let csv = plot_data_csv(&s, Some(&lift))?;
    match out {
        Some(path) => {
            std::fs::write(&path, &csv)?;
            println!("wrote {} rows to {path}", csv.lines().count() - 1);
        }
        None => println!("{}", csv.lines().take(4).collect::<Vec<_>>().join("\n")),
    }
    Ok(())
}
