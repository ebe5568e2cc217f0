//! Writes the built-in pencil corpus as JSON, one file per entry.
//!
//!     cargo run --example corpus -- target/corpus

use gammalab::corpus::corpus;

fn main() -> gammalab::Result<()> {
    let dir = std::env::args().nth(1);
    if let Some(d) = &dir {
        std::fs::create_dir_all(d)?;
    }
    for e in corpus() {
        let json = serde_json::to_string(&e.pencil)?;
        match &dir {
            Some(d) => std::fs::write(format!("{d}/{}.json", e.name), json)?,
            None => println!("{:<22} {json}", e.name),
        }
    }
    Ok(())
}
