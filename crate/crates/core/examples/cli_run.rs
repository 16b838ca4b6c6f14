//! Drives the batch front-end from code: parse a config, run it, list the artifacts.
//!
//! ```text
//! cargo run --release --example cli_run
//! ```

use adams_lab::cli::{parse_config, run, Command};

const CONFIG: &str = "\
# sharpness table for the general convention
command=sharpness
N=4
beta=0.5
alpha_ratio=0.9,1.1
n_list=1e3,1e5
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = parse_config(CONFIG)?;
    let dir = std::env::temp_dir().join("adams-lab-example");
    let out = run(Command::Sharpness, &cfg, &dir)?;
    for t in &out.tables {
        println!("{}.csv ({} rows)", t.name, t.rows.len());
        println!("  {}", t.header.join(","));
        for r in &t.rows {
            println!("  {}", r.join(","));
        }
    }
    println!("written to {}", dir.display());

    match parse_config("beta=1.5") {
        Err(e) => println!("rejected as expected: {e}"),
        Ok(_) => println!("unexpectedly accepted"),
    }
    Ok(())
}
