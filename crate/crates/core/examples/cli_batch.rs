//! Drives the command-line front end in-process on the bundled configs.
//! Equivalent to `analytic-content <command> examples/configs/<file>`.

use std::path::Path;

use analytic_content::cli::{execute, Command, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs");
    let runs = [
        (Command::Bounds, "square.json"),
        (Command::Content, "annulus.json"),
        (Command::Classify, "ellipse.json"),
        (Command::VerifyConnection, "connection.json"),
        (Command::Quantize, "quantize.json"),
    ];
    for (command, file) in runs {
        let config = RunConfig::from_path(&dir.join(file))?;
        let outcome = execute(command, &config).map_err(|e| e.to_string())?;
        println!("== {command:?} {file} (exit {})", outcome.exit_code);
        println!("{}", serde_json::to_string_pretty(&outcome.report["results"])?);
    }
    Ok(())
}
