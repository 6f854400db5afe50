//! Write a scenario file, load it back, run it and emit JSON and CSV.

use holoform::demos::builtin_demo;
use holoform::report::{emit_report, run_scenario, Format};
use holoform::scenario::{load_config, CheckName};

fn main() -> holoform::Result<()> {
    let dir = std::env::temp_dir().join("holoform-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("scenario.json");

    let mut scenario = builtin_demo("affine-hermitian")?;
    scenario.checks = vec![CheckName::Laxmilgram, CheckName::Eq6, CheckName::Thm4b];
    scenario.save(&path)?;

    let loaded = load_config(&path)?;
    let report = run_scenario(&loaded)?;
    for path in emit_report(&report, &dir, Format::Both)? {
        println!("wrote {}", path.display());
    }
    println!("all requested checks passed: {}", report.passed);
    Ok(())
}
