//! mu_1 of the cap of measure m over (0, 4 pi), with a CSV and an SVG plot.
use neumann_sphere::verify::{cmd_explore_q2, ExperimentConfig, Q2Row};

fn main() -> neumann_sphere::Result<()> {
    let cfg = ExperimentConfig { level: 4, out: Some(std::env::temp_dir().join("cap_curve")), ..Default::default() };
    let rep = cmd_explore_q2(&cfg, 16)?;
    let rows: Vec<Q2Row> = serde_json::from_value(rep.data.clone().unwrap_or_default()).unwrap_or_default();
    for n in &rep.notes {
        println!("{n}");
    }
    println!("{} rows, outputs {:?}", rows.len(), rep.outputs);
    Ok(())
}
