//! Generating problems and saving them as JSON, ready for a config with
//! `"problem.kind": "file"`.
//!
//! ```bash
//! cargo run --release --example problem_files
//! ```

use currlab::problems::{gen_hard_diversity_instance, gen_random_problem, CovarianceMode, HardVariant};
use currlab::{AnyProblem, RngStream};

fn main() -> currlab::Result<()> {
    let dir = std::env::temp_dir().join("currlab_problems");
    std::fs::create_dir_all(&dir)?;

    let random: AnyProblem =
        gen_random_problem(3, 4, &[0.1, 0.5, 1.0, 2.0], 0.3, CovarianceMode::RandomSpd { c1: 0.5, c0: 2.0 }, &mut RngStream::new(1, 0))?
            .into();
    let hard: AnyProblem = gen_hard_diversity_instance(6, 12, 3, 1.0, HardVariant::Block(2), 0.25, &mut RngStream::new(1, 1))?.into();

    for (name, p) in [("random", &random), ("hard", &hard)] {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, p.to_json()?)?;
        let back = AnyProblem::from_json(&std::fs::read_to_string(&path)?)?;
        let q = back.as_problem();
        println!(
            "{name}: d = {}, T = {}, distances to target {:.3?}, lossless {}",
            q.dim(),
            q.num_tasks(),
            q.distances_to_target(),
            back == *p
        );
        println!("  config: {{\"problem.kind\": \"file\", \"problem.path\": {:?}}}", path.display().to_string());
    }
    Ok(())
}
