//! Pick an initial point from a 10% reconstruction, then optimize the live
//! circuit from it; compare query counts with a random start.

use oscar::cs::SolverConfig;
use oscar::landscape::GridSpec;
use oscar::optimize::{oscar_init, random_point, AdamConfig, CircuitObjective, NelderMeadConfig, OptimizerKind};
use oscar::sim::{random_regular_graph, Ansatz, NoiseModel};

fn main() -> oscar::Result<()> {
    let problem = random_regular_graph(8, 3, 4)?;
    let a = Ansatz::Qaoa { p: 1 };
    let spec = GridSpec::qaoa_p1();
    let noise = NoiseModel::ideal();
    let optimizers = [
        OptimizerKind::Adam(AdamConfig::for_grid(&spec)),
        OptimizerKind::NelderMead(NelderMeadConfig {
            initial_step: 2.0 * spec.max_spacing(),
            bounds: Some(spec.bounds()),
            ..Default::default()
        }),
    ];
    for kind in &optimizers {
        let init = oscar_init(&problem, &a, &spec, &noise, 0.1, kind, &SolverConfig::default(), 0)?;
        let mut live = CircuitObjective::new(&problem, a, noise, 0)?;
        let random = kind.run(&mut live, &random_point(&spec, 0))?;
        println!("{}:", kind.name());
        println!(
            "  reconstruction-initialized: {} recon + {} opt queries, <C> {:.4}",
            init.recon_queries,
            init.opt_queries(),
            -init.live_run.final_value()
        );
        println!("  random start:               {} opt queries, <C> {:.4}", random.query_count, -random.final_value());
    }
    Ok(())
}
