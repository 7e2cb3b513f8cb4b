//! Mix samples from two simulated devices, with and without an affine
//! noise compensation model fitted on 1% of the grid.

use oscar::landscape::{nrmse, GridSpec};
use oscar::ncm::{mixed_reconstruct, plan_mixed_sampling, train};
use oscar::sim::{generate_landscape, random_regular_graph, Ansatz, NoiseModel};
use oscar::cs::SolverConfig;

fn main() -> oscar::Result<()> {
    let problem = random_regular_graph(8, 3, 0)?;
    let spec = GridSpec::qaoa_p1();
    let a = Ansatz::Qaoa { p: 1 };
    let qpu1 = generate_landscape(&problem, &a, &spec, &NoiseModel::depolarizing(0.001, 0.005).with_trajectories(1000), 11)?;
    let qpu2 = generate_landscape(&problem, &a, &spec, &NoiseModel::depolarizing(0.003, 0.007).with_trajectories(1000), 12)?;

    let plan = plan_mixed_sampling(spec.len(), 0.1, 0.5, 0.01, 0)?;
    let xs: Vec<f64> = plan.training.iter().map(|&i| qpu2.values()[i]).collect();
    let ys: Vec<f64> = plan.training.iter().map(|&i| qpu1.values()[i]).collect();
    let model = train(&xs, &ys)?;
    println!("model: slope {:.4}, intercept {:.4}, {} pairs", model.slope, model.intercept, model.training_pairs);

    let r = qpu1.measure(&plan.reference)?;
    let o = qpu2.measure(&plan.other)?;
    let cfg = SolverConfig::default();
    let with = mixed_reconstruct(&spec, &r, &o, Some(&model), &cfg)?;
    let without = mixed_reconstruct(&spec, &r, &o, None, &cfg)?;
    println!("NRMSE vs QPU-1 without NCM: {:.4}", nrmse(&qpu1, &without)?);
    println!("NRMSE vs QPU-1 with NCM:    {:.4}", nrmse(&qpu1, &with)?);
    Ok(())
}
