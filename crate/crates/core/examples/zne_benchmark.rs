//! Compare Richardson and linear zero-noise extrapolation on a small noisy
//! landscape: roughness (d2) and query cost per point.

use oscar::landscape::{metrics, GridDim, GridSpec};
use oscar::mitigation::{mitigated_landscape, ZneConfig};
use oscar::sim::{generate_landscape, random_regular_graph, Ansatz, NoiseModel};

fn main() -> oscar::Result<()> {
    let problem = random_regular_graph(6, 3, 0)?;
    let a = Ansatz::Qaoa { p: 1 };
    let spec = GridSpec::new(vec![
        GridDim::new("beta", -0.785, 0.785, 20),
        GridDim::new("gamma", -1.571, 1.571, 40),
    ])?;
    let noise = NoiseModel::depolarizing(0.003, 0.007).with_trajectories(200);

    let ideal = generate_landscape(&problem, &a, &spec, &NoiseModel::ideal(), 0)?;
    let raw = generate_landscape(&problem, &a, &spec, &noise, 1)?;
    println!("{:<12} d2 {:.5}  max {:.4}", "ideal", metrics(&ideal)?.d2, ideal.argmax().1);
    println!("{:<12} d2 {:.5}  max {:.4}", "unmitigated", metrics(&raw)?.d2, raw.argmax().1);
    for (name, zne) in [("richardson", ZneConfig::richardson()), ("linear", ZneConfig::linear())] {
        let l = mitigated_landscape(&problem, &a, &spec, &noise, &zne, 1)?;
        println!(
            "{name:<12} d2 {:.5}  max {:.4}  ({} circuits per point)",
            metrics(&l)?.d2,
            l.argmax().1,
            zne.queries_per_point()
        );
    }
    Ok(())
}
