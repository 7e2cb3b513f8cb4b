//! Sample 10% of an ideal landscape, reconstruct the rest by compressed
//! sensing, and report the error against the full grid search.

use oscar::cs::{reconstruct, SolverConfig};
use oscar::landscape::{nrmse, sample_uniform, GridSpec, Landscape, LandscapeMeta};
use oscar::sim::{generate_landscape, random_regular_graph, Ansatz, NoiseModel};

fn main() -> oscar::Result<()> {
    let problem = random_regular_graph(8, 3, 1)?;
    let spec = GridSpec::qaoa_p1();
    let truth = generate_landscape(&problem, &Ansatz::Qaoa { p: 1 }, &spec, &NoiseModel::ideal(), 0)?;

    for fraction in [0.05, 0.1, 0.25] {
        let samples = truth.measure(&sample_uniform(&spec, fraction, 7)?)?;
        let rec = reconstruct(&samples, &SolverConfig::default())?;
        let l = Landscape::from_reconstruction(spec.clone(), &rec, samples.len(), 0.0, LandscapeMeta::default())?;
        println!(
            "{:>4.0}% sampled ({:>4} circuits): NRMSE {:.4}, {} FISTA iterations",
            fraction * 100.0,
            samples.len(),
            nrmse(&truth, &l)?,
            rec.iterations
        );
    }
    Ok(())
}
