//! Grid-search a depth-1 QAOA landscape for a random 3-regular MaxCut
//! instance and save it as a `.lsc` file.
//!
//!     cargo run --release --example generate_landscape -- out.lsc

use oscar::landscape::{metrics, save, GridSpec};
use oscar::sim::{generate_landscape, random_regular_graph, Ansatz, NoiseModel};

fn main() -> oscar::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "landscape.lsc".into());
    let problem = random_regular_graph(8, 3, 0)?;
    let spec = GridSpec::qaoa_p1();
    let noise = NoiseModel::depolarizing(0.001, 0.005).with_trajectories(100);

    let l = generate_landscape(&problem, &Ansatz::Qaoa { p: 1 }, &spec, &noise, 42)?;
    let (best, value) = l.argmax();
    let p = spec.point(best);
    println!("{} points, best <C> = {value:.4} at beta={:.3} gamma={:.3}", l.len(), p[0], p[1]);
    println!("{:?}", metrics(&l)?);
    save(&l, &out)?;
    println!("wrote {out}");
    Ok(())
}
