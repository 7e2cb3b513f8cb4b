//! How many DCT coefficients carry 99% of a QAOA landscape's energy.

use oscar::cs::sparsity_fraction;
use oscar::landscape::GridSpec;
use oscar::sim::{generate_landscape, random_regular_graph, random_sk, Ansatz, NoiseModel};

fn main() -> oscar::Result<()> {
    let spec = GridSpec::qaoa_p1();
    let a = Ansatz::Qaoa { p: 1 };
    for (name, problem) in [
        ("3-regular MaxCut", random_regular_graph(8, 3, 0)?),
        ("SK", random_sk(8, 0)?),
    ] {
        let l = generate_landscape(&problem, &a, &spec, &NoiseModel::ideal(), 0)?;
        for energy in [0.9, 0.99, 0.999] {
            let f = sparsity_fraction(l.values(), &l.shape(), energy)?;
            println!("{name:<17} {:>5.1}% energy: {:.3}% of coefficients", energy * 100.0, f * 100.0);
        }
    }
    Ok(())
}
