//! Seeded inputs shared by the benchmarks.

use kop_core::generate::{generate, GeneratedInstance};
use kop_core::io::GraphFile;
use kop_core::PlanarEmbedding;

/// A generated k-outerplanar instance with its drawing.
pub struct Fixture {
    pub name: String,
    pub instance: GeneratedInstance,
    pub embedding: PlanarEmbedding,
}

pub fn fixture(n: usize, k: usize, seed: u64) -> Fixture {
    let instance = generate(n, k, seed).expect("feasible parameters");
    let embedding = GraphFile::from_instance(&instance)
        .embedding()
        .expect("generated drawings are valid")
        .expect("generated files carry a drawing");
    Fixture {
        name: format!("n{n}_k{k}"),
        instance,
        embedding,
    }
}

/// One instance per (n, k) pair used by the benchmarks.
pub fn fixtures() -> Vec<Fixture> {
    [(12, 1), (12, 2), (24, 2), (24, 3), (40, 3)]
        .into_iter()
        .map(|(n, k)| fixture(n, k, 7))
        .collect()
}
