//! Benchmarks live in `benches/`; run them with `cargo bench -p surface-modes-bench`.

use surface_modes_core::{Dimension, EigenmodePair, Medium, ModeIndex, Normalization, SolverOptions};

/// Eigenmode pair for contrast `n`, order `m`, first bracket.
pub fn sample_pair(n: f64, dim: Dimension, m: u32) -> EigenmodePair {
    let medium = Medium::new(n, dim).expect("valid contrast");
    let eigen =
        surface_modes_core::eigensolver::find_eigenvalue(&medium, ModeIndex { m, s0: 1 }, &SolverOptions::default())
            .expect("eigenvalue exists");
    surface_modes_core::eigenmodes::make_pair(&eigen, Normalization::default_for(dim)).expect("regular boundary")
}
