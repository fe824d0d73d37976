//! Fixtures shared by the benchmarks.

use vlattice::lattice::make_space;
use vlattice::operator::RegularOperator;
use vlattice::rng::SplitMix64;
use vlattice::scalar::{rat, Matrix, Scalar};

/// A pair of positive operators on a skewed simplicial cone of dimension `n`.
pub fn positive_pair(n: usize, seed: u64) -> (RegularOperator, RegularOperator, Vec<Scalar>) {
    let mut rng = SplitMix64::new(seed);
    // Lower-triangular ones: always invertible.
    let basis = Matrix::from_fn(n, n, |i, j| if j <= i { rat(1, 1) } else { rat(0, 1) });
    let space = make_space(basis).expect("unit lower triangular");
    let draw = |rng: &mut SplitMix64| Matrix::from_fn(n, n, |_, _| rat(rng.below(5) as i64, 2));
    let s = RegularOperator::from_cone_matrix(space.clone(), draw(&mut rng)).expect("square");
    let t = RegularOperator::from_cone_matrix(space.clone(), draw(&mut rng)).expect("square");
    let coords: Vec<Scalar> = (0..n).map(|_| rat(rng.below(7) as i64 + 1, 3)).collect();
    let x = space.from_coords(&coords).expect("dimension");
    (s, t, x)
}
