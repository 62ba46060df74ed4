//! Synthetic instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::{Instance, Length};

/// All off-diagonal distances equal to one.
pub fn unit_metric(n: usize) -> Instance {
    let rows: Vec<Vec<Length>> = (0..n)
        .map(|i| (0..n).map(|j| Length::from(i != j)).collect())
        .collect();
    Instance::from_matrix(&rows).expect("unit metric is valid for even n >= 4")
}

/// Uniform points in a `side x side` square, Euclidean distances rounded to
/// the nearest integer, then closed under shortest paths so the result is
/// metric. Deterministic for a given seed.
pub fn random_euclidean(n: usize, side: u32, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0..=side) as f64, rng.gen_range(0..=side) as f64))
        .collect();
    from_points(&pts)
}

/// Rounded Euclidean distances between the given points, metric-closed.
pub fn from_points(pts: &[(f64, f64)]) -> Instance {
    let mut rows: Vec<Vec<Length>> = pts
        .iter()
        .map(|a| {
            pts.iter()
                .map(|b| ((a.0 - b.0).hypot(a.1 - b.1)).round() as Length)
                .collect()
        })
        .collect();
    metric_closure(&mut rows);
    Instance::from_matrix(&rows).expect("generated matrix is valid")
}

/// Replaces every entry by the shortest-path distance (Floyd-Warshall).
pub fn metric_closure(rows: &mut [Vec<Length>]) {
    let n = rows.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = rows[i][k] + rows[k][j];
                if via < rows[i][j] {
                    rows[i][j] = via;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_is_metric_and_deterministic() {
        let a = random_euclidean(30, 1000, 5);
        let b = random_euclidean(30, 1000, 5);
        assert_eq!(a, b);
        assert!(a.is_metric());
        assert_ne!(a, random_euclidean(30, 1000, 6));
    }

    #[test]
    fn closure_repairs_rounding() {
        let mut rows = vec![vec![0, 1, 3], vec![1, 0, 1], vec![3, 1, 0]];
        metric_closure(&mut rows);
        assert_eq!(rows[0][2], 2);
    }
}
