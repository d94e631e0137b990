//! Seeded k-means over score-distribution embeddings and the
//! Calinski-Harabasz criterion for picking the cluster count.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::calibration::Matrix;
use crate::error::{Error, Result};
use crate::rng::stream_rng;

/// Result of a k-means run: one cluster id (0-based) per input row.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    pub assignments: Vec<usize>,
    pub centroids: Matrix,
    pub iterations: usize,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lloyd's algorithm with k-means++ initialization.
///
/// Deterministic given the seed; stops when assignments stabilize or
/// after `max_iter` passes.
pub fn kmeans(points: &Matrix, m: usize, seed: u64, max_iter: usize) -> Result<KMeansFit> {
    let n = points.n_rows();
    let p = points.n_cols();
    if m < 1 {
        return Err(Error::InvalidClusterCount(m));
    }
    if m > n {
        return Err(Error::InvalidClusterCount(m));
    }

    let mut rng = stream_rng(seed, 0);
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(m);
    centroids.push(points.row(rng.gen_range(0..n)).to_vec());
    let mut d2 = vec![0.0f64; n];
    while centroids.len() < m {
        let mut total = 0.0;
        for i in 0..n {
            d2[i] = centroids
                .iter()
                .map(|c| sq_dist(points.row(i), c))
                .fold(f64::INFINITY, f64::min);
            total += d2[i];
        }
        let next = if total > 0.0 {
            let r = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                acc += d;
                if acc >= r {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            // all remaining points coincide with a centroid; take the
            // first row not yet used so that m centroids always exist
            (0..n)
                .find(|&i| !centroids.iter().any(|c| c.as_slice() == points.row(i)))
                .unwrap_or(0)
        };
        centroids.push(points.row(next).to_vec());
    }

    let mut assignments = vec![0usize; n];
    let mut iterations = 0;
    for iter in 0..max_iter {
        iterations = iter + 1;
        let mut changed = false;
        for i in 0..n {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (c, centroid) in centroids.iter().enumerate() {
                let d = sq_dist(points.row(i), centroid);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            if assignments[i] != best {
                assignments[i] = best;
                changed = true;
            }
        }
        if !changed && iter > 0 {
            break;
        }

        let mut sums = vec![vec![0.0f64; p]; m];
        let mut counts = vec![0usize; m];
        for i in 0..n {
            counts[assignments[i]] += 1;
            for k in 0..p {
                sums[assignments[i]][k] += points.get(i, k);
            }
        }
        for c in 0..m {
            if counts[c] == 0 {
                // re-seed an emptied cluster with the point farthest
                // from its own centroid
                let far = (0..n)
                    .max_by(|&a, &b| {
                        sq_dist(points.row(a), &centroids[assignments[a]])
                            .total_cmp(&sq_dist(points.row(b), &centroids[assignments[b]]))
                    })
                    .unwrap_or(0);
                centroids[c] = points.row(far).to_vec();
            } else {
                for k in 0..p {
                    centroids[c][k] = sums[c][k] / counts[c] as f64;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let flat: Vec<f64> = centroids.into_iter().flatten().collect();
    Ok(KMeansFit {
        assignments,
        centroids: Matrix::from_flat(m, p, flat)?,
        iterations,
    })
}

/// Calinski-Harabasz index of a clustering.
///
/// `CH = [B / (M - 1)] / [W / (n - M)]` with `B` the between-cluster and
/// `W` the within-cluster dispersion. Undefined for `M = 1` or `M = n`;
/// a perfect clustering with `W = 0` scores `+inf` by convention.
/// Larger values indicate better-separated clusters.
pub fn calinski_harabasz(points: &Matrix, assignments: &[usize]) -> Result<f64> {
    let n = points.n_rows();
    if assignments.len() != n {
        return Err(Error::LengthMismatch {
            what: "points vs assignments",
            left: n,
            right: assignments.len(),
        });
    }
    let m = assignments.iter().copied().max().map_or(0, |x| x + 1);
    let mut counts = vec![0usize; m];
    for &a in assignments {
        counts[a] += 1;
    }
    let occupied = counts.iter().filter(|&&c| c > 0).count();
    if occupied < 2 || occupied >= n {
        return Err(Error::UndefinedIndex {
            clusters: occupied,
            points: n,
        });
    }
    if counts.iter().any(|&c| c == 0) {
        return Err(Error::Domain("cluster ids must be contiguous and non-empty".into()));
    }

    let p = points.n_cols();
    let mut grand = vec![0.0f64; p];
    let mut centroids = vec![vec![0.0f64; p]; m];
    for i in 0..n {
        for k in 0..p {
            grand[k] += points.get(i, k);
            centroids[assignments[i]][k] += points.get(i, k);
        }
    }
    for k in 0..p {
        grand[k] /= n as f64;
    }
    for c in 0..m {
        for k in 0..p {
            centroids[c][k] /= counts[c] as f64;
        }
    }

    let mut between = 0.0;
    for c in 0..m {
        between += counts[c] as f64 * sq_dist(&centroids[c], &grand);
    }
    let mut within = 0.0;
    for i in 0..n {
        within += sq_dist(points.row(i), &centroids[assignments[i]]);
    }

    if within == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((between / (m - 1) as f64) / (within / (n - m) as f64))
}
