use crate::error::{Error, Result};
use crate::geometry::{centroid, Point};
use crate::rng::Stream;

const MAX_ITERATIONS: usize = 100;
const MOVEMENT_TOLERANCE: f64 = 1e-9;

/// Node-to-cluster labels with one centroid per cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    pub k: usize,
    pub labels: Vec<usize>,
    pub centroids: Vec<Point>,
}

impl ClusterAssignment {
    /// Node indices of cluster `c`, ascending.
    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i] == c).collect()
    }

    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &c) in self.labels.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for &c in &self.labels {
            out[c] += 1;
        }
        out
    }
}

/// Index of the nearest centroid; equidistant centroids go to the lowest index.
pub fn nearest(p: Point, centroids: &[Point]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, &q) in centroids.iter().enumerate() {
        let d = p.dist_sq(q);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

fn assign(nodes: &[Point], centroids: &[Point]) -> Vec<usize> {
    nodes.iter().map(|&p| nearest(p, centroids)).collect()
}

fn seed_centroids(nodes: &[Point], k: usize, rng: &mut Stream) -> Vec<Point> {
    let mut centroids = vec![nodes[rng.below(nodes.len())]];
    let mut d2: Vec<f64> = nodes.iter().map(|p| p.dist_sq(centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let r = rng.unit() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if w > 0.0 && acc > r {
                    pick = Some(i);
                    break;
                }
            }
            // Rounding can leave r just above the final partial sum.
            pick.unwrap_or_else(|| d2.iter().rposition(|&w| w > 0.0).unwrap())
        } else {
            rng.below(nodes.len())
        };
        let c = nodes[pick];
        centroids.push(c);
        for (w, p) in d2.iter_mut().zip(nodes) {
            *w = w.min(p.dist_sq(c));
        }
    }
    centroids
}

/// Reseeds empty clusters at the node farthest from its nearest centroid.
fn fill_empty(nodes: &[Point], centroids: &mut [Point], labels: &mut Vec<usize>) {
    let k = centroids.len();
    for _ in 0..k {
        let mut sizes = vec![0usize; k];
        for &c in labels.iter() {
            sizes[c] += 1;
        }
        let Some(empty) = sizes.iter().position(|&s| s == 0) else {
            return;
        };
        let mut far = 0;
        let mut far_d = -1.0;
        for (i, &p) in nodes.iter().enumerate() {
            let d = p.dist_sq(centroids[labels[i]]);
            if d > far_d && sizes[labels[i]] > 1 {
                far = i;
                far_d = d;
            }
        }
        centroids[empty] = nodes[far];
        *labels = assign(nodes, centroids);
    }
}

/// Lloyd's iteration from k-means++ seeding.
///
/// Stops once no centroid moves by more than 1e-9 or after 100 rounds. The
/// returned labels are the nearest-centroid labels of the returned centroids.
pub fn kmeans(nodes: &[Point], k: usize, seed: u64) -> Result<ClusterAssignment> {
    if k == 0 || k > nodes.len() {
        return Err(Error::InvalidK {
            k,
            reason: format!("k-means needs 1 <= k <= {} nodes", nodes.len()),
        });
    }
    let mut rng = Stream::new(seed);
    let mut centroids = seed_centroids(nodes, k, &mut rng);
    let mut labels = assign(nodes, &centroids);
    fill_empty(nodes, &mut centroids, &mut labels);

    for _ in 0..MAX_ITERATIONS {
        let mut members = vec![Vec::new(); k];
        for (i, &c) in labels.iter().enumerate() {
            members[c].push(nodes[i]);
        }
        let updated: Vec<Point> = members
            .iter()
            .zip(&centroids)
            .map(|(m, &old)| if m.is_empty() { old } else { centroid(m) })
            .collect();
        let moved = updated
            .iter()
            .zip(&centroids)
            .map(|(a, b)| a.dist(*b))
            .fold(0.0, f64::max);

        let mut next = assign(nodes, &updated);
        let mut next_centroids = updated;
        fill_empty(nodes, &mut next_centroids, &mut next);
        // Keep the last consistent state if reseeding could not fill every cluster.
        if (0..k).all(|c| next.contains(&c)) {
            centroids = next_centroids;
            labels = next;
        } else {
            break;
        }
        if moved < MOVEMENT_TOLERANCE {
            break;
        }
    }

    Ok(ClusterAssignment {
        k,
        labels,
        centroids,
    })
}
