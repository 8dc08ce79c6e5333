use num_complex::Complex64;

/// Smallest `t` such that the two multisets can be paired one-to-one with
/// every pair closer than `t` (bottleneck assignment).
///
/// Returns `f64::INFINITY` when the lengths differ.
pub fn bottleneck_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let n = a.len();
    if n == 0 {
        return 0.0;
    }
    let dist: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let mut levels: Vec<f64> = dist.iter().flatten().copied().collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(&dist, levels[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    levels[lo]
}

fn perfect_matching(dist: &[Vec<f64>], threshold: f64) -> bool {
    let n = dist.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for row in 0..n {
        let mut seen = vec![false; n];
        if !augment(row, dist, threshold, &mut seen, &mut owner) {
            return false;
        }
    }
    true
}

fn augment(row: usize, dist: &[Vec<f64>], t: f64, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
    for col in 0..dist.len() {
        if dist[row][col] <= t && !seen[col] {
            seen[col] = true;
            let free = match owner[col] {
                None => true,
                Some(other) => augment(other, dist, t, seen, owner),
            };
            if free {
                owner[col] = Some(row);
                return true;
            }
        }
    }
    false
}
