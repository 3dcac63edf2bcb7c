//! Small exact lattice geometry: affine ranks, planar hulls, mixed volumes.

use num_integer::Integer;

/// Rank of a set of integer vectors.
pub(crate) fn rank(vectors: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .filter(|v: &Vec<i128>| v.iter().any(|&x| x != 0))
        .collect();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i == rank || rows[i][col] == 0 {
                continue;
            }
            let (a, b) = (rows[rank][col], rows[i][col]);
            let g = a.gcd(&b);
            let (fa, fb) = (b / g, a / g);
            let pivot = rows[rank].clone();
            for (x, &y) in rows[i].iter_mut().zip(&pivot).take(width) {
                *x = *x * fb - y * fa;
            }
            let content = rows[i].iter().fold(0i128, |acc, &x| acc.gcd(&x));
            if content > 1 {
                rows[i].iter_mut().for_each(|x| *x /= content);
            }
        }
        rank += 1;
    }
    rank
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Convex hull, counter-clockwise, collinear points dropped.
pub(crate) fn hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(i64, i64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Twice the area of the convex hull.
pub(crate) fn doubled_area(points: &[(i64, i64)]) -> i64 {
    let h = hull(points);
    if h.len() < 3 {
        return 0;
    }
    let n = h.len();
    (0..n)
        .map(|i| {
            let (p, q) = (h[i], h[(i + 1) % n]);
            p.0 * q.1 - p.1 * q.0
        })
        .sum::<i64>()
        .abs()
}

pub(crate) fn minkowski_sum(p: &[(i64, i64)], q: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(p.len() * q.len());
    for a in p {
        for b in q {
            out.push((a.0 + b.0, a.1 + b.1));
        }
    }
    out
}

/// Twice the mixed area `area(P+Q) - area(P) - area(Q)`.
pub(crate) fn doubled_mixed_area(p: &[(i64, i64)], q: &[(i64, i64)]) -> i64 {
    doubled_area(&minkowski_sum(p, q)) - doubled_area(p) - doubled_area(q)
}
