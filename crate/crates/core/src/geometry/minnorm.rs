//! Nearest point of a finite point set's convex hull to the origin.

use nalgebra::{DMatrix, DVector};

const MAX_ITER: usize = 10_000;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn combine(points: &[Vec<f64>], idx: &[usize], w: &[f64]) -> Vec<f64> {
    let d = points[0].len();
    let mut x = vec![0.0; d];
    for (&i, &wi) in idx.iter().zip(w) {
        for (xj, pj) in x.iter_mut().zip(&points[i]) {
            *xj += wi * pj;
        }
    }
    x
}

/// Minimiser of `|Σ μ_i p_i|` subject to `Σ μ_i = 1` (no sign constraint).
fn affine_min(points: &[Vec<f64>], idx: &[usize]) -> Vec<f64> {
    let k = idx.len();
    let mut m = DMatrix::<f64>::zeros(k + 1, k + 1);
    for a in 0..k {
        for b in 0..k {
            m[(a, b)] = dot(&points[idx[a]], &points[idx[b]]);
        }
        m[(a, k)] = 1.0;
        m[(k, a)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(k + 1);
    rhs[k] = 1.0;
    let sol = m
        .clone()
        .lu()
        .solve(&rhs)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .unwrap_or_else(|| {
            m.svd(true, true)
                .solve(&rhs, 1e-14)
                .unwrap_or_else(|_| DVector::from_element(k + 1, 1.0 / k as f64))
        });
    sol.iter().take(k).copied().collect()
}

/// Wolfe's algorithm: the point of `ch(points)` closest to the origin.
pub(crate) fn min_norm_point(points: &[Vec<f64>]) -> Vec<f64> {
    assert!(!points.is_empty());
    let scale = points.iter().map(|p| dot(p, p)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let z1 = 1e-14 * scale;
    let z2 = 1e-12;
    let start = (0..points.len())
        .min_by(|&a, &b| dot(&points[a], &points[a]).total_cmp(&dot(&points[b], &points[b])))
        .expect("nonempty");
    let mut idx = vec![start];
    let mut lam = vec![1.0];
    let mut x = points[start].clone();
    for _ in 0..MAX_ITER {
        let xx = dot(&x, &x);
        let (j, best) = (0..points.len())
            .map(|j| (j, dot(&x, &points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if xx - best <= z1 || idx.contains(&j) {
            break;
        }
        idx.push(j);
        lam.push(0.0);
        loop {
            let mu = affine_min(points, &idx);
            if mu.iter().all(|&m| m > z2) {
                lam = mu;
                break;
            }
            let mut theta = 1.0f64;
            for (l, m) in lam.iter().zip(&mu) {
                if *m <= z2 && l - m > 0.0 {
                    theta = theta.min(l / (l - m));
                }
            }
            for (l, m) in lam.iter_mut().zip(&mu) {
                *l += theta * (m - *l);
            }
            let keep: Vec<usize> = (0..idx.len()).filter(|&i| lam[i] > z2).collect();
            if keep.is_empty() {
                // Numerical breakdown: restart from the best single vertex.
                idx = vec![j];
                lam = vec![1.0];
                break;
            }
            idx = keep.iter().map(|&i| idx[i]).collect();
            lam = keep.iter().map(|&i| lam[i]).collect();
            let total: f64 = lam.iter().sum();
            lam.iter_mut().for_each(|l| *l /= total);
        }
        x = combine(points, &idx, &lam);
    }
    x
}

/// Distance from `x` to `ch(vertices)`.
pub(crate) fn point_hull_distance(x: &[f64], vertices: &[Vec<f64>]) -> f64 {
    let shifted: Vec<Vec<f64>> = vertices.iter().map(|v| sub(v, x)).collect();
    norm(&min_norm_point(&shifted))
}

/// Distance between `ch(a)` and `ch(b)` via the Minkowski difference.
pub(crate) fn hull_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let diff: Vec<Vec<f64>> = a
        .iter()
        .flat_map(|u| b.iter().map(move |v| sub(u, v)))
        .collect();
    norm(&min_norm_point(&diff))
}

/// `x ∈ ch(vertices)` by searching simplices of at most `d + 1` vertices
/// (Carathéodory) for nonnegative barycentric coordinates.
pub(crate) fn in_hull_barycentric(x: &[f64], vertices: &[Vec<f64>], tol: f64) -> bool {
    let d = x.len();
    let n = vertices.len();
    let max_k = (d + 1).min(n);
    let mut subset = Vec::with_capacity(max_k);
    fn rec(
        start: usize,
        k: usize,
        subset: &mut Vec<usize>,
        n: usize,
        test: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if subset.len() == k {
            return test(subset);
        }
        for i in start..n {
            subset.push(i);
            if rec(i + 1, k, subset, n, test) {
                return true;
            }
            subset.pop();
        }
        false
    }
    let mut test = |s: &[usize]| -> bool {
        // Solve Σ w_i v_i = x, Σ w_i = 1 in the least-squares sense.
        let k = s.len();
        let mut m = DMatrix::<f64>::zeros(d + 1, k);
        let mut rhs = DVector::<f64>::zeros(d + 1);
        for (c, &i) in s.iter().enumerate() {
            for r in 0..d {
                m[(r, c)] = vertices[i][r];
            }
            m[(d, c)] = 1.0;
        }
        for r in 0..d {
            rhs[r] = x[r];
        }
        rhs[d] = 1.0;
        let Ok(w) = m.clone().svd(true, true).solve(&rhs, 1e-14) else {
            return false;
        };
        let residual = (&m * &w - &rhs).norm();
        residual <= tol && w.iter().all(|&v| v >= -tol)
    };
    (1..=max_k).any(|k| {
        subset.clear();
        rec(0, k, &mut subset, n, &mut test)
    })
}
