//! Reference implementations kept independent of the library code paths.

#![allow(dead_code)]

use blockcur::DenseMatrix;

/// Loop-for-loop adaptive cross approximation: full argmax of the residual
/// (first maximum in row-major order), then the rank-1 update built from
/// a fresh copy of the previous residual.
pub fn aca_transliteration(a: &DenseMatrix, r: usize) -> (Vec<usize>, Vec<usize>) {
    let (m, n) = a.shape();
    let mut res: Vec<Vec<f64>> = (0..m).map(|i| a.row(i).to_vec()).collect();
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    for _k in 0..r {
        let mut best = (0, 0);
        let mut best_abs = -1.0;
        for i in 0..m {
            for j in 0..n {
                if res[i][j].abs() > best_abs {
                    best_abs = res[i][j].abs();
                    best = (i, j);
                }
            }
        }
        let (i, j) = best;
        rows.push(i);
        cols.push(j);
        let prev = res.clone();
        let pivot = prev[i][j];
        for p in 0..m {
            for q in 0..n {
                res[p][q] = prev[p][q] - (1.0 / pivot) * prev[p][j] * prev[i][q];
            }
        }
    }
    (rows, cols)
}

/// Determinant by Laplace expansion along the first row.
pub fn laplace_det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut det = 0.0;
    for j in 0..n {
        let minor: Vec<Vec<f64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(q, _)| q != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * m[0][j] * laplace_det(&minor);
    }
    det
}

/// All k-subsets of 0..n in lexicographic order, generated recursively.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Largest `|det|` over all k×k submatrices by direct enumeration.
pub fn enumerate_max_volume(a: &DenseMatrix, k: usize) -> (f64, usize) {
    let mut best = 0.0f64;
    let mut count = 0;
    for rows in subsets(a.rows(), k) {
        for cols in subsets(a.cols(), k) {
            let sub: Vec<Vec<f64>> = rows
                .iter()
                .map(|&i| cols.iter().map(|&j| a[(i, j)]).collect())
                .collect();
            best = best.max(laplace_det(&sub).abs());
            count += 1;
        }
    }
    (best, count)
}

/// Row residual of `a` after projecting out an orthogonal family.
pub fn residual_after_projection(a: &DenseMatrix, basis: &[Vec<f64>], axis_rows: bool) -> f64 {
    let lanes: Vec<Vec<f64>> = if axis_rows {
        (0..a.rows()).map(|i| a.row(i).to_vec()).collect()
    } else {
        (0..a.cols()).map(|j| a.column(j)).collect()
    };
    let mut total = 0.0;
    for mut lane in lanes {
        for v in basis {
            let vv: f64 = v.iter().map(|x| x * x).sum();
            let c: f64 = lane.iter().zip(v).map(|(x, y)| x * y).sum::<f64>() / vv;
            for (x, y) in lane.iter_mut().zip(v) {
                *x -= c * y;
            }
        }
        total += lane.iter().map(|x| x * x).sum::<f64>();
    }
    total.sqrt()
}

pub fn cosine(p: &[f64], q: &[f64]) -> f64 {
    let d: f64 = p.iter().zip(q).map(|(x, y)| x * y).sum();
    let np: f64 = p.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nq: f64 = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    d.abs() / (np * nq)
}

pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}
