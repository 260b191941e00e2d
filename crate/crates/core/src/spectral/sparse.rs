//! Symmetric sparse matrices, reverse Cuthill-McKee ordering and an envelope
//! LDL^T factorization used for shift-invert solves and inertia counts.

use std::collections::VecDeque;

/// Symmetric matrix in CSR form with both triangles stored and sorted
/// column indices.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(i, j, v) in triplets {
            rows[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut r in rows {
            r.sort_by_key(|e| e.0);
            let mut last: Option<usize> = None;
            for (j, v) in r {
                if last == Some(j) {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(j);
                    vals.push(v);
                    last = Some(j);
                }
            }
            row_ptr.push(cols.len());
        }
        CsrMatrix { n, row_ptr, cols, vals }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(k) => self.vals[r.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).map(|(j, v)| v * x[j]).sum()).collect()
    }

    /// `x^T A y`
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| x[i] * self.row(i).map(|(j, v)| v * y[j]).sum::<f64>())
            .sum()
    }

    /// Copy with `d[i]` added to each diagonal entry.
    pub fn add_diagonal(&self, d: &[f64]) -> CsrMatrix {
        let mut out = self.clone();
        for (i, di) in d.iter().enumerate().take(self.n) {
            let r = self.row_ptr[i]..self.row_ptr[i + 1];
            match self.cols[r.clone()].binary_search(&i) {
                Ok(k) => out.vals[r.start + k] += di,
                Err(_) => panic!("missing diagonal entry in row {i}"),
            }
        }
        out
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Reverse Cuthill-McKee ordering: `perm[new] = old`.
    pub fn rcm_ordering(&self) -> Vec<usize> {
        let degree: Vec<usize> = (0..self.n).map(|i| self.row_ptr[i + 1] - self.row_ptr[i]).collect();
        let mut visited = vec![false; self.n];
        let mut order = Vec::with_capacity(self.n);
        while order.len() < self.n {
            let start = (0..self.n).filter(|&i| !visited[i]).min_by_key(|&i| degree[i]).unwrap();
            let start = pseudo_peripheral(self, start, &visited);
            visited[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                let mut nbrs: Vec<usize> =
                    self.row(v).map(|(j, _)| j).filter(|&j| !visited[j]).collect();
                nbrs.sort_by_key(|&j| (degree[j], j));
                for j in nbrs {
                    visited[j] = true;
                    queue.push_back(j);
                }
            }
        }
        order.reverse();
        order
    }
}

/// Endpoint of repeated breadth-first sweeps; a cheap stand-in for a
/// peripheral vertex.
fn pseudo_peripheral(a: &CsrMatrix, start: usize, blocked: &[bool]) -> usize {
    let mut v = start;
    let mut ecc = 0;
    for _ in 0..5 {
        let mut dist = vec![usize::MAX; a.n];
        dist[v] = 0;
        let mut queue = VecDeque::from([v]);
        let mut last = v;
        while let Some(u) = queue.pop_front() {
            last = u;
            for (w, _) in a.row(u) {
                if !blocked[w] && dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if dist[last] <= ecc {
            break;
        }
        ecc = dist[last];
        v = last;
    }
    v
}

/// Envelope (variable-band) LDL^T factorization without pivoting.
#[derive(Debug, Clone)]
pub struct LdlFactor {
    perm: Vec<usize>,
    /// First column of the envelope of each permuted row.
    first: Vec<usize>,
    /// Offsets into `lower` for each row.
    start: Vec<usize>,
    /// Strictly lower part of L, row by row over the envelope.
    lower: Vec<f64>,
    diag: Vec<f64>,
}

impl LdlFactor {
    /// Factors `a` in the given ordering (`perm[new] = old`). Returns `None`
    /// when a pivot vanishes.
    pub fn new(a: &CsrMatrix, perm: &[usize]) -> Option<Self> {
        let n = a.n;
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut first = vec![0; n];
        for i in 0..n {
            first[i] = a.row(perm[i]).map(|(j, _)| inv[j]).filter(|&j| j <= i).min().unwrap_or(i);
        }
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + (i - first[i]));
        }
        let mut lower = vec![0.0; start[n]];
        let mut diag = vec![0.0; n];
        let scale = a.norm_inf().max(f64::MIN_POSITIVE);
        let mut row = Vec::new();
        for i in 0..n {
            let fi = first[i];
            row.clear();
            row.resize(i - fi + 1, 0.0);
            for (j, v) in a.row(perm[i]) {
                let j = inv[j];
                if j <= i {
                    row[j - fi] = v;
                }
            }
            // row[j - fi] holds (A - L D L^T) entries; turn them into u_j = L_ij D_j.
            for j in fi..i {
                let fj = first[j].max(fi);
                let lj = &lower[start[j]..start[j + 1]];
                let off_j = first[j];
                let mut s = row[j - fi];
                for k in fj..j {
                    s -= row[k - fi] * lj[k - off_j];
                }
                row[j - fi] = s;
            }
            let mut d = row[i - fi];
            for j in fi..i {
                let l = row[j - fi] / diag[j];
                d -= row[j - fi] * l;
                lower[start[i] + (j - fi)] = l;
            }
            if !(d.abs() > 1e-14 * scale) || !d.is_finite() {
                return None;
            }
            diag[i] = d;
        }
        Some(LdlFactor { perm: perm.to_vec(), first, start, lower, diag })
    }

    /// Number of negative pivots, which equals the number of negative
    /// eigenvalues of the factored matrix (Sylvester's law of inertia).
    pub fn negative_pivots(&self) -> usize {
        self.diag.iter().filter(|&&d| d < 0.0).count()
    }

    pub fn envelope_size(&self) -> usize {
        self.lower.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let li = &self.lower[self.start[i]..self.start[i + 1]];
            let fi = self.first[i];
            let mut s = y[i];
            for (k, l) in li.iter().enumerate() {
                s -= l * y[fi + k];
            }
            y[i] = s;
        }
        y.iter_mut().zip(&self.diag).for_each(|(yi, d)| *yi /= d);
        for i in (0..n).rev() {
            let li = &self.lower[self.start[i]..self.start[i + 1]];
            let fi = self.first[i];
            let yi = y[i];
            for (k, l) in li.iter().enumerate() {
                y[fi + k] -= l * yi;
            }
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}
