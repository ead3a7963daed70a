//! Dense and banded kernels behind the eigensolver.

use crate::fem::sparse::SymmetricSparse;

/// Number of negative eigenvalues of a dense symmetric matrix (row-major,
/// both triangles filled), by Bunch–Kaufman `LDLᵀ` with 1x1 and 2x2 pivots.
/// Consumes its input as workspace.
pub fn negative_inertia(a: &mut [f64], n: usize) -> usize {
    debug_assert_eq!(a.len(), n * n);
    let alpha = (1.0 + 17f64.sqrt()) / 8.0;
    let mut negatives = 0;
    let mut k = 0;
    while k < n {
        let at = |a: &[f64], i: usize, j: usize| a[i * n + j];
        let absakk = at(a, k, k).abs();
        let (mut imax, mut colmax) = (k, 0.0);
        for i in k + 1..n {
            let v = at(a, i, k).abs();
            if v > colmax {
                colmax = v;
                imax = i;
            }
        }
        if absakk.max(colmax) == 0.0 {
            k += 1;
            continue;
        }
        let (pivot, size) = if absakk >= alpha * colmax {
            (k, 1)
        } else {
            let mut rowmax: f64 = 0.0;
            for j in k..n {
                if j != imax {
                    rowmax = rowmax.max(at(a, imax, j).abs());
                }
            }
            if absakk * rowmax >= alpha * colmax * colmax {
                (k, 1)
            } else if at(a, imax, imax).abs() >= alpha * rowmax {
                (imax, 1)
            } else {
                (imax, 2)
            }
        };
        let target = if size == 1 { k } else { k + 1 };
        if pivot != target {
            symmetric_swap(a, n, pivot, target);
        }
        if size == 1 {
            let d = a[k * n + k];
            if d < 0.0 {
                negatives += 1;
            }
            for i in k + 1..n {
                let l = a[i * n + k] / d;
                if l == 0.0 {
                    continue;
                }
                for j in k + 1..n {
                    a[i * n + j] -= l * a[k * n + j];
                }
            }
            k += 1;
        } else {
            let (p, q, r) = (a[k * n + k], a[k * n + k + 1], a[(k + 1) * n + k + 1]);
            let det = p * r - q * q;
            negatives += if det < 0.0 {
                1
            } else if p + r < 0.0 {
                2
            } else {
                0
            };
            for i in k + 2..n {
                let (x, y) = (a[i * n + k], a[i * n + k + 1]);
                // row i of [x y] D^{-1}
                let l0 = (r * x - q * y) / det;
                let l1 = (p * y - q * x) / det;
                for j in k + 2..n {
                    a[i * n + j] -= l0 * a[k * n + j] + l1 * a[(k + 1) * n + j];
                }
            }
            k += 2;
        }
    }
    negatives
}

fn symmetric_swap(a: &mut [f64], n: usize, i: usize, j: usize) {
    for c in 0..n {
        a.swap(i * n + c, j * n + c);
    }
    for r in 0..n {
        a.swap(r * n + i, r * n + j);
    }
}

/// Reverse Cuthill–McKee ordering of the sparsity graph. Returns
/// `order[new] = old`.
pub fn reverse_cuthill_mckee(matrix: &SymmetricSparse) -> Vec<usize> {
    let n = matrix.dim();
    let degree: Vec<usize> = (0..n).map(|i| matrix.row(i).iter().filter(|(j, _)| *j != i).count()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let seed = (0..n).filter(|&i| !visited[i]).min_by_key(|&i| (degree[i], i)).unwrap();
        let start = pseudo_peripheral(matrix, seed, &degree);
        let begin = order.len();
        visited[start] = true;
        order.push(start);
        let mut head = begin;
        while head < order.len() {
            let u = order[head];
            head += 1;
            let mut next: Vec<usize> =
                matrix.row(u).iter().map(|&(j, _)| j).filter(|&j| j != u && !visited[j]).collect();
            next.sort_by_key(|&j| (degree[j], j));
            for j in next {
                visited[j] = true;
                order.push(j);
            }
        }
    }
    order.reverse();
    order
}

fn bfs_levels(matrix: &SymmetricSparse, start: usize) -> Vec<usize> {
    let n = matrix.dim();
    let mut level = vec![usize::MAX; n];
    level[start] = 0;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &(j, _) in matrix.row(u) {
            if level[j] == usize::MAX {
                level[j] = level[u] + 1;
                queue.push_back(j);
            }
        }
    }
    level
}

fn pseudo_peripheral(matrix: &SymmetricSparse, seed: usize, degree: &[usize]) -> usize {
    let mut current = seed;
    let mut eccentricity = 0;
    for _ in 0..8 {
        let level = bfs_levels(matrix, current);
        let depth = level.iter().filter(|&&l| l != usize::MAX).max().copied().unwrap_or(0);
        if depth <= eccentricity && current != seed {
            break;
        }
        eccentricity = depth;
        let candidate = (0..level.len())
            .filter(|&i| level[i] == depth)
            .min_by_key(|&i| (degree[i], i))
            .unwrap();
        if candidate == current {
            break;
        }
        current = candidate;
    }
    current
}

/// LU factorization with partial pivoting of a banded matrix with equal
/// lower and upper bandwidth, stored by rows with room for pivot fill-in.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    bw: usize,
    width: usize,
    data: Vec<f64>,
    pivots: Vec<usize>,
    /// Number of pivots that were exactly zero and replaced.
    pub replaced_pivots: usize,
}

impl BandedLu {
    /// Factor `P (matrix permuted by order) = L U`; `order[new] = old`.
    pub fn factor(matrix: &SymmetricSparse, order: &[usize]) -> Self {
        let n = matrix.dim();
        let mut position = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let mut bw = 0;
        for i in 0..n {
            for &(j, _) in matrix.row(i) {
                bw = bw.max(position[i].abs_diff(position[j]));
            }
        }
        let width = 3 * bw + 1;
        let mut lu = BandedLu { n, bw, width, data: vec![0.0; n * width], pivots: vec![0; n], replaced_pivots: 0 };
        let mut scale: f64 = 0.0;
        for i in 0..n {
            for &(j, v) in matrix.row(i) {
                let (r, c) = (position[i], position[j]);
                *lu.at_mut(r, c) = v;
                scale = scale.max(v.abs());
            }
        }
        lu.eliminate(scale.max(f64::MIN_POSITIVE));
        lu
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    #[inline]
    fn idx(&self, r: usize, c: usize) -> usize {
        r * self.width + (c + self.bw - r)
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[self.idx(r, c)]
    }

    #[inline]
    fn at_mut(&mut self, r: usize, c: usize) -> &mut f64 {
        let i = self.idx(r, c);
        &mut self.data[i]
    }

    fn eliminate(&mut self, scale: f64) {
        let (n, bw) = (self.n, self.bw);
        for k in 0..n {
            let last_row = (k + bw).min(n - 1);
            let last_col = (k + 2 * bw).min(n - 1);
            let mut p = k;
            let mut best = self.at(k, k).abs();
            for i in k + 1..=last_row {
                let v = self.at(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            self.pivots[k] = p;
            if p != k {
                for c in k..=last_col {
                    let (a, b) = (self.idx(k, c), self.idx(p, c));
                    self.data.swap(a, b);
                }
            }
            if self.at(k, k) == 0.0 {
                *self.at_mut(k, k) = f64::EPSILON * scale;
                self.replaced_pivots += 1;
            }
            let d = self.at(k, k);
            for i in k + 1..=last_row {
                let l = self.at(i, k) / d;
                *self.at_mut(i, k) = l;
                if l == 0.0 {
                    continue;
                }
                for c in k + 1..=last_col {
                    let u = self.at(k, c);
                    *self.at_mut(i, c) -= l * u;
                }
            }
        }
    }

    /// Solve in the permuted numbering.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, bw) = (self.n, self.bw);
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk != 0.0 {
                for i in k + 1..=(k + bw).min(n - 1) {
                    b[i] -= self.at(i, k) * bk;
                }
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for c in k + 1..=(k + 2 * bw).min(n - 1) {
                s -= self.at(k, c) * b[c];
            }
            b[k] = s / self.at(k, k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::sparse::SymmetricBuilder;
    use nalgebra::DMatrix;

    fn pseudo_random(seed: u64, n: usize) -> Vec<f64> {
        let mut s = seed;
        (0..n)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
            })
            .collect()
    }

    #[test]
    fn inertia_matches_symmetric_eigen() {
        for seed in 0..40 {
            let n = 1 + (seed as usize % 9);
            let r = pseudo_random(seed, n * n);
            let mut a = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..=i {
                    let v = r[i * n + j] + if seed % 3 == 0 && i == j { 0.0 } else { 0.0 };
                    // force some zero diagonals to exercise 2x2 pivots
                    let v = if seed % 2 == 0 && i == j { 0.0 } else { v };
                    a[i * n + j] = v;
                    a[j * n + i] = v;
                }
            }
            let m = DMatrix::from_row_slice(n, n, &a);
            let expected = m.symmetric_eigenvalues().iter().filter(|&&x| x < 0.0).count();
            assert_eq!(negative_inertia(&mut a, n), expected, "seed {seed}");
        }
    }

    #[test]
    fn banded_lu_solves_permuted_tridiagonal_plus_corner() {
        // a cycle: tridiagonal plus (0, n-1) coupling, indefinite shift
        let n = 30;
        let mut b = SymmetricBuilder::new(n);
        for i in 0..n {
            b.add(i, i, 2.0 - 0.7);
            b.add(i, (i + 1) % n, -1.0);
        }
        let m = b.build();
        let order = reverse_cuthill_mckee(&m);
        let lu = BandedLu::factor(&m, &order);
        assert!(lu.bandwidth() <= 2);
        let x: Vec<f64> = pseudo_random(3, n);
        let rhs = m.mul_vec(&x);
        let mut permuted: Vec<f64> = order.iter().map(|&o| rhs[o]).collect();
        lu.solve_in_place(&mut permuted);
        for (new, &old) in order.iter().enumerate() {
            assert!((permuted[new] - x[old]).abs() < 1e-10);
        }
    }
}
