use std::collections::BTreeMap;

/// Symmetric sparse matrix stored row-wise with both triangles present.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSparse {
    n: usize,
    rows: Vec<Vec<(usize, f64)>>,
}

/// Accumulates symmetric contributions before freezing into rows.
#[derive(Debug, Default)]
pub struct SymmetricBuilder {
    n: usize,
    upper: BTreeMap<(usize, usize), f64>,
}

impl SymmetricBuilder {
    pub fn new(n: usize) -> Self {
        SymmetricBuilder { n, upper: BTreeMap::new() }
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let key = if i <= j { (i, j) } else { (j, i) };
        *self.upper.entry(key).or_insert(0.0) += value;
    }

    pub fn build(self) -> SymmetricSparse {
        let mut rows = vec![Vec::new(); self.n];
        for (&(i, j), &v) in &self.upper {
            rows[i].push((j, v));
            if i != j {
                rows[j].push((i, v));
            }
        }
        for row in &mut rows {
            row.sort_by_key(|&(j, _)| j);
        }
        SymmetricSparse { n: self.n, rows }
    }
}

impl SymmetricSparse {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .binary_search_by_key(&j, |&(c, _)| c)
            .map(|k| self.rows[i][k].1)
            .unwrap_or(0.0)
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|row| row.iter().map(|&(j, v)| v * x[j]).sum()).collect()
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(x)
            .map(|(row, xi)| xi * row.iter().map(|&(j, v)| v * x[j]).sum::<f64>())
            .sum()
    }

    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        self.rows
            .iter()
            .zip(x)
            .map(|(row, xi)| xi * row.iter().map(|&(j, v)| v * y[j]).sum::<f64>())
            .sum()
    }

    /// `a * self + b * other`; both must share a dimension.
    pub fn combine(&self, a: f64, other: &SymmetricSparse, b: f64) -> SymmetricSparse {
        assert_eq!(self.n, other.n);
        let mut builder = SymmetricBuilder::new(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row.iter().filter(|(j, _)| *j >= i) {
                builder.add(i, j, a * v);
            }
        }
        for (i, row) in other.rows.iter().enumerate() {
            for &(j, v) in row.iter().filter(|(j, _)| *j >= i) {
                builder.add(i, j, b * v);
            }
        }
        builder.build()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().all(|&(j, v)| self.get(j, i) == v))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                d[i][j] = v;
            }
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_accumulates_and_mirrors() {
        let mut b = SymmetricBuilder::new(3);
        b.add(0, 1, 2.0);
        b.add(1, 0, 1.0);
        b.add(2, 2, 4.0);
        let m = b.build();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
        assert_eq!(m.get(2, 2), 4.0);
        assert_eq!(m.get(0, 2), 0.0);
        assert!(m.is_symmetric());
        assert_eq!(m.quad_form(&[1.0, 1.0, 1.0]), 10.0);
        assert_eq!(m.mul_vec(&[1.0, 0.0, 0.0]), vec![0.0, 3.0, 0.0]);
    }
}
