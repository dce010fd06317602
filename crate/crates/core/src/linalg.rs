//! Dense real linear algebra used by every other module.
//!
//! Matrices are small (at most a few thousand rows), so everything here is a
//! straightforward O(n^3) routine over row-major `Vec<f64>` storage. The
//! symmetric eigensolver is Householder tridiagonalization followed by the
//! implicit-shift QL iteration.

use std::fmt;

use crate::error::{Error, Result};

/// Largest dimension `kron` will assemble unless told otherwise.
pub const DEFAULT_MAX_DIM: usize = 4096;

const SYMMETRY_TOL: f64 = 1e-12;
const GRAM_TOL: f64 = 1e-8;
const QL_MAX_ITER: usize = 60;

/// Square real matrix with a free-form basis label.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    data: Vec<f64>,
    basis_tag: String,
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OperatorMatrix[{}] ({})", self.dim, self.basis_tag)?;
        for i in 0..self.dim.min(12) {
            let row: Vec<String> = (0..self.dim.min(12))
                .map(|j| format!("{:+.4e}", self[(i, j)]))
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix {
            dim,
            data: vec![0.0; dim * dim],
            basis_tag: String::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails unless `entries.len() == dim * dim`.
    pub fn from_row_major(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        Ok(OperatorMatrix {
            dim,
            data: entries,
            basis_tag: String::new(),
        })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        OperatorMatrix {
            dim,
            data,
            basis_tag: String::new(),
        }
    }

    /// Like `from_row_major`, additionally rejecting asymmetric input.
    pub fn symmetric(dim: usize, entries: Vec<f64>) -> Result<Self> {
        let m = Self::from_row_major(dim, entries)?;
        m.check_symmetric()?;
        Ok(m)
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.basis_tag = tag.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_tag(&self) -> &str {
        &self.basis_tag
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn check_symmetric(&self) -> Result<()> {
        let tolerance = SYMMETRY_TOL * self.max_abs();
        let max_asymmetry = self.max_asymmetry();
        if max_asymmetry > tolerance {
            return Err(Error::NotSymmetric {
                max_asymmetry,
                tolerance,
            });
        }
        Ok(())
    }

    /// Replaces the matrix by `(m + m^T) / 2`.
    pub fn symmetrize(&mut self) {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let avg = 0.5 * (self[(i, j)] + self[(j, i)]);
                self[(i, j)] = avg;
                self[(j, i)] = avg;
            }
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim).with_tag(self.basis_tag.clone());
        for i in 0..self.dim {
            for j in 0..self.dim {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &OperatorMatrix, factor: f64) -> Result<()> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.dim, other.dim
            )));
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += factor * b;
        }
        Ok(())
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {}",
                self.dim, other.dim
            )));
        }
        let n = self.dim;
        let mut out = Self::zeros(n).with_tag(self.basis_tag.clone());
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let row_b = &other.data[k * n..(k + 1) * n];
                let row_out = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in row_out.iter_mut().zip(row_b) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|i| dot(self.row(i), v)).collect()
    }

    /// `<u| self |v>`.
    pub fn bilinear(&self, u: &[f64], v: &[f64]) -> f64 {
        dot(u, &self.matvec(v))
    }
}

impl std::ops::Index<(usize, usize)> for OperatorMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for OperatorMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Eigen decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector belonging to `values[k]`; its
    /// largest-magnitude component is positive.
    pub vectors: Vec<Vec<f64>>,
}

impl Eigen {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Symmetric eigendecomposition.
pub fn eigh(m: &OperatorMatrix) -> Result<Eigen> {
    m.check_symmetric()?;
    let n = m.dim();
    if n == 0 {
        return Ok(Eigen {
            values: vec![],
            vectors: vec![],
        });
    }
    let mut v = m.entries().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut v, &mut d, &mut e);
    // QL rotations act on columns of V; work on its transpose so they touch rows.
    let mut w = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            w[j * n + i] = v[i * n + j];
        }
    }
    drop(v);
    tridiagonal_ql(n, &mut d, &mut e, &mut w)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let mut col = w[k * n..(k + 1) * n].to_vec();
            fix_sign(&mut col);
            col
        })
        .collect();
    Ok(Eigen { values, vectors })
}

fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

// Householder reduction to tridiagonal form (EISPACK tred2 lineage). On exit
// `d` holds the diagonal, `e[1..]` the subdiagonal and `v` the accumulated
// orthogonal transform, all row-major.
fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..(n - 1) {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL on the tridiagonal (d, e). `w` holds the transform
// transposed: row k is the k-th eigenvector on exit.
fn tridiagonal_ql(n: usize, d: &mut [f64], e: &mut [f64], w: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1 = 0.0_f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > QL_MAX_ITER {
                    let offdiag_norm = e.iter().map(|x| x * x).sum::<f64>().sqrt();
                    return Err(Error::NoConvergence {
                        iterations: iter - 1,
                        offdiag_norm,
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = w.split_at_mut((i + 1) * n);
                    let row_i = &mut lo[i * n..];
                    let row_next = &mut hi[..n];
                    for (a, b) in row_i.iter_mut().zip(row_next.iter_mut()) {
                        let h = *b;
                        *b = s * *a + c * h;
                        *a = c * *a - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Kronecker product with the default dimension guard.
pub fn kron(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    kron_with_limit(a, b, DEFAULT_MAX_DIM)
}

pub fn kron_with_limit(
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    max_dim: usize,
) -> Result<OperatorMatrix> {
    let (na, nb) = (a.dim(), b.dim());
    let dim = na.saturating_mul(nb);
    if dim > max_dim {
        return Err(Error::DimensionOverflow { dim, max: max_dim });
    }
    let mut out = OperatorMatrix::zeros(dim).with_tag("product");
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            if aij == 0.0 {
                continue;
            }
            for k in 0..nb {
                let row = (i * nb + k) * dim + j * nb;
                let src = b.row(k);
                for (o, &bkl) in out.data[row..row + nb].iter_mut().zip(src) {
                    *o = aij * bkl;
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of a sequence of factors, folded left to right.
pub fn kron_all(factors: &[&OperatorMatrix]) -> Result<OperatorMatrix> {
    let mut iter = factors.iter();
    let first = match iter.next() {
        Some(f) => (*f).clone(),
        None => return Ok(OperatorMatrix::identity(1)),
    };
    iter.try_fold(first, |acc, f| kron(&acc, f))
}

/// Projects `m` onto the span of orthonormal `basis` columns: returns `B^T m B`.
pub fn congruence_transform(m: &OperatorMatrix, basis: &[Vec<f64>]) -> Result<OperatorMatrix> {
    let n = m.dim();
    let k = basis.len();
    if k > n {
        return Err(Error::DimensionMismatch(format!(
            "{k} basis vectors in dimension {n}"
        )));
    }
    if let Some(bad) = basis.iter().find(|b| b.len() != n) {
        return Err(Error::DimensionMismatch(format!(
            "basis vector of length {} in dimension {n}",
            bad.len()
        )));
    }
    let mut deviation = 0.0_f64;
    for a in 0..k {
        for b in a..k {
            let target = if a == b { 1.0 } else { 0.0 };
            deviation = deviation.max((dot(&basis[a], &basis[b]) - target).abs());
        }
    }
    if deviation > GRAM_TOL {
        return Err(Error::NonOrthonormal { deviation });
    }
    let images: Vec<Vec<f64>> = basis.iter().map(|b| m.matvec(b)).collect();
    let mut out = OperatorMatrix::from_fn(k, |a, b| dot(&basis[a], &images[b]));
    out.symmetrize();
    Ok(out.with_tag(m.basis_tag().to_string()))
}

/// Lower Cholesky factor of a symmetric positive-definite matrix.
pub fn cholesky(m: &OperatorMatrix) -> Result<OperatorMatrix> {
    m.check_symmetric()?;
    let n = m.dim();
    let mut l = OperatorMatrix::zeros(n);
    for j in 0..n {
        let mut diag = m[(j, j)];
        for k in 0..j {
            diag -= l[(j, k)] * l[(j, k)];
        }
        if diag <= 0.0 || !diag.is_finite() {
            return Err(Error::SingularMatrix {
                pivot: j,
                value: diag,
            });
        }
        let ljj = diag.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Solves `m x = rhs` for symmetric positive-definite `m`.
pub fn solve_spd(m: &OperatorMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let l = cholesky(m)?;
    Ok(cholesky_solve(&l, rhs))
}

fn cholesky_solve(l: &OperatorMatrix, rhs: &[f64]) -> Vec<f64> {
    let n = l.dim();
    let mut y = rhs.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l[(i, k)] * y[k];
        }
        y[i] /= l[(i, i)];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            y[i] -= l[(k, i)] * y[k];
        }
        y[i] /= l[(i, i)];
    }
    y
}

/// Inverse of a symmetric positive-definite matrix via Cholesky.
pub fn inverse_spd(m: &OperatorMatrix) -> Result<OperatorMatrix> {
    let l = cholesky(m)?;
    let n = m.dim();
    let mut inv = OperatorMatrix::zeros(n);
    let mut unit = vec![0.0; n];
    for j in 0..n {
        unit.iter_mut().for_each(|u| *u = 0.0);
        unit[j] = 1.0;
        let col = cholesky_solve(&l, &unit);
        for i in 0..n {
            inv[(i, j)] = col[i];
        }
    }
    inv.symmetrize();
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut impl Rng) -> OperatorMatrix {
        let mut m = OperatorMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let x: f64 = rng.gen_range(-1.0..1.0);
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        m
    }

    // Number of eigenvalues below `shift`, from the inertia of m - shift*I
    // (symmetric Gaussian elimination, no pivoting).
    fn count_below(m: &OperatorMatrix, shift: f64) -> usize {
        let n = m.dim();
        let mut a: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| m[(i, j)] - if i == j { shift } else { 0.0 })
                    .collect()
            })
            .collect();
        let mut negatives = 0;
        for k in 0..n {
            let pivot = a[k][k];
            if pivot < 0.0 {
                negatives += 1;
            }
            for i in (k + 1)..n {
                let factor = a[i][k] / pivot;
                for j in k..n {
                    a[i][j] -= factor * a[k][j];
                }
            }
        }
        negatives
    }

    fn bisection_eigenvalues(m: &OperatorMatrix) -> Vec<f64> {
        let bound = m.entries().iter().map(|x| x.abs()).sum::<f64>() + 1.0;
        (0..m.dim())
            .map(|k| {
                let (mut lo, mut hi) = (-bound, bound);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if count_below(m, mid) > k {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }

    #[test]
    fn pauli_x() {
        let m = OperatorMatrix::symmetric(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let eig = eigh(&m).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((eig.vectors[0][0].abs() - s).abs() < 1e-14);
        assert!((eig.vectors[0][0] + eig.vectors[0][1]).abs() < 1e-14);
        assert!((eig.vectors[1][0] - eig.vectors[1][1]).abs() < 1e-14);
    }

    #[test]
    fn diagonal_input_is_sorted_exactly() {
        let m = OperatorMatrix::from_diagonal(&[3.0, 1.0, 2.0]);
        let eig = eigh(&m).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(eig.vectors[0], vec![0.0, 1.0, 0.0]);
        assert_eq!(eig.vectors[1], vec![0.0, 0.0, 1.0]);
        assert_eq!(eig.vectors[2], vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn matches_inertia_bisection_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let m = random_symmetric(6, &mut rng);
            let eig = eigh(&m).unwrap();
            let oracle = bisection_eigenvalues(&m);
            for (a, b) in eig.values.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-8, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn residual_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[1, 2, 5, 17, 60] {
            let m = random_symmetric(n, &mut rng);
            let eig = eigh(&m).unwrap();
            let scale = m.norm();
            for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
                let mv = m.matvec(v);
                let res: f64 = mv
                    .iter()
                    .zip(v)
                    .map(|(a, b)| (a - lambda * b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                assert!(res <= 1e-9 * scale, "residual {res}");
                let big = v
                    .iter()
                    .fold(0.0_f64, |acc, x| if x.abs() > acc.abs() { *x } else { acc });
                assert!(big > 0.0);
            }
            for a in 0..n {
                for b in 0..n {
                    let target = if a == b { 1.0 } else { 0.0 };
                    assert!((dot(&eig.vectors[a], &eig.vectors[b]) - target).abs() < 1e-10);
                }
            }
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
            let sum: f64 = eig.values.iter().sum();
            assert!((sum - m.trace()).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let m = OperatorMatrix::from_row_major(2, vec![0.0, 1.0, 0.5, 0.0]).unwrap();
        assert!(matches!(eigh(&m), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn kron_identities() {
        let i6 = kron(&OperatorMatrix::identity(2), &OperatorMatrix::identity(3)).unwrap();
        assert_eq!(i6, OperatorMatrix::identity(6).with_tag("product"));

        let a = OperatorMatrix::symmetric(2, vec![1.0, 2.0, 2.0, -1.0]).unwrap();
        let k = kron(&a, &OperatorMatrix::identity(3)).unwrap();
        let ea = eigh(&a).unwrap().values;
        let ek = eigh(&k).unwrap().values;
        for (idx, v) in ek.iter().enumerate() {
            assert!((v - ea[idx / 3]).abs() < 1e-12);
        }
    }

    #[test]
    fn kron_trace_and_layout() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = OperatorMatrix::from_fn(3, |_, _| rng.gen_range(-1.0..1.0));
        let b = OperatorMatrix::from_fn(3, |i, j| (i as f64) - 2.0 * (j as f64) + 0.5);
        let k = kron(&a, &b).unwrap();
        assert!((k.trace() - a.trace() * b.trace()).abs() < 1e-12);
        for i in 0..3 {
            for j in 0..3 {
                for p in 0..3 {
                    for q in 0..3 {
                        assert_eq!(k[(i * 3 + p, j * 3 + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_guard() {
        let a = OperatorMatrix::identity(65);
        assert!(matches!(
            kron(&a, &a),
            Err(Error::DimensionOverflow {
                dim: 4225,
                max: 4096
            })
        ));
        assert!(kron_with_limit(&a, &a, 5000).is_ok());
    }

    #[test]
    fn congruence_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = random_symmetric(5, &mut rng);
        let identity: Vec<Vec<f64>> = (0..5)
            .map(|i| (0..5).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let same = congruence_transform(&m, &identity).unwrap();
        for (a, b) in same.entries().iter().zip(m.entries()) {
            assert!((a - b).abs() < 1e-15);
        }
        let eig = eigh(&m).unwrap();
        let one = congruence_transform(&m, &eig.vectors[2..3]).unwrap();
        assert_eq!(one.dim(), 1);
        assert!((one[(0, 0)] - eig.values[2]).abs() < 1e-12);

        let bad = vec![vec![1.0, 0.0, 0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0, 0.0, 0.0]];
        assert!(matches!(
            congruence_transform(&m, &bad),
            Err(Error::NonOrthonormal { .. })
        ));
    }

    #[test]
    fn interlacing_spot_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let m = random_symmetric(8, &mut rng);
        let full = eigh(&m).unwrap().values;
        // any orthonormal 3-frame: take eigenvectors of an unrelated matrix
        let other = eigh(&random_symmetric(8, &mut rng)).unwrap();
        let reduced = eigh(&congruence_transform(&m, &other.vectors[..3]).unwrap())
            .unwrap()
            .values;
        for (k, r) in reduced.iter().enumerate() {
            assert!(*r >= full[k] - 1e-12 && *r <= full[k + 5] + 1e-12);
        }
    }

    #[test]
    fn cholesky_and_inverse() {
        let m = OperatorMatrix::symmetric(2, vec![4.0, 2.0, 2.0, 3.0]).unwrap();
        let inv = inverse_spd(&m).unwrap();
        let prod = m.matmul(&inv).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((prod[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
        let singular = OperatorMatrix::symmetric(2, vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(matches!(
            cholesky(&singular),
            Err(Error::SingularMatrix { pivot: 1, .. })
        ));
        let x = solve_spd(&m, &[2.0, 1.0]).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-14 && x[1].abs() < 1e-14);
    }
}
