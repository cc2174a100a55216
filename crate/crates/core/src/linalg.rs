//! Dense complex Hermitian helpers on top of `nalgebra`.
//!
//! Matrices are plain `DMatrix<Complex64>`; the typed wrappers in
//! [`crate::quantum`] carry the physical invariants.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;
pub type RealMatrix = DMatrix<f64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex::new(re, im)
}

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn zeros(dim: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(dim, dim)
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Largest entrywise modulus of `m - m^dagger`.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    let d = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn max_abs_entry(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted ascending.
/// Column `i` of the returned matrix is the eigenvector of eigenvalue `i`.
pub fn eigh(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let eig = SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(m.nrows(), m.ncols());
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

pub fn eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(hermitize(m))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    eigenvalues(m)[0]
}

pub fn max_eigenvalue(m: &ComplexMatrix) -> f64 {
    *eigenvalues(m).last().expect("non-empty matrix")
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(h: &ComplexMatrix) -> Result<f64> {
    ensure_square(h)?;
    let dev = hermitian_deviation(h);
    if dev > 1e-10 {
        return Err(Error::NotHermitian { max_deviation: dev });
    }
    Ok(eigenvalues(h).iter().map(|v| v.abs()).sum())
}

/// Real part of `Tr(a b)`; exact for Hermitian operands.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let d = a.nrows();
    let mut acc = 0.0;
    for i in 0..d {
        for k in 0..d {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

pub fn real_trace(m: &ComplexMatrix) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// Projector onto the span of `v`, normalised.
pub fn projector(v: &DVector<Complex64>) -> ComplexMatrix {
    let n = v.norm();
    let u = v.unscale(n);
    &u * u.adjoint()
}

/// Projector onto the eigenspace of strictly positive eigenvalues of `h`.
pub fn positive_part_projector(h: &ComplexMatrix) -> ComplexMatrix {
    let (values, vectors) = eigh(h);
    let mut p = zeros(h.nrows());
    for (i, &v) in values.iter().enumerate() {
        if v > 0.0 {
            let col = vectors.column(i);
            p += col * col.adjoint();
        }
    }
    p
}

/// Rebuild `sum_i f(lambda_i) |v_i><v_i|`.
pub fn spectral_map(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let (values, vectors) = eigh(h);
    let mut out = zeros(h.nrows());
    for (i, &v) in values.iter().enumerate() {
        let col = vectors.column(i);
        out += (col * col.adjoint()).scale(f(v));
    }
    out
}

/// Embeds a Hermitian `A + iB` as the real symmetric block `[[A, -B], [B, A]]`.
pub fn realify(h: &ComplexMatrix) -> RealMatrix {
    let d = h.nrows();
    let mut r = RealMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            let z = h[(i, j)];
            r[(i, j)] = z.re;
            r[(i + d, j + d)] = z.re;
            r[(i, j + d)] = -z.im;
            r[(i + d, j)] = z.im;
        }
    }
    r
}

/// Left inverse of [`realify`]: projects a real `2d x 2d` matrix onto the
/// complex-structured subspace and reads off the Hermitian matrix.
pub fn derealify(r: &RealMatrix) -> ComplexMatrix {
    let d = r.nrows() / 2;
    ComplexMatrix::from_fn(d, d, |i, j| {
        let re = 0.5 * (r[(i, j)] + r[(i + d, j + d)]);
        let im = 0.5 * (r[(i + d, j)] - r[(i, j + d)]);
        c(re, im)
    })
}

/// Orthonormal (Hilbert-Schmidt) basis of the `d x d` Hermitian matrices.
/// The first `d` elements are the diagonal units `|i><i|`.
pub fn hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(d * d);
    for i in 0..d {
        let mut e = zeros(d);
        e[(i, i)] = c(1.0, 0.0);
        basis.push(e);
    }
    basis.extend(off_diagonal_basis(d));
    basis
}

/// Orthonormal basis of the traceless Hermitian matrices (generalised
/// Gell-Mann matrices scaled to unit Hilbert-Schmidt norm).
pub fn traceless_basis(d: usize) -> Vec<ComplexMatrix> {
    let mut basis = off_diagonal_basis(d);
    for k in 1..d {
        let norm = ((k * (k + 1)) as f64).sqrt();
        let mut e = zeros(d);
        for i in 0..k {
            e[(i, i)] = c(1.0 / norm, 0.0);
        }
        e[(k, k)] = c(-(k as f64) / norm, 0.0);
        basis.push(e);
    }
    basis
}

fn off_diagonal_basis(d: usize) -> Vec<ComplexMatrix> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut basis = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let mut sym = zeros(d);
            sym[(i, j)] = c(s, 0.0);
            sym[(j, i)] = c(s, 0.0);
            basis.push(sym);
            let mut anti = zeros(d);
            anti[(i, j)] = c(0.0, -s);
            anti[(j, i)] = c(0.0, s);
            basis.push(anti);
        }
    }
    basis
}

/// Coordinates of a Hermitian matrix in an orthonormal Hermitian basis.
pub fn coordinates(h: &ComplexMatrix, basis: &[ComplexMatrix]) -> Vec<f64> {
    basis.iter().map(|e| trace_product(e, h)).collect()
}

/// Neumaier compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64]) -> ComplexMatrix {
        let d = values.len();
        ComplexMatrix::from_fn(d, d, |i, j| if i == j { c(values[i], 0.0) } else { c(0.0, 0.0) })
    }

    #[test]
    fn trace_norm_of_simple_matrices() {
        assert_eq!(trace_norm(&zeros(3)).unwrap(), 0.0);
        assert!((trace_norm(&diag(&[1.0, -1.0])).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trace_norm_rejects_non_hermitian() {
        let mut m = zeros(2);
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(trace_norm(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn realify_roundtrip_and_pairing() {
        let h = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(0.3, 0.0), c(0.1, -0.4), c(0.1, 0.4), c(0.7, 0.0)],
        );
        let g = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c(-1.0, 0.0), c(0.5, 0.2), c(0.5, -0.2), c(2.0, 0.0)],
        );
        assert!((derealify(&realify(&h)) - &h).norm() < 1e-15);
        let pairing = realify(&h).dot(&realify(&g));
        assert!((pairing - 2.0 * trace_product(&h, &g)).abs() < 1e-14);
    }

    #[test]
    fn bases_are_orthonormal() {
        for d in 1..5 {
            let full = hermitian_basis(d);
            let traceless = traceless_basis(d);
            assert_eq!(full.len(), d * d);
            assert_eq!(traceless.len(), d * d - 1);
            for set in [&full, &traceless] {
                for (a, ea) in set.iter().enumerate() {
                    for (b, eb) in set.iter().enumerate() {
                        let expect = if a == b { 1.0 } else { 0.0 };
                        assert!((trace_product(ea, eb) - expect).abs() < 1e-14);
                    }
                }
            }
            for e in &traceless {
                assert!(real_trace(e).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn eigh_sorts_ascending() {
        let (values, vectors) = eigh(&diag(&[2.0, -1.0, 0.5]));
        assert_eq!(values, vec![-1.0, 0.5, 2.0]);
        assert!((vectors[(1, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let values = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(values), 2.0);
    }
}
