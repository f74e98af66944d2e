//! Thin wrappers over the dense kernels used by the fitting code: thin QR,
//! SVD and real nonsymmetric eigenvalues.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{OraError, Result};

const MAX_SWEEPS: usize = 10_000;

/// Upper-triangular factor of the thin QR decomposition (`min(r, c) × c`).
pub fn thin_r(mat: DMatrix<f64>) -> DMatrix<f64> {
    mat.qr().r()
}

/// Right singular vector belonging to the smallest singular value.
#[derive(Debug, Clone)]
pub struct SmallestSingular {
    pub vector: DVector<f64>,
    pub sigma_min: f64,
    /// Second smallest singular value (`f64::INFINITY` for a single column).
    pub sigma_next: f64,
}

pub fn smallest_right_singular_vector(mat: &DMatrix<f64>) -> Result<SmallestSingular> {
    let cols = mat.ncols();
    if cols == 0 {
        return Err(OraError::invalid("empty matrix has no singular vectors"));
    }
    // Square the problem down first when tall, so that V is always complete.
    let work = if mat.nrows() > cols { thin_r(mat.clone()) } else { mat.clone() };
    if work.nrows() < cols {
        return Err(OraError::numerical(None, "underdetermined system in singular vector computation"));
    }
    let svd = nalgebra::linalg::SVD::try_new(work, false, true, f64::EPSILON, MAX_SWEEPS)
        .ok_or_else(|| OraError::numerical(None, "SVD failed to converge"))?;
    let v_t = svd.v_t.as_ref().expect("requested V");
    let sv = &svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[a].total_cmp(&sv[b]));
    let imin = order[0];
    let vector = v_t.row(imin).transpose();
    if vector.iter().any(|x| !x.is_finite()) {
        return Err(OraError::numerical(None, "non-finite singular vector"));
    }
    Ok(SmallestSingular { vector, sigma_min: sv[imin], sigma_next: order.get(1).map_or(f64::INFINITY, |&i| sv[i]) })
}

/// Diagonal similarity scaling that equalizes row and column norms
/// (radix-2 balancing), improving the accuracy of computed eigenvalues.
pub fn balance(mat: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    let n = mat.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += mat[(j, i)].abs();
                    r += mat[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                let ginv = 1.0 / f;
                mat.row_mut(i).scale_mut(ginv);
                mat.column_mut(i).scale_mut(f);
            }
        }
    }
}

/// Eigenvalues of a real square matrix. Complex eigenvalues come in exact
/// conjugate pairs; the result is sorted by [`sort_conjugate_closed`].
pub fn eigenvalues(mat: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    if mat.nrows() != mat.ncols() {
        return Err(OraError::invalid("eigenvalues need a square matrix"));
    }
    if mat.nrows() == 0 {
        return Ok(Vec::new());
    }
    if mat.iter().any(|x| !x.is_finite()) {
        return Err(OraError::numerical(None, "non-finite entries in eigenvalue problem"));
    }
    let mut work = mat.clone();
    balance(&mut work);
    let schur = nalgebra::linalg::Schur::try_new(work, f64::EPSILON, MAX_SWEEPS)
        .ok_or_else(|| OraError::numerical(None, "Schur iteration failed to converge"))?;
    let mut eig: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    canonicalize_pairs(&mut eig);
    sort_conjugate_closed(&mut eig);
    Ok(eig)
}

/// Make near-conjugate pairs exact conjugates. Eigenvalues of a real matrix
/// are paired in exact arithmetic; this removes rounding asymmetry.
fn canonicalize_pairs(eig: &mut [Complex64]) {
    let n = eig.len();
    let mut used = vec![false; n];
    for i in 0..n {
        if used[i] || eig[i].im == 0.0 {
            continue;
        }
        used[i] = true;
        let target = eig[i].conj();
        let partner = (0..n)
            .filter(|&j| !used[j] && eig[j].im != 0.0 && eig[j].im.signum() != eig[i].im.signum())
            .min_by(|&a, &b| (eig[a] - target).norm().total_cmp(&(eig[b] - target).norm()));
        if let Some(j) = partner {
            used[j] = true;
            let re = 0.5 * (eig[i].re + eig[j].re);
            let im = 0.5 * (eig[i].im.abs() + eig[j].im.abs());
            eig[i] = Complex64::new(re, im * eig[i].im.signum());
            eig[j] = eig[i].conj();
        }
    }
}

/// Sort so that real values come first (ascending), followed by conjugate
/// pairs ordered by imaginary magnitude, upper half-plane member first.
pub fn sort_conjugate_closed(values: &mut [Complex64]) {
    values.sort_by(|a, b| {
        let ka = (a.im != 0.0, a.im.abs(), a.re, a.im < 0.0);
        let kb = (b.im != 0.0, b.im.abs(), b.re, b.im < 0.0);
        ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1)).then(ka.2.total_cmp(&kb.2)).then(ka.3.cmp(&kb.3))
    });
}

/// Complex matrix with the real entries of `mat`.
pub fn to_complex(mat: &DMatrix<f64>) -> DMatrix<Complex64> {
    mat.map(|x| Complex64::new(x, 0.0))
}
