//! Eigenmatrices and Krein parameters of commutative association schemes,
//! computed from the `(d+1)×(d+1)` intersection matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use super::CoherentConfiguration;

/// Largest number of classes (including the diagonal) accepted.
pub const MAX_CLASSES: usize = 7;
/// Minimum gap between distinct eigenvalues of the combined matrix.
pub const SEPARATION_TOL: f64 = 1e-9;
/// Largest distance of a computed multiplicity from an integer.
pub const MULTIPLICITY_TOL: f64 = 1e-6;
/// Relative tolerance for `P·Q = n·I` and the orthogonality relations.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("configuration has {0} fibers; a scheme has exactly one")]
    NotAScheme(usize),
    #[error("intersection algebra is not commutative")]
    NonCommutative,
    #[error("{0} classes exceeds the supported maximum of {MAX_CLASSES}")]
    TooManyClasses(usize),
    #[error("could not separate eigenvalues (closest gap {0:e})")]
    Separation(f64),
    #[error("multiplicity {value} of eigenspace {index} is not a positive integer")]
    Multiplicity { index: usize, value: f64 },
    #[error("orthogonality relations violated (deviation {0:e})")]
    Orthogonality(f64),
}

/// First and second eigenmatrices of a scheme and its Krein parameters.
///
/// Rows of `p` are eigenspaces (trivial first); columns are classes in the
/// order given by `classes`, which starts with the diagonal.
#[derive(Debug, Clone)]
pub struct SchemeSpectrum {
    pub n: usize,
    pub d: usize,
    pub classes: Vec<usize>,
    pub p: Vec<Vec<Complex64>>,
    pub q: Vec<Vec<Complex64>>,
    pub valencies: Vec<u64>,
    pub multiplicities: Vec<u64>,
    /// `krein[(i·(d+1) + j)·(d+1) + k] = q_{ij}^k`.
    pub krein: Vec<f64>,
    /// Largest entry of `E_a E_b − δ_{ab} E_a`, in the adjacency basis.
    pub idempotent_defect: f64,
}

impl SchemeSpectrum {
    pub fn krein_parameter(&self, i: usize, j: usize, k: usize) -> f64 {
        let r = self.d + 1;
        self.krein[(i * r + j) * r + k]
    }

    /// Real parts of column `c` of `P`: the eigenvalues of that class's adjacency matrix.
    pub fn eigenvalues(&self, column: usize) -> Vec<f64> {
        self.p.iter().map(|row| row[column].re).collect()
    }

    pub fn report(&self) -> SpectrumReport {
        let entries = |m: &Vec<Vec<Complex64>>| {
            m.iter()
                .map(|row| row.iter().map(|&z| MatrixEntry::from(z)).collect())
                .collect()
        };
        SpectrumReport {
            p: entries(&self.p),
            q: entries(&self.q),
            multiplicities: self.multiplicities.clone(),
            valencies: self.valencies.clone(),
            krein_min: krein_check(self, 0.0).min,
        }
    }
}

/// A real number, or `[re, im]` when the imaginary part is not negligible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MatrixEntry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<Complex64> for MatrixEntry {
    fn from(z: Complex64) -> Self {
        if z.im.abs() < SEPARATION_TOL {
            MatrixEntry::Real(z.re)
        } else {
            MatrixEntry::Complex([z.re, z.im])
        }
    }
}

/// Serialisable summary matching the JSON spectrum report.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    #[serde(rename = "P")]
    pub p: Vec<Vec<MatrixEntry>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<MatrixEntry>>,
    pub multiplicities: Vec<u64>,
    pub valencies: Vec<u64>,
    pub krein_min: f64,
}

type CMat = Vec<Vec<Complex64>>;

fn cmat_mul(a: &CMat, b: &CMat) -> CMat {
    let m = a.len();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| (0..m).map(|l| a[i][l] * b[l][j]).sum())
                .collect()
        })
        .collect()
}

/// Nullspace vector of a matrix of corank one, by elimination with complete pivoting.
fn null_vector(mut a: CMat) -> Vec<Complex64> {
    let m = a.len();
    let mut cols: Vec<usize> = (0..m).collect();
    for step in 0..m.saturating_sub(1) {
        let (mut pr, mut pc, mut best) = (step, step, -1.0);
        for (r, row) in a.iter().enumerate().skip(step) {
            for (c, z) in row.iter().enumerate().skip(step) {
                if z.norm() > best {
                    (pr, pc, best) = (r, c, z.norm());
                }
            }
        }
        a.swap(step, pr);
        for row in a.iter_mut() {
            row.swap(step, pc);
        }
        cols.swap(step, pc);
        for r in step + 1..m {
            let f = a[r][step] / a[step][step];
            for c in step..m {
                let sub = f * a[step][c];
                a[r][c] -= sub;
            }
        }
    }
    let mut y = vec![Complex64::new(0.0, 0.0); m];
    y[m - 1] = Complex64::new(1.0, 0.0);
    for step in (0..m.saturating_sub(1)).rev() {
        let s: Complex64 = (step + 1..m).map(|c| a[step][c] * y[c]).sum();
        y[step] = -s / a[step][step];
    }
    let mut x = vec![Complex64::new(0.0, 0.0); m];
    for (k, &c) in cols.iter().enumerate() {
        x[c] = y[k];
    }
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    x.iter().map(|z| z / norm).collect()
}

fn invert(a: &CMat) -> Option<CMat> {
    let m = a.len();
    let mut aug: CMat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..m).map(|j| Complex64::new(f64::from(u8::from(i == j)), 0.0)));
            r
        })
        .collect();
    for col in 0..m {
        let piv = (col..m).max_by(|&x, &y| aug[x][col].norm().total_cmp(&aug[y][col].norm()))?;
        if aug[piv][col].norm() < 1e-300 {
            return None;
        }
        aug.swap(col, piv);
        let d = aug[col][col];
        for c in 0..2 * m {
            aug[col][c] /= d;
        }
        for r in 0..m {
            if r != col {
                let f = aug[r][col];
                for c in 0..2 * m {
                    let sub = f * aug[col][c];
                    aug[r][c] -= sub;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[m..].to_vec()).collect())
}

fn lex_desc(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b).skip(1) {
        if (x.re - y.re).abs() > SEPARATION_TOL {
            return y.re.total_cmp(&x.re);
        }
        if (x.im - y.im).abs() > SEPARATION_TOL {
            return y.im.total_cmp(&x.im);
        }
    }
    std::cmp::Ordering::Equal
}

/// Eigenmatrices, multiplicities and Krein parameters of a commutative scheme.
///
/// A generic combination `M = Σ c_i B_i` of the intersection matrices
/// `(B_i)_{kj} = p_{ij}^k` has `d + 1` simple eigenvalues; its eigenvectors
/// are the common eigenvectors of all `B_i` and give the rows of `P`.
pub fn scheme_spectrum(cc: &CoherentConfiguration) -> Result<SchemeSpectrum, SpectrumError> {
    if cc.fibers().len() != 1 {
        return Err(SpectrumError::NotAScheme(cc.fibers().len()));
    }
    let r = cc.rank();
    if r > MAX_CLASSES {
        return Err(SpectrumError::TooManyClasses(r));
    }
    if !cc.is_commutative() {
        return Err(SpectrumError::NonCommutative);
    }
    let n = cc.n();
    let diag = cc.fibers()[0];
    let classes: Vec<usize> = std::iter::once(diag)
        .chain((0..r).filter(|&c| c != diag))
        .collect();
    let valencies: Vec<u64> = classes
        .iter()
        .map(|&c| (cc.class_sizes()[c] / n) as u64)
        .collect();
    let b: Vec<DMatrix<f64>> = classes
        .iter()
        .map(|&ci| DMatrix::from_fn(r, r, |k, j| f64::from(cc.p(ci, classes[j], classes[k]))))
        .collect();

    let mut rows: Option<Vec<Vec<Complex64>>> = None;
    let mut best_gap = 0.0f64;
    for attempt in 0..8u32 {
        let mut m = DMatrix::<f64>::zeros(r, r);
        for (i, bi) in b.iter().enumerate().skip(1) {
            let c =
                ((i as f64 + 1.0) * 0.618_033_988_749_895 * f64::from(attempt + 1)).fract() + 0.25;
            m += bi * c;
        }
        let eig: Vec<Complex64> = m.complex_eigenvalues().iter().copied().collect();
        let mut gap = f64::INFINITY;
        for x in 0..r {
            for y in x + 1..r {
                gap = gap.min((eig[x] - eig[y]).norm());
            }
        }
        if r > 1 && gap < SEPARATION_TOL {
            best_gap = best_gap.max(gap);
            continue;
        }
        let cm: CMat = (0..r)
            .map(|i| (0..r).map(|j| Complex64::new(m[(i, j)], 0.0)).collect())
            .collect();
        let mut found = Vec::with_capacity(r);
        for &lambda in &eig {
            let mut a = cm.clone();
            for (i, row) in a.iter_mut().enumerate() {
                row[i] -= lambda;
            }
            let v = null_vector(a);
            let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            let row: Vec<Complex64> = b
                .iter()
                .map(|bi| {
                    let mut num = Complex64::new(0.0, 0.0);
                    for k in 0..r {
                        let bv: Complex64 = (0..r).map(|j| v[j] * bi[(k, j)]).sum();
                        num += v[k].conj() * bv;
                    }
                    num / vv
                })
                .collect();
            found.push(row);
        }
        rows = Some(found);
        break;
    }
    let mut p = rows.ok_or(SpectrumError::Separation(best_gap))?;

    let trivial = (0..r)
        .min_by(|&x, &y| {
            let dist = |row: &Vec<Complex64>| -> f64 {
                row.iter()
                    .zip(&valencies)
                    .map(|(z, &k)| (z - k as f64).norm())
                    .sum()
            };
            dist(&p[x]).total_cmp(&dist(&p[y]))
        })
        .unwrap_or(0);
    let first = p.remove(trivial);
    p.sort_by(|a, b| lex_desc(a, b));
    p.insert(0, first);

    let mut multiplicities = Vec::with_capacity(r);
    for (index, row) in p.iter().enumerate() {
        let s: f64 = row
            .iter()
            .zip(&valencies)
            .map(|(z, &k)| z.norm_sqr() / k as f64)
            .sum();
        let value = n as f64 / s;
        let rounded = value.round();
        if (value - rounded).abs() > MULTIPLICITY_TOL || rounded < 1.0 {
            return Err(SpectrumError::Multiplicity { index, value });
        }
        multiplicities.push(rounded as u64);
    }

    let q: CMat = invert(&p)
        .ok_or(SpectrumError::Orthogonality(f64::INFINITY))?
        .into_iter()
        .map(|row| row.into_iter().map(|z| z * n as f64).collect())
        .collect();
    let scale = n as f64;
    let mut deviation = 0.0f64;
    let pq = cmat_mul(&p, &q);
    for (i, row) in pq.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let want = if i == j { scale } else { 0.0 };
            deviation = deviation.max((z - want).norm() / scale);
        }
    }
    for i in 0..r {
        for j in 0..r {
            let want = p[j][i].conj() * multiplicities[j] as f64 / valencies[i] as f64;
            deviation = deviation.max((q[i][j] - want).norm() / scale);
        }
    }
    if deviation > ORTHOGONALITY_TOL {
        return Err(SpectrumError::Orthogonality(deviation));
    }

    let mut krein = vec![0.0; r * r * r];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let s: Complex64 = (0..r).map(|l| q[l][i] * q[l][j] * p[k][l]).sum();
                krein[(i * r + j) * r + k] = s.re / n as f64;
            }
        }
    }

    let mut idempotent_defect = 0.0f64;
    for a in 0..r {
        for bb in 0..r {
            for k in 0..r {
                let mut s = Complex64::new(0.0, 0.0);
                for l in 0..r {
                    for l2 in 0..r {
                        let pk = cc.p(classes[l], classes[l2], classes[k]);
                        if pk != 0 {
                            s += q[l][a] * q[l2][bb] * f64::from(pk);
                        }
                    }
                }
                s /= (n * n) as f64;
                let want = if a == bb {
                    q[k][a] / n as f64
                } else {
                    Complex64::new(0.0, 0.0)
                };
                idempotent_defect = idempotent_defect.max((s - want).norm());
            }
        }
    }

    Ok(SchemeSpectrum {
        n,
        d: r - 1,
        classes,
        p,
        q,
        valencies,
        multiplicities,
        krein,
        idempotent_defect,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KreinVerdict {
    pub min: f64,
    pub argmin: (usize, usize, usize),
    pub pass: bool,
}

/// Passes iff every Krein parameter is at least `−tol`.
pub fn krein_check(s: &SchemeSpectrum, tol: f64) -> KreinVerdict {
    let r = s.d + 1;
    let mut min = f64::INFINITY;
    let mut argmin = (0, 0, 0);
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let q = s.krein_parameter(i, j, k);
                if q < min {
                    min = q;
                    argmin = (i, j, k);
                }
            }
        }
    }
    KreinVerdict {
        min,
        argmin,
        pass: min >= -tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use crate::perm::named as groups;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn pentagon() {
        let s = scheme_spectrum(&CoherentConfiguration::wl2_closure(&named::cycle(5))).unwrap();
        let sqrt5 = 5f64.sqrt();
        let ev = s.eigenvalues(1);
        assert!(close(ev[0], 2.0));
        assert!(close(ev[1], (-1.0 + sqrt5) / 2.0));
        assert!(close(ev[2], (-1.0 - sqrt5) / 2.0));
        assert_eq!(s.multiplicities, vec![1, 2, 2]);
        assert_eq!(s.valencies, vec![1, 2, 2]);
        let v = krein_check(&s, 1e-8);
        assert!(v.pass);
        assert!(
            v.min.abs() < 1e-9,
            "some Krein parameter vanishes: min {}",
            v.min
        );
        assert!(s.idempotent_defect < 1e-9);
    }

    #[test]
    fn trivial_scheme_spectrum() {
        for n in [2usize, 3, 7] {
            let s =
                scheme_spectrum(&CoherentConfiguration::wl2_closure(&named::complete(n))).unwrap();
            assert_eq!(s.multiplicities, vec![1, n as u64 - 1]);
            let ev = s.eigenvalues(1);
            assert!(close(ev[0], n as f64 - 1.0) && close(ev[1], -1.0));
            assert!(krein_check(&s, 1e-8).pass);
        }
    }

    #[test]
    fn cyclic_scheme_has_complex_characters() {
        let cc = CoherentConfiguration::from_group_orbitals(&groups::cyclic(5));
        let s = scheme_spectrum(&cc).unwrap();
        assert_eq!(s.multiplicities, vec![1; 5]);
        assert!(s.p.iter().flatten().any(|z| z.im.abs() > 0.1));
        assert!(krein_check(&s, 1e-8).pass);
        assert!(s.idempotent_defect < 1e-9);

        let json = serde_json::to_value(s.report()).unwrap();
        let p = json["P"].as_array().unwrap();
        assert_eq!(p.len(), 5);
        assert!(p[0]
            .as_array()
            .unwrap()
            .iter()
            .all(|x| (x.as_f64().unwrap() - 1.0).abs() < 1e-9));
        assert!(p[1]
            .as_array()
            .unwrap()
            .iter()
            .any(|x| x.as_array().is_some_and(|z| z.len() == 2)));
        assert!(json["Q"].is_array());
    }

    #[test]
    fn rejects_non_schemes() {
        let cc = CoherentConfiguration::wl2_closure(&named::path(3));
        assert!(matches!(
            scheme_spectrum(&cc),
            Err(SpectrumError::NotAScheme(_))
        ));
        let c11 = CoherentConfiguration::from_group_orbitals(&groups::cyclic(11));
        assert_eq!(
            scheme_spectrum(&c11).unwrap_err(),
            SpectrumError::TooManyClasses(11)
        );
    }

    #[test]
    fn krein_symmetry() {
        let s = scheme_spectrum(&CoherentConfiguration::wl2_closure(&named::petersen())).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert!(close(
                        s.krein_parameter(i, j, k),
                        s.krein_parameter(j, i, k)
                    ));
                }
            }
        }
    }
}
