//! Laplace spectra of the base manifold `N` and of the round cross-section
//! sphere `S^{d-1}`, reported as distinct eigenvalues with multiplicities.
//!
//! These two sequences `{lambda_k}` and `{mu_j}` are the only geometric
//! inputs the radial solver consumes; everything else is closed-form in
//! `(m, n, eps, delta)`.

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::real::Real;

/// One distinct eigenvalue of a Laplace spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralLine<T> {
    /// Eigenvalue (`lambda_k` or `mu_j`).
    pub value: T,
    /// Dimension of the eigenspace.
    pub multiplicity: u64,
    /// Distinct-value index (0 for the constant eigenfunction).
    pub index: usize,
}

/// The base manifold `N`, described only through its Laplace spectrum and
/// volume.
///
/// `Custom` injects an arbitrary spectrum; it is validated for shape only,
/// and in particular nothing here can detect whether the underlying manifold
/// is connected — the cluster limits assume it is.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseManifold<T> {
    /// A single point (dimension 0); spectrum `{0}`, volume 1 by convention.
    Point,
    /// Circle of circumference `length`; `lambda_k = (2 pi k / L)^2`.
    Circle { length: T },
    /// Rectangular flat torus with side lengths `lengths`;
    /// `lambda = |2 pi xi|^2` over the dual lattice.
    FlatTorus { lengths: Vec<T> },
    /// Round sphere `S^dim` of radius `radius`; `lambda_k = k(k+dim-1)/radius^2`.
    RoundSphere { dim: u32, radius: T },
    /// Explicit spectrum as `(eigenvalue, multiplicity)` pairs plus volume.
    Custom { spectrum: Vec<(T, u64)>, volume: T },
}

impl<T: Real> BaseManifold<T> {
    /// Dimension of the structured kinds; `None` for `Custom`, which carries
    /// no intrinsic dimension.
    pub fn dimension(&self) -> Option<u32> {
        match self {
            BaseManifold::Point => Some(0),
            BaseManifold::Circle { .. } => Some(1),
            BaseManifold::FlatTorus { lengths } => Some(lengths.len() as u32),
            BaseManifold::RoundSphere { dim, .. } => Some(*dim),
            BaseManifold::Custom { .. } => None,
        }
    }

    /// Riemannian volume `|N|` in the product metric.
    pub fn volume(&self) -> Result<T, SolveError> {
        match self {
            BaseManifold::Point => Ok(T::one()),
            BaseManifold::Circle { length } => Ok(*length),
            BaseManifold::FlatTorus { lengths } => {
                Ok(lengths.iter().fold(T::one(), |acc, &l| acc * l))
            }
            BaseManifold::RoundSphere { dim, radius } => {
                let area: T =
                    crate::special::unit_sphere_area(*dim + 1).map_err(SolveError::Math)?;
                Ok(area * radius.powi(*dim as i32))
            }
            BaseManifold::Custom { volume, .. } => Ok(*volume),
        }
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        let bad = |msg: String| Err(SolveError::InvalidProblem(msg));
        match self {
            BaseManifold::Point => Ok(()),
            BaseManifold::Circle { length } => {
                if *length > T::zero() {
                    Ok(())
                } else {
                    bad(format!("circle length must be positive, got {length}"))
                }
            }
            BaseManifold::FlatTorus { lengths } => {
                if lengths.is_empty() {
                    return bad("flat torus needs at least one side length".into());
                }
                if lengths.iter().any(|&l| !(l > T::zero())) {
                    return bad("flat torus side lengths must be positive".into());
                }
                Ok(())
            }
            BaseManifold::RoundSphere { dim, radius } => {
                if *dim < 1 {
                    return bad("round sphere dimension must be >= 1".into());
                }
                if !(*radius > T::zero()) {
                    return bad(format!(
                        "round sphere radius must be positive, got {radius}"
                    ));
                }
                Ok(())
            }
            BaseManifold::Custom { spectrum, volume } => {
                if !(*volume > T::zero()) {
                    return bad(format!("custom volume must be positive, got {volume}"));
                }
                if spectrum.is_empty() {
                    return bad("custom spectrum must not be empty".into());
                }
                if spectrum[0].0 != T::zero() || spectrum[0].1 == 0 {
                    return bad("custom spectrum must start at 0 with multiplicity >= 1".into());
                }
                for w in spectrum.windows(2) {
                    if !(w[1].0 > w[0].0) {
                        return bad("custom spectrum must be strictly increasing".into());
                    }
                }
                if spectrum.iter().any(|&(v, m)| !(v >= T::zero()) || m == 0) {
                    return bad(
                        "custom spectrum entries must be >= 0 with multiplicity >= 1".into(),
                    );
                }
                Ok(())
            }
        }
    }

    /// Loads a `Custom` spectrum from a JSON array of `[value, multiplicity]`
    /// pairs.
    pub fn custom_from_json(json: &str, volume: T) -> Result<Self, SolveError>
    where
        T: serde::de::DeserializeOwned,
    {
        let spectrum: Vec<(T, u64)> = serde_json::from_str(json)
            .map_err(|e| SolveError::InvalidProblem(format!("bad spectrum JSON: {e}")))?;
        let base = BaseManifold::Custom { spectrum, volume };
        base.validate()?;
        Ok(base)
    }
}

/// First `count` distinct Laplace eigenvalues of the base manifold, with
/// multiplicities.
///
/// A `Point` has the single eigenvalue 0, whatever `count` asks for.
pub fn base_spectrum<T: Real>(
    base: &BaseManifold<T>,
    count: usize,
) -> Result<Vec<SpectralLine<T>>, SolveError> {
    if count == 0 {
        return Err(SolveError::InvalidProblem("count must be >= 1".into()));
    }
    base.validate()?;
    let lines = match base {
        BaseManifold::Point => vec![SpectralLine {
            value: T::zero(),
            multiplicity: 1,
            index: 0,
        }],
        BaseManifold::Circle { length } => {
            let mut lines = Vec::with_capacity(count);
            for k in 0..count {
                let freq = T::of(2.0) * T::PI() * T::of_usize(k) / *length;
                lines.push(SpectralLine {
                    value: freq * freq,
                    multiplicity: if k == 0 { 1 } else { 2 },
                    index: k,
                });
            }
            lines
        }
        BaseManifold::RoundSphere { dim, radius } => {
            let n = *dim as usize;
            let rho2 = *radius * *radius;
            (0..count)
                .map(|k| SpectralLine {
                    value: T::of_usize(k) * T::of_usize(k + n - 1) / rho2,
                    multiplicity: sphere_multiplicity(*dim, k as u64),
                    index: k,
                })
                .collect()
        }
        BaseManifold::FlatTorus { lengths } => torus_spectrum(lengths, count),
        BaseManifold::Custom { spectrum, .. } => spectrum
            .iter()
            .take(count)
            .enumerate()
            .map(|(index, &(value, multiplicity))| SpectralLine {
                value,
                multiplicity,
                index,
            })
            .collect(),
    };
    Ok(lines)
}

/// Multiplicity of the `k`-th distinct eigenvalue of the round `S^n`:
/// the dimension of degree-`k` spherical harmonics in `n+1` variables.
fn sphere_multiplicity(n: u32, k: u64) -> u64 {
    harmonic_dimension(n + 1, k)
}

/// `dim H_j(S^{d-1})` for the sphere in `R^d`:
/// `C(j+d-2, d-2) * (2j+d-2) / max(j+d-2, 1)`.
fn harmonic_dimension(d: u32, j: u64) -> u64 {
    if j == 0 {
        return 1;
    }
    let dd = d as u64;
    let num = binomial(j + dd - 2, dd - 2) * (2 * j + dd - 2);
    num / (j + dd - 2).max(1)
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Sorted dual-lattice spectrum of a rectangular flat torus.
fn torus_spectrum<T: Real>(lengths: &[T], count: usize) -> Vec<SpectralLine<T>> {
    let coef: Vec<T> = lengths
        .iter()
        .map(|&l| {
            let w = T::of(2.0) * T::PI() / l;
            w * w
        })
        .collect();
    // grow the search radius until `count` distinct values are certain;
    // the candidate values are c_1 a_1^2 + ... + c_n a_n^2 over integer a
    let min_coef = coef.iter().fold(T::infinity(), |a, &b| a.min(b));
    let mut bound = min_coef * T::of_usize(count * count) + T::one();
    loop {
        let mut values: Vec<T> = Vec::new();
        enumerate_lattice(&coef, 0, T::zero(), bound, &mut values);
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        // merge nearly identical values (sign flips give exact duplicates;
        // cross-axis coincidences are merged at relative 1e-9)
        let mut lines: Vec<SpectralLine<T>> = Vec::new();
        for v in values {
            match lines.last_mut() {
                Some(last)
                    if (v - last.value).abs()
                        <= T::of(1e-9) * (v.abs() + last.value.abs() + T::one()) =>
                {
                    last.multiplicity += 1;
                }
                _ => lines.push(SpectralLine {
                    value: v,
                    multiplicity: 1,
                    index: lines.len(),
                }),
            }
        }
        if lines.len() >= count {
            return lines.into_iter().take(count).collect();
        }
        bound *= T::of(2.0);
    }
}

fn enumerate_lattice<T: Real>(coef: &[T], axis: usize, acc: T, bound: T, out: &mut Vec<T>) {
    if axis == coef.len() {
        out.push(acc);
        return;
    }
    let mut a: i64 = 0;
    loop {
        let af = T::of(a as f64);
        let contrib = coef[axis] * af * af;
        if acc + contrib > bound {
            break;
        }
        // each nonzero index appears with both signs
        enumerate_lattice(coef, axis + 1, acc + contrib, bound, out);
        if a > 0 {
            enumerate_lattice(coef, axis + 1, acc + contrib, bound, out);
        }
        a += 1;
    }
}

/// Spectrum `{mu_j}` of the round cross-section sphere `S^{d-1}` for
/// codimension `d = m - n`, as `mu_j = j(j+d-2)` with the spherical-harmonic
/// multiplicities.
///
/// Codimension 1 (the two-point `S^0`) is rejected: the product model needs
/// a connected cross-section sphere, i.e. codimension at least 2.
pub fn cross_section_spectrum<T: Real>(
    d: u32,
    j_max: usize,
) -> Result<Vec<SpectralLine<T>>, SolveError> {
    if d < 2 {
        return Err(SolveError::InvalidProblem(format!(
            "codimension {d} is not supported: the cross-section sphere S^(d-1) \
             must have dimension >= 1, so the codimension m - n must be >= 2"
        )));
    }
    Ok((0..=j_max)
        .map(|j| SpectralLine {
            value: T::of_usize(j) * T::of_usize(j + d as usize - 2),
            multiplicity: harmonic_dimension(d, j as u64),
            index: j,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TAU: f64 = std::f64::consts::TAU;

    fn values(lines: &[SpectralLine<f64>]) -> Vec<(f64, u64)> {
        lines.iter().map(|l| (l.value, l.multiplicity)).collect()
    }

    #[test]
    fn point_has_only_zero() {
        let lines = base_spectrum(&BaseManifold::<f64>::Point, 5).unwrap();
        assert_eq!(values(&lines), vec![(0.0, 1)]);
    }

    #[test]
    fn unit_circle_spectrum() {
        let lines = base_spectrum(&BaseManifold::Circle { length: TAU }, 3).unwrap();
        let got = values(&lines);
        assert_eq!(got.len(), 3);
        for (i, &(v, m)) in got.iter().enumerate() {
            assert_relative_eq!(v, (i * i) as f64, max_relative = 1e-13, epsilon = 1e-13);
            assert_eq!(m, if i == 0 { 1 } else { 2 });
        }
    }

    #[test]
    fn round_two_sphere_spectrum() {
        let lines = base_spectrum(
            &BaseManifold::RoundSphere {
                dim: 2,
                radius: 1.0,
            },
            3,
        )
        .unwrap();
        assert_eq!(values(&lines), vec![(0.0, 1), (2.0, 3), (6.0, 5)]);
    }

    #[test]
    fn cross_section_circle_and_spheres() {
        // d = 2: Fourier modes on S^1
        let s1 = cross_section_spectrum::<f64>(2, 2).unwrap();
        assert_eq!(values(&s1), vec![(0.0, 1), (1.0, 2), (4.0, 2)]);
        // d = 3: j(j+1) with multiplicity 2j+1
        let s2 = cross_section_spectrum::<f64>(3, 2).unwrap();
        assert_eq!(values(&s2), vec![(0.0, 1), (2.0, 3), (6.0, 5)]);
        // d = 4: j(j+2) with multiplicity (j+1)^2
        let s3 = cross_section_spectrum::<f64>(4, 1).unwrap();
        assert_eq!(values(&s3), vec![(0.0, 1), (3.0, 4)]);
    }

    #[test]
    fn codimension_one_rejected() {
        assert!(cross_section_spectrum::<f64>(1, 3).is_err());
        assert!(cross_section_spectrum::<f64>(0, 3).is_err());
    }

    /// Brute-force dimension of degree-`j` harmonic polynomials in `d`
    /// variables: `dim P_j - rank(Laplacian: P_j -> P_{j-2})`, with the rank
    /// obtained by Gaussian elimination on the exact integer matrix.
    fn harmonic_dim_bruteforce(d: usize, j: usize) -> u64 {
        fn monomials(d: usize, j: usize) -> Vec<Vec<usize>> {
            if d == 1 {
                return vec![vec![j]];
            }
            let mut out = Vec::new();
            for first in 0..=j {
                for mut rest in monomials(d - 1, j - first) {
                    let mut m = vec![first];
                    m.append(&mut rest);
                    out.push(m);
                }
            }
            out
        }
        let dom = monomials(d, j);
        if j < 2 {
            return dom.len() as u64;
        }
        let img = monomials(d, j - 2);
        let img_index: std::collections::HashMap<Vec<usize>, usize> = img
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        // rows: image monomials, cols: domain monomials
        let mut mat = vec![vec![0.0f64; dom.len()]; img.len()];
        for (col, mono) in dom.iter().enumerate() {
            for axis in 0..d {
                if mono[axis] >= 2 {
                    let mut target = mono.clone();
                    target[axis] -= 2;
                    let row = img_index[&target];
                    mat[row][col] += (mono[axis] * (mono[axis] - 1)) as f64;
                }
            }
        }
        // rank by partial-pivot elimination
        let (rows, cols) = (mat.len(), dom.len());
        let mut rank = 0usize;
        let mut row = 0usize;
        for col in 0..cols {
            let pivot = (row..rows)
                .max_by(|&a, &b| mat[a][col].abs().partial_cmp(&mat[b][col].abs()).unwrap());
            let Some(p) = pivot else { break };
            if mat[p][col].abs() < 1e-9 {
                continue;
            }
            mat.swap(row, p);
            let pivot_row = mat[row].clone();
            for target in mat.iter_mut().skip(row + 1) {
                let f = target[col] / pivot_row[col];
                for (c, pivot_val) in pivot_row.iter().enumerate().skip(col) {
                    target[c] -= f * pivot_val;
                }
            }
            rank += 1;
            row += 1;
            if row == rows {
                break;
            }
        }
        (dom.len() - rank) as u64
    }

    #[test]
    fn multiplicities_match_bruteforce_harmonic_count() {
        for d in 2..=6u32 {
            let lines = cross_section_spectrum::<f64>(d, 6).unwrap();
            for (j, line) in lines.iter().enumerate() {
                let expected = harmonic_dim_bruteforce(d as usize, j);
                assert_eq!(
                    line.multiplicity, expected,
                    "multiplicity mismatch at d={d}, j={j}"
                );
            }
        }
    }

    #[test]
    fn sphere_base_multiplicities_match_bruteforce() {
        // S^n as the base manifold lives in R^{n+1}
        for n in 1..=3u32 {
            let lines = base_spectrum(
                &BaseManifold::RoundSphere {
                    dim: n,
                    radius: 1.3,
                },
                6,
            )
            .unwrap();
            for (k, line) in lines.iter().enumerate() {
                assert_eq!(
                    line.multiplicity,
                    harmonic_dim_bruteforce(n as usize + 1, k)
                );
            }
        }
    }

    #[test]
    fn square_torus_spectrum() {
        // T^2 with both sides 2 pi: lambda = a^2 + b^2 over integer pairs
        let base = BaseManifold::FlatTorus {
            lengths: vec![TAU, TAU],
        };
        let lines = base_spectrum(&base, 6).unwrap();
        let expected = [(0.0, 1), (1.0, 4), (2.0, 4), (4.0, 4), (5.0, 8), (8.0, 4)];
        for (line, &(v, m)) in lines.iter().zip(expected.iter()) {
            assert_relative_eq!(line.value, v, max_relative = 1e-12, epsilon = 1e-12);
            assert_eq!(line.multiplicity, m, "at lambda = {v}");
        }
    }

    #[test]
    fn torus_weyl_law_sanity() {
        // N(lambda) ~ area * lambda / (4 pi); for the square torus of side
        // 2 pi this is pi * lambda
        let base = BaseManifold::FlatTorus {
            lengths: vec![TAU, TAU],
        };
        let lines = base_spectrum(&base, 80).unwrap();
        let lam = lines.last().unwrap().value;
        let count: u64 = lines.iter().map(|l| l.multiplicity).sum();
        let predicted = std::f64::consts::PI * lam;
        let ratio = count as f64 / predicted;
        assert!(
            (ratio - 1.0).abs() < 0.2,
            "Weyl count off by more than 20%: ratio = {ratio}"
        );
    }

    #[test]
    fn circle_weyl_law_sanity() {
        let base = BaseManifold::Circle { length: TAU };
        let lines = base_spectrum(&base, 60).unwrap();
        let lam = lines.last().unwrap().value;
        let count: u64 = lines.iter().map(|l| l.multiplicity).sum();
        // N(lambda) ~ L sqrt(lambda) / pi = 2 sqrt(lambda) for L = 2 pi
        let ratio = count as f64 / (2.0 * lam.sqrt());
        assert!((ratio - 1.0).abs() < 0.2, "ratio = {ratio}");
    }

    #[test]
    fn custom_spectrum_validation() {
        let ok = BaseManifold::Custom {
            spectrum: vec![(0.0, 1), (1.0, 2)],
            volume: TAU,
        };
        assert!(ok.validate().is_ok());
        let no_zero = BaseManifold::Custom {
            spectrum: vec![(1.0, 2)],
            volume: 1.0,
        };
        assert!(no_zero.validate().is_err());
        let unsorted = BaseManifold::Custom {
            spectrum: vec![(0.0, 1), (2.0, 1), (1.0, 1)],
            volume: 1.0,
        };
        assert!(unsorted.validate().is_err());
        let bad_volume = BaseManifold::Custom {
            spectrum: vec![(0.0, 1)],
            volume: 0.0,
        };
        assert!(bad_volume.validate().is_err());
    }

    #[test]
    fn custom_spectrum_from_json() {
        let base =
            BaseManifold::<f64>::custom_from_json("[[0.0, 1], [1.0, 2], [4.0, 2]]", TAU).unwrap();
        let lines = base_spectrum(&base, 3).unwrap();
        assert_eq!(values(&lines), vec![(0.0, 1), (1.0, 2), (4.0, 2)]);
        assert!(BaseManifold::<f64>::custom_from_json("[[1.0, 2]]", 1.0).is_err());
        assert!(BaseManifold::<f64>::custom_from_json("not json", 1.0).is_err());
    }

    #[test]
    fn strictly_increasing_values() {
        for base in [
            BaseManifold::Circle { length: 3.7 },
            BaseManifold::RoundSphere {
                dim: 3,
                radius: 0.8,
            },
            BaseManifold::FlatTorus {
                lengths: vec![TAU, 5.0],
            },
        ] {
            let lines = base_spectrum(&base, 12).unwrap();
            for w in lines.windows(2) {
                assert!(w[1].value > w[0].value);
                assert_eq!(w[1].index, w[0].index + 1);
            }
        }
        let cross = cross_section_spectrum::<f64>(4, 10).unwrap();
        for w in cross.windows(2) {
            assert!(w[1].value > w[0].value);
        }
    }

    #[test]
    fn volumes() {
        assert_eq!(BaseManifold::<f64>::Point.volume().unwrap(), 1.0);
        assert_relative_eq!(
            BaseManifold::Circle { length: TAU }.volume().unwrap(),
            TAU,
            max_relative = 1e-15
        );
        // |S^2| with radius 2 = 16 pi
        assert_relative_eq!(
            BaseManifold::RoundSphere {
                dim: 2,
                radius: 2.0
            }
            .volume()
            .unwrap(),
            16.0 * std::f64::consts::PI,
            max_relative = 1e-13
        );
    }
}
