//! Bundled states, bases and graphs.
//!
//! The spin-½ states model the Stern–Gerlach setup. The Cabello 18-vector
//! and Peres 33-vector sets are standard Kochen–Specker witnesses from the
//! literature; their `source` field says so.

use crate::error::Result;
use crate::hilbert::{c, Projector, StateVector, Unitary, C64};
use crate::powergraph::{NodeId, PowerGraph, DEFAULT_TOL};

pub const SOURCE_STERN_GERLACH: &str = "worked example: Stern-Gerlach spin-1/2 (x, y, z bases)";
pub const SOURCE_LITERATURE_KS: &str = "literature KS set";

/// Spin-½ eigenstates along the coordinate axes.
pub mod spin {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2 as S;

    fn v(a: C64, b: C64) -> StateVector {
        StateVector::new(vec![a, b]).expect("unit vector")
    }

    pub fn up_z() -> StateVector {
        StateVector::basis(2, 0)
    }
    pub fn down_z() -> StateVector {
        StateVector::basis(2, 1)
    }
    pub fn up_x() -> StateVector {
        v(c(S, 0.), c(S, 0.))
    }
    pub fn down_x() -> StateVector {
        v(c(S, 0.), c(-S, 0.))
    }
    pub fn up_y() -> StateVector {
        v(c(S, 0.), c(0., S))
    }
    pub fn down_y() -> StateVector {
        v(c(S, 0.), c(0., -S))
    }

    pub fn z_basis() -> Vec<StateVector> {
        vec![up_z(), down_z()]
    }
    pub fn x_basis() -> Vec<StateVector> {
        vec![up_x(), down_x()]
    }
    pub fn y_basis() -> Vec<StateVector> {
        vec![up_y(), down_y()]
    }
}

/// A finite vector set with its declared contexts.
#[derive(Debug, Clone)]
pub struct VectorFixture {
    pub name: String,
    pub source: String,
    pub dim: usize,
    pub vectors: Vec<StateVector>,
    /// Orthonormal bases, as indices into `vectors`.
    pub contexts: Vec<Vec<NodeId>>,
}

impl VectorFixture {
    /// Graph whose node ids coincide with indices into `vectors`.
    pub fn graph(&self) -> Result<PowerGraph> {
        let projectors = self.vectors.iter().map(Projector::from_vector).collect::<Result<Vec<_>>>()?;
        PowerGraph::build(projectors, DEFAULT_TOL)
    }
}

fn real_vectors(raw: &[Vec<f64>]) -> Vec<StateVector> {
    raw.iter().map(|r| StateVector::from_real(r).expect("nonzero")).collect()
}

/// Stern–Gerlach x, y and z bases in d = 2 (nodes: ↑x ↓x ↑y ↓y ↑z ↓z).
pub fn stern_gerlach() -> VectorFixture {
    let vectors = [spin::x_basis(), spin::y_basis(), spin::z_basis()].concat();
    VectorFixture {
        name: "stern-gerlach".into(),
        source: SOURCE_STERN_GERLACH.into(),
        dim: 2,
        vectors,
        contexts: vec![vec![0, 1], vec![2, 3], vec![4, 5]],
    }
}

/// The z and x bases in d = 2: two contexts sharing no node.
pub fn two_disjoint_contexts() -> VectorFixture {
    VectorFixture {
        name: "two-disjoint-contexts".into(),
        source: "constructed: z and x bases of a spin-1/2, no shared node".into(),
        dim: 2,
        vectors: [spin::z_basis(), spin::x_basis()].concat(),
        contexts: vec![vec![0, 1], vec![2, 3]],
    }
}

/// Cabello–Estebaranz–García-Alcaine 18 vectors in d = 4 forming 9
/// orthonormal bases; every vector lies in exactly two of them.
pub fn cabello18() -> VectorFixture {
    #[rustfmt::skip]
    let bases: [[[f64; 4]; 4]; 9] = [
        [[0., 0., 0., 1.], [0., 0., 1., 0.], [1., 1., 0., 0.], [1., -1., 0., 0.]],
        [[0., 0., 0., 1.], [0., 1., 0., 0.], [1., 0., 1., 0.], [1., 0., -1., 0.]],
        [[1., -1., 1., -1.], [1., -1., -1., 1.], [1., 1., 0., 0.], [0., 0., 1., 1.]],
        [[1., -1., 1., -1.], [1., 1., 1., 1.], [1., 0., -1., 0.], [0., 1., 0., -1.]],
        [[0., 0., 1., 0.], [0., 1., 0., 0.], [1., 0., 0., 1.], [1., 0., 0., -1.]],
        [[1., -1., -1., 1.], [1., 1., 1., 1.], [1., 0., 0., -1.], [0., 1., -1., 0.]],
        [[1., 1., -1., 1.], [1., 1., 1., -1.], [1., -1., 0., 0.], [0., 0., 1., 1.]],
        [[1., 1., -1., 1.], [-1., 1., 1., 1.], [1., 0., 1., 0.], [0., 1., 0., -1.]],
        [[1., 1., 1., -1.], [-1., 1., 1., 1.], [1., 0., 0., 1.], [0., 1., -1., 0.]],
    ];
    let mut raw: Vec<[f64; 4]> = Vec::new();
    let mut contexts = Vec::new();
    for basis in &bases {
        let mut ctx = Vec::new();
        for v in basis {
            let id = match raw.iter().position(|w| w == v) {
                Some(i) => i,
                None => {
                    raw.push(*v);
                    raw.len() - 1
                }
            };
            ctx.push(id);
        }
        ctx.sort_unstable();
        contexts.push(ctx);
    }
    contexts.sort();
    VectorFixture {
        name: "cabello18".into(),
        source: SOURCE_LITERATURE_KS.into(),
        dim: 4,
        vectors: real_vectors(&raw.iter().map(|v| v.to_vec()).collect::<Vec<_>>()),
        contexts,
    }
}

/// Peres' 33 rays in d = 3: up to sign and permutation, (1,0,0), (0,1,±1),
/// (0,1,±√2) and (1,±1,±√2). Contexts are its 16 orthogonal triads.
pub fn peres33() -> VectorFixture {
    let r2 = std::f64::consts::SQRT_2;
    let mut rays: Vec<[f64; 3]> = Vec::new();
    for base in [[1., 0., 0.], [0., 1., 1.], [0., 1., r2], [1., 1., r2]] {
        for perm in permutations3(base) {
            for signs in 0..8u8 {
                let mut v = perm;
                for (k, x) in v.iter_mut().enumerate() {
                    if signs & (1 << k) != 0 {
                        *x = -*x;
                    }
                }
                // overall sign: first nonzero entry positive
                if let Some(&lead) = v.iter().find(|x| x.abs() > 1e-12) {
                    if lead < 0.0 {
                        v.iter_mut().for_each(|x| *x = -*x);
                    }
                }
                for x in v.iter_mut() {
                    *x += 0.0;
                }
                if !rays.iter().any(|w| w.iter().zip(&v).all(|(a, b)| (a - b).abs() < 1e-12)) {
                    rays.push(v);
                }
            }
        }
    }
    rays.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let vectors = real_vectors(&rays.iter().map(|v| v.to_vec()).collect::<Vec<_>>());

    let orth = |a: &[f64; 3], b: &[f64; 3]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>().abs() < 1e-9;
    let mut contexts = Vec::new();
    let n = rays.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orth(&rays[i], &rays[j]) && orth(&rays[i], &rays[k]) && orth(&rays[j], &rays[k]) {
                    contexts.push(vec![i, j, k]);
                }
            }
        }
    }
    VectorFixture { name: "peres33".into(), source: SOURCE_LITERATURE_KS.into(), dim: 3, vectors, contexts }
}

fn permutations3(v: [f64; 3]) -> Vec<[f64; 3]> {
    const P: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    P.iter().map(|p| [v[p[0]], v[p[1]], v[p[2]]]).collect()
}

/// Mutually unbiased bases: z, x, y for d = 2; for odd prime d the
/// computational basis plus the `d` bases `(1/√d) Σ_k ω^{a k² + b k} |k⟩`.
pub fn mutually_unbiased_bases(dim: usize) -> Vec<Vec<StateVector>> {
    if dim == 2 {
        return vec![spin::z_basis(), spin::x_basis(), spin::y_basis()];
    }
    assert!(dim >= 3 && (2..dim).all(|p| !dim.is_multiple_of(p)), "odd prime dimension required");
    let mut bases = vec![(0..dim).map(|i| StateVector::basis(dim, i)).collect()];
    let norm = 1.0 / (dim as f64).sqrt();
    for a in 0..dim {
        let basis = (0..dim)
            .map(|b| {
                let entries = (0..dim)
                    .map(|k| {
                        let phase = ((a * k * k + b * k) % dim) as f64 / dim as f64;
                        C64::from_polar(norm, 2.0 * std::f64::consts::PI * phase)
                    })
                    .collect();
                StateVector::new(entries).expect("unit vector")
            })
            .collect();
        bases.push(basis);
    }
    bases
}

/// Columns of the d-dimensional Fourier matrix.
pub fn fourier_basis(dim: usize) -> Vec<StateVector> {
    Unitary::fourier(dim).columns()
}

/// Every named fixture, in a fixed order.
pub fn all() -> Vec<VectorFixture> {
    vec![stern_gerlach(), two_disjoint_contexts(), cabello18(), peres33()]
}

pub fn by_name(name: &str) -> Option<VectorFixture> {
    all().into_iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::check_orthonormal;

    #[test]
    fn cabello_has_parity_structure() {
        let f = cabello18();
        assert_eq!(f.vectors.len(), 18);
        assert_eq!(f.contexts.len(), 9);
        for i in 0..18 {
            assert_eq!(f.contexts.iter().filter(|c| c.contains(&i)).count(), 2);
        }
        for ctx in &f.contexts {
            let basis: Vec<_> = ctx.iter().map(|&i| f.vectors[i].clone()).collect();
            check_orthonormal(&basis).unwrap();
        }
    }

    #[test]
    fn peres_counts() {
        let f = peres33();
        assert_eq!(f.vectors.len(), 33);
        assert_eq!(f.contexts.len(), 16);
    }

    #[test]
    fn mubs_are_unbiased() {
        for d in [2, 3, 5] {
            let bases = mutually_unbiased_bases(d);
            assert_eq!(bases.len(), d + 1);
            for (i, a) in bases.iter().enumerate() {
                check_orthonormal(a).unwrap();
                for b in &bases[i + 1..] {
                    for u in a {
                        for v in b {
                            let ip = u.inner(v).unwrap().norm_sqr();
                            assert!((ip - 1.0 / d as f64).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }
}
