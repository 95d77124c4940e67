//! Path algebras of acyclic quivers: Cartan and Coxeter data, Loewy
//! lengths, representations, and ghost-map certificates in the derived
//! category of a hereditary algebra.
//!
//! Vertices are numbered from 0. A representation puts a vector space `V_v`
//! at each vertex and, for an arrow `s -> t`, a linear map `V_t -> V_s`, so
//! `Ext^1(S_v, S_w)` counts the arrows `w -> v`.

mod ghost;
mod rep;

pub use ghost::{ghost_lower_bound, Block, DerivedMap, DerivedObject, GhostCertificate, GhostError};
pub use rep::{ext1, ext1_basis, ext1_is_zero, rep_hom, split_complex, ComplexOfReps, HomSpace, Representation};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::decompose::AdeType;
use crate::intmat::IntMatrix;
use crate::linalg::QMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("quiver has a directed cycle")]
    Cyclic,
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("matrix is singular over the rationals")]
    Singular,
    #[error("Coxeter polynomial has non-integral coefficients")]
    NonIntegral,
    #[error("matrix is not square")]
    NotSquare,
    #[error("representations live on different quivers")]
    QuiverMismatch,
    #[error("arrow {arrow}: expected a {expected:?} matrix, got {got:?}")]
    Shape { arrow: usize, expected: (usize, usize), got: (usize, usize) },
    #[error("dimension vector has length {got}, expected {expected}")]
    DimensionVector { expected: usize, got: usize },
    #[error("differential {0} is not a morphism of representations")]
    NotAMorphism(i64),
    #[error("differentials {0} and {1} do not compose to zero")]
    NotSquareZero(i64, i64),
    #[error("type {0} has no quiver")]
    IllegalType(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: usize,
    arrows: Vec<(usize, usize)>,
    topological: Vec<usize>,
}

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<(usize, usize)>) -> Result<Self, QuiverError> {
        for &(s, t) in &arrows {
            for v in [s, t] {
                if v >= vertices {
                    return Err(QuiverError::VertexOutOfRange { vertex: v, count: vertices });
                }
            }
        }
        // Kahn's algorithm, smallest ready vertex first
        let mut indeg = vec![0usize; vertices];
        for &(_, t) in &arrows {
            indeg[t] += 1;
        }
        let mut ready: std::collections::BTreeSet<usize> = (0..vertices).filter(|&v| indeg[v] == 0).collect();
        let mut topological = Vec::with_capacity(vertices);
        while let Some(v) = ready.pop_first() {
            topological.push(v);
            for &(s, t) in &arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        ready.insert(t);
                    }
                }
            }
        }
        if topological.len() < vertices {
            return Err(QuiverError::Cyclic);
        }
        Ok(Quiver { vertices, arrows, topological })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn topological_order(&self) -> &[usize] {
        &self.topological
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), QuiverError> {
        if v < self.vertices {
            Ok(())
        } else {
            Err(QuiverError::VertexOutOfRange { vertex: v, count: self.vertices })
        }
    }

    /// All paths from `u` to `v` as arrow-index sequences, trivial path included.
    pub fn paths(&self, u: usize, v: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = vec![(u, Vec::new())];
        while let Some((at, path)) = stack.pop() {
            if at == v {
                out.push(path.clone());
            }
            for (k, &(s, t)) in self.arrows.iter().enumerate().rev() {
                if s == at {
                    let mut p = path.clone();
                    p.push(k);
                    stack.push((t, p));
                }
            }
        }
        out.sort();
        out
    }

    /// Number of arrows on the longest path.
    pub fn longest_path(&self) -> usize {
        let mut best = vec![0usize; self.vertices];
        for &v in self.topological.iter().rev() {
            best[v] = self.arrows.iter().filter(|&&(s, _)| s == v).map(|&(_, t)| best[t] + 1).max().unwrap_or(0);
        }
        best.into_iter().max().unwrap_or(0)
    }
}

/// The orientations of the standard pictures, numbered from 0: `A_n` linear,
/// `D_n` forking at its third-to-last vertex, `E_n` branching at vertex 2.
pub fn ade_quiver(t: AdeType) -> Result<Quiver, QuiverError> {
    let chain = |n: usize| (1..n).map(|i| (i - 1, i)).collect::<Vec<_>>();
    match t {
        AdeType::A(m) => Quiver::new(m as usize, chain(m as usize)),
        AdeType::D4 => d_quiver(4),
        AdeType::E6 => e_quiver(6),
        AdeType::E8 => e_quiver(8),
    }
}

pub fn d_quiver(n: usize) -> Result<Quiver, QuiverError> {
    if n < 4 {
        return Err(QuiverError::IllegalType(format!("D{n}")));
    }
    let mut arrows: Vec<(usize, usize)> = (1..n - 2).map(|i| (i - 1, i)).collect();
    arrows.push((n - 3, n - 2));
    arrows.push((n - 3, n - 1));
    Quiver::new(n, arrows)
}

pub fn e_quiver(n: usize) -> Result<Quiver, QuiverError> {
    if !(6..=8).contains(&n) {
        return Err(QuiverError::IllegalType(format!("E{n}")));
    }
    let mut arrows = vec![(0, 1), (1, 2), (2, 3), (2, 4)];
    arrows.extend((5..n).map(|i| (i - 1, i)));
    Quiver::new(n, arrows)
}

/// Entry `(i, j)` counts the paths `i -> j`.
pub fn cartan_matrix(q: &Quiver) -> IntMatrix {
    let n = q.vertices;
    let mut c = IntMatrix::zeros(n, n);
    // rows of successors are final before their predecessors are visited
    for i in 0..n {
        c[(i, i)] = BigInt::one();
    }
    for &u in q.topological.iter().rev() {
        for &(s, t) in &q.arrows {
            if s == u {
                for j in 0..n {
                    let add = c[(t, j)].clone();
                    c[(u, j)] += add;
                }
            }
        }
    }
    c
}

/// Characteristic polynomial of `-C^{-T} C`, ascending coefficients.
pub fn coxeter_polynomial(c: &IntMatrix) -> Result<Vec<BigInt>, QuiverError> {
    if !c.is_square() {
        return Err(QuiverError::NotSquare);
    }
    let cq = QMatrix::from_int(c);
    let inv_t = cq.transpose().inverse().ok_or(QuiverError::Singular)?;
    let phi = (&inv_t * &cq).scaled(&-num_rational::BigRational::one());
    let coeffs = phi.characteristic_polynomial();
    coeffs
        .into_iter()
        .map(|x| if x.is_integer() { Ok(x.to_integer()) } else { Err(QuiverError::NonIntegral) })
        .collect()
}

pub fn tensor_cartan(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    a.kronecker(b)
}

/// Longest path plus one; the empty quiver gives 0.
pub fn loewy_length(q: &Quiver) -> usize {
    if q.vertices == 0 {
        0
    } else {
        q.longest_path() + 1
    }
}

/// `Σ LL_i - (k - 1)` for a tensor product of `k` algebras.
pub fn loewy_length_tensor(lengths: &[usize]) -> usize {
    if lengths.contains(&0) {
        return 0;
    }
    (lengths.iter().sum::<usize>() + 1).saturating_sub(lengths.len())
}

/// `dim Ext^t(S_v, S_w)`.
pub fn ext_simples(q: &Quiver, v: usize, w: usize, t: i64) -> Result<usize, QuiverError> {
    q.check_vertex(v)?;
    q.check_vertex(w)?;
    Ok(match t {
        0 => usize::from(v == w),
        1 => q.arrows.iter().filter(|&&(s, tt)| s == w && tt == v).count(),
        _ => 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverAlgebraModel {
    pub quiver: Quiver,
    pub cartan: IntMatrix,
    pub loewy_length: usize,
    pub label: String,
}

impl QuiverAlgebraModel {
    pub fn ade(t: AdeType) -> Result<Self, QuiverError> {
        let quiver = ade_quiver(t)?;
        Ok(QuiverAlgebraModel {
            cartan: cartan_matrix(&quiver),
            loewy_length: loewy_length(&quiver),
            label: t.to_string(),
            quiver,
        })
    }
}

/// Cartan matrix and Loewy length of `⊗ A_{d_i - 1}`.
pub fn tensor_of_a_types(ds: &[u64]) -> (IntMatrix, usize) {
    let mut c = IntMatrix::identity(1);
    let mut lls = Vec::new();
    for &d in ds {
        let q = ade_quiver(AdeType::A(d.saturating_sub(1))).expect("type A always exists");
        c = tensor_cartan(&c, &cartan_matrix(&q));
        lls.push(loewy_length(&q));
    }
    (c, loewy_length_tensor(&lls))
}

pub fn format_polynomial(coeffs: &[BigInt]) -> String {
    let mut terms = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = if c < &BigInt::zero() { -c } else { c.clone() };
        let body = match (k, mag.is_one()) {
            (0, _) => mag.to_string(),
            (1, true) => "x".to_string(),
            (1, false) => format!("{mag}x"),
            (_, true) => format!("x^{k}"),
            (_, false) => format!("{mag}x^{k}"),
        };
        let sign = if c < &BigInt::zero() { "-" } else { "+" };
        terms.push((sign, body));
    }
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (sign, body)) in terms.into_iter().enumerate() {
        match (i, sign) {
            (0, "-") => s.push('-'),
            (0, _) => {}
            (_, sg) => s.push_str(&format!(" {sg} ")),
        }
        s.push_str(&body);
    }
    s
}
