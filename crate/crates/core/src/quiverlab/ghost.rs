use std::collections::BTreeSet;

use thiserror::Error;

use super::rep::{ext1_basis, ext1_is_zero, rep_hom, Representation};
use super::QuiverError;
use crate::linalg::QMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GhostError {
    #[error("a certificate needs at least one map")]
    EmptyChain,
    #[error("map {0} does not start where the previous map ends")]
    NotComposable(usize),
    #[error("map {map} is seen by the generator shifted by {shift}")]
    NotGhost { map: usize, shift: i64 },
    #[error("the composite of the chain is zero")]
    ZeroComposite,
    #[error("block ({row}, {col}) does not fit its source and target")]
    InvalidBlock { row: usize, col: usize },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// `⊕ R_i[s_i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedObject {
    pub summands: Vec<(Representation, i64)>,
}

impl DerivedObject {
    pub fn new(summands: Vec<(Representation, i64)>) -> Self {
        DerivedObject { summands }
    }

    pub fn single(r: Representation, shift: i64) -> Self {
        DerivedObject { summands: vec![(r, shift)] }
    }
}

/// A component of a map `R[s] -> R'[s']`: a morphism when `s' = s`, an
/// extension cocycle when `s' = s + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    Zero,
    Hom(Vec<QMatrix>),
    Ext(Vec<QMatrix>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivedMap {
    source: DerivedObject,
    target: DerivedObject,
    /// `blocks[i][j]` goes from source summand `i` to target summand `j`.
    blocks: Vec<Vec<Block>>,
}

impl DerivedMap {
    pub fn new(source: DerivedObject, target: DerivedObject, blocks: Vec<Vec<Block>>) -> Result<Self, GhostError> {
        if blocks.len() != source.summands.len() {
            return Err(GhostError::InvalidBlock { row: blocks.len(), col: 0 });
        }
        for (i, row) in blocks.iter().enumerate() {
            if row.len() != target.summands.len() {
                return Err(GhostError::InvalidBlock { row: i, col: row.len() });
            }
            for (j, b) in row.iter().enumerate() {
                let (m, s) = &source.summands[i];
                let (n, t) = &target.summands[j];
                if m.quiver() != n.quiver() {
                    return Err(QuiverError::QuiverMismatch.into());
                }
                let ok = match b {
                    Block::Zero => true,
                    Block::Hom(f) => t == s && m.is_morphism_to(n, f),
                    Block::Ext(xi) => *t == s + 1 && cocycle_shapes(m, n, xi),
                };
                if !ok {
                    return Err(GhostError::InvalidBlock { row: i, col: j });
                }
            }
        }
        Ok(DerivedMap { source, target, blocks })
    }

    pub fn source(&self) -> &DerivedObject {
        &self.source
    }

    pub fn target(&self) -> &DerivedObject {
        &self.target
    }

    pub fn blocks(&self) -> &[Vec<Block>] {
        &self.blocks
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &DerivedMap) -> Result<DerivedMap, GhostError> {
        if f.target != self.source {
            return Err(GhostError::NotComposable(1));
        }
        let mut blocks = vec![vec![Block::Zero; self.target.summands.len()]; f.source.summands.len()];
        for (i, row) in blocks.iter_mut().enumerate() {
            for (k, out) in row.iter_mut().enumerate() {
                for j in 0..self.source.summands.len() {
                    let c =
                        compose_blocks(&self.blocks[j][k], &f.blocks[i][j], f.target.summands[j].0.quiver().arrows());
                    *out = add_blocks(out.clone(), c);
                }
            }
        }
        DerivedMap::new(f.source.clone(), self.target.clone(), blocks)
    }

    pub fn is_zero(&self) -> Result<bool, GhostError> {
        for (i, row) in self.blocks.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                let zero = match b {
                    Block::Zero => true,
                    Block::Hom(f) => f.iter().all(QMatrix::is_zero),
                    Block::Ext(xi) => ext1_is_zero(&self.source.summands[i].0, &self.target.summands[j].0, xi)?,
                };
                if !zero {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn cocycle_shapes(m: &Representation, n: &Representation, xi: &[QMatrix]) -> bool {
    xi.len() == m.quiver().arrows().len()
        && m.quiver().arrows().iter().zip(xi).all(|(&(s, t), x)| (x.rows(), x.cols()) == (n.dims()[s], m.dims()[t]))
}

/// `g ∘ f` with Yoneda products; two extensions compose into `Ext^2 = 0`.
fn compose_blocks(g: &Block, f: &Block, arrows: &[(usize, usize)]) -> Block {
    match (g, f) {
        (Block::Zero, _) | (_, Block::Zero) | (Block::Ext(_), Block::Ext(_)) => Block::Zero,
        (Block::Hom(g), Block::Hom(f)) => Block::Hom(g.iter().zip(f).map(|(a, b)| a * b).collect()),
        (Block::Hom(g), Block::Ext(xi)) => Block::Ext(arrows.iter().zip(xi).map(|(&(s, _), x)| &g[s] * x).collect()),
        (Block::Ext(xi), Block::Hom(f)) => Block::Ext(arrows.iter().zip(xi).map(|(&(_, t), x)| x * &f[t]).collect()),
    }
}

fn add_blocks(a: Block, b: Block) -> Block {
    match (a, b) {
        (Block::Zero, x) | (x, Block::Zero) => x,
        (Block::Hom(x), Block::Hom(y)) => Block::Hom(x.iter().zip(&y).map(|(p, q)| p.add(q)).collect()),
        (Block::Ext(x), Block::Ext(y)) => Block::Ext(x.iter().zip(&y).map(|(p, q)| p.add(q)).collect()),
        _ => unreachable!("blocks between the same summands share a degree"),
    }
}

/// A generator `G = ⊕ R_g[s_g]` and a chain `X_0 -> X_1 -> ... -> X_n` of
/// `G`-ghost maps with nonzero composite.
#[derive(Clone, Debug)]
pub struct GhostCertificate {
    pub generator: Vec<(Representation, i64)>,
    pub chain: Vec<DerivedMap>,
}

/// Checks the certificate and returns `n`, the number of maps: the source of
/// the chain is not in `<G>_{n-1}`, so its generation time is at least `n`.
pub fn ghost_lower_bound(cert: &GhostCertificate) -> Result<usize, GhostError> {
    if cert.chain.is_empty() {
        return Err(GhostError::EmptyChain);
    }
    for k in 1..cert.chain.len() {
        if cert.chain[k].source != cert.chain[k - 1].target {
            return Err(GhostError::NotComposable(k));
        }
    }
    for (k, f) in cert.chain.iter().enumerate() {
        if let Some(shift) = seen_by_generator(&cert.generator, f)? {
            return Err(GhostError::NotGhost { map: k, shift });
        }
    }
    let mut composite = cert.chain[0].clone();
    for f in &cert.chain[1..] {
        composite = f.after(&composite)?;
    }
    if composite.is_zero()? {
        return Err(GhostError::ZeroComposite);
    }
    Ok(cert.chain.len())
}

/// A shift `i` with some `φ: G[i] -> X` and `f ∘ φ ≠ 0`. Over a hereditary
/// algebra `Hom(R[a], R'[b])` vanishes unless `b - a ∈ {0, 1}`, so only
/// finitely many shifts need checking.
fn seen_by_generator(generator: &[(Representation, i64)], f: &DerivedMap) -> Result<Option<i64>, GhostError> {
    let x = &f.source;
    for (g, sg) in generator {
        let shifts: BTreeSet<i64> = x.summands.iter().flat_map(|(_, sj)| [sj - sg, sj - sg - 1]).collect();
        for i in shifts {
            let probe_obj = DerivedObject::single(g.clone(), sg + i);
            for (j, (r, sj)) in x.summands.iter().enumerate() {
                let elements: Vec<Block> = match sj - (sg + i) {
                    0 => rep_hom(g, r)?.basis.into_iter().map(Block::Hom).collect(),
                    1 => ext1_basis(g, r)?.into_iter().map(Block::Ext).collect(),
                    _ => Vec::new(),
                };
                for b in elements {
                    let mut row = vec![Block::Zero; x.summands.len()];
                    row[j] = b;
                    let phi = DerivedMap::new(probe_obj.clone(), x.clone(), vec![row])?;
                    if !f.after(&phi)?.is_zero()? {
                        return Ok(Some(i));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::AdeType;
    use crate::quiverlab::{ade_quiver, Quiver};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn a(n: u64) -> Quiver {
        ade_quiver(AdeType::A(n)).unwrap()
    }

    fn projectives(q: &Quiver) -> Vec<(Representation, i64)> {
        (0..q.vertex_count()).map(|v| (Representation::projective(q, v).unwrap(), 0)).collect()
    }

    /// The class `S_w -> S_v[1]` for an arrow `v -> w`, scaled by `c`.
    fn extension_map(q: &Quiver, v: usize, w: usize, shift: i64, c: i64) -> DerivedMap {
        let (sw, sv) = (Representation::simple(q, w).unwrap(), Representation::simple(q, v).unwrap());
        let xi: Vec<QMatrix> = ext1_basis(&sw, &sv).unwrap().remove(0);
        let k = BigRational::from_integer(BigInt::from(c));
        let xi = xi.iter().map(|m| m.scaled(&k)).collect();
        DerivedMap::new(
            DerivedObject::single(sw, shift),
            DerivedObject::single(sv, shift + 1),
            vec![vec![Block::Ext(xi)]],
        )
        .unwrap()
    }

    #[test]
    fn a2_certificate() {
        let q = a(2);
        let cert = GhostCertificate { generator: projectives(&q), chain: vec![extension_map(&q, 0, 1, 0, 1)] };
        assert_eq!(ghost_lower_bound(&cert), Ok(1));
    }

    #[test]
    fn empty_chain_rejected() {
        let cert = GhostCertificate { generator: projectives(&a(2)), chain: vec![] };
        assert_eq!(ghost_lower_bound(&cert), Err(GhostError::EmptyChain));
    }

    #[test]
    fn zero_class_rejected() {
        let q = a(2);
        let cert = GhostCertificate { generator: projectives(&q), chain: vec![extension_map(&q, 0, 1, 0, 0)] };
        assert_eq!(ghost_lower_bound(&cert), Err(GhostError::ZeroComposite));
    }

    #[test]
    fn identity_is_not_ghost() {
        let q = a(2);
        let s1 = Representation::simple(&q, 1).unwrap();
        let id = DerivedMap::new(
            DerivedObject::single(s1.clone(), 0),
            DerivedObject::single(s1, 0),
            vec![vec![Block::Hom(vec![QMatrix::zeros(0, 0), QMatrix::identity(1)])]],
        )
        .unwrap();
        let cert = GhostCertificate { generator: projectives(&q), chain: vec![id] };
        assert_eq!(ghost_lower_bound(&cert), Err(GhostError::NotGhost { map: 0, shift: 0 }));
    }

    #[test]
    fn two_extensions_compose_to_zero() {
        // S_2 -> S_1[1] -> S_0[2] on A_3: hereditary, so the composite vanishes
        let q = a(3);
        let chain = vec![extension_map(&q, 1, 2, 0, 1), extension_map(&q, 0, 1, 1, 1)];
        let cert = GhostCertificate { generator: projectives(&q), chain };
        assert_eq!(ghost_lower_bound(&cert), Err(GhostError::ZeroComposite));
    }

    #[test]
    fn mismatched_chain_rejected() {
        let q = a(3);
        let chain = vec![extension_map(&q, 1, 2, 0, 1), extension_map(&q, 1, 2, 1, 1)];
        let cert = GhostCertificate { generator: projectives(&q), chain };
        assert_eq!(ghost_lower_bound(&cert), Err(GhostError::NotComposable(1)));
    }

    #[test]
    fn simples_see_the_extension() {
        // with G = all simples, Hom(S_1, S_1) composed with the class is nonzero
        let q = a(2);
        let simples = (0..2).map(|v| (Representation::simple(&q, v).unwrap(), 0)).collect();
        let cert = GhostCertificate { generator: simples, chain: vec![extension_map(&q, 0, 1, 0, 1)] };
        assert!(matches!(ghost_lower_bound(&cert), Err(GhostError::NotGhost { .. })));
    }

    #[test]
    fn invalid_blocks_rejected() {
        let q = a(2);
        let s1 = Representation::simple(&q, 1).unwrap();
        let s0 = Representation::simple(&q, 0).unwrap();
        let wrong_degree = DerivedMap::new(
            DerivedObject::single(s1.clone(), 0),
            DerivedObject::single(s0, 0),
            vec![vec![Block::Ext(vec![QMatrix::identity(1)])]],
        );
        assert!(matches!(wrong_degree, Err(GhostError::InvalidBlock { .. })));
        let not_morphism = DerivedMap::new(
            DerivedObject::single(s1.clone(), 0),
            DerivedObject::single(s1, 0),
            vec![vec![Block::Hom(vec![QMatrix::zeros(0, 0)])]],
        );
        assert!(not_morphism.is_err());
    }

    proptest! {
        #[test]
        fn scaled_classes(c in -5i64..=5, shift in -3i64..=3) {
            let q = a(2);
            let cert = GhostCertificate { generator: projectives(&q), chain: vec![extension_map(&q, 0, 1, shift, c)] };
            let res = ghost_lower_bound(&cert);
            if c == 0 {
                prop_assert_eq!(res, Err(GhostError::ZeroComposite));
            } else {
                prop_assert_eq!(res, Ok(1));
                // recheck the hypotheses directly: projectives never see S_1[1]
                let p = &cert.generator;
                for (g, _) in p {
                    prop_assert_eq!(crate::quiverlab::ext1(g, &Representation::simple(&q, 0).unwrap()).unwrap(), 0);
                }
                prop_assert!(!cert.chain[0].is_zero().unwrap());
            }
        }

        #[test]
        fn ade_arrows_give_certificates(t in prop::sample::select(vec![AdeType::A(3), AdeType::A(4), AdeType::D4, AdeType::E6])) {
            let q = ade_quiver(t).unwrap();
            for &(v, w) in q.arrows() {
                let cert = GhostCertificate { generator: projectives(&q), chain: vec![extension_map(&q, v, w, 0, 1)] };
                prop_assert_eq!(ghost_lower_bound(&cert), Ok(1));
            }
        }
    }
}
