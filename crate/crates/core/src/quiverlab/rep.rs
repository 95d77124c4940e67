use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Quiver, QuiverError};
use crate::linalg::QMatrix;

/// Vector spaces on the vertices, and for each arrow `s -> t` a matrix of
/// shape `dims[s] x dims[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    quiver: Quiver,
    dims: Vec<usize>,
    maps: Vec<QMatrix>,
}

impl Representation {
    pub fn new(quiver: Quiver, dims: Vec<usize>, maps: Vec<QMatrix>) -> Result<Self, QuiverError> {
        if dims.len() != quiver.vertex_count() {
            return Err(QuiverError::DimensionVector { expected: quiver.vertex_count(), got: dims.len() });
        }
        if maps.len() != quiver.arrows().len() {
            return Err(QuiverError::Shape { arrow: maps.len(), expected: (0, 0), got: (0, 0) });
        }
        for (k, (&(s, t), m)) in quiver.arrows().iter().zip(&maps).enumerate() {
            if (m.rows(), m.cols()) != (dims[s], dims[t]) {
                return Err(QuiverError::Shape { arrow: k, expected: (dims[s], dims[t]), got: (m.rows(), m.cols()) });
            }
        }
        Ok(Representation { quiver, dims, maps })
    }

    pub fn zero(quiver: &Quiver) -> Self {
        let dims = vec![0; quiver.vertex_count()];
        let maps = quiver.arrows().iter().map(|_| QMatrix::zeros(0, 0)).collect();
        Representation { quiver: quiver.clone(), dims, maps }
    }

    pub fn simple(quiver: &Quiver, v: usize) -> Result<Self, QuiverError> {
        quiver.check_vertex(v)?;
        let dims: Vec<usize> = (0..quiver.vertex_count()).map(|u| usize::from(u == v)).collect();
        let maps = quiver.arrows().iter().map(|&(s, t)| QMatrix::zeros(dims[s], dims[t])).collect();
        Self::new(quiver.clone(), dims, maps)
    }

    /// `P_v`: at `u` the paths `u -> v`; an arrow `a: s -> t` sends a path
    /// `p` from `t` to the path `a p` from `s`.
    pub fn projective(quiver: &Quiver, v: usize) -> Result<Self, QuiverError> {
        quiver.check_vertex(v)?;
        let bases: Vec<Vec<Vec<usize>>> = (0..quiver.vertex_count()).map(|u| quiver.paths(u, v)).collect();
        let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
        let maps = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, &(s, t))| {
                QMatrix::from_fn(dims[s], dims[t], |i, j| {
                    let mut ap = vec![k];
                    ap.extend(&bases[t][j]);
                    if bases[s][i] == ap {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
            })
            .collect();
        Self::new(quiver.clone(), dims, maps)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn maps(&self) -> &[QMatrix] {
        &self.maps
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Whether the vertex maps `f_v: self_v -> other_v` commute with the arrows.
    pub fn is_morphism_to(&self, other: &Representation, f: &[QMatrix]) -> bool {
        self.quiver == other.quiver
            && f.len() == self.dims.len()
            && f.iter().enumerate().all(|(v, m)| (m.rows(), m.cols()) == (other.dims[v], self.dims[v]))
            && self
                .quiver
                .arrows()
                .iter()
                .enumerate()
                .all(|(k, &(s, t))| &other.maps[k] * &f[t] == &f[s] * &self.maps[k])
    }
}

#[derive(Clone, Debug)]
pub struct HomSpace {
    pub dim: usize,
    /// Each element lists the vertex maps `f_v`.
    pub basis: Vec<Vec<QMatrix>>,
}

fn same_quiver(m: &Representation, n: &Representation) -> Result<(), QuiverError> {
    if m.quiver == n.quiver {
        Ok(())
    } else {
        Err(QuiverError::QuiverMismatch)
    }
}

struct Layout {
    vertex_offsets: Vec<usize>,
    vertex_total: usize,
    arrow_offsets: Vec<usize>,
    arrow_total: usize,
}

fn layout(m: &Representation, n: &Representation) -> Layout {
    let mut vertex_offsets = Vec::new();
    let mut acc = 0;
    for v in 0..m.dims.len() {
        vertex_offsets.push(acc);
        acc += n.dims[v] * m.dims[v];
    }
    let vertex_total = acc;
    let mut arrow_offsets = Vec::new();
    acc = 0;
    for &(s, t) in m.quiver.arrows() {
        arrow_offsets.push(acc);
        acc += n.dims[s] * m.dims[t];
    }
    Layout { vertex_offsets, vertex_total, arrow_offsets, arrow_total: acc }
}

/// `δ(f)_a = N_a f_t - f_s M_a`, from `⊕_v Hom(M_v, N_v)` to `⊕_a Hom(M_t, N_s)`.
fn delta(m: &Representation, n: &Representation, l: &Layout) -> QMatrix {
    let mut d = QMatrix::zeros(l.arrow_total, l.vertex_total);
    for (k, &(s, t)) in m.quiver.arrows().iter().enumerate() {
        let (ns, mt) = (n.dims[s], m.dims[t]);
        for i in 0..ns {
            for j in 0..mt {
                let row = l.arrow_offsets[k] + i * mt + j;
                // (N_a f_t)[i][j] = Σ_r N_a[i][r] f_t[r][j]
                for r in 0..n.dims[t] {
                    let col = l.vertex_offsets[t] + r * m.dims[t] + j;
                    d[(row, col)] += &n.maps[k][(i, r)];
                }
                // (f_s M_a)[i][j] = Σ_r f_s[i][r] M_a[r][j]
                for r in 0..m.dims[s] {
                    let col = l.vertex_offsets[s] + i * m.dims[s] + r;
                    d[(row, col)] -= &m.maps[k][(r, j)];
                }
            }
        }
    }
    d
}

fn unflatten_vertices(m: &Representation, n: &Representation, l: &Layout, x: &[BigRational]) -> Vec<QMatrix> {
    (0..m.dims.len())
        .map(|v| {
            let c = m.dims[v];
            QMatrix::from_fn(n.dims[v], c, |i, j| x[l.vertex_offsets[v] + i * c + j].clone())
        })
        .collect()
}

fn unflatten_arrows(m: &Representation, n: &Representation, l: &Layout, x: &[BigRational]) -> Vec<QMatrix> {
    m.quiver
        .arrows()
        .iter()
        .enumerate()
        .map(|(k, &(s, t))| {
            let c = m.dims[t];
            QMatrix::from_fn(n.dims[s], c, |i, j| x[l.arrow_offsets[k] + i * c + j].clone())
        })
        .collect()
}

fn flatten_arrows(m: &Representation, n: &Representation, l: &Layout, xi: &[QMatrix]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); l.arrow_total];
    for (k, &(s, t)) in m.quiver.arrows().iter().enumerate() {
        for i in 0..n.dims[s] {
            for j in 0..m.dims[t] {
                out[l.arrow_offsets[k] + i * m.dims[t] + j] = xi[k][(i, j)].clone();
            }
        }
    }
    out
}

pub fn rep_hom(m: &Representation, n: &Representation) -> Result<HomSpace, QuiverError> {
    same_quiver(m, n)?;
    let l = layout(m, n);
    let basis: Vec<Vec<QMatrix>> = delta(m, n, &l).kernel().iter().map(|x| unflatten_vertices(m, n, &l, x)).collect();
    Ok(HomSpace { dim: basis.len(), basis })
}

/// `dim Ext^1(M, N)` as the cokernel of `δ`, which is `Hom` applied to the
/// standard projective resolution of `M`.
pub fn ext1(m: &Representation, n: &Representation) -> Result<usize, QuiverError> {
    same_quiver(m, n)?;
    let l = layout(m, n);
    Ok(l.arrow_total - delta(m, n, &l).rank())
}

/// Cocycles `(ξ_a: M_t -> N_s)` whose classes form a basis of `Ext^1(M, N)`.
pub fn ext1_basis(m: &Representation, n: &Representation) -> Result<Vec<Vec<QMatrix>>, QuiverError> {
    same_quiver(m, n)?;
    let l = layout(m, n);
    let mut span = delta(m, n, &l).transpose();
    let mut rank = span.rank();
    let mut out = Vec::new();
    for k in 0..l.arrow_total {
        let mut e = vec![BigRational::zero(); l.arrow_total];
        e[k] = BigRational::one();
        let candidate = span.vstack(&QMatrix::from_columns(l.arrow_total, &[e.clone()]).transpose());
        let r = candidate.rank();
        if r > rank {
            span = candidate;
            rank = r;
            out.push(unflatten_arrows(m, n, &l, &e));
        }
    }
    Ok(out)
}

/// Whether the cocycle `ξ` is a coboundary.
pub fn ext1_is_zero(m: &Representation, n: &Representation, xi: &[QMatrix]) -> Result<bool, QuiverError> {
    same_quiver(m, n)?;
    let l = layout(m, n);
    let target = flatten_arrows(m, n, &l, xi);
    Ok(delta(m, n, &l).solve(&target).is_some())
}

/// `terms[k]` sits in degree `start + k`; `differentials[k]` maps `terms[k]`
/// to `terms[k + 1]` vertex by vertex.
#[derive(Clone, Debug)]
pub struct ComplexOfReps {
    pub start: i64,
    pub terms: Vec<Representation>,
    pub differentials: Vec<Vec<QMatrix>>,
}

/// Over a hereditary algebra a complex is the sum of its shifted cohomology:
/// returns `(H^i, -i)` for each nonzero `H^i`.
pub fn split_complex(c: &ComplexOfReps) -> Result<Vec<(Representation, i64)>, QuiverError> {
    let Some(first) = c.terms.first() else { return Ok(Vec::new()) };
    let q = first.quiver().clone();
    for t in &c.terms {
        same_quiver(first, t)?;
    }
    if c.differentials.len() + 1 != c.terms.len() {
        return Err(QuiverError::NotAMorphism(c.start + c.differentials.len() as i64));
    }
    for (k, d) in c.differentials.iter().enumerate() {
        if !c.terms[k].is_morphism_to(&c.terms[k + 1], d) {
            return Err(QuiverError::NotAMorphism(c.start + k as i64));
        }
    }
    for k in 1..c.differentials.len() {
        for v in 0..q.vertex_count() {
            if !(&c.differentials[k][v] * &c.differentials[k - 1][v]).is_zero() {
                return Err(QuiverError::NotSquareZero(c.start + k as i64 - 1, c.start + k as i64));
            }
        }
    }

    let mut out = Vec::new();
    for (k, term) in c.terms.iter().enumerate() {
        // per vertex: boundaries, and representatives completing them to cycles
        let mut bounds = Vec::new();
        let mut reps = Vec::new();
        for v in 0..q.vertex_count() {
            let dim = term.dims[v];
            let cycles = match c.differentials.get(k) {
                Some(d) => d[v].kernel(),
                None => (0..dim).map(|i| unit(dim, i)).collect(),
            };
            let b: Vec<Vec<BigRational>> = match k.checked_sub(1) {
                Some(p) => {
                    let d = &c.differentials[p][v];
                    (0..d.cols()).map(|j| d.column(j)).collect()
                }
                None => Vec::new(),
            };
            let b = independent(dim, b, &[]);
            let r = independent(dim, cycles, &b);
            bounds.push(b);
            reps.push(r);
        }
        let dims: Vec<usize> = reps.iter().map(Vec::len).collect();
        if dims.iter().all(|&x| x == 0) {
            continue;
        }
        let maps = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(s, t))| {
                let basis: Vec<Vec<BigRational>> = bounds[s].iter().chain(&reps[s]).cloned().collect();
                let frame = QMatrix::from_columns(term.dims[s], &basis);
                let cols: Vec<Vec<BigRational>> = reps[t]
                    .iter()
                    .map(|r| {
                        let y = term.maps[a].apply(r);
                        let x = frame.solve(&y).expect("arrow maps preserve cycles");
                        x[bounds[s].len()..].to_vec()
                    })
                    .collect();
                QMatrix::from_columns(dims[s], &cols)
            })
            .collect();
        out.push((Representation::new(q.clone(), dims, maps)?, -(c.start + k as i64)));
    }
    Ok(out)
}

fn unit(n: usize, i: usize) -> Vec<BigRational> {
    let mut e = vec![BigRational::zero(); n];
    e[i] = BigRational::one();
    e
}

/// Vectors from `candidates` that extend `base` to a larger independent set.
fn independent(dim: usize, candidates: Vec<Vec<BigRational>>, base: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut chosen: Vec<Vec<BigRational>> = Vec::new();
    let mut rank = QMatrix::from_columns(dim, base).rank();
    for c in candidates {
        let mut all: Vec<Vec<BigRational>> = base.to_vec();
        all.extend(chosen.iter().cloned());
        all.push(c.clone());
        let r = QMatrix::from_columns(dim, &all).rank();
        if r > rank {
            rank = r;
            chosen.push(c);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::AdeType;
    use crate::quiverlab::{ade_quiver, cartan_matrix};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn a(n: u64) -> Quiver {
        ade_quiver(AdeType::A(n)).unwrap()
    }

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    /// The `(1,1)` representation of `A_2` with identity arrow map.
    fn interval() -> Representation {
        Representation::new(a(2), vec![1, 1], vec![QMatrix::from_i64(1, 1, &[1])]).unwrap()
    }

    #[test]
    fn projectives_of_a2() {
        let p0 = Representation::projective(&a(2), 0).unwrap();
        assert_eq!(p0, Representation::simple(&a(2), 0).unwrap());
        assert_eq!(Representation::projective(&a(2), 1).unwrap(), interval());
    }

    #[test]
    fn hom_examples() {
        let (s0, s1) = (Representation::simple(&a(2), 0).unwrap(), Representation::simple(&a(2), 1).unwrap());
        assert_eq!(rep_hom(&s0, &s0).unwrap().dim, 1);
        assert_eq!(rep_hom(&interval(), &s1).unwrap().dim, 1);
        assert_eq!(rep_hom(&s0, &s1).unwrap().dim, 0);
        assert_eq!(rep_hom(&s0, &interval()).unwrap().dim, 1);
        assert!(rep_hom(&s0, &Representation::simple(&a(3), 0).unwrap()).is_err());
    }

    #[test]
    fn ext_examples() {
        let (s0, s1) = (Representation::simple(&a(2), 0).unwrap(), Representation::simple(&a(2), 1).unwrap());
        assert_eq!(ext1(&s1, &s0).unwrap(), 1);
        assert_eq!(ext1(&s0, &s1).unwrap(), 0);
        let basis = ext1_basis(&s1, &s0).unwrap();
        assert_eq!(basis.len(), 1);
        assert!(!ext1_is_zero(&s1, &s0, &basis[0]).unwrap());
        for v in 0..2 {
            let p = Representation::projective(&a(2), v).unwrap();
            assert_eq!(ext1(&p, &s0).unwrap() + ext1(&p, &s1).unwrap(), 0);
        }
    }

    #[test]
    fn shape_validation() {
        let bad = Representation::new(a(2), vec![1, 2], vec![QMatrix::from_i64(1, 1, &[1])]);
        assert!(matches!(bad, Err(QuiverError::Shape { .. })));
        assert!(Representation::new(a(2), vec![1], vec![]).is_err());
    }

    #[test]
    fn split_single_term() {
        let c = ComplexOfReps { start: 0, terms: vec![interval()], differentials: vec![] };
        assert_eq!(split_complex(&c).unwrap(), vec![(interval(), 0)]);
    }

    #[test]
    fn split_projective_cover() {
        // P -> S_1 in degrees -1, 0, the projective cover of the top
        let s1 = Representation::simple(&a(2), 1).unwrap();
        let d = vec![QMatrix::zeros(0, 1), QMatrix::from_i64(1, 1, &[1])];
        let c = ComplexOfReps { start: -1, terms: vec![interval(), s1], differentials: vec![d] };
        let out = split_complex(&c).unwrap();
        assert_eq!(out, vec![(Representation::simple(&a(2), 0).unwrap(), 1)]);
        // Σ(-1)^i dim C^i = Σ(-1)^i dim H^i, vertex by vertex
        assert_eq!(out[0].0.dims(), &[1, 0]);
    }

    #[test]
    fn split_identity_is_acyclic() {
        let x = interval();
        let id = vec![QMatrix::identity(1), QMatrix::identity(1)];
        let c = ComplexOfReps { start: 0, terms: vec![x.clone(), x], differentials: vec![id] };
        assert!(split_complex(&c).unwrap().is_empty());
    }

    #[test]
    fn split_rejects_bad_differentials() {
        let x = interval();
        let not_a_map = vec![QMatrix::identity(1), QMatrix::zeros(1, 1)];
        let c = ComplexOfReps { start: 0, terms: vec![x.clone(), x.clone()], differentials: vec![not_a_map] };
        assert!(matches!(split_complex(&c), Err(QuiverError::NotAMorphism(0))));
        let id = vec![QMatrix::identity(1), QMatrix::identity(1)];
        let c = ComplexOfReps { start: 0, terms: vec![x.clone(), x.clone(), x], differentials: vec![id.clone(), id] };
        assert!(matches!(split_complex(&c), Err(QuiverError::NotSquareZero(0, 1))));
    }

    fn random_rep(n: u64) -> impl Strategy<Value = Representation> {
        let quiver = a(n);
        prop::collection::vec(0usize..=3, n as usize).prop_flat_map(move |dims| {
            let quiver = quiver.clone();
            let shapes: Vec<(usize, usize)> = quiver.arrows().iter().map(|&(s, t)| (dims[s], dims[t])).collect();
            let entries: Vec<_> = shapes.iter().map(|&(r, c)| prop::collection::vec(-2i64..=2, r * c)).collect();
            (Just(dims), Just(shapes), entries).prop_map(move |(dims, shapes, entries)| {
                let maps = shapes.iter().zip(&entries).map(|(&(r, c), e)| QMatrix::from_i64(r, c, e)).collect();
                Representation::new(quiver.clone(), dims, maps).unwrap()
            })
        })
    }

    fn pair() -> impl Strategy<Value = (Representation, Representation)> {
        (1u64..=4).prop_flat_map(|n| (random_rep(n), random_rep(n)))
    }

    fn euler(c: &QMatrix, x: &[usize], y: &[usize]) -> BigRational {
        let inv = c.transpose().inverse().unwrap();
        let xs: Vec<BigRational> = x.iter().map(|&v| q(v as i64)).collect();
        let ys: Vec<BigRational> = y.iter().map(|&v| q(v as i64)).collect();
        xs.iter().zip(inv.apply(&ys)).map(|(a, b)| a * b).sum()
    }

    proptest! {
        #[test]
        fn euler_form_identity((m, n) in pair()) {
            let hom = rep_hom(&m, &n).unwrap().dim as i64;
            let ext = ext1(&m, &n).unwrap() as i64;
            let c = QMatrix::from_int(&cartan_matrix(m.quiver()));
            prop_assert_eq!(q(hom - ext), euler(&c, m.dims(), n.dims()));
        }

        #[test]
        fn hom_basis_elements_are_morphisms((m, n) in pair()) {
            for f in rep_hom(&m, &n).unwrap().basis {
                prop_assert!(m.is_morphism_to(&n, &f));
            }
            let basis = ext1_basis(&m, &n).unwrap();
            prop_assert_eq!(basis.len(), ext1(&m, &n).unwrap());
            for xi in &basis {
                prop_assert!(!ext1_is_zero(&m, &n, xi).unwrap());
            }
        }

        #[test]
        fn split_preserves_euler_characteristic(m in random_rep(3)) {
            // the cone of a random endomorphism, as a two-term complex
            let homs = rep_hom(&m, &m).unwrap().basis;
            prop_assume!(!homs.is_empty());
            let f = homs.last().unwrap().clone();
            let c = ComplexOfReps { start: 0, terms: vec![m.clone(), m.clone()], differentials: vec![f] };
            let out = split_complex(&c).unwrap();
            for v in 0..3 {
                let lhs = 0i64;
                let rhs: i64 = out.iter().map(|(h, s)| if s % 2 == 0 { h.dims()[v] as i64 } else { -(h.dims()[v] as i64) }).sum();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
