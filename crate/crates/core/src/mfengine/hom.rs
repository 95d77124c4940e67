//! Strand cohomology of the morphism complex `Hom(E, F)`.
//!
//! `Hom^{2l}` is `Hom(E_-1, F_-1(ld)) ⊕ Hom(E_0, F_0(ld))` and `Hom^{2l+1}`
//! is `Hom(E_-1, F_0(ld)) ⊕ Hom(E_0, F_-1((l+1)d))`, all in degree zero.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Exponents, PolyMatrix};
use super::{standard_objects, Factorization, GradedFreeModule, MfError, MfRing};
use crate::abgroup::GroupElement;
use crate::decompose::AdeType;
use crate::intmat::IntMatrix;
use crate::linalg::{sparse_rank, SparseEchelon, SparseVec};
use crate::quiverlab::{ade_quiver, cartan_matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    /// Every strand outside these `l` ranges (even, odd) is zero.
    Certified {
        even: Option<(i64, i64)>,
        odd: Option<(i64, i64)>,
    },
    Windowed(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandCohomology {
    pub window: i64,
    /// `(ε, l) -> dim H^{2l+ε}(Hom(E, F))` for `|l| <= window`.
    pub table: BTreeMap<(u8, i64), usize>,
    pub certification: Certification,
}

impl StrandCohomology {
    pub fn get(&self, epsilon: u8, l: i64) -> usize {
        self.table.get(&(epsilon, l)).copied().unwrap_or(0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = ((u8, i64), usize)> + '_ {
        self.table.iter().filter(|(_, v)| **v > 0).map(|(k, v)| (*k, *v))
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero().next().is_none()
    }

    pub fn is_certified(&self) -> bool {
        matches!(self.certification, Certification::Certified { .. })
    }
}

struct Cell {
    monomials: Vec<Exponents>,
    offset: usize,
}

/// Degree-zero maps `S -> T(k)` as one block of a strand.
struct Block {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
}

struct Space {
    blocks: Vec<Block>,
    dim: usize,
}

struct MonomialCache<'a> {
    ring: &'a MfRing,
    memo: HashMap<GroupElement, Vec<Exponents>>,
}

impl MonomialCache<'_> {
    fn get(&mut self, degree: &GroupElement) -> Vec<Exponents> {
        if let Some(v) = self.memo.get(degree) {
            return v.clone();
        }
        let v = self.ring.monomials_of_degree(degree);
        self.memo.insert(degree.clone(), v.clone());
        v
    }
}

fn space(cache: &mut MonomialCache, parts: &[(&GradedFreeModule, &GradedFreeModule, GroupElement)]) -> Space {
    let g = cache.ring.grading().group().clone();
    let mut dim = 0;
    let mut blocks = Vec::new();
    for (src, tgt, k) in parts {
        let mut cells = Vec::new();
        for t in &tgt.generators {
            for s in &src.generators {
                let monomials = cache.get(&g.sub(&g.add(s, k), t));
                let offset = dim;
                dim += monomials.len();
                cells.push(Cell { monomials, offset });
            }
        }
        blocks.push(Block { rows: tgt.rank(), cols: src.rank(), cells });
    }
    Space { blocks, dim }
}

enum Side<'a> {
    /// `X -> X * A`
    Right(&'a PolyMatrix),
    /// `X -> B * X`
    Left(&'a PolyMatrix),
}

struct Term<'a> {
    from: usize,
    to: usize,
    side: Side<'a>,
    sign: i64,
}

fn add_monomial_times(
    out: &mut SparseVec,
    target: &Space,
    block: usize,
    (i, j): (usize, usize),
    m: &[u32],
    p: &super::poly::Poly,
    sign: &BigRational,
) {
    let b = &target.blocks[block];
    let cell = &b.cells[i * b.cols + j];
    for (e, c) in p.terms() {
        let prod: Exponents = e.iter().zip(m).map(|(a, b)| a + b).collect();
        let idx = cell.monomials.binary_search(&prod).expect("products stay homogeneous");
        let entry = out.entry(cell.offset + idx).or_insert_with(BigRational::zero);
        *entry += c * sign;
        if entry.is_zero() {
            out.remove(&(cell.offset + idx));
        }
    }
}

fn differential_rank(source: &Space, target: &Space, terms: &[Term]) -> usize {
    if source.dim == 0 || target.dim == 0 {
        return 0;
    }
    let mut columns = Vec::with_capacity(source.dim);
    for (bi, block) in source.blocks.iter().enumerate() {
        for r in 0..block.rows {
            for c in 0..block.cols {
                for m in &block.cells[r * block.cols + c].monomials {
                    let mut out = SparseVec::new();
                    for t in terms.iter().filter(|t| t.from == bi) {
                        let sign = BigRational::from_integer(BigInt::from(t.sign));
                        match t.side {
                            Side::Right(a) => {
                                for j in 0..a.cols() {
                                    add_monomial_times(&mut out, target, t.to, (r, j), m, a.get(c, j), &sign);
                                }
                            }
                            Side::Left(b) => {
                                for i in 0..b.rows() {
                                    add_monomial_times(&mut out, target, t.to, (i, c), m, b.get(i, r), &sign);
                                }
                            }
                        }
                    }
                    columns.push(out);
                }
            }
        }
    }
    sparse_rank(columns)
}

fn check_same_ring(e: &Factorization, f: &Factorization) -> Result<(), MfError> {
    if e.ring().same_as(f.ring()) {
        Ok(())
    } else {
        Err(MfError::RingMismatch)
    }
}

pub fn strand_cohomology(e: &Factorization, f: &Factorization, window: i64) -> Result<StrandCohomology, MfError> {
    check_same_ring(e, f)?;
    let ring = e.ring();
    let g = ring.grading().group();
    let d = ring.potential_degree();
    let mut cache = MonomialCache { ring, memo: HashMap::new() };
    let shift = |l: i64| g.scale(&BigInt::from(l), d);

    let even = |cache: &mut MonomialCache, l: i64| {
        space(cache, &[(&e.e_minus, &f.e_minus, shift(l)), (&e.e_zero, &f.e_zero, shift(l))])
    };
    let odd = |cache: &mut MonomialCache, l: i64| {
        space(cache, &[(&e.e_minus, &f.e_zero, shift(l)), (&e.e_zero, &f.e_minus, shift(l + 1))])
    };
    // even (P, Q) -> (Q φ0E - φ0F P, P φ-1E - φ-1F Q)
    let even_terms = [
        Term { from: 1, to: 0, side: Side::Right(&e.phi0), sign: 1 },
        Term { from: 0, to: 0, side: Side::Left(&f.phi0), sign: -1 },
        Term { from: 0, to: 1, side: Side::Right(&e.phi_minus), sign: 1 },
        Term { from: 1, to: 1, side: Side::Left(&f.phi_minus), sign: -1 },
    ];
    // odd (G, H) -> (H φ0E + φ-1F G, G φ-1E + φ0F H)
    let odd_terms = [
        Term { from: 1, to: 0, side: Side::Right(&e.phi0), sign: 1 },
        Term { from: 0, to: 0, side: Side::Left(&f.phi_minus), sign: 1 },
        Term { from: 0, to: 1, side: Side::Right(&e.phi_minus), sign: 1 },
        Term { from: 1, to: 1, side: Side::Left(&f.phi0), sign: 1 },
    ];

    let mut evens = BTreeMap::new();
    let mut odds = BTreeMap::new();
    for l in -window - 1..=window + 1 {
        evens.insert(l, even(&mut cache, l));
        odds.insert(l, odd(&mut cache, l));
    }
    let mut even_rank = BTreeMap::new();
    let mut odd_rank = BTreeMap::new();
    for l in -window - 1..=window {
        even_rank.insert(l, differential_rank(&evens[&l], &odds[&l], &even_terms));
        odd_rank.insert(l, differential_rank(&odds[&l], &evens[&(l + 1)], &odd_terms));
    }
    let mut table = BTreeMap::new();
    for l in -window..=window {
        table.insert((0, l), evens[&l].dim - even_rank[&l] - odd_rank[&(l - 1)]);
        table.insert((1, l), odds[&l].dim - odd_rank[&l] - even_rank[&l]);
    }

    let certification = match support(e, f) {
        Some((ev, od)) if within(ev, window) && within(od, window) => Certification::Certified { even: ev, odd: od },
        _ => Certification::Windowed(window),
    };
    Ok(StrandCohomology { window, table, certification })
}

fn within(r: Option<(i64, i64)>, window: i64) -> bool {
    r.is_none_or(|(a, b)| -window <= a && b <= window)
}

/// Range of integer degrees where `coker(phi)` can be nonzero, `None` if it
/// is not of finite length, `Some(None)` if it vanishes.
fn coker_span(
    ring: &MfRing,
    source: &GradedFreeModule,
    target: &GradedFreeModule,
    phi: &PolyMatrix,
) -> Option<Option<(i64, i64)>> {
    if target.rank() == 0 {
        return Some(None);
    }
    let g = ring.grading().group();
    let d = ring.d_int();
    let mut cache = MonomialCache { ring, memo: HashMap::new() };
    let mut top_extra = 0;
    for (i, &a) in ring.var_degrees().iter().enumerate() {
        let cap = (target.rank() as i64) * ((d + a - 1) / a) + 1;
        let mut needed = None;
        'power: for n in 0..=cap {
            for (r, gen) in target.generators.iter().enumerate() {
                let deg = g.add(gen, &g.scale(&BigInt::from(n), &ring.spec().generator_degrees()[i]));
                if !power_in_image(&mut cache, source, target, phi, &deg, r, i, n as u32) {
                    continue 'power;
                }
            }
            needed = Some(n);
            break;
        }
        let n = needed?;
        top_extra += (n - 1).max(0) * a;
        if n == 0 {
            return Some(None);
        }
    }
    let degs: Vec<i64> = target.generators.iter().map(|x| ring.int_degree(x)).collect();
    let lo = *degs.iter().min().expect("nonempty");
    let hi = *degs.iter().max().expect("nonempty") + top_extra;
    Some(Some((lo, hi)))
}

#[allow(clippy::too_many_arguments)]
fn power_in_image(
    cache: &mut MonomialCache,
    source: &GradedFreeModule,
    target: &GradedFreeModule,
    phi: &PolyMatrix,
    degree: &GroupElement,
    row: usize,
    var: usize,
    n: u32,
) -> bool {
    let g = cache.ring.grading().group().clone();
    let nv = cache.ring.num_vars();
    let offsets: Vec<(Vec<Exponents>, usize)> = {
        let mut off = 0;
        target
            .generators
            .iter()
            .map(|t| {
                let m = cache.get(&g.sub(degree, t));
                let o = off;
                off += m.len();
                (m, o)
            })
            .collect()
    };
    let coord = |r: usize, e: &Exponents| -> usize {
        let (ms, o) = &offsets[r];
        o + ms.binary_search(e).expect("homogeneous image")
    };
    let mut span = SparseEchelon::new();
    for (c, s) in source.generators.iter().enumerate() {
        for m in cache.get(&g.sub(degree, s)) {
            let mut v = SparseVec::new();
            for r in 0..target.rank() {
                for (e, coef) in phi.get(r, c).terms() {
                    let prod: Exponents = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                    let k = coord(r, &prod);
                    let entry = v.entry(k).or_insert_with(BigRational::zero);
                    *entry += coef;
                    if entry.is_zero() {
                        v.remove(&k);
                    }
                }
            }
            span.insert(v);
        }
    }
    let mut mono = vec![0u32; nv];
    mono[var] = n;
    let mut target_vec = SparseVec::new();
    target_vec.insert(coord(row, &mono), BigRational::one());
    span.contains(target_vec)
}

pub type Support = (Option<(i64, i64)>, Option<(i64, i64)>);

/// `l` ranges outside which the even and odd strands of `Hom(E, F)` vanish,
/// when all relevant cokernels have finite length.
pub fn support(e: &Factorization, f: &Factorization) -> Option<Support> {
    let ring = e.ring();
    coker_span(ring, &e.e_minus, &e.e_zero, &e.phi0)?;
    let dd = ring.d_int();
    let e_degs: Vec<i64> = e.e_zero.generators.iter().map(|x| ring.int_degree(x)).collect();
    let range = |span: Option<(i64, i64)>| -> Option<(i64, i64)> {
        let (lo, hi) = span?;
        let emin = *e_degs.iter().min()?;
        let emax = *e_degs.iter().max()?;
        let (blo, bhi) = (lo - emax, hi - emin);
        let (llo, lhi) = (blo.div_euclid(dd) + i64::from(blo.rem_euclid(dd) != 0), bhi.div_euclid(dd));
        (llo <= lhi).then_some((llo, lhi))
    };
    let fe = coker_span(ring, &f.e_minus, &f.e_zero, &f.phi0)?;
    let f1 = f.shift_once();
    let fo = coker_span(ring, &f1.e_minus, &f1.e_zero, &f1.phi0)?;
    Some((range(fe), range(fo)))
}

/// Window that covers the certified support, when there is one.
pub fn certified_window(e: &Factorization, f: &Factorization) -> Option<i64> {
    let (ev, od) = support(e, f)?;
    let w = [ev, od].iter().flatten().flat_map(|&(a, b)| [a.abs(), b.abs()]).max().unwrap_or(0);
    Some(w.max(1))
}

/// `H^0(End E)` is one-dimensional and everything else vanishes, with certified support.
pub fn is_exceptional(e: &Factorization) -> Result<bool, MfError> {
    let Some(w) = certified_window(e, e) else { return Ok(false) };
    let s = strand_cohomology(e, e, w)?;
    Ok(s.is_certified() && s.nonzero().collect::<Vec<_>>() == vec![((0, 0), 1)])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoReport {
    pub d: i64,
    pub hom_dims: Vec<Vec<usize>>,
    pub cartan: IntMatrix,
    /// `hom_dims[perm[i]][perm[j]]` equals the Cartan entry `(i, j)`, or `(j, i)` when transposed.
    pub permutation: Vec<usize>,
    pub transposed: bool,
    pub certified: bool,
}

pub fn endo_algebra_check(d: i64) -> Result<EndoReport, MfError> {
    let objs = standard_objects(d)?;
    let n = objs.len();
    let cartan = cartan_matrix(&ade_quiver(AdeType::A(n as u64)).expect("A_n quiver"));
    let mut hom_dims = vec![vec![0; n]; n];
    let mut certified = true;
    let mut extra = Vec::new();
    for (i, a) in objs.iter().enumerate() {
        for (j, b) in objs.iter().enumerate() {
            let w = certified_window(a, b).unwrap_or(2);
            let s = strand_cohomology(a, b, w)?;
            certified &= s.is_certified();
            hom_dims[i][j] = s.get(0, 0);
            extra.extend(s.nonzero().filter(|(k, _)| *k != (0, 0)).map(|(k, v)| (i + 1, j + 1, k, v)));
        }
    }
    if !extra.is_empty() {
        let desc: Vec<String> =
            extra.iter().map(|(i, j, (e, l), v)| format!("Hom(E{i},E{j}) strand ({e},{l}) = {v}")).collect();
        return Err(MfError::EndoMismatch(desc.join("; ")));
    }
    if !certified {
        return Err(MfError::EndoMismatch("vanishing not certified".into()));
    }
    let c = |i: usize, j: usize| cartan[(i, j)].clone();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        for transposed in [false, true] {
            let ok = (0..n).all(|i| {
                (0..n).all(|j| {
                    let want = if transposed { c(j, i) } else { c(i, j) };
                    BigInt::from(hom_dims[perm[i]][perm[j]]) == want
                })
            });
            if ok {
                return Ok(EndoReport { d, hom_dims, cartan, permutation: perm, transposed, certified });
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let rows: Vec<String> = hom_dims.iter().map(|r| format!("{r:?}")).collect();
    Err(MfError::EndoMismatch(format!(
        "hom dims [{}] match no relabelling of the A{} Cartan matrix",
        rows.join(", "),
        n
    )))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
