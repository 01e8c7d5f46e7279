//! Locally finite ∞-modules over a dg Lie algebra and their ∞-morphisms.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::ce::{word_degree, Ce, WeightGradedMap, Word};
use crate::dgla::DgLie;
use crate::error::{Error, Result, Violation};
use crate::graded::{cohomology, GradedSpace, LinearMap};
use crate::scalar::{fmt_q, one, Q};

/// A graded space `M` with structure maps `d_k : M → C^k(g, M)` of degree +1
/// whose total differential squares to zero.
#[derive(Clone, Debug)]
pub struct LfModule {
    alg: Arc<DgLie>,
    space: GradedSpace,
    structure: WeightGradedMap,
}

impl PartialEq for LfModule {
    fn eq(&self, other: &Self) -> bool {
        *self.alg == *other.alg && self.space == other.space && self.structure == other.structure
    }
}

impl LfModule {
    /// Validates shape and `d_tot² = 0`.
    pub fn new(alg: Arc<DgLie>, structure: WeightGradedMap) -> Result<Arc<LfModule>> {
        let m = LfModule::unchecked(alg, structure)?;
        m.verify_square_zero()?;
        Ok(Arc::new(m))
    }

    pub(crate) fn unchecked(alg: Arc<DgLie>, mut structure: WeightGradedMap) -> Result<LfModule> {
        if structure.source != structure.target || structure.shift != 1 {
            return Err(Error::DomainMismatch(
                "module structure must be a degree +1 map M → C(g, M)".into(),
            ));
        }
        structure.check_shape(alg.gd())?;
        structure.trim();
        Ok(LfModule {
            space: structure.source.clone(),
            alg,
            structure,
        })
    }

    /// The module with all structure maps zero.
    pub fn trivial(alg: Arc<DgLie>, space: &GradedSpace) -> Arc<LfModule> {
        Arc::new(LfModule {
            structure: WeightGradedMap::zero(space, space, 1),
            space: space.clone(),
            alg,
        })
    }

    /// A module whose only structure map is the differential `d₀`.
    pub fn from_complex(alg: Arc<DgLie>, d: &LinearMap) -> Result<Arc<LfModule>> {
        LfModule::new(alg, WeightGradedMap::strict(d))
    }

    pub fn algebra(&self) -> &Arc<DgLie> {
        &self.alg
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn structure(&self) -> &WeightGradedMap {
        &self.structure
    }

    pub fn gd(&self) -> &[i64] {
        self.alg.gd()
    }

    /// `d₀` as a linear map.
    pub fn d0(&self) -> LinearMap {
        self.structure.leading()
    }

    /// `d_tot = d_CE ⊗ id + Σ_k id ⊗ d_k`.
    pub fn d_tot(&self, e: &Ce) -> Ce {
        let mut out = self.alg.ce_differential(e);
        out.add_assign_scaled(&self.structure.extend(e, self.alg.gd()), &one());
        out
    }

    /// `Σ_{k ≥ 1} d_k(m)` for a basis element.
    pub fn higher_part(&self, i: usize) -> Ce {
        let mut out = Ce::zero();
        for comp in self.structure.comps.iter().skip(1) {
            out.add_assign_scaled(&comp[i], &one());
        }
        out
    }

    pub fn render(&self, e: &Ce) -> String {
        self.alg.render(e, &self.space)
    }

    /// `d_CE² = 0` on generators and `d_tot² = 0` on every basis element.
    pub fn verify_square_zero(&self) -> std::result::Result<(), Violation> {
        self.alg.verify_ce_square_zero()?;
        for i in 0..self.dim() {
            let dd = self.d_tot(&self.d_tot(&Ce::basis(i)));
            if let Some((w, t, c)) = dd.first_term() {
                return Err(Violation::new(
                    "d_tot² = 0",
                    format!(
                        "d_tot²({}) has coefficient {} on {} ⊗ {}",
                        self.space.name(i),
                        fmt_q(&c),
                        self.alg.word_name(&w),
                        self.space.name(t)
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Cohomology of `(M, d₀)` in every degree.
    pub fn tangent_cohomology(&self) -> Result<Vec<crate::graded::Cohomology>> {
        let d = self.d0();
        self.space
            .degree_set()
            .into_iter()
            .map(|n| cohomology(&d, &d, n))
            .collect()
    }

    /// Direct sum (product) of modules over the same algebra.
    pub fn direct_sum(a: &LfModule, sa: &str, b: &LfModule, sb: &str) -> Result<Arc<LfModule>> {
        if *a.alg != *b.alg {
            return Err(Error::DomainMismatch(
                "modules over different algebras".into(),
            ));
        }
        let space = GradedSpace::direct_sum(&[(&a.space, sa, 0), (&b.space, sb, 0)])?;
        let off = a.dim();
        let mut images = Vec::new();
        for i in 0..a.dim() {
            images.push(a.structure.image(i));
        }
        for i in 0..b.dim() {
            images.push(b.structure.image(i).map_targets(|t| Some(t + off)));
        }
        LfModule::new(
            a.alg.clone(),
            WeightGradedMap::from_images(&space, &space, 1, &images),
        )
    }
}

impl LfModule {
    /// `M[k]` with the shift written on the right: `D(ω ⊗ m[k]) = (D(ω ⊗ m))[k]`,
    /// so the structure maps are unchanged.
    pub fn shifted(&self, k: i64, suffix: &str) -> Arc<LfModule> {
        let space = self.space.shifted(k, suffix);
        let images: Vec<Ce> = (0..self.dim()).map(|i| self.structure.image(i)).collect();
        Arc::new(LfModule {
            structure: WeightGradedMap::from_images(&space, &space, 1, &images),
            space,
            alg: self.alg.clone(),
        })
    }

    /// `A ⊗ B` with `D(a ⊗ b) = D(a) ⊗ b + (-1)^{|a|} a ⊗ D(b)`, where `a`
    /// moves past the words of `D(b)` with the Koszul sign.
    /// Basis `a_i ⊗ b_j` has index `i · dim B + j`.
    pub fn tensor(a: &LfModule, b: &LfModule) -> Result<Arc<LfModule>> {
        if *a.alg != *b.alg {
            return Err(Error::DomainMismatch(
                "modules over different algebras".into(),
            ));
        }
        let gd = a.gd();
        let nb = b.dim();
        let mut basis = Vec::new();
        for i in 0..a.dim() {
            for j in 0..nb {
                basis.push((
                    format!("{}⊗{}", a.space.name(i), b.space.name(j)),
                    a.space.degree(i) + b.space.degree(j),
                ));
            }
        }
        let space = GradedSpace::new(basis)?;
        let mut images = Vec::new();
        for i in 0..a.dim() {
            let da = a.structure.image(i);
            let ai = a.space.degree(i);
            for j in 0..nb {
                let mut e = da.map_targets(|t| Some(t * nb + j));
                for (w, t, c) in b.structure.image(j).terms() {
                    let s = crate::scalar::sign(ai + ai * word_degree(w, gd));
                    e.add_term(w.clone(), i * nb + t, c * s);
                }
                images.push(e);
            }
        }
        LfModule::new(
            a.alg.clone(),
            WeightGradedMap::from_images(&space, &space, 1, &images),
        )
    }
}

/// The adjoint module: `d₀ = d`, `d₁(m) = Σ_x ξ_x ⊗ [x, m]`.
pub fn adjoint_module(g: &Arc<DgLie>) -> Arc<LfModule> {
    let mut s = WeightGradedMap::strict(g.differential());
    s.ensure_weight(1);
    for m in 0..g.dim() {
        for x in 0..g.dim() {
            for (z, c) in g.bracket_basis(x, m) {
                s.comps[1][m].add_term(vec![x as u32], *z, c.clone());
            }
        }
    }
    s.trim();
    LfModule::new(g.clone(), s).expect("the adjoint module of a dg Lie algebra is square-zero")
}

/// An ∞-morphism `f = Σ f_k : M ⇝ N` of degree 0.
#[derive(Clone, Debug)]
pub struct InftyMorphism {
    pub source: Arc<LfModule>,
    pub target: Arc<LfModule>,
    pub comps: WeightGradedMap,
}

impl InftyMorphism {
    pub fn new(
        source: Arc<LfModule>,
        target: Arc<LfModule>,
        comps: WeightGradedMap,
    ) -> Result<Self> {
        let f = InftyMorphism::unchecked(source, target, comps)?;
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn unchecked(
        source: Arc<LfModule>,
        target: Arc<LfModule>,
        mut comps: WeightGradedMap,
    ) -> Result<Self> {
        if *source.alg != *target.alg {
            return Err(Error::DomainMismatch(
                "modules over different algebras".into(),
            ));
        }
        if comps.source != source.space || comps.target != target.space || comps.shift != 0 {
            return Err(Error::DomainMismatch(
                "morphism components must map M → C(g, N) in degree 0".into(),
            ));
        }
        comps.check_shape(source.gd())?;
        comps.trim();
        Ok(InftyMorphism {
            source,
            target,
            comps,
        })
    }

    pub fn strict(source: Arc<LfModule>, target: Arc<LfModule>, f0: &LinearMap) -> Result<Self> {
        InftyMorphism::new(source, target, WeightGradedMap::strict(f0))
    }

    pub fn identity(m: &Arc<LfModule>) -> Self {
        InftyMorphism {
            source: m.clone(),
            target: m.clone(),
            comps: WeightGradedMap::strict(&LinearMap::identity(&m.space)),
        }
    }

    pub fn zero(source: &Arc<LfModule>, target: &Arc<LfModule>) -> Self {
        InftyMorphism {
            source: source.clone(),
            target: target.clone(),
            comps: WeightGradedMap::zero(&source.space, &target.space, 0),
        }
    }

    pub fn gd(&self) -> &[i64] {
        self.source.gd()
    }

    /// `F = id_{C(g)} ⊗ f` on any cochain valued in the source.
    pub fn extend(&self, e: &Ce) -> Ce {
        self.comps.extend(e, self.source.gd())
    }

    pub fn leading(&self) -> LinearMap {
        self.comps.leading()
    }

    pub fn is_strict(&self) -> bool {
        self.comps
            .comps
            .iter()
            .skip(1)
            .all(|c| c.iter().all(Ce::is_zero))
    }

    /// `F ∘ d_tot^M = d_tot^N ∘ F` on every source basis element.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        for i in 0..self.source.dim() {
            let lhs = self.extend(&self.source.d_tot(&Ce::basis(i)));
            let rhs = self.target.d_tot(&self.comps.image(i));
            let diff = lhs.sub(&rhs);
            if let Some((w, t, c)) = diff.first_term() {
                return Err(Violation::new(
                    "F ∘ d_tot = d_tot ∘ F",
                    format!(
                        "on {}: discrepancy {} on {} ⊗ {}",
                        self.source.space.name(i),
                        fmt_q(&c),
                        self.source.alg.word_name(&w),
                        self.target.space.name(t)
                    ),
                ));
            }
        }
        Ok(())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &InftyMorphism) -> Result<InftyMorphism> {
        if *inner.target != *self.source {
            return Err(Error::DomainMismatch(
                "composable morphisms required".into(),
            ));
        }
        let comps = self.comps.compose(&inner.comps, self.gd())?;
        InftyMorphism::unchecked(inner.source.clone(), self.target.clone(), comps)
    }

    pub fn sub(&self, other: &InftyMorphism) -> Result<WeightGradedMap> {
        self.comps.add(&other.comps.scale(&-one()))
    }

    /// Weak equivalence / fibration / cofibration flags from the leading term.
    pub fn classify(&self) -> Result<Classification> {
        let f0 = self.leading();
        let fibration = f0.is_surjective();
        let cofibration = f0.is_injective();
        let weak_equivalence = is_quasi_isomorphism(&f0, &self.source.d0(), &self.target.d0())?;
        Ok(Classification {
            weak_equivalence,
            fibration,
            cofibration,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub weak_equivalence: bool,
    pub fibration: bool,
    pub cofibration: bool,
}

/// Whether a cochain map induces an isomorphism on cohomology in every degree.
pub fn is_quasi_isomorphism(f: &LinearMap, dm: &LinearMap, dn: &LinearMap) -> Result<bool> {
    let mut degrees: Vec<i64> = f.dom.degree_set();
    degrees.extend(f.cod.degree_set());
    degrees.sort();
    degrees.dedup();
    for n in degrees {
        let hm = cohomology(dm, dm, n)?;
        let hn = cohomology(dn, dn, n)?;
        if hm.dimension != hn.dimension {
            return Ok(false);
        }
        // images of representatives must stay independent modulo boundaries
        let mut rows = hn.boundaries().to_vec();
        let base = crate::graded::span_rank(&rows);
        for r in &hm.representatives {
            rows.push(f.apply(r));
        }
        if crate::graded::span_rank(&rows) != base + hm.dimension {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All words of weight `k` (sorted, no repeated odd generator).
pub fn words_of_weight(gd: &[i64], k: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(gd: &[i64], k: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Word>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for g in start..gd.len() {
            let odd = gd[g].rem_euclid(2) == 1;
            cur.push(g as u32);
            go(gd, k, if odd { g + 1 } else { g }, cur, out);
            cur.pop();
        }
    }
    go(gd, k, 0, &mut cur, &mut out);
    out
}

/// Largest weight with nonzero cochains, if finite (every generator odd).
pub fn max_weight(gd: &[i64]) -> Option<usize> {
    if gd.iter().all(|d| d.rem_euclid(2) == 1) {
        Some(gd.len())
    } else {
        None
    }
}

/// Degree of a basis word.
pub fn wdeg(w: &[u32], gd: &[i64]) -> i64 {
    word_degree(w, gd)
}

/// Flattens a list of cochains into coordinates keyed by `(slot, word, target)`.
pub(crate) fn flatten(
    cs: &[Ce],
    keys: &mut BTreeMap<(usize, Word, usize), usize>,
) -> Vec<(usize, Q)> {
    let mut out = Vec::new();
    for (slot, c) in cs.iter().enumerate() {
        for (w, t, q) in c.terms() {
            let n = keys.len();
            let idx = *keys.entry((slot, w.clone(), t)).or_insert(n);
            out.push((idx, q.clone()));
        }
    }
    out
}

/// Solves `base + Σ_u x_u column(u) = 0`.
pub(crate) fn solve_linear(
    unknowns: usize,
    base: &[Ce],
    column: impl Fn(usize) -> Vec<Ce>,
) -> Option<Vec<Q>> {
    let mut keys = BTreeMap::new();
    let base = flatten(base, &mut keys);
    let mut cols = Vec::with_capacity(unknowns);
    for u in 0..unknowns {
        let mut col: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, q) in flatten(&column(u), &mut keys) {
            *col.entry(i).or_insert_with(Q::zero) += q;
        }
        cols.push(col);
    }
    let rows = keys.len();
    let mut a = crate::graded::Matrix::zeros(rows, unknowns);
    for (u, col) in cols.iter().enumerate() {
        for (i, q) in col {
            if !q.is_zero() {
                a.set(*i, u, q.clone());
            }
        }
    }
    let mut b = vec![Q::zero(); rows];
    for (i, q) in base {
        b[i] -= q;
    }
    if unknowns == 0 {
        return if b.iter().all(Zero::is_zero) {
            Some(Vec::new())
        } else {
            None
        };
    }
    a.solve(&b)
}

/// Unknown layout for a weight-`k` map `source → C^k(g, target)` of degree `shift`.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub slots: Vec<(usize, Word, usize)>,
}

impl Layout {
    pub fn new(
        source: &GradedSpace,
        target: &GradedSpace,
        shift: i64,
        gd: &[i64],
        k: usize,
    ) -> Layout {
        let words = words_of_weight(gd, k);
        let mut slots = Vec::new();
        for i in 0..source.dim() {
            for w in &words {
                let dw = word_degree(w, gd);
                for t in 0..target.dim() {
                    if dw + target.degree(t) == source.degree(i) + shift {
                        slots.push((i, w.clone(), t));
                    }
                }
            }
        }
        Layout { slots }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    /// Per-source-basis images for the coordinate vector `x`.
    pub fn images(&self, x: &[Q], source_dim: usize) -> Vec<Ce> {
        let mut out = vec![Ce::zero(); source_dim];
        for ((i, w, t), c) in self.slots.iter().zip(x) {
            if !c.is_zero() {
                out[*i].add_term(w.clone(), *t, c.clone());
            }
        }
        out
    }
}
