//! Dg Lie algebras given by structure constants, their Chevalley–Eilenberg
//! differential, morphisms with Koszul duals, and tangent cohomology.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::ce::{apply_derivation, contract_vector, mul_words, normalize_word, Ce, Word};
use crate::error::{Error, Result, Violation};
use crate::graded::{cohomology, is_zero_vec, Cohomology, GradedSpace, LinearMap};
use crate::scalar::{fmt_q, is_odd, one, sign, Q};

/// Unvalidated dg Lie data. Structure constants are given only for pairs
/// `i <= j` in basis order; the remaining half follows from antisymmetry.
#[derive(Clone, Debug, PartialEq)]
pub struct DglaData {
    pub space: GradedSpace,
    pub differential: LinearMap,
    pub bracket: BTreeMap<(usize, usize), Vec<(usize, Q)>>,
}

impl DglaData {
    pub fn new(space: GradedSpace) -> Self {
        DglaData {
            differential: LinearMap::zero(&space, &space, 1),
            space,
            bracket: BTreeMap::new(),
        }
    }

    /// Adds `c · z` to `[x, y]` for names with `x <= y` in basis order.
    pub fn set_bracket(&mut self, x: &str, y: &str, z: &str, c: Q) -> Result<()> {
        let (i, j, k) = (
            self.space.require(x)?,
            self.space.require(y)?,
            self.space.require(z)?,
        );
        if i > j {
            return Err(Error::DomainMismatch(format!(
                "bracket [{x},{y}] must be given with the arguments in basis order"
            )));
        }
        let entry = self.bracket.entry((i, j)).or_default();
        match entry.iter_mut().find(|(t, _)| *t == k) {
            Some((_, e)) => *e += c,
            None => entry.push((k, c)),
        }
        entry.retain(|(_, e)| !e.is_zero());
        entry.sort_by_key(|(t, _)| *t);
        if entry.is_empty() {
            self.bracket.remove(&(i, j));
        }
        Ok(())
    }

    pub fn set_differential(&mut self, x: &str, y: &str, c: Q) -> Result<()> {
        let (i, j) = (self.space.require(x)?, self.space.require(y)?);
        self.differential.add_entry(i, j, c)
    }
}

/// A validated finite-dimensional dg Lie algebra.
#[derive(Clone, Debug)]
pub struct DgLie {
    data: DglaData,
    /// `br[x][y]` = sparse `[x, y]`, both orders.
    br: Vec<Vec<Vec<(usize, Q)>>>,
    gd: Vec<i64>,
    gen_names: Vec<String>,
    dce: Vec<Ce>,
}

impl PartialEq for DgLie {
    fn eq(&self, other: &Self) -> bool {
        self.data == other.data
    }
}

impl DgLie {
    /// Validates all axioms; the violation names the first failing pair or triple.
    pub fn new(data: DglaData) -> Result<Arc<DgLie>> {
        let g = DgLie::assemble(data)?;
        g.validate()?;
        Ok(Arc::new(g))
    }

    fn assemble(data: DglaData) -> Result<DgLie> {
        let sp = &data.space;
        let n = sp.dim();
        if data.differential.dom != *sp
            || data.differential.cod != *sp
            || data.differential.shift != 1
        {
            return Err(Error::DomainMismatch(
                "differential must be a degree +1 endomorphism".into(),
            ));
        }
        let mut br = vec![vec![Vec::new(); n]; n];
        for (&(i, j), v) in &data.bracket {
            for (k, _) in v {
                if sp.degree(*k) != sp.degree(i) + sp.degree(j) {
                    return Err(Violation::new(
                        "bracket degree",
                        format!(
                            "[{}, {}] has a component along {}",
                            sp.name(i),
                            sp.name(j),
                            sp.name(*k)
                        ),
                    )
                    .into());
                }
            }
            br[i][j] = v.clone();
            if i != j {
                let s = -sign(sp.degree(i) * sp.degree(j));
                br[j][i] = v.iter().map(|(k, c)| (*k, c * &s)).collect();
            }
        }
        let gd: Vec<i64> = (0..n).map(|i| 1 - sp.degree(i)).collect();
        let gen_names = (0..n).map(|i| format!("ξ{}", sp.name(i))).collect();
        let mut g = DgLie {
            data,
            br,
            gd,
            gen_names,
            dce: Vec::new(),
        };
        g.dce = g.generator_differentials();
        Ok(g)
    }

    pub fn data(&self) -> &DglaData {
        &self.data
    }

    pub fn space(&self) -> &GradedSpace {
        &self.data.space
    }

    pub fn dim(&self) -> usize {
        self.data.space.dim()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.data.space.degree(i)
    }

    /// Degrees of the Chevalley–Eilenberg generators, `1 - |x|`.
    pub fn gd(&self) -> &[i64] {
        &self.gd
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn differential(&self) -> &LinearMap {
        &self.data.differential
    }

    pub fn bracket_basis(&self, x: usize, y: usize) -> &[(usize, Q)] {
        &self.br[x][y]
    }

    /// Bracket of two vectors (bilinear on coordinates).
    pub fn bracket(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (x, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (y, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                for (z, c) in &self.br[x][y] {
                    out[*z] += a * b * c;
                }
            }
        }
        out
    }

    pub fn d_vec(&self, u: &[Q]) -> Vec<Q> {
        self.data.differential.apply(u)
    }

    /// `d_CE ξ_z` for each generator. The linear part is the signed transpose
    /// of `d`: `ι_{x[1]} d_0 ξ_y = (-1)^{|x|} ⟨ξ_y, dx⟩`. The quadratic part is
    /// fixed by `ι_{x[1]} ι_{y[1]} d_1 ξ_z = (-1)^{|y|} ⟨ξ_z, [x, y]⟩`, stored
    /// via the equivalent `ι_{y[1]} ι_{x[1]} d_1 ξ_z = -(-1)^{|x|(|y|+1)} ⟨ξ_z, [x, y]⟩`
    /// (see docs/SIGNS.md).
    fn generator_differentials(&self) -> Vec<Ce> {
        let n = self.dim();
        let sp = &self.data.space;
        let mut out = vec![Ce::zero(); n];
        for ((x, y), c) in self.data.differential.entries() {
            out[*y].add_term(vec![*x as u32], 0, c * sign(sp.degree(*x)));
        }
        for x in 0..n {
            for y in x..n {
                let Some((w, s)) = normalize_word(&[x as u32, y as u32], &self.gd) else {
                    continue;
                };
                let e = Ce::term(w.clone(), 0, s.clone());
                let t =
                    contract_vector(y as u32, &contract_vector(x as u32, &e, &self.gd), &self.gd)
                        .coeff(&[], 0);
                if t.is_zero() {
                    continue;
                }
                for (z, c) in &self.br[x][y] {
                    let target = -sign(sp.degree(x) + sp.degree(x) * sp.degree(y)) * c;
                    out[*z].add_term(w.clone(), 0, target * &s / &t);
                }
            }
        }
        out
    }

    pub fn dce_generator(&self, z: usize) -> &Ce {
        &self.dce[z]
    }

    /// The Chevalley–Eilenberg differential, extended as a degree +1 derivation
    /// to cochains with any target (acting on the word factor).
    pub fn ce_differential(&self, e: &Ce) -> Ce {
        apply_derivation(e, 1, &self.dce, &self.gd)
    }

    pub fn render(&self, e: &Ce, target: &GradedSpace) -> String {
        e.render(&self.gen_names, target)
    }

    fn vec_name(&self, v: &[Q]) -> String {
        let parts: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}·{}", fmt_q(c), self.space().name(i)))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Checks bracket degrees, antisymmetry on the diagonal, `d² = 0`, the
    /// derivation rule on all pairs and the Jacobi identity on all triples.
    pub fn validate(&self) -> Result<()> {
        let sp = &self.data.space;
        let n = self.dim();
        let unit = |i: usize| crate::graded::unit_vec(n, i);
        for x in 0..n {
            if !is_odd(sp.degree(x)) && !self.br[x][x].is_empty() {
                return Err(Violation::new(
                    "graded antisymmetry",
                    format!(
                        "pair ({}, {}): [x,x] must vanish for even x",
                        sp.name(x),
                        sp.name(x)
                    ),
                )
                .into());
            }
        }
        let d = &self.data.differential;
        let dd = d.compose(d)?;
        if let Some(((a, b), c)) = dd.entries().next() {
            return Err(Violation::new(
                "d² = 0",
                format!(
                    "d²({}) has coefficient {} on {}",
                    sp.name(*a),
                    fmt_q(c),
                    sp.name(*b)
                ),
            )
            .into());
        }
        for x in 0..n {
            for y in 0..n {
                let lhs = self.d_vec(&self.bracket(&unit(x), &unit(y)));
                let mut rhs = self.bracket(&self.d_vec(&unit(x)), &unit(y));
                let second = self.bracket(&unit(x), &self.d_vec(&unit(y)));
                let s = sign(sp.degree(x));
                for (r, t) in rhs.iter_mut().zip(second) {
                    *r += &s * t;
                }
                if lhs != rhs {
                    return Err(Violation::new(
                        "d is a derivation of the bracket",
                        format!("pair ({}, {})", sp.name(x), sp.name(y)),
                    )
                    .into());
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = self.bracket(&unit(x), &self.bracket(&unit(y), &unit(z)));
                    let a = self.bracket(&self.bracket(&unit(x), &unit(y)), &unit(z));
                    let b = self.bracket(&unit(y), &self.bracket(&unit(x), &unit(z)));
                    let s = sign(sp.degree(x) * sp.degree(y));
                    let rhs: Vec<Q> = a.iter().zip(&b).map(|(p, q)| p + &s * q).collect();
                    if lhs != rhs {
                        return Err(Violation::new(
                            "Jacobi identity",
                            format!("triple ({}, {}, {})", sp.name(x), sp.name(y), sp.name(z)),
                        )
                        .into());
                    }
                }
            }
        }
        Ok(())
    }

    /// `d_CE²` on every generator; the derivation property makes this sufficient.
    pub fn verify_ce_square_zero(&self) -> std::result::Result<(), Violation> {
        for z in 0..self.dim() {
            let dd = self.ce_differential(&self.dce[z]);
            let first = dd
                .terms()
                .next()
                .map(|(w, _, c)| (self.word_name(w), fmt_q(c)));
            if let Some((w, c)) = first {
                return Err(Violation::new(
                    "d_CE² = 0",
                    format!(
                        "d_CE²({}) has coefficient {c} on word {w}",
                        self.gen_names[z]
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn word_name(&self, w: &[u32]) -> String {
        if w.is_empty() {
            "1".into()
        } else {
            w.iter()
                .map(|&g| self.gen_names[g as usize].clone())
                .collect::<Vec<_>>()
                .join("*")
        }
    }

    /// Cohomology of `(g, d)` in every degree where `g` is nonzero.
    pub fn tangent_cohomology(&self) -> Result<Vec<Cohomology>> {
        let d = &self.data.differential;
        self.space()
            .degree_set()
            .into_iter()
            .map(|n| cohomology(d, d, n))
            .collect()
    }

    /// Direct product of dg Lie algebras; basis names get the given suffixes.
    pub fn product(a: &DgLie, sa: &str, b: &DgLie, sb: &str) -> Result<Arc<DgLie>> {
        let space = GradedSpace::direct_sum(&[(a.space(), sa, 0), (b.space(), sb, 0)])?;
        let off = a.dim();
        let mut data = DglaData::new(space.clone());
        for (src, offset) in [(a, 0usize), (b, off)] {
            for ((x, y), c) in src.differential().entries() {
                data.differential
                    .add_entry(x + offset, y + offset, c.clone())?;
            }
            for ((x, y), v) in &src.data.bracket {
                data.bracket.insert(
                    (x + offset, y + offset),
                    v.iter().map(|(k, c)| (k + offset, c.clone())).collect(),
                );
            }
        }
        DgLie::new(data)
    }
}

/// A finite-dimensional graded-commutative dg algebra given by structure constants,
/// used to build `g ⊗ A`.
#[derive(Clone, Debug)]
pub struct SmallCdga {
    pub space: GradedSpace,
    /// `(a, b) -> ab`, for all ordered pairs.
    pub product: BTreeMap<(usize, usize), Vec<(usize, Q)>>,
    pub differential: LinearMap,
}

impl SmallCdga {
    /// `K[ε]/ε²` with `|ε| = -1`, `dε = 1`.
    pub fn dual_numbers() -> SmallCdga {
        let space = GradedSpace::new([("", 0), ("_eps", -1)]).expect("distinct names");
        let mut product = BTreeMap::new();
        product.insert((0, 0), vec![(0, one())]);
        product.insert((0, 1), vec![(1, one())]);
        product.insert((1, 0), vec![(1, one())]);
        let mut differential = LinearMap::zero(&space, &space, 1);
        differential.add_entry(1, 0, one()).expect("degree +1");
        SmallCdga {
            space,
            product,
            differential,
        }
    }
}

impl DgLie {
    /// `g ⊗ A` with `[x⊗a, y⊗b] = (-1)^{|a||y|} [x,y] ⊗ ab` and
    /// `d(x⊗a) = dx⊗a + (-1)^{|x|} x⊗da`. Basis is `x` followed by the name of `a`.
    pub fn tensor_cdga(g: &DgLie, a: &SmallCdga) -> Result<Arc<DgLie>> {
        let n = g.dim();
        let parts: Vec<(&GradedSpace, String, i64)> = (0..a.space.dim())
            .map(|i| (g.space(), a.space.name(i).to_string(), -a.space.degree(i)))
            .collect();
        let refs: Vec<(&GradedSpace, &str, i64)> =
            parts.iter().map(|(s, n, k)| (*s, n.as_str(), *k)).collect();
        let space = GradedSpace::direct_sum(&refs)?;
        let idx = |x: usize, i: usize| i * n + x;
        let mut data = DglaData::new(space);
        for i in 0..a.space.dim() {
            for ((x, y), c) in g.differential().entries() {
                data.differential
                    .add_entry(idx(*x, i), idx(*y, i), c.clone())?;
            }
            for ((p, r), c) in a.differential.entries() {
                if *p == i {
                    for x in 0..n {
                        data.differential.add_entry(
                            idx(x, i),
                            idx(x, *r),
                            c * sign(g.degree(x)),
                        )?;
                    }
                }
            }
        }
        let total = n * a.space.dim();
        for s in 0..total {
            for t in s..total {
                let (x, i) = (s % n, s / n);
                let (y, j) = (t % n, t / n);
                let mut v: BTreeMap<usize, Q> = BTreeMap::new();
                if let Some(ab) = a.product.get(&(i, j)) {
                    let sg = sign(a.space.degree(i) * g.degree(y));
                    for (z, c) in g.bracket_basis(x, y) {
                        for (k, e) in ab {
                            *v.entry(idx(*z, *k)).or_insert_with(Q::zero) += c * e * &sg;
                        }
                    }
                }
                let v: Vec<(usize, Q)> = v.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                if !v.is_empty() {
                    data.bracket.insert((s, t), v);
                }
            }
        }
        DgLie::new(data)
    }

    /// `g ⊗ K[ε]/ε²` with `|ε| = -1`, `dε = 1`. Basis: `x` then `x_eps`.
    pub fn tensor_dual_numbers(g: &DgLie) -> Result<Arc<DgLie>> {
        DgLie::tensor_cdga(g, &SmallCdga::dual_numbers())
    }
}

/// The graded Lie algebra `H(g, d)` with the induced bracket.
#[derive(Clone, Debug)]
pub struct TangentLie {
    pub algebra: Arc<DgLie>,
    /// Representative cocycle (in `g`) of each basis class.
    pub representatives: Vec<Vec<Q>>,
    pub pieces: Vec<Cohomology>,
}

impl TangentLie {
    /// Coordinates of a cocycle of degree `n` in the class basis (global indices).
    pub fn class_of(&self, n: i64, v: &[Q]) -> Option<Vec<Q>> {
        let mut out = vec![Q::zero(); self.representatives.len()];
        let mut offset = 0;
        for piece in &self.pieces {
            if piece.degree == n {
                let c = piece.coordinates(v)?;
                for (i, x) in c.into_iter().enumerate() {
                    out[offset + i] = x;
                }
                return Some(out);
            }
            offset += piece.dimension;
        }
        if is_zero_vec(v) {
            Some(out)
        } else {
            None
        }
    }
}

/// Tangent cohomology as a graded Lie algebra with zero differential; the
/// induced bracket is re-validated.
pub fn tangent_cohomology_lie(g: &DgLie) -> Result<TangentLie> {
    let pieces = g.tangent_cohomology()?;
    let mut basis = Vec::new();
    let mut reps = Vec::new();
    for p in &pieces {
        for (i, r) in p.representatives.iter().enumerate() {
            basis.push((format!("H{}_{}", p.degree, i), p.degree));
            reps.push(r.clone());
        }
    }
    let space = GradedSpace::new(basis)?;
    let mut data = DglaData::new(space.clone());
    let partial = TangentLie {
        algebra: Arc::new(DgLie::assemble(DglaData::new(GradedSpace::zero()))?),
        representatives: reps.clone(),
        pieces: pieces.clone(),
    };
    for a in 0..reps.len() {
        for b in a..reps.len() {
            let v = g.bracket(&reps[a], &reps[b]);
            let n = space.degree(a) + space.degree(b);
            let c = partial.class_of(n, &v).ok_or_else(|| {
                Error::NotClosed(format!(
                    "[{}, {}] is not a cocycle",
                    space.name(a),
                    space.name(b)
                ))
            })?;
            for (k, x) in c.into_iter().enumerate() {
                if !x.is_zero() {
                    data.bracket.entry((a, b)).or_default().push((k, x));
                }
            }
        }
    }
    Ok(TangentLie {
        algebra: DgLie::new(data)?,
        representatives: reps,
        pieces,
    })
}

/// Morphism of dg Lie algebras (degree-0 linear map).
#[derive(Clone, Debug)]
pub struct DglaMorphism {
    pub source: Arc<DgLie>,
    pub target: Arc<DgLie>,
    pub map: LinearMap,
}

impl DglaMorphism {
    pub fn new(source: Arc<DgLie>, target: Arc<DgLie>, map: LinearMap) -> Result<Self> {
        if map.dom != *source.space() || map.cod != *target.space() || map.shift != 0 {
            return Err(Error::DomainMismatch(
                "morphism must be a degree-0 map g -> g'".into(),
            ));
        }
        let f = DglaMorphism {
            source,
            target,
            map,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let (g, h) = (&self.source, &self.target);
        let lhs = h.differential().compose(&self.map)?;
        let rhs = self.map.compose(g.differential())?;
        if lhs != rhs {
            return Err(Violation::new("cochain map", "d'∘φ ≠ φ∘d").into());
        }
        let n = g.dim();
        for x in 0..n {
            for y in 0..n {
                let ux = crate::graded::unit_vec(n, x);
                let uy = crate::graded::unit_vec(n, y);
                let l = self.map.apply(&g.bracket(&ux, &uy));
                let r = h.bracket(&self.map.apply(&ux), &self.map.apply(&uy));
                if l != r {
                    return Err(Violation::new(
                        "bracket preservation",
                        format!("pair ({}, {})", g.space().name(x), g.space().name(y)),
                    )
                    .into());
                }
            }
        }
        Ok(())
    }

    pub fn identity(g: &Arc<DgLie>) -> Self {
        DglaMorphism {
            source: g.clone(),
            target: g.clone(),
            map: LinearMap::identity(g.space()),
        }
    }

    pub fn compose(&self, inner: &DglaMorphism) -> Result<DglaMorphism> {
        DglaMorphism::new(
            inner.source.clone(),
            self.target.clone(),
            self.map.compose(&inner.map)?,
        )
    }

    /// The algebra map `C(g') → C(g)` transposing `φ` on generators.
    pub fn koszul_dual(&self) -> KoszulDual {
        let mut images = vec![Ce::zero(); self.target.dim()];
        for ((x, y), c) in self.map.entries() {
            images[*y].add_term(vec![*x as u32], 0, c.clone());
        }
        KoszulDual {
            source_gd: self.target.gd().to_vec(),
            target_gd: self.source.gd().to_vec(),
            images,
        }
    }
}

/// A weight-preserving algebra map `C(g') → C(g)` given on generators.
#[derive(Clone, Debug, PartialEq)]
pub struct KoszulDual {
    source_gd: Vec<i64>,
    target_gd: Vec<i64>,
    pub images: Vec<Ce>,
}

impl KoszulDual {
    /// Applies the map to the word factor of any cochain.
    pub fn apply(&self, e: &Ce) -> Ce {
        let mut out = Ce::zero();
        for (w, t, c) in e.terms() {
            // product of generator images
            let mut acc: Vec<(Word, Q)> = vec![(Vec::new(), c.clone())];
            for &g in w.iter() {
                let mut next: BTreeMap<Word, Q> = BTreeMap::new();
                for (u, a) in &acc {
                    for (v, _, b) in self.images[g as usize].terms() {
                        if let Some((uv, s)) = mul_words(u, v, &self.target_gd) {
                            *next.entry(uv).or_insert_with(Q::zero) += a * b * s;
                        }
                    }
                }
                acc = next.into_iter().filter(|(_, a)| !a.is_zero()).collect();
            }
            for (u, a) in acc {
                out.add_term(u, t, a);
            }
        }
        out
    }

    pub fn source_gd(&self) -> &[i64] {
        &self.source_gd
    }

    /// Checks `d_CE ∘ φ^∨ = φ^∨ ∘ d_CE'` on every generator of `C(g')`.
    pub fn verify_chain_map(
        &self,
        source: &DgLie,
        target: &DgLie,
    ) -> std::result::Result<(), Violation> {
        for g in 0..source.dim() {
            let lhs = target.ce_differential(&self.images[g]);
            let rhs = self.apply(source.dce_generator(g));
            if lhs != rhs {
                return Err(Violation::new(
                    "Koszul dual commutes with d_CE",
                    format!("generator {}", source.gen_names()[g]),
                ));
            }
        }
        Ok(())
    }

    /// `(ψ∘φ)^∨` from `φ^∨` (self, outer in `C`) and `ψ^∨` (first).
    pub fn then(&self, next: &KoszulDual) -> KoszulDual {
        // self: C(g') -> C(g), next: C(g'') -> C(g'); result C(g'') -> C(g)
        KoszulDual {
            source_gd: next.source_gd.clone(),
            target_gd: self.target_gd.clone(),
            images: next.images.iter().map(|e| self.apply(e)).collect(),
        }
    }
}

/// `1` when the word has no letters; used for projections `C(g, M) → M`.
pub fn weight_zero_part(e: &Ce, dim: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    for (w, t, c) in e.terms() {
        if w.is_empty() {
            v[t] += c;
        }
    }
    v
}

pub fn vec_to_ce(v: &[Q]) -> Ce {
    let mut e = Ce::zero();
    for (i, c) in v.iter().enumerate() {
        e.add_term(Vec::new(), i, c.clone());
    }
    e
}

/// Exposed for diagnostics in reports.
pub fn describe_vector(g: &DgLie, v: &[Q]) -> String {
    g.vec_name(v)
}

/// Cohomology of `C(g)/C^{>W}(g)` in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalDegree {
    pub degree: i64,
    pub dimension: usize,
    /// The value equals that of the untruncated complex.
    pub stabilized: bool,
}

/// Total cohomology of `(C(g), d_CE)` truncated at weight `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalCohomology {
    pub weight_cutoff: usize,
    pub degrees: Vec<TotalDegree>,
    /// Set when some generator has degree `<= 0`, so no degree is guaranteed stable.
    pub truncation_warning: bool,
}

/// `H(C^{≤W}(g))` with `C^{>W}` quotiented out. When every generator of
/// `C(g)` has degree `>= 1` (i.e. `g` lives in degrees `<= 0`), a cochain of
/// degree `n` has weight at most `n`, so degrees `n < W` are exact.
pub fn total_cohomology(g: &DgLie, weight_cutoff: usize) -> TotalCohomology {
    use crate::graded::Matrix;
    let gd = g.gd();
    let mut by_degree: BTreeMap<i64, Vec<Word>> = BTreeMap::new();
    for k in 0..=weight_cutoff {
        let mut stack = vec![(Vec::<u32>::new(), 0usize)];
        while let Some((w, start)) = stack.pop() {
            if w.len() == k {
                by_degree
                    .entry(crate::ce::word_degree(&w, gd))
                    .or_default()
                    .push(w);
                continue;
            }
            for x in start..gd.len() {
                let mut next = w.clone();
                next.push(x as u32);
                stack.push((next, if is_odd(gd[x]) { x + 1 } else { x }));
            }
        }
    }
    let rank_from = |n: i64| -> usize {
        let (Some(src), Some(tgt)) = (by_degree.get(&n), by_degree.get(&(n + 1))) else {
            return 0;
        };
        let index: BTreeMap<&Word, usize> = tgt.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = Matrix::zeros(tgt.len(), src.len());
        for (j, w) in src.iter().enumerate() {
            let d = g
                .ce_differential(&Ce::term(w.clone(), 0, one()))
                .truncate_weight(weight_cutoff);
            for (v, _, c) in d.terms() {
                m.set(index[v], j, c.clone());
            }
        }
        m.rank()
    };
    let stable = gd.iter().all(|&d| d >= 1);
    let degrees = by_degree
        .iter()
        .map(|(&n, words)| TotalDegree {
            degree: n,
            dimension: words.len() - rank_from(n) - rank_from(n - 1),
            stabilized: stable && n < weight_cutoff as i64,
        })
        .collect();
    TotalCohomology {
        weight_cutoff,
        degrees,
        truncation_warning: !stable,
    }
}
