//! Loday–Pirashvili modules, dg Leibniz algebras and the two standard
//! families of weak Loday–Pirashvili modules.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::ce::{contract_mixed, contract_vector, word_degree, Ce, WeightGradedMap};
use crate::dgla::{DgLie, DglaData};
use crate::error::{Error, Result, Violation};
use crate::graded::{is_zero_vec, unit_vec, GradedSpace, LinearMap, Matrix};
use crate::lfmod::{adjoint_module, InftyMorphism, LfModule};
use crate::model::HomotopyCertificate;
use crate::scalar::{fmt_q, one, sign, Q};

/// An ∞-morphism `f : M ⇝ g` into the adjoint module.
#[derive(Clone, Debug)]
pub struct WeakLp {
    pub morphism: InftyMorphism,
}

impl WeakLp {
    /// Checks that the target is the adjoint module and that `f` intertwines
    /// the total differentials.
    pub fn new(module: Arc<LfModule>, comps: WeightGradedMap) -> Result<WeakLp> {
        let target = adjoint_module(module.algebra());
        let morphism = InftyMorphism::new(module, target, comps)?;
        Ok(WeakLp { morphism })
    }

    pub fn from_morphism(morphism: InftyMorphism) -> Result<WeakLp> {
        if *morphism.target != *adjoint_module(morphism.source.algebra()) {
            return Err(Error::DomainMismatch(
                "target must be the adjoint module".into(),
            ));
        }
        morphism.validate()?;
        Ok(WeakLp { morphism })
    }

    /// `id : g → g`.
    pub fn identity(g: &Arc<DgLie>) -> WeakLp {
        WeakLp {
            morphism: InftyMorphism::identity(&adjoint_module(g)),
        }
    }

    pub fn module(&self) -> &Arc<LfModule> {
        &self.morphism.source
    }

    pub fn algebra(&self) -> &Arc<DgLie> {
        self.morphism.source.algebra()
    }

    pub fn is_strict(&self) -> bool {
        self.morphism.is_strict()
    }

    /// `F(m_i) = Σ_k f_k(m_i)`.
    pub fn image(&self, i: usize) -> Ce {
        self.morphism.comps.image(i)
    }
}

/// A dg Leibniz algebra given by structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct LeibnizAlgebra {
    pub space: GradedSpace,
    pub differential: LinearMap,
    /// `(x, y) ↦ x ◇ y`, all ordered pairs.
    pub bracket: BTreeMap<(usize, usize), Vec<(usize, Q)>>,
}

impl LeibnizAlgebra {
    pub fn new(space: GradedSpace) -> Self {
        LeibnizAlgebra {
            differential: LinearMap::zero(&space, &space, 1),
            space,
            bracket: BTreeMap::new(),
        }
    }

    pub fn set_bracket(&mut self, x: &str, y: &str, z: &str, c: Q) -> Result<()> {
        let (i, j, k) = (
            self.space.require(x)?,
            self.space.require(y)?,
            self.space.require(z)?,
        );
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

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn product(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for ((x, y), terms) in &self.bracket {
            let c = &u[*x] * &v[*y];
            if c.is_zero() {
                continue;
            }
            for (z, e) in terms {
                out[*z] += &c * e;
            }
        }
        out
    }

    /// Bracket degrees, `d² = 0`, `d` a derivation and the left Leibniz rule
    /// `x◇(y◇z) = (x◇y)◇z + (-1)^{|x||y|} y◇(x◇z)`.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let sp = &self.space;
        let n = self.dim();
        let u = |i: usize| unit_vec(n, i);
        for ((x, y), terms) in &self.bracket {
            for (z, _) in terms {
                if sp.degree(*z) != sp.degree(*x) + sp.degree(*y) {
                    return Err(Violation::new(
                        "bracket degree",
                        format!(
                            "{}◇{} has a component along {}",
                            sp.name(*x),
                            sp.name(*y),
                            sp.name(*z)
                        ),
                    ));
                }
            }
        }
        let d = &self.differential;
        for x in 0..n {
            if !is_zero_vec(&d.apply(&d.apply(&u(x)))) {
                return Err(Violation::new("d² = 0", sp.name(x).to_string()));
            }
        }
        for x in 0..n {
            for y in 0..n {
                let lhs = d.apply(&self.product(&u(x), &u(y)));
                let a = self.product(&d.apply(&u(x)), &u(y));
                let b = self.product(&u(x), &d.apply(&u(y)));
                let s = sign(sp.degree(x));
                let rhs: Vec<Q> = a.iter().zip(&b).map(|(p, q)| p + &s * q).collect();
                if lhs != rhs {
                    return Err(Violation::new(
                        "d is a derivation of ◇",
                        format!("pair ({}, {})", sp.name(x), sp.name(y)),
                    ));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = self.product(&u(x), &self.product(&u(y), &u(z)));
                    let a = self.product(&self.product(&u(x), &u(y)), &u(z));
                    let b = self.product(&u(y), &self.product(&u(x), &u(z)));
                    let s = sign(sp.degree(x) * sp.degree(y));
                    let rhs: Vec<Q> = a.iter().zip(&b).map(|(p, q)| p + &s * q).collect();
                    if lhs != rhs {
                        return Err(Violation::new(
                            "left Leibniz rule",
                            format!("triple ({}, {}, {})", sp.name(x), sp.name(y), sp.name(z)),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether `◇` is graded antisymmetric.
    pub fn is_lie(&self) -> bool {
        let n = self.dim();
        (0..n).all(|x| {
            (0..n).all(|y| {
                let a = self.product(&unit_vec(n, x), &unit_vec(n, y));
                let b = self.product(&unit_vec(n, y), &unit_vec(n, x));
                let s = sign(self.space.degree(x) * self.space.degree(y));
                a.iter().zip(&b).all(|(p, q)| (p + &s * q).is_zero())
            })
        })
    }
}

/// The action `ρ(x; m) = ι_{x[1]} d₁ m` of a strict module.
pub(crate) fn action(m: &LfModule, x: usize, i: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); m.dim()];
    if m.structure().comps.len() < 2 {
        return out;
    }
    let e = contract_vector(x as u32, &m.structure().comps[1][i], m.gd());
    for (w, t, c) in e.terms() {
        debug_assert!(w.is_empty());
        out[t] += c;
    }
    out
}

/// `m₁ ◇ m₂ = ρ(f(m₁); m₂)` for a strict Loday–Pirashvili module.
pub fn leibniz_from_lp(f: &WeakLp) -> Result<LeibnizAlgebra> {
    if let Some(k) = (1..f.morphism.comps.comps.len())
        .find(|&k| f.morphism.comps.comps[k].iter().any(|e| !e.is_zero()))
    {
        return Err(Error::NonStrict(k));
    }
    let m = f.module();
    if let Some(k) = (2..m.structure().comps.len())
        .find(|&k| m.structure().comps[k].iter().any(|e| !e.is_zero()))
    {
        return Err(Error::NonStrict(k));
    }
    let f0 = f.morphism.leading();
    let mut l = LeibnizAlgebra::new(m.space().clone());
    l.differential = m.d0();
    for a in 0..m.dim() {
        let fa = f0.column(a);
        for b in 0..m.dim() {
            let mut v = vec![Q::zero(); m.dim()];
            for (x, c) in &fa {
                for (t, e) in action(m, *x, b).into_iter().enumerate() {
                    v[t] += c * e;
                }
            }
            let terms: Vec<(usize, Q)> = v
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            if !terms.is_empty() {
                l.bracket.insert((a, b), terms);
            }
        }
    }
    l.validate()?;
    Ok(l)
}

/// `L_Lie = L / K` with the projection and the module `ℱ(L)`.
#[derive(Clone, Debug)]
pub struct LieQuotient {
    /// Basis of the Leibniz kernel `K`.
    pub kernel: Vec<Vec<Q>>,
    pub lie: Arc<DgLie>,
    /// `π : L → L_Lie`.
    pub projection: LinearMap,
    /// `ℱ(L) = (π : L → L_Lie)` as a strict Loday–Pirashvili module.
    pub module: WeakLp,
}

fn reduce_basis(vs: &[Vec<Q>], dim: usize) -> Vec<Vec<Q>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows(vs.to_vec()).rref();
    (0..pivots.len())
        .map(|i| (0..dim).map(|j| r.get(i, j).clone()).collect())
        .collect()
}

/// The Leibniz kernel, its Lie quotient and the round trip `𝒢(ℱ(L)) = L`.
pub fn lie_quotient(l: &LeibnizAlgebra) -> Result<LieQuotient> {
    l.validate()?;
    let n = l.dim();
    let sp = &l.space;
    let u = |i: usize| unit_vec(n, i);
    let mut gens = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let a = l.product(&u(x), &u(y));
            let b = l.product(&u(y), &u(x));
            let s = sign(sp.degree(x) * sp.degree(y));
            gens.push(
                a.iter()
                    .zip(&b)
                    .map(|(p, q)| p + &s * q)
                    .collect::<Vec<Q>>(),
            );
        }
    }
    // span closure under left/right multiplication and d
    let mut basis = reduce_basis(&gens, n);
    for _ in 0..=n {
        let mut more = basis.clone();
        for v in &basis {
            more.push(l.differential.apply(v));
            for x in 0..n {
                more.push(l.product(&u(x), v));
                more.push(l.product(v, &u(x)));
            }
        }
        let next = reduce_basis(&more, n);
        if next.len() == basis.len() {
            break;
        }
        basis = next;
    }
    // homogeneous basis of K, degree by degree
    let mut kernel = Vec::new();
    for deg in sp.degree_set() {
        let idx = sp.in_degree(deg);
        let part: Vec<Vec<Q>> = basis
            .iter()
            .map(|v| {
                (0..n)
                    .map(|i| {
                        if idx.contains(&i) {
                            v[i].clone()
                        } else {
                            Q::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        kernel.extend(reduce_basis(&part, n));
    }
    // complement: basis vectors that are not pivots of the kernel
    let pivots: Vec<usize> = kernel
        .iter()
        .map(|v| v.iter().position(|c| !c.is_zero()).expect("nonzero"))
        .collect();
    let keep: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
    let qspace = GradedSpace::new(keep.iter().map(|&i| (sp.name(i).to_string(), sp.degree(i))))?;
    // π(v) = coordinates of v modulo K along the kept basis
    let mut projection = LinearMap::zero(sp, &qspace, 0);
    for i in 0..n {
        let mut v = u(i);
        for (k, p) in kernel.iter().zip(&pivots) {
            let c = v[*p].clone();
            if !c.is_zero() {
                for j in 0..n {
                    v[j] -= &c * &k[j];
                }
            }
        }
        for (a, &j) in keep.iter().enumerate() {
            if !v[j].is_zero() {
                projection.add_entry(i, a, v[j].clone())?;
            }
        }
    }
    let mut data = DglaData::new(qspace.clone());
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            if a > b {
                continue;
            }
            let v = projection.apply(&l.product(&u(i), &u(j)));
            for (c, x) in v.into_iter().enumerate() {
                if !x.is_zero() {
                    data.bracket.entry((a, b)).or_default().push((c, x));
                }
            }
        }
        for (c, x) in projection
            .apply(&l.differential.apply(&u(i)))
            .into_iter()
            .enumerate()
        {
            if !x.is_zero() {
                data.differential.add_entry(a, c, x)?;
            }
        }
    }
    let lie = DgLie::new(data)?;
    // ℱ(L): L as an L_Lie-module through ρ(π(x); m) = x ◇ m
    let mut s = WeightGradedMap::strict(&l.differential);
    s.ensure_weight(1);
    for m in 0..n {
        for (a, &x) in keep.iter().enumerate() {
            for (t, c) in l.product(&u(x), &u(m)).into_iter().enumerate() {
                if !c.is_zero() {
                    s.comps[1][m].add_term(vec![a as u32], t, c);
                }
            }
        }
    }
    let module = LfModule::new(lie.clone(), s)?;
    let module = WeakLp::new(module, WeightGradedMap::strict(&projection))?;
    let round_trip = leibniz_from_lp(&module)?;
    if round_trip.bracket != l.bracket || round_trip.differential != l.differential {
        return Err(Violation::new("𝒢(ℱ(L)) = L", "round trip changed the bracket").into());
    }
    Ok(LieQuotient {
        kernel,
        lie,
        projection,
        module,
    })
}

/// `f₁(y[1-k] ⊗ z) = -ι_{y[1]} α ⊗ z` on `M = g[1-k] ⊗ g`.
pub fn wlp_from_two_cocycle(g: &Arc<DgLie>, alpha: &Ce, k: i64) -> Result<WeakLp> {
    let gd = g.gd();
    for (w, t, _) in alpha.terms() {
        if t != 0 || w.len() != 2 {
            return Err(Error::DegreeMismatch(
                "the cocycle must be a pure element of weight 2".into(),
            ));
        }
        if word_degree(w, gd) != k {
            return Err(Error::DegreeMismatch(format!(
                "the cocycle has a term of degree {} ≠ {k}",
                word_degree(w, gd)
            )));
        }
    }
    let dalpha = g.ce_differential(alpha);
    if let Some((w, _, c)) = dalpha.first_term() {
        return Err(Error::NotClosed(format!(
            "d_CE α has coefficient {} on {}",
            fmt_q(&c),
            g.word_name(&w)
        )));
    }
    let ad = adjoint_module(g);
    let module = LfModule::tensor(&ad.shifted(1 - k, &format!("[{}]", 1 - k)), &ad)?;
    let n = g.dim();
    let mut images = vec![Ce::zero(); n * n];
    for y in 0..n {
        let iy = contract_vector(y as u32, alpha, gd);
        for z in 0..n {
            for (w, _, c) in iy.terms() {
                images[y * n + z].add_term(w.clone(), z, -c);
            }
        }
    }
    let comps = WeightGradedMap::from_images(module.space(), ad.space(), 0, &images);
    WeakLp::new(module, comps)
}

/// The homotopy between the modules of two cocycles with `α - α′ = d_CE η`:
/// `h(y[1-k] ⊗ z) = (-1)^{|y|} ι_{y[1]} η ⊗ z`.
pub fn cocycle_homotopy(
    g: &Arc<DgLie>,
    alpha: &Ce,
    alpha_prime: &Ce,
    eta: &Ce,
    k: i64,
) -> Result<HomotopyCertificate> {
    let diff = alpha.sub(alpha_prime).sub(&g.ce_differential(eta));
    if let Some((w, _, c)) = diff.first_term() {
        return Err(Error::NotClosed(format!(
            "α − α′ − d_CE η has coefficient {} on {}",
            fmt_q(&c),
            g.word_name(&w)
        )));
    }
    let f = wlp_from_two_cocycle(g, alpha, k)?;
    let fp = wlp_from_two_cocycle(g, alpha_prime, k)?;
    let gd = g.gd();
    let n = g.dim();
    let mut images = vec![Ce::zero(); n * n];
    for y in 0..n {
        let iy = contract_vector(y as u32, eta, gd);
        let s = sign(g.degree(y));
        for z in 0..n {
            for (w, _, c) in iy.terms() {
                images[y * n + z].add_term(w.clone(), z, c * &s);
            }
        }
    }
    let h =
        WeightGradedMap::from_images(f.module().space(), f.morphism.target.space(), -1, &images);
    HomotopyCertificate::new(f.morphism, fp.morphism, h)
}

/// A dg Lie algebra `L` with a coordinate subalgebra `g` and quotient `B = L / g`.
#[derive(Clone, Debug)]
pub struct LiePair {
    pub big: Arc<DgLie>,
    pub sub: Arc<DgLie>,
    /// `g ↪ L`.
    pub inclusion: LinearMap,
    /// `L → B`.
    pub pr_b: LinearMap,
    pub quotient: GradedSpace,
    /// The differential induced on `B`.
    pub d_b: LinearMap,
}

impl LiePair {
    /// `g` is spanned by the named basis vectors of `L`.
    pub fn new(big: &Arc<DgLie>, sub_names: &[&str]) -> Result<LiePair> {
        let sp = big.space();
        let mut sub_idx = Vec::new();
        for s in sub_names {
            sub_idx.push(sp.require(s)?);
        }
        sub_idx.sort();
        sub_idx.dedup();
        let rest: Vec<usize> = (0..big.dim()).filter(|i| !sub_idx.contains(i)).collect();
        let pos = |i: usize| sub_idx.iter().position(|&j| j == i);
        let n = big.dim();
        let mut data = DglaData::new(GradedSpace::new(
            sub_idx
                .iter()
                .map(|&i| (sp.name(i).to_string(), sp.degree(i))),
        )?);
        for (a, &x) in sub_idx.iter().enumerate() {
            for (t, c) in big.d_vec(&unit_vec(n, x)).into_iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let b = pos(t).ok_or_else(|| {
                    Error::NotSubalgebra(format!("d{} leaves the subspace", sp.name(x)))
                })?;
                data.differential.add_entry(a, b, c)?;
            }
            for (b, &y) in sub_idx.iter().enumerate().skip(a) {
                for (t, c) in big.bracket_basis(x, y) {
                    let p = pos(*t).ok_or_else(|| {
                        Error::NotSubalgebra(format!(
                            "[{}, {}] leaves the subspace",
                            sp.name(x),
                            sp.name(y)
                        ))
                    })?;
                    data.bracket.entry((a, b)).or_default().push((p, c.clone()));
                }
            }
        }
        let sub = DgLie::new(data)?;
        let mut inclusion = LinearMap::zero(sub.space(), sp, 0);
        for (a, &x) in sub_idx.iter().enumerate() {
            inclusion.add_entry(a, x, one())?;
        }
        let quotient =
            GradedSpace::new(rest.iter().map(|&i| (sp.name(i).to_string(), sp.degree(i))))?;
        let mut pr_b = LinearMap::zero(sp, &quotient, 0);
        for (a, &x) in rest.iter().enumerate() {
            pr_b.add_entry(x, a, one())?;
        }
        let mut d_b = LinearMap::zero(&quotient, &quotient, 1);
        for (a, &x) in rest.iter().enumerate() {
            for (t, c) in pr_b
                .apply(&big.d_vec(&unit_vec(n, x)))
                .into_iter()
                .enumerate()
            {
                if !c.is_zero() {
                    d_b.add_entry(a, t, c)?;
                }
            }
        }
        Ok(LiePair {
            big: big.clone(),
            sub,
            inclusion,
            pr_b,
            quotient,
            d_b,
        })
    }

    /// The coordinate splitting `B → L`.
    pub fn canonical_splitting(&self) -> LinearMap {
        self.pr_b
            .transpose()
            .retyped(&self.quotient, self.big.space())
            .expect("same shape")
    }

    fn check_section(&self, j: &LinearMap) -> Result<()> {
        if j.dom != self.quotient || j.cod != *self.big.space() || j.shift != 0 {
            return Err(Error::DomainMismatch(
                "splitting must be a degree-0 map B → L".into(),
            ));
        }
        let pj = self.pr_b.compose(j)?;
        if pj != LinearMap::identity(&self.quotient) {
            return Err(Error::NotSection("pr_B ∘ j ≠ id".into()));
        }
        Ok(())
    }

    /// `pr_g = ι⁻¹ ∘ (id − j ∘ pr_B)` as coordinates in `g`.
    fn pr_g(&self, j: &LinearMap, v: &[Q]) -> Vec<Q> {
        let jb = j.apply(&self.pr_b.apply(v));
        let rest: Vec<Q> = v.iter().zip(&jb).map(|(a, b)| a - b).collect();
        let sub = self.sub.dim();
        let mut out = vec![Q::zero(); sub];
        for ((a, x), c) in self.inclusion.entries() {
            debug_assert!(c == &one());
            out[*a] = rest[*x].clone();
        }
        debug_assert_eq!(out.len(), sub);
        out
    }

    /// The ∞-module `B` over `g`: `d₀ = d_B`, `d₁(b) = Σ_x ξ_x ⊗ pr_B [x, j b]`.
    pub fn quotient_module(&self) -> Result<Arc<LfModule>> {
        let j = self.canonical_splitting();
        let mut s = WeightGradedMap::strict(&self.d_b);
        s.ensure_weight(1);
        let nb = self.quotient.dim();
        for b in 0..nb {
            let jb = j.apply(&unit_vec(nb, b));
            for x in 0..self.sub.dim() {
                let ix = self.inclusion.apply(&unit_vec(self.sub.dim(), x));
                let v = self.pr_b.apply(&self.big.bracket(&ix, &jb));
                for (t, c) in v.into_iter().enumerate() {
                    if !c.is_zero() {
                        s.comps[1][b].add_term(vec![x as u32], t, c);
                    }
                }
            }
        }
        LfModule::new(self.sub.clone(), s)
    }
}

/// `B[-1] ⇝ g` with `f₀(b[-1]) = (-1)^{|b|}(d j(b) − j(d_B b))` and
/// `f₁(b[-1]) = (-1)^{|b|} Σ_x ξ_x ⊗ pr_g [x, j b]`.
pub fn wlp_from_dgla_pair(pair: &LiePair, j: &LinearMap) -> Result<WeakLp> {
    pair.check_section(j)?;
    let module = pair.quotient_module()?.shifted(-1, "[-1]");
    let nb = pair.quotient.dim();
    let ng = pair.sub.dim();
    let mut images = vec![Ce::zero(); nb];
    for b in 0..nb {
        let s = sign(pair.quotient.degree(b));
        let jb = j.apply(&unit_vec(nb, b));
        let djb = pair.big.d_vec(&jb);
        let jdb = j.apply(&pair.d_b.apply(&unit_vec(nb, b)));
        let fail: Vec<Q> = djb.iter().zip(&jdb).map(|(a, c)| a - c).collect();
        for (t, c) in pair.pr_g(j, &fail).into_iter().enumerate() {
            images[b].add_term(Vec::new(), t, c * &s);
        }
        let s1 = sign(pair.quotient.degree(b));
        for x in 0..ng {
            let ix = pair.inclusion.apply(&unit_vec(ng, x));
            let v = pair.pr_g(j, &pair.big.bracket(&ix, &jb));
            for (t, c) in v.into_iter().enumerate() {
                images[b].add_term(vec![x as u32], t, c * &s1);
            }
        }
    }
    let target = adjoint_module(&pair.sub);
    let comps = WeightGradedMap::from_images(module.space(), target.space(), 0, &images);
    WeakLp::new(module, comps)
}

/// The homotopy between the modules of `j` and `j′ = j + λ`: `h(b[-1]) = -(-1)^{|b|} λ(b)`.
pub fn splitting_homotopy(
    pair: &LiePair,
    j: &LinearMap,
    lambda: &LinearMap,
) -> Result<HomotopyCertificate> {
    let jp = j.add(&pair.inclusion.compose(lambda)?)?;
    let f = wlp_from_dgla_pair(pair, j)?;
    let fp = wlp_from_dgla_pair(pair, &jp)?;
    let nb = pair.quotient.dim();
    let mut images = vec![Ce::zero(); nb];
    for b in 0..nb {
        let s = -sign(pair.quotient.degree(b));
        for (t, c) in lambda.apply(&unit_vec(nb, b)).into_iter().enumerate() {
            images[b].add_term(Vec::new(), t, c * &s);
        }
    }
    let h =
        WeightGradedMap::from_images(f.module().space(), f.morphism.target.space(), -1, &images);
    HomotopyCertificate::new(f.morphism, fp.morphism, h)
}

/// A derivation `δ : C(g) → C(g, M^∨[-1])` given on generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    /// `images[x] = δ(ξ_x)`, valued in the dual basis of `M`.
    pub images: Vec<Ce>,
    pub module: Arc<LfModule>,
}

/// `δ(ξ_x) = Σ ⟨ξ_x, f_k(m)⟩ ω ⊗ m^∨[-1]`, summed over the terms `ω ⊗ x` of `f_k(m)`.
pub fn dualize_to_derivation(f: &WeakLp) -> Derivation {
    let g = f.algebra();
    let mut images = vec![Ce::zero(); g.dim()];
    for m in 0..f.module().dim() {
        for (w, x, c) in f.image(m).terms() {
            images[x].add_term(w.clone(), m, c.clone());
        }
    }
    Derivation {
        images,
        module: f.module().clone(),
    }
}

/// Inverse of [`dualize_to_derivation`].
pub fn undualize(d: &Derivation) -> Result<WeakLp> {
    let g = d.module.algebra();
    let mut images = vec![Ce::zero(); d.module.dim()];
    for (x, e) in d.images.iter().enumerate() {
        for (w, m, c) in e.terms() {
            images[m].add_term(w.clone(), x, c.clone());
        }
    }
    let comps = WeightGradedMap::from_images(d.module.space(), g.space(), 0, &images);
    WeakLp::new(d.module.clone(), comps)
}

impl Derivation {
    /// `δ` extended to a product of generators by the Leibniz rule.
    pub fn apply_word(&self, w: &[u32]) -> Ce {
        let gd = self.module.gd();
        let mut out = Ce::zero();
        for i in 0..w.len() {
            let prefix = &w[..i];
            let suffix = &w[i + 1..];
            for (v, m, c) in self.images[w[i] as usize].terms() {
                let Some((pv, s1)) = crate::ce::mul_words(prefix, v, gd) else {
                    continue;
                };
                let Some((full, s2)) = crate::ce::mul_words(&pv, suffix, gd) else {
                    continue;
                };
                out.add_term(full, m, c * s1 * s2);
            }
        }
        out
    }

    /// The dual pairing of `δ` recovers `F` on every generator: `ι_{m} δ(ξ_x)`
    /// reads off the `x`-coefficient of `F(m)`.
    pub fn verify_dual(&self, f: &WeakLp) -> std::result::Result<(), Violation> {
        for m in 0..self.module.dim() {
            for (w, x, c) in f.image(m).terms() {
                if self.images[x].coeff(w, m) != *c {
                    return Err(Violation::new(
                        "δ dual to F",
                        format!(
                            "generator {}, module element {}",
                            f.algebra().gen_names()[x],
                            self.module.space().name(m)
                        ),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// A basis of the closed pure cochains of the given weight and degree.
pub fn cocycles(g: &DgLie, weight: usize, degree: i64) -> Vec<Ce> {
    let gd = g.gd();
    let words: Vec<_> = crate::lfmod::words_of_weight(gd, weight)
        .into_iter()
        .filter(|w| word_degree(w, gd) == degree)
        .collect();
    if words.is_empty() {
        return Vec::new();
    }
    let images: Vec<Ce> = words
        .iter()
        .map(|w| g.ce_differential(&Ce::term(w.clone(), 0, one())))
        .collect();
    let mut keys: BTreeMap<crate::ce::Word, usize> = BTreeMap::new();
    for e in &images {
        for (w, _, _) in e.terms() {
            let n = keys.len();
            keys.entry(w.clone()).or_insert(n);
        }
    }
    let mut a = Matrix::zeros(keys.len().max(1), words.len());
    for (j, e) in images.iter().enumerate() {
        for (w, _, c) in e.terms() {
            a.set(keys[w], j, c.clone());
        }
    }
    a.kernel()
        .into_iter()
        .map(|v| {
            let mut e = Ce::zero();
            for (w, c) in words.iter().zip(v) {
                e.add_term(w.clone(), 0, c);
            }
            e
        })
        .collect()
}

/// Contraction along `F(m)`: `ι_{F(m)[1]} e`.
pub fn contract_along(f: &WeakLp, m: usize, e: &Ce) -> Ce {
    contract_mixed(&f.image(m), e, f.algebra().gd())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fixtures;
    use crate::fixtures::{
        aff_cocycle, lie_pair, lie_pair_module as lie_pair_fixture, pair_lambda,
        pairing_module as pairing_fixture,
    };
    use crate::model::verify_extended_homotopy;
    use crate::scalar::q;

    #[test]
    fn leibniz_from_identity() {
        let l = leibniz_from_lp(&WeakLp::identity(&fixtures::sl2())).unwrap();
        let (e, h) = (1, 0);
        assert_eq!(l.bracket[&(e, h)], vec![(e, q(-2))]);
        assert!(l.is_lie());
        for g in [
            fixtures::graded_test_algebra(),
            fixtures::sl2_cone(),
            fixtures::arrow(),
        ] {
            leibniz_from_lp(&WeakLp::identity(&g)).unwrap();
        }
    }

    #[test]
    fn zero_lp_gives_abelian_leibniz() {
        let g = fixtures::sl2();
        let m = adjoint_module(&g);
        let f = WeakLp::new(m.clone(), WeightGradedMap::zero(m.space(), m.space(), 0)).unwrap();
        assert!(leibniz_from_lp(&f).unwrap().bracket.is_empty());
    }

    #[test]
    fn weak_modules_are_rejected_by_leibniz_from_lp() {
        assert!(matches!(
            leibniz_from_lp(&pairing_fixture()),
            Err(Error::NonStrict(1))
        ));
    }

    #[test]
    fn quotient_of_non_lie_leibniz() {
        let mut l = LeibnizAlgebra::new(GradedSpace::new([("x", 0), ("y", 0)]).unwrap());
        l.set_bracket("x", "x", "y", one()).unwrap();
        let qt = lie_quotient(&l).unwrap();
        assert_eq!(qt.kernel, vec![vec![q(0), q(1)]]);
        assert_eq!(qt.lie.dim(), 1);
        assert!(qt.lie.data().bracket.is_empty());
    }

    #[test]
    fn quotient_of_lie_is_itself() {
        let l = leibniz_from_lp(&WeakLp::identity(&fixtures::sl2())).unwrap();
        let qt = lie_quotient(&l).unwrap();
        assert!(qt.kernel.is_empty());
        assert_eq!(qt.lie.data().bracket, fixtures::sl2().data().bracket);
    }

    #[test]
    fn pairing_module_is_weak_lp() {
        let f = pairing_fixture();
        assert!(!f.is_strict());
        let zero = wlp_from_two_cocycle(&fixtures::aff(), &Ce::zero(), 2).unwrap();
        assert!(zero.morphism.comps.is_zero());
        let bad = Ce::term(vec![0], 0, one());
        assert!(wlp_from_two_cocycle(&fixtures::aff(), &bad, 1).is_err());
        // ξ_a ξ_b on aff_central is closed; ξ_b ξ_c is not
        let g = fixtures::aff_central();
        wlp_from_two_cocycle(&g, &Ce::term(vec![0, 1], 0, one()), 2).unwrap();
        assert!(matches!(
            wlp_from_two_cocycle(&g, &Ce::term(vec![1, 2], 0, one()), 2),
            Err(Error::NotClosed(_))
        ));
    }

    #[test]
    fn graded_pairing_modules() {
        let g =
            crate::dgla::DgLie::tensor_cdga(&fixtures::sl2(), &fixtures::exterior_on(1)).unwrap();
        let mut checked = 0;
        for k in -1..=3 {
            for alpha in cocycles(&g, 2, k) {
                wlp_from_two_cocycle(&g, &alpha, k).unwrap();
                checked += 1;
            }
            for eta in cocycles(&g, 1, k - 1).into_iter().chain(
                crate::lfmod::words_of_weight(g.gd(), 1)
                    .into_iter()
                    .filter(|w| word_degree(w, g.gd()) == k - 1)
                    .map(|w| Ce::term(w, 0, one())),
            ) {
                let alpha = g.ce_differential(&eta);
                let c = cocycle_homotopy(&g, &alpha, &Ce::zero(), &eta, k).unwrap();
                c.verify_direct().unwrap();
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn cocycle_homotopy_is_accepted() {
        let g = fixtures::aff();
        // d_CE ξ_b = -ξ_a ξ_b
        let eta = Ce::term(vec![1], 0, q(-1));
        let c = cocycle_homotopy(&g, &aff_cocycle(), &Ce::zero(), &eta, 2).unwrap();
        c.verify().unwrap();
        verify_extended_homotopy(&c, 2).unwrap();
        let trivial = cocycle_homotopy(&g, &aff_cocycle(), &aff_cocycle(), &Ce::zero(), 2).unwrap();
        assert!(trivial.h.is_zero());
        trivial.verify().unwrap();
    }

    #[test]
    fn lie_pair_modules() {
        let (pair, j) = lie_pair();
        let f = wlp_from_dgla_pair(&pair, &j).unwrap();
        assert!(f.morphism.comps.comps[0].iter().all(Ce::is_zero));
        let fp = lie_pair_fixture();
        assert!(fp.morphism.comps.comps[0].iter().any(|e| !e.is_zero()));
        let mut bad = j.clone();
        bad.add_entry(0, 2, one()).unwrap();
        assert!(matches!(
            wlp_from_dgla_pair(&pair, &bad),
            Err(Error::NotSection(_))
        ));
        let big = fixtures::sl2_cone();
        assert!(matches!(
            LiePair::new(&big, &["e", "f"]),
            Err(Error::NotSubalgebra(_))
        ));
    }

    #[test]
    fn direct_sum_pair_has_no_leading_term() {
        let big = DgLie::product(&fixtures::aff(), "", &fixtures::abelian(), "'").unwrap();
        let pair = LiePair::new(&big, &["a", "b"]).unwrap();
        let f = wlp_from_dgla_pair(&pair, &pair.canonical_splitting()).unwrap();
        assert!(f.morphism.comps.comps[0].iter().all(Ce::is_zero));
    }

    #[test]
    fn splitting_homotopy_is_accepted() {
        let (pair, j) = lie_pair();
        let c = splitting_homotopy(&pair, &j, &pair_lambda(&pair)).unwrap();
        c.verify().unwrap();
        let zero = LinearMap::zero(&pair.quotient, pair.sub.space(), 0);
        splitting_homotopy(&pair, &j, &zero)
            .unwrap()
            .verify()
            .unwrap();
        let mut both = pair_lambda(&pair);
        both.add_entry(1, 3, one()).unwrap();
        splitting_homotopy(&pair, &j, &both)
            .unwrap()
            .verify()
            .unwrap();
    }

    #[test]
    fn derivation_duality() {
        for f in [
            WeakLp::identity(&fixtures::sl2()),
            pairing_fixture(),
            lie_pair_fixture(),
        ] {
            let d = dualize_to_derivation(&f);
            d.verify_dual(&f).unwrap();
            let back = undualize(&d).unwrap();
            assert_eq!(back.morphism.comps, f.morphism.comps);
        }
    }
}
