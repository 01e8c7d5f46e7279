//! Model-structure constructions on locally finite ∞-modules: path objects,
//! homotopies, strictification, pullbacks, lifts and factorizations.

use std::sync::Arc;

use num_traits::Zero;

use crate::ce::Word;
use crate::ce::{word_degree, Ce, WeightGradedMap};
use crate::error::{Error, Result, Violation};
use crate::graded::{GradedSpace, LinearMap};
use crate::lfmod::{max_weight, solve_linear, Classification, InftyMorphism, Layout, LfModule};
use crate::scalar::{fmt_q, one, sign, Q};

/// Weight bound used when the algebra has even generators and no natural cap exists.
pub const DEFAULT_WEIGHT_CAP: usize = 12;

fn weight_cap(gd: &[i64]) -> usize {
    max_weight(gd).unwrap_or(DEFAULT_WEIGHT_CAP)
}

/// Applies a weight-0 linear map to the target factor.
pub fn apply_linear(f: &LinearMap, e: &Ce, gd: &[i64]) -> Ce {
    WeightGradedMap::strict(f).extend(e, gd)
}

/// Moves an odd symbol of degree 1 from the left of `ω ⊗ m` to between `ω`
/// and `m`, reindexing targets by `offset`.
fn insert_odd(e: &Ce, offset: usize, gd: &[i64]) -> Ce {
    let mut out = Ce::zero();
    for (w, t, c) in e.terms() {
        out.add_term(w.clone(), t + offset, c * sign(word_degree(w, gd)));
    }
    out
}

// ---------------------------------------------------------------------------
// Path object

/// `J(M) = M ⊕ Mt ⊕ M[-1]dt` with the structure maps `s`, `ε₀`, `ε₁`.
#[derive(Clone, Debug)]
pub struct PathObject {
    pub base: Arc<LfModule>,
    pub total: Arc<LfModule>,
    pub s: InftyMorphism,
    pub eps0: InftyMorphism,
    pub eps1: InftyMorphism,
    /// `(ε₀, ε₁) : J(M) → M ⊕ M`.
    pub eps: InftyMorphism,
    pub diagonal: InftyMorphism,
}

pub fn path_object(m: &Arc<LfModule>) -> Result<PathObject> {
    let gd = m.gd().to_vec();
    let n = m.dim();
    let space = GradedSpace::direct_sum(&[
        (m.space(), "", 0),
        (m.space(), "·t", 0),
        (m.space(), "·dt", -1),
    ])?;
    let mut images = Vec::with_capacity(3 * n);
    for i in 0..n {
        images.push(m.structure().image(i));
    }
    for i in 0..n {
        let mut e = m.structure().image(i).map_targets(|t| Some(t + n));
        e.add_term(Vec::new(), 2 * n + i, one());
        images.push(e);
    }
    for i in 0..n {
        // d(dt·u) = -dt·d(u)
        images.push(insert_odd(&m.structure().image(i), 2 * n, &gd).scale(&-one()));
    }
    let total = LfModule::new(
        m.algebra().clone(),
        WeightGradedMap::from_images(&space, &space, 1, &images),
    )?;

    let mut s0 = LinearMap::zero(m.space(), &space, 0);
    let mut e0 = LinearMap::zero(&space, m.space(), 0);
    let mut e1 = LinearMap::zero(&space, m.space(), 0);
    for i in 0..n {
        s0.add_entry(i, i, one())?;
        e0.add_entry(i, i, one())?;
        e1.add_entry(i, i, one())?;
        e1.add_entry(n + i, i, one())?;
    }
    let mm = LfModule::direct_sum(m, "⁰", m, "¹")?;
    let mut e01 = LinearMap::zero(&space, mm.space(), 0);
    let mut diag = LinearMap::zero(m.space(), mm.space(), 0);
    for i in 0..n {
        e01.add_entry(i, i, one())?;
        e01.add_entry(i, n + i, one())?;
        e01.add_entry(n + i, n + i, one())?;
        diag.add_entry(i, i, one())?;
        diag.add_entry(i, n + i, one())?;
    }
    Ok(PathObject {
        s: InftyMorphism::strict(m.clone(), total.clone(), &s0)?,
        eps0: InftyMorphism::strict(total.clone(), m.clone(), &e0)?,
        eps1: InftyMorphism::strict(total.clone(), m.clone(), &e1)?,
        eps: InftyMorphism::strict(total.clone(), mm.clone(), &e01)?,
        diagonal: InftyMorphism::strict(m.clone(), mm, &diag)?,
        base: m.clone(),
        total,
    })
}

impl PathObject {
    /// `ε₀∘s = ε₁∘s = id`, `(ε₀,ε₁)∘s = Δ`, and the expected classifications.
    pub fn verify(&self) -> Result<()> {
        let id = InftyMorphism::identity(&self.base);
        for (name, e) in [("ε₀∘s", &self.eps0), ("ε₁∘s", &self.eps1)] {
            if e.compose(&self.s)?.comps != id.comps {
                return Err(Violation::new("path object", format!("{name} ≠ id")).into());
            }
        }
        if self.eps.compose(&self.s)?.comps != self.diagonal.comps {
            return Err(Violation::new("path object", "(ε₀,ε₁)∘s ≠ Δ").into());
        }
        let cs = self.s.classify()?;
        if !(cs.weak_equivalence && cs.cofibration) {
            return Err(Violation::new("path object", "s is not a trivial cofibration").into());
        }
        if !self.eps.classify()?.fibration {
            return Err(Violation::new("path object", "(ε₀,ε₁) is not a fibration").into());
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Homotopies

/// Candidate ∞-homotopy `h` (degree -1) between `f` and `f′`.
#[derive(Clone, Debug)]
pub struct HomotopyCertificate {
    pub f: InftyMorphism,
    pub f_prime: InftyMorphism,
    pub h: WeightGradedMap,
}

impl HomotopyCertificate {
    pub fn new(f: InftyMorphism, f_prime: InftyMorphism, h: WeightGradedMap) -> Result<Self> {
        if *f.source != *f_prime.source || *f.target != *f_prime.target {
            return Err(Error::DomainMismatch(
                "homotopic maps must share source and target".into(),
            ));
        }
        if h.source != *f.source.space() || h.target != *f.target.space() || h.shift != -1 {
            return Err(Error::DomainMismatch(
                "homotopy must be a degree -1 map M → C(g, N)".into(),
            ));
        }
        h.check_shape(f.gd())?;
        Ok(HomotopyCertificate { f, f_prime, h })
    }

    /// `F − F′ = d_tot^N ∘ H + H ∘ d_tot^M` on every source basis element.
    pub fn verify_direct(&self) -> std::result::Result<(), Violation> {
        let (src, tgt) = (&self.f.source, &self.f.target);
        let gd = src.gd();
        for i in 0..src.dim() {
            let lhs = self.f.comps.image(i).sub(&self.f_prime.comps.image(i));
            let mut rhs = tgt.d_tot(&self.h.image(i));
            rhs.add_assign_scaled(&self.h.extend(&src.d_tot(&Ce::basis(i)), gd), &one());
            if let Some((w, t, c)) = lhs.sub(&rhs).first_term() {
                return Err(Violation::new(
                    "F − F′ = d_tot∘H + H∘d_tot",
                    format!(
                        "on {}: discrepancy {} on {} ⊗ {}",
                        src.space().name(i),
                        fmt_q(&c),
                        src.algebra().word_name(&w),
                        tgt.space().name(t)
                    ),
                ));
            }
        }
        Ok(())
    }

    /// The right homotopy `M ⇝ J(N)`, `m ↦ f(m) + t(f′−f)(m) − dt·h(m)`.
    pub fn assemble(&self, path: &PathObject) -> Result<WeightGradedMap> {
        let n = self.f.target.dim();
        let gd = self.f.gd();
        let mut images = Vec::new();
        for i in 0..self.f.source.dim() {
            let f = self.f.comps.image(i);
            let fp = self.f_prime.comps.image(i);
            let mut e = f.clone();
            e.add_assign_scaled(&fp.sub(&f).map_targets(|t| Some(t + n)), &one());
            e.add_assign_scaled(&insert_odd(&self.h.image(i), 2 * n, gd), &-one());
            images.push(e);
        }
        Ok(WeightGradedMap::from_images(
            self.f.source.space(),
            path.total.space(),
            0,
            &images,
        ))
    }

    /// Validates the assembled right homotopy and its two endpoints.
    pub fn verify_path(&self) -> Result<()> {
        let path = path_object(&self.f.target)?;
        let big = InftyMorphism::new(
            self.f.source.clone(),
            path.total.clone(),
            self.assemble(&path)?,
        )?;
        if path.eps0.compose(&big)?.comps != self.f.comps {
            return Err(Violation::new("right homotopy", "ε₀∘H ≠ f").into());
        }
        if path.eps1.compose(&big)?.comps != self.f_prime.comps {
            return Err(Violation::new("right homotopy", "ε₁∘H ≠ f′").into());
        }
        Ok(())
    }

    /// Both routes; they must agree.
    pub fn verify(&self) -> Result<()> {
        let direct = self.verify_direct();
        let path = self.verify_path();
        match (direct, path) {
            (Ok(()), Ok(())) => Ok(()),
            (Err(v), Err(_)) => Err(v.into()),
            (Ok(()), Err(e)) => Err(Violation::new(
                "homotopy routes agree",
                format!("path route failed: {e}"),
            )
            .into()),
            (Err(v), Ok(())) => Err(Violation::new(
                "homotopy routes agree",
                format!("direct route failed: {v}"),
            )
            .into()),
        }
    }

    pub fn reversed(&self) -> HomotopyCertificate {
        HomotopyCertificate {
            f: self.f_prime.clone(),
            f_prime: self.f.clone(),
            h: self.h.scale(&-one()),
        }
    }

    /// Concatenation `f ≃ f′ ≃ f″`.
    pub fn then(&self, next: &HomotopyCertificate) -> Result<HomotopyCertificate> {
        HomotopyCertificate::new(self.f.clone(), next.f_prime.clone(), self.h.add(&next.h)?)
    }
}

/// Chain-homotopy identity for the extended operators on every cochain of
/// weight at most `max_weight` over a basis of words.
pub fn verify_extended_homotopy(
    c: &HomotopyCertificate,
    max_w: usize,
) -> std::result::Result<(), Violation> {
    let src = &c.f.source;
    let gd = src.gd();
    for k in 0..=max_w {
        for w in crate::lfmod::words_of_weight(gd, k) {
            for i in 0..src.dim() {
                let e = Ce::term(w.clone(), i, one());
                let lhs = c.f.extend(&e).sub(&c.f_prime.extend(&e));
                let mut rhs = c.f.target.d_tot(&c.h.extend(&e, gd));
                rhs.add_assign_scaled(&c.h.extend(&src.d_tot(&e), gd), &one());
                if lhs != rhs {
                    return Err(Violation::new(
                        "extended homotopy identity",
                        format!(
                            "on {} ⊗ {}",
                            src.algebra().word_name(&w),
                            src.space().name(i)
                        ),
                    ));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Strictification

/// Inverse of a weight-graded endomorphism with identity leading term.
fn unipotent_inverse(psi: &WeightGradedMap, gd: &[i64], cap: usize) -> Result<WeightGradedMap> {
    let dim = psi.source.dim();
    let mut chi = WeightGradedMap::strict(&LinearMap::identity(&psi.source));
    for k in 1..=cap {
        chi.ensure_weight(k);
        for i in 0..dim {
            let mut acc = Ce::zero();
            for p in 1..=k.min(psi.bound()) {
                acc.add_assign_scaled(&psi.extend_component(p, &chi.comps[k - p][i], gd), &-one());
            }
            chi.comps[k][i] = acc.weight_part(k);
        }
        if trailing_zero(&chi, k, psi.bound()) {
            break;
        }
        if k == cap && !chi.comps[k].iter().all(Ce::is_zero) {
            return Err(Error::NoSolution(format!(
                "inverse does not terminate below weight {cap}"
            )));
        }
    }
    chi.trim();
    Ok(chi)
}

fn trailing_zero(m: &WeightGradedMap, k: usize, span: usize) -> bool {
    let span = span.max(1);
    k >= span
        && (k + 1 - span..=k).all(|j| m.comps.get(j).is_none_or(|c| c.iter().all(Ce::is_zero)))
}

/// Transports a module structure along a weight-graded isomorphism:
/// `d̃ = Ψ⁻¹ ∘ d_tot ∘ Ψ` on basis elements.
fn conjugate(m: &LfModule, psi: &WeightGradedMap, chi: &WeightGradedMap) -> Result<Arc<LfModule>> {
    let gd = m.gd();
    let images: Vec<Ce> = (0..m.dim())
        .map(|i| chi.extend(&m.d_tot(&psi.image(i)), gd))
        .collect();
    LfModule::new(
        m.algebra().clone(),
        WeightGradedMap::from_images(m.space(), m.space(), 1, &images),
    )
}

/// Gauge transform along a unipotent `ψ` (`ψ₀ = id`): returns the module
/// `(M, Ψ⁻¹ d_tot Ψ)` and the ∞-isomorphism `ψ` from it to `M`.
pub fn gauge(m: &Arc<LfModule>, psi: WeightGradedMap) -> Result<(Arc<LfModule>, InftyMorphism)> {
    if psi.leading() != LinearMap::identity(m.space()) || psi.source != *m.space() || psi.shift != 0
    {
        return Err(Error::DomainMismatch("gauge must be unipotent on M".into()));
    }
    let gd = m.gd().to_vec();
    let chi = unipotent_inverse(&psi, &gd, weight_cap(&gd).max(psi.bound() * 4))?;
    let tilde = conjugate(m, &psi, &chi)?;
    let f = InftyMorphism::new(tilde.clone(), m.clone(), psi)?;
    Ok((tilde, f))
}

#[derive(Clone, Debug)]
pub struct Strictified {
    /// The module carrying the transported structure.
    pub module: Arc<LfModule>,
    /// `ψ` with `ψ₀ = id`, between the transported and original structures.
    pub psi: InftyMorphism,
    pub psi_inverse: InftyMorphism,
    /// The strict composite.
    pub strict: InftyMorphism,
}

/// `ψ : (M, d̃) ⇝ (M, d)` with `φ∘ψ = φ₀`.
pub fn strictify_fibration(phi: &InftyMorphism) -> Result<Strictified> {
    if !phi.leading().is_surjective() {
        return Err(Error::NotFibration);
    }
    let m = &phi.source;
    let gd = m.gd().to_vec();
    let cap = weight_cap(&gd);
    let sigma = WeightGradedMap::strict(&phi.leading().right_inverse()?);
    let mut psi = WeightGradedMap::strict(&LinearMap::identity(m.space()));
    for k in 1..=cap {
        psi.ensure_weight(k);
        for i in 0..m.dim() {
            let mut r = Ce::zero();
            for q in 1..=k.min(phi.comps.bound()) {
                r.add_assign_scaled(
                    &phi.comps.extend_component(q, &psi.comps[k - q][i], &gd),
                    &one(),
                );
            }
            psi.comps[k][i] = sigma.extend(&r, &gd).scale(&-one()).weight_part(k);
        }
        if trailing_zero(&psi, k, phi.comps.bound()) {
            break;
        }
        if k == cap && !psi.comps[k].iter().all(Ce::is_zero) {
            return Err(Error::NoSolution(format!(
                "strictification does not terminate below weight {cap}"
            )));
        }
    }
    psi.trim();
    let chi = unipotent_inverse(&psi, &gd, cap)?;
    let tilde = conjugate(m, &psi, &chi)?;
    let psi_m = InftyMorphism::new(tilde.clone(), m.clone(), psi.clone())?;
    let psi_inv = InftyMorphism::new(m.clone(), tilde.clone(), chi)?;
    let strict = phi.compose(&psi_m)?;
    strict.validate()?;
    if !strict.is_strict() {
        return Err(
            Violation::new("strictification", "higher components of φ∘ψ do not vanish").into(),
        );
    }
    Ok(Strictified {
        module: tilde,
        psi: psi_m,
        psi_inverse: psi_inv,
        strict,
    })
}

/// `ψ : (N, d) ⇝ (N, d̃)` with `ψ∘φ = φ₀`.
pub fn strictify_cofibration(phi: &InftyMorphism) -> Result<Strictified> {
    if !phi.leading().is_injective() {
        return Err(Error::NotCofibration);
    }
    let n = &phi.target;
    let m = &phi.source;
    let gd = n.gd().to_vec();
    let cap = weight_cap(&gd);
    let rho = phi.leading().left_inverse()?;
    let mut psi = WeightGradedMap::strict(&LinearMap::identity(n.space()));
    for k in 1..=cap {
        psi.ensure_weight(k);
        let mut r = Vec::with_capacity(m.dim());
        for i in 0..m.dim() {
            let mut acc = phi
                .comps
                .comps
                .get(k)
                .map(|c| c[i].clone())
                .unwrap_or_else(Ce::zero);
            for q in 1..k {
                if let Some(comp) = phi.comps.comps.get(k - q) {
                    acc.add_assign_scaled(&psi.extend_component(q, &comp[i], &gd), &one());
                }
            }
            r.push(acc.weight_part(k));
        }
        for t in 0..n.dim() {
            let mut img = Ce::zero();
            for (src, c) in rho.column(t) {
                img.add_assign_scaled(&r[src], &-c);
            }
            psi.comps[k][t] = img;
        }
        if k > phi.comps.bound() && trailing_zero(&psi, k, phi.comps.bound()) {
            break;
        }
        if k == cap && !psi.comps[k].iter().all(Ce::is_zero) {
            return Err(Error::NoSolution(format!(
                "strictification does not terminate below weight {cap}"
            )));
        }
    }
    psi.trim();
    let chi = unipotent_inverse(&psi, &gd, cap)?;
    // d̃ = Ψ ∘ d_tot ∘ Ψ⁻¹
    let tilde = conjugate(n, &chi, &psi)?;
    let psi_n = InftyMorphism::new(n.clone(), tilde.clone(), psi)?;
    let psi_inv = InftyMorphism::new(tilde.clone(), n.clone(), chi)?;
    let strict = psi_n.compose(phi)?;
    strict.validate()?;
    if !strict.is_strict() {
        return Err(
            Violation::new("strictification", "higher components of ψ∘φ do not vanish").into(),
        );
    }
    Ok(Strictified {
        module: tilde,
        psi: psi_n,
        psi_inverse: psi_inv,
        strict,
    })
}

// ---------------------------------------------------------------------------
// Pullback

#[derive(Clone, Debug)]
pub struct Pullback {
    pub module: Arc<LfModule>,
    /// Strict projection onto the base of `ψ`, itself a fibration.
    pub to_base: InftyMorphism,
    /// ∞-morphism into the source of the fibration.
    pub to_source: InftyMorphism,
    /// Basis of `ker φ₀` used for the second summand.
    pub kernel: Vec<Vec<Q>>,
}

/// Pullback of a fibration `φ : M ⇝ N` along `ψ : P ⇝ N`.
pub fn pullback(phi: &InftyMorphism, psi: &InftyMorphism) -> Result<Pullback> {
    if !phi.leading().is_surjective() {
        return Err(Error::NotFibration);
    }
    if *phi.target != *psi.target {
        return Err(Error::DomainMismatch("φ and ψ must share a target".into()));
    }
    let st = strictify_fibration(phi)?;
    let mhat = &st.module;
    let p = &psi.source;
    let gd = p.gd().to_vec();
    let phi0 = phi.leading();

    let mut kernel = Vec::new();
    let mut kbasis = Vec::new();
    for n in mhat.space().degree_set() {
        for v in phi0.rank_kernel_image(n).kernel {
            kbasis.push((format!("κ{}", kernel.len()), n));
            kernel.push(v);
        }
    }
    let kspace = GradedSpace::new(kbasis)?;
    let mut incl = LinearMap::zero(&kspace, mhat.space(), 0);
    for (j, v) in kernel.iter().enumerate() {
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                incl.add_entry(j, i, c.clone())?;
            }
        }
    }
    let proj = incl.left_inverse()?;
    let to_k = |e: &Ce| -> Result<Ce> {
        let k = apply_linear(&proj, e, &gd);
        if apply_linear(&incl, &k, &gd) != *e {
            return Err(Violation::new("pullback", "differential leaves C(g, ker φ₀)").into());
        }
        Ok(k)
    };

    let space = GradedSpace::direct_sum(&[(p.space(), "", 0), (&kspace, "", 0)])?;
    let np = p.dim();
    let sigma = WeightGradedMap::strict(&phi0.right_inverse()?);
    let lift = |e: &Ce| sigma.extend(&psi.extend(e), &gd);
    let mut images = Vec::new();
    for i in 0..np {
        let mut e = p.structure().image(i);
        let sp = lift(&Ce::basis(i));
        let twist = mhat.d_tot(&sp).sub(&lift(&p.d_tot(&Ce::basis(i))));
        e.add_assign_scaled(&to_k(&twist)?.map_targets(|t| Some(t + np)), &one());
        images.push(e);
    }
    for j in 0..kspace.dim() {
        let img = mhat
            .structure()
            .extend(&apply_linear(&incl, &Ce::basis(j), &gd), &gd);
        images.push(to_k(&img)?.map_targets(|t| Some(t + np)));
    }
    let module = LfModule::new(
        p.algebra().clone(),
        WeightGradedMap::from_images(&space, &space, 1, &images),
    )?;

    let mut pr = LinearMap::zero(&space, p.space(), 0);
    for i in 0..np {
        pr.add_entry(i, i, one())?;
    }
    let to_base = InftyMorphism::strict(module.clone(), p.clone(), &pr)?;
    let mut top_images = Vec::new();
    for i in 0..np {
        top_images.push(lift(&Ce::basis(i)));
    }
    for j in 0..kspace.dim() {
        top_images.push(apply_linear(&incl, &Ce::basis(j), &gd));
    }
    let top = InftyMorphism::new(
        module.clone(),
        mhat.clone(),
        WeightGradedMap::from_images(&space, mhat.space(), 0, &top_images),
    )?;
    let to_source = st.psi.compose(&top)?;
    to_source.validate()?;
    let left = phi.compose(&to_source)?;
    let right = psi.compose(&to_base)?;
    if left.comps != right.comps {
        return Err(Violation::new("pullback square commutes", "φ∘π ≠ ψ∘π′").into());
    }
    Ok(Pullback {
        module,
        to_base,
        to_source,
        kernel,
    })
}

// ---------------------------------------------------------------------------
// Lifting

/// A commutative square `p∘f = g∘j` with `j : A ⇝ C`, `p : B ⇝ D`.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub j: InftyMorphism,
    pub p: InftyMorphism,
    pub f: InftyMorphism,
    pub g: InftyMorphism,
}

fn is_acyclic(d: &LinearMap) -> Result<bool> {
    for n in d.dom.degree_set() {
        if crate::graded::cohomology(d, d, n)?.dimension != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Kernel of a surjective cochain map as a complex (the restricted differential).
fn kernel_complex(p0: &LinearMap, d: &LinearMap) -> Result<LinearMap> {
    let mut basis = Vec::new();
    let mut vecs = Vec::new();
    for n in p0.dom.degree_set() {
        for v in p0.rank_kernel_image(n).kernel {
            basis.push((format!("k{}", vecs.len()), n));
            vecs.push(v);
        }
    }
    let ks = GradedSpace::new(basis)?;
    let mut incl = LinearMap::zero(&ks, &p0.dom, 0);
    for (j, v) in vecs.iter().enumerate() {
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                incl.add_entry(j, i, c.clone())?;
            }
        }
    }
    incl.left_inverse()?.compose(&d.compose(&incl)?)
}

/// Cokernel of an injective cochain map as a complex, with the section
/// `σ : D → N` onto the chosen complement and the projection `π : N → D`.
pub fn cokernel_complex(
    j0: &LinearMap,
    d: &LinearMap,
) -> Result<(LinearMap, LinearMap, LinearMap)> {
    let n = &j0.cod;
    let mut chosen = Vec::new();
    let mut images: Vec<(i64, Vec<Q>)> = Vec::new();
    for deg in n.degree_set() {
        let mut span: Vec<Vec<Q>> = j0.rank_kernel_image(deg - j0.shift).image;
        images.extend(span.iter().map(|v| (deg, v.clone())));
        let mut r = crate::graded::span_rank(&span);
        for t in n.in_degree(deg) {
            span.push(crate::graded::unit_vec(n.dim(), t));
            let r2 = crate::graded::span_rank(&span);
            if r2 > r {
                chosen.push(t);
                r = r2;
            } else {
                span.pop();
            }
        }
    }
    let ds = GradedSpace::new(chosen.iter().map(|&t| (n.name(t).to_string(), n.degree(t))))?;
    let mut sigma = LinearMap::zero(&ds, n, 0);
    for (i, &t) in chosen.iter().enumerate() {
        sigma.add_entry(i, t, one())?;
    }
    // π: N → D, coordinates of v in im(j0) ⊕ σ(D), keeping the σ part
    let im_space = GradedSpace::new(
        images
            .iter()
            .enumerate()
            .map(|(k, (deg, _))| (format!("im{k}"), *deg)),
    )?;
    let both_space = GradedSpace::direct_sum(&[(&im_space, "", 0), (&ds, "'", 0)])?;
    let mut both = LinearMap::zero(&both_space, n, 0);
    for (k, (_, v)) in images.iter().enumerate() {
        for (t, c) in v.iter().enumerate() {
            if !c.is_zero() {
                both.add_entry(k, t, c.clone())?;
            }
        }
    }
    for (i, &t) in chosen.iter().enumerate() {
        both.add_entry(images.len() + i, t, one())?;
    }
    let inv = both.left_inverse()?;
    let mut pi = LinearMap::zero(n, &ds, 0);
    for ((a, b), c) in inv.entries() {
        if *b >= images.len() {
            pi.add_entry(*a, b - images.len(), c.clone())?;
        }
    }
    let dd = pi.compose(&d.compose(&sigma)?)?;
    Ok((dd, sigma, pi))
}

impl LiftingProblem {
    pub fn new(
        j: InftyMorphism,
        p: InftyMorphism,
        f: InftyMorphism,
        g: InftyMorphism,
    ) -> Result<Self> {
        if *f.source != *j.source
            || *f.target != *p.source
            || *g.source != *j.target
            || *g.target != *p.target
        {
            return Err(Error::DomainMismatch("square does not fit together".into()));
        }
        if p.compose(&f)?.comps != g.compose(&j)?.comps {
            return Err(Violation::new("square commutes", "p∘f ≠ g∘j").into());
        }
        Ok(LiftingProblem { j, p, f, g })
    }

    /// Checks cofibration/fibration and that coker(j) or ker(p) is acyclic.
    pub fn check_hypotheses(&self) -> Result<()> {
        let j0 = self.j.leading();
        let p0 = self.p.leading();
        if !j0.is_injective() {
            return Err(Error::HypothesisNotMet("j is not a cofibration".into()));
        }
        if !p0.is_surjective() {
            return Err(Error::HypothesisNotMet("p is not a fibration".into()));
        }
        let (dcoker, _, _) = cokernel_complex(&j0, &self.j.target.d0())?;
        let dker = kernel_complex(&p0, &self.p.source.d0())?;
        if !(is_acyclic(&dcoker)? || is_acyclic(&dker)?) {
            return Err(Error::HypothesisNotMet(
                "neither coker(j) nor ker(p) is acyclic".into(),
            ));
        }
        Ok(())
    }

    /// Solves for `l : C ⇝ B` weight by weight; `l₀` may be prescribed.
    pub fn solve(&self, l0: Option<&LinearMap>) -> Result<InftyMorphism> {
        self.check_hypotheses()?;
        let c = &self.j.target;
        let b = &self.p.source;
        let gd = c.gd().to_vec();
        // once `span` consecutive components vanish beyond all data, every later one does
        let data = [&self.j.comps, &self.p.comps, &self.f.comps, &self.g.comps]
            .iter()
            .map(|m| m.bound())
            .chain(
                [&self.j.source, c, b, &self.p.target]
                    .iter()
                    .map(|m| m.structure().bound()),
            )
            .max()
            .unwrap_or(0);
        let span = data + 1;
        let cap = weight_cap(&gd).max(data + span);
        let mut l = WeightGradedMap::zero(c.space(), b.space(), 0);
        for k in 0..=cap {
            l.ensure_weight(k);
            if k == 0 {
                if let Some(l0) = l0 {
                    l.comps[0] = WeightGradedMap::strict(l0).comps[0].clone();
                    continue;
                }
            }
            let base = self.residuals(&l, k);
            if base.iter().all(Ce::is_zero) {
                if k > data && (k + 1 - span..=k).all(|q| l.comps[q].iter().all(Ce::is_zero)) {
                    break;
                }
                continue;
            }
            if k == cap {
                return Err(Error::NoSolution(format!(
                    "lift does not terminate below weight {cap}"
                )));
            }
            let layout = Layout::new(c.space(), b.space(), 0, &gd, k);
            let x = solve_linear(layout.len(), &base, |u| self.column(&layout.slots[u], k))
                .ok_or_else(|| {
                    Error::NoSolution(format!("weight-{k} lifting equations are inconsistent"))
                })?;
            l.comps[k] = layout.images(&x, c.dim());
        }
        l.trim();
        let l = InftyMorphism::new(c.clone(), b.clone(), l)?;
        if l.compose(&self.j)?.comps != self.f.comps || self.p.compose(&l)?.comps != self.g.comps {
            return Err(Violation::new("lift", "l∘j = f and p∘l = g").into());
        }
        Ok(l)
    }

    /// Change of the residuals when `l_k(i)` gains the term `w ⊗ t`.
    fn column(&self, slot: &(usize, Word, usize), k: usize) -> Vec<Ce> {
        let (i, w, t) = slot;
        let gd = self.j.gd();
        let (a, c, b) = (&self.j.source, &self.j.target, &self.p.source);
        let unit = Ce::term(w.clone(), *t, one());
        let mut out = vec![Ce::zero(); a.dim() + 2 * c.dim()];
        let j0 = &self.j.comps.comps[0];
        for (ai, slot_out) in out.iter_mut().enumerate().take(a.dim()) {
            let coeff = j0[ai].coeff(&[], *i);
            if !coeff.is_zero() {
                slot_out.add_assign_scaled(&unit, &coeff);
            }
        }
        out[a.dim() + 2 * i] = self.p.comps.extend_component(0, &unit, gd);
        let d0 = &c.structure().comps[0];
        for (ci, img) in d0.iter().enumerate() {
            let coeff = img.coeff(&[], *i);
            if !coeff.is_zero() {
                out[a.dim() + 2 * ci + 1].add_assign_scaled(&unit, &coeff);
            }
        }
        let db = b.d_tot(&unit).weight_part(k);
        out[a.dim() + 2 * i + 1].add_assign_scaled(&db, &-one());
        out
    }

    /// Weight-`k` parts of `l∘j − f`, `p∘l − g` and `L∘d_tot − d_tot∘l`.
    fn residuals(&self, l: &WeightGradedMap, k: usize) -> Vec<Ce> {
        let gd = self.j.gd();
        let (a, c, b) = (&self.j.source, &self.j.target, &self.p.source);
        let mut out = Vec::new();
        for i in 0..a.dim() {
            let lj = l.extend(&self.j.comps.image(i), gd).weight_part(k);
            let f = self
                .f
                .comps
                .comps
                .get(k)
                .map(|v| v[i].clone())
                .unwrap_or_else(Ce::zero);
            out.push(lj.sub(&f));
        }
        for i in 0..c.dim() {
            let pl = self.p.extend(&l.image(i)).weight_part(k);
            let g = self
                .g
                .comps
                .comps
                .get(k)
                .map(|v| v[i].clone())
                .unwrap_or_else(Ce::zero);
            out.push(pl.sub(&g));
            let ld = l.extend(&c.d_tot(&Ce::basis(i)), gd).weight_part(k);
            let dl = b.d_tot(&l.image(i)).weight_part(k);
            out.push(ld.sub(&dl));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Factorizations

/// `Cone(M) = M ⊕ M[1]` with `d(m) = dm`, `d(u[1]) = u − (du)[1]` and trivial
/// higher structure.
pub fn cone_module(m: &LfModule) -> Result<Arc<LfModule>> {
    let n = m.dim();
    let d = m.d0();
    let space = GradedSpace::direct_sum(&[(m.space(), "", 0), (m.space(), "[1]", 1)])?;
    let mut dc = LinearMap::zero(&space, &space, 1);
    for ((a, b), c) in d.entries() {
        dc.add_entry(*a, *b, c.clone())?;
        dc.add_entry(n + a, n + b, -c)?;
    }
    for i in 0..n {
        dc.add_entry(n + i, i, one())?;
    }
    LfModule::from_complex(m.algebra().clone(), &dc)
}

/// `D ⊕ D[-1]` with `d(x) = dx + x[-1]`, `d(u[-1]) = -(du)[-1]`.
fn cone_down(alg: &Arc<crate::dgla::DgLie>, d: &LinearMap) -> Result<Arc<LfModule>> {
    let n = d.dom.dim();
    let space = GradedSpace::direct_sum(&[(&d.dom, "", 0), (&d.dom, "[-1]", -1)])?;
    let mut dc = LinearMap::zero(&space, &space, 1);
    for ((a, b), c) in d.entries() {
        dc.add_entry(*a, *b, c.clone())?;
        dc.add_entry(n + a, n + b, -c)?;
    }
    for i in 0..n {
        dc.add_entry(i, n + i, one())?;
    }
    LfModule::from_complex(alg.clone(), &dc)
}

#[derive(Clone, Debug)]
pub struct Factorization {
    pub first: InftyMorphism,
    pub second: InftyMorphism,
    pub first_class: Classification,
    pub second_class: Classification,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorizationMode {
    /// `f = s∘j` with `j` a cofibration and `s` a trivial fibration.
    CofibrationThenTrivialFibration,
    /// `f = p∘i` with `i` a trivial cofibration and `p` a fibration.
    TrivialCofibrationThenFibration,
}

pub fn factorize(f: &InftyMorphism, mode: FactorizationMode) -> Result<Factorization> {
    let (m, n) = (&f.source, &f.target);
    let gd = m.gd().to_vec();
    let (first, second) = match mode {
        FactorizationMode::CofibrationThenTrivialFibration => {
            let cone = cone_module(m)?;
            let prod = LfModule::direct_sum(n, "", &cone, "'")?;
            let (nn, nm) = (n.dim(), m.dim());
            let mut images = Vec::new();
            for i in 0..nm {
                let mut e = f.comps.image(i);
                e.add_term(Vec::new(), nn + i, one());
                // i_k(m) = (0, s d_k(m))
                for (w, t, c) in m.higher_part(i).terms() {
                    e.add_term(w.clone(), nn + nm + t, c * shift_sign(w, &gd));
                }
                images.push(e);
            }
            let j = InftyMorphism::new(
                m.clone(),
                prod.clone(),
                WeightGradedMap::from_images(m.space(), prod.space(), 0, &images),
            )?;
            let mut pr = LinearMap::zero(prod.space(), n.space(), 0);
            for i in 0..nn {
                pr.add_entry(i, i, one())?;
            }
            let s = InftyMorphism::strict(prod, n.clone(), &pr)?;
            (j, s)
        }
        FactorizationMode::TrivialCofibrationThenFibration => {
            let f0 = f.leading();
            let (dd, sigma, _) = cokernel_complex(&f0, &n.d0())?;
            let c = cone_down(m.algebra(), &dd)?;
            let prod = LfModule::direct_sum(m, "", &c, "'")?;
            let (nm, nd) = (m.dim(), dd.dom.dim());
            let mut incl = LinearMap::zero(m.space(), prod.space(), 0);
            for i in 0..nm {
                incl.add_entry(i, i, one())?;
            }
            let i = InftyMorphism::strict(m.clone(), prod.clone(), &incl)?;
            // p₀ = f₀ ⊕ (σ, dσ − σd)
            let mut p0 = LinearMap::zero(prod.space(), n.space(), 0);
            for ((a, b), q) in f0.entries() {
                p0.add_entry(*a, *b, q.clone())?;
            }
            for ((a, b), q) in sigma.entries() {
                p0.add_entry(nm + a, *b, q.clone())?;
            }
            let h = n
                .d0()
                .compose(&sigma)?
                .add(&sigma.compose(&dd)?.scale(&-one()))?;
            for ((a, b), q) in h.entries() {
                p0.add_entry(nm + nd + a, *b, q.clone())?;
            }
            // extend p₀ to an ∞-morphism with p∘i = f via the lifting solver
            let zero_mod = LfModule::trivial(m.algebra().clone(), &GradedSpace::zero());
            let problem = LiftingProblem::new(
                i.clone(),
                InftyMorphism::zero(n, &zero_mod),
                f.clone(),
                InftyMorphism::zero(&prod, &zero_mod),
            )?;
            let p = problem.solve(Some(&p0))?;
            (i, p)
        }
    };
    if second.compose(&first)?.comps != f.comps {
        return Err(Violation::new("factorization", "composite differs from f").into());
    }
    Ok(Factorization {
        first_class: first.classify()?,
        second_class: second.classify()?,
        first,
        second,
    })
}

/// Sign for `ω ⊗ m ↦ ω ⊗ m[1]` (moving the shift past `ω`).
fn shift_sign(w: &[u32], gd: &[i64]) -> Q {
    sign(word_degree(w, gd))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lfmod::adjoint_module;
    use crate::scalar::{is_odd, q};

    /// Deterministic pseudo-random coefficients in {-2..2}.
    pub(crate) fn coeffs(n: usize, seed: u64) -> Vec<Q> {
        let mut s = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (0..n)
            .map(|_| {
                s = s
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                q(((s >> 33) % 5) as i64 - 2)
            })
            .collect()
    }

    pub(crate) fn random_map(
        src: &LfModule,
        tgt: &LfModule,
        shift: i64,
        weights: std::ops::RangeInclusive<usize>,
        seed: u64,
    ) -> WeightGradedMap {
        let gd = src.gd();
        let mut out = WeightGradedMap::zero(src.space(), tgt.space(), shift);
        for k in weights {
            let layout = Layout::new(src.space(), tgt.space(), shift, gd, k);
            out.ensure_weight(k);
            // only words in odd generators, so that every series terminates
            let mut x = coeffs(layout.len(), seed + k as u64);
            for (slot, c) in layout.slots.iter().zip(x.iter_mut()) {
                if slot.1.iter().any(|&g| !is_odd(gd[g as usize])) {
                    *c = Q::zero();
                }
            }
            out.comps[k] = layout.images(&x, src.dim());
        }
        out
    }

    /// A non-strict ∞-isomorphism onto `m`.
    pub(crate) fn gauged(m: &Arc<LfModule>, seed: u64) -> (Arc<LfModule>, InftyMorphism) {
        let mut psi = random_map(m, m, 0, 1..=2, seed);
        psi.comps[0] = WeightGradedMap::strict(&LinearMap::identity(m.space())).comps[0].clone();
        gauge(m, psi).unwrap()
    }

    fn modules() -> Vec<Arc<LfModule>> {
        [
            fixtures::sl2(),
            fixtures::sl2_cone(),
            fixtures::arrow(),
            fixtures::aff(),
            fixtures::graded_test_algebra(),
        ]
        .iter()
        .map(adjoint_module)
        .collect()
    }

    #[test]
    fn path_objects_are_valid() {
        for m in modules() {
            let p = path_object(&m).unwrap();
            p.total.verify_square_zero().unwrap();
            p.verify().unwrap();
        }
    }

    #[test]
    fn gauges_are_not_strict() {
        for (seed, m) in modules().into_iter().enumerate() {
            let (_, f) = gauged(&m, seed as u64);
            f.validate().unwrap();
            // ungraded algebras admit no degree-0 higher components
            if seed == 1 || seed == 4 {
                assert!(!f.is_strict());
            }
        }
    }

    #[test]
    fn homotopies_verify_by_both_routes() {
        for (seed, m) in modules().into_iter().enumerate() {
            let (mt, f) = gauged(&m, 10 + seed as u64);
            let h = random_map(&mt, &m, -1, 0..=1, 20 + seed as u64);
            let mut images = Vec::new();
            for i in 0..mt.dim() {
                let mut e = f.comps.image(i);
                e.add_assign_scaled(&m.d_tot(&h.image(i)), &-one());
                e.add_assign_scaled(&h.extend(&mt.d_tot(&Ce::basis(i)), mt.gd()), &-one());
                images.push(e);
            }
            let fp = InftyMorphism::new(
                mt.clone(),
                m.clone(),
                WeightGradedMap::from_images(mt.space(), m.space(), 0, &images),
            )
            .unwrap();
            let cert = HomotopyCertificate::new(f.clone(), fp, h).unwrap();
            cert.verify().unwrap();
            cert.reversed().verify().unwrap();
            verify_extended_homotopy(&cert, 2).unwrap();
            let bad = HomotopyCertificate::new(f.clone(), f.clone(), cert.h.clone()).unwrap();
            if !cert.h.is_zero() {
                assert!(bad.verify().is_err());
            }
        }
    }

    #[test]
    fn strictify_both_kinds() {
        for (seed, m) in modules().into_iter().enumerate() {
            let (_, f) = gauged(&m, 30 + seed as u64);
            let st = strictify_fibration(&f).unwrap();
            assert!(st.strict.is_strict());
            st.module.verify_square_zero().unwrap();
            let st = strictify_cofibration(&f).unwrap();
            assert!(st.strict.is_strict());
        }
    }

    #[test]
    fn factorizations() {
        for (seed, m) in modules().into_iter().enumerate() {
            let (_, f) = gauged(&m, 40 + seed as u64);
            for mode in [
                FactorizationMode::CofibrationThenTrivialFibration,
                FactorizationMode::TrivialCofibrationThenFibration,
            ] {
                let fac = factorize(&f, mode).unwrap();
                match mode {
                    FactorizationMode::CofibrationThenTrivialFibration => {
                        assert!(fac.first_class.cofibration);
                        assert!(fac.second_class.fibration && fac.second_class.weak_equivalence);
                    }
                    FactorizationMode::TrivialCofibrationThenFibration => {
                        assert!(fac.first_class.cofibration && fac.first_class.weak_equivalence);
                        assert!(fac.second_class.fibration);
                    }
                }
            }
        }
    }

    #[test]
    fn factorize_non_injective() {
        let phi = fixtures::perturbed_fibration();
        assert!(!phi.leading().is_injective());
        for mode in [
            FactorizationMode::CofibrationThenTrivialFibration,
            FactorizationMode::TrivialCofibrationThenFibration,
        ] {
            let fac = factorize(&phi, mode).unwrap();
            fac.first.target.verify_square_zero().unwrap();
            assert!(fac.first_class.cofibration && fac.second_class.fibration);
        }
    }

    #[test]
    fn pullback_along_gauge() {
        for (seed, m) in modules().into_iter().enumerate().take(4) {
            // φ: M ⊕ M ⇝ M, projection precomposed with a gauge on the first summand
            let (mt, g) = gauged(&m, 50 + seed as u64);
            let sum = LfModule::direct_sum(&mt, "", &m, "'").unwrap();
            let mut pr = LinearMap::zero(sum.space(), mt.space(), 0);
            for i in 0..mt.dim() {
                pr.add_entry(i, i, one()).unwrap();
            }
            let pr = InftyMorphism::strict(sum.clone(), mt.clone(), &pr).unwrap();
            let phi = g.compose(&pr).unwrap();
            let (_, psi) = gauged(&m, 60 + seed as u64);
            let pb = pullback(&phi, &psi).unwrap();
            pb.module.verify_square_zero().unwrap();
            assert_eq!(pb.kernel.len(), m.dim());
            assert!(pb.to_base.leading().is_surjective());
        }
    }

    #[test]
    fn pullback_requires_fibration() {
        let m = adjoint_module(&fixtures::sl2());
        let z = LfModule::trivial(m.algebra().clone(), &GradedSpace::zero());
        let zero = InftyMorphism::zero(&z, &m);
        assert!(matches!(
            pullback(&zero, &InftyMorphism::identity(&m)),
            Err(Error::NotFibration)
        ));
    }

    #[test]
    fn lifting_hypotheses_are_checked() {
        // j: 0 → M with M not acyclic, p: M → 0; neither coker j nor ker p is acyclic
        let m = adjoint_module(&fixtures::sl2());
        let z = LfModule::trivial(m.algebra().clone(), &GradedSpace::zero());
        let problem = LiftingProblem::new(
            InftyMorphism::zero(&z, &m),
            InftyMorphism::zero(&m, &z),
            InftyMorphism::zero(&z, &m),
            InftyMorphism::zero(&m, &z),
        )
        .unwrap();
        assert!(matches!(
            problem.solve(None),
            Err(Error::HypothesisNotMet(_))
        ));
    }

    #[test]
    fn lift_into_acyclic_kernel() {
        // j = id: M → M, p: path object endpoints, f arbitrary, g = (f, f)
        for (seed, m) in modules().into_iter().enumerate().take(4) {
            let (mt, f) = gauged(&m, 70 + seed as u64);
            let path = path_object(&m).unwrap();
            let g = path.diagonal.compose(&f).unwrap();
            let id = InftyMorphism::identity(&mt);
            let lift_f = path.s.compose(&f).unwrap();
            let problem = LiftingProblem::new(id, path.eps.clone(), lift_f.clone(), g).unwrap();
            let l = problem.solve(None).unwrap();
            assert_eq!(l.comps, lift_f.comps);
        }
    }

    #[test]
    fn weight_one_fibration_strictifies_and_pulls_back() {
        let phi = fixtures::perturbed_fibration();
        phi.validate().unwrap();
        assert!(!phi.is_strict());
        assert!(phi.classify().unwrap().fibration);
        let st = strictify_fibration(&phi).unwrap();
        assert!(st
            .strict
            .comps
            .comps
            .iter()
            .skip(1)
            .all(|c| c.iter().all(Ce::is_zero)));
        st.module.verify_square_zero().unwrap();
        let base = &phi.target;
        let (_, psi) = fixtures::weight_one_gauge(base);
        let pb = pullback(&phi, &psi).unwrap();
        pb.module.verify_square_zero().unwrap();
        assert!(pb.to_base.classify().unwrap().fibration);
    }
}
