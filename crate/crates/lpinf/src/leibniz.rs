//! The Leibniz∞[1] algebra on `C(g, M[1])` induced by a weak
//! Loday–Pirashvili module.
//!
//! Elements of `C(g, M[1])` are stored as cochains valued in the basis of `M`;
//! the shift is implicit, so `ω ⊗ m[1]` has degree `|ω| + |m| - 1`.

use std::collections::HashMap;

use crate::ce::{
    contract_mixed, contract_word, mul_word_ce, mul_words, multiply, split_by_target, word_degree,
    Ce, WeightGradedMap, Word,
};
use crate::dgla::{tangent_cohomology_lie, weight_zero_part, DglaMorphism, KoszulDual};
use crate::error::{Error, Result, Violation};
use crate::graded::{is_zero_vec, GradedSpace, LinearMap};
use crate::lfmod::InftyMorphism;
use crate::lp::{LeibnizAlgebra, WeakLp};
use num_traits::Zero;

use crate::scalar::{fmt_q, is_odd, one, sign, Q};

/// Evaluates the brackets `λ_n` of a weak Loday–Pirashvili module.
#[derive(Clone, Debug)]
pub struct LeibnizInfty {
    pub f: WeakLp,
    images: Vec<Ce>,
    higher: Vec<Ce>,
    shifted_degrees: Vec<i64>,
}

impl LeibnizInfty {
    pub fn new(f: WeakLp) -> Self {
        let m = f.module().clone();
        let images = (0..m.dim()).map(|i| f.image(i)).collect();
        let higher = (0..m.dim()).map(|i| m.higher_part(i)).collect();
        let shifted_degrees = (0..m.dim()).map(|i| m.space().degree(i) - 1).collect();
        LeibnizInfty {
            f,
            images,
            higher,
            shifted_degrees,
        }
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn gd(&self) -> &[i64] {
        self.f.algebra().gd()
    }

    /// `F(m_i)`.
    pub fn image(&self, i: usize) -> &Ce {
        &self.images[i]
    }

    /// Degree of `m_i[1]`.
    pub fn shifted_degree(&self, i: usize) -> i64 {
        self.shifted_degrees[i]
    }

    /// Total degree of a homogeneous element of `C(g, M[1])`.
    pub fn degree_of(&self, e: &Ce) -> Option<i64> {
        e.terms()
            .next()
            .map(|(w, t, _)| word_degree(w, self.gd()) + self.shifted_degrees[t])
    }

    /// `λ₁ = d_tot`.
    pub fn lambda1(&self, e: &Ce) -> Ce {
        self.f.module().d_tot(e)
    }

    fn prefix_sign(&self, args: &[usize]) -> Q {
        sign(args.iter().map(|&m| self.shifted_degrees[m]).sum())
    }

    /// `λ_n` by the contraction recursion
    /// `λ_{n+1}(m₁, …) = (-1)^{|m₁|-1} ι_{F(m₁)[1]} λ_n(m₂, …)`, starting from
    /// `λ₂(m₁, m₂) = (-1)^{|m₁|-1} ι_{F(m₁)[1]} (Σ_{k≥1} d_k m₂)`.
    pub fn lambda_recursive(&self, args: &[usize]) -> Ce {
        match args.len() {
            0 => Ce::zero(),
            1 => self.lambda1(&Ce::basis(args[0])),
            _ => self.chain(
                &args[..args.len() - 1],
                self.higher[args[args.len() - 1]].clone(),
            ),
        }
    }

    fn chain(&self, firsts: &[usize], mut acc: Ce) -> Ce {
        for &m in firsts.iter().rev() {
            acc = contract_mixed(&self.images[m], &acc, self.gd());
            if is_odd(self.shifted_degrees[m]) {
                acc = acc.neg();
            }
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    /// `λ_n` by normal-ordering the composite operator
    /// `ι_{F(m₁)[1]} ∘ ⋯ ∘ ι_{F(m_{n-1})[1]}` into `Σ Ω · ι_{x_1[1]} ⋯ ι_{x_r[1]}`
    /// and applying it once to `(Σ_{k≥1} d_k m_n)[1]`.
    pub fn lambda_closed_form(&self, args: &[usize]) -> Ce {
        if args.len() < 2 {
            return self.lambda_recursive(args);
        }
        let n = args.len();
        let gd = self.gd();
        let mut op: Vec<(Q, Word, Vec<u32>)> = vec![(one(), Vec::new(), Vec::new())];
        for &m in args[..n - 1].iter().rev() {
            let mut next: HashMap<(Word, Vec<u32>), Q> = HashMap::new();
            for (w, x, c) in self.images[m].terms() {
                let x = x as u32;
                let x_odd = is_odd(gd[x as usize]);
                for (d, big_w, xs) in &op {
                    // ι_x Ω
                    for (rest, s) in contract_word(x, big_w, gd) {
                        if let Some((u, s2)) = mul_words(w, &rest, gd) {
                            *next.entry((u, xs.clone())).or_default() += c * d * s * s2;
                        }
                    }
                    // (-1)^{(|x|-1)|Ω|} Ω ι_x
                    if let Some((u, s2)) = mul_words(w, big_w, gd) {
                        let s = if x_odd && is_odd(word_degree(big_w, gd)) {
                            -one()
                        } else {
                            one()
                        };
                        let mut ys = vec![x];
                        ys.extend_from_slice(xs);
                        *next.entry((u, ys)).or_default() += c * d * s * s2;
                    }
                }
            }
            op = next
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((w, xs), c)| (c, w, xs))
                .collect();
            op.sort_by(|a, b| (&a.1, &a.2).cmp(&(&b.1, &b.2)));
        }
        let target = &self.higher[args[n - 1]];
        let mut out = Ce::zero();
        for (c, w, xs) in &op {
            let mut inner = target.clone();
            for &x in xs.iter().rev() {
                inner = crate::ce::contract_vector(x, &inner, gd);
                if inner.is_zero() {
                    break;
                }
            }
            out.add_assign_scaled(&mul_word_ce(w, c, &inner, gd), &one());
        }
        out.scale(&self.prefix_sign(&args[..n - 1]))
    }

    /// `λ_n` on arbitrary cochains, extended `C(g)`-multilinearly from basis
    /// tuples.
    pub fn eval(&self, args: &[Ce], memo: &mut HashMap<Vec<usize>, Ce>) -> Ce {
        if args.len() == 1 {
            return self.lambda1(&args[0]);
        }
        extend_multilinear(args, self.gd(), &self.shifted_degrees, true, |t| {
            memo.entry(t.to_vec())
                .or_insert_with(|| self.lambda_recursive(t))
                .clone()
        })
    }

    /// The Leibniz∞[1] identity for all arities `≤ n_max` on all basis tuples.
    pub fn verify_identities(&self, n_max: usize) -> std::result::Result<(), Violation> {
        let mut memo = HashMap::new();
        for n in 1..=n_max {
            for tuple in tuples(self.dim(), n) {
                let total = self.identity_sum(&tuple, &mut memo);
                if let Some((w, t, c)) = total.first_term() {
                    let names: Vec<&str> = tuple
                        .iter()
                        .map(|&i| self.f.module().space().name(i))
                        .collect();
                    return Err(Violation::new(
                        format!("Leibniz∞[1] identity, n = {n}"),
                        format!(
                            "({}): coefficient {} on {} ⊗ {}",
                            names.join(", "),
                            fmt_q(&c),
                            self.f.algebra().word_name(&w),
                            self.f.module().space().name(t)
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `Σ_{i+j=n+1} Σ_{k=j}^{n} Σ_{σ ∈ sh(k-j, j-1)} ε(σ) (-1)^{|x_σ(1)|+…+|x_σ(k-j)|}
    ///   λ_i(x_σ(1), …, x_σ(k-j), λ_j(x_σ(k-j+1), …, x_σ(k-1), x_k), x_{k+1}, …, x_n)`.
    pub fn identity_sum(&self, x: &[usize], memo: &mut HashMap<Vec<usize>, Ce>) -> Ce {
        let n = x.len();
        let deg: Vec<i64> = x.iter().map(|&i| self.shifted_degrees[i]).collect();
        let mut total = Ce::zero();
        for j in 1..=n {
            for k in j..=n {
                let p = k - j;
                for sigma in crate::trees::shuffles(&[p, j - 1]) {
                    let mut s = crate::graded::koszul_sign(&sigma, &deg[..k - 1]);
                    let front: i64 = sigma[..p].iter().map(|&a| deg[a]).sum();
                    s *= sign(front);
                    let inner_args: Vec<usize> =
                        sigma[p..].iter().map(|&a| x[a]).chain([x[k - 1]]).collect();
                    let inner = memo
                        .entry(inner_args.clone())
                        .or_insert_with(|| self.lambda_recursive(&inner_args))
                        .clone();
                    if inner.is_zero() {
                        continue;
                    }
                    let mut args: Vec<Ce> = sigma[..p].iter().map(|&a| Ce::basis(x[a])).collect();
                    args.push(inner);
                    args.extend(x[k..].iter().map(|&a| Ce::basis(a)));
                    let v = self.eval(&args, memo);
                    total.add_assign_scaled(&v, &s);
                }
            }
        }
        total
    }
}

/// Extends a map given on basis tuples `C(g)`-multilinearly. Pulling `ω_p`
/// out of slot `p` costs `(-1)^{|ω_p| (ε + |x_1| + … + |x_{p-1}|)}`, where
/// `ε = 1` for an odd map and `|x_q|` are the shifted degrees.
pub fn extend_multilinear(
    args: &[Ce],
    gd: &[i64],
    shifted_degrees: &[i64],
    odd: bool,
    basis: impl FnMut(&[usize]) -> Ce,
) -> Ce {
    let groups: Vec<Vec<(u32, bool, Ce)>> = args.iter().map(|e| split_by_target(e, gd)).collect();
    if groups.iter().any(|g| g.is_empty()) {
        return Ce::zero();
    }
    #[allow(clippy::too_many_arguments)]
    fn go(
        groups: &[Vec<(u32, bool, Ce)>],
        gd: &[i64],
        shifted_degrees: &[i64],
        basis: &mut dyn FnMut(&[usize]) -> Ce,
        p: usize,
        omega: &Ce,
        passed: i64,
        tuple: &mut Vec<usize>,
        out: &mut Ce,
    ) {
        if p == groups.len() {
            let value = basis(tuple);
            out.add_assign_scaled(&multiply(omega, &value, gd), &one());
            return;
        }
        for (t, w_odd, w) in &groups[p] {
            let mut next = multiply(omega, w, gd);
            if next.is_zero() {
                continue;
            }
            if *w_odd && is_odd(passed) {
                next = next.neg();
            }
            tuple.push(*t as usize);
            go(
                groups,
                gd,
                shifted_degrees,
                basis,
                p + 1,
                &next,
                passed + shifted_degrees[*t as usize],
                tuple,
                out,
            );
            tuple.pop();
        }
    }
    let mut basis = basis;
    let mut out = Ce::zero();
    go(
        &groups,
        gd,
        shifted_degrees,
        &mut basis,
        0,
        &Ce::one(),
        i64::from(odd),
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// Block decompositions of `0..n` listed block after block, each block
/// increasing and the blocks ordered by their largest element.
pub fn ordered_by_maxima(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(blocks.clone());
            return;
        }
        for b in 0..=blocks.len() {
            if b == blocks.len() {
                blocks.push(vec![i]);
            } else {
                blocks[b].push(i);
            }
            go(i + 1, n, blocks, out);
            if b == blocks.len() - 1 && blocks[b].len() == 1 {
                blocks.pop();
            } else {
                blocks[b].pop();
            }
        }
    }
    let mut all = Vec::new();
    go(0, n, &mut Vec::new(), &mut all);
    for blocks in &mut all {
        blocks.sort_by_key(|b| *b.last().expect("blocks are nonempty"));
    }
    all
}

/// The induced morphism `G^∞(φ)` of Leibniz∞[1] algebras for an ∞-morphism
/// `φ : M ⇝ N` of weak Loday–Pirashvili modules with `f = g ∘ φ`.
pub struct GinfMorphism<'a> {
    pub source: &'a LeibnizInfty,
    pub target: &'a LeibnizInfty,
    pub phi: InftyMorphism,
}

impl<'a> GinfMorphism<'a> {
    /// Checks that `φ` connects the two modules and that `f = g ∘ φ`.
    pub fn new(
        source: &'a LeibnizInfty,
        target: &'a LeibnizInfty,
        phi: InftyMorphism,
    ) -> Result<Self> {
        if *phi.source != **source.f.module() || *phi.target != **target.f.module() {
            return Err(Error::DomainMismatch(
                "φ must map the source module to the target module".into(),
            ));
        }
        phi.validate()?;
        let composite = target.f.morphism.compose(&phi)?;
        for i in 0..source.dim() {
            if composite.comps.image(i) != *source.image(i) {
                return Err(Violation::new(
                    "f = g ∘ φ",
                    format!("on {}", source.f.module().space().name(i)),
                )
                .into());
            }
        }
        Ok(GinfMorphism {
            source,
            target,
            phi,
        })
    }

    /// `G^∞(φ)_1 = φ`, `G^∞(φ)_{k+1}(m_1, …) = ι_{f(m_1)[1]} G^∞(φ)_k(m_2, …)`.
    pub fn component(&self, args: &[usize]) -> Ce {
        match args.split_first() {
            None => Ce::zero(),
            Some((&m, [])) => self.phi.comps.image(m),
            Some((&m, rest)) => {
                let inner = self.component(rest);
                contract_mixed(self.source.image(m), &inner, self.source.gd())
            }
        }
    }

    pub fn eval(&self, args: &[Ce], memo: &mut HashMap<Vec<usize>, Ce>) -> Ce {
        if args.len() == 1 {
            return self.phi.extend(&args[0]);
        }
        extend_multilinear(
            args,
            self.source.gd(),
            &self.source.shifted_degrees,
            false,
            |t| {
                memo.entry(t.to_vec())
                    .or_insert_with(|| self.component(t))
                    .clone()
            },
        )
    }

    /// The Leibniz∞[1] morphism equations on all basis tuples of arity
    /// `≤ n_max`: the components composed with `λ` on the inside equal `ν`
    /// applied to blocks of components, blocks ordered by their maxima.
    pub fn verify(&self, n_max: usize) -> std::result::Result<(), Violation> {
        let mut phi_memo = HashMap::new();
        let mut lam_memo = HashMap::new();
        let mut nu_memo = HashMap::new();
        let src = self.source;
        for n in 1..=n_max {
            let decompositions = ordered_by_maxima(n);
            for x in tuples(src.dim(), n) {
                let deg: Vec<i64> = x.iter().map(|&i| src.shifted_degrees[i]).collect();
                let mut total = Ce::zero();
                for j in 1..=n {
                    for k in j..=n {
                        let p = k - j;
                        for sigma in crate::trees::shuffles(&[p, j - 1]) {
                            let s = crate::graded::koszul_sign(&sigma, &deg[..k - 1])
                                * sign(sigma[..p].iter().map(|&a| deg[a]).sum());
                            let inner_args: Vec<usize> =
                                sigma[p..].iter().map(|&a| x[a]).chain([x[k - 1]]).collect();
                            let inner = lam_memo
                                .entry(inner_args.clone())
                                .or_insert_with(|| src.lambda_recursive(&inner_args))
                                .clone();
                            if inner.is_zero() {
                                continue;
                            }
                            let mut args: Vec<Ce> =
                                sigma[..p].iter().map(|&a| Ce::basis(x[a])).collect();
                            args.push(inner);
                            args.extend(x[k..].iter().map(|&a| Ce::basis(a)));
                            total.add_assign_scaled(&self.eval(&args, &mut phi_memo), &s);
                        }
                    }
                }
                for blocks in &decompositions {
                    let sigma: Vec<usize> = blocks.iter().flatten().copied().collect();
                    let s = crate::graded::koszul_sign(&sigma, &deg);
                    let args: Vec<Ce> = blocks
                        .iter()
                        .map(|b| {
                            let t: Vec<usize> = b.iter().map(|&a| x[a]).collect();
                            phi_memo
                                .entry(t.clone())
                                .or_insert_with(|| self.component(&t))
                                .clone()
                        })
                        .collect();
                    total.add_assign_scaled(&self.target.eval(&args, &mut nu_memo), &-s);
                }
                if let Some((w, t, c)) = total.first_term() {
                    let names: Vec<&str> =
                        x.iter().map(|&i| src.f.module().space().name(i)).collect();
                    return Err(Violation::new(
                        format!("Leibniz∞[1] morphism equation, n = {n}"),
                        format!(
                            "({}): coefficient {} on {} ⊗ {}",
                            names.join(", "),
                            fmt_q(&c),
                            src.f.algebra().word_name(&w),
                            self.target.f.module().space().name(t)
                        ),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// `μ′_k = (φ̲^∨ ⊗ id)(λ′_k)`: the structure of `f′` pulled back along a
/// dg Lie algebra morphism `φ̲ : g → g′`.
pub struct PulledBack<'a> {
    pub along: DglaMorphism,
    pub dual: KoszulDual,
    pub upstairs: &'a LeibnizInfty,
}

impl<'a> PulledBack<'a> {
    /// `μ′_n` on a basis tuple of `M′`.
    pub fn mu(&self, args: &[usize]) -> Ce {
        self.dual.apply(&self.upstairs.lambda_recursive(args))
    }

    /// `μ′_n` on cochains in `C(g, M′)`.
    pub fn eval(&self, args: &[Ce], memo: &mut HashMap<Vec<usize>, Ce>) -> Ce {
        let gd = self.along.source.gd();
        if args.len() == 1 {
            // φ̲^∨ d_tot′ restricted along φ̲
            let mut out = self.along.source.ce_differential(&args[0]);
            let module = self.upstairs.f.module();
            let mut pulled = Vec::with_capacity(module.dim());
            for i in 0..module.dim() {
                pulled.push(self.dual.apply(&module.structure().image(i)));
            }
            let s = WeightGradedMap::from_images(module.space(), module.space(), 1, &pulled);
            out.add_assign_scaled(&s.extend(&args[0], gd), &one());
            return out;
        }
        extend_multilinear(args, gd, &self.upstairs.shifted_degrees, true, |t| {
            memo.entry(t.to_vec()).or_insert_with(|| self.mu(t)).clone()
        })
    }

    /// `φ(λ_n(m_1, …, m_n)) = μ′_n(φ(m_1), …, φ(m_n))` on all basis tuples of
    /// arity `≤ n_max`, for an ∞-morphism `φ : M ⇝ M′` of `g`-modules given by
    /// its components.
    pub fn verify_strict_morphism(
        &self,
        source: &LeibnizInfty,
        phi: &WeightGradedMap,
        n_max: usize,
    ) -> std::result::Result<(), Violation> {
        let gd = self.along.source.gd();
        let mut memo = HashMap::new();
        for n in 1..=n_max {
            for x in tuples(source.dim(), n) {
                let lhs = phi.extend(&source.lambda_recursive(&x), gd);
                let args: Vec<Ce> = x.iter().map(|&i| phi.image(i)).collect();
                let rhs = self.eval(&args, &mut memo);
                if let Some((w, t, c)) = lhs.sub(&rhs).first_term() {
                    let names: Vec<&str> = x
                        .iter()
                        .map(|&i| source.f.module().space().name(i))
                        .collect();
                    return Err(Violation::new(
                        format!("φ ∘ λ_{n} = μ′_{n} ∘ φ^⊗{n}"),
                        format!(
                            "({}): discrepancy {} on {} ⊗ {}",
                            names.join(", "),
                            fmt_q(&c),
                            self.along.source.word_name(&w),
                            self.upstairs.f.module().space().name(t)
                        ),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Pulls the structure of `f′ : M′ ⇝ g′` back along `φ̲ : g → g′`.
pub fn pullback_structure<'a>(
    along: &DglaMorphism,
    upstairs: &'a LeibnizInfty,
) -> Result<PulledBack<'a>> {
    if *along.target != **upstairs.f.algebra() {
        return Err(Error::DomainMismatch(
            "φ̲ must land in the algebra of f′".into(),
        ));
    }
    let dual = along.koszul_dual();
    dual.verify_chain_map(&along.target, &along.source)?;
    Ok(PulledBack {
        along: along.clone(),
        dual,
        upstairs,
    })
}

/// Checks the data of a morphism `(φ, φ̲)` of weak Loday–Pirashvili modules:
/// `φ` intertwines `d_tot^M` with the pulled-back `d_tot^{M′}` and
/// `φ̲ ∘ f = φ̲^∨ f′ ∘ φ`.
pub fn check_lp_morphism(
    source: &LeibnizInfty,
    pulled: &PulledBack<'_>,
    phi: &WeightGradedMap,
) -> std::result::Result<(), Violation> {
    let gd = pulled.along.source.gd();
    let upstairs = pulled.upstairs;
    let mut memo = HashMap::new();
    let mut f_prime = Vec::with_capacity(upstairs.dim());
    for i in 0..upstairs.dim() {
        f_prime.push(pulled.dual.apply(upstairs.image(i)));
    }
    let f_prime = WeightGradedMap::from_images(
        upstairs.f.module().space(),
        upstairs.f.algebra().space(),
        0,
        &f_prime,
    );
    let push = WeightGradedMap::strict(&pulled.along.map);
    for i in 0..source.dim() {
        let name = source.f.module().space().name(i);
        let lhs = phi.extend(&source.f.module().d_tot(&Ce::basis(i)), gd);
        let rhs = pulled.eval(&[phi.image(i)], &mut memo);
        if lhs != rhs {
            return Err(Violation::new(
                "φ is an ∞-morphism over g",
                format!("on {name}"),
            ));
        }
        let lhs = push.extend(source.image(i), gd);
        let rhs = f_prime.extend(&phi.image(i), gd);
        if lhs != rhs {
            return Err(Violation::new("φ̲ ∘ f = φ̲^∨ f′ ∘ φ", format!("on {name}")));
        }
    }
    Ok(())
}

/// The Leibniz algebra on `H_tan(M)` obtained from `H(f₀)`, compared with
/// the truncation of `λ₂`.
#[derive(Clone, Debug)]
pub struct HtanCertificate {
    /// Representative cocycles of the basis classes of `H_tan(M)`.
    pub representatives: Vec<Vec<Q>>,
    pub leibniz: LeibnizAlgebra,
    /// `H(f₀)` in class coordinates, one column per class of `H_tan(M)`.
    pub tangent_map: Vec<Vec<Q>>,
}

/// Builds `H(f₀) : H_tan(M) → H_tan(g)`, checks that it is equivariant, and
/// checks `ũ ◇ ṽ = (-1)^{|u|-1} (Pr_M λ₂(u[1], v[1]))~` on all pairs of
/// basis classes.
pub fn htan_compatibility(ev: &LeibnizInfty) -> Result<HtanCertificate> {
    let f = &ev.f;
    let m = f.module();
    let g = f.algebra();
    let hm = m.tangent_cohomology()?;
    let hg = tangent_cohomology_lie(g)?;
    let f0 = f.morphism.leading();
    let mut reps = Vec::new();
    let mut basis = Vec::new();
    for piece in &hm {
        for (i, r) in piece.representatives.iter().enumerate() {
            basis.push((format!("H{}_{}", piece.degree, i), piece.degree));
            reps.push(r.clone());
        }
    }
    let space = GradedSpace::new(basis)?;
    let class_of = |n: i64, v: &[Q]| -> Result<Vec<Q>> {
        let mut out = vec![Q::zero(); reps.len()];
        let mut offset = 0;
        for piece in &hm {
            if piece.degree == n {
                let c = piece.coordinates(v).ok_or_else(|| {
                    Error::NotClosed(format!("vector of degree {n} is not a d₀-cocycle"))
                })?;
                for (i, x) in c.into_iter().enumerate() {
                    out[offset + i] = x;
                }
                return Ok(out);
            }
            offset += piece.dimension;
        }
        if is_zero_vec(v) {
            Ok(out)
        } else {
            Err(Error::NotClosed(format!(
                "nonzero vector in empty degree {n}"
            )))
        }
    };
    let to_ce = |v: &[Q]| {
        let mut e = Ce::zero();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() {
                e.add_term(Vec::new(), i, c.clone());
            }
        }
        e
    };
    // ρ(x; v) = ι_{x[1]} d₁ v for x ∈ g and v ∈ M
    let act = |x: &[Q], v: &[Q]| -> Vec<Q> {
        let mut out = vec![Q::zero(); m.dim()];
        for (a, ca) in x.iter().enumerate() {
            for (b, cb) in v.iter().enumerate() {
                if ca.is_zero() || cb.is_zero() {
                    continue;
                }
                for (t, e) in crate::lp::action(m, a, b).into_iter().enumerate() {
                    out[t] += ca * cb * e;
                }
            }
        }
        out
    };
    let mut tangent_map = Vec::new();
    for (i, r) in reps.iter().enumerate() {
        let image = f0.apply(r);
        let c = hg
            .class_of(space.degree(i), &image)
            .ok_or_else(|| Error::NotClosed(format!("f₀({}) is not a cocycle", space.name(i))))?;
        tangent_map.push(c);
    }
    // equivariance of H(f₀) on representatives
    for (a, x) in hg.representatives.iter().enumerate() {
        for (i, u) in reps.iter().enumerate() {
            let n = hg.algebra.space().degree(a) + space.degree(i);
            let lhs = hg.class_of(n, &f0.apply(&act(x, u)));
            let rhs = hg.class_of(n, &g.bracket(x, &f0.apply(u)));
            if lhs.is_none() || lhs != rhs {
                return Err(Violation::new(
                    "H(f₀) is equivariant",
                    format!("({}, {})", hg.algebra.space().name(a), space.name(i)),
                )
                .into());
            }
        }
    }
    let mut leibniz = LeibnizAlgebra::new(space.clone());
    leibniz.differential = LinearMap::zero(&space, &space, 1);
    let mut memo = HashMap::new();
    for (i, u) in reps.iter().enumerate() {
        let fu = f0.apply(u);
        for (j, v) in reps.iter().enumerate() {
            let n = space.degree(i) + space.degree(j);
            let lp_side = class_of(n, &act(&fu, v))?;
            let l2 = ev.eval(&[to_ce(u), to_ce(v)], &mut memo);
            let projected = weight_zero_part(&l2, m.dim());
            let mut lambda_side = class_of(n, &projected)?;
            if is_odd(space.degree(i) - 1) {
                lambda_side.iter_mut().for_each(|c| *c = -c.clone());
            }
            if lp_side != lambda_side {
                return Err(Violation::new(
                    "ũ ◇ ṽ = (-1)^{|u|-1} (Pr_M λ₂(u[1], v[1]))~",
                    format!("({}, {})", space.name(i), space.name(j)),
                )
                .into());
            }
            let terms: Vec<(usize, Q)> = lp_side
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            if !terms.is_empty() {
                leibniz.bracket.insert((i, j), terms);
            }
        }
    }
    leibniz.validate()?;
    Ok(HtanCertificate {
        representatives: reps,
        leibniz,
        tangent_map,
    })
}

/// All `n`-tuples over `0..dim` in lexicographic order.
pub fn tuples(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * dim);
        for t in &out {
            for i in 0..dim {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}
