//! Chevalley–Eilenberg cochains `C(g, M) = S(g^∨[-1]) ⊗ M`.
//!
//! A cochain is a sparse map from `(word, target basis index)` to a rational
//! coefficient. Words are multisets of generator indices stored in ascending
//! order; the generator dual to the basis vector `x` has degree `1 - |x|`.
//! All Koszul signs are produced when words are normalized, so two cochains
//! are equal exactly when their term maps are equal.
//!
//! The operations here only need the list of generator degrees; the
//! Chevalley–Eilenberg differential itself lives with the dg Lie algebra.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::scalar::{is_odd, one, Q};

pub type Word = Vec<u32>;

/// Degree of a word given generator degrees.
pub fn word_degree(w: &[u32], gd: &[i64]) -> i64 {
    w.iter().map(|&g| gd[g as usize]).sum()
}

/// Sort `raw` into canonical order, returning the Koszul sign of the sorting
/// permutation, or `None` when an odd generator repeats.
pub fn normalize_word(raw: &[u32], gd: &[i64]) -> Option<(Word, Q)> {
    let mut w: Word = raw.to_vec();
    let mut odd = false;
    // insertion sort, tracking adjacent swaps
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            if is_odd(gd[w[j - 1] as usize]) && is_odd(gd[w[j] as usize]) {
                odd = !odd;
            }
            w.swap(j - 1, j);
            j -= 1;
        }
    }
    for pair in w.windows(2) {
        if pair[0] == pair[1] && is_odd(gd[pair[0] as usize]) {
            return None;
        }
    }
    Some((w, if odd { -one() } else { one() }))
}

/// Product of two canonical words, by merging.
pub fn mul_words(a: &[u32], b: &[u32], gd: &[i64]) -> Option<(Word, Q)> {
    if a.is_empty() {
        return Some((b.to_vec(), one()));
    }
    if b.is_empty() {
        return Some((a.to_vec(), one()));
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut odd = false;
    let (mut i, mut j) = (0, 0);
    // odd letters of `a` not yet emitted, to sign letters of `b` jumping over them
    let mut pending_odd_a = a.iter().filter(|&&x| is_odd(gd[x as usize])).count();
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i] <= b[j]);
        if take_a {
            if is_odd(gd[a[i] as usize]) {
                pending_odd_a -= 1;
            }
            out.push(a[i]);
            i += 1;
        } else {
            let y = b[j];
            if is_odd(gd[y as usize]) {
                if out.last() == Some(&y) {
                    return None;
                }
                if pending_odd_a % 2 == 1 {
                    odd = !odd;
                }
            }
            out.push(y);
            j += 1;
        }
    }
    Some((out, if odd { -one() } else { one() }))
}

/// Sparse cochain. The target is implicit: indices refer to a basis chosen
/// by the caller (a module, or the one-dimensional space for pure elements).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ce {
    terms: BTreeMap<(Word, usize), Q>,
}

impl Ce {
    pub fn zero() -> Self {
        Ce::default()
    }

    /// The pure element `1 ∈ C^0(g)`.
    pub fn one() -> Self {
        Ce::basis(0)
    }

    /// `1 ⊗ m_i`.
    pub fn basis(i: usize) -> Self {
        Ce::term(Vec::new(), i, one())
    }

    pub fn term(w: Word, t: usize, c: Q) -> Self {
        let mut e = Ce::zero();
        e.add_term(w, t, c);
        e
    }

    /// Generator `ξ_g` as a pure element.
    pub fn generator(g: u32) -> Self {
        Ce::term(vec![g], 0, one())
    }

    pub fn add_term(&mut self, w: Word, t: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((w, t)) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `c · raw ⊗ t` after normalizing `raw`.
    pub fn add_raw(&mut self, raw: &[u32], t: usize, c: Q, gd: &[i64]) {
        if let Some((w, s)) = normalize_word(raw, gd) {
            self.add_term(w, t, c * s);
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Ce, s: &Q) {
        if s.is_zero() {
            return;
        }
        for ((w, t), c) in &other.terms {
            self.add_term(w.clone(), *t, c * s);
        }
    }

    pub fn add(&self, other: &Ce) -> Ce {
        let mut out = self.clone();
        out.add_assign_scaled(other, &one());
        out
    }

    pub fn sub(&self, other: &Ce) -> Ce {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-one());
        out
    }

    pub fn scale(&self, s: &Q) -> Ce {
        let mut out = Ce::zero();
        out.add_assign_scaled(self, s);
        out
    }

    pub fn neg(&self) -> Ce {
        self.scale(&-one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, usize, &Q)> {
        self.terms.iter().map(|((w, t), c)| (w, *t, c))
    }

    /// The smallest term, cloned; used for violation witnesses.
    pub fn first_term(&self) -> Option<(Word, usize, Q)> {
        self.terms
            .iter()
            .next()
            .map(|((w, t), c)| (w.clone(), *t, c.clone()))
    }

    pub fn coeff(&self, w: &[u32], t: usize) -> Q {
        self.terms
            .get(&(w.to_vec(), t))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.terms.keys().map(|(w, _)| w.len()).max()
    }

    pub fn weight_part(&self, k: usize) -> Ce {
        Ce {
            terms: self
                .terms
                .iter()
                .filter(|((w, _), _)| w.len() == k)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate_weight(&self, max: usize) -> Ce {
        Ce {
            terms: self
                .terms
                .iter()
                .filter(|((w, _), _)| w.len() <= max)
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Relabels targets through `f`, dropping terms where `f` returns `None`.
    pub fn map_targets(&self, f: impl Fn(usize) -> Option<usize>) -> Ce {
        let mut out = Ce::zero();
        for ((w, t), c) in &self.terms {
            if let Some(u) = f(*t) {
                out.add_term(w.clone(), u, c.clone());
            }
        }
        out
    }

    /// Relabels generators through `f` (followed by renormalization).
    pub fn map_generators(&self, f: impl Fn(u32) -> u32, gd_new: &[i64]) -> Ce {
        let mut out = Ce::zero();
        for ((w, t), c) in &self.terms {
            let raw: Vec<u32> = w.iter().map(|&g| f(g)).collect();
            out.add_raw(&raw, *t, c.clone(), gd_new);
        }
        out
    }

    /// Total degree of each term must agree; returns it for nonzero elements.
    pub fn degree(&self, gd: &[i64], target: &GradedSpace) -> Result<Option<i64>> {
        let mut deg = None;
        for (w, t) in self.terms.keys() {
            let d = word_degree(w, gd) + target.degree(*t);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(Error::DegreeMismatch(format!(
                        "inhomogeneous cochain with degrees {e} and {d}"
                    )))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Human-readable rendering with generator and target names.
    pub fn render(&self, gen_names: &[String], target: &GradedSpace) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|((w, t), c)| {
                let word = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter()
                        .map(|&g| gen_names[g as usize].clone())
                        .collect::<Vec<_>>()
                        .join("*")
                };
                let tn = if target.dim() == 0 {
                    "?"
                } else {
                    target.name(*t)
                };
                format!("({}) {} ⊗ {}", crate::scalar::fmt_q(c), word, tn)
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `ω · e` for a word `ω` with coefficient.
pub fn mul_word_ce(w: &[u32], c: &Q, e: &Ce, gd: &[i64]) -> Ce {
    let mut out = Ce::zero();
    if c.is_zero() {
        return out;
    }
    for (v, t, d) in e.terms() {
        if let Some((u, s)) = mul_words(w, v, gd) {
            out.add_term(u, t, c * d * s);
        }
    }
    out
}

/// `a · b` where `a` is a pure algebra element (all targets index 0).
pub fn multiply(a: &Ce, b: &Ce, gd: &[i64]) -> Ce {
    let mut out = Ce::zero();
    for (w, _, c) in a.terms() {
        out.add_assign_scaled(&mul_word_ce(w, c, b, gd), &one());
    }
    out
}

/// `ι_{x[1]}` on a single canonical word, as a list of `(word, sign)`.
pub fn contract_word(x: u32, w: &[u32], gd: &[i64]) -> Vec<(Word, Q)> {
    let mut out: Vec<(Word, Q)> = Vec::new();
    let x_odd = is_odd(gd[x as usize]);
    let mut prefix_odd = false;
    for (i, &y) in w.iter().enumerate() {
        if y == x {
            let mut rest = w.to_vec();
            rest.remove(i);
            let s = if x_odd && prefix_odd { -one() } else { one() };
            if let Some(last) = out.last_mut() {
                if last.0 == rest {
                    last.1 += s;
                    continue;
                }
            }
            out.push((rest, s));
        }
        if is_odd(gd[y as usize]) {
            prefix_odd = !prefix_odd;
        }
    }
    out.retain(|(_, s)| !s.is_zero());
    out
}

/// The contraction `ι_{x[1]}`: the derivation of degree `|x| - 1` pairing the
/// generator dual to `x` with 1, acting on the word factor only.
pub fn contract_vector(x: u32, e: &Ce, gd: &[i64]) -> Ce {
    let mut out = Ce::zero();
    for (w, t, c) in e.terms() {
        for (u, s) in contract_word(x, w, gd) {
            out.add_term(u, t, c * s);
        }
    }
    out
}

/// Contraction along a `g`-valued cochain `v = Σ ω ⊗ x`: `Σ ω · ι_{x[1]} e`.
pub fn contract_mixed(v: &Ce, e: &Ce, gd: &[i64]) -> Ce {
    let mut out = Ce::zero();
    for (w, x, c) in v.terms() {
        let inner = contract_vector(x as u32, e, gd);
        out.add_assign_scaled(&mul_word_ce(w, c, &inner, gd), &one());
    }
    out
}

/// Generalized Nijenhuis–Richardson product
/// `((ω_1 ⊗ x_1), …, (ω_k ⊗ x_k)) •_k (α ⊗ w)
///   = ± (ω_1 ⋯ ω_k) · (ι_{x_1[1]} ⋯ ι_{x_k[1]} α) ⊗ w`,
/// where moving `x_i` to the right past `ω_j` (`j > i`) costs
/// `(-1)^{(|x_i| - 1)|ω_j|}`.
pub fn nr_product(ws: &[&Ce], target: &Ce, gd: &[i64]) -> Ce {
    if ws.is_empty() {
        return target.clone();
    }
    if let Some(mw) = target.max_weight() {
        if ws.len() > mw {
            return Ce::zero();
        }
    } else {
        return Ce::zero();
    }
    // each input as Σ_x Ω^x ⊗ x with Ω^x split by parity
    let groups: Vec<Vec<(u32, bool, Ce)>> = ws.iter().map(|v| split_by_target(v, gd)).collect();
    if groups.iter().any(|g| g.is_empty()) {
        return Ce::zero();
    }
    // contractions are applied innermost first: ι_{x_k} before ι_{x_{k-1}}
    fn go(
        groups: &[Vec<(u32, bool, Ce)>],
        gd: &[i64],
        p: usize,
        inner: &Ce,
        chosen: &mut Vec<usize>,
        out: &mut Ce,
    ) {
        if p == 0 {
            let mut odd_pending = false;
            let mut sign_odd = false;
            let mut omega = Ce::one();
            for (i, &c) in chosen.iter().rev().enumerate() {
                let (x, w_odd, ref w) = groups[i][c];
                if odd_pending && w_odd {
                    sign_odd = !sign_odd;
                }
                odd_pending ^= is_odd(gd[x as usize]);
                omega = multiply(&omega, w, gd);
                if omega.is_zero() {
                    return;
                }
            }
            let s = if sign_odd { -one() } else { one() };
            out.add_assign_scaled(&multiply(&omega, inner, gd), &s);
            return;
        }
        let mut last: Option<(u32, Ce)> = None;
        for c in 0..groups[p - 1].len() {
            let x = groups[p - 1][c].0;
            let next = match &last {
                Some((y, e)) if *y == x => e.clone(),
                _ => {
                    let e = contract_vector(x, inner, gd);
                    last = Some((x, e.clone()));
                    e
                }
            };
            if next.is_zero() {
                continue;
            }
            chosen.push(c);
            go(groups, gd, p - 1, &next, chosen, out);
            chosen.pop();
        }
    }
    let mut out = Ce::zero();
    go(&groups, gd, groups.len(), target, &mut Vec::new(), &mut out);
    out
}

/// `v = Σ Ω ⊗ x` grouped by `x` and by the parity of `Ω`; each `Ω` is a pure
/// element (target 0).
pub fn split_by_target(v: &Ce, gd: &[i64]) -> Vec<(u32, bool, Ce)> {
    let mut map: BTreeMap<(usize, bool), Ce> = BTreeMap::new();
    for (w, x, c) in v.terms() {
        map.entry((x, is_odd(word_degree(w, gd))))
            .or_insert_with(Ce::zero)
            .add_term(w.clone(), 0, c.clone());
    }
    map.into_iter()
        .map(|((x, odd), e)| (x as u32, odd, e))
        .collect()
}

/// Extends a degree-`deg` derivation given on generators to all cochains:
/// `D(ξ_1 ⋯ ξ_p ⊗ m) = Σ_i (-1)^{deg·(|ξ_1|+…+|ξ_{i-1}|)} ξ_1 ⋯ D(ξ_i) ⋯ ξ_p ⊗ m`.
/// `images[g]` is a pure element.
pub fn apply_derivation(e: &Ce, deg: i64, images: &[Ce], gd: &[i64]) -> Ce {
    let mut out = Ce::zero();
    for (w, t, c) in e.terms() {
        let mut prefix_deg = 0i64;
        for i in 0..w.len() {
            let g = w[i] as usize;
            let img = &images[g];
            if !img.is_zero() {
                let s = if is_odd(deg) && is_odd(prefix_deg) {
                    -c.clone()
                } else {
                    c.clone()
                };
                // prefix · img · suffix
                let prefix = &w[..i];
                let suffix = &w[i + 1..];
                for (v, _, d) in img.terms() {
                    let Some((pv, s1)) = mul_words(prefix, v, gd) else {
                        continue;
                    };
                    let Some((full, s2)) = mul_words(&pv, suffix, gd) else {
                        continue;
                    };
                    out.add_term(full, t, &s * d * s1 * s2);
                }
            }
            prefix_deg += gd[g];
        }
    }
    out
}

/// Weight-graded family `w_0, …, w_K`; `comps[k][i]` is the image of source
/// basis vector `i` under the weight-`k` component, a cochain of pure weight
/// `k` valued in the target.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightGradedMap {
    pub source: GradedSpace,
    pub target: GradedSpace,
    pub shift: i64,
    pub comps: Vec<Vec<Ce>>,
}

impl WeightGradedMap {
    pub fn zero(source: &GradedSpace, target: &GradedSpace, shift: i64) -> Self {
        WeightGradedMap {
            source: source.clone(),
            target: target.clone(),
            shift,
            comps: vec![vec![Ce::zero(); source.dim()]],
        }
    }

    /// Weight-0 map from a linear map.
    pub fn strict(f: &crate::graded::LinearMap) -> Self {
        let mut m = WeightGradedMap::zero(&f.dom, &f.cod, f.shift);
        for ((a, b), c) in f.entries() {
            m.comps[0][*a].add_term(Vec::new(), *b, c.clone());
        }
        m
    }

    pub fn bound(&self) -> usize {
        self.comps.len().saturating_sub(1)
    }

    pub fn ensure_weight(&mut self, k: usize) {
        while self.comps.len() <= k {
            self.comps.push(vec![Ce::zero(); self.source.dim()]);
        }
    }

    /// Drops trailing zero components (keeps at least weight 0).
    pub fn trim(&mut self) {
        while self.comps.len() > 1 && self.comps.last().unwrap().iter().all(Ce::is_zero) {
            self.comps.pop();
        }
    }

    /// Full image `Σ_k w_k(m_i)`.
    pub fn image(&self, i: usize) -> Ce {
        let mut out = Ce::zero();
        for comp in &self.comps {
            out.add_assign_scaled(&comp[i], &one());
        }
        out
    }

    /// Weight-0 component as a linear map.
    pub fn leading(&self) -> crate::graded::LinearMap {
        let mut f = crate::graded::LinearMap::zero(&self.source, &self.target, self.shift);
        for (i, e) in self.comps[0].iter().enumerate() {
            for (w, t, c) in e.terms() {
                debug_assert!(w.is_empty());
                f.add_entry(i, t, c.clone())
                    .expect("degree-consistent component");
            }
        }
        f
    }

    /// Checks weights and degrees of every stored component.
    pub fn check_shape(&self, gd: &[i64]) -> Result<()> {
        for (k, comp) in self.comps.iter().enumerate() {
            if comp.len() != self.source.dim() {
                return Err(Error::DomainMismatch(format!(
                    "component {k} has {} entries for a {}-dimensional source",
                    comp.len(),
                    self.source.dim()
                )));
            }
            for (i, e) in comp.iter().enumerate() {
                for (w, t, _) in e.terms() {
                    if w.len() != k {
                        return Err(Error::DegreeMismatch(format!(
                            "component {k} of {} has a term of weight {}",
                            self.source.name(i),
                            w.len()
                        )));
                    }
                    if t >= self.target.dim() {
                        return Err(Error::DomainMismatch("target index out of range".into()));
                    }
                    let d = word_degree(w, gd) + self.target.degree(t);
                    if d != self.source.degree(i) + self.shift {
                        return Err(Error::DegreeMismatch(format!(
                            "component {k} of {} has degree {d}, expected {}",
                            self.source.name(i),
                            self.source.degree(i) + self.shift
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The C(g)-linear extension `ω ⊗ m ↦ (-1)^{|ω|·shift} ω · w(m)`.
    pub fn extend(&self, e: &Ce, gd: &[i64]) -> Ce {
        self.extend_with(e, gd, |t| self.image(t))
    }

    /// Extension of the single weight-`k` component.
    pub fn extend_component(&self, k: usize, e: &Ce, gd: &[i64]) -> Ce {
        match self.comps.get(k) {
            Some(comp) => self.extend_with(e, gd, |t| comp[t].clone()),
            None => Ce::zero(),
        }
    }

    fn extend_with(&self, e: &Ce, gd: &[i64], image: impl Fn(usize) -> Ce) -> Ce {
        let mut cache: Vec<Option<Ce>> = vec![None; self.source.dim()];
        let mut out = Ce::zero();
        for (w, t, c) in e.terms() {
            let img = cache[t].get_or_insert_with(|| image(t));
            if img.is_zero() {
                continue;
            }
            let s = if is_odd(self.shift) && is_odd(word_degree(w, gd)) {
                -c.clone()
            } else {
                c.clone()
            };
            for (v, u, d) in img.terms() {
                if let Some((x, sg)) = mul_words(w, v, gd) {
                    out.add_term(x, u, &s * d * sg);
                }
            }
        }
        out
    }

    /// Weightwise convolution `(self ∘ inner)_k = Σ_{p+q=k} ext(self_q)(inner_p)`.
    pub fn compose(&self, inner: &WeightGradedMap, gd: &[i64]) -> Result<WeightGradedMap> {
        if inner.target != self.source {
            return Err(Error::DomainMismatch("composable maps required".into()));
        }
        let mut out = WeightGradedMap::zero(&inner.source, &self.target, self.shift + inner.shift);
        for i in 0..inner.source.dim() {
            let img = self.extend(&inner.image(i), gd);
            for (w, t, c) in img.terms() {
                out.ensure_weight(w.len());
                out.comps[w.len()][i].add_term(w.clone(), t, c.clone());
            }
        }
        out.trim();
        Ok(out)
    }

    pub fn add(&self, other: &WeightGradedMap) -> Result<WeightGradedMap> {
        if self.source != other.source || self.target != other.target || self.shift != other.shift {
            return Err(Error::DomainMismatch(
                "summands have different shapes".into(),
            ));
        }
        let mut out = self.clone();
        out.ensure_weight(other.bound());
        for (k, comp) in other.comps.iter().enumerate() {
            for (i, e) in comp.iter().enumerate() {
                out.comps[k][i].add_assign_scaled(e, &one());
            }
        }
        out.trim();
        Ok(out)
    }

    pub fn scale(&self, s: &Q) -> WeightGradedMap {
        let mut out = self.clone();
        for comp in &mut out.comps {
            for e in comp.iter_mut() {
                *e = e.scale(s);
            }
        }
        out.trim();
        out
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.iter().all(Ce::is_zero))
    }

    /// Builds a map from full images, splitting them by weight.
    pub fn from_images(
        source: &GradedSpace,
        target: &GradedSpace,
        shift: i64,
        images: &[Ce],
    ) -> Self {
        let mut out = WeightGradedMap::zero(source, target, shift);
        for (i, img) in images.iter().enumerate() {
            for (w, t, c) in img.terms() {
                out.ensure_weight(w.len());
                out.comps[w.len()][i].add_term(w.clone(), t, c.clone());
            }
        }
        out.trim();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    // generators: 0 odd, 1 odd, 2 even
    const GD: [i64; 3] = [1, 1, 2];

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_word(&[1, 0], &GD), Some((vec![0, 1], q(-1))));
        assert_eq!(normalize_word(&[0, 0], &GD), None);
        assert_eq!(normalize_word(&[2, 2], &GD), Some((vec![2, 2], q(1))));
        assert_eq!(
            normalize_word(&[2, 1, 0], &GD),
            Some((vec![0, 1, 2], q(-1)))
        );
    }

    #[test]
    fn merge_agrees_with_normalize() {
        let words: Vec<Vec<u32>> = vec![
            vec![],
            vec![0],
            vec![1],
            vec![2],
            vec![0, 2],
            vec![1, 2, 2],
            vec![0, 1],
        ];
        for a in &words {
            for b in &words {
                let raw: Vec<u32> = a.iter().chain(b).copied().collect();
                assert_eq!(
                    mul_words(a, b, &GD),
                    normalize_word(&raw, &GD),
                    "{a:?} {b:?}"
                );
            }
        }
    }

    #[test]
    fn multiply_basics() {
        let x = Ce::generator(0);
        assert_eq!(multiply(&Ce::one(), &x, &GD), x);
        assert!(multiply(&x, &x, &GD).is_zero());
        let m = Ce::term(vec![1], 3, q(1));
        let a = multiply(&x, &m, &GD);
        let b = multiply(&Ce::generator(1), &Ce::term(vec![0], 3, q(1)), &GD);
        assert_eq!(a, b.neg());
    }

    #[test]
    fn contraction_basics() {
        assert!(contract_vector(0, &Ce::basis(2), &GD).is_zero());
        assert_eq!(
            contract_vector(0, &Ce::term(vec![0], 5, q(1)), &GD),
            Ce::basis(5)
        );
        assert!(contract_vector(1, &Ce::term(vec![0], 5, q(1)), &GD).is_zero());
        // even generator squared: ι ξ² = 2ξ
        assert_eq!(
            contract_vector(2, &Ce::term(vec![2, 2], 0, q(1)), &GD),
            Ce::term(vec![2], 0, q(2))
        );
        // ι_1(ξ_0 ξ_1) = -ξ_0
        assert_eq!(
            contract_vector(1, &Ce::term(vec![0, 1], 0, q(1)), &GD),
            Ce::term(vec![0], 0, q(-1))
        );
    }

    #[test]
    fn contraction_is_a_derivation() {
        let words: Vec<Vec<u32>> = vec![vec![], vec![0], vec![1], vec![2], vec![0, 2], vec![1, 2]];
        for x in 0..3u32 {
            for a in &words {
                for b in &words {
                    let ea = Ce::term(a.clone(), 0, q(1));
                    let eb = Ce::term(b.clone(), 0, q(1));
                    let lhs = contract_vector(x, &multiply(&ea, &eb, &GD), &GD);
                    let s = if is_odd(GD[x as usize]) && is_odd(word_degree(a, &GD)) {
                        q(-1)
                    } else {
                        q(1)
                    };
                    let rhs = multiply(&contract_vector(x, &ea, &GD), &eb, &GD)
                        .add(&multiply(&ea, &contract_vector(x, &eb, &GD), &GD).scale(&s));
                    assert_eq!(lhs, rhs, "x={x} a={a:?} b={b:?}");
                }
            }
        }
    }

    #[test]
    fn nr_product_single_reduces_to_contraction() {
        let alpha = Ce::term(vec![0, 1], 4, q(3));
        let v = Ce::term(vec![], 1, q(1));
        assert_eq!(
            nr_product(&[&v], &alpha, &GD),
            contract_vector(1, &alpha, &GD)
        );
        assert!(nr_product(&[&v], &Ce::basis(0), &GD).is_zero());
    }

    #[test]
    fn nr_product_two_matches_swap_rule() {
        // ((ξ_2 ⊗ x_0), (ξ_0 ⊗ x_1)) •_2 (ξ_0 ξ_1 ⊗ w)
        let v1 = Ce::term(vec![2], 0, q(1));
        let v2 = Ce::term(vec![0], 1, q(1));
        let alpha = Ce::term(vec![0, 1], 0, q(1));
        // x_0 (odd ι) passes ω_2 = ξ_0 (odd): sign -1
        // ι_0 ι_1 (ξ_0 ξ_1) = ι_0(-ξ_0) = -1
        // ω_1 ω_2 = ξ_2 ξ_0 = ξ_0 ξ_2
        let expected = Ce::term(vec![0, 2], 0, q(1));
        assert_eq!(nr_product(&[&v1, &v2], &alpha, &GD), expected);
    }
}
