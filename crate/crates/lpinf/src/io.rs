//! Text format for algebras, modules, morphisms and homotopies.
//!
//! Documents are TOML. Rationals are strings `"p"` or `"p/q"`. Sparse maps
//! are tables keyed by source basis name whose values are lists of
//! `[word, target, coefficient]` triples; a word lists generator names
//! (the algebra's basis names) separated by spaces, `""` being the unit.
//!
//! ```toml
//! [algebra]
//! basis = [["a", 0], ["b", 0]]
//! bracket = [["a", "b", "b", "1"]]
//!
//! [modules.ad]
//! adjoint = true
//! ```

use std::collections::BTreeMap;
use std::ops::Range;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::ce::{word_degree, Ce, WeightGradedMap};
use crate::dgla::{DgLie, DglaData};
use crate::error::{Error, Result};
use crate::graded::{GradedSpace, LinearMap};
use crate::lfmod::{adjoint_module, InftyMorphism, LfModule};
use crate::lp::{LeibnizAlgebra, WeakLp};
use crate::model::HomotopyCertificate;
use crate::scalar::{fmt_q, parse_q, sign, Q};

pub type Name = Spanned<String>;
/// `[word, target, coefficient]`.
pub type Term = (Name, Name, Name);
/// Source basis name to its image.
pub type Terms = BTreeMap<Name, Vec<Term>>;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    #[serde(default)]
    pub basis: Vec<(Name, i64)>,
    /// `[x, y, z, c]`: `c·z` is a summand of the bracket (or product) of `x` and `y`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bracket: Vec<(Name, Name, Name, Name)>,
    /// `[x, y, c]`: `c·y` is a summand of `dx`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<(Name, Name, Name)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub adjoint: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub basis: Vec<(Name, i64)>,
    /// `d_tot` on basis elements: all weights together.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub structure: Terms,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub components: Terms,
    pub source: Name,
    pub target: Name,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomotopySpec {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub components: Terms,
    pub f: Name,
    pub f_prime: Name,
}

/// Selects the weak Loday–Pirashvili module: an ∞-morphism into an adjoint module.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LpSpec {
    pub morphism: Name,
}

/// A whole document. Every section is optional; fields are in sorted order,
/// which is the order they are written in.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub homotopies: BTreeMap<Name, HomotopySpec>,
    /// A dg Leibniz algebra; `bracket` lists all ordered pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leibniz: Option<AlgebraSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lp: Option<LpSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<Name, ModuleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub morphisms: BTreeMap<Name, MorphismSpec>,
}

/// Line and column (both from 1) of a byte offset.
pub fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let mut end = offset.min(text.len());
    while !text.is_char_boundary(end) {
        end -= 1;
    }
    let before = &text[..end];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn located(text: &str, span: Range<usize>, message: impl Into<String>) -> Error {
    let (line, column) = line_column(text, span.start);
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse(text: &str) -> Result<SpecDocument> {
    toml::from_str(text).map_err(|e| {
        located(
            text,
            e.span().unwrap_or(0..0),
            e.message().trim().to_string(),
        )
    })
}

pub fn serialize(doc: &SpecDocument) -> String {
    toml::to_string(doc).expect("documents contain only strings, integers and tables")
}

impl SpecDocument {
    /// Adds every entry of `other`, which must not redefine existing names.
    pub fn merge(&mut self, other: SpecDocument, text: &str) -> Result<()> {
        fn join<V>(
            into: &mut BTreeMap<Name, V>,
            from: BTreeMap<Name, V>,
            text: &str,
        ) -> Result<()> {
            for (k, v) in from {
                if into.contains_key(&k) {
                    return Err(located(
                        text,
                        k.span(),
                        format!("{:?} is already defined", k.get_ref()),
                    ));
                }
                into.insert(k, v);
            }
            Ok(())
        }
        if other.algebra.is_some() {
            self.algebra = other.algebra;
        }
        if other.leibniz.is_some() {
            self.leibniz = other.leibniz;
        }
        if other.lp.is_some() {
            self.lp = other.lp;
        }
        join(&mut self.modules, other.modules, text)?;
        join(&mut self.morphisms, other.morphisms, text)?;
        join(&mut self.homotopies, other.homotopies, text)
    }
}

// ---------------------------------------------------------------------------
// Resolution

/// A document with every name resolved and every object constructed.
/// Construction validates algebras, modules and morphisms; homotopies and the
/// Leibniz algebra are only shape-checked.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub algebra: Arc<DgLie>,
    pub modules: BTreeMap<String, Arc<LfModule>>,
    pub morphisms: BTreeMap<String, InftyMorphism>,
    pub homotopies: BTreeMap<String, HomotopyCertificate>,
    pub leibniz: Option<LeibnizAlgebra>,
    pub lp: Option<WeakLp>,
}

struct Resolver<'a> {
    text: &'a str,
}

impl Resolver<'_> {
    fn err(&self, at: &Name, message: impl Into<String>) -> Error {
        located(self.text, at.span(), message)
    }

    fn scalar(&self, s: &Name) -> Result<Q> {
        parse_q(s.get_ref()).map_err(|e| match e {
            Error::Parse { message, .. } => self.err(s, message),
            other => other,
        })
    }

    fn index(&self, sp: &GradedSpace, n: &Name) -> Result<usize> {
        sp.index_of(n.get_ref())
            .ok_or_else(|| self.err(n, format!("unknown basis element {:?}", n.get_ref())))
    }

    fn space(&self, basis: &[(Name, i64)]) -> Result<GradedSpace> {
        for (i, (n, _)) in basis.iter().enumerate() {
            if n.get_ref().is_empty() || n.get_ref().chars().any(char::is_whitespace) {
                return Err(self.err(n, "basis names must be nonempty and contain no whitespace"));
            }
            if basis[..i].iter().any(|(m, _)| m.get_ref() == n.get_ref()) {
                return Err(self.err(n, format!("duplicate basis name {:?}", n.get_ref())));
            }
        }
        GradedSpace::new(basis.iter().map(|(n, d)| (n.get_ref().clone(), *d)))
    }

    fn word(&self, g: &DgLie, w: &Name) -> Result<Vec<u32>> {
        w.get_ref()
            .split_whitespace()
            .map(|x| {
                g.space()
                    .index_of(x)
                    .map(|i| i as u32)
                    .ok_or_else(|| self.err(w, format!("unknown generator {x:?}")))
            })
            .collect()
    }

    /// Images of a sparse map `source → C(g, target)` of the given degree.
    fn images(
        &self,
        g: &DgLie,
        source: &GradedSpace,
        target: &GradedSpace,
        shift: i64,
        terms: &Terms,
    ) -> Result<Vec<Ce>> {
        let mut images = vec![Ce::zero(); source.dim()];
        for (src, list) in terms {
            let i = self.index(source, src)?;
            for (w, t, c) in list {
                let raw = self.word(g, w)?;
                let j = self.index(target, t)?;
                let c = self.scalar(c)?;
                let deg = word_degree(&raw, g.gd()) + target.degree(j);
                if deg != source.degree(i) + shift {
                    return Err(self.err(
                        w,
                        format!(
                            "term of degree {deg} in the image of {:?} (degree {}) under a map of degree {shift}",
                            src.get_ref(),
                            source.degree(i)
                        ),
                    ));
                }
                images[i].add_raw(&raw, j, c, g.gd());
            }
        }
        Ok(images)
    }

    fn algebra(&self, a: &AlgebraSpec) -> Result<Arc<DgLie>> {
        let mut data = DglaData::new(self.space(&a.basis)?);
        for (x, y, z, c) in &a.bracket {
            let (i, j, _) = (
                self.index(&data.space, x)?,
                self.index(&data.space, y)?,
                self.index(&data.space, z)?,
            );
            let mut c = self.scalar(c)?;
            let (mut x, mut y) = (x, y);
            if i > j {
                c = -sign(data.space.degree(i) * data.space.degree(j)) * c;
                std::mem::swap(&mut x, &mut y);
            }
            data.set_bracket(x.get_ref(), y.get_ref(), z.get_ref(), c)?;
        }
        for (x, y, c) in &a.differential {
            let (i, j) = (self.index(&data.space, x)?, self.index(&data.space, y)?);
            let c = self.scalar(c)?;
            if data.space.degree(j) != data.space.degree(i) + 1 {
                return Err(self.err(x, "the differential raises degree by one"));
            }
            data.differential.add_entry(i, j, c)?;
        }
        DgLie::new(data)
    }

    fn leibniz(&self, a: &AlgebraSpec) -> Result<LeibnizAlgebra> {
        let mut l = LeibnizAlgebra::new(self.space(&a.basis)?);
        for (x, y, z, c) in &a.bracket {
            for n in [x, y, z] {
                self.index(&l.space, n)?;
            }
            let c = self.scalar(c)?;
            l.set_bracket(x.get_ref(), y.get_ref(), z.get_ref(), c)?;
        }
        for (x, y, c) in &a.differential {
            let (i, j) = (self.index(&l.space, x)?, self.index(&l.space, y)?);
            let c = self.scalar(c)?;
            if l.space.degree(j) != l.space.degree(i) + 1 {
                return Err(self.err(x, "the differential raises degree by one"));
            }
            l.differential.add_entry(i, j, c)?;
        }
        Ok(l)
    }

    fn module(&self, g: &Arc<DgLie>, name: &Name, m: &ModuleSpec) -> Result<Arc<LfModule>> {
        if m.adjoint {
            if !m.basis.is_empty() || !m.structure.is_empty() {
                return Err(self.err(name, "an adjoint module takes no basis or structure"));
            }
            return Ok(adjoint_module(g));
        }
        let space = self.space(&m.basis)?;
        let images = self.images(g, &space, &space, 1, &m.structure)?;
        LfModule::new(
            g.clone(),
            WeightGradedMap::from_images(&space, &space, 1, &images),
        )
    }

    fn lookup<'m, V>(&self, map: &'m BTreeMap<String, V>, n: &Name, what: &str) -> Result<&'m V> {
        map.get(n.get_ref())
            .ok_or_else(|| self.err(n, format!("unknown {what} {:?}", n.get_ref())))
    }
}

pub fn resolve(doc: &SpecDocument, text: &str) -> Result<Resolved> {
    let r = Resolver { text };
    let algebra = match &doc.algebra {
        Some(a) => r.algebra(a)?,
        None => DgLie::new(DglaData::new(GradedSpace::zero()))?,
    };
    let mut modules = BTreeMap::new();
    for (name, m) in &doc.modules {
        modules.insert(name.get_ref().clone(), r.module(&algebra, name, m)?);
    }
    let mut morphisms = BTreeMap::new();
    for (name, f) in &doc.morphisms {
        let src = r.lookup(&modules, &f.source, "module")?.clone();
        let tgt = r.lookup(&modules, &f.target, "module")?.clone();
        let images = r.images(&algebra, src.space(), tgt.space(), 0, &f.components)?;
        let comps = WeightGradedMap::from_images(src.space(), tgt.space(), 0, &images);
        morphisms.insert(name.get_ref().clone(), InftyMorphism::new(src, tgt, comps)?);
    }
    let mut homotopies = BTreeMap::new();
    for (name, h) in &doc.homotopies {
        let f = r.lookup(&morphisms, &h.f, "morphism")?.clone();
        let fp = r.lookup(&morphisms, &h.f_prime, "morphism")?.clone();
        if *f.source != *fp.source || *f.target != *fp.target {
            return Err(r.err(
                &h.f_prime,
                "homotopic morphisms must share source and target",
            ));
        }
        let images = r.images(
            &algebra,
            f.source.space(),
            f.target.space(),
            -1,
            &h.components,
        )?;
        let comps = WeightGradedMap::from_images(f.source.space(), f.target.space(), -1, &images);
        homotopies.insert(
            name.get_ref().clone(),
            HomotopyCertificate::new(f, fp, comps)?,
        );
    }
    let leibniz = doc.leibniz.as_ref().map(|l| r.leibniz(l)).transpose()?;
    let lp = match &doc.lp {
        Some(spec) => {
            let f = r.lookup(&morphisms, &spec.morphism, "morphism")?;
            if *f.target != *adjoint_module(&algebra) {
                return Err(r.err(
                    &spec.morphism,
                    "the LP morphism must land in the adjoint module",
                ));
            }
            Some(WeakLp::from_morphism(f.clone())?)
        }
        None => None,
    };
    Ok(Resolved {
        algebra,
        modules,
        morphisms,
        homotopies,
        leibniz,
        lp,
    })
}

/// `parse` followed by `resolve`.
pub fn load(text: &str) -> Result<(SpecDocument, Resolved)> {
    let doc = parse(text)?;
    let res = resolve(&doc, text)?;
    Ok((doc, res))
}

// ---------------------------------------------------------------------------
// Export

pub fn name(s: impl Into<String>) -> Name {
    Spanned::new(0..0, s.into())
}

fn basis_spec(sp: &GradedSpace) -> Vec<(Name, i64)> {
    (0..sp.dim())
        .map(|i| (name(sp.name(i)), sp.degree(i)))
        .collect()
}

fn differential_spec(d: &LinearMap) -> Vec<(Name, Name, Name)> {
    d.entries()
        .map(|((a, b), c)| (name(d.dom.name(*a)), name(d.cod.name(*b)), name(fmt_q(c))))
        .collect()
}

pub fn algebra_spec(g: &DgLie) -> AlgebraSpec {
    let sp = g.space();
    let mut bracket = Vec::new();
    for (&(i, j), v) in &g.data().bracket {
        for (k, c) in v {
            bracket.push((
                name(sp.name(i)),
                name(sp.name(j)),
                name(sp.name(*k)),
                name(fmt_q(c)),
            ));
        }
    }
    AlgebraSpec {
        basis: basis_spec(sp),
        bracket,
        differential: differential_spec(g.differential()),
    }
}

pub fn leibniz_spec(l: &LeibnizAlgebra) -> AlgebraSpec {
    let sp = &l.space;
    let mut bracket = Vec::new();
    for (&(i, j), v) in &l.bracket {
        for (k, c) in v {
            bracket.push((
                name(sp.name(i)),
                name(sp.name(j)),
                name(sp.name(*k)),
                name(fmt_q(c)),
            ));
        }
    }
    AlgebraSpec {
        basis: basis_spec(sp),
        bracket,
        differential: differential_spec(&l.differential),
    }
}

/// Sparse images of `map` with words spelled in the algebra's basis names.
pub fn terms_spec(g: &DgLie, map: &WeightGradedMap) -> Terms {
    let mut out = Terms::new();
    for i in 0..map.source.dim() {
        let e = map.image(i);
        if e.is_zero() {
            continue;
        }
        let list = e
            .terms()
            .map(|(w, t, c)| {
                let word: Vec<&str> = w.iter().map(|&x| g.space().name(x as usize)).collect();
                (
                    name(word.join(" ")),
                    name(map.target.name(t)),
                    name(fmt_q(c)),
                )
            })
            .collect();
        out.insert(name(map.source.name(i)), list);
    }
    out
}

pub fn module_spec(m: &LfModule) -> ModuleSpec {
    ModuleSpec {
        adjoint: false,
        basis: basis_spec(m.space()),
        structure: terms_spec(m.algebra(), m.structure()),
    }
}

pub fn adjoint_spec() -> ModuleSpec {
    ModuleSpec {
        adjoint: true,
        ..ModuleSpec::default()
    }
}

pub fn morphism_spec(source: &str, target: &str, f: &InftyMorphism) -> MorphismSpec {
    MorphismSpec {
        components: terms_spec(f.source.algebra(), &f.comps),
        source: name(source),
        target: name(target),
    }
}

pub fn homotopy_spec(f: &str, f_prime: &str, c: &HomotopyCertificate) -> HomotopySpec {
    HomotopySpec {
        components: terms_spec(c.f.source.algebra(), &c.h),
        f: name(f),
        f_prime: name(f_prime),
    }
}

/// The algebra and its adjoint module `ad`.
pub fn algebra_document(g: &DgLie) -> SpecDocument {
    let mut doc = SpecDocument {
        algebra: Some(algebra_spec(g)),
        ..SpecDocument::default()
    };
    doc.modules.insert(name("ad"), adjoint_spec());
    doc
}

/// A document holding a weak LP module: the algebra, the module `M` (unless
/// it is the adjoint module), the adjoint module `ad` and the morphism `f : M ⇝ ad` selected as `lp`.
pub fn lp_document(f: &WeakLp) -> SpecDocument {
    let mut doc = SpecDocument {
        algebra: Some(algebra_spec(f.algebra())),
        lp: Some(LpSpec {
            morphism: name("f"),
        }),
        ..SpecDocument::default()
    };
    let source = if **f.module() == *adjoint_module(f.algebra()) {
        "ad"
    } else {
        doc.modules.insert(name("M"), module_spec(f.module()));
        "M"
    };
    doc.modules.insert(name("ad"), adjoint_spec());
    doc.morphisms
        .insert(name("f"), morphism_spec(source, "ad", &f.morphism));
    doc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const SL2: &str = r#"[algebra]
basis = [["h", 0], ["e", 0], ["f", 0]]
bracket = [["h", "e", "e", "2"], ["h", "f", "f", "-2"], ["e", "f", "h", "1"]]

[modules.ad]
adjoint = true
"#;

    #[test]
    fn parses_and_resolves_sl2() {
        let (doc, res) = load(SL2).unwrap();
        assert_eq!(*res.algebra, *fixtures::sl2());
        assert_eq!(res.modules["ad"].dim(), 3);
        assert_eq!(parse(&serialize(&doc)).unwrap(), doc);
    }

    #[test]
    fn empty_algebra_is_zero() {
        let (_, res) = load("[algebra]\n").unwrap();
        assert_eq!(res.algebra.dim(), 0);
        let (_, res) = load("").unwrap();
        assert_eq!(res.algebra.dim(), 0);
    }

    #[test]
    fn zero_denominator_is_located() {
        let text = SL2.replace("\"-2\"", "\"1/0\"");
        match load(&text) {
            Err(Error::Parse {
                line,
                column,
                message,
            }) => {
                assert_eq!((line, column), (3, 50));
                assert!(message.contains("zero denominator"), "{message}");
            }
            other => panic!("expected a located error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_names_and_bad_degrees_are_located() {
        let text = SL2.replace("[\"e\", \"f\", \"h\"", "[\"e\", \"g\", \"h\"");
        assert!(matches!(load(&text), Err(Error::Parse { line: 3, .. })));
        let text = SL2.replace("[\"f\", 0]", "[\"f\", 0.5]");
        assert!(matches!(load(&text), Err(Error::Parse { line: 2, .. })));
        let text = SL2.replace("adjoint = true", "adjoint = true\nextra = 1");
        assert!(matches!(load(&text), Err(Error::Parse { line: 7, .. })));
        let text = format!("{SL2}\n[modules.M]\nbasis = [[\"m\", 0]]\nstructure = {{ m = [[\"\", \"m\", \"1\"]] }}\n");
        let r = load(&text);
        assert!(
            matches!(
                r,
                Err(Error::Parse {
                    line: 10,
                    column: 21,
                    ..
                })
            ),
            "{r:?}"
        );
    }

    #[test]
    fn reversed_bracket_arguments_use_antisymmetry() {
        let text = SL2.replace(
            "[\"e\", \"f\", \"h\", \"1\"]",
            "[\"f\", \"e\", \"h\", \"-1\"]",
        );
        let (_, res) = load(&text).unwrap();
        assert_eq!(*res.algebra, *fixtures::sl2());
    }

    #[test]
    fn lp_documents_round_trip() {
        for f in [
            fixtures::pairing_module(),
            fixtures::lie_pair_module(),
            WeakLp::identity(&fixtures::sl2()),
        ] {
            let doc = lp_document(&f);
            let text = serialize(&doc);
            let (back, res) = load(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(serialize(&back), text);
            assert_eq!(res.lp.unwrap().morphism.comps, f.morphism.comps);
        }
    }

    #[test]
    fn mathematical_failures_are_not_parse_errors() {
        let text = SL2.replace(
            "[\"h\", \"e\", \"e\", \"2\"]",
            "[\"h\", \"e\", \"e\", \"3\"]",
        );
        let e = load(&text).unwrap_err();
        assert!(e.is_mathematical(), "{e}");
    }
}
