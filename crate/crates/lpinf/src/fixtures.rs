//! Small worked examples used by tests, the CLI and the FFI layer.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ce::{Ce, WeightGradedMap};
use crate::dgla::{DgLie, DglaData, SmallCdga};
use crate::error::Result;
use crate::graded::{GradedSpace, LinearMap};
use crate::io::{self, name, SpecDocument};
use crate::lfmod::{adjoint_module, InftyMorphism, LfModule};
use crate::lp::{
    cocycle_homotopy, splitting_homotopy, wlp_from_dgla_pair, wlp_from_two_cocycle, LeibnizAlgebra,
    LiePair, WeakLp,
};
use crate::model::{gauge, HomotopyCertificate};
use crate::scalar::{is_odd, one, q};

/// `sl_2` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`, all in degree 0.
pub fn sl2_data() -> DglaData {
    let sp = GradedSpace::new([("h", 0), ("e", 0), ("f", 0)]).expect("distinct names");
    let mut d = DglaData::new(sp);
    d.set_bracket("h", "e", "e", q(2)).unwrap();
    d.set_bracket("h", "f", "f", q(-2)).unwrap();
    d.set_bracket("e", "f", "h", q(1)).unwrap();
    d
}

pub fn sl2() -> Arc<DgLie> {
    DgLie::new(sl2_data()).expect("sl2 is a Lie algebra")
}

/// Abelian, generators in degrees 0, 1 and -1.
pub fn abelian_data() -> DglaData {
    DglaData::new(GradedSpace::new([("x", 0), ("y", 1), ("z", -1)]).expect("distinct names"))
}

pub fn abelian() -> Arc<DgLie> {
    DgLie::new(abelian_data()).expect("abelian")
}

/// `a` in degree 0, `b` in degree 1, `da = b`, zero bracket.
pub fn arrow_data() -> DglaData {
    let mut d = DglaData::new(GradedSpace::new([("a", 0), ("b", 1)]).expect("distinct names"));
    d.set_differential("a", "b", q(1)).unwrap();
    d
}

pub fn arrow() -> Arc<DgLie> {
    DgLie::new(arrow_data()).expect("a -> b")
}

/// The acyclic cone `sl_2 ⊗ K[ε]/ε²`.
pub fn sl2_cone() -> Arc<DgLie> {
    DgLie::tensor_dual_numbers(&sl2()).expect("cone of sl2")
}

pub fn sl2_cone_data() -> DglaData {
    sl2_cone().data().clone()
}

/// Two-dimensional non-abelian `[a, b] = b`.
pub fn aff_data() -> DglaData {
    let mut d = DglaData::new(GradedSpace::new([("a", 0), ("b", 0)]).expect("distinct names"));
    d.set_bracket("a", "b", "b", q(1)).unwrap();
    d
}

pub fn aff() -> Arc<DgLie> {
    DgLie::new(aff_data()).expect("aff")
}

/// `aff ⊕ K c` with `c` central.
pub fn aff_central_data() -> DglaData {
    let mut d =
        DglaData::new(GradedSpace::new([("a", 0), ("b", 0), ("c", 0)]).expect("distinct names"));
    d.set_bracket("a", "b", "b", q(1)).unwrap();
    d
}

pub fn aff_central() -> Arc<DgLie> {
    DgLie::new(aff_central_data()).expect("aff + c")
}

/// The Borel subalgebra span{h, e} of `sl_2`.
pub fn borel_data() -> DglaData {
    let mut d = DglaData::new(GradedSpace::new([("h", 0), ("e", 0)]).expect("distinct names"));
    d.set_bracket("h", "e", "e", q(2)).unwrap();
    d
}

pub fn borel_cone() -> Arc<DgLie> {
    DgLie::tensor_dual_numbers(&DgLie::new(borel_data()).expect("borel"))
        .expect("cone of the Borel")
}

/// Named invalid inputs together with the check each one must fail.
pub fn corrupted() -> Vec<(&'static str, Result<DglaData>, &'static str)> {
    let mut out = Vec::new();
    let mut a = sl2_data();
    a.bracket.clear();
    let r = (|| {
        a.set_bracket("h", "e", "e", q(2))?;
        a.set_bracket("h", "f", "f", q(-2))?;
        a.set_bracket("e", "f", "h", q(1))?;
        a.set_bracket("e", "f", "e", q(1))?;
        Ok(a)
    })();
    out.push(("sl2 with [e,f] = h + e", r, "Jacobi identity"));

    let mut b = sl2_data();
    let r = b.set_bracket("h", "e", "e", q(1)).map(|_| b);
    out.push(("sl2 with [h,e] = 3e", r, "Jacobi identity"));

    let mut c = sl2_data();
    let r = c.set_bracket("h", "h", "e", q(1)).map(|_| c);
    out.push(("sl2 with [h,h] = e", r, "graded antisymmetry"));

    let mut d = abelian_data();
    let r = d.set_bracket("y", "y", "x", q(1)).map(|_| d);
    out.push(("abelian with [y,y] = x", r, "bracket degree"));

    let mut e = sl2_cone_data();
    let r = e.set_differential("e_eps", "e", q(1)).map(|_| e);
    out.push((
        "cone with d(e_eps) = 2e",
        r,
        "d is a derivation of the bracket",
    ));
    out
}

/// `K[ε]/ε²` with `|ε| = deg` and zero differential.
pub fn exterior_on(deg: i64) -> SmallCdga {
    let space = GradedSpace::new([("", 0), ("_o", deg)]).expect("distinct names");
    let mut product = BTreeMap::new();
    product.insert((0, 0), vec![(0, q(1))]);
    product.insert((0, 1), vec![(1, q(1))]);
    product.insert((1, 0), vec![(1, q(1))]);
    let differential = LinearMap::zero(&space, &space, 1);
    SmallCdga {
        space,
        product,
        differential,
    }
}

/// `K[u]/u³` with `|u| = deg` and zero differential.
pub fn truncated_polynomial(deg: i64) -> SmallCdga {
    let space = GradedSpace::new([("", 0), ("_u", deg), ("_uu", 2 * deg)]).expect("distinct names");
    let mut product = BTreeMap::new();
    for i in 0..3usize {
        for j in 0..3usize {
            if i + j < 3 {
                product.insert((i, j), vec![(i + j, q(1))]);
            }
        }
    }
    let differential = LinearMap::zero(&space, &space, 1);
    SmallCdga {
        space,
        product,
        differential,
    }
}

/// `(sl_2 ⊗ Λ[o]) ⊗ K[ε]/ε²` with `|o| = 1`: odd and even degrees together
/// with a nonzero differential. Used to pin sign conventions.
pub fn graded_test_algebra() -> Arc<DgLie> {
    let a = DgLie::tensor_cdga(&sl2(), &exterior_on(1)).expect("sl2 ⊗ Λ");
    DgLie::tensor_dual_numbers(&a).expect("cone")
}

/// `sl_2 ⊗ Λ[o]` with `|o| = 1`.
pub fn graded_sl2() -> Arc<DgLie> {
    DgLie::tensor_cdga(&sl2(), &exterior_on(1)).expect("sl2 ⊗ Λ")
}

/// The two-cocycle `ξ_a ξ_b` on `aff`.
pub fn aff_cocycle() -> Ce {
    Ce::term(vec![0, 1], 0, one())
}

/// Weak LP module of the cocycle `ξ_a ξ_b` on `aff`, paired into `K[2]`.
pub fn pairing_module() -> WeakLp {
    wlp_from_two_cocycle(&aff(), &aff_cocycle(), 2).expect("ξ_a ξ_b is closed")
}

/// `α = ξ_a ξ_b` and `α′ = 0` are cohomologous via `η = -ξ_b`.
pub fn pairing_homotopy() -> HomotopyCertificate {
    let eta = Ce::term(vec![1], 0, q(-1));
    cocycle_homotopy(&aff(), &aff_cocycle(), &Ce::zero(), &eta, 2).expect("d_CE η = α")
}

/// The pair `borel ⊗ K[ε]/ε² ⊂ sl_2 ⊗ K[ε]/ε²` with its canonical splitting.
pub fn lie_pair() -> (LiePair, LinearMap) {
    let pair = LiePair::new(&sl2_cone(), &["h", "e", "h_eps", "e_eps"]).expect("subalgebra");
    let j = pair.canonical_splitting();
    (pair, j)
}

/// `j′(f) = f + e`: not a cochain map, so the leading component is nonzero.
pub fn pair_lambda(pair: &LiePair) -> LinearMap {
    let mut lambda = LinearMap::zero(&pair.quotient, pair.sub.space(), 0);
    lambda.add_entry(0, 1, one()).expect("degree 0");
    lambda
}

/// Weak LP module of the Lie pair for the splitting `j + λ`.
pub fn lie_pair_module() -> WeakLp {
    let (pair, j) = lie_pair();
    let jp = j
        .add(
            &pair
                .inclusion
                .compose(&pair_lambda(&pair))
                .expect("composable"),
        )
        .expect("same shape");
    wlp_from_dgla_pair(&pair, &jp).expect("section")
}

/// Homotopy between the Lie-pair modules of `j` and `j + λ`.
pub fn lie_pair_homotopy() -> HomotopyCertificate {
    let (pair, j) = lie_pair();
    splitting_homotopy(&pair, &j, &pair_lambda(&pair)).expect("section")
}

/// `x ◇ x = y` on `span{x, y}`: Leibniz, not Lie.
pub fn non_lie_leibniz() -> LeibnizAlgebra {
    let mut l =
        LeibnizAlgebra::new(GradedSpace::new([("x", 0), ("y", 0)]).expect("distinct names"));
    l.set_bracket("x", "x", "y", one()).expect("degree 0");
    l
}

/// `id + d_tot∘H + H∘d_tot` on the adjoint module for a dense weight-1 `H`
/// of degree -1; the result has a weight-2 component.
pub fn perturbed_identity(g: &Arc<DgLie>) -> WeakLp {
    let ad = adjoint_module(g);
    let space = ad.space().clone();
    let n = g.dim();
    let mut h_images = vec![Ce::zero(); n];
    for (m, img) in h_images.iter_mut().enumerate() {
        for x in 0..n {
            for y in 0..n {
                if g.gd()[x] + space.degree(y) == space.degree(m) - 1 {
                    img.add_term(vec![x as u32], y, q(((m + 2 * x + 3 * y) % 5) as i64 - 2));
                }
            }
        }
    }
    let h = WeightGradedMap::from_images(&space, &space, -1, &h_images);
    let images: Vec<Ce> = (0..n)
        .map(|i| {
            let mut e = Ce::basis(i);
            e.add_assign_scaled(&ad.d_tot(&h.image(i)), &one());
            e.add_assign_scaled(&h.extend(&ad.d_tot(&Ce::basis(i)), g.gd()), &one());
            e
        })
        .collect();
    WeakLp::new(ad, WeightGradedMap::from_images(&space, &space, 0, &images))
        .expect("conjugate of the identity")
}

/// A unipotent gauge `id + ψ₁` on `m` with a dense weight-1 part in odd generators.
pub fn weight_one_gauge(m: &Arc<LfModule>) -> (Arc<LfModule>, InftyMorphism) {
    let gd = m.gd();
    let space = m.space();
    let mut images = Vec::with_capacity(m.dim());
    for i in 0..m.dim() {
        let mut e = Ce::basis(i);
        for (x, &dx) in gd.iter().enumerate() {
            for y in 0..m.dim() {
                if is_odd(dx) && dx + space.degree(y) == space.degree(i) {
                    e.add_term(vec![x as u32], y, q(((i + 2 * x + 3 * y) % 5) as i64 - 2));
                }
            }
        }
        images.push(e);
    }
    gauge(m, WeightGradedMap::from_images(space, space, 0, &images)).expect("unipotent gauge")
}

/// The projection `M̃ ⊕ M → M̃ ⇝ M` through a weight-1 gauge, `M` the adjoint
/// module of `sl_2 ⊗ Λ[o]`: a fibration with a nonzero weight-1 component.
pub fn perturbed_fibration() -> InftyMorphism {
    let m = adjoint_module(&graded_sl2());
    let (mt, g) = weight_one_gauge(&m);
    let sum = LfModule::direct_sum(&mt, "", &m, "'").expect("distinct names");
    let mut pr = LinearMap::zero(sum.space(), mt.space(), 0);
    for i in 0..mt.dim() {
        pr.add_entry(i, i, one()).expect("degree 0");
    }
    let pr = InftyMorphism::strict(sum, mt, &pr).expect("strict projection");
    g.compose(&pr).expect("composable")
}

/// The documents shipped in the fixture directory, by file name.
pub fn documents() -> Vec<(&'static str, SpecDocument)> {
    let mut out = vec![
        ("sl2.toml", io::lp_document(&WeakLp::identity(&sl2()))),
        ("abelian.toml", io::algebra_document(&abelian())),
        ("arrow.toml", io::algebra_document(&arrow())),
        (
            "graded.toml",
            io::lp_document(&perturbed_identity(&graded_test_algebra())),
        ),
    ];

    let mut pairing = io::lp_document(&pairing_module());
    let cert = pairing_homotopy();
    pairing
        .morphisms
        .insert(name("f_zero"), io::morphism_spec("M", "ad", &cert.f_prime));
    let mut pairing_h = SpecDocument::default();
    pairing_h
        .homotopies
        .insert(name("h"), io::homotopy_spec("f", "f_zero", &cert));
    out.push(("pairing.toml", pairing));
    out.push(("pairing_homotopy.toml", pairing_h));

    let mut pair = io::lp_document(&lie_pair_module());
    let cert = lie_pair_homotopy();
    pair.morphisms
        .insert(name("f_canonical"), io::morphism_spec("M", "ad", &cert.f));
    let mut pair_h = SpecDocument::default();
    pair_h
        .homotopies
        .insert(name("h"), io::homotopy_spec("f_canonical", "f", &cert));
    out.push(("lie_pair.toml", pair));
    out.push(("lie_pair_homotopy.toml", pair_h));

    out.push((
        "leibniz_xx.toml",
        SpecDocument {
            leibniz: Some(io::leibniz_spec(&non_lie_leibniz())),
            ..SpecDocument::default()
        },
    ));

    let p = perturbed_fibration();
    let (b, q) = weight_one_gauge(&p.target);
    let mut fib = io::algebra_document(&graded_sl2());
    fib.modules.insert(name("E"), io::module_spec(&p.source));
    fib.modules.insert(name("B"), io::module_spec(&p.target));
    fib.modules.insert(name("P"), io::module_spec(&b));
    fib.morphisms
        .insert(name("p"), io::morphism_spec("E", "B", &p));
    fib.morphisms
        .insert(name("q"), io::morphism_spec("P", "B", &q));
    out.push(("fibration.toml", fib));
    out
}
