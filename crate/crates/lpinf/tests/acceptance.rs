//! The ten acceptance criteria. Every check is exact; each criterion prints
//! one PASS or FAIL line and the test fails if any criterion fails.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use lpinf::ce::{nr_product, Ce, WeightGradedMap};
use lpinf::dgla::{DgLie, DglaMorphism};
use lpinf::error::Error;
use lpinf::fixtures;
use lpinf::graded::{GradedSpace, LinearMap};
use lpinf::io;
use lpinf::leibniz::{
    check_lp_morphism, htan_compatibility, pullback_structure, tuples, LeibnizInfty,
};
use lpinf::lfmod::{adjoint_module, InftyMorphism, LfModule};
use lpinf::lp::{leibniz_from_lp, lie_quotient, WeakLp};
use lpinf::model::{
    factorize, path_object, pullback, strictify_cofibration, strictify_fibration,
    FactorizationMode, LiftingProblem,
};
use lpinf::trees::{
    canonical_string, enumerate_mlrt, permutations, theta_class, theta_tree, RootedTree,
    TreeEvaluator,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn three_fixtures() -> Vec<(&'static str, LeibnizInfty)> {
    vec![
        (
            "sl2 identity",
            LeibnizInfty::new(WeakLp::identity(&fixtures::sl2())),
        ),
        ("two-cocycle", LeibnizInfty::new(fixtures::pairing_module())),
        ("Lie pair", LeibnizInfty::new(fixtures::lie_pair_module())),
    ]
}

fn valid_algebras() -> Vec<(&'static str, Arc<DgLie>)> {
    vec![
        ("sl2", fixtures::sl2()),
        ("abelian", fixtures::abelian()),
        ("a -> b", fixtures::arrow()),
        ("sl2 cone", fixtures::sl2_cone()),
        ("aff", fixtures::aff()),
        ("aff central", fixtures::aff_central()),
        ("borel cone", fixtures::borel_cone()),
        ("sl2 ⊗ Λ", fixtures::graded_sl2()),
        ("(sl2 ⊗ Λ) ⊗ dual numbers", fixtures::graded_test_algebra()),
    ]
}

fn axioms() -> Outcome {
    for (name, g) in valid_algebras().into_iter().take(3) {
        g.validate().map_err(|e| format!("{name} rejected: {e}"))?;
    }
    let corrupted = fixtures::corrupted();
    ensure(corrupted.len() == 5, || {
        format!("{} corruptions", corrupted.len())
    })?;
    for (name, data, check) in corrupted {
        let outcome = data.and_then(DgLie::new);
        match outcome {
            Err(Error::Violation(v)) if v.check.contains(check) && !v.witness.is_empty() => {}
            Err(e) => return Err(format!("{name}: wrong failure {e}")),
            Ok(_) => return Err(format!("{name}: accepted")),
        }
    }
    Ok("3 accepted, 5 rejected with witnesses".into())
}

fn square_zero() -> Outcome {
    let mut count = 0;
    let mut check = |what: &str, m: &LfModule| -> Result<(), String> {
        count += 1;
        m.verify_square_zero().map_err(|v| format!("{what}: {v}"))
    };
    for (name, g) in valid_algebras() {
        let ad = adjoint_module(&g);
        check(&format!("ad {name}"), &ad)?;
        check(
            &format!("path object of ad {name}"),
            &path_object(&ad).map_err(err)?.total,
        )?;
    }
    let phi = fixtures::perturbed_fibration();
    let st = strictify_fibration(&phi).map_err(err)?;
    check("strictified fibration", &st.module)?;
    let (_, psi) = fixtures::weight_one_gauge(&phi.target);
    let pb = pullback(&phi, &psi).map_err(err)?;
    check("pullback", &pb.module)?;
    let ad = adjoint_module(&fixtures::graded_test_algebra());
    let (_, gauge) = fixtures::weight_one_gauge(&ad);
    let sc = strictify_cofibration(&gauge).map_err(err)?;
    check("strictified cofibration", &sc.module)?;
    for f in [&gauge, &phi] {
        for mode in [
            FactorizationMode::CofibrationThenTrivialFibration,
            FactorizationMode::TrivialCofibrationThenFibration,
        ] {
            let fa = factorize(f, mode).map_err(err)?;
            check(&format!("{mode:?}"), &fa.first.target)?;
        }
    }
    Ok(format!("{count} modules"))
}

fn three_way() -> Outcome {
    let mut total = 0;
    for (name, ev) in three_fixtures() {
        let mut te = TreeEvaluator::new(&ev);
        for n in 1..=5 {
            for t in tuples(ev.dim(), n) {
                let r = ev.lambda_recursive(&t);
                let c = ev.lambda_closed_form(&t);
                let tr = te.lambda(&t);
                ensure(r == c && c == tr, || {
                    format!("{name} {t:?}: methods disagree")
                })?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} tuples"))
}

fn identities() -> Outcome {
    for (name, ev) in three_fixtures() {
        ev.verify_identities(4)
            .map_err(|v| format!("{name}: {v}"))?;
    }
    Ok("n ≤ 4 on three fixtures".into())
}

fn homotopies() -> Outcome {
    for (name, c) in [
        ("pairing", fixtures::pairing_homotopy()),
        ("Lie pair", fixtures::lie_pair_homotopy()),
    ] {
        let direct = c.verify_direct().is_ok();
        let path = c.verify_path().is_ok();
        ensure(direct && path, || {
            format!("{name}: direct {direct}, path {path}")
        })?;
        c.verify().map_err(|e| format!("{name}: {e}"))?;
        // a corrupted certificate is rejected by both routes
        let bad = lpinf::model::HomotopyCertificate::new(
            c.f.clone(),
            c.f_prime.clone(),
            c.h.scale(&lpinf::scalar::q(2)),
        )
        .map_err(err)?;
        let (d, p) = (bad.verify_direct().is_ok(), bad.verify_path().is_ok());
        ensure(!d && !p, || {
            format!("{name}: corrupted certificate: direct {d}, path {p}")
        })?;
    }
    Ok("both accepted, routes agree".into())
}

fn model_instances() -> Outcome {
    for (name, g) in valid_algebras() {
        path_object(&adjoint_module(&g))
            .and_then(|p| p.verify())
            .map_err(|e| format!("path object of ad {name}: {e}"))?;
    }

    let phi = fixtures::perturbed_fibration();
    ensure(
        !phi.is_strict() && phi.classify().map_err(err)?.fibration,
        || "fixture is not a non-strict fibration".into(),
    )?;
    let st = strictify_fibration(&phi).map_err(err)?;
    ensure(
        st.strict
            .comps
            .comps
            .iter()
            .skip(1)
            .all(|c| c.iter().all(Ce::is_zero)),
        || "strictified fibration has higher components".into(),
    )?;
    ensure(
        phi.compose(&st.psi).map_err(err)?.comps == st.strict.comps,
        || "φ∘ψ ≠ φ₀".into(),
    )?;

    let (_, psi) = fixtures::weight_one_gauge(&phi.target);
    let pb = pullback(&phi, &psi).map_err(err)?;
    pb.to_source.validate().map_err(err)?;
    ensure(
        phi.compose(&pb.to_source).map_err(err)?.comps
            == psi.compose(&pb.to_base).map_err(err)?.comps,
        || "pullback square does not commute".into(),
    )?;
    ensure(pb.to_base.classify().map_err(err)?.fibration, || {
        "projection is not a fibration".into()
    })?;

    // rank 3: B = trivial module on (u, v, w) with a weight-1 gauge g : B̃ → B,
    // p : B ⊕ Cone(B̃) → B with acyclic kernel, j : 0 → B̃.
    let alg = fixtures::graded_sl2();
    let space = GradedSpace::new([("u", 0), ("v", 1), ("w", 1)]).map_err(err)?;
    let b = LfModule::trivial(alg.clone(), &space);
    let (bt, g) = fixtures::weight_one_gauge(&b);
    ensure(!g.is_strict(), || "gauge is strict".into())?;
    let fa = factorize(&g, FactorizationMode::CofibrationThenTrivialFibration).map_err(err)?;
    let p = fa.second;
    ensure(
        fa.second_class.fibration && fa.second_class.weak_equivalence,
        || "p is not a trivial fibration".into(),
    )?;
    let zero = LfModule::trivial(alg, &GradedSpace::zero());
    let j = InftyMorphism::zero(&zero, &bt);
    let f = InftyMorphism::zero(&zero, &p.source);
    let problem = LiftingProblem::new(j.clone(), p.clone(), f.clone(), g.clone()).map_err(err)?;
    let l = problem.solve(None).map_err(err)?;
    l.validate().map_err(err)?;
    ensure(l.compose(&j).map_err(err)?.comps == f.comps, || {
        "l∘j ≠ f".into()
    })?;
    ensure(p.compose(&l).map_err(err)?.comps == g.comps, || {
        "p∘l ≠ g".into()
    })?;
    Ok("path objects, strictification, pullback, rank-3 lift".into())
}

fn lp_layer() -> Outcome {
    let l = leibniz_from_lp(&WeakLp::identity(&fixtures::sl2())).map_err(err)?;
    l.validate().map_err(err)?;
    ensure(l.is_lie(), || "sl2 Leibniz algebra is not Lie".into())?;

    let xx = fixtures::non_lie_leibniz();
    ensure(!xx.is_lie(), || "x◇x = y is Lie".into())?;
    let qt = lie_quotient(&xx).map_err(err)?;
    ensure(qt.kernel.len() == 1 && qt.lie.dim() == 1, || {
        "unexpected Leibniz kernel".into()
    })?;
    let back = leibniz_from_lp(&qt.module).map_err(err)?;
    ensure(back == xx, || "𝒢(ℱ(L)) ≠ L".into())?;

    for (name, ev) in three_fixtures() {
        htan_compatibility(&ev).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok("validator, round trip, H_tan on three fixtures".into())
}

/// Classes by brute force: shapes up to explicit isomorphism, labellings up
/// to automorphisms compatible with `Next`.
fn oracle_class_count(n: usize) -> usize {
    let maps: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .map(|p| {
            std::iter::once(0)
                .chain(p.into_iter().map(|i| i + 1))
                .collect()
        })
        .collect();
    let compatible =
        |a: &RootedTree, b: &RootedTree, p: &[usize]| (1..=n).all(|v| p[a.next(v)] == b.next(p[v]));
    let mut shapes: Vec<RootedTree> = Vec::new();
    for t in RootedTree::all(n) {
        if !shapes
            .iter()
            .any(|s| maps.iter().any(|p| compatible(&t, s, p)))
        {
            shapes.push(t);
        }
    }
    let mut total = 0;
    for t in &shapes {
        let autos: Vec<&Vec<usize>> = maps.iter().filter(|p| compatible(t, t, p)).collect();
        let mut reps: Vec<Vec<usize>> = Vec::new();
        for l in t.labelings().into_iter().filter(|l| t.is_monotonic(l)) {
            if !reps.iter().any(|r| {
                autos
                    .iter()
                    .any(|p| (1..=n).all(|v| l[v - 1] == r[p[v] - 1]))
            }) {
                reps.push(l);
            }
        }
        total += reps.len();
    }
    total
}

fn class_of(t: &RootedTree, l: &[usize]) -> String {
    canonical_string(&t.label_parents(l))
}

fn trees() -> Outcome {
    let t1 = RootedTree::new(vec![0, 3, 3, 4, 0]).map_err(err)?;
    ensure(
        class_of(&t1, &[1, 2, 3, 4]) == class_of(&t1, &[2, 1, 3, 4]),
        || "l and l′ not merged".into(),
    )?;
    let t2 = RootedTree::new(vec![0, 2, 4, 4, 0]).map_err(err)?;
    ensure(
        class_of(&t2, &[1, 2, 3, 4]) != class_of(&t2, &[1, 3, 2, 4]),
        || "l″ and l‴ merged".into(),
    )?;

    let mut counts = Vec::new();
    for n in 1..=5 {
        let (ours, oracle) = (enumerate_mlrt(n).len(), oracle_class_count(n));
        ensure(ours == oracle, || {
            format!("n = {n}: {ours} classes, oracle {oracle}")
        })?;
        counts.push(ours);
    }

    let graded = LeibnizInfty::new(fixtures::perturbed_identity(&fixtures::graded_sl2()));
    let mut evs = three_fixtures();
    evs.push(("perturbed identity", graded));
    for (name, ev) in &evs {
        let gd = ev.gd().to_vec();
        for n in 1..=4 {
            let classes = enumerate_mlrt(n);
            let raw: Vec<(RootedTree, Vec<usize>)> = RootedTree::all(n)
                .into_iter()
                .flat_map(|t| {
                    let ls: Vec<Vec<usize>> = t
                        .labelings()
                        .into_iter()
                        .filter(|l| t.is_monotonic(l))
                        .collect();
                    ls.into_iter().map(move |l| (t.clone(), l))
                })
                .collect();
            let all = tuples(ev.dim(), n);
            // the weight-2 fixture is sampled at the top arity
            let step = if *name == "perturbed identity" && n == 4 {
                7
            } else {
                1
            };
            for args in all.into_iter().step_by(step) {
                let fm: Vec<&Ce> = args.iter().map(|&i| ev.image(i)).collect();
                let degrees: Vec<i64> = args.iter().map(|&i| ev.shifted_degree(i)).collect();
                let values: BTreeMap<&str, Ce> = classes
                    .iter()
                    .map(|c| (c.canonical.as_str(), theta_class(c, &fm, &degrees, &gd)))
                    .collect();
                for (t, l) in &raw {
                    let v = theta_tree(t, l, &fm, &degrees, &gd);
                    ensure(v == values[class_of(t, l).as_str()], || {
                        format!("{name} {args:?}: Θ differs within a class")
                    })?;
                }
            }
        }
    }
    // a branched tree on the two-vertex-children shape is a product of products
    let ev = &evs[3].1;
    let args = [0usize, 1, 3, 4];
    let fm: Vec<&Ce> = args.iter().map(|&i| ev.image(i)).collect();
    let degrees: Vec<i64> = args.iter().map(|&i| ev.shifted_degree(i)).collect();
    let a = nr_product(&[fm[0]], fm[1], ev.gd());
    ensure(
        theta_tree(&t2, &[1, 2, 3, 4], &fm, &degrees, ev.gd())
            == nr_product(&[&a, fm[2]], fm[3], ev.gd()),
        || "Θ on T2 does not match the nested product".into(),
    )?;
    Ok(format!("class counts {counts:?}"))
}

fn functoriality() -> Outcome {
    let g = fixtures::sl2();
    let a = fixtures::abelian();
    let big = DgLie::product(&g, "", &a, "'").map_err(err)?;
    let mut incl = LinearMap::zero(g.space(), big.space(), 0);
    for i in 0..g.dim() {
        incl.add_entry(i, i, lpinf::scalar::one()).map_err(err)?;
    }
    let along = DglaMorphism::new(g.clone(), big.clone(), incl.clone()).map_err(err)?;
    let upstairs = LeibnizInfty::new(WeakLp::identity(&big));
    let source = LeibnizInfty::new(WeakLp::identity(&g));
    let pb = pullback_structure(&along, &upstairs).map_err(err)?;
    let phi = WeightGradedMap::strict(&incl);
    check_lp_morphism(&source, &pb, &phi).map_err(err)?;
    pb.verify_strict_morphism(&source, &phi, 3).map_err(err)?;
    Ok("arities 1..3".into())
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn format_round_trip() -> Outcome {
    let docs = fixtures::documents();
    for (file, _) in &docs {
        let text = std::fs::read_to_string(fixture_dir().join(file)).map_err(err)?;
        let doc = io::parse(&text).map_err(|e| format!("{file}: {e}"))?;
        let again = io::serialize(&doc);
        ensure(again == text, || {
            format!("{file}: serialize∘parse changed the text")
        })?;
        let reparsed = io::parse(&again).map_err(err)?;
        ensure(io::serialize(&reparsed) == again, || {
            format!("{file}: parse∘serialize not stable")
        })?;
    }
    let text = std::fs::read_to_string(fixture_dir().join("sl2.toml")).map_err(err)?;
    let dir = std::env::temp_dir().join(format!("lpinf-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(err)?;
    let corruptions = [
        ("rational", text.replacen("\"-2\"", "\"2/0\"", 1)),
        (
            "name",
            text.replacen("[\"e\", \"f\", \"h\"", "[\"e\", \"q\", \"h\"", 1),
        ),
        ("syntax", text.replacen(']', "", 1)),
    ];
    for (what, bad) in corruptions {
        ensure(bad != text, || format!("{what}: corruption did not apply"))?;
        let path = dir.join(format!("{what}.toml"));
        std::fs::write(&path, bad).map_err(err)?;
        let out = Command::new(env!("CARGO_BIN_EXE_lpinf"))
            .arg("validate")
            .arg(&path)
            .output()
            .map_err(err)?;
        let stderr = String::from_utf8_lossy(&out.stderr);
        ensure(out.status.code() == Some(2), || {
            format!("{what}: exit {:?}", out.status.code())
        })?;
        ensure(
            stderr.contains("line ") && stderr.contains("column "),
            || format!("{what}: unlocated error {stderr}"),
        )?;
    }
    Ok(format!("{} files, 3 corruptions", docs.len()))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("axiom suite", axioms),
        ("square-zero suite", square_zero),
        ("three-way λ agreement", three_way),
        ("Leibniz∞[1] identities", identities),
        ("homotopy certificates", homotopies),
        ("model-structure instances", model_instances),
        ("Loday–Pirashvili layer", lp_layer),
        ("tree combinatorics", trees),
        ("functoriality", functoriality),
        ("format round trip", format_round_trip),
    ];
    let results: Vec<(Outcome, u128)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (r, start.elapsed().as_millis())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("joined"))
            .collect()
    });
    let mut failed = Vec::new();
    for (i, ((name, _), (r, ms))) in criteria.iter().zip(&results).enumerate() {
        match r {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} ({ms} ms)", i + 1),
            Err(msg) => {
                println!("criterion {:>2} FAIL  {name}: {msg} ({ms} ms)", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
