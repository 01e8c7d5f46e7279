//! Rooted trees with monotonic labelings and the tree formula for the brackets.

use std::collections::{BTreeMap, HashMap};

use crate::ce::{nr_product, Ce};
use crate::error::{Error, Result};
use crate::graded::koszul_sign;
use crate::leibniz::LeibnizInfty;
use crate::scalar::{one, Q};

/// A rooted tree as a parent array: vertex 0 is the root, `parent[v] = Next(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedTree {
    parent: Vec<usize>,
}

impl RootedTree {
    pub fn new(parent: Vec<usize>) -> Result<RootedTree> {
        if parent.first() != Some(&0) {
            return Err(Error::InvalidTree("vertex 0 must be the root".into()));
        }
        let n = parent.len();
        for v in 1..n {
            let mut u = v;
            for _ in 0..n {
                if u == 0 {
                    break;
                }
                if parent[u] >= n {
                    return Err(Error::InvalidTree(format!("parent of {u} out of range")));
                }
                u = parent[u];
            }
            if u != 0 {
                return Err(Error::InvalidTree(format!(
                    "vertex {v} does not reach the root"
                )));
            }
        }
        let root_children = (1..n).filter(|&v| parent[v] == 0).count();
        if root_children != 1 {
            return Err(Error::InvalidTree(format!(
                "root has valency {root_children}, expected 1"
            )));
        }
        Ok(RootedTree { parent })
    }

    /// Number of non-root vertices.
    /// `parent[v]` for every vertex; the root's entry is 0.
    pub fn parents(&self) -> &[usize] {
        &self.parent
    }

    pub fn n(&self) -> usize {
        self.parent.len() - 1
    }

    pub fn next(&self, v: usize) -> usize {
        self.parent[v]
    }

    /// `Next⁻¹(v)` in increasing vertex order.
    pub fn children(&self, v: usize) -> Vec<usize> {
        (1..self.parent.len())
            .filter(|&u| self.parent[u] == v)
            .collect()
    }

    /// `‖v‖`, the number of edges pointing to `v`.
    pub fn valency(&self, v: usize) -> usize {
        self.children(v).len()
    }

    pub fn height(&self, mut v: usize) -> usize {
        let mut h = 0;
        while v != 0 {
            v = self.parent[v];
            h += 1;
        }
        h
    }

    pub fn leaves(&self) -> Vec<usize> {
        (1..self.parent.len())
            .filter(|&v| self.valency(v) == 0)
            .collect()
    }

    pub fn internal(&self) -> Vec<usize> {
        (1..self.parent.len())
            .filter(|&v| self.valency(v) > 0)
            .collect()
    }

    /// `a ≺ b`: `b` lies on the path from `a` to the root, `b ≠ a`.
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        let mut u = a;
        while u != 0 {
            u = self.parent[u];
            if u == b {
                return true;
            }
        }
        false
    }

    /// Every parent array on `n` non-root vertices with `parent[v] < v`;
    /// each shape of `RT(n)` occurs at least once.
    pub fn all(n: usize) -> Vec<RootedTree> {
        let mut out = Vec::new();
        let mut parent = vec![0; n + 1];
        fn go(v: usize, n: usize, parent: &mut Vec<usize>, out: &mut Vec<RootedTree>) {
            if v > n {
                out.push(RootedTree {
                    parent: parent.clone(),
                });
                return;
            }
            let lo = if v == 1 { 0 } else { 1 };
            let hi = if v == 1 { 0 } else { v - 1 };
            for p in lo..=hi {
                parent[v] = p;
                go(v + 1, n, parent, out);
            }
        }
        if n > 0 {
            go(1, n, &mut parent, &mut out);
        }
        out
    }

    /// All monotonic labelings, `labels[v - 1] = l(v)`.
    pub fn labelings(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut out = Vec::new();
        for perm in permutations(n) {
            let labels: Vec<usize> = perm.iter().map(|&p| p + 1).collect();
            if self.is_monotonic(&labels) {
                out.push(labels);
            }
        }
        out
    }

    pub fn is_monotonic(&self, labels: &[usize]) -> bool {
        (1..=self.n()).all(|v| {
            let p = self.parent[v];
            p == 0 || labels[v - 1] < labels[p - 1]
        })
    }

    /// The labelled tree as a map from each label to the label of its parent
    /// (0 for the root).
    pub fn label_parents(&self, labels: &[usize]) -> Vec<usize> {
        let mut out = vec![0; self.n() + 1];
        for v in 1..=self.n() {
            let p = self.parent[v];
            out[labels[v - 1]] = if p == 0 { 0 } else { labels[p - 1] };
        }
        out
    }
}

/// Permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// An equivalence class of monotonically labelled rooted trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MlrtClass {
    /// `label_parent[i]` is the label of `Next` of the vertex labelled `i`
    /// (0 for the root); index 0 is unused.
    pub label_parent: Vec<usize>,
    /// Canonical string: `label(children…)`, children sorted by label.
    pub canonical: String,
    /// Number of raw (parent array, labeling) pairs in the class.
    pub size: usize,
}

impl MlrtClass {
    pub fn n(&self) -> usize {
        self.label_parent.len() - 1
    }

    /// Children of label `i` in increasing label order.
    pub fn children(&self, i: usize) -> Vec<usize> {
        (1..self.label_parent.len())
            .filter(|&j| self.label_parent[j] == i)
            .collect()
    }

    /// Labels in the order they are read off `Θ`: children first, by label.
    pub fn reading_order(&self) -> Vec<usize> {
        fn go(c: &MlrtClass, i: usize, out: &mut Vec<usize>) {
            for j in c.children(i) {
                go(c, j, out);
            }
            out.push(i);
        }
        let mut out = Vec::new();
        go(self, self.n(), &mut out);
        out
    }

    /// Parent array and labeling of the representative, vertices numbered by
    /// label.
    pub fn representative(&self) -> (RootedTree, Vec<usize>) {
        let n = self.n();
        let mut parent = vec![0; n + 1];
        parent[1..].copy_from_slice(&self.label_parent[1..]);
        (RootedTree { parent }, (1..=n).collect())
    }
}

/// Canonical string of a labelled tree given by label parents.
pub fn canonical_string(label_parent: &[usize]) -> String {
    fn go(lp: &[usize], i: usize) -> String {
        let kids: Vec<String> = (1..lp.len())
            .filter(|&j| lp[j] == i)
            .map(|j| go(lp, j))
            .collect();
        if kids.is_empty() {
            i.to_string()
        } else {
            format!("{i}({})", kids.join(","))
        }
    }
    let top = (1..label_parent.len())
        .find(|&j| label_parent[j] == 0)
        .unwrap_or(0);
    go(label_parent, top)
}

/// `[MLRT(n)]`: every parent array and monotonic labeling, deduplicated by
/// the canonical form, in canonical-string order.
pub fn enumerate_mlrt(n: usize) -> Vec<MlrtClass> {
    let mut classes: BTreeMap<String, MlrtClass> = BTreeMap::new();
    for t in RootedTree::all(n) {
        for l in t.labelings() {
            let lp = t.label_parents(&l);
            let canonical = canonical_string(&lp);
            classes
                .entry(canonical.clone())
                .or_insert(MlrtClass {
                    label_parent: lp,
                    canonical,
                    size: 0,
                })
                .size += 1;
        }
    }
    classes.into_values().collect()
}

/// `Θ_T^l(m_1, …, m_n)` given `F(m_i)`; `degrees[i]` is `|m_{i+1}| - 1`.
///
/// The inputs of each `•_k` are the children in increasing label order, and
/// the result carries the Koszul sign of the order in which the labels are
/// read off (children before parents).
pub fn theta_tree(
    tree: &RootedTree,
    labels: &[usize],
    fm: &[&Ce],
    degrees: &[i64],
    gd: &[i64],
) -> Ce {
    fn children(tree: &RootedTree, labels: &[usize], v: usize) -> Vec<usize> {
        let mut kids = tree.children(v);
        kids.sort_by_key(|&u| labels[u - 1]);
        kids
    }
    fn label(
        tree: &RootedTree,
        labels: &[usize],
        v: usize,
        fm: &[&Ce],
        gd: &[i64],
        order: &mut Vec<usize>,
    ) -> Ce {
        let kids: Vec<Ce> = children(tree, labels, v)
            .into_iter()
            .map(|u| label(tree, labels, u, fm, gd, order))
            .collect();
        let own = fm[labels[v - 1] - 1];
        order.push(labels[v - 1] - 1);
        if kids.is_empty() {
            return own.clone();
        }
        let refs: Vec<&Ce> = kids.iter().collect();
        nr_product(&refs, own, gd)
    }
    let top = tree.children(0)[0];
    let mut order = Vec::with_capacity(tree.n());
    let value = label(tree, labels, top, fm, gd, &mut order);
    value.scale(&koszul_sign(&order, degrees))
}

/// `Θ_T^l` on the representative of a class.
pub fn theta_class(class: &MlrtClass, fm: &[&Ce], degrees: &[i64], gd: &[i64]) -> Ce {
    let (tree, labels) = class.representative();
    theta_tree(&tree, &labels, fm, degrees, gd)
}

/// Tree-sum evaluation of the brackets, with `Θ_n` cached per argument tuple.
pub struct TreeEvaluator<'a> {
    ev: &'a LeibnizInfty,
    classes: Vec<Vec<MlrtClass>>,
    theta: HashMap<Vec<usize>, Ce>,
}

impl<'a> TreeEvaluator<'a> {
    pub fn new(ev: &'a LeibnizInfty) -> Self {
        TreeEvaluator {
            ev,
            classes: vec![Vec::new()],
            theta: HashMap::new(),
        }
    }

    fn classes(&mut self, n: usize) -> &[MlrtClass] {
        while self.classes.len() <= n {
            let k = self.classes.len();
            self.classes.push(enumerate_mlrt(k));
        }
        &self.classes[n]
    }

    /// `Θ_n(m_{args})`.
    pub fn theta_n(&mut self, args: &[usize]) -> Ce {
        if let Some(v) = self.theta.get(args) {
            return v.clone();
        }
        let ev = self.ev;
        let fm: Vec<&Ce> = args.iter().map(|&i| ev.image(i)).collect();
        let degrees: Vec<i64> = args.iter().map(|&i| ev.shifted_degree(i)).collect();
        let gd = ev.gd().to_vec();
        let mut out = Ce::zero();
        for c in self.classes(args.len()).to_vec() {
            out.add_assign_scaled(&theta_class(&c, &fm, &degrees, &gd), &one());
        }
        self.theta.insert(args.to_vec(), out.clone());
        out
    }

    /// `λ_{n+1}(m_1, …, m_{n+1}) = Σ_k Σ_{n_1+…+n_k=n} Σ_σ ε(σ)/k! (Θ_{n_1}, …, Θ_{n_k}) •_k d_tot m_{n+1}`.
    pub fn lambda(&mut self, args: &[usize]) -> Ce {
        let ev = self.ev;
        if args.len() < 2 {
            return ev.lambda_recursive(args);
        }
        let n = args.len() - 1;
        let gd = ev.gd().to_vec();
        let target = ev.f.module().d_tot(&Ce::basis(args[n]));
        let degrees: Vec<i64> = args[..n].iter().map(|&i| ev.shifted_degree(i)).collect();
        let mut out = Ce::zero();
        let prefix = crate::scalar::sign(degrees.iter().sum());
        let mut factorial = one();
        for k in 1..=n {
            factorial *= Q::from_integer(k.into());
            for sizes in compositions(n, k) {
                for sigma in shuffles(&sizes) {
                    let eps = koszul_sign(&sigma, &degrees);
                    let mut thetas = Vec::with_capacity(k);
                    let mut start = 0;
                    for &s in &sizes {
                        let block: Vec<usize> =
                            sigma[start..start + s].iter().map(|&a| args[a]).collect();
                        thetas.push(self.theta_n(&block));
                        start += s;
                    }
                    if thetas.iter().any(Ce::is_zero) {
                        continue;
                    }
                    let refs: Vec<&Ce> = thetas.iter().collect();
                    out.add_assign_scaled(
                        &nr_product(&refs, &target, &gd),
                        &(eps * &prefix / &factorial),
                    );
                }
            }
        }
        out
    }
}

/// Ordered compositions of `n` into `k` positive parts.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(k - 1) {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Unshuffles of `0..Σ sizes`: permutations listing block after block, each
/// block increasing.
pub fn shuffles(sizes: &[usize]) -> Vec<Vec<usize>> {
    fn go(avail: &[usize], sizes: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some((&first, rest)) = sizes.split_first() else {
            out.push(cur.clone());
            return;
        };
        for subset in combinations(avail.len(), first) {
            let chosen: Vec<usize> = subset.iter().map(|&i| avail[i]).collect();
            let left: Vec<usize> = avail
                .iter()
                .copied()
                .filter(|a| !chosen.contains(a))
                .collect();
            let len = cur.len();
            cur.extend(&chosen);
            go(&left, rest, cur, out);
            cur.truncate(len);
        }
    }
    let n: usize = sizes.iter().sum();
    let avail: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    go(&avail, sizes, &mut Vec::new(), &mut out);
    out
}

/// `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}
