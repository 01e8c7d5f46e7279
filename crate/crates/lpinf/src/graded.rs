//! Finite graded vector spaces, degree-shifting linear maps and the exact
//! Gaussian elimination behind ranks, kernels, sections and cohomology.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{is_odd, one, Q};

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, x) in row.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Q) {
        self.data[i * self.cols + j] = x;
    }

    pub fn add_at(&mut self, i: usize, j: usize, x: &Q) {
        self.data[i * self.cols + j] += x;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut s = Q::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        let a = self.get(i, j);
                        if !a.is_zero() {
                            s += a * x;
                        }
                    }
                }
                s
            })
            .collect()
    }

    /// Reduced row echelon form with leftmost pivots; returns pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = one() / m.get(r, c).clone();
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let x = m.get(r, j) * &f;
                    if !x.is_zero() {
                        m.data[i * m.cols + j] -= x;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Kernel basis, one vector per free column, in column order.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        (0..self.cols)
            .filter(|c| !pivot_set.contains(c))
            .map(|free| {
                let mut v = vec![Q::zero(); self.cols];
                v[free] = one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, free).clone();
                }
                v
            })
            .collect()
    }

    /// Solve `self * x = b`; free variables are set to zero.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }
}

/// A finite graded vector space with a named, ordered basis.
#[derive(Clone, Debug, Default)]
pub struct GradedSpace {
    names: Vec<String>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
}

impl PartialEq for GradedSpace {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.degrees == other.degrees
    }
}

impl Eq for GradedSpace {}

impl GradedSpace {
    pub fn new<S: Into<String>>(basis: impl IntoIterator<Item = (S, i64)>) -> Result<Self> {
        let mut sp = GradedSpace::default();
        for (name, deg) in basis {
            let name = name.into();
            if sp.index.contains_key(&name) {
                return Err(Error::DuplicateName(name));
            }
            sp.index.insert(name.clone(), sp.names.len());
            sp.names.push(name);
            sp.degrees.push(deg);
        }
        Ok(sp)
    }

    pub fn zero() -> Self {
        GradedSpace::default()
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn in_degree(&self, n: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == n).collect()
    }

    /// Distinct degrees present, ascending.
    pub fn degree_set(&self) -> Vec<i64> {
        self.degrees
            .iter()
            .copied()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// `M[k]`: same basis with degrees lowered by `k`, names suffixed.
    pub fn shifted(&self, k: i64, suffix: &str) -> Self {
        GradedSpace::new(
            self.names
                .iter()
                .zip(&self.degrees)
                .map(|(n, d)| (format!("{n}{suffix}"), d - k)),
        )
        .expect("suffixing keeps names unique")
    }

    /// Direct sum of `(space, name suffix, degree shift k)` summands, where
    /// a summand contributes `space[k]`.
    pub fn direct_sum(parts: &[(&GradedSpace, &str, i64)]) -> Result<Self> {
        let mut basis = Vec::new();
        for (sp, suffix, k) in parts {
            for i in 0..sp.dim() {
                basis.push((format!("{}{}", sp.name(i), suffix), sp.degree(i) - k));
            }
        }
        GradedSpace::new(basis)
    }
}

/// Linear map of fixed degree `shift` between graded spaces, stored sparsely
/// as `(domain index, codomain index) -> coefficient`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    pub dom: GradedSpace,
    pub cod: GradedSpace,
    pub shift: i64,
    entries: BTreeMap<(usize, usize), Q>,
}

impl LinearMap {
    pub fn zero(dom: &GradedSpace, cod: &GradedSpace, shift: i64) -> Self {
        LinearMap {
            dom: dom.clone(),
            cod: cod.clone(),
            shift,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(sp: &GradedSpace) -> Self {
        let mut m = LinearMap::zero(sp, sp, 0);
        for i in 0..sp.dim() {
            m.entries.insert((i, i), one());
        }
        m
    }

    /// Adds `c` to the entry `a -> b`; rejects degree-inconsistent entries.
    pub fn add_entry(&mut self, a: usize, b: usize, c: Q) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if self.cod.degree(b) != self.dom.degree(a) + self.shift {
            return Err(Error::DegreeMismatch(format!(
                "{} -> {} does not have degree {}",
                self.dom.name(a),
                self.cod.name(b),
                self.shift
            )));
        }
        let e = self.entries.entry((a, b)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.entries.remove(&(a, b));
        }
        Ok(())
    }

    pub fn get(&self, a: usize, b: usize) -> Q {
        self.entries.get(&(a, b)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Q)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Image of basis vector `a` as a sparse column.
    pub fn column(&self, a: usize) -> Vec<(usize, Q)> {
        self.entries
            .range((a, 0)..(a + 1, 0))
            .map(|(&(_, b), c)| (b, c.clone()))
            .collect()
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.dom.dim());
        let mut out = vec![Q::zero(); self.cod.dim()];
        for (&(a, b), c) in &self.entries {
            if !v[a].is_zero() {
                out[b] += c * &v[a];
            }
        }
        out
    }

    /// `self ∘ g`.
    pub fn compose(&self, g: &LinearMap) -> Result<LinearMap> {
        if g.cod != self.dom {
            return Err(Error::DomainMismatch(
                "codomain of inner map differs from domain of outer map".into(),
            ));
        }
        let mut out = LinearMap::zero(&g.dom, &self.cod, self.shift + g.shift);
        for (&(a, b), c) in &g.entries {
            for (d, e) in self.column(b) {
                out.add_entry(a, d, c * e)?;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap> {
        if self.dom != other.dom || self.cod != other.cod || self.shift != other.shift {
            return Err(Error::DomainMismatch(
                "summands have different shapes".into(),
            ));
        }
        let mut out = self.clone();
        for (&(a, b), c) in &other.entries {
            out.add_entry(a, b, c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Q) -> LinearMap {
        let mut out = LinearMap::zero(&self.dom, &self.cod, self.shift);
        if !s.is_zero() {
            for (k, c) in &self.entries {
                out.entries.insert(*k, c * s);
            }
        }
        out
    }

    /// Matrix of the degree-`n` slice with the domain and codomain index lists.
    pub fn slice(&self, n: i64) -> (Matrix, Vec<usize>, Vec<usize>) {
        let cols = self.dom.in_degree(n);
        let rows = self.cod.in_degree(n + self.shift);
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (j, &a) in cols.iter().enumerate() {
            for (b, c) in self.column(a) {
                let i = rows
                    .iter()
                    .position(|&r| r == b)
                    .expect("degree-consistent entry");
                m.set(i, j, c);
            }
        }
        (m, cols, rows)
    }

    /// Rank together with kernel and image bases (full-length vectors) in degree `n`.
    pub fn rank_kernel_image(&self, n: i64) -> RankKernelImage {
        let (m, cols, rows) = self.slice(n);
        let (_, pivots) = m.rref();
        let kernel = m
            .kernel()
            .into_iter()
            .map(|k| embed(&k, &cols, self.dom.dim()))
            .collect();
        let image = pivots
            .iter()
            .map(|&pc| {
                let col: Vec<Q> = (0..m.rows).map(|i| m.get(i, pc).clone()).collect();
                embed(&col, &rows, self.cod.dim())
            })
            .collect();
        RankKernelImage {
            rank: pivots.len(),
            kernel,
            image,
        }
    }

    /// Degrees of the domain and codomain that the map connects.
    fn relevant_degrees(&self) -> BTreeSet<i64> {
        let mut s: BTreeSet<i64> = self.dom.degree_set().into_iter().collect();
        s.extend(self.cod.degree_set().into_iter().map(|d| d - self.shift));
        s
    }

    pub fn is_surjective(&self) -> bool {
        self.relevant_degrees().into_iter().all(|n| {
            let (m, _, rows) = self.slice(n);
            m.rank() == rows.len()
        })
    }

    pub fn is_injective(&self) -> bool {
        self.relevant_degrees().into_iter().all(|n| {
            let (m, cols, _) = self.slice(n);
            m.rank() == cols.len()
        })
    }

    /// Deterministic section `g` with `self ∘ g = id`.
    ///
    /// Per degree, the reduced row echelon form of the slice selects the
    /// leftmost pivot columns; the section is supported on those columns and
    /// inverts the square pivot block.
    pub fn right_inverse(&self) -> Result<LinearMap> {
        let mut g = LinearMap::zero(&self.cod, &self.dom, -self.shift);
        for n in self.relevant_degrees() {
            let (m, cols, rows) = self.slice(n);
            let (_, pivots) = m.rref();
            if pivots.len() < rows.len() {
                return Err(Error::NotSurjective(n + self.shift));
            }
            let mut block = Matrix::zeros(rows.len(), rows.len());
            for (j, &pc) in pivots.iter().enumerate() {
                for i in 0..rows.len() {
                    block.set(i, j, m.get(i, pc).clone());
                }
            }
            for (t, &b) in rows.iter().enumerate() {
                let mut e = vec![Q::zero(); rows.len()];
                e[t] = one();
                let x = block.solve(&e).expect("pivot block is invertible");
                for (j, &pc) in pivots.iter().enumerate() {
                    g.add_entry(b, cols[pc], x[j].clone())?;
                }
            }
        }
        Ok(g)
    }

    /// Deterministic retraction `r` with `r ∘ self = id`, obtained as the
    /// transpose of the right inverse of the transpose.
    pub fn left_inverse(&self) -> Result<LinearMap> {
        let t = self.transpose();
        let g = t.right_inverse().map_err(|e| match e {
            Error::NotSurjective(n) => Error::NotInjective(-n),
            other => other,
        })?;
        Ok(g.transpose())
    }

    /// Transpose between the same named bases, with degrees negated so that
    /// the entry degree condition is preserved.
    pub fn transpose(&self) -> LinearMap {
        let neg = |sp: &GradedSpace| {
            GradedSpace::new(
                sp.names()
                    .iter()
                    .cloned()
                    .zip(sp.degrees().iter().map(|d| -d)),
            )
            .expect("names unique")
        };
        let dom = neg(&self.cod);
        let cod = neg(&self.dom);
        let mut t = LinearMap::zero(&dom, &cod, self.shift);
        for (&(a, b), c) in &self.entries {
            t.entries.insert((b, a), c.clone());
        }
        t
    }

    /// Re-types the map between spaces with identical index layout.
    pub fn retyped(&self, dom: &GradedSpace, cod: &GradedSpace) -> Result<LinearMap> {
        let mut out = LinearMap::zero(dom, cod, self.shift);
        for (&(a, b), c) in &self.entries {
            out.add_entry(a, b, c.clone())?;
        }
        Ok(out)
    }
}

fn embed(v: &[Q], idx: &[usize], dim: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); dim];
    for (x, &i) in v.iter().zip(idx) {
        out[i] = x.clone();
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankKernelImage {
    pub rank: usize,
    pub kernel: Vec<Vec<Q>>,
    pub image: Vec<Vec<Q>>,
}

/// Cohomology `ker(d_out) / im(d_in)` in one degree with explicit representatives.
#[derive(Clone, Debug, PartialEq)]
pub struct Cohomology {
    pub degree: i64,
    pub dimension: usize,
    pub representatives: Vec<Vec<Q>>,
    boundaries: Vec<Vec<Q>>,
}

impl Cohomology {
    /// Coordinates of a cocycle in the representative basis, or `None` if `v`
    /// is not in `span(representatives) + boundaries`.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vec<Q>> {
        let cols: Vec<&Vec<Q>> = self
            .representatives
            .iter()
            .chain(&self.boundaries)
            .collect();
        if cols.is_empty() {
            return if v.iter().all(|x| x.is_zero()) {
                Some(vec![])
            } else {
                None
            };
        }
        let mut m = Matrix::zeros(v.len(), cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m.solve(v).map(|x| x[..self.dimension].to_vec())
    }

    pub fn boundaries(&self) -> &[Vec<Q>] {
        &self.boundaries
    }
}

/// Cohomology at the middle space of `d_in` then `d_out`, in degree `n`.
pub fn cohomology(d_in: &LinearMap, d_out: &LinearMap, n: i64) -> Result<Cohomology> {
    if d_in.cod != d_out.dom {
        return Err(Error::DomainMismatch("differentials do not compose".into()));
    }
    let comp = d_out.compose(d_in)?;
    let (m, _, _) = comp.slice(n - d_in.shift);
    if (0..m.rows).any(|i| (0..m.cols).any(|j| !m.get(i, j).is_zero())) {
        return Err(Error::NotAComplex(n));
    }
    let boundaries = d_in.rank_kernel_image(n - d_in.shift).image;
    let cycles = d_out.rank_kernel_image(n).kernel;
    let mut reps = Vec::new();
    let mut current = boundaries.clone();
    let mut rank = span_rank(&current);
    for z in cycles {
        current.push(z.clone());
        let r = span_rank(&current);
        if r > rank {
            rank = r;
            reps.push(z);
        } else {
            current.pop();
        }
    }
    Ok(Cohomology {
        degree: n,
        dimension: reps.len(),
        representatives: reps,
        boundaries,
    })
}

pub fn span_rank(vs: &[Vec<Q>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    Matrix::from_rows(vs.to_vec()).rank()
}

/// Query for a Koszul sign: `permutation[i]` is the (0-based) index of the
/// factor that lands in position `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutationQuery {
    pub permutation: Vec<usize>,
    pub degrees: Vec<i64>,
}

impl SignedPermutationQuery {
    pub fn new(permutation: Vec<usize>, degrees: Vec<i64>) -> Result<Self> {
        let n = permutation.len();
        if degrees.len() != n {
            return Err(Error::DomainMismatch(
                "degree list length differs from n".into(),
            ));
        }
        let mut seen = vec![false; n];
        for &p in &permutation {
            if p >= n || seen[p] {
                return Err(Error::DomainMismatch("not a bijection".into()));
            }
            seen[p] = true;
        }
        Ok(SignedPermutationQuery {
            permutation,
            degrees,
        })
    }

    pub fn koszul(&self) -> Q {
        koszul_sign(&self.permutation, &self.degrees)
    }

    pub fn anti_koszul(&self) -> Q {
        anti_koszul_sign(&self.permutation, &self.degrees)
    }
}

/// `κ` with `m_1 ⊙ ... ⊙ m_n = κ · m_{σ(1)} ⊙ ... ⊙ m_{σ(n)}`.
pub fn koszul_sign(perm: &[usize], degrees: &[i64]) -> Q {
    let mut odd = false;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] && is_odd(degrees[perm[i]]) && is_odd(degrees[perm[j]]) {
                odd = !odd;
            }
        }
    }
    if odd {
        -one()
    } else {
        one()
    }
}

pub fn permutation_sign(perm: &[usize]) -> Q {
    koszul_sign(perm, &vec![1; perm.len()])
}

/// `χ(σ) = sgn(σ) · κ(σ)`.
pub fn anti_koszul_sign(perm: &[usize], degrees: &[i64]) -> Q {
    permutation_sign(perm) * koszul_sign(perm, degrees)
}

/// Vector helpers used throughout.
pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn unit_vec(dim: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    v[i] = Q::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qr};

    fn sp(d: &[i64]) -> GradedSpace {
        GradedSpace::new(d.iter().enumerate().map(|(i, &x)| (format!("v{i}"), x))).unwrap()
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(GradedSpace::new([("a", 0), ("a", 1)]).is_err());
    }

    #[test]
    fn compose_identity_and_zero() {
        let s = sp(&[0, 0, 1]);
        let mut f = LinearMap::zero(&s, &s, 0);
        f.add_entry(0, 1, q(3)).unwrap();
        f.add_entry(1, 0, qr(1, 2)).unwrap();
        assert_eq!(f.compose(&LinearMap::identity(&s)).unwrap(), f);
        assert!(LinearMap::zero(&s, &s, 0).compose(&f).unwrap().is_zero());
        assert!(f.add_entry(0, 2, q(1)).is_err());
    }

    #[test]
    fn compose_matches_dense_product() {
        let s = sp(&[0, 0, 0]);
        let a = [[1, 2, 0], [0, -1, 3], [4, 0, 1]];
        let b = [[2, 0, 1], [1, 1, 0], [0, -2, 5]];
        let mk = |m: &[[i64; 3]; 3]| {
            let mut f = LinearMap::zero(&s, &s, 0);
            for (row, r) in m.iter().enumerate() {
                for (col, &x) in r.iter().enumerate() {
                    f.add_entry(col, row, q(x)).unwrap();
                }
            }
            f
        };
        let fa = mk(&a);
        let fb = mk(&b);
        let prod = fa.compose(&fb).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let dense: i64 = (0..3).map(|k| a[i][k] * b[k][j]).sum();
                assert_eq!(prod.get(j, i), q(dense));
            }
        }
    }

    #[test]
    fn rank_kernel_of_2x3() {
        let dom = sp(&[0, 0, 0]);
        let cod = sp(&[0, 0]);
        let mut f = LinearMap::zero(&dom, &cod, 0);
        // rows (1 2 3), (2 4 7)
        for (a, b, c) in [
            (0, 0, 1),
            (1, 0, 2),
            (2, 0, 3),
            (0, 1, 2),
            (1, 1, 4),
            (2, 1, 7),
        ] {
            f.add_entry(a, b, q(c)).unwrap();
        }
        let rki = f.rank_kernel_image(0);
        assert_eq!(rki.rank, 2);
        assert_eq!(rki.kernel, vec![vec![q(-2), q(1), q(0)]]);
        assert!(is_zero_vec(&f.apply(&rki.kernel[0])));
    }

    #[test]
    fn right_inverse_of_sum_projection() {
        let dom = sp(&[0, 0]);
        let cod = sp(&[0]);
        let mut f = LinearMap::zero(&dom, &cod, 0);
        f.add_entry(0, 0, q(1)).unwrap();
        f.add_entry(1, 0, q(1)).unwrap();
        let g = f.right_inverse().unwrap();
        assert_eq!(g.get(0, 0), q(1));
        assert_eq!(g.get(0, 1), q(0));
        assert_eq!(f.compose(&g).unwrap(), LinearMap::identity(&cod));
        let z = LinearMap::zero(&dom, &cod, 0);
        assert_eq!(z.right_inverse(), Err(Error::NotSurjective(0)));
    }

    #[test]
    fn left_inverse_of_inclusion() {
        let dom = sp(&[1]);
        let cod = sp(&[1, 1]);
        let mut f = LinearMap::zero(&dom, &cod, 0);
        f.add_entry(0, 1, q(2)).unwrap();
        let r = f.left_inverse().unwrap();
        assert_eq!(r.compose(&f).unwrap(), LinearMap::identity(&dom));
    }

    #[test]
    fn cohomology_cases() {
        let s = sp(&[0, 1]);
        let z = LinearMap::zero(&s, &s, 1);
        assert_eq!(cohomology(&z, &z, 0).unwrap().dimension, 1);
        let mut d = LinearMap::zero(&s, &s, 1);
        d.add_entry(0, 1, q(1)).unwrap();
        assert_eq!(cohomology(&d, &d, 0).unwrap().dimension, 0);
        assert_eq!(cohomology(&d, &d, 1).unwrap().dimension, 0);
        let t = sp(&[0, 1, 2]);
        let mut bad = LinearMap::zero(&t, &t, 1);
        bad.add_entry(0, 1, q(1)).unwrap();
        bad.add_entry(1, 2, q(1)).unwrap();
        assert_eq!(cohomology(&bad, &bad, 1), Err(Error::NotAComplex(1)));
    }

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(&[0, 1, 2], &[1, 3, 5]), q(1));
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]), q(-1));
        assert_eq!(koszul_sign(&[2, 0, 1], &[2, 4, 0]), q(1));
        assert_eq!(anti_koszul_sign(&[1, 0], &[0, 0]), q(-1));
        assert_eq!(anti_koszul_sign(&[1, 0], &[1, 1]), q(1));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
            Just((0..n).collect::<Vec<_>>()).prop_shuffle()
        }

        proptest! {
            #[test]
            fn koszul_is_multiplicative(
                (s, t, d) in (1usize..=5).prop_flat_map(|n| (
                    perm_strategy(n), perm_strategy(n), proptest::collection::vec(-3i64..4, n)))
            ) {
                // applying t then s: position i holds factor t[s[i]]
                let st: Vec<usize> = s.iter().map(|&i| t[i]).collect();
                let t_degrees: Vec<i64> = t.iter().map(|&i| d[i]).collect();
                prop_assert_eq!(
                    koszul_sign(&st, &d),
                    koszul_sign(&s, &t_degrees) * koszul_sign(&t, &d)
                );
            }

            #[test]
            fn rank_nullity(entries in proptest::collection::vec(-3i64..4, 12)) {
                let dom = sp(&[0, 0, 0, 0]);
                let cod = sp(&[0, 0, 0]);
                let mut f = LinearMap::zero(&dom, &cod, 0);
                for (k, &x) in entries.iter().enumerate() {
                    f.add_entry(k % 4, k / 4, q(x)).unwrap();
                }
                let rki = f.rank_kernel_image(0);
                prop_assert_eq!(rki.rank + rki.kernel.len(), 4);
                if let Ok(g) = f.right_inverse() {
                    prop_assert_eq!(f.compose(&g).unwrap(), LinearMap::identity(&cod));
                }
            }
        }
    }
}
