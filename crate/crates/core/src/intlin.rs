//! Exact integer linear algebra: Smith and Hermite normal forms, lattices and
//! finitely generated abelian groups.
//!
//! Conventions used throughout the crate: vectors are columns, matrices act on
//! the left, and the composite `g ∘ f` has matrix `M_g · M_f`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntLinError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("right-hand side is not in the image lattice")]
    NoSolution,
    #[error(
        "homomorphism is not well defined: relation {relation} of the source does not map to zero"
    )]
    NotWellDefined { relation: usize },
}

/// Convenience conversion from machine integers.
pub fn ivec(values: &[i64]) -> Vec<BigInt> {
    values.iter().map(|&v| BigInt::from(v)).collect()
}

pub fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn gcd_of(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from rows. `cols` is needed to describe matrices with no rows.
    pub fn from_rows(cols: usize, rows: &[Vec<BigInt>]) -> Result<Self, IntLinError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(IntLinError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self, IntLinError> {
        Ok(Self::from_rows(rows, columns)?.transpose())
    }

    /// Small-integer constructor for tests and fixtures. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| ivec(r)).collect();
        Self::from_rows(cols, &rows).expect("ragged matrix literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, IntLinError> {
        if self.cols != other.rows {
            return Err(IntLinError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, IntLinError> {
        if v.len() != self.cols {
            return Err(IntLinError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| dot(&self.data[i * self.cols..(i + 1) * self.cols], v))
            .collect())
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix, IntLinError> {
        if self.rows != other.rows {
            return Err(IntLinError::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn select_columns(&self, indices: &[usize]) -> IntMatrix {
        let mut out = Self::zeros(self.rows, indices.len());
        for (jj, &j) in indices.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn select_rows(&self, indices: &[usize]) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = indices.iter().map(|&i| self.row(i)).collect();
        IntMatrix::from_rows(self.cols, &rows).expect("rows share a width")
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Option<BigInt> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = self.row_vectors();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Some(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        Some(sign * &a[n - 1][n - 1])
    }
}

/// `U · M · V = S` with `U`, `V` unimodular and `S` diagonal, nonnegative,
/// with each diagonal entry dividing the next and zeros trailing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub diagonal: IntMatrix,
    pub right: IntMatrix,
}

impl SmithDecomposition {
    /// The `min(rows, cols)` diagonal entries.
    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        let n = self.diagonal.rows().min(self.diagonal.cols());
        (0..n).map(|i| self.diagonal.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal_entries()
            .iter()
            .filter(|d| !d.is_zero())
            .count()
    }
}

/// Smith normal form. The pivot is the entry of least nonzero absolute value in
/// the active submatrix; ties go to the lowest (row, column).
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.row_vectors();
    let mut u = IntMatrix::identity(r).row_vectors();
    // V is kept transposed so column operations become row operations.
    let mut vt = IntMatrix::identity(c).row_vectors();

    let mut t = 0;
    while t < r.min(c) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if a[i][j].is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => a[i][j].abs() < a[pi][pj].abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        if pi != t {
            a.swap(pi, t);
            u.swap(pi, t);
        }
        if pj != t {
            for row in a.iter_mut() {
                row.swap(pj, t);
            }
            vt.swap(pj, t);
        }

        let p = a[t][t].clone();
        let mut clean = true;
        for i in t + 1..r {
            if a[i][t].is_zero() {
                continue;
            }
            let q = &a[i][t] / &p;
            add_row_multiple(&mut a, i, t, &(-&q));
            add_row_multiple(&mut u, i, t, &(-&q));
            if !a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..c {
            if a[t][j].is_zero() {
                continue;
            }
            let q = &a[t][j] / &p;
            for row in a.iter_mut() {
                let v = &row[j] - &q * &row[t];
                row[j] = v;
            }
            add_row_multiple(&mut vt, j, t, &(-&q));
            if !a[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }

        let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[i][j].is_multiple_of(&p)));
        if let Some(i) = offender {
            add_row_multiple(&mut a, t, i, &BigInt::one());
            add_row_multiple(&mut u, t, i, &BigInt::one());
            continue;
        }
        if p.is_negative() {
            for v in a[t].iter_mut() {
                *v = -&*v;
            }
            for v in u[t].iter_mut() {
                *v = -&*v;
            }
        }
        t += 1;
    }

    SmithDecomposition {
        left: IntMatrix::from_rows(r, &u).expect("square"),
        diagonal: IntMatrix::from_rows(c, &a).expect("shape preserved"),
        right: IntMatrix::from_rows(c, &vt).expect("square").transpose(),
    }
}

fn add_row_multiple(m: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    let src = m[source].clone();
    for (x, s) in m[target].iter_mut().zip(&src) {
        *x += factor * s;
    }
}

/// Row-style Hermite normal form of the lattice spanned by `vectors`.
///
/// Returns the nonzero rows: echelon form with positive pivots, and entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vectors
        .iter()
        .filter(|v| !is_zero_vec(v))
        .cloned()
        .collect();
    debug_assert!(rows.iter().all(|r| r.len() == dim));
    let mut pivot_row = 0;
    for col in 0..dim {
        if pivot_row >= rows.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                if best.is_none_or(|b| rows[i][col].abs() < rows[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(pivot_row, b);
            let mut done = true;
            for i in pivot_row + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = &rows[i][col] / &rows[pivot_row][col];
                add_row_multiple(&mut rows, i, pivot_row, &(-q));
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows.len() && !rows[pivot_row][col].is_zero() {
            if rows[pivot_row][col].is_negative() {
                for v in rows[pivot_row].iter_mut() {
                    *v = -&*v;
                }
            }
            let p = rows[pivot_row][col].clone();
            for i in 0..pivot_row {
                let q = rows[i][col].div_floor(&p);
                add_row_multiple(&mut rows, i, pivot_row, &(-q));
            }
            pivot_row += 1;
        }
    }
    rows.truncate(pivot_row);
    rows.retain(|r| !is_zero_vec(r));
    rows
}

/// Reduces `v` modulo a lattice given by its Hermite rows: each pivot
/// coordinate ends up in `[0, pivot)`. The result is the canonical coset
/// representative.
pub fn reduce_modulo(v: &[BigInt], hermite: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut out = v.to_vec();
    for row in hermite {
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            continue;
        };
        let q = out[p].div_floor(&row[p]);
        if !q.is_zero() {
            for (x, r) in out.iter_mut().zip(row) {
                *x -= &q * r;
            }
        }
    }
    out
}

fn reversed(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().rev().cloned().collect()
}

/// Like [`reduce_modulo`] but works from the last coordinate backwards, so the
/// representative concentrates on leading coordinates.
fn reduce_modulo_trailing(v: &[BigInt], basis: &[Vec<BigInt>]) -> Vec<BigInt> {
    let dim = v.len();
    let rev: Vec<Vec<BigInt>> = basis.iter().map(|b| reversed(b)).collect();
    let h = hermite_rows(&rev, dim);
    reversed(&reduce_modulo(&reversed(v), &h))
}

/// Basis of the (saturated) kernel lattice `{x : M x = 0}`, in Hermite form.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let gens: Vec<Vec<BigInt>> = (rank..m.cols()).map(|j| snf.right.column(j)).collect();
    hermite_rows(&gens, m.cols())
}

/// Some `x` with `M x = b`, reduced modulo the kernel lattice so the answer
/// does not depend on how it was found.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Result<Vec<BigInt>, IntLinError> {
    if b.len() != m.rows() {
        return Err(IntLinError::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let snf = smith_normal_form(m);
    let c = snf.left.mul_vec(b)?;
    let diag = snf.diagonal_entries();
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, ci) in c.iter().enumerate() {
        match diag.get(i) {
            Some(d) if !d.is_zero() => {
                let (q, rem) = ci.div_rem(d);
                if !rem.is_zero() {
                    return Err(IntLinError::NoSolution);
                }
                y[i] = q;
            }
            _ => {
                if !ci.is_zero() {
                    return Err(IntLinError::NoSolution);
                }
            }
        }
    }
    let x = snf.right.mul_vec(&y)?;
    Ok(reduce_modulo_trailing(&x, &kernel_basis(m)))
}

/// A sublattice of `Z^dim`, stored by its Hermite basis (so `==` is lattice equality).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn span(dim: usize, generators: &[Vec<BigInt>]) -> Result<Self, IntLinError> {
        if let Some(g) = generators.iter().find(|g| g.len() != dim) {
            return Err(IntLinError::DimensionMismatch {
                expected: dim,
                found: g.len(),
            });
        }
        Ok(Lattice {
            dim,
            basis: hermite_rows(generators, dim),
        })
    }

    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            basis: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        Lattice {
            dim,
            basis: IntMatrix::identity(dim).row_vectors(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.dim && is_zero_vec(&reduce_modulo(v, &self.basis))
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    /// Canonical representative of `v + self`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        reduce_modulo(v, &self.basis)
    }

    /// `Q·L ∩ Z^dim`.
    pub fn saturation(&self) -> Lattice {
        if self.basis.is_empty() {
            return Lattice::zero(self.dim);
        }
        let as_rows = IntMatrix::from_rows(self.dim, &self.basis).expect("basis rows");
        let perp = kernel_basis(&as_rows);
        let perp_rows = IntMatrix::from_rows(self.dim, &perp).expect("kernel rows");
        Lattice {
            dim: self.dim,
            basis: kernel_basis(&perp_rows),
        }
    }

    pub fn is_saturated(&self) -> bool {
        *self == self.saturation()
    }

    pub fn intersection(&self, other: &Lattice) -> Result<Lattice, IntLinError> {
        if self.dim != other.dim {
            return Err(IntLinError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let (k, l) = (self.basis.len(), other.basis.len());
        if k == 0 || l == 0 {
            return Ok(Lattice::zero(self.dim));
        }
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|b| b.iter().map(|x| -x).collect()));
        let joint = IntMatrix::from_columns(self.dim, &cols)?;
        let a = IntMatrix::from_columns(self.dim, &self.basis)?;
        let gens: Vec<Vec<BigInt>> = kernel_basis(&joint)
            .into_iter()
            .map(|z| a.mul_vec(&z[..k]).expect("sized"))
            .collect();
        Lattice::span(self.dim, &gens)
    }
}

/// Basis of `A ∩ B` for lattices given by (possibly dependent) generators.
pub fn lattice_intersection(
    a: &[Vec<BigInt>],
    b: &[Vec<BigInt>],
) -> Result<Vec<Vec<BigInt>>, IntLinError> {
    let dim = a.first().or(b.first()).map_or(0, Vec::len);
    let la = Lattice::span(dim, a)?;
    let lb = Lattice::span(dim, b)?;
    Ok(la.intersection(&lb)?.basis)
}

/// Finitely generated abelian group `Z^ambient / im(relations)`, with its
/// normal form `Z^free ⊕ Z/d₁ ⊕ … ⊕ Z/d_s` (d₁ | … | d_s, each dᵢ > 1).
///
/// `projection` maps ambient coordinates to normal-form coordinates: the free
/// coordinates come first, then one coordinate per invariant factor (read
/// modulo that factor).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FGAbelianGroup {
    ambient_rank: usize,
    relations: IntMatrix,
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
    projection: IntMatrix,
}

impl FGAbelianGroup {
    pub fn cokernel(m: &IntMatrix) -> Self {
        let snf = smith_normal_form(m);
        let diag = snf.diagonal_entries();
        let rank = snf.rank();
        let free_rows: Vec<Vec<BigInt>> = (rank..m.rows()).map(|i| snf.left.row(i)).collect();
        let mut proj_rows = hermite_rows(&free_rows, m.rows());
        let free_rank = proj_rows.len();
        let mut invariant_factors = Vec::new();
        for (i, d) in diag.iter().enumerate().take(rank) {
            if d.is_one() {
                continue;
            }
            invariant_factors.push(d.clone());
            proj_rows.push(snf.left.row(i).iter().map(|x| x.mod_floor(d)).collect());
        }
        FGAbelianGroup {
            ambient_rank: m.rows(),
            relations: m.clone(),
            invariant_factors,
            free_rank,
            projection: IntMatrix::from_rows(m.rows(), &proj_rows).expect("rows of U"),
        }
    }

    pub fn free(rank: usize) -> Self {
        Self::cokernel(&IntMatrix::zeros(rank, 0))
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn projection(&self) -> &IntMatrix {
        &self.projection
    }

    /// Number of normal-form coordinates.
    pub fn normal_rank(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    /// Modulus of each normal-form coordinate (0 for free coordinates).
    pub fn moduli(&self) -> Vec<BigInt> {
        let mut m = vec![BigInt::zero(); self.free_rank];
        m.extend(self.invariant_factors.iter().cloned());
        m
    }

    pub fn is_torsion_free(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.normal_rank() == 0
    }

    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// `(free_rank, invariant_factors)`: equal for isomorphic groups.
    pub fn structure(&self) -> (usize, Vec<BigInt>) {
        (self.free_rank, self.invariant_factors.clone())
    }

    pub fn same_structure(&self, other: &FGAbelianGroup) -> bool {
        self.structure() == other.structure()
    }

    /// Reduces normal-form coordinates (torsion coordinates into `[0, d)`).
    pub fn normalize(&self, coords: &[BigInt]) -> Vec<BigInt> {
        coords
            .iter()
            .zip(self.moduli())
            .map(|(x, d)| {
                if d.is_zero() {
                    x.clone()
                } else {
                    x.mod_floor(&d)
                }
            })
            .collect()
    }

    /// Normal-form class of an ambient vector.
    pub fn class_of(&self, ambient: &[BigInt]) -> Result<Vec<BigInt>, IntLinError> {
        Ok(self.normalize(&self.projection.mul_vec(ambient)?))
    }

    /// Normal-form classes of the ambient basis vectors, as the columns of a matrix.
    pub fn generator_classes(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self
            .projection
            .column_vectors()
            .iter()
            .map(|c| self.normalize(c))
            .collect();
        IntMatrix::from_columns(self.normal_rank(), &cols).expect("sized")
    }

    /// An ambient vector whose class is `coords`.
    pub fn lift(&self, coords: &[BigInt]) -> Result<Vec<BigInt>, IntLinError> {
        if coords.len() != self.normal_rank() {
            return Err(IntLinError::DimensionMismatch {
                expected: self.normal_rank(),
                found: coords.len(),
            });
        }
        let system = self.projection.hstack(&self.torsion_columns())?;
        let x = solve_integer(&system, coords)?;
        Ok(x[..self.ambient_rank].to_vec())
    }

    /// Diagonal relations of the normal form, one column per invariant factor.
    fn torsion_columns(&self) -> IntMatrix {
        let n = self.normal_rank();
        let mut t = IntMatrix::zeros(n, self.invariant_factors.len());
        for (k, d) in self.invariant_factors.iter().enumerate() {
            t.set(self.free_rank + k, k, d.clone());
        }
        t
    }

    /// The lattice `{c ∈ Z^k : A c = 0 in this group}` for `A: Z^k → ambient`.
    pub fn kernel_of(&self, a: &IntMatrix) -> Result<Lattice, IntLinError> {
        if a.rows() != self.ambient_rank {
            return Err(IntLinError::DimensionMismatch {
                expected: self.ambient_rank,
                found: a.rows(),
            });
        }
        let k = a.cols();
        let system = self.projection.mul(a)?.hstack(&self.torsion_columns())?;
        let gens: Vec<Vec<BigInt>> = kernel_basis(&system)
            .into_iter()
            .map(|z| z[..k].to_vec())
            .collect();
        Lattice::span(k, &gens)
    }

    /// All normal-form elements whose free coordinates lie in `[-radius, radius]`,
    /// with every torsion coordinate cycled fully; lexicographic order.
    pub fn box_elements(&self, radius: u32) -> Vec<Vec<BigInt>> {
        let ranges: Vec<(BigInt, BigInt)> = self
            .moduli()
            .into_iter()
            .map(|d| {
                if d.is_zero() {
                    (BigInt::from(-i64::from(radius)), BigInt::from(radius))
                } else {
                    (BigInt::zero(), d - 1)
                }
            })
            .collect();
        let mut out = vec![Vec::new()];
        for (lo, hi) in ranges {
            let mut next = Vec::new();
            for prefix in &out {
                let mut x = lo.clone();
                while x <= hi {
                    let mut p: Vec<BigInt> = prefix.clone();
                    p.push(x.clone());
                    next.push(p);
                    x += 1;
                }
            }
            out = next;
        }
        out
    }

    /// `self ⊕ other` on the concatenated ambient lattice.
    pub fn direct_sum(&self, other: &FGAbelianGroup) -> FGAbelianGroup {
        let (r1, c1) = (self.relations.rows(), self.relations.cols());
        let (r2, c2) = (other.relations.rows(), other.relations.cols());
        let mut m = IntMatrix::zeros(r1 + r2, c1 + c2);
        for i in 0..r1 {
            for j in 0..c1 {
                m.set(i, j, self.relations.get(i, j).clone());
            }
        }
        for i in 0..r2 {
            for j in 0..c2 {
                m.set(r1 + i, c1 + j, other.relations.get(i, j).clone());
            }
        }
        FGAbelianGroup::cokernel(&m)
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub fn cokernel(m: &IntMatrix) -> FGAbelianGroup {
    FGAbelianGroup::cokernel(m)
}

pub fn is_torsion_free(g: &FGAbelianGroup) -> bool {
    g.is_torsion_free()
}

/// Homomorphism given by a matrix on ambient generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FGAbelianGroup,
    target: FGAbelianGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Checks that every source relation maps to zero in the target.
    pub fn new(
        source: FGAbelianGroup,
        target: FGAbelianGroup,
        matrix: IntMatrix,
    ) -> Result<Self, IntLinError> {
        if matrix.rows() != target.ambient_rank() {
            return Err(IntLinError::DimensionMismatch {
                expected: target.ambient_rank(),
                found: matrix.rows(),
            });
        }
        if matrix.cols() != source.ambient_rank() {
            return Err(IntLinError::DimensionMismatch {
                expected: source.ambient_rank(),
                found: matrix.cols(),
            });
        }
        for (j, rel) in source.relations().column_vectors().iter().enumerate() {
            let image = matrix.mul_vec(rel)?;
            if !is_zero_vec(&target.class_of(&image)?) {
                return Err(IntLinError::NotWellDefined { relation: j });
            }
        }
        Ok(GroupHom {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(g: &FGAbelianGroup) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.ambient_rank()),
        }
    }

    pub fn source(&self) -> &FGAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FGAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// Image of a normal-form class of the source, in target normal form.
    pub fn apply_class(&self, coords: &[BigInt]) -> Result<Vec<BigInt>, IntLinError> {
        let x = self.source.lift(coords)?;
        self.target.class_of(&self.matrix.mul_vec(&x)?)
    }

    /// The induced matrix between normal forms (target normal rank × source normal rank).
    pub fn normal_form_matrix(&self) -> IntMatrix {
        let n = self.source.normal_rank();
        let cols: Vec<Vec<BigInt>> = (0..n)
            .map(|j| {
                let mut e = vec![BigInt::zero(); n];
                e[j] = BigInt::one();
                self.apply_class(&e)
                    .expect("lift of a normal-form basis vector")
            })
            .collect();
        IntMatrix::from_columns(self.target.normal_rank(), &cols).expect("sized")
    }

    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom, IntLinError> {
        GroupHom::new(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix)?,
        )
    }

    /// A target class outside the image, if any.
    pub fn cokernel_witness(&self) -> Option<Vec<BigInt>> {
        let n = self.normal_form_matrix();
        let system = n.hstack(&self.target.torsion_columns()).expect("same rows");
        let coker = FGAbelianGroup::cokernel(&system);
        if coker.is_trivial() {
            return None;
        }
        // A normal-form basis vector of the target that is not hit.
        let t = self.target.normal_rank();
        (0..t)
            .map(|j| {
                let mut e = vec![BigInt::zero(); t];
                e[j] = BigInt::one();
                e
            })
            .find(|e| !is_zero_vec(&coker.class_of(e).expect("sized")))
    }

    /// A nonzero source class mapping to zero, if any.
    pub fn kernel_witness(&self) -> Option<Vec<BigInt>> {
        let n = self.normal_form_matrix();
        let s = self.source.normal_rank();
        let system = n.hstack(&self.target.torsion_columns()).expect("same rows");
        kernel_basis(&system)
            .into_iter()
            .map(|z| self.source.normalize(&z[..s]))
            .find(|c| !is_zero_vec(c))
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel_witness().is_none()
    }

    pub fn is_injective(&self) -> bool {
        self.kernel_witness().is_none()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

pub fn hom_is_surjective(h: &GroupHom) -> bool {
    h.is_surjective()
}

pub fn hom_is_isomorphism(h: &GroupHom) -> bool {
    h.is_isomorphism()
}

/// `G ⊇ ⟨gens⟩` together with `G/⟨gens⟩`.
#[derive(Clone, Debug)]
pub struct SubgroupQuotient {
    /// Abstract subgroup on one ambient generator per element of `gens`.
    pub subgroup: FGAbelianGroup,
    pub inclusion: GroupHom,
    pub quotient: FGAbelianGroup,
    pub quotient_map: GroupHom,
}

pub fn subgroup_and_quotient(
    g: &FGAbelianGroup,
    gens: &[Vec<BigInt>],
) -> Result<SubgroupQuotient, IntLinError> {
    let a = IntMatrix::from_columns(g.ambient_rank(), gens)?;
    let rel_lattice = g.kernel_of(&a)?;
    let sub_rel = IntMatrix::from_columns(gens.len(), rel_lattice.basis())?;
    let subgroup = FGAbelianGroup::cokernel(&sub_rel);
    let inclusion = GroupHom::new(subgroup.clone(), g.clone(), a.clone())?;
    let quotient = FGAbelianGroup::cokernel(&g.relations().hstack(&a)?);
    let quotient_map = GroupHom::new(
        g.clone(),
        quotient.clone(),
        IntMatrix::identity(g.ambient_rank()),
    )?;
    Ok(SubgroupQuotient {
        subgroup,
        inclusion,
        quotient,
        quotient_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(snf: &SmithDecomposition) -> Vec<i64> {
        snf.diagonal_entries()
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn smith_identity_and_zero() {
        let snf = smith_normal_form(&IntMatrix::identity(2));
        assert_eq!(snf.left, IntMatrix::identity(2));
        assert_eq!(snf.right, IntMatrix::identity(2));
        assert_eq!(snf.diagonal, IntMatrix::identity(2));
        let z = smith_normal_form(&IntMatrix::from_i64(&[&[0]]));
        assert_eq!(diag(&z), vec![0]);
    }

    #[test]
    fn smith_two_by_two() {
        let m = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        let snf = smith_normal_form(&m);
        assert_eq!(diag(&snf), vec![2, 4]);
        assert_eq!(
            snf.left.mul(&m).unwrap().mul(&snf.right).unwrap(),
            snf.diagonal
        );
    }

    #[test]
    fn smith_empty_shapes() {
        let m = IntMatrix::zeros(2, 0);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.rank(), 0);
        assert_eq!(snf.left, IntMatrix::identity(2));
    }

    #[test]
    fn cokernel_examples() {
        let g = cokernel(&IntMatrix::from_i64(&[&[2]]));
        assert_eq!(g.structure(), (0, ivec(&[2])));
        let p1 = cokernel(&IntMatrix::from_i64(&[&[1], &[-1]]));
        assert_eq!(p1.structure(), (1, vec![]));
        assert_eq!(p1.projection(), &IntMatrix::from_i64(&[&[1, 1]]));
        let free = cokernel(&IntMatrix::zeros(2, 0));
        assert_eq!(free.structure(), (2, vec![]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(
            kernel_basis(&IntMatrix::from_i64(&[&[1, 1]])),
            vec![ivec(&[1, -1])]
        );
        assert_eq!(
            kernel_basis(&IntMatrix::from_i64(&[&[1, 0]])),
            vec![ivec(&[0, 1])]
        );
        assert_eq!(
            kernel_basis(&IntMatrix::from_i64(&[&[2, 4], &[1, 2]])),
            vec![ivec(&[2, -1])]
        );
    }

    #[test]
    fn solve_prefers_leading_coordinates() {
        let m = IntMatrix::from_i64(&[&[1, 1]]);
        assert_eq!(solve_integer(&m, &ivec(&[-1])).unwrap(), ivec(&[-1, 0]));
        let m = IntMatrix::from_i64(&[&[2, 0]]);
        assert_eq!(solve_integer(&m, &ivec(&[3])), Err(IntLinError::NoSolution));
        assert!(matches!(
            solve_integer(&m, &ivec(&[1, 2])),
            Err(IntLinError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn torsion_freeness() {
        assert!(is_torsion_free(&FGAbelianGroup::free(2)));
        let zz2 = cokernel(&IntMatrix::from_i64(&[&[0], &[2]]));
        assert!(!is_torsion_free(&zz2));
        let z6 = cokernel(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert!(!is_torsion_free(&z6));
        assert_eq!(z6.structure(), (0, ivec(&[6])));
    }

    #[test]
    fn intersection_basics() {
        let a = vec![ivec(&[2, 0]), ivec(&[0, 3])];
        let b = vec![ivec(&[3, 0]), ivec(&[0, 2])];
        assert_eq!(
            lattice_intersection(&a, &b).unwrap(),
            vec![ivec(&[6, 0]), ivec(&[0, 6])]
        );
        assert_eq!(lattice_intersection(&a, &a).unwrap(), hermite_rows(&a, 2));
        assert!(lattice_intersection(&a, &[]).unwrap().is_empty());
        assert!(lattice_intersection(&a, &[ivec(&[1, 2, 3])]).is_err());
    }

    #[test]
    fn saturation_of_index_two() {
        let l = Lattice::span(2, &[ivec(&[2, 0])]).unwrap();
        assert_eq!(l.saturation(), Lattice::span(2, &[ivec(&[1, 0])]).unwrap());
        assert!(!l.is_saturated());
    }

    #[test]
    fn homomorphism_examples() {
        let z2 = FGAbelianGroup::free(2);
        let id = GroupHom::identity(&z2);
        assert!(hom_is_surjective(&id) && hom_is_isomorphism(&id));

        let z = FGAbelianGroup::free(1);
        let double = GroupHom::new(z.clone(), z.clone(), IntMatrix::from_i64(&[&[2]])).unwrap();
        assert!(!double.is_surjective());
        assert!(double.is_injective());

        let second = GroupHom::new(z2, z, IntMatrix::from_i64(&[&[0, 1]])).unwrap();
        assert!(second.is_surjective());
        assert!(!second.is_isomorphism());
        assert_eq!(second.kernel_witness(), Some(ivec(&[1, 0])));
    }

    #[test]
    fn homomorphism_must_respect_relations() {
        let z2 = cokernel(&IntMatrix::from_i64(&[&[2]]));
        let z = FGAbelianGroup::free(1);
        assert_eq!(
            GroupHom::new(z2, z, IntMatrix::identity(1)),
            Err(IntLinError::NotWellDefined { relation: 0 })
        );
    }

    #[test]
    fn subgroup_and_quotient_of_z2() {
        let g = FGAbelianGroup::free(2);
        let sq = subgroup_and_quotient(&g, &[ivec(&[2, 0]), ivec(&[0, 1])]).unwrap();
        assert_eq!(sq.subgroup.structure(), (2, vec![]));
        assert_eq!(sq.quotient.structure(), (0, ivec(&[2])));
        assert!(sq.quotient_map.is_surjective());
        assert!(sq.inclusion.is_injective());
    }

    #[test]
    fn box_cycles_torsion() {
        let g = cokernel(&IntMatrix::from_i64(&[&[0], &[3]]));
        let elems = g.box_elements(1);
        assert_eq!(elems.len(), 9);
        assert_eq!(elems[0], ivec(&[-1, 0]));
    }

    #[test]
    fn determinant_bareiss() {
        let m = IntMatrix::from_i64(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 1]]);
        assert_eq!(m.determinant(), Some(BigInt::from(-1)));
    }
}
