//! Exact rational symmetric bilinear forms with labeled bases.
//!
//! Every operation is a pure function returning a new form. Inertia is
//! computed by symmetric Gaussian elimination (congruence), so the result is
//! exact and does not depend on floating point.

use std::collections::HashSet;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("matrix is not square: row {row} has {len} entries, expected {dim}")]
    NotSquare { row: usize, len: usize, dim: usize },
    #[error("matrix is not symmetric: entry ({i},{j}) = {a} but ({j},{i}) = {b}")]
    NotSymmetric {
        i: usize,
        j: usize,
        a: String,
        b: String,
    },
    #[error("expected {expected} basis labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("restriction to the core labels {0:?} is degenerate")]
    DegenerateCore(Vec<String>),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Sylvester invariants of a form: positive and negative indices and nullity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct InertiaTriple {
    #[serde(rename = "plus")]
    pub sigma_plus: usize,
    #[serde(rename = "minus")]
    pub sigma_minus: usize,
    #[serde(rename = "zero")]
    pub sigma_zero: usize,
}

impl InertiaTriple {
    pub fn new(sigma_plus: usize, sigma_minus: usize, sigma_zero: usize) -> Self {
        Self {
            sigma_plus,
            sigma_minus,
            sigma_zero,
        }
    }

    pub fn dim(&self) -> usize {
        self.sigma_plus + self.sigma_minus + self.sigma_zero
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.sigma_zero == 0
    }
}

impl Add for InertiaTriple {
    type Output = InertiaTriple;
    fn add(self, o: InertiaTriple) -> InertiaTriple {
        InertiaTriple::new(
            self.sigma_plus + o.sigma_plus,
            self.sigma_minus + o.sigma_minus,
            self.sigma_zero + o.sigma_zero,
        )
    }
}

impl fmt::Display for InertiaTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            self.sigma_plus, self.sigma_minus, self.sigma_zero
        )
    }
}

/// A symmetric matrix of exact rationals over a labeled basis.
///
/// The 0-dimensional form is a legal value and stands for the zero form on
/// the zero space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalSymmetricForm {
    labels: Vec<String>,
    // row-major, dim * dim
    entries: Vec<Rational>,
}

impl RationalSymmetricForm {
    pub fn new<S: Into<String>>(
        labels: Vec<S>,
        rows: Vec<Vec<Rational>>,
    ) -> Result<Self, FormError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let dim = rows.len();
        if labels.len() != dim {
            return Err(FormError::LabelCount {
                expected: dim,
                got: labels.len(),
            });
        }
        check_unique(&labels)?;
        let mut entries = Vec::with_capacity(dim * dim);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(FormError::NotSquare {
                    row,
                    len: r.len(),
                    dim,
                });
            }
            entries.extend(r);
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(FormError::NotSymmetric {
                        i,
                        j,
                        a: format_rational(&entries[i * dim + j]),
                        b: format_rational(&entries[j * dim + i]),
                    });
                }
            }
        }
        Ok(Self { labels, entries })
    }

    /// Builds a form with labels `s1, s2, ...`.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, FormError> {
        let labels = default_labels(rows.len());
        Self::new(labels, rows)
    }

    pub fn zero_dim() -> Self {
        Self {
            labels: Vec::new(),
            entries: Vec::new(),
        }
    }

    pub fn diagonal<S: Into<String>>(
        labels: Vec<S>,
        values: Vec<Rational>,
    ) -> Result<Self, FormError> {
        let n = values.len();
        let rows = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                let mut row = vec![Rational::zero(); n];
                row[i] = v;
                row
            })
            .collect();
        Self::new(labels, rows)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim() + j]
    }

    /// Entry addressed by basis labels.
    pub fn get(&self, a: &str, b: &str) -> Result<&Rational, FormError> {
        let i = self
            .index_of(a)
            .ok_or_else(|| FormError::UnknownLabel(a.into()))?;
        let j = self
            .index_of(b)
            .ok_or_else(|| FormError::UnknownLabel(b.into()))?;
        Ok(self.entry(i, j))
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        let n = self.dim();
        (0..n)
            .map(|i| self.entries[i * n..(i + 1) * n].to_vec())
            .collect()
    }

    /// Counts of positive, negative and zero pivots of a congruence
    /// diagonalization.
    pub fn inertia(&self) -> InertiaTriple {
        let mut triple = InertiaTriple::default();
        for d in congruence_diagonal(self.rows()) {
            if d.is_zero() {
                triple.sigma_zero += 1;
            } else if d.is_positive() {
                triple.sigma_plus += 1;
            } else {
                triple.sigma_minus += 1;
            }
        }
        triple
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, FormError> {
        let own: HashSet<&str> = self.labels.iter().map(String::as_str).collect();
        if let Some(dup) = other.labels.iter().find(|l| own.contains(l.as_str())) {
            return Err(FormError::DuplicateLabel(dup.clone()));
        }
        let (a, b) = (self.dim(), other.dim());
        let n = a + b;
        let mut entries = vec![Rational::zero(); n * n];
        for i in 0..a {
            for j in 0..a {
                entries[i * n + j] = self.entry(i, j).clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                entries[(a + i) * n + a + j] = other.entry(i, j).clone();
            }
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        Ok(Self { labels, entries })
    }

    /// Principal submatrix on `subset`, kept in this form's basis order.
    pub fn restrict<S: AsRef<str>>(&self, subset: &[S]) -> Result<Self, FormError> {
        let idx = self.resolve(subset)?;
        let mut sorted = idx;
        sorted.sort_unstable();
        Ok(self.submatrix(&sorted))
    }

    /// The same form written in the basis order given by `order`, which must
    /// be a permutation of the labels.
    pub fn reorder<S: AsRef<str>>(&self, order: &[S]) -> Result<Self, FormError> {
        if order.len() != self.dim() {
            return Err(FormError::LabelCount {
                expected: self.dim(),
                got: order.len(),
            });
        }
        let idx = self.resolve(order)?;
        Ok(self.submatrix(&idx))
    }

    /// Schur complement of the `core` block: the form induced on the
    /// orthogonal complement of the core span, expressed in the remaining
    /// basis vectors. Equivalent to completing the squares of the core
    /// variables.
    pub fn schur_project<S: AsRef<str>>(&self, core: &[S]) -> Result<Self, FormError> {
        let mut core_idx = self.resolve(core)?;
        core_idx.sort_unstable();
        let rest: Vec<usize> = (0..self.dim()).filter(|i| !core_idx.contains(i)).collect();
        if core_idx.is_empty() {
            return Ok(self.clone());
        }
        let core_block = self.submatrix(&core_idx).rows();
        let coupling: Vec<Vec<Rational>> = core_idx
            .iter()
            .map(|&c| rest.iter().map(|&r| self.entry(c, r).clone()).collect())
            .collect();
        let solved = solve(core_block, coupling).ok_or_else(|| {
            FormError::DegenerateCore(core_idx.iter().map(|&i| self.labels[i].clone()).collect())
        })?;
        let m = rest.len();
        let mut entries = Vec::with_capacity(m * m);
        for &ra in &rest {
            for (b, &rb) in rest.iter().enumerate() {
                let mut v = self.entry(ra, rb).clone();
                for (k, &c) in core_idx.iter().enumerate() {
                    v -= self.entry(ra, c) * &solved[k][b];
                }
                entries.push(v);
            }
        }
        let labels = rest.iter().map(|&i| self.labels[i].clone()).collect();
        Ok(Self { labels, entries })
    }

    pub fn add_scaled_identity(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        let n = self.dim();
        for i in 0..n {
            out.entries[i * n + i] += c;
        }
        out
    }

    /// Conjugation by a diagonal matrix of signs, one per basis vector.
    pub fn sign_conjugate(&self, signs: &[i8]) -> Self {
        let n = self.dim();
        assert_eq!(signs.len(), n, "one sign per basis vector");
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                if signs[i] * signs[j] < 0 {
                    out.entries[i * n + j] = -out.entries[i * n + j].clone();
                }
            }
        }
        out
    }

    /// Same matrix with new basis labels.
    pub fn relabel<S: Into<String>>(&self, labels: Vec<S>) -> Result<Self, FormError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.dim() {
            return Err(FormError::LabelCount {
                expected: self.dim(),
                got: labels.len(),
            });
        }
        check_unique(&labels)?;
        Ok(Self {
            labels,
            entries: self.entries.clone(),
        })
    }

    /// Renders the matrix text format: one row per line.
    pub fn to_matrix_text(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    fn resolve<S: AsRef<str>>(&self, subset: &[S]) -> Result<Vec<usize>, FormError> {
        let mut seen = HashSet::new();
        subset
            .iter()
            .map(|l| {
                let l = l.as_ref();
                if !seen.insert(l.to_string()) {
                    return Err(FormError::DuplicateLabel(l.into()));
                }
                self.index_of(l)
                    .ok_or_else(|| FormError::UnknownLabel(l.into()))
            })
            .collect()
    }

    fn submatrix(&self, idx: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(idx.len() * idx.len());
        for &i in idx {
            for &j in idx {
                entries.push(self.entry(i, j).clone());
            }
        }
        Self {
            labels: idx.iter().map(|&i| self.labels[i].clone()).collect(),
            entries,
        }
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("s{i}")).collect()
}

fn check_unique(labels: &[String]) -> Result<(), FormError> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(FormError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Diagonal of a congruence diagonalization of a symmetric matrix.
///
/// Pivots on the diagonal; a zero pivot with a nonzero entry in its row is
/// repaired either by swapping in a nonzero diagonal entry or by adding the
/// partner row/column, which makes the pivot `2 q_ij`.
pub fn congruence_diagonal(mut a: Vec<Vec<Rational>>) -> Vec<Rational> {
    let n = a.len();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = ((k + 1)..n).find(|&j| !a[k][j].is_zero()) {
                if !a[j][j].is_zero() {
                    a.swap(k, j);
                    for row in a.iter_mut() {
                        row.swap(k, j);
                    }
                } else {
                    for c in 0..n {
                        let v = a[j][c].clone();
                        a[k][c] += v;
                    }
                    for row in a.iter_mut() {
                        let v = row[j].clone();
                        row[k] += v;
                    }
                }
            }
        }
        let pivot = a[k][k].clone();
        if !pivot.is_zero() {
            let pivot_row = a[k].clone();
            for i in (k + 1)..n {
                if pivot_row[i].is_zero() {
                    continue;
                }
                let factor = &pivot_row[i] / &pivot;
                for j in (k + 1)..n {
                    let delta = &factor * &pivot_row[j];
                    a[i][j] -= delta;
                }
                a[i][k] = Rational::zero();
                a[k][i] = Rational::zero();
            }
        }
        diag.push(pivot);
    }
    diag
}

/// Solves `a * x = b` exactly; `None` when `a` is singular.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        b.swap(col, p);
        let pivot = a[col][col].clone();
        for c in 0..n {
            a[col][c] = &a[col][c] / &pivot;
        }
        for c in 0..m {
            b[col][c] = &b[col][c] / &pivot;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
            for c in 0..m {
                let d = &f * &b[col][c];
                b[r][c] -= d;
            }
        }
    }
    Some(b)
}

impl fmt::Display for RationalSymmetricForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim() == 0 {
            return write!(f, "(0-dim)");
        }
        let cells: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        let lw = self.labels.iter().map(String::len).max().unwrap_or(1);
        write!(f, "{:lw$} ", "")?;
        for l in &self.labels {
            write!(f, " {l:>width$}")?;
        }
        for (label, row) in self.labels.iter().zip(&cells) {
            write!(f, "\n{label:lw$} ")?;
            for c in row {
                write!(f, " {c:>width$}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for RationalSymmetricForm {
    type Err = FormError;

    /// Parses the matrix text format. Blank lines and `#` comments are
    /// skipped.
    fn from_str(s: &str) -> Result<Self, FormError> {
        let mut rows = Vec::new();
        let mut lines = Vec::new();
        for (no, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    parse_rational(tok).map_err(|e| FormError::Parse {
                        line: no + 1,
                        message: e.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
            lines.push(no + 1);
        }
        let dim = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(FormError::Parse {
                    line: lines[r],
                    message: format!(
                        "row has {} entries but the matrix has {dim} rows",
                        row.len()
                    ),
                });
            }
        }
        Self::from_rows(rows).map_err(|e| match e {
            FormError::NotSymmetric { i, j, .. } => FormError::Parse {
                line: lines[i.max(j)],
                message: e.to_string(),
            },
            other => other,
        })
    }
}
