//! Dense square matrices over the integers and over `F_p`.
//!
//! Storage is row-major and indices are 0-based. Everything user-facing
//! (serialized rows, report witnesses) uses the 1-based convention, so
//! internal entry `(i, j)` is printed as `(i + 1, j + 1)`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// Panics if `n == 0`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        IntMatrix { n, entries }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_fn(n, |_, _| BigInt::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn diagonal(diag: &[BigInt]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i].clone() } else { BigInt::zero() })
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::Ragged { row: i + 1, len: row.len(), expected: n });
            }
            entries.extend(row);
        }
        Ok(IntMatrix { n, entries })
    }

    /// Convenience for tests and literals.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    /// Builds a lower-triangular matrix from ragged rows, padding with zeros.
    pub fn from_lower_rows(rows: &[&[i64]]) -> Result<Self> {
        let n = rows.len();
        let mut full = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() > n {
                return Err(Error::Ragged { row: i + 1, len: row.len(), expected: n });
            }
            let mut r: Vec<BigInt> = row.iter().map(|&v| BigInt::from(v)).collect();
            r.resize(n, BigInt::zero());
            full.push(r);
        }
        Self::from_rows(full)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.n)
    }

    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j).is_zero()))
    }

    /// First `(row, col)` in row-major order where `self` and `other` differ.
    pub fn first_difference(&self, other: &IntMatrix) -> Option<(usize, usize)> {
        if self.n != other.n {
            return Some((0, 0));
        }
        self.entries.iter().zip(&other.entries).position(|(a, b)| a != b).map(|k| (k / self.n, k % self.n))
    }

    fn check_same_dim(&self, other: &IntMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.check_same_dim(rhs)?;
        let n = self.n;
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(IntMatrix { n, entries: out })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: v.len() });
        }
        Ok(self.rows().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn add(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.check_same_dim(rhs)?;
        Ok(Self::from_fn(self.n, |i, j| self.get(i, j) + rhs.get(i, j)))
    }

    pub fn sub(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        self.check_same_dim(rhs)?;
        Ok(Self::from_fn(self.n, |i, j| self.get(i, j) - rhs.get(i, j)))
    }

    pub fn minus_identity(&self) -> IntMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            out[(i, i)] -= 1;
        }
        out
    }

    /// `A^r` by repeated squaring; `A^0 = I`.
    pub fn power(&self, r: u32) -> IntMatrix {
        let mut result = IntMatrix::identity(self.n);
        let mut base = self.clone();
        let mut e = r;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Inverse of a unit lower-triangular matrix by forward substitution.
    pub fn inverse_unitriangular(&self) -> Result<IntMatrix> {
        let n = self.n;
        for i in 0..n {
            if !self.get(i, i).is_one() {
                return Err(Error::NotUnitriangular { row: i + 1, col: i + 1 });
            }
            for j in i + 1..n {
                if !self.get(i, j).is_zero() {
                    return Err(Error::NotUnitriangular { row: i + 1, col: j + 1 });
                }
            }
        }
        // Column j of the inverse solves A x = e_j.
        let mut inv = IntMatrix::zeros(n);
        for j in 0..n {
            inv[(j, j)] = BigInt::one();
            for i in j + 1..n {
                let s: BigInt = (j..i).map(|k| self.get(i, k) * inv.get(k, j)).sum();
                inv[(i, j)] = -s;
            }
        }
        Ok(inv)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &pivot * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = v / &prev;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = pivot;
        }
        sign * &a[n * n - 1]
    }

    pub fn reduce_mod(&self, p: u64) -> Result<ModMatrix> {
        check_prime(p)?;
        let modulus = BigInt::from(p);
        let entries =
            self.entries.iter().map(|e| e.mod_floor(&modulus).to_u64().expect("residue fits in u64")).collect();
        Ok(ModMatrix { n: self.n, p, entries })
    }

    /// Copy with every off-diagonal entry set to zero.
    pub fn diagonal_part(&self) -> IntMatrix {
        Self::from_fn(self.n, |i, j| if i == j { self.get(i, j).clone() } else { BigInt::zero() })
    }

    /// Square `size x size` block whose top-left corner is `(row0, col0)`.
    pub fn submatrix(&self, row0: usize, col0: usize, size: usize) -> Result<IntMatrix> {
        if size == 0 || row0 + size > self.n || col0 + size > self.n {
            return Err(Error::BlockLayout(format!(
                "{size}x{size} block at ({row0},{col0}) outside {n}x{n}",
                n = self.n
            )));
        }
        Ok(Self::from_fn(size, |i, j| self.get(row0 + i, col0 + j).clone()))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(ToString::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<IntMatrix> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.split(',').map(|t| parse_int(t.trim())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    /// Structured text form: `n=<dim>; row 1: e11 e12 ...; row 2: ...`.
    pub fn to_text(&self) -> String {
        let mut parts = vec![format!("n={}", self.n)];
        for (i, row) in self.rows().enumerate() {
            let vals: Vec<String> = row.iter().map(ToString::to_string).collect();
            parts.push(format!("row {}: {}", i + 1, vals.join(" ")));
        }
        parts.join("; ")
    }

    /// Parses the structured text form. Records may be separated by `;` or
    /// newlines.
    pub fn from_text(text: &str) -> Result<IntMatrix> {
        let mut records = text.split([';', '\n']).map(str::trim).filter(|s| !s.is_empty());
        let header = records.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("expected `n=<dim>`, got `{header}`")))?;
        let mut rows: Vec<Option<Vec<BigInt>>> = vec![None; n];
        for rec in records {
            let (label, body) =
                rec.split_once(':').ok_or_else(|| Error::Parse(format!("expected `row i: ...`, got `{rec}`")))?;
            let idx: usize = label
                .trim()
                .strip_prefix("row")
                .and_then(|v| v.trim().parse().ok())
                .filter(|&i| (1..=n).contains(&i))
                .ok_or_else(|| Error::Parse(format!("bad row label `{label}`")))?;
            let vals = body.split_whitespace().map(parse_int).collect::<Result<Vec<_>>>()?;
            if rows[idx - 1].replace(vals).is_some() {
                return Err(Error::Parse(format!("row {idx} given twice")));
            }
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| r.ok_or_else(|| Error::Parse(format!("row {} missing", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }
}

fn parse_int(token: &str) -> Result<BigInt> {
    token.parse().map_err(|_| Error::Parse(format!("`{token}` is not an integer")))
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.n + j]
    }
}

// Operator forms panic on dimension mismatch; use the named methods for a
// `Result`.
impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        IntMatrix::mul(self, rhs).expect("matrix dimensions agree")
    }
}

impl Add for &IntMatrix {
    type Output = IntMatrix;
    fn add(self, rhs: &IntMatrix) -> IntMatrix {
        IntMatrix::add(self, rhs).expect("matrix dimensions agree")
    }
}

impl Sub for &IntMatrix {
    type Output = IntMatrix;
    fn sub(self, rhs: &IntMatrix) -> IntMatrix {
        IntMatrix::sub(self, rhs).expect("matrix dimensions agree")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({})", self.to_text())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Serialization used by the CLI and certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatrixFormat {
    #[default]
    Csv,
    Text,
}

impl MatrixFormat {
    /// Rendered matrix, always newline-terminated.
    pub fn render(self, a: &IntMatrix) -> String {
        match self {
            MatrixFormat::Csv => a.to_csv(),
            MatrixFormat::Text => format!("{}\n", a.to_text()),
        }
    }

    /// Parses either format, choosing by the leading `n=` header.
    pub fn parse_any(text: &str) -> Result<IntMatrix> {
        if text.trim_start().starts_with("n=") {
            IntMatrix::from_text(text)
        } else {
            IntMatrix::from_csv(text)
        }
    }
}

/// One block of a 2x2 block layout.
#[derive(Debug, Clone, Copy)]
pub enum Block<'a> {
    Zero,
    Identity,
    Dense(&'a IntMatrix),
}

/// Assembles `[[top_left, top_right], [bottom_left, bottom_right]]` into an
/// `n x n` matrix. Rows split after `row_split`, columns after `col_split`.
/// `Identity` and `Dense` blocks must occupy square regions of matching size;
/// `Zero` fits any region.
pub fn block2x2(n: usize, row_split: usize, col_split: usize, blocks: [[Block<'_>; 2]; 2]) -> Result<IntMatrix> {
    if n == 0 {
        return Err(Error::EmptyMatrix);
    }
    if row_split > n || col_split > n {
        return Err(Error::BlockLayout(format!("split ({row_split},{col_split}) exceeds {n}")));
    }
    let row_ranges = [(0, row_split), (row_split, n - row_split)];
    let col_ranges = [(0, col_split), (col_split, n - col_split)];
    let mut out = IntMatrix::zeros(n);
    for (bi, &(r0, h)) in row_ranges.iter().enumerate() {
        for (bj, &(c0, w)) in col_ranges.iter().enumerate() {
            let block = blocks[bi][bj];
            match block {
                Block::Zero => {}
                Block::Identity | Block::Dense(_) => {
                    if h != w {
                        return Err(Error::BlockLayout(format!(
                            "block ({},{}) region is {h}x{w}, not square",
                            bi + 1,
                            bj + 1
                        )));
                    }
                    if let Block::Dense(m) = block {
                        if m.dim() != h {
                            return Err(Error::BlockLayout(format!(
                                "block ({},{}) is {d}x{d}, region is {h}x{h}",
                                bi + 1,
                                bj + 1,
                                d = m.dim()
                            )));
                        }
                    }
                    for i in 0..h {
                        for j in 0..w {
                            out[(r0 + i, c0 + j)] = match block {
                                Block::Dense(m) => m.get(i, j).clone(),
                                _ if i == j => BigInt::one(),
                                _ => BigInt::zero(),
                            };
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Trial-division primality test.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `a^{-1} mod p` for `a` nonzero mod prime `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    result
}

/// Square matrix over `F_p` with residues in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    n: usize,
    p: u64,
    entries: Vec<u64>,
}

impl ModMatrix {
    /// Entries are reduced into `[0, p)`.
    pub fn new(n: usize, p: u64, entries: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { left: n * n, right: entries.len() });
        }
        Ok(ModMatrix { n, p, entries: entries.into_iter().map(|e| e % p).collect() })
    }

    pub fn identity(n: usize, p: u64) -> Result<Self> {
        let entries = (0..n * n).map(|k| u64::from(k / n == k % n)).collect();
        Self::new(n, p, entries)
    }

    pub fn zeros(n: usize, p: u64) -> Result<Self> {
        Self::new(n, p, vec![0; n * n])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    fn check_compatible(&self, other: &ModMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        if self.p != other.p {
            return Err(Error::OutOfRange(format!("moduli differ: {} vs {}", self.p, other.p)));
        }
        Ok(())
    }

    pub fn mul(&self, rhs: &ModMatrix) -> Result<ModMatrix> {
        self.check_compatible(rhs)?;
        let (n, p) = (self.n, self.p);
        let mut out = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let cell = &mut out[i * n + j];
                    *cell = (*cell + mul_mod(a, rhs.get(k, j), p)) % p;
                }
            }
        }
        Ok(ModMatrix { n, p, entries: out })
    }

    pub fn minus_identity(&self) -> ModMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            let e = &mut out.entries[i * self.n + i];
            *e = (*e + self.p - 1) % self.p;
        }
        out
    }

    pub fn power(&self, e: u32) -> ModMatrix {
        let mut result = ModMatrix::identity(self.n, self.p).expect("validated modulus");
        for _ in 0..e {
            result = result.mul(self).expect("same shape");
        }
        result
    }

    /// Rank over `F_p` by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let (n, p) = (self.n, self.p);
        let mut a = self.entries.clone();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&i| a[i * n + col] != 0) else {
                continue;
            };
            for j in 0..n {
                a.swap(rank * n + j, pivot * n + j);
            }
            let inv = inv_mod(a[rank * n + col], p);
            for j in col..n {
                a[rank * n + j] = mul_mod(a[rank * n + j], inv, p);
            }
            for i in 0..n {
                if i == rank || a[i * n + col] == 0 {
                    continue;
                }
                let factor = a[i * n + col];
                for j in col..n {
                    let sub = mul_mod(factor, a[rank * n + j], p);
                    a[i * n + j] = (a[i * n + j] + p - sub) % p;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn to_int(&self) -> IntMatrix {
        IntMatrix::from_fn(self.n, |i, j| BigInt::from(self.get(i, j)))
    }
}

/// Rank of a matrix over `F_p`.
pub fn rank_mod(a: &ModMatrix) -> usize {
    a.rank()
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModMatrix(p={}, {})", self.p, self.to_int().to_text())
    }
}
