//! Canonical forms: Smith normal form over the integers (with optional
//! unimodular certificates), Jordan block structure of unipotent matrices
//! over `F_p`, and rescaling of near-Jordan matrices to Jordan blocks.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{block2x2, check_prime, inv_mod, Block, IntMatrix, MatrixFormat, ModMatrix};
use crate::numbers::rising;
use crate::pascal::{d_matrix, h_matrix, pascal, stirling_matrix, StirlingKind};

/// Smith normal form of a square integer matrix.
///
/// `diagonal` is nonnegative, each nonzero entry divides the next, and zeros
/// come last. When `transforms` is present, `U * A * V = diag(diagonal)` with
/// `det U, det V = +-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub transforms: Option<(IntMatrix, IntMatrix)>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn diagonal_matrix(&self) -> IntMatrix {
        IntMatrix::diagonal(&self.diagonal)
    }

    /// Nonnegative, divisibility chain, zeros trailing.
    pub fn is_divisibility_chain(&self) -> bool {
        is_divisibility_chain(&self.diagonal)
    }

    /// Re-multiplies the certificate against `source`. False when no
    /// transforms were recorded.
    pub fn verify_certificate(&self, source: &IntMatrix) -> bool {
        let Some((u, v)) = &self.transforms else {
            return false;
        };
        let Ok(uav) = u.mul(source).and_then(|ua| ua.mul(v)) else {
            return false;
        };
        uav == self.diagonal_matrix()
            && u.determinant().abs().is_one()
            && v.determinant().abs().is_one()
            && self.is_divisibility_chain()
    }

    /// `diag: d1 ... dn`, then `U:` and `V:` blocks when transforms exist.
    pub fn to_certificate(&self, format: MatrixFormat) -> String {
        let diag: Vec<String> = self.diagonal.iter().map(ToString::to_string).collect();
        let mut out = format!("diag: {}\n", diag.join(" "));
        if let Some((u, v)) = &self.transforms {
            out.push_str("U:\n");
            out.push_str(&format.render(u));
            out.push_str("V:\n");
            out.push_str(&format.render(v));
        }
        out
    }

    /// Inverse of [`SmithForm::to_certificate`]. Trailing `key: value` lines
    /// after the `V:` block (e.g. `verified: true`) are ignored.
    pub fn from_certificate(text: &str) -> Result<SmithForm> {
        let mut lines = text.lines();
        let first = lines.next().ok_or_else(|| Error::Parse("empty certificate".into()))?;
        let diag_text =
            first.strip_prefix("diag:").ok_or_else(|| Error::Parse(format!("expected `diag:`, got `{first}`")))?;
        let diagonal = diag_text
            .split_whitespace()
            .map(|t| t.parse::<BigInt>().map_err(|_| Error::Parse(format!("`{t}` is not an integer"))))
            .collect::<Result<Vec<_>>>()?;

        let mut u_lines = Vec::new();
        let mut v_lines = Vec::new();
        let mut section = 0;
        for line in lines {
            match line.trim() {
                "U:" => section = 1,
                "V:" => section = 2,
                "" => {}
                l if section == 1 => u_lines.push(l),
                l if section == 2 && (l.starts_with("n=") || !l.contains(": ")) => v_lines.push(l),
                _ => section = 3,
            }
        }
        let transforms = match (u_lines.is_empty(), v_lines.is_empty()) {
            (true, true) => None,
            (false, false) => {
                Some((MatrixFormat::parse_any(&u_lines.join("\n"))?, MatrixFormat::parse_any(&v_lines.join("\n"))?))
            }
            _ => return Err(Error::Parse("certificate has only one of U and V".into())),
        };
        Ok(SmithForm { diagonal, transforms })
    }
}

fn is_divisibility_chain(diag: &[BigInt]) -> bool {
    if diag.iter().any(Signed::is_negative) {
        return false;
    }
    let rank = diag.iter().take_while(|d| !d.is_zero()).count();
    if diag[rank..].iter().any(|d| !d.is_zero()) {
        return false;
    }
    diag[..rank].windows(2).all(|w| w[1].is_multiple_of(&w[0]))
}

/// Working state for the elimination: the matrix being reduced plus the
/// accumulated row (`u`) and column (`v`) operations.
struct SnfWork {
    n: usize,
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn rows_to_matrix(rows: Vec<Vec<BigInt>>) -> IntMatrix {
    IntMatrix::from_rows(rows).expect("square")
}

impl SnfWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for row in v {
                row.swap(i, j);
            }
        }
    }

    /// row[target] += factor * row[source]
    fn add_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        fn apply(m: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
            let src = m[source].clone();
            for (t, s) in m[target].iter_mut().zip(&src) {
                if !s.is_zero() {
                    *t += factor * s;
                }
            }
        }
        apply(&mut self.a, target, source, factor);
        if let Some(u) = &mut self.u {
            apply(u, target, source, factor);
        }
    }

    /// col[target] += factor * col[source]
    fn add_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        fn apply(m: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
            for row in m {
                if !row[source].is_zero() {
                    let s = &row[source] * factor;
                    row[target] += s;
                }
            }
        }
        apply(&mut self.a, target, source, factor);
        if let Some(v) = &mut self.v {
            apply(v, target, source, factor);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -std::mem::take(x);
            }
        }
    }

    /// Smallest nonzero absolute value in the trailing submatrix; ties go to
    /// the smaller row, then the smaller column.
    fn find_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.n {
            for j in k..self.n {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.magnitude() < self.a[bi][bj].magnitude(),
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Clears row and column `k` apart from the pivot, and makes the pivot
    /// divide every remaining entry. Returns false when the trailing
    /// submatrix is zero.
    fn reduce_step(&mut self, k: usize) -> bool {
        loop {
            let Some((pi, pj)) = self.find_pivot(k) else {
                return false;
            };
            self.swap_rows(k, pi);
            self.swap_cols(k, pj);
            let pivot = self.a[k][k].clone();

            let mut leftover = false;
            for i in k + 1..self.n {
                if self.a[i][k].is_zero() {
                    continue;
                }
                let q = &self.a[i][k] / &pivot;
                if !q.is_zero() {
                    self.add_row(i, k, &-q);
                }
                leftover |= !self.a[i][k].is_zero();
            }
            for j in k + 1..self.n {
                if self.a[k][j].is_zero() {
                    continue;
                }
                let q = &self.a[k][j] / &pivot;
                if !q.is_zero() {
                    self.add_col(j, k, &-q);
                }
                leftover |= !self.a[k][j].is_zero();
            }
            if leftover {
                continue;
            }

            let offender = (k + 1..self.n)
                .flat_map(|i| (k + 1..self.n).map(move |j| (i, j)))
                .find(|&(i, j)| !self.a[i][j].is_multiple_of(&pivot));
            match offender {
                Some((i, _)) => self.add_row(k, i, &BigInt::one()),
                None => {
                    if pivot.is_negative() {
                        self.negate_row(k);
                    }
                    return true;
                }
            }
        }
    }
}

/// Smith normal form by pivoted elimination. Transform tracking is optional.
pub fn smith_normal_form(a: &IntMatrix, want_transforms: bool) -> SmithForm {
    let n = a.dim();
    let mut work = SnfWork {
        n,
        a: a.rows().map(<[BigInt]>::to_vec).collect(),
        u: want_transforms.then(|| identity_rows(n)),
        v: want_transforms.then(|| identity_rows(n)),
    };
    for k in 0..n {
        if !work.reduce_step(k) {
            break;
        }
    }
    let diagonal = (0..n).map(|i| work.a[i][i].clone()).collect();
    let transforms = match (work.u, work.v) {
        (Some(u), Some(v)) => Some((rows_to_matrix(u), rows_to_matrix(v))),
        _ => None,
    };
    SmithForm { diagonal, transforms }
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(x: &BigInt) -> Vec<(BigInt, u32)> {
    let mut m = x.abs();
    let mut out = Vec::new();
    if m.is_zero() {
        return out;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= m {
        let mut e = 0;
        while m.is_multiple_of(&d) {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += if d == BigInt::from(2) { 1 } else { 2 };
    }
    if !m.is_one() {
        out.push((m, 1));
    }
    out
}

/// Smith form of a diagonal matrix, via elementary divisors: per prime, the
/// valuations of the nonzero entries are sorted and redistributed so the
/// k-th output gets the k-th smallest. Zeros become trailing zeros.
pub fn snf_of_diagonal(d: &[BigInt]) -> Vec<BigInt> {
    let nonzero: Vec<&BigInt> = d.iter().filter(|x| !x.is_zero()).collect();
    let count = nonzero.len();
    let mut valuations: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
    for (idx, x) in nonzero.iter().enumerate() {
        for (p, e) in factorize(x) {
            valuations.entry(p).or_insert_with(|| vec![0; count])[idx] = e;
        }
    }
    let mut out = vec![BigInt::one(); count];
    for (p, mut vals) in valuations {
        vals.sort_unstable();
        for (slot, e) in out.iter_mut().zip(vals) {
            *slot *= p.pow(e);
        }
    }
    out.resize(d.len(), BigInt::zero());
    out
}

/// Smith diagonal of `(P_n - I)^r` obtained from its equivalent diagonal
/// `(1^(rising r), ..., (n-r)^(rising r), 0, ..., 0)`.
pub fn predicted_snf_diagonal(n: usize, r: usize) -> Result<Vec<BigInt>> {
    if r < 1 {
        return Err(Error::OutOfRange("r must be at least 1".into()));
    }
    if r >= n {
        return Ok(vec![BigInt::zero(); n]);
    }
    let mut diag: Vec<BigInt> = (1..=(n - r) as i64).map(|i| rising(i, r)).collect();
    diag.resize(n, BigInt::zero());
    Ok(snf_of_diagonal(&diag))
}

/// Unimodular `U`, `V` with `U (P_n - I)^r V = diag(D_{n,r}, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equivalence {
    pub u: IntMatrix,
    pub v: IntMatrix,
}

/// Builds the explicit equivalence from the cycle-number conjugation of
/// `(P_n - I)^r` and the inverse of `H_{n,r}`:
/// `U = swap * C_n` with `swap = [[0, I_{n-r}], [I_r, 0]]`, and
/// `V = C_n^{-1} * diag(H_{n,r}, I_r)`.
pub fn explicit_equivalence(n: usize, r: usize) -> Result<Equivalence> {
    let h = h_matrix(n, r)?;
    let c = stirling_matrix(StirlingKind::Cycle, n)?;
    let c_inv = c.inverse_unitriangular()?;
    let swap = block2x2(n, n - r, r, [[Block::Zero, Block::Identity], [Block::Identity, Block::Zero]])?;
    let h_ext = block2x2(n, n - r, n - r, [[Block::Dense(&h), Block::Zero], [Block::Zero, Block::Identity]])?;
    Ok(Equivalence { u: swap.mul(&c)?, v: c_inv.mul(&h_ext)? })
}

/// The diagonal target `diag(D_{n,r}, 0)` of [`explicit_equivalence`].
pub fn equivalence_target(n: usize, r: usize) -> Result<IntMatrix> {
    let d = d_matrix(n, r)?;
    block2x2(n, n - r, n - r, [[Block::Dense(&d), Block::Zero], [Block::Zero, Block::Zero]])
}

/// Eigenvalue plus Jordan block sizes, sizes sorted largest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanSpec {
    pub eigenvalue: u64,
    pub block_sizes: Vec<usize>,
}

impl JordanSpec {
    pub fn new(eigenvalue: u64, mut block_sizes: Vec<usize>) -> Self {
        block_sizes.sort_unstable_by(|a, b| b.cmp(a));
        JordanSpec { eigenvalue, block_sizes }
    }

    pub fn dim(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    pub fn block_count(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn largest_block(&self) -> usize {
        self.block_sizes.first().copied().unwrap_or(0)
    }
}

impl fmt::Display for JordanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.block_sizes.iter().map(ToString::to_string).collect();
        write!(f, "{} (eigenvalue {})", sizes.join(" "), self.eigenvalue)
    }
}

/// Ranks of `N^0, N^1, ...` up to the first zero power, or `None` if `N`
/// is not nilpotent.
fn nilpotent_rank_sequence(nil: &ModMatrix) -> Option<Vec<usize>> {
    let n = nil.dim();
    let mut ranks = vec![n];
    let mut power = nil.clone();
    loop {
        let rank = power.rank();
        ranks.push(rank);
        if rank == 0 {
            return Some(ranks);
        }
        if ranks.len() > n {
            return None;
        }
        power = power.mul(nil).expect("same shape");
    }
}

/// Jordan blocks of a unipotent matrix over `F_p`. With
/// `r_k = rank (A - I)^k`, the number of blocks of size at least `k` is
/// `r_{k-1} - r_k`.
pub fn jordan_blocks_unipotent_mod_p(a: &ModMatrix) -> Result<JordanSpec> {
    let ranks = nilpotent_rank_sequence(&a.minus_identity()).ok_or(Error::NotUnipotent { p: a.modulus() })?;
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for (k, &count) in at_least.iter().enumerate() {
        let bigger = at_least.get(k + 1).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k + 1, count - bigger));
    }
    Ok(JordanSpec::new(1 % a.modulus(), sizes))
}

/// `floor(n/p)` blocks of size `p`, plus one of size `n mod p` if nonzero.
pub fn predicted_pascal_jordan_mod_p(n: usize, p: u64) -> Result<JordanSpec> {
    check_prime(p)?;
    let p_us = p as usize;
    let mut sizes = vec![p_us; n / p_us];
    if !n.is_multiple_of(p_us) {
        sizes.push(n % p_us);
    }
    Ok(JordanSpec::new(1, sizes))
}

/// Smallest `e` with `(P_n - I)^e = 0` over `F_p`.
pub fn min_poly_exponent_mod_p(n: usize, p: u64) -> Result<usize> {
    let nil = pascal(n)?.reduce_mod(p)?.minus_identity();
    let ranks = nilpotent_rank_sequence(&nil).ok_or(Error::NotUnipotent { p })?;
    Ok(ranks.len() - 1)
}

/// Output of [`near_jordan_normalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normalized {
    Int(IntMatrix),
    Mod(ModMatrix),
}

/// Rescales a near-Jordan matrix (constant diagonal, nonzero subdiagonal
/// `c_1..c_{n-1}`, zeros elsewhere) to the Jordan block with unit
/// subdiagonal.
///
/// With `D = diag(1, c_1, c_1 c_2, ...)` the result is `D^{-1} J D`, i.e.
/// entry `(i, j)` becomes `d_j J_ij / d_i`. Over `F_p` (when `p` is given)
/// the subdiagonal must be nonzero mod `p` and the scaling is returned as
/// residues.
pub fn near_jordan_normalize(j: &IntMatrix, p: Option<u64>) -> Result<(Vec<BigInt>, Normalized)> {
    let n = j.dim();
    match p {
        None => {
            check_near_jordan(j, |x| x.is_zero())?;
            let mut scaling = vec![BigInt::one()];
            for i in 1..n {
                let next = &scaling[i - 1] * j.get(i, i - 1);
                scaling.push(next);
            }
            let mut out = IntMatrix::zeros(n);
            for row in 0..n {
                for col in 0..n {
                    let num = &scaling[col] * j.get(row, col);
                    let (q, rem) = num.div_rem(&scaling[row]);
                    if !rem.is_zero() {
                        return Err(Error::InexactDivision { row: row + 1, col: col + 1 });
                    }
                    out[(row, col)] = q;
                }
            }
            Ok((scaling, Normalized::Int(out)))
        }
        Some(p) => {
            let reduced = j.reduce_mod(p)?;
            let residues = reduced.to_int();
            check_near_jordan(&residues, |x| x.is_zero())?;
            let mut scaling = vec![1u64];
            for i in 1..n {
                let next = (scaling[i - 1] as u128 * reduced.get(i, i - 1) as u128 % p as u128) as u64;
                scaling.push(next);
            }
            let mut entries = Vec::with_capacity(n * n);
            for row in 0..n {
                let inv = inv_mod(scaling[row], p) as u128;
                for (col, &d) in scaling.iter().enumerate() {
                    let v = d as u128 * reduced.get(row, col) as u128 % p as u128;
                    entries.push((v * inv % p as u128) as u64);
                }
            }
            let scaling = scaling.into_iter().map(BigInt::from).collect();
            Ok((scaling, Normalized::Mod(ModMatrix::new(n, p, entries)?)))
        }
    }
}

fn check_near_jordan(j: &IntMatrix, is_zero: impl Fn(&BigInt) -> bool) -> Result<()> {
    let n = j.dim();
    let lambda = j.get(0, 0);
    for row in 0..n {
        for col in 0..n {
            let x = j.get(row, col);
            if row == col {
                if x != lambda {
                    return Err(Error::NotNearJordan(format!("diagonal entry {} differs", row + 1)));
                }
            } else if row == col + 1 {
                if is_zero(x) {
                    return Err(Error::NotNearJordan(format!("subdiagonal entry ({},{}) is zero", row + 1, col + 1)));
                }
            } else if !is_zero(x) {
                return Err(Error::NotNearJordan(format!(
                    "entry ({},{}) off the two diagonals is nonzero",
                    row + 1,
                    col + 1
                )));
            }
        }
    }
    Ok(())
}

/// Prime -> exponents (ascending) of that prime across the Smith diagonal.
pub fn elementary_divisors(a: &IntMatrix) -> BTreeMap<BigInt, Vec<u32>> {
    divisors_of_chain(&smith_normal_form(a, false).diagonal)
}

pub(crate) fn divisors_of_chain(diag: &[BigInt]) -> BTreeMap<BigInt, Vec<u32>> {
    let mut out: BTreeMap<BigInt, Vec<u32>> = BTreeMap::new();
    for d in diag.iter().filter(|d| !d.is_zero()) {
        for (p, e) in factorize(d) {
            out.entry(p).or_default().push(e);
        }
    }
    for v in out.values_mut() {
        v.sort_unstable();
    }
    out
}

/// Determinantal divisors `D_k` recomputed from a Smith diagonal; handy for
/// comparing against minors.
pub fn determinantal_divisors(diag: &[BigInt]) -> Vec<BigInt> {
    diag.iter()
        .scan(BigInt::one(), |acc, d| {
            *acc *= d;
            Some(acc.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pascal::{bidiagonal_target, closed_form_power};
    use proptest::prelude::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn lower(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_lower_rows(rows).unwrap()
    }

    /// Independent oracle: brute-force Smith form of a diagonal matrix via
    /// determinantal divisors, `D_k = gcd of all k-subset products`.
    fn diagonal_snf_by_subsets(d: &[i64]) -> Vec<BigInt> {
        let n = d.len();
        let mut dk = vec![BigInt::one()];
        for k in 1..=n {
            let mut g = BigInt::zero();
            for mask in 0u32..(1 << n) {
                if mask.count_ones() as usize == k {
                    let prod: BigInt = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| BigInt::from(d[i])).product();
                    g = g.gcd(&prod);
                }
            }
            dk.push(g);
        }
        (1..=n).map(|k| if dk[k].is_zero() { BigInt::zero() } else { &dk[k] / &dk[k - 1] }).collect()
    }

    #[test]
    fn oracle_values() {
        assert_eq!(diagonal_snf_by_subsets(&[1, 2, 3, 4, 0]), big(&[1, 1, 2, 12, 0]));
        assert_eq!(diagonal_snf_by_subsets(&[2, 6, 12, 20]), big(&[2, 2, 12, 60]));
    }

    #[test]
    fn snf_examples() {
        let zero = smith_normal_form(&IntMatrix::zeros(4), true);
        assert_eq!(zero.diagonal, big(&[0, 0, 0, 0]));
        assert!(zero.verify_certificate(&IntMatrix::zeros(4)));

        let p5 = pascal(5).unwrap();
        assert_eq!(smith_normal_form(&p5, false).diagonal, big(&[1, 1, 1, 1, 1]));

        let d = IntMatrix::diagonal(&big(&[1, 2, 3, 4, 0]));
        let snf = smith_normal_form(&d, true);
        assert_eq!(snf.diagonal, big(&[1, 1, 2, 12, 0]));
        assert!(snf.verify_certificate(&d));
        assert_eq!(snf.rank(), 4);

        let neg = IntMatrix::from_i64_rows(&[&[-6]]).unwrap();
        assert_eq!(smith_normal_form(&neg, true).diagonal, big(&[6]));
    }

    #[test]
    fn snf_without_transforms_has_none() {
        let snf = smith_normal_form(&IntMatrix::identity(3), false);
        assert!(snf.transforms.is_none());
        assert!(!snf.verify_certificate(&IntMatrix::identity(3)));
    }

    #[test]
    fn diagonal_snf_examples() {
        assert_eq!(snf_of_diagonal(&big(&[1, 2, 3, 4])), big(&[1, 1, 2, 12]));
        assert_eq!(snf_of_diagonal(&big(&[2, 6, 12, 20])), big(&[2, 2, 12, 60]));
        assert_eq!(snf_of_diagonal(&big(&[0, 0, 0])), big(&[0, 0, 0]));
        assert_eq!(snf_of_diagonal(&big(&[0, 5, -3])), big(&[1, 15, 0]));
    }

    #[test]
    fn predicted_snf_examples() {
        assert_eq!(predicted_snf_diagonal(5, 1).unwrap(), big(&[1, 1, 2, 12, 0]));
        assert_eq!(predicted_snf_diagonal(6, 2).unwrap(), big(&[2, 2, 12, 60, 0, 0]));
        assert_eq!(predicted_snf_diagonal(4, 4).unwrap(), big(&[0, 0, 0, 0]));
        assert!(predicted_snf_diagonal(4, 0).is_err());
    }

    #[test]
    fn explicit_equivalence_examples() {
        let eq = explicit_equivalence(3, 1).unwrap();
        let a = pascal(3).unwrap().minus_identity();
        assert_eq!(&(&eq.u * &a) * &eq.v, IntMatrix::diagonal(&big(&[1, 2, 0])));

        let eq = explicit_equivalence(6, 2).unwrap();
        assert!(eq.u.determinant().abs().is_one());
        assert!(eq.v.determinant().abs().is_one());
        let a = pascal(6).unwrap().minus_identity().power(2);
        let target = IntMatrix::diagonal(&big(&[2, 6, 12, 20, 0, 0]));
        assert_eq!(&(&eq.u * &a) * &eq.v, target);
        assert_eq!(equivalence_target(6, 2).unwrap(), target);

        assert!(explicit_equivalence(4, 4).is_err());
        assert!(explicit_equivalence(4, 0).is_err());
    }

    #[test]
    fn jordan_examples() {
        let id = ModMatrix::identity(4, 3).unwrap();
        assert_eq!(jordan_blocks_unipotent_mod_p(&id).unwrap(), JordanSpec::new(1, vec![1, 1, 1, 1]));

        let p5 = pascal(5).unwrap().reduce_mod(2).unwrap();
        let spec = jordan_blocks_unipotent_mod_p(&p5).unwrap();
        assert_eq!(spec.block_sizes, vec![2, 2, 1]);
        assert_eq!(spec.to_string(), "2 2 1 (eigenvalue 1)");

        let p4 = pascal(4).unwrap().reduce_mod(5).unwrap();
        assert_eq!(jordan_blocks_unipotent_mod_p(&p4).unwrap().block_sizes, vec![4]);

        let not_unipotent = IntMatrix::diagonal(&big(&[1, 2])).reduce_mod(5).unwrap();
        assert_eq!(jordan_blocks_unipotent_mod_p(&not_unipotent).unwrap_err(), Error::NotUnipotent { p: 5 });
    }

    #[test]
    fn predicted_jordan_examples() {
        assert_eq!(predicted_pascal_jordan_mod_p(5, 2).unwrap().block_sizes, vec![2, 2, 1]);
        assert_eq!(predicted_pascal_jordan_mod_p(6, 3).unwrap().block_sizes, vec![3, 3]);
        assert_eq!(predicted_pascal_jordan_mod_p(7, 3).unwrap().block_sizes, vec![3, 3, 1]);
        assert_eq!(predicted_pascal_jordan_mod_p(7, 9).unwrap_err(), Error::NotPrime(9));
    }

    #[test]
    fn min_poly_examples() {
        assert_eq!(min_poly_exponent_mod_p(8, 2).unwrap(), 2);
        assert_eq!(min_poly_exponent_mod_p(2, 5).unwrap(), 2);
        assert_eq!(min_poly_exponent_mod_p(1, 7).unwrap(), 1);
        assert!(min_poly_exponent_mod_p(3, 4).is_err());
    }

    #[test]
    fn jordan_matches_prediction_and_ranks() {
        for &p in &[2u64, 3, 5, 7, 11] {
            for n in 1..=30 {
                let a = pascal(n).unwrap().reduce_mod(p).unwrap();
                let got = jordan_blocks_unipotent_mod_p(&a).unwrap();
                assert_eq!(got, predicted_pascal_jordan_mod_p(n, p).unwrap(), "n={n} p={p}");
                assert_eq!(got.dim(), n);
                assert_eq!(got.largest_block(), min_poly_exponent_mod_p(n, p).unwrap());
                if n <= 12 && p <= 5 {
                    assert_eq!(a.minus_identity().rank() + got.block_count(), n);
                }
            }
        }
    }

    #[test]
    fn near_jordan_over_integers() {
        let jordan = lower(&[&[3], &[1, 3], &[0, 1, 3]]);
        let (scaling, out) = near_jordan_normalize(&jordan, None).unwrap();
        assert_eq!(scaling, big(&[1, 1, 1]));
        assert_eq!(out, Normalized::Int(jordan));

        let near = lower(&[&[1], &[1, 1], &[0, 2, 1]]);
        let (scaling, out) = near_jordan_normalize(&near, None).unwrap();
        assert_eq!(scaling, big(&[1, 1, 2]));
        let expected = lower(&[&[1], &[1, 1], &[0, 1, 1]]);
        assert_eq!(out, Normalized::Int(expected.clone()));
        // D^{-1} J D, checked by multiplication
        let d = IntMatrix::diagonal(&scaling);
        assert_eq!(&near * &d, &d * &expected);
    }

    #[test]
    fn near_jordan_over_f3() {
        let target = bidiagonal_target(3).unwrap();
        let (scaling, out) = near_jordan_normalize(&target, Some(3)).unwrap();
        assert_eq!(scaling, big(&[1, 1, 2]));
        let Normalized::Mod(m) = out else { panic!("expected a mod-p result") };
        assert_eq!(m.to_int(), lower(&[&[1], &[1, 1], &[0, 1, 1]]));
    }

    #[test]
    fn near_jordan_rejections() {
        let zero_sub = lower(&[&[2], &[0, 2]]);
        assert!(matches!(near_jordan_normalize(&zero_sub, None), Err(Error::NotNearJordan(_))));
        let bad_diag = lower(&[&[1], &[1, 2]]);
        assert!(matches!(near_jordan_normalize(&bad_diag, None), Err(Error::NotNearJordan(_))));
        let stray = lower(&[&[1], &[1, 1], &[5, 1, 1]]);
        assert!(matches!(near_jordan_normalize(&stray, None), Err(Error::NotNearJordan(_))));
        // subdiagonal 3 vanishes mod 3
        let target4 = bidiagonal_target(4).unwrap();
        assert!(matches!(near_jordan_normalize(&target4, Some(3)), Err(Error::NotNearJordan(_))));
        assert!(near_jordan_normalize(&target4, None).is_ok());
        assert_eq!(near_jordan_normalize(&target4, Some(4)).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn elementary_divisor_examples() {
        assert!(elementary_divisors(&IntMatrix::identity(4)).is_empty());
        let d = IntMatrix::diagonal(&big(&[1, 2, 3, 4]));
        let ed = elementary_divisors(&d);
        assert_eq!(ed.len(), 2);
        assert_eq!(ed[&BigInt::from(2)], vec![1, 2]);
        assert_eq!(ed[&BigInt::from(3)], vec![1]);

        // Smith diagonal (2, 2, 12, 60): 12 and 60 each carry one factor 3.
        let a = closed_form_power(6, 2).unwrap();
        let ed = elementary_divisors(&a);
        assert_eq!(ed[&BigInt::from(2)], vec![1, 1, 2, 2]);
        assert_eq!(ed[&BigInt::from(3)], vec![1, 1]);
        assert_eq!(ed[&BigInt::from(5)], vec![1]);
        assert_eq!(ed.len(), 3);
    }

    #[test]
    fn factorization() {
        assert_eq!(
            factorize(&BigInt::from(360)),
            vec![(BigInt::from(2), 3), (BigInt::from(3), 2), (BigInt::from(5), 1)]
        );
        assert_eq!(factorize(&BigInt::from(-97)), vec![(BigInt::from(97), 1)]);
        assert!(factorize(&BigInt::one()).is_empty());
        assert!(factorize(&BigInt::zero()).is_empty());
    }

    #[test]
    fn certificate_round_trip() {
        let a = closed_form_power(5, 1).unwrap();
        let snf = smith_normal_form(&a, true);
        for format in [MatrixFormat::Csv, MatrixFormat::Text] {
            let text = snf.to_certificate(format);
            assert!(text.starts_with("diag: 1 1 2 12 0\nU:\n"));
            let back = SmithForm::from_certificate(&format!("{text}verified: true\n")).unwrap();
            assert_eq!(back, snf);
        }
        let bare = SmithForm { diagonal: big(&[1, 3]), transforms: None };
        assert_eq!(bare.to_certificate(MatrixFormat::Text), "diag: 1 3\n");
        assert_eq!(SmithForm::from_certificate("diag: 1 3\n").unwrap(), bare);
        assert!(SmithForm::from_certificate("diagonal 1 3").is_err());
        assert!(SmithForm::from_certificate("diag: 1\nU:\n1\n").is_err());
    }

    #[test]
    fn snf_prediction_full_range() {
        for n in 2..=12 {
            let base = pascal(n).unwrap().minus_identity();
            for r in 1..n {
                let a = base.power(r as u32);
                let snf = smith_normal_form(&a, true);
                assert_eq!(snf.diagonal, predicted_snf_diagonal(n, r).unwrap(), "n={n} r={r}");
                assert!(snf.verify_certificate(&a));
            }
        }
    }

    fn random_unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        for &(i, j, f) in ops {
            let (i, j) = (i % n, j % n);
            if i == j {
                continue;
            }
            let mut e = IntMatrix::identity(n);
            e[(i, j)] = BigInt::from(f);
            m = &m * &e;
        }
        m
    }

    fn square(max_n: usize, lim: i64) -> impl Strategy<Value = IntMatrix> {
        (1..=max_n).prop_flat_map(move |n| {
            proptest::collection::vec(-lim..=lim, n * n)
                .prop_map(move |v| IntMatrix::from_fn(n, |i, j| BigInt::from(v[i * n + j])))
        })
    }

    proptest! {
        #[test]
        fn diagonal_shortcut_matches_engine(d in proptest::collection::vec(0i64..=1000, 1..=6)) {
            let diag = big(&d);
            let engine = smith_normal_form(&IntMatrix::diagonal(&diag), false);
            prop_assert_eq!(snf_of_diagonal(&diag), engine.diagonal);
        }

        #[test]
        fn diagonal_shortcut_matches_subset_oracle(d in proptest::collection::vec(0i64..=200, 1..=5)) {
            prop_assert_eq!(snf_of_diagonal(&big(&d)), diagonal_snf_by_subsets(&d));
        }

        #[test]
        fn certificates_hold(a in square(6, 20)) {
            let snf = smith_normal_form(&a, true);
            prop_assert!(snf.verify_certificate(&a));
        }

        #[test]
        fn snf_is_equivalence_invariant(
            a in square(6, 9),
            left in proptest::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..8),
            right in proptest::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..8),
        ) {
            let n = a.dim();
            let w1 = random_unimodular(n, &left);
            let w2 = random_unimodular(n, &right);
            let moved = &(&w1 * &a) * &w2;
            prop_assert_eq!(
                smith_normal_form(&moved, false).diagonal,
                smith_normal_form(&a, false).diagonal
            );
        }
    }
}
