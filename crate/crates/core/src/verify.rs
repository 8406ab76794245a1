//! Executable checks of the matrix identities, the closed form and
//! convolution law for generalized Pascal matrices, the colored cycle
//! counting identity (two summations plus brute-force enumeration), and an
//! explorer for whether `Q_n(c)` is equivalent to its diagonal.
//!
//! Every check returns a [`CheckReport`]; a failing report always names the
//! first discrepancy in row-major order using 1-based indices.

use std::fmt;

use num_bigint::BigInt;

use crate::canonical::{smith_normal_form, snf_of_diagonal};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::numbers::{binomial, falling, stirling_cycle, surjection_count};
use crate::pascal::{
    bidiagonal_target, binomial_convolve, closed_form_power, d_matrix, f_matrix, g_matrix, generalized_pascal,
    h_matrix, pascal, q_matrix, shifted_matrix, stirling_matrix, Seq, SeqKind, ShiftedKind, StirlingKind,
};

/// Parameters a check was run with; absent ones are not printed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Params {
    pub n: Option<usize>,
    pub r: Option<usize>,
    pub m: Option<usize>,
    pub p: Option<u64>,
}

impl Params {
    pub fn n(n: usize) -> Self {
        Params { n: Some(n), ..Default::default() }
    }

    pub fn nr(n: usize, r: usize) -> Self {
        Params { n: Some(n), r: Some(r), ..Default::default() }
    }

    pub fn nmr(n: usize, m: usize, r: usize) -> Self {
        Params { n: Some(n), r: Some(r), m: Some(m), p: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    /// 1-based matrix entry.
    Entry {
        row: usize,
        col: usize,
    },
    Named(&'static str),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Entry { row, col } => write!(f, "({row},{col})"),
            Location::Named(name) => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub location: Location,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub check_id: String,
    pub params: Params,
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl CheckReport {
    fn from_witness(check_id: impl Into<String>, params: Params, witness: Option<Witness>) -> Self {
        CheckReport { check_id: check_id.into(), params, passed: witness.is_none(), witness }
    }

    fn compare(check_id: impl Into<String>, params: Params, lhs: &IntMatrix, rhs: &IntMatrix) -> Self {
        Self::from_witness(check_id, params, matrix_witness(lhs, rhs))
    }
}

/// One record per line:
/// `check=<id> n=<n> r=<r> m=<m> passed=<bool> [witness=(i,j): lhs=.. rhs=..]`.
impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check={}", self.check_id)?;
        let Params { n, r, m, p } = self.params;
        if let Some(n) = n {
            write!(f, " n={n}")?;
        }
        if let Some(r) = r {
            write!(f, " r={r}")?;
        }
        if let Some(m) = m {
            write!(f, " m={m}")?;
        }
        if let Some(p) = p {
            write!(f, " p={p}")?;
        }
        write!(f, " passed={}", self.passed)?;
        if let Some(w) = &self.witness {
            write!(f, " witness={}: lhs={} rhs={}", w.location, w.lhs, w.rhs)?;
        }
        Ok(())
    }
}

fn matrix_witness(lhs: &IntMatrix, rhs: &IntMatrix) -> Option<Witness> {
    if lhs.dim() != rhs.dim() {
        return Some(Witness {
            location: Location::Named("dimension"),
            lhs: BigInt::from(lhs.dim()),
            rhs: BigInt::from(rhs.dim()),
        });
    }
    lhs.first_difference(rhs).map(|(i, j)| Witness {
        location: Location::Entry { row: i + 1, col: j + 1 },
        lhs: lhs.get(i, j).clone(),
        rhs: rhs.get(i, j).clone(),
    })
}

/// The four matrix identities relating Pascal and Stirling matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Identity {
    /// `S_n^{-1} P_n S_n` is the unit bidiagonal matrix with subdiagonal `1..n-1`.
    PascalBidiagonal = 1,
    /// `([i,j]) B ([i,j])^{-1} = diag(1, ..., n)` with `B = (C(i, j-1))` lower part.
    CycleDiagonalization = 2,
    /// `C_n (P_n - I)^r C_n^{-1} = F_{n,r}`.
    PowerConjugation = 3,
    /// `G_{n,r} H_{n,r} = D_{n,r}`.
    BandedInverse = 4,
}

impl Identity {
    pub const ALL: [Identity; 4] = [
        Identity::PascalBidiagonal,
        Identity::CycleDiagonalization,
        Identity::PowerConjugation,
        Identity::BandedInverse,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }

    pub fn uses_shift(self) -> bool {
        matches!(self, Identity::PowerConjugation | Identity::BandedInverse)
    }
}

impl TryFrom<u8> for Identity {
    type Error = Error;

    fn try_from(id: u8) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.number() == id)
            .ok_or_else(|| Error::OutOfRange(format!("identity id must be 1..=4, got {id}")))
    }
}

/// Evaluates both sides of an identity exactly. `r` is required for
/// identities 3 and 4 and ignored otherwise.
pub fn verify_identity(id: Identity, n: usize, r: Option<usize>) -> Result<CheckReport> {
    let check_id = format!("identity-{}", id.number());
    match id {
        Identity::PascalBidiagonal => {
            let s = stirling_matrix(StirlingKind::Partition, n)?;
            let lhs = &(&s.inverse_unitriangular()? * &pascal(n)?) * &s;
            Ok(CheckReport::compare(check_id, Params::n(n), &lhs, &bidiagonal_target(n)?))
        }
        Identity::CycleDiagonalization => {
            let c = shifted_matrix(ShiftedKind::Cycle, n)?;
            let b = shifted_matrix(ShiftedKind::BinomialLowerShift, n)?;
            let lhs = &(&c * &b) * &c.inverse_unitriangular()?;
            let rhs = IntMatrix::diagonal(&(1..=n).map(BigInt::from).collect::<Vec<_>>());
            Ok(CheckReport::compare(check_id, Params::n(n), &lhs, &rhs))
        }
        Identity::PowerConjugation => {
            let r = r.ok_or_else(|| Error::OutOfRange("identity 3 needs r".into()))?;
            let rhs = f_matrix(n, r)?;
            let c = stirling_matrix(StirlingKind::Cycle, n)?;
            let power = pascal(n)?.minus_identity().power(r as u32);
            let lhs = &(&c * &power) * &c.inverse_unitriangular()?;
            Ok(CheckReport::compare(check_id, Params::nr(n, r), &lhs, &rhs))
        }
        Identity::BandedInverse => {
            let r = r.ok_or_else(|| Error::OutOfRange("identity 4 needs r".into()))?;
            let lhs = &g_matrix(n, r)? * &h_matrix(n, r)?;
            Ok(CheckReport::compare(check_id, Params::nr(n, r), &lhs, &d_matrix(n, r)?))
        }
    }
}

/// All identities over `1 <= n <= n_max` (and `1 <= r < n` where needed),
/// ordered by identity, then `n`, then `r`.
pub fn identity_suite(ids: &[Identity], n_max: usize) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    for &id in ids {
        for n in 1..=n_max {
            if id.uses_shift() {
                for r in 1..n {
                    reports.push(verify_identity(id, n, Some(r))?);
                }
            } else {
                reports.push(verify_identity(id, n, None)?);
            }
        }
    }
    Ok(reports)
}

/// The inverse of `([i,j])` is `((-1)^(i-j) {i,j})`, and its `j`-th column
/// is an eigenvector with eigenvalue `j` of the lower-shifted binomial
/// matrix diagonalized by identity 2.
pub fn verify_theorem2(n: usize) -> Result<CheckReport> {
    let params = Params::n(n);
    let inv = shifted_matrix(ShiftedKind::Cycle, n)?.inverse_unitriangular()?;
    let signed = shifted_matrix(ShiftedKind::SignedPartition, n)?;
    if let Some(w) = matrix_witness(&inv, &signed) {
        return Ok(CheckReport::from_witness("eigenvectors-inverse", params, Some(w)));
    }
    let b = shifted_matrix(ShiftedKind::BinomialLowerShift, n)?;
    for j in 0..n {
        let v = inv.column(j);
        let bv = b.mul_vec(&v)?;
        let scale = BigInt::from(j + 1);
        for (i, (got, base)) in bv.iter().zip(&v).enumerate() {
            let want = &scale * base;
            if *got != want {
                let witness =
                    Witness { location: Location::Entry { row: i + 1, col: j + 1 }, lhs: got.clone(), rhs: want };
                return Ok(CheckReport::from_witness("eigenvectors-eigen", params, Some(witness)));
            }
        }
    }
    Ok(CheckReport::from_witness("eigenvectors", params, None))
}

/// Eigenvalues read off the conjugated matrix of identity 2 (its diagonal).
pub fn cycle_diagonal_eigenvalues(n: usize) -> Result<Vec<BigInt>> {
    let c = shifted_matrix(ShiftedKind::Cycle, n)?;
    let b = shifted_matrix(ShiftedKind::BinomialLowerShift, n)?;
    let conj = &(&c * &b) * &c.inverse_unitriangular()?;
    Ok(conj.diagonal_entries())
}

/// Both summations counting cycle partitions of `[n]` with `m` black cycles
/// and the rest colored surjectively by `r` colors:
/// left by total cycle count, right by the size of the black part.
pub fn combinatorial_sides(n: usize, m: usize, r: usize) -> Result<(BigInt, BigInt)> {
    if r < 1 {
        return Err(Error::OutOfRange("r must be at least 1".into()));
    }
    let (ni, mi, ri) = (n as i64, m as i64, r as i64);
    let left = (mi + ri..=ni).map(|k| stirling_cycle(ni, k) * binomial(k, mi) * surjection_count(k - mi, ri)).sum();
    let right = (mi..=ni - ri)
        .map(|k| falling(ni, (ni - k) as usize) * binomial(ni - k - 1, ri - 1) * stirling_cycle(k, mi))
        .sum();
    Ok((left, right))
}

pub const ENUMERATION_MAX_N: usize = 9;

/// Number of permutations of `[n]` with exactly `k` cycles, for every `k`,
/// by walking all `n!` permutations (Heap's algorithm).
fn cycle_count_histogram(n: usize) -> Vec<u64> {
    let mut hist = vec![0u64; n + 1];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut seen = vec![false; n];
    let mut count_cycles = |perm: &[usize]| {
        seen.iter_mut().for_each(|s| *s = false);
        let mut cycles = 0;
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
            }
        }
        cycles
    };
    hist[count_cycles(&perm)] += 1;
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            hist[count_cycles(&perm)] += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    hist
}

/// Brute-force count of the colored cycle partitions: each permutation of
/// `[n]` with `k` cycles contributes `C(k, m) * r! {k-m, r}`.
pub fn enumerate_colored_cycle_partitions(n: usize, m: usize, r: usize) -> Result<BigInt> {
    if n > ENUMERATION_MAX_N {
        return Err(Error::EnumerationBound(n));
    }
    if r < 1 {
        return Err(Error::OutOfRange("r must be at least 1".into()));
    }
    let hist = cycle_count_histogram(n);
    Ok(hist
        .iter()
        .enumerate()
        .filter(|&(_, &count)| count > 0)
        .map(|(k, &count)| {
            let (k, m, r) = (k as i64, m as i64, r as i64);
            BigInt::from(count) * binomial(k, m) * surjection_count(k - m, r)
        })
        .sum())
}

/// Left sum, right sum and enumeration must all agree.
pub fn verify_combinatorial(n: usize, m: usize, r: usize) -> Result<CheckReport> {
    let (left, right) = combinatorial_sides(n, m, r)?;
    let counted = enumerate_colored_cycle_partitions(n, m, r)?;
    let witness = if left != right {
        Some(Witness { location: Location::Named("left-vs-right"), lhs: left, rhs: right })
    } else if left != counted {
        Some(Witness { location: Location::Named("sum-vs-enumeration"), lhs: left, rhs: counted })
    } else {
        None
    };
    Ok(CheckReport::from_witness("colored-cycles", Params::nmr(n, m, r), witness))
}

/// `(P_n - I)^r` against its entrywise closed form.
pub fn verify_closed_form(n: usize, r: usize) -> Result<CheckReport> {
    let lhs = pascal(n)?.minus_identity().power(r as u32);
    Ok(CheckReport::compare("closed-form", Params::nr(n, r), &lhs, &closed_form_power(n, r)?))
}

/// `P_n(c) P_n(d)` against `P_n(c * d)`.
pub fn verify_convolution(c: &Seq, d: &Seq, n: usize) -> Result<CheckReport> {
    let lhs = &generalized_pascal(c, n)? * &generalized_pascal(d, n)?;
    let rhs = generalized_pascal(&binomial_convolve(c, d, n)?, n)?;
    Ok(CheckReport::compare("convolution", Params::n(n), &lhs, &rhs))
}

/// For each `n` in `r+1..=n_max`, whether `Q_n(c)` for the Stirling column
/// `c = ({i,r})` or `([i,r])` has the same Smith form as its diagonal part.
/// Failures are findings, not errors.
pub fn explore_open_question(kind: StirlingKind, r: usize, n_max: usize) -> Result<Vec<CheckReport>> {
    if r < 1 {
        return Err(Error::OutOfRange("r must be at least 1".into()));
    }
    if n_max < r + 1 {
        return Err(Error::OutOfRange(format!("n_max must be at least r+1 = {}", r + 1)));
    }
    let (check_id, seq_kind) = match kind {
        StirlingKind::Partition => ("open-question-partition", SeqKind::StirlingPartition(r)),
        StirlingKind::Cycle => ("open-question-cycle", SeqKind::StirlingCycle(r)),
    };
    (r + 1..=n_max)
        .map(|n| {
            let c = Seq::named(seq_kind, n);
            let q = q_matrix(&c, n, r)?;
            let full = smith_normal_form(&q, false).diagonal;
            let diag = snf_of_diagonal(&q.diagonal_entries());
            let witness = full.iter().zip(&diag).position(|(a, b)| a != b).map(|k| Witness {
                location: Location::Entry { row: k + 1, col: k + 1 },
                lhs: full[k].clone(),
                rhs: diag[k].clone(),
            });
            Ok(CheckReport::from_witness(check_id, Params::nr(n, r), witness))
        })
        .collect()
}
