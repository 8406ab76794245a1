//! Constructors for the Pascal and Stirling matrix families and for
//! generalized Pascal matrices built from integer sequences.
//!
//! Matrix entries are described with 1-based indices `(i, j)`, matching the
//! usual combinatorial convention; internally row `i` is stored at `i - 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::numbers::{binomial, factorial, falling, rising, stirling_cycle, stirling_partition};

/// Finite prefix `(c_0, c_1, ..., c_{L-1})` of an integer sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seq {
    terms: Vec<BigInt>,
}

impl Seq {
    pub fn new(terms: Vec<BigInt>) -> Self {
        Seq { terms }
    }

    pub fn from_i64s(terms: &[i64]) -> Self {
        Seq { terms: terms.iter().map(|&t| BigInt::from(t)).collect() }
    }

    /// `(1, 0, 0, ...)`, the unit for binomial convolution.
    pub fn delta(len: usize) -> Self {
        Seq { terms: (0..len).map(|i| if i == 0 { BigInt::one() } else { BigInt::zero() }).collect() }
    }

    pub fn named(kind: SeqKind, len: usize) -> Self {
        let terms = (0..len as i64)
            .map(|i| match kind {
                SeqKind::Sets => BigInt::from(u8::from(i > 0)),
                SeqKind::StirlingPartition(r) => stirling_partition(i, r as i64),
                SeqKind::StirlingCycle(r) => stirling_cycle(i, r as i64),
                SeqKind::Surjections(r) => factorial(r) * stirling_partition(i, r as i64),
            })
            .collect();
        Seq { terms }
    }

    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn require(&self, needed: usize) -> Result<()> {
        if self.terms.len() < needed {
            return Err(Error::SequenceTooShort { needed, len: self.terms.len() });
        }
        Ok(())
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Sequences generated on demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqKind {
    /// `(0, 1, 1, 1, ...)`: one nonempty set on each nonempty label set.
    Sets,
    /// `({i, r})_{i >= 0}`
    StirlingPartition(usize),
    /// `([i, r])_{i >= 0}`
    StirlingCycle(usize),
    /// `(r! {i, r})_{i >= 0}`
    Surjections(usize),
}

/// A sequence as written on the command line: a named kind (`sets`,
/// `stirling-partition:r`, `stirling-cycle:r`, `surjections:r`) or a
/// comma-separated literal such as `0,1,1,1,1,1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqSpec {
    Named(SeqKind),
    Literal(Seq),
}

impl SeqSpec {
    /// Named kinds produce exactly `len` terms; literals are returned as
    /// written and length is checked where they are used.
    pub fn materialize(&self, len: usize) -> Seq {
        match self {
            SeqSpec::Named(kind) => Seq::named(*kind, len),
            SeqSpec::Literal(seq) => seq.clone(),
        }
    }
}

impl FromStr for SeqSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "sets" {
            return Ok(SeqSpec::Named(SeqKind::Sets));
        }
        if let Some((name, r)) = s.split_once(':') {
            let r: usize = r.trim().parse().map_err(|_| Error::Parse(format!("bad column index in `{s}`")))?;
            let kind = match name.trim() {
                "stirling-partition" => SeqKind::StirlingPartition(r),
                "stirling-cycle" => SeqKind::StirlingCycle(r),
                "surjections" => SeqKind::Surjections(r),
                other => return Err(Error::Parse(format!("unknown sequence kind `{other}`"))),
            };
            return Ok(SeqSpec::Named(kind));
        }
        let terms = s
            .split(',')
            .map(|t| t.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("`{t}` is not an integer"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(SeqSpec::Literal(Seq::new(terms)))
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    Ok(())
}

fn check_shift(n: usize, r: usize) -> Result<()> {
    if r < 1 || r + 1 > n {
        return Err(Error::OutOfRange(format!("need 1 <= r <= n-1, got n={n}, r={r}")));
    }
    Ok(())
}

fn sign(k: usize) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `P_n = (C(i-1, j-1))`.
pub fn pascal(n: usize) -> Result<IntMatrix> {
    check_dim(n)?;
    Ok(IntMatrix::from_fn(n, |i, j| binomial(i as i64, j as i64)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StirlingKind {
    Partition,
    Cycle,
}

/// `S_n = ({i-1, j-1})` or `C_n = ([i-1, j-1])`.
pub fn stirling_matrix(kind: StirlingKind, n: usize) -> Result<IntMatrix> {
    check_dim(n)?;
    Ok(IntMatrix::from_fn(n, |i, j| match kind {
        StirlingKind::Partition => stirling_partition(i as i64, j as i64),
        StirlingKind::Cycle => stirling_cycle(i as i64, j as i64),
    }))
}

/// Matrices indexed from 1 rather than 0, i.e. entry `(i, j)` uses the
/// arguments `i, j` directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftedKind {
    /// `(C(i, j))`
    Binomial,
    /// `(C(i, j-1))` below and on the diagonal, zero above. Diagonal `(1, ..., n)`.
    /// This is the matrix the cycle-number conjugation diagonalizes.
    BinomialLowerShift,
    /// `([i, j])`
    Cycle,
    /// `((-1)^(i-j) {i, j})`
    SignedPartition,
}

pub fn shifted_matrix(kind: ShiftedKind, n: usize) -> Result<IntMatrix> {
    check_dim(n)?;
    Ok(IntMatrix::from_fn(n, |i0, j0| {
        let (i, j) = (i0 as i64 + 1, j0 as i64 + 1);
        match kind {
            ShiftedKind::Binomial => binomial(i, j),
            ShiftedKind::BinomialLowerShift if j <= i => binomial(i, j - 1),
            ShiftedKind::BinomialLowerShift => BigInt::zero(),
            ShiftedKind::Cycle => stirling_cycle(i, j),
            ShiftedKind::SignedPartition if i >= j => sign((i - j) as usize) * stirling_partition(i, j),
            ShiftedKind::SignedPartition => BigInt::zero(),
        }
    }))
}

/// The bidiagonal similarity target of `P_n`: unit diagonal, subdiagonal
/// `(1, 2, ..., n-1)`.
pub fn bidiagonal_target(n: usize) -> Result<IntMatrix> {
    check_dim(n)?;
    Ok(IntMatrix::from_fn(n, |i, j| {
        if i == j {
            BigInt::one()
        } else if i == j + 1 {
            BigInt::from(i)
        } else {
            BigInt::zero()
        }
    }))
}

/// `F_{n,r}` with entry `(i, j) = (i-1)^(falling i-j) * C(i-j-1, r-1)`.
/// Its first `r` rows and last `r` columns vanish.
pub fn f_matrix(n: usize, r: usize) -> Result<IntMatrix> {
    check_shift(n, r)?;
    Ok(IntMatrix::from_fn(n, |i, j| f_entry(i + 1, j + 1, r)))
}

fn f_entry(i: usize, j: usize, r: usize) -> BigInt {
    if i < j {
        return BigInt::zero();
    }
    let d = (i - j) as i64;
    let b = binomial(d - 1, r as i64 - 1);
    if b.is_zero() {
        return b;
    }
    falling(i as i64 - 1, i - j) * b
}

/// `G_{n,r}`: the nonzero `(n-r) x (n-r)` lower-left block of `F_{n,r}`.
pub fn g_matrix(n: usize, r: usize) -> Result<IntMatrix> {
    check_shift(n, r)?;
    Ok(IntMatrix::from_fn(n - r, |i, j| f_entry(i + 1 + r, j + 1, r)))
}

/// `H_{n,r}` with entry `(i, j) = (-1)^(i-j) C(i-1, j-1) r^(falling i-j)`.
/// Banded: zero once `i - j > r`.
pub fn h_matrix(n: usize, r: usize) -> Result<IntMatrix> {
    check_shift(n, r)?;
    Ok(IntMatrix::from_fn(n - r, |i, j| {
        if i < j {
            return BigInt::zero();
        }
        sign(i - j) * binomial(i as i64, j as i64) * falling(r as i64, i - j)
    }))
}

/// `D_{n,r} = diag(1^(rising r), 2^(rising r), ..., (n-r)^(rising r))`.
pub fn d_matrix(n: usize, r: usize) -> Result<IntMatrix> {
    check_shift(n, r)?;
    let diag: Vec<BigInt> = (1..=(n - r) as i64).map(|i| rising(i, r)).collect();
    Ok(IntMatrix::diagonal(&diag))
}

/// `P_n(c) = (c_{i-j} C(i-1, j-1))`.
pub fn generalized_pascal(c: &Seq, n: usize) -> Result<IntMatrix> {
    check_dim(n)?;
    c.require(n)?;
    Ok(IntMatrix::from_fn(
        n,
        |i, j| {
            if i < j {
                BigInt::zero()
            } else {
                &c.terms[i - j] * binomial(i as i64, j as i64)
            }
        },
    ))
}

/// First `len` terms of `c * d`, where `(c * d)_m = sum_i C(m, i) c_i d_{m-i}`.
pub fn binomial_convolve(c: &Seq, d: &Seq, len: usize) -> Result<Seq> {
    c.require(len)?;
    d.require(len)?;
    let terms =
        (0..len).map(|m| (0..=m).map(|i| binomial(m as i64, i as i64) * &c.terms[i] * &d.terms[m - i]).sum()).collect();
    Ok(Seq { terms })
}

/// `Q_n(c)`: the `(n-r) x (n-r)` lower-left block of `P_n(c)` when `c` starts
/// with `r` zeros.
pub fn q_matrix(c: &Seq, n: usize, r: usize) -> Result<IntMatrix> {
    check_shift(n, r)?;
    c.require(n)?;
    if c.terms[..r].iter().any(|t| !t.is_zero()) {
        return Err(Error::MissingLeadingZeros { r });
    }
    generalized_pascal(c, n)?.submatrix(r, 0, n - r)
}

/// Entrywise closed form of `(P_n - I)^r`: `r! {i-j, r} C(i-1, j-1)`.
pub fn closed_form_power(n: usize, r: usize) -> Result<IntMatrix> {
    check_dim(n)?;
    let r_fact = factorial(r);
    Ok(IntMatrix::from_fn(n, |i, j| {
        if i < j {
            return BigInt::zero();
        }
        &r_fact * stirling_partition((i - j) as i64, r as i64) * binomial(i as i64, j as i64)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{block2x2, Block};
    use proptest::prelude::*;

    fn lower(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_lower_rows(rows).unwrap()
    }

    fn p5_display() -> IntMatrix {
        lower(&[&[1], &[1, 1], &[1, 2, 1], &[1, 3, 3, 1], &[1, 4, 6, 4, 1]])
    }

    fn g62_display() -> IntMatrix {
        lower(&[&[2], &[12, 6], &[72, 48, 12], &[480, 360, 120, 20]])
    }

    fn h62_display() -> IntMatrix {
        lower(&[&[1], &[-2, 1], &[2, -4, 1], &[0, 6, -6, 1]])
    }

    fn diag(v: &[i64]) -> IntMatrix {
        IntMatrix::diagonal(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    #[test]
    fn pascal_matrices() {
        assert_eq!(pascal(1).unwrap(), lower(&[&[1]]));
        assert_eq!(pascal(5).unwrap(), p5_display());
        let p8 = pascal(8).unwrap();
        assert!(p8.is_lower_triangular());
        assert!(p8.diagonal_entries().iter().all(One::is_one));
        assert!(pascal(0).is_err());
    }

    #[test]
    fn stirling_matrices() {
        let s5 = lower(&[&[1], &[0, 1], &[0, 1, 1], &[0, 1, 3, 1], &[0, 1, 7, 6, 1]]);
        let c5 = lower(&[&[1], &[0, 1], &[0, 1, 1], &[0, 2, 3, 1], &[0, 6, 11, 6, 1]]);
        assert_eq!(stirling_matrix(StirlingKind::Partition, 5).unwrap(), s5);
        assert_eq!(stirling_matrix(StirlingKind::Cycle, 5).unwrap(), c5);
        assert_eq!(stirling_matrix(StirlingKind::Partition, 1).unwrap(), lower(&[&[1]]));
        assert!(stirling_matrix(StirlingKind::Cycle, 0).is_err());
    }

    #[test]
    fn shifted_matrices() {
        assert_eq!(shifted_matrix(ShiftedKind::Binomial, 3).unwrap(), lower(&[&[1], &[2, 1], &[3, 3, 1]]));
        assert_eq!(shifted_matrix(ShiftedKind::Cycle, 2).unwrap(), lower(&[&[1], &[1, 1]]));
        assert_eq!(shifted_matrix(ShiftedKind::SignedPartition, 1).unwrap(), lower(&[&[1]]));
        assert_eq!(shifted_matrix(ShiftedKind::SignedPartition, 3).unwrap(), lower(&[&[1], &[-1, 1], &[1, -3, 1]]));
        assert_eq!(shifted_matrix(ShiftedKind::BinomialLowerShift, 3).unwrap(), lower(&[&[1], &[1, 2], &[1, 3, 3]]));
        let inv = shifted_matrix(ShiftedKind::Cycle, 5).unwrap().inverse_unitriangular().unwrap();
        assert_eq!(inv, shifted_matrix(ShiftedKind::SignedPartition, 5).unwrap());
    }

    #[test]
    fn bidiagonal_targets() {
        assert_eq!(bidiagonal_target(1).unwrap(), lower(&[&[1]]));
        assert_eq!(bidiagonal_target(3).unwrap(), lower(&[&[1], &[1, 1], &[0, 2, 1]]));
        let t6 = bidiagonal_target(6).unwrap();
        assert!(t6.diagonal_entries().iter().all(One::is_one));
        let sub: Vec<BigInt> = (1..6).map(|i| t6.get(i, i - 1).clone()).collect();
        assert_eq!(sub, (1..6).map(BigInt::from).collect::<Vec<_>>());
    }

    #[test]
    fn f_and_g_matrices() {
        let g = g62_display();
        let f = f_matrix(6, 2).unwrap();
        let expected = block2x2(6, 2, 4, [[Block::Zero, Block::Zero], [Block::Dense(&g), Block::Zero]]).unwrap();
        assert_eq!(f, expected);
        assert_eq!(f.get(2, 0), &BigInt::from(2));
        let f52 = f_matrix(5, 2).unwrap();
        assert!(f52.row(0).iter().chain(f52.row(1)).all(Zero::is_zero));

        assert_eq!(g_matrix(6, 2).unwrap(), g);
        assert_eq!(g_matrix(4, 3).unwrap(), lower(&[&[6]]));
        assert_eq!(g_matrix(6, 2).unwrap().diagonal_entries(), [2, 6, 12, 20].map(BigInt::from));

        assert!(f_matrix(5, 0).is_err());
        assert!(f_matrix(5, 5).is_err());
        assert!(g_matrix(1, 1).is_err());
    }

    #[test]
    fn h_matrices() {
        assert_eq!(h_matrix(6, 2).unwrap(), h62_display());
        assert_eq!(h_matrix(3, 1).unwrap(), lower(&[&[1], &[-1, 1]]));
        for &(n, r) in &[(6usize, 2usize), (4, 1), (12, 3)] {
            let h = h_matrix(n, r).unwrap();
            for i in 0..n - r {
                for j in 0..i {
                    if i - j > r {
                        assert!(h.get(i, j).is_zero(), "H_{{{n},{r}}} ({},{})", i + 1, j + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn d_matrices() {
        assert_eq!(d_matrix(6, 2).unwrap(), diag(&[2, 6, 12, 20]));
        assert_eq!(d_matrix(5, 1).unwrap(), diag(&[1, 2, 3, 4]));
        assert_eq!(d_matrix(4, 3).unwrap(), diag(&[6]));
        assert!(d_matrix(4, 4).is_err());
    }

    #[test]
    fn g_times_h_is_d_for_small_display() {
        assert_eq!(&g62_display() * &h62_display(), diag(&[2, 6, 12, 20]));
    }

    #[test]
    fn generalized_pascal_examples() {
        let sets = Seq::named(SeqKind::Sets, 5);
        assert_eq!(generalized_pascal(&sets, 5).unwrap(), p5_display().minus_identity());
        assert_eq!(generalized_pascal(&Seq::delta(7), 7).unwrap(), IntMatrix::identity(7));
        let d = Seq::named(SeqKind::Surjections(2), 6);
        let p6 = pascal(6).unwrap();
        assert_eq!(generalized_pascal(&d, 6).unwrap(), p6.minus_identity().power(2));
        assert_eq!(
            generalized_pascal(&Seq::from_i64s(&[1, 2]), 3).unwrap_err(),
            Error::SequenceTooShort { needed: 3, len: 2 }
        );
    }

    #[test]
    fn convolution_examples() {
        let c = Seq::from_i64s(&[3, -1, 4, 1, -5]);
        assert_eq!(binomial_convolve(&c, &Seq::delta(5), 5).unwrap(), c);
        let sets = Seq::named(SeqKind::Sets, 5);
        assert_eq!(binomial_convolve(&sets, &sets, 5).unwrap(), Seq::from_i64s(&[0, 0, 2, 6, 14]));
        assert!(binomial_convolve(&sets, &Seq::delta(3), 5).is_err());
    }

    #[test]
    fn q_matrix_examples() {
        // Q_6 of (2!{i,2}) is the nonzero block of (P_6 - I)^2; it is not G_{6,2}
        // itself but shares its diagonal.
        let d = Seq::named(SeqKind::Surjections(2), 6);
        let q = q_matrix(&d, 6, 2).unwrap();
        let p6 = pascal(6).unwrap().minus_identity().power(2);
        assert_eq!(q, p6.submatrix(2, 0, 4).unwrap());
        assert_eq!(q.diagonal_part(), d_matrix(6, 2).unwrap());
        assert_ne!(q, g_matrix(6, 2).unwrap());

        let sets = Seq::named(SeqKind::Sets, 5);
        assert_eq!(q_matrix(&sets, 5, 1).unwrap().diagonal_entries(), [1, 2, 3, 4].map(BigInt::from));

        let c = Seq::from_i64s(&[0, 0, 0, 0, 9]);
        assert_eq!(q_matrix(&c, 5, 4).unwrap(), lower(&[&[9]]));

        assert_eq!(q_matrix(&Seq::from_i64s(&[0, 1, 1, 1]), 4, 2).unwrap_err(), Error::MissingLeadingZeros { r: 2 });
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(closed_form_power(5, 0).unwrap(), IntMatrix::identity(5));
        assert_eq!(closed_form_power(5, 1).unwrap(), p5_display().minus_identity());
        assert_eq!(closed_form_power(6, 2).unwrap().get(4, 0), &BigInt::from(14));
        assert!(closed_form_power(5, 5).unwrap().is_zero());
    }

    #[test]
    fn sequence_parsing() {
        assert_eq!("sets".parse::<SeqSpec>().unwrap(), SeqSpec::Named(SeqKind::Sets));
        assert_eq!("stirling-partition:3".parse::<SeqSpec>().unwrap(), SeqSpec::Named(SeqKind::StirlingPartition(3)));
        assert_eq!("stirling-cycle:2".parse::<SeqSpec>().unwrap(), SeqSpec::Named(SeqKind::StirlingCycle(2)));
        assert_eq!("0,1,1,1,1,1".parse::<SeqSpec>().unwrap(), SeqSpec::Literal(Seq::from_i64s(&[0, 1, 1, 1, 1, 1])));
        assert_eq!("stirling-cycle:2".parse::<SeqSpec>().unwrap().materialize(5), Seq::from_i64s(&[0, 0, 1, 3, 11]));
        assert!("bogus:1".parse::<SeqSpec>().is_err());
        assert!("stirling-cycle:x".parse::<SeqSpec>().is_err());
        assert!("1,,2".parse::<SeqSpec>().is_err());
        assert_eq!(Seq::from_i64s(&[0, -1, 2]).to_string(), "0,-1,2");
    }

    #[test]
    fn power_of_pascal_minus_identity_matches_closed_form() {
        for n in 1..=12 {
            let base = pascal(n).unwrap().minus_identity();
            for r in 0..=n {
                assert_eq!(base.power(r as u32), closed_form_power(n, r).unwrap(), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn family_relations_for_all_shifts() {
        for n in 2..=10 {
            for r in 1..n {
                let g = g_matrix(n, r).unwrap();
                let f = f_matrix(n, r).unwrap();
                let blocks = [[Block::Zero, Block::Zero], [Block::Dense(&g), Block::Zero]];
                assert_eq!(f, block2x2(n, r, n - r, blocks).unwrap());
                assert_eq!(g.diagonal_part(), d_matrix(n, r).unwrap());

                let inv = h_matrix(n, r).unwrap().inverse_unitriangular().unwrap();
                let expected = IntMatrix::from_fn(n - r, |i, j| {
                    binomial(i as i64, j as i64)
                        * rising(r as i64, i.saturating_sub(j))
                        * BigInt::from(u8::from(i >= j))
                });
                assert_eq!(inv, expected, "n={n} r={r}");
            }
        }
    }

    fn seq_strategy(len: usize) -> impl Strategy<Value = Seq> {
        proptest::collection::vec(-9i64..=9, len).prop_map(|v| Seq::from_i64s(&v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn generalized_pascal_is_a_homomorphism(
            (n, c, d) in (1usize..=10).prop_flat_map(|n| (Just(n), seq_strategy(n), seq_strategy(n)))
        ) {
            let lhs = &generalized_pascal(&c, n).unwrap() * &generalized_pascal(&d, n).unwrap();
            let rhs = generalized_pascal(&binomial_convolve(&c, &d, n).unwrap(), n).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn convolution_is_symmetric(
            (n, c, d) in (1usize..=10).prop_flat_map(|n| (Just(n), seq_strategy(n), seq_strategy(n)))
        ) {
            prop_assert_eq!(binomial_convolve(&c, &d, n).unwrap(), binomial_convolve(&d, &c, n).unwrap());
        }
    }
}
