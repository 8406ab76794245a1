//! Exact combinatorial numbers.
//!
//! Every function here returns an arbitrary-precision integer. Out-of-range
//! arguments follow the convention that a binomial coefficient (and by
//! extension a Stirling number) with a negative parameter is zero.

use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `C(n, k)`; zero when either argument is negative or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn factorial(n: usize) -> BigInt {
    (2..=n as u64).fold(BigInt::one(), |acc, i| acc * i)
}

/// `x (x-1) ... (x-k+1)`, the empty product when `k = 0`.
pub fn falling(x: i64, k: usize) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, i| acc * (x - i))
}

/// `x (x+1) ... (x+k-1)`, the empty product when `k = 0`.
pub fn rising(x: i64, k: usize) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, i| acc * (x + i))
}

/// Triangular table `rows[n][k]`, `0 <= k <= n`, extended on demand.
struct StirlingTable {
    rows: Vec<Vec<BigInt>>,
    next_row: fn(&[BigInt], usize) -> Vec<BigInt>,
}

impl StirlingTable {
    fn new(next_row: fn(&[BigInt], usize) -> Vec<BigInt>) -> Self {
        StirlingTable { rows: vec![vec![BigInt::one()]], next_row }
    }

    fn get(&mut self, n: i64, k: i64) -> BigInt {
        if n < 0 || k < 0 || k > n {
            return BigInt::zero();
        }
        let (n, k) = (n as usize, k as usize);
        while self.rows.len() <= n {
            let prev_n = self.rows.len() - 1;
            let row = (self.next_row)(&self.rows[prev_n], prev_n);
            self.rows.push(row);
        }
        self.rows[n][k].clone()
    }
}

// {n+1, k} = {n, k-1} + k {n, k}
fn next_partition_row(prev: &[BigInt], _n: usize) -> Vec<BigInt> {
    let len = prev.len() + 1;
    (0..len)
        .map(|k| {
            let left = if k >= 1 { prev[k - 1].clone() } else { BigInt::zero() };
            let right = prev.get(k).map(|v| v * k).unwrap_or_default();
            left + right
        })
        .collect()
}

// [n+1, k] = [n, k-1] + n [n, k]
fn next_cycle_row(prev: &[BigInt], n: usize) -> Vec<BigInt> {
    let len = prev.len() + 1;
    (0..len)
        .map(|k| {
            let left = if k >= 1 { prev[k - 1].clone() } else { BigInt::zero() };
            let right = prev.get(k).map(|v| v * n).unwrap_or_default();
            left + right
        })
        .collect()
}

static PARTITION: LazyLock<Mutex<StirlingTable>> = LazyLock::new(|| Mutex::new(StirlingTable::new(next_partition_row)));
static CYCLE: LazyLock<Mutex<StirlingTable>> = LazyLock::new(|| Mutex::new(StirlingTable::new(next_cycle_row)));

/// Stirling partition number `{n, k}` (second kind). `{0, 0} = 1`.
pub fn stirling_partition(n: i64, k: i64) -> BigInt {
    PARTITION.lock().unwrap_or_else(|e| e.into_inner()).get(n, k)
}

/// Unsigned Stirling cycle number `[n, k]` (first kind). `[0, 0] = 1`.
pub fn stirling_cycle(n: i64, k: i64) -> BigInt {
    CYCLE.lock().unwrap_or_else(|e| e.into_inner()).get(n, k)
}

/// Number of surjections from an `n`-set onto `r` labelled blocks, `r! {n, r}`.
pub fn surjection_count(n: i64, r: i64) -> BigInt {
    if r < 0 {
        return BigInt::zero();
    }
    factorial(r as usize) * stirling_partition(n, r)
}
