//! Small combinatorial helpers shared by the samplers, the density
//! enumerators and the Janson calculators.

/// Exact binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Natural logarithm of `C(n, k)`; `-inf` when `k > n`.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    for i in 0..k {
        let term = ((n - i) as f64).ln() - ((i + 1) as f64).ln();
        // Neumaier summation
        let t = acc + term;
        if acc.abs() >= term.abs() {
            comp += (acc - t) + term;
        } else {
            comp += (term - t) + acc;
        }
        acc = t;
    }
    acc + comp
}

/// `ln(sum(exp(terms)))` computed stably. Returns `-inf` for an empty slice.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    for &t in terms {
        let v = (t - max).exp();
        let s = acc + v;
        if acc.abs() >= v.abs() {
            comp += (acc - s) + v;
        } else {
            comp += (v - s) + acc;
        }
        acc = s;
    }
    max + (acc + comp).ln()
}

/// Calls `f` on every `r`-subset of `0..n` in lexicographic order.
pub fn for_each_combination(n: usize, r: usize, mut f: impl FnMut(&[u32])) {
    if r > n {
        return;
    }
    if r == 0 {
        f(&[]);
        return;
    }
    let mut comb: Vec<u32> = (0..r as u32).collect();
    loop {
        f(&comb);
        // rightmost position that can still advance
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if (comb[i] as usize) < n - r + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        comb[i] += 1;
        for j in i + 1..r {
            comb[j] = comb[j - 1] + 1;
        }
    }
}

/// Table of `C(v, i)` for `v < n`, `i <= r`, used for colex ranking.
#[derive(Debug, Clone)]
pub(crate) struct RankTable {
    rows: Vec<Vec<u64>>,
}

impl RankTable {
    pub(crate) fn new(n: usize, r: usize) -> Self {
        let rows = (0..=r)
            .map(|i| (0..n.max(1)).map(|v| binomial(v as u64, i as u64).min(u64::MAX as u128) as u64).collect())
            .collect();
        RankTable { rows }
    }

    /// Colex rank of a strictly increasing tuple.
    #[inline]
    pub(crate) fn rank(&self, sorted: &[u32]) -> u64 {
        sorted.iter().enumerate().map(|(i, &v)| self.rows[i + 1][v as usize]).sum()
    }
}

/// Lexicographic unranking: the `rank`-th `r`-subset of `0..n`.
pub fn unrank_lex(n: usize, r: usize, mut rank: u128) -> Vec<u32> {
    let mut out = Vec::with_capacity(r);
    let mut next = 0usize;
    for slot in 0..r {
        let remaining = r - slot - 1;
        let mut v = next;
        loop {
            let block = binomial((n - v - 1) as u64, remaining as u64);
            if rank < block {
                break;
            }
            rank -= block;
            v += 1;
        }
        out.push(v as u32);
        next = v + 1;
    }
    out
}
