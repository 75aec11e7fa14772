//! Lexicographic enumeration of k-subsets of `{0, .., n-1}`.

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// Iterator over strictly increasing index vectors of length `k`, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, current }
    }

    /// Starts at the subset with the given lexicographic rank.
    pub fn starting_at(n: usize, k: usize, rank: u128) -> Self {
        Combinations {
            n,
            current: unrank(n, k, rank),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                return Some(out);
            }
        }
        Some(out)
    }
}

/// The `rank`-th k-subset (0-based, lexicographic), if it exists.
pub fn unrank(n: usize, k: usize, mut rank: u128) -> Option<Vec<usize>> {
    if k > n || rank >= binomial(n as u64, k as u64)? {
        return None;
    }
    let mut out = Vec::with_capacity(k);
    let mut start = 0;
    for i in 0..k {
        let mut v = start;
        loop {
            // subsets whose i-th element is v
            let count = binomial((n - v - 1) as u64, (k - i - 1) as u64)?;
            if rank < count {
                break;
            }
            rank -= count;
            v += 1;
        }
        out.push(v);
        start = v + 1;
    }
    Some(out)
}

/// Lexicographic rank of a strictly increasing subset of `{0, .., n-1}`.
pub fn rank(n: usize, subset: &[usize]) -> u128 {
    let k = subset.len();
    let mut r = 0u128;
    let mut start = 0;
    for (i, &v) in subset.iter().enumerate() {
        for u in start..v {
            r += binomial((n - u - 1) as u64, (k - i - 1) as u64).expect("overflow");
        }
        start = v + 1;
    }
    r
}

/// Precomputed `C(a, b)` for `a <= n`, `b <= k`, for hot ranking loops.
#[derive(Clone, Debug)]
pub struct BinomialTable {
    k: usize,
    table: Vec<usize>,
}

impl BinomialTable {
    pub fn new(n: usize, k: usize) -> Self {
        let mut table = vec![0usize; (n + 1) * (k + 1)];
        for a in 0..=n {
            for b in 0..=k {
                table[a * (k + 1) + b] = binomial(a as u64, b as u64).expect("overflow") as usize;
            }
        }
        BinomialTable { k, table }
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> usize {
        self.table[a * (self.k + 1) + b]
    }

    /// Same as [`rank`], using the table.
    pub fn rank(&self, n: usize, subset: &[usize]) -> usize {
        let k = subset.len();
        let mut r = 0;
        let mut start = 0;
        for (i, &v) in subset.iter().enumerate() {
            for u in start..v {
                r += self.get(n - u - 1, k - i - 1);
            }
            start = v + 1;
        }
        r
    }

    /// Same as [`unrank`], using the table; `rank` must be in range.
    pub fn unrank(&self, n: usize, k: usize, mut rank: usize, out: &mut Vec<usize>) {
        out.clear();
        let mut v = 0;
        for i in 0..k {
            loop {
                let count = self.get(n - v - 1, k - i - 1);
                if rank < count {
                    break;
                }
                rank -= count;
                v += 1;
            }
            out.push(v);
            v += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), Some(70));
        assert_eq!(binomial(18, 9), Some(48620));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(5, 0), Some(1));
    }

    #[test]
    fn enumerates_in_lex_order() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(
            Combinations::new(3, 0).collect::<Vec<_>>(),
            vec![Vec::<usize>::new()]
        );
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn unrank_matches_enumeration() {
        for n in 0..8 {
            for k in 0..=n {
                for (i, s) in Combinations::new(n, k).enumerate() {
                    assert_eq!(unrank(n, k, i as u128).as_ref(), Some(&s));
                    let tail: Vec<_> = Combinations::starting_at(n, k, i as u128).take(1).collect();
                    assert_eq!(tail, vec![s.clone()]);
                    assert_eq!(rank(n, &s), i as u128);
                    let table = BinomialTable::new(n, k);
                    assert_eq!(table.rank(n, &s), i);
                    let mut buf = Vec::new();
                    table.unrank(n, k, i, &mut buf);
                    assert_eq!(buf, s);
                }
            }
        }
    }
}
