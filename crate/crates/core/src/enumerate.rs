//! Streaming enumeration of compositions, integer partitions, weak
//! compositions and combinations. Nothing here materializes the full list.

/// All compositions of `n` (ordered positive parts), `2^{n-1}` of them.
///
/// Bit `i` of a counter in `0..2^{n-1}` says whether a cut follows
/// position `i`.
#[derive(Debug, Clone)]
pub struct Compositions {
    n: usize,
    next: u64,
    end: u64,
}

pub fn compositions(n: usize) -> Compositions {
    assert!(n < 64, "compositions of n >= 64 are not enumerable");
    let end = if n == 0 { 0 } else { 1u64 << (n - 1) };
    Compositions { n, next: 0, end }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.next >= self.end {
            return None;
        }
        let cuts = self.next;
        self.next += 1;
        let mut parts = Vec::new();
        let mut run = 1;
        for i in 0..self.n - 1 {
            if cuts >> i & 1 == 1 {
                parts.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        parts.push(run);
        Some(parts)
    }
}

/// Integer partitions of `n` with parts in non-increasing order, in reverse
/// lexicographic order starting from `(n)`.
#[derive(Debug, Clone)]
pub struct IntegerPartitions {
    current: Option<Vec<usize>>,
}

pub fn integer_partitions(n: usize) -> IntegerPartitions {
    IntegerPartitions {
        current: (n > 0).then(|| vec![n]),
    }
}

impl Iterator for IntegerPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut parts = out.clone();
        // Strip trailing ones, decrement the last larger part, refill greedily.
        let mut ones = 0;
        while parts.last() == Some(&1) {
            parts.pop();
            ones += 1;
        }
        if let Some(last) = parts.last_mut() {
            *last -= 1;
            let cap = *last;
            let mut remaining = ones + 1;
            while remaining > 0 {
                let take = remaining.min(cap);
                parts.push(take);
                remaining -= take;
            }
            self.current = Some(parts);
        }
        Some(out)
    }
}

/// Vectors of `len` nonnegative integers summing to `total`, in
/// lexicographic order.
#[derive(Debug, Clone)]
pub struct WeakCompositions {
    current: Option<Vec<usize>>,
}

pub fn weak_compositions(total: usize, len: usize) -> WeakCompositions {
    let current = match len {
        0 => (total == 0).then(Vec::new),
        _ => {
            let mut v = vec![0; len];
            v[len - 1] = total;
            Some(v)
        }
    };
    WeakCompositions { current }
}

impl Iterator for WeakCompositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let len = out.len();
        // Move one unit from the tail into the rightmost slot that has a
        // nonzero suffix, then push the rest of the suffix to the end.
        if let Some(i) = (0..len.saturating_sub(1))
            .rev()
            .find(|&i| out[i + 1..].iter().any(|&x| x > 0))
        {
            let mut v = out.clone();
            let suffix: usize = v[i + 1..].iter().sum();
            v[i] += 1;
            v[i + 1..].fill(0);
            v[len - 1] = suffix - 1;
            self.current = Some(v);
        }
        Some(out)
    }
}

/// `r`-element subsets of `0..n` as increasing index vectors.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

pub fn combinations(n: usize, r: usize) -> Combinations {
    Combinations {
        n,
        current: (r <= n).then(|| (0..r).collect()),
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let r = out.len();
        let mut v = out.clone();
        if let Some(i) = (0..r).rev().find(|&i| v[i] < self.n - r + i) {
            v[i] += 1;
            for t in i + 1..r {
                v[t] = v[t - 1] + 1;
            }
            self.current = Some(v);
        }
        Some(out)
    }
}
