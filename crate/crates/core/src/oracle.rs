//! Brute-force references that share no code with the lattice module:
//! all set partitions by restricted growth strings, filtered for crossings
//! with a direct four-index test.

/// Every set partition of {1..n} as blocks of 1-based points, blocks in
/// order of least element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == rgs.len() {
            let mut blocks = vec![Vec::new(); max + 1];
            for (p, &b) in rgs.iter().enumerate() {
                blocks[b].push(p + 1);
            }
            out.push(blocks);
            return;
        }
        for b in 0..=max + 1 {
            rgs[i] = b;
            rec(i + 1, max.max(b), rgs, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    rec(1, 0, &mut rgs, &mut out);
    out
}

/// No a < b < c < d with a, c in one block and b, d in another.
pub fn is_noncrossing(blocks: &[Vec<usize>]) -> bool {
    let n = blocks.iter().flatten().copied().max().unwrap_or(0);
    let mut owner = vec![0; n + 1];
    for (k, blk) in blocks.iter().enumerate() {
        for &p in blk {
            owner[p] = k;
        }
    }
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    if owner[a] == owner[c] && owner[b] == owner[d] && owner[a] != owner[b] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

pub fn noncrossing_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    set_partitions(n).into_iter().filter(|p| is_noncrossing(p)).collect()
}

/// Catalan numbers by the ballot recurrence, for cross-checking counts.
pub fn catalan(n: usize) -> u64 {
    let mut c = vec![1u64; n + 1];
    for m in 1..=n {
        c[m] = (0..m).map(|i| c[i] * c[m - 1 - i]).sum();
    }
    c[n]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let bell: Vec<usize> = (1..=6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 2, 5, 15, 52, 203]);
    }

    #[test]
    fn first_crossing_appears_at_four() {
        assert!(!is_noncrossing(&[vec![1, 3], vec![2, 4]]));
        assert_eq!(noncrossing_partitions(4).len(), 14);
        assert_eq!(catalan(8), 1430);
    }
}
