/// Lexicographically ordered basis monomials of `Λ^p C^n`, stored as bit
/// masks, with a reverse index.
#[derive(Debug, Clone)]
pub(crate) struct ExteriorBasis {
    by_degree: Vec<Vec<u32>>,
    position: Vec<usize>,
}

impl ExteriorBasis {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n < 20, "exterior algebra too large");
        let mut by_degree = vec![Vec::new(); n + 1];
        let mut position = vec![0; 1 << n];
        for p in 0..=n {
            for combo in combinations(n, p) {
                let mask = combo.iter().fold(0u32, |m, &i| m | (1 << i));
                position[mask as usize] = by_degree[p].len();
                by_degree[p].push(mask);
            }
        }
        Self {
            by_degree,
            position,
        }
    }

    pub(crate) fn monomials(&self, p: usize) -> &[u32] {
        &self.by_degree[p]
    }

    pub(crate) fn count(&self, p: usize) -> usize {
        self.by_degree[p].len()
    }

    pub(crate) fn position(&self, mask: u32) -> usize {
        self.position[mask as usize]
    }
}

/// Indices set in `mask`, ascending.
pub(crate) fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// `p`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if p <= n {
        go(0, n, p, &mut Vec::new(), &mut out);
    }
    out
}

pub(crate) fn binomial(n: usize, p: usize) -> usize {
    if p > n {
        return 0;
    }
    (0..p).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_and_counts() {
        let e = ExteriorBasis::new(4);
        for p in 0..=4 {
            assert_eq!(e.count(p), binomial(4, p));
        }
        let two: Vec<Vec<usize>> = e.monomials(2).iter().map(|&m| indices(m)).collect();
        assert_eq!(two[0], vec![0, 1]);
        assert_eq!(two[1], vec![0, 2]);
        assert_eq!(two[5], vec![2, 3]);
        assert_eq!(e.position(0b1100), 5);
    }
}
