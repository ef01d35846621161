//! Exact Chevalley–Eilenberg homology over the rationals, for algebras with
//! integer basis matrices and rational characters.
//!
//! The complex is the textbook one for a right module: `X` with
//! `m·x = (f(x) − x)m`, and
//! `d(m ⊗ x_1∧…∧x_p) = Σ (−1)^{i+1} m·x_i ⊗ …x̂_i… + Σ_{i<j} (−1)^{i+j} m ⊗ [x_i, x_j]∧…x̂_i…x̂_j…`.

use num_rational::Ratio;

pub type Q = Ratio<i128>;

fn q(x: i64) -> Q {
    Q::from_integer(x as i128)
}

fn zero() -> Q {
    q(0)
}

pub type IntMatrix = Vec<Vec<i64>>;

/// An algebra given by integer matrices, with exact structure constants.
#[derive(Debug, Clone)]
pub struct ExactAlgebra {
    pub d: usize,
    pub basis: Vec<IntMatrix>,
    /// `c[i][j][k]`: `[B_i, B_j] = Σ_k c[i][j][k] B_k`.
    pub c: Vec<Vec<Vec<Q>>>,
}

fn commutator(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let d = a.len();
    let mut out = vec![vec![0i64; d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut s = 0;
            for l in 0..d {
                s += a[i][l] * b[l][j] - b[i][l] * a[l][j];
            }
            out[i][j] = s;
        }
    }
    out
}

/// Solves `cols · x = rhs` exactly; `None` if inconsistent.
fn solve(cols: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let rows = rhs.len();
    let n = cols.len();
    let mut m: Vec<Vec<Q>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Q> = cols.iter().map(|c| c[r]).collect();
            row.push(rhs[r]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows).find(|&i| m[i][col] != zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::from_integer(1) / m[r][col];
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && m[i][col] != zero() {
                let f = m[i][col];
                for j in 0..=n {
                    let v = m[r][j];
                    m[i][j] -= f * v;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if m[r..].iter().any(|row| row[n] != zero()) {
        return None;
    }
    let mut x = vec![zero(); n];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = m[i][n];
    }
    Some(x)
}

impl ExactAlgebra {
    /// `None` if the span is not closed under brackets.
    pub fn new(basis: Vec<IntMatrix>) -> Option<Self> {
        let n = basis.len();
        let d = basis.first().map_or(0, |b| b.len());
        let flat = |m: &IntMatrix| -> Vec<Q> { m.iter().flatten().map(|&x| q(x)).collect() };
        let cols: Vec<Vec<Q>> = basis.iter().map(flat).collect();
        let mut c = vec![vec![vec![zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                c[i][j] = solve(&cols, &flat(&commutator(&basis[i], &basis[j])))?;
            }
        }
        Some(Self { d, basis, c })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `|f(B_k)| ≤ r_k` for every point of the spectrum: a weight of `B_k`
    /// shifted by a sum of distinct adjoint weights, each bounded by a row-sum
    /// norm.
    pub fn spectrum_bounds(&self) -> Vec<i64> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let rho = self.basis[k]
                    .iter()
                    .map(|row| row.iter().map(|x| x.abs()).sum::<i64>())
                    .max()
                    .unwrap_or(0);
                // ad_k maps B_j to Σ_m c[k][j][m] B_m; column j holds c[k][j][·]
                let ad = (0..n)
                    .map(|m| (0..n).map(|j| { let x = self.c[k][j][m]; if x < zero() { -x } else { x } }).sum::<Q>())
                    .max()
                    .unwrap_or(zero());
                let ad = ad.ceil().to_integer() as i64;
                rho + n as i64 * ad
            })
            .collect()
    }

    /// Whether `f` vanishes on every bracket.
    pub fn is_character(&self, f: &[Q]) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).map(|k| self.c[i][j][k] * f[k]).sum::<Q>() == zero())
        })
    }
}

fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
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
    go(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Boundary matrices `d_p : C_p → C_{p−1}` for `p = 1..=n`, as dense rational
/// matrices with rows indexed by `C_{p−1}`.
pub fn boundaries(alg: &ExactAlgebra, f: &[Q]) -> Vec<Vec<Vec<Q>>> {
    let n = alg.dim();
    let d = alg.d;
    let chains: Vec<Vec<Vec<usize>>> = (0..=n).map(|p| subsets(n, p)).collect();
    let pos = |p: usize, s: &[usize]| chains[p].iter().position(|t| t == s).unwrap();
    let mut out = Vec::new();
    for p in 1..=n {
        let rows = d * chains[p - 1].len();
        let cols = d * chains[p].len();
        let mut m = vec![vec![zero(); cols]; rows];
        for (si, s) in chains[p].iter().enumerate() {
            for a in 0..d {
                let col = si * d + a;
                // action terms
                for (i, &xi) in s.iter().enumerate() {
                    let sign = if i % 2 == 0 { q(1) } else { q(-1) };
                    let rest: Vec<usize> = s.iter().copied().filter(|&x| x != xi).collect();
                    let r = pos(p - 1, &rest);
                    // (f(x) − x) e_a
                    for b in 0..d {
                        let mut v = -q(alg.basis[xi][b][a]);
                        if a == b {
                            v += f[xi];
                        }
                        if v != zero() {
                            m[r * d + b][col] += sign * v;
                        }
                    }
                }
                // bracket terms
                for i in 0..s.len() {
                    for j in (i + 1)..s.len() {
                        let sign = if (i + j) % 2 == 0 { q(1) } else { q(-1) };
                        let rest: Vec<usize> = s
                            .iter()
                            .copied()
                            .filter(|&x| x != s[i] && x != s[j])
                            .collect();
                        for k in 0..n {
                            let ck = alg.c[s[i]][s[j]][k];
                            if ck == zero() || rest.contains(&k) {
                                continue;
                            }
                            let below = rest.iter().filter(|&&r| r < k).count();
                            let wsign = if below % 2 == 0 { q(1) } else { q(-1) };
                            let mut t = rest.clone();
                            t.push(k);
                            t.sort();
                            let r = pos(p - 1, &t);
                            m[r * d + a][col] += sign * wsign * ck;
                        }
                    }
                }
            }
        }
        out.push(m);
    }
    out
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut m = m.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][col] != zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in (r + 1)..rows {
            if m[i][col] != zero() {
                let f = m[i][col] / m[r][col];
                for j in col..cols {
                    let v = m[r][j];
                    m[i][j] -= f * v;
                }
            }
        }
        r += 1;
    }
    r
}

fn product(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|l| row[l] * b[l][j]).sum())
                .collect()
        })
        .collect()
}

/// Homology dimensions `h_0..=h_n`; panics if `d∘d ≠ 0`.
pub fn homology(alg: &ExactAlgebra, f: &[Q]) -> Vec<usize> {
    let n = alg.dim();
    let d = alg.d;
    let bd = boundaries(alg, f);
    for p in 1..n {
        let dd = product(&bd[p - 1], &bd[p]);
        assert!(dd.iter().flatten().all(|x| *x == zero()), "d∘d ≠ 0 at degree {}", p + 1);
    }
    let ranks: Vec<usize> = bd.iter().map(|m| rank(m)).collect();
    (0..=n)
        .map(|p| {
            let dim = d * binomial(n, p);
            let out_rank = if p >= 1 { ranks[p - 1] } else { 0 };
            let in_rank = if p < n { ranks[p] } else { 0 };
            dim - out_rank - in_rank
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Membership by degree selection: `None` for the Taylor spectrum, otherwise
/// `(is_delta, k)`.
pub fn selected(h: &[usize], kind: Option<(bool, usize)>) -> bool {
    let n = h.len() - 1;
    h.iter().enumerate().any(|(p, &hp)| {
        hp > 0
            && match kind {
                None => true,
                Some((true, k)) => p <= k,
                Some((false, k)) => p + k >= n,
            }
    })
}

/// Every integer character in `Π [−r_k, r_k]` whose complex has homology in
/// the selected degrees.
pub fn grid_spectrum(alg: &ExactAlgebra, r: &[i64], kind: Option<(bool, usize)>) -> Vec<Vec<i64>> {
    let n = alg.dim();
    let mut out = Vec::new();
    let mut f: Vec<i64> = r.iter().map(|&x| -x).collect();
    loop {
        let fq: Vec<Q> = f.iter().map(|&x| q(x)).collect();
        if alg.is_character(&fq) && selected(&homology(alg, &fq), kind) {
            out.push(f.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                out.sort();
                return out;
            }
            if f[i] < r[i] {
                f[i] += 1;
                break;
            }
            f[i] = -r[i];
            i += 1;
        }
    }
}
