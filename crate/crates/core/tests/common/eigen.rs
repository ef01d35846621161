//! Eigenvalues from the characteristic polynomial: Faddeev–LeVerrier for the
//! coefficients, Durand–Kerner for the roots. Shares nothing with the library's
//! Schur-based path.

use num_complex::Complex64 as C;

/// Coefficients `c[0..=n]` of `det(λI − A)`, `c[n] = 1`; `a` is row-major.
pub fn char_poly(a: &[Vec<C>]) -> Vec<C> {
    let n = a.len();
    let mut c = vec![C::new(0.0, 0.0); n + 1];
    c[n] = C::new(1.0, 0.0);
    let mut m = vec![vec![C::new(0.0, 0.0); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I
        let mut next = vec![vec![C::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = C::new(0.0, 0.0);
                for l in 0..n {
                    s += a[i][l] * m[l][j];
                }
                next[i][j] = s;
            }
            next[i][i] += c[n - k + 1];
        }
        m = next;
        let mut tr = C::new(0.0, 0.0);
        for i in 0..n {
            for l in 0..n {
                tr += a[i][l] * m[l][i];
            }
        }
        c[n - k] = -tr / k as f64;
    }
    c
}

fn eval(c: &[C], z: C) -> C {
    c.iter().rev().fold(C::new(0.0, 0.0), |acc, &ci| acc * z + ci)
}

/// All roots of a monic polynomial, with multiplicity.
pub fn roots(c: &[C]) -> Vec<C> {
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let radius = 1.0 + c[..n].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = C::new(0.4, 0.9);
    let mut z: Vec<C> = (0..n).map(|i| seed.powu(i as u32) * radius.min(10.0)).collect();
    for _ in 0..5000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut den = C::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                den = C::new(1e-300, 0.0);
            }
            let step = eval(c, z[i]) / den;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * radius {
            break;
        }
    }
    z
}

fn derivative(c: &[C]) -> Vec<C> {
    c.iter().enumerate().skip(1).map(|(i, &x)| x * i as f64).collect()
}

/// Roots grouped by single linkage at `radius`. A group of size `m` is
/// replaced by the nearby simple root of `p^(m−1)`, found by Newton from the
/// group mean.
pub fn clustered(c: &[C], mut z: Vec<C>, radius: f64) -> Vec<C> {
    let n = z.len();
    let mut group: Vec<usize> = (0..n).collect();
    fn find(g: &mut Vec<usize>, i: usize) -> usize {
        if g[i] != i {
            let r = find(g, g[i]);
            g[i] = r;
        }
        g[i]
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (z[i] - z[j]).norm() <= radius {
                let (a, b) = (find(&mut group, i), find(&mut group, j));
                group[a] = b;
            }
        }
    }
    let mut sums: Vec<(usize, C, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut group, i);
        match sums.iter_mut().find(|s| s.0 == r) {
            Some(s) => {
                s.1 += z[i];
                s.2 += 1;
            }
            None => sums.push((r, z[i], 1)),
        }
    }
    z = sums
        .into_iter()
        .map(|(_, s, k)| {
            let mut x = s / k as f64;
            if k > 1 {
                let mut dp = c.to_vec();
                for _ in 1..k {
                    dp = derivative(&dp);
                }
                let ddp = derivative(&dp);
                for _ in 0..100 {
                    let den = eval(&ddp, x);
                    if den.norm() == 0.0 {
                        break;
                    }
                    let step = eval(&dp, x) / den;
                    x -= step;
                    if step.norm() < 1e-16 * x.norm().max(1.0) {
                        break;
                    }
                }
            }
            x
        })
        .collect();
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    z
}

/// Distinct eigenvalues of `a`.
pub fn distinct_eigenvalues(a: &[Vec<C>]) -> Vec<C> {
    let scale = a
        .iter()
        .flatten()
        .map(|x| x.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(1.0);
    let c = char_poly(a);
    clustered(&c, roots(&c), 1e-3 * scale)
}
