//! Dense univariate polynomials over `F_p` (coefficients low to high) and
//! their complete factorization: squarefree decomposition, distinct-degree
//! splitting, then Cantor–Zassenhaus equal-degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{inv_mod, mul_mod};

pub(crate) type UPoly = Vec<u64>;

fn trim(mut a: UPoly) -> UPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn deg(a: &[u64]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

fn sub(a: &[u64], b: &[u64], p: u64) -> UPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    trim(out)
}

fn mul(a: &[u64], b: &[u64], p: u64) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

fn divrem(a: &[u64], b: &[u64], p: u64) -> (UPoly, UPoly) {
    let db = deg(b).expect("division by zero polynomial");
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let inv = inv_mod(b[db], p);
    let mut q = vec![0; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = mul_mod(r[i], inv, p);
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for (j, &y) in b.iter().enumerate() {
            let k = i - db + j;
            r[k] = (r[k] + p - mul_mod(c, y, p)) % p;
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn rem(a: &[u64], b: &[u64], p: u64) -> UPoly {
    divrem(a, b, p).1
}

fn monic(a: UPoly, p: u64) -> UPoly {
    match a.last() {
        None => a,
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            a.into_iter().map(|c| mul_mod(c, inv, p)).collect()
        }
    }
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> UPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(x, p)
}

fn derivative(a: &[u64], p: u64) -> UPoly {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
        .collect();
    trim(out)
}

fn powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> UPoly {
    let mut acc = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, m)` with the
/// `g` squarefree, pairwise coprime, and `f = prod g^m`.
fn squarefree(f: &[u64], p: u64) -> Vec<(UPoly, u32)> {
    let mut out = Vec::new();
    if deg(f).unwrap_or(0) == 0 {
        return out;
    }
    let df = derivative(f, p);
    if df.is_empty() {
        // f = h(t^p); over F_p the p-th root of h(t^p) is h(t).
        let h: UPoly = f.iter().step_by(p as usize).copied().collect();
        for (g, m) in squarefree(&h, p) {
            out.push((g, m * p as u32));
        }
        return out;
    }
    let mut c = gcd(f, &df, p);
    let mut w = divrem(f, &c, p).0;
    let mut i = 1u32;
    while deg(&w).unwrap_or(0) > 0 {
        let y = gcd(&w, &c, p);
        let z = divrem(&w, &y, p).0;
        if deg(&z).unwrap_or(0) > 0 {
            out.push((monic(z, p), i));
        }
        c = divrem(&c, &y, p).0;
        w = y;
        i += 1;
    }
    if deg(&c).unwrap_or(0) > 0 {
        let h: UPoly = c.iter().step_by(p as usize).copied().collect();
        for (g, m) in squarefree(&h, p) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Distinct-degree factorization of a squarefree monic polynomial.
fn ddf(f: &[u64], p: u64) -> Vec<(UPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x = vec![0, 1];
    let mut h = x.clone();
    let mut d = 1;
    while deg(&rest).unwrap_or(0) >= 2 * d {
        h = powmod(&h, p as u128, &rest, p);
        let g = gcd(&rest, &sub(&h, &x, p), p);
        if deg(&g).unwrap_or(0) > 0 {
            rest = divrem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
            out.push((g, d));
        }
        d += 1;
    }
    if deg(&rest).unwrap_or(0) > 0 {
        let dr = deg(&rest).unwrap();
        out.push((monic(rest, p), dr));
    }
    out
}

/// Equal-degree splitting (Cantor–Zassenhaus, `p` odd).
fn edf(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<UPoly> {
    let n = deg(f).unwrap();
    if n == d {
        return vec![f.to_vec()];
    }
    let e = ((p as u128).pow(d as u32) - 1) / 2;
    loop {
        let a: UPoly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if deg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = sub(&powmod(&a, e, f, p), &[1], p);
        let g = gcd(f, &b, p);
        let dg = deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let other = monic(divrem(f, &g, p).0, p);
            let mut out = edf(&g, d, p, rng);
            out.extend(edf(&other, d, p, rng));
            return out;
        }
    }
}

/// Complete factorization into monic irreducibles with multiplicities,
/// sorted by degree then coefficients. Returns the leading coefficient too.
pub(crate) fn factor(f: &[u64], p: u64) -> (u64, Vec<(UPoly, u32)>) {
    let f = trim(f.to_vec());
    let lc = *f.last().expect("nonzero polynomial");
    let f = monic(f, p);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_u64 ^ p);
    let mut out = Vec::new();
    for (g, m) in squarefree(&f, p) {
        for (h, d) in ddf(&g, p) {
            for q in edf(&h, d, p, &mut rng) {
                out.push((q, m));
            }
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.iter().rev().cmp(b.0.iter().rev())));
    (lc, out)
}

pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    if deg(&f).unwrap_or(0) == 0 {
        return false;
    }
    let (_, fs) = factor(&f, p);
    fs.len() == 1 && fs[0].1 == 1
}

#[cfg(test)]
fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(lc: u64, fs: &[(UPoly, u32)], p: u64) -> UPoly {
        let mut acc = vec![lc];
        for (g, m) in fs {
            for _ in 0..*m {
                acc = mul(&acc, g, p);
            }
        }
        acc
    }

    #[test]
    fn factors_t5_plus_t3() {
        let f = vec![0, 0, 0, 1, 0, 1];
        let (lc, fs) = factor(&f, 5);
        assert_eq!(expand(lc, &fs, 5), f);
        assert_eq!(fs[0], (vec![0, 1], 3));
        // t^2 + 1 = (t - 2)(t - 3) over F_5
        assert_eq!(fs.len(), 3);
    }

    #[test]
    fn factors_pth_powers() {
        // (t + 1)^5 * (t^2 + 2) over F_5
        let mut f = vec![1];
        for _ in 0..5 {
            f = mul(&f, &[1, 1], 5);
        }
        f = mul(&f, &[2, 0, 1], 5);
        let (lc, fs) = factor(&f, 5);
        assert_eq!(expand(lc, &fs, 5), f);
        assert!(fs.iter().all(|(g, _)| is_irreducible(g, 5)));
        assert!(fs.contains(&(vec![1, 1], 5)));
    }

    #[test]
    fn random_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(1..9);
            let mut f: UPoly = (0..n).map(|_| rng.gen_range(0..7)).collect();
            f.push(rng.gen_range(1..7));
            let (lc, fs) = factor(&f, 7);
            assert_eq!(expand(lc, &fs, 7), trim(f));
            for (g, _) in &fs {
                let roots = (0..7).filter(|&x| eval(g, x, 7) == 0).count();
                assert!(g.len() == 2 || roots == 0);
            }
        }
    }
}
