//! Row reduction and small matrix helpers over a [`FieldTable`].
//!
//! Matrices are flat row-major `Vec<u8>` buffers with an explicit row length.

use crate::fields::FieldTable;

#[inline]
pub fn dot(f: &FieldTable, a: &[u8], b: &[u8]) -> u8 {
    a.iter()
        .zip(b)
        .fold(0u8, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Scales `v` so its first nonzero entry is 1. Returns false for the zero vector.
pub fn normalize(f: &FieldTable, v: &mut [u8]) -> bool {
    let Some(lead) = v.iter().copied().find(|&x| x != 0) else {
        return false;
    };
    if lead != 1 {
        let s = f.inv(lead);
        for x in v.iter_mut() {
            *x = f.mul(*x, s);
        }
    }
    true
}

/// Reduces `rows` (row length `n`) in place to reduced row-echelon form, dropping zero
/// rows. Returns the pivot columns.
pub fn rref(f: &FieldTable, rows: &mut Vec<u8>, n: usize) -> Vec<usize> {
    let m = rows.len() / n;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(sel) = (r..m).find(|&i| rows[i * n + c] != 0) else {
            continue;
        };
        if sel != r {
            for j in 0..n {
                rows.swap(sel * n + j, r * n + j);
            }
        }
        let s = f.inv(rows[r * n + c]);
        for j in 0..n {
            rows[r * n + j] = f.mul(rows[r * n + j], s);
        }
        for i in 0..m {
            if i == r {
                continue;
            }
            let t = rows[i * n + c];
            if t == 0 {
                continue;
            }
            for j in 0..n {
                let v = f.mul(t, rows[r * n + j]);
                rows[i * n + j] = f.sub(rows[i * n + j], v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r * n);
    pivots
}

pub fn rank(f: &FieldTable, rows: &[u8], n: usize) -> usize {
    let mut tmp = rows.to_vec();
    rref(f, &mut tmp, n).len()
}

/// Basis (in reduced echelon form) of `{x : row . x = 0 for every row}`.
pub fn nullspace(f: &FieldTable, rows: &[u8], n: usize) -> Vec<u8> {
    let mut red = rows.to_vec();
    let pivots = rref(f, &mut red, n);
    let mut out = Vec::new();
    for c in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u8; n];
        v[c] = 1;
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(red[i * n + c]);
        }
        out.extend_from_slice(&v);
    }
    rref(f, &mut out, n);
    out
}

/// `M v` for an `n x n` matrix.
pub fn mat_vec(f: &FieldTable, m: &[u8], n: usize, v: &[u8]) -> Vec<u8> {
    (0..n).map(|i| dot(f, &m[i * n..(i + 1) * n], v)).collect()
}

/// `A B` for `n x n` matrices.
pub fn mat_mul(f: &FieldTable, a: &[u8], b: &[u8], n: usize) -> Vec<u8> {
    let mut out = vec![0u8; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                let idx = i * n + j;
                out[idx] = f.add(out[idx], f.mul(x, b[k * n + j]));
            }
        }
    }
    out
}

pub fn transpose(m: &[u8], n: usize) -> Vec<u8> {
    let mut out = vec![0u8; n * n];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = m[i * n + j];
        }
    }
    out
}

pub fn identity(n: usize) -> Vec<u8> {
    let mut out = vec![0u8; n * n];
    for i in 0..n {
        out[i * n + i] = 1;
    }
    out
}

/// Inverse of an `n x n` matrix, if it is nonsingular.
pub fn inverse(f: &FieldTable, m: &[u8], n: usize) -> Option<Vec<u8>> {
    let w = 2 * n;
    let mut aug = vec![0u8; n * w];
    for i in 0..n {
        aug[i * w..i * w + n].copy_from_slice(&m[i * n..(i + 1) * n]);
        aug[i * w + n + i] = 1;
    }
    let pivots = rref(f, &mut aug, w);
    if pivots.len() != n || pivots[n - 1] != n - 1 {
        return None;
    }
    let mut out = vec![0u8; n * n];
    for i in 0..n {
        out[i * n..(i + 1) * n].copy_from_slice(&aug[i * w + n..(i + 1) * w]);
    }
    Some(out)
}

pub fn is_nonsingular(f: &FieldTable, m: &[u8], n: usize) -> bool {
    rank(f, m, n) == n
}

/// `x^T G y`.
pub fn bilinear(f: &FieldTable, g: &[u8], x: &[u8], y: &[u8]) -> u8 {
    dot(f, x, &mat_vec(f, g, x.len(), y))
}

/// Rows `e_1..e_m, f_1..f_m` of a symplectic basis for a nondegenerate alternating
/// Gram matrix, with `B(e_i, f_i) = 1` and every other pairing zero.
pub fn symplectic_frame(f: &FieldTable, g: &[u8], n: usize) -> Option<Vec<u8>> {
    if !n.is_multiple_of(2) {
        return None;
    }
    let mut rest = identity(n);
    let (mut es, mut fs) = (Vec::new(), Vec::new());
    while !rest.is_empty() {
        let e = rest[..n].to_vec();
        let mut fv = rest
            .chunks(n)
            .find(|v| bilinear(f, g, &e, v) != 0)?
            .to_vec();
        let s = f.inv(bilinear(f, g, &e, &fv));
        fv.iter_mut().for_each(|x| *x = f.mul(*x, s));
        let mut next = Vec::with_capacity(rest.len());
        for v in rest.chunks(n) {
            let a = bilinear(f, g, v, &fv);
            let b = bilinear(f, g, v, &e);
            next.extend(
                (0..n).map(|j| f.add(f.sub(v[j], f.mul(a, e[j])), f.mul(b, fv[j]))),
            );
        }
        rref(f, &mut next, n);
        rest = next;
        es.extend(e);
        fs.extend(fv);
    }
    es.extend(fs);
    Some(es)
}
