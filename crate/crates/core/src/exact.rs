//! Exact integer linear algebra: characteristic polynomials, determinants and
//! pseudo-determinants of integer matrices.
//!
//! All arithmetic is checked `i128`; overflow is reported, never wrapped.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow)
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

/// Coefficients of `det(x·I − A)` indexed by power of `x` (entry `n` is 1).
///
/// Uses the division-free Berkowitz recursion over leading principal
/// submatrices.
pub fn charpoly(a: &DMatrix<i64>) -> Result<Vec<i128>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Shape(format!("charpoly of a {}x{} matrix", n, a.ncols())));
    }
    let at = |i: usize, j: usize| a[(i, j)] as i128;
    // highest degree first
    let mut v: Vec<i128> = vec![1];
    for r in 0..n {
        // t = [1, -a_rr, -R C, -R A C, ..., -R A^{r-1} C]
        let mut t = Vec::with_capacity(r + 2);
        t.push(1);
        t.push(-at(r, r));
        let mut col: Vec<i128> = (0..r).map(|i| at(i, r)).collect();
        for _ in 0..r {
            let mut dot = 0i128;
            for (j, &c) in col.iter().enumerate() {
                dot = add(dot, mul(at(r, j), c)?)?;
            }
            t.push(dot.checked_neg().ok_or(Error::Overflow)?);
            let mut next = vec![0i128; r];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc = 0i128;
                for (j, &c) in col.iter().enumerate() {
                    acc = add(acc, mul(at(i, j), c)?)?;
                }
                *slot = acc;
            }
            col = next;
        }
        let mut next = vec![0i128; r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            let mut acc = 0i128;
            for (j, &vj) in v.iter().enumerate().take(i + 1) {
                acc = add(acc, mul(t[i - j], vj)?)?;
            }
            *slot = acc;
        }
        v = next;
    }
    v.reverse();
    Ok(v)
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(a: &DMatrix<i64>) -> Result<i128> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Shape(format!("determinant of a {}x{} matrix", n, a.ncols())));
    }
    if n == 0 {
        return Ok(1);
    }
    let mut m: Vec<Vec<i128>> =
        (0..n).map(|i| (0..n).map(|j| a[(i, j)] as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(p) => {
                    m.swap(k, p);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = mul(m[i][j], m[k][k])?.checked_sub(mul(m[i][k], m[k][j])?);
                m[i][j] = num.ok_or(Error::Overflow)? / prev;
            }
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

/// Rank over the rationals, by fraction-free elimination.
pub fn rank(a: &DMatrix<i64>) -> Result<usize> {
    let (rows, cols) = a.shape();
    let mut m: Vec<Vec<i128>> =
        (0..rows).map(|i| (0..cols).map(|j| a[(i, j)] as i128).collect()).collect();
    let mut r = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = mul(m[i][j], m[r][c])?.checked_sub(mul(m[i][c], m[r][j])?);
                m[i][j] = num.ok_or(Error::Overflow)? / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        r += 1;
        if r == rows {
            break;
        }
    }
    Ok(r)
}

/// Exact pseudo-determinant of a symmetric integer matrix, read off the
/// lowest nonzero coefficient of its characteristic polynomial. Returns
/// `(pseudo_det, rank)`; the zero matrix gives `(1, 0)`.
pub fn pseudo_det_symmetric(a: &DMatrix<i64>) -> Result<(i128, usize)> {
    let p = charpoly(a)?;
    let n = a.nrows();
    let low = p.iter().position(|&c| c != 0).unwrap_or(n);
    let rank = n - low;
    let value = if rank % 2 == 0 { p[low] } else { -p[low] };
    Ok((value, rank))
}

/// Renders an integer polynomial (coefficients by ascending power) in the
/// conventional descending form, e.g. `x^2 - 3x + 1`.
pub fn format_polynomial(coeffs: &[i128]) -> String {
    let mut out = String::new();
    for (power, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let abs = c.unsigned_abs();
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        let coeff = if abs == 1 && power > 0 { String::new() } else { abs.to_string() };
        out.push_str(&coeff);
        match power {
            0 => {}
            1 => out.push('x'),
            _ => out.push_str(&format!("x^{power}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
