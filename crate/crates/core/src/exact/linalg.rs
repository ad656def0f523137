//! Exact dense linear algebra over the integers and rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Determinant by fraction-free (Bareiss) elimination. Row swaps pick the first nonzero
/// entry below the pivot; every division is exact.
pub fn determinant(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "matrix must be square");
            r.iter().map(|&x| BigInt::from(x)).collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = (pivot * &row[j] - &lead * &pivot_row[j]) / &prev;
                row[j] = v;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot.clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Solves `A x = b` exactly by Gaussian elimination. Pivots are chosen by nonzero structure
/// (first nonzero entry in the column) and rows with a zero in the pivot column are left
/// untouched, so banded systems stay cheap. Returns `None` for singular systems.
pub fn solve(a: &[Vec<i64>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r: Vec<BigRational> =
                row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
            r.push(rhs.clone());
            r
        })
        .collect();
    // last nonzero column per row bounds the work for banded matrices
    let mut reach: Vec<usize> = a
        .iter()
        .map(|row| row.iter().rposition(|x| *x != 0).unwrap_or(0))
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero())?;
        if p != k {
            m.swap(p, k);
            reach.swap(p, k);
        }
        let inv = m[k][k].recip();
        let span = reach[k];
        for j in k..=span {
            m[k][j] = &m[k][j] * &inv;
        }
        m[k][n] = &m[k][n] * &inv;
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for (off, row) in bottom.iter_mut().enumerate() {
            if row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for j in k..=span {
                if !pivot_row[j].is_zero() {
                    row[j] = &row[j] - &f * &pivot_row[j];
                }
            }
            row[n] = &row[n] - &f * &pivot_row[n];
            let i = k + 1 + off;
            reach[i] = reach[i].max(span);
        }
    }
    let mut x = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        let mut v = m[k][n].clone();
        for j in k + 1..=reach[k].max(k) {
            if !m[k][j].is_zero() {
                v -= &m[k][j] * &x[j];
            }
        }
        x[k] = v;
    }
    Some(x)
}

/// Renders a rational with `digits` significant decimal digits (truncated toward zero).
pub fn to_decimal(q: &BigRational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let q = q.abs();
    let (num, den) = (q.numer().clone(), q.denom().clone());
    let int_part = &num / &den;
    let mut rem = &num % &den;
    let mut out = int_part.to_string();
    let mut significant = if int_part.is_zero() { 0 } else { out.len() };
    let mut frac = String::new();
    let ten = BigInt::from(10);
    while significant < digits && !rem.is_zero() {
        rem *= &ten;
        let digit = &rem / &den;
        rem = &rem % &den;
        let ds = digit.to_string();
        if significant > 0 || ds != "0" {
            significant += 1;
        }
        frac.push_str(&ds);
    }
    if !frac.is_empty() {
        out.push('.');
        out.push_str(&frac);
    }
    if neg {
        out.insert(0, '-');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    // cofactor expansion, exponential but independent of the elimination path
    fn det_expand(m: &[Vec<i64>]) -> i128 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] as i128 * det_expand(&minor)
            })
            .sum()
    }

    #[test]
    fn determinant_matches_expansion() {
        let cases = vec![
            vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]],
            vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]],
            vec![vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 5]],
            vec![vec![1, 2], vec![2, 4]],
            vec![vec![3, -1, -1, 0, 4], vec![-1, 3, -1, -1, 0], vec![-1, -1, 3, -1, 1], vec![0, -1, -1, 3, 2], vec![7, 0, 1, 2, -3]],
        ];
        for m in cases {
            assert_eq!(determinant(&m), BigInt::from(det_expand(&m)), "{m:?}");
        }
    }

    #[test]
    fn solve_small_system() {
        let a = vec![vec![0, 2, 1], vec![1, 1, 0], vec![2, 0, 3]];
        let b = vec![q(7, 1), q(3, 1), q(11, 1)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![q(1, 1), q(2, 1), q(3, 1)]);
        assert!(solve(&[vec![1, 2], vec![2, 4]], &[q(1, 1), q(2, 1)]).is_none());
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&q(3, 4), 40), "0.75");
        assert_eq!(to_decimal(&q(1, 3), 5), "0.33333");
        assert_eq!(to_decimal(&q(-7, 2), 40), "-3.5");
        assert_eq!(to_decimal(&q(1, 1), 40), "1");
        assert_eq!(to_decimal(&q(1, 1000), 2), "0.001");
        assert_eq!(to_decimal(&q(1, 3000), 2), "0.00033");
    }
}
