use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Engine coefficient. i128 overflow panics (overflow checks stay on in every profile we ship).
pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn qr(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let n: i128 = a.trim().parse().ok()?;
            let d: i128 = b.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => s.parse::<i128>().ok().map(Q::from_integer),
    }
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_big(x: &Q) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

pub fn from_big(x: &BigRational) -> Option<Q> {
    Some(Q::new(x.numer().to_i128()?, x.denom().to_i128()?))
}

pub fn factorial(n: u32) -> i128 {
    (1..=n as i128).product()
}

/// Exact inverse of a small dense matrix; None if singular.
pub fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut inv: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let (x, y) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * x;
                    inv[r][j] -= f * y;
                }
            }
        }
    }
    Some(inv)
}

/// Determinant by fraction-free elimination over big rationals.
pub fn det_big(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for j in col..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
            }
        }
    }
    det
}

pub fn sign(n: i32) -> i32 {
    if n > 0 {
        1
    } else {
        -1
    }
}

pub fn is_neg(x: &Q) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in ["3", "-7/2", "0", "5/10"] {
            let x = parse_q(s).unwrap();
            assert_eq!(parse_q(&fmt_q(&x)), Some(x));
        }
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(fmt_q(&qr(5, 10)), "1/2");
    }

    #[test]
    fn inverse_and_det() {
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let i = invert(&m).unwrap();
        assert_eq!(i, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
        assert!(invert(&[vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
        let b: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(to_big).collect()).collect();
        assert_eq!(det_big(&b), to_big(&q(1)));
    }
}
