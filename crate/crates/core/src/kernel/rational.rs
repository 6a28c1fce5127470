//! Scalar types and small vector helpers shared by the whole kernel.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
/// Arbitrary-precision rational; `num_rational` keeps it reduced with a
/// positive denominator.
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_from_int(n: &Int) -> Rat {
    Rat::from_integer(n.clone())
}

pub fn rats(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| rat(x, 1)).collect()
}

pub fn ints(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| int(x)).collect()
}

/// Parses `"n"` or `"n/d"`. A zero denominator is an error.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: Int = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let d: Int = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_point(x: &[Rat]) -> String {
    let parts: Vec<String> = x.iter().map(format_rat).collect();
    format!("({})", parts.join(", "))
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_ir(a: &[Int], x: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (c, v) in a.iter().zip(x) {
        if !c.is_zero() {
            acc += v * rat_from_int(c);
        }
    }
    acc
}

pub fn dot_rr(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides out the gcd of the entries. The zero vector is returned unchanged.
pub fn primitive(v: &[Int]) -> Vec<Int> {
    let g = gcd_all(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Smallest positive integer `m` with `m * v` integral, and that product.
pub fn clear_denominators(v: &[Rat]) -> (Vec<Int>, Int) {
    let m = v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()));
    let out = v.iter().map(|x| (x * rat_from_int(&m)).to_integer()).collect();
    (out, m)
}

pub fn to_rats(v: &[Int]) -> Vec<Rat> {
    v.iter().map(rat_from_int).collect()
}

pub fn is_zero_vec<T: Zero>(v: &[T]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn neg_vec(v: &[Int]) -> Vec<Int> {
    v.iter().map(|x| -x).collect()
}

pub fn is_integral(r: &Rat) -> bool {
    r.denom().is_one()
}

pub fn abs_int(x: &Int) -> Int {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("-2").unwrap(), rat(-2, 1));
        assert_eq!(parse_rat("3/-6").unwrap(), rat(-1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(format_rat(&rat(3, 2)), "3/2");
        assert_eq!(format_rat(&rat(4, 2)), "2");
        assert_eq!(format_rat(&rat(-1, 3)), "-1/3");
    }

    #[test]
    fn primitive_and_denominators() {
        assert_eq!(primitive(&ints(&[4, -6, 0])), ints(&[2, -3, 0]));
        assert_eq!(primitive(&ints(&[0, 0])), ints(&[0, 0]));
        let (v, m) = clear_denominators(&[rat(1, 2), rat(2, 3)]);
        assert_eq!(v, ints(&[3, 4]));
        assert_eq!(m, int(6));
    }
}
