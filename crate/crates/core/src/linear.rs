//! Exact-rational formal linear combinations and their tensor analogues.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::canon::ClassKey;
use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Render as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::BadRational(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// A finitely supported map `K -> Rational` with no stored zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, Rational>,
}

pub type FormalSum = LinComb<ClassKey>;
pub type TensorSum = LinComb<(ClassKey, ClassKey)>;
pub type TensorSum3 = LinComb<(ClassKey, ClassKey, ClassKey)>;

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("{}*{:?}", format_rational(c), k))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K) -> Self {
        Self::term(key, Rational::one())
    }

    pub fn term(key: K, coeff: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(key, coeff);
        s
    }

    pub fn add_term(&mut self, key: K, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &K) -> Rational {
        self.terms.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rational)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &Rational) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c * factor);
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, factor);
        out
    }

    /// Linear extension of a map on basis keys.
    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> LinComb<L> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }

    /// Linear extension of a map from basis keys to combinations.
    pub fn flat_map<L: Ord + Clone>(
        &self,
        mut f: impl FnMut(&K) -> Result<LinComb<L>>,
    ) -> Result<LinComb<L>> {
        let mut out = LinComb::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k)?, c);
        }
        Ok(out)
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        let mut s = Self::zero();
        for (k, c) in iter {
            s.add_term(k, c);
        }
        s
    }
}

impl<K: Ord + Clone> Add for &LinComb<K> {
    type Output = LinComb<K>;
    fn add(self, rhs: Self) -> LinComb<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl<K: Ord + Clone> Sub for &LinComb<K> {
    type Output = LinComb<K>;
    fn sub(self, rhs: Self) -> LinComb<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl<K: Ord + Clone> Neg for &LinComb<K> {
    type Output = LinComb<K>;
    fn neg(self) -> LinComb<K> {
        self.scale(&-Rational::one())
    }
}

pub fn tensor<A: Ord + Clone, B: Ord + Clone>(x: &LinComb<A>, y: &LinComb<B>) -> LinComb<(A, B)> {
    let mut out = LinComb::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            out.add_term((a.clone(), b.clone()), ca * cb);
        }
    }
    out
}

/// Swap the first two tensor slots.
pub fn flip12<A: Ord + Clone, C: Ord + Clone>(t: &LinComb<(A, A, C)>) -> LinComb<(A, A, C)> {
    t.map_keys(|(a, b, c)| (b.clone(), a.clone(), c.clone()))
}

/// Extend an operation on basis pairs to pairs of combinations.
pub fn extend_bilinear<A, B, C>(
    x: &LinComb<A>,
    y: &LinComb<B>,
    mut op: impl FnMut(&A, &B) -> Result<LinComb<C>>,
) -> Result<LinComb<C>>
where
    A: Ord + Clone,
    B: Ord + Clone,
    C: Ord + Clone,
{
    let mut out = LinComb::zero();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            out.add_scaled(&op(a, b)?, &(ca * cb));
        }
    }
    Ok(out)
}

/// Keys that flatten to a list of class keys for serialization.
pub trait TensorFactors {
    fn factors(&self) -> Vec<&ClassKey>;
}

impl TensorFactors for ClassKey {
    fn factors(&self) -> Vec<&ClassKey> {
        vec![self]
    }
}

impl TensorFactors for (ClassKey, ClassKey) {
    fn factors(&self) -> Vec<&ClassKey> {
        vec![&self.0, &self.1]
    }
}

impl TensorFactors for (ClassKey, ClassKey, ClassKey) {
    fn factors(&self) -> Vec<&ClassKey> {
        vec![&self.0, &self.1, &self.2]
    }
}

/// One serialized term: `{"coeff": "p/q", "factors": [hex, ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonTerm {
    pub coeff: String,
    pub factors: Vec<ClassKey>,
}

impl<K: Ord + Clone + TensorFactors> LinComb<K> {
    pub fn to_json_terms(&self) -> Vec<JsonTerm> {
        self.iter()
            .map(|(k, c)| JsonTerm {
                coeff: format_rational(c),
                factors: k.factors().into_iter().cloned().collect(),
            })
            .collect()
    }

    /// Human rendering: `c · [A] ⊗ [B] + ...`.
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.iter()
            .map(|(k, c)| {
                let fs: Vec<String> = k.factors().iter().map(|f| format!("[{f}]")).collect();
                format!("{} · {}", format_rational(c), fs.join(" ⊗ "))
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

pub fn formal_sum_from_json(terms: &[JsonTerm]) -> Result<FormalSum> {
    let mut out = FormalSum::zero();
    for t in terms {
        if t.factors.len() != 1 {
            return Err(Error::BadKey("expected one factor per term".into()));
        }
        out.add_term(t.factors[0].clone(), parse_rational(&t.coeff)?);
    }
    Ok(out)
}

pub fn tensor_sum_from_json(terms: &[JsonTerm]) -> Result<TensorSum> {
    let mut out = TensorSum::zero();
    for t in terms {
        match t.factors.as_slice() {
            [a, b] => out.add_term((a.clone(), b.clone()), parse_rational(&t.coeff)?),
            _ => return Err(Error::BadKey("expected two factors per term".into())),
        }
    }
    Ok(out)
}

/// Dense matrix over the rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

fn bit_size(r: &Rational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    /// Matrix whose column `j` holds the coordinates of `columns[j]`.
    pub fn from_columns<T: Ord + Clone>(columns: &[LinComb<T>]) -> Self {
        let mut index: BTreeMap<&T, usize> = BTreeMap::new();
        for col in columns {
            for k in col.keys() {
                let next = index.len();
                index.entry(k).or_insert(next);
            }
        }
        let mut m = Matrix::zeros(index.len(), columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (k, c) in col.iter() {
                m.set(index[k], j, c.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    /// Pivots are chosen by smallest numerator+denominator bit length.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows)
                .filter(|&r| !self.get(r, col).is_zero())
                .min_by_key(|&r| bit_size(self.get(r, col)))
            else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self.get(row, col).recip();
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let f = self.get(r, col).clone();
                for c in col..self.cols {
                    let pv = self.get(row, c);
                    if pv.is_zero() {
                        continue;
                    }
                    let v = self.get(r, c) - &f * pv;
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }
}

/// Basis of the kernel of a linear map given on the basis `basis`.
pub fn kernel_basis<K, T>(basis: &[K], map: impl Fn(&K) -> LinComb<T>) -> Vec<LinComb<K>>
where
    K: Ord + Clone,
    T: Ord + Clone,
{
    let columns: Vec<LinComb<T>> = basis.iter().map(map).collect();
    Matrix::from_columns(&columns)
        .kernel()
        .into_iter()
        .map(|v| {
            basis
                .iter()
                .cloned()
                .zip(v)
                .filter(|(_, c)| !c.is_zero())
                .collect()
        })
        .collect()
}

/// Rank of a linear map given on a basis.
pub fn map_rank<K, T>(basis: &[K], map: impl Fn(&K) -> LinComb<T>) -> usize
where
    T: Ord + Clone,
{
    let columns: Vec<LinComb<T>> = basis.iter().map(map).collect();
    Matrix::from_columns(&columns).rank()
}

/// Is `target` in the span of `spanning`?
pub fn in_span<T: Ord + Clone>(spanning: &[LinComb<T>], target: &LinComb<T>) -> bool {
    let mut cols: Vec<LinComb<T>> = spanning.to_vec();
    let base = Matrix::from_columns(&cols).rank();
    cols.push(target.clone());
    Matrix::from_columns(&cols).rank() == base
}

pub fn is_nonnegative_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    type L = LinComb<&'static str>;

    #[test]
    fn arithmetic() {
        let x: L = [("a", int(2)), ("b", rat(1, 3))].into_iter().collect();
        assert!((&x + &x.scale(&int(-1))).is_zero());
        assert_eq!((&x - &x), L::zero());
        let t = tensor(&L::term("p", int(2)), &L::single("c2"));
        assert_eq!(t.coeff(&("p", "c2")), int(2));
        let abc = LinComb::single(("A", "B", "C"));
        assert_eq!(flip12(&abc), LinComb::single(("B", "A", "C")));
    }

    #[test]
    fn zero_terms_are_dropped() {
        let mut x = L::single("a");
        x.add_term("a", int(-1));
        assert!(x.is_zero());
        x.add_term("b", int(0));
        assert_eq!(x.len(), 0);
    }

    #[test]
    fn bilinear_extension() {
        let x: L = [("a", int(1)), ("b", int(1))].into_iter().collect();
        let y = L::single("c");
        let r = extend_bilinear(&x, &y, |a, b| Ok(LinComb::single(format!("{a}{b}")))).unwrap();
        assert_eq!(r.len(), 2);
        let scaled = extend_bilinear(&x.scale(&int(3)), &y, |a, b| {
            Ok(LinComb::single(format!("{a}{b}")))
        })
        .unwrap();
        assert_eq!(scaled, r.scale(&int(3)));
    }

    #[test]
    fn kernel_and_rank() {
        // columns: e1, e1, e2  -> kernel spanned by (1,-1,0)
        let cols = [L::single("x"), L::single("x"), L::single("y")];
        let m = Matrix::from_columns(&cols);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k, vec![vec![int(-1), int(1), int(0)]]);
        let kb = kernel_basis(&["u", "v", "w"], |k| cols[["u", "v", "w"].iter().position(|x| x == k).unwrap()].clone());
        assert_eq!(kb.len(), 1);
    }

    #[test]
    fn rational_text() {
        assert_eq!(format_rational(&rat(2, 4)), "1/2");
        assert_eq!(format_rational(&int(-3)), "-3");
        assert_eq!(parse_rational("5/4").unwrap(), rat(5, 4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn span_membership() {
        let a = L::single("a");
        let b = L::single("b");
        assert!(in_span(&[a.clone(), b.clone()], &(&a + &b)));
        assert!(!in_span(&[a], &b));
    }
}
