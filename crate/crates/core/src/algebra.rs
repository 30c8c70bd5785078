//! The group algebra and function spaces over a finite abelian group.
//!
//! [`AlgebraElement`] is a sparse formal sum `sum c_x x` over group elements;
//! [`GFunction`] is a dense total map on the group. Both are generic over the
//! coefficient scalar: `i64` for the exact integer subring (all verification
//! runs there) and `Complex64` for the Fourier side.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};

/// Coefficient scalar for algebra elements and group functions.
pub trait Coeff:
    Clone
    + PartialEq
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// Complex conjugation; the identity on integers.
    fn conj(&self) -> Self;
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn conj(&self) -> Self {
        *self
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
}

/// A sparse element of the group algebra: a coefficient map with absent keys
/// meaning zero.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<C: Coeff> {
    group: GroupSpec,
    coeffs: BTreeMap<Element, C>,
}

impl<C: Coeff> AlgebraElement<C> {
    pub fn zero(group: &GroupSpec) -> Self {
        AlgebraElement { group: group.clone(), coeffs: BTreeMap::new() }
    }

    /// The identity element `e` with coefficient one.
    pub fn identity(group: &GroupSpec) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(group.identity(), C::one());
        AlgebraElement { group: group.clone(), coeffs }
    }

    /// Builds from explicit terms; zero coefficients are dropped.
    pub fn from_terms<I: IntoIterator<Item = (Element, C)>>(group: &GroupSpec, terms: I) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (x, c) in terms {
            if !group.contains(&x) {
                return Err(Error::NotInGroup(x.0.clone()));
            }
            if c.is_zero() {
                continue;
            }
            let entry = coeffs.entry(x).or_insert_with(C::zero);
            *entry = entry.clone() + c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement { group: group.clone(), coeffs })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// Coefficient at `x` (zero when absent).
    pub fn coeff(&self, x: &Element) -> C {
        self.coeffs.get(x).cloned().unwrap_or_else(C::zero)
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Element, &C)> {
        self.coeffs.iter()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let mut coeffs = self.coeffs.clone();
        for (x, c) in &other.coeffs {
            let entry = coeffs.entry(x.clone()).or_insert_with(C::zero);
            *entry = entry.clone() + c.clone();
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement { group: self.group.clone(), coeffs })
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut coeffs = BTreeMap::new();
        for (x, c) in &self.coeffs {
            let sc = s.clone() * c.clone();
            if !sc.is_zero() {
                coeffs.insert(x.clone(), sc);
            }
        }
        AlgebraElement { group: self.group.clone(), coeffs }
    }

    /// Group-algebra product: `(AB)_z = sum_{xy=z} A_x B_y`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let mut coeffs: BTreeMap<Element, C> = BTreeMap::new();
        for (x, a) in &self.coeffs {
            for (y, b) in &other.coeffs {
                let z = self.group.compose_unchecked(x, y);
                let entry = coeffs.entry(z).or_insert_with(C::zero);
                *entry = entry.clone() + a.clone() * b.clone();
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement { group: self.group.clone(), coeffs })
    }

    /// The involution `*`: conjugates coefficients and inverts group elements.
    pub fn involve(&self) -> Self {
        let mut coeffs = BTreeMap::new();
        for (x, c) in &self.coeffs {
            coeffs.insert(self.group.inverse_unchecked(x), c.conj());
        }
        AlgebraElement { group: self.group.clone(), coeffs }
    }

    /// The norm `N(A) = A A*`.
    pub fn norm(&self) -> Self {
        self.multiply(&self.involve()).expect("same group")
    }

    /// The augmentation: sum of all coefficients.
    pub fn augmentation(&self) -> C {
        self.coeffs.values().fold(C::zero(), |acc, c| acc + c.clone())
    }
}

/// The subset `X` viewed as the algebra element `sum_{x in X} x`.
pub fn embed_subset(group: &GroupSpec, block: &[Element]) -> Result<AlgebraElement<i64>> {
    for x in block {
        if !group.contains(x) {
            return Err(Error::NotInGroup(x.0.clone()));
        }
    }
    AlgebraElement::from_terms(group, block.iter().map(|x| (x.clone(), 1i64)))
}

/// The whole group as the algebra element `G`.
pub fn embed_group(group: &GroupSpec) -> AlgebraElement<i64> {
    AlgebraElement::from_terms(group, group.enumerate().into_iter().map(|x| (x, 1i64))).expect("all members")
}

/// A total function on a group, stored densely in enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct GFunction<C: Coeff> {
    group: GroupSpec,
    values: Vec<C>,
}

impl<C: Coeff> GFunction<C> {
    pub fn from_values(group: &GroupSpec, values: Vec<C>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::ShapeMismatch { expected: group.order(), got: values.len() });
        }
        Ok(GFunction { group: group.clone(), values })
    }

    pub fn constant(group: &GroupSpec, c: C) -> Self {
        GFunction { group: group.clone(), values: vec![c; group.order()] }
    }

    /// The delta function supported at `a`.
    pub fn delta(group: &GroupSpec, a: &Element) -> Result<Self> {
        let i = group.index_of(a)?;
        let mut values = vec![C::zero(); group.order()];
        values[i] = C::one();
        Ok(GFunction { group: group.clone(), values })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn values(&self) -> &[C] {
        &self.values
    }

    pub fn value_at_index(&self, i: usize) -> &C {
        &self.values[i]
    }

    pub fn value(&self, x: &Element) -> Result<C> {
        Ok(self.values[self.group.index_of(x)?].clone())
    }

    pub fn is_pm_one(&self) -> bool
    where
        C: PartialEq,
    {
        self.values.iter().all(|c| *c == C::one() || *c == -C::one())
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// Pointwise conjugate.
    pub fn conj(&self) -> Self {
        GFunction { group: self.group.clone(), values: self.values.iter().map(|c| c.conj()).collect() }
    }

    /// Squared norm `sum |f(x)|^2` (real for both scalar kinds).
    pub fn norm_sq(&self) -> C {
        self.values.iter().fold(C::zero(), |acc, c| acc + c.clone() * c.conj())
    }

    /// Convolution `f*g (x) = sum_y f(y) g(x y^{-1})`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GroupMismatch);
        }
        let v = self.group.order();
        let mut out = vec![C::zero(); v];
        for x in 0..v {
            let mut acc = C::zero();
            for y in 0..v {
                let j = self.group.compose_idx(x, self.group.inverse_idx(y));
                acc = acc + self.values[y].clone() * other.values[j].clone();
            }
            out[x] = acc;
        }
        Ok(GFunction { group: self.group.clone(), values: out })
    }
}

impl GFunction<i64> {
    pub fn to_complex(&self) -> GFunction<Complex64> {
        GFunction {
            group: self.group.clone(),
            values: self.values.iter().map(|&c| Complex64::new(c as f64, 0.0)).collect(),
        }
    }
}

/// Periodic autocorrelation at a single point: `sum_y f(xy) conj(f(y))`.
pub fn paf<C: Coeff>(f: &GFunction<C>, x: &Element) -> Result<C> {
    let g = f.group();
    let xi = g.index_of(x)?;
    Ok(paf_at_index(f, xi))
}

pub(crate) fn paf_at_index<C: Coeff>(f: &GFunction<C>, xi: usize) -> C {
    let g = f.group();
    let v = g.order();
    let mut acc = C::zero();
    for y in 0..v {
        let xy = g.compose_idx(xi, y);
        acc = acc + f.values[xy].clone() * f.values[y].conj();
    }
    acc
}

/// The full periodic autocorrelation function as a [`GFunction`].
pub fn paf_function<C: Coeff>(f: &GFunction<C>) -> GFunction<C> {
    let v = f.group().order();
    let values = (0..v).map(|i| paf_at_index(f, i)).collect();
    GFunction { group: f.group().clone(), values }
}

/// The algebra element `a_f = sum f(x) x` attached to a function.
pub fn algebra_of_function<C: Coeff>(f: &GFunction<C>) -> AlgebraElement<C> {
    let g = f.group();
    AlgebraElement::from_terms(g, g.enumerate().into_iter().zip(f.values.iter().cloned()))
        .expect("enumeration is in-group")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn el(r: &[u32]) -> Element {
        Element(r.to_vec())
    }

    fn g33() -> GroupSpec {
        GroupSpec::new(vec![3, 3]).unwrap()
    }

    fn block_x1() -> Vec<Element> {
        vec![el(&[0, 0]), el(&[1, 1]), el(&[2, 1])]
    }

    fn block_x2() -> Vec<Element> {
        vec![el(&[0, 1]), el(&[0, 2])]
    }

    #[test]
    fn embed_subset_basics() {
        let g = g33();
        let zero = embed_subset(&g, &[]).unwrap();
        assert_eq!(zero.support_len(), 0);
        assert_eq!(zero.augmentation(), 0);

        let gg = embed_group(&g);
        assert_eq!(gg.augmentation(), 9);

        let x1 = embed_subset(&g, &block_x1()).unwrap();
        assert_eq!(x1.support_len(), 3);
        assert!(x1.terms().all(|(_, &c)| c == 1));

        assert!(embed_subset(&g, &[el(&[3, 0])]).is_err());
    }

    #[test]
    fn multiply_against_group_sum() {
        let g = g33();
        let gg = embed_group(&g);
        // G*G = v*G
        let prod = gg.multiply(&gg).unwrap();
        assert_eq!(prod, gg.scale(&9));
        // X*G = |X|*G
        let x2 = embed_subset(&g, &block_x2()).unwrap();
        assert_eq!(x2.multiply(&gg).unwrap(), gg.scale(&2));
        // e*A = A
        let e = AlgebraElement::<i64>::identity(&g);
        let x1 = embed_subset(&g, &block_x1()).unwrap();
        assert_eq!(e.multiply(&x1).unwrap(), x1);
    }

    #[test]
    fn involve_examples() {
        let g = g33();
        let e = AlgebraElement::<i64>::identity(&g);
        assert_eq!(e.involve(), e);
        let x2 = embed_subset(&g, &block_x2()).unwrap();
        assert_eq!(x2.involve(), x2); // symmetric set
        let single = embed_subset(&g, &[el(&[0, 1])]).unwrap();
        assert_eq!(single.involve(), embed_subset(&g, &[el(&[0, 2])]).unwrap());
    }

    #[test]
    fn norm_of_family_blocks() {
        let g = g33();
        // N(X1)+N(X2) = 4e + G for the (9;3,2;1) family
        let n1 = embed_subset(&g, &block_x1()).unwrap().norm();
        let n2 = embed_subset(&g, &block_x2()).unwrap().norm();
        let sum = n1.add(&n2).unwrap();
        let expected = AlgebraElement::<i64>::identity(&g)
            .scale(&4)
            .add(&embed_group(&g))
            .unwrap();
        assert_eq!(sum, expected);

        let e = AlgebraElement::<i64>::identity(&g);
        assert_eq!(e.norm(), e);
        let gg = embed_group(&g);
        assert_eq!(gg.norm(), gg.scale(&9));
    }

    #[test]
    fn norm_coefficients_count_difference_pairs() {
        // independent route: N(X)_z = #{(a,b) in X x X : a - b = z}
        let g = GroupSpec::new(vec![3, 6]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let block: Vec<Element> = g
                .enumerate()
                .into_iter()
                .filter(|_| rng.gen_bool(0.4))
                .collect();
            let n = embed_subset(&g, &block).unwrap().norm();
            for z in g.enumerate() {
                let count = block
                    .iter()
                    .flat_map(|a| block.iter().map(move |b| (a, b)))
                    .filter(|(a, b)| g.difference(a, b).unwrap() == z)
                    .count() as i64;
                assert_eq!(n.coeff(&z), count);
            }
        }
    }

    #[test]
    fn augmentation_examples() {
        let g = g33();
        assert_eq!(embed_group(&g).augmentation(), 9);
        let f1 = crate::family::associated_function(&g, &block_x1()).unwrap();
        assert_eq!(algebra_of_function(&f1).augmentation(), 9 - 2 * 3);
        assert_eq!(AlgebraElement::<i64>::zero(&g).augmentation(), 0);
    }

    #[test]
    fn augmentation_is_ring_homomorphism() {
        let g = GroupSpec::new(vec![2, 2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let rand_elem = |rng: &mut ChaCha8Rng| {
                AlgebraElement::from_terms(
                    &g,
                    g.enumerate().into_iter().map(|x| (x, rng.gen_range(-3i64..=3))),
                )
                .unwrap()
            };
            let a = rand_elem(&mut rng);
            let b = rand_elem(&mut rng);
            assert_eq!(a.multiply(&b).unwrap().augmentation(), a.augmentation() * b.augmentation());
            assert_eq!(a.add(&b).unwrap().augmentation(), a.augmentation() + b.augmentation());
            // involution is an anti-automorphism; here the algebra is abelian
            assert_eq!(
                a.multiply(&b).unwrap().involve(),
                a.involve().multiply(&b.involve()).unwrap()
            );
            assert_eq!(a.involve().involve(), a);
        }
    }

    #[test]
    fn paf_examples() {
        let g = g33();
        let ones = GFunction::constant(&g, 1i64);
        for x in g.enumerate() {
            assert_eq!(paf(&ones, &x).unwrap(), 9);
        }
        let delta = GFunction::delta(&g, &g.identity()).unwrap();
        for x in g.enumerate() {
            let expect = if x == g.identity() { 1 } else { 0 };
            assert_eq!(paf(&delta, &x).unwrap(), expect);
        }
        // family blocks: paf sums are 18 at e and 2 elsewhere
        let f1 = crate::family::associated_function(&g, &block_x1()).unwrap();
        let f2 = crate::family::associated_function(&g, &block_x2()).unwrap();
        for x in g.enumerate() {
            let s = paf(&f1, &x).unwrap() + paf(&f2, &x).unwrap();
            assert_eq!(s, if x == g.identity() { 18 } else { 2 });
        }
    }

    #[test]
    fn paf_symmetry_for_real_functions() {
        let g = GroupSpec::new(vec![3, 6]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = GFunction::from_values(
            &g,
            (0..18).map(|_| if rng.gen_bool(0.5) { 1i64 } else { -1 }).collect(),
        )
        .unwrap();
        for x in g.enumerate() {
            let inv = g.inverse(&x).unwrap();
            assert_eq!(paf(&f, &x).unwrap(), paf(&f, &inv).unwrap());
        }
        assert_eq!(paf(&f, &g.identity()).unwrap(), f.norm_sq());
    }

    #[test]
    fn norm_of_algebra_element_carries_paf() {
        // N(a_f) = sum_x paf_f(x) x, checked exactly on random sign functions
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for orders in [vec![8], vec![2, 2, 3], vec![4, 6], vec![24]] {
            let g = GroupSpec::new(orders).unwrap();
            for _ in 0..10 {
                let f = GFunction::from_values(
                    &g,
                    (0..g.order()).map(|_| if rng.gen_bool(0.5) { 1i64 } else { -1 }).collect(),
                )
                .unwrap();
                let n = algebra_of_function(&f).norm();
                let p = paf_function(&f);
                for (i, x) in g.enumerate().iter().enumerate() {
                    assert_eq!(n.coeff(x), *p.value_at_index(i));
                }
                assert_eq!(n.involve(), n);
            }
        }
    }

    #[test]
    fn algebra_of_function_examples() {
        let g = g33();
        let delta = GFunction::delta(&g, &g.identity()).unwrap();
        assert_eq!(algebra_of_function(&delta), AlgebraElement::<i64>::identity(&g));
        let ones = GFunction::constant(&g, 1i64);
        assert_eq!(algebra_of_function(&ones), embed_group(&g));
        // a_{f1} for the (9;3,2;1) family, written out in enumeration order
        let f1 = crate::family::associated_function(&g, &block_x1()).unwrap();
        let a = algebra_of_function(&f1);
        let expected: Vec<i64> = vec![-1, 1, 1, 1, -1, 1, -1, 1, 1];
        for (i, x) in g.enumerate().iter().enumerate() {
            assert_eq!(a.coeff(x), expected[i]);
        }
    }
}
