//! Finite abelian groups presented as products of cyclic groups.
//!
//! A group is a list of cyclic orders `[m1, ..., mr]`; an element is a vector
//! of residues, one per factor. The group operation is coordinatewise addition
//! modulo the factor orders. All enumeration is in lexicographic order of the
//! residue vectors, and that order is the canonical row/column labelling used
//! by every matrix and spectrum downstream.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite abelian group `Z_{m1} x ... x Z_{mr}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupSpec {
    orders: Vec<u32>,
}

/// An element of a [`GroupSpec`], as a residue vector.
///
/// The derived `Ord` is lexicographic on the residues, which matches the
/// enumeration order of the parent group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub Vec<u32>);

impl Element {
    pub fn residues(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl GroupSpec {
    /// Builds a group from a list of cyclic orders. Every order must be >= 1;
    /// the trivial group (`v = 1`) is allowed.
    pub fn new(orders: Vec<u32>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidOrder(0));
        }
        for &m in &orders {
            if m == 0 {
                return Err(Error::InvalidOrder(m as i64));
            }
        }
        Ok(GroupSpec { orders })
    }

    /// Parses a group literal: either `Z3xZ6` or a bracketed list `[3,6]`.
    pub fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        let orders: Vec<u32> = if s.starts_with('[') && s.ends_with(']') {
            s[1..s.len() - 1]
                .split(',')
                .map(|p| p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad order in {text:?}"))))
                .collect::<Result<_>>()?
        } else {
            s.split(['x', 'X'])
                .map(|p| {
                    let p = p.trim();
                    let p = p.strip_prefix(['z', 'Z']).unwrap_or(p);
                    p.parse::<u32>().map_err(|_| Error::Parse(format!("bad group literal {text:?}")))
                })
                .collect::<Result<_>>()?
        };
        GroupSpec::new(orders)
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Group order `v` (product of the factor orders).
    pub fn order(&self) -> usize {
        self.orders.iter().map(|&m| m as usize).product()
    }

    pub fn identity(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.0.len() == self.rank() && x.0.iter().zip(&self.orders).all(|(&r, &m)| r < m)
    }

    fn check(&self, x: &Element) -> Result<()> {
        if x.0.len() != self.rank() {
            return Err(Error::ShapeMismatch { expected: self.rank(), got: x.0.len() });
        }
        if !self.contains(x) {
            return Err(Error::NotInGroup(x.0.clone()));
        }
        Ok(())
    }

    /// Coordinatewise sum modulo the factor orders.
    pub fn compose(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.compose_unchecked(x, y))
    }

    pub(crate) fn compose_unchecked(&self, x: &Element, y: &Element) -> Element {
        Element(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.orders)
                .map(|((&a, &b), &m)| (a + b) % m)
                .collect(),
        )
    }

    /// Coordinatewise negation modulo the factor orders.
    pub fn inverse(&self, x: &Element) -> Result<Element> {
        self.check(x)?;
        Ok(self.inverse_unchecked(x))
    }

    pub(crate) fn inverse_unchecked(&self, x: &Element) -> Element {
        Element(x.0.iter().zip(&self.orders).map(|(&a, &m)| (m - a) % m).collect())
    }

    /// `x - y` as a single call; convenient for difference counting.
    pub fn difference(&self, x: &Element, y: &Element) -> Result<Element> {
        let ny = self.inverse(y)?;
        self.compose(x, &ny)
    }

    /// All `v` elements in lexicographic order of their residue vectors.
    pub fn enumerate(&self) -> Vec<Element> {
        (0..self.order()).map(|i| self.element_at(i)).collect()
    }

    /// The element at position `idx` in lexicographic order.
    pub fn element_at(&self, idx: usize) -> Element {
        debug_assert!(idx < self.order());
        let mut res = vec![0u32; self.rank()];
        let mut rem = idx;
        for k in (0..self.rank()).rev() {
            let m = self.orders[k] as usize;
            res[k] = (rem % m) as u32;
            rem /= m;
        }
        Element(res)
    }

    /// Lexicographic position of `x` in the enumeration.
    pub fn index_of(&self, x: &Element) -> Result<usize> {
        self.check(x)?;
        Ok(self.index_unchecked(x))
    }

    pub(crate) fn index_unchecked(&self, x: &Element) -> usize {
        let mut idx = 0usize;
        for (k, &r) in x.0.iter().enumerate() {
            idx = idx * self.orders[k] as usize + r as usize;
        }
        idx
    }

    /// Index-level composition: `element_at(i) + element_at(j)`.
    pub(crate) fn compose_idx(&self, i: usize, j: usize) -> usize {
        let x = self.element_at(i);
        let y = self.element_at(j);
        self.index_unchecked(&self.compose_unchecked(&x, &y))
    }

    pub(crate) fn inverse_idx(&self, i: usize) -> usize {
        let x = self.element_at(i);
        self.index_unchecked(&self.inverse_unchecked(&x))
    }

    /// Multiplicative order of `x` in the group.
    pub fn element_order(&self, x: &Element) -> Result<usize> {
        self.check(x)?;
        let e = self.identity();
        let mut acc = x.clone();
        let mut ord = 1usize;
        while acc != e {
            acc = self.compose_unchecked(&acc, x);
            ord += 1;
        }
        Ok(ord)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.orders.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "Z{m}")?;
        }
        Ok(())
    }
}

/// A subgroup, stored as its full (lex-sorted) element list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: GroupSpec,
    elements: Vec<Element>,
}

impl Subgroup {
    /// Smallest subgroup containing `gens`, computed by closure.
    pub fn generate(parent: &GroupSpec, gens: &[Element]) -> Result<Self> {
        for g in gens {
            parent.check(g)?;
        }
        let v = parent.order();
        let mut member = vec![false; v];
        member[0] = true; // identity has index 0
        let mut frontier: Vec<usize> = vec![0];
        let gen_idx: Vec<usize> = gens.iter().map(|g| parent.index_unchecked(g)).collect();
        while let Some(i) = frontier.pop() {
            for &g in &gen_idx {
                let j = parent.compose_idx(i, g);
                if !member[j] {
                    member[j] = true;
                    frontier.push(j);
                }
            }
        }
        let elements = (0..v).filter(|&i| member[i]).map(|i| parent.element_at(i)).collect();
        Ok(Subgroup { parent: parent.clone(), elements })
    }

    /// Wraps an explicit element list, validating the subgroup axioms.
    pub fn from_elements(parent: &GroupSpec, elements: Vec<Element>) -> Result<Self> {
        let mut elems = elements;
        elems.sort();
        elems.dedup();
        let sg = Subgroup { parent: parent.clone(), elements: elems };
        sg.validate()?;
        Ok(sg)
    }

    pub fn validate(&self) -> Result<()> {
        let e = self.parent.identity();
        if !self.elements.contains(&e) {
            return Err(Error::InvalidSubgroup("missing identity".into()));
        }
        for x in &self.elements {
            self.parent.check(x)?;
            let inv = self.parent.inverse_unchecked(x);
            if !self.elements.contains(&inv) {
                return Err(Error::InvalidSubgroup(format!("not closed under inverse at {x}")));
            }
            for y in &self.elements {
                let z = self.parent.compose_unchecked(x, y);
                if self.elements.binary_search(&z).is_err() {
                    return Err(Error::InvalidSubgroup(format!("not closed at {x}+{y}")));
                }
            }
        }
        if self.parent.order() % self.elements.len() != 0 {
            return Err(Error::InvalidSubgroup("order does not divide group order".into()));
        }
        Ok(())
    }

    pub fn parent(&self) -> &GroupSpec {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

/// A quotient `G/M` realized concretely: a cyclic-factor presentation of the
/// quotient group, the projection map, and one representative per coset.
#[derive(Debug, Clone)]
pub struct QuotientPresentation {
    parent: GroupSpec,
    subgroup: Subgroup,
    quotient: GroupSpec,
    /// parent element index -> quotient element index
    proj: Vec<usize>,
    /// representative of the fiber over each quotient element, in quotient
    /// enumeration order
    reps: Vec<Element>,
}

impl QuotientPresentation {
    pub fn parent(&self) -> &GroupSpec {
        &self.parent
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn quotient(&self) -> &GroupSpec {
        &self.quotient
    }

    /// The canonical projection `G -> G/M`.
    pub fn project(&self, x: &Element) -> Result<Element> {
        let i = self.parent.index_of(x)?;
        Ok(self.quotient.element_at(self.proj[i]))
    }

    pub(crate) fn project_idx(&self, parent_idx: usize) -> usize {
        self.proj[parent_idx]
    }

    pub fn reps(&self) -> &[Element] {
        &self.reps
    }

    /// All parent elements mapping onto the given quotient element.
    pub fn fiber(&self, h: &Element) -> Result<Vec<Element>> {
        let t = self.quotient.index_of(h)?;
        Ok((0..self.parent.order())
            .filter(|&i| self.proj[i] == t)
            .map(|i| self.parent.element_at(i))
            .collect())
    }
}

/// Computes `G/M` with an explicit cyclic decomposition.
///
/// The decomposition peels off a cyclic factor of maximal order from the
/// remaining quotient until nothing is left, which yields invariant-factor
/// style orders. Each peel is validated by a direct-sum size check, and the
/// final coordinate map is checked to be a bijection.
pub fn quotient(g: &GroupSpec, m: &Subgroup) -> Result<QuotientPresentation> {
    if m.parent() != g {
        return Err(Error::GroupMismatch);
    }
    m.validate()?;
    let v = g.order();
    let msize = m.order();
    let d = v / msize;

    // Label cosets by sweeping elements in lex order; the first element seen
    // in a coset is its minimal representative.
    let mut coset_of = vec![usize::MAX; v];
    let mut coset_reps: Vec<usize> = Vec::with_capacity(d);
    for i in 0..v {
        if coset_of[i] != usize::MAX {
            continue;
        }
        let cid = coset_reps.len();
        coset_reps.push(i);
        for z in m.elements() {
            let zi = g.index_unchecked(z);
            coset_of[g.compose_idx(i, zi)] = cid;
        }
    }
    debug_assert_eq!(coset_reps.len(), d);

    // Multiplication on coset ids.
    let mul = |a: usize, b: usize| -> usize { coset_of[g.compose_idx(coset_reps[a], coset_reps[b])] };
    let pow = |a: usize, mut k: usize| -> usize {
        let mut acc = 0usize; // identity coset: e is element 0, first seen
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            k >>= 1;
        }
        acc
    };
    let ord_in_quotient = |a: usize| -> usize {
        let mut o = 1;
        let mut acc = a;
        while acc != 0 {
            acc = mul(acc, a);
            o += 1;
        }
        o
    };

    // Greedy peeling: pick a generator of maximal order in Q/H whose order in
    // Q matches and whose cyclic span meets H trivially.
    let mut in_h = vec![false; d];
    in_h[0] = true;
    let mut h_size = 1usize;
    let mut gens: Vec<(usize, usize)> = Vec::new(); // (coset id, order)
    while h_size < d {
        // order of the coset aH in Q/H = min k with a^k in H
        let coset_order = |a: usize| -> usize {
            let mut o = 1;
            let mut acc = a;
            while !in_h[acc] {
                acc = mul(acc, a);
                o += 1;
            }
            o
        };
        let max_ord = (0..d).filter(|&a| !in_h[a]).map(coset_order).max().unwrap();
        let mut picked = None;
        'cand: for a in 0..d {
            if in_h[a] || coset_order(a) != max_ord || ord_in_quotient(a) != max_ord {
                continue;
            }
            // span of a must meet H only in the identity
            let mut acc = a;
            for _ in 1..max_ord {
                if in_h[acc] {
                    continue 'cand;
                }
                acc = mul(acc, a);
            }
            picked = Some(a);
            break;
        }
        let a = picked.ok_or_else(|| Error::InvalidSubgroup("quotient decomposition failed".into()))?;
        // extend H by the span of a
        let old: Vec<usize> = (0..d).filter(|&c| in_h[c]).collect();
        for k in 1..max_ord {
            let ak = pow(a, k);
            for &h in &old {
                let c = mul(h, ak);
                debug_assert!(!in_h[c]);
                in_h[c] = true;
            }
        }
        h_size *= max_ord;
        gens.push((a, max_ord));
    }

    let orders: Vec<u32> = if gens.is_empty() { vec![1] } else { gens.iter().map(|&(_, o)| o as u32).collect() };
    let quotient_spec = GroupSpec::new(orders)?;
    debug_assert_eq!(quotient_spec.order(), d);

    // Coordinate map: coset id -> quotient element index via the generator basis.
    let mut coord_of = vec![usize::MAX; d];
    for t in 0..d {
        let coords = quotient_spec.element_at(t);
        let mut cid = 0usize;
        for (k, &(gen, _)) in gens.iter().enumerate() {
            cid = mul(cid, pow(gen, coords.0[k] as usize));
        }
        if coord_of[cid] != usize::MAX {
            return Err(Error::InvalidSubgroup("quotient coordinates not bijective".into()));
        }
        coord_of[cid] = t;
    }

    let proj: Vec<usize> = (0..v).map(|i| coord_of[coset_of[i]]).collect();
    let mut reps = vec![g.identity(); d];
    for (cid, &rep_idx) in coset_reps.iter().enumerate() {
        reps[coord_of[cid]] = g.element_at(rep_idx);
    }

    Ok(QuotientPresentation { parent: g.clone(), subgroup: m.clone(), quotient: quotient_spec, proj, reps })
}
