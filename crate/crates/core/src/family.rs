//! Difference families and their parameter sets.
//!
//! A family is verified by two independent routes which must agree: raw
//! difference counting (the definition) and the group-algebra identity
//! `sum N(X_i) = n e + lambda G` computed in exact integers. Nothing floating
//! point is ever trusted for validity.
//!
//! The `gs_mode` flag relaxes the usual "proper nonempty blocks" requirement
//! so that quadruples with empty blocks (and even the trivial group) can be
//! handled; those arise in the Goethals-Seidel constructions.

use serde::{Deserialize, Serialize};

use crate::algebra::{embed_group, embed_subset, paf_function, AlgebraElement, GFunction};
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};

/// `(v; k1,...,kt; lambda)` with the derived parameter `n = sum k_i - lambda`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub v: usize,
    pub k: Vec<usize>,
    pub lambda: i64,
}

impl ParameterSet {
    pub fn new(v: usize, k: Vec<usize>, lambda: i64) -> Self {
        ParameterSet { v, k, lambda }
    }

    /// Parses the literal form `v;k1,k2,...;lambda`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(';').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected v;k1,..,kt;lambda, got {text:?}")));
        }
        let v = parts[0].parse::<usize>().map_err(|_| Error::Parse(format!("bad v in {text:?}")))?;
        let k = parts[1]
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad block size in {text:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let lambda = parts[2].parse::<i64>().map_err(|_| Error::Parse(format!("bad lambda in {text:?}")))?;
        if k.is_empty() {
            return Err(Error::Parse("at least one block size required".into()));
        }
        Ok(ParameterSet { v, k, lambda })
    }

    pub fn t(&self) -> usize {
        self.k.len()
    }

    pub fn k_sum(&self) -> i64 {
        self.k.iter().map(|&k| k as i64).sum()
    }

    /// `n = sum k_i - lambda`.
    pub fn n(&self) -> i64 {
        self.k_sum() - self.lambda
    }

    /// Checks the counting identity `sum k_i (k_i - 1) = lambda (v - 1)` and
    /// the mode-appropriate range constraints. In GS mode empty blocks and
    /// the trivial group are allowed; for `v = 1` the counting identity is
    /// vacuous and `lambda` is pinned by `sum k_i = lambda + v` instead.
    pub fn validate(&self, gs_mode: bool) -> bool {
        if self.k.is_empty() {
            return false;
        }
        if gs_mode {
            if self.k.iter().any(|&k| k > self.v) {
                return false;
            }
            if self.v == 1 {
                return self.lambda == self.k_sum() - 1;
            }
        } else {
            if self.v < 2 {
                return false;
            }
            if self.k.iter().any(|&k| k == 0 || k >= self.v) {
                return false;
            }
        }
        let lhs: i64 = self.k.iter().map(|&k| (k as i64) * (k as i64 - 1)).sum();
        lhs == self.lambda * (self.v as i64 - 1)
    }

    /// PAF constants `(alpha0, alpha) = (t v, t v - 4n)` of the associated
    /// sign functions.
    pub fn paf_constants(&self) -> (i64, i64) {
        let tv = self.t() as i64 * self.v as i64;
        (tv, tv - 4 * self.n())
    }

    /// PSD constants `(beta0, beta) = (alpha0 + (v-1) alpha, 4n)`.
    pub fn psd_constants(&self) -> (i64, i64) {
        let (a0, a) = self.paf_constants();
        (a0 + (self.v as i64 - 1) * a, a0 - a)
    }

    /// The necessary identity `sum (v - 2 k_i)^2 = 4n + v (t v - 4n)`,
    /// checked in exact integers. A cheap pre-search rejection test.
    pub fn sum_of_squares_check(&self) -> bool {
        let v = self.v as i64;
        let lhs: i64 = self.k.iter().map(|&k| (v - 2 * k as i64) * (v - 2 * k as i64)).sum();
        let n = self.n();
        lhs == 4 * n + v * (self.t() as i64 * v - 4 * n)
    }
}

impl std::fmt::Display for ParameterSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ks: Vec<String> = self.k.iter().map(|k| k.to_string()).collect();
        write!(f, "({};{};{})", self.v, ks.join(","), self.lambda)
    }
}

/// A tuple of base blocks in a group, with its declared parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceFamily {
    group: GroupSpec,
    blocks: Vec<Vec<Element>>,
    lambda: i64,
    gs_mode: bool,
}

/// Outcome of the two-route verification.
#[derive(Debug, Clone)]
pub struct FamilyReport {
    pub valid: bool,
    pub params_ok: bool,
    pub counting_ok: bool,
    pub algebra_ok: bool,
    pub lambda: i64,
    pub n: i64,
    /// Difference counts per non-identity element (enumeration order, identity
    /// omitted); populated when counting fails.
    pub counts: Option<Vec<i64>>,
}

impl DifferenceFamily {
    /// Wraps blocks with a declared `lambda`. Blocks are lex-sorted and must
    /// be duplicate-free subsets of the group; in standard mode they must be
    /// proper and nonempty.
    pub fn new(group: &GroupSpec, blocks: Vec<Vec<Element>>, lambda: i64, gs_mode: bool) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidParams("a family needs at least one block".into()));
        }
        let v = group.order();
        let mut sorted = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mut b = block;
            b.sort();
            let len_before = b.len();
            b.dedup();
            if b.len() != len_before {
                return Err(Error::InvalidBlock("duplicate element in block".into()));
            }
            for x in &b {
                if !group.contains(x) {
                    return Err(Error::NotInGroup(x.0.clone()));
                }
            }
            if !gs_mode && (b.is_empty() || b.len() >= v) {
                return Err(Error::InvalidBlock("blocks must be proper and nonempty".into()));
            }
            sorted.push(b);
        }
        Ok(DifferenceFamily { group: group.clone(), blocks: sorted, lambda, gs_mode })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn blocks(&self) -> &[Vec<Element>] {
        &self.blocks
    }

    pub fn lambda(&self) -> i64 {
        self.lambda
    }

    pub fn gs_mode(&self) -> bool {
        self.gs_mode
    }

    pub fn params(&self) -> ParameterSet {
        ParameterSet::new(self.group.order(), self.blocks.iter().map(|b| b.len()).collect(), self.lambda)
    }

    /// The associated sign functions of all blocks.
    pub fn associated_functions(&self) -> Vec<GFunction<i64>> {
        self.blocks
            .iter()
            .map(|b| associated_function(&self.group, b).expect("validated at construction"))
            .collect()
    }

    /// Runs both verification routes and reports agreement.
    ///
    /// Route (a) counts, for every `a != e`, the pairs `(x, ax)` lying in a
    /// common block, and requires all counts to equal `lambda`. Route (b)
    /// checks `sum N(X_i) = n e + lambda G` in the integer group algebra.
    pub fn verify(&self) -> FamilyReport {
        let params = self.params();
        let params_ok = params.validate(self.gs_mode);
        let v = self.group.order();
        let n = params.n();

        // route (a): raw difference counting
        let mut counts = vec![0i64; v];
        for block in &self.blocks {
            let idx: Vec<usize> = block.iter().map(|x| self.group.index_unchecked(x)).collect();
            let mut member = vec![false; v];
            for &i in &idx {
                member[i] = true;
            }
            for &x in &idx {
                for a in 1..v {
                    if member[self.group.compose_idx(a, x)] {
                        counts[a] += 1;
                    }
                }
            }
        }
        let counting_ok = counts[1..].iter().all(|&c| c == self.lambda);

        // route (b): group-algebra identity, exact integers
        let mut sum = AlgebraElement::<i64>::zero(&self.group);
        for block in &self.blocks {
            let nb = embed_subset(&self.group, block).expect("validated").norm();
            sum = sum.add(&nb).expect("same group");
        }
        let expected = AlgebraElement::<i64>::identity(&self.group)
            .scale(&n)
            .add(&embed_group(&self.group).scale(&self.lambda))
            .expect("same group");
        let algebra_ok = sum == expected;

        let valid = params_ok && counting_ok && algebra_ok;
        FamilyReport {
            valid,
            params_ok,
            counting_ok,
            algebra_ok,
            lambda: self.lambda,
            n,
            counts: if counting_ok { None } else { Some(counts[1..].to_vec()) },
        }
    }

    /// Applies block complementation and reordering until
    /// `v/2 >= k_1 >= ... >= k_t >= 1`. Preserves `n`; standard mode only.
    pub fn normalize(&self) -> Result<DifferenceFamily> {
        if self.gs_mode {
            return Err(Error::InvalidParams("normalization applies to standard-mode families".into()));
        }
        let v = self.group.order();
        let all = self.group.enumerate();
        let mut lambda = self.lambda;
        let mut blocks = self.blocks.clone();
        for block in &mut blocks {
            if 2 * block.len() > v {
                let complement: Vec<Element> = all.iter().filter(|x| block.binary_search(x).is_err()).cloned().collect();
                lambda += v as i64 - 2 * block.len() as i64;
                *block = complement;
            }
        }
        blocks.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        DifferenceFamily::new(&self.group, blocks, lambda, false)
    }

    /// Canonical form used to deduplicate families found by searches.
    pub fn canonical_key(&self) -> Vec<Vec<Vec<u32>>> {
        self.blocks.iter().map(|b| b.iter().map(|e| e.0.clone()).collect()).collect()
    }
}

/// The sign function of a block: `-1` on the block, `+1` elsewhere.
pub fn associated_function(group: &GroupSpec, block: &[Element]) -> Result<GFunction<i64>> {
    let mut values = vec![1i64; group.order()];
    for x in block {
        values[group.index_of(x)?] = -1;
    }
    GFunction::from_values(group, values)
}

/// Recovers a difference family from complementary sign functions: the blocks
/// are the `-1` sets and `lambda = sum k_i - (t v - alpha)/4`.
pub fn family_from_functions(fs: &[GFunction<i64>]) -> Result<DifferenceFamily> {
    if fs.is_empty() {
        return Err(Error::InvalidParams("need at least one function".into()));
    }
    let group = fs[0].group().clone();
    let v = group.order();
    let t = fs.len() as i64;
    for f in fs {
        if f.group() != &group {
            return Err(Error::GroupMismatch);
        }
        if !f.is_pm_one() {
            return Err(Error::InvalidParams("functions must be plus/minus one valued".into()));
        }
        if f.is_constant() {
            return Err(Error::InvalidParams("functions must be non-constant".into()));
        }
    }
    // complementarity: sum of PAFs constant off the identity (exact integers)
    let mut total = vec![0i64; v];
    for f in fs {
        for (i, p) in paf_function(f).values().iter().enumerate() {
            total[i] += p;
        }
    }
    let alpha = if v > 1 { total[1] } else { total[0] };
    if total[1..].iter().any(|&c| c != alpha) {
        return Err(Error::NotComplementary(format!("PAF sums off identity: {:?}", &total[1..])));
    }
    let tv = t * v as i64;
    debug_assert_eq!(total[0], tv);
    if (tv - alpha) % 4 != 0 {
        return Err(Error::NotComplementary(format!("t v - alpha = {} is not divisible by 4", tv - alpha)));
    }
    let elems = group.enumerate();
    let blocks: Vec<Vec<Element>> = fs
        .iter()
        .map(|f| elems.iter().enumerate().filter(|&(i, _)| *f.value_at_index(i) == -1).map(|(_, x)| x.clone()).collect())
        .collect();
    let k_sum: i64 = blocks.iter().map(|b| b.len() as i64).sum();
    let lambda = k_sum - (tv - alpha) / 4;
    let fam = DifferenceFamily::new(&group, blocks, lambda, false)?;
    let report = fam.verify();
    if !report.valid {
        return Err(Error::NotComplementary("recovered blocks fail verification".into()));
    }
    Ok(fam)
}

/// `X` is symmetric when `X = X^{-1}`.
pub fn is_symmetric_block(group: &GroupSpec, block: &[Element]) -> Result<bool> {
    let mut sorted = block.to_vec();
    sorted.sort();
    for x in block {
        if !group.contains(x) {
            return Err(Error::NotInGroup(x.0.clone()));
        }
        if sorted.binary_search(&group.inverse_unchecked(x)).is_err() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `X` is skew when `G` is the disjoint union of `X`, `X^{-1}` and `{e}`.
pub fn is_skew_block(group: &GroupSpec, block: &[Element]) -> Result<bool> {
    let mut sorted = block.to_vec();
    sorted.sort();
    let e = group.identity();
    if sorted.binary_search(&e).is_ok() {
        return Ok(false);
    }
    if 2 * sorted.len() + 1 != group.order() {
        return Ok(false);
    }
    for x in &sorted {
        if !group.contains(x) {
            return Err(Error::NotInGroup(x.0.clone()));
        }
        if sorted.binary_search(&group.inverse_unchecked(x)).is_ok() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// JSON wire format for a family. Parameters are recomputed on load; the
/// stored `lambda` is informational only.
#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyJson {
    pub group: Vec<u32>,
    pub blocks: Vec<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<i64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub gs: bool,
}

impl DifferenceFamily {
    pub fn to_json(&self) -> String {
        let doc = FamilyJson {
            group: self.group.orders().to_vec(),
            blocks: self.canonical_key(),
            lambda: Some(self.lambda),
            gs: self.gs_mode,
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    /// Parses the JSON wire format. `lambda` is recomputed from the blocks by
    /// difference counting (or pinned by `sum k_i - v` for the trivial group),
    /// never trusted from the file.
    pub fn from_json(text: &str) -> Result<DifferenceFamily> {
        let doc: FamilyJson = serde_json::from_str(text)?;
        let group = GroupSpec::new(doc.group)?;
        let blocks: Vec<Vec<Element>> = doc
            .blocks
            .into_iter()
            .map(|b| b.into_iter().map(Element).collect())
            .collect();
        let v = group.order();
        let lambda = if v > 1 {
            // count differences landing on the first non-identity element
            let a = 1usize;
            let mut lam = 0i64;
            for block in &blocks {
                let idx: std::collections::BTreeSet<usize> =
                    block.iter().map(|x| group.index_of(x)).collect::<Result<_>>()?;
                lam += idx.iter().filter(|&&x| idx.contains(&group.compose_idx(a, x))).count() as i64;
            }
            lam
        } else {
            blocks.iter().map(|b| b.len() as i64).sum::<i64>() - 1
        };
        DifferenceFamily::new(&group, blocks, lambda, doc.gs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(r: &[u32]) -> Element {
        Element(r.to_vec())
    }

    fn g33() -> GroupSpec {
        GroupSpec::new(vec![3, 3]).unwrap()
    }

    fn family_931() -> DifferenceFamily {
        DifferenceFamily::new(
            &g33(),
            vec![
                vec![el(&[0, 0]), el(&[1, 1]), el(&[2, 1])],
                vec![el(&[0, 1]), el(&[0, 2])],
            ],
            1,
            false,
        )
        .unwrap()
    }

    #[test]
    fn validate_parameter_sets() {
        let p = ParameterSet::new(9, vec![3, 2], 1);
        assert!(p.validate(false));
        assert_eq!(p.n(), 4);

        let p = ParameterSet::new(18, vec![9, 6], 6);
        assert!(p.validate(false));
        assert_eq!(p.n(), 9);

        let p = ParameterSet::new(25, vec![12, 12], 11);
        assert!(p.validate(false));
        assert_eq!(p.n(), 13);

        // counting identity violated
        assert!(!ParameterSet::new(9, vec![3, 3], 1).validate(false));
        // ranges
        assert!(!ParameterSet::new(9, vec![9, 2], 1).validate(false));
        assert!(!ParameterSet::new(1, vec![1], 0).validate(false));
        // GS mode: empty blocks allowed, v = 1 pins lambda
        assert!(ParameterSet::new(1, vec![0, 0, 0, 0], -1).validate(true));
        assert!(!ParameterSet::new(1, vec![0, 0, 0, 0], 0).validate(true));
        assert!(ParameterSet::new(2, vec![0, 0, 1, 1], 0).validate(true));
        assert!(ParameterSet::new(4, vec![0, 2, 2, 2], 2).validate(true));
    }

    #[test]
    fn parse_parameter_literal() {
        let p = ParameterSet::parse("18;9,6;6").unwrap();
        assert_eq!(p, ParameterSet::new(18, vec![9, 6], 6));
        assert!(ParameterSet::parse("18;;6").is_err());
        assert!(ParameterSet::parse("18;9,6").is_err());
    }

    #[test]
    fn verify_reference_family() {
        let report = family_931().verify();
        assert!(report.valid && report.counting_ok && report.algebra_ok);
        assert_eq!(report.lambda, 1);
        assert_eq!(report.n, 4);
    }

    #[test]
    fn verify_rejects_perturbed_family() {
        let fam = DifferenceFamily::new(
            &g33(),
            vec![
                vec![el(&[0, 0]), el(&[1, 1]), el(&[2, 1])],
                vec![el(&[0, 1]), el(&[1, 2])],
            ],
            1,
            false,
        )
        .unwrap();
        let report = fam.verify();
        assert!(!report.valid);
        assert!(!report.counting_ok);
        assert!(!report.algebra_ok); // both routes agree that it is invalid
        let counts = report.counts.unwrap();
        assert!(counts.iter().any(|&c| c != counts[0]));
    }

    #[test]
    fn verify_rejects_bad_blocks() {
        let g = g33();
        assert!(DifferenceFamily::new(&g, vec![vec![el(&[0, 0]), el(&[0, 0])]], 0, false).is_err());
        assert!(DifferenceFamily::new(&g, vec![vec![el(&[5, 5])]], 0, false).is_err());
        assert!(DifferenceFamily::new(&g, vec![vec![]], 0, false).is_err());
        assert!(DifferenceFamily::new(&g, vec![vec![]], 0, true).is_ok());
    }

    #[test]
    fn normalize_complements_oversized_blocks() {
        // complement both blocks of the reference family: k = (6,7), lambda = 9
        let g = g33();
        let all = g.enumerate();
        let base = family_931();
        let complemented: Vec<Vec<Element>> = base
            .blocks()
            .iter()
            .map(|b| all.iter().filter(|x| !b.contains(x)).cloned().collect())
            .collect();
        let fam = DifferenceFamily::new(&g, complemented, 9, false).unwrap();
        assert!(fam.verify().valid);
        let norm = fam.normalize().unwrap();
        assert_eq!(norm.params().k, vec![3, 2]);
        assert_eq!(norm.lambda(), 1);
        assert!(norm.verify().valid);
        assert_eq!(norm.params().n(), fam.params().n());
        assert_eq!(norm, family_931());

        // already-normalized family is a fixed point
        assert_eq!(base.normalize().unwrap(), base);

        // out-of-order block sizes get sorted
        let swapped = DifferenceFamily::new(
            &g,
            vec![
                vec![el(&[0, 1]), el(&[0, 2])],
                vec![el(&[0, 0]), el(&[1, 1]), el(&[2, 1])],
            ],
            1,
            false,
        )
        .unwrap();
        assert_eq!(swapped.normalize().unwrap().params().k, vec![3, 2]);
    }

    #[test]
    fn associated_function_values() {
        let g = g33();
        let f = associated_function(&g, &[]).unwrap();
        assert!(f.values().iter().all(|&c| c == 1));

        let f1 = associated_function(&g, &[el(&[0, 0]), el(&[1, 1]), el(&[2, 1])]).unwrap();
        assert_eq!(f1.values(), &[-1, 1, 1, 1, -1, 1, -1, 1, 1]);

        let f2 = associated_function(&g, &[el(&[0, 1]), el(&[0, 2])]).unwrap();
        assert_eq!(f2.values(), &[1, -1, -1, 1, 1, 1, 1, 1, 1]);

        assert_eq!(f1.values().iter().sum::<i64>(), 9 - 2 * 3);
    }

    #[test]
    fn constants_for_known_parameter_sets() {
        let p = ParameterSet::new(9, vec![3, 2], 1);
        assert_eq!(p.paf_constants(), (18, 2));
        assert_eq!(p.psd_constants(), (34, 16));

        let p = ParameterSet::new(18, vec![9, 6], 6);
        assert_eq!(p.paf_constants(), (36, 0));
        assert_eq!(p.psd_constants(), (36, 36));

        let p = ParameterSet::new(25, vec![12, 12], 11);
        assert_eq!(p.paf_constants(), (50, -2));
        assert_eq!(p.psd_constants(), (2, 52));
    }

    #[test]
    fn family_function_round_trip() {
        let fam = family_931();
        let fs = fam.associated_functions();
        let back = family_from_functions(&fs).unwrap();
        assert_eq!(back, fam);
    }

    #[test]
    fn family_from_functions_rejects_non_complementary() {
        let g = g33();
        let f1 = associated_function(&g, &[el(&[0, 0]), el(&[0, 1]), el(&[1, 1])]).unwrap();
        let f2 = associated_function(&g, &[el(&[0, 1]), el(&[2, 2])]).unwrap();
        match family_from_functions(&[f1, f2]) {
            Err(Error::NotComplementary(_)) => {}
            other => panic!("expected rejection, got {other:?}"),
        }
        // constant functions are rejected outright
        let c = GFunction::constant(&g, 1i64);
        assert!(family_from_functions(&[c]).is_err());
    }

    #[test]
    fn block_symmetry_predicates() {
        let g = g33();
        assert!(is_symmetric_block(&g, &[el(&[0, 1]), el(&[0, 2])]).unwrap());
        assert!(!is_symmetric_block(&g, &[el(&[0, 1])]).unwrap());
        assert!(is_symmetric_block(&g, &[g.identity()]).unwrap());
        assert!(!is_skew_block(&g, &[g.identity()]).unwrap());

        // skew block in Z9: {1,2,4} with inverses {8,7,5}
        let g9 = GroupSpec::new(vec![9]).unwrap();
        assert!(is_skew_block(&g9, &[el(&[1]), el(&[2]), el(&[4])]).unwrap());
        assert!(!is_skew_block(&g9, &[el(&[1]), el(&[2]), el(&[7])]).unwrap());
    }

    #[test]
    fn sum_of_squares_check_examples() {
        assert!(ParameterSet::new(9, vec![3, 2], 1).sum_of_squares_check());
        assert!(ParameterSet::new(18, vec![9, 6], 6).sum_of_squares_check());
        assert!(!ParameterSet::new(9, vec![3, 3], 1).sum_of_squares_check());
    }

    #[test]
    fn json_round_trip_recomputes_lambda() {
        let fam = family_931();
        let text = fam.to_json();
        let back = DifferenceFamily::from_json(&text).unwrap();
        assert_eq!(back, fam);

        // a wrong stored lambda is ignored
        let tampered = text.replace("\"lambda\":1", "\"lambda\":7");
        let back = DifferenceFamily::from_json(&tampered).unwrap();
        assert_eq!(back.lambda(), 1);
        assert!(back.verify().valid);
    }
}
