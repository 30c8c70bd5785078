//! Reference families shipped with the crate as data files.
//!
//! These are the known examples every construction and verifier is exercised
//! against: a D-optimal pair on `Z3xZ3`, a periodic Golay pair on `Z3xZ6`,
//! two Legendre pairs on `Z5xZ5` (one with a symmetric first block, one with
//! a skew one), and the Goethals-Seidel quadruples with trivial blocks for
//! `v = 1..4`.

use crate::family::DifferenceFamily;

/// Embedded fixture files, `(name, json)`.
pub const FILES: [(&str, &str); 9] = [
    ("do_z3z3", include_str!("../fixtures/do_z3z3.json")),
    ("golay_z3z6", include_str!("../fixtures/golay_z3z6.json")),
    ("legendre_z5z5_symmetric", include_str!("../fixtures/legendre_z5z5_symmetric.json")),
    ("legendre_z5z5_skew", include_str!("../fixtures/legendre_z5z5_skew.json")),
    ("gs_v1", include_str!("../fixtures/gs_v1.json")),
    ("gs_z2", include_str!("../fixtures/gs_z2.json")),
    ("gs_z3", include_str!("../fixtures/gs_z3.json")),
    ("gs_z4", include_str!("../fixtures/gs_z4.json")),
    ("gs_klein", include_str!("../fixtures/gs_klein.json")),
];

fn load(name: &str) -> DifferenceFamily {
    let (_, json) = FILES.iter().find(|(n, _)| *n == name).expect("known fixture");
    DifferenceFamily::from_json(json).expect("fixture parses")
}

/// The `(9;3,2;1)` D-optimal difference family in `Z3xZ3`.
pub fn do_z3z3() -> DifferenceFamily {
    load("do_z3z3")
}

/// The `(18;9,6;6)` periodic-Golay-type family in `Z3xZ6`.
pub fn golay_z3z6() -> DifferenceFamily {
    load("golay_z3z6")
}

/// Legendre pair `(25;12,12;11)` in `Z5xZ5` with a symmetric first block.
pub fn legendre_z5z5_symmetric() -> DifferenceFamily {
    load("legendre_z5z5_symmetric")
}

/// Legendre pair `(25;12,12;11)` in `Z5xZ5` with a skew first block.
pub fn legendre_z5z5_skew() -> DifferenceFamily {
    load("legendre_z5z5_skew")
}

/// Goethals-Seidel quadruple over the trivial group (all blocks empty).
pub fn gs_v1() -> DifferenceFamily {
    load("gs_v1")
}

/// Goethals-Seidel quadruple over `Z2`.
pub fn gs_z2() -> DifferenceFamily {
    load("gs_z2")
}

/// Goethals-Seidel quadruple over `Z3`.
pub fn gs_z3() -> DifferenceFamily {
    load("gs_z3")
}

/// Goethals-Seidel quadruple over `Z4`.
pub fn gs_z4() -> DifferenceFamily {
    load("gs_z4")
}

/// Goethals-Seidel quadruple over the Klein four-group.
pub fn gs_klein() -> DifferenceFamily {
    load("gs_klein")
}

/// All fixtures with their names.
pub fn all() -> Vec<(&'static str, DifferenceFamily)> {
    FILES.iter().map(|(name, _)| (*name, load(name))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{is_skew_block, is_symmetric_block};

    #[test]
    fn every_fixture_verifies_by_both_routes() {
        for (name, fam) in all() {
            let report = fam.verify();
            assert!(report.valid, "{name}: {report:?}");
        }
    }

    #[test]
    fn fixture_parameters() {
        assert_eq!(do_z3z3().params().k, vec![3, 2]);
        assert_eq!(do_z3z3().lambda(), 1);
        assert_eq!(golay_z3z6().params().n(), 9);
        assert_eq!(legendre_z5z5_symmetric().params().k, vec![12, 12]);
        assert_eq!(legendre_z5z5_skew().lambda(), 11);
        assert_eq!(gs_v1().lambda(), -1);
        assert_eq!(gs_z2().params().k, vec![0, 0, 1, 1]);
        assert_eq!(gs_z3().params().k, vec![0, 1, 1, 1]);
        assert_eq!(gs_z4().params().n(), 4);
        assert_eq!(gs_klein().params().k, vec![0, 2, 2, 2]);
    }

    #[test]
    fn legendre_block_shapes() {
        let sym = legendre_z5z5_symmetric();
        assert!(is_symmetric_block(sym.group(), &sym.blocks()[0]).unwrap());
        let skew = legendre_z5z5_skew();
        assert!(is_skew_block(skew.group(), &skew.blocks()[0]).unwrap());
        assert!(!is_symmetric_block(skew.group(), &skew.blocks()[0]).unwrap());
    }

    #[test]
    fn golay_second_block_is_symmetric() {
        let fam = golay_z3z6();
        assert!(is_symmetric_block(fam.group(), &fam.blocks()[1]).unwrap());
    }
}
