//! Keeps the README's library sketch honest: the snippet shown there must
//! compile and its claims must hold.

use affine_weyl::conjmin::{ConjScope, Schedule};
use affine_weyl::hecke::HeckeContext;
use affine_weyl::{Classifier, RootSystem, TypeLabel};

#[test]
fn the_readme_library_sketch_runs_as_shown() {
    let rs = RootSystem::new(TypeLabel::A2);
    let x = rs.parse_element("t[2,-1]*s1*s2").unwrap();
    assert_eq!(rs.length(&x), rs.length_by_hyperplanes(&x));

    let nu = rs.newton_point(&x);
    assert_eq!(nu.nu.len(), 2);

    let cls = Classifier::new(&rs);
    let (min, path) = cls.reduce_to_min(&x).unwrap();
    assert!(rs.length(&min) <= rs.length(&x));
    assert!(path.steps.len() <= rs.length(&x) as usize);

    let key = cls.class_key(&x, ConjScope::Full).unwrap();
    assert_eq!(key.min_length, rs.length(&min));

    let ctx = HeckeContext::new(&rs, &cls);
    let tbl = ctx.class_polynomials(&x, Schedule::Deterministic).unwrap();
    assert!(!tbl.entries.is_empty());
}
