mod common;

use std::collections::BTreeMap;

use common::{hda, labeled, model, path, RUN_CHAIN};
use hda::bisim::{bisimilar, check_relation, hp_oracle, labeled_bisimilar, open_map_check, Verdict};
use hda::cubes::{product, torus, EventSet, Morphism, Side};
use hda::paths::{
    adjacency, are_homotopic, enumerate_pointed_paths, fan_shape, homotopy_class, is_cube_path, is_fan_shaped,
    is_path_object, t_measure, HomotopyVerdict, DEFAULT_CAP,
};
use hda::unfold::{is_tree, torus_unfolding, unfold};

#[test]
fn every_fixture_loads() {
    for name in [
        "square_filled",
        "square_hollow",
        "square",
        "run_abcd",
        "cycle2",
        "cycle3",
        "par_ab",
        "par_ac",
    ] {
        let m = model(name);
        assert!(m.hda.space().validate().is_ok(), "{name}");
    }
}

#[test]
fn product_of_the_two_squares() {
    let (l, r) = (hda("square_filled"), hda("square_hollow"));
    let p = product(l.space(), r.space());
    assert_eq!(p.space.count_by_dim(), [16, 16]);
    assert!(p.space.validate().is_ok());
}

#[test]
fn reachability() {
    assert_eq!(hda("run_abcd").reachable().count(), 13);
    let right = hda("square_hollow");
    assert_eq!(right.reachable().count(), 8);
}

#[test]
fn hollow_square_includes_into_filled() {
    let (l, r) = (hda("square_filled"), hda("square_hollow"));
    let names: BTreeMap<String, String> = r.space().cubes().map(|c| (r.space().name(c).into(), r.space().name(c).into())).collect();
    let f = Morphism::from_names(&r, &l, &names, true).unwrap();
    assert!(f.is_valid());
    let report = open_map_check(&f);
    assert!(!report.open);
    let cx = report.counterexample.unwrap();
    assert_eq!(cx.y2, "ab");
    assert!(cx.x1 == "a" || cx.x1 == "b");
    assert!(open_map_check(&Morphism::identity(&l)).open);
}

#[test]
fn cube_paths_on_the_run() {
    let h = hda("run_abcd");
    let s = h.space();
    assert!(is_cube_path(s, &["i", "a", "x", "b", "bc", "c", "z", "d"]).unwrap().valid);
    assert!(is_cube_path(s, &["i"]).unwrap().valid);
    assert!(!is_cube_path(s, &["d", "z", "c", "bc", "b", "x", "a", "i"]).unwrap().valid);

    let full = path(&h, RUN_CHAIN[0]);
    let iax = path(&h, "i,a,x");
    assert_eq!(path(&h, "i,a").concat(&path(&h, "x"), s).unwrap(), iax);
    assert_eq!(iax.concat(&path(&h, "b,bc"), s).unwrap().render(s), "(i,a,x,b,bc)");
    assert!(iax.is_prefix_of(&full));
    assert!(full.is_prefix_of(&full));
    assert!(!path(&h, "i").concat(&path(&h, "i"), s).is_ok());
}

#[test]
fn chain_adjacencies() {
    let h = hda("run_abcd");
    let s = h.space();
    let p: Vec<_> = RUN_CHAIN.iter().map(|l| path(&h, l)).collect();
    let steps: Vec<_> = p.windows(2).map(|w| adjacency(s, &w[0], &w[1]).unwrap()).collect();
    assert_eq!((steps[0].clause, steps[0].position), (1, 4));
    assert_eq!((steps[1].clause, steps[1].position), (2, 6));
    assert_eq!((steps[2].clause, steps[2].position), (3, 5));
    assert!(adjacency(s, &p[0], &p[0]).is_none());
    assert!(adjacency(s, &p[0], &p[3]).is_none());
    assert_eq!(are_homotopic(s, &p[0], &p[3], DEFAULT_CAP), HomotopyVerdict::Homotopic);

    let class = homotopy_class(s, &p[0], DEFAULT_CAP).unwrap();
    for q in &p {
        assert!(class.contains(q));
    }
}

#[test]
fn fan_shaping_the_run() {
    let h = hda("run_abcd");
    let s = h.space();
    let full = path(&h, RUN_CHAIN[0]);
    let last = path(&h, RUN_CHAIN[3]);
    assert_eq!(t_measure(s, &full), 6);
    assert_eq!(t_measure(s, &last), 4);
    assert!(is_fan_shaped(s, &last));
    assert!(!is_fan_shaped(s, &full));
    let shaped = fan_shape(s, &full).unwrap();
    assert!(is_fan_shaped(s, &shaped.result));
    assert_eq!(t_measure(s, &shaped.result), 4);
    assert_eq!(are_homotopic(s, &full, &shaped.result, DEFAULT_CAP), HomotopyVerdict::Homotopic);
    assert_eq!(shaped.iterations(), 1);
    assert_eq!(fan_shape(s, &last).unwrap().result, last);
}

#[test]
fn the_run_is_a_path_object() {
    let h = hda("run_abcd");
    let mut keep = vec![false; h.space().len()];
    let full = path(&h, RUN_CHAIN[0]);
    let mut stack = full.cubes().to_vec();
    while let Some(c) = stack.pop() {
        if !std::mem::replace(&mut keep[c.index()], true) {
            for side in Side::BOTH {
                stack.extend_from_slice(h.space().faces(c, side));
            }
        }
    }
    let (sub, _) = h.space().restrict(&keep).unwrap();
    let rep = is_path_object(&sub, 10_000).unwrap();
    assert_eq!(rep.rep.render(&sub), "(i,a,x,b,bc,c,z,d)");
}

#[test]
fn enumerating_the_filled_square() {
    let h = hda("square_filled");
    assert_eq!(enumerate_pointed_paths(&h, 1).len(), 1);
    assert_eq!(enumerate_pointed_paths(&h, 3).len(), 7);
    assert_eq!(enumerate_pointed_paths(&h, 4).len(), 13);
}

#[test]
fn unfolding_examples() {
    let x = hda("cycle2");
    let u = unfold(&x, 5, DEFAULT_CAP).unwrap();
    assert_eq!(u.tree.space().count_by_dim(), [3, 2]);
    let lifted = u.lift_path(u.tree.initial(), &path(&x, "x,e1,y,e2,x")).unwrap();
    assert_eq!(lifted.len(), 5);

    assert!(is_tree(&hda("square_filled"), 6, DEFAULT_CAP).unwrap().is_tree);
    assert!(!is_tree(&hda("square_hollow"), 6, DEFAULT_CAP).unwrap().is_tree);

    let run = hda("run_abcd");
    let uf = unfold(&run, run.longest_pointed_path().unwrap(), DEFAULT_CAP).unwrap();
    assert!(uf.is_complete());
    assert!(uf.projection_morphism().is_bijective());
    assert!(open_map_check(&uf.projection_morphism()).open);
    let lifted = uf.lift_path(uf.tree.initial(), &path(&run, RUN_CHAIN[0])).unwrap();
    for (j, &node) in lifted.cubes().iter().enumerate() {
        assert_eq!(uf.rep(node), &path(&run, RUN_CHAIN[0]).prefix(j + 1).clone().min(uf.rep(node).clone()));
    }

    let a = EventSet::new(["a"]).unwrap();
    assert_eq!(torus_unfolding(&a, 1).hda.space().len(), 1);
    let t1 = torus(&a, 1);
    assert_eq!(unfold(&t1.hda, 5, DEFAULT_CAP).unwrap().tree.space().count_by_dim(), [3, 2]);
}

#[test]
fn torus_counts() {
    let ab = EventSet::new(["a", "b"]).unwrap();
    assert_eq!(torus(&ab, 2).hda.space().count_by_dim(), [1, 2, 3]);
    let none = EventSet::new(Vec::<String>::new()).unwrap();
    assert_eq!(torus(&none, 3).hda.space().count_by_dim(), [1]);
    let a = EventSet::new(["a"]).unwrap();
    assert_eq!(torus(&a, 3).hda.space().count_by_dim(), [1, 1, 1, 1]);
}

#[test]
fn small_decisions() {
    let (l, r) = (hda("square_filled"), hda("square_hollow"));
    assert!(!bisimilar(&l, &r).related);
    let same = bisimilar(&l, &l);
    assert!(same.related);
    for c in l.space().cubes() {
        assert!(same.pairs.contains(&(c, c)));
    }
    assert!(check_relation(&l, &l, &same.pairs, None).is_ok());

    let (x, y) = (hda("cycle2"), hda("cycle3"));
    let f = bisimilar(&x, &y);
    assert!(f.related);
    assert!(check_relation(&x, &y, &f.pairs, None).is_ok());

    let (ab, ac) = (labeled("par_ab"), labeled("par_ac"));
    assert!(labeled_bisimilar(&ab, &ab).unwrap().related);
    assert!(!labeled_bisimilar(&ab, &ac).unwrap().related);
    assert!(!labeled_bisimilar(&labeled("square_filled"), &labeled("square_hollow")).unwrap().related);
}

#[test]
fn oracle_examples() {
    let (l, r) = (hda("square_filled"), hda("square_hollow"));
    // the 2-cube sits at length 3 + dimension 2
    let o = hp_oracle(&l, &r, 4, None, DEFAULT_CAP).unwrap();
    assert_eq!(o.verdict(), Verdict::Inconclusive);
    let o = hp_oracle(&l, &r, 5, None, DEFAULT_CAP).unwrap();
    assert_eq!(o.verdict(), Verdict::Fails);
    assert_eq!(hp_oracle(&l, &l, 5, None, DEFAULT_CAP).unwrap().verdict(), Verdict::Holds);
    let o = hp_oracle(&hda("cycle2"), &hda("cycle3"), 6, None, DEFAULT_CAP).unwrap();
    assert!(o.related);
    assert_eq!(o.verdict(), Verdict::Inconclusive);
}
