mod common;

use nielsen_core::corpus;
use nielsen_core::explorer::{components, GraphQuery, Mode};
use nielsen_core::moves::apply_move;
use nielsen_core::structure::{generates, normally_generates};
use nielsen_core::{Conjugator, Move, Tuple};

fn small_tables() -> Vec<(String, nielsen_core::Group)> {
    corpus::finite_corpus()
        .into_iter()
        .filter(|(_, g)| g.order().unwrap() <= 16)
        .collect()
}

#[test]
fn moves_preserve_generation_exhaustively() {
    for (name, g) in small_tables() {
        let f = g.finite().unwrap();
        let n = if f.order() <= 8 { 3 } else { 2 };
        let oracle = common::components(f, n, false);
        for v in &oracle.vertices {
            let t = Tuple::from_indices(&g, v).unwrap();
            let mut moves = vec![];
            for i in 1..=n {
                moves.push(Move::inv(i));
                for j in 1..=n {
                    if i != j {
                        for s in [1, -1] {
                            moves.push(Move::r(i, j, s));
                            moves.push(Move::l(i, j, s));
                        }
                    }
                }
                for s in 0..f.order() as u32 {
                    moves.push(Move::ac(
                        i,
                        Conjugator::Element(g.element_at(s).unwrap()),
                        1,
                    ));
                }
            }
            for m in moves {
                let u = apply_move(&t, &m).unwrap();
                if m.is_ac() {
                    assert!(normally_generates(&g, &u).unwrap(), "{name}: {m} on {t}");
                } else {
                    assert!(generates(&g, &u).unwrap(), "{name}: {m} on {t}");
                }
                let back = apply_move(&u, &m.inverse()).unwrap();
                assert_eq!(back, t, "{name}: {m} not undone by its inverse");
            }
        }
    }
}

#[test]
fn explorer_matches_oracle_on_corpus() {
    for (name, g) in small_tables() {
        let f = g.finite().unwrap();
        for n in 1..=2 {
            for (mode, ac) in [(Mode::Nielsen, false), (Mode::Ac, true)] {
                let r = components(&GraphQuery::new(&g, n, mode)).unwrap();
                let o = common::components(f, n, ac);
                assert_eq!(
                    r.vertex_count,
                    o.vertices.len() as u64,
                    "{name} n={n} {mode:?}"
                );
                assert_eq!(
                    r.component_count, o.components as u64,
                    "{name} n={n} {mode:?}"
                );
                // same partition, not just the same count
                for a in &o.vertices {
                    let ta = Tuple::from_indices(&g, a).unwrap();
                    let ca = r.component_of(&ta).unwrap().unwrap();
                    let b = &o.vertices[0];
                    let cb = r
                        .component_of(&Tuple::from_indices(&g, b).unwrap())
                        .unwrap()
                        .unwrap();
                    assert_eq!(ca == cb, o.label[a] == o.label[b], "{name} n={n}");
                }
            }
        }
    }
}

#[test]
fn representatives_are_least_vertices() {
    let g = corpus::cyclic(7);
    let r = components(&GraphQuery::new(&g, 1, Mode::Nielsen)).unwrap();
    let labels: Vec<String> = r.representatives.iter().map(|t| t.to_string()).collect();
    assert_eq!(labels.len(), 3);
    assert_eq!(r.sizes.iter().sum::<u64>(), 6);
}
