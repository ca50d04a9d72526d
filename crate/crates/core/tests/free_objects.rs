use std::collections::HashMap;

use slo_core::free::{default_generators, free_cdis_count};
use slo_core::{
    build_power, catalog, count_extensions, extend_hom, free_cdis, free_semilattice, parse_term, Elem, FiniteAlgebra,
    Limits, PowerVariant, SloAlgebra,
};

fn gens(n: usize) -> Vec<String> {
    default_generators(n)
}

// Every operation commutes with the map, checked table by table.
fn preserves(from: &FiniteAlgebra, to: &FiniteAlgebra, map: &[Elem]) -> bool {
    from.signature().ops().iter().enumerate().all(|(i, (sym, k))| {
        let j = to.op_index(sym).unwrap();
        let mut ok = true;
        slo_core::algebra::for_each_tuple(from.size(), *k, |args| {
            let img: Vec<Elem> = args.iter().map(|&a| map[a]).collect();
            ok &= map[from.apply(i, args)] == to.apply(j, &img);
        });
        ok
    })
}

#[test]
fn linear_word_operations_distribute_in_powers() {
    let l = Limits::default();
    for (name, base) in catalog::binary_bases(3) {
        let p = build_power(&base, PowerVariant::WithEmpty, &l).unwrap();
        for src in ["mul(x,y)", "mul(mul(x,y),z)", "mul(z,mul(x,y))"] {
            let t = parse_term(src, p.algebra().signature()).unwrap();
            assert!(p.slo().word_op_distributes(&t).unwrap(), "{name}: {src}");
        }
    }
}

#[test]
fn repeated_variables_can_break_distributivity() {
    let base = free_semilattice(&["x", "y"]).unwrap();
    let p = build_power(&base, PowerVariant::Nonempty, &Limits::default()).unwrap();
    let t = parse_term("mul(x,x)", p.algebra().signature()).unwrap();
    let w = p.slo().word_op_distribution_witness(&t).unwrap();
    assert!(w.is_some());
}

#[test]
fn cdis_maps_into_lattices_uniquely() {
    let l = Limits::default();
    for n in 0..=2 {
        let g = gens(n);
        let free = free_cdis(&g.iter().map(String::as_str).collect::<Vec<_>>(), &l).unwrap();
        for size in 2..=3 {
            let target = SloAlgebra::from_designated(&catalog::chain_lattice(size)).unwrap();
            let labels = target.algebra().labels().to_vec();
            // every assignment of generators to target elements
            for code in 0..size.pow(n as u32) {
                let mut c = code;
                let mut pairs = Vec::new();
                let mut h = HashMap::new();
                for name in &g {
                    pairs.push((name.as_str(), labels[c % size].as_str()));
                    h.insert(name.clone(), c % size);
                    c /= size;
                }
                let hom = extend_hom(&free, &pairs, &target).unwrap();
                assert!(preserves(free.algebra(), target.algebra(), &hom.map));
                for (name, e) in free.generators() {
                    assert_eq!(hom.map[*e], h[name]);
                }
                assert_eq!(count_extensions(&free, &h, &target, 2).unwrap(), 1);
            }
        }
    }
}

#[test]
fn cdis_counts_match_model_sizes() {
    let l = Limits::default();
    for n in 0..=3 {
        let g = gens(n);
        let m = free_cdis(&g.iter().map(String::as_str).collect::<Vec<_>>(), &l).unwrap();
        assert_eq!(m.size(), free_cdis_count(n, &l).unwrap());
    }
    assert_eq!(free_cdis_count(4, &l).unwrap(), 4960);
}
