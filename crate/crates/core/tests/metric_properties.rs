use proptest::prelude::*;
use taxunify::{
    completeness, laconicity, lucidity, soundness, ClassificationScheme, Fraction, MappingPair,
    MappingSet,
};

#[derive(Debug, Clone)]
struct RandomProject {
    unified: ClassificationScheme,
    previous: Vec<ClassificationScheme>,
    pairs: Vec<(String, String, String)>,
}

impl RandomProject {
    fn mapping(&self) -> MappingSet {
        MappingSet::new(
            "p",
            self.pairs.iter().map(|(c, t, d)| MappingPair::new(c, t, d)),
        )
    }
}

fn project() -> impl Strategy<Value = RandomProject> {
    (1usize..=6, prop::collection::vec(1usize..=6, 1..=3)).prop_flat_map(|(nc, sizes)| {
        let slots = nc * sizes.iter().sum::<usize>();
        prop::collection::vec(prop::bool::weighted(0.3), slots).prop_map(move |mask| {
            let unified = ClassificationScheme::unified("C", (0..nc).map(|i| format!("c{i}")));
            let previous: Vec<_> = sizes
                .iter()
                .enumerate()
                .map(|(t, &n)| {
                    ClassificationScheme::previous(
                        &format!("T{t}"),
                        (0..n).map(|i| format!("d{i}")),
                    )
                })
                .collect();
            let mut pairs = Vec::new();
            let mut k = 0;
            for c in 0..nc {
                for t in &previous {
                    for d in &t.nodes {
                        if mask[k] {
                            pairs.push((format!("c{c}"), t.id.clone(), d.id.clone()));
                        }
                        k += 1;
                    }
                }
            }
            RandomProject {
                unified,
                previous,
                pairs,
            }
        })
    })
}

/// Counts straight from the list of triples, without any index.
fn oracle(p: &RandomProject) -> [(u64, u64); 4] {
    let links_into = |t: &str, d: &str| {
        p.pairs
            .iter()
            .filter(|(_, pt, pd)| pt == t && pd == d)
            .count()
    };
    let fan_out = |c: &str, t: &str| {
        p.pairs
            .iter()
            .filter(|(pc, pt, _)| pc == c && pt == t)
            .count()
    };
    let total: u64 = p.previous.iter().map(|t| t.nodes.len() as u64).sum();
    let mut laconic = 0;
    let mut complete = 0;
    for t in &p.previous {
        for d in &t.nodes {
            let n = links_into(&t.id, &d.id);
            laconic += (n <= 1) as u64;
            complete += (n >= 1) as u64;
        }
    }
    let mut lucid = 0;
    let mut sound = 0;
    for c in &p.unified.nodes {
        let per_t: Vec<usize> = p.previous.iter().map(|t| fan_out(&c.id, &t.id)).collect();
        lucid += per_t.iter().map(|&n| (n <= 1) as u64).min().unwrap();
        sound += per_t.iter().map(|&n| (n >= 1) as u64).max().unwrap();
    }
    let nc = p.unified.nodes.len() as u64;
    [
        (laconic, total),
        (lucid, nc),
        (complete, total),
        (sound, nc),
    ]
}

fn metrics(p: &RandomProject, m: &MappingSet) -> [Fraction; 4] {
    [
        laconicity(&p.unified, &p.previous, m).unwrap(),
        lucidity(&p.unified, &p.previous, m).unwrap(),
        completeness(&p.unified, &p.previous, m).unwrap(),
        soundness(&p.unified, &p.previous, m).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn matches_brute_force_recount(p in project()) {
        let got = metrics(&p, &p.mapping());
        let want = oracle(&p);
        for (g, w) in got.iter().zip(want) {
            prop_assert_eq!((g.numerator(), g.denominator()), w);
        }
    }

    #[test]
    fn metrics_stay_in_unit_interval(p in project()) {
        for v in metrics(&p, &p.mapping()) {
            prop_assert!(v >= Fraction::ZERO && v <= Fraction::ONE);
        }
    }

    #[test]
    fn adding_a_pair_is_monotone(p in project(), pick in any::<prop::sample::Index>()) {
        let m = p.mapping();
        let before = metrics(&p, &m);
        let c = pick.get(&p.unified.nodes).id.clone();
        let t = pick.get(&p.previous);
        let d = pick.get(&t.nodes).id.clone();
        let mut grown = m.clone();
        grown.insert(MappingPair::new(c, t.id.clone(), d));
        let after = metrics(&p, &grown);
        prop_assert!(after[0] <= before[0]);
        prop_assert!(after[1] <= before[1]);
        prop_assert!(after[2] >= before[2]);
        prop_assert!(after[3] >= before[3]);
    }

    #[test]
    fn empty_mapping_law(p in project()) {
        let v = metrics(&p, &MappingSet::new("p", []));
        prop_assert_eq!(v, [Fraction::ONE, Fraction::ONE, Fraction::ZERO, Fraction::ZERO]);
    }

    #[test]
    fn bijection_law(n in 1usize..=6) {
        let ids: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let p = RandomProject {
            unified: ClassificationScheme::unified("C", ids.clone()),
            previous: vec![ClassificationScheme::previous("T", ids.clone())],
            pairs: ids.iter().map(|i| (i.clone(), "T".to_string(), i.clone())).collect(),
        };
        prop_assert_eq!(metrics(&p, &p.mapping()), [Fraction::ONE; 4]);
    }

    #[test]
    fn laconic_and_complete_both_one_iff_exactly_one_partner(p in project()) {
        let v = metrics(&p, &p.mapping());
        let every_node_once = p.previous.iter().all(|t| {
            t.nodes.iter().all(|d| {
                p.pairs.iter().filter(|(_, pt, pd)| *pt == t.id && *pd == d.id).count() == 1
            })
        });
        prop_assert_eq!(v[0] == Fraction::ONE && v[2] == Fraction::ONE, every_node_once);
    }

    #[test]
    fn loading_a_pair_twice_changes_nothing(p in project()) {
        let mut doubled: Vec<MappingPair> = p.mapping().pairs().to_vec();
        doubled.extend(p.mapping().pairs().iter().cloned());
        prop_assert_eq!(MappingSet::new("p", doubled), p.mapping());
    }
}
