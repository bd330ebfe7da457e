use engel_core::nq::{nilpotent_quotient, random_element, InstanceStrategy, NqOptions, NqState};
use engel_core::par::Execution;
use engel_core::verify::corpus;
use engel_core::words::{parse_presentation, AbstractWord};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn run(src: &str, max_class: u32, execution: Execution) -> NqState {
    let p = parse_presentation(src).unwrap();
    let opts = NqOptions {
        max_class,
        execution,
        ..NqOptions::default()
    };
    nilpotent_quotient(&p, &opts).unwrap()
}

fn b24() -> &'static NqState {
    static S: OnceLock<NqState> = OnceLock::new();
    S.get_or_init(|| run(corpus::B24, 32, Execution::default()))
}

fn n_class_4() -> &'static NqState {
    static S: OnceLock<NqState> = OnceLock::new();
    S.get_or_init(|| run(corpus::N, 4, Execution::default()))
}

#[test]
fn burnside_tower_is_compatible() {
    let full = b24();
    let orders: Vec<u64> = (1..=5).map(|c| {
        let s = run(corpus::B24, c, Execution::Sequential);
        assert_eq!(full.pcp.truncate(c).unwrap(), s.pcp, "class {c}");
        // the cap stops the run before the empty next layer is seen
        assert!(s.truncated);
        s.order().unwrap().try_into().unwrap()
    }).collect();
    assert_eq!(orders, [16, 32, 128, 1024, 4096]);
    assert!(!run(corpus::B24, 6, Execution::Sequential).truncated);
}

#[test]
fn sequential_and_parallel_runs_agree() {
    let a = run(corpus::N, 4, Execution::Sequential);
    let b = n_class_4();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(
        serde_json::to_string(&a.to_json()).unwrap(),
        serde_json::to_string(&run(corpus::N, 4, Execution::Sequential).to_json()).unwrap()
    );
}

#[test]
fn truncated_n_layers() {
    let s = n_class_4();
    let gens: Vec<usize> = s.log.iter().map(|st| st.new_rel_orders.len()).collect();
    assert_eq!(gens, [3, 3, 8, 12]);
    assert!(s.log.iter().all(|st| st.new_rel_orders.iter().all(|&m| m == 2 || m == 4)));
}

#[test]
fn generator_instances_alone_lose_relations_for_burnside() {
    let p = parse_presentation(corpus::B24).unwrap();
    let cheap = NqOptions {
        max_class: 3,
        strategy: InstanceStrategy::Generators,
        ..NqOptions::default()
    };
    let s = nilpotent_quotient(&p, &cheap);
    // either too large a quotient or a reported gap, never a smaller group
    if let Ok(s) = s {
        assert!(s.order().unwrap() >= run(corpus::B24, 3, Execution::Sequential).order().unwrap());
    }
}

fn commutator(names: &[&str]) -> AbstractWord {
    AbstractWord::Commutator(names.iter().map(|g| AbstractWord::generator(g)).collect())
}

#[test]
fn defining_relators_hold_in_images() {
    let s = b24();
    assert!(s.evaluate(&AbstractWord::generator("a").pow(4)).unwrap().is_identity());
    assert!(!s.evaluate(&commutator(&["a", "b"])).unwrap().is_identity());
    let n = n_class_4();
    assert!(n.evaluate(&commutator(&["a", "b", "b", "c", "c"])).unwrap().is_identity());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn burnside_elements_have_exponent_four(seed in any::<u64>()) {
        let s = b24();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(&s.pcp, &mut rng, 3);
        prop_assert!(s.pcp.power(&x, 4).unwrap().is_identity());
    }

    #[test]
    fn n_quotient_satisfies_the_engel_law(seed in any::<u64>()) {
        let s = n_class_4();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(&s.pcp, &mut rng, 3);
        let b2 = s.pcp.power(s.image("b").unwrap(), 2).unwrap();
        let c = s.pcp.commutator(&s.pcp.commutator(&b2, &x).unwrap(), &x).unwrap();
        prop_assert!(c.is_identity());
    }

    #[test]
    fn multiplication_is_associative(seed in any::<u64>()) {
        let p = &n_class_4().pcp;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (random_element(p, &mut rng, 3), random_element(p, &mut rng, 3), random_element(p, &mut rng, 3));
        let l = p.multiply(&p.multiply(&x, &y).unwrap(), &z).unwrap();
        let r = p.multiply(&x, &p.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        prop_assert!(p.multiply(&x, &p.inverse(&x).unwrap()).unwrap().is_identity());
    }
}
