use nearzero::engine::{run_search, Staged};
use nearzero::phj::{oplus, phj_generated_set, tuples_over, Alphabet, PhjPoint};
use nearzero::pipelines::{
    ap_points, extract_geo_params, f_encode, geo_slice_word, poly_parameters, replay_points, sigma_encode,
    smallest_above, SigmaEncoder,
};
use nearzero::words::{bm_generated_set, substitute, Block, BmWitness, Word};
use nearzero::{
    ap_near_zero, direct_poly_witness, parse_coloring, parse_polynomials, poly_vdw_near_zero, Rational, SearchBudget,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_rational(rng: &mut impl Rng, signed: bool) -> Rational {
    let n: i64 = if signed {
        rng.gen_range(-12..=12)
    } else {
        rng.gen_range(1..=12)
    };
    Rational::new(n, rng.gen_range(1..=12u64)).unwrap()
}

fn epsilon(rng: &mut impl Rng) -> Rational {
    let d = rng.gen_range(2..=20u64);
    Rational::new(rng.gen_range(1..d), d).unwrap()
}

/// Random block structure over `{0..k}^N`: increasing `(k+1)`-term
/// progressions and a base word that is 0 on them.
fn block_structure(rng: &mut impl Rng) -> BmWitness {
    let k: u8 = rng.gen_range(0..=3);
    loop {
        let mut blocks = Vec::new();
        let mut next = 1usize;
        let mut room = true;
        while room && (blocks.is_empty() || rng.gen_bool(0.5)) {
            let start = next + rng.gen_range(0..=2);
            let step = if k == 0 { 1 } else { rng.gen_range(1..=2) };
            let last = start + k as usize * step;
            if last > 8 {
                room = false;
            } else {
                blocks.push(Block::new((0..=k as usize).map(|i| start + i * step).collect()).unwrap());
                next = last + 1;
            }
        }
        if blocks.is_empty() {
            continue;
        }
        let n = rng.gen_range(next - 1..=8).max(1);
        let covered: Vec<usize> = blocks.iter().flat_map(|b| b.positions().to_vec()).collect();
        let letters = (1..=n)
            .map(|t| if covered.contains(&t) { 0 } else { rng.gen_range(0..=k) })
            .collect();
        return BmWitness {
            word: Word::new(k, letters).unwrap(),
            blocks,
            color: 1,
        };
    }
}

fn random_point(rng: &mut impl Rng, d: usize, n: usize, entries: &[Rational]) -> PhjPoint {
    let mut u = PhjPoint::zero(d, n);
    let all: Vec<usize> = (1..=n).collect();
    for j in 1..=d {
        for t in tuples_over(&all, j) {
            let x = entries[rng.gen_range(0..entries.len())].clone();
            u.set(j, &t, x).unwrap();
        }
    }
    u
}

fn random_gamma(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    loop {
        let g: Vec<usize> = (1..=n).filter(|_| rng.gen_bool(0.5)).collect();
        if !g.is_empty() {
            return g;
        }
    }
}

fn off_gamma_sum(u: &PhjPoint, gamma: &[usize]) -> Rational {
    u.nonzero_entries()
        .into_iter()
        .filter(|(_, t, _)| !t.iter().all(|i| gamma.contains(i)))
        .map(|(_, _, x)| x)
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn geo_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let wit = block_structure(&mut rng);
        let eps = epsilon(&mut rng);
        let p = smallest_above(&eps.recip().unwrap()).unwrap() + rng.gen_range(0..3);
        let m = smallest_above(&Rational::from_integer(wit.n() as u64).checked_div(&eps).unwrap()).unwrap()
            + rng.gen_range(0..3);
        let g = extract_geo_params(&wit, p, m).unwrap();
        let k = wit.k();
        for j in 0..=k as usize {
            for q in 0..=k {
                let slice = geo_slice_word(&wit, j, q).unwrap();
                let lhs = f_encode(&slice, p, m, &eps).unwrap();
                let rhs = &g.b * &(&g.a + &(&g.d * &Rational::from_integer(j as u64))).pow(q as u32);
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn sigma_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=4);
        let entries: Vec<Rational> = (0..4).map(|_| small_rational(&mut rng, true)).collect();
        let u = random_point(&mut rng, d, n, &entries);
        let gamma = random_gamma(&mut rng, n);
        let xs: Vec<Rational> = (0..d).map(|_| small_rational(&mut rng, true)).collect();
        let r = small_rational(&mut rng, false);
        let lhs = sigma_encode(&oplus(&u, &gamma, &xs).unwrap(), &r);
        let c = gamma.len() as u64;
        let tail: Rational = xs
            .iter()
            .enumerate()
            .map(|(i, x)| x * &Rational::from_integer(c.pow(i as u32 + 1)))
            .sum();
        prop_assert_eq!(lhs, &(&r + &off_gamma_sum(&u, &gamma)) + &tail);
    }

    #[test]
    fn f_values_stay_in_range(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eps = epsilon(&mut rng);
        let k = rng.gen_range(0..=5u8);
        let n = rng.gen_range(1..=10);
        let word = Word::new(k, (0..n).map(|_| rng.gen_range(0..=k)).collect()).unwrap();
        let p = smallest_above(&eps.recip().unwrap()).unwrap() + rng.gen_range(0..5);
        let m = smallest_above(&Rational::from_integer(n as u64).checked_div(&eps).unwrap()).unwrap()
            + rng.gen_range(0..5);
        let x = f_encode(&word, p, m, &eps).unwrap();
        prop_assert!(x.in_open_interval(&Rational::zero(), &eps), "{}", x);
    }

    #[test]
    fn sigma_values_stay_in_range(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eps = epsilon(&mut rng);
        let text = ["x", "x^2", "x, x^2", "-2*x + 1/3*x^3", "1/2*x, -x^2"][rng.gen_range(0..5)];
        let polys = parse_polynomials(text).unwrap();
        let n = rng.gen_range(1..=3);
        let params = poly_parameters(&polys, &eps, n).unwrap();
        let enc = SigmaEncoder::new(&params.alphabet, params.d, n, params.r.clone(), &eps).unwrap();
        let u = random_point(&mut rng, params.d, n, params.alphabet.entries());
        let x = enc.encode(&u).unwrap();
        prop_assert!(x.in_open_interval(&Rational::zero(), &eps), "{}", x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn substitute_zero_is_identity_and_generated_contains_base(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let wit = block_structure(&mut rng);
        let alpha: Vec<usize> = wit.blocks.iter().map(|b| b.positions()[rng.gen_range(0..b.len())]).collect();
        prop_assert_eq!(substitute(&wit.word, &alpha, 0).unwrap(), wit.word.clone());
        prop_assert!(bm_generated_set(&wit.word, &wit.blocks).unwrap().contains(&wit.word));
    }

    #[test]
    fn oplus_laws(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=3);
        let entries: Vec<Rational> = (0..3).map(|_| small_rational(&mut rng, true)).collect();
        let u = random_point(&mut rng, d, n, &entries);
        let gamma = random_gamma(&mut rng, n);
        let xs: Vec<Rational> = (0..d).map(|_| small_rational(&mut rng, true)).collect();
        let once = oplus(&u, &gamma, &xs).unwrap();
        prop_assert_eq!(oplus(&once, &gamma, &xs).unwrap(), once.clone());

        let zeros = vec![Rational::zero(); d];
        let cleared = oplus(&u, &gamma, &zeros).unwrap();
        prop_assert_eq!(oplus(&cleared, &gamma, &zeros).unwrap(), cleared.clone());
        let mut letters = entries.clone();
        letters.push(Rational::zero());
        let alphabet = Alphabet::new(letters).unwrap();
        let base = random_point(&mut rng, d, n, alphabet.entries());
        let base = oplus(&base, &gamma, &zeros).unwrap();
        prop_assert!(phj_generated_set(&base, &gamma, &alphabet).unwrap().contains(&base));
    }

    #[test]
    fn budget_is_never_exceeded(max_nodes in 0u64..300, accept_at in 0usize..400, workers in 1usize..5) {
        struct C(usize);
        impl Staged for C {
            fn stage(&self) -> usize { 1 }
        }
        let budget = SearchBudget::default().with_max_nodes(max_nodes).with_workers(workers);
        let out = run_search((0..).map(C), |c: &C| (c.0 == accept_at).then_some(()), &budget);
        prop_assert!(out.nodes_visited() <= max_nodes);
        prop_assert_eq!(out.is_found(), (accept_at as u64) < max_nodes);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ap_pipeline_replays_on_random_intervals(
        cuts in proptest::collection::btree_set(1u64..40, 1..4),
        k in 0usize..3,
    ) {
        let cuts: Vec<String> = cuts.iter().map(|c| format!("{c}/80")).collect();
        let spec = parse_coloring(&format!("interval:{}:{}", cuts.len() + 1, cuts.join(","))).unwrap();
        let eps = Rational::new(1, 2).unwrap();
        let budget = SearchBudget::default().with_max_n(40).with_workers(1);
        let wit = ap_near_zero(&spec, k, &eps, &budget).unwrap().found().unwrap();
        prop_assert_eq!(replay_points(&wit.points(), &spec, &eps), Ok(wit.color));
    }
}

#[test]
fn linear_polys_give_progressions() {
    let eps = Rational::new(1, 2).unwrap();
    let budget = SearchBudget::default().with_max_n(6).with_workers(1);
    for text in ["constant:1", "modsum:2", "threshold:1/4"] {
        let spec = parse_coloring(text).unwrap();
        for k in 1..=3usize {
            let list: Vec<String> = (1..=k).map(|c| format!("{c}*x")).collect();
            let polys = parse_polynomials(&list.join(",")).unwrap();
            let Some(run) = poly_vdw_near_zero(&polys, &spec, &eps, &budget).unwrap().found() else {
                continue;
            };
            let w = run.witness;
            let mut as_ap = ap_points(&w.a, &w.alpha, k);
            let mut got = w.points();
            as_ap.sort();
            got.sort();
            assert_eq!(got, as_ap, "{text} k={k}");
            assert_eq!(replay_points(&as_ap, &spec, &eps), Ok(w.color));
        }
    }
}

#[test]
fn pipeline_and_direct_search_both_replay() {
    let eps = Rational::new(1, 2).unwrap();
    let budget = SearchBudget::default().with_max_n(6).with_workers(1);
    for text in [
        "constant:2",
        "modsum:2",
        "modnum:3",
        "threshold:1/4",
        "interval:3:1/8,1/4",
    ] {
        let spec = parse_coloring(text).unwrap();
        for list in ["x", "x^2", "x, x^2", "2*x, -x^2"] {
            let polys = parse_polynomials(list).unwrap();
            let piped = poly_vdw_near_zero(&polys, &spec, &eps, &budget).unwrap().found();
            let direct = direct_poly_witness(&polys, &spec, &eps, 30).unwrap();
            if let (Some(run), Some(d)) = (piped, direct) {
                assert_eq!(replay_points(&run.witness.points(), &spec, &eps), Ok(run.witness.color));
                assert_eq!(replay_points(&d.points(), &spec, &eps), Ok(d.color));
            }
        }
    }
}
