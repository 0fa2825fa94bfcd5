mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xorgame::decider::{abelianize_clause_word, decide_mod_k, is_valid_obstruction, witness_clause_word};
use xorgame::graph::{build_pair_graph, decompose_components, Vertex};
use xorgame::linalg::{
    integer_kernel_basis, is_mod2_solution, is_obstruction, smith_normal_form, solve_mod2_over_rationals, IntMatrix,
    Mod2Solution,
};
use xorgame::merp::{simulate_merp_value, solve_merp, verify_merp_symbolic};
use xorgame::refutation::HomomorphismTable;
use xorgame::word::{canon_letters, multiply, project_player, project_sigma, reduce_clause_word, reduce_letters};
use xorgame::{decide, generate_random_game, parse_game, Certificate, ClauseWord, Format, GroupWord, Status};

fn group_word(k: usize) -> impl Strategy<Value = GroupWord> {
    (prop::collection::vec(prop::collection::vec(0u32..4, 0..8), k), any::<bool>())
        .prop_map(|(letters, s)| GroupWord::from_letters(letters, s))
}

fn three_words() -> impl Strategy<Value = (GroupWord, GroupWord, GroupWord)> {
    (1usize..4).prop_flat_map(|k| (group_word(k), group_word(k), group_word(k)))
}

fn matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-4i64..=4, c), r))
}

fn rational_rank(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                let pivot = m[rank].clone();
                m[i].iter_mut().zip(&pivot).for_each(|(x, y)| *x -= &f * y);
            }
        }
        rank += 1;
    }
    rank
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![vec![]];
    }
    if n < r {
        return vec![];
    }
    let mut out = combinations(n - 1, r);
    for mut c in combinations(n - 1, r - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Every small integer vector in the box, excluding zero.
fn box_vectors(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (-bound..=bound).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out.retain(|v| v.iter().any(|&x| x != 0));
    out
}

proptest! {
    #[test]
    fn multiplication_is_associative_with_inverses((a, b, c) in three_words()) {
        let ab_c = multiply(&multiply(&a, &b).unwrap(), &c).unwrap();
        let a_bc = multiply(&a, &multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!(multiply(&a, &a.inverse()).unwrap().is_identity());
    }

    #[test]
    fn projections_are_homomorphisms((a, b, _c) in three_words()) {
        let ab = multiply(&a, &b).unwrap();
        for alpha in 0..a.players() {
            let lhs = project_player(&ab, alpha);
            let rhs = multiply(&project_player(&a, alpha), &project_player(&b, alpha)).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        prop_assert_eq!(project_sigma(&ab), project_sigma(&a) ^ project_sigma(&b));
    }

    #[test]
    fn canon_ignores_order_within_each_parity_class(letters in prop::collection::vec(0u32..6, 3..14), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let permuted = common::shuffle_parity_classes(&mut rng, &letters);
        let (c, _) = canon_letters(&letters);
        prop_assert_eq!(&canon_letters(&permuted).0, &c);
        if c.len() >= 3 {
            prop_assert_eq!(&canon_letters(&c).0, &c);
        }
        if letters.len() % 2 == 0 {
            prop_assert_eq!(common::signed_counts(&c, 6), common::signed_counts(&letters, 6));
        }
    }

    #[test]
    fn smith_form_identity(rows in matrix(6)) {
        let a = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&a);
        prop_assert!(s.check(&a));
        prop_assert!(s.u.determinant().unwrap().magnitude().is_one());
        prop_assert!(s.v.determinant().unwrap().magnitude().is_one());
    }

    #[test]
    fn kernel_basis_is_a_saturated_basis(rows in matrix(4)) {
        let a = IntMatrix::from_rows(&rows);
        let basis = integer_kernel_basis(&a);
        for z in &basis {
            prop_assert!(a.mul_vec(z).unwrap().iter().all(Zero::is_zero));
        }
        let a_rows: Vec<Vec<BigInt>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
        prop_assert_eq!(basis.len(), a.cols() - rational_rank(&a_rows));
        if !basis.is_empty() {
            prop_assert_eq!(rational_rank(&basis), basis.len());
            // maximal minors coprime: the basis spans every integer solution
            let g = combinations(a.cols(), basis.len()).into_iter().fold(BigInt::zero(), |g, cols| {
                let sub: Vec<Vec<i64>> = basis
                    .iter()
                    .map(|z| cols.iter().map(|&c| i64::try_from(z[c].clone()).unwrap()).collect())
                    .collect();
                g.gcd(&IntMatrix::from_rows(&sub).determinant().unwrap())
            });
            prop_assert!(g.is_one());
        }
        let brute = box_vectors(a.cols(), 2).into_iter().any(|z| {
            let z: Vec<BigInt> = z.into_iter().map(BigInt::from).collect();
            a.mul_vec(&z).unwrap().iter().all(Zero::is_zero)
        });
        if brute {
            prop_assert!(!basis.is_empty());
        }
    }

    #[test]
    fn mod2_alternatives_validate(rows in matrix(5), parity_seed in any::<u64>()) {
        let b = IntMatrix::from_rows(&rows);
        let s: Vec<i64> = (0..b.rows()).map(|i| (parity_seed >> i & 1) as i64).collect();
        match solve_mod2_over_rationals(&b, &s).unwrap() {
            Mod2Solution::Solution(phi) => prop_assert!(is_mod2_solution(&b, &s, &phi)),
            Mod2Solution::Obstruction(u) => prop_assert!(is_obstruction(&b, &s, &u)),
        }
    }

    #[test]
    fn round_trips(k in 2usize..5, n in 1usize..5, m in 1usize..10, seed in any::<u64>()) {
        let g = generate_random_game(k, n, m, seed).unwrap();
        prop_assert_eq!(&parse_game(&g.to_text(), Format::Text, None).unwrap(), &g);
        prop_assert_eq!(&parse_game(&g.to_json(), Format::Json, None).unwrap(), &g);
        prop_assert_eq!(g.to_json(), parse_game(&g.to_json(), Format::Json, None).unwrap().to_json());
    }

    #[test]
    fn decomposition_keeps_every_clause(k in 2usize..5, n in 1usize..5, m in 1usize..12, seed in any::<u64>()) {
        let g = generate_random_game(k, n, m, seed).unwrap();
        let parts = decompose_components(&g);
        let mut seen: Vec<usize> = parts.iter().flat_map(|p| p.clause_map.clone()).collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..m).collect::<Vec<_>>());
        for p in &parts {
            for (i, c) in p.game.clauses().iter().enumerate() {
                let orig = &g.clauses()[p.clause_map[i]];
                prop_assert_eq!(c.parity, orig.parity);
                for a in 0..k {
                    prop_assert_eq!(p.question_map[a][c.questions[a] as usize], orig.questions[a]);
                }
            }
        }
    }

    #[test]
    fn abelian_image_depends_only_on_the_product(n in 1usize..4, m in 1usize..7, seed in any::<u64>(),
                                                 idx in prop::collection::vec(0usize..64, 0..10)) {
        let g = generate_random_game(3, n, m, seed).unwrap();
        let mut idx: Vec<usize> = idx.into_iter().map(|i| i % m).collect();
        if idx.len() % 2 == 1 {
            idx.pop();
        }
        let cw = ClauseWord::from_indices(idx);
        let v = abelianize_clause_word(&g, &cw).unwrap();
        let w = reduce_clause_word(&g, &cw).unwrap();
        for a in 0..3 {
            prop_assert_eq!(&v.per_player[a], &common::signed_counts(w.player(a), g.alphabet()));
        }
        prop_assert_eq!(v.sigma, w.sigma_bit());
    }

    #[test]
    fn path_words_end_at_the_representative(n in 1usize..5, m in 1usize..10, seed in any::<u64>()) {
        let g = common::connected_game(3, n, m, seed);
        for alpha in 0..3 {
            for beta in (0..3).filter(|&b| b != alpha) {
                let pg = build_pair_graph(&g, alpha, beta).unwrap();
                for q in common::asked(&g, alpha) {
                    let v = Vertex::new(alpha, q);
                    let p = pg.path_word(v).unwrap();
                    let w = reduce_clause_word(&g, &p).unwrap();
                    prop_assert_eq!(p.len() % 2, 1);
                    prop_assert_eq!(w.player(alpha), &[q][..]);
                    prop_assert_eq!(w.player(beta), &[pg.representative(v).unwrap().unwrap()][..]);
                }
            }
        }
    }

    #[test]
    fn right_inverses_and_gadgets(n in 1usize..5, m in 1usize..10, seed in any::<u64>()) {
        let g = common::connected_game(3, n, m, seed);
        let t = HomomorphismTable::new(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (a, b) in [(0, 1), (1, 0), (2, 0), (2, 1)] {
            common::checks::pair_inverse(&t, a, b, &mut rng).map_err(TestCaseError::fail)?;
        }
        for beta in 0..2 {
            common::checks::gadget_map(&t, beta, &mut rng).map_err(TestCaseError::fail)?;
            for q in common::asked(&g, 2) {
                common::checks::gadget_word(&t, beta, q).map_err(TestCaseError::fail)?;
            }
        }
        let v = common::even_word(&mut rng, &g, 0, 5);
        let w = reduce_clause_word(&g, &t.simple_right_inverse(0, &v).unwrap()).unwrap();
        prop_assert_eq!(w.player(0).to_vec(), reduce_letters(&v));
    }

    #[test]
    fn decider_matches_merp_and_small_witnesses(k in 2usize..5, n in 1usize..4, m in 1usize..7, seed in any::<u64>()) {
        let g = generate_random_game(k, n, m, seed).unwrap();
        let out = decide_mod_k(&g);
        let merp = solve_merp(&g);
        prop_assert_eq!(out.member, merp.is_none());
        if let Some(z) = &out.obstruction_z {
            prop_assert!(is_valid_obstruction(&g, z));
            let w = witness_clause_word(&g, z).unwrap();
            prop_assert!(abelianize_clause_word(&g, &w).unwrap().is_sigma());
        }
        if let Some(s) = &merp {
            prop_assert!(verify_merp_symbolic(&g, s).unwrap());
            prop_assert!((simulate_merp_value(&g, s).unwrap().value - 1.0).abs() <= 1e-9);
        }
        if m <= 5 {
            let brute = box_vectors(m, 2).into_iter().any(|z| {
                let z: Vec<BigInt> = z.into_iter().map(BigInt::from).collect();
                is_valid_obstruction(&g, &z)
            });
            if brute {
                prop_assert!(out.member);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdicts_carry_matching_certificates(k in 2usize..5, n in 1usize..4, m in 1usize..8, seed in any::<u64>()) {
        let g = generate_random_game(k, n, m, seed).unwrap();
        let v = decide(&g, &Default::default()).unwrap();
        match (&v.status, &v.certificate) {
            (Status::Perfect | Status::ClassicallyPerfect, Certificate::Merp(_)) => {}
            (Status::NotPerfect, Certificate::Refutation { sigma_word, .. }) => {
                prop_assert_eq!(k, 3);
                prop_assert!(reduce_clause_word(&g, sigma_word).unwrap().is_sigma());
            }
            (Status::Inconclusive, Certificate::Obstruction { .. }) => prop_assert_ne!(k, 3),
            other => prop_assert!(false, "unexpected pairing {:?}", other.0),
        }
        let text = v.certificate.to_json(Some(v.status)).unwrap();
        let back = Certificate::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(Some(v.status)).unwrap(), text);
    }
}
