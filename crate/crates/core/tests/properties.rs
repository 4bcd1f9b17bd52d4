mod common;

use common::q;
use frobpow_core::base_p::{carry_free_sum, expand, Representation};
use frobpow_core::fractal::subdivision_cells;
use frobpow_core::{
    closed_member, jumps_unit_interval, lambda_b, open_member, parse_ideal, power_at, sierpinski_points,
    skoda_reduce, CriticalSolver, Monomial, MonomialIdeal, Oracle, Ring, SimplexSpec,
};
use num_rational::BigRational;
use proptest::prelude::*;

fn ideal_strategy(max_exp: u64) -> impl Strategy<Value = MonomialIdeal> {
    (1usize..=3, 1usize..=3).prop_flat_map(move |(m, n)| {
        prop::collection::vec(prop::collection::vec(0..=max_exp, m), n)
            .prop_filter("no constant generator", |gens| gens.iter().all(|g| g.iter().any(|&x| x > 0)))
            .prop_map(|gens| frobpow_core::minimalize(gens.into_iter().map(Monomial::new).collect()).unwrap())
    })
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

fn box_points(ideal: &MonomialIdeal) -> Vec<Monomial> {
    let a = ideal.exponent_matrix().unwrap();
    let bounds: Vec<u64> = (0..a.rows()).map(|i| a.row_max(i).saturating_sub(1)).collect();
    common::grid(&bounds)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parse_format_round_trip(i in ideal_strategy(5)) {
        let ring = Ring::standard(i.num_vars());
        let text = ring.format_ideal(&i);
        let vars = ring.vars().to_vec();
        let parsed = parse_ideal(&text, Some(&vars)).unwrap();
        prop_assert_eq!(&parsed.ideal, &i);
        let json = serde_json::to_string(&ring.ideal_json(&i)).unwrap();
        prop_assert_eq!(parse_ideal(&json, None).unwrap().ideal, i);
    }

    #[test]
    fn bracket_power_inside_ordinary_power(i in ideal_strategy(3), e in 1u32..=2, p in prime()) {
        let qq = p.pow(e);
        prop_assert!(i.bracket_power(qq).unwrap().is_subset_of(&i.ordinary_power(qq).unwrap()).unwrap());
    }

    #[test]
    fn powers_decrease_in_k(i in ideal_strategy(4), p in prime(), e in 1u32..=3) {
        let oracle = Oracle::new(&i, p).unwrap();
        let qq = p.pow(e);
        let mut prev = oracle.power(0, qq).unwrap();
        prop_assert!(prev.is_unit());
        for k in 1..=qq {
            let cur = oracle.power(k, qq).unwrap();
            prop_assert!(cur.is_subset_of(&prev).unwrap(), "k={}", k);
            prev = cur;
        }
        prop_assert_eq!(prev, i);
    }

    #[test]
    fn member_agrees_with_power(i in ideal_strategy(4), p in prime(), e in 0u32..=2, k_frac in 0.0f64..=1.0) {
        let oracle = Oracle::new(&i, p).unwrap();
        let qq = p.pow(e);
        let k = (k_frac * qq as f64).floor() as u64;
        let power = oracle.power(k, qq).unwrap();
        for b in box_points(&i) {
            prop_assert_eq!(oracle.member(&b, k, qq).unwrap(), power.contains(&b).unwrap());
        }
    }

    #[test]
    fn lambda_matches_membership(i in ideal_strategy(4), p in prime()) {
        let solver = CriticalSolver::new(&i, p).unwrap();
        let oracle = Oracle::new(&i, p).unwrap();
        for b in box_points(&i).into_iter().filter(|b| !i.contains(b).unwrap()) {
            let lambda = solver.lambda_b(&b).unwrap().lambda;
            prop_assert!(lambda > q(0, 1) && lambda <= q(1, 1));
            for e in 0..=3u32 {
                let qq = p.pow(e);
                for k in 0..=qq {
                    prop_assert_eq!(oracle.member(&b, k, qq).unwrap(), q(k as i64, qq as i64) < lambda);
                }
            }
        }
    }

    #[test]
    fn power_at_matches_oracle(i in ideal_strategy(4), p in prime(), e in 1u32..=3, k_frac in 0.0f64..1.0) {
        let qq = p.pow(e);
        let k = (k_frac * qq as f64).floor() as u64;
        let t = q(k as i64, qq as i64);
        prop_assert_eq!(power_at(&i, &t, p).unwrap(), Oracle::new(&i, p).unwrap().power(k, qq).unwrap());
    }

    #[test]
    fn jump_table_is_consistent(i in ideal_strategy(3), p in prime()) {
        let table = jumps_unit_interval(&i, p).unwrap();
        prop_assert_eq!(table.intervals.first().map(|iv| iv.start.clone()), Some(q(0, 1)));
        prop_assert_eq!(table.intervals.last().map(|iv| iv.end.clone()), Some(q(1, 1)));
        for w in table.intervals.windows(2) {
            prop_assert_eq!(&w[0].end, &w[1].start);
            prop_assert!(w[1].ideal.is_subset_of(&w[0].ideal).unwrap());
            prop_assert!(w[1].ideal != w[0].ideal);
        }
        for iv in &table.intervals {
            prop_assert_eq!(&power_at(&i, &iv.start, p).unwrap(), &iv.ideal);
        }
    }

    #[test]
    fn reduction_leaves_leave_the_ideal(i in ideal_strategy(3), extra in prop::collection::vec(0u64..=6, 3)) {
        let b = Monomial::new(extra[..i.num_vars()].to_vec());
        let r = skoda_reduce(&i, &b).unwrap();
        prop_assert!(!i.contains(&r.reduced).unwrap());
        for (leaf, shift) in &r.leaves {
            prop_assert!(!i.contains(leaf).unwrap());
            prop_assert!(*shift <= r.shift || r.branches.len() > 1);
        }
        if !i.contains(&b).unwrap() {
            prop_assert_eq!(r.shift, 0);
            prop_assert_eq!(r.leaves.len(), 1);
        }
    }

    #[test]
    fn outputs_are_exact_expansions(i in ideal_strategy(4), p in prime()) {
        for b in box_points(&i).into_iter().filter(|b| !i.contains(b).unwrap()) {
            let r = lambda_b(&i, &b, p).unwrap();
            prop_assert_eq!(r.expansion.to_rational(), r.lambda.clone());
            let total = r.witness.iter().fold(q(0, 1), |acc, w| acc + w.to_rational());
            prop_assert_eq!(total, r.lambda.clone());
            let longest = r.witness.iter().map(|w| w.preperiod.len() + w.period.len() * 2).max().unwrap();
            let columns: Vec<Vec<u64>> = r.witness.iter().map(|w| (1..=longest).map(|d| w.digit(d)).collect()).collect();
            prop_assert!(carry_free_sum(&columns, p));
        }
    }

    #[test]
    fn open_points_are_closed(p in prime(), num in prop::collection::vec(0u64..25, 1..=3)) {
        let v: Vec<BigRational> = num.iter().map(|&k| q(k as i64, 25)).collect();
        let padic: Vec<_> = num
            .iter()
            .map(|&k| frobpow_core::PAdicRational::from_rational(&q(k as i64, 25), p))
            .collect();
        if padic.iter().all(Option::is_some) {
            let padic: Vec<_> = padic.into_iter().map(Option::unwrap).collect();
            if open_member(&padic, p).unwrap() {
                prop_assert!(closed_member(&v, p).unwrap());
            }
        }
        for x in &v {
            let c = expand(x, p, Representation::Canonical).unwrap();
            prop_assert_eq!(&c.to_rational(), x);
        }
    }
}

#[test]
fn sierpinski_points_are_open_members() {
    for (p, d, depth) in [(2, 2, 4), (3, 2, 2), (5, 1, 2), (2, 3, 2)] {
        for v in sierpinski_points(&SimplexSpec::new(p, d, depth).unwrap()).unwrap() {
            assert!(open_member(&v, p).unwrap());
            let r: Vec<BigRational> = v.iter().map(|x| x.to_rational()).collect();
            assert!(closed_member(&r, p).unwrap());
        }
    }
}

#[test]
fn subdivision_labels_agree_with_powers() {
    // q = 12 is not a power of 3: labels are still checked, memberships are not
    let cases = [
        (common::square_cube(), 12u64, 3u64),
        (common::square_cube(), 9, 3),
        (common::ideal(&[&[3, 1], &[1, 2]]), 8, 2),
    ];
    for (i, qq, p) in cases {
        let a = i.exponent_matrix().unwrap();
        let labels: Vec<Monomial> = subdivision_cells(&i, qq).unwrap().into_iter().map(|c| c.label).collect();
        let oracle = Oracle::new(&i, p).unwrap();
        for u0 in 0..qq {
            for u1 in 0..qq {
                let au = a.apply(&[u0, u1]).unwrap();
                if au.iter().any(|x| x % qq as u128 == 0 && *x > 0) {
                    continue;
                }
                let floor = Monomial::new(au.iter().map(|x| (x / qq as u128) as u64).collect());
                assert!(labels.contains(&floor), "u=({u0},{u1}) label {floor:?}");
                let digits = [u0, u1];
                let split: Vec<Vec<u64>> = digits
                    .iter()
                    .map(|&x| (0..8).map(|j| x / p.pow(j) % p).collect())
                    .collect();
                let is_power_of_p = p.pow(qq.ilog(p)) == qq;
                if is_power_of_p && carry_free_sum(&split, p) {
                    assert!(oracle.power(u0 + u1, qq).unwrap().contains(&floor).unwrap());
                }
            }
        }
    }
}
