use proptest::prelude::*;

use swo::numeric::{frac, int, Rational};
use swo::orderings::{leximin_compare, rdu_value, GFunction, OrderingSpec, RduParams};
use swo::profile::WellbeingProfile;
use swo::propositions::{build_prop4_chain, default_beta_of_alpha, parse_certificate, write_certificate};
use swo::verdict::Verdict;

fn level() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..5).prop_map(|(n, d)| frac(n, d))
}

fn profile(max_len: usize) -> impl Strategy<Value = WellbeingProfile> {
    prop::collection::vec(level(), 1..max_len).prop_map(|v| WellbeingProfile::new(v).unwrap())
}

fn same_size_pair() -> impl Strategy<Value = (WellbeingProfile, WellbeingProfile)> {
    (1usize..8).prop_flat_map(|n| {
        let side = move || prop::collection::vec(level(), n).prop_map(|v| WellbeingProfile::new(v).unwrap());
        (side(), side())
    })
}

proptest! {
    #[test]
    fn profile_display_round_trips(u in profile(20)) {
        let back: WellbeingProfile = u.to_string().parse().unwrap();
        prop_assert_eq!(back, u);
    }

    #[test]
    fn leximin_is_antisymmetric((u, v) in same_size_pair()) {
        prop_assert_eq!(leximin_compare(&u, &v), leximin_compare(&v, &u).flip());
    }

    #[test]
    fn leximin_ignores_replication((u, v) in same_size_pair(), k in 1u64..5) {
        let (uk, vk) = (u.replicate(k).unwrap(), v.replicate(k).unwrap());
        prop_assert_eq!(leximin_compare(&uk, &vk), leximin_compare(&u, &v));
    }

    #[test]
    fn values_ignore_positions(u in profile(12), seed in any::<u64>()) {
        let n = u.len() as usize;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = RduParams::new(frac(3, 2), GFunction::Identity).unwrap();
        let a = rdu_value(&u, &p).unwrap();
        let b = rdu_value(&u.permute(&perm).unwrap(), &p).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.bound + b.bound);
        prop_assert_eq!(leximin_compare(&u, &u.permute(&perm).unwrap()), Verdict::Equivalent);
    }

    #[test]
    fn rdu_block_form_matches_expansion(
        blocks in prop::collection::vec((0i64..40, 1u64..30), 1..6),
        rho_num in 101i64..300,
    ) {
        let rho = frac(rho_num, 100);
        let u = WellbeingProfile::from_blocks(blocks.iter().map(|&(l, c)| (int(l), c))).unwrap();
        let p = RduParams::new(rho.clone(), GFunction::Sqrt).unwrap();
        let got = rdu_value(&u, &p).unwrap();
        let r = rho_num as f64 / 100.0;
        let mut sorted: Vec<f64> = u.iter().map(|x| swo::numeric::to_f64(x)).collect();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let naive: f64 = sorted.iter().enumerate().map(|(i, x)| r.powi(-(i as i32)) * x.sqrt()).sum();
        prop_assert!((got.value - naive).abs() <= got.bound + 1e-12 * naive.abs().max(1.0),
            "block {} vs naive {}", got.value, naive);
    }

    #[test]
    fn ordering_config_round_trips(rho_num in 101i64..500, sqrt in any::<bool>()) {
        let g = if sqrt { GFunction::Sqrt } else { GFunction::Identity };
        let spec = OrderingSpec::Rdu(RduParams::new(frac(rho_num, 100), g).unwrap());
        prop_assert_eq!(OrderingSpec::from_toml(&spec.to_toml()).unwrap(), spec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dominance_certificates_round_trip((u, v) in (1usize..4).prop_flat_map(|n| {
        let side = move || prop::collection::vec(1i64..6, n).prop_map(|v| WellbeingProfile::from_ints(&v).unwrap());
        (side(), side())
    })) {
        prop_assume!(leximin_compare(&u, &v) == Verdict::StrictlyBetter);
        let c = build_prop4_chain(&u, &v, &default_beta_of_alpha).unwrap();
        let text = write_certificate(&c.chain);
        prop_assert_eq!(parse_certificate(&text).unwrap(), c.chain);
    }
}
