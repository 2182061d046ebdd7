mod common;

use common::criteria::{self, dp_fair, enumerate_fair, fair};
use moneygraph::pegsim;
use num_rational::BigRational;

#[test]
fn three_eighths() {
    assert_eq!(enumerate_fair(2, 4), BigRational::new(3.into(), 8.into()));
    criteria::peg_oracle(100_000).unwrap();
}

#[test]
fn path_count_and_dp_agree() {
    for reserves in 1..=4 {
        for h in [1, 2, 5, 9, 14] {
            assert_eq!(enumerate_fair(reserves, h), dp_fair(reserves as usize, h), "R={reserves} h={h}");
            assert_eq!(pegsim::absorption_oracle(reserves, &fair(), h).unwrap(), dp_fair(reserves as usize, h));
        }
    }
}

#[test]
fn depletion_grows_with_horizon() {
    for reserves in 1..=5usize {
        let ps: Vec<BigRational> = [10, 100, 1000].iter().map(|&h| dp_fair(reserves, h)).collect();
        assert!(ps.windows(2).all(|w| w[0] < w[1]), "R={reserves}");
        assert_eq!(pegsim::absorption_dp(reserves as i64, &fair(), 1000).unwrap(), ps[2]);
    }
}
