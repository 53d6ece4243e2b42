use iccr_core::lda_core::{
    double_shift, down_shift, lda_outputs, solve_double_shift, BitVec, LdaChannelParams, LdaError,
};
use proptest::prelude::*;
use rand::Rng;

fn bitvec(max_len: usize) -> impl Strategy<Value = BitVec> {
    (1..=max_len).prop_flat_map(|n| proptest::collection::vec(0u8..2, n).prop_map(|b| BitVec::from_bits(&b)))
}

fn same_len_pair(max_len: usize) -> impl Strategy<Value = (BitVec, BitVec)> {
    (1..=max_len).prop_flat_map(|n| {
        let v = || proptest::collection::vec(0u8..2, n).prop_map(|b| BitVec::from_bits(&b));
        (v(), v())
    })
}

fn random_bits(len: usize, rng: &mut impl rand::Rng) -> BitVec {
    let mut v = BitVec::zeros(len);
    for i in 0..len {
        v.set(i, rng.gen());
    }
    v
}

proptest! {
    #[test]
    fn shifts_compose(x in bitvec(150), a in 0usize..160, b in 0usize..160) {
        prop_assert_eq!(down_shift(&down_shift(&x, a), b), down_shift(&x, a + b));
    }

    #[test]
    fn shift_by_length_is_zero(x in bitvec(150)) {
        prop_assert!(down_shift(&x, x.len()).is_zero());
    }

    #[test]
    fn shift_is_linear((x, y) in same_len_pair(150), k in 0usize..160) {
        let lhs = down_shift(&x.xor(&y).unwrap(), k);
        let rhs = down_shift(&x, k).xor(&down_shift(&y, k)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn shift_moves_levels(x in bitvec(150), k in 0usize..160) {
        let y = down_shift(&x, k);
        for i in 0..x.len() {
            let expect = i >= k && x.get(i - k);
            prop_assert_eq!(y.get(i), expect);
        }
    }

    #[test]
    fn double_shift_round_trip(m in 1usize..40, lo in 0usize..40, swap in any::<bool>(), seed in any::<u64>()) {
        let lo = lo % m;
        let (na, nb) = if swap { (lo, m) } else { (m, lo) };
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let u = random_bits(m, &mut rng);
        let y = double_shift(m, na, nb, &u).unwrap();
        prop_assert_eq!(solve_double_shift(m, na, nb, &y).unwrap(), u);
    }
}

#[test]
fn outputs_are_linear_over_random_triples() {
    let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(7);
    for _ in 0..1000 {
        let ns = rng.gen_range(0..12);
        let ni = rng.gen_range(0..12);
        let nc = rng.gen_range(0..12);
        let p = LdaChannelParams::symmetric(ns, ni, nc);
        let m = p.m();
        let a: Vec<BitVec> = (0..3).map(|_| random_bits(m, &mut rng)).collect();
        let b: Vec<BitVec> = (0..3).map(|_| random_bits(m, &mut rng)).collect();
        let s: Vec<BitVec> = a.iter().zip(&b).map(|(x, y)| x.xor(y).unwrap()).collect();
        let (ya1, ya2) = lda_outputs(&p, &a[0], &a[1], &a[2]).unwrap();
        let (yb1, yb2) = lda_outputs(&p, &b[0], &b[1], &b[2]).unwrap();
        let (ys1, ys2) = lda_outputs(&p, &s[0], &s[1], &s[2]).unwrap();
        assert_eq!(ys1, ya1.xor(&yb1).unwrap());
        assert_eq!(ys2, ya2.xor(&yb2).unwrap());
    }
}

#[test]
fn basis_inversion_exhaustive_up_to_16() {
    for m in 1..=16usize {
        for lo in 0..m {
            for (na, nb) in [(m, lo), (lo, m)] {
                for v in 0..(1u64 << m) {
                    let u = BitVec::from_u64(m, v);
                    let y = double_shift(m, na, nb, &u).unwrap();
                    assert_eq!(solve_double_shift(m, na, nb, &y).unwrap(), u, "m={m} na={na} nb={nb}");
                }
            }
        }
    }
}

#[test]
fn singular_double_shift_is_rejected() {
    let y = BitVec::zeros(4);
    assert!(matches!(solve_double_shift(4, 2, 2, &y), Err(LdaError::SingularOperator { .. })));
    assert!(matches!(solve_double_shift(4, 3, 1, &y), Err(LdaError::SingularOperator { .. })));
    // Strengths 3 and 1 below m = 4 both shift the bottom level out.
    let k = BitVec::from_bits(&[0, 0, 0, 1]);
    assert!(double_shift(4, 3, 1, &k).unwrap().is_zero());
}

#[test]
fn length_and_strength_errors() {
    let p = LdaChannelParams::symmetric(3, 2, 1);
    let x = BitVec::zeros(3);
    let short = BitVec::zeros(2);
    assert!(matches!(lda_outputs(&p, &x, &short, &x), Err(LdaError::LengthMismatch { expected: 3, got: 2 })));
    assert!(matches!(double_shift(3, 4, 1, &x), Err(LdaError::StrengthTooLarge { n: 4, m: 3 })));
    assert!(x.xor(&short).is_err());
}

#[test]
fn single_link_example() {
    // ns = 3, no cross or relay link: y1 is x1 unshifted.
    let p = LdaChannelParams::symmetric(3, 0, 0);
    let x1 = BitVec::from_bits(&[1, 0, 1]);
    let z = BitVec::zeros(3);
    let (y1, y2) = lda_outputs(&p, &x1, &z, &z).unwrap();
    assert_eq!(y1, x1);
    assert!(y2.is_zero());
    let p = LdaChannelParams::symmetric(3, 1, 0);
    let (_, y2) = lda_outputs(&p, &x1, &z, &z).unwrap();
    assert_eq!(y2.to_bits(), vec![0, 0, 1]);
}
