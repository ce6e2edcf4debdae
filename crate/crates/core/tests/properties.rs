//! Randomized laws for the parameter algebra and its notation.

use num_rational::Rational64;
use proptest::prelude::*;

use periodlab::distinction::{factors_through_sp_symbolic, is_x_elliptic_symbolic};
use periodlab::groups::builtin_catalog;
use periodlab::notation::{parse_param, print_param};
use periodlab::param::{dimension, dual_segment, is_tempered, Segment, WDParameter};

fn segment() -> impl Strategy<Value = Segment> {
    let names: Vec<String> = builtin_catalog().labels().map(|l| l.name.clone()).collect();
    (prop::sample::select(names), 1u32..=5, -6i64..=6, 1i64..=3).prop_map(|(name, k, num, den)| {
        let label = builtin_catalog().label(&name).unwrap();
        Segment::twisted(label, k, Rational64::new(num, den)).unwrap()
    })
}

fn parameter() -> impl Strategy<Value = Vec<Segment>> {
    prop::collection::vec(segment(), 0..6)
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(segments in parameter()) {
        let p = WDParameter::new(segments).unwrap();
        let printed = print_param(&p);
        let parsed = parse_param(&printed, &builtin_catalog()).unwrap();
        prop_assert_eq!(&parsed, &p);
        prop_assert_eq!(print_param(&parsed), printed);
    }

    #[test]
    fn direct_sum_ignores_order(segments in parameter(), seed in any::<u64>()) {
        let mut shuffled = segments.clone();
        let n = shuffled.len();
        if n > 1 {
            for i in 0..n {
                shuffled.swap(i, (seed as usize).wrapping_add(i * 7) % n);
            }
        }
        let a = WDParameter::new(segments).unwrap();
        let b = WDParameter::new(shuffled).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(print_param(&a), print_param(&b));
    }

    #[test]
    fn direct_sum_adds_dimensions(left in parameter(), right in parameter()) {
        let joined = WDParameter::new(left.iter().chain(&right).cloned().collect()).unwrap();
        let l = WDParameter::new(left).unwrap();
        let r = WDParameter::new(right).unwrap();
        prop_assert_eq!(dimension(&joined), dimension(&l) + dimension(&r));
        prop_assert_eq!(is_tempered(&joined), is_tempered(&l) && is_tempered(&r));
    }

    #[test]
    fn duality_is_an_involution(s in segment()) {
        let c = builtin_catalog();
        let d = dual_segment(&s, &c).unwrap();
        prop_assert_eq!(d.dimension(), s.dimension());
        prop_assert_eq!(d.twist, -s.twist);
        prop_assert_eq!(dual_segment(&d, &c).unwrap(), s);
    }

    #[test]
    fn adding_a_segment_and_its_dual_keeps_the_image_symplectic(base in parameter(), s in segment()) {
        let c = builtin_catalog();
        let base = WDParameter::new(base).unwrap();
        if factors_through_sp_symbolic(&base) {
            let mut segments = base.segments().to_vec();
            segments.push(s.clone());
            segments.push(dual_segment(&s, &c).unwrap());
            let grown = WDParameter::new(segments).unwrap();
            prop_assert!(factors_through_sp_symbolic(&grown));
            prop_assert!(!is_x_elliptic_symbolic(&grown));
        }
    }
}
