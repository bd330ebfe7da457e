use engel_core::intlin::{hnf, reduce_vector, IntMatrix, LatticeBuilder};
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| (Just(c), prop::collection::vec(prop::collection::vec(-30i64..30, c), r)))
}

proptest! {
    #[test]
    fn hnf_is_idempotent_and_spans_the_input((c, rows) in matrix()) {
        let m = IntMatrix::from_rows(c, &rows).unwrap();
        let h = hnf(&m);
        prop_assert_eq!(hnf(&h.matrix), h.clone());
        for r in m.to_rows() {
            prop_assert!(reduce_vector(&h, &r).unwrap().iter().all(Zero::is_zero));
        }
        for (k, &p) in h.pivots.iter().enumerate() {
            let piv = h.matrix.get(k, p).clone();
            prop_assert!(piv > BigInt::zero());
            for above in 0..k {
                let x = h.matrix.get(above, p);
                prop_assert!(*x >= BigInt::zero() && *x < piv);
            }
        }
    }

    #[test]
    fn unimodular_row_operations_keep_the_form((c, rows) in matrix(), i in 0usize..6, j in 0usize..6, k in -5i64..5) {
        let h = hnf(&IntMatrix::from_rows(c, &rows).unwrap());
        let mut changed = rows.clone();
        let (i, j) = (i % rows.len(), j % rows.len());
        if i != j {
            let add: Vec<i64> = changed[j].iter().map(|x| x * k).collect();
            for (a, b) in changed[i].iter_mut().zip(add) {
                *a += b;
            }
        }
        changed.reverse();
        prop_assert_eq!(hnf(&IntMatrix::from_rows(c, &changed).unwrap()), h);
    }

    #[test]
    fn builder_matches_batch_form((c, rows) in matrix(), scale in prop::sample::select(vec![1i64, 1 << 40, i64::MAX / 3])) {
        let big: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x.saturating_mul(scale)).collect()).collect();
        let mut b = LatticeBuilder::new(c);
        for r in &big {
            b.insert(r);
        }
        prop_assert_eq!(b.finish(), hnf(&IntMatrix::from_rows(c, &big).unwrap()));
    }
}
