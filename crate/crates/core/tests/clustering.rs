use kernelbench_core::clustering::{adjusted_rand_index, rand_index, ward_cluster, ward_dendrogram, Partition};
use kernelbench_core::Matrix;
use proptest::prelude::*;

fn squared_euclidean(points: &[(f64, f64)]) -> Matrix {
    let n = points.len();
    Matrix::from_fn(n, n, |i, j| (points[i].0 - points[j].0).powi(2) + (points[i].1 - points[j].1).powi(2))
}

fn points(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 2..max)
}

fn labels(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..k, n)
}

proptest! {
    #[test]
    fn ari_is_symmetric_and_relabel_invariant(a in labels(15, 4), b in labels(15, 3), shift in 1usize..9) {
        let (pa, pb) = (Partition::from_labels(&a), Partition::from_labels(&b));
        let ab = adjusted_rand_index(&pa, &pb).unwrap();
        prop_assert_eq!(ab, adjusted_rand_index(&pb, &pa).unwrap());
        let renamed: Vec<usize> = a.iter().map(|&l| (l + shift) * 7).collect();
        let pr = Partition::from_labels(&renamed);
        prop_assert!((adjusted_rand_index(&pr, &pb).unwrap() - ab).abs() < 1e-12);
        prop_assert_eq!(adjusted_rand_index(&pa, &pa).unwrap(), 1.0);
        prop_assert!(ab <= 1.0 + 1e-12);
        let ri = rand_index(&pa, &pb).unwrap();
        prop_assert!((0.0..=1.0).contains(&ri));
    }

    #[test]
    fn ward_ignores_uniform_scaling(pts in points(20), c in 0.01f64..100.0) {
        let d = squared_euclidean(&pts);
        let k = 1 + pts.len() / 3;
        prop_assert_eq!(ward_cluster(&d, k).unwrap(), ward_cluster(&(d * c), k).unwrap());
    }

    #[test]
    fn ward_cuts_are_nested(pts in points(20)) {
        let dg = ward_dendrogram(&squared_euclidean(&pts)).unwrap();
        prop_assert_eq!(dg.inversions(), 0);
        for k in 2..=pts.len() {
            let fine = dg.cut(k).unwrap();
            let coarse = dg.cut(k - 1).unwrap();
            prop_assert_eq!(fine.k(), k);
            // Every fine cluster lies inside one coarse cluster.
            for i in 0..pts.len() {
                for j in 0..pts.len() {
                    if fine.labels()[i] == fine.labels()[j] {
                        prop_assert_eq!(coarse.labels()[i], coarse.labels()[j]);
                    }
                }
            }
        }
    }
}
