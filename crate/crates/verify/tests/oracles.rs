use kernelbench_core::Matrix;
use kernelbench_verify::oracles::{ari_pair_counting, exp_taylor, hop_distances, mann_whitney_auc, neumann_series, ward_brute_force};

#[test]
fn pair_counting_hand_values() {
    assert_eq!(ari_pair_counting(&[0, 0, 1, 1], &[1, 1, 0, 0]), 1.0);
    assert!((ari_pair_counting(&[0, 0, 1, 1], &[0, 1, 0, 1]) + 0.5).abs() < 1e-15);
}

#[test]
fn brute_force_ward_on_a_line() {
    let x = [0.0, 1.0, 5.0, 6.0, 20.0];
    let d = Matrix::from_fn(5, 5, |i, j| (x[i] - x[j]) * (x[i] - x[j]));
    assert_eq!(ward_brute_force(&d, 2), vec![0, 0, 0, 0, 1]);
    assert_eq!(ward_brute_force(&d, 3), vec![0, 0, 1, 1, 2]);
}

#[test]
fn mann_whitney_counts_ties_half() {
    let d = Matrix::from_fn(4, 4, |i, j| if i == j { 0.0 } else { 1.0 });
    assert_eq!(mann_whitney_auc(&d, &[0, 0, 1, 1]), 0.5);
}

#[test]
fn series_on_a_single_edge() {
    let a = Matrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    // (I - tA)^{-1} = [[1, t], [t, 1]] / (1 - t^2)
    let n = neumann_series(&a, 0.5);
    assert!((n[(0, 1)] - 0.5 / 0.75).abs() < 1e-14);
    // exp(tA) = [[cosh t, sinh t], [sinh t, cosh t]]
    let e = exp_taylor(&(a * 2.0));
    assert!((e[(0, 0)] - 2f64.cosh()).abs() < 1e-13);
    assert!((e[(0, 1)] - 2f64.sinh()).abs() < 1e-13);
}

#[test]
fn hops_on_a_path() {
    let a = Matrix::from_fn(4, 4, |i, j| if i.abs_diff(j) == 1 { 1.0 } else { 0.0 });
    assert_eq!(hop_distances(&a)[(0, 3)], 3.0);
}
