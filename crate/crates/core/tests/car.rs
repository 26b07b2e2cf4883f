use fermi_rdm::fock_basis::{enumerate_sector, operator_matrix, LadderOp};
use fermi_rdm::{CMatrix, Complex64};

fn c(k: usize, m: usize) -> CMatrix {
    operator_matrix(&[LadderOp::annihilate(k)], m).unwrap()
}

fn cdag(k: usize, m: usize) -> CMatrix {
    operator_matrix(&[LadderOp::create(k)], m).unwrap()
}

fn anti(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

#[test]
fn canonical_anticommutation_relations() {
    // entries are 0 and +-1, so every product is exact
    for m in 1..=6 {
        let dim = 1 << m;
        let id = CMatrix::identity(dim, dim);
        let zero = CMatrix::zeros(dim, dim);
        for k in 0..m {
            for l in 0..m {
                let expected = if k == l { id.clone() } else { zero.clone() };
                assert_eq!(anti(&c(k, m), &cdag(l, m)), expected, "M={m} k={k} l={l}");
                assert_eq!(anti(&c(k, m), &c(l, m)), zero);
                assert_eq!(anti(&cdag(k, m), &cdag(l, m)), zero);
            }
        }
    }
}

#[test]
fn adjoint_of_annihilation_is_creation() {
    for m in 1..=5 {
        for k in 0..m {
            assert_eq!(c(k, m).adjoint(), cdag(k, m));
        }
    }
}

#[test]
fn number_operator_is_n_on_each_sector() {
    for m in 1..=6 {
        let dim = 1 << m;
        let mut number = CMatrix::zeros(dim, dim);
        for k in 0..m {
            number += operator_matrix(&[LadderOp::create(k), LadderOp::annihilate(k)], m).unwrap();
        }
        for n in 0..=m {
            let basis = enumerate_sector(m, n).unwrap();
            for a in basis.iter() {
                for b in basis.iter() {
                    let want = if a == b { n as f64 } else { 0.0 };
                    assert_eq!(
                        number[(a.bits as usize, b.bits as usize)],
                        Complex64::new(want, 0.0)
                    );
                }
            }
        }
    }
}

#[test]
fn canonical_slater_has_plus_sign() {
    // c_0* c_1* c_2* |0> = +|0b111>
    let m = 4;
    let word = [LadderOp::create(0), LadderOp::create(1), LadderOp::create(2)];
    let op = operator_matrix(&word, m).unwrap();
    assert_eq!(op[(0b0111, 0)], Complex64::new(1.0, 0.0));
    // reversed order picks up the sign of the reversal permutation
    let word = [LadderOp::create(2), LadderOp::create(1), LadderOp::create(0)];
    let op = operator_matrix(&word, m).unwrap();
    assert_eq!(op[(0b0111, 0)], Complex64::new(-1.0, 0.0));
}

#[test]
fn rank_unrank_over_whole_sectors() {
    for m in 0..=12 {
        for n in 0..=m {
            let basis = enumerate_sector(m, n).unwrap();
            for (i, mask) in basis.iter().enumerate() {
                assert_eq!(basis.rank(mask), Some(i));
                assert_eq!(basis.unrank(i), Some(mask));
            }
        }
    }
}
