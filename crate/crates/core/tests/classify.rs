use liesmall::catalog::{self, CatalogError, ClassLabel, Solvable3};
use liesmall::classify::{
    self, char_orbit_rep, expected_count, find_complement, iso_oracle, Classifier, ClassifyError, IsoWitness,
};
use liesmall::field::{Fe, Field};
use liesmall::liealg::{direct_sum, semidirect_sum, LieAlgebra, LieError, Representation};
use liesmall::linalg::Matrix;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const BUDGET: u64 = classify::DEFAULT_ISO_BUDGET;

fn random_invertible(f: &Field, n: usize, rng: &mut StdRng) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| Fe(rng.gen_range(0..f.q()) as u16)).collect();
        let m = Matrix::from_data(f, n, n, data).unwrap();
        if m.is_invertible() {
            return m;
        }
    }
}

/// `m` maps the basis of `a` to vectors of `b` preserving every bracket.
fn is_isomorphism(a: &LieAlgebra, b: &LieAlgebra, m: &Matrix) -> bool {
    m.is_invertible()
        && (0..a.dim())
            .all(|i| (i + 1..a.dim()).all(|j| m.apply(a.bracket_basis(i, j)) == b.bracket(&m.column(i), &m.column(j))))
}

fn labels(f: &Field, dim: usize) -> Vec<ClassLabel> {
    classify::enumerate_classes(f, dim).unwrap()
}

fn build(s: &str, f: &Field) -> LieAlgebra {
    catalog::build(&ClassLabel::parse(s, f).unwrap(), f).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fingerprint_is_basis_independent(seed in any::<u64>(), which in 0usize..64, p in prop_oneof![Just(2u32), Just(3u32)]) {
        let f = Field::prime(p).unwrap();
        let all: Vec<ClassLabel> = (5..=6).flat_map(|d| labels(&f, d)).collect();
        let label = &all[which % all.len()];
        let Ok(l) = catalog::build(label, &f) else { return Ok(()) };
        let mut rng = StdRng::seed_from_u64(seed);
        let m = random_invertible(&f, l.dim(), &mut rng);
        let moved = l.change_basis(&m).unwrap();
        prop_assert!(is_isomorphism(&moved, &l, &m));
        let c = Classifier::new(&f);
        prop_assert_eq!(c.fingerprint(&l).unwrap(), c.fingerprint(&moved).unwrap());
    }
}

#[test]
fn identification_survives_basis_change() {
    let mut rng = StdRng::seed_from_u64(0x1d);
    for p in [2, 3] {
        let f = Field::prime(p).unwrap();
        let c = Classifier::new(&f);
        for d in 3..=6 {
            for label in labels(&f, d) {
                let Ok(l) = catalog::build(&label, &f) else { continue };
                let moved = l.change_basis(&random_invertible(&f, d, &mut rng)).unwrap();
                let name = label.format(&f);
                // Proven-isomorphic label pairs resolve to either member or to an ambiguity naming both.
                let twins = [("T6.1.3b-delta0", "T6.1.3b-delta1"), ("T6.3.4", "T6.3.5")];
                let twin_of = |x: &str| {
                    twins.iter().find_map(|&(a, b)| {
                        if a == x {
                            Some(b)
                        } else if b == x {
                            Some(a)
                        } else {
                            None
                        }
                    })
                };
                match c.identify(&moved) {
                    Ok(got) => {
                        let got = got.format(&f);
                        assert!(got == name || twin_of(&name) == Some(got.as_str()), "{name} identified as {got}");
                    }
                    Err(ClassifyError::Ambiguous(both)) => {
                        let mut want = vec![name.clone(), twin_of(&name).expect("only twins tie").to_string()];
                        want.sort();
                        let mut both = both;
                        both.sort();
                        assert_eq!(both, want);
                    }
                    Err(e) => panic!("{name}: {e}"),
                }
            }
        }
    }
}

#[test]
fn identify_examples() {
    let f5 = Field::prime(5).unwrap();
    let c = Classifier::new(&f5);
    assert_eq!(c.identify(&catalog::gl2(&f5)).unwrap().format(&f5), "T4.1.gl2");
    let sum = direct_sum(&catalog::sl2(&f5), &catalog::solvable3(&f5, Solvable3::Item2).unwrap()).unwrap();
    assert_eq!(c.identify(&sum).unwrap().format(&f5), "T6.3.1-2");
    let mut rng = StdRng::seed_from_u64(5);
    let w = catalog::witt(&f5, 1);
    let moved = w.change_basis(&random_invertible(&f5, 5, &mut rng)).unwrap();
    assert_eq!(c.identify(&moved).unwrap().format(&f5), "T4.3.1");

    assert!(matches!(c.identify(&LieAlgebra::abelian(&f5, 4)), Err(ClassifyError::Solvable)));
    let big = direct_sum(&catalog::gl2(&f5), &LieAlgebra::abelian(&f5, 3)).unwrap();
    assert!(matches!(c.identify(&big), Err(ClassifyError::UnsupportedDim(7))));
}

#[test]
fn fingerprint_examples() {
    let f3 = Field::prime(3).unwrap();
    let c = Classifier::new(&f3);
    let a = c.fingerprint(&catalog::sl2(&f3)).unwrap();
    let b = c.fingerprint(&catalog::gl2(&f3)).unwrap();
    assert_eq!((a.dim, a.dim_center), (3, 0));
    assert_eq!((b.dim, b.dim_center), (4, 1));

    let f2 = Field::prime(2).unwrap();
    let c = Classifier::new(&f2);
    let d0 = c.fingerprint(&build("T4.2.2-delta0", &f2)).unwrap();
    let d1 = c.fingerprint(&build("T4.2.2-delta1", &f2)).unwrap();
    assert_ne!(d0, d1);
    let json = d0.to_json();
    let keys: Vec<&str> =
        json.split('"').skip(1).step_by(2).filter(|k| k.chars().all(|c| c == '_' || c.is_ascii_lowercase())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

/// Radical dimension 2 with `W(1;2)` acting through `x^(3)∂` by `diag(0, 1)`.
fn witt_with_diagonal_action(f: &Field) -> LieAlgebra {
    let w = catalog::witt(f, 2);
    let mut acts = vec![Matrix::zeros(f, 2, 2); 4];
    acts[3] = Matrix::from_ints(f, &[&[0, 0], &[0, 1]]);
    let rep = Representation::new(&w, acts).unwrap();
    semidirect_sum(&w, &rep, &LieAlgebra::abelian(f, 2)).unwrap()
}

#[test]
fn diagonal_action_has_no_label() {
    // The companion family [[0, xi], [1, 1]] covers xi != 0 only; xi = 0 is diag(0, 1) up to conjugacy.
    for f in [Field::prime(2).unwrap(), Field::new(2, 2, None).unwrap()] {
        let l = witt_with_diagonal_action(&f);
        let c = Classifier::new(&f);
        assert!(matches!(c.identify(&l), Err(ClassifyError::NoMatch(_))));
        for label in labels(&f, 6) {
            let other = catalog::build(&label, &f).unwrap();
            if c.fingerprint(&other).unwrap() == c.fingerprint(&l).unwrap() {
                assert_eq!(iso_oracle(&l, &other, BUDGET).unwrap(), IsoWitness::NotIsomorphic);
            }
        }
    }
}

#[test]
fn delta_variants_of_w_with_nonabelian_radical_coincide() {
    // x^(3)∂ -> x^(3)∂ + h, identity elsewhere, on the basis (∂, x∂, x^(2)∂, x^(3)∂, h, u).
    let f2 = Field::prime(2).unwrap();
    let a = build("T6.1.3b-delta0", &f2);
    let b = build("T6.1.3b-delta1", &f2);
    let mut m = Matrix::identity(&f2, 6);
    m.set(4, 3, Fe::ONE);
    assert!(is_isomorphism(&a, &b, &m));
}

#[test]
fn characteristic_three_modules_coincide() {
    let f3 = Field::prime(3).unwrap();
    let a = build("T6.3.4", &f3);
    let b = build("T6.3.5", &f3);
    let IsoWitness::Isomorphic(m) = iso_oracle(&a, &b, BUDGET).unwrap() else { panic!("expected a witness") };
    assert!(is_isomorphism(&a, &b, &m));
}

/// Dimensions of the scalar 2-cocycle and 2-coboundary spaces of `l`.
fn cocycle_dims(l: &LieAlgebra) -> (usize, usize) {
    let f = l.field();
    let n = l.dim();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let index = |a: usize, b: usize| -> (usize, bool) {
        if a < b {
            (pairs.iter().position(|&p| p == (a, b)).unwrap(), false)
        } else {
            (pairs.iter().position(|&p| p == (b, a)).unwrap(), true)
        }
    };
    // omega([x, y], z) as a linear form in the unknowns omega(b_a, b_b), a < b.
    let term = |x: usize, y: usize, z: usize, row: &mut Vec<Fe>| {
        for (k, &c) in l.bracket_basis(x, y).iter().enumerate() {
            if c.is_zero() || k == z {
                continue;
            }
            let (idx, neg) = index(k, z);
            let c = if neg { f.neg(c) } else { c };
            row[idx] = f.add(row[idx], c);
        }
    };
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut row = vec![Fe::ZERO; pairs.len()];
                term(i, j, k, &mut row);
                term(j, k, i, &mut row);
                term(k, i, j, &mut row);
                rows.push(row);
            }
        }
    }
    let z2 = pairs.len() - Matrix::from_rows(f, &rows).unwrap().rank();
    // Coboundaries: omega(b_i, b_j) = lambda([b_i, b_j]) for a linear form lambda.
    let b2 = Matrix::from_rows(f, &pairs.iter().map(|&(i, j)| l.bracket_basis(i, j).to_vec()).collect::<Vec<_>>())
        .unwrap()
        .rank();
    (z2, b2)
}

#[test]
fn l1_has_one_nontrivial_central_extension_class() {
    let f3 = Field::prime(3).unwrap();
    let l1 = catalog::l1_nonsplit(&f3).unwrap();
    assert_eq!(cocycle_dims(&l1), (6, 5));
    // [v0, v1] = z alone is not a cocycle.
    let err = catalog::l1_central_ext(&f3, 0, 1).unwrap_err();
    assert_eq!(err, CatalogError::Lie(LieError::Cocycle(0, 1, 3)));
    assert!(catalog::l1_central_ext(&f3, 1, 0).is_ok());
}

#[test]
fn nonisomorphic_pairs() {
    let f3 = Field::prime(3).unwrap();
    let d1 = build("T6.4.d1", &f3);
    let d2 = build("T6.4.d2", &f3);
    assert_eq!(iso_oracle(&d1, &d2, BUDGET).unwrap(), IsoWitness::NotIsomorphic);
    let IsoWitness::Isomorphic(m) = iso_oracle(&d1, &d1, BUDGET).unwrap() else { panic!() };
    assert!(is_isomorphism(&d1, &d1, &m));
    let s = direct_sum(&catalog::sl2(&f3), &catalog::sl2(&f3)).unwrap();
    let h = direct_sum(&catalog::solvable3(&f3, Solvable3::Heisenberg).unwrap(), &catalog::sl2(&f3)).unwrap();
    assert_eq!(iso_oracle(&s, &h, BUDGET).unwrap(), IsoWitness::NotIsomorphic);
    assert!(matches!(iso_oracle(&s, &catalog::sl2(&f3), BUDGET), Err(ClassifyError::Mismatch)));
}

#[test]
fn complements() {
    let f3 = Field::prime(3).unwrap();
    let split = build("T4.3.2c", &f3);
    let rad = split.radical().unwrap();
    let comp = find_complement(&split, &rad, BUDGET).unwrap().expect("split extension");
    assert!(split.is_subalgebra(&comp) && comp.intersect(&rad).is_zero() && comp.dim() + rad.dim() == 5);
    let nonsplit = build("T4.3.3", &f3);
    assert_eq!(find_complement(&nonsplit, &nonsplit.radical().unwrap(), BUDGET).unwrap(), None);
}

#[test]
fn counts() {
    assert_eq!(expected_count(2, 2, 6).unwrap(), 19);
    assert_eq!(expected_count(3, 3, 6).unwrap(), 24);
    assert_eq!(expected_count(7, 7, 5).unwrap(), 3);
    assert!(matches!(expected_count(2, 2, 7), Err(ClassifyError::UnsupportedDim(7))));
    // Image of t -> t^3 + t^2 over F_3, by scanning.
    let f3 = Field::prime(3).unwrap();
    let mut image: Vec<Fe> = f3.elements().map(|t| f3.add(f3.pow(t, 3), f3.pow(t, 2))).collect();
    image.sort();
    image.dedup();
    assert_eq!(image, vec![Fe(0), Fe(2)]);
}

#[test]
fn character_orbits() {
    let f3 = Field::prime(3).unwrap();
    let rep = char_orbit_rep(&f3, [Fe(1), Fe(0), Fe(2)]).unwrap();
    assert_eq!((rep.xi, rep.realizable), (Fe(2), true));
    let rep = char_orbit_rep(&f3, [Fe(1), Fe(0), Fe(1)]).unwrap();
    assert_eq!((rep.xi, rep.realizable), (Fe(1), false));
    assert!(matches!(char_orbit_rep(&f3, [Fe(0); 3]), Err(ClassifyError::ZeroCharacter)));
    // (0, 0, t): the orbit under sigma_{alpha, beta} contains (1, 0, xi) for the returned xi.
    for t in [Fe(1), Fe(2)] {
        let chi = [Fe(0), Fe(0), t];
        let xi = char_orbit_rep(&f3, chi).unwrap().xi;
        let reached = f3
            .elements()
            .filter(|a| !a.is_zero())
            .any(|a| f3.elements().any(|b| classify::character_after_sigma(&f3, chi, a, b) == [Fe(1), Fe(0), xi]));
        assert!(reached);
    }
}

#[test]
fn sl2_elements_over_f3() {
    let f3 = Field::prime(3).unwrap();
    let one = Fe(1);
    assert!(classify::sl2_is_toral(&f3, [Fe(0), one, Fe(0)]).unwrap());
    assert!(classify::sl2_is_ad_nilpotent(&f3, [one, Fe(0), Fe(0)]).unwrap());
    assert!(classify::sl2_is_toral(&f3, [one, Fe(0), one]).unwrap());
    let s = catalog::sl2(&f3);
    let ad = s.ad(&[one, Fe(0), one]);
    assert_eq!(ad.pow(3), ad);
    assert!(matches!(
        classify::sl2_is_toral(&Field::prime(5).unwrap(), [one; 3]),
        Err(ClassifyError::WrongCharacteristic { .. })
    ));
    assert!(matches!(classify::sl2_sigma(&f3, Fe(0), one), Err(ClassifyError::ZeroAlpha)));
    let sigma = classify::sl2_sigma(&f3, one, Fe(0)).unwrap();
    assert_eq!(sigma.mul(&sigma), Matrix::identity(&f3, 3));
    assert!(classify::check_automorphism(&s, &Matrix::identity(&f3, 3)));
}

#[test]
fn solvable_three_dimensional_classes() {
    let f5 = Field::prime(5).unwrap();
    let l = catalog::solvable3(&f5, Solvable3::Diagonal).unwrap();
    assert_eq!(l.bracket_basis(0, 1), &[Fe(0), Fe(1), Fe(0)]);
    assert_eq!(l.bracket_basis(0, 2), &[Fe(0), Fe(0), Fe(4)]);
    assert!(catalog::solvable3(&f5, Solvable3::Jordan).is_err());
    assert_eq!(Solvable3::enumerate(&Field::prime(2).unwrap()).len(), 6);
    assert!(matches!(classify::classify_solvable3(&catalog::sl2(&f5)), Err(ClassifyError::NotSolvable)));
}
