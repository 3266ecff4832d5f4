// Scratch verification of the norm-3/2 dual vector outside the rank-20
// M-family lattice, built from the [3] glue coset of the D6 component.

use qlat::construct::{self, RootFamily, RootLatticeId};
use qlat::rat::{format_rat, rat, Rat};
use qlat::{lattice, Limits, RatMat};

#[test]
#[ignore]
fn witness_three_halves_outside_m20() {
    let m20 = construct::m_family(2).unwrap();
    let amb = m20.ambient().expect("glued lattice carries ambient");
    // Ambient of M20 = (Z^14 perp <7>) perp Z^6. The vector is zero on the
    // M14 part and the glue coset [3] = (1/2,...,1/2,-1/2) on the D6 part.
    let mut v = vec![Rat::from_integer(0.into()); 21];
    for x in v.iter_mut().skip(15).take(5) {
        *x = rat(1, 2);
    }
    v[20] = rat(-1, 2);
    let row = RatMat::from_rows(vec![v]);
    let q = row.mul(&amb.gram).mul_transpose(&row).at(0, 0).clone();
    println!("Q(v) = {}", format_rat(&q));
    assert_eq!(q, rat(3, 2));
    // Dual coordinates: B(v, basis_j) must all be integers (v in the dual).
    let dual_coords = row.mul(&amb.gram).mul_transpose(&amb.generators);
    println!("dual coords integral: {}", dual_coords.is_integral());
    assert!(dual_coords.is_integral());
    // Basis coordinates: must NOT all be integers (v not in the lattice).
    let ginv = m20.gram().inverse().unwrap();
    let basis_coords = dual_coords.mul(&ginv);
    println!("basis coords integral: {}", basis_coords.is_integral());
    assert!(!basis_coords.is_integral());
    // Same check at k = 3 (rank 24): the [3] coset of D10 has norm 10/4,
    // so no 3/2 vector arises and the outside minimum is 5/2.
    let m24 = construct::m_family(3).unwrap();
    let out = qlat::shortvec::dual_minimum_outside(&m24, &Limits::default()).unwrap();
    println!("outside minimum at k=3: {}", format_rat(&out));
    assert_eq!(out, rat(5, 2));
    let _ = (lattice::discriminant(&m20), RootLatticeId::new(RootFamily::D, 6));
}
