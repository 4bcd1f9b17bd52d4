//! Fixture ideals shared by the benchmarks.

use frobpow_core::MonomialIdeal;

pub fn square_cube() -> MonomialIdeal {
    MonomialIdeal::from_exponents(&[&[2, 2, 0], &[0, 3, 3]]).expect("valid ideal")
}

pub fn three_generators() -> MonomialIdeal {
    MonomialIdeal::from_exponents(&[&[3, 1, 0], &[0, 2, 2], &[1, 0, 3]]).expect("valid ideal")
}

pub fn height_one() -> MonomialIdeal {
    MonomialIdeal::from_exponents(&[&[3, 3, 3, 0], &[4, 0, 0, 1]]).expect("valid ideal")
}
