//! Inputs shared by the benchmarks.

use dicing_core::unimod::e5;
use dicing_core::{IntMatrix, UnimodularSystem};

/// E₅ after a fixed change of basis and a reversal of its columns.
pub fn scrambled_e5() -> UnimodularSystem {
    let u = IntMatrix::from_rows(&[
        [1, 1, 0, 0, 0],
        [0, 1, -1, 0, 0],
        [0, 0, 1, 2, 0],
        [0, 0, 0, 1, 1],
        [1, 0, 0, 0, -1],
    ]);
    let m = u.mul(e5().matrix()).expect("square times 5x10");
    let reversed: Vec<usize> = (0..10).rev().collect();
    UnimodularSystem::new(m.select_columns(&reversed)).expect("still a system")
}
