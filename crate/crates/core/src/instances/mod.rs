//! Concrete Riesz spaces with strong unit.


mod herm;
mod pl;
mod qn;


pub use herm::{herm_join, herm_sup_cut, HermElement, HermSpace, RootMethod};
pub use pl::{PlElement, PlSpace};
pub use qn::{QnElement, QnSpace};

/// Decodes a natural number into a tuple of `len` naturals (iterated Cantor unpairing).
pub(crate) fn unpair_tuple(mut k: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 1..len {
        let (a, b) = unpair(k);
        out.push(a);
        k = b;
    }
    if len > 0 {
        out.push(k);
    }
    out
}

fn unpair(z: u64) -> (u64, u64) {
    let w = (((8 * z as u128 + 1) as f64).sqrt() as u64 - 1) / 2;
    // correct any float rounding in the triangular root
    let mut w = w;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    let t = w * (w + 1) / 2;
    let y = z - t;
    (w - y, y)
}

/// 0, 1, -1, 2, -2, ...
pub(crate) fn zigzag(n: u64) -> i64 {
    if n % 2 == 1 {
        (n / 2 + 1) as i64
    } else {
        -((n / 2) as i64)
    }
}
