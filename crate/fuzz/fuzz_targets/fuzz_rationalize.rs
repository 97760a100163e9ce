#![no_main]

use grover_slocc::exact::rationalize;
use libfuzzer_sys::fuzz_target;
use num_traits::ToPrimitive;

fuzz_target!(|data: [u8; 16]| {
    let x = f64::from_le_bytes(data[..8].try_into().unwrap());
    let tol = f64::from_le_bytes(data[8..].try_into().unwrap()).abs();
    if !(tol > 0.0 && tol < 1.0) {
        return;
    }
    if let Ok(q) = rationalize(x, tol) {
        let back = q.to_f64().unwrap();
        assert!((back - x).abs() <= tol * (1.0 + 1e-9) + 4.0 * f64::EPSILON * x.abs(), "{x} → {q} with tol {tol}");
    }
});
