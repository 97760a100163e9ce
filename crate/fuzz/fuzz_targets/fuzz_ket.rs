#![no_main]

use grover_slocc::QuditSystem;
use libfuzzer_sys::fuzz_target;

// First bytes pick the dims, the rest is the ket text.
fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let n = (n % 6) as usize + 1;
    if rest.len() < n {
        return;
    }
    let (dims, text) = rest.split_at(n);
    let dims: Vec<usize> = dims.iter().map(|d| (d % 11) as usize + 1).collect();
    let Ok(sys) = QuditSystem::new(dims) else { return };
    let Ok(text) = std::str::from_utf8(text) else { return };
    if let Ok(b) = sys.parse_ket(text) {
        assert!(b.decimal() < sys.len());
        assert_eq!(sys.parse_ket(&sys.ket_label(&b)).unwrap(), b);
        assert_eq!(sys.decode(b.decimal()).unwrap(), b);
    }
});
