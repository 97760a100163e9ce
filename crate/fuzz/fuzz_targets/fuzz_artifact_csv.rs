#![no_main]

use grover_slocc::experiments::{CurveArtifact, TableArtifact};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(curve) = CurveArtifact::from_csv_str(text) {
        let back = CurveArtifact::from_csv_str(&curve.to_csv()).expect("written curve reparses");
        assert_eq!(back.points.len(), curve.points.len());
        assert_eq!(back.metadata, curve.metadata);
        for (a, b) in back.points.iter().zip(&curve.points) {
            assert!(a.0.to_bits() == b.0.to_bits() || (a.0.is_nan() && b.0.is_nan()));
        }
    }
    if let Ok(table) = TableArtifact::from_csv_str(text) {
        let back = TableArtifact::from_csv_str(&table.to_csv()).expect("written table reparses");
        assert_eq!(back, table);
    }
});
