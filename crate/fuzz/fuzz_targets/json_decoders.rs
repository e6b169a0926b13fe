#![no_main]

use cmpl_core::biq::{SplitBiQ, SubspacePresentation};
use cmpl_core::cm::{CmType, RelationLattice};
use cmpl_core::exact::IntMatrix;
use libfuzzer_sys::fuzz_target;
use serde_json::Value;

// First byte selects the decoder, the rest is the JSON document.
fuzz_target!(|data: &[u8]| {
    let Some((&tag, rest)) = data.split_first() else { return };
    let Ok(v) = serde_json::from_slice::<Value>(rest) else { return };
    match tag % 5 {
        0 => {
            if let Ok(s) = SplitBiQ::from_json(&v) {
                let back = SplitBiQ::from_json(&s.to_json()).expect("round trip");
                assert_eq!(back.dim(), s.dim());
            }
        }
        1 => {
            let _ = SubspacePresentation::from_json(&v);
        }
        2 => {
            let _ = CmType::from_json(&v);
        }
        3 => {
            if let Ok(m) = IntMatrix::from_json(&v) {
                assert_eq!(IntMatrix::from_json(&m.to_json()).expect("round trip"), m);
            }
        }
        _ => {
            let _ = RelationLattice::from_json(&v);
        }
    }
});
