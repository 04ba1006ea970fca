#![no_main]

use cadorder::polyarith::parse_polynomial;
use cadorder::Variables;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let vars = Variables::indexed(4);
    if let Ok(p) = parse_polynomial(text, &vars) {
        assert_eq!(parse_polynomial(&p.render(&vars), &vars).unwrap(), p);
    }
});
