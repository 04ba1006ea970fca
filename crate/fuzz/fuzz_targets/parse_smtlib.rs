#![no_main]

use cadorder::polyarith::parse_polynomial;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(problem) = cadorder::ingest::parse_smtlib("fuzz", text) else { return };
    if !problem.variables.infix_safe() {
        return;
    }
    for p in problem.polys.iter() {
        let rendered = p.render(&problem.variables);
        assert_eq!(&parse_polynomial(&rendered, &problem.variables).unwrap(), p);
    }
});
