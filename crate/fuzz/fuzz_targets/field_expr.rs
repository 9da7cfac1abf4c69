#![no_main]

use libfuzzer_sys::fuzz_target;
use stakit::fields::parse_field_expr;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(expr) = parse_field_expr(src) {
        // Evaluation may produce non-finite values but must not panic.
        let _ = expr.eval(&[0.5, -1.0, 2.0, 0.25]);
    }
});
