use crate::algebra::Operation;

/// Names accepted by [`named_operation`].
pub const NAMED_OPERATIONS: &[&str] = &["maj3", "sum3", "min3", "affmaj", "median3", "zsum3"];

/// Built-in special WNUs.
///
/// `maj3` and `sum3` (x+y+z mod 2) live on two elements; `min3`,
/// `median3` and `affmaj` on three; `zsum3` is the 4-ary sum mod 3.
pub fn named_operation(name: &str) -> Option<Operation> {
    Some(match name {
        "maj3" => Operation::majority(),
        "sum3" => Operation::sum_mod(2, 3),
        "min3" => Operation::min3(3),
        "affmaj" => Operation::affine_majority(),
        "median3" => Operation::from_fn(3, 3, |x| {
            let mut s = [x[0], x[1], x[2]];
            s.sort();
            s[1]
        })
        .expect("valid table"),
        "zsum3" => Operation::sum_mod(3, 4),
        _ => return None,
    })
}
