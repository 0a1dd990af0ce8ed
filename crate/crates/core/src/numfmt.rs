use serde::Serializer;

/// Serializes a float that may be infinite: JSON has no literal for
/// infinity, so `+∞` becomes the string `"inf"`.
pub(crate) fn extended_f64<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}
