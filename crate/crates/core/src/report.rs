//! Serialization helpers shared by the report types.

use serde::Serializer;

/// Serializes an extended real: finite values as JSON numbers, infinities
/// and NaN as the strings `"+inf"`, `"-inf"` and `"nan"`.
pub fn ext_real<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    if value.is_finite() {
        serializer.serialize_f64(*value)
    } else if value.is_nan() {
        serializer.serialize_str("nan")
    } else if *value > 0.0 {
        serializer.serialize_str("+inf")
    } else {
        serializer.serialize_str("-inf")
    }
}

/// [`ext_real`] for `Option<f64>`.
pub fn ext_real_opt<S: Serializer>(value: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => ext_real(v, serializer),
        None => serializer.serialize_none(),
    }
}

/// [`ext_real`] applied element-wise to labelled values.
pub fn ext_real_pairs<S: Serializer>(
    values: &[(String, f64)],
    serializer: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;

    struct Ext(f64);
    impl serde::Serialize for Ext {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            ext_real(&self.0, s)
        }
    }

    let mut seq = serializer.serialize_seq(Some(values.len()))?;
    for (label, v) in values {
        seq.serialize_element(&(label, Ext(*v)))?;
    }
    seq.end()
}
