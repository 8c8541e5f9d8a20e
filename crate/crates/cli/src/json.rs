//! Deterministic JSON values: 17 significant digits for floats, `"p/q"` for
//! rationals, `{re, im}` objects for complex numbers.

use std::str::FromStr;

use cyperiod::algebra::Rational;
use nalgebra::{Dim, Matrix, RawStorage};
use num_complex::Complex64;
use serde_json::{Map, Number, Value};

pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let x = if x == 0.0 { 0.0 } else { x };
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("valid JSON number"))
}

pub fn complex(z: Complex64) -> Value {
    object([("re", float(z.re)), ("im", float(z.im))])
}

pub fn rational(q: &Rational) -> Value {
    Value::String(format!("{}/{}", q.numer(), q.denom()))
}

pub fn rationals<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(qs.into_iter().map(rational).collect())
}

pub fn matrix<R: Dim, C: Dim, S: RawStorage<Complex64, R, C>>(m: &Matrix<Complex64, R, C, S>) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn object<const N: usize>(entries: [(&str, Value); N]) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

pub fn opt<T>(x: Option<T>, f: impl FnOnce(T) -> Value) -> Value {
    x.map(f).unwrap_or(Value::Null)
}
