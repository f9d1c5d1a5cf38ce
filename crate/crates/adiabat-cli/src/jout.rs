//! Output JSON with a fixed numeric format: every number is printed with 12
//! significant digits, so emitted values are a fixed point of
//! parse-then-reprint and runs are byte-reproducible.

use std::fmt::Write;

/// 12 significant digits, scientific notation (valid JSON number syntax).
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "null".to_string();
    }
    if x == 0.0 {
        return "0.00000000000e0".to_string(); // covers -0.0 as well
    }
    if x.is_infinite() {
        // JSON has no infinities; the only infinite value we emit is a
        // Rényi order, which is serialized as a string elsewhere.
        return if x > 0.0 { "1e400".into() } else { "-1e400".into() };
    }
    format!("{:.11e}", x)
}

#[derive(Clone, Debug)]
pub enum Val {
    Num(f64),
    Int(i64),
    Bool(bool),
    Str(String),
    Arr(Vec<Val>),
    Obj(Vec<(String, Val)>),
}

impl Val {
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Val::Num(x) => out.push_str(&fmt_f64(*x)),
            Val::Int(n) => {
                let _ = write!(out, "{n}");
            }
            Val::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Val::Str(s) => {
                out.push('"');
                for ch in s.chars() {
                    match ch {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        '\n' => out.push_str("\\n"),
                        c if (c as u32) < 0x20 => {
                            let _ = write!(out, "\\u{:04x}", c as u32);
                        }
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Val::Arr(items) => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            Val::Obj(fields) => {
                out.push('{');
                for (k, (key, value)) in fields.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "\"{key}\":");
                    value.write(out);
                }
                out.push('}');
            }
        }
    }
}

pub fn nums(values: impl IntoIterator<Item = f64>) -> Val {
    Val::Arr(values.into_iter().map(Val::Num).collect())
}
