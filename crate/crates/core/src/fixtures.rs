//! Built-in example formulas in scheme-text form.

use crate::format::parse_scheme_text;
use crate::scheme::Scheme;

pub const F4_TEXT: &str = "\
0 - + -
+ - - 0
- 0 - 0
0 + 0 0
";

/// `F4` plus the unit clause `a4`.
pub const F5_TEXT: &str = "\
0 - + -
+ - - 0
- 0 - 0
0 + 0 0
0 0 0 +
";

pub const G_TEXT: &str = "\
+ + + 0 0
0 - - - 0
0 0 + + -
+ 0 0 + +
- + 0 0 +
";

/// The five clauses appended to `G` so that every cubic coefficient cancels.
pub const G_EXTENSION_TEXT: &str = "\
- + + 0 0
0 + - - 0
0 0 - + -
- 0 0 + +
+ + 0 0 +
";

pub const NAMES: [&str; 4] = ["F4", "F5", "G", "Gext"];

pub fn f4() -> Scheme {
    parse_scheme_text(F4_TEXT).expect("F4 fixture")
}

pub fn f5() -> Scheme {
    parse_scheme_text(F5_TEXT).expect("F5 fixture")
}

pub fn g() -> Scheme {
    parse_scheme_text(G_TEXT).expect("G fixture")
}

pub fn g_ext() -> Scheme {
    parse_scheme_text(&format!("{G_TEXT}{G_EXTENSION_TEXT}")).expect("Gext fixture")
}

/// Looks a fixture up by name, case-insensitively. `G'` is accepted for `Gext`.
pub fn by_name(name: &str) -> Option<Scheme> {
    match name.to_ascii_lowercase().as_str() {
        "f4" => Some(f4()),
        "f5" => Some(f5()),
        "g" => Some(g()),
        "gext" | "g'" | "g_ext" => Some(g_ext()),
        _ => None,
    }
}

pub fn all() -> Vec<(&'static str, Scheme)> {
    NAMES.iter().map(|&n| (n, by_name(n).unwrap())).collect()
}
