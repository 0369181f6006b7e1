//! Canonical rendering. Terms, types, values and judgments print through
//! their `Display` impls; this module adds derivations and the round-trip
//! entry points used by tests and the command line.

use crate::kernel::{BindingValue, Derivation};
use crate::term::{Equation, Term};
use crate::types::TypeExpr;

pub fn pretty_term(t: &Term) -> String {
    t.to_string()
}

pub fn pretty_type(t: &TypeExpr) -> String {
    t.to_string()
}

pub fn pretty_equation(eq: &Equation) -> String {
    eq.to_string()
}

/// Multi-line rendering of a derivation, one node per line, premises
/// indented under their parent.
pub fn pretty_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    render(d, 0, &mut out);
    out
}

fn render(d: &Derivation, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    out.push_str(&pad);
    out.push_str(&format!("(rule {}", d.rule));
    if !d.bindings.is_empty() {
        let cells: Vec<String> = d
            .bindings
            .iter()
            .map(|(n, v)| match v {
                BindingValue::Term(t) => format!("{n} = term({t})"),
                BindingValue::Type(t) => format!("{n} = type({t})"),
                BindingValue::Name(s) => format!("{n} = name({s})"),
                BindingValue::Deco(dd) => format!("{n} = deco({dd})"),
            })
            .collect();
        out.push_str(&format!(" [{}]", cells.join(", ")));
    }
    out.push(' ');
    out.push_str(&d.conclusion.to_string());
    if d.premises.is_empty() {
        out.push(')');
        out.push('\n');
    } else {
        out.push('\n');
        for p in &d.premises {
            render(p, indent + 1, out);
        }
        out.push_str(&pad);
        out.push(')');
        out.push('\n');
    }
}
