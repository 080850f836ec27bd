//! Canonical pretty-printer: one declaration per line, two-space indent
//! inside node bodies, and precedence-minimal parentheses in formulas so
//! that reparsing the output rebuilds the same tree.

use std::fmt::Write;

use super::{Decl, Formula, QuantKind, SpecFile, Term, TypeExpr, TypeExprKind};

const PREC_QUANT: u8 = 0;
const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_PREFIX: u8 = 4;
const PREC_ATOM: u8 = 5;

/// Renders a parsed file back to source text. An empty file renders as the
/// empty string.
pub fn render_spec(spec: &SpecFile) -> String {
    let mut out = String::new();
    for decl in &spec.decls {
        match decl {
            Decl::Sort(d) => {
                let _ = writeln!(out, "sort {}", d.name);
            }
            Decl::Func(d) => {
                let _ = writeln!(
                    out,
                    "func {}({}): {}",
                    d.name,
                    render_types(&d.params),
                    render_type(&d.result)
                );
            }
            Decl::Pred(d) => {
                let _ = writeln!(out, "pred {}({})", d.name, render_types(&d.params));
            }
            Decl::Node(d) => {
                let _ = writeln!(out, "node {} {{", d.name);
                for port in &d.ports {
                    let _ =
                        writeln!(out, "  {} {}: {}", port.direction, port.name, render_type(&port.ty));
                }
                let _ = writeln!(out, "  assumes {}", render_formula(&d.assumes));
                let _ = writeln!(out, "  guarantees {}", render_formula(&d.guarantees));
                if !d.evidence.is_empty() {
                    let words: Vec<&str> =
                        d.evidence.iter().map(|(t, _)| t.label()).collect();
                    let _ = writeln!(out, "  evidence {}", words.join(", "));
                }
                out.push_str("}\n");
            }
            Decl::Connect(d) => {
                let _ = writeln!(
                    out,
                    "connect {}.{} -> {}.{}",
                    d.from.0, d.from.1, d.to.0, d.to.1
                );
            }
        }
    }
    out
}

fn render_types(types: &[TypeExpr]) -> String {
    types.iter().map(render_type).collect::<Vec<_>>().join(", ")
}

fn render_type(ty: &TypeExpr) -> String {
    match &ty.kind {
        TypeExprKind::Named(name) => name.clone(),
        TypeExprKind::Set(element) => format!("Set<{element}>"),
    }
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Quant { .. } => PREC_QUANT,
        Formula::Implies(..) => PREC_IMPLIES,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        Formula::Not(..) => PREC_PREFIX,
        _ => PREC_ATOM,
    }
}

/// Renders a surface formula with only the parentheses reparsing needs.
pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    fmt_formula(f, 0, &mut out);
    out
}

fn fmt_formula(f: &Formula, min: u8, out: &mut String) {
    if precedence(f) < min {
        out.push('(');
        fmt_formula(f, 0, out);
        out.push(')');
        return;
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Pred { name, args, .. } => {
            out.push_str(name);
            out.push('(');
            for (i, arg) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                fmt_term(arg, out);
            }
            out.push(')');
        }
        Formula::Cmp { op, lhs, rhs } => {
            fmt_term(lhs, out);
            let _ = write!(out, " {} ", op.symbol());
            fmt_term(rhs, out);
        }
        Formula::Not(body) => {
            out.push_str("not ");
            fmt_formula(body, PREC_PREFIX, out);
        }
        Formula::And(a, b) => {
            fmt_formula(a, PREC_AND, out);
            out.push_str(" and ");
            fmt_formula(b, PREC_AND + 1, out);
        }
        Formula::Or(a, b) => {
            fmt_formula(a, PREC_OR, out);
            out.push_str(" or ");
            fmt_formula(b, PREC_OR + 1, out);
        }
        Formula::Implies(a, b) => {
            fmt_formula(a, PREC_IMPLIES + 1, out);
            out.push_str(" => ");
            fmt_formula(b, PREC_IMPLIES, out);
        }
        Formula::Quant { kind, var, sort_name, body, .. } => {
            let word = match kind {
                QuantKind::Forall => "forall",
                QuantKind::Exists => "exists",
            };
            let _ = write!(out, "{word} {var} : {sort_name} . ");
            fmt_formula(body, PREC_QUANT, out);
        }
    }
}

fn fmt_term(t: &Term, out: &mut String) {
    match t {
        Term::Ident { name, .. } => out.push_str(name),
        Term::App { name, args, .. } => {
            out.push_str(name);
            out.push('(');
            for (i, arg) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                fmt_term(arg, out);
            }
            out.push(')');
        }
        Term::Nat { value, .. } => {
            let _ = write!(out, "{value}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_spec;
    use super::*;

    const ROVER: &str = include_str!("../../../../specs/rover.agspec");

    fn roundtrip(src: &str) -> String {
        render_spec(&parse_spec(src).expect("input should parse"))
    }

    #[test]
    fn empty_file_renders_empty() {
        assert_eq!(render_spec(&SpecFile::default()), "");
    }

    #[test]
    fn conjunction_of_disjunction_keeps_only_forced_parentheses() {
        let src = "node n { out o: Nat assumes true guarantees o = 1 and (o = 2 or o = 3) }";
        let rendered = roundtrip(src);
        assert!(
            rendered.contains("guarantees o = 1 and (o = 2 or o = 3)"),
            "got: {rendered}"
        );
        // The mirror image needs no parentheses at all.
        let src = "node n { out o: Nat assumes true guarantees (o = 1 and o = 2) or o = 3 }";
        let rendered = roundtrip(src);
        assert!(rendered.contains("guarantees o = 1 and o = 2 or o = 3"), "got: {rendered}");
    }

    #[test]
    fn quantifier_operands_are_parenthesized() {
        let src = "node n { out o: Nat assumes true guarantees (forall k : Nat . o = k) and o = 0 }";
        let rendered = roundtrip(src);
        assert!(
            rendered.contains("guarantees (forall k : Nat . o = k) and o = 0"),
            "got: {rendered}"
        );
    }

    #[test]
    fn rendering_is_parseable_and_stable() {
        let once = roundtrip(ROVER);
        let twice = roundtrip(&once);
        assert_eq!(once, twice);
    }

    #[test]
    fn rendered_rover_reparses_to_the_same_ast_modulo_spans() {
        let original = parse_spec(ROVER).unwrap();
        let rendered = render_spec(&original);
        let reparsed = parse_spec(&rendered).unwrap();
        assert_eq!(original.decls.len(), reparsed.decls.len());
        // Formula structure survives exactly; only spans move.
        let formulas = |spec: &SpecFile| -> Vec<String> {
            spec.decls
                .iter()
                .filter_map(|d| match d {
                    super::super::Decl::Node(n) => {
                        Some(render_formula(&n.assumes) + " / " + &render_formula(&n.guarantees))
                    }
                    _ => None,
                })
                .collect()
        };
        assert_eq!(formulas(&original), formulas(&reparsed));
    }
}
