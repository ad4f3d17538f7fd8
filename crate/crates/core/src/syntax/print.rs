use super::term::Term;

/// Emits the concrete syntax accepted by [`parse_term`](super::parse_term).
pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Abs(x, b) => {
            out.push_str("fn ");
            out.push_str(x);
            out.push_str("=> ");
            write_term(b, out);
        }
        Term::LetPair(x, y, r, b) => {
            out.push_str("let val (");
            out.push_str(x);
            out.push(',');
            out.push_str(y);
            out.push_str(")=");
            write_term(r, out);
            out.push_str(" in ");
            write_term(b, out);
            out.push_str(" end");
        }
        Term::App(f, a) => {
            write_fun(f, out);
            out.push(' ');
            write_atom(a, out);
        }
        _ => write_atom(t, out),
    }
}

fn write_fun(t: &Term, out: &mut String) {
    match t {
        Term::App(..) => write_term(t, out),
        _ => write_atom(t, out),
    }
}

fn write_atom(t: &Term, out: &mut String) {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::Pair(a, b) => {
            out.push('(');
            write_term(a, out);
            out.push_str(", ");
            write_term(b, out);
            out.push(')');
        }
        _ => {
            out.push('(');
            write_term(t, out);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_term};

    #[test]
    fn prints_examples() {
        assert_eq!(print_term(&Term::abs("x", Term::var("x"))), "fn x=> x");
        let v1 = parse_term("fn f1=> fn f0=> fn x=> f1 (f0 x)").unwrap();
        assert_eq!(print_term(&v1), "fn f1=> fn f0=> fn x=> f1 (f0 x)");
        let t = parse_term("(fn x=> x) (let val (a,b)=p in (b, a) end) c").unwrap();
        assert_eq!(
            print_term(&t),
            "(fn x=> x) (let val (a,b)=p in (b, a) end) c"
        );
        assert!(alpha_eq(&parse_term(&print_term(&t)).unwrap(), &t));
    }
}
