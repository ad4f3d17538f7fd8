use std::collections::HashMap;
use std::sync::Arc;

use super::basic::{build_binary, check_value, idents, max_table, min_table, value};
use super::built::{signature_type, BuildError, BuiltTerm, CTerm, StyleTag};
use super::copy::build_copy_n;
use crate::types::{base_type, DomainError, TypeExpr};

fn signature(b: &BuiltTerm, what: &str) -> Result<(Vec<usize>, usize), BuildError> {
    b.signature().ok_or_else(|| {
        BuildError::TypeMismatch(format!(
            "{what} has type {}, not a function on values",
            b.declared_type
        ))
    })
}

fn merged_style(a: StyleTag, b: StyleTag) -> StyleTag {
    if a == b {
        a
    } else {
        StyleTag::Hybrid
    }
}

/// Feeds `inner`'s result into argument `position` (1-based) of `outer`:
/// `fn a.. b1..bk a..=> OUTER a.. (INNER b1..bk) a..`.
pub fn compose_linear(
    outer: &BuiltTerm,
    position: usize,
    inner: &BuiltTerm,
) -> Result<BuiltTerm, BuildError> {
    let (o_in, o_out) = signature(outer, "outer term")?;
    let (i_in, i_out) = signature(inner, "inner term")?;
    if position == 0 || position > o_in.len() {
        return Err(BuildError::Arity(format!(
            "position {position} outside 1..={}",
            o_in.len()
        )));
    }
    if o_in[position - 1] != i_out {
        return Err(BuildError::TypeMismatch(format!(
            "argument {position} has radix {}, inner result has radix {i_out}",
            o_in[position - 1]
        )));
    }
    let a_names: Vec<String> = (1..=o_in.len()).map(|k| format!("a{k}")).collect();
    let b_names: Vec<String> = (1..=i_in.len()).map(|k| format!("b{k}")).collect();
    let inner_app = CTerm::apps(inner.embed_ann(), b_names.iter().map(CTerm::var));
    let mut inner_app = Some(inner_app);
    let args: Vec<CTerm> = (1..=o_in.len())
        .map(|k| {
            if k == position {
                inner_app.take().expect("single use")
            } else {
                CTerm::var(a_names[k - 1].clone())
            }
        })
        .collect();
    let body = CTerm::apps(outer.embed_ann(), args);
    let mut params: Vec<String> = a_names[..position - 1].to_vec();
    params.extend(b_names);
    params.extend_from_slice(&a_names[position..]);
    let mut ins = o_in[..position - 1].to_vec();
    ins.extend(&i_in);
    ins.extend_from_slice(&o_in[position..]);
    let ty = signature_type(&ins, o_out)?;
    BuiltTerm::finish(
        CTerm::abss(params, body),
        ty,
        outer.stats.const_count + inner.stats.const_count,
        merged_style(outer.style, inner.style),
    )
}

fn fold_gate(n: usize, r: usize, binary: &BuiltTerm) -> Result<BuiltTerm, BuildError> {
    if n == 0 {
        return Err(DomainError("n-ary gate needs n ≥ 1".into()).into());
    }
    if n == 1 {
        let t = base_type(r)?;
        let c = CTerm::abs("h", CTerm::var("h"));
        return BuiltTerm::finish(c, TypeExpr::arrow(t.clone(), t), 0, StyleTag::Circuit);
    }
    if n == 2 {
        return Ok(binary.clone());
    }
    let a = n.div_ceil(2);
    let b = n - a;
    let right = if b == 1 {
        binary.clone()
    } else {
        compose_linear(binary, 2, &fold_gate(b, r, binary)?)?
    };
    if a == 1 {
        Ok(right)
    } else {
        compose_linear(&right, 1, &fold_gate(a, r, binary)?)
    }
}

/// `&_n`: n-ary minimum.
pub fn build_conj(n: usize, r: usize) -> Result<BuiltTerm, BuildError> {
    fold_gate(n, r, &build_binary(&min_table(r)?)?)
}

/// `⊔_n`: n-ary maximum.
pub fn build_disj(n: usize, r: usize) -> Result<BuiltTerm, BuildError> {
    fold_gate(n, r, &build_binary(&max_table(r)?)?)
}

/// `h I … I` at `T_r -> T_r`, i.e. `h` consumed without effect.
fn consume(h: &str, r: usize) -> Result<CTerm, DomainError> {
    Ok(CTerm::apps(CTerm::var(h).inst(base_type(r)?), idents(r)))
}

fn nested(heads: Vec<CTerm>, last: CTerm) -> CTerm {
    heads
        .into_iter()
        .rev()
        .fold(last, |acc, h| CTerm::app(h, acc))
}

/// `const_{n,c} = fn h1..hn=> (h1 I..I) (… ((hn I..I) v_c))`.
pub fn build_const_n(n: usize, c: usize, r: usize) -> Result<BuiltTerm, BuildError> {
    check_value(c, r)?;
    if n == 0 {
        return Err(DomainError("const_{n,c} needs n ≥ 1".into()).into());
    }
    let names: Vec<String> = (1..=n).map(|k| format!("h{k}")).collect();
    let heads = names
        .iter()
        .map(|h| consume(h, r))
        .collect::<Result<Vec<_>, _>>()?;
    let body = nested(heads, value(c, r)?);
    let ty = signature_type(&vec![r; n], r)?;
    BuiltTerm::finish(CTerm::abss(names, body), ty, 0, StyleTag::Circuit)
}

/// `proj_{n,i}`: like `const_{n,c}` with `h_i` in place of the seed.
pub fn build_proj(n: usize, i: usize, r: usize) -> Result<BuiltTerm, BuildError> {
    if i == 0 || i > n {
        return Err(DomainError(format!("projection index {i} outside 1..={n}")).into());
    }
    base_type(r)?;
    let names: Vec<String> = (1..=n).map(|k| format!("h{k}")).collect();
    let heads = names
        .iter()
        .enumerate()
        .filter(|(k, _)| k + 1 != i)
        .map(|(_, h)| consume(h, r))
        .collect::<Result<Vec<_>, _>>()?;
    let body = nested(heads, CTerm::var(names[i - 1].clone()));
    let ty = signature_type(&vec![r; n], r)?;
    BuiltTerm::finish(CTerm::abss(names, body), ty, 0, StyleTag::Circuit)
}

/// Expression tree over built gates; inputs are numbered from 0.
#[derive(Clone, Debug)]
pub enum Node {
    Input(usize),
    Gate(Arc<BuiltTerm>, Vec<Node>),
}

impl Node {
    pub fn gate(g: &Arc<BuiltTerm>, kids: Vec<Node>) -> Node {
        Node::Gate(Arc::clone(g), kids)
    }
}

/// Compiles an expression tree into one closed term over `input_radices`,
/// fanning out every input used more than once through `copy_{r,u}`.
pub fn compile_circuit(root: &Node, input_radices: &[usize]) -> Result<BuiltTerm, BuildError> {
    let mut uses = vec![0usize; input_radices.len()];
    let out = validate(root, input_radices, &mut uses)?;
    if let Some(k) = uses.iter().position(|&u| u == 0) {
        return Err(BuildError::Wiring(format!("input {k} is never used")));
    }
    let mut next = vec![0usize; uses.len()];
    let mut consts = 0usize;
    let mut style = None;
    let body = emit(root, &uses, &mut next, &mut consts, &mut style)?;
    let mut copies: HashMap<(usize, usize), BuiltTerm> = HashMap::new();
    let mut term = body;
    for k in (0..uses.len()).rev() {
        let u = uses[k];
        if u == 1 {
            continue;
        }
        let r = input_radices[k];
        let copy = match copies.entry((r, u)) {
            std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::hash_map::Entry::Vacant(e) => e.insert(build_copy_n(r, u)?),
        };
        consts += copy.stats.const_count;
        let mut inner = term;
        // let (c_1, t_1) = copy x in let (c_2, t_2) = t_1 in … (c_{u-1}, c_u) = t_{u-2}
        for j in (1..u).rev() {
            let src = if j == 1 {
                CTerm::app(copy.embed_ann(), CTerm::var(format!("x{k}")))
            } else {
                CTerm::var(format!("t{k}_{}", j - 1))
            };
            let tail = if j == u - 1 {
                format!("c{k}_{u}")
            } else {
                format!("t{k}_{j}")
            };
            inner = CTerm::let_pair(format!("c{k}_{j}"), tail, src, inner);
        }
        term = inner;
    }
    let params: Vec<String> = (0..uses.len()).map(|k| format!("x{k}")).collect();
    let ty = signature_type(input_radices, out)?;
    BuiltTerm::finish(
        CTerm::abss(params, term),
        ty,
        consts,
        style.unwrap_or(StyleTag::Circuit),
    )
}

fn validate(node: &Node, radices: &[usize], uses: &mut [usize]) -> Result<usize, BuildError> {
    match node {
        Node::Input(k) => {
            let r = *radices
                .get(*k)
                .ok_or_else(|| BuildError::Wiring(format!("input {k} out of range")))?;
            uses[*k] += 1;
            Ok(r)
        }
        Node::Gate(g, kids) => {
            let (ins, out) = signature(g, "gate")?;
            if ins.len() != kids.len() {
                return Err(BuildError::Wiring(format!(
                    "gate takes {} arguments, {} wired",
                    ins.len(),
                    kids.len()
                )));
            }
            for (pos, (kid, &want)) in kids.iter().zip(&ins).enumerate() {
                let got = validate(kid, radices, uses)?;
                if got != want {
                    return Err(BuildError::TypeMismatch(format!(
                        "gate argument {} expects radix {want}, wired radix {got}",
                        pos + 1
                    )));
                }
            }
            Ok(out)
        }
    }
}

fn emit(
    node: &Node,
    uses: &[usize],
    next: &mut [usize],
    consts: &mut usize,
    style: &mut Option<StyleTag>,
) -> Result<CTerm, BuildError> {
    match node {
        Node::Input(k) => {
            next[*k] += 1;
            Ok(if uses[*k] == 1 {
                CTerm::var(format!("x{k}"))
            } else {
                CTerm::var(format!("c{k}_{}", next[*k]))
            })
        }
        Node::Gate(g, kids) => {
            *consts += g.stats.const_count;
            *style = Some(match *style {
                None => g.style,
                Some(s) => merged_style(s, g.style),
            });
            let args = kids
                .iter()
                .map(|k| emit(k, uses, next, consts, style))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(CTerm::apps(g.embed_ann(), args))
        }
    }
}
