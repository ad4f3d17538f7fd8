use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Untyped term with pairs and pair-destructuring `let`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    App(Box<Term>, Box<Term>),
    Abs(String, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    LetPair(String, String, Box<Term>, Box<Term>),
}

/// Address of a subterm: child indices from the root.
///
/// `Abs` body is child 0; `App` function/argument are 0/1; `Pair` components
/// are 0/1; `LetPair` right-hand side/body are 0/1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodePath(pub Vec<usize>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut steps = self.0.clone();
        steps.push(i);
        NodePath(steps)
    }

    pub fn steps(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, s) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

pub fn is_valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'') {
        return false;
    }
    !matches!(s, "fn" | "let" | "val" | "in" | "end")
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn abs(x: impl Into<String>, body: Term) -> Term {
        Term::Abs(x.into(), Box::new(body))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn let_pair(x: impl Into<String>, y: impl Into<String>, rhs: Term, body: Term) -> Term {
        Term::LetPair(x.into(), y.into(), Box::new(rhs), Box::new(body))
    }

    /// `f a1 a2 ... an`, left-associated.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// `fn x1=> ... fn xn=> body`.
    pub fn abss<S: Into<String>>(params: impl IntoIterator<Item = S>, body: Term) -> Term {
        let params: Vec<String> = params.into_iter().map(Into::into).collect();
        params.into_iter().rev().fold(body, |b, x| Term::abs(x, b))
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) => vec![],
            Term::Abs(_, b) => vec![b],
            Term::App(f, a) => vec![f, a],
            Term::Pair(a, b) => vec![a, b],
            Term::LetPair(_, _, r, b) => vec![r, b],
        }
    }

    pub fn node_count(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            count += 1;
            stack.extend(t.children());
        }
        count
    }

    /// Counts of `(App, Abs, Pair, LetPair)` nodes.
    pub fn shape_counts(&self) -> ShapeCounts {
        let mut c = ShapeCounts::default();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Term::Var(_) => c.vars += 1,
                Term::App(..) => c.apps += 1,
                Term::Abs(..) => c.abss += 1,
                Term::Pair(..) => c.pairs += 1,
                Term::LetPair(..) => c.lets += 1,
            }
            stack.extend(t.children());
        }
        c
    }

    pub fn subterm(&self, path: &NodePath) -> Option<&Term> {
        let mut t = self;
        for &s in path.steps() {
            t = *t.children().get(s)?;
        }
        Some(t)
    }

    pub fn subterm_mut(&mut self, path: &NodePath) -> Option<&mut Term> {
        let mut t = self;
        for &s in path.steps() {
            t = match (t, s) {
                (Term::Abs(_, b), 0) => b,
                (Term::App(f, _), 0) => f,
                (Term::App(_, a), 1) => a,
                (Term::Pair(a, _), 0) => a,
                (Term::Pair(_, b), 1) => b,
                (Term::LetPair(_, _, r, _), 0) => r,
                (Term::LetPair(_, _, _, b), 1) => b,
                _ => return None,
            };
        }
        Some(t)
    }

    /// Every node path in preorder (node before children, left before right).
    pub fn paths(&self) -> Vec<NodePath> {
        let mut out = Vec::new();
        let mut stack = vec![(self, NodePath::root())];
        while let Some((t, p)) = stack.pop() {
            let kids = t.children();
            for (i, k) in kids.iter().enumerate().rev() {
                stack.push((k, p.child(i)));
            }
            out.push(p);
        }
        out
    }

    pub fn free_vars(&self) -> HashSet<String> {
        let mut out = HashSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn occurs_free(&self, v: &str) -> bool {
        count_free(self, v) > 0
    }

    /// Every binder name and every variable name appearing in the term.
    pub fn all_names(&self) -> HashSet<String> {
        let mut out = HashSet::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                Term::Var(x) | Term::Abs(x, _) => {
                    out.insert(x.clone());
                }
                Term::LetPair(x, y, _, _) => {
                    out.insert(x.clone());
                    out.insert(y.clone());
                }
                _ => {}
            }
            stack.extend(t.children());
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ShapeCounts {
    pub vars: usize,
    pub apps: usize,
    pub abss: usize,
    pub pairs: usize,
    pub lets: usize,
}

fn collect_free(t: &Term, bound: &mut Vec<String>, out: &mut HashSet<String>) {
    match t {
        Term::Var(x) => {
            if !bound.iter().any(|b| b == x) {
                out.insert(x.clone());
            }
        }
        Term::App(f, a) | Term::Pair(f, a) => {
            collect_free(f, bound, out);
            collect_free(a, bound, out);
        }
        Term::Abs(x, b) => {
            bound.push(x.clone());
            collect_free(b, bound, out);
            bound.pop();
        }
        Term::LetPair(x, y, r, b) => {
            collect_free(r, bound, out);
            bound.push(x.clone());
            bound.push(y.clone());
            collect_free(b, bound, out);
            bound.pop();
            bound.pop();
        }
    }
}

fn count_free(t: &Term, v: &str) -> usize {
    match t {
        Term::Var(x) => usize::from(x == v),
        Term::App(f, a) | Term::Pair(f, a) => count_free(f, v) + count_free(a, v),
        Term::Abs(x, b) => {
            if x == v {
                0
            } else {
                count_free(b, v)
            }
        }
        Term::LetPair(x, y, r, b) => {
            let inner = if x == v || y == v {
                0
            } else {
                count_free(b, v)
            };
            count_free(r, v) + inner
        }
    }
}

/// Alpha-equivalence: identical up to consistent renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go<'a>(a: &'a Term, b: &'a Term, env: &mut Vec<(&'a str, &'a str)>) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let bx = env.iter().rposition(|(l, _)| *l == x.as_str());
                let by = env.iter().rposition(|(_, r)| *r == y.as_str());
                match (bx, by) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::App(f1, a1), Term::App(f2, a2)) | (Term::Pair(f1, a1), Term::Pair(f2, a2)) => {
                go(f1, f2, env) && go(a1, a2, env)
            }
            (Term::Abs(x, b1), Term::Abs(y, b2)) => {
                env.push((x, y));
                let ok = go(b1, b2, env);
                env.pop();
                ok
            }
            (Term::LetPair(x1, y1, r1, b1), Term::LetPair(x2, y2, r2, b2)) => {
                if !go(r1, r2, env) {
                    return false;
                }
                env.push((x1, x2));
                env.push((y1, y2));
                let ok = go(b1, b2, env);
                env.pop();
                env.pop();
                ok
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearityViolation {
    /// A bound variable that never occurs in its scope.
    Unused(String),
    /// A variable (bound or free) used more than once.
    Duplicated(String),
}

impl fmt::Display for LinearityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinearityViolation::Unused(x) => write!(f, "variable `{x}` is bound but never used"),
            LinearityViolation::Duplicated(x) => write!(f, "variable `{x}` is used more than once"),
        }
    }
}

/// Checks that every bound variable occurs exactly once in its scope and every
/// free variable occurs exactly once overall. Returns the first violation.
pub fn is_linear(t: &Term) -> Result<(), LinearityViolation> {
    struct Scope<'a> {
        stack: Vec<(&'a str, usize)>,
        free: HashMap<&'a str, usize>,
    }
    fn go<'a>(t: &'a Term, sc: &mut Scope<'a>) -> Result<(), LinearityViolation> {
        match t {
            Term::Var(x) => {
                let slot = match sc.stack.iter_mut().rev().find(|(n, _)| *n == x.as_str()) {
                    Some((_, uses)) => uses,
                    None => sc.free.entry(x.as_str()).or_insert(0),
                };
                *slot += 1;
                if *slot > 1 {
                    return Err(LinearityViolation::Duplicated(x.clone()));
                }
                Ok(())
            }
            Term::App(f, a) | Term::Pair(f, a) => {
                go(f, sc)?;
                go(a, sc)
            }
            Term::Abs(x, b) => {
                sc.stack.push((x, 0));
                go(b, sc)?;
                let (_, uses) = sc.stack.pop().expect("scope underflow");
                if uses == 0 {
                    return Err(LinearityViolation::Unused(x.clone()));
                }
                Ok(())
            }
            Term::LetPair(x, y, r, b) => {
                if x == y {
                    return Err(LinearityViolation::Duplicated(x.clone()));
                }
                go(r, sc)?;
                sc.stack.push((x, 0));
                sc.stack.push((y, 0));
                go(b, sc)?;
                let (_, uy) = sc.stack.pop().expect("scope underflow");
                let (_, ux) = sc.stack.pop().expect("scope underflow");
                if ux == 0 {
                    return Err(LinearityViolation::Unused(x.clone()));
                }
                if uy == 0 {
                    return Err(LinearityViolation::Unused(y.clone()));
                }
                Ok(())
            }
        }
    }
    go(
        t,
        &mut Scope {
            stack: Vec::new(),
            free: HashMap::new(),
        },
    )
}

/// Produces a name based on `base` that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &HashSet<String>) -> String {
    let stem = name_stem(base);
    (0..)
        .map(|k| format!("{stem}_{k}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded name supply")
}

/// Strips a trailing `_<digits>` suffix added by renaming.
pub fn name_stem(name: &str) -> &str {
    if let Some(pos) = name.rfind('_') {
        let suffix = &name[pos + 1..];
        if pos > 0 && !suffix.is_empty() && suffix.chars().all(|c| c.is_ascii_digit()) {
            return &name[..pos];
        }
    }
    name
}

/// Capture-avoiding replacement of the free occurrences of `v` in `t` by `s`.
pub fn substitute(t: &Term, v: &str, s: &Term) -> Term {
    let fv_s = s.free_vars();
    subst_rec(t, v, s, &fv_s)
}

fn subst_rec(t: &Term, v: &str, s: &Term, fv_s: &HashSet<String>) -> Term {
    match t {
        Term::Var(x) => {
            if x == v {
                s.clone()
            } else {
                t.clone()
            }
        }
        Term::App(f, a) => Term::app(subst_rec(f, v, s, fv_s), subst_rec(a, v, s, fv_s)),
        Term::Pair(a, b) => Term::pair(subst_rec(a, v, s, fv_s), subst_rec(b, v, s, fv_s)),
        Term::Abs(x, b) => {
            if x == v || !b.occurs_free(v) {
                return t.clone();
            }
            if fv_s.contains(x) {
                let mut avoid = fv_s.clone();
                avoid.extend(b.all_names());
                avoid.insert(v.to_string());
                let x2 = fresh_name(x, &avoid);
                let b2 = subst_rec(b, x, &Term::Var(x2.clone()), &HashSet::from([x2.clone()]));
                Term::abs(x2, subst_rec(&b2, v, s, fv_s))
            } else {
                Term::abs(x.clone(), subst_rec(b, v, s, fv_s))
            }
        }
        Term::LetPair(x, y, r, b) => {
            let r2 = subst_rec(r, v, s, fv_s);
            if x == v || y == v || !b.occurs_free(v) {
                return Term::LetPair(x.clone(), y.clone(), Box::new(r2), b.clone());
            }
            let mut avoid = fv_s.clone();
            avoid.extend(b.all_names());
            avoid.insert(v.to_string());
            let mut body = (**b).clone();
            let mut names = [x.clone(), y.clone()];
            for n in names.iter_mut() {
                if fv_s.contains(n.as_str()) {
                    let n2 = fresh_name(n, &avoid);
                    avoid.insert(n2.clone());
                    body = subst_rec(
                        &body,
                        n,
                        &Term::Var(n2.clone()),
                        &HashSet::from([n2.clone()]),
                    );
                    *n = n2;
                }
            }
            let [x2, y2] = names;
            Term::LetPair(x2, y2, Box::new(r2), Box::new(subst_rec(&body, v, s, fv_s)))
        }
    }
}

/// Renames every binder to `<stem>_<k>` with `k` increasing in preorder, so that
/// all binders in the result are distinct and distinct from free variables.
pub fn freshen(t: &Term) -> Term {
    let free = t.free_vars();
    let mut counter = 0usize;
    let mut scope: Vec<(String, String)> = Vec::new();
    freshen_rec(t, &mut scope, &mut counter, &free)
}

fn freshen_rec(
    t: &Term,
    scope: &mut Vec<(String, String)>,
    counter: &mut usize,
    free: &HashSet<String>,
) -> Term {
    let next = |base: &str, counter: &mut usize| loop {
        let n = format!("{}_{}", name_stem(base), *counter);
        *counter += 1;
        if !free.contains(&n) {
            break n;
        }
    };
    match t {
        Term::Var(x) => match scope.iter().rev().find(|(old, _)| old == x) {
            Some((_, new)) => Term::Var(new.clone()),
            None => t.clone(),
        },
        Term::App(f, a) => {
            let f2 = freshen_rec(f, scope, counter, free);
            Term::app(f2, freshen_rec(a, scope, counter, free))
        }
        Term::Pair(a, b) => {
            let a2 = freshen_rec(a, scope, counter, free);
            Term::pair(a2, freshen_rec(b, scope, counter, free))
        }
        Term::Abs(x, b) => {
            let x2 = next(x, counter);
            scope.push((x.clone(), x2.clone()));
            let b2 = freshen_rec(b, scope, counter, free);
            scope.pop();
            Term::abs(x2, b2)
        }
        Term::LetPair(x, y, r, b) => {
            let r2 = freshen_rec(r, scope, counter, free);
            let x2 = next(x, counter);
            let y2 = next(y, counter);
            scope.push((x.clone(), x2.clone()));
            scope.push((y.clone(), y2.clone()));
            let b2 = freshen_rec(b, scope, counter, free);
            scope.pop();
            scope.pop();
            Term::let_pair(x2, y2, r2, b2)
        }
    }
}
