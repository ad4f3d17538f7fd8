use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{fresh_name, substitute, NodePath, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Beta1,
    Beta2,
    Eta1,
    Eta2,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Beta1 => "β₁",
            Rule::Beta2 => "β₂",
            Rule::Eta1 => "η₁",
            Rule::Eta2 => "η₂",
        })
    }
}

/// Enabled rewrite rules. The default enables β₁ and β₂ only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    pub beta1: bool,
    pub beta2: bool,
    pub eta1: bool,
    pub eta2: bool,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet {
            beta1: true,
            beta2: true,
            eta1: false,
            eta2: false,
        }
    }
}

impl RuleSet {
    pub fn all() -> Self {
        RuleSet {
            beta1: true,
            beta2: true,
            eta1: true,
            eta2: true,
        }
    }

    pub fn eta_only() -> Self {
        RuleSet {
            beta1: false,
            beta2: false,
            eta1: true,
            eta2: true,
        }
    }

    pub fn is_default(&self) -> bool {
        *self == RuleSet::default()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StepCount {
    pub beta1: u64,
    pub beta2: u64,
    pub eta1: u64,
    pub eta2: u64,
}

impl StepCount {
    pub fn total(&self) -> u64 {
        self.beta1 + self.beta2 + self.eta1 + self.eta2
    }

    pub fn bump(&mut self, rule: Rule) {
        match rule {
            Rule::Beta1 => self.beta1 += 1,
            Rule::Beta2 => self.beta2 += 1,
            Rule::Eta1 => self.eta1 += 1,
            Rule::Eta2 => self.eta2 += 1,
        }
    }
}

impl std::ops::AddAssign for StepCount {
    fn add_assign(&mut self, o: StepCount) {
        self.beta1 += o.beta1;
        self.beta2 += o.beta2;
        self.eta1 += o.eta1;
        self.eta2 += o.eta2;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizeResult {
    pub normal_form: Term,
    pub steps: StepCount,
    pub fuel_exhausted: bool,
}

pub const DEFAULT_FUEL: u64 = 10_000_000;

/// The rule that applies at the root of `t`, if any.
pub fn redex_rule(t: &Term, rules: RuleSet) -> Option<Rule> {
    match t {
        Term::App(f, _) if rules.beta1 && matches!(f.as_ref(), Term::Abs(..)) => Some(Rule::Beta1),
        Term::LetPair(_, _, r, _) if rules.beta2 && matches!(r.as_ref(), Term::Pair(..)) => {
            Some(Rule::Beta2)
        }
        Term::Abs(x, b) if rules.eta1 => match b.as_ref() {
            Term::App(f, a)
                if matches!(a.as_ref(), Term::Var(y) if y == x) && !f.occurs_free(x) =>
            {
                Some(Rule::Eta1)
            }
            _ => None,
        },
        Term::LetPair(x, y, _, b) if rules.eta2 => match b.as_ref() {
            Term::Pair(l, r)
                if matches!(l.as_ref(), Term::Var(a) if a == x)
                    && matches!(r.as_ref(), Term::Var(c) if c == y) =>
            {
                Some(Rule::Eta2)
            }
            _ => None,
        },
        _ => None,
    }
}

/// Path of the leftmost-outermost redex: preorder, function before argument,
/// right-hand side before body.
pub fn first_redex(t: &Term, rules: RuleSet) -> Option<(NodePath, Rule)> {
    fn go(t: &Term, rules: RuleSet, path: &mut Vec<usize>) -> Option<Rule> {
        if let Some(r) = redex_rule(t, rules) {
            return Some(r);
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            if let Some(r) = go(c, rules, path) {
                return Some(r);
            }
            path.pop();
        }
        None
    }
    let mut path = Vec::new();
    go(t, rules, &mut path).map(|r| (NodePath(path), r))
}

/// Every redex position, in preorder.
pub fn redexes(t: &Term, rules: RuleSet) -> Vec<(NodePath, Rule)> {
    fn go(t: &Term, rules: RuleSet, path: &mut Vec<usize>, out: &mut Vec<(NodePath, Rule)>) {
        if let Some(r) = redex_rule(t, rules) {
            out.push((NodePath(path.clone()), r));
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            go(c, rules, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(t, rules, &mut Vec::new(), &mut out);
    out
}

/// Contracts the redex at the root of `t`. `t` must be a redex for `rule`.
fn contract(t: Term, rule: Rule) -> Term {
    match (rule, t) {
        (Rule::Beta1, Term::App(f, s)) => match *f {
            Term::Abs(x, body) => substitute(&body, &x, &s),
            _ => unreachable!("β₁ on a non-redex"),
        },
        (Rule::Beta2, Term::LetPair(x, y, r, w)) => match *r {
            Term::Pair(u, v) => {
                // Simultaneous w[u/x, v/y]: park y on a name free nowhere first.
                let mut avoid = w.all_names();
                avoid.extend(u.all_names());
                avoid.extend(v.all_names());
                avoid.insert(x.clone());
                let y2 = fresh_name(&y, &avoid);
                let w = substitute(&w, &y, &Term::Var(y2.clone()));
                let w = substitute(&w, &x, &u);
                substitute(&w, &y2, &v)
            }
            _ => unreachable!("β₂ on a non-redex"),
        },
        (Rule::Eta1, Term::Abs(_, b)) => match *b {
            Term::App(f, _) => *f,
            _ => unreachable!("η₁ on a non-redex"),
        },
        (Rule::Eta2, Term::LetPair(_, _, r, _)) => *r,
        _ => unreachable!("rule does not match redex shape"),
    }
}

/// Contracts the redex at `path`; `None` if there is no enabled redex there.
pub fn step_at(t: &Term, path: &NodePath, rules: RuleSet) -> Option<(Term, Rule)> {
    let rule = redex_rule(t.subterm(path)?, rules)?;
    let mut out = t.clone();
    let slot = out.subterm_mut(path)?;
    let old = std::mem::replace(slot, Term::Var(String::new()));
    *slot = contract(old, rule);
    Some((out, rule))
}

/// One leftmost-outermost step.
pub fn step(t: &Term, rules: RuleSet) -> Option<(Term, Rule, NodePath)> {
    let (path, _) = first_redex(t, rules)?;
    let (out, rule) = step_at(t, &path, rules)?;
    Some((out, rule, path))
}

/// Iterates [`step`] until no redex remains or `fuel` steps were taken.
pub fn normalize(t: &Term, rules: RuleSet, fuel: u64) -> NormalizeResult {
    let mut cur = t.clone();
    let mut steps = StepCount::default();
    loop {
        let Some((path, _)) = first_redex(&cur, rules) else {
            return NormalizeResult {
                normal_form: cur,
                steps,
                fuel_exhausted: false,
            };
        };
        if steps.total() >= fuel {
            return NormalizeResult {
                normal_form: cur,
                steps,
                fuel_exhausted: true,
            };
        }
        let slot = cur.subterm_mut(&path).expect("redex path resolves");
        let old = std::mem::replace(slot, Term::Var(String::new()));
        let rule = redex_rule(&old, rules).expect("redex still present");
        *slot = contract(old, rule);
        steps.bump(rule);
    }
}

/// True iff no enabled redex occurs anywhere in `t`.
pub fn is_normal(t: &Term, rules: RuleSet) -> bool {
    first_redex(t, rules).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_term};

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn single_steps() {
        let (t, r, path) = step(&p("(fn x=> x) y"), RuleSet::default()).unwrap();
        assert_eq!((t, r, path), (p("y"), Rule::Beta1, NodePath::root()));
        let (t, r, _) = step(&p("let val (x,y)=(u,v) in (y,x) end"), RuleSet::default()).unwrap();
        assert_eq!((t, r), (p("(v, u)"), Rule::Beta2));
        assert!(step(&p("fn x=> x"), RuleSet::default()).is_none());
    }

    #[test]
    fn beta2_is_simultaneous() {
        // u mentions y: a sequential substitution would capture it.
        let t = p("let val (x,y)=(y, x) in (x, y) end");
        let (s, _, _) = step(&t, RuleSet::default()).unwrap();
        assert_eq!(s, p("(y, x)"));
    }

    #[test]
    fn leftmost_outermost_order() {
        let t = p("f ((fn a=> a) b) ((fn c=> c) d)");
        let (_, _, path) = step(&t, RuleSet::default()).unwrap();
        assert_eq!(path, NodePath(vec![0, 1]));
        let t = p("let val (x,y)=(fn a=> a) (b, c) in (fn z=> z) (x, y) end");
        assert_eq!(
            first_redex(&t, RuleSet::default()).unwrap().0,
            NodePath(vec![0])
        );
    }

    #[test]
    fn eta_rules_are_opt_in() {
        let t = p("fn x=> f x");
        assert!(step(&t, RuleSet::default()).is_none());
        assert_eq!(step(&t, RuleSet::all()).unwrap().0, p("f"));
        assert!(step(&p("fn x=> x x"), RuleSet::all()).is_none());
        let t = p("let val (x,y)=p in (x, y) end");
        assert_eq!(step(&t, RuleSet::all()).unwrap().1, Rule::Eta2);
    }

    #[test]
    fn normalize_counts_and_fuel() {
        let v1 = p("fn f1=> fn f0=> fn x=> f1 (f0 x)");
        let r = normalize(
            &Term::app(p("fn y=> y"), v1.clone()),
            RuleSet::default(),
            DEFAULT_FUEL,
        );
        assert!(alpha_eq(&r.normal_form, &v1));
        assert_eq!(r.steps.beta1, 1);
        assert!(!r.fuel_exhausted);
        let r = normalize(&p("(fn a=> a) ((fn b=> b) c)"), RuleSet::default(), 1);
        assert!(r.fuel_exhausted);
        assert_eq!(r.steps.total(), 1);
    }
}
