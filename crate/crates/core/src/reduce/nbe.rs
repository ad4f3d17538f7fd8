//! Normalization by evaluation for linear terms.
//!
//! On a linear term every β₁ step removes exactly one application node and
//! every β₂ step exactly one let and one pair, so the step counts of any
//! complete reduction are fixed by the term alone. This evaluator reaches the
//! same normal form as the stepwise reducer (up to alpha) and counts the
//! contractions it performs; tests cross-check both.

use std::collections::HashSet;
use std::rc::Rc;

use thiserror::Error;

use super::step::StepCount;
use crate::syntax::{name_stem, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NbeError {
    #[error("evaluation needed more than {0} steps")]
    FuelExhausted(u64),
    #[error("stuck: {0}")]
    Stuck(&'static str),
}

#[derive(Clone)]
enum Val<'t> {
    Clo(Env<'t>, &'t str, &'t Term),
    Pair(Rc<Val<'t>>, Rc<Val<'t>>),
    Neu(Rc<Neu<'t>>),
}

enum Neu<'t> {
    Var(String),
    App(Rc<Neu<'t>>, Val<'t>),
    Let(Rc<Neu<'t>>, Env<'t>, &'t str, &'t str, &'t Term),
}

type Env<'t> = Option<Rc<Frame<'t>>>;

struct Frame<'t> {
    name: &'t str,
    val: Val<'t>,
    next: Env<'t>,
}

fn extend<'t>(env: &Env<'t>, name: &'t str, val: Val<'t>) -> Env<'t> {
    Some(Rc::new(Frame {
        name,
        val,
        next: env.clone(),
    }))
}

struct Machine {
    steps: StepCount,
    fuel: u64,
    counter: usize,
    avoid: HashSet<String>,
}

impl Machine {
    fn tick(&mut self, beta2: bool) -> Result<(), NbeError> {
        if beta2 {
            self.steps.beta2 += 1;
        } else {
            self.steps.beta1 += 1;
        }
        if self.steps.total() > self.fuel {
            return Err(NbeError::FuelExhausted(self.fuel));
        }
        Ok(())
    }

    fn fresh(&mut self, base: &str) -> String {
        let stem = name_stem(base);
        loop {
            let n = format!("{stem}_{}", self.counter);
            self.counter += 1;
            if !self.avoid.contains(&n) {
                return n;
            }
        }
    }

    fn eval<'t>(&mut self, t: &'t Term, env: &Env<'t>) -> Result<Val<'t>, NbeError> {
        match t {
            Term::Var(x) => {
                let mut e = env;
                while let Some(f) = e {
                    if f.name == x {
                        return Ok(f.val.clone());
                    }
                    e = &f.next;
                }
                Ok(Val::Neu(Rc::new(Neu::Var(x.clone()))))
            }
            Term::Abs(x, b) => Ok(Val::Clo(env.clone(), x, b)),
            Term::App(f, a) => {
                let fv = self.eval(f, env)?;
                let av = self.eval(a, env)?;
                self.apply(fv, av)
            }
            Term::Pair(l, r) => Ok(Val::Pair(
                Rc::new(self.eval(l, env)?),
                Rc::new(self.eval(r, env)?),
            )),
            Term::LetPair(x, y, r, b) => match self.eval(r, env)? {
                Val::Pair(u, v) => {
                    self.tick(true)?;
                    let env = extend(env, x, (*u).clone());
                    let env = extend(&env, y, (*v).clone());
                    self.eval(b, &env)
                }
                Val::Neu(n) => Ok(Val::Neu(Rc::new(Neu::Let(n, env.clone(), x, y, b)))),
                Val::Clo(..) => Err(NbeError::Stuck("let destructures a function")),
            },
        }
    }

    fn apply<'t>(&mut self, f: Val<'t>, a: Val<'t>) -> Result<Val<'t>, NbeError> {
        match f {
            Val::Clo(env, x, body) => {
                self.tick(false)?;
                self.eval(body, &extend(&env, x, a))
            }
            Val::Neu(n) => Ok(Val::Neu(Rc::new(Neu::App(n, a)))),
            Val::Pair(..) => Err(NbeError::Stuck("a pair is applied")),
        }
    }

    fn quote(&mut self, v: &Val<'_>) -> Result<Term, NbeError> {
        match v {
            Val::Clo(env, x, body) => {
                let y = self.fresh(x);
                let arg = Val::Neu(Rc::new(Neu::Var(y.clone())));
                let b = self.eval(body, &extend(env, x, arg))?;
                Ok(Term::abs(y, self.quote(&b)?))
            }
            Val::Pair(l, r) => Ok(Term::pair(self.quote(l)?, self.quote(r)?)),
            Val::Neu(n) => self.quote_neu(n),
        }
    }

    fn quote_neu(&mut self, n: &Neu<'_>) -> Result<Term, NbeError> {
        match n {
            Neu::Var(x) => Ok(Term::var(x.clone())),
            Neu::App(f, a) => Ok(Term::app(self.quote_neu(f)?, self.quote(a)?)),
            Neu::Let(r, env, x, y, body) => {
                let rt = self.quote_neu(r)?;
                let (x2, y2) = (self.fresh(x), self.fresh(y));
                let env = extend(env, x, Val::Neu(Rc::new(Neu::Var(x2.clone()))));
                let env = extend(&env, y, Val::Neu(Rc::new(Neu::Var(y2.clone()))));
                let b = self.eval(body, &env)?;
                Ok(Term::let_pair(x2, y2, rt, self.quote(&b)?))
            }
        }
    }
}

/// β-normal form of `t` and the number of β₁/β₂ contractions performed.
/// Intended for linear terms, where the counts coincide with those of any
/// complete reduction sequence.
pub fn normalize_fast(t: &Term, fuel: u64) -> Result<(Term, StepCount), NbeError> {
    normalize_app(t, &[], fuel)
}

/// Normal form of `f a1 ... an` without building the application first.
pub fn normalize_app(f: &Term, args: &[&Term], fuel: u64) -> Result<(Term, StepCount), NbeError> {
    let mut avoid = f.free_vars();
    for a in args {
        avoid.extend(a.free_vars());
    }
    let mut m = Machine {
        steps: StepCount::default(),
        fuel,
        counter: 0,
        avoid,
    };
    let mut v = m.eval(f, &None)?;
    for a in args {
        let av = m.eval(a, &None)?;
        v = m.apply(v, av)?;
    }
    let nf = m.quote(&v)?;
    Ok((nf, m.steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce::step::{normalize, RuleSet, DEFAULT_FUEL};
    use crate::syntax::{alpha_eq, parse_term};

    #[test]
    fn agrees_with_stepwise() {
        for src in [
            "(fn x=> x) y",
            "let val (x,y)=(u,v) in (y, x) end",
            "(fn h=> fn f1=> fn f0=> fn x=> f0 (h (fn a=> a) (fn b=> b) (f1 x))) (fn g1=> fn g0=> fn z=> g1 (g0 z))",
            "fn p=> let val (x,y)=p in (fn a=> a) (y, x) end",
            "(fn h=> fn z=> let val (f,g)=h in let val (x,y)=z in (f x, g y) end end) ((fn a=> a), (fn b=> b)) (c, d)",
        ] {
            let t = parse_term(src).unwrap();
            let slow = normalize(&t, RuleSet::default(), DEFAULT_FUEL);
            let (nf, steps) = normalize_fast(&t, DEFAULT_FUEL).unwrap();
            assert!(alpha_eq(&nf, &slow.normal_form), "{src}");
            assert_eq!(steps, slow.steps, "{src}");
        }
    }

    #[test]
    fn fresh_names_avoid_free_variables() {
        let t = parse_term("(fn x_0=> fn x=> x_0 x) x_0").unwrap();
        let (nf, _) = normalize_fast(&t, DEFAULT_FUEL).unwrap();
        let slow = normalize(&t, RuleSet::default(), DEFAULT_FUEL).normal_form;
        assert!(alpha_eq(&nf, &slow));
    }

    #[test]
    fn fuel_and_stuck_terms() {
        let t = parse_term("(fn a=> a) ((fn b=> b) c)").unwrap();
        assert_eq!(normalize_fast(&t, 1), Err(NbeError::FuelExhausted(1)));
        let t = parse_term("(a, b) c").unwrap();
        assert!(matches!(normalize_fast(&t, 10), Err(NbeError::Stuck(_))));
    }
}
