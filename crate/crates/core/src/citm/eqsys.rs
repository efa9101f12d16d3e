//! Guarded recursive equation systems in a small textual format.
//!
//! A system starts with a header naming the signature, the recursion
//! variables, and the parameters, followed by one equation per variable:
//!
//! ```text
//! sig: *:2, c:0; vars: x1,x2; params: y1,y2
//! x1 = *( x2, y1 )
//! x2 = *( *( x1, y2 ), c )
//! ```
//!
//! A right-hand side must be operation-rooted or a bare parameter; a bare
//! recursion variable is rejected as unguarded.  Solving substitutes the
//! system into itself `k` times and truncates, which pins the unique
//! solution down to depth `k`; starting the iteration from the all-`□`
//! assignment instead must (and does) land on the same truncation.

use crate::cat::{CatError, CatResult};

use super::tree::{valid_ident, IdealMonadStructure, Signature, SigmaTree};

/// A leaf of an equation body: recursion variable or parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    Var(usize),
    Param(usize),
}

/// A term over the signature with variable and parameter leaves.
pub type Term = SigmaTree<Atom>;

/// The system's defining map, one body per recursion variable — the
/// equation-presented form of a guarded morphism into the term monad.
#[derive(Debug, Clone, PartialEq)]
pub struct EquationMorphism {
    pub bodies: Vec<Term>,
}

/// What makes a right-hand side guarded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhsClass {
    /// Rooted at this operation symbol.
    OpRooted(usize),
    /// A bare parameter.
    Parameter(usize),
}

/// A parsed guarded equation system.
#[derive(Debug, Clone)]
pub struct EquationSystem {
    sig: Signature,
    vars: Vec<String>,
    params: Vec<String>,
    morphism: EquationMorphism,
}

fn parse_err(msg: impl Into<String>) -> CatError {
    CatError::Parse(msg.into())
}

/// Recursive-descent term reader.
struct TermParser<'a> {
    chars: Vec<char>,
    pos: usize,
    sig: &'a Signature,
    vars: &'a [String],
    params: &'a [String],
}

impl<'a> TermParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn ident(&mut self) -> CatResult<String> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_whitespace() || matches!(c, '(' | ')' | ',') {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(parse_err(format!(
                "expected a name at column {}",
                self.pos + 1
            )));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn term(&mut self) -> CatResult<Term> {
        self.skip_ws();
        let name = self.ident()?;
        self.skip_ws();
        let args = if self.peek() == Some('(') {
            self.pos += 1;
            let mut args = Vec::new();
            self.skip_ws();
            if self.peek() == Some(')') {
                self.pos += 1;
            } else {
                loop {
                    args.push(self.term()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(parse_err(format!("unclosed argument list of `{name}`"))),
                    }
                }
            }
            Some(args)
        } else {
            None
        };
        if let Some(op) = self.sig.index_of(&name) {
            let args = args.unwrap_or_default();
            if args.len() != self.sig.arity(op) {
                return Err(parse_err(format!(
                    "`{name}` expects {} arguments, got {}",
                    self.sig.arity(op),
                    args.len()
                )));
            }
            return Ok(SigmaTree::Op(op, args));
        }
        if args.is_some() {
            return Err(parse_err(format!("`{name}` is not an operation")));
        }
        if let Some(i) = self.vars.iter().position(|v| v == &name) {
            return Ok(SigmaTree::Leaf(Atom::Var(i)));
        }
        if let Some(j) = self.params.iter().position(|p| p == &name) {
            return Ok(SigmaTree::Leaf(Atom::Param(j)));
        }
        Err(parse_err(format!("unknown name `{name}`")))
    }
}

fn parse_names(seg: &str, key: &str) -> CatResult<Vec<String>> {
    let body = seg
        .trim()
        .strip_prefix(key)
        .ok_or_else(|| parse_err(format!("expected `{key}` section, found `{seg}`")))?;
    let mut out = Vec::new();
    for item in body.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        if !valid_ident(item) {
            return Err(parse_err(format!("bad name `{item}`")));
        }
        if out.iter().any(|o| o == item) {
            return Err(parse_err(format!("duplicate name `{item}`")));
        }
        out.push(item.to_string());
    }
    Ok(out)
}

impl EquationSystem {
    /// Parse the textual format.  Syntax only: guardedness is checked by
    /// [`EquationSystem::guardedness_factor`] (and hence by `solve`).
    pub fn parse(src: &str) -> CatResult<Self> {
        let mut lines = src
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| parse_err("empty input"))?;
        let segs: Vec<&str> = header.split(';').collect();
        if segs.len() < 2 || segs.len() > 3 {
            return Err(parse_err(
                "header must be `sig: ...; vars: ...[; params: ...]`",
            ));
        }
        let sig_body = segs[0]
            .trim()
            .strip_prefix("sig:")
            .ok_or_else(|| parse_err("header must start with `sig:`"))?;
        let mut ops = Vec::new();
        for item in sig_body.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (name, arity) = item
                .split_once(':')
                .ok_or_else(|| parse_err(format!("operation `{item}` needs `name:arity`")))?;
            let arity: usize = arity
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad arity in `{item}`")))?;
            ops.push((name.trim().to_string(), arity));
        }
        let sig = Signature::new(ops)?;
        let vars = parse_names(segs[1], "vars:")?;
        let params = if segs.len() == 3 {
            parse_names(segs[2], "params:")?
        } else {
            Vec::new()
        };
        for v in vars.iter().chain(params.iter()) {
            if sig.index_of(v).is_some() {
                return Err(parse_err(format!("`{v}` is both an operation and a name")));
            }
        }
        if let Some(v) = vars.iter().find(|v| params.contains(v)) {
            return Err(parse_err(format!("`{v}` is both a variable and a parameter")));
        }

        let mut bodies: Vec<Option<Term>> = vec![None; vars.len()];
        for line in lines {
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("`{line}` is not an equation")))?;
            let lhs = lhs.trim();
            let i = vars
                .iter()
                .position(|v| v == lhs)
                .ok_or_else(|| parse_err(format!("`{lhs}` is not a declared variable")))?;
            if bodies[i].is_some() {
                return Err(parse_err(format!("two equations for `{lhs}`")));
            }
            let mut tp = TermParser {
                chars: rhs.chars().collect(),
                pos: 0,
                sig: &sig,
                vars: &vars,
                params: &params,
            };
            let t = tp.term()?;
            tp.skip_ws();
            if tp.pos != tp.chars.len() {
                return Err(parse_err(format!("trailing input after the body of `{lhs}`")));
            }
            bodies[i] = Some(t);
        }
        let bodies: Vec<Term> = bodies
            .into_iter()
            .zip(&vars)
            .map(|(b, v)| b.ok_or_else(|| parse_err(format!("no equation for `{v}`"))))
            .collect::<CatResult<_>>()?;
        Ok(EquationSystem {
            sig,
            vars,
            params,
            morphism: EquationMorphism { bodies },
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn morphism(&self) -> &EquationMorphism {
        &self.morphism
    }

    /// Factor each right-hand side through the guarded shape, or name the
    /// offending equation.
    pub fn guardedness_factor(&self) -> CatResult<Vec<RhsClass>> {
        self.morphism
            .bodies
            .iter()
            .enumerate()
            .map(|(i, b)| match b {
                SigmaTree::Op(op, _) => Ok(RhsClass::OpRooted(*op)),
                SigmaTree::Leaf(Atom::Param(p)) => Ok(RhsClass::Parameter(*p)),
                _ => Err(CatError::Unguarded {
                    variable: self.vars[i].clone(),
                }),
            })
            .collect()
    }

    fn step(&self, s: &[Term], k: u32) -> Vec<Term> {
        self.morphism
            .bodies
            .iter()
            .map(|b| {
                b.bind(&|a| match a {
                    Atom::Var(j) => s[*j].clone(),
                    Atom::Param(p) => SigmaTree::Leaf(Atom::Param(*p)),
                })
                .truncate(k)
            })
            .collect()
    }

    /// The dagger of the system, pinned down to depth `k`: substitute the
    /// system into itself `k` times starting from the variables themselves.
    /// Guardedness pushes every leftover variable to depth ≥ `k`, so the
    /// final truncation returns closed depth-`k` trees.
    pub fn solve(&self, k: u32) -> CatResult<Vec<Term>> {
        self.guardedness_factor()?;
        let mut s: Vec<Term> = (0..self.vars.len())
            .map(|i| SigmaTree::Leaf(Atom::Var(i)))
            .collect();
        for _ in 0..k {
            s = self.step(&s, k);
        }
        Ok(s.iter().map(|t| t.truncate(k)).collect())
    }

    /// Independent cross-check: the same iteration started from the all-`□`
    /// assignment.  Lands on the same depth-`k` truncation.
    pub fn solve_from_cut(&self, k: u32) -> CatResult<Vec<Term>> {
        self.guardedness_factor()?;
        let mut s: Vec<Term> = vec![SigmaTree::Cut; self.vars.len()];
        for _ in 0..k {
            s = self.step(&s, k);
        }
        Ok(s.iter().map(|t| t.truncate(k)).collect())
    }

    /// Verify the solution square at depth `k`: substituting the solution
    /// into each body reproduces the solution.
    pub fn check_square(&self, sol: &[Term], k: u32) -> bool {
        if sol.len() != self.vars.len() {
            return false;
        }
        self.morphism.bodies.iter().enumerate().all(|(i, b)| {
            let lhs = b
                .bind(&|a| match a {
                    Atom::Var(j) => sol[*j].clone(),
                    Atom::Param(p) => SigmaTree::Leaf(Atom::Param(*p)),
                })
                .truncate(k);
            lhs == sol[i].truncate(k)
        })
    }

    /// Render one term in the input syntax under the depth-`k` display rule.
    pub fn render_term(&self, t: &Term, k: u32) -> String {
        t.render(&self.sig, k, &|a| match a {
            Atom::Var(i) => self.vars[*i].clone(),
            Atom::Param(j) => self.params[*j].clone(),
        })
    }

    /// One `var = term` line per variable, in declaration order.
    pub fn render_solution(&self, sol: &[Term], k: u32) -> Vec<String> {
        self.vars
            .iter()
            .zip(sol)
            .map(|(v, t)| format!("{v} = {}", self.render_term(t, k)))
            .collect()
    }

    /// The ideal-monad view of the signature, shared with the model.
    pub fn monad(&self) -> IdealMonadStructure<'_> {
        IdealMonadStructure::new(&self.sig)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = "\
sig: *:2, c:0; vars: x1,x2; params: y1,y2
x1 = *( x2, y1 )
x2 = *( *( x1, y2 ), c )
";

    #[test]
    fn solves_the_two_variable_stream_system() {
        let sys = EquationSystem::parse(WORKED).unwrap();
        let sol = sys.solve(4).unwrap();
        let lines = sys.render_solution(&sol, 4);
        assert_eq!(lines[0], "x1 = *(*(*(□,y2),c),y1)");
        assert_eq!(lines[1], "x2 = *(*(*(□,y1),y2),c)");
    }

    #[test]
    fn solution_square_holds_at_depth() {
        let sys = EquationSystem::parse(WORKED).unwrap();
        for k in [1, 2, 4, 8] {
            let sol = sys.solve(k).unwrap();
            assert!(sys.check_square(&sol, k), "square fails at depth {k}");
        }
    }

    #[test]
    fn both_solvers_agree() {
        let sys = EquationSystem::parse(WORKED).unwrap();
        for k in [1, 3, 5, 9] {
            assert_eq!(sys.solve(k).unwrap(), sys.solve_from_cut(k).unwrap());
        }
    }

    #[test]
    fn unary_chain_prints_boxes() {
        let sys = EquationSystem::parse("sig: s:1; vars: x; params:\nx = s(x)").unwrap();
        let sol = sys.solve(4).unwrap();
        assert_eq!(sys.render_solution(&sol, 4), vec!["x = s(s(s(□)))"]);
    }

    #[test]
    fn bare_parameter_is_guarded() {
        let sys = EquationSystem::parse("sig: s:1; vars: x; params: y\nx = y").unwrap();
        assert_eq!(sys.guardedness_factor().unwrap(), vec![RhsClass::Parameter(0)]);
        let sol = sys.solve(6).unwrap();
        assert_eq!(sys.render_solution(&sol, 6), vec!["x = y"]);
    }

    #[test]
    fn bare_variables_are_rejected_by_name() {
        let sys = EquationSystem::parse("sig: s:1; vars: x; params: y\nx = x").unwrap();
        match sys.solve(3) {
            Err(CatError::Unguarded { variable }) => assert_eq!(variable, "x"),
            other => panic!("expected unguarded error, got {other:?}"),
        }
        let sys2 =
            EquationSystem::parse("sig: s:1; vars: x1,x2; params:\nx1 = x2\nx2 = s(x1)").unwrap();
        match sys2.guardedness_factor() {
            Err(CatError::Unguarded { variable }) => assert_eq!(variable, "x1"),
            other => panic!("expected unguarded error, got {other:?}"),
        }
    }

    #[test]
    fn parser_rejects_malformed_systems() {
        // unknown symbol
        assert!(EquationSystem::parse("sig: s:1; vars: x; params:\nx = t(x)").is_err());
        // arity mismatch
        assert!(EquationSystem::parse("sig: s:1; vars: x; params:\nx = s(x,x)").is_err());
        // missing equation
        assert!(EquationSystem::parse("sig: s:1; vars: x,z; params:\nx = s(x)").is_err());
        // duplicate equation
        assert!(
            EquationSystem::parse("sig: s:1; vars: x; params:\nx = s(x)\nx = s(s(x))").is_err()
        );
        // trailing garbage
        assert!(EquationSystem::parse("sig: s:1; vars: x; params:\nx = s(x) s").is_err());
        // parameter applied like an operation
        assert!(EquationSystem::parse("sig: s:1; vars: x; params: y\nx = y(x)").is_err());
        // name clash between sections
        assert!(EquationSystem::parse("sig: s:1; vars: s; params:\ns = s(s)").is_err());
    }

    #[test]
    fn empty_variable_list_is_fine() {
        let sys = EquationSystem::parse("sig: s:1; vars: ; params: y").unwrap();
        assert!(sys.solve(5).unwrap().is_empty());
        assert!(sys.check_square(&[], 5));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let src = "# stream of ys\nsig: s:1; vars: x; params: y\n\nx = s(x)\n";
        let sys = EquationSystem::parse(src).unwrap();
        assert_eq!(sys.vars(), &["x".to_string()]);
        assert_eq!(sys.guardedness_factor().unwrap(), vec![RhsClass::OpRooted(0)]);
    }
}
