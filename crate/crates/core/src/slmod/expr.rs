//! A small expression language for naming modules, e.g. `T(3)*fr(V)^2 + sym(St(1),2)`.
//!
//! ```text
//! sum     := product ('+' product)*
//! product := power ('*' power)*
//! power   := atom ('^' n)?
//! atom    := 'V' | 'one' | 'T(' n ')' | 'L(' n ')' | 'St(' n ')'
//!          | 'dual(' sum ')' | 'fr(' sum ')' | 'sym(' sum ',' n ')' | 'wedge(' sum ',' n ')'
//!          | '(' sum ')'
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::exactcore::Field;

use super::constructors::{direct_sum, dual, frobenius_twist, natural_module, tensor_many, tensor_power};
use super::module::{Module, WeightModule};
use super::named::{simple_module, steinberg, tilting_module};
use super::powers::{sym_power, wedge_power};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleExpr {
    Natural,
    One,
    Tilting(u64),
    Simple(u64),
    Steinberg(u32),
    Dual(Box<ModuleExpr>),
    Frobenius(Box<ModuleExpr>),
    Sym(Box<ModuleExpr>, usize),
    Wedge(Box<ModuleExpr>, usize),
    Tensor(Vec<ModuleExpr>),
    Power(Box<ModuleExpr>, usize),
    Sum(Vec<ModuleExpr>),
}

impl ModuleExpr {
    pub fn build(&self, p: u32) -> Result<Module> {
        let m = match self {
            ModuleExpr::Natural => natural_module(p)?,
            ModuleExpr::One => WeightModule::trivial(Field::prime(p)?),
            ModuleExpr::Tilting(m) => tilting_module(p, *m)?,
            ModuleExpr::Simple(m) => simple_module(p, *m)?,
            ModuleExpr::Steinberg(r) => steinberg(p, *r)?,
            ModuleExpr::Dual(e) => dual(&e.build(p)?)?.module,
            ModuleExpr::Frobenius(e) => frobenius_twist(&e.build(p)?)?,
            ModuleExpr::Sym(e, i) => sym_power(&e.build(p)?, *i)?,
            ModuleExpr::Wedge(e, i) => wedge_power(&e.build(p)?, *i)?.0,
            ModuleExpr::Tensor(es) => tensor_many(&es.iter().map(|e| e.build(p)).collect::<Result<Vec<_>>>()?)?.module,
            ModuleExpr::Power(e, n) => tensor_power(&e.build(p)?, *n)?.module,
            ModuleExpr::Sum(es) => direct_sum(&es.iter().map(|e| e.build(p)).collect::<Result<Vec<_>>>()?)?.module,
        };
        Ok(m.relabel(self.to_string()))
    }
}

impl fmt::Display for ModuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, es: &[ModuleExpr], sep: &str| -> fmt::Result {
            for (i, e) in es.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                match e {
                    ModuleExpr::Sum(_) | ModuleExpr::Tensor(_) => write!(f, "({e})")?,
                    _ => write!(f, "{e}")?,
                }
            }
            Ok(())
        };
        match self {
            ModuleExpr::Natural => f.write_str("V"),
            ModuleExpr::One => f.write_str("one"),
            ModuleExpr::Tilting(m) => write!(f, "T({m})"),
            ModuleExpr::Simple(m) => write!(f, "L({m})"),
            ModuleExpr::Steinberg(r) => write!(f, "St({r})"),
            ModuleExpr::Dual(e) => write!(f, "dual({e})"),
            ModuleExpr::Frobenius(e) => write!(f, "fr({e})"),
            ModuleExpr::Sym(e, i) => write!(f, "sym({e},{i})"),
            ModuleExpr::Wedge(e, i) => write!(f, "wedge({e},{i})"),
            ModuleExpr::Tensor(es) => join(f, es, "*"),
            ModuleExpr::Power(e, n) => match **e {
                ModuleExpr::Sum(_) | ModuleExpr::Tensor(_) | ModuleExpr::Power(..) => write!(f, "({e})^{n}"),
                _ => write!(f, "{e}^{n}"),
            },
            ModuleExpr::Sum(es) => {
                for (i, e) in es.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    match e {
                        ModuleExpr::Sum(_) => write!(f, "({e})")?,
                        _ => write!(f, "{e}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("module expression, position {}: {msg}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("expected a natural number"))
    }

    fn ident(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn sum(&mut self) -> Result<ModuleExpr> {
        let mut terms = vec![self.product()?];
        while self.eat(b'+') {
            terms.push(self.product()?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { ModuleExpr::Sum(terms) })
    }

    fn product(&mut self) -> Result<ModuleExpr> {
        let mut factors = vec![self.power()?];
        while self.eat(b'*') {
            factors.push(self.power()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { ModuleExpr::Tensor(factors) })
    }

    fn power(&mut self) -> Result<ModuleExpr> {
        let a = self.atom()?;
        if self.eat(b'^') {
            let n = self.number()? as usize;
            return Ok(ModuleExpr::Power(Box::new(a), n));
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<ModuleExpr> {
        if self.eat(b'(') {
            let e = self.sum()?;
            self.expect(b')')?;
            return Ok(e);
        }
        let name = self.ident();
        let e = match name {
            "V" => ModuleExpr::Natural,
            "one" => ModuleExpr::One,
            "T" | "L" | "St" => {
                self.expect(b'(')?;
                let n = self.number()?;
                self.expect(b')')?;
                match name {
                    "T" => ModuleExpr::Tilting(n),
                    "L" => ModuleExpr::Simple(n),
                    _ => ModuleExpr::Steinberg(u32::try_from(n).map_err(|_| self.err("Steinberg index too large"))?),
                }
            }
            "dual" | "fr" => {
                self.expect(b'(')?;
                let inner = Box::new(self.sum()?);
                self.expect(b')')?;
                if name == "dual" {
                    ModuleExpr::Dual(inner)
                } else {
                    ModuleExpr::Frobenius(inner)
                }
            }
            "sym" | "wedge" => {
                self.expect(b'(')?;
                let inner = Box::new(self.sum()?);
                self.expect(b',')?;
                let i = self.number()? as usize;
                self.expect(b')')?;
                if name == "sym" {
                    ModuleExpr::Sym(inner, i)
                } else {
                    ModuleExpr::Wedge(inner, i)
                }
            }
            "" => return Err(self.err("expected a module")),
            other => return Err(self.err(&format!("unknown name '{other}'"))),
        };
        Ok(e)
    }
}

pub fn parse_module_expr(s: &str) -> Result<ModuleExpr> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in ["V", "V^3", "T(3)*fr(V)", "sym(St(1),2)+one", "dual(L(4))", "(V+one)^2", "wedge(V*V,2)"] {
            let e = parse_module_expr(s).unwrap();
            assert_eq!(e.to_string(), s);
            assert_eq!(parse_module_expr(&e.to_string()).unwrap(), e);
        }
        assert!(parse_module_expr("V*").is_err());
        assert!(parse_module_expr("W").is_err());
        assert!(parse_module_expr("T(3").is_err());
    }

    #[test]
    fn builds_modules() {
        let m = parse_module_expr("V^3").unwrap().build(3).unwrap();
        assert_eq!(m.dim(), 8);
        assert_eq!(m.provenance(), "V^3");
        let m = parse_module_expr("sym(V,2)+one").unwrap().build(3).unwrap();
        assert_eq!(m.dim(), 4);
    }
}
