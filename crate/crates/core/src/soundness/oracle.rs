//! A deliberately naive control-flow interpreter for try/catch blocks.
//!
//! It pattern-matches on packets step by step: an incoming exception is
//! abrupt; if the body raises, the handlers are tried head-first by name,
//! and a catch-all matches every packet and discards its payload. Shares
//! no code with the compositional evaluator; the leaf denotations of the
//! body and handlers are the only common input.

use crate::elaborate::{CatchClause, TryCatchSpec};
use crate::error::ModelError;
use crate::exc::{ExcDen, ExcEnv};
use crate::value::{Point, Value};

pub struct OracleSpec {
    pub body: ExcDen,
    pub clauses: Vec<(Option<String>, ExcDen)>,
}

impl OracleSpec {
    /// Evaluates the leaf denotations once; the control flow itself never
    /// touches the compositional evaluator.
    pub fn prepare(env: &ExcEnv<'_>, spec: &TryCatchSpec) -> Result<OracleSpec, ModelError> {
        let body = env.eval(&spec.body)?;
        let mut clauses = Vec::new();
        for c in &spec.clauses {
            match c {
                CatchClause::Named { name, body } => {
                    clauses.push((Some(name.clone()), env.eval(body)?));
                }
                CatchClause::All { body } => {
                    clauses.push((None, env.eval(body)?));
                }
            }
        }
        Ok(OracleSpec { body, clauses })
    }

    /// One pass of the control flow on a single input of `A + E`.
    pub fn run(&self, env: &ExcEnv<'_>, input: &Point) -> Result<Point, ModelError> {
        // is this value an exception? then the whole block is abrupt
        if input.is_packet() {
            return Ok(input.clone());
        }
        let out = env.apply(&self.body, input)?;
        let packet = match out {
            Point::Ord(_) => return Ok(out), // normal
            Point::Exc(p) => p,
        };
        for (name, handler) in &self.clauses {
            match name {
                Some(n) if *n == packet.name => {
                    return env.apply(handler, &Point::Ord(packet.payload.clone()));
                }
                Some(_) => continue,
                None => {
                    // catch-all: forget the payload
                    return env.apply(handler, &Point::Ord(Value::Unit));
                }
            }
        }
        Ok(Point::Exc(packet)) // uncaught: propagate
    }
}
