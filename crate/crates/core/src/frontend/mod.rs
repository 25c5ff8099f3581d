//! Text formats: the `.wd` description language, JSON output and the CLI.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::model::gauss;
use crate::model::{BlockConstant, FieldData, GaloisBlock, WDRep};

pub mod cli;
pub mod emit;
mod parse;

pub use parse::parse;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: {constraint}")]
    Semantic {
        line: usize,
        col: usize,
        constraint: String,
    },
}

/// A parsed `.wd` file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub field: FieldData,
    /// Declared blocks in declaration order (`triv` is implicit).
    pub blocks: Vec<Arc<GaloisBlock>>,
    /// Twist variable names; position `j` names torus coordinate `j + 1`.
    pub var_names: Vec<String>,
    pub rep: WDRep,
}

impl Document {
    /// Canonical `.wd` text; `parse(doc.to_dsl()) == doc`.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "field q={} psi={}",
            self.field.q(),
            self.field.psi_conductor()
        )
        .unwrap();
        for b in &self.blocks {
            write!(
                out,
                "block {} {{ dim={} a={} dimI={}",
                b.id, b.dim, b.a, b.dim_i
            )
            .unwrap();
            if let BlockConstant::Value(v) = &b.det_phi {
                write!(out, " detPhi={}", gauss::format(v)).unwrap();
            }
            if let BlockConstant::Value(v) = &b.eps {
                write!(out, " eps={}", gauss::format(v)).unwrap();
            }
            if let Some(p) = &b.profile {
                let pairs: Vec<String> = p
                    .indices()
                    .iter()
                    .zip(&p.fixed_dims()[1..])
                    .map(|(k, f)| format!("({k},{f})"))
                    .collect();
                write!(out, " profile=[{}]", pairs.join(",")).unwrap();
            }
            writeln!(out, " }}").unwrap();
        }
        let summands: Vec<String> = self
            .rep
            .summands()
            .iter()
            .zip(&self.var_names)
            .map(|(s, v)| format!("tw({})*{}*Sp({})", v, s.block.id, s.sp_dim))
            .collect();
        writeln!(out, "rep {{ {} }}", summands.join("; ")).unwrap();
        out
    }

    /// Index (0-based) of a twist variable.
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|v| v == name)
    }
}
