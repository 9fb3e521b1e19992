//! Burmeister `.cxt` reader and writer.
//!
//! ```text
//! B
//!
//! <|G|>
//! <|M|>
//!
//! <object names, one per line>
//! <attribute names, one per line>
//! <|G| rows of X / . of width |M|>
//! ```

use std::fs;
use std::path::Path;

use super::bitset::BitSet;
use super::context::FormalContext;
use crate::error::{Error, Result};

pub fn write_cxt(ctx: &FormalContext) -> String {
    let mut out = String::new();
    out.push_str("B\n\n");
    out.push_str(&format!("{}\n{}\n\n", ctx.object_count(), ctx.attribute_count()));
    for g in ctx.objects() {
        out.push_str(g);
        out.push('\n');
    }
    for m in ctx.attributes() {
        out.push_str(m);
        out.push('\n');
    }
    for row in ctx.rows() {
        for m in 0..ctx.attribute_count() {
            out.push(if row.contains(m) { 'X' } else { '.' });
        }
        out.push('\n');
    }
    out
}

/// Parses `.cxt` text; `source` names the input in error messages.
pub fn parse_cxt(text: &str, source: &Path) -> Result<FormalContext> {
    let err = |msg: String| Error::format(source, msg);
    let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| err(format!("unexpected end of file, expected {what}")))
    };

    if next("header")?.trim() != "B" {
        return Err(err("first line must be `B`".into()));
    }
    // line 2 is conventionally blank but some writers put a context name there
    next("blank line")?;
    let g: usize = next("object count")?
        .trim()
        .parse()
        .map_err(|_| err("object count is not an integer".into()))?;
    let m: usize = next("attribute count")?
        .trim()
        .parse()
        .map_err(|_| err("attribute count is not an integer".into()))?;
    if !next("blank line")?.trim().is_empty() {
        return Err(err("line 5 must be blank".into()));
    }
    let mut objects = Vec::with_capacity(g);
    for _ in 0..g {
        objects.push(next("object name")?.to_string());
    }
    let mut attributes = Vec::with_capacity(m);
    for _ in 0..m {
        attributes.push(next("attribute name")?.to_string());
    }
    let mut rows = Vec::with_capacity(g);
    for i in 0..g {
        let line = next("incidence row")?.trim_end();
        let chars: Vec<char> = line.chars().collect();
        if chars.len() != m {
            return Err(err(format!(
                "incidence row {} has width {}, expected {m}",
                i + 1,
                chars.len()
            )));
        }
        let mut row = BitSet::empty(m);
        for (j, c) in chars.into_iter().enumerate() {
            match c {
                'X' | 'x' => row.insert(j),
                '.' => {}
                other => {
                    return Err(err(format!(
                        "invalid incidence character `{other}` in row {}",
                        i + 1
                    )))
                }
            }
        }
        rows.push(row);
    }
    FormalContext::new(objects, attributes, rows).map_err(|e| err(e.to_string()))
}

pub fn read_cxt(path: &Path) -> Result<FormalContext> {
    let text = fs::read_to_string(path)?;
    parse_cxt(&text, path)
}
