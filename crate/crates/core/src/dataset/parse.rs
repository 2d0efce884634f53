//! Text formats: facts, mode declarations and example files.
//!
//! ```text
//! % facts
//! actedin(p1, m1).
//! % modes
//! mode: actedin(-person, -movie).
//! ```

use std::sync::Arc;

use super::{ArgMode, ArgSpec, ModeDeclaration, Schema};
use crate::error::{Error, Result};
use crate::logic::{Atom, KnowledgeBase, Predicate, Term};

struct RawAtom<'a> {
    name: &'a str,
    args: Vec<&'a str>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('%') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\'' || c == '-'
}

fn is_variable_name(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_uppercase() || c == '_')
}

/// Parses `name(a, b, ...)` or bare `name`; no trailing period.
fn parse_raw(text: &str) -> Result<RawAtom<'_>, String> {
    let text = text.trim();
    let (name, rest) = match text.find('(') {
        Some(i) => (text[..i].trim(), Some(&text[i + 1..])),
        None => (text, None),
    };
    if name.is_empty() {
        return Err("missing predicate name".into());
    }
    if !name.chars().next().is_some_and(|c| c.is_lowercase()) || !name.chars().all(|c| c.is_alphanumeric() || c == '_')
    {
        return Err(format!("invalid predicate name `{name}`"));
    }
    let mut args = Vec::new();
    if let Some(rest) = rest {
        let inner = rest
            .trim_end()
            .strip_suffix(')')
            .ok_or_else(|| format!("unbalanced parentheses in `{text}`"))?;
        if inner.contains('(') || inner.contains(')') {
            return Err(format!("nested terms are not supported in `{text}`"));
        }
        if !inner.trim().is_empty() {
            for arg in inner.split(',') {
                let arg = arg.trim();
                if arg.is_empty() || !arg.chars().all(|c| is_ident_char(c) || c == '+') {
                    return Err(format!("invalid argument `{arg}` in `{text}`"));
                }
                args.push(arg);
            }
        }
    }
    Ok(RawAtom { name, args })
}

/// One statement per line, terminated by a period.
fn statements(text: &str) -> impl Iterator<Item = (usize, Result<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line_no = i + 1;
        let body = strip_comment(line).trim();
        if body.is_empty() {
            return None;
        }
        let stmt = body.strip_suffix('.').ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("missing trailing period in `{body}`"),
        });
        Some((line_no, stmt))
    })
}

/// Builds a typed atom from text, typing each argument by its position in the
/// predicate's signature. Uppercase or `_`-initial arguments are variables.
pub(crate) fn atom_from_text(text: &str, lookup: impl Fn(&str) -> Option<Arc<Predicate>>) -> Result<Atom, String> {
    let raw = parse_raw(text)?;
    let predicate = lookup(raw.name).ok_or_else(|| format!("unknown predicate `{}`", raw.name))?;
    if raw.args.len() != predicate.arity() {
        return Err(format!(
            "`{}` takes {} arguments, got {}",
            raw.name,
            predicate.arity(),
            raw.args.len()
        ));
    }
    let args = raw
        .args
        .iter()
        .zip(predicate.arg_types())
        .map(|(a, ty)| {
            if is_variable_name(a) {
                Term::variable(*a, ty.clone())
            } else {
                Term::constant(*a, ty.clone())
            }
        })
        .collect();
    Atom::new(&predicate, args).map_err(|e| e.to_string())
}

pub fn parse_modes(text: &str) -> Result<Schema> {
    let mut schema = Schema::default();
    for (line, stmt) in statements(text) {
        let stmt = stmt?;
        let decl = stmt.strip_prefix("mode:").ok_or_else(|| Error::Parse {
            line,
            message: format!("expected `mode: pred(+type, ...)`, got `{stmt}`"),
        })?;
        let raw = parse_raw(decl).map_err(|message| Error::Parse { line, message })?;
        let mut specs = Vec::with_capacity(raw.args.len());
        for arg in &raw.args {
            let (mode, ty) = if let Some(ty) = arg.strip_prefix('+') {
                (ArgMode::Input, ty)
            } else if let Some(ty) = arg.strip_prefix('-') {
                (ArgMode::Output, ty)
            } else {
                return Err(Error::Parse {
                    line,
                    message: format!("argument `{arg}` needs a `+` or `-` mode"),
                });
            };
            if ty.is_empty() || is_variable_name(ty) || !ty.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::Parse {
                    line,
                    message: format!("invalid type name `{ty}`"),
                });
            }
            specs.push(ArgSpec {
                type_tag: ty.into(),
                mode,
            });
        }
        let predicate = Predicate::new(raw.name, specs.iter().map(|s| s.type_tag.clone()));
        schema
            .add(ModeDeclaration {
                predicate,
                arg_specs: specs,
            })
            .map_err(|message| Error::Parse { line, message })?;
    }
    Ok(schema)
}

fn ground_atom_at(schema: &Schema, stmt: &str, line: usize) -> Result<Atom> {
    let atom =
        atom_from_text(stmt, |n| schema.predicate(n).cloned()).map_err(|message| Error::Parse { line, message })?;
    if !atom.is_ground() {
        return Err(Error::Parse {
            line,
            message: format!("fact `{atom}` contains variables"),
        });
    }
    Ok(atom)
}

/// Parses a facts file. Every predicate needs a mode declaration, which
/// supplies argument types; type universes grow from the constants seen.
pub fn parse_facts(text: &str, schema: &Schema) -> Result<KnowledgeBase> {
    let mut kb = KnowledgeBase::new();
    for decl in schema.modes() {
        for ty in decl.predicate.arg_types() {
            kb.declare_type(ty);
        }
    }
    extend_facts(&mut kb, text, schema)?;
    Ok(kb)
}

pub fn extend_facts(kb: &mut KnowledgeBase, text: &str, schema: &Schema) -> Result<()> {
    for (line, stmt) in statements(text) {
        let atom = ground_atom_at(schema, stmt?, line)?;
        kb.insert_at(atom, line)?;
    }
    Ok(())
}

/// Parses ground atoms of `target`, one per line.
pub fn parse_examples(text: &str, schema: &Schema, target: &Arc<Predicate>) -> Result<Vec<Atom>> {
    let mut out = Vec::new();
    for (line, stmt) in statements(text) {
        let atom = ground_atom_at(schema, stmt?, line)?;
        if atom.predicate() != target {
            return Err(Error::Parse {
                line,
                message: format!("`{atom}` is not an instance of target `{}`", target.name()),
            });
        }
        out.push(atom);
    }
    Ok(out)
}
