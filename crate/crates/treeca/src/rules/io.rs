//! Rule file format: JSON with the table keyed by canonical ball strings.
//!
//! Ball text form: the center symbol followed by the parenthesized child
//! descriptors, comma-separated, recursively, e.g. `1(0,0,1)` at radius 1
//! or `1(0(0,1),0(1,1),1(0,0))` at radius 2. Files with missing or
//! duplicate table entries are rejected; entries may be listed in any
//! order and are canonicalized on load.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rules::{codes, Alphabet, CanonicalBall, Limits, Rule, RuleSpace, Symbol};
use crate::topology::TreeParams;

pub(crate) fn ball_code_to_text(k: u32, radius: u32, code: &[u8]) -> String {
    fn emit(k: u32, code: &[u8], pos: &mut usize, depth_left: u32, center: bool, out: &mut String) {
        out.push_str(&code[*pos].to_string());
        *pos += 1;
        if depth_left > 0 {
            let arity = if center { k } else { k - 1 };
            out.push('(');
            for i in 0..arity {
                if i > 0 {
                    out.push(',');
                }
                emit(k, code, pos, depth_left - 1, false, out);
            }
            out.push(')');
        }
    }
    let mut out = String::new();
    let mut pos = 0;
    emit(k, code, &mut pos, radius, true, &mut out);
    debug_assert_eq!(pos, code.len());
    out
}

pub(crate) fn ball_from_text(
    text: &str,
    params: TreeParams,
    alphabet: Alphabet,
    radius: u32,
) -> Result<CanonicalBall> {
    let bad = |msg: String| Error::RuleFile(format!("ball {text:?}: {msg}"));
    let bytes = text.trim().as_bytes();
    let mut pos = 0usize;

    // Parses one node of the given remaining depth and returns its
    // canonical subtree code (children sorted).
    fn node(
        bytes: &[u8],
        pos: &mut usize,
        depth_left: u32,
        arity: u32,
        alphabet: Alphabet,
        bad: &impl Fn(String) -> Error,
    ) -> Result<Vec<u8>> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos == start {
            return Err(bad(format!("expected a symbol at byte {start}")));
        }
        let sym: u32 = std::str::from_utf8(&bytes[start..*pos])
            .unwrap()
            .parse()
            .map_err(|_| bad("symbol overflow".into()))?;
        if sym > u8::MAX as u32 {
            return Err(bad(format!("symbol {sym} out of range")));
        }
        alphabet.check(sym as Symbol)?;
        let mut code = vec![sym as u8];
        if depth_left == 0 {
            return Ok(code);
        }
        if *pos >= bytes.len() || bytes[*pos] != b'(' {
            return Err(bad(format!("expected '(' at byte {}", *pos)));
        }
        *pos += 1;
        let mut kids = Vec::with_capacity(arity as usize);
        for i in 0..arity {
            if i > 0 {
                if *pos >= bytes.len() || bytes[*pos] != b',' {
                    return Err(bad(format!("expected ',' at byte {}", *pos)));
                }
                *pos += 1;
            }
            kids.push(node(bytes, pos, depth_left - 1, arity, alphabet, bad)?);
        }
        if *pos >= bytes.len() || bytes[*pos] != b')' {
            return Err(bad(format!("expected ')' at byte {}", *pos)));
        }
        *pos += 1;
        kids.sort_unstable();
        for kid in kids {
            code.extend_from_slice(&kid);
        }
        Ok(code)
    }

    // center has arity k, inner nodes k-1
    fn center(
        bytes: &[u8],
        pos: &mut usize,
        radius: u32,
        k: u32,
        alphabet: Alphabet,
        bad: &impl Fn(String) -> Error,
    ) -> Result<Vec<u8>> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos == start {
            return Err(bad(format!("expected a symbol at byte {start}")));
        }
        let sym: u32 = std::str::from_utf8(&bytes[start..*pos])
            .unwrap()
            .parse()
            .map_err(|_| bad("symbol overflow".into()))?;
        if sym > u8::MAX as u32 {
            return Err(bad(format!("symbol {sym} out of range")));
        }
        alphabet.check(sym as Symbol)?;
        let mut code = vec![sym as u8];
        if radius == 0 {
            return Ok(code);
        }
        if *pos >= bytes.len() || bytes[*pos] != b'(' {
            return Err(bad(format!("expected '(' at byte {}", *pos)));
        }
        *pos += 1;
        let mut kids = Vec::with_capacity(k as usize);
        for i in 0..k {
            if i > 0 {
                if *pos >= bytes.len() || bytes[*pos] != b',' {
                    return Err(bad(format!("expected ',' at byte {}", *pos)));
                }
                *pos += 1;
            }
            kids.push(node(bytes, pos, radius - 1, k - 1, alphabet, bad)?);
        }
        if *pos >= bytes.len() || bytes[*pos] != b')' {
            return Err(bad(format!("expected ')' at byte {}", *pos)));
        }
        *pos += 1;
        kids.sort_unstable();
        for kid in kids {
            code.extend_from_slice(&kid);
        }
        Ok(code)
    }

    let code = center(bytes, &mut pos, radius, params.k(), alphabet, &bad)?;
    if pos != bytes.len() {
        return Err(bad(format!("trailing input at byte {pos}")));
    }
    debug_assert_eq!(code.len(), codes::ball_code_len(params.k(), radius));
    Ok(CanonicalBall::from_code(params, radius, code))
}

#[derive(Serialize, Deserialize)]
struct RuleFileRepr {
    k: u32,
    alphabet_size: u8,
    radius: u32,
    table: Vec<RuleEntryRepr>,
}

#[derive(Serialize, Deserialize)]
struct RuleEntryRepr {
    ball: String,
    out: Symbol,
}

/// Serializes a rule, table entries in enumeration order.
pub fn rule_to_json(rule: &Rule) -> String {
    let repr = RuleFileRepr {
        k: rule.params().k(),
        alphabet_size: rule.alphabet().size(),
        radius: rule.radius(),
        table: rule
            .table()
            .map(|(ball, out)| RuleEntryRepr {
                ball: ball.to_text(),
                out,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&repr).expect("plain data serializes")
}

/// Loads a rule file, rejecting partial or duplicated tables.
pub fn rule_from_json(text: &str, limits: &Limits) -> Result<Rule> {
    let repr: RuleFileRepr = serde_json::from_str(text)?;
    let params = TreeParams::new(repr.k)?;
    let alphabet = Alphabet::new(repr.alphabet_size)?;
    let space = RuleSpace::new(params, alphabet, repr.radius, limits)?;
    let mut outputs: Vec<Option<Symbol>> = vec![None; space.ball_count()];
    for entry in &repr.table {
        let ball = ball_from_text(&entry.ball, params, alphabet, repr.radius)?;
        let idx = space
            .ball_index(&ball)
            .expect("parsed ball belongs to the family");
        if outputs[idx].is_some() {
            return Err(Error::RuleFile(format!(
                "duplicate table entry for ball {}",
                ball.to_text()
            )));
        }
        alphabet.check(entry.out)?;
        outputs[idx] = Some(entry.out);
    }
    let mut table = Vec::with_capacity(outputs.len());
    for (i, slot) in outputs.into_iter().enumerate() {
        match slot {
            Some(s) => table.push(s),
            None => {
                return Err(Error::RuleFile(format!(
                    "missing table entry for ball {}",
                    space.balls()[i].to_text()
                )))
            }
        }
    }
    Rule::from_outputs(space, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn space(k: u32, n: u8, r: u32) -> Arc<RuleSpace> {
        RuleSpace::new(
            TreeParams::new(k).unwrap(),
            Alphabet::new(n).unwrap(),
            r,
            &Limits::default(),
        )
        .unwrap()
    }

    #[test]
    fn ball_text_roundtrip() {
        let s = space(3, 2, 2);
        for ball in s.balls() {
            let text = ball.to_text();
            let back = CanonicalBall::parse(
                &text,
                TreeParams::new(3).unwrap(),
                Alphabet::new(2).unwrap(),
                2,
            )
            .unwrap();
            assert_eq!(&back, ball, "{text}");
        }
    }

    #[test]
    fn ball_text_canonicalizes_unordered_input() {
        let params = TreeParams::new(3).unwrap();
        let alpha = Alphabet::new(2).unwrap();
        let a = CanonicalBall::parse("1(1,0,0)", params, alpha, 1).unwrap();
        let b = CanonicalBall::parse("1(0,0,1)", params, alpha, 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_text(), "1(0,0,1)");
    }

    #[test]
    fn ball_text_rejects_malformed() {
        let params = TreeParams::new(3).unwrap();
        let alpha = Alphabet::new(2).unwrap();
        for bad in ["", "1(0,0)", "1(0,0,1", "1(0,0,1))", "2(0,0,1)", "x", "1(0,0,1,0)"] {
            assert!(
                CanonicalBall::parse(bad, params, alpha, 1).is_err(),
                "{bad:?} should be rejected"
            );
        }
    }

    #[test]
    fn rule_json_roundtrip() {
        let s = space(3, 2, 1);
        let or = Rule::or_rule(Arc::clone(&s)).unwrap();
        let text = rule_to_json(&or);
        let back = rule_from_json(&text, &Limits::default()).unwrap();
        assert_eq!(back, or);
    }

    #[test]
    fn rule_json_rejects_incomplete_and_duplicate_tables() {
        let s = space(3, 2, 1);
        let or = Rule::or_rule(Arc::clone(&s)).unwrap();
        let text = rule_to_json(&or);
        let mut repr: serde_json::Value = serde_json::from_str(&text).unwrap();

        let table = repr["table"].as_array().unwrap().clone();
        repr["table"] = serde_json::Value::Array(table[..table.len() - 1].to_vec());
        let missing = serde_json::to_string(&repr).unwrap();
        assert!(matches!(
            rule_from_json(&missing, &Limits::default()),
            Err(Error::RuleFile(_))
        ));

        let mut dup = table.clone();
        dup[0] = dup[1].clone();
        repr["table"] = serde_json::Value::Array(dup);
        let duplicated = serde_json::to_string(&repr).unwrap();
        assert!(matches!(
            rule_from_json(&duplicated, &Limits::default()),
            Err(Error::RuleFile(_))
        ));
    }
}
