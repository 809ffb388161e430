//! Line-oriented cover files.
//!
//! One element per line: `label<TAB>member[:weight](,member[:weight])*`.
//! Weights default to 1 and may be written as integers, decimals
//! (`0.25`, `1e-3`) or ratios (`1/3`). Lines starting with `#` are comments.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use num::{One, Zero};

use crate::cover::{Cover, Fraction, Interner, Measure, MemberId};
use crate::error::{Error, Result};

/// Parse an exact rational from `3`, `-0.25`, `1.5e-2` or `2/7`.
pub fn parse_fraction(text: &str) -> Option<Fraction> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: i128 = n.trim().parse().ok()?;
        let d: i128 = d.trim().parse().ok()?;
        return (d != 0).then(|| Fraction::new(n, d));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: i128 = digits.parse().ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    if scale.unsigned_abs() > 30 {
        return None;
    }
    let pow = 10i128.checked_pow(scale.unsigned_abs())?;
    Some(if scale >= 0 {
        Fraction::from_integer(numer.checked_mul(pow)?)
    } else {
        Fraction::new(numer, pow)
    })
}

/// Render a weight so that [`parse_fraction`] reads it back exactly.
pub fn format_fraction(f: &Fraction) -> String {
    if f.is_integer() {
        return f.numer().to_string();
    }
    // terminating decimal when the denominator is 2^a 5^b
    let mut d = *f.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    let places = twos.max(fives);
    if d == 1 && places <= 30 {
        if let Some(scaled) = 10i128
            .checked_pow(places)
            .and_then(|p| f.numer().checked_mul(p / f.denom()))
        {
            let sign = if scaled < 0 { "-" } else { "" };
            let digits = format!("{:0>width$}", scaled.unsigned_abs(), width = places as usize + 1);
            let (int_part, frac_part) = digits.split_at(digits.len() - places as usize);
            return format!("{sign}{int_part}.{frac_part}");
        }
    }
    format!("{}/{}", f.numer(), f.denom())
}

/// Read a cover, interning member names into `interner` so several files
/// can share one id space.
pub fn read_cover<R: BufRead>(reader: R, interner: &mut Interner) -> Result<Cover> {
    let mut elements: Vec<(String, Vec<MemberId>)> = Vec::new();
    let mut weights: HashMap<MemberId, Fraction> = HashMap::new();
    let mut any_weight = false;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        let (label, rest) = trimmed
            .split_once('\t')
            .ok_or_else(|| Error::parse(line_no, "expected `label<TAB>members`"))?;
        let label = label.trim();
        if label.is_empty() {
            return Err(Error::parse(line_no, "empty label"));
        }
        let mut members = Vec::new();
        for token in rest.split(',') {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            let (name, weight) = match token.rsplit_once(':') {
                Some((name, w)) => {
                    let w = parse_fraction(w)
                        .ok_or_else(|| Error::parse(line_no, format!("bad weight `{w}`")))?;
                    (name.trim(), Some(w))
                }
                None => (token, None),
            };
            if name.is_empty() {
                return Err(Error::parse(line_no, "empty member name"));
            }
            let id = interner.intern(name);
            if let Some(w) = weight {
                if w <= Fraction::zero() {
                    return Err(Error::NonPositiveWeight {
                        member: name.to_owned(),
                        weight: format_fraction(&w),
                    });
                }
                any_weight = true;
                match weights.get(&id) {
                    Some(existing) if *existing != w => {
                        return Err(Error::ConflictingWeight(name.to_owned()));
                    }
                    _ => {
                        weights.insert(id, w);
                    }
                }
            }
            members.push(id);
        }
        elements.push((label.to_owned(), members));
    }
    let measure = if any_weight {
        weights.retain(|_, w| !w.is_one());
        Measure::weighted(weights)?
    } else {
        Measure::Counting
    };
    Ok(Cover::new(measure, elements)?.with_member_names(interner.names()))
}

pub fn read_cover_str(text: &str, interner: &mut Interner) -> Result<Cover> {
    read_cover(text.as_bytes(), interner)
}

pub fn write_cover<W: Write>(cover: &Cover, mut out: W) -> Result<()> {
    for element in cover.elements() {
        let members: Vec<String> = element
            .members()
            .iter()
            .map(|&id| {
                let name = cover.member_name(id);
                match cover.measure() {
                    Measure::Weighted(_) => {
                        format!("{name}:{}", format_fraction(&cover.measure().weight(id)))
                    }
                    Measure::Counting => name,
                }
            })
            .collect();
        writeln!(out, "{}\t{}", element.label(), members.join(","))?;
    }
    Ok(())
}

pub fn cover_to_string(cover: &Cover) -> String {
    let mut buf = Vec::new();
    write_cover(cover, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("cover text is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_counting_cover() {
        let mut interner = Interner::new();
        let cover = read_cover_str("# comment\na\tx,y\n\nb\ty,z\n", &mut interner).unwrap();
        assert_eq!(cover.len(), 2);
        assert!(cover.measure().is_counting());
        assert_eq!(cover.element(1).label(), "b");
        assert_eq!(cover.universe().len(), 3);
    }

    #[test]
    fn parses_weights() {
        let mut interner = Interner::new();
        let cover = read_cover_str("a\t1:0.5,2:1.5\n", &mut interner).unwrap();
        assert_eq!(cover.element(0).measure(), Fraction::from_integer(2));
    }

    #[test]
    fn conflicting_weights_rejected() {
        let mut interner = Interner::new();
        let err = read_cover_str("a\t1:0.5\nb\t1:2\n", &mut interner).unwrap_err();
        assert!(matches!(err, Error::ConflictingWeight(_)));
    }

    #[test]
    fn missing_tab_reports_line() {
        let mut interner = Interner::new();
        let err = read_cover_str("a\t1\nbroken line\n", &mut interner).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn fraction_forms() {
        assert_eq!(parse_fraction("3"), Some(Fraction::from_integer(3)));
        assert_eq!(parse_fraction("0.25"), Some(Fraction::new(1, 4)));
        assert_eq!(parse_fraction("1.5e-2"), Some(Fraction::new(3, 200)));
        assert_eq!(parse_fraction("2/7"), Some(Fraction::new(2, 7)));
        assert_eq!(parse_fraction(".5"), Some(Fraction::new(1, 2)));
        assert_eq!(parse_fraction("x"), None);
        assert_eq!(parse_fraction("1/0"), None);
    }

    proptest! {
        #[test]
        fn fraction_text_round_trips(n in -100_000i128..100_000, d in 1i128..5000) {
            let f = Fraction::new(n, d);
            prop_assert_eq!(parse_fraction(&format_fraction(&f)), Some(f));
        }

        #[test]
        fn cover_text_round_trips(
            sets in proptest::collection::vec(proptest::collection::btree_set(0u32..30, 1..8), 1..6),
            weights in proptest::collection::vec(1i128..9, 30),
            weighted in any::<bool>(),
        ) {
            let text: String = sets.iter().enumerate().map(|(i, s)| {
                let members: Vec<String> = s.iter().map(|m| if weighted {
                    format!("m{m}:{}/4", weights[*m as usize])
                } else {
                    format!("m{m}")
                }).collect();
                format!("e{i}\t{}\n", members.join(","))
            }).collect();
            let cover = read_cover_str(&text, &mut Interner::new()).unwrap();
            let again = read_cover_str(&cover_to_string(&cover), &mut Interner::new()).unwrap();
            prop_assert_eq!(cover_to_string(&cover), cover_to_string(&again));
            for (a, b) in cover.elements().iter().zip(again.elements()) {
                prop_assert_eq!(a.label(), b.label());
                prop_assert_eq!(a.measure(), b.measure());
            }
        }
    }
}
