//! OEIS b-files: one `index value` pair per line, `#` comments.

use num_bigint::BigUint;

/// Renders `values` with offset 0, LF line endings, no trailing blanks.
pub fn format(values: &[BigUint]) -> String {
    let mut s = String::new();
    for (i, v) in values.iter().enumerate() {
        s.push_str(&format!("{i} {v}\n"));
    }
    s
}

pub fn parse(text: &str) -> Result<Vec<(usize, BigUint)>, String> {
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(i), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(format!("line {}: expected `index value`", lineno + 1));
        };
        let i: usize = i
            .parse()
            .map_err(|_| format!("line {}: bad index {i:?}", lineno + 1))?;
        let v: BigUint = v
            .parse()
            .map_err(|_| format!("line {}: bad value {v:?}", lineno + 1))?;
        entries.push((i, v));
    }
    Ok(entries)
}

/// Checks every file entry whose index was computed. Returns how many were
/// compared, or a description of the first difference.
pub fn compare(values: &[BigUint], entries: &[(usize, BigUint)]) -> Result<usize, String> {
    let mut agreed = 0;
    for (i, v) in entries {
        let Some(ours) = values.get(*i) else { continue };
        if ours != v {
            return Err(format!(
                "first difference at n = {i}: computed {ours}, b-file has {v}"
            ));
        }
        agreed += 1;
    }
    if agreed == 0 {
        return Err("b-file shares no indices with the computed range".into());
    }
    Ok(agreed)
}
