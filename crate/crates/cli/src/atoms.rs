//! Parsing of atom-list specs like `(-2,0.2),(0.5,0.8)`.

/// Parse a comma-separated list of `(value,probability)` pairs.
pub fn parse_atoms(text: &str) -> Result<Vec<(f64, f64)>, String> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut atoms = Vec::new();
    let mut rest = cleaned.as_str();
    while !rest.is_empty() {
        let Some(stripped) = rest.strip_prefix('(') else {
            return Err(format!("expected '(' at '{rest}'"));
        };
        let Some(close) = stripped.find(')') else {
            return Err(format!("missing ')' in '{text}'"));
        };
        let body = &stripped[..close];
        let (v, p) = body
            .split_once(',')
            .ok_or_else(|| format!("expected 'value,probability' in '({body})'"))?;
        let value: f64 = v.parse().map_err(|_| format!("bad value '{v}'"))?;
        let prob: f64 = p.parse().map_err(|_| format!("bad probability '{p}'"))?;
        atoms.push((value, prob));
        rest = &stripped[close + 1..];
        rest = rest.strip_prefix(',').unwrap_or(rest);
    }
    if atoms.is_empty() {
        return Err("no atoms given".into());
    }
    Ok(atoms)
}
