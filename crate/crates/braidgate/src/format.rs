//! Wire formats.
//!
//! Everything the binary reads or writes goes through here: rationals as
//! `p/q`, cyclotomics as `order;c0,c1,...`, braid words as `1,2,-1` and
//! pure words as `+(1,2);-(2,4)` (both with an optional `strands=K;`
//! prefix), twist parameters as `N=2;n=1;level=4;weights=1,1`, and whole
//! matrices as a `d=K;field=...` header plus one row per line.

use std::fmt;

use braidgate_core::{
    fibonacci_params, ising_params, BraidWord, Cyclotomic, ExactComplex, Matrix, PureBraidWord,
    PureLetter, Rational, TwistParams,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A malformed piece of input text; the message names the offending part.
#[derive(Debug)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error: {}", self.0)
    }
}

impl std::error::Error for ParseError {}

fn bad(msg: impl Into<String>) -> ParseError {
    ParseError(msg.into())
}

/// `p/q` or a bare integer, with an optional sign on `p`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.trim().parse().map_err(|_| bad(format!("bad numerator in {s:?}")))?;
    let q: BigInt = q.trim().parse().map_err(|_| bad(format!("bad denominator in {s:?}")))?;
    if q.is_zero() {
        return Err(bad(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(p, q))
}

/// Decimal rendering of `r`, truncated toward zero with enough digits that
/// the rendering is within `prec / 100` of `r`.
pub fn render_decimal(r: &Rational, prec: &Rational) -> String {
    // smallest k with 10^-k <= prec, plus two guard digits
    let mut digits = 0u32;
    let mut pow = BigInt::from(1);
    while Rational::new(BigInt::from(1), pow.clone()) > *prec {
        pow *= 10;
        digits += 1;
    }
    digits += 2;
    pow *= 100;
    let scaled = (r.abs() * Rational::from_integer(pow.clone())).floor().to_integer();
    let (int, frac) = scaled.div_rem(&pow);
    let sign = if r.is_negative() && !scaled.is_zero() { "-" } else { "" };
    let frac = frac.to_string();
    format!("{sign}{int}.{}{frac}", "0".repeat(digits as usize - frac.len()))
}

/// `N=...;n=...;level=...;weights=w1,...`, or the presets `ising:N` and
/// `fibonacci:N`.
pub fn parse_twist_params(s: &str) -> Result<TwistParams, ParseError> {
    let s = s.trim();
    if let Some(n) = s.strip_prefix("ising:") {
        let n: usize = n.parse().map_err(|_| bad(format!("bad defect count in {s:?}")))?;
        return ising_params(n).map_err(|e| bad(e.to_string()));
    }
    if let Some(n) = s.strip_prefix("fibonacci:") {
        let n: usize = n.parse().map_err(|_| bad(format!("bad defect count in {s:?}")))?;
        return fibonacci_params(n).map_err(|e| bad(e.to_string()));
    }
    let (mut defects, mut probes, mut level, mut weights) = (None, None, None, None);
    for part in s.split(';') {
        let (key, value) =
            part.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {part:?}")))?;
        match key.trim() {
            "N" => defects = Some(value.parse().map_err(|_| bad("bad N"))?),
            "n" => probes = Some(value.parse().map_err(|_| bad("bad n"))?),
            "level" => level = Some(value.parse().map_err(|_| bad("bad level"))?),
            "weights" => {
                let ws: Result<Vec<u64>, _> = value.split(',').map(|w| w.trim().parse()).collect();
                weights = Some(ws.map_err(|_| bad("bad weights"))?);
            }
            other => return Err(bad(format!("unknown twist key {other:?}"))),
        }
    }
    let missing = || bad(format!("twist parameters need N, n, level and weights: {s:?}"));
    TwistParams::new(
        defects.ok_or_else(missing)?,
        probes.ok_or_else(missing)?,
        level.ok_or_else(missing)?,
        weights.ok_or_else(missing)?,
    )
    .map_err(|e| bad(e.to_string()))
}

fn strip_strands<'a>(s: &'a str, strands: usize) -> Result<&'a str, ParseError> {
    match s.strip_prefix("strands=") {
        None => Ok(s),
        Some(rest) => {
            let (k, rest) = rest
                .split_once(';')
                .ok_or_else(|| bad("strands= prefix without a ; separator"))?;
            let k: usize = k.parse().map_err(|_| bad(format!("bad strand count {k:?}")))?;
            if k != strands {
                return Err(bad(format!("word declares {k} strands, context has {strands}")));
            }
            Ok(rest)
        }
    }
}

/// Comma-separated signed Artin letters, e.g. `1,2,-1`; empty for the
/// identity. An optional `strands=K;` prefix must agree with `strands`.
pub fn parse_braid_word(strands: usize, s: &str) -> Result<BraidWord, ParseError> {
    let body = strip_strands(s.trim(), strands)?;
    let mut letters = Vec::new();
    for tok in body.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        letters.push(tok.parse::<i32>().map_err(|_| bad(format!("bad letter {tok:?}")))?);
    }
    BraidWord::new(strands, letters).map_err(|e| bad(e.to_string()))
}

/// Semicolon-separated signed pairs, e.g. `+(1,2);-(2,4)`; empty for the
/// identity. An optional `strands=K;` prefix must agree with `strands`.
pub fn parse_pure_word(strands: usize, s: &str) -> Result<PureBraidWord, ParseError> {
    let body = strip_strands(s.trim(), strands)?;
    let mut letters = Vec::new();
    for tok in body.split(';') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let (sign, rest) = tok.split_at(1);
        let positive = match sign {
            "+" => true,
            "-" => false,
            _ => return Err(bad(format!("pure letter {tok:?} must start with + or -"))),
        };
        let pair = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| bad(format!("pure letter {tok:?} needs (a,b)")))?;
        let (a, b) =
            pair.split_once(',').ok_or_else(|| bad(format!("pure letter {tok:?} needs a,b")))?;
        let a: usize = a.trim().parse().map_err(|_| bad(format!("bad strand {a:?}")))?;
        let b: usize = b.trim().parse().map_err(|_| bad(format!("bad strand {b:?}")))?;
        letters.push(PureLetter { a, b, positive });
    }
    PureBraidWord::new(strands, letters).map_err(|e| bad(e.to_string()))
}

/// `order;c0,c1,...` — the cyclotomic text form. Coefficients beyond the
/// power basis are reduced; missing ones are zero.
pub fn parse_cyclotomic(s: &str) -> Result<Cyclotomic, ParseError> {
    let (order, coeffs) =
        s.split_once(';').ok_or_else(|| bad(format!("cyclotomic {s:?} needs order;coeffs")))?;
    let order: u64 = order.trim().parse().map_err(|_| bad(format!("bad order {order:?}")))?;
    if order == 0 {
        return Err(bad("cyclotomic order must be positive"));
    }
    let mut poly = Vec::new();
    for c in coeffs.split(',') {
        let c = c.trim();
        if c.is_empty() {
            continue;
        }
        poly.push(parse_rational(c)?);
    }
    Ok(Cyclotomic::from_poly(order, poly))
}

/// A parsed matrix file: one of the two field variants.
pub enum ParsedMatrix {
    Cyclo(Matrix<Cyclotomic>),
    Complex(Matrix<ExactComplex>),
}

impl ParsedMatrix {
    pub fn dim(&self) -> usize {
        match self {
            ParsedMatrix::Cyclo(m) => m.rows(),
            ParsedMatrix::Complex(m) => m.rows(),
        }
    }
}

/// One matrix row in the cyclotomic field: entries in the full text form,
/// joined with `;` (each entry contributes its own `order;coeffs` pair of
/// fields, so a row of `k` entries has `2k` fields).
pub fn render_cyclo_row(entries: &[Cyclotomic], order: u64) -> Result<String, ParseError> {
    let mut out = Vec::with_capacity(entries.len());
    for e in entries {
        let e = e.embed_to(order).map_err(|err| bad(err.to_string()))?;
        out.push(e.to_string());
    }
    Ok(out.join(";"))
}

/// Inverse of [`render_cyclo_row`]: `expect` entries, each embedded into
/// `Q(zeta_order)`.
pub fn parse_cyclo_row(line: &str, expect: usize, order: u64) -> Result<Vec<Cyclotomic>, ParseError> {
    let fields: Vec<&str> = line.split(';').collect();
    if fields.len() != 2 * expect {
        return Err(bad(format!(
            "row has {} fields, expected {} entries ({} fields)",
            fields.len(),
            expect,
            2 * expect
        )));
    }
    let mut out = Vec::with_capacity(expect);
    for pair in fields.chunks(2) {
        let entry = parse_cyclotomic(&format!("{};{}", pair[0], pair[1]))?;
        out.push(entry.embed_to(order).map_err(|e| bad(e.to_string()))?);
    }
    Ok(out)
}

/// Least common multiple of all entry orders: the order a whole matrix is
/// serialized in.
pub fn common_order(m: &Matrix<Cyclotomic>) -> u64 {
    m.entries().iter().fold(1u64, |l, e| l.lcm(&e.order()))
}

/// Matrix file: `d=K;field=cyclo:L`, then `K` rows of `;`-joined entries.
pub fn render_matrix(m: &Matrix<Cyclotomic>) -> Result<String, ParseError> {
    if m.rows() != m.cols() {
        return Err(bad(format!("matrix files hold square matrices, got {}x{}", m.rows(), m.cols())));
    }
    let order = common_order(m);
    let mut out = format!("d={};field=cyclo:{}\n", m.rows(), order);
    for r in 0..m.rows() {
        let row: Vec<Cyclotomic> = (0..m.cols()).map(|c| m.get(r, c).clone()).collect();
        out.push_str(&render_cyclo_row(&row, order)?);
        out.push('\n');
    }
    Ok(out)
}

/// Inverse of [`render_matrix`], also accepting `field=complex` with
/// `re,im` rational entries.
pub fn parse_matrix(text: &str) -> Result<ParsedMatrix, ParseError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| bad("empty matrix file"))?;
    let (d, field) = header
        .split_once(';')
        .ok_or_else(|| bad(format!("matrix header {header:?} needs d=K;field=...")))?;
    let d: usize = d
        .strip_prefix("d=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| bad(format!("bad dimension in header {header:?}")))?;
    if d == 0 {
        return Err(bad("matrix dimension must be positive"));
    }
    let field =
        field.strip_prefix("field=").ok_or_else(|| bad(format!("bad field in {header:?}")))?;
    let rows: Vec<&str> = lines.collect();
    if rows.len() != d {
        return Err(bad(format!("expected {d} rows, found {}", rows.len())));
    }
    if let Some(order) = field.strip_prefix("cyclo:") {
        let order: u64 = order.parse().map_err(|_| bad(format!("bad order {order:?}")))?;
        let mut entries = Vec::with_capacity(d * d);
        for row in rows {
            entries.extend(parse_cyclo_row(row, d, order)?);
        }
        let m = Matrix::new(d, d, entries).map_err(|e| bad(e.to_string()))?;
        Ok(ParsedMatrix::Cyclo(m))
    } else if field == "complex" {
        let mut entries = Vec::with_capacity(d * d);
        for row in rows {
            let toks: Vec<&str> = row.split(';').collect();
            if toks.len() != d {
                return Err(bad(format!("row has {} entries, expected {d}", toks.len())));
            }
            for tok in toks {
                let (re, im) = tok
                    .split_once(',')
                    .ok_or_else(|| bad(format!("complex entry {tok:?} needs re,im")))?;
                entries.push(ExactComplex::from_rationals(&parse_rational(re)?, &parse_rational(im)?));
            }
        }
        let m = Matrix::new(d, d, entries).map_err(|e| bad(e.to_string()))?;
        Ok(ParsedMatrix::Complex(m))
    } else {
        Err(bad(format!("unknown field {field:?}; use cyclo:L or complex")))
    }
}

/// `a,b;c,d` strand-pair list for gate-set selection.
pub fn parse_pairs(s: &str) -> Result<Vec<(usize, usize)>, ParseError> {
    let mut out = Vec::new();
    for tok in s.split(';') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let (a, b) =
            tok.split_once(',').ok_or_else(|| bad(format!("pair {tok:?} needs a,b")))?;
        let a = a.trim().parse().map_err(|_| bad(format!("bad strand {a:?}")))?;
        let b = b.trim().parse().map_err(|_| bad(format!("bad strand {b:?}")))?;
        out.push((a, b));
    }
    if out.is_empty() {
        return Err(bad("empty pair list"));
    }
    Ok(out)
}

/// Gate labels from a word file: whitespace-separated tokens.
pub fn parse_labels(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_string).collect()
}
