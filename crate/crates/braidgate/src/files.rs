//! The `.bg` family file: a verified representation at rest.
//!
//! Layout, line by line:
//!
//! ```text
//! braidgate family v1
//! params=N=3;n=1;level=5;weights=1,1,1
//! strands=3
//! kind=pure
//! fiber=2
//! order=10
//! twist=1,2=2/5            (one line per strand pair, (a,b) order)
//! gen=b1_2                 (one block per generator, (a,b) order)
//! <fiber rows in the matrix row format, embedded into Q(zeta_order)>
//! relators=2
//! digest=<sha256 of every preceding byte, lowercase hex>
//! ```
//!
//! Reading re-runs the whole relator verification instead of trusting the
//! file: the digest catches accidental or hostile edits, and the rebuilt
//! certificate catches a file that was consistently rewritten but no longer
//! encodes a representation.

use std::collections::BTreeMap;
use std::fmt;

use braidgate_core::{
    twist_table, CohomologyFamily, Cyclotomic, Error as CoreError, GenKey, LocalRank1System,
    Matrix, MonodromyRep, RepKind,
};
use sha2::{Digest, Sha256};

use crate::format::{self, ParseError};

/// Why a family file was rejected. `DigestMismatch` and
/// `CertificateInvalid` are certificate failures (exit code 3 at the CLI);
/// the rest are domain errors.
#[derive(Debug)]
pub enum FamilyFileError {
    /// Structure or syntax problems: missing sections, bad counts, stray keys.
    Malformed(String),
    /// The stored digest does not match the stored bytes.
    DigestMismatch { expected: String, found: String },
    /// The stored matrices fail relator re-verification.
    CertificateInvalid(String),
    /// The stored data is well-formed but impossible (wrong fiber dimension,
    /// singular generator, parameter violations).
    Domain(String),
}

impl fmt::Display for FamilyFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyFileError::Malformed(m) => write!(f, "malformed family file: {m}"),
            FamilyFileError::DigestMismatch { expected, found } => {
                write!(f, "family digest mismatch: file says {expected}, content hashes to {found}")
            }
            FamilyFileError::CertificateInvalid(m) => {
                write!(f, "family certificate invalid: {m}")
            }
            FamilyFileError::Domain(m) => write!(f, "bad family data: {m}"),
        }
    }
}

impl std::error::Error for FamilyFileError {}

impl FamilyFileError {
    /// True for the variants that mean "the certificate does not hold",
    /// as opposed to unreadable input.
    pub fn is_certificate_failure(&self) -> bool {
        matches!(
            self,
            FamilyFileError::DigestMismatch { .. } | FamilyFileError::CertificateInvalid(_)
        )
    }
}

impl From<ParseError> for FamilyFileError {
    fn from(e: ParseError) -> FamilyFileError {
        FamilyFileError::Malformed(e.to_string())
    }
}

fn core_error(e: CoreError) -> FamilyFileError {
    match e {
        CoreError::RelationFailure(m) => FamilyFileError::CertificateInvalid(m),
        other => FamilyFileError::Domain(other.to_string()),
    }
}

const MAGIC: &str = "braidgate family v1";

fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

/// Serializes a family, digest line included.
pub fn render_family(f: &CohomologyFamily) -> Result<String, FamilyFileError> {
    let action = f.action();
    let order = action
        .generators()
        .fold(1u64, |l, (_, m)| num_integer::lcm(l, format::common_order(m)));
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    out.push_str(&format!("params={}\n", f.params()));
    out.push_str(&format!("strands={}\n", f.strands()));
    out.push_str("kind=pure\n");
    out.push_str(&format!("fiber={}\n", f.fiber_dim()));
    out.push_str(&format!("order={order}\n"));
    for (&(a, b), q) in twist_table(f.params()).entries() {
        out.push_str(&format!("twist={a},{b}={q}\n"));
    }
    for (key, m) in action.generators() {
        out.push_str(&format!("gen={key}\n"));
        for r in 0..m.rows() {
            let row: Vec<_> = (0..m.cols()).map(|c| m.get(r, c).clone()).collect();
            out.push_str(&format::render_cyclo_row(&row, order)?);
            out.push('\n');
        }
    }
    out.push_str(&format!("relators={}\n", f.certificate().checks().len()));
    let digest = sha256_hex(out.as_bytes());
    out.push_str(&format!("digest={digest}\n"));
    Ok(out)
}

fn expect_kv<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str, FamilyFileError> {
    let line = line.ok_or_else(|| {
        FamilyFileError::Malformed(format!("file ends where {key}= was expected"))
    })?;
    line.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| FamilyFileError::Malformed(format!("expected {key}=..., got {line:?}")))
}

/// Parses and re-verifies a family file: digest first, then structure, then
/// the full relator certificate on the stored matrices.
pub fn read_family(text: &str) -> Result<CohomologyFamily, FamilyFileError> {
    let body_end = text
        .rfind("\ndigest=")
        .ok_or_else(|| FamilyFileError::Malformed("missing digest line".into()))?;
    let body = &text[..body_end + 1];
    let stored = text[body_end + 1..]
        .trim_end()
        .strip_prefix("digest=")
        .expect("rfind anchored the digest line")
        .to_string();
    let found = sha256_hex(body.as_bytes());
    if stored != found {
        return Err(FamilyFileError::DigestMismatch { expected: stored, found });
    }

    let mut lines = body.lines();
    match lines.next() {
        Some(MAGIC) => {}
        other => {
            return Err(FamilyFileError::Malformed(format!(
                "bad magic line {other:?}, expected {MAGIC:?}"
            )))
        }
    }
    let params = format::parse_twist_params(expect_kv(lines.next(), "params")?)?;
    let strands: usize = expect_kv(lines.next(), "strands")?
        .parse()
        .map_err(|_| FamilyFileError::Malformed("bad strands count".into()))?;
    if strands != params.defects() {
        return Err(FamilyFileError::Malformed(format!(
            "strands={strands} disagrees with params N={}",
            params.defects()
        )));
    }
    let kind = expect_kv(lines.next(), "kind")?;
    if kind != "pure" {
        return Err(FamilyFileError::Malformed(format!("unsupported kind {kind:?}")));
    }
    let fiber: usize = expect_kv(lines.next(), "fiber")?
        .parse()
        .map_err(|_| FamilyFileError::Malformed("bad fiber dimension".into()))?;
    let order: u64 = expect_kv(lines.next(), "order")?
        .parse()
        .map_err(|_| FamilyFileError::Malformed("bad order".into()))?;

    // The twist lines must reproduce the table the parameters induce.
    let table = twist_table(&params);
    let mut rest = lines.peekable();
    for (&(a, b), q) in table.entries() {
        let line = expect_kv(rest.next(), "twist")?;
        let want = format!("{a},{b}={q}");
        if line != want {
            return Err(FamilyFileError::Malformed(format!(
                "twist line {line:?} disagrees with parameters ({want})"
            )));
        }
    }

    let mut images: BTreeMap<GenKey, Matrix<Cyclotomic>> = BTreeMap::new();
    while rest.peek().map_or(false, |l| l.starts_with("gen=")) {
        let label = expect_kv(rest.next(), "gen")?;
        let pair = label
            .strip_prefix('b')
            .and_then(|r| r.split_once('_'))
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
            .ok_or_else(|| {
                FamilyFileError::Malformed(format!("generator label {label:?} is not bA_B"))
            })?;
        let mut entries = Vec::with_capacity(fiber * fiber);
        for _ in 0..fiber {
            let row = rest.next().ok_or_else(|| {
                FamilyFileError::Malformed(format!("{label}: file ends inside the matrix"))
            })?;
            entries.extend(format::parse_cyclo_row(row, fiber, order)?);
        }
        let m = Matrix::new(fiber, fiber, entries)
            .map_err(|e| FamilyFileError::Malformed(e.to_string()))?;
        if images.insert(GenKey::Pure(pair.0, pair.1), m).is_some() {
            return Err(FamilyFileError::Malformed(format!("duplicate generator {label}")));
        }
    }
    let expected_gens = strands * (strands - 1) / 2;
    if images.len() != expected_gens {
        return Err(FamilyFileError::Malformed(format!(
            "found {} generators, a {strands}-strand family needs {expected_gens}",
            images.len()
        )));
    }
    let relators: usize = expect_kv(rest.next(), "relators")?
        .parse()
        .map_err(|_| FamilyFileError::Malformed("bad relator count".into()))?;
    if let Some(extra) = rest.next() {
        return Err(FamilyFileError::Malformed(format!("trailing content {extra:?}")));
    }

    let system = LocalRank1System::from_params(&params);
    let rep = MonodromyRep::from_images(RepKind::Pure, strands, system, images)
        .map_err(core_error)?;
    let family = CohomologyFamily::from_parts(params, rep).map_err(core_error)?;
    if family.certificate().checks().len() != relators {
        return Err(FamilyFileError::Malformed(format!(
            "relators={relators} disagrees with the {} checks the presentation needs",
            family.certificate().checks().len()
        )));
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use braidgate_core::{fibonacci_params, ising_params, transport::family_from_params};

    #[test]
    fn families_round_trip() {
        for params in [ising_params(3).unwrap(), fibonacci_params(3).unwrap()] {
            let family = family_from_params(&params).unwrap();
            let text = render_family(&family).unwrap();
            let back = read_family(&text).unwrap();
            assert_eq!(back.params(), family.params());
            assert_eq!(back.strands(), family.strands());
            assert_eq!(back.fiber_dim(), family.fiber_dim());
            for (key, m) in family.action().generators() {
                assert_eq!(back.action().image(key).unwrap(), m, "{key}");
            }
            assert!(back.certificate().all_ok());
        }
    }

    #[test]
    fn byte_tampering_breaks_the_digest() {
        let family = family_from_params(&ising_params(2).unwrap()).unwrap();
        let text = render_family(&family).unwrap();
        // flip one digit inside a matrix row
        let pos = text.find("gen=b1_2").unwrap() + 10;
        let mut bytes = text.into_bytes();
        bytes[pos] = if bytes[pos] == b'1' { b'2' } else { b'1' };
        let tampered = String::from_utf8(bytes).unwrap();
        match read_family(&tampered) {
            Err(e @ FamilyFileError::DigestMismatch { .. }) => {
                assert!(e.is_certificate_failure());
            }
            other => panic!("expected a digest mismatch, got {other:?}"),
        }
    }

    #[test]
    fn consistent_rewrites_still_fail_relator_checks() {
        // Replace one generator image with a wrong but invertible matrix and
        // re-digest, so only the semantic check can object.
        let family = family_from_params(&fibonacci_params(3).unwrap()).unwrap();
        let text = render_family(&family).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        let gen_at = lines.iter().position(|l| *l == "gen=b1_2").unwrap();
        let mut doctored: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
        // a diagonal matrix that is certainly not the b1_2 image
        doctored[gen_at + 1] = "10;2,0,0,0;10;0,0,0,0".to_string();
        doctored[gen_at + 2] = "10;0,0,0,0;10;1,0,0,0".to_string();
        let body_end = doctored.iter().position(|l| l.starts_with("digest=")).unwrap();
        let body: String = doctored[..body_end].iter().map(|l| format!("{l}\n")).collect();
        let redigested = format!("{body}digest={}\n", sha256_hex(body.as_bytes()));
        match read_family(&redigested) {
            Err(e @ FamilyFileError::CertificateInvalid(_)) => {
                assert!(e.is_certificate_failure());
            }
            other => panic!("expected a certificate failure, got {other:?}"),
        }
    }

    #[test]
    fn structural_damage_is_a_domain_error() {
        let family = family_from_params(&ising_params(2).unwrap()).unwrap();
        let text = render_family(&family).unwrap();
        assert!(matches!(read_family("not a family"), Err(FamilyFileError::Malformed(_))));
        let missing_magic = text.replacen(MAGIC, "braidgate family v0", 1);
        // the digest no longer matches once the magic changes
        assert!(read_family(&missing_magic).is_err());
        // well-digested but truncated: drop the relators line
        let lines: Vec<&str> = text.lines().collect();
        let body: String = lines[..lines.len() - 2].iter().map(|l| format!("{l}\n")).collect();
        let short = format!("{body}digest={}\n", sha256_hex(body.as_bytes()));
        match read_family(&short) {
            Err(FamilyFileError::Malformed(_)) => {}
            other => panic!("expected malformed, got {other:?}"),
        }
    }
}
